import init, { evolve_scalar, impulse_square_curves, dispersion_curve, mode_spectrum } from "./pkg/hca_demo.js";

const $ = (id) => document.getElementById(id);

function plot(canvas, series, opts = {}) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 30;
  ctx.clearRect(0, 0, w, h);
  const xs = series.flatMap((s) => s.x), ys = series.flatMap((s) => s.y).filter(Number.isFinite);
  const [x0, x1] = opts.xRange ?? [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = opts.yRange ?? [Math.min(...ys), Math.max(...ys)];
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const px = (x) => pad + (x - x0) / (x1 - x0) * (w - 2 * pad);
  const py = (y) => h - pad - (y - y0) / (y1 - y0) * (h - 2 * pad);
  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  ctx.moveTo(pad, py(0)); ctx.lineTo(w - pad, py(0));
  ctx.stroke();
  ctx.fillStyle = "#777";
  ctx.fillText(x0.toFixed(2), pad, h - 10);
  ctx.fillText(x1.toFixed(2), w - pad - 30, h - 10);
  ctx.fillText(y1.toPrecision(3), 2, pad);
  ctx.fillText(y0.toPrecision(3), 2, h - pad);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.x.forEach((x, k) => {
      const y = s.y[k];
      if (!Number.isFinite(y)) return;
      k === 0 ? ctx.moveTo(px(x), py(y)) : ctx.lineTo(px(x), py(y));
      if (s.dots) ctx.fillRect(px(x) - 1.5, py(y) - 1.5, 3, 3);
    });
    ctx.stroke();
  }
  for (const m of opts.markers ?? []) {
    ctx.strokeStyle = m.color;
    ctx.beginPath();
    ctx.moveTo(px(m.x), pad); ctx.lineTo(px(m.x), h - pad);
    ctx.stroke();
  }
}

function columns(flat, width) {
  const cols = Array.from({ length: width }, () => []);
  for (let k = 0; k < flat.length; k++) cols[k % width].push(flat[k]);
  return cols;
}

function drawEvolve() {
  const v = (id) => parseInt($(id).value, 10) || 0;
  const steps = Math.min(Math.max(v("steps"), 1), 2000);
  const [x, p, , res] = columns(evolve_scalar(v("h"), v("x0"), v("p0"), v("x1"), v("p1"), steps), 4);
  const n = x.map((_, k) => k);
  plot($("evolve"), [
    { x: n, y: x, color: "#1565c0", dots: true },
    { x: n, y: p, color: "#c62828", dots: true },
  ]);
  const worst = Math.max(...res.map(Math.abs));
  $("evolve-note").textContent = `largest constraint residual: ${worst}`;
}

function drawSquare() {
  const r = parseFloat($("range").value);
  const [t, rec, interp, closed] = columns(impulse_square_curves(400, -r, r, 401), 4);
  plot($("square"), [
    { x: t, y: rec, color: "#555" },
    { x: t, y: interp, color: "#1565c0" },
    { x: t, y: closed, color: "#c62828" },
  ]);
  const mid = t.findIndex((x) => Math.abs(x - 0.5) < 1e-9);
  $("square-note").textContent = mid >= 0 ? `gap at t = 1/2: ${Math.abs(interp[mid] - closed[mid]).toFixed(6)}` : "";
}

function drawSpectrum() {
  const eps = parseFloat($("eps").value);
  $("eps-value").textContent = eps.toFixed(2);
  const out = mode_spectrum(eps, 4096, $("seeded").checked);
  const k = out[0];
  const peaks = Array.from(out.slice(1, 1 + k));
  const [omega, mag] = columns(out.slice(1 + k), 2);
  const [epsGrid, energy, doubled] = curve;
  const at = epsGrid.reduce((best, x, i) => (Math.abs(x - eps) < Math.abs(epsGrid[best] - eps) ? i : best), 0);
  const e = energy[at], doubler = doubled[at];
  plot($("curve"), [
    { x: epsGrid, y: energy, color: "#1565c0" },
    { x: epsGrid, y: doubled, color: "#c62828" },
  ], { markers: [{ x: eps, color: "#999" }] });
  plot($("spectrum"), [{ x: omega, y: mag, color: "#1565c0" }], {
    xRange: [-Math.PI, Math.PI],
    markers: [
      { x: Math.PI / 2, color: "#bbb" }, { x: -Math.PI / 2, color: "#bbb" },
      ...peaks.map((x) => ({ x, color: "#c62828" })),
    ],
  });
  $("peaks").textContent = `peaks: ${peaks.map((p) => p.toFixed(4)).join(", ")}; E = ${e.toFixed(4)}, pi - E = ${doubler.toFixed(4)}; grey lines at +-pi/2`;
}

function guard(f) {
  return () => {
    try { f(); $("error").textContent = ""; } catch (err) { $("error").textContent = String(err); }
  };
}

await init();
const curve = columns(dispersion_curve(401), 3);
for (const id of ["h", "x0", "p0", "x1", "p1", "steps"]) $(id).addEventListener("input", guard(drawEvolve));
$("range").addEventListener("input", guard(drawSquare));
$("eps").addEventListener("input", guard(drawSpectrum));
$("seeded").addEventListener("change", guard(drawSpectrum));
guard(drawEvolve)(); guard(drawSquare)(); guard(drawSpectrum)();
