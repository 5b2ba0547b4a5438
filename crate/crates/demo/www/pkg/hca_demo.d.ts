/* tslint:disable */
/* eslint-disable */

/**
 * `[epsilon, E, pi - E]` on `points` values of `epsilon` in `[-2, 2]`, `l = 1`.
 */
export function dispersion_curve(points: number): Float64Array;

/**
 * Scalar automaton `psi[n+1] = psi[n-1] - i h psi[n]`.
 *
 * Returns `[x_n, p_n, H_n, constraint residual]` per step, `steps + 2`
 * rows; the residual is 0 at the two endpoints where it is undefined.
 */
export function evolve_scalar(h: number, x0: number, p0: number, x1: number, p1: number, steps: number): Float64Array;

/**
 * Squared impulse at `l = 1` on `[t_min, t_max]`.
 *
 * Returns `[t, reconstruction, squared-sample interpolant, closed form]` per
 * point. The two squared forms agree on grid points only.
 */
export function impulse_square_curves(radius: number, t_min: number, t_max: number, points: number): Float64Array;

/**
 * Spectrum of one eigenmode with eigenvalue `epsilon` over `steps` steps.
 *
 * With `integer_seeded` the mode starts from `(1, 0)`, which excites both
 * branches; otherwise it starts on the principal branch. Returns the peak
 * count `k`, then `k` peak frequencies, then `[omega, magnitude]` pairs.
 */
export function mode_spectrum(epsilon: number, steps: number, integer_seeded: boolean): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly dispersion_curve: (a: number) => [number, number, number, number];
    readonly evolve_scalar: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly impulse_square_curves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly mode_spectrum: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
