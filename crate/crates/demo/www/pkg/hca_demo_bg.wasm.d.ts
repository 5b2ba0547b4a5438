/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const dispersion_curve: (a: number) => [number, number, number, number];
export const evolve_scalar: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const impulse_square_curves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const mode_spectrum: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
