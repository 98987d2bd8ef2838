/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_groundstate_free: (a: number, b: number) => void;
export const groundState: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const groundstate_action: (a: number) => number;
export const groundstate_converged: (a: number) => number;
export const groundstate_density: (a: number) => [number, number];
export const groundstate_lineAction: (a: number) => number;
export const groundstate_nx: (a: number) => number;
export const groundstate_ny: (a: number) => number;
export const groundstate_yDependence: (a: number) => number;
export const growthCurve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const lPlusSpectrum: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const omegaP: (a: number) => [number, number, number];
export const solitonProfile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
