/* tslint:disable */
/* eslint-disable */

export class GroundState {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly action: number;
    readonly converged: boolean;
    /**
     * `|q|²`, x-major: entry `ix * ny + iy`.
     */
    readonly density: Float64Array;
    /**
     * `2π m_line(ω)`, the action of the line soliton on the cylinder.
     */
    readonly lineAction: number;
    readonly nx: number;
    readonly ny: number;
    readonly yDependence: number;
}

export function groundState(p: number, omega: number, half_width: number, nx: number, ny: number): GroundState;

/**
 * `[a_0, λ(a_0), a_1, λ(a_1), ...]` for `steps` shifts on `(0, a_max)`.
 */
export function growthCurve(p: number, omega: number, a_max: number, steps: number, half_width: number, nx: number): Float64Array;

/**
 * Lowest `k` eigenvalues of `L_{+,a}`.
 */
export function lPlusSpectrum(p: number, omega: number, a: number, k: number, half_width: number, nx: number): Float64Array;

export function omegaP(p: number): number;

/**
 * `[x_0, R(x_0), x_1, R(x_1), ...]`.
 */
export function solitonProfile(p: number, omega: number, half_width: number, nx: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_groundstate_free: (a: number, b: number) => void;
    readonly groundState: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly groundstate_action: (a: number) => number;
    readonly groundstate_converged: (a: number) => number;
    readonly groundstate_density: (a: number) => [number, number];
    readonly groundstate_lineAction: (a: number) => number;
    readonly groundstate_nx: (a: number) => number;
    readonly groundstate_ny: (a: number) => number;
    readonly groundstate_yDependence: (a: number) => number;
    readonly growthCurve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly lPlusSpectrum: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly omegaP: (a: number) => [number, number, number];
    readonly solitonProfile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
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
