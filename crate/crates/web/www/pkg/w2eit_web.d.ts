/* tslint:disable */
/* eslint-disable */

export class ForwardResult {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly angles: Float64Array;
    /**
     * Boundary voltage for constant conductivity 1.
     */
    readonly background: Float64Array;
    /**
     * Boundary voltage with the inclusion present.
     */
    readonly trace: Float64Array;
}

export class SliceResult {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly angles: Float64Array;
    readonly l2: Float64Array;
    readonly w2: Float64Array;
}

export class TransportResult {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly alpha_star: number;
    /**
     * `T(t_i) − t_i` at the sample nodes.
     */
    readonly displacement: Float64Array;
    /**
     * Zero-mean Kantorovich potential, one value per cell.
     */
    readonly potential: Float64Array;
    readonly w2_squared: number;
}

/**
 * Boundary voltage for the current `cos(kθ)` with a disk inclusion of
 * conductivity `value` centred at polar position `(rc, theta)`.
 */
export function forward(rc: number, theta: number, radius: number, value: number, frequency: number, refinement: number): ForwardResult;

/**
 * Both misfits for a disk inclusion moved around a circle of the given
 * radius. The data come from a disk at radius 0.5, angle 3π/4.
 */
export function landscape_slice(radius: number, n_angles: number, eps: number, seed: number): SliceResult;

/**
 * Optimal transport between two sampled periodic densities on `[0, 1)`.
 */
export function transport(f: Float64Array, g: Float64Array): TransportResult;

/**
 * Angle of the inclusion that generated the landscape data.
 */
export function true_angle(): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_forwardresult_free: (a: number, b: number) => void;
    readonly __wbg_sliceresult_free: (a: number, b: number) => void;
    readonly __wbg_transportresult_free: (a: number, b: number) => void;
    readonly forward: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly forwardresult_angles: (a: number) => [number, number];
    readonly forwardresult_background: (a: number) => [number, number];
    readonly forwardresult_trace: (a: number) => [number, number];
    readonly landscape_slice: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly sliceresult_angles: (a: number) => [number, number];
    readonly sliceresult_l2: (a: number) => [number, number];
    readonly sliceresult_w2: (a: number) => [number, number];
    readonly transport: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly transportresult_alpha_star: (a: number) => number;
    readonly transportresult_displacement: (a: number) => [number, number];
    readonly transportresult_potential: (a: number) => [number, number];
    readonly transportresult_w2_squared: (a: number) => number;
    readonly true_angle: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
