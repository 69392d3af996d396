/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_forwardresult_free: (a: number, b: number) => void;
export const __wbg_sliceresult_free: (a: number, b: number) => void;
export const __wbg_transportresult_free: (a: number, b: number) => void;
export const forward: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const forwardresult_angles: (a: number) => [number, number];
export const forwardresult_background: (a: number) => [number, number];
export const forwardresult_trace: (a: number) => [number, number];
export const landscape_slice: (a: number, b: number, c: number, d: number) => [number, number, number];
export const sliceresult_angles: (a: number) => [number, number];
export const sliceresult_l2: (a: number) => [number, number];
export const sliceresult_w2: (a: number) => [number, number];
export const transport: (a: number, b: number, c: number, d: number) => [number, number, number];
export const transportresult_alpha_star: (a: number) => number;
export const transportresult_displacement: (a: number) => [number, number];
export const transportresult_potential: (a: number) => [number, number];
export const transportresult_w2_squared: (a: number) => number;
export const true_angle: () => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
