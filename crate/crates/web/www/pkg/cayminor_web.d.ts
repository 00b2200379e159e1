/* tslint:disable */
/* eslint-disable */

/**
 * One KPR partition of the `Z^2` ball: `delta_index` picks the offsets
 * in base 4, least significant level first.
 */
export function kpr_partition(radius: number, m: number, s: number, delta_index: number): string;

/**
 * `K_m` grown from vertical rays in `Z^2`.
 */
export function ray_minor(m: number, radius: number): string;

/**
 * The explicit `K_m` in `Cay(Z^2, {±(1,0), ±(2,0), ±(0,1)})`.
 */
export function z2s2_minor(m: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly kpr_partition: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly ray_minor: (a: number, b: number) => [number, number, number, number];
    readonly z2s2_minor: (a: number) => [number, number, number, number];
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
