/* tslint:disable */
/* eslint-disable */

/**
 * The family on which the chosen bound (`"original"` or `"switched"`)
 * fails by exactly `alpha`, with its gap report.
 */
export function counterexample(alpha: string, kind: string): string;

/**
 * Normalizes `a` and `b` and returns both ordinary sums, the natural sum,
 * their comparison and the least additive fixpoint of `a`.
 */
export function ordinal_sums(a: string, b: string): string;

/**
 * Ranks and bounds over a window of the counter-example family: the first
 * `rows` index points plus the top index, by the first `cols` component
 * points plus the top component point.
 */
export function rank_grid(alpha: string, kind: string, rows: number, cols: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly counterexample: (a: number, b: number, c: number, d: number) => [number, number];
    readonly ordinal_sums: (a: number, b: number, c: number, d: number) => [number, number];
    readonly rank_grid: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
