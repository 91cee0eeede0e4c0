/* tslint:disable */
/* eslint-disable */

/**
 * Method parameters as sent by the page. A `clip_limit` of 1 or less
 * disables clipping.
 */
export class Params {
    free(): void;
    [Symbol.dispose](): void;
    constructor();
    blend: boolean;
    brightness_limit: number;
    clip_limit: number;
    depth: number;
    grid_cols: number;
    grid_rows: number;
}

export function compare(pixels: Uint8Array, width: number, height: number, params: Params): string;

/**
 * Equalizes a grayscale image with `method` (`che`, `bhe`, `rmshe`, `ahe`
 * or `mdhe`) and returns the enhanced pixels.
 */
export function enhance(pixels: Uint8Array, width: number, height: number, method: string, params: Params): Uint8Array;

/**
 * Luminance to opaque canvas RGBA bytes.
 */
export function gray_to_rgba(gray: Uint8Array): Uint8Array;

/**
 * 256-bin histogram of a grayscale buffer.
 */
export function histogram(pixels: Uint8Array): Uint32Array;

/**
 * Canvas RGBA bytes to luminance, alpha ignored.
 */
export function rgba_to_gray(rgba: Uint8Array): Uint8Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_params_blend: (a: number) => number;
    readonly __wbg_get_params_brightness_limit: (a: number) => number;
    readonly __wbg_get_params_clip_limit: (a: number) => number;
    readonly __wbg_get_params_depth: (a: number) => number;
    readonly __wbg_get_params_grid_cols: (a: number) => number;
    readonly __wbg_get_params_grid_rows: (a: number) => number;
    readonly __wbg_params_free: (a: number, b: number) => void;
    readonly __wbg_set_params_blend: (a: number, b: number) => void;
    readonly __wbg_set_params_brightness_limit: (a: number, b: number) => void;
    readonly __wbg_set_params_clip_limit: (a: number, b: number) => void;
    readonly __wbg_set_params_depth: (a: number, b: number) => void;
    readonly __wbg_set_params_grid_cols: (a: number, b: number) => void;
    readonly __wbg_set_params_grid_rows: (a: number, b: number) => void;
    readonly compare: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly enhance: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly gray_to_rgba: (a: number, b: number) => [number, number];
    readonly histogram: (a: number, b: number) => [number, number];
    readonly params_new: () => number;
    readonly rgba_to_gray: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
