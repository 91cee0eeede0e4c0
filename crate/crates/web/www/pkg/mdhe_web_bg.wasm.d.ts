/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_params_blend: (a: number) => number;
export const __wbg_get_params_brightness_limit: (a: number) => number;
export const __wbg_get_params_clip_limit: (a: number) => number;
export const __wbg_get_params_depth: (a: number) => number;
export const __wbg_get_params_grid_cols: (a: number) => number;
export const __wbg_get_params_grid_rows: (a: number) => number;
export const __wbg_params_free: (a: number, b: number) => void;
export const __wbg_set_params_blend: (a: number, b: number) => void;
export const __wbg_set_params_brightness_limit: (a: number, b: number) => void;
export const __wbg_set_params_clip_limit: (a: number, b: number) => void;
export const __wbg_set_params_depth: (a: number, b: number) => void;
export const __wbg_set_params_grid_cols: (a: number, b: number) => void;
export const __wbg_set_params_grid_rows: (a: number, b: number) => void;
export const compare: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const enhance: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const gray_to_rgba: (a: number, b: number) => [number, number];
export const histogram: (a: number, b: number) => [number, number];
export const params_new: () => number;
export const rgba_to_gray: (a: number, b: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
