//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Images cross the boundary as flat row-major byte arrays plus dimensions.

use mdhe_core::equalize::{Method, MethodKind};
use mdhe_core::io::luma;
use mdhe_core::{
    compute_histogram, full_report, AheConfig, GrayImage, MdheConfig, RmsheDepth,
};
use wasm_bindgen::prelude::*;

/// Method parameters as sent by the page. A `clip_limit` of 1 or less
/// disables clipping.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub depth: u8,
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub brightness_limit: f64,
    pub clip_limit: f64,
    pub blend: bool,
}

#[wasm_bindgen]
impl Params {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Params {
        Params::default()
    }
}

impl Default for Params {
    fn default() -> Self {
        let mdhe = MdheConfig::default();
        Self {
            depth: RmsheDepth::default().get(),
            grid_rows: mdhe.grid_rows,
            grid_cols: mdhe.grid_cols,
            brightness_limit: mdhe.brightness_limit,
            clip_limit: 0.0,
            blend: false,
        }
    }
}

fn method(kind: MethodKind, p: &Params) -> Result<Method, String> {
    Ok(match kind {
        MethodKind::Che => Method::Che,
        MethodKind::Bhe => Method::Bhe,
        MethodKind::Rmshe => Method::Rmshe(RmsheDepth::new(p.depth).map_err(|e| e.to_string())?),
        MethodKind::Ahe => Method::Ahe(AheConfig {
            tile_rows: p.grid_rows,
            tile_cols: p.grid_cols,
            clip_limit: (p.clip_limit > 1.0).then_some(p.clip_limit),
        }),
        MethodKind::Mdhe => Method::Mdhe(MdheConfig {
            grid_rows: p.grid_rows,
            grid_cols: p.grid_cols,
            brightness_limit: p.brightness_limit,
            blend_tiles: p.blend,
        }),
    })
}

fn image(pixels: &[u8], width: usize, height: usize) -> Result<GrayImage, String> {
    GrayImage::new(width, height, pixels.to_vec()).map_err(|e| e.to_string())
}

pub fn enhance_gray(
    pixels: &[u8],
    width: usize,
    height: usize,
    method_name: &str,
    params: &Params,
) -> Result<Vec<u8>, String> {
    let kind: MethodKind = method_name.parse().map_err(|e: mdhe_core::Error| e.to_string())?;
    let img = image(pixels, width, height)?;
    let out = method(kind, params)?.apply(&img).map_err(|e| e.to_string())?;
    Ok(out.into_pixels())
}

/// JSON array with one object per method: its name and the seven measures.
/// Infinite and undefined values are strings.
pub fn compare_gray(pixels: &[u8], width: usize, height: usize, params: &Params) -> Result<String, String> {
    let img = image(pixels, width, height)?;
    let mut rows = Vec::new();
    for kind in [
        MethodKind::Che,
        MethodKind::Bhe,
        MethodKind::Rmshe,
        MethodKind::Ahe,
        MethodKind::Mdhe,
    ] {
        let out = method(kind, params)?.apply(&img).map_err(|e| e.to_string())?;
        let report = full_report(&img, &out).map_err(|e| e.to_string())?;
        let mut obj = serde_json::Map::new();
        obj.insert("method".into(), kind.label().into());
        for (key, v) in report.entries() {
            let json = match v.value() {
                Some(x) if x.is_finite() => x.into(),
                _ => v.to_string().into(),
            };
            obj.insert(key.into(), json);
        }
        rows.push(serde_json::Value::Object(obj));
    }
    Ok(serde_json::Value::Array(rows).to_string())
}

/// Equalizes a grayscale image with `method` (`che`, `bhe`, `rmshe`, `ahe`
/// or `mdhe`) and returns the enhanced pixels.
#[wasm_bindgen]
pub fn enhance(
    pixels: &[u8],
    width: usize,
    height: usize,
    method: &str,
    params: &Params,
) -> Result<Vec<u8>, JsError> {
    enhance_gray(pixels, width, height, method, params).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compare(pixels: &[u8], width: usize, height: usize, params: &Params) -> Result<String, JsError> {
    compare_gray(pixels, width, height, params).map_err(|e| JsError::new(&e))
}

/// 256-bin histogram of a grayscale buffer.
#[wasm_bindgen]
pub fn histogram(pixels: &[u8]) -> Vec<u32> {
    match GrayImage::new(pixels.len(), 1, pixels.to_vec()) {
        Ok(img) => compute_histogram(&img).counts().iter().map(|&c| c as u32).collect(),
        Err(_) => vec![0; 256],
    }
}

/// Canvas RGBA bytes to luminance, alpha ignored.
#[wasm_bindgen]
pub fn rgba_to_gray(rgba: &[u8]) -> Vec<u8> {
    rgba.chunks_exact(4).map(|p| luma(p[0], p[1], p[2])).collect()
}

/// Luminance to opaque canvas RGBA bytes.
#[wasm_bindgen]
pub fn gray_to_rgba(gray: &[u8]) -> Vec<u8> {
    gray.iter().flat_map(|&g| [g, g, g, 255]).collect()
}
