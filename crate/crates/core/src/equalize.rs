//! Histogram-equalization enhancement methods.
//!
//! Every method is built from one kernel: the empirical CDF of a population
//! restricted to an intensity range `[low, high]` is mapped back onto that
//! range with
//!
//! ```text
//! T(k) = low + max(0, round((high - low + 1) * C(k)) - 1)
//! ```
//!
//! rounding halves away from zero. The transform is monotone, keeps every
//! output inside `[low, high]` and sends a population that is already uniform
//! over the range onto itself.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{
    apply_map, compute_cdf, compute_histogram, decompose, mean_intensity, reassemble, GrayImage,
    Histogram, IntensityMap, TileGrid, LEVELS,
};

/// Recursion depth `r` of [`rmshe`]; the range is split into at most `2^r` parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RmsheDepth(u8);

impl RmsheDepth {
    pub const MAX: u8 = 7;

    pub fn new(r: u8) -> Result<Self> {
        if r > Self::MAX {
            return Err(Error::InvalidParameter(format!(
                "RMSHE depth {r} exceeds {}",
                Self::MAX
            )));
        }
        Ok(Self(r))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl Default for RmsheDepth {
    fn default() -> Self {
        Self(2)
    }
}

/// Parameters of [`ahe`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AheConfig {
    pub tile_rows: usize,
    pub tile_cols: usize,
    /// Histogram clip limit as a multiple of the uniform bin height. `None`
    /// disables clipping.
    pub clip_limit: Option<f64>,
}

impl Default for AheConfig {
    fn default() -> Self {
        Self {
            tile_rows: 8,
            tile_cols: 8,
            clip_limit: None,
        }
    }
}

impl AheConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tile_rows == 0 || self.tile_cols == 0 {
            return Err(Error::InvalidParameter("AHE grid must be at least 1x1".into()));
        }
        if let Some(clip) = self.clip_limit {
            if clip.is_nan() || clip <= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "clip limit {clip} must be greater than 1"
                )));
            }
        }
        Ok(())
    }
}

/// Parameters of [`mdhe`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdheConfig {
    pub grid_rows: usize,
    pub grid_cols: usize,
    /// Largest tolerated distance between the output and input mean, in gray levels.
    pub brightness_limit: f64,
    /// Interpolate the per-tile maps bilinearly between tile centers instead
    /// of applying each tile's own map.
    pub blend_tiles: bool,
}

impl Default for MdheConfig {
    fn default() -> Self {
        Self {
            grid_rows: 8,
            grid_cols: 8,
            brightness_limit: 10.0,
            blend_tiles: false,
        }
    }
}

impl MdheConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_rows == 0 || self.grid_cols == 0 {
            return Err(Error::InvalidParameter("MDHE grid must be at least 1x1".into()));
        }
        validate_limit(self.brightness_limit)
    }
}

fn validate_limit(limit: f64) -> Result<()> {
    if !(0.0..=255.0).contains(&limit) {
        return Err(Error::InvalidParameter(format!(
            "brightness limit {limit} outside [0, 255]"
        )));
    }
    Ok(())
}

/// Overwrites `map` on `[low, high]` with the equalizing transform of the
/// population of `hist` in that range. An empty range keeps its identity.
fn equalize_range_into(map: &mut IntensityMap, hist: &Histogram, low: u8, high: u8) {
    match compute_cdf(hist, low, high) {
        Ok(cdf) => {
            for k in low..=high {
                map.set(k, cdf.equalized_level(k));
            }
        }
        Err(_) => {
            for k in low..=high {
                map.set(k, k);
            }
        }
    }
}

/// Integer floor of the mean level of the population in `[low, high]`.
fn floor_mean(hist: &Histogram, low: u8, high: u8) -> Option<u8> {
    let n = hist.population(low, high);
    if n == 0 {
        return None;
    }
    let sum: u64 = (low..=high).map(|k| k as u64 * hist.count(k)).sum();
    Some((sum / n) as u8)
}

/// The classical equalization map of a histogram.
pub fn che_map(hist: &Histogram) -> IntensityMap {
    let mut map = IntensityMap::identity();
    equalize_range_into(&mut map, hist, 0, 255);
    map
}

/// Equalizes the pixels lying in `[range_low, range_high]` over that range.
///
/// Pixels outside the range pass through unchanged, and an image without
/// any pixel in the range is returned as is.
pub fn range_equalize(img: &GrayImage, range_low: u8, range_high: u8) -> Result<GrayImage> {
    if range_low > range_high {
        return Err(Error::InvalidRange(range_low, range_high));
    }
    let mut map = IntensityMap::identity();
    equalize_range_into(&mut map, &compute_histogram(img), range_low, range_high);
    Ok(apply_map(img, &map))
}

/// Classical histogram equalization over `[0, 255]`.
pub fn che(img: &GrayImage) -> GrayImage {
    apply_map(img, &che_map(&compute_histogram(img)))
}

/// Bi-histogram equalization.
///
/// With `m = floor(mean)`, pixels `<= m` are equalized over `[0, m]` and the
/// others over `[m + 1, 255]`, each half with its own CDF.
pub fn bhe(img: &GrayImage) -> GrayImage {
    let hist = compute_histogram(img);
    // the whole image is never empty
    let m = floor_mean(&hist, 0, 255).unwrap_or(0);
    let mut map = IntensityMap::identity();
    equalize_range_into(&mut map, &hist, 0, m);
    if m < 255 {
        equalize_range_into(&mut map, &hist, m + 1, 255);
    }
    apply_map(img, &map)
}

/// Recursive mean-separate histogram equalization.
///
/// The intensity range is split at the floored mean of its population,
/// `depth` times, and every resulting sub-range is equalized on its own.
/// Depth 0 is [`che`], depth 1 is [`bhe`].
pub fn rmshe(img: &GrayImage, depth: RmsheDepth) -> GrayImage {
    apply_map(img, &rmshe_map(&compute_histogram(img), depth))
}

pub fn rmshe_map(hist: &Histogram, depth: RmsheDepth) -> IntensityMap {
    fn split(map: &mut IntensityMap, hist: &Histogram, low: u8, high: u8, depth: u8) {
        let Some(m) = floor_mean(hist, low, high) else {
            // nothing to equalize, the map keeps its identity on this branch
            return;
        };
        if depth == 0 {
            equalize_range_into(map, hist, low, high);
            return;
        }
        split(map, hist, low, m, depth - 1);
        if m < high {
            split(map, hist, m + 1, high, depth - 1);
        }
    }

    let mut map = IntensityMap::identity();
    split(&mut map, hist, 0, 255, depth.get());
    map
}

/// Clips `hist` at `clip_limit` times the uniform bin height and spreads the
/// clipped mass evenly over all bins. The division remainder is dropped.
pub fn clip_histogram(hist: &Histogram, clip_limit: f64) -> Histogram {
    let ceiling = (clip_limit * hist.total() as f64 / LEVELS as f64).floor();
    let ceiling = if ceiling >= hist.total() as f64 {
        return hist.clone();
    } else {
        (ceiling as u64).max(1)
    };
    let mut counts = *hist.counts();
    let mut excess = 0;
    for c in counts.iter_mut() {
        if *c > ceiling {
            excess += *c - ceiling;
            *c = ceiling;
        }
    }
    let share = excess / LEVELS as u64;
    for c in counts.iter_mut() {
        *c += share;
    }
    Histogram::from_counts(counts)
}

/// Adaptive histogram equalization: each tile of the grid is equalized over
/// `[0, 255]` with its own histogram and the tiles are put back in place.
pub fn ahe(img: &GrayImage, cfg: &AheConfig) -> Result<GrayImage> {
    cfg.validate()?;
    let grid = decompose(img, cfg.tile_rows, cfg.tile_cols)?;
    let grid = grid.map_tiles(|tile| {
        let mut hist = compute_histogram(tile);
        if let Some(clip) = cfg.clip_limit {
            hist = clip_histogram(&hist, clip);
        }
        apply_map(tile, &che_map(&hist))
    });
    reassemble(&grid)
}

/// Multi-decomposition histogram equalization.
///
/// 1. cut the image into `grid_rows x grid_cols` tiles,
/// 2. equalize every tile over `[0, 255]`,
/// 3. put the tiles back in place (or blend the tile maps bilinearly when
///    `blend_tiles` is set),
/// 4. pull the mean back toward the input mean with [`preserve_brightness`].
pub fn mdhe(img: &GrayImage, cfg: &MdheConfig) -> Result<GrayImage> {
    cfg.validate()?;
    let grid = decompose(img, cfg.grid_rows, cfg.grid_cols)?;
    let maps: Vec<IntensityMap> = grid
        .tiles
        .iter()
        .map(|t| che_map(&compute_histogram(t)))
        .collect();
    let equalized = if cfg.blend_tiles {
        blend_tile_maps(img, &grid, &maps)
    } else {
        let mut maps = maps.iter();
        let grid = grid.map_tiles(|tile| apply_map(tile, maps.next().expect("one map per tile")));
        reassemble(&grid)?
    };
    preserve_brightness(&equalized, img, cfg.brightness_limit)
}

/// Neighbouring tile indices and the weight of the second one, for every
/// coordinate along one axis. Outside the outermost tile centers the nearest
/// tile is used alone.
fn axis_weights(offsets: &[usize], sizes: &[usize]) -> Vec<(usize, usize, f64)> {
    let centers: Vec<f64> = offsets
        .iter()
        .zip(sizes)
        .map(|(&o, &s)| o as f64 + (s as f64 - 1.0) / 2.0)
        .collect();
    let total: usize = sizes.iter().sum();
    let last = centers.len() - 1;
    let mut k = 0;
    (0..total)
        .map(|i| {
            let p = i as f64;
            if p <= centers[0] {
                (0, 0, 0.0)
            } else if p >= centers[last] {
                (last, last, 0.0)
            } else {
                while centers[k + 1] <= p {
                    k += 1;
                }
                let t = (p - centers[k]) / (centers[k + 1] - centers[k]);
                (k, k + 1, t)
            }
        })
        .collect()
}

fn blend_tile_maps(img: &GrayImage, grid: &TileGrid, maps: &[IntensityMap]) -> GrayImage {
    let xs = axis_weights(&grid.col_offsets(), &grid.tile_widths);
    let ys = axis_weights(&grid.row_offsets(), &grid.tile_heights);
    let cols = grid.cols;
    let mut pixels = Vec::with_capacity(img.len());
    for (y, &(r0, r1, ty)) in ys.iter().enumerate() {
        for (&p, &(c0, c1, tx)) in img.row(y).iter().zip(&xs) {
            let at = |r: usize, c: usize| maps[r * cols + c].get(p) as f64;
            let top = (1.0 - tx) * at(r0, c0) + tx * at(r0, c1);
            let bottom = (1.0 - tx) * at(r1, c0) + tx * at(r1, c1);
            let v = (1.0 - ty) * top + ty * bottom;
            pixels.push(v.round().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(img.width(), img.height(), pixels).expect("same geometry as the input")
}

/// Shifts `enhanced` so its mean lies within `limit` gray levels of the
/// mean of `original`.
///
/// With `d = mean(enhanced) - mean(original)`, nothing happens while
/// `|d| <= limit`. Otherwise the integer offset `round(sign(d) * (|d| - limit))`
/// is subtracted from every pixel, clamping to `[0, 255]`.
pub fn preserve_brightness(
    enhanced: &GrayImage,
    original: &GrayImage,
    limit: f64,
) -> Result<GrayImage> {
    enhanced.ensure_same_dimensions(original)?;
    validate_limit(limit)?;
    let drift = mean_intensity(enhanced) - mean_intensity(original);
    if drift.abs() <= limit {
        return Ok(enhanced.clone());
    }
    let shift = (drift.signum() * (drift.abs() - limit)).round() as i32;
    let map = IntensityMap::from_fn(|p| (p as i32 - shift).clamp(0, 255) as u8);
    Ok(apply_map(enhanced, &map))
}

/// One enhancement method with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Che,
    Bhe,
    Rmshe(RmsheDepth),
    Ahe(AheConfig),
    Mdhe(MdheConfig),
}

impl Method {
    /// All five methods with default parameters, in report order.
    pub fn defaults() -> [Method; 5] {
        [
            Method::Che,
            Method::Bhe,
            Method::Rmshe(RmsheDepth::default()),
            Method::Ahe(AheConfig::default()),
            Method::Mdhe(MdheConfig::default()),
        ]
    }

    pub fn kind(&self) -> MethodKind {
        match self {
            Method::Che => MethodKind::Che,
            Method::Bhe => MethodKind::Bhe,
            Method::Rmshe(_) => MethodKind::Rmshe,
            Method::Ahe(_) => MethodKind::Ahe,
            Method::Mdhe(_) => MethodKind::Mdhe,
        }
    }

    pub fn apply(&self, img: &GrayImage) -> Result<GrayImage> {
        match self {
            Method::Che => Ok(che(img)),
            Method::Bhe => Ok(bhe(img)),
            Method::Rmshe(depth) => Ok(rmshe(img, *depth)),
            Method::Ahe(cfg) => ahe(img, cfg),
            Method::Mdhe(cfg) => mdhe(img, cfg),
        }
    }
}

/// Method names without parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Che,
    Bhe,
    Rmshe,
    Ahe,
    Mdhe,
}

impl MethodKind {
    pub fn label(self) -> &'static str {
        match self {
            MethodKind::Che => "CHE",
            MethodKind::Bhe => "BHE",
            MethodKind::Rmshe => "RMSHE",
            MethodKind::Ahe => "AHE",
            MethodKind::Mdhe => "MDHE",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "che" => Ok(MethodKind::Che),
            "bhe" => Ok(MethodKind::Bhe),
            "rmshe" => Ok(MethodKind::Rmshe),
            "ahe" => Ok(MethodKind::Ahe),
            "mdhe" => Ok(MethodKind::Mdhe),
            _ => Err(Error::InvalidParameter(format!("unknown method {s:?}"))),
        }
    }
}
