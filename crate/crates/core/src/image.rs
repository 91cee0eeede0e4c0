//! Images, histograms, CDFs, lookup tables and tile grids.

use crate::error::{Error, Result};

/// Number of gray levels of an 8-bit image.
pub const LEVELS: usize = 256;

/// A rectangular, row-major grid of 8-bit intensity samples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Wraps row-major `pixels`. Both dimensions must be at least one and
    /// `pixels.len()` must equal `width * height`.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || width.checked_mul(height) != Some(pixels.len()) {
            return Err(Error::InvalidDimensions {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// An image where every sample is `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    /// Builds an image by evaluating `f(x, y)` at every position.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Number of pixels, `width * height`.
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    /// Always false: a valid image has at least one pixel.
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub(crate) fn ensure_same_dimensions(&self, other: &GrayImage) -> Result<()> {
        if self.dimensions() != other.dimensions() {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }

    /// Copies the `w x h` rectangle whose top-left corner is `(x0, y0)`.
    fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> GrayImage {
        let mut pixels = Vec::with_capacity(w * h);
        for y in y0..y0 + h {
            pixels.extend_from_slice(&self.row(y)[x0..x0 + w]);
        }
        GrayImage {
            width: w,
            height: h,
            pixels,
        }
    }
}

/// Occurrence counts of the 256 gray levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; LEVELS],
    total: u64,
}

impl Histogram {
    pub fn from_counts(counts: [u64; LEVELS]) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    pub fn counts(&self) -> &[u64; LEVELS] {
        &self.counts
    }

    pub fn count(&self, level: u8) -> u64 {
        self.counts[level as usize]
    }

    /// Sum of all counts, the pixel population.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Share of the population at `level`; zero for an empty histogram.
    pub fn probability(&self, level: u8) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.counts[level as usize] as f64 / self.total as f64
        }
    }

    /// Population whose level lies in `[low, high]`.
    pub fn population(&self, low: u8, high: u8) -> u64 {
        if low > high {
            return 0;
        }
        self.counts[low as usize..=high as usize].iter().sum()
    }

    /// Mean level of the population in `[low, high]`, if any.
    pub fn mean_in(&self, low: u8, high: u8) -> Option<f64> {
        let n = self.population(low, high);
        if n == 0 {
            return None;
        }
        let sum: u64 = (low as usize..=high as usize)
            .map(|i| i as u64 * self.counts[i])
            .sum();
        Some(sum as f64 / n as f64)
    }
}

/// Cumulative distribution of a histogram restricted to `[range_low, range_high]`.
///
/// Values below the range are 0, values at and above `range_high` are 1.
/// The exact integer running sums are kept next to the floating point view so
/// equalization can round without floating point error.
#[derive(Debug, Clone, PartialEq)]
pub struct Cdf {
    values: [f64; LEVELS],
    cumulative: [u64; LEVELS],
    population: u64,
    range_low: u8,
    range_high: u8,
}

impl Cdf {
    pub fn values(&self) -> &[f64; LEVELS] {
        &self.values
    }

    pub fn value(&self, level: u8) -> f64 {
        self.values[level as usize]
    }

    pub fn range_low(&self) -> u8 {
        self.range_low
    }

    pub fn range_high(&self) -> u8 {
        self.range_high
    }

    /// Number of samples inside the range.
    pub fn population(&self) -> u64 {
        self.population
    }

    /// Samples in `[range_low, level]`.
    pub fn cumulative_count(&self, level: u8) -> u64 {
        self.cumulative[level as usize]
    }

    /// Output level of the equalizing transform for input `level`:
    /// `low + max(0, round((high - low + 1) * C(level)) - 1)`, rounding halves
    /// away from zero. A histogram that is already uniform over the range maps
    /// onto itself.
    pub fn equalized_level(&self, level: u8) -> u8 {
        if level < self.range_low {
            return level;
        }
        let width = (self.range_high - self.range_low) as u128 + 1;
        let cum = self.cumulative[level as usize] as u128;
        let n = self.population as u128;
        let rounded = (2 * width * cum + n) / (2 * n);
        let offset = rounded.saturating_sub(1).min(width - 1);
        self.range_low + offset as u8
    }
}

/// A 256-entry lookup table realizing an intensity transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntensityMap {
    table: [u8; LEVELS],
}

impl IntensityMap {
    pub fn identity() -> Self {
        let mut table = [0u8; LEVELS];
        for (i, t) in table.iter_mut().enumerate() {
            *t = i as u8;
        }
        Self { table }
    }

    pub fn from_fn(mut f: impl FnMut(u8) -> u8) -> Self {
        let mut table = [0u8; LEVELS];
        for (i, t) in table.iter_mut().enumerate() {
            *t = f(i as u8);
        }
        Self { table }
    }

    pub fn from_table(table: [u8; LEVELS]) -> Self {
        Self { table }
    }

    pub fn table(&self) -> &[u8; LEVELS] {
        &self.table
    }

    pub fn get(&self, level: u8) -> u8 {
        self.table[level as usize]
    }

    pub fn set(&mut self, level: u8, value: u8) {
        self.table[level as usize] = value;
    }

    pub fn is_monotone(&self) -> bool {
        self.table.windows(2).all(|w| w[0] <= w[1])
    }
}

impl Default for IntensityMap {
    fn default() -> Self {
        Self::identity()
    }
}

/// An image cut into a `rows x cols` grid of tiles.
///
/// Column `c` has width `tile_widths[c]` and row `r` has height
/// `tile_heights[r]`; tiles are stored row-major. The fields are public so
/// callers can process tiles in place; [`reassemble`] checks consistency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileGrid {
    pub rows: usize,
    pub cols: usize,
    pub tiles: Vec<GrayImage>,
    pub tile_widths: Vec<usize>,
    pub tile_heights: Vec<usize>,
    pub source_width: usize,
    pub source_height: usize,
}

impl TileGrid {
    pub fn tile(&self, row: usize, col: usize) -> &GrayImage {
        &self.tiles[row * self.cols + col]
    }

    /// Left edge of each tile column.
    pub fn col_offsets(&self) -> Vec<usize> {
        offsets(&self.tile_widths)
    }

    /// Top edge of each tile row.
    pub fn row_offsets(&self) -> Vec<usize> {
        offsets(&self.tile_heights)
    }

    /// Applies `f` to every tile, keeping the geometry.
    pub fn map_tiles(self, f: impl FnMut(&GrayImage) -> GrayImage) -> TileGrid {
        let tiles = self.tiles.iter().map(f).collect();
        TileGrid { tiles, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::MalformedTileGrid("empty grid"));
        }
        if self.tiles.len() != self.rows * self.cols {
            return Err(Error::MalformedTileGrid("tile count differs from rows x cols"));
        }
        if self.tile_widths.len() != self.cols || self.tile_heights.len() != self.rows {
            return Err(Error::MalformedTileGrid("tile size lists differ from grid shape"));
        }
        if self.tile_widths.iter().sum::<usize>() != self.source_width
            || self.tile_heights.iter().sum::<usize>() != self.source_height
        {
            return Err(Error::MalformedTileGrid("tile sizes do not cover the source"));
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.tile(r, c).dimensions() != (self.tile_widths[c], self.tile_heights[r]) {
                    return Err(Error::MalformedTileGrid("tile dimensions differ from metadata"));
                }
            }
        }
        Ok(())
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |acc, &s| {
            let start = *acc;
            *acc += s;
            Some(start)
        })
        .collect()
}

/// Splits `total` into `parts` equal spans, the remainder going to the last.
pub(crate) fn split_sizes(total: usize, parts: usize) -> Vec<usize> {
    let base = total / parts;
    let mut sizes = vec![base; parts];
    sizes[parts - 1] += total % parts;
    sizes
}

pub fn compute_histogram(img: &GrayImage) -> Histogram {
    let mut counts = [0u64; LEVELS];
    for &p in img.pixels() {
        counts[p as usize] += 1;
    }
    Histogram {
        counts,
        total: img.len() as u64,
    }
}

/// Cumulative distribution of the part of `hist` lying in `[range_low, range_high]`.
///
/// Counts outside the range are ignored. Fails with
/// [`Error::EmptyHistogramRange`] when the range holds no samples, leaving
/// the fallback to the caller.
pub fn compute_cdf(hist: &Histogram, range_low: u8, range_high: u8) -> Result<Cdf> {
    if range_low > range_high {
        return Err(Error::InvalidRange(range_low, range_high));
    }
    let population = hist.population(range_low, range_high);
    if population == 0 {
        return Err(Error::EmptyHistogramRange(range_low, range_high));
    }
    let mut cumulative = [0u64; LEVELS];
    let mut values = [0f64; LEVELS];
    let mut running = 0u64;
    for level in 0..LEVELS {
        if level >= range_low as usize && level <= range_high as usize {
            running += hist.counts[level];
        }
        cumulative[level] = running;
        values[level] = running as f64 / population as f64;
    }
    Ok(Cdf {
        values,
        cumulative,
        population,
        range_low,
        range_high,
    })
}

pub fn apply_map(img: &GrayImage, map: &IntensityMap) -> GrayImage {
    GrayImage {
        width: img.width,
        height: img.height,
        pixels: img.pixels.iter().map(|&p| map.get(p)).collect(),
    }
}

pub fn mean_intensity(img: &GrayImage) -> f64 {
    let sum: u64 = img.pixels.iter().map(|&p| p as u64).sum();
    sum as f64 / img.len() as f64
}

/// Cuts `img` into a `rows x cols` grid. When a dimension is not divisible
/// the last tile row or column takes the remainder.
pub fn decompose(img: &GrayImage, rows: usize, cols: usize) -> Result<TileGrid> {
    if rows == 0 || cols == 0 || rows > img.height || cols > img.width {
        return Err(Error::GridExceedsImage {
            rows,
            cols,
            width: img.width,
            height: img.height,
        });
    }
    let tile_widths = split_sizes(img.width, cols);
    let tile_heights = split_sizes(img.height, rows);
    let xs = offsets(&tile_widths);
    let ys = offsets(&tile_heights);
    let mut tiles = Vec::with_capacity(rows * cols);
    for (r, &y0) in ys.iter().enumerate() {
        for (c, &x0) in xs.iter().enumerate() {
            tiles.push(img.crop(x0, y0, tile_widths[c], tile_heights[r]));
        }
    }
    Ok(TileGrid {
        rows,
        cols,
        tiles,
        tile_widths,
        tile_heights,
        source_width: img.width,
        source_height: img.height,
    })
}

/// Places every tile back at its position. No blending across tile seams.
pub fn reassemble(grid: &TileGrid) -> Result<GrayImage> {
    grid.validate()?;
    let mut pixels = vec![0u8; grid.source_width * grid.source_height];
    let xs = grid.col_offsets();
    let ys = grid.row_offsets();
    for (r, &y0) in ys.iter().enumerate() {
        for (c, &x0) in xs.iter().enumerate() {
            let tile = grid.tile(r, c);
            for ty in 0..tile.height {
                let start = (y0 + ty) * grid.source_width + x0;
                pixels[start..start + tile.width].copy_from_slice(tile.row(ty));
            }
        }
    }
    GrayImage::new(grid.source_width, grid.source_height, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(w: usize, h: usize, px: &[u8]) -> GrayImage {
        GrayImage::new(w, h, px.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(GrayImage::new(0, 1, vec![]).is_err());
        assert!(GrayImage::new(2, 2, vec![0; 3]).is_err());
        assert!(GrayImage::new(1, 1, vec![9]).is_ok());
    }

    #[test]
    fn histogram_counts() {
        let h = compute_histogram(&img(2, 2, &[0, 0, 255, 255]));
        assert_eq!(h.count(0), 2);
        assert_eq!(h.count(255), 2);
        assert_eq!(h.total(), 4);
        assert_eq!(h.counts().iter().filter(|&&c| c > 0).count(), 2);

        let h = compute_histogram(&img(1, 1, &[7]));
        assert_eq!(h.count(7), 1);
        assert_eq!(h.total(), 1);

        let px: Vec<u8> = (0..16).collect();
        let h = compute_histogram(&img(4, 4, &px));
        for i in 0..LEVELS {
            assert_eq!(h.counts()[i], u64::from(i < 16));
        }
    }

    #[test]
    fn cdf_two_level_split() {
        let h = compute_histogram(&img(2, 2, &[0, 0, 255, 255]));
        let cdf = compute_cdf(&h, 0, 255).unwrap();
        assert_eq!(cdf.value(0), 0.5);
        assert_eq!(cdf.value(254), 0.5);
        assert_eq!(cdf.value(255), 1.0);
    }

    #[test]
    fn cdf_step() {
        let h = compute_histogram(&img(1, 1, &[7]));
        let cdf = compute_cdf(&h, 0, 255).unwrap();
        for i in 0..LEVELS {
            assert_eq!(cdf.values()[i], if i < 7 { 0.0 } else { 1.0 });
        }
    }

    #[test]
    fn cdf_of_uniform_histogram_matches_uniform_target() {
        let h = Histogram::from_counts([1; LEVELS]);
        let cdf = compute_cdf(&h, 0, 255).unwrap();
        for i in 0..LEVELS {
            assert!((cdf.values()[i] - (i as f64 + 1.0) / 256.0).abs() < 1e-12);
            assert_eq!(cdf.equalized_level(i as u8), i as u8);
        }
        // same target on a sub-range
        let mut counts = [0; LEVELS];
        counts[100..=139].iter_mut().for_each(|c| *c = 3);
        let cdf = compute_cdf(&Histogram::from_counts(counts), 100, 139).unwrap();
        for i in 100..=139u8 {
            let target = (i as f64 - 100.0 + 1.0) / 40.0;
            assert!((cdf.value(i) - target).abs() < 1e-12);
            assert_eq!(cdf.equalized_level(i), i);
        }
        assert_eq!(cdf.value(99), 0.0);
    }

    #[test]
    fn cdf_errors() {
        let h = compute_histogram(&img(1, 1, &[7]));
        assert_eq!(
            compute_cdf(&h, 8, 255).unwrap_err(),
            Error::EmptyHistogramRange(8, 255)
        );
        assert_eq!(compute_cdf(&h, 9, 3).unwrap_err(), Error::InvalidRange(9, 3));
    }

    #[test]
    fn apply_map_examples() {
        let a = img(2, 2, &[0, 0, 255, 255]);
        assert_eq!(apply_map(&a, &IntensityMap::identity()), a);
        let neg = IntensityMap::from_fn(|i| 255 - i);
        assert_eq!(apply_map(&a, &neg).pixels(), &[255, 255, 0, 0]);
        let dbl = IntensityMap::from_fn(|i| (2 * i as u16).min(255) as u8);
        assert_eq!(apply_map(&img(3, 1, &[10, 100, 200]), &dbl).pixels(), &[20, 200, 255]);
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_intensity(&img(2, 2, &[0, 0, 255, 255])), 127.5);
        assert_eq!(mean_intensity(&GrayImage::filled(5, 3, 42).unwrap()), 42.0);
        assert_eq!(mean_intensity(&img(4, 1, &[10, 20, 30, 40])), 25.0);
    }

    #[test]
    fn decompose_one_pixel_tiles() {
        let px: Vec<u8> = (0..64).collect();
        let a = img(8, 8, &px);
        let grid = decompose(&a, 8, 8).unwrap();
        assert_eq!(grid.tiles.len(), 64);
        assert!(grid.tiles.iter().all(|t| t.dimensions() == (1, 1)));
        assert_eq!(grid.tile(2, 5).pixels(), &[21]);
        assert_eq!(reassemble(&grid).unwrap(), a);
    }

    #[test]
    fn decompose_remainder_goes_last() {
        let a = GrayImage::from_fn(10, 10, |x, y| (x * 10 + y) as u8).unwrap();
        let grid = decompose(&a, 3, 3).unwrap();
        assert_eq!(grid.tile_widths, vec![3, 3, 4]);
        assert_eq!(grid.tile_heights, vec![3, 3, 4]);
        assert_eq!(grid.tile(2, 2).dimensions(), (4, 4));
        assert_eq!(grid.tile(0, 2).dimensions(), (4, 3));
    }

    #[test]
    fn decompose_single_tile_is_identity() {
        let a = GrayImage::from_fn(7, 3, |x, y| (x * y) as u8).unwrap();
        let grid = decompose(&a, 1, 1).unwrap();
        assert_eq!(grid.tiles, vec![a.clone()]);
        assert_eq!(reassemble(&grid).unwrap(), a);
    }

    #[test]
    fn decompose_rejects_oversized_grid() {
        let a = GrayImage::filled(4, 2, 0).unwrap();
        assert!(matches!(decompose(&a, 3, 1), Err(Error::GridExceedsImage { .. })));
        assert!(matches!(decompose(&a, 1, 5), Err(Error::GridExceedsImage { .. })));
        assert!(matches!(decompose(&a, 0, 1), Err(Error::GridExceedsImage { .. })));
    }

    #[test]
    fn reassemble_places_one_pixel_tiles() {
        let grid = TileGrid {
            rows: 8,
            cols: 8,
            tiles: (0..64u8).map(|v| img(1, 1, &[v * 2])).collect(),
            tile_widths: vec![1; 8],
            tile_heights: vec![1; 8],
            source_width: 8,
            source_height: 8,
        };
        let out = reassemble(&grid).unwrap();
        assert_eq!(out.dimensions(), (8, 8));
        assert_eq!(out.get(3, 2), 2 * 19);
    }

    #[test]
    fn reassemble_rejects_malformed_grids() {
        let good = decompose(&GrayImage::filled(6, 4, 1).unwrap(), 2, 3).unwrap();
        let mut bad = good.clone();
        bad.tiles.pop();
        assert!(matches!(reassemble(&bad), Err(Error::MalformedTileGrid(_))));
        let mut bad = good.clone();
        bad.tile_widths[0] += 1;
        assert!(matches!(reassemble(&bad), Err(Error::MalformedTileGrid(_))));
        let mut bad = good.clone();
        bad.source_width += 1;
        bad.tile_widths[2] += 1;
        assert!(matches!(reassemble(&bad), Err(Error::MalformedTileGrid(_))));
        let mut bad = good;
        bad.tiles[0] = GrayImage::filled(3, 2, 0).unwrap();
        assert!(matches!(reassemble(&bad), Err(Error::MalformedTileGrid(_))));
    }
}
