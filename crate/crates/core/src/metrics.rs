//! Full-reference quality measures between an original and an enhanced image.
//!
//! The first argument is always the reference. All sums are accumulated in
//! exact integer arithmetic before the final floating point step.
//!
//! Lower is better for [`mse`], [`rmse`] and [`mae`]; higher is better for the
//! others.

use std::fmt;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Peak sample value of an 8-bit image.
pub const PEAK: f64 = 255.0;

/// Default side of the square [`uiq`] window.
pub const UIQ_WINDOW: usize = 8;

/// Mean squared error.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_dimensions(b)?;
    Ok(squared_error_sum(a, b) as f64 / a.len() as f64)
}

/// Root mean squared error.
pub fn rmse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    mse(a, b).map(f64::sqrt)
}

/// Peak signal-to-noise ratio in dB, `10 log10(255^2 / mse)`. Identical
/// images give `+inf`.
pub fn psnr(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    let mse = mse(reference, test)?;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK * PEAK / mse).log10())
}

/// Signal-to-noise ratio in dB. The signal is the reference image and the
/// noise is `test - reference`, both as summed squares.
///
/// Zero noise gives `+inf`, zero signal with some noise gives `-inf`, and
/// zero of both is [`Error::UndefinedSnr`].
pub fn snr(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    reference.ensure_same_dimensions(test)?;
    let signal: u64 = reference.pixels().iter().map(|&p| (p as u64).pow(2)).sum();
    let noise = squared_error_sum(reference, test);
    match (signal, noise) {
        (0, 0) => Err(Error::UndefinedSnr),
        (_, 0) => Ok(f64::INFINITY),
        (0, _) => Ok(f64::NEG_INFINITY),
        (s, n) => Ok(10.0 * (s as f64 / n as f64).log10()),
    }
}

/// Mean absolute error.
pub fn mae(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_dimensions(b)?;
    let sum: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| x.abs_diff(y) as u64)
        .sum();
    Ok(sum as f64 / a.len() as f64)
}

/// Pearson correlation of the two pixel sequences, in `[-1, 1]`.
///
/// Fails with [`Error::UndefinedCorrelation`] when either image is constant.
pub fn pcc(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_dimensions(b)?;
    let s = Sums::over(a.pixels().iter().copied().zip(b.pixels().iter().copied()));
    let (var_a, var_b, cov) = s.centered(a.len() as i128);
    if var_a == 0 || var_b == 0 {
        return Err(Error::UndefinedCorrelation);
    }
    let r = cov as f64 / ((var_a as f64).sqrt() * (var_b as f64).sqrt());
    Ok(r.clamp(-1.0, 1.0))
}

/// Universal image quality index averaged over every `window x window`
/// position (stride 1).
///
/// Per window
/// `Q = 4 cov(a,b) mean(a) mean(b) / ((var(a) + var(b)) (mean(a)^2 + mean(b)^2))`.
/// Windows with a zero denominator are skipped; if all are skipped the index
/// is [`Error::UndefinedUiq`].
pub fn uiq(a: &GrayImage, b: &GrayImage, window: usize) -> Result<f64> {
    a.ensure_same_dimensions(b)?;
    if window == 0 {
        return Err(Error::InvalidParameter("UIQ window must be positive".into()));
    }
    let (w, h) = a.dimensions();
    if w < window || h < window {
        return Err(Error::WindowTooLarge { window });
    }
    let table = IntegralSums::new(a, b);
    let n = (window * window) as i128;
    let mut total = 0.0;
    let mut used = 0usize;
    for y in 0..=h - window {
        for x in 0..=w - window {
            let s = table.window(x, y, window);
            let (var_a, var_b, cov) = s.centered(n);
            let (sa, sb) = (s.a as i128, s.b as i128);
            // the 1/n factors cancel between numerator and denominator
            let denom = (var_a + var_b) * (sa * sa + sb * sb);
            if denom == 0 {
                continue;
            }
            let num = 4 * cov * sa * sb;
            total += num as f64 / denom as f64;
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::UndefinedUiq);
    }
    Ok(total / used as f64)
}

fn squared_error_sum(a: &GrayImage, b: &GrayImage) -> u64 {
    a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| (x.abs_diff(y) as u64).pow(2))
        .sum()
}

/// Raw moment sums of a pixel pair sequence.
#[derive(Debug, Clone, Copy, Default)]
struct Sums {
    a: u64,
    b: u64,
    aa: u64,
    bb: u64,
    ab: u64,
}

impl Sums {
    fn over(pairs: impl Iterator<Item = (u8, u8)>) -> Self {
        pairs.fold(Sums::default(), |mut s, (x, y)| {
            let (x, y) = (x as u64, y as u64);
            s.a += x;
            s.b += y;
            s.aa += x * x;
            s.bb += y * y;
            s.ab += x * y;
            s
        })
    }

    /// `n^2` times the variances and covariance, exact.
    fn centered(&self, n: i128) -> (i128, i128, i128) {
        let (a, b) = (self.a as i128, self.b as i128);
        (
            n * self.aa as i128 - a * a,
            n * self.bb as i128 - b * b,
            n * self.ab as i128 - a * b,
        )
    }
}

/// Summed-area tables of the five moments, one row and column of padding.
struct IntegralSums {
    stride: usize,
    cells: Vec<Sums>,
}

impl IntegralSums {
    fn new(a: &GrayImage, b: &GrayImage) -> Self {
        let (w, h) = a.dimensions();
        let stride = w + 1;
        let mut cells = vec![Sums::default(); stride * (h + 1)];
        for y in 0..h {
            let mut row = Sums::default();
            for x in 0..w {
                let (p, q) = (a.get(x, y) as u64, b.get(x, y) as u64);
                row.a += p;
                row.b += q;
                row.aa += p * p;
                row.bb += q * q;
                row.ab += p * q;
                let above = cells[y * stride + x + 1];
                cells[(y + 1) * stride + x + 1] = Sums {
                    a: above.a + row.a,
                    b: above.b + row.b,
                    aa: above.aa + row.aa,
                    bb: above.bb + row.bb,
                    ab: above.ab + row.ab,
                };
            }
        }
        Self { stride, cells }
    }

    fn window(&self, x: usize, y: usize, size: usize) -> Sums {
        let at = |x: usize, y: usize| self.cells[y * self.stride + x];
        let (br, bl, tr, tl) = (at(x + size, y + size), at(x, y + size), at(x + size, y), at(x, y));
        Sums {
            a: br.a + tl.a - bl.a - tr.a,
            b: br.b + tl.b - bl.b - tr.b,
            aa: br.aa + tl.aa - bl.aa - tr.aa,
            bb: br.bb + tl.bb - bl.bb - tr.bb,
            ab: br.ab + tl.ab - bl.ab - tr.ab,
        }
    }
}

/// A metric result: a number (possibly an infinite dB value) or undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricValue {
    Value(f64),
    Undefined,
}

impl MetricValue {
    pub fn value(self) -> Option<f64> {
        match self {
            MetricValue::Value(v) => Some(v),
            MetricValue::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, MetricValue::Value(_))
    }

    /// Inverse of the `Display` rendering.
    pub fn parse(s: &str) -> Option<MetricValue> {
        match s {
            "undefined" => Some(MetricValue::Undefined),
            "inf" => Some(MetricValue::Value(f64::INFINITY)),
            "-inf" => Some(MetricValue::Value(f64::NEG_INFINITY)),
            _ => s.parse::<f64>().ok().filter(|v| v.is_finite()).map(MetricValue::Value),
        }
    }
}

impl From<Result<f64>> for MetricValue {
    fn from(r: Result<f64>) -> Self {
        r.map_or(MetricValue::Undefined, MetricValue::Value)
    }
}

/// Renders `inf`, `-inf`, `undefined`, or the shortest round-tripping decimal.
impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MetricValue::Undefined => f.write_str("undefined"),
            MetricValue::Value(v) if v == f64::INFINITY => f.write_str("inf"),
            MetricValue::Value(v) if v == f64::NEG_INFINITY => f.write_str("-inf"),
            MetricValue::Value(v) => match f.precision() {
                Some(p) => write!(f, "{v:.p$}"),
                None => write!(f, "{v}"),
            },
        }
    }
}

/// The seven measures for one (original, enhanced) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub psnr: MetricValue,
    pub mse: MetricValue,
    pub rmse: MetricValue,
    pub uiq: MetricValue,
    pub pcc: MetricValue,
    pub snr: MetricValue,
    pub mae: MetricValue,
}

/// Metric keys in report order.
pub const METRIC_NAMES: [&str; 7] = ["psnr", "mse", "rmse", "uiq", "pcc", "snr", "mae"];

impl MetricReport {
    /// `(key, value)` pairs in report order, see [`METRIC_NAMES`].
    pub fn entries(&self) -> [(&'static str, MetricValue); 7] {
        [
            ("psnr", self.psnr),
            ("mse", self.mse),
            ("rmse", self.rmse),
            ("uiq", self.uiq),
            ("pcc", self.pcc),
            ("snr", self.snr),
            ("mae", self.mae),
        ]
    }

    /// Builds a report from values in report order.
    pub fn from_values(v: [MetricValue; 7]) -> Self {
        let [psnr, mse, rmse, uiq, pcc, snr, mae] = v;
        Self {
            psnr,
            mse,
            rmse,
            uiq,
            pcc,
            snr,
            mae,
        }
    }
}

/// All seven measures. Only a dimension mismatch is an error; a measure that
/// is undefined for the pair is reported as [`MetricValue::Undefined`].
pub fn full_report(original: &GrayImage, enhanced: &GrayImage) -> Result<MetricReport> {
    original.ensure_same_dimensions(enhanced)?;
    Ok(MetricReport {
        psnr: psnr(original, enhanced).into(),
        mse: mse(original, enhanced).into(),
        rmse: rmse(original, enhanced).into(),
        uiq: uiq(original, enhanced, UIQ_WINDOW).into(),
        pcc: pcc(original, enhanced).into(),
        snr: snr(original, enhanced).into(),
        mae: mae(original, enhanced).into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(w: usize, h: usize, px: &[u8]) -> GrayImage {
        GrayImage::new(w, h, px.to_vec()).unwrap()
    }

    fn gradient(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| (x * 20 + y * 7) as u8).unwrap()
    }

    fn invert(a: &GrayImage) -> GrayImage {
        let px = a.pixels().iter().map(|&p| 255 - p).collect();
        GrayImage::new(a.width(), a.height(), px).unwrap()
    }

    #[test]
    fn mse_examples() {
        let x = gradient(5, 4);
        assert_eq!(mse(&x, &x).unwrap(), 0.0);
        assert_eq!(mse(&img(2, 1, &[0, 0]), &img(2, 1, &[10, 10])).unwrap(), 100.0);
        assert_eq!(mse(&img(2, 1, &[0, 255]), &img(2, 1, &[255, 0])).unwrap(), 65025.0);
    }

    #[test]
    fn rmse_examples() {
        let x = gradient(5, 4);
        assert_eq!(rmse(&x, &x).unwrap(), 0.0);
        assert_eq!(rmse(&img(2, 1, &[0, 0]), &img(2, 1, &[10, 10])).unwrap(), 10.0);
        let r = rmse(&img(2, 1, &[3, 4]), &img(2, 1, &[0, 0])).unwrap();
        assert!((r - 12.5f64.sqrt()).abs() < 1e-12);
        assert!((r - 3.5355).abs() < 1e-4);
    }

    #[test]
    fn psnr_examples() {
        let x = gradient(5, 4);
        assert_eq!(psnr(&x, &x).unwrap(), f64::INFINITY);
        assert_eq!(psnr(&img(1, 1, &[0]), &img(1, 1, &[255])).unwrap(), 0.0);
        let p = psnr(&img(2, 1, &[0, 0]), &img(2, 1, &[10, 10])).unwrap();
        assert!((p - 10.0 * 650.25f64.log10()).abs() < 1e-12);
        assert!((p - 28.13).abs() < 0.005);
    }

    #[test]
    fn snr_examples() {
        let x = gradient(5, 4);
        assert_eq!(snr(&x, &x).unwrap(), f64::INFINITY);
        let s = snr(&img(1, 1, &[100]), &img(1, 1, &[110])).unwrap();
        assert!((s - 20.0).abs() < 1e-12);
        assert_eq!(snr(&img(1, 1, &[0]), &img(1, 1, &[10])).unwrap(), f64::NEG_INFINITY);
        assert_eq!(
            snr(&img(1, 1, &[0]), &img(1, 1, &[0])).unwrap_err(),
            Error::UndefinedSnr
        );
    }

    #[test]
    fn mae_examples() {
        let x = gradient(5, 4);
        assert_eq!(mae(&x, &x).unwrap(), 0.0);
        let shifted = GrayImage::new(5, 4, x.pixels().iter().map(|p| p + 7).collect()).unwrap();
        assert_eq!(mae(&x, &shifted).unwrap(), 7.0);
        assert_eq!(mae(&img(2, 1, &[0, 10]), &img(2, 1, &[5, 0])).unwrap(), 7.5);
    }

    #[test]
    fn pcc_examples() {
        let x = gradient(6, 3);
        assert!((pcc(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!((pcc(&x, &invert(&x)).unwrap() + 1.0).abs() < 1e-12);
        let a = img(3, 1, &[0, 50, 100]);
        let b = img(3, 1, &[3, 103, 203]);
        assert!((pcc(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        let flat = GrayImage::filled(6, 3, 9).unwrap();
        assert_eq!(pcc(&flat, &x).unwrap_err(), Error::UndefinedCorrelation);
        assert_eq!(pcc(&x, &flat).unwrap_err(), Error::UndefinedCorrelation);
    }

    #[test]
    fn uiq_examples() {
        let x = gradient(8, 8);
        assert_eq!(uiq(&x, &x, 8).unwrap(), 1.0);
        let big = gradient(12, 11);
        assert!((uiq(&big, &big, 8).unwrap() - 1.0).abs() < 1e-12);
        assert!(uiq(&x, &invert(&x), 8).unwrap() < 0.0);
    }

    #[test]
    fn uiq_errors() {
        let x = gradient(8, 7);
        assert_eq!(uiq(&x, &x, 8).unwrap_err(), Error::WindowTooLarge { window: 8 });
        let flat = GrayImage::filled(8, 8, 100).unwrap();
        assert_eq!(uiq(&flat, &flat, 8).unwrap_err(), Error::UndefinedUiq);
        assert!(matches!(uiq(&flat, &flat, 0), Err(Error::InvalidParameter(_))));
        // single-pixel windows never have variance
        let x = gradient(3, 3);
        assert_eq!(uiq(&x, &x, 1).unwrap_err(), Error::UndefinedUiq);
    }

    #[test]
    fn dimension_mismatch_everywhere() {
        let a = GrayImage::filled(2, 2, 1).unwrap();
        let b = GrayImage::filled(4, 1, 1).unwrap();
        assert!(mse(&a, &b).is_err());
        assert!(rmse(&a, &b).is_err());
        assert!(psnr(&a, &b).is_err());
        assert!(snr(&a, &b).is_err());
        assert!(mae(&a, &b).is_err());
        assert!(pcc(&a, &b).is_err());
        assert!(uiq(&a, &b, 1).is_err());
        assert!(full_report(&a, &b).is_err());
    }

    #[test]
    fn identity_report() {
        let x = gradient(10, 9);
        let r = full_report(&x, &x).unwrap();
        assert_eq!(r.mse, MetricValue::Value(0.0));
        assert_eq!(r.rmse, MetricValue::Value(0.0));
        assert_eq!(r.mae, MetricValue::Value(0.0));
        assert_eq!(r.psnr, MetricValue::Value(f64::INFINITY));
        assert_eq!(r.snr, MetricValue::Value(f64::INFINITY));
        assert!((r.pcc.value().unwrap() - 1.0).abs() < 1e-12);
        assert!((r.uiq.value().unwrap() - 1.0).abs() < 1e-12);
        let keys: Vec<_> = r.entries().iter().map(|e| e.0).collect();
        assert_eq!(keys, METRIC_NAMES);
    }

    #[test]
    fn constant_original_report() {
        let flat = GrayImage::filled(9, 9, 40).unwrap();
        let r = full_report(&flat, &gradient(9, 9)).unwrap();
        assert_eq!(r.pcc, MetricValue::Undefined);
        for (k, v) in r.entries() {
            if k != "pcc" {
                assert!(v.is_defined(), "{k}");
            }
        }
    }

    #[test]
    fn metric_value_rendering() {
        for v in [
            MetricValue::Undefined,
            MetricValue::Value(f64::INFINITY),
            MetricValue::Value(f64::NEG_INFINITY),
            MetricValue::Value(27.18847),
            MetricValue::Value(0.1 + 0.2),
        ] {
            assert_eq!(MetricValue::parse(&v.to_string()), Some(v));
        }
        assert_eq!(format!("{:.2}", MetricValue::Value(1.0 / 3.0)), "0.33");
        assert_eq!(format!("{:.2}", MetricValue::Undefined), "undefined");
        assert_eq!(MetricValue::parse("NaN"), None);
    }
}
