//! Command implementations behind the `mdhe` binary.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use mdhe_core::equalize::{Method, MethodKind};
use mdhe_core::io::{self, ImageFileFormat, IoError};
use mdhe_core::metrics::{MetricReport, MetricValue};
use mdhe_core::{compute_histogram, full_report, AheConfig, GrayImage, Histogram, MdheConfig, RmsheDepth};

/// A failed command. Usage errors exit with 2, everything else with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<mdhe_core::Error> for CliError {
    fn from(e: mdhe_core::Error) -> Self {
        match e {
            mdhe_core::Error::InvalidParameter(m) => CliError::Usage(m),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

/// Parses a `RxC` grid such as `8x8`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid {s:?} is not of the form RxC"))?;
    let parse = |v: &str| match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("grid {s:?} needs positive row and column counts")),
    };
    Ok((parse(r)?, parse(c)?))
}

/// Method parameters shared by `enhance` and `compare`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodOptions {
    pub depth: u8,
    pub grid: (usize, usize),
    pub brightness_limit: f64,
    pub clip_limit: Option<f64>,
    pub blend: bool,
}

impl Default for MethodOptions {
    fn default() -> Self {
        Self {
            depth: RmsheDepth::default().get(),
            grid: (8, 8),
            brightness_limit: MdheConfig::default().brightness_limit,
            clip_limit: None,
            blend: false,
        }
    }
}

impl MethodOptions {
    pub fn method(&self, kind: MethodKind) -> Result<Method, CliError> {
        let (rows, cols) = self.grid;
        let method = match kind {
            MethodKind::Che => Method::Che,
            MethodKind::Bhe => Method::Bhe,
            MethodKind::Rmshe => Method::Rmshe(RmsheDepth::new(self.depth)?),
            MethodKind::Ahe => {
                let cfg = AheConfig {
                    tile_rows: rows,
                    tile_cols: cols,
                    clip_limit: self.clip_limit,
                };
                cfg.validate()?;
                Method::Ahe(cfg)
            }
            MethodKind::Mdhe => {
                let cfg = MdheConfig {
                    grid_rows: rows,
                    grid_cols: cols,
                    brightness_limit: self.brightness_limit,
                    blend_tiles: self.blend,
                };
                cfg.validate()?;
                Method::Mdhe(cfg)
            }
        };
        Ok(method)
    }
}

/// Report methods in the order of the comparison table.
pub const REPORT_ORDER: [MethodKind; 5] = [
    MethodKind::Che,
    MethodKind::Bhe,
    MethodKind::Rmshe,
    MethodKind::Ahe,
    MethodKind::Mdhe,
];

/// Loads an image and remembers the container it came in.
pub fn load_with_format(path: &Path) -> Result<(GrayImage, ImageFileFormat), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let img = io::decode(&bytes)?;
    let format = ImageFileFormat::detect(&bytes).expect("decode succeeded");
    Ok((img, format))
}

pub fn enhance(
    input: &Path,
    output: &Path,
    kind: MethodKind,
    opts: &MethodOptions,
    format: Option<ImageFileFormat>,
) -> Result<(), CliError> {
    let method = opts.method(kind)?;
    let img = io::load_image(input)?;
    let out = method.apply(&img)?;
    let format = format.unwrap_or_else(|| ImageFileFormat::for_output_path(output));
    io::save_image(&out, output, format)?;
    Ok(())
}

/// `level,count` CSV with 256 data rows.
pub fn histogram_csv(hist: &Histogram) -> String {
    let mut out = String::from("level,count\n");
    for (level, count) in hist.counts().iter().enumerate() {
        out.push_str(&format!("{level},{count}\n"));
    }
    out
}

pub fn hist(input: &Path) -> Result<String, CliError> {
    let img = io::load_image(input)?;
    Ok(histogram_csv(&compute_histogram(&img)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub method: MethodKind,
    pub output: PathBuf,
    pub metrics: MetricReport,
}

/// One metric row per method, in [`REPORT_ORDER`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub source: PathBuf,
    pub rows: Vec<CompareRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Self::Table),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown format {s:?} (expected table, csv or json)")),
        }
    }
}

/// Runs every method on `input`, writes the enhanced images into `outdir`
/// and scores each one against the original.
pub fn compare(input: &Path, outdir: &Path, opts: &MethodOptions) -> Result<CompareReport, CliError> {
    let methods = REPORT_ORDER
        .iter()
        .map(|&k| opts.method(k))
        .collect::<Result<Vec<_>, _>>()?;
    let (img, in_format) = load_with_format(input)?;
    let out_format = match in_format {
        ImageFileFormat::Png => ImageFileFormat::Png,
        _ => ImageFileFormat::PgmBinary,
    };
    fs::create_dir_all(outdir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", outdir.display())))?;
    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("image");
    let mut rows = Vec::with_capacity(methods.len());
    for method in methods {
        let kind = method.kind();
        let enhanced = method.apply(&img)?;
        let output = outdir.join(format!(
            "{stem}_{}.{}",
            kind.label().to_ascii_lowercase(),
            out_format.extension()
        ));
        io::save_image(&enhanced, &output, out_format)?;
        rows.push(CompareRow {
            method: kind,
            output,
            metrics: full_report(&img, &enhanced)?,
        });
    }
    Ok(CompareReport {
        source: input.to_owned(),
        rows,
    })
}

/// Row labels of the table format, in column order of the CSV.
const TABLE_LABELS: [(&str, &str); 7] = [
    ("PSNR", "higher"),
    ("MSE", "lower"),
    ("RMSE", "lower"),
    ("UIQ", "higher"),
    ("PCC", "higher"),
    ("SNR", "higher"),
    ("MAE", "lower"),
];

impl CompareReport {
    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Table => self.to_table(),
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }

    /// `method,psnr,mse,rmse,uiq,pcc,snr,mae` with one row per method.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,psnr,mse,rmse,uiq,pcc,snr,mae\n");
        for row in &self.rows {
            out.push_str(row.method.label());
            for (_, v) in row.metrics.entries() {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Parameters down, methods across, five decimals.
    pub fn to_table(&self) -> String {
        let mut out = format!("{:<18}", "Parameter/method");
        for row in &self.rows {
            out.push_str(&format!("{:>14}", row.method.label()));
        }
        out.push_str("  better\n");
        for (i, (label, better)) in TABLE_LABELS.iter().enumerate() {
            out.push_str(&format!("{label:<18}"));
            for row in &self.rows {
                let cell = format!("{:.5}", row.metrics.entries()[i].1);
                out.push_str(&format!("{cell:>14}"));
            }
            out.push_str(&format!("  {better}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let methods: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                obj.insert("method".into(), row.method.label().into());
                obj.insert("output".into(), row.output.display().to_string().into());
                for (key, v) in row.metrics.entries() {
                    obj.insert(key.into(), metric_json(v));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({
            "source": self.source.display().to_string(),
            "methods": methods,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report is valid JSON");
        s.push('\n');
        s
    }
}

/// Finite values become numbers; sentinels use the same words as the CSV.
fn metric_json(v: MetricValue) -> serde_json::Value {
    match v {
        MetricValue::Value(x) if x.is_finite() => x.into(),
        other => other.to_string().into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> CompareReport {
        let v = |x: f64| MetricValue::Value(x);
        let metrics = MetricReport::from_values([
            v(27.18847),
            v(125.20817),
            v(11.18965),
            v(0.242),
            MetricValue::Undefined,
            v(f64::INFINITY),
            v(6.67066),
        ]);
        CompareReport {
            source: "in.pgm".into(),
            rows: REPORT_ORDER
                .iter()
                .map(|&method| CompareRow {
                    method,
                    output: format!("out/{method}.pgm").into(),
                    metrics,
                })
                .collect(),
        }
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("8x8"), Ok((8, 8)));
        assert_eq!(parse_grid("2X3"), Ok((2, 3)));
        assert!(parse_grid("0x3").is_err());
        assert!(parse_grid("8").is_err());
        assert!(parse_grid("ax3").is_err());
    }

    #[test]
    fn options_validation() {
        let opts = MethodOptions {
            depth: 8,
            ..MethodOptions::default()
        };
        assert_eq!(opts.method(MethodKind::Rmshe).unwrap_err().exit_code(), 2);
        let opts = MethodOptions {
            clip_limit: Some(0.5),
            ..MethodOptions::default()
        };
        assert_eq!(opts.method(MethodKind::Ahe).unwrap_err().exit_code(), 2);
        let opts = MethodOptions {
            brightness_limit: 300.0,
            ..MethodOptions::default()
        };
        assert_eq!(opts.method(MethodKind::Mdhe).unwrap_err().exit_code(), 2);
        assert_eq!(
            MethodOptions::default().method(MethodKind::Mdhe).unwrap(),
            Method::Mdhe(MdheConfig::default())
        );
    }

    #[test]
    fn csv_layout() {
        let csv = report().to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "method,psnr,mse,rmse,uiq,pcc,snr,mae");
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[1], "CHE,27.18847,125.20817,11.18965,0.242,undefined,inf,6.67066");
        let methods: Vec<_> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(methods, ["CHE", "BHE", "RMSHE", "AHE", "MDHE"]);
    }

    #[test]
    fn table_layout() {
        let table = report().to_table();
        let lines: Vec<_> = table.lines().collect();
        assert_eq!(lines.len(), 8);
        let header: Vec<_> = lines[0].split_whitespace().collect();
        assert_eq!(header, ["Parameter/method", "CHE", "BHE", "RMSHE", "AHE", "MDHE", "better"]);
        let labels: Vec<_> = lines[1..].iter().map(|l| l.split_whitespace().next().unwrap()).collect();
        assert_eq!(labels, ["PSNR", "MSE", "RMSE", "UIQ", "PCC", "SNR", "MAE"]);
        assert!(lines[1].contains("27.18847"));
        assert!(lines[2].ends_with("lower"));
        assert!(lines[5].contains("undefined"));
        assert!(lines[6].contains("inf"));
    }

    #[test]
    fn json_layout() {
        let doc: serde_json::Value = serde_json::from_str(&report().to_json()).unwrap();
        let methods = doc["methods"].as_array().unwrap();
        assert_eq!(methods.len(), 5);
        assert_eq!(methods[0]["method"], "CHE");
        assert_eq!(methods[0]["psnr"], 27.18847);
        assert_eq!(methods[0]["pcc"], "undefined");
        assert_eq!(methods[0]["snr"], "inf");
        assert_eq!(doc["source"], "in.pgm");
    }

    #[test]
    fn histogram_csv_rows() {
        let img = GrayImage::new(2, 2, vec![0, 0, 255, 255]).unwrap();
        let csv = histogram_csv(&compute_histogram(&img));
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 257);
        assert_eq!(lines[0], "level,count");
        assert_eq!(lines[1], "0,2");
        assert_eq!(lines[2], "1,0");
        assert_eq!(lines[256], "255,2");
    }
}
