use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdhe_cli::{parse_grid, CliError, MethodOptions, ReportFormat};
use mdhe_core::equalize::MethodKind;
use mdhe_core::io::ImageFileFormat;

/// Histogram-equalization contrast enhancement.
#[derive(Parser, Debug)]
#[command(name = "mdhe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enhance one image with one method.
    Enhance {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum, default_value = "mdhe")]
        method: MethodArg,
        /// Output encoding; defaults to PNG for `.png` paths and binary PGM otherwise.
        #[arg(long = "output-format", value_enum)]
        output_format: Option<OutputFormatArg>,
        #[command(flatten)]
        opts: OptionArgs,
    },
    /// Write the 256-bin histogram of an image as `level,count` CSV.
    Hist {
        input: PathBuf,
        /// Destination file; standard output when omitted or `-`.
        output: Option<PathBuf>,
    },
    /// Run all five methods and report the quality measures of each.
    Compare {
        input: PathBuf,
        /// Directory receiving the enhanced images.
        outdir: PathBuf,
        #[arg(long, default_value = "table", value_parser = parse_format)]
        format: ReportFormat,
        #[command(flatten)]
        opts: OptionArgs,
    },
}

#[derive(Args, Debug)]
struct OptionArgs {
    /// RMSHE recursion depth.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=7))]
    depth: u8,
    /// Tile grid for AHE and MDHE, as ROWSxCOLS.
    #[arg(long, default_value = "8x8", value_parser = parse_grid)]
    grid: (usize, usize),
    /// Largest tolerated MDHE mean-brightness drift, in gray levels.
    #[arg(long = "brightness-limit", default_value_t = 10.0, value_parser = parse_limit)]
    brightness_limit: f64,
    /// AHE histogram clip limit (a multiple of the uniform bin height, > 1).
    #[arg(long = "clip-limit", value_parser = parse_clip)]
    clip_limit: Option<f64>,
    /// Blend MDHE tile maps bilinearly instead of hard tile seams.
    #[arg(long)]
    blend: bool,
}

impl From<&OptionArgs> for MethodOptions {
    fn from(a: &OptionArgs) -> Self {
        MethodOptions {
            depth: a.depth,
            grid: a.grid,
            brightness_limit: a.brightness_limit,
            clip_limit: a.clip_limit,
            blend: a.blend,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Che,
    Ahe,
    Bhe,
    Rmshe,
    Mdhe,
}

impl From<MethodArg> for MethodKind {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Che => MethodKind::Che,
            MethodArg::Ahe => MethodKind::Ahe,
            MethodArg::Bhe => MethodKind::Bhe,
            MethodArg::Rmshe => MethodKind::Rmshe,
            MethodArg::Mdhe => MethodKind::Mdhe,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OutputFormatArg {
    Pgm,
    PgmAscii,
    Png,
}

impl From<OutputFormatArg> for ImageFileFormat {
    fn from(f: OutputFormatArg) -> Self {
        match f {
            OutputFormatArg::Pgm => ImageFileFormat::PgmBinary,
            OutputFormatArg::PgmAscii => ImageFileFormat::PgmAscii,
            OutputFormatArg::Png => ImageFileFormat::Png,
        }
    }
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse()
}

fn parse_limit(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if (0.0..=255.0).contains(&v) => Ok(v),
        _ => Err(format!("{s:?} is not a number in [0, 255]")),
    }
}

fn parse_clip(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 1.0 && v.is_finite() => Ok(v),
        _ => Err(format!("{s:?} is not a number greater than 1")),
    }
}

fn write_stdout(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Runtime(format!("cannot write to standard output: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Enhance {
            input,
            output,
            method,
            output_format,
            opts,
        } => mdhe_cli::enhance(
            &input,
            &output,
            method.into(),
            &MethodOptions::from(&opts),
            output_format.map(Into::into),
        ),
        Command::Hist { input, output } => {
            let csv = mdhe_cli::hist(&input)?;
            match output {
                Some(path) if path.as_os_str() != "-" => std::fs::write(&path, csv)
                    .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
                _ => write_stdout(&csv),
            }
        }
        Command::Compare {
            input,
            outdir,
            format,
            opts,
        } => {
            let report = mdhe_cli::compare(&input, &outdir, &MethodOptions::from(&opts))?;
            write_stdout(&report.render(format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mdhe: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
