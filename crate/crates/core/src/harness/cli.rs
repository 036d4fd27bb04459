use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use super::ber::run_ber_sweep;
use super::config::{parse_list, parse_range, DecoderKind, SimConfig, SnrConvention};
use super::emit::{emit_results, OutputFormat};
use crate::channel::ChipVector;
use crate::codebook::{build_codebook, max_ud_columns, verify_ud, TernaryMatrix};
use crate::complexity::{complexity_report, ReportMode, SampleMode};
use crate::decoder::{fda_decode, ml_decode};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "udcdma",
    version,
    about = "Recursive UD ternary codes for overloaded CDMA"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Analytic,
    Empirical,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the signature matrix of a level.
    Gen {
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Exhaustive unique-decodability check; exits 1 when a null vector exists.
    Verify {
        #[arg(long, required_unless_present = "input", conflicts_with = "input")]
        level: Option<u32>,
        /// CSV matrix to check instead of a built level.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Largest UD ternary matrix with the given number of rows.
    Ft {
        #[arg(long)]
        length: usize,
    },
    /// Decode one received vector.
    Decode {
        #[arg(long)]
        level: u32,
        /// Comma-separated chips.
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, value_enum, default_value = "fda")]
        decoder: DecoderKind,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
    },
    /// Monte-Carlo bit-error-rate sweep.
    Ber {
        #[arg(long)]
        level: u32,
        /// Eb/N0 grid in dB as start:step:stop.
        #[arg(long, conflicts_with = "sigma", required_unless_present = "sigma")]
        snr: Option<String>,
        /// Comma-separated per-chip noise sigmas.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "fda")]
        decoders: Vec<DecoderKind>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        /// Worker threads; 0 uses UDCDMA_WORKERS or all cores.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        min_errors: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
    },
    /// Average comparison counts of the fast decoder.
    Complexity {
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        /// Sample this many words instead of enumerating all of them.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

/// Runs the CLI and returns the process exit code. Usage errors give 2,
/// failed checks 1.
pub fn cli_main<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    match run(cli.command, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("udcdma: {e}");
            1
        }
    }
}

fn read_csv_matrix(path: &PathBuf) -> Result<TernaryMatrix> {
    let text = std::fs::read_to_string(path)?;
    let rows: Vec<Vec<i8>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<i8>()
                        .map_err(|_| Error::InvalidArgument(format!("bad matrix entry '{v}'")))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    TernaryMatrix::from_rows(&rows)
}

fn fmt_word(bits: &[i8]) -> String {
    bits.iter()
        .map(|&b| if b > 0 { "+1" } else { "-1" })
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Gen { level, format } => {
            let c = build_codebook(level)?;
            match format {
                OutputFormat::Csv => write!(out, "{}", c.to_csv())?,
                OutputFormat::Json => writeln!(out, "{}", c.to_json())?,
            }
        }
        Command::Verify { level, input } => {
            let m = match (level, input) {
                (_, Some(path)) => read_csv_matrix(&path)?,
                (Some(level), None) => build_codebook(level)?.into_matrix(),
                (None, None) => unreachable!("clap requires one"),
            };
            let w = verify_ud(&m)?;
            match w.counterexample {
                None => writeln!(
                    out,
                    "UD: {}x{} matrix has no nonzero ternary null vector",
                    m.rows(),
                    m.cols()
                )?,
                Some(d) => {
                    let d: Vec<String> = d.iter().map(|v| v.to_string()).collect();
                    writeln!(out, "not UD: null vector d = ({})", d.join(","))?;
                    return Ok(1);
                }
            }
        }
        Command::Ft { length } => {
            let r = max_ud_columns(length)?;
            writeln!(out, "f_t({length}) = {}", r.max_columns)?;
            writeln!(out, "search nodes: {}", r.nodes)?;
            writeln!(out, "exemplar:")?;
            write!(out, "{}", r.exemplar.to_csv())?;
        }
        Command::Decode {
            level,
            y,
            decoder,
            amplitude,
        } => {
            let c = build_codebook(level)?;
            let y = ChipVector::new(parse_list(&y)?)?;
            let o = match decoder {
                DecoderKind::Fda => fda_decode(&c, &y, amplitude)?,
                DecoderKind::Ml => ml_decode(&c, &y, amplitude)?,
            };
            writeln!(out, "x = {}", fmt_word(o.word.bits()))?;
            writeln!(out, "comparisons = {}", o.comparisons)?;
        }
        Command::Ber {
            level,
            snr,
            sigma,
            trials,
            seed,
            decoders,
            out: path,
            format,
            workers,
            min_errors,
            amplitude,
        } => {
            let (grid, conv) = match (snr, sigma) {
                (Some(s), _) => (parse_range(&s)?, SnrConvention::Ebn0),
                (None, Some(s)) => (parse_list(&s)?, SnrConvention::RawSigma),
                (None, None) => unreachable!("clap requires one"),
            };
            let mut decs = Vec::new();
            for d in decoders {
                if !decs.contains(&d) {
                    decs.push(d);
                }
            }
            let cfg = SimConfig {
                level,
                snr_grid: grid,
                snr_convention: conv,
                trials_per_point: trials,
                rng_seed: seed,
                decoders: decs,
                amplitude,
                workers,
                min_errors,
            };
            let curve = run_ber_sweep(&cfg)?;
            emit_results(&curve, format, &path)?;
            writeln!(
                out,
                "wrote {} points to {}",
                curve.points.len(),
                path.display()
            )?;
        }
        Command::Complexity {
            level,
            mode,
            samples,
            seed,
            json,
        } => {
            let mode = match mode {
                ModeArg::Analytic => ReportMode::Analytic,
                ModeArg::Empirical => ReportMode::Empirical,
                ModeArg::Both => ReportMode::Both,
            };
            let sample_mode = match samples {
                Some(count) => SampleMode::Sampled { count, seed },
                None => SampleMode::Exhaustive,
            };
            let r = complexity_report(level, mode, sample_mode)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
            } else {
                writeln!(out, "level {level}")?;
                for (name, v) in [
                    ("G", &r.g),
                    ("H", &r.h),
                    ("U", &r.u),
                    ("U (counted)", &r.u_counted),
                ] {
                    if let Some(v) = v {
                        writeln!(out, "  {name:<12} {v}")?;
                    }
                }
                if let Some(t) = r.t {
                    writeln!(out, "  analytic T   {t:.5}")?;
                }
                if let Some(t) = r.t_hat_prev {
                    writeln!(out, "  T' (i-1)     {t:.5}")?;
                }
                if let Some(t) = r.t_measured_model {
                    writeln!(
                        out,
                        "  analytic T, measured level-2 cost and counted U   {t:.5}"
                    )?;
                }
                if let Some(t) = r.empirical_t {
                    writeln!(
                        out,
                        "  empirical T  {t:.5}  ({})",
                        r.empirical_exact.as_deref().unwrap_or("")
                    )?;
                }
                writeln!(out, "  ML hypotheses {}", r.ml_hypotheses)?;
            }
        }
    }
    Ok(0)
}
