use std::fs;
use std::path::Path;

use super::ber::BerCurve;
use crate::{Error, Result};

pub const CSV_HEADER: &str =
    "snr_db,sigma,decoder,trials,bit_errors,ber,ci_low,ci_high,word_errors,wer,mean_comparisons";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Header plus one line per point. Floats use the shortest representation
/// that round-trips; `snr_db` is empty in raw-sigma mode.
pub fn to_csv(curve: &BerCurve) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in &curve.points {
        let snr = p.snr_db.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{snr},{},{},{},{},{},{},{},{},{},{}\n",
            p.sigma,
            p.decoder,
            p.trials,
            p.bit_errors,
            p.ber,
            p.ci_low,
            p.ci_high,
            p.word_errors,
            p.wer,
            p.mean_comparisons
        ));
    }
    out
}

/// Points plus the full configuration.
pub fn to_json(curve: &BerCurve) -> Result<String> {
    Ok(serde_json::to_string_pretty(curve)?)
}

pub fn from_json(s: &str) -> Result<BerCurve> {
    Ok(serde_json::from_str(s)?)
}

pub fn emit_results(curve: &BerCurve, format: OutputFormat, path: &Path) -> Result<()> {
    if curve.points.is_empty() {
        return Err(Error::InvalidArgument(
            "refusing to write an empty curve".into(),
        ));
    }
    let body = match format {
        OutputFormat::Csv => to_csv(curve),
        OutputFormat::Json => to_json(curve)?,
    };
    fs::write(path, body)?;
    Ok(())
}
