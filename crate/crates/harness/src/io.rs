//! Dataset loading and the round/summary CSV formats.
//!
//! Floats are written with 9 significant digits in `%g` style, lines end in
//! LF, and every file is written to a temporary sibling and renamed into
//! place so readers never observe a partial file.

use std::fs;
use std::io::Write;
use std::path::Path;

use cbhf_core::analysis::RoundLog;
use cbhf_core::env::MultiLabelDataset;
use csv::{ReaderBuilder, Terminator, WriterBuilder};
use tempfile::NamedTempFile;

use crate::error::{HarnessError, Result};

pub const ROUND_HEADER: [&str; 8] = [
    "t",
    "action",
    "true_reward",
    "feedback_reward",
    "optimal_value",
    "entropy",
    "feedback_kind",
    "expert_correct",
];

pub const SUMMARY_HEADER: [&str; 13] = [
    "env",
    "agent",
    "gate",
    "feedback_type",
    "lambda",
    "q",
    "run",
    "cum_regret",
    "cum_reward",
    "feedback_fraction",
    "ar_count",
    "rm_count",
    "cost_adjusted_reward",
];

pub const GRID_HEADER: [&str; 11] = [
    "env",
    "agent",
    "feedback_type",
    "lambda",
    "q",
    "runs",
    "mean_regret",
    "std_regret",
    "mean_feedback_fraction",
    "mean_cum_reward",
    "mean_cost_adjusted_reward",
];

/// Reads a multi-label dataset file (`n m k` header, then one
/// `labels features` line per instance).
pub fn load_xmlc(path: &Path) -> Result<MultiLabelDataset> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    MultiLabelDataset::parse(&text).map_err(|e| HarnessError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn write_xmlc(path: &Path, ds: &MultiLabelDataset) -> Result<()> {
    write_atomic(path, ds.to_text().as_bytes())
}

/// Formats like C's `%.9g`.
pub fn fmt_g9(x: f64) -> String {
    const P: i32 = 9;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    // Round to P significant digits first; the exponent of the rounded value
    // decides between fixed and scientific notation.
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= P {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (P - 1 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_g9).unwrap_or_default()
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| HarnessError::io(dir, e))?;
    tmp.write_all(bytes)
        .map_err(|e| HarnessError::io(tmp.path(), e))?;
    tmp.persist(path)
        .map_err(|e| HarnessError::io(path, e.error))?;
    Ok(())
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn round_csv_bytes(logs: &[RoundLog]) -> Vec<u8> {
    csv_bytes(
        &ROUND_HEADER,
        logs.iter().map(|l| {
            [
                l.t.to_string(),
                l.action.get().to_string(),
                fmt_g9(l.true_reward),
                fmt_g9(l.feedback_reward),
                fmt_g9(l.optimal_value),
                fmt_g9(l.entropy),
                l.feedback.kind_str().to_string(),
                match l.feedback.kind {
                    Some(_) => l.feedback.expert_correct.to_string(),
                    None => String::new(),
                },
            ]
        }),
    )
}

pub fn write_round_csv(path: &Path, logs: &[RoundLog]) -> Result<()> {
    write_atomic(path, &round_csv_bytes(logs))
}

/// One line of a summary file.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub env: String,
    pub agent: String,
    pub gate: String,
    pub feedback_type: String,
    /// Entropy threshold, for fixed-entropy gates only.
    pub lambda: Option<f64>,
    pub q: f64,
    pub run: u64,
    pub cum_regret: f64,
    pub cum_reward: f64,
    pub feedback_fraction: f64,
    pub ar_count: u64,
    pub rm_count: u64,
    pub cost_adjusted_reward: f64,
}

pub fn summary_csv_bytes(rows: &[SummaryRow]) -> Vec<u8> {
    csv_bytes(
        &SUMMARY_HEADER,
        rows.iter().map(|r| {
            [
                r.env.clone(),
                r.agent.clone(),
                r.gate.clone(),
                r.feedback_type.clone(),
                fmt_opt(r.lambda),
                fmt_g9(r.q),
                r.run.to_string(),
                fmt_g9(r.cum_regret),
                fmt_g9(r.cum_reward),
                fmt_g9(r.feedback_fraction),
                r.ar_count.to_string(),
                r.rm_count.to_string(),
                fmt_g9(r.cost_adjusted_reward),
            ]
        }),
    )
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    write_atomic(path, &summary_csv_bytes(rows))
}

/// Aggregate of one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub env: String,
    pub agent: String,
    pub feedback_type: String,
    pub lambda: f64,
    pub q: f64,
    pub runs: usize,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub mean_feedback_fraction: f64,
    pub mean_cum_reward: f64,
    pub mean_cost_adjusted_reward: f64,
}

pub fn write_grid_csv(path: &Path, rows: &[GridRow]) -> Result<()> {
    let bytes = csv_bytes(
        &GRID_HEADER,
        rows.iter().map(|r| {
            [
                r.env.clone(),
                r.agent.clone(),
                r.feedback_type.clone(),
                fmt_g9(r.lambda),
                fmt_g9(r.q),
                r.runs.to_string(),
                fmt_g9(r.mean_regret),
                fmt_g9(r.std_regret),
                fmt_g9(r.mean_feedback_fraction),
                fmt_g9(r.mean_cum_reward),
                fmt_g9(r.mean_cost_adjusted_reward),
            ]
        }),
    );
    write_atomic(path, &bytes)
}

/// A parsed line of a round file.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub t: u64,
    pub action: usize,
    pub true_reward: f64,
    pub feedback_reward: f64,
    pub optimal_value: f64,
    pub entropy: f64,
    pub feedback_kind: String,
    pub expert_correct: Option<bool>,
}

fn read_records(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut r = ReaderBuilder::new()
        .from_path(path)
        .map_err(|source| HarnessError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
    let found = r.headers().map_err(|source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    if found.iter().ne(header.iter().copied()) {
        return Err(HarnessError::Parse {
            path: path.to_path_buf(),
            message: format!("expected header `{}`", header.join(",")),
        });
    }
    r.records()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|source| HarnessError::Csv {
            path: path.to_path_buf(),
            source,
        })
}

/// Typed access to the fields of one CSV record, with line-numbered errors.
struct Fields<'a> {
    path: &'a Path,
    rec: &'a csv::StringRecord,
}

impl Fields<'_> {
    fn err(&self, col: usize, what: &str) -> HarnessError {
        let line = self.rec.position().map_or(0, |p| p.line());
        HarnessError::Parse {
            path: self.path.to_path_buf(),
            message: format!("line {line}, column {}: {what}", col + 1),
        }
    }

    fn str(&self, col: usize) -> Result<&str> {
        self.rec
            .get(col)
            .ok_or_else(|| self.err(col, "missing field"))
    }

    fn parse<T: std::str::FromStr>(&self, col: usize) -> Result<T> {
        self.str(col)?
            .parse()
            .map_err(|_| self.err(col, "malformed value"))
    }

    fn opt<T: std::str::FromStr>(&self, col: usize) -> Result<Option<T>> {
        match self.str(col)? {
            "" => Ok(None),
            _ => self.parse(col).map(Some),
        }
    }
}

pub fn read_round_csv(path: &Path) -> Result<Vec<RoundRecord>> {
    read_records(path, &ROUND_HEADER)?
        .iter()
        .map(|rec| {
            let f = Fields { path, rec };
            Ok(RoundRecord {
                t: f.parse(0)?,
                action: f.parse(1)?,
                true_reward: f.parse(2)?,
                feedback_reward: f.parse(3)?,
                optimal_value: f.parse(4)?,
                entropy: f.parse(5)?,
                feedback_kind: f.str(6)?.to_string(),
                expert_correct: f.opt(7)?,
            })
        })
        .collect()
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    read_records(path, &SUMMARY_HEADER)?
        .iter()
        .map(|rec| {
            let f = Fields { path, rec };
            Ok(SummaryRow {
                env: f.str(0)?.to_string(),
                agent: f.str(1)?.to_string(),
                gate: f.str(2)?.to_string(),
                feedback_type: f.str(3)?.to_string(),
                lambda: f.opt(4)?,
                q: f.parse(5)?,
                run: f.parse(6)?,
                cum_regret: f.parse(7)?,
                cum_reward: f.parse(8)?,
                feedback_fraction: f.parse(9)?,
                ar_count: f.parse(10)?,
                rm_count: f.parse(11)?,
                cost_adjusted_reward: f.parse(12)?,
            })
        })
        .collect()
}
