//! Plain-text comparison table over summary rows.
//!
//! Rows are grouped by (agent, feedback type) with one column per expert
//! quality. Within a cell the entropy threshold with the lowest mean
//! cumulative regret is shown; `*` marks the lowest cell of each group.

use std::collections::BTreeMap;
use std::fmt::Write;

use cbhf_core::analysis::mean_std;

use crate::io::{fmt_g9, SummaryRow};

#[derive(Debug, Clone, PartialEq)]
pub struct ReportCell {
    pub q: f64,
    /// Best threshold in this cell, when the rows carry one.
    pub lambda: Option<f64>,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub runs: usize,
    pub is_min: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportGroup {
    pub agent: String,
    pub feedback_type: String,
    /// One entry per q level, `None` where the group has no rows.
    pub cells: Vec<Option<ReportCell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub qs: Vec<f64>,
    pub groups: Vec<ReportGroup>,
}

/// Exact grouping key for a float.
fn key(x: f64) -> u64 {
    x.to_bits()
}

pub fn build_report(rows: &[SummaryRow]) -> Report {
    let mut qs: Vec<f64> = rows.iter().map(|r| r.q).collect();
    qs.sort_by(f64::total_cmp);
    qs.dedup();

    // (agent, feedback) -> q -> lambda -> regrets
    type Cells = BTreeMap<u64, BTreeMap<Option<u64>, Vec<f64>>>;
    let mut groups: BTreeMap<(String, String), Cells> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.agent.clone(), r.feedback_type.clone()))
            .or_default()
            .entry(key(r.q))
            .or_default()
            .entry(r.lambda.map(key))
            .or_default()
            .push(r.cum_regret);
    }

    let groups = groups
        .into_iter()
        .map(|((agent, feedback_type), by_q)| {
            let mut cells: Vec<Option<ReportCell>> = qs
                .iter()
                .map(|&q| {
                    let by_lambda = by_q.get(&key(q))?;
                    by_lambda
                        .iter()
                        .map(|(lambda, regrets)| {
                            let ms = mean_std(regrets.iter().copied()).expect("non-empty");
                            ReportCell {
                                q,
                                lambda: lambda.map(f64::from_bits),
                                mean_regret: ms.mean,
                                std_regret: ms.std,
                                runs: regrets.len(),
                                is_min: false,
                            }
                        })
                        // first (smallest λ) wins ties
                        .reduce(|best, c| {
                            if c.mean_regret < best.mean_regret {
                                c
                            } else {
                                best
                            }
                        })
                })
                .collect();
            let best = cells
                .iter()
                .flatten()
                .map(|c| c.mean_regret)
                .fold(f64::INFINITY, f64::min);
            if let Some(c) = cells.iter_mut().flatten().find(|c| c.mean_regret == best) {
                c.is_min = true;
            }
            ReportGroup {
                agent,
                feedback_type,
                cells,
            }
        })
        .collect();
    Report { qs, groups }
}

impl Report {
    pub fn render(&self) -> String {
        let mut table: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["agent".to_string(), "feedback".to_string()];
        header.extend(self.qs.iter().map(|q| format!("q={}", fmt_g9(*q))));
        table.push(header);
        for g in &self.groups {
            let mut line = vec![g.agent.clone(), g.feedback_type.clone()];
            line.extend(g.cells.iter().map(|c| match c {
                None => "-".to_string(),
                Some(c) => {
                    let mut s = format!("{:.2} +- {:.2}", c.mean_regret, c.std_regret);
                    if let Some(l) = c.lambda {
                        let _ = write!(s, " (lambda={})", fmt_g9(l));
                    }
                    if c.is_min {
                        s.push_str(" *");
                    }
                    s
                }
            }));
            table.push(line);
        }
        let cols = table[0].len();
        let widths: Vec<usize> = (0..cols)
            .map(|i| table.iter().map(|r| r[i].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &table {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out.push_str("mean cumulative regret +- std over runs; * = lowest in row\n");
        out
    }
}
