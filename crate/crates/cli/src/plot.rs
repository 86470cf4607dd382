//! Aggregates a trace into per-algorithm (round, mean, standard error) series.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use blits::stats::MeanEstimate;

use crate::error::{CliError, Result};
use crate::experiment::TraceFile;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub algorithm: String,
    pub adaptive_round: usize,
    pub mean: f64,
    pub std_err: f64,
    pub runs: usize,
}

/// Value of one run at every round from its first to `last_round`, carrying
/// the latest observation forward.
fn carried_forward(rows: &[(usize, f64)], last_round: usize) -> Vec<(usize, f64)> {
    let Some(&(first, _)) = rows.first() else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(last_round + 1 - first);
    let mut next = 0;
    let mut current = rows[0].1;
    for round in first..=last_round {
        while next < rows.len() && rows[next].0 <= round {
            current = rows[next].1;
            next += 1;
        }
        out.push((round, current));
    }
    out
}

/// `(algorithm, seed)` to `(round, value)` rows.
pub type SeedSeries = BTreeMap<(String, u64), Vec<(usize, f64)>>;

/// Per-seed series, aligned to the latest round of any algorithm.
pub fn per_seed_series(trace: &TraceFile) -> Result<SeedSeries> {
    if trace.records.is_empty() {
        return Err(CliError::Spec("trace has no records".into()));
    }
    let mut runs = SeedSeries::new();
    for r in &trace.records {
        runs.entry((r.algorithm.clone(), r.seed)).or_default().push((r.adaptive_round, r.value));
    }
    let last_round = trace.records.iter().map(|r| r.adaptive_round).max().unwrap_or(0);
    Ok(runs
        .into_iter()
        .map(|(key, mut rows)| {
            rows.sort_by_key(|&(round, _)| round);
            (key, carried_forward(&rows, last_round))
        })
        .collect())
}

/// Mean and standard error across seeds at each round.
pub fn emit_plot_data(trace: &TraceFile) -> Result<Vec<PlotPoint>> {
    let mut by_round: BTreeMap<(String, usize), Vec<f64>> = BTreeMap::new();
    for ((algorithm, _), series) in per_seed_series(trace)? {
        for (round, value) in series {
            by_round.entry((algorithm.clone(), round)).or_default().push(value);
        }
    }
    Ok(by_round
        .into_iter()
        .map(|((algorithm, adaptive_round), values)| {
            let est = MeanEstimate::from_samples(&values);
            PlotPoint { algorithm, adaptive_round, mean: est.mean, std_err: est.std_err, runs: values.len() }
        })
        .collect())
}

pub fn plot_csv(points: &[PlotPoint]) -> String {
    let mut out = String::from("algorithm,adaptive_round,mean_value,stderr,runs\n");
    for p in points {
        let _ = writeln!(out, "{},{},{},{},{}", p.algorithm, p.adaptive_round, p.mean, p.std_err, p.runs);
    }
    out
}

pub fn per_seed_csv(series: &SeedSeries) -> String {
    let mut out = String::from("algorithm,seed,adaptive_round,value\n");
    for ((algorithm, seed), rows) in series {
        for (round, value) in rows {
            let _ = writeln!(out, "{algorithm},{seed},{round},{value}");
        }
    }
    out
}
