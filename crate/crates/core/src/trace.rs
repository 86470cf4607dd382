//! Per-round records of an algorithm run.

use crate::error::Result;
use crate::oracle::{Element, Oracle, QueryLedger};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub adaptive_round: usize,
    pub cumulative_queries: u64,
    pub solution_size: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
    /// SIEVE calls that hit their iteration cap before returning.
    pub rho_cap_hits: usize,
}

impl RunTrace {
    /// Appends one row per ledger round not yet covered by the trace. All
    /// new rows but the last report `previous`; the last reports `current`.
    pub(crate) fn catch_up(
        &mut self,
        ledger: &QueryLedger,
        previous: (usize, f64),
        current: (usize, f64),
    ) {
        let first = self.rows.last().map_or(1, |r| r.adaptive_round + 1);
        let last = ledger.adaptive_rounds();
        let mut cumulative: u64 = ledger.per_round()[..first.saturating_sub(1).min(last)]
            .iter()
            .sum();
        for round in first..=last {
            cumulative += ledger.per_round()[round - 1];
            let (solution_size, value) = if round == last { current } else { previous };
            self.rows.push(TraceRow {
                adaptive_round: round,
                cumulative_queries: cumulative,
                solution_size,
                value,
            });
        }
    }

    pub fn max_value(&self) -> Option<f64> {
        self.rows.iter().map(|r| r.value).reduce(f64::max)
    }
}

/// Result of one algorithm run.
#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub solution: Vec<Element>,
    pub value: f64,
    pub ledger: QueryLedger,
    pub trace: RunTrace,
}

impl Run {
    pub(crate) fn finish(oracle: &Oracle<'_>, mut solution: Vec<Element>, trace: RunTrace) -> Result<Self> {
        solution.sort_unstable();
        Ok(Self {
            value: oracle.value_unrecorded(&solution)?,
            solution,
            ledger: oracle.ledger().clone(),
            trace,
        })
    }
}
