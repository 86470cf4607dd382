//! Comparison algorithms: Greedy, RandomGreedy and the zero-round random
//! baselines.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::{Element, EvalBatch, MarginalId, Oracle};
use crate::trace::{Run, RunTrace, TraceRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StopRule {
    /// Always take `k` steps, adding negative marginals if that is all there is.
    #[default]
    ExactK,
    /// Stop once the best marginal is negative.
    NonnegativeOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaselineConfig {
    pub k: usize,
    pub seed: u64,
    pub stop_rule: StopRule,
}

impl BaselineConfig {
    pub fn new(k: usize) -> Self {
        Self { k, seed: 0, stop_rule: StopRule::ExactK }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k > n {
            return Err(Error::InvalidInput(format!("k = {} exceeds n = {n}", self.k)));
        }
        Ok(())
    }
}

/// Marginals of every real element outside `s`, in one round.
fn marginal_scan(oracle: &mut Oracle<'_>, s: &[Element]) -> Result<Vec<(Element, f64)>> {
    let n = oracle.n();
    let mut taken = vec![false; n];
    for &e in s {
        taken[e] = true;
    }
    let mut batch = EvalBatch::new();
    let ids: Vec<(Element, MarginalId)> = (0..n)
        .filter(|&a| !taken[a])
        .map(|a| (a, batch.push_marginal(s, a)))
        .collect();
    if ids.is_empty() {
        return Ok(Vec::new());
    }
    let values = oracle.evaluate(&batch)?;
    Ok(ids.into_iter().map(|(a, id)| (a, values.marginal(id))).collect())
}

fn insert_sorted(s: &mut Vec<Element>, a: Element) {
    let pos = s.partition_point(|&e| e < a);
    s.insert(pos, a);
}

/// Greedy with `k` steps; ties go to the lowest id.
pub fn greedy(oracle: &mut Oracle<'_>, k: usize) -> Result<Run> {
    greedy_with(oracle, &BaselineConfig::new(k))
}

pub fn greedy_with(oracle: &mut Oracle<'_>, cfg: &BaselineConfig) -> Result<Run> {
    cfg.validate(oracle.n())?;
    let mut s: Vec<Element> = Vec::with_capacity(cfg.k);
    let mut value = oracle.value_unrecorded(&s)?;
    let mut trace = RunTrace::default();
    for _ in 0..cfg.k {
        let scan = marginal_scan(oracle, &s)?;
        // Strict comparison over ascending ids keeps the lowest id on ties.
        let best = scan.iter().copied().fold(None, |acc: Option<(Element, f64)>, (a, g)| {
            match acc {
                Some((_, bg)) if bg >= g => acc,
                _ => Some((a, g)),
            }
        });
        let before = (s.len(), value);
        match best {
            Some((a, g)) if g >= 0.0 || cfg.stop_rule == StopRule::ExactK => {
                insert_sorted(&mut s, a);
                value = oracle.value_unrecorded(&s)?;
                trace.catch_up(oracle.ledger(), before, (s.len(), value));
            }
            _ => {
                trace.catch_up(oracle.ledger(), before, before);
                break;
            }
        }
    }
    Run::finish(oracle, s, trace)
}

/// RandomGreedy: each of `k` rounds adds a uniform pick from the `k` best
/// candidates. Candidates with negative marginal never enter the pool; when
/// fewer than `k` remain, the pool is topped up with zero-gain dummies and
/// drawing one adds nothing.
pub fn random_greedy<R: Rng + ?Sized>(oracle: &mut Oracle<'_>, k: usize, rng: &mut R) -> Result<Run> {
    BaselineConfig::new(k).validate(oracle.n())?;
    let mut s: Vec<Element> = Vec::with_capacity(k);
    let mut value = oracle.value_unrecorded(&s)?;
    let mut trace = RunTrace::default();
    for _ in 0..k {
        let mut pool = marginal_scan(oracle, &s)?;
        pool.retain(|&(_, g)| g >= 0.0);
        // Descending gain, ascending id; stable sort keeps ids ordered.
        pool.sort_by(|a, b| b.1.total_cmp(&a.1));
        pool.truncate(k);
        let pick = rng.gen_range(0..k);
        let before = (s.len(), value);
        if let Some(&(a, _)) = pool.get(pick) {
            insert_sorted(&mut s, a);
            value = oracle.value_unrecorded(&s)?;
        }
        trace.catch_up(oracle.ledger(), before, (s.len(), value));
    }
    Run::finish(oracle, s, trace)
}

fn zero_round_run(oracle: &Oracle<'_>, s: Vec<Element>) -> Result<Run> {
    let value = oracle.value_unrecorded(&s)?;
    let trace = RunTrace {
        rows: vec![TraceRow {
            adaptive_round: 0,
            cumulative_queries: 0,
            solution_size: s.len(),
            value,
        }],
        rho_cap_hits: 0,
    };
    Run::finish(oracle, s, trace)
}

/// A uniform `k`-subset. No oracle rounds.
pub fn random_subset<R: Rng + ?Sized>(oracle: &mut Oracle<'_>, k: usize, rng: &mut R) -> Result<Run> {
    BaselineConfig::new(k).validate(oracle.n())?;
    let s = index::sample(rng, oracle.n(), k).into_vec();
    zero_round_run(oracle, s)
}

/// Each element independently with probability 1/2, no size constraint.
pub fn random_unconstrained<R: Rng + ?Sized>(oracle: &mut Oracle<'_>, rng: &mut R) -> Result<Run> {
    let s = (0..oracle.n()).filter(|_| rng.gen_bool(0.5)).collect();
    zero_round_run(oracle, s)
}
