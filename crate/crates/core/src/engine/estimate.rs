//! One-round estimators of the two expectations SIEVE needs: the expected
//! marginal `Delta(a, S, X)` of every survivor, and the expected gain
//! `E[f_S(R ∩ X+)]` of a random block. Both take an explicit list of
//! equally weighted blocks, either sampled or the full enumeration.

use itertools::Itertools;
use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::{Element, EvalBatch, Oracle, QueryId};
use crate::stats::MeanEstimate;

/// Upper bound on the number of blocks an exact estimate may enumerate.
pub const EXACT_BLOCK_LIMIT: u128 = 1_000_000;

/// `m` independent uniform `b`-subsets of `x`, each sorted.
pub fn sample_blocks<R: Rng + ?Sized>(
    x: &[Element],
    b: usize,
    m: usize,
    rng: &mut R,
) -> Result<Vec<Vec<Element>>> {
    if x.len() < b {
        return Err(Error::InfeasibleSample { available: x.len(), block: b });
    }
    Ok((0..m)
        .map(|_| {
            let mut block: Vec<Element> = index::sample(rng, x.len(), b)
                .into_iter()
                .map(|i| x[i])
                .collect();
            block.sort_unstable();
            block
        })
        .collect())
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// Every `b`-subset of `x`, each sorted.
pub fn enumerate_blocks(x: &[Element], b: usize) -> Result<Vec<Vec<Element>>> {
    if x.len() < b {
        return Err(Error::InfeasibleSample { available: x.len(), block: b });
    }
    let required = binomial(x.len(), b);
    if required > EXACT_BLOCK_LIMIT {
        return Err(Error::InstanceTooLarge { required, limit: EXACT_BLOCK_LIMIT });
    }
    let mut sorted = x.to_vec();
    sorted.sort_unstable();
    Ok(sorted.into_iter().combinations(b).collect())
}

/// Per-survivor estimates of `Delta(a, S, X)`, in the order of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaEstimates {
    pub elements: Vec<Element>,
    pub estimates: Vec<MeanEstimate>,
    /// `f(S)`, when requested.
    pub base_value: Option<f64>,
}

impl DeltaEstimates {
    pub fn mean(&self, position: usize) -> f64 {
        self.estimates[position].mean
    }

    /// Elements whose estimate is at least `threshold`, in input order.
    pub fn at_least(&self, threshold: f64) -> Vec<Element> {
        self.elements
            .iter()
            .zip(&self.estimates)
            .filter(|(_, e)| e.mean >= threshold)
            .map(|(&a, _)| a)
            .collect()
    }
}

/// Estimates `Delta(a, S, X)` for every `a` in `x` from `blocks`, all in one
/// adaptive round. Per block `R`, the realization for `a` is
/// `f(S + R + a) - f(S + R)` when `a` is outside `R`, and
/// `f(S + R) - f(S + R - a)` otherwise. With `include_base`, `f(S)` rides
/// along in the same batch.
pub fn estimate_delta_all(
    oracle: &mut Oracle<'_>,
    s: &[Element],
    x: &[Element],
    blocks: &[Vec<Element>],
    include_base: bool,
) -> Result<DeltaEstimates> {
    let mut batch = EvalBatch::new();
    let base_id = include_base.then(|| batch.push(s.iter().copied()));
    let mut ids: Vec<(QueryId, Vec<QueryId>)> = Vec::with_capacity(blocks.len());
    for block in blocks {
        let union: Vec<Element> = s.iter().chain(block).copied().collect();
        let union_id = batch.push(union.iter().copied());
        let per_element = x
            .iter()
            .map(|&a| {
                if block.binary_search(&a).is_ok() {
                    batch.push(union.iter().copied().filter(|&e| e != a))
                } else {
                    batch.push(union.iter().copied().chain(std::iter::once(a)))
                }
            })
            .collect();
        ids.push((union_id, per_element));
    }
    if batch.is_empty() {
        return Ok(DeltaEstimates {
            elements: x.to_vec(),
            estimates: vec![MeanEstimate::from_samples(&[]); x.len()],
            base_value: None,
        });
    }
    let values = oracle.evaluate(&batch)?;

    let mut realizations = vec![Vec::with_capacity(blocks.len()); x.len()];
    for ((union_id, per_element), block) in ids.iter().zip(blocks) {
        let union_value = values.get(*union_id);
        for (pos, (&a, &id)) in x.iter().zip(per_element).enumerate() {
            let other = values.get(id);
            let gain = if block.binary_search(&a).is_ok() {
                union_value - other
            } else {
                other - union_value
            };
            realizations[pos].push(gain);
        }
    }
    Ok(DeltaEstimates {
        elements: x.to_vec(),
        estimates: realizations.iter().map(|r| MeanEstimate::from_samples(r)).collect(),
        base_value: base_id.map(|id| values.get(id)),
    })
}

/// Estimate of `E[f_S(R ∩ X+)]` together with the realized candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEstimate {
    pub estimate: MeanEstimate,
    /// `R ∩ X+` for every block, dummies removed, in block order.
    pub candidates: Vec<Vec<Element>>,
    /// `f_S(candidate)` for every candidate.
    pub gains: Vec<f64>,
    pub base_value: f64,
}

impl BlockEstimate {
    /// Index of the candidate with the largest realized gain (first on ties).
    pub fn best(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &g) in self.gains.iter().enumerate() {
            if best.is_none_or(|b| g > self.gains[b]) {
                best = Some(i);
            }
        }
        best
    }
}

/// Estimates `E[f_S(R ∩ X+)]` over `blocks` in one adaptive round.
/// `positive` must be sorted.
pub fn estimate_block_value(
    oracle: &mut Oracle<'_>,
    s: &[Element],
    positive: &[Element],
    blocks: &[Vec<Element>],
) -> Result<BlockEstimate> {
    let ground = *oracle.ground();
    let candidates: Vec<Vec<Element>> = blocks
        .iter()
        .map(|block| {
            block
                .iter()
                .copied()
                .filter(|a| !ground.is_dummy(*a) && positive.binary_search(a).is_ok())
                .collect()
        })
        .collect();
    let mut batch = EvalBatch::new();
    let base_id = batch.push(s.iter().copied());
    let ids: Vec<QueryId> = candidates
        .iter()
        .map(|c| batch.push(s.iter().chain(c).copied()))
        .collect();
    let values = oracle.evaluate(&batch)?;
    let base_value = values.get(base_id);
    let gains: Vec<f64> = ids.iter().map(|&id| values.get(id) - base_value).collect();
    Ok(BlockEstimate {
        estimate: MeanEstimate::from_samples(&gains),
        candidates,
        gains,
        base_value,
    })
}
