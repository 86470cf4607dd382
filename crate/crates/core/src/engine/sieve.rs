//! The SIEVE subroutine: repeatedly discards survivors with low expected
//! marginal contribution until a random block clears the `t / r` bar or at
//! most `k` survivors remain.

use rand::Rng;

use crate::engine::config::{threshold_t, BlitsConfig, EstimationMode};
use crate::engine::estimate::{
    enumerate_blocks, estimate_block_value, estimate_delta_all, sample_blocks, BlockEstimate,
};
use crate::error::Result;
use crate::oracle::{Element, Oracle};

/// Which candidate a successful block estimate hands back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockChoice {
    /// A uniformly chosen candidate.
    Uniform,
    /// The candidate with the largest realized gain.
    BestSample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SieveExit {
    /// A random block cleared `t / r`.
    EarlyReturn,
    /// At most `k` survivors remained; `X` was padded with dummies.
    Padded,
    /// The iteration cap was reached first; the best sampled block is returned.
    CapExhausted,
    /// No room left in the solution.
    Full,
}

/// One pass of the filtering loop.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveIteration {
    pub survivors: usize,
    pub positive: usize,
    pub block_estimate: f64,
    pub returned: bool,
    /// `|X|` after filtering; equals `survivors` when the iteration returned.
    pub survivors_after: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SieveOutcome {
    /// Returned block, free of dummies and disjoint from `S`.
    pub block: Vec<Element>,
    pub exit: SieveExit,
    pub block_size: usize,
    /// `t`, once `f(S)` has been observed.
    pub threshold: Option<f64>,
    /// `X` at exit, possibly holding dummies.
    pub survivors: Vec<Element>,
    /// `X+` at exit, sorted.
    pub positive: Vec<Element>,
    pub iterations: Vec<SieveIteration>,
    pub rounds: usize,
}

/// Runs SIEVE for outer iteration `i` (1-based) against solution `s`.
pub fn sieve<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    s: &[Element],
    cfg: &BlitsConfig,
    i: usize,
    opt: f64,
    choice: BlockChoice,
    rng: &mut R,
) -> Result<SieveOutcome> {
    let k = cfg.k;
    let rounds_before = oracle.ledger().adaptive_rounds();
    let block_size = cfg.block_size().min(k.saturating_sub(s.len()));
    let mut outcome = SieveOutcome {
        block: Vec::new(),
        exit: SieveExit::Full,
        block_size,
        threshold: None,
        survivors: Vec::new(),
        positive: Vec::new(),
        iterations: Vec::new(),
        rounds: 0,
    };
    if block_size == 0 {
        return Ok(outcome);
    }

    let mut in_solution = vec![false; oracle.n()];
    for &e in s {
        in_solution[e] = true;
    }
    let mut x: Vec<Element> = (0..oracle.n()).filter(|&e| !in_solution[e]).collect();
    let cap = cfg.rho_cap_for(oracle.n());
    let mut t: Option<f64> = None;
    let mut fallback: Option<(f64, Vec<Element>)> = None;

    while x.len() > k {
        if outcome.iterations.len() == cap {
            let (_, block) = fallback.take().unwrap_or_default();
            outcome.block = block;
            outcome.exit = SieveExit::CapExhausted;
            outcome.survivors = x;
            outcome.rounds = oracle.ledger().adaptive_rounds() - rounds_before;
            return Ok(outcome);
        }

        let blocks = draw_blocks(cfg, &x, block_size, rng)?;
        let deltas = estimate_delta_all(oracle, s, &x, &blocks, t.is_none())?;
        let t_now = *t.get_or_insert_with(|| {
            let f_s = deltas.base_value.expect("first iteration queries f(S)");
            threshold_t(opt, f_s, i, cfg.r, cfg.epsilon)
        });
        outcome.threshold = Some(t_now);
        let mut positive = deltas.at_least(0.0);
        positive.sort_unstable();

        let blocks = draw_blocks(cfg, &x, block_size, rng)?;
        let est = estimate_block_value(oracle, s, &positive, &blocks)?;
        let mean = est.estimate.mean;
        // A non-positive t is met by any block; sampling noise must not veto it.
        let returned = t_now <= 0.0 || mean >= t_now / cfg.r as f64;

        if returned {
            outcome.iterations.push(SieveIteration {
                survivors: x.len(),
                positive: positive.len(),
                block_estimate: mean,
                returned: true,
                survivors_after: x.len(),
            });
            outcome.block = choose(&est, choice, rng);
            outcome.exit = SieveExit::EarlyReturn;
            outcome.survivors = x;
            outcome.positive = positive;
            outcome.rounds = oracle.ledger().adaptive_rounds() - rounds_before;
            return Ok(outcome);
        }

        if let Some(best) = est.best() {
            if fallback.as_ref().is_none_or(|(g, _)| est.gains[best] > *g) {
                fallback = Some((est.gains[best], est.candidates[best].clone()));
            }
        }
        let kept = deltas.at_least((1.0 + cfg.epsilon / 4.0) * t_now / k as f64);
        outcome.iterations.push(SieveIteration {
            survivors: x.len(),
            positive: positive.len(),
            block_estimate: mean,
            returned: false,
            survivors_after: kept.len(),
        });
        x = kept;
    }

    let dummies = oracle.ensure_dummies(k - x.len());
    x.extend(dummies);
    let blocks = draw_blocks(cfg, &x, block_size, rng)?;
    let deltas = estimate_delta_all(oracle, s, &x, &blocks, false)?;
    let mut positive = deltas.at_least(0.0);
    positive.sort_unstable();

    let draw = sample_blocks(&x, block_size, 1, rng)?.remove(0);
    let ground = *oracle.ground();
    outcome.block = draw
        .into_iter()
        .filter(|a| !ground.is_dummy(*a) && positive.binary_search(a).is_ok())
        .collect();
    outcome.exit = SieveExit::Padded;
    outcome.survivors = x;
    outcome.positive = positive;
    outcome.rounds = oracle.ledger().adaptive_rounds() - rounds_before;
    Ok(outcome)
}

fn draw_blocks<R: Rng + ?Sized>(
    cfg: &BlitsConfig,
    x: &[Element],
    b: usize,
    rng: &mut R,
) -> Result<Vec<Vec<Element>>> {
    match cfg.mode {
        EstimationMode::Sampled => sample_blocks(x, b, cfg.samples, rng),
        EstimationMode::Exact => enumerate_blocks(x, b),
    }
}

fn choose<R: Rng + ?Sized>(est: &BlockEstimate, choice: BlockChoice, rng: &mut R) -> Vec<Element> {
    let idx = match choice {
        // A single candidate needs no draw, so m = 1 keeps both variants in lockstep.
        BlockChoice::Uniform if est.candidates.len() == 1 => 0,
        BlockChoice::Uniform => rng.gen_range(0..est.candidates.len()),
        BlockChoice::BestSample => est.best().expect("at least one block was drawn"),
    };
    est.candidates[idx].clone()
}
