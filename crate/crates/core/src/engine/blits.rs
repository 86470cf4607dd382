use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baselines;
use crate::engine::config::{BlitsConfig, OptGuess};
use crate::engine::sieve::{sieve, BlockChoice, SieveExit, SieveOutcome};
use crate::error::{Error, Result};
use crate::oracle::{Element, EvalBatch, Oracle, QueryLedger, SetFunction};
use crate::trace::{Run, RunTrace, TraceRow};

/// One SIEVE call as seen from the outer loop.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveRecord {
    /// Outer iteration, 1-based.
    pub iteration: usize,
    pub solution_before: Vec<Element>,
    pub value_before: f64,
    pub outcome: SieveOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlitsRun {
    pub run: Run,
    /// OPT guess behind the returned solution.
    pub opt_guess: f64,
    /// SIEVE calls of the returned solution's run.
    pub sieves: Vec<SieveRecord>,
}

/// BLITS: returns a uniformly random candidate whenever a block estimate
/// clears its threshold.
pub fn blits(f: &dyn SetFunction, cfg: &BlitsConfig) -> Result<BlitsRun> {
    maximize(f, cfg, BlockChoice::Uniform)
}

/// BLITS+: identical, except a successful round hands back the candidate
/// with the largest realized gain.
pub fn blits_plus(f: &dyn SetFunction, cfg: &BlitsConfig) -> Result<BlitsRun> {
    maximize(f, cfg, BlockChoice::BestSample)
}

/// `v_max (1 + eps)^j` for `j = 0 ..= J`, with `J` the smallest integer such
/// that `(1 + eps)^J >= k`. Queries every singleton in one adaptive round.
pub fn guess_opt_grid(oracle: &mut Oracle<'_>, k: usize, epsilon: f64) -> Result<Vec<f64>> {
    let mut batch = EvalBatch::new();
    for a in oracle.ground().real_elements() {
        batch.push([a]);
    }
    let values = oracle.evaluate(&batch)?;
    let v_max = values.as_slice().iter().copied().fold(0.0, f64::max);
    if v_max <= 0.0 {
        return Err(Error::DegenerateObjective);
    }
    let factor = 1.0 + epsilon;
    let mut guesses = vec![v_max];
    let mut scale = 1.0;
    while scale < k as f64 {
        scale *= factor;
        guesses.push(v_max * scale);
    }
    Ok(guesses)
}

/// BLITS with a known OPT guess, on a caller-owned oracle and RNG.
pub fn blits_with_guess(
    oracle: &mut Oracle<'_>,
    cfg: &BlitsConfig,
    opt: f64,
    choice: BlockChoice,
    rng: &mut ChaCha8Rng,
) -> Result<BlitsRun> {
    cfg.validate(oracle.n())?;
    let mut solution: Vec<Element> = Vec::new();
    let mut value = oracle.value_unrecorded(&solution)?;
    let mut trace = RunTrace::default();
    let mut sieves = Vec::with_capacity(cfg.r);

    for i in 1..=cfg.r {
        if solution.len() >= cfg.k {
            break;
        }
        let outcome = sieve(oracle, &solution, cfg, i, opt, choice, rng)?;
        let before = (solution.len(), value);
        let solution_before = solution.clone();
        solution.extend_from_slice(&outcome.block);
        solution.sort_unstable();
        value = oracle.value_unrecorded(&solution)?;
        trace.catch_up(oracle.ledger(), before, (solution.len(), value));
        if outcome.exit == SieveExit::CapExhausted {
            trace.rho_cap_hits += 1;
        }
        sieves.push(SieveRecord {
            iteration: i,
            solution_before,
            value_before: before.1,
            outcome,
        });
    }
    Ok(BlitsRun {
        run: Run::finish(oracle, solution, trace)?,
        opt_guess: opt,
        sieves,
    })
}

fn maximize(f: &dyn SetFunction, cfg: &BlitsConfig, choice: BlockChoice) -> Result<BlitsRun> {
    cfg.validate(f.ground_size())?;
    match cfg.opt_guess {
        OptGuess::Fixed(v) => single(f, cfg, v, choice, 0),
        OptGuess::GreedyMultiple(c) => {
            let mut scout = Oracle::new(f)?;
            let greedy = baselines::greedy(&mut scout, cfg.k)?;
            let best = greedy.trace.max_value().unwrap_or(0.0).max(greedy.value);
            if best <= 0.0 {
                return Err(Error::DegenerateObjective);
            }
            single(f, cfg, c * best, choice, 0)
        }
        OptGuess::Geometric { base, factor, count } => {
            let guesses: Vec<f64> = (0..count).map(|j| base * factor.powi(j as i32)).collect();
            parallel_guesses(f, cfg, &guesses, choice, &QueryLedger::new())
        }
        OptGuess::SingletonGrid => {
            let mut scout = Oracle::new(f)?;
            let guesses = guess_opt_grid(&mut scout, cfg.k, cfg.epsilon)?;
            parallel_guesses(f, cfg, &guesses, choice, scout.ledger())
        }
    }
}

fn single(
    f: &dyn SetFunction,
    cfg: &BlitsConfig,
    opt: f64,
    choice: BlockChoice,
    stream: u64,
) -> Result<BlitsRun> {
    let mut oracle = Oracle::new(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    blits_with_guess(&mut oracle, cfg, opt, choice, &mut rng)
}

/// One independent run per guess, conceptually side by side; keeps the best
/// final value (earliest guess on ties). The combined ledger is `prefix`
/// followed by the round-wise sum of all runs.
fn parallel_guesses(
    f: &dyn SetFunction,
    cfg: &BlitsConfig,
    guesses: &[f64],
    choice: BlockChoice,
    prefix: &QueryLedger,
) -> Result<BlitsRun> {
    let runs: Vec<BlitsRun> = guesses
        .par_iter()
        .enumerate()
        .map(|(j, &g)| single(f, cfg, g, choice, j as u64))
        .collect::<Result<_>>()?;
    let merged = QueryLedger::merge_parallel(runs.iter().map(|r| &r.run.ledger));
    let mut ledger = prefix.clone();
    ledger.extend_sequential(&merged);

    let mut best = runs
        .into_iter()
        .reduce(|a, b| if b.run.value > a.run.value { b } else { a })
        .expect("at least one guess");

    // One row per combined round: the scouting rounds report the empty
    // solution, and the winner's last row carries forward once it is done.
    let empty = (0, f.value(&[]));
    let offset = prefix.adaptive_rounds();
    let mut cumulative = 0u64;
    let rows = ledger
        .per_round()
        .iter()
        .enumerate()
        .map(|(idx, &q)| {
            cumulative += q;
            let round = idx + 1;
            let (solution_size, value) = match round.checked_sub(offset + 1) {
                None => empty,
                Some(j) => best
                    .run
                    .trace
                    .rows
                    .get(j)
                    .or(best.run.trace.rows.last())
                    .map_or(empty, |r| (r.solution_size, r.value)),
            };
            TraceRow { adaptive_round: round, cumulative_queries: cumulative, solution_size, value }
        })
        .collect();
    best.run.trace.rows = rows;
    best.run.ledger = ledger;
    Ok(best)
}
