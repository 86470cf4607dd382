//! Brute-force reference computations for small instances. Nothing here goes
//! through the [`Oracle`](crate::oracle::Oracle) ledger or the engine's
//! estimators, so the results can be used to check both.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::estimate::binomial;
use crate::engine::sieve::{sieve, BlockChoice, SieveOutcome};
use crate::engine::{BlitsConfig, EstimationMode};
use crate::error::{Error, Result};
use crate::graph_gen::{assign_uniform_weights, gen_erdos_renyi};
use crate::objectives::CutGraph;
use crate::oracle::{Element, Oracle, SetFunction};
use crate::stats::{CompensatedSum, MeanEstimate};

/// Ceiling on `sum_{j <= k} C(n, j)` for [`brute_force_opt`].
pub const OPT_ENUMERATION_LIMIT: u128 = 10_000_000;
/// Ceiling on `C(|X|, b)` for the exact expectations.
pub const BLOCK_ENUMERATION_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub opt_set: Vec<Element>,
    pub opt_value: f64,
    pub enumerated_count: u64,
}

/// Best set of size at most `k`; ties go to the lexicographically smallest.
pub fn brute_force_opt(f: &dyn SetFunction, k: usize) -> Result<BruteForceResult> {
    let n = f.ground_size();
    let k = k.min(n);
    let required: u128 = (0..=k).map(|j| binomial(n, j)).sum();
    if required > OPT_ENUMERATION_LIMIT {
        return Err(Error::InstanceTooLarge { required, limit: OPT_ENUMERATION_LIMIT });
    }
    let mut best = BruteForceResult {
        opt_set: Vec::new(),
        opt_value: f.value(&[]),
        enumerated_count: 1,
    };
    for size in 1..=k {
        for set in (0..n).combinations(size) {
            let v = f.value(&set);
            best.enumerated_count += 1;
            if v > best.opt_value || (v == best.opt_value && set < best.opt_set) {
                best.opt_value = v;
                best.opt_set = set;
            }
        }
    }
    Ok(best)
}

fn block_guard(x_len: usize, b: usize) -> Result<()> {
    if b > x_len {
        return Err(Error::InfeasibleSample { available: x_len, block: b });
    }
    let required = binomial(x_len, b);
    if required > BLOCK_ENUMERATION_LIMIT {
        return Err(Error::InstanceTooLarge { required, limit: BLOCK_ENUMERATION_LIMIT });
    }
    Ok(())
}

/// `f` on `parts`' union, ignoring ids outside the ground set (dummies).
fn value_of(f: &dyn SetFunction, parts: &[&[Element]]) -> f64 {
    let n = f.ground_size();
    let mut set: Vec<Element> = parts.iter().flat_map(|p| p.iter().copied()).filter(|&e| e < n).collect();
    set.sort_unstable();
    set.dedup();
    f.value(&set)
}

/// Exact `E_R[f_{S + (R - a)}(a)]` over every `b`-subset `R` of `x`.
pub fn exact_delta(f: &dyn SetFunction, s: &[Element], x: &[Element], b: usize, a: Element) -> Result<f64> {
    block_guard(x.len(), b)?;
    let mut total = CompensatedSum::default();
    let mut count = 0u64;
    for r in x.iter().copied().combinations(b) {
        let rest: Vec<Element> = r.into_iter().filter(|&e| e != a).collect();
        total.add(value_of(f, &[s, &rest, &[a]]) - value_of(f, &[s, &rest]));
        count += 1;
    }
    Ok(total.value() / count as f64)
}

/// Exact `E_R[f_S(R ∩ X+)]` over every `b`-subset `R` of `x`.
pub fn exact_block_value(
    f: &dyn SetFunction,
    s: &[Element],
    x: &[Element],
    x_plus: &[Element],
    b: usize,
) -> Result<f64> {
    block_guard(x.len(), b)?;
    let base = value_of(f, &[s]);
    let mut total = CompensatedSum::default();
    let mut count = 0u64;
    for r in x.iter().copied().combinations(b) {
        let kept: Vec<Element> = r.into_iter().filter(|e| x_plus.contains(e)).collect();
        total.add(value_of(f, &[s, &kept]) - base);
        count += 1;
    }
    Ok(total.value() / count as f64)
}

/// `g(T) = f(base ∪ T)`.
#[derive(Debug, Clone)]
pub struct UnionWith<F> {
    inner: F,
    base: Vec<Element>,
}

impl<F: SetFunction> UnionWith<F> {
    pub fn new(inner: F, mut base: Vec<Element>) -> Self {
        base.sort_unstable();
        base.dedup();
        Self { inner, base }
    }
}

impl<F: SetFunction> SetFunction for UnionWith<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn value(&self, set: &[Element]) -> f64 {
        let mut union: Vec<Element> = self.base.iter().chain(set).copied().collect();
        union.sort_unstable();
        union.dedup();
        self.inner.value(&union)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeigeReport {
    pub g_empty: f64,
    pub max_probability: f64,
    pub estimate: MeanEstimate,
    /// `(1 - p) g(∅)`.
    pub bound: f64,
    pub passed: bool,
}

/// Samples `A(p)` with independent inclusions `probs[a]` and checks
/// `mean g(A) >= (1 - max p) g(∅) - 3 SE`.
pub fn check_feige_lemma(g: &dyn SetFunction, probs: &[f64], trials: usize, seed: u64) -> Result<FeigeReport> {
    if probs.len() != g.ground_size() {
        return Err(Error::InvalidInput(format!(
            "{} probabilities for a ground set of {}",
            probs.len(),
            g.ground_size()
        )));
    }
    if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidInput("probabilities must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<f64> = (0..trials)
        .map(|_| {
            let a: Vec<Element> = (0..probs.len()).filter(|&e| rng.gen::<f64>() < probs[e]).collect();
            g.value(&a)
        })
        .collect();
    let g_empty = g.value(&[]);
    let max_probability = probs.iter().copied().fold(0.0, f64::max);
    let estimate = MeanEstimate::from_samples(&samples);
    let bound = (1.0 - max_probability) * g_empty;
    Ok(FeigeReport {
        g_empty,
        max_probability,
        estimate,
        bound,
        passed: estimate.mean >= bound - 3.0 * estimate.std_err,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkReport {
    /// `(|X_j|, |X_{j+1}|)` for each iteration that did not return.
    pub ratios: Vec<(usize, usize)>,
    pub outcome: SieveOutcome,
    pub passed: bool,
}

/// Runs one exact-mode SIEVE call from `s` and checks
/// `|X_{j+1}| <= |X_j| / (1 + eps/4)` on every filtering iteration.
pub fn check_filter_shrink(
    f: &dyn SetFunction,
    cfg: &BlitsConfig,
    s: &[Element],
    i: usize,
    opt: f64,
    seed: u64,
) -> Result<ShrinkReport> {
    let cfg = cfg.clone().with_mode(EstimationMode::Exact);
    let mut oracle = Oracle::new(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = sieve(&mut oracle, s, &cfg, i, opt, BlockChoice::Uniform, &mut rng)?;
    let factor = 1.0 + cfg.epsilon / 4.0;
    let ratios: Vec<(usize, usize)> = outcome
        .iterations
        .iter()
        .filter(|it| !it.returned)
        .map(|it| (it.survivors, it.survivors_after))
        .collect();
    let passed = ratios.iter().all(|&(before, after)| after as f64 * factor <= before as f64 + 1e-9);
    Ok(ShrinkReport { ratios, outcome, passed })
}

/// Erdős–Rényi graph with independent U(0,1) edge weights: the small random
/// weighted-cut instances used throughout the checks.
pub fn random_weighted_cut(n: usize, p: f64, seed: u64) -> Result<CutGraph> {
    let g = gen_erdos_renyi(n, p, seed)?;
    assign_uniform_weights(&g, seed ^ 0x9e37_79b9_7f4a_7c15)
}

/// A triple `(S, T, a)` with `S ⊆ T`, `a ∉ T` and `f_S(a) < f_T(a) - tol`,
/// if one exists. Exhaustive, so only for tiny ground sets.
pub fn submodularity_violation(f: &dyn SetFunction, tol: f64) -> Option<(Vec<Element>, Vec<Element>, Element)> {
    let n = f.ground_size();
    assert!(n <= 12, "exhaustive check is limited to 12 elements");
    let members = |mask: u32| -> Vec<Element> { (0..n).filter(|&e| mask >> e & 1 == 1).collect() };
    let value = |mask: u32| f.value(&members(mask));
    let values: Vec<f64> = (0..1u32 << n).map(value).collect();
    for t in 0..1u32 << n {
        // Every submask of t.
        let mut s = t;
        loop {
            for a in 0..n {
                if t >> a & 1 == 0 {
                    let gain_s = values[(s | 1 << a) as usize] - values[s as usize];
                    let gain_t = values[(t | 1 << a) as usize] - values[t as usize];
                    if gain_s < gain_t - tol {
                        return Some((members(s), members(t), a));
                    }
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & t;
        }
    }
    None
}
