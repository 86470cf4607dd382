//! Value-oracle access with adaptivity accounting.
//!
//! Algorithms never call a [`SetFunction`] directly. They collect queries
//! into an [`EvalBatch`], whose members may not depend on each other's
//! answers, and submit it to an [`Oracle`]. Each submitted batch is one
//! adaptive round in the [`QueryLedger`].

use std::collections::HashMap;
use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Dense element id in `[0, n)` for real elements, `[n, n + dummies)` for dummies.
pub type Element = usize;

/// A non-negative set function `f: 2^N -> R`.
///
/// `value` receives distinct ids in ascending order, all below
/// `ground_size()`. Implementations must be pure: the same set always yields
/// the same value, and concurrent calls are allowed.
pub trait SetFunction: Sync {
    fn ground_size(&self) -> usize;

    fn value(&self, set: &[Element]) -> f64;
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn value(&self, set: &[Element]) -> f64 {
        (**self).value(set)
    }
}

impl<F: SetFunction + ?Sized> SetFunction for Box<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn value(&self, set: &[Element]) -> f64 {
        (**self).value(set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
    dummy_count: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("ground set must be non-empty".into()));
        }
        Ok(Self { n, dummy_count: 0 })
    }

    /// Number of real elements.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dummy_count(&self) -> usize {
        self.dummy_count
    }

    /// Real plus dummy elements.
    pub fn len(&self) -> usize {
        self.n + self.dummy_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_dummy(&self, e: Element) -> bool {
        e >= self.n
    }

    pub fn contains(&self, e: Element) -> bool {
        e < self.len()
    }

    pub fn real_elements(&self) -> Range<Element> {
        0..self.n
    }

    /// Appends `count` dummies and returns their ids.
    pub fn add_dummies(&mut self, count: usize) -> Range<Element> {
        let start = self.len();
        self.dummy_count += count;
        start..self.len()
    }
}

/// Queries issued per adaptive round.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLedger {
    per_round: Vec<u64>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total_queries(&self) -> u64 {
        self.per_round.iter().sum()
    }

    pub fn adaptive_rounds(&self) -> usize {
        self.per_round.len()
    }

    pub fn per_round(&self) -> &[u64] {
        &self.per_round
    }

    fn record_round(&mut self, queries: u64) {
        debug_assert!(queries >= 1);
        self.per_round.push(queries);
    }

    /// Ledger of independent runs executed side by side: round `i` of the
    /// result holds the queries of round `i` of every input.
    pub fn merge_parallel<'a>(ledgers: impl IntoIterator<Item = &'a QueryLedger>) -> Self {
        let mut per_round: Vec<u64> = Vec::new();
        for ledger in ledgers {
            if per_round.len() < ledger.per_round.len() {
                per_round.resize(ledger.per_round.len(), 0);
            }
            for (acc, q) in per_round.iter_mut().zip(&ledger.per_round) {
                *acc += q;
            }
        }
        Self { per_round }
    }

    /// Appends the rounds of `later`, which ran after `self` finished.
    pub fn extend_sequential(&mut self, later: &QueryLedger) {
        self.per_round.extend_from_slice(&later.per_round);
    }
}

/// Handle to a query inside an [`EvalBatch`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QueryId(usize);

/// Handle to a pair of queries forming `f(S + a) - f(S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MarginalId {
    with: QueryId,
    without: QueryId,
}

/// A set of mutually independent queries, submitted as one adaptive round.
#[derive(Debug, Clone, Default)]
pub struct EvalBatch {
    queries: Vec<Vec<Element>>,
}

impl EvalBatch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn push<I>(&mut self, set: I) -> QueryId
    where
        I: IntoIterator<Item = Element>,
    {
        let mut set: Vec<Element> = set.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        self.queries.push(set);
        QueryId(self.queries.len() - 1)
    }

    /// Queues `f(base + a)` and `f(base)`. Shared bases are evaluated once.
    pub fn push_marginal(&mut self, base: &[Element], a: Element) -> MarginalId {
        let with = self.push(base.iter().copied().chain(std::iter::once(a)));
        let without = self.push(base.iter().copied());
        MarginalId { with, without }
    }

    pub fn queries(&self) -> &[Vec<Element>] {
        &self.queries
    }
}

/// Answers to an [`EvalBatch`], in submission order.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchValues {
    values: Vec<f64>,
}

impl BatchValues {
    pub fn get(&self, id: QueryId) -> f64 {
        self.values[id.0]
    }

    pub fn marginal(&self, id: MarginalId) -> f64 {
        self.values[id.with.0] - self.values[id.without.0]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Ledgered access to a set function over a ground set that may carry
/// dummy elements. Dummies are stripped before the function is called, so
/// every dummy has marginal contribution exactly 0.
pub struct Oracle<'f> {
    f: &'f dyn SetFunction,
    ground: GroundSet,
    ledger: QueryLedger,
}

impl<'f> Oracle<'f> {
    pub fn new(f: &'f dyn SetFunction) -> Result<Self> {
        Ok(Self {
            ground: GroundSet::new(f.ground_size())?,
            f,
            ledger: QueryLedger::new(),
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn function(&self) -> &'f dyn SetFunction {
        self.f
    }

    /// Makes sure at least `count` dummies exist and returns the first
    /// `count` of them. Dummies never enter a solution, so callers may share
    /// them.
    pub fn ensure_dummies(&mut self, count: usize) -> Range<Element> {
        let have = self.ground.dummy_count();
        if have < count {
            self.ground.add_dummies(count - have);
        }
        let n = self.ground.n();
        n..n + count
    }

    /// Evaluates every query of `batch` as one adaptive round.
    ///
    /// Identical query sets are evaluated once; the ledger counts distinct
    /// evaluations.
    pub fn evaluate(&mut self, batch: &EvalBatch) -> Result<BatchValues> {
        if batch.is_empty() {
            return Err(Error::EmptyBatch);
        }
        for q in batch.queries() {
            if let Some(&e) = q.last() {
                if !self.ground.contains(e) {
                    return Err(Error::UnknownElement {
                        element: e,
                        ground: self.ground.len(),
                    });
                }
            }
        }

        let mut slot_of: HashMap<&[Element], usize> = HashMap::with_capacity(batch.len());
        let mut distinct: Vec<&[Element]> = Vec::new();
        let slots: Vec<usize> = batch
            .queries()
            .iter()
            .map(|q| {
                *slot_of.entry(q.as_slice()).or_insert_with(|| {
                    distinct.push(q.as_slice());
                    distinct.len() - 1
                })
            })
            .collect();

        let n = self.ground.n();
        let f = self.f;
        let answers: Vec<f64> = distinct
            .par_iter()
            .map(|q| f.value(strip_dummies(q, n)))
            .collect();
        if let Some(&bad) = answers.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::ObjectiveContract { value: bad });
        }

        self.ledger.record_round(distinct.len() as u64);
        Ok(BatchValues {
            values: slots.into_iter().map(|s| answers[s]).collect(),
        })
    }

    /// `f(S + a) - f(S)` as its own adaptive round.
    pub fn marginal(&mut self, set: &[Element], a: Element) -> Result<f64> {
        let mut batch = EvalBatch::new();
        let id = batch.push_marginal(set, a);
        Ok(self.evaluate(&batch)?.marginal(id))
    }

    /// Evaluates `set` without touching the ledger. Used for trace
    /// instrumentation only.
    pub fn value_unrecorded(&self, set: &[Element]) -> Result<f64> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&e) = sorted.last() {
            if !self.ground.contains(e) {
                return Err(Error::UnknownElement {
                    element: e,
                    ground: self.ground.len(),
                });
            }
        }
        let v = self.f.value(strip_dummies(&sorted, self.ground.n()));
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::ObjectiveContract { value: v });
        }
        Ok(v)
    }
}

/// Sorted `set` without its ids `>= n`.
pub(crate) fn strip_dummies(set: &[Element], n: usize) -> &[Element] {
    &set[..set.partition_point(|&e| e < n)]
}
