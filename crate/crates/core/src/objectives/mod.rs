//! Objective functions: weighted cuts, the two similarity-based
//! summarization objectives, social-network revenue, and a modular test
//! objective.

mod cut;
mod modular;
mod revenue;
mod summarization;

pub use cut::CutGraph;
pub use modular::Modular;
pub use revenue::RevenueWeights;
pub use summarization::{ImageSummarization, MovieRecommendation, SimilarityMatrix};

use crate::error::{Error, Result};
use crate::oracle::{strip_dummies, Element, SetFunction};

/// `inner` with zero-marginal dummy elements appended to its ground set.
#[derive(Debug, Clone)]
pub struct DummyPadded<F> {
    inner: F,
    dummy_count: usize,
}

impl<F: SetFunction> DummyPadded<F> {
    pub fn inner(&self) -> &F {
        &self.inner
    }

    pub fn dummy_count(&self) -> usize {
        self.dummy_count
    }

    pub fn is_dummy(&self, e: Element) -> bool {
        e >= self.inner.ground_size()
    }
}

impl<F: SetFunction> SetFunction for DummyPadded<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size() + self.dummy_count
    }

    fn value(&self, set: &[Element]) -> f64 {
        self.inner.value(strip_dummies(set, self.inner.ground_size()))
    }
}

/// Extends the ground set of `inner` to `target_size` elements with dummies.
pub fn pad_with_dummies<F: SetFunction>(inner: F, target_size: usize) -> Result<DummyPadded<F>> {
    let n = inner.ground_size();
    if target_size < n {
        return Err(Error::InvalidInput(format!(
            "cannot pad a ground set of {n} elements down to {target_size}"
        )));
    }
    Ok(DummyPadded {
        inner,
        dummy_count: target_size - n,
    })
}
