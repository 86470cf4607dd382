use crate::error::{Error, Result};
use crate::oracle::{Element, SetFunction};

/// `f(S) = sum_{e in S} w_e` with non-negative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Modular {
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidInput(format!(
                "modular weight {i} is {}; weights must be finite and >= 0",
                weights[i]
            )));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Sum of the `k` largest weights.
    pub fn top_k_value(&self, k: usize) -> f64 {
        let mut w = self.weights.clone();
        w.sort_by(|a, b| b.total_cmp(a));
        w.iter().take(k).sum()
    }
}

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: &[Element]) -> f64 {
        set.iter().map(|&e| self.weights[e]).sum()
    }
}
