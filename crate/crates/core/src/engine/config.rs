use crate::error::{Error, Result};

/// How the algorithm obtains its estimate of the optimal value.
#[derive(Debug, Clone, PartialEq)]
pub enum OptGuess {
    /// Use this value directly.
    Fixed(f64),
    /// Geometric grid `base * factor^j` for `j < count`; one run per guess.
    Geometric { base: f64, factor: f64, count: usize },
    /// Grid from the best singleton value: one extra adaptive round, then
    /// guesses `v_max (1 + eps)^j` up to `k v_max`.
    SingletonGrid,
    /// `multiplier` times the best value Greedy reaches over its rounds.
    /// Greedy's queries are not charged to the run.
    GreedyMultiple(f64),
}

/// Where the expectations inside SIEVE come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimationMode {
    /// Averages over `samples` uniformly drawn blocks.
    Sampled,
    /// Exact averages over every block. Only for small instances.
    Exact,
}

/// Log base used for the theory preset of `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoryLogBase {
    /// `log_{1 + eps/2} n`, as in the round-count statement.
    HalfEpsilon,
    /// `log_{1 + eps/4} n`, as in the adaptivity argument.
    QuarterEpsilon,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlitsConfig {
    pub k: usize,
    pub r: usize,
    pub epsilon: f64,
    pub samples: usize,
    pub opt_guess: OptGuess,
    pub seed: u64,
    /// Iteration cap per SIEVE call; `None` means `ceil(log_{1+eps/4} n) + 1`.
    pub rho_cap: Option<usize>,
    pub mode: EstimationMode,
}

impl BlitsConfig {
    pub const DEFAULT_R: usize = 10;
    pub const DEFAULT_EPSILON: f64 = 0.3;
    pub const DEFAULT_SAMPLES: usize = 30;

    /// Practical defaults: `r = 10` (at most `k`), `eps = 0.3`, 30 samples,
    /// singleton-grid OPT guessing.
    pub fn new(k: usize) -> Self {
        Self {
            k,
            r: Self::DEFAULT_R.min(k.max(1)),
            epsilon: Self::DEFAULT_EPSILON,
            samples: Self::DEFAULT_SAMPLES,
            opt_guess: OptGuess::SingletonGrid,
            seed: 0,
            rho_cap: None,
            mode: EstimationMode::Sampled,
        }
    }

    /// `r = ceil(20 / eps * log_base n)`, clamped to `[1, k]`.
    pub fn theory_rounds(n: usize, k: usize, epsilon: f64, base: TheoryLogBase) -> usize {
        let step = match base {
            TheoryLogBase::HalfEpsilon => epsilon / 2.0,
            TheoryLogBase::QuarterEpsilon => epsilon / 4.0,
        };
        let r = (20.0 / epsilon * (n as f64).ln() / step.ln_1p()).ceil() as usize;
        r.clamp(1, k.max(1))
    }

    pub fn with_r(mut self, r: usize) -> Self {
        self.r = r;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_opt_guess(mut self, opt_guess: OptGuess) -> Self {
        self.opt_guess = opt_guess;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: EstimationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_rho_cap(mut self, rho_cap: usize) -> Self {
        self.rho_cap = Some(rho_cap);
        self
    }

    /// `max(1, floor(k / r))`
    pub fn block_size(&self) -> usize {
        (self.k / self.r.max(1)).max(1)
    }

    pub fn rho_cap_for(&self, n: usize) -> usize {
        self.rho_cap.unwrap_or_else(|| default_rho_cap(n, self.epsilon))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidInput(msg));
        if self.k == 0 || self.k > n {
            return fail(format!("k = {} must satisfy 1 <= k <= n = {n}", self.k));
        }
        if self.r == 0 || self.r > self.k {
            return fail(format!("r = {} must satisfy 1 <= r <= k = {}", self.r, self.k));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return fail(format!("epsilon = {} must lie in (0, 1)", self.epsilon));
        }
        if self.samples == 0 {
            return fail("at least one sample per estimate is required".into());
        }
        if self.rho_cap == Some(0) {
            return fail("rho_cap must be at least 1".into());
        }
        match self.opt_guess {
            OptGuess::Fixed(v) if !(v > 0.0 && v.is_finite()) => {
                fail(format!("fixed OPT guess {v} must be positive"))
            }
            OptGuess::Geometric { base, factor, count }
                if !(base > 0.0 && factor >= 1.0 && count >= 1) =>
            {
                fail(format!("geometric OPT grid ({base}, {factor}, {count}) is invalid"))
            }
            OptGuess::GreedyMultiple(c) if !(c > 0.0 && c.is_finite()) => {
                fail(format!("greedy multiplier {c} must be positive"))
            }
            _ => Ok(()),
        }
    }
}

/// `ceil(log_{1+eps/4} n) + 1`
pub fn default_rho_cap(n: usize, epsilon: f64) -> usize {
    ((n.max(1) as f64).ln() / (epsilon / 4.0).ln_1p()).ceil() as usize + 1
}

/// `(1 - eps/2)/2 * ((1 - 1/r)^(i-1) (1 - eps/2) opt - f(S))`
pub fn threshold_t(opt: f64, f_s: f64, i: usize, r: usize, epsilon: f64) -> f64 {
    let decay = (1.0 - 1.0 / r as f64).powi(i as i32 - 1);
    (1.0 - epsilon / 2.0) / 2.0 * (decay * (1.0 - epsilon / 2.0) * opt - f_s)
}
