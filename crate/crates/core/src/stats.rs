//! Small numeric helpers shared by the estimators and the exact enumerators.

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Sample mean and standard error of the mean (0 for fewer than 2 samples).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub count: usize,
}

impl MeanEstimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let count = samples.len();
        if count == 0 {
            return Self { mean: 0.0, std_err: 0.0, count };
        }
        let mean = samples.iter().copied().collect::<CompensatedSum>().value() / count as f64;
        let std_err = if count < 2 {
            0.0
        } else {
            let ss: CompensatedSum = samples.iter().map(|x| (x - mean) * (x - mean)).collect();
            (ss.value() / (count - 1) as f64 / count as f64).sqrt()
        };
        Self { mean, std_err, count }
    }
}
