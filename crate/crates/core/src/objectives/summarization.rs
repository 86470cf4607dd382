use crate::error::{Error, Result};
use crate::oracle::{Element, SetFunction};

/// Tolerance for the symmetry check on image-summarization matrices.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Vectors with a smaller Euclidean norm have no defined cosine similarity.
pub const MIN_FEATURE_NORM: f64 = 1e-12;

/// Dense `n x n` matrix of pairwise similarities.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "similarity matrix of order {n} needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "similarity entry ({}, {}) is not finite",
                pos / n,
                pos % n
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidInput(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n, data }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self {
            n,
            data: vec![value; n * n],
        }
    }

    /// `s[i][j] = <rows[i], rows[j]>`.
    pub fn inner_products(rows: &[Vec<f64>]) -> Result<Self> {
        check_rectangular(rows)?;
        let n = rows.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let dot = dot(&rows[i], &rows[j]);
                data[i * n + j] = dot;
                data[j * n + i] = dot;
            }
        }
        Self::new(n, data)
    }

    /// Cosine similarity of the rows. Rows with norm below
    /// [`MIN_FEATURE_NORM`] are rejected.
    pub fn cosine(rows: &[Vec<f64>]) -> Result<Self> {
        check_rectangular(rows)?;
        let norms: Vec<f64> = rows.iter().map(|r| dot(r, r).sqrt()).collect();
        if let Some(i) = norms.iter().position(|&x| !(x >= MIN_FEATURE_NORM)) {
            return Err(Error::InvalidInput(format!(
                "feature row {i} has norm {} below {MIN_FEATURE_NORM}",
                norms[i]
            )));
        }
        let n = rows.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
            for j in i + 1..n {
                let c = dot(&rows[i], &rows[j]) / (norms[i] * norms[j]);
                data[i * n + j] = c;
                data[j * n + i] = c;
            }
        }
        Self::new(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Largest `|s[i][j] - s[j][i]|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `sum_{j, k in set} s[j][k]`
    fn internal_sum(&self, set: &[Element]) -> f64 {
        set.iter()
            .map(|&j| {
                let row = self.row(j);
                set.iter().map(|&k| row[k]).sum::<f64>()
            })
            .sum()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_rectangular(rows: &[Vec<f64>]) -> Result<()> {
    let width = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != width) {
        return Err(Error::InvalidInput(format!(
            "row {i} has {} columns, expected {width}",
            rows[i].len()
        )));
    }
    if let Some(i) = rows.iter().position(|r| r.iter().any(|x| !x.is_finite())) {
        return Err(Error::InvalidInput(format!("row {i} has a non-finite entry")));
    }
    Ok(())
}

/// Representativeness minus redundancy:
/// `sum_i max_{j in S} s[i][j] - (1/n) sum_{j,k in S} s[j][k]`, clamped at 0.
/// The max over an empty set is 0.
#[derive(Debug, Clone)]
pub struct ImageSummarization {
    sim: SimilarityMatrix,
}

impl ImageSummarization {
    /// Requires a symmetric matrix (within [`SYMMETRY_TOLERANCE`]).
    pub fn new(sim: SimilarityMatrix) -> Result<Self> {
        let asym = sim.asymmetry();
        if asym > SYMMETRY_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "image similarity matrix is asymmetric by {asym}"
            )));
        }
        Ok(Self { sim })
    }

    pub fn similarity(&self) -> &SimilarityMatrix {
        &self.sim
    }
}

impl SetFunction for ImageSummarization {
    fn ground_size(&self) -> usize {
        self.sim.n
    }

    fn value(&self, set: &[Element]) -> f64 {
        if set.is_empty() {
            return 0.0;
        }
        let coverage: f64 = (0..self.sim.n)
            .map(|i| {
                let row = self.sim.row(i);
                set.iter().map(|&j| row[j]).fold(f64::NEG_INFINITY, f64::max)
            })
            .sum();
        let redundancy = self.sim.internal_sum(set) / self.sim.n as f64;
        (coverage - redundancy).max(0.0)
    }
}

/// Relevance minus weighted redundancy:
/// `sum_{i in S} sum_j s[i][j] - lambda sum_{j,k in S} s[j][k]`, clamped at 0.
#[derive(Debug, Clone)]
pub struct MovieRecommendation {
    sim: SimilarityMatrix,
    row_sums: Vec<f64>,
    redundancy_weight: f64,
}

impl MovieRecommendation {
    pub const DEFAULT_REDUNDANCY_WEIGHT: f64 = 0.95;

    pub fn new(sim: SimilarityMatrix) -> Self {
        Self::with_redundancy_weight(sim, Self::DEFAULT_REDUNDANCY_WEIGHT)
    }

    pub fn with_redundancy_weight(sim: SimilarityMatrix, redundancy_weight: f64) -> Self {
        let row_sums = (0..sim.n).map(|i| sim.row(i).iter().sum()).collect();
        Self {
            sim,
            row_sums,
            redundancy_weight,
        }
    }

    pub fn similarity(&self) -> &SimilarityMatrix {
        &self.sim
    }
}

impl SetFunction for MovieRecommendation {
    fn ground_size(&self) -> usize {
        self.sim.n
    }

    fn value(&self, set: &[Element]) -> f64 {
        let relevance: f64 = set.iter().map(|&i| self.row_sums[i]).sum();
        (relevance - self.redundancy_weight * self.sim.internal_sum(set)).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn image_empty_set_is_zero() {
        let f = ImageSummarization::new(SimilarityMatrix::constant(3, 1.0)).unwrap();
        assert_eq!(f.value(&[]), 0.0);
    }

    #[test]
    fn image_constant_matrix_singleton() {
        let f = ImageSummarization::new(SimilarityMatrix::constant(3, 1.0)).unwrap();
        for i in 0..3 {
            assert!(close(f.value(&[i]), 8.0 / 3.0));
        }
    }

    #[test]
    fn image_identity_singleton() {
        let f = ImageSummarization::new(SimilarityMatrix::identity(3)).unwrap();
        assert!(close(f.value(&[0]), 2.0 / 3.0));
    }

    #[test]
    fn image_rejects_asymmetry() {
        let m = SimilarityMatrix::from_rows(vec![vec![1.0, 0.5], vec![0.4, 1.0]]).unwrap();
        assert!(ImageSummarization::new(m).is_err());
    }

    #[test]
    fn movie_examples() {
        let f = MovieRecommendation::new(SimilarityMatrix::constant(3, 1.0));
        assert_eq!(f.value(&[]), 0.0);
        assert!(close(f.value(&[0, 2]), 2.0 * 3.0 - 0.95 * 4.0));

        let m = SimilarityMatrix::from_rows(vec![
            vec![2.0, 0.5, 0.25],
            vec![0.5, 1.0, 0.0],
            vec![0.25, 0.0, 3.0],
        ])
        .unwrap();
        let f = MovieRecommendation::new(m);
        assert!(close(f.value(&[0]), 2.75 - 0.95 * 2.0));
    }

    #[test]
    fn movie_negative_values_clamp() {
        let m = SimilarityMatrix::from_rows(vec![vec![1.0, -5.0], vec![-5.0, 1.0]]).unwrap();
        let f = MovieRecommendation::new(m);
        assert_eq!(f.value(&[0, 1]), 0.0);
    }

    #[test]
    fn inner_products_and_cosine() {
        let id = SimilarityMatrix::inner_products(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(id, SimilarityMatrix::identity(2));
        let twos = SimilarityMatrix::inner_products(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(twos, SimilarityMatrix::constant(2, 2.0));

        let c = SimilarityMatrix::cosine(&[vec![3.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(c.get(0, 0), 1.0);
        assert!(close(c.get(0, 1), 1.0 / 2f64.sqrt()));
        assert!(SimilarityMatrix::cosine(&[vec![0.0, 0.0], vec![1.0, 1.0]]).is_err());
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(SimilarityMatrix::from_rows(vec![vec![1.0, 0.0], vec![1.0]]).is_err());
        assert!(SimilarityMatrix::inner_products(&[vec![1.0, 0.0], vec![1.0]]).is_err());
    }
}
