use crate::error::{Error, Result};
use crate::objectives::CutGraph;
use crate::oracle::{Element, SetFunction};

/// Revenue from seeding a social network: each user outside the seed set
/// pays the square root of their total edge weight to seeded users,
/// `f(S) = sum_{i not in S} sqrt(sum_{j in S} w[i][j])`.
#[derive(Debug, Clone)]
pub struct RevenueWeights {
    n: usize,
    adjacency: Vec<Vec<(Element, f64)>>,
}

impl RevenueWeights {
    /// Undirected weighted edges; repeated pairs accumulate.
    pub fn new(n: usize, edges: &[(Element, Element, f64)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({i}, {j}) references a user outside [0, {n})"
                )));
            }
            if i == j {
                return Err(Error::InvalidInput(format!("self-weight on user {i}")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "edge ({i}, {j}) has weight {w}; weights must be finite and >= 0"
                )));
            }
            adjacency[i].push((j, w));
            adjacency[j].push((i, w));
        }
        Ok(Self { n, adjacency })
    }

    /// Uses the graph's edge weights, ignoring direction.
    pub fn from_graph(graph: &CutGraph) -> Result<Self> {
        Self::new(graph.n(), graph.edges())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `w[i][j]` (0 when the users are not adjacent).
    pub fn weight(&self, i: Element, j: Element) -> f64 {
        self.adjacency[i]
            .iter()
            .filter(|(v, _)| *v == j)
            .map(|(_, w)| w)
            .sum()
    }
}

impl SetFunction for RevenueWeights {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &[Element]) -> f64 {
        let mut seeded = vec![false; self.n];
        let mut influence = vec![0.0; self.n];
        for &j in set {
            seeded[j] = true;
            for &(i, w) in &self.adjacency[j] {
                influence[i] += w;
            }
        }
        influence
            .iter()
            .zip(&seeded)
            .filter(|(_, s)| !**s)
            .map(|(x, _)| x.sqrt())
            .sum()
    }
}
