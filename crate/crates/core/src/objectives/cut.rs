use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::oracle::{Element, SetFunction};

/// Unit-weight simple graphs up to this size get a bitset adjacency matrix.
const BITSET_MAX_NODES: usize = 8192;

/// Weighted graph whose objective is the total weight of edges with exactly
/// one endpoint in the queried set. Direction, when present, is ignored by
/// the crossing test.
#[derive(Debug, Clone)]
pub struct CutGraph {
    n: usize,
    edges: Vec<(Element, Element, f64)>,
    directed: bool,
    adjacency: Vec<Vec<(Element, f64)>>,
    unit_rows: Option<BitRows>,
}

#[derive(Debug, Clone)]
struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl CutGraph {
    pub fn new(n: usize, edges: Vec<(Element, Element, f64)>, directed: bool) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut pairs = HashSet::with_capacity(edges.len());
        let mut simple_unit = n <= BITSET_MAX_NODES;
        for (line, &(u, v, w)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge {line} ({u}, {v}) references a node outside [0, {n})"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("edge {line} is a self-loop on {u}")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "edge {line} ({u}, {v}) has weight {w}; weights must be finite and >= 0"
                )));
            }
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
            if simple_unit && (w != 1.0 || !pairs.insert((u.min(v), u.max(v)))) {
                simple_unit = false;
            }
        }

        let unit_rows = simple_unit.then(|| {
            let words = n.div_ceil(64);
            let mut bits = vec![0u64; n * words];
            for &(u, v, _) in &edges {
                bits[u * words + v / 64] |= 1 << (v % 64);
                bits[v * words + u / 64] |= 1 << (u % 64);
            }
            BitRows { words, bits }
        });

        Ok(Self {
            n,
            edges,
            directed,
            adjacency,
            unit_rows,
        })
    }

    /// Graph with every edge at weight 1.
    pub fn unweighted(n: usize, pairs: &[(Element, Element)], directed: bool) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(u, v)| (u, v, 1.0)).collect(), directed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Element, Element, f64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn degree(&self, u: Element) -> usize {
        self.adjacency[u].len()
    }

    pub fn neighbors(&self, u: Element) -> impl Iterator<Item = (Element, f64)> + '_ {
        self.adjacency[u].iter().copied()
    }

    /// Same topology, new weights (one per edge, in edge order).
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::InvalidInput(format!(
                "{} weights for {} edges",
                weights.len(),
                self.edges.len()
            )));
        }
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(&(u, v, _), &w)| (u, v, w))
            .collect();
        Self::new(self.n, edges, self.directed)
    }

    /// Total weight of edges with exactly one endpoint in `set`.
    pub fn cut_value(&self, set: &[Element]) -> f64 {
        match &self.unit_rows {
            Some(rows) => {
                let mut mask = vec![0u64; rows.words];
                for &u in set {
                    mask[u / 64] |= 1 << (u % 64);
                }
                let crossing: u64 = set
                    .iter()
                    .map(|&u| {
                        let row = &rows.bits[u * rows.words..(u + 1) * rows.words];
                        row.iter()
                            .zip(&mask)
                            .map(|(r, m)| (r & !m).count_ones() as u64)
                            .sum::<u64>()
                    })
                    .sum();
                crossing as f64
            }
            None => {
                let mut inside = vec![false; self.n];
                for &u in set {
                    inside[u] = true;
                }
                set.iter()
                    .flat_map(|&u| self.adjacency[u].iter())
                    .filter(|(v, _)| !inside[*v])
                    .map(|(_, w)| w)
                    .sum()
            }
        }
    }
}

impl SetFunction for CutGraph {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &[Element]) -> f64 {
        self.cut_value(set)
    }
}
