//! Seeded random-graph generators.
//!
//! Every generator is a pure function of its parameters and seed: the same
//! inputs produce the same edge list, bit for bit.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::objectives::CutGraph;
use crate::oracle::Element;

/// Random-graph family and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphModel {
    ErdosRenyi { n: usize, p: f64 },
    StochasticBlock { clusters: usize, size_lo: usize, size_hi: usize, p_in: f64 },
    BarabasiAlbert { n: usize, m: usize },
    Configuration { n: usize, exponent: f64 },
}

impl GraphModel {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidInput(msg));
        match *self {
            GraphModel::ErdosRenyi { p, .. } | GraphModel::StochasticBlock { p_in: p, .. }
                if !(0.0..=1.0).contains(&p) =>
            {
                invalid(format!("edge probability {p} is outside [0, 1]"))
            }
            GraphModel::StochasticBlock { size_lo, size_hi, .. } if size_lo > size_hi => {
                invalid(format!("cluster size range [{size_lo}, {size_hi}] is empty"))
            }
            GraphModel::BarabasiAlbert { n, m } if m == 0 || m >= n => {
                invalid(format!("attachment count m = {m} must satisfy 1 <= m < n = {n}"))
            }
            GraphModel::Configuration { exponent, .. } if !(exponent > 1.0) => {
                invalid(format!("power-law exponent {exponent} must exceed 1"))
            }
            _ => Ok(()),
        }
    }

    pub fn generate(&self, seed: u64) -> Result<CutGraph> {
        self.validate()?;
        match *self {
            GraphModel::ErdosRenyi { n, p } => gen_erdos_renyi(n, p, seed),
            GraphModel::StochasticBlock { clusters, size_lo, size_hi, p_in } => {
                gen_sbm(clusters, size_lo, size_hi, p_in, seed).map(|(g, _)| g)
            }
            GraphModel::BarabasiAlbert { n, m } => gen_barabasi_albert(n, m, seed),
            GraphModel::Configuration { n, exponent } => gen_configuration_model(n, exponent, seed),
        }
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G(n, p)`: each unordered pair is an edge independently with probability `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<CutGraph> {
    GraphModel::ErdosRenyi { n, p }.validate()?;
    let mut rng = rng_for(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                pairs.push((u, v));
            }
        }
    }
    CutGraph::unweighted(n, &pairs, false)
}

/// Disconnected clusters with sizes uniform on `[size_lo, size_hi]` and
/// intra-cluster edge probability `p_in`. Nodes of a cluster are contiguous;
/// the cluster sizes are returned alongside the graph.
pub fn gen_sbm(
    clusters: usize,
    size_lo: usize,
    size_hi: usize,
    p_in: f64,
    seed: u64,
) -> Result<(CutGraph, Vec<usize>)> {
    GraphModel::StochasticBlock { clusters, size_lo, size_hi, p_in }.validate()?;
    let mut rng = rng_for(seed);
    let sizes: Vec<usize> = (0..clusters).map(|_| rng.gen_range(size_lo..=size_hi)).collect();
    let mut pairs = Vec::new();
    let mut start = 0;
    for &size in &sizes {
        for u in start..start + size {
            for v in u + 1..start + size {
                if rng.gen::<f64>() < p_in {
                    pairs.push((u, v));
                }
            }
        }
        start += size;
    }
    Ok((CutGraph::unweighted(start, &pairs, false)?, sizes))
}

/// Preferential attachment. The first `m` nodes start isolated; every later
/// node links to `m` distinct earlier nodes drawn without replacement with
/// probability proportional to `degree + 1`.
pub fn gen_barabasi_albert(n: usize, m: usize, seed: u64) -> Result<CutGraph> {
    GraphModel::BarabasiAlbert { n, m }.validate()?;
    let mut rng = rng_for(seed);
    let mut degree = vec![0usize; n];
    let mut pairs = Vec::with_capacity(m * (n - m));
    let mut targets = Vec::with_capacity(m);
    for newcomer in m..n {
        targets.clear();
        let mut picked = vec![false; newcomer];
        let mut total: f64 = degree[..newcomer].iter().map(|&d| (d + 1) as f64).sum();
        for _ in 0..m {
            let mut draw = rng.gen::<f64>() * total;
            let mut chosen = None;
            for (v, &d) in degree[..newcomer].iter().enumerate() {
                if picked[v] {
                    continue;
                }
                let w = (d + 1) as f64;
                chosen = Some(v);
                if draw < w {
                    break;
                }
                draw -= w;
            }
            // Rounding can run the draw past the last candidate; keep that one.
            let v = chosen.expect("m < newcomer leaves an unpicked candidate");
            picked[v] = true;
            total -= (degree[v] + 1) as f64;
            targets.push(v);
        }
        for &v in &targets {
            degree[v] += 1;
            pairs.push((v, newcomer));
        }
        degree[newcomer] += m;
    }
    CutGraph::unweighted(n, &pairs, false)
}

/// Power-law configuration model: degrees `d` in `[1, n - 1]` with
/// `P(d) ~ d^-exponent`, redrawn until their sum is even, then random stub
/// matching projected to a simple graph.
pub fn gen_configuration_model(n: usize, exponent: f64, seed: u64) -> Result<CutGraph> {
    GraphModel::Configuration { n, exponent }.validate()?;
    let mut rng = rng_for(seed);
    if n < 2 {
        return CutGraph::unweighted(n, &[], false);
    }
    let max_degree = n - 1;
    let mut cumulative = Vec::with_capacity(max_degree);
    let mut acc = 0.0;
    for d in 1..=max_degree {
        acc += (d as f64).powf(-exponent);
        cumulative.push(acc);
    }
    let degrees = loop {
        let degrees: Vec<usize> = (0..n)
            .map(|_| {
                let u = rng.gen::<f64>() * acc;
                1 + cumulative.partition_point(|&c| c <= u).min(max_degree - 1)
            })
            .collect();
        if degrees.iter().sum::<usize>() % 2 == 0 {
            break degrees;
        }
    };
    configuration_from_degrees(&degrees, &mut rng)
}

/// Stub matching for a fixed degree sequence with an even sum. Self-loops
/// and repeated pairs are dropped.
pub fn configuration_from_degrees<R: Rng>(degrees: &[usize], rng: &mut R) -> Result<CutGraph> {
    if degrees.iter().sum::<usize>() % 2 != 0 {
        return Err(Error::InvalidInput("degree sum must be even".into()));
    }
    let mut stubs: Vec<Element> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    stubs.shuffle(rng);
    let mut seen = HashSet::new();
    let pairs: Vec<(Element, Element)> = stubs
        .chunks_exact(2)
        .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
        .filter(|&(u, v)| u != v && seen.insert((u, v)))
        .collect();
    CutGraph::unweighted(degrees.len(), &pairs, false)
}

/// Replaces every edge weight with an independent draw from the open
/// interval (0, 1).
pub fn assign_uniform_weights(graph: &CutGraph, seed: u64) -> Result<CutGraph> {
    let mut rng = rng_for(seed);
    let weights: Vec<f64> = (0..graph.edge_count())
        .map(|_| loop {
            let w: f64 = rng.gen();
            if w > 0.0 {
                break w;
            }
        })
        .collect();
    graph.with_weights(&weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_extremes() {
        assert_eq!(gen_erdos_renyi(30, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(gen_erdos_renyi(30, 1.0, 1).unwrap().edge_count(), 30 * 29 / 2);
    }

    #[test]
    fn er_edge_count_is_binomial() {
        // mean 249750, sd sqrt(499500 / 4) ~ 353.4
        let g = gen_erdos_renyi(1000, 0.5, 7).unwrap();
        let dev = (g.edge_count() as f64 - 249_750.0).abs();
        assert!(dev <= 3.0 * 353.4, "edge count {}", g.edge_count());
    }

    #[test]
    fn sbm_extremes() {
        let (g, sizes) = gen_sbm(3, 5, 9, 0.0, 2).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.n(), sizes.iter().sum::<usize>());

        let (g, sizes) = gen_sbm(2, 4, 6, 1.0, 3).unwrap();
        let cliques: usize = sizes.iter().map(|s| s * (s - 1) / 2).sum();
        assert_eq!(g.edge_count(), cliques);
    }

    #[test]
    fn sbm_sizes_in_range() {
        let (_, sizes) = gen_sbm(7, 30, 120, 0.8, 11).unwrap();
        assert_eq!(sizes.len(), 7);
        assert!(sizes.iter().all(|s| (30..=120).contains(s)));
    }

    #[test]
    fn ba_edge_count() {
        for (n, m) in [(10, 1), (50, 3), (40, 39)] {
            let g = gen_barabasi_albert(n, m, 5).unwrap();
            assert_eq!(g.edge_count(), m * (n - m));
        }
    }

    #[test]
    fn ba_tree_when_m_is_one() {
        let g = gen_barabasi_albert(25, 1, 9).unwrap();
        assert_eq!(g.edge_count(), 24);
        // every newcomer links backwards once: connected
        let mut reach = [false; 25];
        reach[0] = true;
        for _ in 0..25 {
            for &(u, v, _) in g.edges() {
                if reach[u] || reach[v] {
                    reach[u] = true;
                    reach[v] = true;
                }
            }
        }
        assert!(reach.iter().all(|&r| r));
    }

    #[test]
    fn configuration_perfect_matching() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = configuration_from_degrees(&[1; 12], &mut rng).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!((0..12).all(|v| g.degree(v) == 1));
    }

    #[test]
    fn configuration_rejects_odd_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(configuration_from_degrees(&[1, 1, 1], &mut rng).is_err());
    }

    #[test]
    fn invalid_parameters() {
        assert!(gen_erdos_renyi(5, 1.5, 0).is_err());
        assert!(gen_sbm(2, 5, 4, 0.5, 0).is_err());
        assert!(gen_barabasi_albert(5, 5, 0).is_err());
        assert!(gen_configuration_model(5, 1.0, 0).is_err());
    }

    #[test]
    fn uniform_weights_are_open_unit() {
        let g = gen_erdos_renyi(40, 0.5, 1).unwrap();
        let w = assign_uniform_weights(&g, 2).unwrap();
        assert_eq!(w.edge_count(), g.edge_count());
        assert!(w.edges().iter().all(|&(_, _, x)| x > 0.0 && x < 1.0));
        let empty = CutGraph::unweighted(4, &[], false).unwrap();
        assert_eq!(assign_uniform_weights(&empty, 2).unwrap().edge_count(), 0);
    }
}
