//! Random simple graphs with a prescribed degree sequence.
//!
//! [`generate_chung_lu`] matches the sequence in expectation; each pair
//! `{i, j}` is an independent coin with probability `min(1, d_i d_j / 2m)`.
//! [`generate_exact_degree`] realizes the sequence exactly by sequential
//! edge insertion weighted as in the Bayati–Kim–Saberi sampler.
//!
//! In both, node `i` of the output corresponds to rank `i` of the target
//! (recoverable through [`Graph::original_id`] when isolated nodes were
//! dropped).

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::degseq::{is_graphical_erdos_gallai, DegreeSequence};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    ChungLu,
    Exact,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::ChungLu => "chung-lu",
            GeneratorKind::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub seed: u64,
    pub max_restarts: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_restarts: 20,
        }
    }
}

/// Provenance of a generated graph, written next to it as a sidecar.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationInfo {
    pub generator: GeneratorKind,
    pub seed: u64,
    /// Restarts after the first attempt; always 0 for Chung-Lu.
    pub restarts_used: u32,
    /// Degree-preserving switches used to finish a stuck attempt (exact only).
    pub switches_used: usize,
    pub isolated_removed: usize,
    /// Some pair probability exceeded 1 and was clipped (Chung-Lu only).
    pub clipped: bool,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    pub info: GenerationInfo,
}

/// Edges of one Chung-Lu sample over the nodes `0..n` of `target`.
///
/// Uses geometric skipping over the descending weights so the cost is
/// `O(n + m)` rather than one coin per pair.
pub fn chung_lu_edges<R: Rng + ?Sized>(target: &DegreeSequence, rng: &mut R) -> Vec<(usize, usize)> {
    let w: Vec<f64> = target.degrees().iter().map(|&d| d as f64).collect();
    let total: f64 = w.iter().sum();
    let n = w.len();
    let mut edges = Vec::new();
    for u in 0..n.saturating_sub(1) {
        let mut v = u + 1;
        let mut p = (w[u] * w[v] / total).min(1.0);
        while v < n && p > 0.0 {
            if p < 1.0 {
                let r: f64 = rng.gen::<f64>();
                // Number of failures before the next success at rate p.
                let skip = ((1.0 - r).ln() / (1.0 - p).ln()).floor();
                if skip >= (n - v) as f64 {
                    break;
                }
                v += skip as usize;
            }
            let q = (w[u] * w[v] / total).min(1.0);
            if rng.gen::<f64>() < q / p {
                edges.push((u, v));
            }
            p = q;
            v += 1;
        }
    }
    edges
}

pub fn generate_chung_lu(target: &DegreeSequence, seed: u64) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = chung_lu_edges(target, &mut rng);
    let total = target.sum() as f64;
    let clipped = (target.max() as f64).powi(2) > total;
    let (graph, stats) = Graph::from_edges(target.len(), edges, false)?;
    Ok(Generated {
        graph,
        info: GenerationInfo {
            generator: GeneratorKind::ChungLu,
            seed,
            restarts_used: 0,
            switches_used: 0,
            isolated_removed: stats.isolated_removed,
            clipped,
        },
    })
}

/// Realizes `target` exactly.
///
/// Residual degrees `r_i` start at `d_i`. Each step inserts a pair `{i, j}`
/// not yet adjacent with probability proportional to
/// `r_i r_j (1 - d_i d_j / 4m)`, sampled by drawing `i` and `j` from the
/// residual distribution and rejecting loops, existing edges, and the weight
/// factor. If no legal pair remains, the leftover stubs are placed by
/// switches: an existing edge `{a, b}` is replaced by `{u, a}, {v, b}` (or
/// `{u, a}, {u, b}`), which keeps `a` and `b` saturated. If no switch
/// applies, the attempt is abandoned and restarted with seed
/// `config.seed + attempt`.
pub fn generate_exact_degree(target: &DegreeSequence, config: &GenConfig) -> Result<Generated> {
    if config.max_restarts < 1 {
        return Err(invalid("max_restarts must be at least 1"));
    }
    if !is_graphical_erdos_gallai(target.degrees()) {
        return Err(Error::NotGraphical);
    }
    let mut dead_ends = Vec::new();
    for attempt in 0..config.max_restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(attempt as u64));
        match sequential_attempt(target.degrees(), &mut rng) {
            Ok((edges, switches_used)) => {
                let (graph, stats) = Graph::from_edges(target.len(), edges, false)?;
                debug_assert_eq!(stats.duplicates, 0);
                return Ok(Generated {
                    graph,
                    info: GenerationInfo {
                        generator: GeneratorKind::Exact,
                        seed: config.seed,
                        restarts_used: attempt,
                        switches_used,
                        isolated_removed: stats.isolated_removed,
                        clipped: false,
                    },
                });
            }
            Err(stuck) => dead_ends.push(stuck),
        }
    }
    Err(Error::RestartsExhausted {
        restarts: config.max_restarts,
        diagnostics: format!(
            "dead ends with (unsaturated nodes, residual stubs) = {:?}",
            dead_ends
        ),
    })
}

// Past this many unsaturated nodes legal pairs are found by rejection alone.
const ENUMERATION_LIMIT: usize = 4096;
const REJECTIONS_BEFORE_ENUMERATION: usize = 256;
const REJECTION_CAP: usize = 50_000_000;

type Attempt = std::result::Result<(Vec<(usize, usize)>, usize), (usize, u64)>;

/// One sequential pass returning the edges and switches used.
/// On failure returns (unsaturated nodes, residual stubs).
fn sequential_attempt<R: Rng + ?Sized>(degrees: &[usize], rng: &mut R) -> Attempt {
    let n = degrees.len();
    let four_m = 2.0 * degrees.iter().sum::<usize>() as f64;
    let weight = |i: usize, j: usize| (1.0 - degrees[i] as f64 * degrees[j] as f64 / four_m).max(0.0);
    let key = |i: usize, j: usize| {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        a as u64 * n as u64 + b as u64
    };

    let mut residual = Fenwick::from_weights(degrees.iter().map(|&d| d as u64));
    let mut present: HashSet<u64> = HashSet::with_capacity(degrees.iter().sum::<usize>() / 2);
    let mut edges = Vec::with_capacity(degrees.iter().sum::<usize>() / 2);
    let mut rejections = 0usize;

    while residual.total() > 0 {
        let total = residual.total();
        let i = residual.sample(rng.gen_range(0..total));
        let j = residual.sample(rng.gen_range(0..total));
        let accepted = i != j && !present.contains(&key(i, j)) && rng.gen::<f64>() < weight(i, j);
        if accepted {
            present.insert(key(i, j));
            edges.push((i.min(j), i.max(j)));
            residual.add(i, -1);
            residual.add(j, -1);
            rejections = 0;
            continue;
        }
        rejections += 1;
        if rejections < REJECTIONS_BEFORE_ENUMERATION {
            continue;
        }
        let open: Vec<usize> = (0..n).filter(|&v| residual.weight(v) > 0).collect();
        if open.len() > ENUMERATION_LIMIT {
            if rejections > REJECTION_CAP {
                let mut residual: Vec<u64> = (0..n).map(|v| residual.weight(v)).collect();
                return complete_by_switches(&mut residual, edges, present, key, rng);
            }
            continue;
        }
        // Few stubs left: sample exactly among the legal pairs.
        let mut pairs = Vec::new();
        let mut weights = Vec::new();
        for (a, &u) in open.iter().enumerate() {
            for &v in &open[a + 1..] {
                if !present.contains(&key(u, v)) {
                    pairs.push((u, v));
                    weights.push(
                        residual.weight(u) as f64 * residual.weight(v) as f64 * weight(u, v),
                    );
                }
            }
        }
        if pairs.is_empty() {
            let mut residual: Vec<u64> = (0..n).map(|v| residual.weight(v)).collect();
            return complete_by_switches(&mut residual, edges, present, key, rng);
        }
        let mut sum: f64 = weights.iter().sum();
        if !(sum > 0.0) {
            weights = pairs
                .iter()
                .map(|&(u, v)| residual.weight(u) as f64 * residual.weight(v) as f64)
                .collect();
            sum = weights.iter().sum();
        }
        let mut x = rng.gen::<f64>() * sum;
        let mut pick = pairs.len() - 1;
        for (idx, w) in weights.iter().enumerate() {
            if x < *w {
                pick = idx;
                break;
            }
            x -= w;
        }
        let (u, v) = pairs[pick];
        present.insert(key(u, v));
        edges.push((u, v));
        residual.add(u, -1);
        residual.add(v, -1);
        rejections = 0;
    }
    Ok((edges, 0))
}

/// Places the remaining stubs of a stuck attempt with degree-preserving switches.
fn complete_by_switches<R: Rng + ?Sized>(
    residual: &mut [u64],
    mut edges: Vec<(usize, usize)>,
    mut present: HashSet<u64>,
    key: impl Fn(usize, usize) -> u64,
    rng: &mut R,
) -> Attempt {
    let mut switches = 0;
    let stuck = |residual: &[u64]| {
        let open = residual.iter().filter(|&&r| r > 0).count();
        (open, residual.iter().sum::<u64>())
    };
    loop {
        let open: Vec<usize> = (0..residual.len()).filter(|&v| residual[v] > 0).collect();
        let Some(&u) = open.iter().max_by_key(|&&v| (residual[v], std::cmp::Reverse(v))) else {
            return Ok((edges, switches));
        };
        if let Some(&v) = open.iter().find(|&&v| v != u && !present.contains(&key(u, v))) {
            present.insert(key(u, v));
            edges.push((u.min(v), u.max(v)));
            residual[u] -= 1;
            residual[v] -= 1;
            continue;
        }
        // Every open partner is already adjacent to u.
        let partner = if residual[u] >= 2 {
            u
        } else {
            match open.iter().find(|&&v| v != u) {
                Some(&v) => v,
                None => return Err(stuck(residual)),
            }
        };
        let free = |x: usize, y: usize| x != y && !present.contains(&key(x, y));
        let m = edges.len();
        let start = if m == 0 { 0 } else { rng.gen_range(0..m) };
        let found = (0..m).map(|t| (start + t) % m).find_map(|idx| {
            let (a, b) = edges[idx];
            if free(u, a) && free(partner, b) {
                Some((idx, a, b))
            } else if free(u, b) && free(partner, a) {
                Some((idx, b, a))
            } else {
                None
            }
        });
        let Some((idx, a, b)) = found else {
            return Err(stuck(residual));
        };
        present.remove(&key(a, b));
        edges.swap_remove(idx);
        for (x, y) in [(u, a), (partner, b)] {
            present.insert(key(x, y));
            edges.push((x.min(y), x.max(y)));
        }
        residual[u] -= 1;
        residual[partner] -= 1;
        switches += 1;
    }
}

/// Fenwick tree over nonnegative integer weights with sampling by prefix sum.
struct Fenwick {
    tree: Vec<u64>,
    values: Vec<u64>,
    total: u64,
    top_bit: usize,
}

impl Fenwick {
    fn from_weights(w: impl Iterator<Item = u64>) -> Self {
        let values: Vec<u64> = w.collect();
        let n = values.len();
        let mut tree = vec![0u64; n + 1];
        for (i, &v) in values.iter().enumerate() {
            tree[i + 1] += v;
            let parent = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if parent <= n {
                tree[parent] += tree[i + 1];
            }
        }
        let total = values.iter().sum();
        let top_bit = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        Self {
            tree,
            values,
            total,
            top_bit,
        }
    }

    fn total(&self) -> u64 {
        self.total
    }

    fn weight(&self, i: usize) -> u64 {
        self.values[i]
    }

    fn add(&mut self, i: usize, delta: i64) {
        self.values[i] = self.values[i].checked_add_signed(delta).expect("weight underflow");
        self.total = self.total.checked_add_signed(delta).unwrap();
        let mut k = i + 1;
        while k < self.tree.len() {
            self.tree[k] = self.tree[k].wrapping_add_signed(delta);
            k += k & k.wrapping_neg();
        }
    }

    /// The index whose cumulative range contains `target` (`0 <= target < total`).
    fn sample(&self, mut target: u64) -> usize {
        let mut pos = 0;
        let mut step = self.top_bit;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degseq::generate_rank_skewed;

    fn seq(d: &[usize]) -> DegreeSequence {
        DegreeSequence::new(d.to_vec()).unwrap()
    }

    fn assert_simple(g: &Graph) {
        for u in 0..g.node_count() {
            let adj = g.neighbors(u);
            assert!(adj.windows(2).all(|w| w[0] < w[1]));
            assert!(!adj.contains(&(u as u32)));
        }
        assert!(g.is_symmetric());
    }

    #[test]
    fn fenwick_samples_by_cumulative_weight() {
        let mut f = Fenwick::from_weights([2u64, 0, 3, 1].into_iter());
        assert_eq!(f.total(), 6);
        let picks: Vec<usize> = (0..6).map(|t| f.sample(t)).collect();
        assert_eq!(picks, vec![0, 0, 2, 2, 2, 3]);
        f.add(2, -3);
        f.add(1, 1);
        let picks: Vec<usize> = (0..4).map(|t| f.sample(t)).collect();
        assert_eq!(picks, vec![0, 0, 1, 3]);
    }

    #[test]
    fn chung_lu_pair_frequency() {
        let target = seq(&[1, 1]);
        let hits = (0..10_000u64)
            .filter(|&s| !chung_lu_edges(&target, &mut ChaCha8Rng::seed_from_u64(s)).is_empty())
            .count();
        let freq = hits as f64 / 10_000.0;
        assert!((freq - 0.5).abs() <= 0.02, "{freq}");
    }

    #[test]
    fn chung_lu_clipping() {
        // d_0 d_1 / 2m = 9/8 is clipped, so that pair is always present.
        let target = seq(&[3, 3, 1, 1]);
        for s in 0..200 {
            let g = generate_chung_lu(&target, s).unwrap();
            assert!(g.info.clipped);
            assert!(g.graph.has_edge(0, 1));
        }
        // Constant n-1 targets give (n-1)/n per pair, below 1.
        let n = 5;
        let target = seq(&vec![n - 1; n]);
        let edges: usize = (0..2000)
            .map(|s| chung_lu_edges(&target, &mut ChaCha8Rng::seed_from_u64(s)).len())
            .sum();
        let freq = edges as f64 / (2000.0 * 10.0);
        assert!((freq - 0.8).abs() < 0.02, "{freq}");
        assert!(!generate_chung_lu(&target, 0).unwrap().info.clipped);
    }

    #[test]
    fn chung_lu_matches_brute_force_pair_probabilities() {
        // Marginal frequency of each pair against min(1, d_i d_j / 2m).
        let target = seq(&[4, 3, 2, 2, 1, 1, 1]);
        let total = target.sum() as f64;
        let n = target.len();
        let samples = 20_000;
        let mut counts = vec![vec![0usize; n]; n];
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..samples {
            for (u, v) in chung_lu_edges(&target, &mut rng) {
                counts[u][v] += 1;
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                let d = target.degrees();
                let p = (d[u] as f64 * d[v] as f64 / total).min(1.0);
                let f = counts[u][v] as f64 / samples as f64;
                let sd = (p * (1.0 - p) / samples as f64).sqrt();
                assert!((f - p).abs() <= 5.0 * sd + 1e-9, "pair ({u},{v}): {f} vs {p}");
            }
        }
    }

    #[test]
    fn chung_lu_expected_degrees() {
        let target = generate_rank_skewed(10_000, 100, 2, 0.5).unwrap();
        let n = target.len();
        let mut sum = vec![0.0f64; n];
        let samples = 200;
        for s in 0..samples {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            for (u, v) in chung_lu_edges(&target, &mut rng) {
                sum[u] += 1.0;
                sum[v] += 1.0;
            }
        }
        for (i, &d) in target.degrees().iter().enumerate().filter(|(_, &d)| d >= 10) {
            let mean = sum[i] / samples as f64;
            assert!((mean - d as f64).abs() <= 0.1 * d as f64, "node {i}: {mean} vs {d}");
        }
    }

    #[test]
    fn chung_lu_is_deterministic() {
        let target = generate_rank_skewed(2_000, 45, 2, 0.75).unwrap().repair_parity();
        let a = generate_chung_lu(&target, 17).unwrap();
        let b = generate_chung_lu(&target, 17).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_simple(&a.graph);
    }

    #[test]
    fn exact_forced_realizations() {
        let g = generate_exact_degree(&seq(&[2, 2, 2]), &GenConfig::default()).unwrap().graph;
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.triangle_count(), 1);
        let g = generate_exact_degree(&seq(&[3, 1, 1, 1]), &GenConfig::default()).unwrap().graph;
        assert_eq!(g.degrees(), vec![3, 1, 1, 1]);
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
    }

    #[test]
    fn exact_realizes_target_for_many_seeds() {
        let target = generate_rank_skewed(10, 9, 2, 0.5).unwrap().repair_parity();
        assert!(target.is_graphical());
        for seed in 0..100 {
            let out = generate_exact_degree(&target, &GenConfig { seed, max_restarts: 50 }).unwrap();
            assert_eq!(out.graph.degrees(), target.degrees(), "seed {seed}");
            assert_simple(&out.graph);
        }
    }

    #[test]
    fn exact_rejects_non_graphical() {
        assert!(matches!(
            generate_exact_degree(&seq(&[3, 3, 2]), &GenConfig::default()),
            Err(Error::NotGraphical)
        ));
        assert!(matches!(
            generate_exact_degree(&seq(&[2, 2, 1]), &GenConfig::default()),
            Err(Error::NotGraphical)
        ));
        assert!(generate_exact_degree(&seq(&[1, 1]), &GenConfig { seed: 0, max_restarts: 0 }).is_err());
    }

    #[test]
    fn exact_is_deterministic_and_exact_at_scale() {
        let target = generate_rank_skewed(20_000, 142, 2, 0.5).unwrap().repair_parity();
        let cfg = GenConfig { seed: 4, max_restarts: 20 };
        let a = generate_exact_degree(&target, &cfg).unwrap();
        let b = generate_exact_degree(&target, &cfg).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.graph.degrees(), target.degrees());
        assert_simple(&a.graph);
    }
}
