//! Closed-form seeded PageRank on complete-bipartite graphs.
//!
//! The walk matrix of `K_{k,n-k}` has eigenvalues in `{1, -1, 0}`, so any
//! function of it is the quadratic `c0 I + c1 P + c2 P²` interpolating the
//! function at those three points. For the resolvent this gives a vector
//! with only three distinct values, which makes every localization count
//! an O(1) computation.
//!
//! Layout used throughout: nodes `0..k` form the seed's partition, with the
//! seed at node 0, and nodes `k..n` the other partition.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::localization::Norm;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BipartiteSpec {
    pub n: usize,
    /// Size of the seed's partition.
    pub k: usize,
    pub alpha: f64,
}

impl BipartiteSpec {
    pub fn new(n: usize, k: usize, alpha: f64) -> Result<Self> {
        if k < 1 || k + 1 > n {
            return Err(invalid(format!("need 1 <= k <= n - 1, got n = {n}, k = {k}")));
        }
        if !(0.0..1.0).contains(&alpha) {
            return Err(invalid(format!("alpha must lie in [0, 1), got {alpha}")));
        }
        Ok(Self { n, k, alpha })
    }

    pub fn far(&self) -> usize {
        self.n - self.k
    }

    /// Degree of nodes in the seed's partition.
    pub fn seed_side_degree(&self) -> usize {
        self.far()
    }

    /// Degree of nodes in the other partition.
    pub fn far_side_degree(&self) -> usize {
        self.k
    }

    /// Under the 1-norm, whether seed-side entries outweigh far-side ones.
    pub fn seed_side_larger_l1(&self) -> bool {
        (self.k as f64) < self.alpha * self.far() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpCoeffs {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl InterpCoeffs {
    /// Quadratic through `f` at `0, 1, -1`.
    pub fn interpolate(f: impl Fn(f64) -> f64) -> Self {
        let (f0, f1, fm1) = (f(0.0), f(1.0), f(-1.0));
        Self {
            c0: f0,
            c1: (f1 - fm1) / 2.0,
            c2: (f1 + fm1 - 2.0 * f0) / 2.0,
        }
    }

    /// Coefficients for `f(x) = (1-α) / (1 - αx)`.
    pub fn resolvent(alpha: f64) -> Self {
        Self {
            c0: 1.0 - alpha,
            c1: alpha / (1.0 + alpha),
            c2: alpha * alpha / (1.0 + alpha),
        }
    }

    /// `(c0 I + c1 P + c2 P²) e_seed` on a materialized graph.
    pub fn apply_to_unit(&self, g: &Graph, seed: usize) -> Vec<f64> {
        let n = g.node_count();
        let mut e = vec![0.0; n];
        e[seed] = 1.0;
        let mut pe = vec![0.0; n];
        g.apply_walk_dense(&e, &mut pe);
        let mut ppe = vec![0.0; n];
        g.apply_walk_dense(&pe, &mut ppe);
        (0..n)
            .map(|i| self.c0 * e[i] + self.c1 * pe[i] + self.c2 * ppe[i])
            .collect()
    }
}

/// A vector constant on the seed, the rest of its partition, and the far side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockVector {
    pub seed_value: f64,
    pub same_side_value: f64,
    pub other_side_value: f64,
}

impl BlockVector {
    pub fn to_dense(&self, spec: &BipartiteSpec) -> Vec<f64> {
        let mut v = vec![self.same_side_value; spec.k];
        v[0] = self.seed_value;
        v.resize(spec.n, self.other_side_value);
        v
    }

    pub fn total(&self, spec: &BipartiteSpec) -> f64 {
        self.seed_value
            + (spec.k - 1) as f64 * self.same_side_value
            + spec.far() as f64 * self.other_side_value
    }
}

pub fn exact_ppr_vector(spec: &BipartiteSpec) -> BlockVector {
    let a = spec.alpha;
    let same = a * a / ((1.0 + a) * spec.k as f64);
    BlockVector {
        seed_value: (1.0 - a) + same,
        same_side_value: same,
        other_side_value: a / ((1.0 + a) * spec.far() as f64),
    }
}

/// [`exact_ppr_vector`] divided entrywise by degree.
pub fn exact_ppr_degree_normalized(spec: &BipartiteSpec) -> BlockVector {
    let a = spec.alpha;
    let (k, far) = (spec.k as f64, spec.far() as f64);
    let same = a * a / ((1.0 + a) * k * far);
    BlockVector {
        seed_value: (1.0 - a) / far + same,
        same_side_value: same,
        other_side_value: a / ((1.0 + a) * k * far),
    }
}

/// A run of `count` entries that each contribute `value` to the error sum.
#[derive(Debug, Clone, Copy)]
struct Group {
    value: f64,
    count: usize,
}

/// Fewest entries to keep from `groups` so the omitted contributions meet `eps`.
fn greedy_over_groups(mut groups: Vec<Group>, eps: f64, norm: Norm) -> usize {
    groups.retain(|g| g.count > 0 && g.value > 0.0);
    groups.sort_by(|a, b| b.value.total_cmp(&a.value));
    let mut tail: f64 = groups.iter().map(|g| g.value * g.count as f64).sum();
    let target = if norm.is_squared() { eps * eps } else { eps };
    let mut kept = 0;
    for g in groups {
        if norm.within(tail, eps) {
            return kept;
        }
        let block = g.value * g.count as f64;
        if !norm.within(tail - block, eps) {
            kept += g.count;
            tail -= block;
            continue;
        }
        let mut z = (((tail - target) / g.value).ceil().max(0.0) as usize).min(g.count);
        while z > 0 && norm.within(tail - (z - 1) as f64 * g.value, eps) {
            z -= 1;
        }
        while !norm.within(tail - z as f64 * g.value, eps) {
            z += 1;
        }
        return kept + z;
    }
    kept
}

fn contributions(spec: &BipartiteSpec, v: &BlockVector, norm: Norm) -> (f64, f64, f64) {
    let (ds, df) = (spec.seed_side_degree(), spec.far_side_degree());
    (
        norm.contribution(v.seed_value, ds),
        norm.contribution(v.same_side_value, ds),
        norm.contribution(v.other_side_value, df),
    )
}

/// True minimum number of retained entries for accuracy `eps`.
pub fn bipartite_min_nnz(spec: &BipartiteSpec, eps: f64, norm: Norm) -> Result<usize> {
    if !(eps > 0.0) {
        return Err(invalid(format!("eps must be positive, got {eps}")));
    }
    let (s, a, b) = contributions(spec, &exact_ppr_vector(spec), norm);
    Ok(greedy_over_groups(
        vec![
            Group { value: s, count: 1 },
            Group { value: a, count: spec.k - 1 },
            Group { value: b, count: spec.far() },
        ],
        eps,
        norm,
    ))
}

/// Count from the explicit construction: always keep `(1-α)` at the seed,
/// then fill whole block entries (the seed's own block share included)
/// largest first. At most one more than [`bipartite_min_nnz`].
pub fn bipartite_constructive_nnz(spec: &BipartiteSpec, eps: f64, norm: Norm) -> Result<usize> {
    if !(eps > 0.0) {
        return Err(invalid(format!("eps must be positive, got {eps}")));
    }
    let (_, a, b) = contributions(spec, &exact_ppr_vector(spec), norm);
    Ok(1 + greedy_over_groups(
        vec![
            Group { value: a, count: spec.k },
            Group { value: b, count: spec.far() },
        ],
        eps,
        norm,
    ))
}

/// `(1 - ε(1+α)/α²) n`, a lower bound on the 1-norm count for any `k`.
pub fn bipartite_l1_lower_bound(n: usize, alpha: f64, eps: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let limit = alpha * alpha / (1.0 + alpha);
    if !(eps > 0.0) || eps >= limit {
        return Err(Error::HypothesisViolated { eps, limit });
    }
    Ok((1.0 - eps * (1.0 + alpha) / (alpha * alpha)) * n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarDiagnostics {
    pub n: usize,
    pub alpha: f64,
    pub residual_l1: f64,
    pub residual_l2: f64,
    pub deg_residual_l1: f64,
    pub deg_residual_l2: f64,
    pub eps: f64,
    /// 1-norm count of the exact solution at `eps`.
    pub true_l1_min_nnz: usize,
}

/// Residual norms of `x̂ = 0` on a star seeded at its center.
pub fn star_residual_diagnostics(n: usize, alpha: f64, eps: f64) -> Result<StarDiagnostics> {
    let spec = BipartiteSpec::new(n, 1, alpha)?;
    // r = (1-α) e_center, and the center has degree n-1.
    let r = 1.0 - alpha;
    let scaled = r / (n - 1) as f64;
    Ok(StarDiagnostics {
        n,
        alpha,
        residual_l1: r,
        residual_l2: r,
        deg_residual_l1: scaled,
        deg_residual_l2: scaled,
        eps,
        true_l1_min_nnz: bipartite_min_nnz(&spec, eps, Norm::L1)?,
    })
}

/// `K_{k,n-k}` with nodes `0..k` on one side.
pub fn build_complete_bipartite(n: usize, k: usize) -> Result<Graph> {
    if k < 1 || k + 1 > n {
        return Err(invalid(format!("need 1 <= k <= n - 1, got n = {n}, k = {k}")));
    }
    let edges = (0..k).flat_map(|i| (k..n).map(move |j| (i, j)));
    Ok(Graph::from_edges(n, edges, false)?.0)
}

/// Partition shapes of the growth table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Constant-size partition holding the seed.
    SparseSeedSmall,
    /// Constant-size partition opposite the seed.
    SparseSeedLarge,
    /// Balanced halves.
    Dense,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::SparseSeedSmall, Regime::SparseSeedLarge, Regime::Dense];
    pub const SMALL_SIDE: usize = 3;

    pub fn seed_partition(self, n: usize) -> usize {
        match self {
            Regime::SparseSeedSmall => Self::SMALL_SIDE,
            Regime::SparseSeedLarge => n - Self::SMALL_SIDE,
            Regime::Dense => n / 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::SparseSeedSmall => "sparse-seed-small",
            Regime::SparseSeedLarge => "sparse-seed-large",
            Regime::Dense => "dense",
        }
    }

    pub fn is_sparse(self) -> bool {
        !matches!(self, Regime::Dense)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Growth {
    /// Count stays bounded as `n` grows: localized.
    Bounded,
    /// Count grows proportionally to `n`: delocalized.
    Linear,
    Unclear,
}

/// Classifies counts over doubling sizes from the last three doublings.
pub fn classify_growth(counts: &[(usize, usize)]) -> Growth {
    if counts.len() < 4 {
        return Growth::Unclear;
    }
    let tail = &counts[counts.len() - 4..];
    let slopes: Vec<f64> = tail
        .windows(2)
        .map(|w| {
            let (n0, c0) = w[0];
            let (n1, c1) = w[1];
            ((c1.max(1) as f64) / (c0.max(1) as f64)).ln() / (n1 as f64 / n0 as f64).ln()
        })
        .collect();
    if slopes.iter().all(|&s| s >= 0.9) {
        Growth::Linear
    } else if slopes.iter().all(|&s| s <= 0.1) {
        Growth::Bounded
    } else {
        Growth::Unclear
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub regime: Regime,
    pub norm: Norm,
    pub counts: Vec<(usize, usize)>,
    pub growth: Growth,
}

impl GrowthRow {
    /// `Yes` when the count stays bounded.
    pub fn localized(&self) -> &'static str {
        match self.growth {
            Growth::Bounded => "Yes",
            Growth::Linear => "No",
            Growth::Unclear => "?",
        }
    }
}

/// Counts for every regime and norm over the sizes `ns`.
pub fn growth_table(ns: &[usize], alpha: f64, eps: f64) -> Result<Vec<GrowthRow>> {
    let mut rows = Vec::new();
    for regime in Regime::ALL {
        for norm in Norm::ALL {
            let counts = ns
                .iter()
                .map(|&n| {
                    let spec = BipartiteSpec::new(n, regime.seed_partition(n), alpha)?;
                    Ok((n, bipartite_min_nnz(&spec, eps, norm)?))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(GrowthRow {
                regime,
                norm,
                growth: classify_growth(&counts),
                counts,
            });
        }
    }
    Ok(rows)
}

/// `regime,norm,localized,<n>...` with counts per size.
pub fn growth_table_csv(rows: &[GrowthRow]) -> String {
    let mut s = String::from("regime,norm,localized");
    if let Some(r) = rows.first() {
        for (n, _) in &r.counts {
            s.push_str(&format!(",n{n}"));
        }
    }
    s.push('\n');
    for r in rows {
        s.push_str(&format!("{},{},{}", r.regime.name(), r.norm, r.localized()));
        for (_, c) in &r.counts {
            s.push_str(&format!(",{c}"));
        }
        s.push('\n');
    }
    s
}
