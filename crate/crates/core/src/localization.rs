//! How many entries of a PageRank vector are needed for ε accuracy.
//!
//! For a nonnegative `x` and a separable error norm, the sparsest
//! ε-accurate approximation keeps the entries with the largest per-entry
//! error contribution: `x_i` (1-norm), `x_i²` (2-norm), `x_i / d_i`
//! (degree-normalized 1-norm), `(x_i / d_i)²` (degree-normalized 2-norm).
//! Sorting by contribution once answers every ε on a grid.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::solver::{power_method_reference, PprProblem};

/// Relative slack on `error <= ε` comparisons, absorbing summation rounding.
pub const ACCURACY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Norm {
    L1,
    L2,
    DegL1,
    DegL2,
}

impl Norm {
    pub const ALL: [Norm; 4] = [Norm::L1, Norm::L2, Norm::DegL1, Norm::DegL2];

    pub fn needs_degrees(self) -> bool {
        matches!(self, Norm::DegL1 | Norm::DegL2)
    }

    pub fn is_squared(self) -> bool {
        matches!(self, Norm::L2 | Norm::DegL2)
    }

    /// Error contribution of one omitted entry, before any final square root.
    pub fn contribution(self, value: f64, degree: usize) -> f64 {
        match self {
            Norm::L1 => value.abs(),
            Norm::L2 => value * value,
            Norm::DegL1 => (value / degree as f64).abs(),
            Norm::DegL2 => (value / degree as f64).powi(2),
        }
    }

    /// Whether summed contributions `total` meet accuracy `eps`.
    pub fn within(self, total: f64, eps: f64) -> bool {
        if self.is_squared() {
            total <= eps * eps * (1.0 + ACCURACY_SLACK)
        } else {
            total <= eps * (1.0 + ACCURACY_SLACK)
        }
    }

    /// Norm value from summed contributions.
    pub fn finish(self, total: f64) -> f64 {
        if self.is_squared() {
            total.sqrt()
        } else {
            total
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::DegL1 => "deg-l1",
            Norm::DegL2 => "deg-l2",
        })
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "1" => Ok(Norm::L1),
            "l2" | "2" => Ok(Norm::L2),
            "deg-l1" | "degl1" => Ok(Norm::DegL1),
            "deg-l2" | "degl2" => Ok(Norm::DegL2),
            _ => Err(invalid(format!("unknown norm {s:?}"))),
        }
    }
}

/// Contributions sorted in decreasing order with tail sums, ready for queries.
#[derive(Debug, Clone)]
pub struct SortedContributions {
    norm: Norm,
    /// `tail[k]` = sum of contributions of entries ranked `k..n`.
    tail: Vec<f64>,
}

impl SortedContributions {
    pub fn new(x: &[f64], norm: Norm, degrees: Option<&[usize]>) -> Result<Self> {
        if x.iter().any(|&v| !(v >= 0.0)) {
            return Err(invalid("vector must be entrywise nonnegative"));
        }
        let degrees = match (norm.needs_degrees(), degrees) {
            (true, None) => return Err(invalid(format!("{norm} norm needs node degrees"))),
            (true, Some(d)) if d.len() != x.len() => {
                return Err(invalid("degree vector length does not match"))
            }
            (true, Some(d)) if d.contains(&0) => return Err(invalid("degrees must be positive")),
            (_, d) => d,
        };
        let mut c: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| norm.contribution(v, degrees.map_or(1, |d| d[i])))
            .collect();
        c.sort_unstable_by(|a, b| b.total_cmp(a));
        // Sum from the smallest entries up for accuracy.
        let mut tail = vec![0.0; c.len() + 1];
        for k in (0..c.len()).rev() {
            tail[k] = tail[k + 1] + c[k];
        }
        Ok(Self { norm, tail })
    }

    pub fn len(&self) -> usize {
        self.tail.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Error left after keeping the `k` largest entries.
    pub fn error_keeping(&self, k: usize) -> f64 {
        self.norm.finish(self.tail[k.min(self.len())])
    }

    /// Smallest `k` whose retained-top-`k` error is within `eps`.
    pub fn min_nnz(&self, eps: f64) -> Result<usize> {
        if !(eps >= 0.0) {
            return Err(invalid(format!("eps must be nonnegative, got {eps}")));
        }
        // tail is nonincreasing in k.
        let k = self.tail.partition_point(|&t| !self.norm.within(t, eps));
        Ok(k.min(self.len()))
    }
}

/// Minimal number of retained entries for `||x - x̂|| <= eps` in `norm`.
pub fn min_nnz_for_accuracy(
    x: &[f64],
    eps: f64,
    norm: Norm,
    degrees: Option<&[usize]>,
) -> Result<usize> {
    SortedContributions::new(x, norm, degrees)?.min_nnz(eps)
}

/// `10^-1 .. 10^-8` with `per_decade` points per decade, decreasing.
pub fn default_eps_grid(per_decade: usize) -> Vec<f64> {
    let per_decade = per_decade.max(1);
    (0..=7 * per_decade)
        .map(|i| 10f64.powf(-1.0 - i as f64 / per_decade as f64))
        .collect()
}

/// Parses `default`, or comma-separated positive values in decreasing order.
pub fn parse_eps_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("default") {
        return Ok(default_eps_grid(4));
    }
    let grid = text
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .map_err(|_| invalid(format!("invalid eps value {tok:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    validate_grid(&grid)?;
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizationCurve {
    pub eps_grid: Vec<f64>,
    pub min_nnz: Vec<usize>,
    pub norm: Norm,
    pub n: usize,
    pub alpha: f64,
    pub seed_node: usize,
    pub graph_id: String,
}

impl LocalizationCurve {
    /// `inv_eps,min_nnz` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("inv_eps,min_nnz\n");
        for (e, k) in self.eps_grid.iter().zip(&self.min_nnz) {
            writeln!(s, "{},{}", 1.0 / e, k).unwrap();
        }
        s
    }

    pub fn at(&self, eps: f64) -> Option<usize> {
        self.eps_grid
            .iter()
            .position(|&e| e == eps)
            .map(|i| self.min_nnz[i])
    }
}

fn validate_grid(eps_grid: &[f64]) -> Result<()> {
    if eps_grid.is_empty() {
        return Err(invalid("eps grid is empty"));
    }
    if eps_grid.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(invalid("eps values must be positive"));
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("eps grid must be strictly decreasing"));
    }
    Ok(())
}

/// Localization curve of a dense vector already in hand.
pub fn curve_from_vector(
    x: &[f64],
    eps_grid: &[f64],
    norm: Norm,
    degrees: Option<&[usize]>,
) -> Result<Vec<usize>> {
    validate_grid(eps_grid)?;
    let sorted = SortedContributions::new(x, norm, degrees)?;
    eps_grid.iter().map(|&e| sorted.min_nnz(e)).collect()
}

/// Solves to a tolerance two orders below the smallest ε, then sweeps the grid.
pub fn localization_curve(
    prob: &PprProblem<'_>,
    eps_grid: &[f64],
    norm: Norm,
    graph_id: &str,
) -> Result<LocalizationCurve> {
    validate_grid(eps_grid)?;
    let smallest = *eps_grid.last().unwrap();
    let tol = (smallest / 100.0).min(1e-12);
    let x = power_method_reference(prob, tol)?;
    let degrees = norm.needs_degrees().then(|| prob.graph().degrees());
    let min_nnz = curve_from_vector(&x, eps_grid, norm, degrees.as_deref())?;
    Ok(LocalizationCurve {
        eps_grid: eps_grid.to_vec(),
        min_nnz,
        norm,
        n: prob.graph().node_count(),
        alpha: prob.alpha(),
        seed_node: prob.seed(),
        graph_id: graph_id.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub eps: f64,
    pub min_nnz: Vec<usize>,
    /// Max over curve pairs of `|a - b| / max(a, b)`.
    pub max_relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub labels: Vec<String>,
    pub rows: Vec<ComparisonRow>,
}

pub fn relative_deviation(values: &[usize]) -> f64 {
    let mut worst = 0.0f64;
    for (i, &a) in values.iter().enumerate() {
        for &b in &values[i + 1..] {
            let hi = a.max(b);
            if hi > 0 {
                worst = worst.max(a.abs_diff(b) as f64 / hi as f64);
            }
        }
    }
    worst
}

pub fn compare_curves(curves: &[LocalizationCurve]) -> Result<ComparisonTable> {
    let first = curves.first().ok_or_else(|| invalid("no curves to compare"))?;
    if curves.iter().any(|c| c.eps_grid != first.eps_grid) {
        return Err(Error::MismatchedGrids);
    }
    let rows = first
        .eps_grid
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let min_nnz: Vec<usize> = curves.iter().map(|c| c.min_nnz[i]).collect();
            ComparisonRow {
                eps,
                max_relative_deviation: relative_deviation(&min_nnz),
                min_nnz,
            }
        })
        .collect();
    let labels = curves
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.graph_id.is_empty() {
                format!("curve{i}")
            } else {
                c.graph_id.clone()
            }
        })
        .collect();
    Ok(ComparisonTable { labels, rows })
}

impl ComparisonTable {
    /// CSV with `#` provenance lines, then `inv_eps,<label>...,max_rel_dev`.
    pub fn to_csv(&self, provenance: &[String]) -> String {
        let mut s = String::new();
        for line in provenance {
            writeln!(s, "# {line}").unwrap();
        }
        s.push_str("inv_eps");
        for l in &self.labels {
            write!(s, ",{l}").unwrap();
        }
        s.push_str(",max_rel_dev\n");
        for row in &self.rows {
            write!(s, "{}", 1.0 / row.eps).unwrap();
            for k in &row.min_nnz {
                write!(s, ",{k}").unwrap();
            }
            writeln!(s, ",{}", row.max_relative_deviation).unwrap();
        }
        s
    }
}
