//! Nonzero-count bounds for Gauss–Southwell on rank-skewed graphs.
//!
//! With `C_p` the fill-in constant of a `(d, δ, p)` rank-skewed sequence,
//! the general bound is
//!
//! ```text
//! N = min(n, 1 + d + C_p (α²/ε)^(δ/(1-α)) / δ)
//! ```
//!
//! and on undirected graphs with `δ >= 2` the exponent and divisor use `δ - 1`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::solver::{gauss_southwell_observed, GsConfig, PprProblem};

/// `d (1 + ln d)` at `p = 1`, else `d (1 + (d^(1/p - 1) - 1) / (1 - p))`.
pub fn compute_cp(d: f64, p: f64) -> f64 {
    if (p - 1.0).abs() < 1e-12 {
        d * (1.0 + d.ln())
    } else {
        d * (1.0 + (d.powf(1.0 / p - 1.0) - 1.0) / (1.0 - p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs {
    pub n: usize,
    pub d: usize,
    pub delta: usize,
    pub p: f64,
    pub alpha: f64,
    pub eps: f64,
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(invalid(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.eps > 0.0) {
            return Err(invalid(format!("eps must be positive, got {}", self.eps)));
        }
        if self.delta < 1 || self.delta > self.d {
            return Err(invalid(format!(
                "need 1 <= delta <= d, got delta = {}, d = {}",
                self.delta, self.d
            )));
        }
        if !(self.p > 0.0) {
            return Err(invalid(format!("p must be positive, got {}", self.p)));
        }
        Ok(())
    }

    pub fn cp(&self) -> f64 {
        compute_cp(self.d as f64, self.p)
    }

    fn growth(&self, exponent_delta: f64) -> f64 {
        (self.alpha * self.alpha / self.eps).powf(exponent_delta / (1.0 - self.alpha))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundKind {
    General,
    Undirected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub inputs: BoundInputs,
    /// `δ` actually used; 1 is replaced by 2 in the general bound.
    pub delta_used: usize,
    pub delta_substituted: bool,
    pub cp: f64,
    /// Before the `min(n, ·)` clause.
    pub n_bound: f64,
    pub n_final: u64,
    /// Steps needed before the bound kicks in.
    pub k_steps: f64,
    /// `n_final == n`.
    pub trivial: bool,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bound report serializes")
    }
}

fn finish(kind: BoundKind, inputs: BoundInputs, delta_used: usize, substituted: bool) -> BoundReport {
    let cp = inputs.cp();
    let e = match kind {
        BoundKind::General => delta_used as f64,
        BoundKind::Undirected => (delta_used - 1) as f64,
    };
    let growth = inputs.growth(e);
    let n_bound = 1.0 + inputs.d as f64 + cp * growth / e;
    let n_final = (n_bound.ceil().min(inputs.n as f64)) as u64;
    BoundReport {
        kind,
        inputs,
        delta_used,
        delta_substituted: substituted,
        cp,
        n_bound,
        n_final,
        k_steps: (cp / e * (growth - 1.0)).max(0.0),
        trivial: n_final == inputs.n as u64,
    }
}

/// General bound, valid for directed graphs. `δ = 1` is evaluated as `δ = 2`.
pub fn nonzero_bound_general(inputs: &BoundInputs) -> Result<BoundReport> {
    inputs.validate()?;
    let substituted = inputs.delta == 1;
    let delta = inputs.delta.max(2);
    Ok(finish(BoundKind::General, *inputs, delta, substituted))
}

/// Sharper bound for undirected graphs with minimum degree at least 2.
pub fn nonzero_bound_undirected(inputs: &BoundInputs) -> Result<BoundReport> {
    inputs.validate()?;
    if inputs.delta < 2 {
        return Err(invalid(
            "undirected bound needs delta >= 2; use the general bound, which evaluates delta = 1 as 2",
        ));
    }
    Ok(finish(BoundKind::Undirected, *inputs, inputs.delta, false))
}

/// Residual nonzeros after `t` steps: `C_p + δ t`, or `C_p + (δ-1) t` undirected.
pub fn fillin_bound(t: usize, inputs: &BoundInputs, undirected: bool) -> f64 {
    let growth = if undirected {
        inputs.delta.saturating_sub(1)
    } else {
        inputs.delta
    };
    inputs.cp() + (growth * t) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FillinAudit {
    pub steps_run: usize,
    /// Residual nonzeros after 0, 1, ... steps.
    pub observed: Vec<usize>,
    /// `max_t (Z(t) - bound(t))`; nonpositive when the bound holds.
    pub max_excess: f64,
    pub violations: usize,
}

/// Runs up to `steps` relaxation steps and checks residual fill-in each step.
pub fn empirical_fillin_audit(
    prob: &PprProblem<'_>,
    inputs: &BoundInputs,
    steps: usize,
    undirected: bool,
) -> Result<FillinAudit> {
    let cfg = GsConfig {
        eps: f64::MIN_POSITIVE,
        max_iters: steps,
        record_history: false,
    };
    let mut observed = Vec::with_capacity(steps + 1);
    let rep = gauss_southwell_observed(prob, &cfg, |step, _| observed.push(step.residual_nnz))?;
    observed.insert(0, rep.initial_residual_nnz);
    let mut max_excess = f64::NEG_INFINITY;
    let mut violations = 0;
    for (t, &z) in observed.iter().enumerate() {
        let excess = z as f64 - fillin_bound(t, inputs, undirected);
        max_excess = max_excess.max(excess);
        if excess > 0.0 {
            violations += 1;
        }
    }
    Ok(FillinAudit {
        steps_run: rep.iterations,
        observed,
        max_excess,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degseq::generate_rank_skewed;
    use crate::graph::Graph;
    use crate::graphgen::{generate_exact_degree, GenConfig};

    fn inputs(d: usize, delta: usize, p: f64, alpha: f64, eps: f64) -> BoundInputs {
        BoundInputs {
            n: 1_000_000_000_000,
            d,
            delta,
            p,
            alpha,
            eps,
        }
    }

    #[test]
    fn cp_examples() {
        assert_eq!(compute_cp(1.0, 1.0), 1.0);
        assert_eq!(compute_cp(1.0, 0.3), 1.0);
        assert!((compute_cp(10.0, 1.0) - 10.0 * (1.0 + 10f64.ln())).abs() < 1e-12);
        assert!((compute_cp(10.0, 1.0) - 33.026).abs() < 1e-3);
        assert!((compute_cp(4.0, 0.5) - 28.0).abs() < 1e-12);
    }

    #[test]
    fn cp_is_continuous_at_one() {
        for d in [2.0, 10.0, 100.0, 1e4] {
            let at = compute_cp(d, 1.0);
            for p in [1.0 - 1e-9, 1.0 + 1e-9] {
                assert!((compute_cp(d, p) - at).abs() / at < 1e-4, "{d} {p}");
            }
        }
    }

    #[test]
    fn hand_values() {
        let i = inputs(100, 2, 1.0, 0.5, 0.01);
        let g = nonzero_bound_general(&i).unwrap();
        assert!((g.cp - 560.517).abs() < 1e-2);
        let expect = 1.0 + 100.0 + g.cp * 390_625.0 / 2.0;
        assert!((g.n_bound - expect).abs() / expect < 1e-12);
        assert!((g.n_bound - 1.095e8).abs() / 1.095e8 < 1e-3);
        assert!(!g.trivial);
        let u = nonzero_bound_undirected(&i).unwrap();
        let expect = 1.0 + 100.0 + g.cp * 625.0;
        assert!((u.n_bound - expect).abs() / expect < 1e-12);
        assert!((u.n_bound - 350_427.0).abs() / 350_427.0 < 1e-3);
        assert!(u.n_bound < g.n_bound);
    }

    #[test]
    fn warm_start_regime() {
        let i = inputs(100, 2, 1.0, 0.1, 0.05);
        let r = nonzero_bound_general(&i).unwrap();
        assert_eq!(r.k_steps, 0.0);
        assert!(r.n_bound <= 1.0 + 100.0 + r.cp / 2.0);
    }

    #[test]
    fn min_clause_and_substitution() {
        let mut i = inputs(10, 1, 0.5, 0.85, 1e-6);
        i.n = 50;
        let r = nonzero_bound_general(&i).unwrap();
        assert_eq!(r.n_final, 50);
        assert!(r.trivial);
        assert!(r.delta_substituted);
        assert_eq!(r.delta_used, 2);
        assert!(nonzero_bound_undirected(&i).is_err());
        assert!(r.to_json().contains("\"n_final\": 50"));
    }

    #[test]
    fn invalid_inputs() {
        assert!(nonzero_bound_general(&inputs(10, 2, 0.5, 1.0, 0.1)).is_err());
        assert!(nonzero_bound_general(&inputs(10, 2, 0.5, 0.5, 0.0)).is_err());
        assert!(nonzero_bound_general(&inputs(10, 11, 0.5, 0.5, 0.1)).is_err());
        assert!(nonzero_bound_general(&inputs(10, 2, 0.0, 0.5, 0.1)).is_err());
    }

    #[test]
    fn monotonicity() {
        let base = inputs(100, 2, 0.7, 0.6, 1e-3);
        let n = |i: BoundInputs| nonzero_bound_undirected(&i).unwrap().n_bound;
        assert!(n(BoundInputs { eps: 1e-4, ..base }) > n(base));
        assert!(n(BoundInputs { alpha: 0.7, ..base }) > n(base));
        assert!(n(BoundInputs { d: 200, ..base }) > n(base));
        let m = |i: BoundInputs| nonzero_bound_general(&i).unwrap().n_bound;
        assert!(m(BoundInputs { eps: 1e-4, ..base }) > m(base));
        assert!(m(BoundInputs { alpha: 0.7, ..base }) > m(base));
        assert!(m(BoundInputs { d: 200, ..base }) > m(base));
    }

    #[test]
    fn fillin_examples() {
        let i = inputs(4, 2, 0.5, 0.5, 0.1);
        assert_eq!(fillin_bound(0, &i, false), 28.0);
        assert_eq!(fillin_bound(10, &i, false), 48.0);
        assert_eq!(fillin_bound(10, &i, true), 38.0);
    }

    #[test]
    fn star_audit_starts_at_center() {
        let g = Graph::from_edges(11, (1..11).map(|i| (0, i)), false).unwrap().0;
        let p = PprProblem::new(&g, 0.5, 0).unwrap();
        let a = empirical_fillin_audit(&p, &inputs(10, 1, 1.0, 0.5, 0.1), 0, false).unwrap();
        assert_eq!(a.observed, vec![1]);
        assert_eq!(a.violations, 0);
    }

    #[test]
    fn generated_graph_audit() {
        let target = generate_rank_skewed(2000, 50, 2, 0.5).unwrap().repair_parity();
        let gen = generate_exact_degree(&target, &GenConfig { seed: 3, ..Default::default() })
            .unwrap();
        let g = gen.graph;
        let d = g.max_degree();
        let seq = crate::degseq::DegreeSequence::new(g.degrees()).unwrap();
        let i = BoundInputs {
            n: g.node_count(),
            d: seq.certify(2, 0.5).max(d),
            delta: 2,
            p: 0.5,
            alpha: 0.85,
            eps: 1e-6,
        };
        let p = PprProblem::new(&g, 0.85, g.max_degree_node()).unwrap();
        for undirected in [false, true] {
            let a = empirical_fillin_audit(&p, &i, 1000, undirected).unwrap();
            assert_eq!(a.observed.len(), a.steps_run + 1);
            assert!(a.max_excess <= 0.0, "{}", a.max_excess);
        }
    }
}
