//! Gauss–Southwell coordinate relaxation for seeded PageRank.
//!
//! Starting from `x0 = (1-α)(I + αP) e_s`, whose residual is
//! `r0 = (1-α) α² P² e_s`, each step picks the largest residual entry
//! `m = r_j` (ties to the smallest id), moves it into the solution, and
//! spreads `α m` over the neighbours of `j`:
//!
//! ```text
//! x <- x + m e_j
//! r <- r - m e_j + α m P e_j
//! ```
//!
//! Both vectors stay nonnegative, so `||r||_1` drops by exactly `m (1-α)`
//! per step, and stopping at `||r||_1 < (1-α) ε` certifies
//! `||x - x̂||_1 < ε` because `||(I - αP)^-1||_1 = 1/(1-α)`.
//!
//! The warm start has `||r0||_1 = (1-α) α²` exactly, so when `α² <= ε` it is
//! accepted without steps; this is decided analytically rather than from the
//! rounded sum, which may land an ulp above the threshold when `α² = ε`.

use serde::Serialize;

use super::queue::ResidualQueue;
use super::PprProblem;
use crate::error::{invalid, Result};
use crate::sparse::SparseVector;

/// Residual entries below this are flushed to zero.
const FLUSH: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsConfig {
    pub eps: f64,
    pub max_iters: usize,
    pub record_history: bool,
}

impl GsConfig {
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            max_iters: usize::MAX,
            record_history: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub solution: SparseVector,
    #[serde(skip)]
    pub residual: SparseVector,
    pub iterations: usize,
    /// `sum_i r_i`, recomputed from the final residual.
    pub residual_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_norm_history: Option<Vec<f64>>,
    pub nnz_solution: usize,
    /// Nonzeros in the residual before the first step.
    pub initial_residual_nnz: usize,
    pub converged: bool,
}

/// One relaxation step, reported to the observer after it is applied.
#[derive(Debug, Clone, Copy)]
pub struct Step {
    /// Zero-based step index `k`; the state shown is after step `k`.
    pub index: usize,
    pub node: usize,
    /// Residual value moved into the solution.
    pub mass: f64,
    pub norm_before: f64,
    pub norm_after: f64,
    /// Nonzeros in the residual after the step.
    pub residual_nnz: usize,
}

/// Read-only view of the dense working vectors.
pub struct StepState<'a> {
    pub solution: &'a [f64],
    pub residual: &'a [f64],
    /// Every index that has ever held a nonzero in either vector.
    pub touched: &'a [usize],
}

/// Runs Gauss–Southwell to 1-norm accuracy `config.eps`.
///
/// Hitting `max_iters` returns the partial state with `converged = false`.
pub fn gauss_southwell_solve(prob: &PprProblem<'_>, config: &GsConfig) -> Result<SolveReport> {
    gauss_southwell_observed(prob, config, |_, _| {})
}

/// [`gauss_southwell_solve`] with a callback after every step.
pub fn gauss_southwell_observed<F>(
    prob: &PprProblem<'_>,
    config: &GsConfig,
    mut observe: F,
) -> Result<SolveReport>
where
    F: FnMut(&Step, &StepState<'_>),
{
    if !(config.eps > 0.0) {
        return Err(invalid(format!("eps must be positive, got {}", config.eps)));
    }
    let g = prob.graph();
    let alpha = prob.alpha();
    let s = prob.seed();
    let n = g.node_count();

    let mut x = vec![0.0f64; n];
    let mut r = vec![0.0f64; n];
    let mut seen = vec![false; n];
    let mut touched = Vec::new();
    let mut touch = |i: usize, touched: &mut Vec<usize>| {
        if !seen[i] {
            seen[i] = true;
            touched.push(i);
        }
    };

    // x0 = (1-α) e_s + (1-α) α P e_s ; r0 = (1-α) α² P P e_s
    touch(s, &mut touched);
    x[s] = 1.0 - alpha;
    let ds = g.degree(s) as f64;
    for &u in g.neighbors(s) {
        let u = u as usize;
        touch(u, &mut touched);
        x[u] += (1.0 - alpha) * alpha / ds;
    }
    let scale = (1.0 - alpha) * alpha * alpha / ds;
    for &u in g.neighbors(s) {
        let u = u as usize;
        let share = scale / g.degree(u) as f64;
        for &w in g.neighbors(u) {
            let w = w as usize;
            touch(w, &mut touched);
            r[w] += share;
        }
    }

    let mut queue = ResidualQueue::new();
    let mut residual_nnz = 0usize;
    let mut norm = 0.0;
    for &i in &touched {
        if r[i] > 0.0 {
            if r[i] < FLUSH {
                r[i] = 0.0;
                continue;
            }
            residual_nnz += 1;
            norm += r[i];
            queue.push(i, r[i]);
        }
    }
    let initial_residual_nnz = residual_nnz;
    let threshold = (1.0 - alpha) * config.eps;
    let mut history = config.record_history.then(|| vec![norm]);
    let mut iterations = 0usize;
    let mut converged;
    let warm_start_accurate = alpha * alpha <= config.eps;

    loop {
        while !warm_start_accurate && norm >= threshold && iterations < config.max_iters {
            let Some((j, m)) = queue.pop_max(&r) else {
                break;
            };
            let before = norm;
            x[j] += m;
            r[j] = 0.0;
            residual_nnz -= 1;
            let mut delta = -m;
            let share = alpha * m / g.degree(j) as f64;
            if share >= FLUSH {
                for &u in g.neighbors(j) {
                    let u = u as usize;
                    let old = r[u];
                    let new = old + share;
                    if old == 0.0 {
                        residual_nnz += 1;
                        touch(u, &mut touched);
                    }
                    r[u] = new;
                    delta += new - old;
                    queue.push(u, new);
                }
            }
            norm += delta;
            iterations += 1;
            if let Some(h) = history.as_mut() {
                h.push(norm);
            }
            if queue.len() > 4 * residual_nnz + 4096 {
                queue.rebuild(touched.iter().map(|&i| (i, r[i])));
            }
            let step = Step {
                index: iterations - 1,
                node: j,
                mass: m,
                norm_before: before,
                norm_after: norm,
                residual_nnz,
            };
            observe(
                &step,
                &StepState {
                    solution: &x,
                    residual: &r,
                    touched: &touched,
                },
            );
        }
        // Re-sum to shed accumulated drift before declaring convergence.
        norm = touched.iter().map(|&i| r[i]).sum();
        converged = warm_start_accurate || norm < threshold;
        if converged || iterations >= config.max_iters || residual_nnz == 0 {
            break;
        }
    }

    let solution: SparseVector = touched
        .iter()
        .filter(|&&i| x[i] != 0.0)
        .map(|&i| (i, x[i]))
        .collect();
    let residual: SparseVector = touched
        .iter()
        .filter(|&&i| r[i] != 0.0)
        .map(|&i| (i, r[i]))
        .collect();
    Ok(SolveReport {
        nnz_solution: solution.nnz(),
        solution,
        residual,
        iterations,
        residual_norm: norm,
        residual_norm_history: history,
        initial_residual_nnz,
        converged,
    })
}
