//! Seeded PageRank: `(I - αP) x = (1 - α) e_s`.

mod gauss_southwell;
mod power;
mod queue;

pub use gauss_southwell::{
    gauss_southwell_observed, gauss_southwell_solve, GsConfig, SolveReport, Step, StepState,
};
pub use power::power_method_reference;
pub use queue::ResidualQueue;

use crate::error::{invalid, Result};
use crate::graph::Graph;

/// A seeded PageRank instance over a borrowed graph.
#[derive(Debug, Clone, Copy)]
pub struct PprProblem<'g> {
    graph: &'g Graph,
    alpha: f64,
    seed: usize,
}

impl<'g> PprProblem<'g> {
    /// `alpha` must lie in `[0, 1)`; `alpha = 0` is the no-diffusion limit `x = e_s`.
    pub fn new(graph: &'g Graph, alpha: f64, seed: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(invalid(format!("alpha must lie in [0, 1), got {alpha}")));
        }
        if seed >= graph.node_count() {
            return Err(invalid(format!(
                "seed node {seed} out of range for {} nodes",
                graph.node_count()
            )));
        }
        Ok(Self { graph, alpha, seed })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn seed(&self) -> usize {
        self.seed
    }
}
