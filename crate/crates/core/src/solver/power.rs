use super::PprProblem;
use crate::error::{invalid, Result};

/// Dense reference solution with `||x - x*||_1 <= tol`.
///
/// Sums the series `(1-α) Σ_t α^t P^t e_s` term by term. After terms
/// `0..=t` the missing mass is exactly `α^(t+1)`, so iteration stops once
/// that drops to `tol`.
pub fn power_method_reference(prob: &PprProblem<'_>, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    let g = prob.graph();
    let alpha = prob.alpha();
    let n = g.node_count();
    let mut term = vec![0.0; n];
    term[prob.seed()] = 1.0 - alpha;
    let mut x = term.clone();
    let mut next = vec![0.0; n];
    let mut remaining = alpha;
    while remaining > tol {
        g.apply_walk_dense(&term, &mut next);
        for (t, &v) in term.iter_mut().zip(&next) {
            *t = alpha * v;
        }
        for (xi, &t) in x.iter_mut().zip(&term) {
            *xi += t;
        }
        remaining *= alpha;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, [(0, 1)], false).unwrap().0;
        let x = power_method_reference(&PprProblem::new(&g, 0.5, 0).unwrap(), 1e-14).unwrap();
        assert!((x[0] - 2.0 / 3.0).abs() < 1e-13);
        assert!((x[1] - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn star_center() {
        let g = Graph::from_edges(5, (1..5).map(|i| (0, i)), false).unwrap().0;
        let x = power_method_reference(&PprProblem::new(&g, 0.5, 0).unwrap(), 1e-14).unwrap();
        assert!((x[0] - 2.0 / 3.0).abs() < 1e-13);
        for leaf in 1..5 {
            assert!((x[leaf] - 1.0 / 12.0).abs() < 1e-13);
        }
    }

    #[test]
    fn no_diffusion() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)], false).unwrap().0;
        let x = power_method_reference(&PprProblem::new(&g, 0.0, 1).unwrap(), 1e-12).unwrap();
        assert_eq!(x, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn mass_is_one_on_connected_graph() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)], false)
            .unwrap()
            .0;
        let x = power_method_reference(&PprProblem::new(&g, 0.85, 2).unwrap(), 1e-12).unwrap();
        assert!((x.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let g = Graph::from_edges(2, [(0, 1)], false).unwrap().0;
        let p = PprProblem::new(&g, 0.5, 0).unwrap();
        assert!(power_method_reference(&p, 0.0).is_err());
    }
}
