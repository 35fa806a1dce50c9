use kkls_entropy::{direct_state, HaarQuadrature};
use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSolution {
    pub eta: [f64; 4],
    pub w: [f64; 4],
    /// `‖B·W(η) − kT·η‖`.
    pub residual: f64,
}

/// Solve `B·W(η) = kT·η` by Newton's method from each seed, with `W` and
/// `DW` evaluated by quadrature. Seeds that do not converge are dropped;
/// solutions closer than `10·tol` are merged.
pub fn solve_fixed_point(
    b: &Matrix4<f64>,
    kt: f64,
    quad: &HaarQuadrature,
    seeds: &[[f64; 4]],
    tol: f64,
) -> Vec<FixedPointSolution> {
    let mut out: Vec<FixedPointSolution> = Vec::new();
    for seed in seeds {
        let mut eta = Vector4::from_column_slice(seed);
        let mut done = None;
        for _ in 0..100 {
            let st = direct_state(quad, &[eta[0], eta[1], eta[2], eta[3]]);
            let w = Vector4::from(st.w);
            let g = b * w - eta * kt;
            if g.norm() < tol {
                done = Some((eta, w, g.norm()));
                break;
            }
            let j = b * st.jacobian - Matrix4::identity() * kt;
            let Some(step) = j.lu().solve(&g) else { break };
            eta -= step;
            if !eta.iter().all(|v| v.is_finite()) || eta.norm() > 1e3 {
                break;
            }
        }
        if let Some((eta, w, residual)) = done {
            let e = [eta[0], eta[1], eta[2], eta[3]];
            if !out.iter().any(|s| {
                (Vector4::from(s.eta) - eta).norm() <= 10.0 * tol * (1.0 + eta.norm())
            }) {
                out.push(FixedPointSolution { eta: e, w: [w[0], w[1], w[2], w[3]], residual });
            }
        }
    }
    out
}
