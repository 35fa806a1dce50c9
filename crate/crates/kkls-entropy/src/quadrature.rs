use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{Matrix2, Matrix3};
use rayon::prelude::*;

/// Product rule for normalized Haar measure on SO(3) in ZYZ Euler angles.
#[derive(Clone, Debug)]
pub struct HaarQuadrature {
    pub nodes: Vec<(Matrix3<f64>, f64)>,
    /// Every monomial in the entries of `R` of total degree at most this is
    /// integrated exactly.
    pub design_degree: u32,
}

fn rz(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn ry(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

impl HaarQuadrature {
    /// `n` uniform nodes in each azimuthal angle and `n` Gauss–Legendre
    /// nodes in `cos β`.
    ///
    /// An entry monomial of degree `k` has azimuthal frequencies at most `k`,
    /// and whenever both azimuthal averages survive it carries an even power
    /// of `sin β`, so it is a polynomial of degree `k` in `cos β`. The rule is
    /// therefore exact up to degree `n − 1`.
    pub fn euler_product(n: usize) -> Self {
        let n = n.max(1);
        let gl = GaussLegendre::new(NonZeroUsize::new(n).unwrap());
        let mut nodes = Vec::with_capacity(n * n * n);
        for &(x, wx) in gl.as_node_weight_pairs() {
            let beta = x.clamp(-1.0, 1.0).acos();
            let rb = ry(beta);
            for i in 0..n {
                let ra = rz(2.0 * PI * i as f64 / n as f64);
                for j in 0..n {
                    let rg = rz(2.0 * PI * j as f64 / n as f64);
                    nodes.push((ra * rb * rg, 0.5 * wx / (n * n) as f64));
                }
            }
        }
        Self { nodes, design_degree: n as u32 - 1 }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&Matrix3<f64>) -> f64 + Sync) -> f64 {
        let terms: Vec<f64> = self.nodes.par_iter().map(|(r, w)| w * f(r)).collect();
        pairwise_sum(&terms)
    }
}

/// Orthonormal basis `{Q, B}` of the traceless diagonal matrices.
pub fn diagonal_basis() -> [Matrix3<f64>; 2] {
    let q = Matrix3::from_diagonal(&nalgebra::Vector3::new(-1.0, -1.0, 2.0)) / 6f64.sqrt();
    let b = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, 0.0)) / 2f64.sqrt();
    [q, b]
}

/// `M_ij = E_i · (R E_j Rᵀ)` in the basis `{Q, B}`.
pub fn alpha_d_matrix(r: &Matrix3<f64>) -> Matrix2<f64> {
    let e = diagonal_basis();
    Matrix2::from_fn(|i, j| e[i].dot(&(r * e[j] * r.transpose())))
}

/// `α_D(R)` as the order-parameter vector `(s, p, d, c) = (M₁₁, M₂₁, M₁₂, M₂₂)`.
pub fn alpha_d_slots(r: &Matrix3<f64>) -> [f64; 4] {
    let m = alpha_d_matrix(r);
    [m[(0, 0)], m[(1, 0)], m[(0, 1)], m[(1, 1)]]
}

pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}
