//! Invariant polynomials of the nematic order-parameter actions.
//!
//! On ℝ² (coordinates `x, u`) the D₃ invariants are generated by
//! `X = x²+u²` and `Y = x³−3xu²`. On ℝ⁴ with `z = s+ip`, `w = d+ic` the
//! 72-element group generated by rotation, conjugation and the `p ↔ d` swap
//! has Hilbert basis `f₂ … f₆`, subject to `f₅² + f₄f₆ = 0`.

mod fit;
mod poly;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use fit::{
    fit_invariant_basis, fit_products, hilbert_monomials, linear_basis, BasisFit, InvariantError, LandauCoeffs,
    LANDAU_NAMES,
};
pub use poly::{basis_polys, hatf6_poly, CPoly};

/// Order parameters `(s, p, d, c)`, laid out as the 2×2 matrix `[[s, d], [p, c]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderParams {
    pub s: f64,
    pub p: f64,
    pub d: f64,
    pub c: f64,
}

impl OrderParams {
    pub fn new(s: f64, p: f64, d: f64, c: f64) -> Self {
        Self { s, p, d, c }
    }

    pub fn from_slice(v: &[f64]) -> Self {
        Self { s: v[0], p: v[1], d: v[2], c: v[3] }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.s, self.p, self.d, self.c]
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.s, self.p)
    }

    pub fn w(&self) -> Complex64 {
        Complex64::new(self.d, self.c)
    }

    /// The transposition `τ`, swapping `p` and `d`.
    pub fn tau(self) -> Self {
        Self { s: self.s, p: self.d, d: self.p, c: self.c }
    }
}

/// Values of the Hilbert basis `f₂ … f₆` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantVector {
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
    pub f5: f64,
    pub f6: f64,
}

impl InvariantVector {
    pub fn to_array(self) -> [f64; 5] {
        [self.f2, self.f3, self.f4, self.f5, self.f6]
    }

    /// `f₅² + f₄f₆`, zero for every point of ℝ⁴.
    pub fn syzygy(&self) -> f64 {
        self.f5 * self.f5 + self.f4 * self.f6
    }
}

/// Evaluate `f₂ … f₆` at `op`.
pub fn eval_basis_r4(op: &OrderParams) -> InvariantVector {
    let (z, w) = (op.z(), op.w());
    let k = z * w.conj() - z.conj() * w;
    let h = w * w * w - 3.0 * w * z * z;
    InvariantVector {
        f2: z.norm_sqr() + w.norm_sqr(),
        f3: (z * z * z - 3.0 * z * w * w).re,
        f4: (k * k).re,
        f5: k.im * h.im,
        f6: h.im * h.im,
    }
}

/// `(X, Y) = (x²+u², x³−3xu²)`.
pub fn eval_basis_r2(x: f64, u: f64) -> (f64, f64) {
    (x * x + u * u, x * x * x - 3.0 * x * u * u)
}

/// `ĥ₆ = Re((z²+w²)³)`, invariant under the τ-free subgroup only.
pub fn hatf6(op: &OrderParams) -> f64 {
    let (z, w) = (op.z(), op.w());
    let q = z * z + w * w;
    (q * q * q).re
}

/// `ĥ₆(q) − ĥ₆(τ·q)`.
pub fn hatf6_defect(op: &OrderParams) -> f64 {
    hatf6(op) - hatf6(&op.tau())
}
