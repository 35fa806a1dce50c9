//! The degree-6 Landau–de Gennes free energy on `L(D) ≅ ℝ⁴`.
//!
//! Quadratic coefficients come from temperature `T` and the interaction
//! weights `λ` (units with `k = 1`, so `kT = T`); higher coefficients come
//! from the KKLS entropy scaled by `T`. The isotropic state changes
//! stability on the cone `αβ = γ²`.

mod critical;
mod fixed_point;

use std::f64::consts::PI;

use nalgebra::Matrix4;
use polyser::{Coeff, TruncSeries};
use serde::{Deserialize, Serialize};

pub use critical::{
    critical_points_4d, symmetry_subgroup, CriticalPointRecord, CriticalSet, DegenerateComponent, PointTag,
    SolverOptions,
};
pub use fixed_point::{solve_fixed_point, FixedPointSolution};
pub use invariants::{LandauCoeffs, LANDAU_NAMES};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LandauError {
    #[error("λ components sum to {sum}, not 1")]
    LambdaSum { sum: f64 },
    #[error("T = {t} is below the cone vertex U₀/10 = {vertex}")]
    BelowVertex { t: f64, vertex: f64 },
    #[error("U₀ must be positive, got {u0}")]
    NonPositiveU0 { u0: f64 },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Entropy(#[from] kkls_entropy::EntropyError),
}

/// A point `(T, λ)` of parameter space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeParams {
    pub t: f64,
    pub u0: f64,
    pub lambda: [f64; 3],
    /// `μ = (10T − U₀)/4`, so that `α + β = 2μ`.
    pub mu: f64,
    /// Polar angle of `λ` about `(1,1,1)/3` in the parametrization of `K_T`.
    pub xi: f64,
    /// Distance parameter of `λ` from the centre in that parametrization.
    pub radius: f64,
    /// Radius of the cone section `K_T`, `√(2/3)(10T/U₀ − 1)`.
    pub r_t: f64,
}

impl ConeParams {
    /// Accepts `λ` whose components sum to 1 within `1e-12`; `λ₃` is then
    /// reset to `1 − λ₁ − λ₂`.
    pub fn new(t: f64, u0: f64, lambda: [f64; 3]) -> Result<Self, LandauError> {
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(LandauError::LambdaSum { sum });
        }
        if u0 <= 0.0 {
            return Err(LandauError::NonPositiveU0 { u0 });
        }
        let lambda = [lambda[0], lambda[1], 1.0 - lambda[0] - lambda[1]];
        let k = (2.0f64 / 3.0).sqrt();
        let rc = -(lambda[2] - 1.0 / 3.0) / k;
        let rs = -(lambda[0] - lambda[1]) / 2f64.sqrt();
        Ok(Self {
            t,
            u0,
            lambda,
            mu: (10.0 * t - u0) / 4.0,
            xi: 0.5 * rs.atan2(rc),
            radius: rc.hypot(rs),
            r_t: k * (10.0 * t / u0 - 1.0),
        })
    }

    /// `(α, β, γ)`.
    pub fn quadratic(&self) -> (f64, f64, f64) {
        coeffs_from_t_lambda(self.t, self.u0, self.lambda)
    }
}

/// `α = (5/2)T − (U₀/2)(λ₁/4 + λ₂/4 + λ₃)`, `β = (5/2)T − (3/8)U₀(λ₁+λ₂)`,
/// `γ = −(√3/8)U₀(λ₁ − λ₂)`.
pub fn coeffs_from_t_lambda(t: f64, u0: f64, l: [f64; 3]) -> (f64, f64, f64) {
    let alpha = 2.5 * t - 0.5 * u0 * (0.25 * l[0] + 0.25 * l[1] + l[2]);
    let beta = 2.5 * t - 0.375 * u0 * (l[0] + l[1]);
    let gamma = -(3f64.sqrt() / 8.0) * u0 * (l[0] - l[1]);
    (alpha, beta, gamma)
}

/// The point of `K_T` at angle `ξ`. The vertex `T = U₀/10` gives `λ = u`.
pub fn cone_point(t: f64, xi: f64, u0: f64) -> Result<ConeParams, LandauError> {
    if u0 <= 0.0 {
        return Err(LandauError::NonPositiveU0 { u0 });
    }
    let vertex = u0 / 10.0;
    if t < vertex {
        return Err(LandauError::BelowVertex { t, vertex });
    }
    let k = (2.0f64 / 3.0).sqrt();
    let r = k * (10.0 * t / u0 - 1.0);
    let l1 = 1.0 / 3.0 + r * k * (2.0 * xi + PI / 3.0).cos();
    let l2 = 1.0 / 3.0 + r * k * (2.0 * xi - PI / 3.0).cos();
    ConeParams::new(t, u0, [l1, l2, 1.0 - l1 - l2])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Marginal,
    Saddle22,
    Unstable4,
}

/// Relative width of the marginal band around `αβ = γ²`.
pub const MARGINAL_TOL: f64 = 1e-13;

/// Signs of the eigenvalues of `[[α, γ], [γ, β]]`, which occurs twice in
/// the Hessian at the origin.
pub fn stability_classify(alpha: f64, beta: f64, gamma: f64) -> Stability {
    let det = alpha * beta - gamma * gamma;
    let scale = alpha.abs().max(beta.abs()).max(gamma.abs()).powi(2);
    if det.abs() <= MARGINAL_TOL * scale || scale == 0.0 {
        Stability::Marginal
    } else if det < 0.0 {
        Stability::Saddle22
    } else if alpha + beta > 0.0 {
        Stability::Stable
    } else {
        Stability::Unstable4
    }
}

/// The free energy as a polynomial in `(s, p, d, c)`.
pub fn free_energy<C: Coeff>(c: &LandauCoeffs<C>) -> TruncSeries<C> {
    let basis = invariants::linear_basis::<C>(6);
    let mut f = TruncSeries::zero(4, 6);
    for (b, k) in basis.iter().zip(c.to_vec()) {
        if !k.is_zero() {
            f = &f + &b.scale(&k);
        }
    }
    f
}

/// Matrix of the quadratic form `α|z|² + β|w|² + 2γRe(z w̄)` in `(s, p, d, c)`.
pub fn quadratic_form(alpha: f64, beta: f64, gamma: f64) -> Matrix4<f64> {
    Matrix4::new(
        alpha, 0.0, gamma, 0.0, //
        0.0, alpha, 0.0, gamma, //
        gamma, 0.0, beta, 0.0, //
        0.0, gamma, 0.0, beta,
    )
}

/// `B` in `H(W) = −½ BW·W` such that `H − TS` has quadratic part
/// `α|z|² + β|w|² + 2γRe(z w̄)`, given that `−kT·S/k` contributes
/// `(5/2)kT|W|²`.
pub fn hamiltonian_matrix(alpha: f64, beta: f64, gamma: f64, kt: f64) -> Matrix4<f64> {
    Matrix4::identity() * (5.0 * kt) - quadratic_form(alpha, beta, gamma) * 2.0
}

/// Model input: either `(T, U₀, λ)` or explicit coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Cone {
        #[serde(rename = "T")]
        t: f64,
        #[serde(rename = "U0")]
        u0: f64,
        lambda: [f64; 3],
        /// Energy unit multiplying the entropy coefficients; defaults to `T`.
        #[serde(default, rename = "kT")]
        kt: Option<f64>,
    },
    Explicit(LandauCoeffs<f64>),
}

impl ModelSpec {
    /// Full coefficient set. For the cone form the degree ≥ 3 slots are the
    /// entropy coefficients times `kT`.
    pub fn resolve(&self, entropy: &kkls_entropy::EntropyCoefficients) -> Result<LandauCoeffs<f64>, LandauError> {
        match self {
            ModelSpec::Explicit(c) => Ok(c.clone()),
            ModelSpec::Cone { t, u0, lambda, kt } => {
                let cone = ConeParams::new(*t, *u0, *lambda)?;
                let (a, b, g) = cone.quadratic();
                Ok(entropy.free_energy(kt.unwrap_or(*t)).with_quadratic(a, b, g))
            }
        }
    }

    pub fn cone(&self) -> Option<Result<ConeParams, LandauError>> {
        match self {
            ModelSpec::Cone { t, u0, lambda, .. } => Some(ConeParams::new(*t, *u0, *lambda)),
            ModelSpec::Explicit(_) => None,
        }
    }
}
