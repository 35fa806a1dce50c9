//! Entropy of the reduced KKLS model on `L(D) ≅ ℝ⁴`.
//!
//! The partition function `Z(η) = ∫ exp(η·α_D(R)) dR` is expanded from
//! Haar-quadrature moments; `W = ∇log Z` is inverted as a series and the
//! entropy `S/k = log Z − η·W` is re-expressed in `W`. Fitting `−S/k` to
//! the invariant basis yields the dimensionless coefficients `a₃′ … d₆′`
//! through `a_i = −kT·a_i′`.

mod quadrature;

use nalgebra::{Matrix4, Vector4};
use polyser::{invert_map, monomials_up_to, SeriesError, TruncSeries};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use invariants::{fit_invariant_basis, InvariantError, LandauCoeffs};
pub use quadrature::{alpha_d_matrix, alpha_d_slots, diagonal_basis, HaarQuadrature};

/// Grid used when no quadrature is supplied.
pub const DEFAULT_GRID: usize = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EntropyError {
    #[error("quadrature design degree {have} below the required {need}")]
    DesignTooLow { have: u32, need: u32 },
    #[error("linear term of log Z is {value:e}; quadrature defect")]
    LinearTerm { value: f64 },
    #[error("quadrature weights sum to {value}")]
    Mass { value: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Fit(#[from] InvariantError),
    #[error("entropy fit residual {residual:e} exceeds {tol:e}")]
    Symmetry { residual: f64, tol: f64 },
}

/// Haar averages `⟨m^α⟩` of the slots `m = (s,p,d,c)` of `α_D(R)`, `|α| ≤ cap`.
#[derive(Clone, Debug)]
pub struct Moments {
    pub cap: u32,
    pub monomials: Vec<Vec<u8>>,
    pub values: Vec<f64>,
}

impl Moments {
    pub fn compute(quad: &HaarQuadrature, cap: u32) -> Self {
        let monomials = monomials_up_to(4, 0, cap);
        let k = cap as usize;
        let partials: Vec<Vec<f64>> = quad
            .nodes
            .par_chunks(32)
            .map(|chunk| {
                let mut acc = vec![0.0; monomials.len()];
                for (r, w) in chunk {
                    let m = alpha_d_slots(r);
                    let pw: Vec<Vec<f64>> = m.iter().map(|&x| (0..=k).map(|e| x.powi(e as i32)).collect()).collect();
                    for (a, mono) in acc.iter_mut().zip(&monomials) {
                        *a += w * (0..4).map(|i| pw[i][mono[i] as usize]).product::<f64>();
                    }
                }
                acc
            })
            .collect();
        let values = (0..monomials.len())
            .map(|i| quadrature::pairwise_sum(&partials.iter().map(|p| p[i]).collect::<Vec<_>>()))
            .collect();
        Self { cap, monomials, values }
    }

    pub fn get(&self, exps: &[u8]) -> f64 {
        self.monomials.iter().position(|m| m.as_slice() == exps).map_or(0.0, |i| self.values[i])
    }

    /// `Z(η) = Σ ⟨m^α⟩ η^α / α!`.
    pub fn partition_series(&self) -> TruncSeries<f64> {
        let fact = |n: u8| (1..=n as u32).map(f64::from).product::<f64>();
        TruncSeries::from_terms(
            4,
            self.cap,
            self.monomials.iter().zip(&self.values).map(|(m, v)| {
                let denom: f64 = m.iter().map(|&e| fact(e)).product();
                (m.clone(), v / denom)
            }),
        )
        .into_series()
    }
}

fn require_design(quad: &HaarQuadrature, cap: u32) -> Result<(), EntropyError> {
    let need = 2 * cap;
    if quad.design_degree < need {
        return Err(EntropyError::DesignTooLow { have: quad.design_degree, need });
    }
    Ok(())
}

/// `log Z` to degree `cap` in `η = (η_s, η_p, η_d, η_c)`.
pub fn log_z_series(quad: &HaarQuadrature, cap: u32) -> Result<TruncSeries<f64>, EntropyError> {
    require_design(quad, cap)?;
    let z = Moments::compute(quad, cap).partition_series();
    let linear = (0..4)
        .map(|i| {
            let mut e = [0u8; 4];
            e[i] = 1;
            z.coeff(&e).abs()
        })
        .fold(0.0, f64::max);
    if linear > 1e-12 {
        return Err(EntropyError::LinearTerm { value: linear });
    }
    let mass = z.constant_term();
    if (mass - 1.0).abs() > 1e-12 {
        return Err(EntropyError::Mass { value: mass });
    }
    let z = &z.filter(|m| polyser::mono_degree(m) >= 2) + &TruncSeries::one(4, cap);
    Ok(z.log_series()?)
}

/// `W(η) = ∇ log Z`, one degree short of `log Z`.
pub fn w_series(log_z: &TruncSeries<f64>) -> Vec<TruncSeries<f64>> {
    log_z.gradient()
}

/// `S/k` as a series in `W = (s, p, d, c)` to degree `cap`.
pub fn entropy_series(quad: &HaarQuadrature, cap: u32) -> Result<TruncSeries<f64>, EntropyError> {
    let log_z = log_z_series(quad, cap)?;
    let eta: Vec<TruncSeries<f64>> =
        invert_map(&w_series(&log_z))?.iter().map(|e| e.with_cap(cap)).collect();
    let mut s = log_z.substitute(&eta)?;
    for (i, e) in eta.iter().enumerate() {
        s = &s - &(e * &TruncSeries::var(4, cap, i));
    }
    Ok(s)
}

/// Fitted entropy coefficients.
///
/// `per_kt` holds the coefficients of `−S/k` in the invariant basis, i.e.
/// the entropy part of the free energy divided by `kT`. The primed values
/// follow `a_i = −kT·a_i′`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyCoefficients {
    pub quad_s: f64,
    pub quad_pdc: f64,
    pub cross: f64,
    pub a3p: f64,
    pub a4p: f64,
    pub b4p: f64,
    pub a5p: f64,
    pub b5p: f64,
    pub a6p: f64,
    pub b6p: f64,
    pub c6p: f64,
    pub d6p: f64,
    pub per_kt: LandauCoeffs<f64>,
    pub residual: f64,
    pub convention: String,
}

impl EntropyCoefficients {
    fn from_fit(c: LandauCoeffs<f64>, residual: f64) -> Self {
        Self {
            quad_s: c.alpha,
            quad_pdc: c.beta,
            cross: c.gamma,
            a3p: -c.a3,
            a4p: -c.a4,
            b4p: -c.b4,
            a5p: -c.a5,
            b5p: -c.b5,
            a6p: -c.a6,
            b6p: -c.b6,
            c6p: -c.c6,
            d6p: -c.d6,
            per_kt: c,
            residual,
            convention: "coefficients of -S/k are -a_i'; free energy a_i = -kT a_i'".into(),
        }
    }

    /// The primed coefficients in slot order `a₃′, a₄′, b₄′, a₅′, b₅′, a₆′, b₆′, c₆′, d₆′`.
    pub fn primed(&self) -> [f64; 9] {
        [self.a3p, self.a4p, self.b4p, self.a5p, self.b5p, self.a6p, self.b6p, self.c6p, self.d6p]
    }

    /// Entropy contribution `−kT·S/k` in the free-energy basis.
    pub fn free_energy(&self, kt: f64) -> LandauCoeffs<f64> {
        self.per_kt.map(|c| kt * c)
    }
}

/// Residual tolerance on the invariant fit of the entropy series.
pub const FIT_TOLERANCE: f64 = 1e-8;

pub fn kkls_coefficients(quad: &HaarQuadrature) -> Result<EntropyCoefficients, EntropyError> {
    let s = entropy_series(quad, 6)?;
    let fit = fit_invariant_basis(&(-&s))?;
    if fit.residual > FIT_TOLERANCE {
        return Err(EntropyError::Symmetry { residual: fit.residual, tol: FIT_TOLERANCE });
    }
    Ok(EntropyCoefficients::from_fit(fit.coeffs, fit.residual))
}

/// Exact (non-series) quantities at a given `η`, by quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectState {
    pub log_z: f64,
    pub w: [f64; 4],
    /// `S/k = −∫φ log φ` for `φ = e^{η·m}/Z`.
    pub entropy: f64,
    pub jacobian: Matrix4<f64>,
}

pub fn direct_state(quad: &HaarQuadrature, eta: &[f64; 4]) -> DirectState {
    let eta_v = Vector4::from_column_slice(eta);
    let samples: Vec<(Vector4<f64>, f64)> = quad
        .nodes
        .par_iter()
        .map(|(r, w)| {
            let m = Vector4::from(alpha_d_slots(r));
            (m, w * eta_v.dot(&m).exp())
        })
        .collect();
    let z: f64 = samples.iter().map(|(_, p)| p).sum();
    let mean: Vector4<f64> = samples.iter().map(|(m, p)| m * (p / z)).sum();
    let second: Matrix4<f64> = samples.iter().map(|(m, p)| (m * m.transpose()) * (p / z)).sum();
    let log_z = z.ln();
    DirectState {
        log_z,
        w: [mean[0], mean[1], mean[2], mean[3]],
        entropy: log_z - eta_v.dot(&mean),
        jacobian: second - mean * mean.transpose(),
    }
}

/// Smallest eigenvalue of `DW(η)`, the covariance of `α_D` under `φ`.
pub fn dw_min_eigenvalue(quad: &HaarQuadrature, eta: &[f64; 4]) -> f64 {
    let j = direct_state(quad, eta).jacobian;
    j.symmetric_eigen().eigenvalues.min()
}

/// `C₆ = 5³/(2⁵·3²·7⁴·11·13)`, the common scale of the degree-6 coefficients.
pub const C6: f64 = 125.0 / 98882784.0;

/// Degree-5 coefficients measured against the two candidate prefactors
/// `C₅ = −840·C₆` and `C₅ = −840·13·C₆` applied to `(125, 498)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Degree5Report {
    /// `(a₅′, b₅′)/C₆`.
    pub over_c6: [f64; 2],
    pub candidate_840: [f64; 2],
    pub candidate_840x13: [f64; 2],
    pub matches_840: bool,
    pub matches_840x13: bool,
}

pub fn degree5_report(c: &EntropyCoefficients, tol: f64) -> Degree5Report {
    let cand = |k: f64| [-k * C6 * 125.0, -k * C6 * 498.0];
    let close = |a: [f64; 2]| (c.a5p.abs() - a[0].abs()).abs() < tol && (c.b5p.abs() - a[1].abs()).abs() < tol;
    let (c1, c2) = (cand(840.0), cand(840.0 * 13.0));
    Degree5Report {
        over_c6: [c.a5p / C6, c.b5p / C6],
        candidate_840: c1,
        candidate_840x13: c2,
        matches_840: close(c1),
        matches_840x13: close(c2),
    }
}
