use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use polyser::Rat;
use serde::{Deserialize, Serialize};

use crate::finite::OrthogonalElement;
use crate::qsqrt3::QSqrt3;
use crate::GroupError;

/// Coefficients `r_d` of a Molien series, `d = 0..=max_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MolienSeries {
    pub coefficients: Vec<u64>,
}

impl MolienSeries {
    pub fn max_degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }
}

/// Power-series reciprocal of `p` (with `p[0]` invertible) to `max_degree`.
fn reciprocal(p: &[QSqrt3], max_degree: usize) -> Vec<QSqrt3> {
    let mut out = vec![QSqrt3::zero(); max_degree + 1];
    let inv0 = QSqrt3::rational(Rat::from_integer(1.into())) / p[0].clone();
    for k in 0..=max_degree {
        let mut s = if k == 0 { QSqrt3::rational(Rat::from_integer(1.into())) } else { QSqrt3::zero() };
        for j in 1..=k.min(p.len() - 1) {
            s = s - p[j].clone() * out[k - j].clone();
        }
        out[k] = s * inv0.clone();
    }
    out
}

fn to_count(v: &QSqrt3, degree: usize) -> Result<u64, GroupError> {
    if !v.is_rational() || !v.a.is_integer() || v.a < Rat::zero() {
        return Err(GroupError::NonIntegralMolien { degree, value: format!("{v:?}") });
    }
    Ok(v.a.to_integer().to_u64().expect("Molien coefficient fits in u64"))
}

/// Exact Molien series `(1/|G|) Σ_g 1/det(I − t g)`.
pub fn molien_finite(group: &[OrthogonalElement], max_degree: usize) -> Result<MolienSeries, GroupError> {
    let mut sum = vec![QSqrt3::zero(); max_degree + 1];
    for g in group {
        let r = reciprocal(&g.det_one_minus_t(), max_degree);
        for (s, v) in sum.iter_mut().zip(r) {
            *s = s.clone() + v;
        }
    }
    let order = QSqrt3::rational(Rat::from_integer((group.len() as i64).into()));
    let coefficients = sum
        .into_iter()
        .enumerate()
        .map(|(d, s)| to_count(&(s / order.clone()), d))
        .collect::<Result<_, _>>()?;
    Ok(MolienSeries { coefficients })
}

/// Expansion of `(Σ_i t^{numer_i}) / Π_k (1 − t^{denom_k})`.
///
/// The numerator is given as a list of exponents whose monomials are
/// summed, so `[0]` is `1` and `[0, 5]` is `1 + t⁵`.
pub fn molien_rational(numer_exponents: &[u32], denom_exponents: &[u32], max_degree: usize) -> MolienSeries {
    let mut c = vec![0u64; max_degree + 1];
    for &e in numer_exponents {
        if (e as usize) <= max_degree {
            c[e as usize] += 1;
        }
    }
    for &k in denom_exponents {
        let k = k as usize;
        assert!(k > 0, "denominator factors are (1 − t^k) with k ≥ 1");
        for d in k..=max_degree {
            c[d] += c[d - k];
        }
    }
    MolienSeries { coefficients: c }
}

/// Result of the SO(3) circle quadrature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct So3Molien {
    pub series: MolienSeries,
    pub raw: Vec<f64>,
    pub max_residual: f64,
    pub grid: usize,
}

/// Molien series of SO(3) acting on Sym₀(ℝ³) by conjugation, through the
/// Weyl integration formula `(1/2π)∫(1 − cos θ) c_d(θ) dθ`, where `c_d`
/// is the degree-`d` coefficient of `Π_{j=−2}^{2} (1 − t e^{ijθ})⁻¹`.
///
/// `grid` defaults to `4·max_degree + 4`, which integrates the
/// trigonometric-polynomial integrand exactly; smaller grids are refused
/// because aliasing on a uniform grid folds integer Fourier coefficients
/// onto other integers and would go unnoticed by the rounding residual.
pub fn molien_so3_conjugacy(max_degree: usize, grid: Option<usize>) -> Result<So3Molien, GroupError> {
    let min_grid = 4 * max_degree + 4;
    let n = grid.unwrap_or(min_grid);
    if n < min_grid {
        return Err(GroupError::GridTooSmall { grid: n, min: min_grid });
    }
    let mut acc = vec![0.0f64; max_degree + 1];
    for j in 0..n {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let mut c = vec![Complex64::new(0.0, 0.0); max_degree + 1];
        c[0] = Complex64::new(1.0, 0.0);
        for m in -2i32..=2 {
            let z = Complex64::from_polar(1.0, m as f64 * theta);
            // multiply by the geometric series Σ (z t)^k
            for d in 1..=max_degree {
                let prev = c[d - 1];
                c[d] += z * prev;
            }
        }
        let w = 1.0 - theta.cos();
        for d in 0..=max_degree {
            acc[d] += w * c[d].re;
        }
    }
    let raw: Vec<f64> = acc.into_iter().map(|v| v / n as f64).collect();
    let mut max_residual = 0.0f64;
    let mut coefficients = Vec::with_capacity(raw.len());
    for (d, &v) in raw.iter().enumerate() {
        let r = v.round();
        let res = (v - r).abs();
        max_residual = max_residual.max(res);
        if res > 1e-8 || r < 0.0 {
            return Err(GroupError::Underresolved { degree: d, value: v });
        }
        coefficients.push(r as u64);
    }
    Ok(So3Molien { series: MolienSeries { coefficients }, raw, max_residual, grid: n })
}
