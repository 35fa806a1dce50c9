use polyser::{monomials_of_degree, monomials_up_to, Coeff, TruncSeries};
use serde::{Deserialize, Serialize};

use crate::poly::{basis_polys, zw};

/// Slot names of [`LandauCoeffs`] in storage order.
pub const LANDAU_NAMES: [&str; 12] = ["alpha", "beta", "gamma", "a3", "a4", "b4", "a5", "b5", "a6", "b6", "c6", "d6"];

/// Coefficients of the degree-6 free energy
///
/// `α|z|² + β|w|² + 2γRe(zw̄) + a₃f₃ + a₄f₄ + b₄f₂² + a₅f₅ + b₅f₂f₃
///  + a₆f₆ + b₆f₂³ + c₆f₃² + d₆f₂f₄`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandauCoeffs<C = f64> {
    pub alpha: C,
    pub beta: C,
    pub gamma: C,
    pub a3: C,
    pub a4: C,
    pub b4: C,
    pub a5: C,
    pub b5: C,
    pub a6: C,
    pub b6: C,
    pub c6: C,
    pub d6: C,
}

impl<C: Coeff> Default for LandauCoeffs<C> {
    fn default() -> Self {
        Self::from_vec(vec![C::zero(); 12])
    }
}

impl<C: Coeff> LandauCoeffs<C> {
    pub fn to_vec(&self) -> Vec<C> {
        vec![
            self.alpha.clone(),
            self.beta.clone(),
            self.gamma.clone(),
            self.a3.clone(),
            self.a4.clone(),
            self.b4.clone(),
            self.a5.clone(),
            self.b5.clone(),
            self.a6.clone(),
            self.b6.clone(),
            self.c6.clone(),
            self.d6.clone(),
        ]
    }

    pub fn from_vec(v: Vec<C>) -> Self {
        assert_eq!(v.len(), 12, "LandauCoeffs has 12 slots");
        let mut it = v.into_iter();
        let mut next = || it.next().unwrap();
        Self {
            alpha: next(),
            beta: next(),
            gamma: next(),
            a3: next(),
            a4: next(),
            b4: next(),
            a5: next(),
            b5: next(),
            a6: next(),
            b6: next(),
            c6: next(),
            d6: next(),
        }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LandauCoeffs<D> {
        LandauCoeffs::from_vec(self.to_vec().iter().map(f).collect())
    }

    pub fn to_f64(&self) -> LandauCoeffs<f64> {
        self.map(|c| c.to_f64())
    }

    /// The same coefficients with the quadratic slots replaced.
    pub fn with_quadratic(&self, alpha: C, beta: C, gamma: C) -> Self {
        Self { alpha, beta, gamma, ..self.clone() }
    }
}

impl<T> BasisFit<T> {
    /// Fail when the residual exceeds `tol`.
    pub fn checked(self, tol: f64) -> Result<Self, InvariantError> {
        if self.residual > tol {
            return Err(InvariantError::Residual { residual: self.residual, tol });
        }
        Ok(self)
    }
}

/// The twelve basis polynomials matching the [`LandauCoeffs`] slots.
pub fn linear_basis<C: Coeff>(cap: u32) -> [TruncSeries<C>; 12] {
    let (z, w) = zw::<C>(cap);
    let [f2, f3, f4, f5, f6] = basis_polys::<C>(cap);
    let zz = z.norm_sqr();
    let ww = w.norm_sqr();
    let zw_re = z.mul(&w.conj()).re.scale(&C::from_i64(2));
    let f2sq = &f2 * &f2;
    [
        zz,
        ww,
        zw_re,
        f3.clone(),
        f4.clone(),
        f2sq.clone(),
        f5,
        &f2 * &f3,
        f6,
        &f2sq * &f2,
        &f3 * &f3,
        &f2 * &f4,
    ]
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvariantError {
    #[error("input has terms of degree 0 or 1")]
    LowDegreeTerms,
    #[error("input must be a polynomial in 4 variables")]
    WrongShape,
    #[error("fit residual {residual:e} above tolerance {tol:e}")]
    Residual { residual: f64, tol: f64 },
    #[error("basis system is singular")]
    Singular,
}

/// Result of expressing a polynomial in a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisFit<T> {
    pub coeffs: T,
    /// Euclidean norm of the unmatched monomial coefficients.
    pub residual: f64,
}

fn solve_in_basis<C: Coeff>(
    poly: &TruncSeries<C>,
    basis: &[TruncSeries<C>],
    monos: &[Vec<u8>],
) -> Result<(Vec<C>, f64), InvariantError> {
    let a: Vec<Vec<C>> = monos.iter().map(|m| basis.iter().map(|b| b.coeff(m)).collect()).collect();
    let rhs: Vec<C> = monos.iter().map(|m| poly.coeff(m)).collect();
    let x = C::lstsq(&a, &rhs).ok_or(InvariantError::Singular)?;
    let fitted = polyser::linalg::mat_vec(&a, &x);
    // terms of poly outside the listed monomials count as unmatched too
    let listed: std::collections::BTreeSet<&[u8]> = monos.iter().map(|m| m.as_slice()).collect();
    let outside: f64 = poly.terms().filter(|(m, _)| !listed.contains(m)).map(|(_, c)| c.magnitude().powi(2)).sum();
    let residual = if C::is_exact() {
        let r2 = fitted.iter().zip(&rhs).fold(C::zero(), |s, (f, b)| {
            let d = f.clone() - b.clone();
            s + d.clone() * d
        });
        (r2.to_f64() + outside).sqrt()
    } else {
        let r2: f64 = fitted.iter().zip(&rhs).map(|(f, b)| (f.to_f64() - b.to_f64()).powi(2)).sum();
        (r2 + outside).sqrt()
    };
    Ok((x, residual))
}

/// Express a polynomial in `(s,p,d,c)` of degree ≤ 6 in the twelve-term
/// basis of [`linear_basis`]. Exact for rational input.
pub fn fit_invariant_basis<C: Coeff>(poly: &TruncSeries<C>) -> Result<BasisFit<LandauCoeffs<C>>, InvariantError> {
    if poly.num_vars() != 4 {
        return Err(InvariantError::WrongShape);
    }
    if poly.terms().any(|(m, _)| m.iter().map(|&e| e as u32).sum::<u32>() <= 1) {
        return Err(InvariantError::LowDegreeTerms);
    }
    let basis = linear_basis::<C>(poly.cap().max(6));
    let poly = poly.with_cap(poly.cap().max(6));
    let monos = monomials_up_to(4, 2, 6);
    let (x, residual) = solve_in_basis(&poly, &basis, &monos)?;
    Ok(BasisFit { coeffs: LandauCoeffs::from_vec(x), residual })
}

/// Exponents `(a,b,c,d,e)` of the products `f₂ᵃf₃ᵇf₄ᶜf₅ᵈf₆ᵉ` of total
/// degree `degree` with `d ≤ 1`; by the syzygy these form a linear basis
/// of the invariants of that degree.
pub fn hilbert_monomials(degree: u32) -> Vec<[u32; 5]> {
    let mut out = Vec::new();
    for d5 in 0..=1u32 {
        for e in 0..=degree / 6 {
            for c in 0..=degree / 4 {
                for b in 0..=degree / 3 {
                    let used = 5 * d5 + 6 * e + 4 * c + 3 * b;
                    if used <= degree && (degree - used) % 2 == 0 {
                        out.push([(degree - used) / 2, b, c, d5, e]);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Express a homogeneous polynomial of degree `degree` as a combination of
/// [`hilbert_monomials`]; coefficients follow that ordering.
pub fn fit_products<C: Coeff>(poly: &TruncSeries<C>, degree: u32) -> Result<BasisFit<Vec<C>>, InvariantError> {
    if poly.num_vars() != 4 || poly.cap() < degree {
        return Err(InvariantError::WrongShape);
    }
    let f = basis_polys::<C>(poly.cap());
    let prods: Vec<TruncSeries<C>> = hilbert_monomials(degree)
        .iter()
        .map(|ex| {
            let mut p = TruncSeries::one(4, poly.cap());
            for (fi, &k) in f.iter().zip(ex) {
                p = &p * &fi.pow(k);
            }
            p
        })
        .collect();
    let monos = monomials_of_degree(4, degree);
    let (x, residual) = solve_in_basis(poly, &prods, &monos)?;
    Ok(BasisFit { coeffs: x, residual })
}
