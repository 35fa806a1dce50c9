//! Reduction of the free energy to the kernel of its Hessian at a point of
//! the stability cone.
//!
//! Variables after the rotation are `(x, y, u, v)` with `Z = x + iu` in the
//! kernel and `W = y + iv` transverse to it. The shear
//! `W ↦ W + Cσ Z̄² + 2SCσ²|Z|²Z` removes the terms linear in `W`, leaving
//! `2μ|W|² + q(x, u)` with `q = e₃Y + e₄X² + e₅XY + mX³ + nY² + O(7)`.

use nalgebra::Matrix4;
use polyser::{invert_map, Coeff, SeriesError, TruncSeries};
use serde::{Deserialize, Serialize};

pub use invariants::LandauCoeffs;

/// Cap used for every series in the pipeline.
pub const CAP: u32 = 6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReductionError {
    #[error("μ = 0: the cone vertex admits no reduction")]
    Vertex,
    #[error("(cos ξ, sin ξ) is not on the unit circle")]
    OffCircle,
    #[error("quadratic part is not 2μ times the cone form at this ξ")]
    OffCone,
    #[error("monomial x^{0}y^{1}u^{2}v^{3} survives with coefficient {4}", monomial[0], monomial[1], monomial[2], monomial[3], coeff)]
    Mixed { monomial: [u8; 4], coeff: f64 },
    #[error("residual differs from the coefficient map by {0}")]
    Residual(f64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn tol<C: Coeff>() -> f64 {
    if C::is_exact() {
        0.0
    } else {
        1e-9
    }
}

fn close<C: Coeff>(a: &C, b: &C) -> bool {
    let scale = 1.0 + a.magnitude().max(b.magnitude());
    (a.clone() - b.clone()).magnitude() <= tol::<C>() * scale
}

/// Coefficients of the residual `q(x, u)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedCoeffs<C = f64> {
    pub e2: C,
    pub e3: C,
    pub e4: C,
    pub e5: C,
    /// Coefficient of `X³`.
    pub m: C,
    /// Coefficient of `Y²`.
    pub n: C,
    /// `−3a₃/(4μ)`.
    pub sigma: C,
    /// `cos 3ξ`.
    pub c: C,
    /// `sin 3ξ`.
    pub s: C,
}

impl<C: Coeff> ReducedCoeffs<C> {
    /// `e₂X + e₃Y + e₄X² + e₅XY + mX³ + nY²` over `(x, u)`.
    pub fn residual_poly(&self) -> TruncSeries<C> {
        let (x, y) = plane_invariants::<C>();
        let terms = [
            (&self.e2, x.clone()),
            (&self.e3, y.clone()),
            (&self.e4, &x * &x),
            (&self.e5, &x * &y),
            (&self.m, &(&x * &x) * &x),
            (&self.n, &y * &y),
        ];
        let mut q = TruncSeries::zero(2, CAP);
        for (k, p) in terms {
            q = &q + &p.scale(k);
        }
        q
    }

    pub fn to_f64(&self) -> ReducedCoeffs<f64> {
        ReducedCoeffs {
            e2: self.e2.to_f64(),
            e3: self.e3.to_f64(),
            e4: self.e4.to_f64(),
            e5: self.e5.to_f64(),
            m: self.m.to_f64(),
            n: self.n.to_f64(),
            sigma: self.sigma.to_f64(),
            c: self.c.to_f64(),
            s: self.s.to_f64(),
        }
    }
}

/// `X = x² + u²`, `Y = x³ − 3xu²` over `(x, u)`.
pub fn plane_invariants<C: Coeff>() -> (TruncSeries<C>, TruncSeries<C>) {
    let x = TruncSeries::<C>::var(2, CAP, 0);
    let u = TruncSeries::<C>::var(2, CAP, 1);
    let xx = &x * &x;
    let uu = &u * &u;
    let big_x = &xx + &uu;
    let big_y = &(&xx * &x) - &(&x * &uu).scale(&C::from_i64(3));
    (big_x, big_y)
}

/// `(cos 3ξ, sin 3ξ)` from `(cos ξ, sin ξ)`.
pub fn triple_angle<C: Coeff>(cos_xi: &C, sin_xi: &C) -> (C, C) {
    let c = cos_xi.clone();
    let s = sin_xi.clone();
    let four = C::from_i64(4);
    let three = C::from_i64(3);
    (
        four.clone() * c.clone() * c.clone() * c.clone() - three.clone() * c,
        three * s.clone() - four * s.clone() * s.clone() * s,
    )
}

/// Rows `(s, d, p, c)`, columns `(x, y, u, v)`.
pub fn rotate_coords_exact<C: Coeff>(cos_xi: &C, sin_xi: &C) -> [[C; 4]; 4] {
    let (c, s, z) = (cos_xi.clone(), sin_xi.clone(), C::zero());
    [
        [s.clone(), c.clone(), z.clone(), z.clone()],
        [-c.clone(), s.clone(), z.clone(), z.clone()],
        [z.clone(), z.clone(), s.clone(), c.clone()],
        [z.clone(), z, -c, s],
    ]
}

/// [`rotate_coords_exact`] at angle `ξ`.
pub fn rotate_coords(xi: f64) -> Matrix4<f64> {
    let (s, c) = xi.sin_cos();
    let m = rotate_coords_exact(&c, &s);
    Matrix4::from_fn(|i, j| m[i][j])
}

/// `(s, p, d, c)` as linear series in `(x, y, u, v)`.
pub fn rotation_images<C: Coeff>(cos_xi: &C, sin_xi: &C) -> [TruncSeries<C>; 4] {
    let m = rotate_coords_exact(cos_xi, sin_xi);
    let row = |r: &[C; 4]| {
        TruncSeries::from_terms(
            4,
            CAP,
            (0..4).filter(|&j| !r[j].is_zero()).map(|j| {
                let mut e = [0u8; 4];
                e[j] = 1;
                (e, r[j].clone())
            }),
        )
    };
    [row(&m[0]), row(&m[2]), row(&m[1]), row(&m[3])]
}

/// The shear `(x, y, u, v) ↦ (x, y + φ_y, u, v + φ_v)` with
/// `φ_y + iφ_v = σC Z̄² + 2σ²SC|Z|²Z`.
pub fn completing_square_map<C: Coeff>(sigma: &C, c: &C, s: &C) -> [TruncSeries<C>; 4] {
    let v = |i| TruncSeries::<C>::var(4, CAP, i);
    let (x, y, u, w) = (v(0), v(1), v(2), v(3));
    let om = sigma.clone() * c.clone();
    let eta = C::from_i64(2) * sigma.clone() * sigma.clone() * s.clone() * c.clone();
    let xx = &x * &x;
    let uu = &u * &u;
    let r2 = &xx + &uu;
    let phi_y = &(&xx - &uu).scale(&om) + &(&r2 * &x).scale(&eta);
    let phi_v = &(&x * &u).scale(&(C::from_i64(-2) * om)) + &(&r2 * &u).scale(&eta);
    [x, &y + &phi_y, u, &w + &phi_v]
}

struct Powers<C> {
    sg: C,
    sg2: C,
    sg3: C,
    c2: C,
    s2: C,
}

fn powers<C: Coeff>(a3: &C, c: &C, s: &C, mu: &C) -> Result<Powers<C>, ReductionError> {
    if mu.is_zero() {
        return Err(ReductionError::Vertex);
    }
    let sg = -(C::from_i64(3) * a3.clone()) / (C::from_i64(4) * mu.clone());
    let sg2 = sg.clone() * sg.clone();
    Ok(Powers {
        sg3: sg2.clone() * sg.clone(),
        sg2,
        sg,
        c2: c.clone() * c.clone(),
        s2: s.clone() * s.clone(),
    })
}

/// The two printed expressions for each of `e₄`, `e₅`, `e₆`, in that
/// order, as `(expanded, simplified)`.
pub fn formula_forms<C: Coeff>(lc: &LandauCoeffs<C>, c: &C, s: &C, mu: &C) -> Result<[(C, C); 3], ReductionError> {
    let Powers { sg, sg2, sg3, c2, s2 } = powers(&lc.a3, c, s, mu)?;
    let k = |n: i64| C::from_i64(n);
    let (a3, a4, b4, a5, b5, b6) = (&lc.a3, &lc.a4, &lc.b4, &lc.a5, &lc.b5, &lc.b6);
    let m = mu.clone();
    let sg4 = sg3.clone() * sg.clone();
    let e4_long = k(2) * m.clone() * c2.clone() * sg2.clone() + k(3) * a3.clone() * c2.clone() * sg.clone() + b4.clone();
    let e4_short = C::from_ratio(3, 2) * a3.clone() * c2.clone() * sg.clone() + b4.clone();
    let e5_long = k(8) * m.clone() * s.clone() * c2.clone() * sg3.clone()
        - k(9) * a3.clone() * s.clone() * c2.clone() * sg2.clone()
        - b5.clone() * s.clone();
    let e5_short = k(3) * a3.clone() * s.clone() * c2.clone() * sg2.clone() - b5.clone() * s.clone();
    let e6_long = k(8) * m * s2.clone() * c2.clone() * sg4
        + a3.clone() * (k(12) * s2.clone() * c2.clone() * sg3.clone() + c2.clone() * c2.clone() * sg3.clone())
        + k(2) * b4.clone() * c2.clone() * sg2.clone()
        - k(4) * a4.clone() * c2.clone() * sg2.clone()
        + k(2) * a5.clone() * c2.clone() * sg.clone()
        + k(3) * b5.clone() * c2.clone() * sg.clone()
        + b6.clone();
    let e6_short = a3.clone() * (k(6) * s2 + c2.clone()) * c2.clone() * sg3
        + k(2) * (b4.clone() - a4.clone()) * c2.clone() * sg2
        + (k(2) * a5.clone() + k(3) * b5.clone()) * c2 * sg
        + b6.clone();
    Ok([(e4_long, e4_short), (e5_long, e5_short), (e6_long, e6_short)])
}

/// The coefficient map as printed: simplified forms of `e₄, e₅, e₆` and
/// `d₆` with no `a₆` contribution.
pub fn printed_coeffs_cs<C: Coeff>(
    lc: &LandauCoeffs<C>,
    c: &C,
    s: &C,
    mu: &C,
) -> Result<ReducedCoeffs<C>, ReductionError> {
    let [(_, e4), (_, e5), (_, e6)] = formula_forms(lc, c, s, mu)?;
    let Powers { sg, sg2, sg3, c2, s2 } = powers(&lc.a3, c, s, mu)?;
    let k = |n: i64| C::from_i64(n);
    let n = -(k(2) * lc.a3.clone() * c2.clone() * c2.clone() * sg3) + k(4) * lc.a4.clone() * c2.clone() * sg2
        - k(2) * lc.a5.clone() * c2 * sg.clone()
        + lc.c6.clone() * s2;
    Ok(ReducedCoeffs {
        e2: C::zero(),
        e3: -(lc.a3.clone() * s.clone()),
        e4,
        e5,
        m: e6,
        n,
        sigma: sg,
        c: c.clone(),
        s: s.clone(),
    })
}

/// The coefficient map at `(C, S) = (cos 3ξ, sin 3ξ)`:
///
/// ```text
/// e₃ = −a₃S
/// e₄ = (3/2)a₃C²σ + b₄
/// e₅ = 3a₃SC²σ² − b₅S
/// m  = a₃(6S² + C²)C²σ³ + 2(b₄ − 2a₄)C²σ² + (2a₅ + 3b₅)C²σ + b₆ + a₆C²
/// n  = −2a₃C⁴σ³ + 4a₄C²σ² − 2a₅C²σ + c₆S² − a₆C²
/// ```
pub fn residual_coeffs_cs<C: Coeff>(
    lc: &LandauCoeffs<C>,
    c: &C,
    s: &C,
    mu: &C,
) -> Result<ReducedCoeffs<C>, ReductionError> {
    let mut r = printed_coeffs_cs(lc, c, s, mu)?;
    let Powers { sg2, c2, .. } = powers(&lc.a3, c, s, mu)?;
    let a6c2 = lc.a6.clone() * c2.clone();
    r.m = r.m - C::from_i64(2) * lc.a4.clone() * c2 * sg2 + a6c2.clone();
    r.n = r.n - a6c2;
    Ok(r)
}

/// [`residual_coeffs_cs`] at angle `ξ`.
pub fn residual_coeffs(lc: &LandauCoeffs<f64>, xi: f64, mu: f64) -> Result<ReducedCoeffs<f64>, ReductionError> {
    residual_coeffs_cs(lc, &(3.0 * xi).cos(), &(3.0 * xi).sin(), &mu)
}

/// `e₂ = (5/2)t − (√3/(4√2))U₀ρ` for a perturbation `(t, ρ)` off the cone.
pub fn e2_from_perturbation(t: f64, rho: f64, u0: f64) -> f64 {
    2.5 * t - 3f64.sqrt() / (4.0 * 2f64.sqrt()) * u0 * rho
}

/// The degree-6 free energy over `(s, p, d, c)`.
pub fn assemble<C: Coeff>(lc: &LandauCoeffs<C>) -> TruncSeries<C> {
    let basis = invariants::linear_basis::<C>(CAP);
    let mut f = TruncSeries::zero(4, CAP);
    for (b, k) in basis.iter().zip(lc.to_vec()) {
        if !k.is_zero() {
            f = &f + &b.scale(&k);
        }
    }
    f
}

/// Largest forbidden coefficient and where it sits.
#[derive(Clone, Debug, PartialEq)]
pub struct Worst<C> {
    pub monomial: [u8; 4],
    pub coeff: C,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport<C: Coeff> {
    /// Largest coefficient of a monomial linear in `(y, v)` of degree ≤ 5,
    /// or of a quadratic monomial departing from `2μ(y² + v²)`.
    pub max_mixed_coeff: f64,
    pub worst_mixed: Option<Worst<C>>,
    /// The same over degree ≤ 4 only; these are the terms that would feed
    /// back into `q` below degree 7.
    pub max_mixed_through_4: f64,
    /// Number of nonzero monomials linear in `(y, v)` of degree 5.
    pub degree5_linear_terms: usize,
    /// Monomials of degree 3 to 5 carrying `(y, v)` to power at least two.
    /// These do not affect `q`.
    pub higher_w_terms: usize,
    /// Largest coefficient of `q − (e₃Y + e₄X² + e₅XY + mX³ + nY²)` with the
    /// coefficients from [`residual_coeffs_cs`].
    pub residual_match_error: f64,
    /// The same against [`printed_coeffs_cs`].
    pub printed_match_error: f64,
    /// `q(x, u)` through degree 6.
    pub residual: TruncSeries<C>,
    pub reduced: ReducedCoeffs<C>,
    /// The transformed free energy over `(x, y, u, v)`.
    pub transformed: TruncSeries<C>,
}

impl<C: Coeff> ReductionReport<C> {
    /// Fails unless `q` is exact through degree 6: no surviving linear
    /// terms through degree 4, the quadratic block intact and the residual
    /// equal to [`residual_coeffs_cs`].
    pub fn ensure_exact(&self) -> Result<(), ReductionError> {
        if self.max_mixed_through_4 > tol::<C>() {
            if let Some(w) = &self.worst_mixed {
                return Err(ReductionError::Mixed { monomial: w.monomial, coeff: w.coeff.to_f64() });
            }
        }
        if self.residual_match_error > tol::<C>() {
            return Err(ReductionError::Residual(self.residual_match_error));
        }
        Ok(())
    }
}

fn max_coeff<C: Coeff>(p: &TruncSeries<C>) -> f64 {
    p.terms().map(|(_, k)| k.magnitude()).fold(0.0, f64::max)
}

/// Rotate, complete the square and compare the residual with the
/// coefficient map. The quadratic part of `lc` must lie on the cone at the
/// angle `(cos ξ, sin ξ)`.
pub fn verify_reduction<C: Coeff>(
    lc: &LandauCoeffs<C>,
    cos_xi: &C,
    sin_xi: &C,
) -> Result<ReductionReport<C>, ReductionError> {
    let one = C::one();
    if !close(&(cos_xi.clone() * cos_xi.clone() + sin_xi.clone() * sin_xi.clone()), &one) {
        return Err(ReductionError::OffCircle);
    }
    let two_mu = lc.alpha.clone() + lc.beta.clone();
    let mu = two_mu.clone() / C::from_i64(2);
    if mu.is_zero() {
        return Err(ReductionError::Vertex);
    }
    let on_cone = close(&lc.alpha, &(two_mu.clone() * cos_xi.clone() * cos_xi.clone()))
        && close(&lc.beta, &(two_mu.clone() * sin_xi.clone() * sin_xi.clone()))
        && close(&lc.gamma, &(two_mu.clone() * sin_xi.clone() * cos_xi.clone()));
    if !on_cone {
        return Err(ReductionError::OffCone);
    }
    let (c, s) = triple_angle(cos_xi, sin_xi);
    let reduced = residual_coeffs_cs(lc, &c, &s, &mu)?;
    let printed = printed_coeffs_cs(lc, &c, &s, &mu)?;

    let f = assemble(lc);
    let rotated = f.substitute(&rotation_images(cos_xi, sin_xi))?;
    let shear = completing_square_map(&reduced.sigma, &c, &s);
    let inverse = invert_map(&shear)?;
    let g = rotated.substitute(&inverse)?;

    let block = |e: &[u8; 4]| *e == [0, 2, 0, 0] || *e == [0, 0, 0, 2];
    let mut worst: Option<Worst<C>> = None;
    let (mut through_4, mut deg5, mut higher) = (0.0f64, 0, 0);
    let mut pure = Vec::new();
    let mut consider = |e: [u8; 4], d: C, deg: u32, worst: &mut Option<Worst<C>>| {
        if d.is_zero() {
            return;
        }
        if deg <= 4 {
            through_4 = through_4.max(d.magnitude());
        }
        if worst.as_ref().is_none_or(|w| d.magnitude() > w.coeff.magnitude()) {
            *worst = Some(Worst { monomial: e, coeff: d });
        }
    };
    for (m, k) in g.terms() {
        let e = [m[0], m[1], m[2], m[3]];
        let wdeg = e[1] + e[3];
        let deg = (e[0] + e[1] + e[2] + e[3]) as u32;
        if wdeg == 0 {
            pure.push(([e[0], e[2]], k.clone()));
        } else if deg == 2 {
            let expected = if block(&e) { two_mu.clone() } else { C::zero() };
            consider(e, k.clone() - expected, deg, &mut worst);
        } else if wdeg == 1 && deg <= 5 {
            deg5 += usize::from(deg == 5);
            consider(e, k.clone(), deg, &mut worst);
        } else if deg <= 5 {
            higher += 1;
        }
    }
    for e in [[0u8, 2, 0, 0], [0, 0, 0, 2]] {
        if g.coeff(&e).is_zero() {
            consider(e, -two_mu.clone(), 2, &mut worst);
        }
    }
    let residual = TruncSeries::from_terms(2, CAP, pure);
    let residual_match_error = max_coeff(&(&residual - &reduced.residual_poly()));
    let printed_match_error = max_coeff(&(&residual - &printed.residual_poly()));
    Ok(ReductionReport {
        max_mixed_coeff: worst.as_ref().map_or(0.0, |w| w.coeff.magnitude()),
        worst_mixed: worst,
        max_mixed_through_4: through_4,
        degree5_linear_terms: deg5,
        higher_w_terms: higher,
        residual_match_error,
        printed_match_error,
        residual,
        reduced,
        transformed: g,
    })
}
