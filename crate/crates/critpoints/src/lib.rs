//! Critical points of the planar normal form
//!
//! `q_e(x, u) = e₂X + e₃Y + e₄X² + e₅XY + e₆X³ + e₈X⁴ + mX³ + nY²`,
//! `X = x² + u²`, `Y = x³ − 3xu²`, and its bifurcation sets in the
//! `(e₂, e₃)`-plane.
//!
//! Uniaxial critical points lie on the x-axis and its rotations by 2π/3.
//! Biaxial ones are critical points of `P(X, Y)` in the interior of the
//! region `X³ > Y²`.

pub mod brute;
pub mod census;
pub mod curves;
pub mod roots;
pub mod sweep;

use std::f64::consts::PI;

use nalgebra::{Matrix2, SymmetricEigen};
use serde::{Deserialize, Serialize};

pub use brute::{brute_force_critical_points, BruteOptions};
pub use census::{locate_transition, region_census, CensusCell, CensusGrid, Counts};
pub use curves::{
    bluebird_section, swallowtail_section, tangency_check, BifurcationCurve, ContactReport, CurveKind, TangencyReport,
};
pub use sweep::{branch_sweep, BranchRow, EventKind, SweepError, SweepEvent, SweepOptions, SweepResult};

/// Relative width of the boundary band `|X³ − Y²| ≤ ε X³` of the region.
pub const BOUNDARY_EPS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CritError {
    #[error("n = 0: the biaxial equations degenerate")]
    NZero,
    #[error("m + n = 0: the axis polynomial loses its quartic term")]
    MPlusNZero,
    #[error("{0}")]
    Unsupported(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct NormalFormParams {
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
    pub e5: f64,
    pub e6: f64,
    pub e8: f64,
    pub m: f64,
    pub n: f64,
}

impl NormalFormParams {
    pub fn new(e2: f64, e3: f64, e4: f64, e5: f64, m: f64, n: f64) -> Self {
        Self { e2, e3, e4, e5, m, n, ..Default::default() }
    }

    /// `m·n·(m+n) ≠ 0`.
    pub fn is_generic(&self) -> bool {
        self.m * self.n * (self.m + self.n) != 0.0
    }

    /// `P(X, Y)`.
    pub fn p(&self, x: f64, y: f64) -> f64 {
        let m6 = self.m + self.e6;
        self.e2 * x + self.e3 * y + self.e4 * x * x + self.e5 * x * y + m6 * x.powi(3) + self.e8 * x.powi(4)
            + self.n * y * y
    }

    /// `(P_X, P_Y, P_XX, P_XY, P_YY)`.
    pub fn p_derivs(&self, x: f64, y: f64) -> [f64; 5] {
        let m6 = self.m + self.e6;
        [
            self.e2 + 2.0 * self.e4 * x + self.e5 * y + 3.0 * m6 * x * x + 4.0 * self.e8 * x.powi(3),
            self.e3 + self.e5 * x + 2.0 * self.n * y,
            2.0 * self.e4 + 6.0 * m6 * x + 12.0 * self.e8 * x * x,
            self.e5,
            2.0 * self.n,
        ]
    }

    pub fn q(&self, x: f64, u: f64) -> f64 {
        let (bx, by) = invariants_xy(x, u);
        self.p(bx, by)
    }

    pub fn gradient(&self, x: f64, u: f64) -> [f64; 2] {
        let (bx, by) = invariants_xy(x, u);
        let [px, py, ..] = self.p_derivs(bx, by);
        [px * 2.0 * x + py * 3.0 * (x * x - u * u), px * 2.0 * u - py * 6.0 * x * u]
    }

    pub fn hessian(&self, x: f64, u: f64) -> Matrix2<f64> {
        let (bx, by) = invariants_xy(x, u);
        let [px, py, pxx, pxy, pyy] = self.p_derivs(bx, by);
        let gx = [2.0 * x, 2.0 * u];
        let gy = [3.0 * (x * x - u * u), -6.0 * x * u];
        let hy = [[6.0 * x, -6.0 * u], [-6.0 * u, -6.0 * x]];
        Matrix2::from_fn(|i, j| {
            pxx * gx[i] * gx[j]
                + pxy * (gx[i] * gy[j] + gy[i] * gx[j])
                + pyy * gy[i] * gy[j]
                + px * if i == j { 2.0 } else { 0.0 }
                + py * hy[i][j]
        })
    }

    /// Right-hand side of the axis equation,
    /// `2e₂ + 3e₃x + 4e₄x² + 5e₅x³ + 6(m+n+e₆)x⁴ + 8e₈x⁶`, ascending.
    pub fn axis_poly(&self) -> [f64; 7] {
        [
            2.0 * self.e2,
            3.0 * self.e3,
            4.0 * self.e4,
            5.0 * self.e5,
            6.0 * (self.m + self.n + self.e6),
            0.0,
            8.0 * self.e8,
        ]
    }

    /// `8ne₈X³ + 6n(m+e₆)X² + (4ne₄ − e₅²)X + 2ne₂ − e₃e₅`, ascending.
    pub fn biaxial_poly(&self) -> [f64; 4] {
        let n = self.n;
        [
            2.0 * n * self.e2 - self.e3 * self.e5,
            4.0 * n * self.e4 - self.e5 * self.e5,
            6.0 * n * (self.m + self.e6),
            8.0 * n * self.e8,
        ]
    }
}

pub fn invariants_xy(x: f64, u: f64) -> (f64, f64) {
    (x * x + u * u, x * x * x - 3.0 * x * u * u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorseType {
    Minimum,
    Maximum,
    Saddle,
    Degenerate,
}

/// Relative eigenvalue threshold below which a Hessian counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub eigenvalues: [f64; 2],
    pub morse: MorseType,
}

pub fn classify_2d(p: &NormalFormParams, x: f64, u: f64) -> Classification {
    let h = p.hessian(x, u);
    let e = SymmetricEigen::new(h).eigenvalues;
    let (a, b) = if e[0] <= e[1] { (e[0], e[1]) } else { (e[1], e[0]) };
    let scale = DEGENERACY_TOL * (1.0 + a.abs().max(b.abs()));
    let morse = if a.abs() <= scale || b.abs() <= scale {
        MorseType::Degenerate
    } else if a > 0.0 {
        MorseType::Minimum
    } else if b < 0.0 {
        MorseType::Maximum
    } else {
        MorseType::Saddle
    };
    Classification { eigenvalues: [a, b], morse }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniaxialPoint {
    pub x: f64,
    /// `∂²q/∂x²` at `(x, 0)`.
    pub axial: f64,
    /// `∂²q/∂u²` at `(x, 0)`.
    pub transverse: f64,
    pub morse: MorseType,
}

/// Tolerance used when isolating roots.
const ROOT_TOL: f64 = 1e-13;

/// The origin followed by the real nonzero roots of the axis equation.
pub fn uniaxial_points(p: &NormalFormParams) -> Vec<UniaxialPoint> {
    let mut xs = vec![0.0];
    let mut f = p.axis_poly().to_vec();
    // Exact roots at 0 belong to the origin.
    while f.len() > 1 && f[0] == 0.0 {
        f.remove(0);
    }
    for r in roots::real_roots(&f, ROOT_TOL) {
        if r != 0.0 {
            xs.push(polish_axis(p, r));
        }
    }
    xs.into_iter()
        .map(|x| {
            let h = p.hessian(x, 0.0);
            UniaxialPoint { x, axial: h[(0, 0)], transverse: h[(1, 1)], morse: classify_2d(p, x, 0.0).morse }
        })
        .collect()
}

fn polish_axis(p: &NormalFormParams, x: f64) -> f64 {
    polish(&p.axis_poly(), x)
}

/// A few guarded Newton steps.
fn polish(f: &[f64], mut x: f64) -> f64 {
    let df = roots::derivative(f);
    for _ in 0..3 {
        let d = roots::eval(&df, x);
        if d == 0.0 {
            break;
        }
        let step = roots::eval(f, x) / d;
        if !step.is_finite() || step.abs() > 1e-6 * (1.0 + x.abs()) {
            break;
        }
        x -= step;
    }
    x
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiaxialOrbit {
    pub big_x: f64,
    pub big_y: f64,
    /// Two points per sector: `(r cos θ, ±r sin θ)`, `θ = α/3`.
    pub representatives: [[f64; 2]; 2],
    pub orbit_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct BiaxialSolution {
    pub orbits: Vec<BiaxialOrbit>,
    /// Critical points of `P` on the boundary `X³ = Y²`: these are axis
    /// points, already uniaxial.
    pub boundary: Vec<(f64, f64)>,
}

pub fn biaxial_points(p: &NormalFormParams) -> Result<BiaxialSolution, CritError> {
    if p.n == 0.0 {
        return Err(CritError::NZero);
    }
    let mut out = BiaxialSolution::default();
    let cubic = p.biaxial_poly();
    for bx in roots::real_roots(&cubic, ROOT_TOL) {
        if bx <= 0.0 {
            continue;
        }
        let bx = polish(&cubic, bx);
        let by = -(p.e3 + p.e5 * bx) / (2.0 * p.n);
        let x3 = bx.powi(3);
        let gap = x3 - by * by;
        if gap > BOUNDARY_EPS * x3 {
            let r = bx.sqrt();
            let alpha = gap.sqrt().atan2(by);
            let (s, c) = (alpha / 3.0).sin_cos();
            out.orbits.push(BiaxialOrbit {
                big_x: bx,
                big_y: by,
                representatives: [[r * c, r * s], [r * c, -r * s]],
                orbit_count: 6,
            });
        } else if gap >= -BOUNDARY_EPS * x3 {
            out.boundary.push((bx, by));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Origin,
    Uniaxial,
    Biaxial,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CritPoint {
    pub x: f64,
    pub u: f64,
    pub kind: PointKind,
    pub value: f64,
    pub class: Classification,
}

pub fn rotate(pt: [f64; 2], k: usize) -> [f64; 2] {
    let (s, c) = (2.0 * PI * k as f64 / 3.0).sin_cos();
    [c * pt[0] - s * pt[1], s * pt[0] + c * pt[1]]
}

/// All critical points: origin, three per nonzero axis root, six per
/// biaxial orbit.
pub fn critical_set(p: &NormalFormParams) -> Result<Vec<CritPoint>, CritError> {
    let mk = |x: f64, u: f64, kind| CritPoint { x, u, kind, value: p.q(x, u), class: classify_2d(p, x, u) };
    let mut out = Vec::new();
    for up in uniaxial_points(p) {
        if up.x == 0.0 {
            out.push(mk(0.0, 0.0, PointKind::Origin));
            continue;
        }
        for k in 0..3 {
            let [x, u] = rotate([up.x, 0.0], k);
            out.push(mk(x, u, PointKind::Uniaxial));
        }
    }
    for orb in biaxial_points(p)?.orbits {
        for rep in orb.representatives {
            for k in 0..3 {
                let [x, u] = rotate(rep, k);
                out.push(mk(x, u, PointKind::Biaxial));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftedAxis {
    pub x0: f64,
    pub params: NormalFormParams,
    /// Coefficient of `x⁵` in the translated axis polynomial, which the
    /// normal form has no slot for. Zero when `e₈ = 0`.
    pub dropped_x5: f64,
}

/// Translate the axis polynomial by `x₀ = (5/24)e₅/(m+n)`: the returned
/// parameters have axis polynomial `F(x − x₀)`, with `m`, `n` unchanged and
/// any change of the quartic coefficient carried by `e₆`.
pub fn shift_x0(p: &NormalFormParams) -> Result<ShiftedAxis, CritError> {
    let mn = p.m + p.n;
    if mn == 0.0 {
        return Err(CritError::MPlusNZero);
    }
    let x0 = 5.0 / 24.0 * p.e5 / mn;
    if x0 == 0.0 {
        return Ok(ShiftedAxis { x0, params: *p, dropped_x5: 0.0 });
    }
    let f = p.axis_poly();
    let mut g = [0.0; 7];
    // F(x − x₀) = Σ f_k Σ_j C(k,j) x^j (−x₀)^{k−j}
    for (k, fk) in f.iter().enumerate() {
        for (j, gj) in g.iter_mut().enumerate().take(k + 1) {
            *gj += fk * binom(k, j) * (-x0).powi((k - j) as i32);
        }
    }
    let params = NormalFormParams {
        e2: g[0] / 2.0,
        e3: g[1] / 3.0,
        e4: g[2] / 4.0,
        e5: g[3] / 5.0,
        e6: g[4] / 6.0 - mn,
        e8: g[6] / 8.0,
        m: p.m,
        n: p.n,
    };
    Ok(ShiftedAxis { x0, params, dropped_x5: g[5] })
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
