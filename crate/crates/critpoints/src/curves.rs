//! Sections of the swallowtail `S` and bluebird `B` bifurcation sets in the
//! `(e₂, e₃)`-plane at fixed `(e₄, e₅, m, n)` with `e₆ = e₈ = 0`.

use serde::{Deserialize, Serialize};

use crate::roots;
use crate::{CritError, NormalFormParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    SwallowtailS,
    BluebirdB0,
    BluebirdB1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BifurcationCurve {
    pub kind: CurveKind,
    /// Curve parameter of each point: the double root `x` on `S`, `X` on `B₀`
    /// and `e₃` on `B₁`.
    pub params: Vec<f64>,
    pub points: Vec<[f64; 2]>,
    /// `(e₄, e₅, m, n)`.
    pub fixed: [f64; 4],
    /// `σ_Y` for `B₀` branches, 0 otherwise.
    pub branch: i8,
    /// Points where the parametrisation is singular (`F″ = 0` on `S`).
    pub cusps: Vec<[f64; 2]>,
}

impl BifurcationCurve {
    pub fn params_at(&self, e2: f64, e3: f64) -> NormalFormParams {
        let [e4, e5, m, n] = self.fixed;
        NormalFormParams::new(e2, e3, e4, e5, m, n)
    }

    /// Residual of the defining condition at point `k`.
    pub fn residual(&self, k: usize) -> f64 {
        let [e2, e3] = self.points[k];
        let p = self.params_at(e2, e3);
        let t = self.params[k];
        match self.kind {
            CurveKind::SwallowtailS => {
                let f = p.axis_poly();
                roots::eval(&f, t).abs().max(roots::eval(&roots::derivative(&f), t).abs())
            }
            CurveKind::BluebirdB0 => {
                let y = -(p.e3 + p.e5 * t) / (2.0 * p.n);
                let q = p.biaxial_poly();
                roots::eval(&q, t).abs().max((y - self.branch as f64 * t.powf(1.5)).abs())
            }
            CurveKind::BluebirdB1 => {
                let q = p.biaxial_poly();
                q[1] * q[1] - 4.0 * q[2] * q[0]
            }
            .abs(),
        }
    }

    /// Transversal self-intersections of the polyline.
    pub fn self_crossings(&self) -> Vec<[f64; 2]> {
        let mut out = Vec::new();
        let pts = &self.points;
        for i in 0..pts.len().saturating_sub(1) {
            for j in i + 2..pts.len().saturating_sub(1) {
                if let Some((_, _, pt)) = segment_hit(pts[i], pts[i + 1], pts[j], pts[j + 1]) {
                    out.push(pt);
                }
            }
        }
        out
    }
}

fn segment_hit(a0: [f64; 2], a1: [f64; 2], b0: [f64; 2], b1: [f64; 2]) -> Option<(f64, f64, [f64; 2])> {
    let da = [a1[0] - a0[0], a1[1] - a0[1]];
    let db = [b1[0] - b0[0], b1[1] - b0[1]];
    let den = da[0] * db[1] - da[1] * db[0];
    if den == 0.0 {
        return None;
    }
    let w = [b0[0] - a0[0], b0[1] - a0[1]];
    let s = (w[0] * db[1] - w[1] * db[0]) / den;
    let t = (w[0] * da[1] - w[1] * da[0]) / den;
    ((0.0..1.0).contains(&s) && (0.0..1.0).contains(&t)).then(|| (s, t, [a0[0] + s * da[0], a0[1] + s * da[1]]))
}

fn linspace(lo: f64, hi: f64, k: usize) -> impl Iterator<Item = f64> {
    let k = k.max(2);
    (0..k).map(move |i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
}

/// `G(x) = 4e₄x² + 5e₅x³ + 6(m+n)x⁴`, ascending.
fn g_poly(e4: f64, e5: f64, m: f64, n: f64) -> [f64; 5] {
    [0.0, 0.0, 4.0 * e4, 5.0 * e5, 6.0 * (m + n)]
}

fn swallowtail_point(g: &[f64], x: f64) -> [f64; 2] {
    let gp = roots::eval(&roots::derivative(g), x);
    let gv = roots::eval(g, x);
    [(x * gp - gv) / 2.0, -gp / 3.0]
}

/// The double-root locus of the axis polynomial, one point per `x`.
pub fn swallowtail_section(
    e4: f64,
    e5: f64,
    m: f64,
    n: f64,
    x_range: (f64, f64),
    samples: usize,
) -> Result<BifurcationCurve, CritError> {
    if m + n == 0.0 {
        return Err(CritError::MPlusNZero);
    }
    let g = g_poly(e4, e5, m, n);
    let g2 = roots::derivative(&roots::derivative(&g));
    let params: Vec<f64> = linspace(x_range.0, x_range.1, samples).collect();
    let points = params.iter().map(|&x| swallowtail_point(&g, x)).collect();
    let cusps = roots::real_roots(&g2, 1e-14)
        .into_iter()
        .filter(|x| (x_range.0..=x_range.1).contains(x))
        .map(|x| swallowtail_point(&g, x))
        .collect();
    Ok(BifurcationCurve { kind: CurveKind::SwallowtailS, params, points, fixed: [e4, e5, m, n], branch: 0, cusps })
}

fn b0_point(e4: f64, e5: f64, m: f64, n: f64, big_x: f64, sigma: f64) -> [f64; 2] {
    let y = sigma * big_x.powf(1.5);
    let e3 = -2.0 * n * y - e5 * big_x;
    let e2 = (e3 * e5 - (4.0 * n * e4 - e5 * e5) * big_x - 6.0 * n * m * big_x * big_x) / (2.0 * n);
    [e2, e3]
}

/// Double root of the biaxial quadratic, if `m ≠ 0`: `(X*, e₂(e₃))`.
fn b1_root(e4: f64, e5: f64, m: f64, n: f64) -> Option<f64> {
    let b = 4.0 * n * e4 - e5 * e5;
    let x = -b / (12.0 * n * m);
    (m != 0.0 && x > 0.0).then_some(x)
}

fn b1_e2(e3: f64, e4: f64, e5: f64, m: f64, n: f64) -> f64 {
    let b = 4.0 * n * e4 - e5 * e5;
    (b * b / (24.0 * n * m) + e3 * e5) / (2.0 * n)
}

/// `B₀` branches for `σ_Y = ±1` over `X ∈ X_range`, then the `B₁` segment
/// when it exists.
pub fn bluebird_section(
    e4: f64,
    e5: f64,
    m: f64,
    n: f64,
    x_range: (f64, f64),
    samples: usize,
) -> Result<Vec<BifurcationCurve>, CritError> {
    if n == 0.0 {
        return Err(CritError::NZero);
    }
    let fixed = [e4, e5, m, n];
    let lo = x_range.0.max(0.0);
    let mut out = Vec::new();
    for sigma in [1i8, -1] {
        let params: Vec<f64> = linspace(lo, x_range.1, samples).collect();
        let points = params.iter().map(|&x| b0_point(e4, e5, m, n, x, sigma as f64)).collect();
        out.push(BifurcationCurve { kind: CurveKind::BluebirdB0, params, points, fixed, branch: sigma, cusps: vec![] });
    }
    if let Some(xs) = b1_root(e4, e5, m, n) {
        let half = 2.0 * n.abs() * xs.powf(1.5);
        let centre = -e5 * xs;
        let params: Vec<f64> = linspace(centre - half, centre + half, samples).collect();
        let points = params.iter().map(|&e3| [b1_e2(e3, e4, e5, m, n), e3]).collect();
        out.push(BifurcationCurve { kind: CurveKind::BluebirdB1, params, points, fixed, branch: 0, cusps: vec![] });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactReport {
    pub e2: f64,
    pub e3: f64,
    /// Parameter on `S` (double root `x`).
    pub x: f64,
    pub other: CurveKind,
    /// Angle between the tangent lines, in `[0, π/2]`.
    pub angle: f64,
    /// `max(|F|, |F′|)` at `x`.
    pub axis_residual: f64,
    /// Residual of the biaxial equation at `X = x²`, `Y = x³`; NaN for
    /// transversal crossings.
    pub biaxial_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangencyReport {
    pub contacts: Vec<ContactReport>,
    pub transversal: Vec<ContactReport>,
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn line_angle(a: [f64; 2], b: [f64; 2]) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    cross.abs().atan2(dot.abs())
}

/// Central difference with one Richardson step.
fn tangent(f: &dyn Fn(f64) -> [f64; 2], t: f64) -> [f64; 2] {
    let d = |h: f64| {
        let (a, b) = (f(t + h), f(t - h));
        [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h)]
    };
    let h = 1e-4 * (1.0 + t.abs());
    let (d1, d2) = (d(h), d(h / 2.0));
    [(4.0 * d2[0] - d1[0]) / 3.0, (4.0 * d2[1] - d1[1]) / 3.0]
}

fn bisect_fn(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Contacts of `S` with `B₀` where a biaxial orbit is born at a uniaxial
/// fold, and the transversal crossings of `S` with `B₀` and `B₁`.
pub fn tangency_check(e4: f64, e5: f64, m: f64, n: f64) -> Result<TangencyReport, CritError> {
    if e4 >= 0.0 {
        return Err(CritError::Unsupported("tangency_check needs e4 < 0"));
    }
    if n == 0.0 {
        return Err(CritError::NZero);
    }
    if m + n == 0.0 {
        return Err(CritError::MPlusNZero);
    }
    let g = g_poly(e4, e5, m, n);
    let s_curve = |x: f64| swallowtail_point(&g, x);
    let b0_of_x = |x: f64| b0_point(e4, e5, m, n, x * x, x.signum());
    let fprime_on_b0 = |x: f64| {
        let [e2, e3] = b0_of_x(x);
        let p = NormalFormParams::new(e2, e3, e4, e5, m, n);
        roots::eval(&roots::derivative(&p.axis_poly()), x)
    };
    let report = |x: f64, pt: [f64; 2], other: CurveKind, tb: [f64; 2], tb_is_contact: bool| {
        let p = NormalFormParams::new(pt[0], pt[1], e4, e5, m, n);
        let f = p.axis_poly();
        let axis = roots::eval(&f, x).abs().max(roots::eval(&roots::derivative(&f), x).abs());
        let bres = match other {
            CurveKind::BluebirdB0 if tb_is_contact => roots::eval(&p.biaxial_poly(), x * x).abs(),
            _ => f64::NAN,
        };
        ContactReport {
            e2: pt[0],
            e3: pt[1],
            x,
            other,
            angle: line_angle(tangent(&s_curve, x), tb),
            axis_residual: axis,
            biaxial_residual: bres,
        }
    };

    // Scale of the picture: the B₁ double root, or the S cusps.
    let scale = (e4.abs() / (m + n).abs()).sqrt().max(e5.abs() / (m + n).abs()) * 4.0;
    let samples = 4001;
    let grid: Vec<f64> = linspace(-scale, scale, samples).collect();

    let mut contacts = Vec::new();
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == 0.0 || b == 0.0 || a.signum() != b.signum() {
            continue;
        }
        if (fprime_on_b0(a) < 0.0) != (fprime_on_b0(b) < 0.0) {
            let x = bisect_fn(&fprime_on_b0, a, b);
            let pt = b0_of_x(x);
            let tb = tangent(&b0_of_x, x);
            contacts.push(report(x, pt, CurveKind::BluebirdB0, tb, true));
        }
    }

    let mut transversal = Vec::new();
    let s_pts: Vec<[f64; 2]> = grid.iter().map(|&x| s_curve(x)).collect();
    let b_curves = bluebird_section(e4, e5, m, n, (0.0, scale * scale), samples)?;
    for bc in &b_curves {
        for i in 0..s_pts.len() - 1 {
            for j in 0..bc.points.len() - 1 {
                let Some((s, t, _)) = segment_hit(s_pts[i], s_pts[i + 1], bc.points[j], bc.points[j + 1]) else {
                    continue;
                };
                let xs = grid[i] + s * (grid[i + 1] - grid[i]);
                let tb = bc.params[j] + t * (bc.params[j + 1] - bc.params[j]);
                let bfun: Box<dyn Fn(f64) -> [f64; 2]> = match bc.kind {
                    CurveKind::BluebirdB1 => Box::new(move |e3| [b1_e2(e3, e4, e5, m, n), e3]),
                    _ => {
                        let sg = bc.branch as f64;
                        Box::new(move |bx| b0_point(e4, e5, m, n, bx, sg))
                    }
                };
                let (xs, tb) = refine_intersection(&s_curve, &*bfun, xs, tb);
                if !(xs.is_finite() && tb.is_finite()) || dist(s_curve(xs), bfun(tb)) > 1e-9 {
                    continue;
                }
                if transversal.iter().any(|c: &ContactReport| c.other == bc.kind && (c.x - xs).abs() < 1e-9) {
                    continue;
                }
                if contacts.iter().any(|c: &ContactReport| (c.x - xs).abs() < 1e-3 * scale) {
                    continue;
                }
                let pt = s_curve(xs);
                transversal.push(report(xs, pt, bc.kind, tangent(&*bfun, tb), false));
            }
        }
    }
    Ok(TangencyReport { contacts, transversal })
}

/// Newton on `S(s) − B(t) = 0`.
fn refine_intersection(
    sf: &dyn Fn(f64) -> [f64; 2],
    bf: &dyn Fn(f64) -> [f64; 2],
    mut s: f64,
    mut t: f64,
) -> (f64, f64) {
    for _ in 0..30 {
        let (a, b) = (sf(s), bf(t));
        let r = [a[0] - b[0], a[1] - b[1]];
        let ds = tangent(sf, s);
        let dt = tangent(bf, t);
        let det = -ds[0] * dt[1] + ds[1] * dt[0];
        if det == 0.0 {
            break;
        }
        let step_s = (-r[0] * dt[1] + r[1] * dt[0]) / det;
        let step_t = (ds[0] * r[1] - ds[1] * r[0]) / det;
        s -= step_s;
        t -= step_t;
        if step_s.abs().max(step_t.abs()) < 1e-15 {
            break;
        }
    }
    (s, t)
}
