//! Critical points of `q_e` by grid seeding and Newton iteration on the
//! expanded polynomial in `(x, u)`. Shares no code with the structured
//! solver beyond the parameter record.

use rayon::prelude::*;

use crate::NormalFormParams;

const DEG: usize = 9;

/// Dense coefficient table, `c[i][j]` multiplies `xⁱuʲ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2 {
    c: [[f64; DEG]; DEG],
}

impl Poly2 {
    fn zero() -> Self {
        Self { c: [[0.0; DEG]; DEG] }
    }

    fn mono(a: f64, i: usize, j: usize) -> Self {
        let mut p = Self::zero();
        p.c[i][j] = a;
        p
    }

    fn add(&self, o: &Self, scale: f64) -> Self {
        let mut p = self.clone();
        for i in 0..DEG {
            for j in 0..DEG {
                p.c[i][j] += scale * o.c[i][j];
            }
        }
        p
    }

    fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for i in 0..DEG {
            for j in 0..DEG {
                if self.c[i][j] == 0.0 {
                    continue;
                }
                for k in 0..DEG - i {
                    for l in 0..DEG - j {
                        p.c[i + k][j + l] += self.c[i][j] * o.c[k][l];
                    }
                }
            }
        }
        p
    }

    pub fn expand(p: &NormalFormParams) -> Self {
        let x = Self::mono(1.0, 2, 0).add(&Self::mono(1.0, 0, 2), 1.0);
        let y = Self::mono(1.0, 3, 0).add(&Self::mono(-3.0, 1, 2), 1.0);
        let x2 = x.mul(&x);
        let x3 = x2.mul(&x);
        Self::zero()
            .add(&x, p.e2)
            .add(&y, p.e3)
            .add(&x2, p.e4)
            .add(&x.mul(&y), p.e5)
            .add(&x3, p.m + p.e6)
            .add(&x3.mul(&x), p.e8)
            .add(&y.mul(&y), p.n)
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.c[i][j]
    }

    /// Value, gradient and Hessian.
    pub fn jet(&self, x: f64, u: f64) -> (f64, [f64; 2], [[f64; 2]; 2]) {
        let mut xp = [1.0; DEG];
        let mut up = [1.0; DEG];
        for k in 1..DEG {
            xp[k] = xp[k - 1] * x;
            up[k] = up[k - 1] * u;
        }
        let (mut v, mut g, mut h) = (0.0, [0.0; 2], [[0.0; 2]; 2]);
        for i in 0..DEG {
            for j in 0..DEG - i {
                let a = self.c[i][j];
                if a == 0.0 {
                    continue;
                }
                let (fi, fj) = (i as f64, j as f64);
                v += a * xp[i] * up[j];
                if i >= 1 {
                    g[0] += a * fi * xp[i - 1] * up[j];
                }
                if j >= 1 {
                    g[1] += a * fj * xp[i] * up[j - 1];
                }
                if i >= 2 {
                    h[0][0] += a * fi * (fi - 1.0) * xp[i - 2] * up[j];
                }
                if j >= 2 {
                    h[1][1] += a * fj * (fj - 1.0) * xp[i] * up[j - 2];
                }
                if i >= 1 && j >= 1 {
                    h[0][1] += a * fi * fj * xp[i - 1] * up[j - 1];
                }
            }
        }
        h[1][0] = h[0][1];
        (v, g, h)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteOptions {
    /// Grid points per side of the square `[−R, R]²`.
    pub grid: usize,
    pub radius: f64,
    /// Seed Newton from every grid point, not only from local minima of
    /// `|∇q|²`.
    pub seed_all: bool,
    pub merge_tol: f64,
}

impl Default for BruteOptions {
    fn default() -> Self {
        Self { grid: 121, radius: 2.0, seed_all: true, merge_tol: 1e-6 }
    }
}

fn newton(poly: &Poly2, mut x: f64, mut u: f64) -> Option<[f64; 2]> {
    for _ in 0..100 {
        let (_, g, h) = poly.jet(x, u);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (h[1][1] * g[0] - h[0][1] * g[1]) / det;
        let du = (h[0][0] * g[1] - h[1][0] * g[0]) / det;
        x -= dx;
        u -= du;
        if !(x.is_finite() && u.is_finite()) || x.hypot(u) > 1e3 {
            return None;
        }
        if dx.hypot(du) < 1e-15 * (1.0 + x.hypot(u)) {
            break;
        }
    }
    let (_, g, _) = poly.jet(x, u);
    (g[0].hypot(g[1]) < 1e-9).then_some([x, u])
}

/// Critical points of `q_e` inside the disc of radius `opts.radius`.
pub fn brute_force_critical_points(p: &NormalFormParams, opts: &BruteOptions) -> Vec<[f64; 2]> {
    let poly = Poly2::expand(p);
    let n = opts.grid;
    let step = 2.0 * opts.radius / (n - 1) as f64;
    let coord = |k: usize| -opts.radius + step * k as f64;
    let g2: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (_, g, _) = poly.jet(coord(k / n), coord(k % n));
            g[0] * g[0] + g[1] * g[1]
        })
        .collect();
    let seeds: Vec<(usize, usize)> = (0..n * n)
        .filter_map(|k| {
            let (i, j) = (k / n, k % n);
            if opts.seed_all {
                return Some((i, j));
            }
            let v = g2[k];
            let lo_i = i.saturating_sub(1);
            let lo_j = j.saturating_sub(1);
            for a in lo_i..=(i + 1).min(n - 1) {
                for b in lo_j..=(j + 1).min(n - 1) {
                    if (a, b) != (i, j) && g2[a * n + b] < v {
                        return None;
                    }
                }
            }
            Some((i, j))
        })
        .collect();
    let found: Vec<[f64; 2]> =
        seeds.par_iter().filter_map(|&(i, j)| newton(&poly, coord(i), coord(j))).collect();
    let mut out: Vec<[f64; 2]> = Vec::new();
    merge(&mut out, found, opts);

    // Points closer together than the grid spacing: zoom in around every
    // point found so far with a finer local grid.
    let mut h = step;
    while h > 1e-7 {
        let r = 2.0 * h;
        h = r / 10.0;
        let centres = out.clone();
        let local: Vec<[f64; 2]> = centres
            .par_iter()
            .flat_map_iter(|c| local_minima(&poly, *c, r, 21))
            .filter_map(|s| newton(&poly, s[0], s[1]))
            .collect();
        merge(&mut out, local, opts);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

fn merge(out: &mut Vec<[f64; 2]>, found: Vec<[f64; 2]>, opts: &BruteOptions) {
    for pt in found {
        if pt[0].hypot(pt[1]) > opts.radius {
            continue;
        }
        if !out.iter().any(|q| (q[0] - pt[0]).hypot(q[1] - pt[1]) < opts.merge_tol) {
            out.push(pt);
        }
    }
}

/// Strict local minima of `|∇q|²` on a `k × k` grid of half-width `r`.
fn local_minima(poly: &Poly2, c: [f64; 2], r: f64, k: usize) -> Vec<[f64; 2]> {
    let h = 2.0 * r / (k - 1) as f64;
    let at = |i: usize, j: usize| [c[0] - r + h * i as f64, c[1] - r + h * j as f64];
    let g2: Vec<f64> = (0..k * k)
        .map(|idx| {
            let p = at(idx / k, idx % k);
            let (_, g, _) = poly.jet(p[0], p[1]);
            g[0] * g[0] + g[1] * g[1]
        })
        .collect();
    let mut out = Vec::new();
    for i in 1..k - 1 {
        for j in 1..k - 1 {
            let v = g2[i * k + j];
            let is_min = (i - 1..=i + 1)
                .flat_map(|a| (j - 1..=j + 1).map(move |b| (a, b)))
                .all(|(a, b)| (a, b) == (i, j) || g2[a * k + b] >= v);
            if is_min {
                out.push(at(i, j));
            }
        }
    }
    out
}
