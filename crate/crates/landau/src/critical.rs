use groupact::{d3tilde_elements, left_d3_elements, OrthogonalElement};
use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use polyser::{Coeff, TruncSeries};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Dense evaluator for a polynomial in four variables.
#[derive(Clone, Debug)]
struct Poly4 {
    terms: Vec<([usize; 4], f64)>,
    max_exp: usize,
}

impl Poly4 {
    fn new(p: &TruncSeries<f64>) -> Self {
        let terms: Vec<([usize; 4], f64)> = p
            .terms()
            .filter(|(_, c)| **c != 0.0)
            .map(|(m, c)| ([m[0] as usize, m[1] as usize, m[2] as usize, m[3] as usize], *c))
            .collect();
        let max_exp = terms.iter().flat_map(|(m, _)| m.iter().copied()).max().unwrap_or(0);
        Self { terms, max_exp }
    }

    fn eval_with(&self, pw: &[Vec<f64>; 4]) -> f64 {
        self.terms.iter().map(|(m, c)| c * pw[0][m[0]] * pw[1][m[1]] * pw[2][m[2]] * pw[3][m[3]]).sum()
    }
}

fn powers(x: &Vector4<f64>, k: usize) -> [Vec<f64>; 4] {
    std::array::from_fn(|i| {
        let mut v = Vec::with_capacity(k + 1);
        let mut a = 1.0;
        for _ in 0..=k {
            v.push(a);
            a *= x[i];
        }
        v
    })
}

/// Gradient and Hessian of one polynomial, precompiled.
#[derive(Clone, Debug)]
struct Derivs {
    value: Poly4,
    grad: Vec<Poly4>,
    hess: Vec<Vec<Poly4>>,
    k: usize,
}

impl Derivs {
    fn new(f: &TruncSeries<f64>) -> Self {
        let g: Vec<TruncSeries<f64>> = f.gradient();
        let hess = g.iter().map(|gi| gi.gradient().iter().map(Poly4::new).collect()).collect();
        let value = Poly4::new(f);
        let k = value.max_exp.max(1);
        Self { value, grad: g.iter().map(Poly4::new).collect(), hess, k }
    }

    fn value(&self, x: &Vector4<f64>) -> f64 {
        self.value.eval_with(&powers(x, self.k))
    }

    fn gradient(&self, x: &Vector4<f64>) -> Vector4<f64> {
        let pw = powers(x, self.k);
        Vector4::from_fn(|i, _| self.grad[i].eval_with(&pw))
    }

    fn hessian(&self, x: &Vector4<f64>) -> Matrix4<f64> {
        let pw = powers(x, self.k);
        Matrix4::from_fn(|i, j| self.hess[i][j].eval_with(&pw))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Seeds fill the cube `[−r, r]⁴`.
    pub search_radius: f64,
    /// Seeds per axis.
    pub grid_n: usize,
    /// Newton tolerance on the gradient norm; points within `10·tol`
    /// (relative) are identified.
    pub tol: f64,
    pub max_iter: usize,
    /// Hessian eigenvalues below this (relative to the largest, floor 1)
    /// mark a point as degenerate.
    pub degeneracy_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { search_radius: 1.0, grid_n: 9, tol: 1e-9, max_iter: 200, degeneracy_tol: 1e-7 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointTag {
    Isotropic,
    Uniaxial,
    Biaxial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointRecord {
    pub location: [f64; 4],
    pub value: f64,
    pub gradient_norm: f64,
    pub morse_index: u8,
    pub hessian_eigenvalues: [f64; 4],
    pub orbit_id: usize,
    pub tag: PointTag,
}

/// Critical points with a singular Hessian, grouped by value and kernel
/// dimension. Continua are reported here rather than as isolated points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerateComponent {
    pub value: f64,
    pub kernel_dim: usize,
    pub samples: usize,
    pub representative: [f64; 4],
    /// Range of `|W|²` over the samples.
    pub norm_sq_range: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalSet {
    pub points: Vec<CriticalPointRecord>,
    pub degenerate: Vec<DegenerateComponent>,
    pub seeds: usize,
    pub failed_seeds: usize,
    /// Labels of the group elements leaving the free energy invariant.
    pub symmetry: Vec<String>,
}

impl CriticalSet {
    pub fn orbit_count(&self) -> usize {
        self.points.iter().map(|p| p.orbit_id + 1).max().unwrap_or(0)
    }

    pub fn count(&self, tag: PointTag) -> usize {
        self.points.iter().filter(|p| p.tag == tag).count()
    }
}

fn to_matrix(g: &OrthogonalElement) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| g.matrix[i][j].to_f64())
}

/// The elements of the 72-element group under which `f` is invariant,
/// up to `tol` on every coefficient.
pub fn symmetry_subgroup(f: &TruncSeries<f64>, tol: f64) -> Vec<(Matrix4<f64>, String)> {
    let scale = f.terms().map(|(_, c)| c.abs()).fold(1.0, f64::max);
    d3tilde_elements()
        .expect("group closure")
        .into_iter()
        .filter(|g| {
            let img = g.linear_images::<f64>(f.cap(), |c| c.to_f64());
            let moved = f.substitute(&img).expect("linear substitution");
            (&moved - f).terms().all(|(_, c)| c.abs() <= tol * scale)
        })
        .map(|g| (to_matrix(&g), g.label))
        .collect()
}

fn newton(d: &Derivs, x0: Vector4<f64>, opt: &SolverOptions) -> Option<Vector4<f64>> {
    let limit = 4.0 * opt.search_radius;
    let mut x = x0;
    let mut g = d.gradient(&x);
    let mut gn = g.norm();
    for _ in 0..opt.max_iter {
        if gn < opt.tol {
            return Some(x);
        }
        let h = d.hessian(&x);
        let step = h.svd(true, true).solve(&g, 1e-14).ok()?;
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let xn = x - step * t;
            let gnew = d.gradient(&xn);
            if gnew.norm() < gn {
                x = xn;
                g = gnew;
                gn = g.norm();
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved || x.norm() > limit {
            return if gn < opt.tol { Some(x) } else { None };
        }
    }
    (gn < opt.tol).then_some(x)
}

/// One more full Newton step from a converged point, to push the residual
/// down to round-off.
fn polish(d: &Derivs, x: Vector4<f64>) -> Vector4<f64> {
    let g = d.gradient(&x);
    match d.hessian(&x).svd(true, true).solve(&g, 1e-14) {
        Ok(step) => {
            let xn = x - step;
            if d.gradient(&xn).norm() <= g.norm() {
                xn
            } else {
                x
            }
        }
        Err(_) => x,
    }
}

fn seed_grid(opt: &SolverOptions) -> Vec<Vector4<f64>> {
    let n = opt.grid_n.max(1);
    let r = opt.search_radius;
    let coord = |k: usize| if n == 1 { 0.0 } else { -r + 2.0 * r * k as f64 / (n - 1) as f64 };
    let mut seeds = Vec::with_capacity(n.pow(4));
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    seeds.push(Vector4::new(coord(a), coord(b), coord(c), coord(e)));
                }
            }
        }
    }
    seeds
}

fn push_unique(list: &mut Vec<Vector4<f64>>, x: Vector4<f64>, tol: f64) -> bool {
    if list.iter().any(|y| (y - x).norm() <= tol * (1.0 + x.norm())) {
        return false;
    }
    list.push(x);
    true
}

fn lex_key(x: &Vector4<f64>) -> (i64, [i64; 4]) {
    let q = |v: f64| (v * 1e9).round() as i64;
    (q(x.norm_squared()), [q(x[0]), q(x[1]), q(x[2]), q(x[3])])
}

/// Critical points of the polynomial `f` on `ℝ⁴` by damped Newton from a
/// seed grid, completed to full orbits of the symmetry group of `f`.
pub fn critical_points_4d(f: &TruncSeries<f64>, opt: &SolverOptions) -> CriticalSet {
    let d = Derivs::new(f);
    let seeds = seed_grid(opt);
    let results: Vec<Option<Vector4<f64>>> = seeds.par_iter().map(|s| newton(&d, *s, opt)).collect();
    let failed_seeds = results.iter().filter(|r| r.is_none()).count();
    let dedup = 10.0 * opt.tol;

    let mut found: Vec<Vector4<f64>> = vec![Vector4::zeros()];
    for x in results.into_iter().flatten() {
        push_unique(&mut found, polish(&d, x), dedup);
    }

    let sym = symmetry_subgroup(f, 1e-12);
    let is_degenerate = |x: &Vector4<f64>| -> (bool, SymmetricEigen<f64, nalgebra::U4>) {
        let e = d.hessian(x).symmetric_eigen();
        let big = e.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        (e.eigenvalues.iter().any(|v| v.abs() < opt.degeneracy_tol * big), e)
    };

    let (mut regular, mut singular): (Vec<_>, Vec<_>) = found.into_iter().partition(|x| !is_degenerate(x).0);

    // complete orbits
    let mut complete: Vec<Vector4<f64>> = Vec::new();
    for x in &regular {
        for (g, _) in &sym {
            let y = polish(&d, g * x);
            if d.gradient(&y).norm() < opt.tol {
                push_unique(&mut complete, y, dedup);
            }
        }
        push_unique(&mut complete, *x, dedup);
    }
    regular = complete;
    regular.sort_by_key(lex_key);

    let reflections: Vec<Matrix4<f64>> = left_d3_elements()
        .iter()
        .map(to_matrix)
        .filter(|m| (m * m - Matrix4::identity()).norm() < 1e-12 && (m - Matrix4::identity()).norm() > 1e-6)
        .collect();

    let mut orbit_of: Vec<Option<usize>> = vec![None; regular.len()];
    let mut next_orbit = 0;
    for i in 0..regular.len() {
        if orbit_of[i].is_some() {
            continue;
        }
        orbit_of[i] = Some(next_orbit);
        for (g, _) in &sym {
            let y = g * regular[i];
            for j in i + 1..regular.len() {
                if orbit_of[j].is_none() && (regular[j] - y).norm() <= dedup * (1.0 + y.norm()) {
                    orbit_of[j] = Some(next_orbit);
                }
            }
        }
        next_orbit += 1;
    }

    let points = regular
        .iter()
        .zip(&orbit_of)
        .map(|(x, o)| {
            let (_, e) = is_degenerate(x);
            let mut ev: Vec<f64> = e.eigenvalues.iter().copied().collect();
            ev.sort_by(|a, b| a.total_cmp(b));
            let tag = if x.norm() <= dedup {
                PointTag::Isotropic
            } else if reflections.iter().any(|r| (r * x - x).norm() <= dedup * (1.0 + x.norm())) {
                PointTag::Uniaxial
            } else {
                PointTag::Biaxial
            };
            CriticalPointRecord {
                location: [x[0], x[1], x[2], x[3]],
                value: d.value(x),
                gradient_norm: d.gradient(x).norm(),
                morse_index: ev.iter().filter(|v| **v < 0.0).count() as u8,
                hessian_eigenvalues: [ev[0], ev[1], ev[2], ev[3]],
                orbit_id: o.unwrap(),
                tag,
            }
        })
        .collect();

    singular.sort_by_key(lex_key);
    let mut degenerate: Vec<DegenerateComponent> = Vec::new();
    for x in &singular {
        let (_, e) = is_degenerate(x);
        let big = e.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let kernel_dim = e.eigenvalues.iter().filter(|v| v.abs() < opt.degeneracy_tol * big).count();
        let value = d.value(x);
        let n2 = x.norm_squared();
        match degenerate
            .iter_mut()
            .find(|c| c.kernel_dim == kernel_dim && (c.value - value).abs() <= 1e-8 * (1.0 + value.abs()))
        {
            Some(c) => {
                c.samples += 1;
                c.norm_sq_range = [c.norm_sq_range[0].min(n2), c.norm_sq_range[1].max(n2)];
            }
            None => degenerate.push(DegenerateComponent {
                value,
                kernel_dim,
                samples: 1,
                representative: [x[0], x[1], x[2], x[3]],
                norm_sq_range: [n2, n2],
            }),
        }
    }

    CriticalSet {
        points,
        degenerate,
        seeds: seeds.len(),
        failed_seeds,
        symmetry: sym.into_iter().map(|(_, l)| l).collect(),
    }
}
