//! Acceptance suite: twelve numbered criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so that the lines are always printed.
//! The process fails if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use critpoints::{
    brute_force_critical_points, critical_set, locate_transition, region_census, roots, swallowtail_section,
    tangency_check, BruteOptions, CensusGrid, Counts, NormalFormParams,
};
use groupact::{d3_elements, d3tilde_elements, d3xd3_elements, molien_finite, molien_rational, molien_so3_conjugacy};
use invariants::{eval_basis_r4, LandauCoeffs, OrderParams};
use kkls_entropy::{degree5_report, kkls_coefficients, HaarQuadrature, C6, DEFAULT_GRID};
use landau::{
    coeffs_from_t_lambda, cone_point, critical_points_4d, free_energy, hamiltonian_matrix, solve_fixed_point,
    stability_classify, SolverOptions, Stability,
};
use nalgebra::Vector4;
use polyser::{rat, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use reduction::verify_reduction;
use singtools::{
    case_representatives, classify_case, versal_check, w0_equality, Mono, WeightedPoly, F6_UNFOLDING,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, secs: f64) -> bool {
    elapsed.as_secs_f64() < secs
}

// 1 ----------------------------------------------------------------------

fn molien_exactness() -> Outcome {
    let start = Instant::now();
    let g72 = d3tilde_elements().unwrap();
    let g36 = d3xd3_elements().unwrap();
    let a = molien_finite(&g72, 12).unwrap() == molien_rational(&[0, 5], &[2, 3, 4, 6], 12);
    let b = molien_finite(&g36, 12).unwrap() == molien_rational(&[0, 5, 6, 11], &[2, 3, 4, 6], 12);
    let c = molien_finite(&d3_elements(), 12).unwrap() == molien_rational(&[0], &[2, 3], 12);
    let t = start.elapsed();
    outcome(
        a && b && c && within(t, 1.0) && g72.len() == 72 && g36.len() == 36,
        format!("72-group {a}, 36-group {b}, D3 {c}, {:.3} s", t.as_secs_f64()),
    )
}

// 2 ----------------------------------------------------------------------

fn so3_molien() -> Outcome {
    let start = Instant::now();
    let q = molien_so3_conjugacy(10, None).unwrap();
    let t = start.elapsed();
    let exact = q.series == molien_rational(&[0], &[2, 3], 10);
    outcome(
        exact && q.max_residual < 1e-8 && within(t, 1.0),
        format!("series match {exact}, rounding residual {:.1e}, {:.3} s", q.max_residual, t.as_secs_f64()),
    )
}

// 3 ----------------------------------------------------------------------

fn entropy_coefficients() -> Outcome {
    let start = Instant::now();
    let c = kkls_coefficients(&HaarQuadrature::euler_product(DEFAULT_GRID)).unwrap();
    let t = start.elapsed();
    let a3 = (c.a3p - 25.0 / 21.0).abs() < 1e-9;
    let d4 = (c.a4p.abs() - 125.0 / 784.0).abs() < 1e-9 && (c.b4p.abs() - 425.0 / 196.0).abs() < 1e-9;
    let six = [c.a6p, c.b6p, c.c6p, c.d6p];
    let d6_dec = six.iter().zip([0.53, 3.92, 0.91, 0.77]).all(|(g, e)| (g.abs() - e).abs() < 5e-3);
    let d6_exact = six.iter().zip([419600.0, 3099312.0, 716640.0, 612405.0]).all(|(g, k)| (g.abs() - k * C6).abs() < 1e-8);
    let d5 = (c.a5p.abs() - 1.73).abs() < 5e-3 && (c.b5p.abs() - 6.87).abs() < 5e-3;
    let rep = degree5_report(&c, 5e-3);
    outcome(
        a3 && d4 && d6_dec && d6_exact && d5 && within(t, 60.0),
        format!(
            "a3' {a3}, degree 4 {d4}, degree 6 decimals {d6_dec}, degree 6 exact {d6_exact}, \
             degree 5 decimals {d5} (quadrature gives a5' = {:.6}, b5' = {:.6} = C6·({:.1}, {:.1}); \
             matches -840·C6 prefactor {}, matches -840·13·C6 prefactor {}), {:.2} s",
            c.a5p,
            c.b5p,
            rep.over_c6[0],
            rep.over_c6[1],
            rep.matches_840,
            rep.matches_840x13,
            t.as_secs_f64()
        ),
    )
}

// 4 ----------------------------------------------------------------------

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=7))
}

/// A rational point of the unit circle from a Pythagorean triple.
fn random_angle(rng: &mut ChaCha8Rng) -> (Rat, Rat) {
    let m: i64 = rng.gen_range(1..=9);
    let n: i64 = rng.gen_range(0..=9);
    let h = m * m + n * n;
    let (mut c, mut s) = (rat(m * m - n * n, h), rat(2 * m * n, h));
    if rng.gen_bool(0.5) {
        c = -c;
    }
    if rng.gen_bool(0.5) {
        s = -s;
    }
    if rng.gen_bool(0.5) {
        std::mem::swap(&mut c, &mut s);
    }
    (c, s)
}

fn reduction_trial(seed: u64) -> (LandauCoeffs<Rat>, Rat, Rat) {
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
    let (c, s) = random_angle(&mut rng);
    let mut mu = random_rat(&mut rng);
    if mu == rat(0, 1) {
        mu = rat(3, 2);
    }
    let two_mu = mu * rat(2, 1);
    let mut v: Vec<Rat> = (0..12).map(|_| random_rat(&mut rng)).collect();
    v[0] = &two_mu * &c * &c;
    v[1] = &two_mu * &s * &s;
    v[2] = &two_mu * &s * &c;
    (LandauCoeffs::from_vec(v), c, s)
}

fn reduction_exactness() -> Outcome {
    let start = Instant::now();
    let reports: Vec<_> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let (lc, c, s) = reduction_trial(seed);
            verify_reduction(&lc, &c, &s).unwrap()
        })
        .collect();
    let t = start.elapsed();
    let mixed5 = reports.iter().filter(|r| r.max_mixed_coeff == 0.0).count();
    let printed = reports.iter().filter(|r| r.printed_match_error == 0.0).count();
    let mixed4 = reports.iter().filter(|r| r.max_mixed_through_4 == 0.0).count();
    let corrected = reports.iter().filter(|r| r.residual_match_error == 0.0).count();
    outcome(
        mixed5 == 100 && printed == 100 && within(t, 30.0),
        format!(
            "zero mixed terms through degree 5 in {mixed5}/100, printed residual map exact in {printed}/100 \
             (through degree 4: {mixed4}/100 zero; corrected map exact in {corrected}/100), {:.2} s",
            t.as_secs_f64()
        ),
    )
}

// 5 ----------------------------------------------------------------------

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let opts = BruteOptions::default();
    let mut bad = Vec::new();
    let mut total = 0;
    for draw in 0..200 {
        let mut r = || rng.gen_range(-1.0..1.0);
        let p = NormalFormParams { e2: r(), e3: r(), e4: r(), e5: r(), e6: r(), e8: 0.0, m: 1.0, n: 1.0 };
        let solver: Vec<[f64; 2]> = critical_set(&p)
            .unwrap()
            .iter()
            .map(|c| [c.x, c.u])
            .filter(|c| c[0].hypot(c[1]) <= opts.radius)
            .collect();
        let brute = brute_force_critical_points(&p, &opts);
        total += solver.len();
        let ok = solver.len() == brute.len()
            && solver.iter().all(|a| brute.iter().any(|b| (a[0] - b[0]).hypot(a[1] - b[1]) < 1e-8));
        if !ok {
            bad.push(draw);
        }
    }
    let t = start.elapsed();
    outcome(
        bad.is_empty() && within(t, 60.0),
        format!("{} of 200 draws match ({total} points), mismatches {bad:?}, {:.2} s", 200 - bad.len(), t.as_secs_f64()),
    )
}

// 6 ----------------------------------------------------------------------

fn nf(e2: f64, e3: f64, e4: f64, e5: f64, m: f64, n: f64) -> NormalFormParams {
    NormalFormParams::new(e2, e3, e4, e5, m, n)
}

fn in_triangle(p: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    let cross = |o: [f64; 2], u: [f64; 2], v: [f64; 2]| (u[0] - o[0]) * (v[1] - o[1]) - (u[1] - o[1]) * (v[0] - o[0]);
    let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
    (d1 > 0.0 && d2 > 0.0 && d3 > 0.0) || (d1 < 0.0 && d2 < 0.0 && d3 < 0.0)
}

fn census_landmarks() -> Outcome {
    let (e4, m, n) = (-1.0, 1.0, 1.0);
    let s = swallowtail_section(e4, 0.0, m, n, (-1.5, 1.5), 4001).unwrap();
    let crossings = s.self_crossings();
    if s.cusps.len() != 2 || crossings.is_empty() {
        return outcome(false, format!("swallowtail triangle not found: cusps {:?}, crossings {crossings:?}", s.cusps));
    }
    let (a, b, c) = (s.cusps[0], s.cusps[1], crossings[0]);
    let lo = [a[0].min(b[0]).min(c[0]), a[1].min(b[1]).min(c[1])];
    let hi = [a[0].max(b[0]).max(c[0]), a[1].max(b[1]).max(c[1])];
    let grid = CensusGrid { e2_range: (lo[0], hi[0]), e3_range: (lo[1], hi[1]), n_e2: 41, n_e3: 41 };
    let cells = region_census(e4, 0.0, m, n, &grid).unwrap();
    // the cell nearest the centroid, away from the triangle's edges
    let g = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
    let hit = cells
        .iter()
        .filter(|k| in_triangle([k.e2, k.e3], a, b, c) && k.counts.total_critical_pts == 25)
        .min_by(|k, l| (k.e2 - g[0]).hypot(k.e3 - g[1]).total_cmp(&(l.e2 - g[0]).hypot(l.e3 - g[1])));
    let found = hit.is_some_and(|k| k.counts.uniaxial_pts == 12 && 6 * k.counts.biaxial_orbits == 12);

    // e4 > 0 slice at fixed e3, e2 decreasing: first S, then B
    let e3 = 0.1;
    let walk = move |e2: f64| nf(e2, e3, 0.5, 0.0, 1.0, 1.0);
    let mut seq = vec![Counts::of(&walk(1.0)).unwrap()];
    let mut edges = Vec::new();
    for k in 1..=400 {
        let (t0, t1) = (1.0 - 1.2 * (k - 1) as f64 / 400.0, 1.0 - 1.2 * k as f64 / 400.0);
        let cnt = Counts::of(&walk(t1)).unwrap();
        if cnt != *seq.last().unwrap() {
            seq.push(cnt);
            edges.push((t0, t1));
        }
    }
    let totals: Vec<usize> = seq.iter().map(|c| c.total_critical_pts).collect();
    let mut walk_ok = totals.len() >= 3 && totals[..3] == [1, 7, 13];
    if walk_ok {
        // first change is an axis fold (two new axis roots), second a biaxial birth
        let (t_s, before, after) = locate_transition(&walk, edges[0].0, edges[0].1, 1e-13).unwrap().unwrap();
        let f = walk(t_s).axis_poly();
        let fold = roots::real_roots(&roots::derivative(&f), 1e-13).iter().any(|&x| roots::eval(&f, x).abs() < 1e-8);
        walk_ok &= fold && after.axis_roots == before.axis_roots + 2 && after.biaxial_orbits == before.biaxial_orbits;
        let (_, before, after) = locate_transition(&walk, edges[1].0, edges[1].1, 1e-13).unwrap().unwrap();
        walk_ok &= after.biaxial_orbits == before.biaxial_orbits + 1 && after.axis_roots == before.axis_roots;
    }
    outcome(
        found && walk_ok,
        format!(
            "25-point cell in the triangle: {} ; e4 > 0 walk totals {:?} (S then B: {walk_ok})",
            hit.map_or("none".to_string(), |k| format!("({:.6}, {:.6}) {:?}", k.e2, k.e3, k.counts)),
            &totals[..totals.len().min(4)]
        ),
    )
}

// 7 ----------------------------------------------------------------------

fn b1_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    let mut all = true;
    for (e4, m, n, e3) in [(-1.0, 1.0, 1.0, 0.1), (-0.6, 2.0, 1.0, 0.0), (-0.3, 0.5, 2.0, -0.05), (-0.8, 1.5, 0.7, 0.02)] {
        let family = move |e2: f64| nf(e2, e3, e4, 0.0, m, n);
        let expect = e4 * e4 / (3.0 * m);
        match locate_transition(&family, expect - 0.005, expect + 0.005, 1e-12).unwrap() {
            Some((t, a, b)) => {
                worst = worst.max((t - expect).abs());
                all &= a.biaxial_orbits.abs_diff(b.biaxial_orbits) == 2;
            }
            None => all = false,
        }
    }
    outcome(all && worst < 1e-6, format!("max |e2 - e4²/(3m)| = {worst:.2e} over 4 slices"))
}

// 8 ----------------------------------------------------------------------

fn tangency() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for (e4, m, n) in [(-1.0, 1.0, 1.0), (-0.7, 2.0, 0.5)] {
        let rep = tangency_check(e4, 0.0, m, n).unwrap();
        let contact = rep.contacts.iter().map(|c| c.angle).fold(0.0, f64::max);
        let cross = rep.transversal.iter().map(|c| c.angle).fold(f64::INFINITY, f64::min);
        pass &= !rep.contacts.is_empty() && contact < 1e-3 && !rep.transversal.is_empty() && cross > 0.1;
        detail.push(format!("e4={e4} m={m} n={n}: contact angle {contact:.1e}, min crossing angle {cross:.3}"));
    }
    outcome(pass, detail.join("; "))
}

// 9 ----------------------------------------------------------------------

fn determinacy_suite() -> Outcome {
    let start = Instant::now();
    let verdicts: Vec<_> = case_representatives().iter().map(|h| classify_case(h).unwrap()).collect();
    let reproduced: Vec<bool> = verdicts.iter().map(|v| v.reproduced()).collect();
    let f6 = WeightedPoly::f6(rat(1, 1), rat(1, 1));
    let w0 = w0_equality(&f6.add(&WeightedPoly::from_ints(&[(4, 0, 1)])), &f6, 7, 14).unwrap();
    let f8 = &verdicts[6];
    let t = start.elapsed();
    outcome(
        reproduced.iter().all(|&r| r) && w0 && f8.verdict.holds_on_window && within(t, 5.0),
        format!(
            "cases reproduced {reproduced:?}, W0(f6+X^4) = W0(f6) on 7..14 {w0}, \
             f8 = X^4+XY^2 8-determined {} (first uncovered degree {:?}), {:.2} s",
            f8.verdict.holds_on_window,
            f8.verdict.witness.map(|w| w.0),
            t.as_secs_f64()
        ),
    )
}

// 10 ---------------------------------------------------------------------

fn versality() -> Outcome {
    let start = Instant::now();
    let f6 = WeightedPoly::f6(rat(1, 1), rat(1, 1));
    let full = versal_check(&f6, &F6_UNFOLDING, 16).versal;
    let mut breaks = Vec::new();
    for drop in [(2, 0), (3, 0), (4, 0)] {
        let rest: Vec<Mono> = F6_UNFOLDING.iter().copied().filter(|m| *m != drop).collect();
        breaks.push(versal_check(&f6, &rest, 16).first_failure.map(|f| f.0));
    }
    let y = versal_check(&WeightedPoly::y(), &[(0, 0), (1, 0)], 14).versal;
    let t = start.elapsed();
    outcome(
        full && breaks == [Some(4), Some(6), Some(8)] && y && within(t, 5.0),
        format!(
            "f6 family versal {full}, dropping X^2/X^3/X^4 breaks at {breaks:?}, h = Y with {{1, X}} versal {y}, {:.2} s",
            t.as_secs_f64()
        ),
    )
}

// 11 ---------------------------------------------------------------------

fn spanning() -> Outcome {
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut ranks = Vec::new();
    for seed in 0..3 {
        let r = groupact::spanning_check(30, seed).unwrap();
        pass &= r.linear_rank == 25 && r.affine_rank == 25 && r.identity_residual < 1e-12;
        worst = worst.max(r.identity_residual);
        ranks.push((r.linear_rank, r.affine_rank));
    }
    outcome(pass, format!("(linear, affine) ranks {ranks:?} for 3 seeds, identity residual {worst:.1e}"))
}

// 12 ---------------------------------------------------------------------

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pts: Vec<[f64; 4]> = (0..1000).map(|_| std::array::from_fn(|_| rng.gen_range(-2.0..2.0))).collect();

    let syz = pts.iter().all(|x| {
        let v = eval_basis_r4(&OrderParams::from_slice(x));
        v.syzygy().abs() <= 1e-12 * (v.f5 * v.f5 + (v.f4 * v.f6).abs()).max(f64::MIN_POSITIVE)
    });

    let group = d3tilde_elements().unwrap();
    let inv = pts.iter().all(|x| {
        let base = eval_basis_r4(&OrderParams::from_slice(x)).to_array();
        group.iter().all(|g| {
            let img = eval_basis_r4(&OrderParams::from_slice(&g.apply_f64(x))).to_array();
            base.iter().zip(&img).all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs()))
        })
    });

    let at_radius = |t: f64, u0: f64, xi: f64, r: f64| {
        let k = (2.0f64 / 3.0).sqrt();
        let l1 = 1.0 / 3.0 + r * k * (2.0 * xi + PI / 3.0).cos();
        let l2 = 1.0 / 3.0 + r * k * (2.0 * xi - PI / 3.0).cos();
        let (a, b, g) = coeffs_from_t_lambda(t, u0, [l1, l2, 1.0 - l1 - l2]);
        stability_classify(a, b, g)
    };
    let mut flips = true;
    for _ in 0..1000 {
        let u0 = rng.gen_range(1.0..10.0);
        let t = u0 / 10.0 * rng.gen_range(1.05..3.0);
        let xi = rng.gen_range(-PI..PI);
        let rt = (2.0f64 / 3.0).sqrt() * (10.0 * t / u0 - 1.0);
        flips &= at_radius(t, u0, xi, rt - 1e-10) == Stability::Stable;
        flips &= at_radius(t, u0, xi, rt + 1e-10) == Stability::Saddle22;
    }

    let quad = HaarQuadrature::euler_product(DEFAULT_GRID);
    let entropy = kkls_coefficients(&quad).unwrap();
    let cone = cone_point(1.0, 0.3, 5.0).unwrap();
    let t = cone.t - 0.01;
    let (a, b, g) = coeffs_from_t_lambda(t, cone.u0, cone.lambda);
    let c = entropy.free_energy(t).with_quadratic(a, b, g);
    let set = critical_points_4d(&free_energy(&c), &SolverOptions { search_radius: 0.05, grid_n: 7, ..Default::default() });
    let bm = hamiltonian_matrix(a, b, g, t);
    let small: Vec<_> = set.points.iter().filter(|p| Vector4::from(p.location).norm() <= 0.05).collect();
    let mut worst = 0.0f64;
    let mut fixed = small.len() >= 4;
    for p in &small {
        let w = Vector4::from(p.location);
        let seed = bm * w / t;
        let sol = solve_fixed_point(&bm, t, &quad, &[[seed[0], seed[1], seed[2], seed[3]]], 1e-13);
        match sol.first() {
            Some(s) => worst = worst.max((Vector4::from(s.w) - w).norm()),
            None => fixed = false,
        }
    }
    fixed &= worst < 1e-6;
    outcome(
        syz && inv && flips && fixed,
        format!(
            "syzygy {syz}, 72-element invariance {inv}, stability flip at ±1e-10 {flips}, \
             fixed point vs critical points {fixed} ({} points, max distance {worst:.1e})",
            small.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Molien exactness", molien_exactness),
        ("SO(3) Molien", so3_molien),
        ("entropy coefficients", entropy_coefficients),
        ("reduction exactness", reduction_exactness),
        ("normal-form oracle equivalence", oracle_equivalence),
        ("census landmarks", census_landmarks),
        ("B1 closed form", b1_closed_form),
        ("tangency", tangency),
        ("determinacy suite", determinacy_suite),
        ("versality", versality),
        ("spanning", spanning),
        ("property suites", property_suites),
    ];
    // the libtest flags cargo passes are not needed here
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        if filter.as_deref().is_some_and(|p| !name.contains(p)) {
            continue;
        }
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        if !res.pass {
            failed += 1;
        }
        println!("criterion {:>2} {:<32} {}  {}", k + 1, name, if res.pass { "PASS" } else { "FAIL" }, res.detail);
    }
    println!("acceptance: {} failed", failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
