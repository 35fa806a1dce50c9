use groupact::{d3_elements, QSqrt3};
use polyser::{rat, Rat, TruncSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use reduction::*;

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=7))
}

/// `(cos ξ, sin ξ)` from a Pythagorean triple, with random signs.
fn random_angle(rng: &mut ChaCha8Rng) -> (Rat, Rat) {
    let m: i64 = rng.gen_range(1..=9);
    let n: i64 = rng.gen_range(0..=9);
    let h = m * m + n * n;
    let mut c = rat(m * m - n * n, h);
    let mut s = rat(2 * m * n, h);
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

fn on_cone(rng: &mut ChaCha8Rng, c: &Rat, s: &Rat) -> LandauCoeffs<Rat> {
    let mut mu = random_rat(rng);
    if mu == rat(0, 1) {
        mu = rat(3, 2);
    }
    let two_mu = mu * rat(2, 1);
    let mut v: Vec<Rat> = (0..12).map(|_| random_rat(rng)).collect();
    v[0] = &two_mu * c * c;
    v[1] = &two_mu * s * s;
    v[2] = &two_mu * s * c;
    LandauCoeffs::from_vec(v)
}

fn trial(seed: u64) -> (LandauCoeffs<Rat>, Rat, Rat) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, s) = random_angle(&mut rng);
    (on_cone(&mut rng, &c, &s), c, s)
}

fn q3(r: Rat) -> QSqrt3 {
    QSqrt3::rational(r)
}

#[test]
fn hundred_random_reductions_are_exact_through_degree_six() {
    let start = std::time::Instant::now();
    let reports: Vec<_> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let (lc, c, s) = trial(seed);
            (seed, verify_reduction(&lc, &c, &s).unwrap())
        })
        .collect();
    for (seed, r) in &reports {
        assert_eq!(r.max_mixed_through_4, 0.0, "seed {seed}: {:?}", r.worst_mixed);
        assert_eq!(r.residual_match_error, 0.0, "seed {seed}");
        assert!(r.ensure_exact().is_ok());
    }
    assert!(start.elapsed().as_secs() < 30);
}

#[test]
fn shear_leaves_degree_five_linear_terms() {
    let (lc, c, s) = trial(0);
    assert_ne!(lc.a3, rat(0, 1));
    let r = verify_reduction(&lc, &c, &s).unwrap();
    assert!(r.degree5_linear_terms > 0);
    assert!(r.max_mixed_coeff > 0.0);
    let w = r.worst_mixed.unwrap();
    assert_eq!(w.monomial.iter().sum::<u8>(), 5);
    assert_eq!(w.monomial[1] + w.monomial[3], 1);
}

#[test]
fn printed_sextic_coefficients_need_the_a6_and_a4_terms() {
    let (lc, c, s) = trial(3);
    let r = verify_reduction(&lc, &c, &s).unwrap();
    assert!(r.printed_match_error > 0.0);
    let mut plain = lc.clone();
    plain.a6 = rat(0, 1);
    plain.a4 = rat(0, 1);
    let r = verify_reduction(&plain, &c, &s).unwrap();
    assert_eq!(r.printed_match_error, 0.0);
    assert_eq!(r.residual_match_error, 0.0);
}

#[test]
fn quintic_and_sextic_forms() {
    let (lc, c, s) = trial(7);
    let mu = (&lc.alpha + &lc.beta) / rat(2, 1);
    let (cc, ss) = triple_angle(&c, &s);
    let [(e4l, e4s), (e5l, e5s), (e6l, e6s)] = formula_forms(&lc, &cc, &ss, &mu).unwrap();
    assert_eq!(e4l, e4s);
    let sg = -rat(3, 1) * &lc.a3 / (rat(4, 1) * &mu);
    let sc2 = &ss * &cc * &cc;
    assert_eq!(&e5l - &e5s, -rat(18, 1) * &lc.a3 * &sc2 * &sg * &sg);
    assert_eq!(&e6l - &e6s, -rat(2, 1) * &lc.a4 * &cc * &cc * &sg * &sg);
    let good = residual_coeffs_cs(&lc, &cc, &ss, &mu).unwrap();
    assert_eq!(good.e5, e5s);
    assert_eq!(good.m, e6l + &lc.a6 * &cc * &cc);
}

#[test]
fn sigma_elimination_identity() {
    for seed in 0..20 {
        let (lc, _, _) = trial(seed);
        let mu = (&lc.alpha + &lc.beta) / rat(2, 1);
        let sg = -rat(3, 1) * &lc.a3 / (rat(4, 1) * &mu);
        assert_eq!(rat(2, 1) * &mu * &sg * &sg, -rat(3, 2) * &lc.a3 * &sg);
    }
}

#[test]
fn residual_is_d3_invariant() {
    let d3 = d3_elements();
    for seed in [1u64, 5, 9] {
        let (lc, c, s) = trial(seed);
        let q = verify_reduction(&lc, &c, &s).unwrap().residual.map_coeffs(|r| q3(r.clone()));
        for g in &d3 {
            let moved = q.substitute(&g.linear_images(CAP, |a| a.clone())).unwrap();
            assert_eq!(moved, q, "{}", g.label);
        }
    }
}

#[test]
fn half_turn_flips_odd_coefficients() {
    let (lc, c, s) = trial(11);
    let a = verify_reduction(&lc, &c, &s).unwrap();
    let b = verify_reduction(&lc, &-c.clone(), &-s.clone()).unwrap();
    assert_eq!(b.reduced.e3, -a.reduced.e3.clone());
    assert_eq!(b.reduced.e5, -a.reduced.e5.clone());
    assert_eq!(b.reduced.e4, a.reduced.e4);
    assert_eq!(b.reduced.m, a.reduced.m);
    assert_eq!(b.reduced.n, a.reduced.n);
    let flip = [
        TruncSeries::<Rat>::var(2, CAP, 0).scale(&rat(-1, 1)),
        TruncSeries::<Rat>::var(2, CAP, 1).scale(&rat(-1, 1)),
    ];
    assert_eq!(b.residual, a.residual.substitute(&flip).unwrap());
}

#[test]
fn rotation_examples() {
    let m = rotate_coords(std::f64::consts::FRAC_PI_2);
    let expect = nalgebra::Matrix4::new(
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0,
    );
    assert!((m - expect).norm() < 1e-15);
    let m0 = rotate_coords(0.0);
    // rows (s, d, p, c), columns (x, y, u, v)
    assert_eq!(m0[(0, 1)], 1.0);
    assert_eq!(m0[(1, 0)], -1.0);
    assert_eq!(m0[(2, 3)], 1.0);
    assert_eq!(m0[(3, 2)], -1.0);
    for xi in [0.1, 0.7, 2.3, -1.9] {
        let r = rotate_coords(xi);
        assert!((r.transpose() * r - nalgebra::Matrix4::identity()).norm() < 1e-15);
    }
    let (c, s) = (rat(5, 13), rat(12, 13));
    let e = rotate_coords_exact(&c, &s);
    for i in 0..4 {
        for j in 0..4 {
            let dot: Rat = (0..4).map(|k| &e[k][i] * &e[k][j]).sum();
            assert_eq!(dot, if i == j { rat(1, 1) } else { rat(0, 1) });
        }
    }
}

#[test]
fn quadratic_part_on_the_cone() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..50 {
        let xi: f64 = rng.gen_range(-3.0..3.0);
        let mu: f64 = rng.gen_range(-2.0..2.0);
        let (s, c) = xi.sin_cos();
        let (al, be, ga) = (2.0 * mu * c * c, 2.0 * mu * s * s, 2.0 * mu * s * c);
        let m = rotate_coords(xi);
        // quadratic form in (s, d, p, c) order
        let h = nalgebra::Matrix4::new(
            al, ga, 0.0, 0.0, //
            ga, be, 0.0, 0.0, //
            0.0, 0.0, al, ga, //
            0.0, 0.0, ga, be,
        );
        let q = m.transpose() * h * m;
        let expect = nalgebra::Matrix4::from_diagonal(&nalgebra::Vector4::new(0.0, 2.0 * mu, 0.0, 2.0 * mu));
        assert!((q - expect).norm() < 1e-13);
    }
}

#[test]
fn coefficient_map_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let v: Vec<f64> = (0..12).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let lc = LandauCoeffs::from_vec(v);
    let mu = 0.8;
    let r = residual_coeffs(&lc, std::f64::consts::FRAC_PI_2, mu).unwrap();
    assert!((r.c).abs() < 1e-15 && (r.s + 1.0).abs() < 1e-15);
    assert!((r.e3 - lc.a3).abs() < 1e-14);
    assert!((r.e4 - lc.b4).abs() < 1e-14);
    assert!((r.e5 - lc.b5).abs() < 1e-14);
    assert!((r.m - lc.b6).abs() < 1e-14);
    assert!((r.n - lc.c6).abs() < 1e-14);
    let r0 = residual_coeffs(&lc, 0.0, mu).unwrap();
    assert_eq!(r0.e3, 0.0);
    assert_eq!(r0.e5, 0.0);
    assert!((r0.e4 - (lc.b4 - 9.0 * lc.a3 * lc.a3 / (8.0 * mu))).abs() < 1e-14);
    assert_eq!(residual_coeffs(&lc, 0.3, 0.0), Err(ReductionError::Vertex));
}

#[test]
fn tricritical_temperature() {
    let (a3, b4, u0) = (-1.2, 2.1, 5.0);
    let t0 = u0 / 10.0;
    let t1 = t0 + 9.0 * a3 * a3 / (20.0 * b4);
    let lc = LandauCoeffs { a3, b4, ..Default::default() };
    let e4 = |t: f64| residual_coeffs(&lc, 0.0, (10.0 * t - u0) / 4.0).unwrap().e4;
    assert!(e4(t1).abs() < 1e-14);
    assert!(e4(t1 + 0.1) > 0.0 && e4(t1 - 0.1) < 0.0);
}

#[test]
fn shear_examples() {
    let (c, s) = (rat(3, 5), rat(-4, 5));
    let id = completing_square_map(&rat(0, 1), &c, &s);
    for (i, p) in id.iter().enumerate() {
        assert_eq!(*p, TruncSeries::var(4, CAP, i));
    }
    let sg = rat(2, 3);
    let flat = completing_square_map(&sg, &rat(1, 1), &rat(0, 1));
    assert!(flat.iter().all(|p| p.degree() <= 2));
    let full = completing_square_map(&sg, &c, &s);
    assert_eq!(full[1].degree(), 3);
    for (i, p) in full.iter().enumerate() {
        let lin = p.filter(|m| polyser::mono_degree(m) <= 1);
        assert_eq!(lin, TruncSeries::var(4, CAP, i));
    }
}

#[test]
fn shear_is_d3_equivariant() {
    let (c, s) = (q3(rat(3, 5)), q3(rat(4, 5)));
    let map = completing_square_map(&q3(rat(-7, 4)), &c, &s);
    for g in d3_elements() {
        let a = g.linear_images::<QSqrt3>(CAP, |a| a.clone());
        let act4 = [a[0].clone(), a[1].clone()];
        let (ax, au) = (&act4[0], &act4[1]);
        // g on (x, u) and on (y, v) simultaneously, over (x, y, u, v)
        let lift = |p: &TruncSeries<QSqrt3>, second: bool| {
            let v = |i| TruncSeries::<QSqrt3>::var(4, CAP, i);
            let (i, j) = if second { (1, 3) } else { (0, 2) };
            p.substitute(&[v(i), v(j)]).unwrap()
        };
        let gx = [lift(ax, false), lift(ax, true), lift(au, false), lift(au, true)];
        let g4 = [gx[0].clone(), gx[1].clone(), gx[2].clone(), gx[3].clone()];
        let lhs: Vec<_> = map.iter().map(|p| p.substitute(&g4).unwrap()).collect();
        let rhs = [
            ax.substitute(&[map[0].clone(), map[2].clone()]).unwrap(),
            ax.substitute(&[map[1].clone(), map[3].clone()]).unwrap(),
            au.substitute(&[map[0].clone(), map[2].clone()]).unwrap(),
            au.substitute(&[map[1].clone(), map[3].clone()]).unwrap(),
        ];
        assert_eq!(lhs, rhs, "{}", g.label);
    }
}

#[test]
fn inverse_shear_is_the_negated_shift() {
    let (c, s) = (rat(-8, 17), rat(15, 17));
    let sg = rat(5, 2);
    let map = completing_square_map(&sg, &c, &s);
    let inv = polyser::invert_map(&map).unwrap();
    assert_eq!(inv[0], TruncSeries::var(4, CAP, 0));
    assert_eq!(inv[2], TruncSeries::var(4, CAP, 2));
    let shift_y = &map[1] - &TruncSeries::var(4, CAP, 1);
    assert_eq!(inv[1], &TruncSeries::var(4, CAP, 1) - &shift_y);
    let shift_v = &map[3] - &TruncSeries::var(4, CAP, 3);
    assert_eq!(inv[3], &TruncSeries::var(4, CAP, 3) - &shift_v);
}

#[test]
fn preconditions() {
    let (lc, c, s) = trial(2);
    assert_eq!(verify_reduction(&lc, &rat(1, 2), &s).unwrap_err(), ReductionError::OffCircle);
    assert_eq!(verify_reduction(&lc, &s, &c).unwrap_err(), ReductionError::OffCone);
    let mut z = lc.clone();
    z.alpha = rat(0, 1);
    z.beta = rat(0, 1);
    z.gamma = rat(0, 1);
    assert_eq!(verify_reduction(&z, &c, &s).unwrap_err(), ReductionError::Vertex);
}

#[test]
fn no_cubic_means_pure_rotation() {
    let (mut lc, c, s) = trial(4);
    lc.a3 = rat(0, 1);
    let r = verify_reduction(&lc, &c, &s).unwrap();
    assert_eq!(r.reduced.sigma, rat(0, 1));
    assert_eq!(r.max_mixed_through_4, 0.0);
    let rotated = assemble(&lc).substitute(&rotation_images(&c, &s)).unwrap();
    assert_eq!(rotated, r.transformed);
}

#[test]
fn perturbation_e2() {
    assert_eq!(e2_from_perturbation(0.0, 0.0, 5.0), 0.0);
    assert_eq!(e2_from_perturbation(1.0, 0.0, 5.0), 2.5);
    for (rho, u0) in [(0.1, 5.0), (-0.3, 2.0), (1.7, 0.4)] {
        let t = (1.5f64).sqrt() * u0 * rho / 10.0;
        assert!(e2_from_perturbation(t, rho, u0).abs() < 1e-14);
    }
}
