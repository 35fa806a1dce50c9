use std::f64::consts::PI;
use std::sync::OnceLock;

use groupact::d3tilde_elements;
use kkls_entropy::*;
use nalgebra::{Matrix3, Rotation3, Vector3};
use polyser::{mono_degree, Coeff, TruncSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quad() -> &'static HaarQuadrature {
    static Q: OnceLock<HaarQuadrature> = OnceLock::new();
    Q.get_or_init(|| HaarQuadrature::euler_product(DEFAULT_GRID))
}

fn coeffs() -> &'static EntropyCoefficients {
    static C: OnceLock<EntropyCoefficients> = OnceLock::new();
    C.get_or_init(|| kkls_coefficients(quad()).unwrap())
}

fn fine_quad() -> &'static HaarQuadrature {
    static Q: OnceLock<HaarQuadrature> = OnceLock::new();
    Q.get_or_init(|| HaarQuadrature::euler_product(48))
}

fn max_diff(a: &TruncSeries<f64>, b: &TruncSeries<f64>) -> f64 {
    (a - b).terms().map(|(_, c)| c.abs()).fold(0.0, f64::max)
}

fn coeff(s: &TruncSeries<f64>, e: [u8; 4]) -> f64 {
    s.coeff(&e)
}

#[test]
fn quadrature_weights_and_low_moments() {
    let q = quad();
    let (mut total, mut comp) = (0.0f64, 0.0f64);
    for (_, w) in &q.nodes {
        let y = w - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    assert!((total - 1.0).abs() < 1e-14, "{:e}", total - 1.0);
    assert!(q.design_degree >= 12);
    for i in 0..3 {
        for j in 0..3 {
            assert!(q.integrate(|r| r[(i, j)]).abs() < 1e-14);
            for k in 0..3 {
                for l in 0..3 {
                    let expect = if i == k && j == l { 1.0 / 3.0 } else { 0.0 };
                    assert!((q.integrate(|r| r[(i, j)] * r[(k, l)]) - expect).abs() < 1e-14);
                }
            }
        }
    }
}

#[test]
fn quadrature_exact_for_degree_twelve_entry_monomial() {
    // ⟨R₃₃^{2k}⟩ = ∫cos^{2k}β d(cos β)/2 = 1/(2k+1)
    for k in 0..=6 {
        let v = quad().integrate(|r| r[(2, 2)].powi(2 * k));
        assert!((v - 1.0 / (2 * k + 1) as f64).abs() < 1e-14, "k = {k}");
    }
}

#[test]
fn alpha_d_examples() {
    let id = alpha_d_matrix(&Matrix3::identity());
    assert!((id - nalgebra::Matrix2::identity()).norm() < 1e-15);
    let half_turn = Rotation3::from_axis_angle(&Vector3::z_axis(), PI);
    let m = alpha_d_matrix(half_turn.matrix());
    assert!((m - nalgebra::Matrix2::identity()).norm() < 1e-15);
    let second = quad().integrate(|r| alpha_d_matrix(r)[(0, 0)].powi(2));
    assert!((second - 0.2).abs() < 1e-14);
}

#[test]
fn log_z_low_orders() {
    let lz = log_z_series(quad(), 6).unwrap();
    assert_eq!(lz.constant_term(), 0.0);
    for i in 0..4 {
        let mut e = [0u8; 4];
        e[i] = 1;
        assert_eq!(coeff(&lz, e), 0.0);
        e[i] = 2;
        assert!((coeff(&lz, e) - 0.1).abs() < 1e-14);
    }
    let cross = lz.homogeneous(2).filter(|m| m.iter().all(|&e| e < 2));
    assert!(cross.terms().all(|(_, c)| c.abs() < 1e-15));
}

#[test]
fn log_z_invariant_under_group() {
    let lz = log_z_series(quad(), 6).unwrap();
    for g in d3tilde_elements().unwrap() {
        let img = g.linear_images::<f64>(6, |c| c.to_f64());
        let moved = lz.substitute(&img).unwrap();
        assert!(max_diff(&moved, &lz) < 1e-12, "{}", g.label);
    }
}

#[test]
fn log_z_stable_under_refinement() {
    let a = log_z_series(quad(), 6).unwrap();
    let b = log_z_series(&HaarQuadrature::euler_product(2 * DEFAULT_GRID), 6).unwrap();
    assert!(max_diff(&a, &b) < 1e-12);
}

#[test]
fn undersized_quadrature_refused() {
    let err = log_z_series(&HaarQuadrature::euler_product(8), 6).unwrap_err();
    assert!(matches!(err, EntropyError::DesignTooLow { have: 7, need: 12 }));
}

#[test]
fn entropy_quadratic_part() {
    let s = entropy_series(quad(), 6).unwrap();
    let cross = s.homogeneous(2).filter(|m| m.iter().all(|&e| e < 2));
    assert!(cross.terms().all(|(_, c)| c.abs() < 1e-13));
    for i in 0..4 {
        let mut e = [0u8; 4];
        e[i] = 2;
        assert!((coeff(&s, e) + 2.5).abs() < 1e-12);
    }
    let c = coeffs();
    assert!((c.quad_s - 2.5).abs() < 1e-12 && (c.quad_pdc - 2.5).abs() < 1e-12);
    assert!(c.cross.abs() < 1e-12);
    assert!(c.residual < FIT_TOLERANCE);
}

#[test]
fn entropy_low_degree_coefficients() {
    let c = coeffs();
    assert!((c.a3p - 25.0 / 21.0).abs() < 1e-9);
    assert!((c.a4p.abs() - 125.0 / 784.0).abs() < 1e-9);
    assert!((c.b4p.abs() - 425.0 / 196.0).abs() < 1e-9);
    // signs as measured: −S/k carries −25/21·f₃, −125/784·f₄, +425/196·f₂²
    assert!(c.per_kt.a3 < 0.0 && c.per_kt.a4 < 0.0 && c.per_kt.b4 > 0.0);
}

#[test]
fn entropy_degree_six_coefficients() {
    let c = coeffs();
    let exact = [-419600.0, 3099312.0, 716640.0, 612405.0].map(|k| k * C6);
    let got = [c.per_kt.a6, c.per_kt.b6, c.per_kt.c6, c.per_kt.d6];
    for (g, e) in got.iter().zip(exact) {
        assert!((g - e).abs() < 1e-8, "{g} vs {e}");
    }
    for (g, e) in got.iter().zip([0.53, 3.92, 0.91, 0.77]) {
        assert!((g.abs() - e).abs() < 5e-3);
    }
}

#[test]
fn entropy_degree_five_coefficients() {
    let c = coeffs();
    assert!((c.a5p + 15625.0 / 22638.0).abs() < 1e-9, "{}", c.a5p);
    assert!((c.b5p - 10375.0 / 3773.0).abs() < 1e-9, "{}", c.b5p);
    let rep = degree5_report(c, 5e-3);
    assert!((rep.over_c6[0] + 546000.0).abs() < 1e-2);
    assert!((rep.over_c6[1] - 2175264.0).abs() < 1e-2);
    assert!(!rep.matches_840);
    assert!(!rep.matches_840x13);
    assert!((rep.candidate_840x13[0] + 1.7255).abs() < 1e-4);
}

#[test]
fn entropy_series_matches_direct_quadrature() {
    let s = entropy_series(quad(), 6).unwrap();
    let dir = [0.3, -0.7, 0.5, 0.4];
    let err = |t: f64| {
        let st = direct_state(quad(), &dir.map(|x| x * t));
        (st.entropy - s.eval_f64(&st.w)).abs()
    };
    let (e1, e2) = (err(0.2), err(0.1));
    assert!(e1 < 1e-8 && e2 < 1e-10);
    // seventh order: halving η divides the error by about 2⁷
    assert!(e1 / e2 > 60.0, "ratio {}", e1 / e2);
}

#[test]
fn entropy_series_is_tau_symmetric_and_even_in_w() {
    let s = entropy_series(quad(), 6).unwrap();
    let tau: Vec<TruncSeries<f64>> = [0, 2, 1, 3].iter().map(|&i| TruncSeries::var(4, 6, i)).collect();
    assert!(max_diff(&s.substitute(&tau).unwrap(), &s) < 1e-12);
    let odd_w = s.filter(|m| (m[2] + m[3]) % 2 == 1);
    assert!(odd_w.terms().all(|(_, c)| c.abs() < 1e-12));
    assert!(s.filter(|m| mono_degree(m) < 2).terms().all(|(_, c)| c.abs() < 1e-15));
}

#[test]
fn w_is_equivariant() {
    let group = d3tilde_elements().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..4 {
        let eta: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let w = direct_state(fine_quad(), &eta).w;
        for g in &group {
            let ge: [f64; 4] = g.apply_f64(&eta).try_into().unwrap();
            let lhs = direct_state(fine_quad(), &ge).w;
            let rhs = g.apply_f64(&w);
            for (a, b) in lhs.iter().zip(&rhs) {
                assert!((a - b).abs() < 1e-10, "{}", g.label);
            }
        }
    }
}

#[test]
fn dw_positive_definite() {
    let j0 = direct_state(quad(), &[0.0; 4]).jacobian;
    assert!((j0 - nalgebra::Matrix4::identity() * 0.2).norm() < 1e-13);
    assert!((dw_min_eigenvalue(quad(), &[0.0; 4]) - 0.2).abs() < 1e-13);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let mut eta: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = eta.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r = rng.gen_range(0.0..2.0);
        eta.iter_mut().for_each(|x| *x *= r / n);
        let j = direct_state(fine_quad(), &eta).jacobian;
        assert!((j - j.transpose()).norm() < 1e-10);
        assert!(dw_min_eigenvalue(fine_quad(), &eta) > 0.0);
    }
}
