use nalgebra::{DMatrix, Matrix3, SMatrix, UnitQuaternion, Quaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::GroupError;

pub type Matrix5 = SMatrix<f64, 5, 5>;

/// The Appendix-D basis `A₁, A₂, B₁, B₂, B₃` of Sym₀(ℝ³), unnormalized.
pub fn appendix_basis() -> [Matrix3<f64>; 5] {
    [
        Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, 0.0)),
        Matrix3::from_diagonal(&nalgebra::Vector3::new(0.0, 1.0, -1.0)),
        Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0),
        Matrix3::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0),
        Matrix3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
    ]
}

/// Orthonormal basis of Sym₀(ℝ³) for the trace inner product, obtained by
/// Gram–Schmidt from the Appendix-D basis (only `A₂` moves, since `A₁·A₂ ≠ 0`).
pub fn orthonormal_basis() -> [Matrix3<f64>; 5] {
    let raw = appendix_basis();
    let mut out: Vec<Matrix3<f64>> = Vec::with_capacity(5);
    for a in raw {
        let mut v = a;
        for e in &out {
            v -= *e * e.dot(&a);
        }
        out.push(v / v.norm());
    }
    [out[0], out[1], out[2], out[3], out[4]]
}

fn check_rotation(r: &Matrix3<f64>) -> Result<(), GroupError> {
    let orth = (r.transpose() * r - Matrix3::identity()).norm();
    let det = r.determinant();
    if orth > 1e-10 || (det - 1.0).abs() > 1e-10 {
        return Err(GroupError::NotRotation { orthogonality: orth, det });
    }
    Ok(())
}

/// Matrix of `Q ↦ R Q Rᵀ` on Sym₀(ℝ³) in [`orthonormal_basis`].
pub fn conjugation_operator(r: &Matrix3<f64>) -> Result<Matrix5, GroupError> {
    check_rotation(r)?;
    Ok(conjugation_unchecked(r))
}

fn conjugation_unchecked(r: &Matrix3<f64>) -> Matrix5 {
    let e = orthonormal_basis();
    Matrix5::from_fn(|i, j| e[i].dot(&(r * e[j] * r.transpose())))
}

/// Haar-distributed rotation from three uniforms (uniform unit quaternion).
pub fn haar_rotation<R: Rng>(rng: &mut R) -> Matrix3<f64> {
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let tau = std::f64::consts::TAU;
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let q = Quaternion::new(b * (tau * u3).cos(), a * (tau * u2).sin(), a * (tau * u2).cos(), b * (tau * u3).sin());
    UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner()
}

/// `n` Haar rotations from a seeded ChaCha stream.
pub fn haar_rotations(n: usize, seed: u64) -> Vec<Matrix3<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| haar_rotation(&mut rng)).collect()
}

/// Appendix-D rotations `K₀..K₃` and `I₁..I₃`.
pub fn appendix_rotations() -> (Vec<Matrix3<f64>>, Vec<Matrix3<f64>>) {
    let d = |a: f64, b: f64, c: f64| Matrix3::from_diagonal(&nalgebra::Vector3::new(a, b, c));
    let k = vec![d(1.0, 1.0, 1.0), d(1.0, -1.0, -1.0), d(-1.0, 1.0, -1.0), d(-1.0, -1.0, 1.0)];
    let i = vec![
        Matrix3::identity(),
        Matrix3::new(0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0),
        Matrix3::new(0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0),
    ];
    (k, i)
}

/// Outcome of the spanning check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanningReport {
    pub num_samples: usize,
    pub seed: u64,
    pub linear_rank: usize,
    pub affine_rank: usize,
    pub explicit_rank: usize,
    pub identity_residual: f64,
}

fn numeric_rank(rows: &[Vec<f64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * top.max(1.0)).count()
}

fn vectorize(m: &Matrix5) -> Vec<f64> {
    m.iter().copied().collect()
}

/// Rank of sampled conjugation operators as vectors in ℝ²⁵ (linear and
/// affine), the rank of the seven explicit Appendix-D operators, and the
/// norm of `(K̃₀+K̃₁+K̃₂+K̃₃)(Ĩ₁+Ĩ₂+Ĩ₃)`.
pub fn spanning_check(num_samples: usize, seed: u64) -> Result<SpanningReport, GroupError> {
    if num_samples < 26 {
        return Err(GroupError::TooFewSamples { got: num_samples, need: 26 });
    }
    let ops: Vec<Matrix5> = haar_rotations(num_samples, seed).iter().map(conjugation_unchecked).collect();
    let lin: Vec<Vec<f64>> = ops.iter().map(vectorize).collect();
    let aff: Vec<Vec<f64>> = ops[1..].iter().map(|m| vectorize(&(m - ops[0]))).collect();

    let (k, i) = appendix_rotations();
    let kt: Vec<Matrix5> = k.iter().map(conjugation_unchecked).collect();
    let it: Vec<Matrix5> = i.iter().map(conjugation_unchecked).collect();
    let explicit: Vec<Vec<f64>> = kt.iter().chain(&it).map(vectorize).collect();
    let ksum: Matrix5 = kt.iter().sum();
    let isum: Matrix5 = it.iter().sum();
    let identity_residual = (ksum * isum).svd(false, false).singular_values.max();

    Ok(SpanningReport {
        num_samples,
        seed,
        linear_rank: numeric_rank(&lin),
        affine_rank: numeric_rank(&aff),
        explicit_rank: numeric_rank(&explicit),
        identity_residual,
    })
}
