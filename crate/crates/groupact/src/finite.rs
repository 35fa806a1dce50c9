use num_traits::{One, Zero};
use polyser::{linalg, Coeff, TruncSeries};

use crate::qsqrt3::QSqrt3;
use crate::GroupError;

pub type ExactMatrix = Vec<Vec<QSqrt3>>;

/// An orthogonal matrix with exact entries in ℚ(√3) and the word in the
/// generators that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalElement {
    pub matrix: ExactMatrix,
    pub label: String,
    /// Parity of the number of `τ` letters in `label`.
    pub odd_tau: bool,
}

fn identity(n: usize) -> ExactMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { QSqrt3::one() } else { QSqrt3::zero() }).collect()).collect()
}

fn transpose(m: &ExactMatrix) -> ExactMatrix {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect()
}

impl OrthogonalElement {
    pub fn new(matrix: ExactMatrix, label: impl Into<String>) -> Self {
        Self { matrix, label: label.into(), odd_tau: false }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(identity(n), "e")
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn compose(&self, other: &Self) -> Self {
        let label = match (self.label.as_str(), other.label.as_str()) {
            ("e", l) | (l, "e") => l.to_string(),
            (a, b) => format!("{a}{b}"),
        };
        Self {
            matrix: linalg::mat_mul(&self.matrix, &other.matrix),
            label,
            odd_tau: self.odd_tau ^ other.odd_tau,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: transpose(&self.matrix), label: format!("({})⁻¹", self.label), odd_tau: self.odd_tau }
    }

    /// `MᵀM = I` in exact arithmetic.
    pub fn is_orthogonal(&self) -> bool {
        linalg::mat_mul(&transpose(&self.matrix), &self.matrix) == identity(self.dim())
    }

    /// Exact determinant.
    pub fn det(&self) -> QSqrt3 {
        let mut m = self.matrix.clone();
        let n = m.len();
        let mut det = QSqrt3::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return QSqrt3::zero() };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det = det * m[c][c].clone();
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = m[r][c].clone() / m[c][c].clone();
                for k in c..n {
                    let t = m[c][k].clone() * f.clone();
                    m[r][k] = m[r][k].clone() - t;
                }
            }
        }
        det
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        nalgebra::DMatrix::from_fn(n, n, |i, j| self.matrix[i][j].to_f64())
    }

    pub fn apply_f64(&self, v: &[f64]) -> Vec<f64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, x)| a.to_f64() * x).sum()).collect()
    }

    /// Coefficients of `det(I − tA)`, lowest degree first, from the
    /// characteristic polynomial (Faddeev–LeVerrier).
    pub fn det_one_minus_t(&self) -> Vec<QSqrt3> {
        let n = self.dim();
        // c[j] is the coefficient of λ^j in det(λI − A)
        let mut c = vec![QSqrt3::zero(); n + 1];
        c[n] = QSqrt3::one();
        let mut mk = vec![vec![QSqrt3::zero(); n]; n];
        for k in 1..=n {
            let mut next = linalg::mat_mul(&self.matrix, &mk);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] = row[i].clone() + c[n - k + 1].clone();
            }
            mk = next;
            let am = linalg::mat_mul(&self.matrix, &mk);
            let tr = (0..n).fold(QSqrt3::zero(), |s, i| s + am[i][i].clone());
            c[n - k] = -tr / QSqrt3::from_i64(k as i64);
        }
        // det(I − tA) = Σ_j c_j t^{n−j}
        (0..=n).map(|k| c[n - k].clone()).collect()
    }

    /// The image of the coordinate functions under `x ↦ A x`, as series.
    pub fn linear_images<C: Coeff>(&self, cap: u32, conv: impl Fn(&QSqrt3) -> C) -> Vec<TruncSeries<C>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n).fold(TruncSeries::zero(n, cap), |acc, j| {
                    let a = conv(&self.matrix[i][j]);
                    if a.is_zero() {
                        acc
                    } else {
                        &acc + &TruncSeries::var(n, cap, j).scale(&a)
                    }
                })
            })
            .collect()
    }
}

/// Closure of `generators` under multiplication, breadth first from the
/// identity. Each generator carries its `τ`-parity; a group element reached
/// with both parities is reported as an error.
pub fn closure(generators: &[OrthogonalElement], limit: usize) -> Result<Vec<OrthogonalElement>, GroupError> {
    let n = generators.first().map_or(0, |g| g.dim());
    let mut elems = vec![OrthogonalElement::identity(n)];
    let mut head = 0;
    while head < elems.len() {
        let cur = elems[head].clone();
        head += 1;
        for g in generators {
            let next = cur.compose(g);
            match elems.iter().find(|e| e.matrix == next.matrix) {
                Some(e) if e.odd_tau != next.odd_tau => {
                    return Err(GroupError::ParityClash { label: next.label });
                }
                Some(_) => {}
                None => {
                    if elems.len() == limit {
                        return Err(GroupError::ClosureOverflow { limit });
                    }
                    elems.push(next);
                }
            }
        }
    }
    Ok(elems)
}

fn rot120() -> [[QSqrt3; 2]; 2] {
    let h = QSqrt3::from_parts(-1, 2, 0, 1);
    let s = QSqrt3::from_parts(0, 1, 1, 2);
    [[h.clone(), -s.clone()], [s, h]]
}

/// Generators `r` (rotation by 2π/3) and `k` (reflection `u ↦ −u`) of D₃ on ℝ².
pub fn d3_generators() -> Vec<OrthogonalElement> {
    let r = rot120();
    let rm = vec![r[0].to_vec(), r[1].to_vec()];
    let km = vec![vec![QSqrt3::one(), QSqrt3::zero()], vec![QSqrt3::zero(), -QSqrt3::one()]];
    vec![OrthogonalElement::new(rm, "r"), OrthogonalElement::new(km, "k")]
}

/// The six elements of D₃ acting on ℝ².
pub fn d3_elements() -> Vec<OrthogonalElement> {
    closure(&d3_generators(), 6).expect("D3 closure")
}

/// Generators `ρ`, `κ`, `τ` on (s,p,d,c): `ρ` rotates (s,p) and (d,c) by
/// 2π/3, `κ` negates p and c, `τ` swaps p and d.
pub fn d3tilde_generators() -> Vec<OrthogonalElement> {
    let z = QSqrt3::zero;
    let o = QSqrt3::one;
    let r = rot120();
    let mut rho = vec![vec![z(); 4]; 4];
    for (a, b) in [(0usize, 1usize), (2, 3)] {
        rho[a][a] = r[0][0].clone();
        rho[a][b] = r[0][1].clone();
        rho[b][a] = r[1][0].clone();
        rho[b][b] = r[1][1].clone();
    }
    let mut kappa = identity(4);
    kappa[1][1] = -o();
    kappa[3][3] = -o();
    let mut tau = vec![vec![z(); 4]; 4];
    tau[0][0] = o();
    tau[1][2] = o();
    tau[2][1] = o();
    tau[3][3] = o();
    let mut t = OrthogonalElement::new(tau, "τ");
    t.odd_tau = true;
    vec![OrthogonalElement::new(rho, "ρ"), OrthogonalElement::new(kappa, "κ"), t]
}

/// The 72-element group generated by `ρ, κ, τ` on ℝ⁴.
pub fn d3tilde_elements() -> Result<Vec<OrthogonalElement>, GroupError> {
    let g = closure(&d3tilde_generators(), 72)?;
    if g.len() != 72 {
        return Err(GroupError::UnexpectedOrder { expected: 72, got: g.len() });
    }
    Ok(g)
}

/// The index-2 subgroup of elements with an even number of `τ` letters.
pub fn d3xd3_elements() -> Result<Vec<OrthogonalElement>, GroupError> {
    Ok(d3tilde_elements()?.into_iter().filter(|g| !g.odd_tau).collect())
}

/// The left D₃ action on ℝ⁴ (generated by `ρ` and `κ` alone).
pub fn left_d3_elements() -> Vec<OrthogonalElement> {
    let gens: Vec<_> = d3tilde_generators().into_iter().take(2).collect();
    closure(&gens, 6).expect("left D3 closure")
}

/// The trivial group on ℝⁿ.
pub fn trivial_group(n: usize) -> Vec<OrthogonalElement> {
    vec![OrthogonalElement::identity(n)]
}

/// Dimension of the invariant subspace of degree-`d` polynomials, computed
/// by averaging every monomial over the group (Reynolds operator) and
/// taking the exact rank of the averages.
pub fn reynolds_dimension(group: &[OrthogonalElement], d: u32) -> usize {
    let n = group[0].dim();
    let monos = polyser::monomials_of_degree(n, d);
    let images: Vec<Vec<TruncSeries<QSqrt3>>> = group.iter().map(|g| g.linear_images(d, |a| a.clone())).collect();
    let rows: Vec<Vec<QSqrt3>> = monos
        .iter()
        .map(|m| {
            let mono = TruncSeries::monomial(n, d, m, QSqrt3::one());
            let mut avg = TruncSeries::zero(n, d);
            for img in &images {
                avg = &avg + &mono.substitute(img).expect("linear substitution");
            }
            monos.iter().map(|e| avg.coeff(e)).collect()
        })
        .collect();
    linalg::rank(&rows)
}
