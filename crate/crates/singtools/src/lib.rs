//! Determinacy and versal deformations for `D₃`-invariant functions,
//! written in the Hilbert basis `X` (weight 2) and `Y` (weight 3).
//!
//! The equivariant vector fields are generated by `V₁`, `V₂` with
//! `dX·V₁ = 2X`, `dX·V₂ = 2Y`, `dY·V₁ = 3Y`, `dY·V₂ = 3X²`.
//!
//! Ideals are compared degree by degree through their leading forms: with
//! monomials ordered by increasing weighted degree, the rows of an echelon
//! basis whose pivot has degree `d` span the degree-`d` leading forms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use polyser::linalg::row_echelon;
use polyser::{rat, Rat};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SingError {
    #[error("polynomial has a constant term")]
    ConstantTerm,
    #[error("genericity condition fails: {0}")]
    NonGeneric(&'static str),
    #[error("all coefficients through degree 8 vanish")]
    TooDegenerate,
    #[error("cannot parse polynomial term {0:?}")]
    Parse(String),
}

pub type Mono = (u32, u32);

pub fn weight((a, b): Mono) -> u32 {
    2 * a + 3 * b
}

/// Monomials `XᵃYᵇ` of weighted degree `d`, by increasing `b`.
pub fn monomials_of_weight(d: u32) -> Vec<Mono> {
    (0..=d / 3).filter(|b| (d - 3 * b) % 2 == 0).map(|b| ((d - 3 * b) / 2, b)).collect()
}

/// `Σ c_{ab} XᵃYᵇ` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedPoly {
    terms: BTreeMap<Mono, Rat>,
}

impl WeightedPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: u32, b: u32, c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term((a, b), c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, Rat::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, Rat::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, Rat)>) -> Self {
        let mut p = Self::zero();
        for (a, b, c) in terms {
            p.add_term((a, b), c);
        }
        p
    }

    /// Integer coefficients, for tests and examples.
    pub fn from_ints(terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(a, b, c)| (a, b, rat(c, 1))))
    }

    /// `mX³ + nY²`.
    pub fn f6(m: Rat, n: Rat) -> Self {
        Self::from_terms([(3, 0, m), (0, 2, n)])
    }

    fn add_term(&mut self, m: Mono, c: Rat) {
        let e = self.terms.entry(m).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mono, &Rat)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, a: u32, b: u32) -> Rat {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest weighted degree present.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&m| weight(m)).min()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(|&m| weight(m)).max()
    }

    /// Terms of weighted degree at most `k`.
    pub fn jet(&self, k: u32) -> Self {
        Self { terms: self.terms.iter().filter(|(m, _)| weight(**m) <= k).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, c.clone());
        }
        p
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for ((a, b), c) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                p.add_term((a + a2, b + b2), c * c2);
            }
        }
        p
    }

    /// Multiply by `XᵃYᵇ`, dropping terms above weighted degree `cap`.
    fn shifted(&self, (a, b): Mono, cap: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| ((i + a, j + b), c.clone()))
                .filter(|(m, _)| weight(*m) <= cap)
                .collect(),
        }
    }

    pub fn d_x(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|((a, _), _)| *a > 0)
                .map(|((a, b), c)| ((a - 1, *b), c * rat(*a as i64, 1)))
                .collect(),
        }
    }

    pub fn d_y(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|((_, b), _)| *b > 0)
                .map(|((a, b), c)| ((*a, b - 1), c * rat(*b as i64, 1)))
                .collect(),
        }
    }
}

impl fmt::Display for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, ((a, b), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, e) in [("X", a), ("Y", b)] {
                match e {
                    0 => {}
                    1 => write!(f, "·{v}")?,
                    _ => write!(f, "·{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// `a,b,c` triples separated by `;`, for example `"3,0,1; 0,2,1/2"`.
impl FromStr for WeightedPoly {
    type Err = SingError;

    fn from_str(s: &str) -> Result<Self, SingError> {
        let mut p = Self::zero();
        for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let parts: Vec<&str> = item.split(',').map(str::trim).collect();
            let bad = || SingError::Parse(item.to_string());
            if parts.len() != 3 {
                return Err(bad());
            }
            let a = parts[0].parse().map_err(|_| bad())?;
            let b = parts[1].parse().map_err(|_| bad())?;
            let c = Rat::from_str(parts[2]).map_err(|_| bad())?;
            p.add_term((a, b), c);
        }
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierClass {
    /// Multipliers `XᵃYᵇ` with `(a, b) ≠ (0, 0)`.
    MaximalIdeal,
    FullRing,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedIdeal {
    pub generators: Vec<(WeightedPoly, MultiplierClass)>,
    /// Polynomials added with constant coefficients only.
    pub extras: Vec<WeightedPoly>,
}

/// `df·V₁ = 2X f_X + 3Y f_Y` and `df·V₂ = 2Y f_X + 3X² f_Y`.
pub fn df_v(f: &WeightedPoly) -> (WeightedPoly, WeightedPoly) {
    let (fx, fy) = (f.d_x(), f.d_y());
    let two = rat(2, 1);
    let three = rat(3, 1);
    let g1 = WeightedPoly::x().mul(&fx).scale(&two).add(&WeightedPoly::y().mul(&fy).scale(&three));
    let g2 = WeightedPoly::y()
        .mul(&fx)
        .scale(&two)
        .add(&WeightedPoly::monomial(2, 0, Rat::one()).mul(&fy).scale(&three));
    (g1, g2)
}

/// Generators of `𝒲₀(f)`: `V₁` may only carry multipliers vanishing at the
/// origin, since the vector field has no linear terms.
pub fn w0_generators(f: &WeightedPoly) -> Result<GradedIdeal, SingError> {
    if !f.coeff(0, 0).is_zero() {
        return Err(SingError::ConstantTerm);
    }
    let (g1, g2) = df_v(f);
    Ok(GradedIdeal { generators: vec![(g1, MultiplierClass::MaximalIdeal), (g2, MultiplierClass::FullRing)], extras: vec![] })
}

/// Generators of `𝒲(f)`: both with full-ring multipliers.
pub fn w_generators(f: &WeightedPoly) -> GradedIdeal {
    let (g1, g2) = df_v(f);
    GradedIdeal { generators: vec![(g1, MultiplierClass::FullRing), (g2, MultiplierClass::FullRing)], extras: vec![] }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: u32,
    pub dim: usize,
    pub leading_dim: usize,
    pub spans_all: bool,
    pub missing_dim: usize,
    /// A monomial outside the leading-form space.
    pub witness: Option<Mono>,
}

/// Leading-form spaces of an ideal, degree by degree, up to `hi`.
#[derive(Clone, Debug)]
pub struct LeadingForms {
    hi: u32,
    /// Degree-`d` parts of the echelon rows with pivot in degree `d`,
    /// in the column layout of `monomials_of_weight(d)`.
    by_degree: BTreeMap<u32, Vec<Vec<Rat>>>,
}

impl GradedIdeal {
    fn rows(&self, hi: u32) -> Vec<WeightedPoly> {
        let mut rows = Vec::new();
        for (g, class) in &self.generators {
            let Some(ord) = g.order() else { continue };
            if ord > hi {
                continue;
            }
            for d in 0..=hi - ord {
                for m in monomials_of_weight(d) {
                    if class == &MultiplierClass::MaximalIdeal && m == (0, 0) {
                        continue;
                    }
                    let r = g.shifted(m, hi);
                    if !r.is_zero() {
                        rows.push(r);
                    }
                }
            }
        }
        rows.extend(self.extras.iter().map(|e| e.jet(hi)).filter(|e| !e.is_zero()));
        rows
    }

    pub fn leading_forms(&self, hi: u32) -> LeadingForms {
        let cols: Vec<Mono> = (0..=hi).flat_map(monomials_of_weight).collect();
        let index: BTreeMap<Mono, usize> = cols.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut mat: Vec<Vec<Rat>> = self
            .rows(hi)
            .iter()
            .map(|r| {
                let mut v = vec![Rat::zero(); cols.len()];
                for (m, c) in r.terms() {
                    v[index[&m]] = c.clone();
                }
                v
            })
            .collect();
        let pivots = if mat.is_empty() { vec![] } else { row_echelon(&mut mat) };
        let mut by_degree: BTreeMap<u32, Vec<Vec<Rat>>> = BTreeMap::new();
        for (r, &pc) in pivots.iter().enumerate() {
            let d = weight(cols[pc]);
            let part = monomials_of_weight(d).iter().map(|m| mat[r][index[m]].clone()).collect();
            by_degree.entry(d).or_default().push(part);
        }
        LeadingForms { hi, by_degree }
    }

    pub fn graded_membership(&self, lo: u32, hi: u32) -> Vec<DegreeReport> {
        self.leading_forms(hi).reports(lo, hi)
    }
}

fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    polyser::linalg::rank(rows)
}

impl LeadingForms {
    pub fn space(&self, d: u32) -> &[Vec<Rat>] {
        self.by_degree.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn report(&self, d: u32) -> DegreeReport {
        assert!(d <= self.hi, "degree {d} above the truncation {}", self.hi);
        let monos = monomials_of_weight(d);
        let space = self.space(d);
        let leading_dim = space.len();
        let witness = (leading_dim < monos.len())
            .then(|| {
                // lowest power of Y first
                monos.iter().enumerate().find_map(|(i, m)| {
                    let mut rows = space.to_vec();
                    let mut e = vec![Rat::zero(); monos.len()];
                    e[i] = Rat::one();
                    rows.push(e);
                    (rank(&rows) > leading_dim).then_some(*m)
                })
            })
            .flatten();
        DegreeReport {
            degree: d,
            dim: monos.len(),
            leading_dim,
            spans_all: leading_dim == monos.len(),
            missing_dim: monos.len() - leading_dim,
            witness,
        }
    }

    pub fn reports(&self, lo: u32, hi: u32) -> Vec<DegreeReport> {
        (lo..=hi.min(self.hi)).map(|d| self.report(d)).collect()
    }

    /// Degree-`d` leading spaces coincide.
    pub fn same_at(&self, other: &Self, d: u32) -> bool {
        let (a, b) = (self.space(d), other.space(d));
        if a.len() != b.len() {
            return false;
        }
        let both: Vec<Vec<Rat>> = a.iter().chain(b).cloned().collect();
        rank(&both) == a.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterminacyVerdict {
    pub k: u32,
    pub window: (u32, u32),
    pub holds_on_window: bool,
    /// First failing degree and a monomial missing there.
    pub witness: Option<(u32, Mono)>,
    pub degrees: Vec<DegreeReport>,
}

/// Whether `𝒲₀(j_k f)` contains every invariant of weighted degree
/// `k+1 ..= k+window_extent`. Determinacy in full follows from this by the
/// filtration argument, which is not mechanised here.
pub fn k_determined(f: &WeightedPoly, k: u32, window_extent: u32) -> Result<DeterminacyVerdict, SingError> {
    let ideal = w0_generators(&f.jet(k))?;
    let window = (k + 1, k + window_extent);
    let degrees = ideal.graded_membership(window.0, window.1);
    let witness = degrees.iter().find(|r| !r.spans_all).map(|r| (r.degree, r.witness.expect("missing monomial")));
    Ok(DeterminacyVerdict { k, window, holds_on_window: witness.is_none(), witness, degrees })
}

/// Degree-by-degree equality of `𝒲₀(f)` and `𝒲₀(g)` on `lo..=hi`.
pub fn w0_equality(f: &WeightedPoly, g: &WeightedPoly, lo: u32, hi: u32) -> Result<bool, SingError> {
    let a = w0_generators(f)?.leading_forms(hi);
    let b = w0_generators(g)?.leading_forms(hi);
    Ok((lo..=hi).all(|d| a.same_at(&b, d)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VersalVerdict {
    pub versal: bool,
    pub first_failure: Option<(u32, Mono)>,
    pub degrees: Vec<DegreeReport>,
}

/// Whether `𝒲(h)` plus the real span of `deformation` covers every weighted
/// degree `0..=window`.
pub fn versal_check(h: &WeightedPoly, deformation: &[Mono], window: u32) -> VersalVerdict {
    let mut ideal = w_generators(h);
    ideal.extras = deformation.iter().map(|&(a, b)| WeightedPoly::monomial(a, b, Rat::one())).collect();
    let degrees = ideal.graded_membership(0, window);
    let first_failure = degrees.iter().find(|r| !r.spans_all).map(|r| (r.degree, r.witness.expect("missing monomial")));
    VersalVerdict { versal: first_failure.is_none(), first_failure, degrees }
}

/// The deformation monomials `1, X, Y, X², XY, X³, X⁴` of `f₆`.
pub const F6_UNFOLDING: [Mono; 7] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0), (4, 0)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseVerdict {
    /// Case number, 1 to 7.
    pub case: u8,
    pub k: u32,
    /// What the classification asserts: `true` for "k-determined", `false`
    /// for "in general not k-determined".
    pub asserted: bool,
    pub verdict: DeterminacyVerdict,
}

impl CaseVerdict {
    pub fn reproduced(&self) -> bool {
        self.asserted == self.verdict.holds_on_window
    }
}

/// Window length used for the case classification.
pub const CASE_WINDOW: u32 = 6;

/// Locate the first nonvanishing coefficient of `h` in
/// `e₂X + e₃Y + e₄X² + e₅XY + e₆X³ + d₆Y² + e₇X²Y + e₈X⁴ + d₈XY²` and
/// test determinacy at the corresponding order.
pub fn classify_case(h: &WeightedPoly) -> Result<CaseVerdict, SingError> {
    if !h.coeff(0, 0).is_zero() {
        return Err(SingError::ConstantTerm);
    }
    let nz = |a, b| !h.coeff(a, b).is_zero();
    let (case, k, asserted) = if nz(1, 0) {
        (1, 2, true)
    } else if nz(0, 1) {
        (2, 3, true)
    } else if nz(2, 0) {
        (3, 4, false)
    } else if nz(1, 1) {
        (4, 5, false)
    } else if nz(3, 0) || nz(0, 2) {
        let (e6, d6) = (h.coeff(3, 0), h.coeff(0, 2));
        if (e6.clone() * d6.clone() * (e6 + d6)).is_zero() {
            return Err(SingError::NonGeneric("e6·d6·(e6+d6) = 0"));
        }
        (5, 6, false)
    } else if nz(2, 1) {
        (6, 7, false)
    } else if nz(4, 0) || nz(1, 2) {
        let (e8, d8) = (h.coeff(4, 0), h.coeff(1, 2));
        if (e8.clone() * d8.clone() * (e8 + d8)).is_zero() {
            return Err(SingError::NonGeneric("e8·d8·(e8+d8) = 0"));
        }
        (7, 8, true)
    } else {
        return Err(SingError::TooDegenerate);
    };
    Ok(CaseVerdict { case, k, asserted, verdict: k_determined(h, k, CASE_WINDOW)? })
}

/// Representative jets, one per case.
pub fn case_representatives() -> Vec<WeightedPoly> {
    vec![
        WeightedPoly::from_ints(&[(1, 0, 1)]),
        WeightedPoly::from_ints(&[(0, 1, 1)]),
        WeightedPoly::from_ints(&[(2, 0, 1)]),
        WeightedPoly::from_ints(&[(1, 1, 1)]),
        WeightedPoly::from_ints(&[(3, 0, 1), (0, 2, 1)]),
        WeightedPoly::from_ints(&[(2, 1, 1)]),
        WeightedPoly::from_ints(&[(4, 0, 1), (1, 2, 1)]),
    ]
}
