use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::Coeff;
use crate::linalg;
use crate::SeriesError;

/// Maximum number of variables a series may carry.
pub const MAX_VARS: usize = 5;
/// Maximum total-degree cap.
pub const MAX_CAP: u32 = 12;

/// Exponent tuple; slots past `num_vars` stay zero.
pub type Mono = [u8; MAX_VARS];

pub fn mono_degree(m: &Mono) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

/// Truncated multivariate series `Σ c_e x^e` with `|e| ≤ cap`.
///
/// `poly` records whether the stored terms are an exact polynomial
/// (nothing was ever discarded by truncation). Substitution of images
/// with a constant term is only meaningful for exact polynomials.
#[derive(Clone)]
pub struct TruncSeries<C: Coeff> {
    nvars: usize,
    cap: u32,
    poly: bool,
    terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> PartialEq for TruncSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.cap == other.cap && self.terms == other.terms
    }
}

impl<C: Coeff> fmt::Debug for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries[{}v, cap {}] ", self.nvars, self.cap)?;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})")?;
            for (v, &e) in m.iter().take(self.nvars).enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·x{v}")?,
                    _ => write!(f, "·x{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

fn check_shape(nvars: usize, cap: u32) {
    assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
    assert!(cap <= MAX_CAP, "degree cap at most {MAX_CAP}");
}

impl<C: Coeff> TruncSeries<C> {
    pub fn zero(nvars: usize, cap: u32) -> Self {
        check_shape(nvars, cap);
        Self { nvars, cap, poly: true, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, cap: u32, c: C) -> Self {
        let mut s = Self::zero(nvars, cap);
        s.insert([0; MAX_VARS], c);
        s
    }

    pub fn one(nvars: usize, cap: u32) -> Self {
        Self::constant(nvars, cap, C::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, cap: u32, i: usize) -> Self {
        assert!(i < nvars);
        let mut m = [0; MAX_VARS];
        m[i] = 1;
        Self::monomial(nvars, cap, &m[..nvars], C::one())
    }

    /// `c · x^exps`; dropped (zero series) when the degree exceeds the cap.
    pub fn monomial(nvars: usize, cap: u32, exps: &[u8], c: C) -> Self {
        assert_eq!(exps.len(), nvars, "exponent length must equal num_vars");
        let mut s = Self::zero(nvars, cap);
        let mut m = [0; MAX_VARS];
        m[..nvars].copy_from_slice(exps);
        if mono_degree(&m) <= cap {
            s.insert(m, c);
        } else {
            s.poly = false;
        }
        s
    }

    /// Build from `(exponents, coefficient)` pairs; repeated exponents add.
    pub fn from_terms<I, E>(nvars: usize, cap: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (E, C)>,
        E: AsRef<[u8]>,
    {
        let mut s = Self::zero(nvars, cap);
        for (e, c) in terms {
            let e = e.as_ref();
            assert_eq!(e.len(), nvars, "exponent length must equal num_vars");
            let mut m = [0; MAX_VARS];
            m[..nvars].copy_from_slice(e);
            if mono_degree(&m) > cap {
                s.poly = false;
                continue;
            }
            s.accumulate(m, c);
        }
        s.prune();
        s
    }

    fn insert(&mut self, m: Mono, c: C) {
        if !c.is_zero() {
            self.terms.insert(m, c);
        }
    }

    fn accumulate(&mut self, m: Mono, c: C) {
        match self.terms.get_mut(&m) {
            Some(v) => *v = v.clone() + c,
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// True when no term has ever been discarded by truncation.
    pub fn is_polynomial(&self) -> bool {
        self.poly
    }

    /// Mark the series as a genuine truncation of an infinite series.
    pub fn into_series(mut self) -> Self {
        self.poly = false;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Stored `(exponents, coefficient)` pairs in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &C)> + '_ {
        self.terms.iter().map(move |(m, c)| (&m[..self.nvars], c))
    }

    pub fn coeff(&self, exps: &[u8]) -> C {
        let mut m = [0; MAX_VARS];
        m[..exps.len()].copy_from_slice(exps);
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&[0; MAX_VARS]).cloned().unwrap_or_else(C::zero)
    }

    /// Highest total degree present (0 for the zero series).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(mono_degree).max().unwrap_or(0)
    }

    /// Lowest total degree present (`None` for the zero series).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(mono_degree).min()
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        self.filter(|m| mono_degree(m) == d)
    }

    /// Keep only terms whose exponent satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Mono) -> bool) -> Self {
        Self {
            nvars: self.nvars,
            cap: self.cap,
            poly: self.poly,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Re-cap the series. Lowering discards terms; raising keeps them
    /// (a genuine series truncation stays flagged as such).
    pub fn with_cap(&self, cap: u32) -> Self {
        check_shape(self.nvars, cap);
        let mut poly = self.poly;
        let terms: BTreeMap<Mono, C> = self
            .terms
            .iter()
            .filter(|(m, _)| {
                let keep = mono_degree(m) <= cap;
                poly &= keep;
                keep
            })
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        Self { nvars: self.nvars, cap, poly, terms }
    }

    /// Apply `f` to every coefficient (e.g. to change coefficient kind).
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        let mut out = TruncSeries::<D>::zero(self.nvars, self.cap);
        out.poly = self.poly;
        for (m, c) in &self.terms {
            out.insert(*m, f(c));
        }
        out
    }

    pub fn to_f64(&self) -> TruncSeries<f64> {
        self.map_coeffs(|c| c.to_f64())
    }

    fn compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.nvars != other.nvars || self.cap != other.cap {
            return Err(SeriesError::Incompatible {
                left: (self.nvars, self.cap),
                right: (other.nvars, other.cap),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.compatible(other)?;
        let mut out = self.clone();
        out.poly &= other.poly;
        for (m, c) in &other.terms {
            out.accumulate(*m, c.clone());
        }
        out.prune();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            let mut z = Self::zero(self.nvars, self.cap);
            z.poly = self.poly;
            return z;
        }
        self.map_coeffs(|c| c.clone() * k.clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.compatible(other)?;
        let mut rhs: Vec<(u32, &Mono, &C)> =
            other.terms.iter().map(|(m, c)| (mono_degree(m), m, c)).collect();
        rhs.sort_by_key(|t| t.0);
        let mut out = Self::zero(self.nvars, self.cap);
        let mut discarded = false;
        for (ma, ca) in &self.terms {
            let da = mono_degree(ma);
            for &(db, mb, cb) in &rhs {
                if da + db > self.cap {
                    discarded = true;
                    break;
                }
                let mut m = *ma;
                for k in 0..MAX_VARS {
                    m[k] += mb[k];
                }
                out.accumulate(m, ca.clone() * cb.clone());
            }
        }
        out.prune();
        out.poly = self.poly && other.poly && !discarded;
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.cap);
        acc.poly = true;
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in variable `i`, cap reduced by one.
    pub fn derivative(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let cap = self.cap.saturating_sub(1);
        let mut out = Self::zero(self.nvars, cap);
        out.poly = self.poly;
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut d = *m;
            d[i] -= 1;
            out.insert(d, c.clone() * C::from_i64(m[i] as i64));
        }
        out
    }

    /// Per-variable partial derivatives, each with cap reduced by one.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Evaluate at a point.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars);
        let mut pows: Vec<Vec<C>> = Vec::with_capacity(self.nvars);
        for x in point {
            let mut p = vec![C::one()];
            for k in 1..=self.cap as usize {
                let next = p[k - 1].clone() * x.clone();
                p.push(next);
            }
            pows.push(p);
        }
        let mut s = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..self.nvars {
                if m[v] > 0 {
                    t = t * pows[v][m[v] as usize].clone();
                }
            }
            s = s + t;
        }
        s
    }

    /// Evaluate at a floating-point point.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64();
                for v in 0..self.nvars {
                    t *= point[v].powi(m[v] as i32);
                }
                t
            })
            .sum()
    }

    /// Compose: `f(images_0, …, images_{n-1})`.
    ///
    /// All images share one variable count and cap, which the result
    /// inherits. Images may carry constant terms only when `self` is an
    /// exact polynomial.
    pub fn substitute(&self, images: &[Self]) -> Result<Self, SeriesError> {
        if images.len() != self.nvars {
            return Err(SeriesError::ImageCount { expected: self.nvars, got: images.len() });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let (nv, cap) = (first.nvars, first.cap);
        for img in images {
            first.compatible(img)?;
        }
        if !self.poly {
            if let Some(i) = images.iter().position(|g| !g.constant_term().is_zero()) {
                return Err(SeriesError::ConstantImage { variable: i });
            }
        }
        let max_exp = self.terms.keys().map(|m| m.iter().copied().max().unwrap_or(0)).max().unwrap_or(0);
        let mut pows: Vec<Vec<Self>> = Vec::with_capacity(self.nvars);
        for img in images {
            let mut p = vec![Self::one(nv, cap)];
            for k in 1..=max_exp as usize {
                let next = &p[k - 1] * img;
                p.push(next);
            }
            pows.push(p);
        }
        let mut out = Self::zero(nv, cap);
        let mut poly = self.poly && images.iter().all(|g| g.poly);
        for (m, c) in &self.terms {
            let mut t = Self::constant(nv, cap, c.clone());
            for v in 0..self.nvars {
                if m[v] > 0 {
                    t = &t * &pows[v][m[v] as usize];
                }
            }
            poly &= t.poly;
            for (tm, tc) in t.terms {
                out.accumulate(tm, tc);
            }
        }
        out.prune();
        out.poly = poly;
        Ok(out)
    }

    /// `log(f)` through `log(1+u) = Σ (−1)^{k+1} u^k / k`, `u = f − 1`.
    pub fn log_series(&self) -> Result<Self, SeriesError> {
        if self.constant_term() != C::one() {
            return Err(SeriesError::LogConstant);
        }
        let u = self.filter(|m| mono_degree(m) > 0);
        let mut out = Self::zero(self.nvars, self.cap);
        let mut upow = u.clone();
        for k in 1..=self.cap as i64 {
            let sign = if k % 2 == 1 { C::one() } else { -C::one() };
            out = &out + &upow.scale(&(sign / C::from_i64(k)));
            upow = &upow * &u;
        }
        out.poly = false;
        Ok(out)
    }

    /// `exp(f)` for `f` with zero constant term.
    pub fn exp_series(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::ExpConstant);
        }
        let mut out = Self::one(self.nvars, self.cap);
        let mut term = Self::one(self.nvars, self.cap);
        for k in 1..=self.cap as i64 {
            term = (&term * self).scale(&(C::one() / C::from_i64(k)));
            out = &out + &term;
        }
        out.poly = false;
        Ok(out)
    }
}

/// Linear part of a map as the matrix `L[i][j] = ∂W_i/∂x_j (0)`.
pub fn linear_part<C: Coeff>(map: &[TruncSeries<C>]) -> Vec<Vec<C>> {
    let n = map.len();
    map.iter()
        .map(|w| {
            (0..n)
                .map(|j| {
                    let mut e = vec![0u8; w.num_vars()];
                    e[j] = 1;
                    w.coeff(&e)
                })
                .collect()
        })
        .collect()
}

/// Compositional inverse of a map `W: (x) ↦ W(x)` with `W(0) = 0`.
///
/// Iterates `η ← L⁻¹(w − H(η))` where `H` is the nonlinear part of `W`;
/// each pass fixes one more degree, so `cap` passes suffice.
pub fn invert_map<C: Coeff>(w: &[TruncSeries<C>]) -> Result<Vec<TruncSeries<C>>, SeriesError> {
    let n = w.len();
    let Some(first) = w.first() else { return Ok(Vec::new()) };
    let cap = first.cap();
    for wi in w {
        first.compatible(wi)?;
        if wi.num_vars() != n {
            return Err(SeriesError::ImageCount { expected: n, got: wi.num_vars() });
        }
        if !wi.constant_term().is_zero() {
            return Err(SeriesError::ConstantImage { variable: 0 });
        }
    }
    let l = linear_part(w);
    let linv = linalg::inverse(&l).ok_or(SeriesError::SingularLinearPart)?;
    let higher: Vec<TruncSeries<C>> = w.iter().map(|wi| wi.filter(|m| mono_degree(m) >= 2)).collect();
    let vars: Vec<TruncSeries<C>> = (0..n).map(|i| TruncSeries::var(n, cap, i)).collect();
    let apply_linv = |v: &[TruncSeries<C>]| -> Vec<TruncSeries<C>> {
        (0..n)
            .map(|i| {
                let mut acc = TruncSeries::zero(n, cap);
                for j in 0..n {
                    if !linv[i][j].is_zero() {
                        acc = &acc + &v[j].scale(&linv[i][j]);
                    }
                }
                acc
            })
            .collect()
    };
    let mut eta = apply_linv(&vars);
    for _ in 0..cap {
        let mut rhs = Vec::with_capacity(n);
        for i in 0..n {
            rhs.push(&vars[i] - &higher[i].substitute(&eta)?);
        }
        eta = apply_linv(&rhs);
    }
    Ok(eta.into_iter().map(|e| e.into_series()).collect())
}

impl<'a, C: Coeff> Add<&'a TruncSeries<C>> for &'a TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn add(self, rhs: &'a TruncSeries<C>) -> TruncSeries<C> {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a, C: Coeff> Sub<&'a TruncSeries<C>> for &'a TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn sub(self, rhs: &'a TruncSeries<C>) -> TruncSeries<C> {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a, C: Coeff> Mul<&'a TruncSeries<C>> for &'a TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn mul(self, rhs: &'a TruncSeries<C>) -> TruncSeries<C> {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<C: Coeff> Neg for &TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn neg(self) -> TruncSeries<C> {
        self.neg_ref()
    }
}

impl<C: Coeff> Add for TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}
