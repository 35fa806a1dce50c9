//! Truncated multivariate polynomials and power series.
//!
//! A [`TruncSeries`] holds the terms of total degree at most a fixed cap
//! in up to five variables, over exact rationals ([`Rat`]) or `f64`.
//! Everything else in the workspace is built on it.

mod coeff;
pub mod linalg;
mod series;

pub use coeff::{rat, rat_to_f64, Coeff, Rat};
pub use series::{invert_map, linear_part, mono_degree, Mono, TruncSeries, MAX_CAP, MAX_VARS};

/// Failures of series operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("incompatible operands: (vars, cap) {left:?} vs {right:?}")]
    Incompatible { left: (usize, u32), right: (usize, u32) },
    #[error("expected {expected} images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image for variable {variable} has a constant term but the series is a truncation")]
    ConstantImage { variable: usize },
    #[error("log_series needs constant term exactly 1")]
    LogConstant,
    #[error("exp_series needs zero constant term")]
    ExpConstant,
    #[error("linear part of the map is singular")]
    SingularLinearPart,
}

/// Number of monomials of total degree ≤ `cap` in `nvars` variables.
pub fn monomial_count(nvars: usize, cap: u32) -> usize {
    let n = nvars as u64 + cap as u64;
    let mut c: u64 = 1;
    for i in 0..nvars as u64 {
        c = c * (n - i) / (i + 1);
    }
    c as usize
}

/// All exponent tuples in `nvars` variables with total degree exactly `d`,
/// in lexicographically decreasing order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u8>> {
    fn rec(nvars: usize, d: u32, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() + 1 == nvars {
            prefix.push(d as u8);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k as u8);
            rec(nvars, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, d, &mut Vec::new(), &mut out);
    out
}

/// All exponent tuples with total degree in `lo..=hi`.
pub fn monomials_up_to(nvars: usize, lo: u32, hi: u32) -> Vec<Vec<u8>> {
    (lo..=hi).flat_map(|d| monomials_of_degree(nvars, d)).collect()
}
