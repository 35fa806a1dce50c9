//! Counts of critical points over a grid in the `(e₂, e₃)`-plane.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{biaxial_points, uniaxial_points, CritError, NormalFormParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Counts {
    /// Nonzero real roots of the axis polynomial.
    pub axis_roots: usize,
    /// `3 · axis_roots`.
    pub uniaxial_pts: usize,
    pub biaxial_orbits: usize,
    pub total_critical_pts: usize,
}

impl Counts {
    pub fn of(p: &NormalFormParams) -> Result<Self, CritError> {
        let axis_roots = uniaxial_points(p).len() - 1;
        let biaxial_orbits = biaxial_points(p)?.orbits.len();
        Ok(Self {
            axis_roots,
            uniaxial_pts: 3 * axis_roots,
            biaxial_orbits,
            total_critical_pts: 1 + 3 * axis_roots + 6 * biaxial_orbits,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusGrid {
    pub e2_range: (f64, f64),
    pub e3_range: (f64, f64),
    pub n_e2: usize,
    pub n_e3: usize,
}

impl CensusGrid {
    pub fn e2(&self, i: usize) -> f64 {
        lerp(self.e2_range, i, self.n_e2)
    }

    pub fn e3(&self, j: usize) -> f64 {
        lerp(self.e3_range, j, self.n_e3)
    }
}

fn lerp(r: (f64, f64), i: usize, n: usize) -> f64 {
    if n <= 1 {
        return r.0;
    }
    r.0 + (r.1 - r.0) * i as f64 / (n - 1) as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusCell {
    pub i: usize,
    pub j: usize,
    pub e2: f64,
    pub e3: f64,
    pub counts: Counts,
}

/// Row-major over `(e₂, e₃)`, `e₆ = e₈ = 0`.
pub fn region_census(e4: f64, e5: f64, m: f64, n: f64, grid: &CensusGrid) -> Result<Vec<CensusCell>, CritError> {
    (0..grid.n_e2 * grid.n_e3)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / grid.n_e3, k % grid.n_e3);
            let (e2, e3) = (grid.e2(i), grid.e3(j));
            let counts = Counts::of(&NormalFormParams::new(e2, e3, e4, e5, m, n))?;
            Ok(CensusCell { i, j, e2, e3, counts })
        })
        .collect()
}

/// Bisect a one-parameter family for the point where the counts change.
/// `None` when the end counts agree.
pub fn locate_transition(
    family: &(dyn Fn(f64) -> NormalFormParams + Sync),
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<Option<(f64, Counts, Counts)>, CritError> {
    let ca = Counts::of(&family(a))?;
    let cb = Counts::of(&family(b))?;
    if ca == cb {
        return Ok(None);
    }
    while (b - a).abs() > tol {
        let mid = 0.5 * (a + b);
        if Counts::of(&family(mid))? == ca {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Some((0.5 * (a + b), ca, cb)))
}
