//! One-parameter sweeps: branch tables by nearest-neighbour continuation
//! and located bifurcation events.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{biaxial_points, classify_2d, uniaxial_points, CritError, MorseType, NormalFormParams, PointKind};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Solver(#[from] CritError),
    #[error("unresolved change between t = {t_lo} and t = {t_hi}; retry with at least {suggested_steps} steps")]
    Ambiguous { t_lo: f64, t_hi: f64, suggested_steps: usize },
    #[error("need at least one step")]
    NoSteps,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    /// Width to which events are bisected.
    pub tol: f64,
    /// Also sample each step midpoint, to catch pairs of events that cancel
    /// between grid points.
    pub midpoint_checks: bool,
    /// Relative gap `(X³ − Y²)/X³` below which a vanishing biaxial orbit is
    /// said to meet the axis.
    pub axis_gap: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { tol: 1e-10, midpoint_checks: true, axis_gap: 1e-4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Signature {
    axis_neg: usize,
    axis_pos: usize,
    biaxial: usize,
    /// Both Hessian eigenvalues at the origin positive.
    origin_stable: bool,
}

impl Signature {
    fn of(p: &NormalFormParams) -> Result<Self, CritError> {
        let ups = uniaxial_points(p);
        let axis_neg = ups.iter().filter(|u| u.x < 0.0).count();
        let axis_pos = ups.iter().filter(|u| u.x > 0.0).count();
        let origin_stable = classify_2d(p, 0.0, 0.0).eigenvalues[0] > 0.0;
        Ok(Self { axis_neg, axis_pos, biaxial: biaxial_points(p)?.orbits.len(), origin_stable })
    }

    fn axis(&self) -> usize {
        self.axis_neg + self.axis_pos
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum EventKind {
    UniaxialCreated { pairs: usize },
    UniaxialAnnihilated { pairs: usize },
    AxisRootThroughOrigin,
    BiaxialCreated { orbits: usize, at_axis: bool },
    BiaxialAnnihilated { orbits: usize, at_axis: bool },
    OriginStabilityLost,
    OriginStabilityGained,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEvent {
    pub t: f64,
    pub kinds: Vec<EventKind>,
    pub total_before: usize,
    pub total_after: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchRow {
    pub t: f64,
    pub branch_id: usize,
    pub x: f64,
    pub u: f64,
    pub kind: PointKind,
    pub morse: MorseType,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<BranchRow>,
    pub events: Vec<SweepEvent>,
}

impl SweepResult {
    pub fn event_sequence(&self) -> Vec<EventKind> {
        self.events.iter().flat_map(|e| e.kinds.iter().copied()).collect()
    }
}

fn total(s: &Signature) -> usize {
    1 + 3 * s.axis() + 6 * s.biaxial
}

/// Points in the closed sector `0 ≤ θ ≤ π/3` and on the negative axis:
/// axis roots and both mirror representatives of each biaxial orbit.
fn representatives(p: &NormalFormParams) -> Result<Vec<(f64, f64, PointKind, MorseType)>, CritError> {
    let mut out = Vec::new();
    for up in uniaxial_points(p) {
        let kind = if up.x == 0.0 { PointKind::Origin } else { PointKind::Uniaxial };
        out.push((up.x, 0.0, kind, up.morse));
    }
    for orb in biaxial_points(p)?.orbits {
        for [x, u] in orb.representatives {
            out.push((x, u, PointKind::Biaxial, classify_2d(p, x, u).morse));
        }
    }
    Ok(out)
}

pub fn branch_sweep(
    path: &(dyn Fn(f64) -> NormalFormParams + Sync),
    t_range: (f64, f64),
    steps: usize,
    opts: &SweepOptions,
) -> Result<SweepResult, SweepError> {
    if steps == 0 {
        return Err(SweepError::NoSteps);
    }
    let ts: Vec<f64> =
        (0..=steps).map(|i| t_range.0 + (t_range.1 - t_range.0) * i as f64 / steps as f64).collect();
    let reps: Vec<_> = ts.par_iter().map(|&t| representatives(&path(t))).collect::<Result<_, _>>()?;
    let width = (t_range.1 - t_range.0) / steps as f64;
    let samples: Vec<(f64, Signature)> =
        ts.par_iter().map(|&t| sample(path, t, width)).collect::<Result<_, _>>()?;

    let mut events = Vec::new();
    for w in samples.windows(2) {
        let ((a, sa), (b, sb)) = (w[0], w[1]);
        if opts.midpoint_checks && sa == sb {
            let (mid, sm) = sample(path, 0.5 * (a + b), b - a)?;
            if sm != sa {
                resolve(path, a, sa, mid, sm, opts, steps, &mut events)?;
                resolve(path, mid, sm, b, sb, opts, steps, &mut events)?;
            }
        } else if sa != sb {
            resolve(path, a, sa, b, sb, opts, steps, &mut events)?;
        }
    }

    Ok(SweepResult { rows: continue_branches(&ts, &reps), events })
}

/// Signature at `t`, moved off `t` by a small fraction of `width` when the
/// origin Hessian vanishes there, so that an event never sits on a sample.
fn sample(
    path: &(dyn Fn(f64) -> NormalFormParams + Sync),
    t: f64,
    width: f64,
) -> Result<(f64, Signature), CritError> {
    let p = path(t);
    let s = Signature::of(&p)?;
    if classify_2d(&p, 0.0, 0.0).eigenvalues[0] != 0.0 {
        return Ok((t, s));
    }
    let t2 = t + 0.0137 * width;
    Ok((t2, Signature::of(&path(t2))?))
}

#[allow(clippy::too_many_arguments)]
fn resolve(
    path: &(dyn Fn(f64) -> NormalFormParams + Sync),
    a: f64,
    sa: Signature,
    b: f64,
    sb: Signature,
    opts: &SweepOptions,
    steps: usize,
    out: &mut Vec<SweepEvent>,
) -> Result<(), SweepError> {
    if sa == sb {
        return Ok(());
    }
    if (b - a).abs() <= opts.tol {
        let richer = if sa.biaxial > sb.biaxial { a } else { b };
        let at_axis = min_gap(&path(richer))? < opts.axis_gap;
        let kinds = classify_event(&sa, &sb, at_axis).ok_or(SweepError::Ambiguous {
            t_lo: a,
            t_hi: b,
            suggested_steps: 4 * steps,
        })?;
        out.push(SweepEvent { t: 0.5 * (a + b), kinds, total_before: total(&sa), total_after: total(&sb) });
        return Ok(());
    }
    let (mid, sm) = sample(path, 0.5 * (a + b), b - a)?;
    resolve(path, a, sa, mid, sm, opts, steps, out)?;
    resolve(path, mid, sm, b, sb, opts, steps, out)
}

fn min_gap(p: &NormalFormParams) -> Result<f64, CritError> {
    Ok(biaxial_points(p)?
        .orbits
        .iter()
        .map(|o| (o.big_x.powi(3) - o.big_y * o.big_y) / o.big_x.powi(3))
        .fold(f64::INFINITY, f64::min))
}

fn classify_event(a: &Signature, b: &Signature, at_axis: bool) -> Option<Vec<EventKind>> {
    let mut kinds = Vec::new();
    let (na, nb) = (a.axis(), b.axis());
    if na % 2 != nb % 2 {
        return None;
    }
    if nb > na {
        kinds.push(EventKind::UniaxialCreated { pairs: (nb - na) / 2 });
    } else if nb < na {
        kinds.push(EventKind::UniaxialAnnihilated { pairs: (na - nb) / 2 });
    } else if a.axis_neg != b.axis_neg {
        kinds.push(EventKind::AxisRootThroughOrigin);
    }
    if b.biaxial > a.biaxial {
        kinds.push(EventKind::BiaxialCreated { orbits: b.biaxial - a.biaxial, at_axis });
    } else if b.biaxial < a.biaxial {
        kinds.push(EventKind::BiaxialAnnihilated { orbits: a.biaxial - b.biaxial, at_axis });
    }
    match (a.origin_stable, b.origin_stable) {
        (true, false) => kinds.push(EventKind::OriginStabilityLost),
        (false, true) => kinds.push(EventKind::OriginStabilityGained),
        _ => {}
    }
    (!kinds.is_empty()).then_some(kinds)
}

/// Greedy nearest-neighbour matching between consecutive samples, within a
/// point kind, with a penalty for a change of Morse type.
fn continue_branches(ts: &[f64], reps: &[Vec<(f64, f64, PointKind, MorseType)>]) -> Vec<BranchRow> {
    let mut rows = Vec::new();
    let mut prev: Vec<(usize, f64, f64, PointKind, MorseType)> = Vec::new();
    let mut next_id = 0;
    for (t, cur) in ts.iter().zip(reps) {
        let mut pairs = Vec::new();
        for (ci, c) in cur.iter().enumerate() {
            for (pi, p) in prev.iter().enumerate() {
                if p.3 != c.2 {
                    continue;
                }
                let mut cost = (p.1 - c.0).hypot(p.2 - c.1);
                if p.4 != c.3 {
                    cost += 0.5;
                }
                pairs.push((cost, ci, pi));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut id_of = vec![None; cur.len()];
        let mut used = vec![false; prev.len()];
        for (_, ci, pi) in pairs {
            if id_of[ci].is_none() && !used[pi] {
                id_of[ci] = Some(prev[pi].0);
                used[pi] = true;
            }
        }
        let mut next_prev = Vec::with_capacity(cur.len());
        for (ci, &(x, u, kind, morse)) in cur.iter().enumerate() {
            let id = id_of[ci].unwrap_or_else(|| {
                next_id += 1;
                next_id - 1
            });
            rows.push(BranchRow { t: *t, branch_id: id, x, u, kind, morse });
            next_prev.push((id, x, u, kind, morse));
        }
        prev = next_prev;
    }
    rows
}
