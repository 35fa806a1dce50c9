//! One function per subcommand. Each turns the merged configuration into a
//! [`Report`].

use std::collections::BTreeMap;

use critpoints::{
    biaxial_points, bluebird_section, branch_sweep, critical_set, region_census, swallowtail_section, tangency_check,
    BifurcationCurve, CensusGrid, Counts, NormalFormParams, SweepError, SweepOptions,
};
use groupact::{molien_finite, molien_rational, molien_so3_conjugacy, MolienSeries};
use invariants::{eval_basis_r4, LandauCoeffs, OrderParams, LANDAU_NAMES};
use kkls_entropy::{degree5_report, kkls_coefficients, EntropyCoefficients, HaarQuadrature, FIT_TOLERANCE};
use landau::{critical_points_4d, free_energy, stability_classify, ConeParams, ModelSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reduction::{residual_coeffs, verify_reduction, ReducedCoeffs};
use serde::Serialize;
use singtools::{
    case_representatives, classify_case, k_determined, versal_check, w0_equality, DegreeReport, Mono, WeightedPoly,
    F6_UNFOLDING,
};

use crate::config::{BifsetTable, RunConfig};
use crate::error::CliError;
use crate::output::{num, Report, Table};

/// Serde name of a unit enum variant, for CSV cells.
fn label(v: impl Serialize) -> String {
    match serde_json::to_value(v).expect("label serializes") {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

fn mono(m: Mono) -> String {
    format!("X^{}Y^{}", m.0, m.1)
}

// ---------------------------------------------------------------- molien

pub struct MolienArgs {
    pub group: String,
    pub max_degree: usize,
}

fn closed_form(group: &str) -> Option<(&'static str, &'static [u32], &'static [u32])> {
    match group {
        "d3" => Some(("1/((1-t^2)(1-t^3))", &[0], &[2, 3])),
        "d3tilde" => Some(("(1+t^5)/((1-t^2)(1-t^3)(1-t^4)(1-t^6))", &[0, 5], &[2, 3, 4, 6])),
        "d3xd3" => Some(("(1+t^5)(1+t^6)/((1-t^2)(1-t^3)(1-t^4)(1-t^6))", &[0, 5, 6, 11], &[2, 3, 4, 6])),
        "so3" => Some(("1/((1-t^2)(1-t^3))", &[0], &[2, 3])),
        _ => None,
    }
}

pub fn molien(args: &MolienArgs) -> Result<Report, CliError> {
    let mut rep = Report::new("molien");
    rep.input("group", &args.group).input("max_degree", args.max_degree);
    let g = args.group.as_str();
    let series: MolienSeries = match g {
        "d3" => molien_finite(&groupact::d3_elements(), args.max_degree).map_err(CliError::numerical)?,
        "d3tilde" => {
            let els = groupact::d3tilde_elements().map_err(CliError::numerical)?;
            rep.set("group_order", els.len());
            molien_finite(&els, args.max_degree).map_err(CliError::numerical)?
        }
        "d3xd3" => {
            let els = groupact::d3xd3_elements().map_err(CliError::numerical)?;
            rep.set("group_order", els.len());
            molien_finite(&els, args.max_degree).map_err(CliError::numerical)?
        }
        "left-d3" => molien_finite(&groupact::left_d3_elements(), args.max_degree).map_err(CliError::numerical)?,
        "so3" => {
            let q = molien_so3_conjugacy(args.max_degree, None).map_err(CliError::numerical)?;
            rep.set("quadrature_grid", q.grid).set("raw", &q.raw).set("max_rounding_residual", q.max_residual);
            rep.check_le("rounding_residual", q.max_residual, 1e-8);
            q.series
        }
        other => {
            return Err(CliError::Usage(format!("unknown group {other:?}; expected d3, d3tilde, d3xd3, left-d3 or so3")))
        }
    };
    rep.set("coefficients", &series.coefficients);
    let mut table = Table::new("series", &["degree", "coefficient", "closed_form"]);
    let reference = closed_form(g).map(|(text, num_e, den_e)| (text, molien_rational(num_e, den_e, args.max_degree)));
    for (d, c) in series.coefficients.iter().enumerate() {
        let cf = reference.as_ref().map_or(String::new(), |(_, r)| r.coefficients[d].to_string());
        table.push(vec![d.to_string(), c.to_string(), cf]);
    }
    if let Some((text, r)) = reference {
        rep.set("closed_form", text);
        rep.check("matches_closed_form", r == series);
    }
    rep.tables.push(table);
    Ok(rep)
}

// ------------------------------------------------------------ invariants

pub fn invariants(points: usize, seed: u64) -> Result<Report, CliError> {
    let mut rep = Report::new("invariants");
    rep.input("points", points).input("seed", seed);
    let group = groupact::d3tilde_elements().map_err(CliError::numerical)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new("values", &["s", "p", "d", "c", "f2", "f3", "f4", "f5", "f6", "syzygy"]);
    let (mut worst_syz, mut worst_inv) = (0.0f64, 0.0f64);
    for _ in 0..points {
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let iv = eval_basis_r4(&OrderParams::from_slice(&x));
        let vals = iv.to_array();
        let scale = iv.f5 * iv.f5 + (iv.f4 * iv.f6).abs();
        if scale > 0.0 {
            worst_syz = worst_syz.max(iv.syzygy().abs() / scale);
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        for g in &group {
            let y = g.apply_f64(&x);
            let jv = eval_basis_r4(&OrderParams::from_slice(&y)).to_array();
            for (k, (a, b)) in vals.iter().zip(&jv).enumerate() {
                worst_inv = worst_inv.max((a - b).abs() / r.powi(k as i32 + 2));
            }
        }
        let mut row: Vec<String> = x.iter().chain(&vals).map(|v| num(*v)).collect();
        row.push(num(iv.syzygy()));
        table.push(row);
    }
    rep.set("group_order", group.len())
        .set("max_relative_syzygy", worst_syz)
        .set("max_relative_invariance_defect", worst_inv);
    rep.check_le("syzygy", worst_syz, 1e-12).check_le("invariance", worst_inv, 1e-12);
    rep.tables.push(table);
    Ok(rep)
}

// -------------------------------------------------------- entropy-coeffs

pub fn entropy(grid: usize) -> Result<EntropyCoefficients, CliError> {
    let quad = HaarQuadrature::euler_product(grid);
    kkls_coefficients(&quad).map_err(CliError::numerical)
}

pub fn entropy_coeffs(grid: usize) -> Result<Report, CliError> {
    let mut rep = Report::new("entropy-coeffs");
    rep.input("quadrature_grid", grid);
    let c = entropy(grid)?;
    let d5 = degree5_report(&c, 5e-3);
    let names = ["a3p", "a4p", "b4p", "a5p", "b5p", "a6p", "b6p", "c6p", "d6p"];
    for (n, v) in names.iter().zip(c.primed()) {
        rep.set(n, v);
    }
    rep.set("quadratic", [c.quad_s, c.quad_pdc, c.cross])
        .set("per_kt", &c.per_kt)
        .set("fit_residual", c.residual)
        .set("convention", &c.convention)
        .set("degree5", &d5);
    rep.check_le("fit_residual", c.residual, FIT_TOLERANCE);
    let mut table = Table::new("coefficients", &["name", "primed", "per_kt"]);
    let per_kt = c.per_kt.to_vec();
    for (k, n) in LANDAU_NAMES.iter().enumerate() {
        let primed = if k >= 3 { num(c.primed()[k - 3]) } else { String::new() };
        table.push(vec![n.to_string(), primed, num(per_kt[k])]);
    }
    rep.tables.push(table);
    Ok(rep)
}

// ---------------------------------------------------------------- model

struct Resolved {
    spec: ModelSpec,
    coeffs: LandauCoeffs<f64>,
    cone: Option<ConeParams>,
}

fn resolve(cfg: &RunConfig, grid: usize) -> Result<Resolved, CliError> {
    let spec = cfg.model_spec()?;
    let cone = spec.cone().transpose().map_err(CliError::input)?;
    let coeffs = match &spec {
        ModelSpec::Explicit(c) => c.clone(),
        ModelSpec::Cone { .. } => spec.resolve(&entropy(grid)?).map_err(CliError::input)?,
    };
    Ok(Resolved { spec, coeffs, cone })
}

fn coeff_map(c: &LandauCoeffs<f64>) -> BTreeMap<&'static str, f64> {
    LANDAU_NAMES.iter().copied().zip(c.to_vec()).collect()
}

pub fn classify(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rep = Report::new("classify");
    let spec = cfg.model_spec()?;
    rep.input("model", &spec);
    let (alpha, beta, gamma, cone) = match &spec {
        ModelSpec::Explicit(c) => (c.alpha, c.beta, c.gamma, None),
        ModelSpec::Cone { .. } => {
            let cone = spec.cone().expect("cone form").map_err(CliError::input)?;
            let (a, b, g) = cone.quadratic();
            (a, b, g, Some(cone))
        }
    };
    let m = nalgebra::Matrix2::new(alpha, gamma, gamma, beta);
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    rep.set("alpha", alpha)
        .set("beta", beta)
        .set("gamma", gamma)
        .set("det", alpha * beta - gamma * gamma)
        .set("eigenvalues", &ev)
        .set("stability", stability_classify(alpha, beta, gamma));
    if let Some(c) = cone {
        rep.set("cone", c);
        if let ModelSpec::Cone { t, kt, .. } = spec {
            let h = landau::hamiltonian_matrix(alpha, beta, gamma, kt.unwrap_or(t));
            let mut hev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
            hev.sort_by(f64::total_cmp);
            rep.set("hamiltonian_eigenvalues", hev);
        }
    }
    Ok(rep)
}

pub fn solve4d(cfg: &RunConfig, grid: usize) -> Result<Report, CliError> {
    let mut rep = Report::new("solve4d");
    let r = resolve(cfg, grid)?;
    let opt = cfg.solver.options();
    rep.input("model", &r.spec).input("solver", opt);
    let set = critical_points_4d(&free_energy(&r.coeffs), &opt);
    let mut table =
        Table::new("points", &["orbit_id", "tag", "s", "p", "d", "c", "value", "morse_index", "gradient_norm"]);
    let mut worst = 0.0f64;
    for p in &set.points {
        worst = worst.max(p.gradient_norm);
        let mut row = vec![p.orbit_id.to_string(), label(p.tag)];
        row.extend(p.location.iter().map(|v| num(*v)));
        row.extend([num(p.value), p.morse_index.to_string(), num(p.gradient_norm)]);
        table.push(row);
    }
    rep.set("coefficients", coeff_map(&r.coeffs))
        .set("points", set.points.len())
        .set("orbits", set.orbit_count())
        .set("degenerate", &set.degenerate)
        .set("symmetry", &set.symmetry)
        .set("seeds", set.seeds)
        .set("failed_seeds", set.failed_seeds);
    rep.check_le("max_gradient_norm", worst, 10.0 * opt.tol);
    rep.tables.push(table);
    Ok(rep)
}

// ------------------------------------------------------------- reduction

struct Reduction {
    coeffs: LandauCoeffs<f64>,
    xi: f64,
    reduced: ReducedCoeffs<f64>,
}

fn reduce_model(cfg: &RunConfig, grid: usize, rep: &mut Report) -> Result<Reduction, CliError> {
    let r = resolve(cfg, grid)?;
    let red = cfg.reduction.clone().unwrap_or_default();
    let given_xi = red.xi.or(red.xi_deg.map(f64::to_radians));
    let (xi, mu) = match &r.cone {
        Some(c) => {
            if given_xi.is_some() || red.mu.is_some() {
                return Err(CliError::Config("[reduction] xi/mu are fixed by [model.cone]; remove them".into()));
            }
            (c.xi, c.mu)
        }
        None => {
            let xi = given_xi.ok_or_else(|| CliError::Config("explicit coefficients need [reduction] xi".into()))?;
            (xi, red.mu.unwrap_or(0.5 * (r.coeffs.alpha + r.coeffs.beta)))
        }
    };
    rep.input("model", &r.spec).input("xi", xi).input("mu", mu);
    let reduced = residual_coeffs(&r.coeffs, xi, mu).map_err(CliError::input)?;
    Ok(Reduction { coeffs: r.coeffs, xi, reduced })
}

pub fn reduce(cfg: &RunConfig, grid: usize) -> Result<Report, CliError> {
    let mut rep = Report::new("reduce");
    let red = reduce_model(cfg, grid, &mut rep)?;
    let (sin_xi, cos_xi) = red.xi.sin_cos();
    let check = verify_reduction(&red.coeffs, &cos_xi, &sin_xi).map_err(CliError::input)?;
    rep.set("coefficients", coeff_map(&red.coeffs))
        .set("reduced", &red.reduced)
        .set("max_mixed_through_4", check.max_mixed_through_4)
        .set("max_mixed_through_5", check.max_mixed_coeff)
        .set("residual_match_error", check.residual_match_error)
        .set("printed_match_error", check.printed_match_error);
    rep.check_le("max_mixed_through_4", check.max_mixed_through_4, 1e-9)
        .check_le("residual_match_error", check.residual_match_error, 1e-9);
    let mut table = Table::new("reduced", &["name", "value"]);
    let r = &red.reduced;
    for (n, v) in [
        ("e2", r.e2),
        ("e3", r.e3),
        ("e4", r.e4),
        ("e5", r.e5),
        ("m", r.m),
        ("n", r.n),
        ("sigma", r.sigma),
        ("cos3xi", r.c),
        ("sin3xi", r.s),
    ] {
        table.push(vec![n.into(), num(v)]);
    }
    rep.tables.push(table);
    Ok(rep)
}

/// Normal form from `[normal_form]`, or else from the reduced model.
fn normal_form(cfg: &RunConfig, grid: usize, rep: &mut Report) -> Result<NormalFormParams, CliError> {
    if let Some(p) = cfg.normal_form() {
        rep.input("normal_form", p);
        return Ok(p);
    }
    if cfg.model.is_some() {
        let red = reduce_model(cfg, grid, rep)?.reduced;
        let p = NormalFormParams::new(red.e2, red.e3, red.e4, red.e5, red.m, red.n);
        rep.input("normal_form", p);
        return Ok(p);
    }
    Err(CliError::Usage("this command needs [normal_form] or a [model] to reduce".into()))
}

// ----------------------------------------------------------- normal form

pub fn solve(cfg: &RunConfig, grid: usize) -> Result<Report, CliError> {
    let mut rep = Report::new("solve");
    let p = normal_form(cfg, grid, &mut rep)?;
    let pts = critical_set(&p).map_err(CliError::input)?;
    let counts = Counts::of(&p).map_err(CliError::input)?;
    let mut table = Table::new("points", &["x", "u", "kind", "value", "morse", "eig1", "eig2", "gradient_norm"]);
    let mut worst = 0.0f64;
    for c in &pts {
        let g = p.gradient(c.x, c.u);
        let gn = g[0].hypot(g[1]);
        let r = c.x.hypot(c.u);
        worst = worst.max(gn / (1.0 + r.powi(7)));
        table.push(vec![
            num(c.x),
            num(c.u),
            label(c.kind),
            num(c.value),
            label(c.class.morse),
            num(c.class.eigenvalues[0]),
            num(c.class.eigenvalues[1]),
            num(gn),
        ]);
    }
    let biax = biaxial_points(&p).map_err(CliError::input)?;
    rep.set("counts", counts)
        .set("axis_polynomial", p.axis_poly())
        .set("biaxial_polynomial", p.biaxial_poly())
        .set("boundary_roots", &biax.boundary);
    rep.check_le("scaled_gradient", worst, 1e-9).check("count_matches", pts.len() == counts.total_critical_pts);
    rep.tables.push(table);
    Ok(rep)
}

fn curves(p: &NormalFormParams, b: &BifsetTable) -> Result<Vec<BifurcationCurve>, CliError> {
    let mut out = vec![swallowtail_section(p.e4, p.e5, p.m, p.n, (b.x_range[0], b.x_range[1]), b.samples)
        .map_err(CliError::input)?];
    out.extend(
        bluebird_section(p.e4, p.e5, p.m, p.n, (b.big_x_range[0], b.big_x_range[1]), b.samples)
            .map_err(CliError::input)?,
    );
    Ok(out)
}

fn curve_table(name: &str, cs: &[BifurcationCurve]) -> Table {
    let mut t = Table::new(name, &["curve", "branch", "param", "e2", "e3"]);
    for c in cs {
        for (k, [e2, e3]) in c.points.iter().enumerate() {
            t.push(vec![label(c.kind), c.branch.to_string(), num(c.params[k]), num(*e2), num(*e3)]);
        }
    }
    t
}

pub fn bifset(cfg: &RunConfig, grid: usize) -> Result<Report, CliError> {
    let mut rep = Report::new("bifset");
    let p = normal_form(cfg, grid, &mut rep)?;
    let b = cfg.bifset.unwrap_or_default();
    rep.input("x_range", b.x_range).input("big_x_range", b.big_x_range).input("samples", b.samples);
    let cs = curves(&p, &b)?;
    let mut worst = 0.0f64;
    let mut summary = Vec::new();
    for c in &cs {
        let w = (0..c.points.len())
            .map(|k| c.residual(k) / (1.0 + c.points[k][0].abs() + c.points[k][1].abs()))
            .fold(0.0, f64::max);
        worst = worst.max(w);
        summary.push(serde_json::json!({
            "curve": c.kind, "branch": c.branch, "points": c.points.len(), "cusps": c.cusps,
            "self_crossings": c.self_crossings(), "max_scaled_residual": w,
        }));
    }
    rep.set("curves", summary);
    rep.check_le("curve_residual", worst, 1e-8);
    rep.tables.push(curve_table("curves", &cs));
    match tangency_check(p.e4, p.e5, p.m, p.n) {
        Ok(t) => {
            let mut tt = Table::new("contacts", &["type", "other", "e2", "e3", "x", "angle"]);
            for (ty, list) in [("contact", &t.contacts), ("transversal", &t.transversal)] {
                for c in list {
                    tt.push(vec![ty.into(), label(c.other), num(c.e2), num(c.e3), num(c.x), num(c.angle)]);
                }
            }
            let max_contact = t.contacts.iter().map(|c| c.angle).fold(0.0, f64::max);
            let min_cross = t.transversal.iter().map(|c| c.angle).fold(f64::INFINITY, f64::min);
            rep.set("tangency", &t);
            rep.check_le("contact_angle", max_contact, 1e-3);
            if min_cross.is_finite() {
                rep.check("transversal_angle", min_cross > 0.1);
            }
            rep.tables.push(tt);
        }
        Err(e) => {
            rep.set("tangency", format!("not computed: {e}"));
        }
    }
    Ok(rep)
}

pub fn census(cfg: &RunConfig, grid: usize) -> Result<Report, CliError> {
    let mut rep = Report::new("census");
    let p = normal_form(cfg, grid, &mut rep)?;
    let c = cfg.census.ok_or_else(|| CliError::Usage("census needs a [census] table".into()))?;
    let g = CensusGrid {
        e2_range: (c.e2_range[0], c.e2_range[1]),
        e3_range: (c.e3_range[0], c.e3_range[1]),
        n_e2: c.n_e2,
        n_e3: c.n_e3,
    };
    rep.input("grid", g);
    let cells = region_census(p.e4, p.e5, p.m, p.n, &g).map_err(CliError::input)?;
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    let mut table =
        Table::new("cells", &["i", "j", "e2", "e3", "axis_roots", "uniaxial_pts", "biaxial_orbits", "total_critical_pts"]);
    for cell in &cells {
        let k = cell.counts;
        *hist.entry(k.total_critical_pts).or_default() += 1;
        table.push(vec![
            cell.i.to_string(),
            cell.j.to_string(),
            num(cell.e2),
            num(cell.e3),
            k.axis_roots.to_string(),
            k.uniaxial_pts.to_string(),
            k.biaxial_orbits.to_string(),
            k.total_critical_pts.to_string(),
        ]);
    }
    let hist: BTreeMap<String, usize> = hist.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    rep.set("cells", cells.len()).set("totals", hist);
    rep.tables.push(table);
    Ok(rep)
}

pub fn path_fn(base: NormalFormParams, parameter: &str) -> Result<impl Fn(f64) -> NormalFormParams + Sync, CliError> {
    let slot: fn(&mut NormalFormParams) -> &mut f64 = match parameter {
        "e2" => |p| &mut p.e2,
        "e3" => |p| &mut p.e3,
        "e4" => |p| &mut p.e4,
        "e5" => |p| &mut p.e5,
        "e6" => |p| &mut p.e6,
        "e8" => |p| &mut p.e8,
        "m" => |p| &mut p.m,
        "n" => |p| &mut p.n,
        other => return Err(CliError::Config(format!("unknown sweep parameter {other:?}"))),
    };
    Ok(move |t| {
        let mut p = base;
        *slot(&mut p) = t;
        p
    })
}

fn branch_table(name: &str, rows: &[critpoints::BranchRow]) -> Table {
    let mut table = Table::new(name, &["t", "branch_id", "x", "u", "kind", "morse"]);
    for r in rows {
        table.push(vec![num(r.t), r.branch_id.to_string(), num(r.x), num(r.u), label(r.kind), label(r.morse)]);
    }
    table
}

pub fn sweep(cfg: &RunConfig, grid: usize) -> Result<Report, CliError> {
    let mut rep = Report::new("sweep");
    let base = normal_form(cfg, grid, &mut rep)?;
    let s = cfg.sweep.clone().ok_or_else(|| CliError::Usage("sweep needs a [sweep] table".into()))?;
    rep.input("parameter", &s.parameter).input("from", s.from).input("to", s.to).input("steps", s.steps);
    let path = path_fn(base, &s.parameter)?;
    let opts = SweepOptions { tol: s.tol, ..SweepOptions::default() };
    let res = branch_sweep(&path, (s.from, s.to), s.steps, &opts).map_err(|e| match e {
        SweepError::Solver(e) => CliError::input(e),
        other => CliError::numerical(other),
    })?;
    rep.set("events", &res.events).set("event_count", res.events.len());
    rep.tables.push(branch_table("branches", &res.rows));
    Ok(rep)
}

// ----------------------------------------------------------- singularity

fn degree_rows(table: &mut Table, case: &str, k: u32, degrees: &[DegreeReport]) {
    for d in degrees {
        table.push(vec![
            case.into(),
            k.to_string(),
            d.degree.to_string(),
            d.dim.to_string(),
            d.leading_dim.to_string(),
            d.missing_dim.to_string(),
            d.witness.map(mono).unwrap_or_default(),
        ]);
    }
}

const DEGREE_HEADER: [&str; 7] = ["case", "k", "degree", "dim", "leading_dim", "missing_dim", "witness"];

pub fn determinacy(poly: Option<&str>, k: Option<u32>, window: u32) -> Result<Report, CliError> {
    let mut rep = Report::new("determinacy");
    let mut table = Table::new("degrees", &DEGREE_HEADER);
    match poly {
        Some(text) => {
            let f: WeightedPoly = text.parse().map_err(CliError::input)?;
            rep.input("poly", f.to_string()).input("window", window);
            match k {
                Some(k) => {
                    let v = k_determined(&f, k, window).map_err(CliError::input)?;
                    degree_rows(&mut table, "-", k, &v.degrees);
                    rep.input("k", k).set("verdict", &v);
                }
                None => {
                    let v = classify_case(&f).map_err(CliError::input)?;
                    degree_rows(&mut table, &v.case.to_string(), v.k, &v.verdict.degrees);
                    rep.set("case", v.case).set("k", v.k).set("asserted", v.asserted).set("verdict", &v.verdict);
                }
            }
        }
        None => {
            rep.input("suite", "seven cases");
            let mut cases = Vec::new();
            for h in case_representatives() {
                let v = classify_case(&h).map_err(CliError::input)?;
                degree_rows(&mut table, &v.case.to_string(), v.k, &v.verdict.degrees);
                rep.check(&format!("case_{}", v.case), v.reproduced());
                cases.push(serde_json::json!({
                    "case": v.case, "jet": h.to_string(), "k": v.k, "asserted": v.asserted,
                    "holds_on_window": v.verdict.holds_on_window, "witness": v.verdict.witness,
                }));
            }
            let f6 = WeightedPoly::from_ints(&[(3, 0, 1), (0, 2, 1)]);
            let plus = f6.add(&WeightedPoly::from_ints(&[(4, 0, 1)]));
            let same = w0_equality(&plus, &f6, 7, 14).map_err(CliError::input)?;
            rep.set("cases", cases).set("w0_f6_plus_x4_equals_w0_f6", same);
            rep.check("w0_f6_plus_x4", same);
        }
    }
    rep.tables.push(table);
    Ok(rep)
}

fn parse_monomials(s: &str) -> Result<Vec<Mono>, CliError> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let parts: Vec<&str> = t.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [a, b] => Ok((
                    a.parse().map_err(|_| CliError::Input(format!("bad monomial {t:?}")))?,
                    b.parse().map_err(|_| CliError::Input(format!("bad monomial {t:?}")))?,
                )),
                _ => Err(CliError::Input(format!("bad monomial {t:?}; expected a,b"))),
            }
        })
        .collect()
}

pub fn versal(poly: Option<&str>, monomials: Option<&str>, window: u32) -> Result<Report, CliError> {
    let mut rep = Report::new("versal");
    let h: WeightedPoly = match poly {
        Some(t) => t.parse().map_err(CliError::input)?,
        None => WeightedPoly::from_ints(&[(3, 0, 1), (0, 2, 1)]),
    };
    let def = match monomials {
        Some(m) => parse_monomials(m)?,
        None => F6_UNFOLDING.to_vec(),
    };
    rep.input("poly", h.to_string()).input("monomials", def.iter().map(|m| mono(*m)).collect::<Vec<_>>());
    rep.input("window", window);
    let v = versal_check(&h, &def, window);
    let mut table = Table::new("degrees", &DEGREE_HEADER);
    degree_rows(&mut table, "-", 0, &v.degrees);
    rep.set("versal", v.versal).set("first_failure", v.first_failure.map(|(d, m)| (d, mono(m))));
    rep.tables.push(table);
    Ok(rep)
}

// -------------------------------------------------------------- spanning

pub fn spanning(samples: usize, seed: u64) -> Result<Report, CliError> {
    let mut rep = Report::new("spanning");
    rep.input("samples", samples).input("seed", seed);
    let s = groupact::spanning_check(samples, seed).map_err(CliError::input)?;
    rep.set("linear_rank", s.linear_rank)
        .set("affine_rank", s.affine_rank)
        .set("explicit_rank", s.explicit_rank)
        .set("identity_residual", s.identity_residual);
    rep.check("linear_rank_25", s.linear_rank == 25)
        .check("affine_rank_25", s.affine_rank == 25)
        .check_le("identity_residual", s.identity_residual, 1e-12);
    Ok(rep)
}

// --------------------------------------------------------------- figdata

/// Point clouds for the region and path figures, with a gnuplot script.
pub fn figdata(cfg: &RunConfig) -> Result<(Report, String), CliError> {
    let mut rep = Report::new("figdata");
    let b = cfg.bifset.unwrap_or_default();
    let (m, n) = cfg.normal_form().map_or((1.0, 1.0), |p| (p.m, p.n));
    rep.input("m", m).input("n", n);
    for (name, e4) in [("curves_neg", -1.0), ("curves_pos", 1.0)] {
        let cs = curves(&NormalFormParams::new(0.0, 0.0, e4, 0.0, m, n), &b)?;
        rep.tables.push(curve_table(name, &cs));
    }
    let g = CensusGrid { e2_range: (-0.2, 0.6), e3_range: (-0.5, 0.5), n_e2: 81, n_e3: 101 };
    let cells = region_census(-1.0, 0.0, m, n, &g).map_err(CliError::input)?;
    let mut census = Table::new("census", &["e2", "e3", "total_critical_pts"]);
    for c in &cells {
        census.push(vec![num(c.e2), num(c.e3), c.counts.total_critical_pts.to_string()]);
    }
    rep.tables.push(census);
    let mut events = BTreeMap::new();
    for (name, e3, e4) in [("path_a", 0.0, 1.0), ("path_b", 0.0, -1.0), ("path_c", 0.3, -1.0)] {
        let base = NormalFormParams::new(0.0, e3, e4, 0.0, m, n);
        let path = path_fn(base, "e2")?;
        let res = branch_sweep(&path, (0.6, -0.2), 200, &SweepOptions::default()).map_err(CliError::numerical)?;
        events.insert(name, res.events.len());
        rep.tables.push(branch_table(name, &res.rows));
    }
    rep.set("sweep_events", events);
    let stem = rep.file_stem();
    let script = gnuplot_script(&stem);
    rep.set("script", format!("{stem}.gp"));
    Ok((rep, script))
}

fn gnuplot_script(stem: &str) -> String {
    let mut s = String::new();
    s.push_str("# gnuplot script for the emitted point clouds\n");
    s.push_str("set datafile separator ','\nset key outside\nset terminal pngcairo size 900,700\n\n");
    for (name, title) in [("curves_neg", "e4 = -1"), ("curves_pos", "e4 = +1")] {
        s.push_str(&format!(
            "set output '{stem}_{name}.png'\nset title 'Bifurcation set, {title}'\nset xlabel 'e2'\nset ylabel 'e3'\n\
             plot '{stem}_{name}.csv' every ::1 using 4:5 with points pt 7 ps 0.3 title 'S and B'\n\n"
        ));
    }
    s.push_str(&format!(
        "set output '{stem}_census.png'\nset title 'Critical point count'\nset xlabel 'e2'\nset ylabel 'e3'\n\
         plot '{stem}_census.csv' every ::1 using 1:2:3 with points pt 5 ps 0.5 palette title 'total'\n\n"
    ));
    for name in ["path_a", "path_b", "path_c"] {
        s.push_str(&format!(
            "set output '{stem}_{name}.png'\nset title 'Branches along {name}'\nset xlabel 'e2'\nset ylabel 'x'\n\
             plot '{stem}_{name}.csv' every ::1 using 1:3 with points pt 7 ps 0.2 title 'x'\n\n"
        ));
    }
    s
}
