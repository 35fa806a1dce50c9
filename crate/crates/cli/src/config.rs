//! Run configuration read from a TOML file.

use std::path::{Path, PathBuf};

use critpoints::NormalFormParams;
use invariants::LandauCoeffs;
use landau::{ModelSpec, SolverOptions};
use serde::Deserialize;
use toml::Spanned;

use crate::error::CliError;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub model: Option<ModelTable>,
    pub reduction: Option<ReductionTable>,
    pub normal_form: Option<Spanned<NormalFormTable>>,
    #[serde(default)]
    pub solver: SolverTable,
    #[serde(default)]
    pub quadrature: QuadratureTable,
    pub sweep: Option<SweepTable>,
    pub census: Option<CensusTable>,
    pub bifset: Option<BifsetTable>,
    pub molien: Option<MolienTable>,
    pub invariants: Option<InvariantsTable>,
    pub determinacy: Option<DeterminacyTable>,
    pub versal: Option<VersalTable>,
    pub spanning: Option<SpanningTable>,
    #[serde(default)]
    pub output: OutputTable,
}

/// `[model.cone]` or `[model.coeffs]`, never both.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelTable {
    pub cone: Option<Spanned<ConeTable>>,
    pub coeffs: Option<Spanned<CoeffsTable>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeTable {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "U0")]
    pub u0: f64,
    pub lambda: Option<[f64; 3]>,
    /// Cone angle; `λ` is then the point of `K_T` at this angle.
    pub xi: Option<f64>,
    #[serde(rename = "kT")]
    pub kt: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffsTable {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    #[serde(default)]
    pub a3: f64,
    #[serde(default)]
    pub a4: f64,
    #[serde(default)]
    pub b4: f64,
    #[serde(default)]
    pub a5: f64,
    #[serde(default)]
    pub b5: f64,
    #[serde(default)]
    pub a6: f64,
    #[serde(default)]
    pub b6: f64,
    #[serde(default)]
    pub c6: f64,
    #[serde(default)]
    pub d6: f64,
}

impl CoeffsTable {
    pub fn to_coeffs(&self) -> LandauCoeffs<f64> {
        LandauCoeffs::from_vec(vec![
            self.alpha, self.beta, self.gamma, self.a3, self.a4, self.b4, self.a5, self.b5, self.a6, self.b6, self.c6,
            self.d6,
        ])
    }
}

/// Reduction angle and `μ` for explicit coefficients.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionTable {
    pub xi: Option<f64>,
    pub xi_deg: Option<f64>,
    pub mu: Option<f64>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormTable {
    #[serde(default)]
    pub e2: f64,
    #[serde(default)]
    pub e3: f64,
    pub e4: f64,
    #[serde(default)]
    pub e5: f64,
    #[serde(default)]
    pub e6: f64,
    #[serde(default)]
    pub e8: f64,
    pub m: f64,
    pub n: f64,
}

impl NormalFormTable {
    pub fn params(&self) -> NormalFormParams {
        NormalFormParams { e2: self.e2, e3: self.e3, e4: self.e4, e5: self.e5, e6: self.e6, e8: self.e8, m: self.m, n: self.n }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverTable {
    pub search_radius: f64,
    pub grid_n: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub degeneracy_tol: f64,
}

impl Default for SolverTable {
    fn default() -> Self {
        let d = SolverOptions::default();
        Self {
            search_radius: d.search_radius,
            grid_n: d.grid_n,
            tol: d.tol,
            max_iter: d.max_iter,
            degeneracy_tol: d.degeneracy_tol,
        }
    }
}

impl SolverTable {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            search_radius: self.search_radius,
            grid_n: self.grid_n,
            tol: self.tol,
            max_iter: self.max_iter,
            degeneracy_tol: self.degeneracy_tol,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureTable {
    pub grid: usize,
}

impl Default for QuadratureTable {
    fn default() -> Self {
        Self { grid: kkls_entropy::DEFAULT_GRID }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepTable {
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_sweep_tol")]
    pub tol: f64,
}

fn default_steps() -> usize {
    400
}

fn default_sweep_tol() -> f64 {
    1e-10
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusTable {
    pub e2_range: [f64; 2],
    pub e3_range: [f64; 2],
    #[serde(default = "default_census_n")]
    pub n_e2: usize,
    #[serde(default = "default_census_n")]
    pub n_e3: usize,
}

fn default_census_n() -> usize {
    41
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BifsetTable {
    #[serde(default = "default_x_range")]
    pub x_range: [f64; 2],
    #[serde(default = "default_big_x_range")]
    pub big_x_range: [f64; 2],
    #[serde(default = "default_samples")]
    pub samples: usize,
}

impl Default for BifsetTable {
    fn default() -> Self {
        Self { x_range: default_x_range(), big_x_range: default_big_x_range(), samples: default_samples() }
    }
}

fn default_x_range() -> [f64; 2] {
    [-1.5, 1.5]
}

fn default_big_x_range() -> [f64; 2] {
    [0.0, 2.0]
}

fn default_samples() -> usize {
    201
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MolienTable {
    pub group: Option<String>,
    pub max_degree: Option<usize>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantsTable {
    pub points: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeterminacyTable {
    pub poly: Option<String>,
    pub k: Option<u32>,
    pub window: Option<u32>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VersalTable {
    pub poly: Option<String>,
    pub monomials: Option<String>,
    pub window: Option<u32>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanningTable {
    pub samples: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Both,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputTable {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

/// 1-based line of a byte offset.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<(Self, String), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let cfg = Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        Ok((cfg, text))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of(text, s.start));
            let msg = e.message().trim().to_string();
            match line {
                Some(l) => CliError::Config(format!("line {l}: {msg}")),
                None => CliError::Config(msg),
            }
        })?;
        cfg.validate(text)?;
        Ok(cfg)
    }

    fn validate(&self, text: &str) -> Result<(), CliError> {
        let at = |offset: usize, msg: &str| CliError::Config(format!("line {}: {msg}", line_of(text, offset)));
        if let Some(model) = &self.model {
            match (&model.cone, &model.coeffs) {
                (Some(_), Some(c)) => {
                    return Err(at(c.span().start, "model has both [model.cone] and [model.coeffs]; give exactly one"))
                }
                (None, None) => {
                    return Err(CliError::Config("[model] needs exactly one of [model.cone] or [model.coeffs]".into()))
                }
                (Some(cone), None) => {
                    let c = cone.get_ref();
                    if c.lambda.is_some() == c.xi.is_some() {
                        return Err(at(cone.span().start, "[model.cone] needs exactly one of lambda or xi"));
                    }
                }
                (None, Some(_)) => {}
            }
        }
        if let Some(r) = &self.reduction {
            if r.xi.is_some() && r.xi_deg.is_some() {
                return Err(CliError::Config("[reduction] gives both xi and xi_deg".into()));
            }
        }
        if let Some(nf) = &self.normal_form {
            let p = nf.get_ref();
            let vals = [p.e2, p.e3, p.e4, p.e5, p.e6, p.e8, p.m, p.n];
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(at(nf.span().start, "normal form coefficients must be finite"));
            }
        }
        Ok(())
    }

    /// The coefficient source as a model spec.
    pub fn model_spec(&self) -> Result<ModelSpec, CliError> {
        let model = self.model.as_ref().ok_or_else(|| CliError::Usage("this command needs a [model] table".into()))?;
        if let Some(cone) = &model.cone {
            let c = cone.get_ref();
            let lambda = match (c.lambda, c.xi) {
                (Some(l), _) => l,
                (None, Some(xi)) => landau::cone_point(c.t, xi, c.u0).map_err(CliError::input)?.lambda,
                (None, None) => unreachable!("validated"),
            };
            return Ok(ModelSpec::Cone { t: c.t, u0: c.u0, lambda, kt: c.kt });
        }
        let coeffs = model.coeffs.as_ref().expect("validated");
        Ok(ModelSpec::Explicit(coeffs.get_ref().to_coeffs()))
    }

    pub fn normal_form(&self) -> Option<NormalFormParams> {
        self.normal_form.as_ref().map(|nf| nf.get_ref().params())
    }
}
