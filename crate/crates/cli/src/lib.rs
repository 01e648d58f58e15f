//! Command-line front end: one TOML config per run, four batch commands,
//! and a JSON manifest next to every set of outputs.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use mink_core::estimators::{
    covering_bound_check, covering_resolution, density_field, prop9_triple, r_sweep, CoveringCheck,
    EstimatorConfig, EstimatorKind, Prop9Triple,
};
use mink_core::geometry::Point;
use mink_core::mincontent::{content_sweep, fixture};
use mink_core::processes::{sample, ModelSpec, RngStream};
use mink_core::reporting::{sweep_csv_string, write_field_json, write_json, RunManifest};

pub const CONFIG_HELP: &str = "\
CONFIG FILE (TOML; a manifest.json written by a previous run is also accepted)

[model]                      required by sweep, field and check
  kind = \"random_point\"      pdf = { kind = ..., window = { lo = [..], hi = [..] } }
  kind = \"grain_union\"       count = { kind = ... }, grain = { kind = ... }
  kind = \"poisson_line\"      intensity > 0
  kind = \"poisson_segment\"   center_intensity > 0, length = { kind = ... }
  kind = \"birth_growth\"      nucleation = { kind = ... }, growth_speed > 0,
                             time > 0, target = \"boundary\" | \"solid\"
  pdf / center kinds:
    uniform_box         window
    affine_x            window, c with |c| * half-width <= 1 (density 1 + c (x - mid))
    gaussian_truncated  mean (inside window), sigma > 0, window
  count kinds: deterministic { k >= 1 }, geometric_on_positives { p in (0, 1) },
               one_plus_poisson { mean >= 0 }
  grain kinds: segment { center, length }, circle { center, radius > 0 }
  length kinds: fixed { length > 0 }, uniform_interval { 0 < lo < hi }
  nucleation kinds: constant_rate { a >= 0 }, affine_rate { a >= 0, c } (rate a (1 + c x) >= 0 on the window)

[estimator]                  required by sweep, field and check
  radii          strictly descending, each in (0, 1]
  replicates     number of realizations M >= 1
  grid_per_axis  quadrature cells per axis on region, >= 1
  seed           master seed (overridden by --seed)
  region         box A = { lo = [..], hi = [..] }, inside clip
  clip           sampling window W containing region in its interior
  point          optional evaluation point; defaults to the center of region

[sweep]
  estimator      \"oplus\" (default) | \"scale\" | \"integrated\"

[field]
  r              enlargement radius in (0, 1]; defaults to the last estimator radius

[content]                    required by content
  fixture        segment | polyline | circle | point | two_segments |
                 clipped_segment | edge_aligned
  radii          strictly descending, each > 0

[check]
  realizations      sampled realizations for the covering bound (default 200)
  radii             radii in (0, 2) for the covering bound (default [1.0, 0.5, 0.1, 0.05])
  prop9_radii       radii in (0, 1] for the count factorization; grain_union only (default none)
  prop9_replicates  realizations per factorization radius (default 20000)

EXIT CODES
  0 success, 1 invalid config, 2 runtime failure, 3 property check failed";

#[derive(Debug, Parser)]
#[command(name = "mink", version, about = "Minkowski-enlargement estimators of mean densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convergence sweep of one estimator along the configured radii.
    #[command(after_long_help = CONFIG_HELP)]
    Sweep(CommonArgs),
    /// Density field on the quadrature grid of the region.
    #[command(after_long_help = CONFIG_HELP)]
    Field(CommonArgs),
    /// Minkowski content sweep of a deterministic catalogue fixture.
    #[command(after_long_help = CONFIG_HELP)]
    Content(CommonArgs),
    /// Covering-bound and count-factorization checks on sampled realizations.
    #[command(after_long_help = CONFIG_HELP)]
    Check(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sweep(_) => "sweep",
            Command::Field(_) => "field",
            Command::Content(_) => "content",
            Command::Check(_) => "check",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Sweep(a) | Command::Field(a) | Command::Content(a) | Command::Check(a) => a,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Run configuration (TOML) or a manifest.json to replay.
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Master seed; overrides `estimator.seed`.
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Worker threads; outputs do not depend on this.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOptions {
    #[serde(default)]
    pub estimator: EstimatorKind,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContentOptions {
    pub fixture: String,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckOptions {
    #[serde(default = "default_realizations")]
    pub realizations: u64,
    #[serde(default = "default_check_radii")]
    pub radii: Vec<f64>,
    #[serde(default)]
    pub prop9_radii: Vec<f64>,
    #[serde(default = "default_prop9_replicates")]
    pub prop9_replicates: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            realizations: default_realizations(),
            radii: default_check_radii(),
            prop9_radii: Vec::new(),
            prop9_replicates: default_prop9_replicates(),
        }
    }
}

fn default_realizations() -> u64 {
    200
}

fn default_check_radii() -> Vec<f64> {
    vec![1.0, 0.5, 0.1, 0.05]
}

fn default_prop9_replicates() -> u64 {
    20_000
}

/// Everything a run reads. Echoed verbatim into the manifest.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimator: Option<EstimatorConfig>,
    #[serde(default)]
    pub sweep: SweepOptions,
    #[serde(default)]
    pub field: FieldOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content: Option<ContentOptions>,
    #[serde(default)]
    pub check: CheckOptions,
}

/// A failed command, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(anyhow::Error),
    Property(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Property(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid configuration: {m}"),
            CliError::Runtime(e) => write!(f, "error: {e:#}"),
            CliError::Property(m) => write!(f, "property check failed: {m}"),
        }
    }
}

impl From<mink_core::Error> for CliError {
    fn from(e: mink_core::Error) -> Self {
        match e {
            mink_core::Error::InvalidParameter { .. } | mink_core::Error::DimensionMismatch { .. } => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Runtime(other.into()),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

fn invalid(field: &str, constraint: impl fmt::Display) -> CliError {
    CliError::Validation(format!("`{field}`: {constraint}"))
}

impl RunConfig {
    /// Parse a TOML config, or the `config` echoed in a manifest (`.json`).
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(CliError::Runtime)?;
        if path.extension().is_some_and(|e| e == "json") {
            let m: RunManifest = serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            return serde_json::from_value(m.config)
                .map_err(|e| CliError::Validation(format!("{}: manifest config: {e}", path.display())));
        }
        toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }

    fn model(&self) -> Result<&ModelSpec, CliError> {
        let m = self.model.as_ref().ok_or_else(|| invalid("model", "section is required"))?;
        m.validate()?;
        Ok(m)
    }

    fn estimator(&self) -> Result<&EstimatorConfig, CliError> {
        let e = self
            .estimator
            .as_ref()
            .ok_or_else(|| invalid("estimator", "section is required"))?;
        e.validate()?;
        Ok(e)
    }

    /// Check every field the given command reads.
    pub fn validate_for(&self, command: &str) -> Result<(), CliError> {
        match command {
            "sweep" => {
                self.model()?;
                self.estimator()?;
            }
            "field" => {
                self.model()?;
                let e = self.estimator()?;
                if let Some(r) = self.field.r {
                    if !(r > 0.0 && r <= 1.0) {
                        return Err(invalid("field.r", "must lie in (0, 1]"));
                    }
                }
                if e.grid_per_axis > 4096 {
                    return Err(invalid("estimator.grid_per_axis", "at most 4096 for field output"));
                }
            }
            "content" => {
                let c = self
                    .content
                    .as_ref()
                    .ok_or_else(|| invalid("content", "section is required"))?;
                fixture(&c.fixture)?;
                if c.radii.is_empty() || c.radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
                    return Err(invalid("content.radii", "at least one radius, each positive"));
                }
                if c.radii.windows(2).any(|w| w[1] >= w[0]) {
                    return Err(invalid("content.radii", "must be strictly descending"));
                }
            }
            "check" => {
                let m = self.model()?;
                self.estimator()?;
                let c = &self.check;
                if c.realizations == 0 {
                    return Err(invalid("check.realizations", "must be at least 1"));
                }
                if c.radii.iter().any(|r| !(*r > 0.0 && *r < 2.0)) {
                    return Err(invalid("check.radii", "each radius must lie in (0, 2)"));
                }
                if c.prop9_radii.iter().any(|r| !(*r > 0.0 && *r <= 1.0)) {
                    return Err(invalid("check.prop9_radii", "each radius must lie in (0, 1]"));
                }
                if !c.prop9_radii.is_empty() {
                    if !matches!(m, ModelSpec::GrainUnion { .. }) {
                        return Err(invalid("check.prop9_radii", "requires a grain_union model"));
                    }
                    if c.prop9_replicates == 0 {
                        return Err(invalid("check.prop9_replicates", "must be at least 1"));
                    }
                }
            }
            other => return Err(invalid("command", format!("unknown command `{other}`"))),
        }
        Ok(())
    }
}

/// Files written by a successful command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub outputs: Vec<PathBuf>,
    pub summary: String,
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(CliError::Runtime)
}

pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let (model, est) = (cfg.model()?, cfg.estimator()?);
    let kind = cfg.sweep.estimator;
    let rep = r_sweep(model, est, kind)?;
    let path = out.join(format!("sweep_{kind}.csv"));
    write_text(&path, &sweep_csv_string(&rep))?;
    let mut summary = format!("{kind} sweep, M = {}\n", est.replicates);
    for row in &rep.rows {
        summary.push_str(&format!(
            "  r = {:<8} estimate = {:.6} ± {:.6}",
            row.r, row.estimate.value, row.estimate.stderr
        ));
        if let Some(v) = row.reference {
            summary.push_str(&format!("  reference = {v:.6}"));
        }
        summary.push('\n');
    }
    Ok(Outcome {
        outputs: vec![path],
        summary,
    })
}

pub fn cmd_field(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let (model, est) = (cfg.model()?, cfg.estimator()?);
    let r = cfg.field.r.unwrap_or(*est.radii.last().expect("validated nonempty"));
    let field = density_field(model, est, r)?;
    let path = out.join("field.json");
    write_field_json(&field, &path)?;
    let summary = format!(
        "field {}x{} at r = {r}: mean {:.6}, x-slope {:.6}\n",
        field.shape[0],
        field.shape[1],
        field.mean(),
        field.slope_x()
    );
    Ok(Outcome {
        outputs: vec![path],
        summary,
    })
}

pub fn cmd_content(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let c = cfg
        .content
        .as_ref()
        .ok_or_else(|| invalid("content", "section is required"))?;
    let f = fixture(&c.fixture)?;
    let mut rep = content_sweep(&f.set, &f.region, &c.radii)?;
    rep.meta.fixture = Some(c.fixture.clone());
    let path = out.join(format!("content_{}.csv", c.fixture));
    write_text(&path, &sweep_csv_string(&rep))?;
    let mut summary = format!("fixture {}\n", c.fixture);
    for row in &rep.rows {
        summary.push_str(&format!(
            "  r = {:<8} ratio = {:.6}  H^n(S ∩ A) = {:.6}\n",
            row.r,
            row.estimate.value,
            row.reference.unwrap_or(f64::NAN)
        ));
    }
    Ok(Outcome {
        outputs: vec![path],
        summary,
    })
}

/// Output document of `check`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub covering: Vec<CoveringRecord>,
    pub covering_failures: usize,
    pub factorization: Vec<Prop9Triple>,
    /// Overlap ratio at the smallest radius is below the one at the largest.
    pub overlap_decreasing: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringRecord {
    pub realization: u64,
    #[serde(flatten)]
    pub check: CoveringCheck,
}

pub fn cmd_check(cfg: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let (model, est) = (cfg.model()?, cfg.estimator()?);
    let c = &cfg.check;
    let mut covering = Vec::new();
    for i in 0..c.realizations {
        let s = sample(model, &est.region, RngStream::new(est.seed, i))?;
        for &r in &c.radii {
            if let Some(check) = covering_bound_check(&s, r, covering_resolution(&s, r))? {
                covering.push(CoveringRecord { realization: i, check });
            }
        }
    }
    let covering_failures = covering.iter().filter(|c| !c.check.ok).count();

    let x: Point = est.eval_point();
    let factorization = c
        .prop9_radii
        .iter()
        .map(|&r| prop9_triple(model, &x, r, c.prop9_replicates, est.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let overlap_decreasing = match (factorization.first(), factorization.last()) {
        (Some(a), Some(b)) if factorization.len() > 1 => {
            let (big, small) = if a.r > b.r { (a, b) } else { (b, a) };
            Some(small.overlap_ratio.value < big.overlap_ratio.value)
        }
        _ => None,
    };
    let report = CheckReport {
        covering,
        covering_failures,
        factorization,
        overlap_decreasing,
    };
    let path = out.join("check.json");
    write_json(&report, &path)?;

    let mut summary = format!(
        "covering bound: {} checks, {} failures\n",
        report.covering.len(),
        covering_failures
    );
    for t in &report.factorization {
        summary.push_str(&format!(
            "  r = {:<8} theta {:.5}  count {:.5}  factored {:.5}  overlap {:.5}  max z {:.2}\n",
            t.r,
            t.theta_ratio.value,
            t.count_ratio.value,
            t.factored_ratio.value,
            t.overlap_ratio.value,
            t.max_pairwise_z()
        ));
    }
    if covering_failures > 0 {
        return Err(CliError::Property(format!(
            "{covering_failures} covering-bound checks failed; see {}",
            path.display()
        )));
    }
    Ok(Outcome {
        outputs: vec![path],
        summary,
    })
}

/// Load, override, validate, run and write the manifest.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let args = cli.command.args();
    let name = cli.command.name();
    let mut cfg = RunConfig::load(&args.config)?;
    if let (Some(seed), Some(e)) = (args.seed, cfg.estimator.as_mut()) {
        e.seed = seed;
    }
    cfg.validate_for(name)?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))
        .map_err(CliError::Runtime)?;

    let go = || match &cli.command {
        Command::Sweep(_) => cmd_sweep(&cfg, &args.out),
        Command::Field(_) => cmd_field(&cfg, &args.out),
        Command::Content(_) => cmd_content(&cfg, &args.out),
        Command::Check(_) => cmd_check(&cfg, &args.out),
    };
    let result = match args.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .context("building the worker pool")
            .map_err(CliError::Runtime)?
            .install(go),
        None => go(),
    };

    // A failed property check still leaves its report behind.
    let outputs = match &result {
        Ok(o) => o.outputs.clone(),
        Err(CliError::Property(_)) if name == "check" => vec![args.out.join("check.json")],
        Err(_) => return result,
    };
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: name.to_string(),
        config: serde_json::to_value(&cfg).context("serializing config").map_err(CliError::Runtime)?,
        seed: cfg.estimator.as_ref().map(|e| e.seed).unwrap_or(0),
        timestamp: chrono::Utc::now().to_rfc3339(),
        outputs: outputs
            .iter()
            .map(|p| p.file_name().map(PathBuf::from).unwrap_or_else(|| p.clone()))
            .collect(),
    };
    manifest.write(&args.out.join("manifest.json"))?;
    result
}
