//! Experiment harness: JSON experiment configs dispatched onto the library
//! operations, with deterministic JSON/CSV artifacts.
//!
//! Exit status convention: 0 success, 2 hypotheses unmet (for instance a
//! Denjoy-Wolff task on a map with an interior eigenvector), 1 error.

use anyhow::{anyhow, bail, Context, Result};
use conegeo_core::cone::{ConeDescriptor, DualFunctional, Point};
use conegeo_core::dynamics::{
    self, denjoy_wolff_report, dichotomy_scan, iterate_orbit, OrbitMode, OrbitTrace,
};
use conegeo_core::horo::{check_wolff, eval_horofunction, Horofunction};
use conegeo_core::maps::{GaugeSpec, MapSpec};
use conegeo_core::metrics::{metric_value, MetricKind};
use conegeo_core::sampling::random_interior_point;
use conegeo_core::serialize::{cone_from_json, map_from_json, ConeJson, GaugeJson, MapJson};
use conegeo_core::spectral::spectral_radius;
use rand::SeedableRng;
use serde::Deserialize;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

pub use conegeo_core as core;

/// Environment variable overriding the config seed.
pub const SEED_ENV: &str = "CONEGEO_SEED";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub cone: ConeJson,
    #[serde(default)]
    pub map: Option<MapJson>,
    pub task: Task,
    #[serde(default)]
    pub params: serde_json::Value,
    /// Artifact path; stdout when absent.
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Metric,
    Spectral,
    Orbit,
    Horo,
    DwReport,
    Dichotomy,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricParams {
    kind: MetricKind,
    x: Vec<f64>,
    y: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralParams {
    #[serde(default = "default_eps0")]
    eps0: f64,
    #[serde(default = "default_decay")]
    decay: f64,
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default)]
    u: Option<Vec<f64>>,
}

fn default_eps0() -> f64 {
    1.0
}
fn default_decay() -> f64 {
    0.5
}
fn default_tol() -> f64 {
    1e-10
}
fn default_kmax() -> usize {
    10_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitParams {
    x0: Vec<f64>,
    mode: OrbitMode,
    #[serde(default = "default_kmax")]
    k_max: usize,
    #[serde(default)]
    stride: Option<usize>,
    #[serde(default)]
    gauge: Option<GaugeJson>,
    #[serde(default)]
    horo_y: Option<Vec<f64>>,
    #[serde(default)]
    horo_z: Option<Vec<f64>>,
    #[serde(default)]
    horo_base: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct HoroParams {
    kind: String,
    #[serde(default)]
    y: Option<Vec<f64>>,
    #[serde(default)]
    z: Option<Vec<f64>>,
    #[serde(default)]
    base: Option<Vec<f64>>,
    #[serde(default)]
    x: Option<Vec<f64>>,
    /// When set, run the Wolff-inequality check against this map instead of
    /// evaluating at x.
    #[serde(default)]
    check_wolff: bool,
    #[serde(default)]
    r_hat: Option<f64>,
    #[serde(default = "default_wolff_samples")]
    samples: usize,
}

fn default_wolff_samples() -> usize {
    100
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DwParams {
    #[serde(default)]
    starts: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    starts_file: Option<String>,
    #[serde(default = "default_kmax")]
    k_max: usize,
    #[serde(default)]
    gauge: Option<GaugeJson>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DichotomyParams {
    x0: Vec<f64>,
    #[serde(default = "default_kmax")]
    k_max: usize,
    /// Rescale to unit spectral radius before the scan (default true).
    #[serde(default = "default_true")]
    rescale: bool,
}

fn default_true() -> bool {
    true
}

/// Deterministic float formatting for CSV artifacts (17 significant digits,
/// round-trip exact); non-finite values render as blank cells.
pub fn csv_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

pub fn gauge_from_json(g: &Option<GaugeJson>) -> GaugeSpec {
    match g {
        Some(GaugeJson::Dual { phi }) => GaugeSpec::DualFunctional(DualFunctional {
            coords: phi.clone(),
        }),
        Some(GaugeJson::OrderUnit) | None => GaugeSpec::OrderUnitNorm,
    }
}

pub fn orbit_trace_csv(trace: &OrbitTrace, horo_mask: [bool; 3]) -> String {
    let dim = trace.cone.ambient_dim;
    let mut out = String::new();
    let coord_cols: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
    let _ = writeln!(
        out,
        "k,{},log_gauge,thompson_step,hilbert_step,interior_gap,hF,hR,hH",
        coord_cols.join(",")
    );
    for r in &trace.records {
        let coords: Vec<String> = r.coords.iter().map(|c| csv_float(*c)).collect();
        let mut horo_cells = [String::new(), String::new(), String::new()];
        let mut src = r.horo_values.iter();
        for (cell, present) in horo_cells.iter_mut().zip(horo_mask) {
            if present {
                if let Some(v) = src.next() {
                    *cell = csv_float(*v);
                }
            }
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.k,
            coords.join(","),
            csv_float(r.log_gauge),
            r.thompson_step.map(csv_float).unwrap_or_default(),
            r.hilbert_step.map(csv_float).unwrap_or_default(),
            csv_float(r.interior_gap),
            horo_cells[0],
            horo_cells[1],
            horo_cells[2],
        );
    }
    out
}

fn emit(output: &Option<String>, base_dir: &Path, content: &str) -> Result<()> {
    match output {
        Some(path) => {
            let full = base_dir.join(path);
            if let Some(parent) = full.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&full, content)
                .with_context(|| format!("writing artifact {}", full.display()))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn to_pretty_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn parse_params<T: serde::de::DeserializeOwned>(cfg: &ExperimentConfig, task: &str) -> Result<T> {
    serde_json::from_value(cfg.params.clone())
        .with_context(|| format!("invalid params for task `{task}`"))
}

fn point(cone: &Arc<ConeDescriptor>, coords: &[f64], field: &str) -> Result<Point> {
    cone.point(coords.to_vec())
        .map_err(|e| anyhow!("{field}: {e}"))
}

fn require_map(cfg: &ExperimentConfig, cone: &Arc<ConeDescriptor>) -> Result<MapSpec> {
    let json = cfg
        .map
        .as_ref()
        .ok_or_else(|| anyhow!("task `{:?}` requires a map", cfg.task))?;
    Ok(map_from_json(json, cone)?)
}

/// Build the horofunctions requested by (y, z, base): h_R from y, h_F from
/// z, h_H from the orthogonal pair.
pub fn build_horofunctions(
    cone: &Arc<ConeDescriptor>,
    y: &Option<Vec<f64>>,
    z: &Option<Vec<f64>>,
    base: &Option<Vec<f64>>,
) -> Result<(Option<Horofunction>, Option<Horofunction>, Option<Horofunction>)> {
    let base_point = match base {
        Some(b) => point(cone, b, "base")?,
        None => cone.unit_point(),
    };
    let h_r = match y {
        Some(yc) => Some(Horofunction::rfunk(
            point(cone, yc, "y")?,
            base_point.clone(),
        )?),
        None => None,
    };
    let h_f = match z {
        Some(zc) => Some(Horofunction::funk_sym(point(cone, zc, "z")?)?),
        None => None,
    };
    let h_h = match (y, z) {
        (Some(yc), Some(zc)) => Some(Horofunction::hilbert_sym(
            point(cone, yc, "y")?,
            point(cone, zc, "z")?,
        )?),
        _ => None,
    };
    Ok((h_f, h_r, h_h))
}

/// Run one experiment; returns the process exit status (0 or 2).
pub fn run(cfg: &ExperimentConfig, base_dir: &Path) -> Result<i32> {
    let seed = std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(cfg.seed);
    let cone = cone_from_json(&cfg.cone).context("invalid cone descriptor")?;
    match cfg.task {
        Task::Metric => {
            let p: MetricParams = parse_params(cfg, "metric")?;
            let x = point(&cone, &p.x, "x")?;
            let y = point(&cone, &p.y, "y")?;
            let v = metric_value(p.kind, &x, &y)?;
            emit(&cfg.output, base_dir, &format!("{v:.14e}\n"))?;
            Ok(0)
        }
        Task::Spectral => {
            let p: SpectralParams = parse_params(cfg, "spectral")?;
            let f = require_map(cfg, &cone)?;
            let u = match &p.u {
                Some(u) => point(&cone, u, "u")?,
                None => cone.unit_point(),
            };
            let report = spectral_radius(&f, &u, p.eps0, p.decay, p.tol)?;
            emit(&cfg.output, base_dir, &to_pretty_json(&report)?)?;
            Ok(0)
        }
        Task::Orbit => {
            let p: OrbitParams = parse_params(cfg, "orbit")?;
            let mut f = require_map(cfg, &cone)?;
            if p.mode == OrbitMode::Hilbert
                && !matches!(f.kind, conegeo_core::maps::MapKind::Normalized { .. })
            {
                f = f.normalized(gauge_from_json(&p.gauge))?;
            }
            let x0 = point(&cone, &p.x0, "x0")?;
            let (h_f, h_r, h_h) = build_horofunctions(&cone, &p.horo_y, &p.horo_z, &p.horo_base)?;
            let mask = [h_f.is_some(), h_r.is_some(), h_h.is_some()];
            let horos: Vec<Horofunction> =
                [h_f, h_r, h_h].into_iter().flatten().collect();
            let trace = iterate_orbit(&f, &x0, p.k_max, p.mode, &horos, p.stride)?;
            emit(&cfg.output, base_dir, &orbit_trace_csv(&trace, mask))?;
            Ok(0)
        }
        Task::Horo => {
            let p: HoroParams = parse_params(cfg, "horo")?;
            let (h_f, h_r, h_h) = build_horofunctions(&cone, &p.y, &p.z, &p.base)?;
            if p.check_wolff {
                let f = require_map(cfg, &cone)?;
                let r_hat = match p.r_hat {
                    Some(r) => r,
                    None => spectral_radius(&f, &cone.unit_point(), 1.0, 0.5, 1e-5)?.r_hat,
                };
                let (h_f, h_r, h_h) = match (h_f, h_r, h_h) {
                    (Some(a), Some(b), Some(c)) => (a, b, c),
                    _ => bail!("check-wolff requires both y and z parameters"),
                };
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let samples: Vec<Point> = (0..p.samples)
                    .map(|_| random_interior_point(&cone, &mut rng))
                    .collect();
                let rep = check_wolff(&f, &h_f, &h_r, &h_h, &samples, r_hat)?;
                emit(&cfg.output, base_dir, &to_pretty_json(&rep)?)?;
                return Ok(0);
            }
            let x = point(
                &cone,
                p.x.as_deref()
                    .ok_or_else(|| anyhow!("horo evaluation requires x"))?,
                "x",
            )?;
            let h = match p.kind.as_str() {
                "hF" => h_f.ok_or_else(|| anyhow!("kind hF requires parameter z"))?,
                "hR" => h_r.ok_or_else(|| anyhow!("kind hR requires parameter y"))?,
                "hH" => h_h.ok_or_else(|| anyhow!("kind hH requires parameters y and z"))?,
                other => bail!("unknown horofunction kind `{other}` (expected hF|hR|hH)"),
            };
            let v = eval_horofunction(&h, &x)?;
            emit(&cfg.output, base_dir, &format!("{v:.14e}\n"))?;
            Ok(0)
        }
        Task::DwReport => {
            let p: DwParams = parse_params(cfg, "dw-report")?;
            let f = require_map(cfg, &cone)?;
            let starts_raw: Vec<Vec<f64>> = match (&p.starts, &p.starts_file) {
                (Some(s), _) => s.clone(),
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(base_dir.join(path))
                        .with_context(|| format!("reading starts file {path}"))?;
                    serde_json::from_str(&text).context("starts file must be a JSON array of coordinate arrays")?
                }
                (None, None) => bail!("dw-report requires starts or starts_file"),
            };
            let starts: Vec<Point> = starts_raw
                .iter()
                .map(|s| point(&cone, s, "start"))
                .collect::<Result<_>>()?;
            let rep = denjoy_wolff_report(&f, gauge_from_json(&p.gauge), &starts, p.k_max, seed)?;
            let unmet = !rep.hypotheses_met;
            emit(&cfg.output, base_dir, &to_pretty_json(&rep)?)?;
            Ok(if unmet { 2 } else { 0 })
        }
        Task::Dichotomy => {
            let p: DichotomyParams = parse_params(cfg, "dichotomy")?;
            let mut f = require_map(cfg, &cone)?;
            if p.rescale {
                let spec = spectral_radius(&f, &cone.unit_point(), 1.0, 0.5, 1e-5)?;
                f = f.scaled(1.0 / spec.r_hat)?;
            }
            let x0 = point(&cone, &p.x0, "x0")?;
            let rep = if matches!(
                cone.kind,
                conegeo_core::cone::ConeKind::Orthant | conegeo_core::cone::ConeKind::Polyhedral { .. }
            ) {
                dynamics::polyhedral_dichotomy_check(&f, &x0, p.k_max)?
            } else {
                // recorded, never asserted, on non-polyhedral cones
                dichotomy_scan(&f, &x0, p.k_max)?
            };
            emit(&cfg.output, base_dir, &to_pretty_json(&rep)?)?;
            Ok(0)
        }
    }
}

/// Convenience wrappers used by the CLI subcommands (same dispatch paths as
/// config files).
pub fn run_config_file(path: &Path) -> Result<i32> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let cfg: ExperimentConfig = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    run(&cfg, base)
}

/// Parse a comma-separated coordinate list.
pub fn parse_csv_coords(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| anyhow!("bad coordinate `{t}`: {e}"))
        })
        .collect()
}
