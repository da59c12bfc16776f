//! `conegeo` command line interface.

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};
use conegeo_cli::{parse_csv_coords, run_config_file, ExperimentConfig, Task};
use conegeo_core::dynamics::OrbitMode;
use conegeo_core::metrics::MetricKind;
use conegeo_core::serialize::{ConeJson, GaugeJson, MapJson};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "conegeo",
    about = "Cone metrics, spectral radii, horofunctions and orbit dynamics on closed cones",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConeArg {
    /// Cone descriptor JSON, e.g. '{"kind":"orthant","n":2}'
    #[arg(long)]
    cone: String,
}

#[derive(Args, Clone)]
struct MapArg {
    /// Map specification JSON, e.g. '{"kind":"linear","matrix":[[1,1],[1,1]]}'
    #[arg(long)]
    map: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a cone metric between two interior points
    Metric {
        #[command(flatten)]
        cone: ConeArg,
        /// funk | rfunk | thompson | hilbert
        #[arg(long)]
        kind: String,
        /// Comma-separated coordinates
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Spectral radius via eps-perturbed approximate eigenvectors
    Spectral {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        cone: ConeArg,
        #[arg(long, default_value_t = 1.0)]
        eps0: f64,
        #[arg(long, default_value_t = 0.5)]
        decay: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Artifact path (stdout when absent)
        #[arg(long)]
        out: Option<String>,
    },
    /// Iterate an orbit and emit a CSV trace
    Orbit {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        cone: ConeArg,
        #[arg(long)]
        x0: String,
        /// thompson | hilbert
        #[arg(long, default_value = "thompson")]
        mode: String,
        #[arg(long, default_value_t = 10_000)]
        kmax: usize,
        #[arg(long)]
        stride: Option<usize>,
        /// Normalization gauge for hilbert mode: "unit" or a dual vector CSV
        #[arg(long)]
        gauge: Option<String>,
        /// Record h_R from this boundary parameter
        #[arg(long)]
        horo_y: Option<String>,
        /// Record h_F from this boundary parameter
        #[arg(long)]
        horo_z: Option<String>,
        #[arg(long)]
        horo_base: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Evaluate horofunctions or run the Wolff-inequality check
    Horo {
        #[command(subcommand)]
        action: Option<HoroAction>,
        #[command(flatten)]
        eval: HoroEvalArgs,
    },
    /// Aggregated verification reports
    Report {
        #[command(subcommand)]
        action: ReportAction,
    },
    /// Polyhedral dichotomy scan of a Thompson orbit
    Dichotomy {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        cone: ConeArg,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 10_000)]
        kmax: usize,
        /// Skip the rescale to unit spectral radius
        #[arg(long)]
        no_rescale: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run an experiment config file
    Run {
        /// Path to an ExperimentConfig JSON file
        config: PathBuf,
    },
}

/// Flags for direct horofunction evaluation (`horo --cone ... --kind ...`).
#[derive(Args, Clone)]
struct HoroEvalArgs {
    /// Cone descriptor JSON
    #[arg(long)]
    cone: Option<String>,
    /// hF | hR | hH
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    param_y: Option<String>,
    #[arg(long)]
    param_z: Option<String>,
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    x: Option<String>,
}

#[derive(Subcommand)]
enum HoroAction {
    /// Check the Wolff inequalities on random interior samples
    CheckWolff {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        cone: ConeArg,
        #[arg(long)]
        param_y: String,
        #[arg(long)]
        param_z: String,
        #[arg(long)]
        base: Option<String>,
        /// Reference spectral radius (computed when absent)
        #[arg(long)]
        r_hat: Option<f64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum ReportAction {
    /// Denjoy-Wolff verification across several starts
    Dw {
        #[command(flatten)]
        map: MapArg,
        #[command(flatten)]
        cone: ConeArg,
        /// JSON file with an array of start coordinate arrays
        #[arg(long)]
        starts: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        kmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Gauge for hilbert-mode orbits: "unit" or a dual vector CSV
        #[arg(long)]
        gauge: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
}

fn parse_cone(s: &str) -> Result<ConeJson> {
    Ok(serde_json::from_str(s)?)
}

fn parse_map(s: &str) -> Result<MapJson> {
    Ok(serde_json::from_str(s)?)
}

fn parse_gauge(s: &Option<String>) -> Result<Option<GaugeJson>> {
    match s.as_deref() {
        None | Some("unit") => Ok(None),
        Some(csv) => Ok(Some(GaugeJson::Dual {
            phi: parse_csv_coords(csv)?,
        })),
    }
}

fn metric_kind(s: &str) -> Result<MetricKind> {
    match s {
        "funk" => Ok(MetricKind::Funk),
        "rfunk" => Ok(MetricKind::RFunk),
        "thompson" => Ok(MetricKind::Thompson),
        "hilbert" => Ok(MetricKind::Hilbert),
        other => Err(anyhow!("unknown metric kind `{other}`")),
    }
}

fn orbit_mode(s: &str) -> Result<OrbitMode> {
    match s {
        "thompson" => Ok(OrbitMode::Thompson),
        "hilbert" => Ok(OrbitMode::Hilbert),
        other => Err(anyhow!("unknown orbit mode `{other}`")),
    }
}

fn dispatch() -> Result<i32> {
    let cli = Cli::parse();
    let cwd = std::env::current_dir()?;
    match cli.command {
        Command::Metric { cone, kind, x, y } => {
            let cfg = ExperimentConfig {
                cone: parse_cone(&cone.cone)?,
                map: None,
                task: Task::Metric,
                params: json!({
                    "kind": metric_kind(&kind)?,
                    "x": parse_csv_coords(&x)?,
                    "y": parse_csv_coords(&y)?,
                }),
                output: None,
                seed: 0,
            };
            conegeo_cli::run(&cfg, &cwd)
        }
        Command::Spectral {
            map,
            cone,
            eps0,
            decay,
            tol,
            out,
        } => {
            let cfg = ExperimentConfig {
                cone: parse_cone(&cone.cone)?,
                map: Some(parse_map(&map.map)?),
                task: Task::Spectral,
                params: json!({ "eps0": eps0, "decay": decay, "tol": tol }),
                output: out,
                seed: 0,
            };
            conegeo_cli::run(&cfg, &cwd)
        }
        Command::Orbit {
            map,
            cone,
            x0,
            mode,
            kmax,
            stride,
            gauge,
            horo_y,
            horo_z,
            horo_base,
            out,
        } => {
            let mut params = json!({
                "x0": parse_csv_coords(&x0)?,
                "mode": orbit_mode(&mode)?,
                "k_max": kmax,
            });
            let obj = params.as_object_mut().unwrap();
            if let Some(s) = stride {
                obj.insert("stride".into(), json!(s));
            }
            if let Some(g) = parse_gauge(&gauge)? {
                obj.insert("gauge".into(), serde_json::to_value(g)?);
            }
            if let Some(y) = &horo_y {
                obj.insert("horo_y".into(), json!(parse_csv_coords(y)?));
            }
            if let Some(z) = &horo_z {
                obj.insert("horo_z".into(), json!(parse_csv_coords(z)?));
            }
            if let Some(b) = &horo_base {
                obj.insert("horo_base".into(), json!(parse_csv_coords(b)?));
            }
            let cfg = ExperimentConfig {
                cone: parse_cone(&cone.cone)?,
                map: Some(parse_map(&map.map)?),
                task: Task::Orbit,
                params,
                output: out,
                seed: 0,
            };
            conegeo_cli::run(&cfg, &cwd)
        }
        Command::Horo { action, eval } => match action {
            None => {
                let cone = eval
                    .cone
                    .ok_or_else(|| anyhow!("horo evaluation requires --cone"))?;
                let kind = eval
                    .kind
                    .ok_or_else(|| anyhow!("horo evaluation requires --kind hF|hR|hH"))?;
                let x = eval.x.ok_or_else(|| anyhow!("horo evaluation requires --x"))?;
                let mut params = json!({
                    "kind": kind,
                    "x": parse_csv_coords(&x)?,
                });
                let obj = params.as_object_mut().unwrap();
                if let Some(y) = &eval.param_y {
                    obj.insert("y".into(), json!(parse_csv_coords(y)?));
                }
                if let Some(z) = &eval.param_z {
                    obj.insert("z".into(), json!(parse_csv_coords(z)?));
                }
                if let Some(b) = &eval.base {
                    obj.insert("base".into(), json!(parse_csv_coords(b)?));
                }
                let cfg = ExperimentConfig {
                    cone: parse_cone(&cone)?,
                    map: None,
                    task: Task::Horo,
                    params,
                    output: None,
                    seed: 0,
                };
                conegeo_cli::run(&cfg, &cwd)
            }
            Some(HoroAction::CheckWolff {
                map,
                cone,
                param_y,
                param_z,
                base,
                r_hat,
                samples,
                seed,
                out,
            }) => {
                let mut params = json!({
                    "kind": "hH",
                    "y": parse_csv_coords(&param_y)?,
                    "z": parse_csv_coords(&param_z)?,
                    "check_wolff": true,
                    "samples": samples,
                });
                let obj = params.as_object_mut().unwrap();
                if let Some(b) = &base {
                    obj.insert("base".into(), json!(parse_csv_coords(b)?));
                }
                if let Some(r) = r_hat {
                    obj.insert("r_hat".into(), json!(r));
                }
                let cfg = ExperimentConfig {
                    cone: parse_cone(&cone.cone)?,
                    map: Some(parse_map(&map.map)?),
                    task: Task::Horo,
                    params,
                    output: out,
                    seed,
                };
                conegeo_cli::run(&cfg, &cwd)
            }
        },
        Command::Report { action } => match action {
            ReportAction::Dw {
                map,
                cone,
                starts,
                kmax,
                seed,
                gauge,
                out,
            } => {
                let mut params = json!({
                    "starts_file": starts.to_string_lossy(),
                    "k_max": kmax,
                });
                if let Some(g) = parse_gauge(&gauge)? {
                    params
                        .as_object_mut()
                        .unwrap()
                        .insert("gauge".into(), serde_json::to_value(g)?);
                }
                let cfg = ExperimentConfig {
                    cone: parse_cone(&cone.cone)?,
                    map: Some(parse_map(&map.map)?),
                    task: Task::DwReport,
                    params,
                    output: out,
                    seed,
                };
                conegeo_cli::run(&cfg, &cwd)
            }
        },
        Command::Dichotomy {
            map,
            cone,
            x0,
            kmax,
            no_rescale,
            out,
        } => {
            let cfg = ExperimentConfig {
                cone: parse_cone(&cone.cone)?,
                map: Some(parse_map(&map.map)?),
                task: Task::Dichotomy,
                params: json!({
                    "x0": parse_csv_coords(&x0)?,
                    "k_max": kmax,
                    "rescale": !no_rescale,
                }),
                output: out,
                seed: 0,
            };
            conegeo_cli::run(&cfg, &cwd)
        }
        Command::Run { config } => run_config_file(&config),
    }
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
