//! The `lg-lab` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 unwritable output path, 4 no violation anywhere (threshold).

pub mod config;
pub mod figures;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::explorer::{
    eta_threshold_with, maximize, sweep, Axis, ExplorerError, FreeAxis, MaxSpec, Objective, Param,
    Quantity, Regime, SweepSpec, SweepTable, ThresholdSpec,
};
use crate::expressions::{evaluate_numeric, Bias, ChannelDyn, ScenarioConfig};
use crate::macrorealism::analyze;
use crate::quantum::PureStateParams;

use config::RunConfigFile;

pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNWRITABLE: i32 = 3;
pub const EXIT_NO_VIOLATION: i32 = 4;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "LG_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "lg-lab",
    version,
    about = "Leggett-Garg expressions for sequential unsharp qubit measurements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate L, V, all correlators and the NSIT report for one scenario.
    Evaluate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Emit a JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Write the CSV data of one of the six standard figures.
    Figure {
        #[arg(long)]
        id: u32,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate quantities on a 1–3 dimensional parameter grid (CSV).
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Axis as `name=start:stop:steps`, e.g. `p=0:1:101`. Repeatable.
        #[arg(long = "axis")]
        axes: Vec<String>,
        /// Output column, e.g. `L`, `V`, `D_2_13_equal`. Repeatable.
        #[arg(long = "quantity")]
        quantities: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximize L or V over the free parameters of a regime.
    Optimize {
        /// `L`, `V`, or `L:k` / `V:k` for relabeling k in 0..4.
        #[arg(long)]
        objective: String,
        /// unitary-unbiased | unitary-biased | channel-unbiased | channel-biased
        #[arg(long)]
        regime: String,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Comma-separated subset of the regime's parameters to optimize.
        #[arg(long, value_delimiter = ',')]
        free: Vec<String>,
        /// Freeze a parameter, `name=value`. Repeatable.
        #[arg(long = "set")]
        frozen: Vec<String>,
        /// Coarse grid points per free axis.
        #[arg(long, default_value_t = 25)]
        grid: usize,
        #[arg(long)]
        json: bool,
    },
    /// Bisect for the smallest sharpness that allows a violation.
    Threshold {
        #[arg(long)]
        objective: String,
        #[arg(long)]
        regime: String,
        /// Upper end of the sharpness interval.
        #[arg(long, default_value_t = 1.0)]
        eta_max: f64,
        /// Coarse grid points per axis of each inner maximization.
        #[arg(long, default_value_t = 15)]
        grid: usize,
        #[arg(long)]
        json: bool,
    },
    /// Seeded self-check of closed forms, identities and physicality.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
}

/// Scenario given either by `--config` or by individual flags. Angles are
/// radians; each angle has a `-deg` twin in degrees.
#[derive(Debug, Default, Args)]
pub struct ScenarioArgs {
    /// TOML run configuration; other scenario flags are then rejected.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, conflicts_with = "theta_deg", allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_deg: Option<f64>,
    #[arg(long, conflicts_with = "phi_deg", allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi_deg: Option<f64>,
    /// Sharpness η (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Bias α; 0 (the default) selects the unbiased family.
    #[arg(long, conflicts_with = "one_minus_eta", allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Use the biased family α = 1 − η.
    #[arg(long)]
    pub one_minus_eta: bool,
    /// Unitary dynamics exp(−i g σx) (the default).
    #[arg(long, conflicts_with = "channel")]
    pub unitary: bool,
    /// Generalized amplitude damping dynamics.
    #[arg(long)]
    pub channel: bool,
    #[arg(long, conflicts_with = "g1_deg", allow_hyphen_values = true)]
    pub g1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g1_deg: Option<f64>,
    #[arg(long, conflicts_with = "g2_deg", allow_hyphen_values = true)]
    pub g2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g2_deg: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma12: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma23: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma13: Option<f64>,
    /// Derive γ₁₃ from γ₁₂ and γ₂₃ instead of taking it as given.
    #[arg(long)]
    pub strict_composition: bool,
}

impl ScenarioArgs {
    fn any_flag(&self) -> bool {
        self.theta.is_some()
            || self.theta_deg.is_some()
            || self.phi.is_some()
            || self.phi_deg.is_some()
            || self.eta.is_some()
            || self.alpha.is_some()
            || self.one_minus_eta
            || self.unitary
            || self.channel
            || self.g1.is_some()
            || self.g1_deg.is_some()
            || self.g2.is_some()
            || self.g2_deg.is_some()
            || self.p.is_some()
            || self.gamma12.is_some()
            || self.gamma23.is_some()
            || self.gamma13.is_some()
            || self.strict_composition
    }

    /// The run configuration these arguments describe, validated.
    pub fn resolve(&self) -> Result<RunConfigFile, CliError> {
        if let Some(path) = &self.config {
            if self.any_flag() {
                return Err(CliError::invalid(
                    "--config cannot be combined with scenario flags",
                ));
            }
            return RunConfigFile::load(path).map_err(CliError::invalid);
        }
        let angle = |rad: Option<f64>, deg: Option<f64>| {
            rad.or(deg.map(f64::to_radians)).unwrap_or(0.0)
        };
        let state = PureStateParams::new(angle(self.theta, self.theta_deg), angle(self.phi, self.phi_deg));
        let eta = self.eta.unwrap_or(1.0);
        let bias = match (self.one_minus_eta, self.alpha) {
            (true, _) => Bias::OneMinusEta,
            (false, None) => Bias::Unbiased,
            (false, Some(0.0)) => Bias::Unbiased,
            (false, Some(a)) => Bias::Free(a),
        };
        let channel_flag = [
            ("--p", self.p.is_some()),
            ("--gamma12", self.gamma12.is_some()),
            ("--gamma23", self.gamma23.is_some()),
            ("--gamma13", self.gamma13.is_some()),
            ("--strict-composition", self.strict_composition),
        ]
        .into_iter()
        .find(|(_, set)| *set);
        let unitary_flag = [
            ("--g1", self.g1.is_some() || self.g1_deg.is_some()),
            ("--g2", self.g2.is_some() || self.g2_deg.is_some()),
        ]
        .into_iter()
        .find(|(_, set)| *set);
        let scenario = if self.channel {
            if let Some((flag, _)) = unitary_flag {
                return Err(CliError::invalid(format!("{flag} applies to unitary dynamics only")));
            }
            let (g12, g23) = (self.gamma12.unwrap_or(0.0), self.gamma23.unwrap_or(0.0));
            let channel = if self.strict_composition {
                if self.gamma13.is_some() {
                    return Err(CliError::invalid(
                        "--gamma13 conflicts with --strict-composition",
                    ));
                }
                ChannelDyn::composed(self.p.unwrap_or(0.0), g12, g23)
            } else {
                ChannelDyn::new(self.p.unwrap_or(0.0), g12, g23, self.gamma13.unwrap_or(0.0))
            };
            ScenarioConfig::channel(state, eta, bias, channel)
        } else {
            if let Some((flag, _)) = channel_flag {
                return Err(CliError::invalid(format!(
                    "{flag} applies to channel dynamics only (add --channel)"
                )));
            }
            ScenarioConfig::unitary(state, eta, bias, angle(self.g1, self.g1_deg), angle(self.g2, self.g2_deg))
        };
        scenario.validate().map_err(CliError::invalid)?;
        Ok(RunConfigFile::from_scenario(scenario))
    }
}

/// A failed command: message for stderr plus exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl ToString) -> Self {
        CliError {
            code: EXIT_INVALID,
            message: message.to_string(),
        }
    }

    fn unwritable(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_UNWRITABLE,
            message: format!("cannot write {}: {err}", path.display()),
        }
    }
}

impl From<ExplorerError> for CliError {
    fn from(e: ExplorerError) -> Self {
        let code = match e {
            ExplorerError::NoViolationAnywhere { .. } => EXIT_NO_VIOLATION,
            _ => EXIT_INVALID,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Caps the global worker pool from [`THREADS_ENV`] if set.
fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
    {
        // a second initialization in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    configure_threads();
    let stdout = io::stdout();
    match execute(&cli.command, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// Runs one command, writing its primary output to `out`.
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Evaluate { scenario, json } => {
            let file = scenario.resolve()?;
            let cfg = file.scenario;
            let json = *json || file.output.as_ref().is_some_and(|o| o.json);
            let values = evaluate_numeric(&cfg).map_err(CliError::invalid)?;
            let nsit = analyze(&cfg).map_err(CliError::invalid)?;
            let text = if json {
                report::evaluate_json(&cfg, &values, &nsit)
            } else {
                report::evaluate_text(&cfg, &values, &nsit)
            };
            emit(out, &text)?;
        }
        Command::Figure { id, out: path } => {
            if !figures::FIGURE_IDS.contains(id) {
                return Err(CliError::invalid(figures::FigureError::UnknownId(*id)));
            }
            let table = figures::figure_table(*id).map_err(CliError::invalid)?;
            write_table(&table, path.as_deref(), out)?;
        }
        Command::Sweep {
            scenario,
            axes,
            quantities,
            out: path,
        } => {
            let file = scenario.resolve()?;
            let spec = match (file.sweep_spec(), axes.is_empty() && quantities.is_empty()) {
                (Some(spec), true) => spec,
                (Some(_), false) => {
                    return Err(CliError::invalid(
                        "--axis/--quantity cannot be combined with a [sweep] section",
                    ))
                }
                (None, _) => SweepSpec {
                    base: file.scenario,
                    axes: axes.iter().map(|a| parse_axis(a)).collect::<Result<_, _>>()?,
                    quantities: quantities
                        .iter()
                        .map(|q| q.parse::<Quantity>())
                        .collect::<Result<_, _>>()?,
                },
            };
            let path = path
                .clone()
                .or_else(|| file.output.and_then(|o| o.out));
            let table = sweep(&spec)?;
            write_table(&table, path.as_deref(), out)?;
        }
        Command::Optimize {
            objective,
            regime,
            eta,
            free,
            frozen,
            grid,
            json,
        } => {
            let objective_value: Objective = objective.parse().map_err(CliError::invalid)?;
            let regime: Regime = regime.parse().map_err(CliError::invalid)?;
            if *grid < 2 {
                return Err(CliError::invalid("--grid must be at least 2"));
            }
            let mut base = regime.base(*eta);
            base.validate().map_err(CliError::invalid)?;
            let mut frozen_params = Vec::new();
            for item in frozen {
                let (name, value) = parse_assignment(item)?;
                name.set(&mut base, value)?;
                frozen_params.push(name);
            }
            base.validate().map_err(CliError::invalid)?;
            let regime_axes = regime.free_axes();
            let axes: Vec<FreeAxis> = if free.is_empty() {
                regime_axes
                    .into_iter()
                    .filter(|a| !frozen_params.contains(&a.param))
                    .collect()
            } else {
                free.iter()
                    .map(|name| {
                        let param: Param = name.parse()?;
                        regime_axes
                            .iter()
                            .copied()
                            .find(|a| a.param == param)
                            .ok_or(ExplorerError::ParameterNotApplicable {
                                param,
                                dynamics: if regime.is_unitary() { "unitary" } else { "channel" },
                            })
                    })
                    .collect::<Result<_, _>>()?
            };
            let spec = MaxSpec::new(objective_value, base, axes).with_grid_points(*grid);
            let res = maximize(&spec)?;
            let text = if *json {
                report::optimize_json(objective, &res)
            } else {
                report::optimize_text(objective, &res)
            };
            emit(out, &text)?;
        }
        Command::Threshold {
            objective,
            regime,
            eta_max,
            grid,
            json,
        } => {
            let objective_value: Objective = objective.parse().map_err(CliError::invalid)?;
            let regime: Regime = regime.parse().map_err(CliError::invalid)?;
            if !(*eta_max > 0.0 && *eta_max <= 1.0) {
                return Err(CliError::invalid("--eta-max must lie in (0, 1]"));
            }
            if *grid < 2 {
                return Err(CliError::invalid("--grid must be at least 2"));
            }
            let mut spec = ThresholdSpec::new(objective_value, regime);
            spec.eta_max = *eta_max;
            spec.inner_grid = *grid;
            let eta = eta_threshold_with(&spec)?;
            let text = if *json {
                serde_json::json!({
                    "schema": report::SCHEMA_VERSION,
                    "objective": objective,
                    "regime": regime.name(),
                    "eta_threshold": eta,
                    "bracket_width": spec.tolerance,
                })
                .to_string()
            } else {
                format!("eta threshold ({objective}, {regime}) = {eta:.4}")
            };
            emit(out, &text)?;
        }
        Command::Verify { seed, trials } => {
            if *trials == 0 {
                return Err(CliError::invalid("--trials must be at least 1"));
            }
            let report = verify::run_verification(*seed, *trials);
            emit(out, report.render().trim_end())?;
            if !report.passed() {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(0)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|e| CliError {
        code: EXIT_UNWRITABLE,
        message: format!("cannot write output: {e}"),
    })
}

fn write_table(table: &SweepTable, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::unwritable(path, e))?;
            let mut writer = BufWriter::new(file);
            report::write_csv(table, &mut writer).map_err(|e| CliError::unwritable(path, e))?;
            writer.flush().map_err(|e| CliError::unwritable(path, e))
        }
        None => report::write_csv(table, out).map_err(|e| CliError {
            code: EXIT_UNWRITABLE,
            message: format!("cannot write output: {e}"),
        }),
    }
}

/// `name=start:stop:steps`.
fn parse_axis(text: &str) -> Result<Axis, CliError> {
    let bad = || CliError::invalid(format!("axis `{text}` is not of the form name=start:stop:steps"));
    let (name, range) = text.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, steps] = parts.as_slice() else {
        return Err(bad());
    };
    let param: Param = name.trim().parse()?;
    Ok(Axis::new(
        param,
        start.trim().parse().map_err(|_| bad())?,
        stop.trim().parse().map_err(|_| bad())?,
        steps.trim().parse().map_err(|_| bad())?,
    ))
}

/// `name=value`.
fn parse_assignment(text: &str) -> Result<(Param, f64), CliError> {
    let bad = || CliError::invalid(format!("`{text}` is not of the form name=value"));
    let (name, value) = text.split_once('=').ok_or_else(bad)?;
    Ok((name.trim().parse()?, value.trim().parse().map_err(|_| bad())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (Result<i32, CliError>, String) {
        let cli = Cli::try_parse_from(std::iter::once("lg-lab").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let res = execute(&cli.command, &mut buf);
        (res, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn evaluate_flags() {
        let (res, text) = run_capture(&[
            "evaluate", "--eta", "1", "--alpha", "0", "--unitary", "--g1", "2.0944", "--g2", "0.5236",
        ]);
        assert_eq!(res, Ok(0));
        assert!(text.starts_with("L = 1.4999"), "{text}");
    }

    #[test]
    fn evaluate_channel_json() {
        let (res, text) = run_capture(&[
            "evaluate", "--theta", "0", "--channel", "--p", "0", "--gamma12", "1", "--gamma23", "0",
            "--gamma13", "0", "--json",
        ]);
        assert_eq!(res, Ok(0));
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["schema"], "1");
        assert!((doc["values"]["L"].as_f64().unwrap() - 3.0).abs() < 1e-12);
        assert!((doc["values"]["V"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_sharpness_exits_two() {
        let (res, _) = run_capture(&["evaluate", "--eta", "1.2"]);
        let err = res.unwrap_err();
        assert_eq!(err.code, EXIT_INVALID);
        assert!(err.message.contains("eta"), "{}", err.message);
    }

    #[test]
    fn mixed_dynamics_flags_are_rejected() {
        let (res, _) = run_capture(&["evaluate", "--p", "0.3"]);
        assert_eq!(res.unwrap_err().code, EXIT_INVALID);
        let (res, _) = run_capture(&["evaluate", "--channel", "--g1", "0.3"]);
        assert_eq!(res.unwrap_err().code, EXIT_INVALID);
    }

    #[test]
    fn degrees_convert() {
        let rad = ScenarioArgs {
            g1: Some(std::f64::consts::FRAC_PI_2),
            ..Default::default()
        };
        let deg = ScenarioArgs {
            g1_deg: Some(90.0),
            ..Default::default()
        };
        assert_eq!(rad.resolve().unwrap(), deg.resolve().unwrap());
    }

    #[test]
    fn axis_parsing() {
        assert_eq!(parse_axis("p=0:1:101").unwrap(), Axis::new(Param::P, 0.0, 1.0, 101));
        assert!(parse_axis("p=0:1").is_err());
        assert_eq!(parse_axis("kappa=0:1:3").unwrap_err().code, EXIT_INVALID);
    }

    #[test]
    fn verify_zero_trials() {
        let (res, _) = run_capture(&["verify", "--trials", "0"]);
        assert_eq!(res.unwrap_err().code, EXIT_INVALID);
    }

    #[test]
    fn threshold_without_violation_exits_four() {
        let (res, _) = run_capture(&[
            "threshold", "--objective", "L", "--regime", "unitary-unbiased", "--eta-max", "0.7",
            "--grid", "5",
        ]);
        assert_eq!(res.unwrap_err().code, EXIT_NO_VIOLATION);
    }

    #[test]
    fn optimize_subset_of_axes() {
        let (res, text) = run_capture(&[
            "optimize", "--objective", "L", "--regime", "unitary-unbiased", "--free", "g1,g2",
        ]);
        assert_eq!(res, Ok(0));
        assert!(text.starts_with("max L = 1.5000000000"), "{text}");
    }
}
