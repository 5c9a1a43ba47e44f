//! Run settings from flags, an optional JSON file and defaults, resolved into
//! a validated configuration.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use tep_core::channels::ChannelModel;
use tep_core::witness::{InitialStateParam, OptimizerConfig, TimeGrid, DEFAULT_STEPS};

use crate::error::CliError;

/// Names the default config file when `--config` is absent.
pub const CONFIG_ENV: &str = "TEP_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Dephasing,
    Ad,
    Gad,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    Bell,
    Schmidt,
    Optimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every setting is optional here; flags overlay the file, the file
/// overlays defaults.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Bath exponent (dephasing)
    #[arg(long)]
    pub s: Option<f64>,
    /// Cut-off frequency (dephasing)
    #[arg(long = "omega-c")]
    pub omega_c: Option<f64>,
    /// Lorentzian width (ad)
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Coupling strength (ad)
    #[arg(long)]
    pub gamma0: Option<f64>,
    /// Oscillation frequency (gad)
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub initial: Option<InitialKind>,
    /// Schmidt angle in [0, pi/4]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Apparatus basis rotation angles "a,b,c"
    #[arg(long, value_parser = parse_basis)]
    pub basis: Option<[f64; 3]>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads
    #[arg(long)]
    pub jobs: Option<usize>,
}

fn parse_basis(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated angles, got '{s}'"));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.trim().parse().map_err(|e| format!("bad angle '{p}': {e}"))?;
    }
    Ok(out)
}

impl Settings {
    /// Fill unset fields from `lower`.
    pub fn overlay(self, lower: Settings) -> Settings {
        Settings {
            model: self.model.or(lower.model),
            s: self.s.or(lower.s),
            omega_c: self.omega_c.or(lower.omega_c),
            lambda: self.lambda.or(lower.lambda),
            gamma0: self.gamma0.or(lower.gamma0),
            omega: self.omega.or(lower.omega),
            t_max: self.t_max.or(lower.t_max),
            steps: self.steps.or(lower.steps),
            initial: self.initial.or(lower.initial),
            alpha: self.alpha.or(lower.alpha),
            basis: self.basis.or(lower.basis),
            seed: self.seed.or(lower.seed),
            out: self.out.or(lower.out),
            format: self.format.or(lower.format),
            jobs: self.jobs.or(lower.jobs),
        }
    }

    pub fn from_file(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
    }

    /// Flags over the file named by `--config` (or the environment) over defaults.
    pub fn load(flags: Settings, config: Option<&Path>) -> Result<Settings, CliError> {
        let path = match config {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
        };
        match path {
            Some(p) => Ok(flags.overlay(Settings::from_file(&p)?)),
            None => Ok(flags),
        }
    }

    pub fn set_param(&mut self, name: &str, value: f64) -> Result<(), CliError> {
        let slot = match name {
            "s" => &mut self.s,
            "omega_c" | "omega-c" => &mut self.omega_c,
            "lambda" => &mut self.lambda,
            "gamma0" => &mut self.gamma0,
            "omega" => &mut self.omega,
            other => return Err(CliError::Config(format!("unknown sweep parameter '{other}'"))),
        };
        *slot = Some(value);
        Ok(())
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let kind = self
            .model
            .ok_or_else(|| CliError::Config("no model given (use --model or a config file)".into()))?;
        let stray = |name: &str, v: Option<f64>| match v {
            Some(_) => Err(CliError::Config(format!(
                "parameter {name} does not apply to model {}",
                model_name(kind)
            ))),
            None => Ok(()),
        };
        let model = match kind {
            ModelKind::Dephasing => {
                stray("lambda", self.lambda)?;
                stray("gamma0", self.gamma0)?;
                stray("omega", self.omega)?;
                ChannelModel::dephasing(self.s.unwrap_or(1.0), self.omega_c.unwrap_or(1.0))
            }
            ModelKind::Ad => {
                stray("s", self.s)?;
                stray("omega_c", self.omega_c)?;
                stray("omega", self.omega)?;
                ChannelModel::amplitude_damping(self.lambda.unwrap_or(0.05), self.gamma0.unwrap_or(1.0))
            }
            ModelKind::Gad => {
                stray("s", self.s)?;
                stray("omega_c", self.omega_c)?;
                stray("lambda", self.lambda)?;
                stray("gamma0", self.gamma0)?;
                ChannelModel::generalized_amplitude_damping(self.omega.unwrap_or(5.0))
            }
        }
        .map_err(|e| CliError::Config(e.to_string()))?;

        let grid = TimeGrid::new(
            self.t_max.unwrap_or_else(|| model.default_t_max()),
            self.steps.unwrap_or(DEFAULT_STEPS),
        )
        .map_err(|e| CliError::Config(e.to_string()))?;

        let kind = self.initial.unwrap_or(if self.alpha.is_some() {
            InitialKind::Schmidt
        } else {
            InitialKind::Bell
        });
        let initial = match kind {
            InitialKind::Schmidt => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| CliError::Config("--initial schmidt needs --alpha".into()))?;
                let param = InitialStateParam::new(alpha, self.basis.unwrap_or([0.0; 3]))
                    .map_err(|e| CliError::Config(e.to_string()))?;
                InitialChoice::Schmidt(param)
            }
            other => {
                if self.alpha.is_some() || self.basis.is_some() {
                    return Err(CliError::Config(
                        "--alpha and --basis only apply to --initial schmidt".into(),
                    ));
                }
                match other {
                    InitialKind::Bell => InitialChoice::Bell,
                    _ => InitialChoice::Optimize,
                }
            }
        };

        if self.jobs == Some(0) {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        Ok(RunConfig {
            model,
            grid,
            initial,
            seed: self.seed.unwrap_or(0),
            format: self.format.unwrap_or(Format::Csv),
        })
    }
}

fn model_name(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Dephasing => "dephasing",
        ModelKind::Ad => "ad",
        ModelKind::Gad => "gad",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InitialChoice {
    Bell,
    Schmidt(InitialStateParam),
    Optimize,
}

impl InitialChoice {
    /// The fixed state, or `None` when the state is to be searched for.
    pub fn param(&self) -> Option<InitialStateParam> {
        match self {
            InitialChoice::Bell => Some(InitialStateParam::bell()),
            InitialChoice::Schmidt(p) => Some(*p),
            InitialChoice::Optimize => None,
        }
    }
}

/// Validated settings of one run. Output path and thread count are left
/// out so that they cannot change the bytes of a result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub model: ChannelModel,
    pub grid: TimeGrid,
    pub initial: InitialChoice,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            seed: self.seed,
            ..OptimizerConfig::default()
        }
    }
}
