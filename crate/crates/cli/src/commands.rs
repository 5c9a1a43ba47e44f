//! The four subcommands.

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use tep_core::dilation::{oracle_checks_with, OracleReport, ORACLE_TOL};
use tep_core::qmat::PureState;
use tep_core::witness::{
    generate_initial, nonmarkovianity_measure, trajectory, witness_for_state, CandidateSummary, InitialStateParam,
    TimeGrid, WitnessResult, EPS_NEG,
};

use crate::config::{Format, RunConfig, Settings};
use crate::error::CliError;
use crate::output::{config_header, csv_rows, emit, to_json};

pub const TRAJECTORY_HEADER: &str = "t,tep,tepr,mutual,classical,discord,entropy_exchange,channel_scalar";
pub const ORACLE_HEADER: &str = "t,d_env,env_vs_sa,env_vs_exchange,ae_vs_s,bookkeeping,mutual_ae";

fn best_state(config: &RunConfig) -> Result<(InitialStateParam, Option<WitnessResult>), CliError> {
    match config.initial.param() {
        Some(p) => Ok((p, None)),
        None => {
            let result = nonmarkovianity_measure(&config.model, &config.grid, &config.optimizer())?;
            warn_exhausted(&result);
            Ok((result.best_initial, Some(result)))
        }
    }
}

fn warn_exhausted(result: &WitnessResult) {
    if result.optimizer_exhausted {
        eprintln!("warning: no search start converged within its evaluation budget; reporting best found");
    }
}

#[derive(Serialize)]
struct TrajectoryJson<'a> {
    config: &'a RunConfig,
    initial: InitialStateParam,
    records: &'a [tep_core::witness::TrajectoryRecord],
}

pub fn run_simulate(config: &RunConfig, settings: &Settings) -> Result<(), CliError> {
    let (initial, _) = best_state(config)?;
    let records = trajectory(&config.model, &generate_initial(&initial), &config.grid)?;
    let text = match config.format {
        Format::Csv => {
            let rows: Vec<[f64; 8]> = records
                .iter()
                .map(|r| {
                    [
                        r.t,
                        r.tep,
                        r.tepr,
                        r.mutual,
                        r.classical,
                        r.discord,
                        r.entropy_exchange,
                        r.channel_scalar,
                    ]
                })
                .collect();
            let mut text = config_header(config);
            text.push_str(&config_header(&serde_json::json!({ "initial": initial })));
            text.push_str(&csv_rows(TRAJECTORY_HEADER, rows.iter().map(|r| &r[..])));
            text
        }
        Format::Json => to_json(&TrajectoryJson {
            config,
            initial,
            records: &records,
        }),
    };
    emit(settings.out.as_deref(), &text)
}

#[derive(Serialize)]
struct WitnessJson<'a> {
    measure: f64,
    signed_integral: f64,
    intervals: &'a [(f64, f64)],
    best_initial: InitialStateParam,
    seed: u64,
    grid: TimeGrid,
    optimizer_exhausted: bool,
    candidates: &'a [CandidateSummary],
    config: &'a RunConfig,
}

fn witness_result(config: &RunConfig) -> Result<WitnessResult, CliError> {
    match config.initial.param() {
        Some(p) => {
            let mut r = witness_for_state(&config.model, &config.grid, &p, EPS_NEG)?;
            r.seed = config.seed;
            Ok(r)
        }
        None => {
            let r = nonmarkovianity_measure(&config.model, &config.grid, &config.optimizer())?;
            warn_exhausted(&r);
            Ok(r)
        }
    }
}

pub fn run_witness(config: &RunConfig, settings: &Settings) -> Result<(), CliError> {
    if settings.format == Some(Format::Csv) {
        return Err(CliError::Config("witness output is JSON only".into()));
    }
    let r = witness_result(config)?;
    let text = to_json(&WitnessJson {
        measure: r.measure,
        signed_integral: r.signed_integral,
        intervals: &r.intervals,
        best_initial: r.best_initial,
        seed: r.seed,
        grid: r.grid,
        optimizer_exhausted: r.optimizer_exhausted,
        candidates: &r.candidates,
        config,
    });
    emit(settings.out.as_deref(), &text)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    /// Model parameter to vary: s, omega_c, lambda, gamma0 or omega
    #[arg(long)]
    pub param: String,
    #[arg(long)]
    pub start: f64,
    #[arg(long)]
    pub stop: f64,
    #[arg(long)]
    pub count: usize,
    #[arg(long, value_enum, default_value = "linear")]
    pub spacing: Spacing,
}

impl SweepArgs {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if self.count < 2 {
            return Err(CliError::Config(format!("--count must be at least 2, got {}", self.count)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::Config("sweep bounds must be finite".into()));
        }
        let n = (self.count - 1) as f64;
        match self.spacing {
            Spacing::Linear => Ok((0..self.count)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / n)
                .collect()),
            Spacing::Log => {
                if self.start <= 0.0 || self.stop <= 0.0 {
                    return Err(CliError::Config("log spacing needs positive bounds".into()));
                }
                let (a, b) = (self.start.ln(), self.stop.ln());
                Ok((0..self.count).map(|i| (a + (b - a) * i as f64 / n).exp()).collect())
            }
        }
    }
}

#[derive(Serialize)]
struct SweepPoint {
    value: f64,
    measure: f64,
    signed_integral: f64,
    negative_intervals: usize,
    best_initial: InitialStateParam,
}

#[derive(Serialize)]
struct SweepHeader<'a> {
    base: &'a RunConfig,
    param: &'a str,
    start: f64,
    stop: f64,
    count: usize,
    spacing: Spacing,
}

pub fn run_sweep(base: &RunConfig, settings: &Settings, sweep: &SweepArgs) -> Result<(), CliError> {
    let values = sweep.values()?;
    let param = sweep.param.replace('-', "_");
    // resolve every point before any computation
    let configs = values
        .iter()
        .map(|&v| {
            let mut s = settings.clone();
            s.set_param(&param, v)?;
            s.resolve()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let points = configs
        .par_iter()
        .zip(&values)
        .map(|(c, &value)| {
            let r = witness_result(c).map_err(|e| match e {
                CliError::Numerical(m) => CliError::Numerical(format!("{param} = {value}: {m}")),
                other => other,
            })?;
            Ok(SweepPoint {
                value,
                measure: r.measure,
                signed_integral: r.signed_integral,
                negative_intervals: r.intervals.len(),
                best_initial: r.best_initial,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let header = SweepHeader {
        base,
        param: &param,
        start: sweep.start,
        stop: sweep.stop,
        count: sweep.count,
        spacing: sweep.spacing,
    };
    let text = match base.format {
        Format::Csv => {
            let rows: Vec<[f64; 4]> = points
                .iter()
                .map(|p| [p.value, p.measure, p.signed_integral, p.negative_intervals as f64])
                .collect();
            let mut text = config_header(&header);
            text.push_str(&csv_rows(
                &format!("{param},measure,signed_integral,negative_intervals"),
                rows.iter().map(|r| &r[..]),
            ));
            text
        }
        Format::Json => to_json(&serde_json::json!({ "sweep": header, "points": points })),
    };
    emit(settings.out.as_deref(), &text)
}

#[derive(Clone, Debug, Default, Args)]
pub struct OracleArgs {
    /// Comma-separated check times (default: ten evenly spaced times up to t_max)
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Check at every grid time
    #[arg(long)]
    pub full_grid: bool,
    /// Test hook: build the reduced-route channel at t + shift
    #[arg(long, hide = true)]
    pub corrupt_shift: Option<f64>,
}

pub fn run_oracle(config: &RunConfig, settings: &Settings, args: &OracleArgs) -> Result<(), CliError> {
    let initial = config
        .initial
        .param()
        .ok_or_else(|| CliError::Config("oracle needs a fixed initial state (bell or schmidt)".into()))?;
    let times: Vec<f64> = if args.full_grid {
        config.grid.times()
    } else if let Some(t) = &args.times {
        t.clone()
    } else {
        (1..=10).map(|i| config.grid.t_max * i as f64 / 10.0).collect()
    };
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(CliError::Config("check times must be non-negative and finite".into()));
    }
    let shift = args.corrupt_shift.unwrap_or(0.0);
    let psi: PureState = generate_initial(&initial);
    let reports = times
        .par_iter()
        .map(|&t| {
            let dilated = config.model.kraus(t)?;
            let reduced = if shift == 0.0 { dilated.clone() } else { config.model.kraus(t + shift)? };
            Ok(oracle_checks_with(&psi, &dilated, &reduced, t)?)
        })
        .collect::<Result<Vec<OracleReport>, CliError>>()?;

    let text = match config.format {
        Format::Csv => {
            let rows: Vec<[f64; 7]> = reports
                .iter()
                .map(|r| {
                    [
                        r.t,
                        r.d_env as f64,
                        r.env_vs_sa,
                        r.env_vs_exchange,
                        r.ae_vs_s,
                        r.bookkeeping,
                        r.mutual_ae,
                    ]
                })
                .collect();
            let mut text = config_header(config);
            text.push_str(&csv_rows(ORACLE_HEADER, rows.iter().map(|r| &r[..])));
            text
        }
        Format::Json => to_json(&serde_json::json!({ "config": config, "reports": reports })),
    };
    emit(settings.out.as_deref(), &text)?;
    for r in &reports {
        r.verify(ORACLE_TOL)?;
    }
    Ok(())
}
