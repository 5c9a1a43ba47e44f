//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::charpoly_eigenvalues;
use tep_core::channels::dephasing::dephasing_kraus_from_factor;
use tep_core::channels::{ChannelModel, KrausFamily};
use tep_core::dilation::{oracle_checks, ORACLE_TOL};
use tep_core::entropy::entropy_exchange;
use tep_core::qmat::{hermitian_eig, ComplexMatrix, DensityMatrix, PureState, C64};
use tep_core::random::{random_hermitian, random_pure};
use tep_core::witness::{
    negative_area, production_and_mutual, trajectory, witness_for_state, ChannelSchedule, InitialStateParam,
    TimeGrid, TrajectoryRecord, EPS_NEG,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn bell_trajectory(model: &ChannelModel, t_max: f64, tep_min: &mut f64) -> Vec<TrajectoryRecord> {
    let grid = TimeGrid::new(t_max, 800).unwrap();
    let traj = trajectory(model, &PureState::bell(), &grid).expect("trajectory");
    for r in &traj {
        *tep_min = tep_min.min(r.tep);
    }
    traj
}

fn measure_of(traj: &[TrajectoryRecord], grid: &TimeGrid) -> (f64, usize) {
    let rates: Vec<f64> = traj.iter().map(|r| r.tepr).collect();
    let part = negative_area(&rates, grid, EPS_NEG).unwrap();
    (part.measure(), part.intervals.len())
}

fn criterion_1(tep_min: &mut f64) -> Outcome {
    let grid = TimeGrid::new(3.0, 800).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for s in [0.5, 1.0, 2.0] {
        let traj = bell_trajectory(&ChannelModel::dephasing(s, 1.0).unwrap(), 3.0, tep_min);
        let min_rate = traj.iter().map(|r| r.tepr).fold(f64::INFINITY, f64::min);
        let (measure, _) = measure_of(&traj, &grid);
        ok &= min_rate >= -1e-6 && measure < 1e-6;
        notes.push(format!("s={s}: min tepr {min_rate:.3e}, measure {measure:.3e}"));
    }
    let traj = bell_trajectory(&ChannelModel::dephasing(4.0, 1.0).unwrap(), 3.0, tep_min);
    let (measure, _) = measure_of(&traj, &grid);
    let first = traj.iter().find(|r| r.tepr < -EPS_NEG).map(|r| r.t);
    let onset_ok = first.is_some_and(|t| (t - 1.0).abs() <= 2.0 * grid.step());
    ok &= measure > 0.01 && onset_ok;
    notes.push(format!("s=4: measure {measure:.4}, first negative at {first:?}"));
    outcome(ok, notes.join("; "))
}

fn criterion_2(tep_min: &mut f64) -> Outcome {
    let model = ChannelModel::amplitude_damping(0.05, 1.0).unwrap();
    let grid = TimeGrid::new(40.0, 800).unwrap();
    let traj = bell_trajectory(&model, 40.0, tep_min);
    let peak = traj
        .iter()
        .filter(|r| (10.6..=11.6).contains(&r.t))
        .max_by(|a, b| a.tep.total_cmp(&b.tep))
        .unwrap();
    let (_, intervals) = measure_of(&traj, &grid);
    let peak_ok = peak.tep >= 1.999;

    let strong = ChannelModel::amplitude_damping(10.0, 1.0).unwrap();
    let traj = bell_trajectory(&strong, 40.0, tep_min);
    let (measure, _) = measure_of(&traj, &grid);
    outcome(
        peak_ok && intervals >= 1 && measure < 1e-6,
        format!(
            "weak: peak {:.6} at t={:.3}, {intervals} negative interval(s); strong: measure {measure:.3e}",
            peak.tep, peak.t
        ),
    )
}

fn criterion_3(tep_min: &mut f64) -> Outcome {
    let model = ChannelModel::generalized_amplitude_damping(5.0).unwrap();
    let grid = TimeGrid::new(3.0, 800).unwrap();
    let traj = bell_trajectory(&model, 3.0, tep_min);
    let (measure, intervals) = measure_of(&traj, &grid);
    outcome(
        intervals >= 2 && measure > 0.01,
        format!("{intervals} negative intervals, measure {measure:.4}"),
    )
}

fn reference_models() -> [ChannelModel; 3] {
    [
        ChannelModel::dephasing(4.0, 1.0).unwrap(),
        ChannelModel::amplitude_damping(0.05, 1.0).unwrap(),
        ChannelModel::generalized_amplitude_damping(5.0).unwrap(),
    ]
}

fn criterion_4(tep_min: &mut f64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut samples = 0;
    for model in reference_models() {
        let grid = TimeGrid::new(model.default_t_max(), 99).unwrap();
        let schedule = ChannelSchedule::new(model, grid).unwrap();
        for _ in 0..50 {
            let psi = random_pure(&mut rng, 4);
            let initial_mutual = tep_core::entropy::mutual_information(&psi.to_density(), (2, 2)).unwrap();
            for (production, mutual) in production_and_mutual(&schedule, &psi).unwrap() {
                let slack = (mutual - initial_mutual) + production;
                worst = worst.min(slack);
                *tep_min = tep_min.min(production);
                samples += 1;
                if slack < -1e-6 {
                    violations += 1;
                }
            }
        }
    }
    outcome(
        violations == 0,
        format!("{samples} samples, {violations} violations, min(dI + dS_P) {worst:.3e}"),
    )
}

fn criterion_5() -> Outcome {
    let bell = PureState::bell();
    let mut worst: f64 = 0.0;
    let mut failure = None;
    for model in reference_models() {
        let t_max = model.default_t_max();
        for i in 1..=10 {
            let t = t_max * i as f64 / 10.0;
            let report = oracle_checks(&bell, &model, t).unwrap();
            worst = worst.max(report.max_residual());
            if let Err(e) = report.verify(ORACLE_TOL) {
                failure.get_or_insert(format!("{}: {e}", model.name()));
            }
        }
    }
    match failure {
        None => outcome(true, format!("30 spot checks, max residual {worst:.3e}")),
        Some(msg) => outcome(false, msg),
    }
}

fn criterion_6(tep_min: f64) -> Outcome {
    outcome(tep_min >= -1e-9, format!("min TEP over criteria 1-4: {tep_min:.3e}"))
}

fn criterion_7() -> Outcome {
    let plus = DensityMatrix::try_new(ComplexMatrix::from_rows(2, vec![C64::new(0.5, 0.0); 4]).unwrap()).unwrap();
    let half = entropy_exchange(&plus, &dephasing_kraus_from_factor(0.5)).unwrap();
    let identity = entropy_exchange(&plus, &KrausFamily::identity(2)).unwrap();
    outcome(
        (half - 0.811278).abs() <= 1e-6 && identity == 0.0,
        format!("S_e(gamma=1/2) {half:.7}, S_e(identity) {identity}"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_completeness: f64 = 0.0;
    for model in reference_models() {
        for _ in 0..100 {
            let t = rng.gen_range(0.0..model.default_t_max());
            worst_completeness = worst_completeness.max(model.kraus(t).unwrap().completeness_error());
        }
    }

    let mut worst_eig: f64 = 0.0;
    for _ in 0..100 {
        let h = random_hermitian(&mut rng, 4);
        let jacobi = hermitian_eig(&h).unwrap();
        let oracle = charpoly_eigenvalues(&h);
        for (a, b) in jacobi.iter().zip(&oracle) {
            worst_eig = worst_eig.max((a - b).abs());
        }
    }

    let mut worst_shift: f64 = 0.0;
    let mut shifts = Vec::new();
    for model in reference_models() {
        let coarse = TimeGrid::new(model.default_t_max(), 800).unwrap();
        let bell = InitialStateParam::bell();
        let a = witness_for_state(&model, &coarse, &bell, EPS_NEG).unwrap().measure;
        let b = witness_for_state(&model, &coarse.refined(), &bell, EPS_NEG).unwrap().measure;
        worst_shift = worst_shift.max((a - b).abs());
        shifts.push(format!("{} {:.2e}", model.name(), (a - b).abs()));
    }

    outcome(
        worst_completeness <= 1e-10 && worst_eig <= 1e-9 && worst_shift <= 5e-3,
        format!(
            "completeness {worst_completeness:.2e}, eig vs charpoly {worst_eig:.2e}, grid doubling [{}]",
            shifts.join(", ")
        ),
    )
}

fn main() -> ExitCode {
    let mut tep_min = f64::INFINITY;
    let mut all = true;
    let mut passed = 0;
    let mut report = |n: usize, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let elapsed: Duration = start.elapsed();
        println!(
            "criterion {n}: {} ({:.1}s) {}",
            if o.pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            o.detail
        );
        all &= o.pass;
        passed += o.pass as usize;
    };
    report(1, &mut || criterion_1(&mut tep_min));
    report(2, &mut || criterion_2(&mut tep_min));
    report(3, &mut || criterion_3(&mut tep_min));
    report(4, &mut || criterion_4(&mut tep_min));
    report(5, &mut criterion_5);
    report(6, &mut || criterion_6(tep_min));
    report(7, &mut criterion_7);
    report(8, &mut criterion_8);
    println!("acceptance: {passed}/8 criteria passed");
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
