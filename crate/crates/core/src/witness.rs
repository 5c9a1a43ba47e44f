//! Trajectories of entropy production on a uniform time grid, the
//! entropy-production rate, its accumulated negative part and the search for
//! the initial system–apparatus state that maximizes it.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{extend_to_sa, ChannelModel, KrausFamily};
use crate::entropy::{correlations, entropy_exchange, mutual_information, tep, w_matrix};
use crate::error::{Error, Result};
use crate::optimize::{nelder_mead, SimplexOptions};
use crate::qmat::{partial_trace, vn_entropy, ComplexMatrix, DensityMatrix, Keep, PureState, C64};

/// Default threshold below which a rate counts as negative, in bits per unit time.
pub const EPS_NEG: f64 = 1e-9;
pub const MIN_STEPS: usize = 16;
pub const DEFAULT_STEPS: usize = 800;

/// Uniform grid tᵢ = i·t_max/steps, i = 0..=steps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_max: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, steps: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::invalid(format!("t_max must be positive and finite, got {t_max}")));
        }
        if steps < MIN_STEPS {
            return Err(Error::invalid(format!("steps must be at least {MIN_STEPS}, got {steps}")));
        }
        Ok(TimeGrid { t_max, steps })
    }

    /// Default horizon of `model` with 800 steps.
    pub fn default_for(model: &ChannelModel) -> Self {
        TimeGrid {
            t_max: model.default_t_max(),
            steps: DEFAULT_STEPS,
        }
    }

    pub fn step(&self) -> f64 {
        self.t_max / self.steps as f64
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t_max * i as f64 / self.steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    /// Same horizon, twice the resolution.
    pub fn refined(&self) -> Self {
        TimeGrid {
            t_max: self.t_max,
            steps: 2 * self.steps,
        }
    }
}

/// Everything recorded at one grid time. Entropic quantities are in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub tep: f64,
    pub tepr: f64,
    pub mutual: f64,
    pub classical: f64,
    pub discord: f64,
    pub entropy_exchange: f64,
    /// γ(t) for dephasing, G(t) for amplitude damping, P(t) for GAD.
    pub channel_scalar: f64,
}

/// Schmidt angle and apparatus-side basis rotation of the initial state
/// cos α |0⟩|a₀⟩ + sin α |1⟩|a₁⟩, with |aₖ⟩ = Rz(a) Ry(b) Rz(c) |k⟩.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialStateParam {
    pub alpha: f64,
    #[serde(rename = "basis")]
    pub apparatus_basis: [f64; 3],
}

impl InitialStateParam {
    pub fn new(alpha: f64, apparatus_basis: [f64; 3]) -> Result<Self> {
        if !(0.0..=FRAC_PI_4).contains(&alpha) {
            return Err(Error::invalid(format!("Schmidt angle must lie in [0, pi/4], got {alpha}")));
        }
        if apparatus_basis.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("basis rotation angles must be finite"));
        }
        Ok(InitialStateParam { alpha, apparatus_basis })
    }

    pub fn bell() -> Self {
        InitialStateParam {
            alpha: FRAC_PI_4,
            apparatus_basis: [0.0; 3],
        }
    }

    /// Rz(a) Ry(b) Rz(c)
    pub fn apparatus_rotation(&self) -> ComplexMatrix {
        let [a, b, c] = self.apparatus_basis;
        let rz = |x: f64| {
            ComplexMatrix::from_rows(
                2,
                vec![
                    C64::from_polar(1.0, -0.5 * x),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::from_polar(1.0, 0.5 * x),
                ],
            )
            .unwrap()
        };
        let (s, co) = (0.5 * b).sin_cos();
        let ry = ComplexMatrix::from_real(2, &[co, -s, s, co]).unwrap();
        rz(a).matmul(&ry).matmul(&rz(c))
    }

    /// Map unconstrained optimizer coordinates into range: α folds into
    /// [0, π/4], angles wrap into [0, 2π).
    fn from_search_point(x: &[f64]) -> Self {
        let width = FRAC_PI_4;
        let folded = x[0].rem_euclid(2.0 * width);
        let alpha = if folded > width { 2.0 * width - folded } else { folded };
        InitialStateParam {
            alpha,
            apparatus_basis: [
                x[1].rem_euclid(2.0 * PI),
                x[2].rem_euclid(2.0 * PI),
                x[3].rem_euclid(2.0 * PI),
            ],
        }
    }
}

/// cos α |0⟩_S|a₀⟩_A + sin α |1⟩_S|a₁⟩_A
pub fn generate_initial(param: &InitialStateParam) -> PureState {
    let u = param.apparatus_rotation();
    let (s, c) = param.alpha.sin_cos();
    let amplitudes = vec![c * u[(0, 0)], c * u[(1, 0)], s * u[(0, 1)], s * u[(1, 1)]];
    PureState::normalized(amplitudes).expect("rotated Schmidt state has unit norm")
}

/// A model's Kraus families and channel scalars evaluated once along a grid.
#[derive(Clone, Debug)]
pub struct ChannelSchedule {
    model: ChannelModel,
    grid: TimeGrid,
    scalars: Vec<f64>,
    families: Vec<KrausFamily>,
}

impl ChannelSchedule {
    pub fn new(model: ChannelModel, grid: TimeGrid) -> Result<Self> {
        model.validate()?;
        let times = grid.times();
        let scalars = model.scalars_along(&times)?;
        let families = times
            .iter()
            .zip(&scalars)
            .map(|(&t, &v)| model.kraus_from_scalar(t, v))
            .collect();
        Ok(ChannelSchedule {
            model,
            grid,
            scalars,
            families,
        })
    }

    pub fn model(&self) -> &ChannelModel {
        &self.model
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn scalars(&self) -> &[f64] {
        &self.scalars
    }

    pub fn families(&self) -> &[KrausFamily] {
        &self.families
    }
}

/// Full record at every grid time for `initial` evolving under `model`.
pub fn trajectory(model: &ChannelModel, initial: &PureState, grid: &TimeGrid) -> Result<Vec<TrajectoryRecord>> {
    let schedule = ChannelSchedule::new(*model, *grid)?;
    trajectory_on(&schedule, initial)
}

/// As [`trajectory`], reusing a precomputed schedule.
pub fn trajectory_on(schedule: &ChannelSchedule, initial: &PureState) -> Result<Vec<TrajectoryRecord>> {
    if initial.dim() != 4 {
        return Err(Error::invalid("initial state must live on the 4-dimensional system-apparatus space"));
    }
    let grid = schedule.grid();
    let rho0 = initial.to_density();
    let mut records = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let t = grid.time(i);
            sample(&rho0, &schedule.families[i], t, schedule.scalars[i]).map_err(|e| e.at(t))
        })
        .collect::<Result<Vec<_>>>()?;
    let tep_values: Vec<f64> = records.iter().map(|r| r.tep).collect();
    let rates = tepr_series(&tep_values, grid)?;
    for (r, rate) in records.iter_mut().zip(rates) {
        r.tepr = rate;
    }
    Ok(records)
}

fn sample(rho0: &DensityMatrix, family: &KrausFamily, t: f64, scalar: f64) -> Result<TrajectoryRecord> {
    let extended = extend_to_sa(family);
    let evolved = crate::channels::apply(&extended, rho0)?;
    let env = entropy_exchange(rho0, &extended)?;
    let production = tep(rho0, &evolved, env)?;
    let corr = correlations(&evolved, (2, 2))?;
    Ok(TrajectoryRecord {
        t,
        tep: production,
        tepr: 0.0,
        mutual: corr.mutual,
        classical: corr.classical,
        discord: corr.discord,
        entropy_exchange: env,
        channel_scalar: scalar,
    })
}

/// Entropy production and mutual information only, for bulk checks that do
/// not need the discord split. Returns (ΔS_P, I(S:Ã)) per grid time.
pub fn production_and_mutual(schedule: &ChannelSchedule, initial: &PureState) -> Result<Vec<(f64, f64)>> {
    let rho0 = initial.to_density();
    schedule
        .families()
        .par_iter()
        .enumerate()
        .map(|(i, family)| {
            let t = schedule.grid().time(i);
            let extended = extend_to_sa(family);
            let evolved = crate::channels::apply(&extended, &rho0).map_err(|e| e.at(t))?;
            let env = entropy_exchange(&rho0, &extended).map_err(|e| e.at(t))?;
            let production = tep(&rho0, &evolved, env).map_err(|e| e.at(t))?;
            let mutual = mutual_information(&evolved, (2, 2)).map_err(|e| e.at(t))?;
            Ok((production, mutual))
        })
        .collect()
}

/// ΔS_P along the grid from the apparatus marginal alone: for a pure
/// system–apparatus input the production is twice the entropy exchange of
/// the apparatus channel on ρ^A.
pub fn tep_series(schedule: &ChannelSchedule, initial: &PureState) -> Result<Vec<f64>> {
    let rho_a = partial_trace(&initial.to_density(), (2, 2), Keep::Second)?;
    schedule
        .families()
        .iter()
        .enumerate()
        .map(|(i, family)| {
            let t = schedule.grid().time(i);
            let w = w_matrix(&rho_a, family).map_err(|e| e.at(t))?;
            Ok(2.0 * vn_entropy(&w).map_err(|e| e.at(t))?)
        })
        .collect()
}

/// d/dt by central differences inside the grid and second-order one-sided
/// differences at both ends.
pub fn tepr_series(values: &[f64], grid: &TimeGrid) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 3 {
        return Err(Error::invalid("rate needs at least three samples"));
    }
    if n != grid.len() {
        return Err(Error::invalid(format!(
            "series has {n} samples but the grid has {}",
            grid.len()
        )));
    }
    let h = grid.step();
    let mut out = Vec::with_capacity(n);
    out.push((-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h));
    for i in 1..n - 1 {
        out.push((values[i + 1] - values[i - 1]) / (2.0 * h));
    }
    out.push((3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h));
    Ok(out)
}

/// Integral of the rate over the samples where it is below `-eps_neg`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativePart {
    /// Trapezoid integral of the negative samples; never positive.
    pub integral: f64,
    /// Maximal runs of negative samples as (first time, last time).
    pub intervals: Vec<(f64, f64)>,
}

impl NegativePart {
    /// |integral|, never negative zero.
    pub fn measure(&self) -> f64 {
        0.0 - self.integral
    }
}

pub fn negative_area(rates: &[f64], grid: &TimeGrid, eps_neg: f64) -> Result<NegativePart> {
    if rates.len() != grid.len() {
        return Err(Error::invalid(format!(
            "rate series has {} samples but the grid has {}",
            rates.len(),
            grid.len()
        )));
    }
    let h = grid.step();
    let clipped: Vec<f64> = rates.iter().map(|&r| if r < -eps_neg { r } else { 0.0 }).collect();
    let integral = clipped.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum::<f64>().min(0.0);

    let mut intervals = Vec::new();
    let mut start: Option<usize> = None;
    for (i, &v) in clipped.iter().enumerate() {
        match (v < 0.0, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                intervals.push((grid.time(s), grid.time(i - 1)));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        intervals.push((grid.time(s), grid.time(clipped.len() - 1)));
    }
    Ok(NegativePart { integral, intervals })
}

/// Settings of the search over initial states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub evals_per_start: usize,
    pub seed: u64,
    pub eps_neg: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            starts: 16,
            evals_per_start: 200,
            seed: 0,
            eps_neg: EPS_NEG,
        }
    }
}

/// Outcome of evaluating one candidate initial state (after refinement, for search starts).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateSummary {
    pub index: usize,
    pub initial: InitialStateParam,
    pub measure: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessResult {
    /// |signed_integral| of the best candidate; larger means more non-Markovian.
    pub measure: f64,
    pub signed_integral: f64,
    pub intervals: Vec<(f64, f64)>,
    pub best_initial: InitialStateParam,
    pub seed: u64,
    pub grid: TimeGrid,
    /// True when no search start met its convergence test within budget.
    pub optimizer_exhausted: bool,
    pub candidates: Vec<CandidateSummary>,
}

/// Negative part of the production rate for one initial state.
pub fn negative_part_for(schedule: &ChannelSchedule, initial: &PureState, eps_neg: f64) -> Result<NegativePart> {
    let values = tep_series(schedule, initial)?;
    let rates = tepr_series(&values, schedule.grid())?;
    negative_area(&rates, schedule.grid(), eps_neg)
}

/// Witness value for a fixed initial state.
pub fn witness_for_state(
    model: &ChannelModel,
    grid: &TimeGrid,
    initial: &InitialStateParam,
    eps_neg: f64,
) -> Result<WitnessResult> {
    let schedule = ChannelSchedule::new(*model, *grid)?;
    let part = negative_part_for(&schedule, &generate_initial(initial), eps_neg)?;
    let measure = part.measure();
    Ok(WitnessResult {
        measure,
        signed_integral: part.integral,
        intervals: part.intervals,
        best_initial: *initial,
        seed: 0,
        grid: *grid,
        optimizer_exhausted: false,
        candidates: vec![CandidateSummary {
            index: 0,
            initial: *initial,
            measure,
            evals: 1,
            converged: true,
        }],
    })
}

const SEARCH_DIAMETER: f64 = 1e-6;
const SEARCH_STEP: f64 = 0.2;

/// Maximal accumulated decrease of entropy production over initial states.
///
/// Candidate 0 is the Bell state; candidates 1..=starts are Nelder–Mead runs
/// from shifted Halton points in (α, a, b, c). The best candidate wins, ties
/// going to the lower index, so the result depends only on the seed.
pub fn nonmarkovianity_measure(model: &ChannelModel, grid: &TimeGrid, opt: &OptimizerConfig) -> Result<WitnessResult> {
    let schedule = ChannelSchedule::new(*model, *grid)?;
    let evaluate = |param: &InitialStateParam| -> Result<f64> {
        Ok(negative_part_for(&schedule, &generate_initial(param), opt.eps_neg)?.measure())
    };

    let bell = InitialStateParam::bell();
    let mut candidates = vec![CandidateSummary {
        index: 0,
        initial: bell,
        measure: evaluate(&bell)?,
        evals: 1,
        converged: true,
    }];

    let starts = search_starts(opt.starts, opt.seed);
    let searched = starts
        .par_iter()
        .enumerate()
        .map(|(k, x0)| {
            let failure = std::sync::Mutex::new(None);
            let objective = |x: &[f64]| match evaluate(&InitialStateParam::from_search_point(x)) {
                Ok(m) => -m,
                Err(e) => {
                    failure.lock().unwrap().get_or_insert(e);
                    f64::INFINITY
                }
            };
            let simplex = SimplexOptions {
                initial_step: SEARCH_STEP,
                diameter_tol: SEARCH_DIAMETER,
                max_evals: opt.evals_per_start,
            };
            let r = nelder_mead(objective, x0, &simplex);
            if let Some(e) = failure.into_inner().unwrap() {
                return Err(e);
            }
            Ok(CandidateSummary {
                index: k + 1,
                initial: InitialStateParam::from_search_point(&r.x),
                measure: 0.0 - r.value,
                evals: r.evals,
                converged: r.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let exhausted = !searched.is_empty() && searched.iter().all(|c| !c.converged);
    candidates.extend(searched);

    let mut best = 0;
    for (i, c) in candidates.iter().enumerate() {
        if c.measure > candidates[best].measure {
            best = i;
        }
    }
    let winner = candidates[best].initial;
    let part = negative_part_for(&schedule, &generate_initial(&winner), opt.eps_neg)?;
    Ok(WitnessResult {
        measure: part.measure(),
        signed_integral: part.integral,
        intervals: part.intervals,
        best_initial: winner,
        seed: opt.seed,
        grid: *grid,
        optimizer_exhausted: exhausted,
        candidates,
    })
}

/// Halton points in bases 2, 3, 5, 7 with a seeded Cranley–Patterson shift,
/// scaled to α ∈ [0, π/4] and angles in [0, 2π) × [0, π] × [0, 2π).
fn search_starts(count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
    let bases = [2u64, 3, 5, 7];
    let scale = [FRAC_PI_4, 2.0 * PI, PI, 2.0 * PI];
    (0..count)
        .map(|i| {
            (0..4)
                .map(|d| ((radical_inverse(i as u64 + 1, bases[d]) + shift[d]) % 1.0) * scale[d])
                .collect()
        })
        .collect()
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let (mut value, mut factor) = (0.0, inv);
    while i > 0 {
        value += (i % base) as f64 * factor;
        i /= base;
        factor *= inv;
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_unitary, random_pure};
    use crate::qmat::tensor;

    fn binary_entropy(p: f64) -> f64 {
        if p <= 0.0 || p >= 1.0 {
            0.0
        } else {
            -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
        }
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 100).is_err());
        assert!(TimeGrid::new(1.0, 15).is_err());
        let g = TimeGrid::new(3.0, 800).unwrap();
        assert_eq!(g.len(), 801);
        assert_eq!(g.time(800), 3.0);
        assert!((g.step() - 3.0 / 800.0).abs() < 1e-18);
        assert!(g.times().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn bell_parameters_give_bell_state() {
        let psi = generate_initial(&InitialStateParam::bell());
        for (a, b) in psi.amplitudes().iter().zip(PureState::bell().amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_schmidt_angle_gives_product_state() {
        let p = InitialStateParam::new(0.0, [0.3, 1.1, -0.4]).unwrap();
        let rho = generate_initial(&p).to_density();
        assert!(mutual_information(&rho, (2, 2)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn generated_states_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..1000 {
            let p = InitialStateParam::new(
                rng.gen_range(0.0..=FRAC_PI_4),
                [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)],
            )
            .unwrap();
            let norm: f64 = generate_initial(&p).amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn param_validation() {
        assert!(InitialStateParam::new(1.0, [0.0; 3]).is_err());
        assert!(InitialStateParam::new(-0.1, [0.0; 3]).is_err());
        assert!(InitialStateParam::new(0.3, [f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn rate_of_constant_and_linear_series() {
        let grid = TimeGrid::new(2.0, 40).unwrap();
        let flat = vec![0.7; grid.len()];
        assert!(tepr_series(&flat, &grid).unwrap().iter().all(|&r| r.abs() < 1e-12));
        let ramp: Vec<f64> = grid.times().iter().map(|t| 1.5 * t).collect();
        assert!(tepr_series(&ramp, &grid).unwrap().iter().all(|&r| (r - 1.5).abs() < 1e-9));
        assert!(tepr_series(&[1.0, 2.0], &grid).is_err());
    }

    #[test]
    fn negative_area_of_cosine() {
        let grid = TimeGrid::new(2.0 * PI, 2000).unwrap();
        let rates: Vec<f64> = grid.times().iter().map(|t| t.cos()).collect();
        let part = negative_area(&rates, &grid, EPS_NEG).unwrap();
        assert!((part.integral + 2.0).abs() < 1e-3, "{}", part.integral);
        assert_eq!(part.intervals.len(), 1);
        let (a, b) = part.intervals[0];
        assert!((a - PI / 2.0).abs() < 2.0 * grid.step());
        assert!((b - 1.5 * PI).abs() < 2.0 * grid.step());
    }

    #[test]
    fn negative_area_edge_cases() {
        let grid = TimeGrid::new(1.0, 20).unwrap();
        let positive = vec![0.5; grid.len()];
        let part = negative_area(&positive, &grid, EPS_NEG).unwrap();
        assert_eq!(part.integral, 0.0);
        assert!(part.intervals.is_empty());

        let two_lobes: Vec<f64> = (0..grid.len())
            .map(|i| if (3..6).contains(&i) || (12..15).contains(&i) { -1.0 } else { 1.0 })
            .collect();
        let part = negative_area(&two_lobes, &grid, EPS_NEG).unwrap();
        assert_eq!(part.intervals.len(), 2);
        assert!(part.intervals[0].1 < part.intervals[1].0);

        // noise above −ε is ignored
        let noise = vec![-1e-12; grid.len()];
        assert!(negative_area(&noise, &grid, EPS_NEG).unwrap().intervals.is_empty());
    }

    #[test]
    fn trajectory_starts_at_rest() {
        let model = ChannelModel::generalized_amplitude_damping(5.0).unwrap();
        let grid = TimeGrid::new(3.0, 32).unwrap();
        let traj = trajectory(&model, &PureState::bell(), &grid).unwrap();
        assert_eq!(traj.len(), 33);
        assert!(traj[0].tep.abs() < 1e-9);
        assert!((traj[0].mutual - 2.0).abs() < 1e-9);
        for r in &traj {
            assert!(r.tep >= -1e-9);
            assert!((r.mutual - r.classical - r.discord).abs() <= 2e-6);
        }
    }

    #[test]
    fn ad_trajectory_short_horizon_is_nearly_identity() {
        let model = ChannelModel::amplitude_damping(0.05, 1.0).unwrap();
        let grid = TimeGrid::new(1e-6, 16).unwrap();
        let traj = trajectory(&model, &PureState::bell(), &grid).unwrap();
        assert!(traj.iter().all(|r| r.tep.abs() < 1e-6));
    }

    #[test]
    fn ohmic_dephasing_production_is_monotone() {
        let model = ChannelModel::dephasing(1.0, 1.0).unwrap();
        let grid = TimeGrid::new(3.0, 100).unwrap();
        let traj = trajectory(&model, &PureState::bell(), &grid).unwrap();
        assert!(traj.windows(2).all(|w| w[1].tep >= w[0].tep - 1e-12));
    }

    #[test]
    fn fast_production_route_matches_full_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let model = ChannelModel::generalized_amplitude_damping(5.0).unwrap();
        let schedule = ChannelSchedule::new(model, TimeGrid::new(3.0, 64).unwrap()).unwrap();
        for _ in 0..5 {
            let psi = random_pure(&mut rng, 4);
            let fast = tep_series(&schedule, &psi).unwrap();
            let full = production_and_mutual(&schedule, &psi).unwrap();
            for (a, (b, _)) in fast.iter().zip(&full) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dephasing_s2_rate_matches_chain_rule() {
        // γ = exp(−t²/(1+t²)), ΔS_P = 2 H₂((1−γ)/2), d/dt ΔS_P = log₂((1+γ)/(1−γ)) · η γ
        let model = ChannelModel::dephasing(2.0, 1.0).unwrap();
        let grid = TimeGrid::new(3.0, 800).unwrap();
        let schedule = ChannelSchedule::new(model, grid).unwrap();
        let values = tep_series(&schedule, &PureState::bell()).unwrap();
        let rates = tepr_series(&values, &grid).unwrap();
        for (i, &rate) in rates.iter().enumerate().skip(1) {
            let t = grid.time(i);
            let gamma = (-(t * t) / (1.0 + t * t)).exp();
            let eta = 2.0 * t / ((1.0 + t * t) * (1.0 + t * t));
            let analytic = ((1.0 + gamma) / (1.0 - gamma)).log2() * eta * gamma;
            let closed = 2.0 * binary_entropy(0.5 * (1.0 - gamma));
            assert!((values[i] - closed).abs() < 1e-9);
            // near t = 0 the log singularity of H₂ at γ → 1 spoils the difference quotient
            if t >= 0.25 {
                assert!((rate - analytic).abs() < 1e-4, "t = {t}: {rate} vs {analytic}");
            }
        }
    }

    #[test]
    fn local_system_unitaries_leave_records_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let model = ChannelModel::amplitude_damping(0.05, 1.0).unwrap();
        let grid = TimeGrid::new(20.0, 16).unwrap();
        let psi = random_pure(&mut rng, 4);
        let u_s = tensor(&random_unitary(&mut rng, 2), &ComplexMatrix::identity(2));
        let rotated = psi.transformed(&u_s).unwrap();
        let a = trajectory(&model, &psi, &grid).unwrap();
        let b = trajectory(&model, &rotated, &grid).unwrap();
        for (x, y) in a.iter().zip(&b) {
            for (p, q) in [
                (x.tep, y.tep),
                (x.tepr, y.tepr),
                (x.mutual, y.mutual),
                (x.classical, y.classical),
                (x.discord, y.discord),
                (x.entropy_exchange, y.entropy_exchange),
                (x.channel_scalar, y.channel_scalar),
            ] {
                assert!((p - q).abs() < 1e-9, "t = {}: {p} vs {q}", x.t);
            }
        }
    }

    #[test]
    fn identity_channel_has_zero_measure() {
        // GAD with ω = 0 and a tiny horizon is the identity to first order;
        // use the exact identity via ad with G = 1: horizon 0⁺.
        let model = ChannelModel::amplitude_damping(1.0, 1.0).unwrap();
        let grid = TimeGrid::new(1e-9, 16).unwrap();
        let r = witness_for_state(&model, &grid, &InitialStateParam::bell(), EPS_NEG).unwrap();
        assert!(r.measure < 1e-12);
    }

    #[test]
    fn search_is_deterministic_and_includes_bell() {
        let model = ChannelModel::dephasing(4.0, 1.0).unwrap();
        let grid = TimeGrid::new(3.0, 64).unwrap();
        let opt = OptimizerConfig {
            starts: 3,
            evals_per_start: 40,
            seed: 9,
            eps_neg: EPS_NEG,
        };
        let a = nonmarkovianity_measure(&model, &grid, &opt).unwrap();
        let b = nonmarkovianity_measure(&model, &grid, &opt).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.candidates[0].initial, InitialStateParam::bell());
        assert_eq!(a.candidates.len(), 4);
        assert!(a.measure >= a.candidates[0].measure);
        assert!(a.measure > 0.0);
    }

    #[test]
    fn halton_starts_lie_in_box() {
        for x in search_starts(16, 3) {
            assert!((0.0..=FRAC_PI_4).contains(&x[0]));
            assert!((0.0..2.0 * PI).contains(&x[1]));
            assert!((0.0..=PI).contains(&x[2]));
        }
        assert_ne!(search_starts(4, 1), search_starts(4, 2));
    }
}
