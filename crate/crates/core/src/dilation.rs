//! Minimal Stinespring dilation of apparatus channels and the entropy
//! identities it makes checkable on the full system–apparatus–environment state.

use serde::{Deserialize, Serialize};

use crate::channels::{apply, extend_to_sa, ChannelModel, KrausFamily};
use crate::entropy::{entropy_exchange, mutual_information, tep};
use crate::error::{Error, Result};
use crate::qmat::{partial_trace, reduce, vn_entropy, ComplexMatrix, DensityMatrix, Keep, PureState, C64};

/// Default tolerance for every oracle identity, in bits.
pub const ORACLE_TOL: f64 = 1e-9;

/// V = Σᵢ Kᵢ ⊗ |i⟩_E, stored row-major with row index a·d_env + i.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    d_in: usize,
    d_env: usize,
    data: Vec<C64>,
}

impl Isometry {
    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_env(&self) -> usize {
        self.d_env
    }

    pub fn rows(&self) -> usize {
        self.d_in * self.d_env
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.d_in + col]
    }

    /// V|v⟩, laid out as (input index, environment index).
    pub fn apply_to(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.d_in, "vector length does not match isometry input");
        (0..self.rows())
            .map(|r| {
                let row = &self.data[r * self.d_in..(r + 1) * self.d_in];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// V†V
    pub fn gram(&self) -> ComplexMatrix {
        let mut g = ComplexMatrix::zeros(self.d_in);
        for r in 0..self.rows() {
            for i in 0..self.d_in {
                let vi = self.entry(r, i).conj();
                for j in 0..self.d_in {
                    g[(i, j)] += vi * self.entry(r, j);
                }
            }
        }
        g
    }

    /// max |V†V − I|
    pub fn isometry_error(&self) -> f64 {
        self.gram().max_abs_diff(&ComplexMatrix::identity(self.d_in))
    }

    /// Tr_E[V ρ V†]
    pub fn channel_output(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.d_in {
            return Err(Error::invalid(format!(
                "isometry acts on dimension {}, state has dimension {}",
                self.d_in,
                rho.dim()
            )));
        }
        let n = self.rows();
        let mut full = ComplexMatrix::zeros(n);
        let m = rho.matrix();
        for r in 0..n {
            for c in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..self.d_in {
                    for j in 0..self.d_in {
                        acc += self.entry(r, i) * m[(i, j)] * self.entry(c, j).conj();
                    }
                }
                full[(r, c)] = acc;
            }
        }
        reduce(&DensityMatrix::from_trusted(full), &[self.d_in, self.d_env], &[0])
    }
}

/// Minimal dilation with one environment level per Kraus operator.
pub fn stinespring(k: &KrausFamily) -> Result<Isometry> {
    k.ensure_complete()?;
    let (d_in, d_env) = (k.dim(), k.len());
    let mut data = vec![C64::new(0.0, 0.0); d_in * d_env * d_in];
    for (e, op) in k.ops().iter().enumerate() {
        for a in 0..d_in {
            for b in 0..d_in {
                data[(a * d_env + e) * d_in + b] = op[(a, b)];
            }
        }
    }
    Ok(Isometry { d_in, d_env, data })
}

/// (I_S ⊗ V)|ψ⟩ as a pure state ordered system, apparatus, environment.
pub fn dilated_vector(initial: &PureState, k: &KrausFamily) -> Result<PureState> {
    if initial.dim() != 4 || k.dim() != 2 {
        return Err(Error::invalid("dilation expects a two-qubit input and an apparatus qubit channel"));
    }
    let v = stinespring(k)?;
    let psi = initial.amplitudes();
    let mut out = Vec::with_capacity(2 * v.rows());
    for s in 0..2 {
        out.extend(v.apply_to(&psi[2 * s..2 * s + 2]));
    }
    PureState::normalized(out)
}

pub fn dilated_state(initial: &PureState, k: &KrausFamily) -> Result<DensityMatrix> {
    Ok(dilated_vector(initial, k)?.to_density())
}

/// Residuals of the four identities at one time, all in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub t: f64,
    pub d_env: usize,
    /// |S(Ẽ) − S(SÃ)|
    pub env_vs_sa: f64,
    /// |S(Ẽ) − S_e| with S_e from the W matrix
    pub env_vs_exchange: f64,
    /// |S(ÃẼ) − S(S)|
    pub ae_vs_s: f64,
    /// |ΔI + ΔS_P − I(Ã:Ẽ)|
    pub bookkeeping: f64,
    /// I(Ã:Ẽ) from the dilated state
    pub mutual_ae: f64,
}

impl OracleReport {
    pub fn max_residual(&self) -> f64 {
        self.env_vs_sa
            .max(self.env_vs_exchange)
            .max(self.ae_vs_s)
            .max(self.bookkeeping)
            .max(-self.mutual_ae)
    }

    /// First identity whose residual exceeds `tol`, as a check failure.
    pub fn verify(&self, tol: f64) -> Result<()> {
        let checks = [
            ("S(E) = S(SA)", self.env_vs_sa),
            ("S(E) = entropy exchange", self.env_vs_exchange),
            ("S(AE) = S(S)", self.ae_vs_s),
            ("dI + dS_P = I(A:E)", self.bookkeeping),
            ("I(A:E) >= 0", (-self.mutual_ae).max(0.0)),
        ];
        for (identity, residual) in checks {
            if !(residual <= tol) {
                return Err(Error::CheckFailure {
                    identity: identity.to_string(),
                    t: self.t,
                    residual,
                });
            }
        }
        Ok(())
    }
}

/// Oracle identities for `initial` under `model` at time `t`.
pub fn oracle_checks(initial: &PureState, model: &ChannelModel, t: f64) -> Result<OracleReport> {
    let k = model.kraus(t)?;
    oracle_checks_with(initial, &k, &k, t)
}

/// As [`oracle_checks`], with the dilated route built from `dilation_family`
/// and the reduced Kraus route from `reduced_family`. Agreement requires the
/// two to describe the same channel.
pub fn oracle_checks_with(
    initial: &PureState,
    dilation_family: &KrausFamily,
    reduced_family: &KrausFamily,
    t: f64,
) -> Result<OracleReport> {
    let at = |e: Error| e.at(t);
    let d_env = dilation_family.len();
    let global = dilated_state(initial, dilation_family).map_err(at)?;
    let dims = [2, 2, d_env];
    let s_s = vn_entropy(&reduce(&global, &dims, &[0])?).map_err(at)?;
    let s_a = vn_entropy(&reduce(&global, &dims, &[1])?).map_err(at)?;
    let s_e = vn_entropy(&reduce(&global, &dims, &[2])?).map_err(at)?;
    let s_ae = vn_entropy(&reduce(&global, &dims, &[1, 2])?).map_err(at)?;
    let mutual_ae = s_a + s_e - s_ae;

    let rho0 = initial.to_density();
    let extended = extend_to_sa(reduced_family);
    let evolved = apply(&extended, &rho0)?;
    let s_sa = vn_entropy(&evolved).map_err(at)?;
    let exchange = entropy_exchange(&rho0, &extended).map_err(at)?;
    let production = tep(&rho0, &evolved, exchange)?;
    let delta_i = mutual_information(&evolved, (2, 2)).map_err(at)? - mutual_information(&rho0, (2, 2)).map_err(at)?;

    Ok(OracleReport {
        t,
        d_env,
        env_vs_sa: (s_e - s_sa).abs(),
        env_vs_exchange: (s_e - exchange).abs(),
        ae_vs_s: (s_ae - s_s).abs(),
        bookkeeping: (delta_i + production - mutual_ae).abs(),
        mutual_ae,
    })
}

/// Oracle report at every time in `times`.
pub fn oracle_along(initial: &PureState, model: &ChannelModel, times: &[f64]) -> Result<Vec<OracleReport>> {
    let scalars = model.scalars_along(times)?;
    times
        .iter()
        .zip(scalars)
        .map(|(&t, v)| {
            let k = model.kraus_from_scalar(t, v);
            oracle_checks_with(initial, &k, &k, t)
        })
        .collect()
}

/// Marginal of the dilated state on system ⊗ apparatus.
pub fn dilated_sa_marginal(initial: &PureState, k: &KrausFamily) -> Result<DensityMatrix> {
    let global = dilated_state(initial, k)?;
    partial_trace(&global, (4, k.len()), Keep::First)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_pure};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn models() -> [ChannelModel; 3] {
        [
            ChannelModel::dephasing(4.0, 1.0).unwrap(),
            ChannelModel::amplitude_damping(0.05, 1.0).unwrap(),
            ChannelModel::generalized_amplitude_damping(5.0).unwrap(),
        ]
    }

    #[test]
    fn identity_family_embeds_with_ground_environment() {
        let v = stinespring(&KrausFamily::identity(2)).unwrap();
        assert_eq!(v.d_env(), 1);
        assert!(v.isometry_error() < 1e-15);
        let psi = PureState::bell();
        let global = dilated_state(&psi, &KrausFamily::identity(2)).unwrap();
        assert!(global.matrix().max_abs_diff(psi.to_density().matrix()) < 1e-15);
    }

    #[test]
    fn environment_dimension_matches_kraus_count() {
        let ad = ChannelModel::amplitude_damping(0.05, 1.0).unwrap().kraus(2.0).unwrap();
        let gad = ChannelModel::generalized_amplitude_damping(5.0).unwrap().kraus(0.3).unwrap();
        assert_eq!(stinespring(&ad).unwrap().d_env(), 2);
        assert_eq!(stinespring(&gad).unwrap().d_env(), 4);
        assert_eq!(dilated_state(&PureState::bell(), &gad).unwrap().dim(), 16);
    }

    #[test]
    fn incomplete_family_is_rejected() {
        let k = KrausFamily::new_unchecked(vec![ComplexMatrix::identity(2).scale_real(0.5)]).unwrap();
        assert!(matches!(stinespring(&k), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn dilation_reproduces_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..200 {
            let model = models()[rng.gen_range(0..3)];
            let k = model.kraus(rng.gen_range(0.0..3.0)).unwrap();
            let v = stinespring(&k).unwrap();
            assert!(v.isometry_error() < 1e-12);
            let rho = random_density(&mut rng, 2);
            let direct = apply(&k, &rho).unwrap();
            let dilated = v.channel_output(&rho).unwrap();
            assert!(direct.matrix().max_abs_diff(dilated.matrix()) < 1e-12);
        }
    }

    #[test]
    fn global_state_stays_pure_and_marginal_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for model in models() {
            for _ in 0..10 {
                let k = model.kraus(rng.gen_range(0.0..3.0)).unwrap();
                let psi = random_pure(&mut rng, 4);
                let global = dilated_state(&psi, &k).unwrap();
                assert!((global.purity() - 1.0).abs() < 1e-10);
                let marginal = dilated_sa_marginal(&psi, &k).unwrap();
                let kraus_route = apply(&extend_to_sa(&k), &psi.to_density()).unwrap();
                assert!(marginal.matrix().max_abs_diff(kraus_route.matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn identity_channel_oracle_is_exact() {
        let k = KrausFamily::identity(2);
        let r = oracle_checks_with(&PureState::bell(), &k, &k, 0.0).unwrap();
        assert!(r.max_residual() < 1e-12);
        assert!(r.mutual_ae.abs() < 1e-12);
    }

    #[test]
    fn reference_spot_checks() {
        let bell = PureState::bell();
        let ad = ChannelModel::amplitude_damping(0.05, 1.0).unwrap();
        for t in [2.0, 11.08, 20.0] {
            oracle_checks(&bell, &ad, t).unwrap().verify(ORACLE_TOL).unwrap();
        }
        let gad = ChannelModel::generalized_amplitude_damping(5.0).unwrap();
        for t in [0.3, 1.0] {
            let r = oracle_checks(&bell, &gad, t).unwrap();
            assert_eq!(r.d_env, 4);
            r.verify(ORACLE_TOL).unwrap();
        }
    }

    #[test]
    fn random_inputs_satisfy_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for model in models() {
            let times: Vec<f64> = (0..8).map(|i| 0.4 * i as f64).collect();
            let psi = random_pure(&mut rng, 4);
            for r in oracle_along(&psi, &model, &times).unwrap() {
                r.verify(ORACLE_TOL).unwrap();
            }
        }
    }

    #[test]
    fn mismatched_routes_fail_verification() {
        let model = ChannelModel::amplitude_damping(0.05, 1.0).unwrap();
        let k = model.kraus(2.0).unwrap();
        let shifted = model.kraus(2.5).unwrap();
        let r = oracle_checks_with(&PureState::bell(), &k, &shifted, 2.0).unwrap();
        match r.verify(ORACLE_TOL) {
            Err(Error::CheckFailure { t, residual, .. }) => {
                assert_eq!(t, 2.0);
                assert!(residual > ORACLE_TOL);
            }
            other => panic!("expected check failure, got {other:?}"),
        }
    }
}
