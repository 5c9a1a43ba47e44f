//! Kraus families for the three apparatus channels and their application to
//! apparatus and system–apparatus states.

pub mod damping;
pub mod dephasing;

pub use damping::{ad_decay_rate, ad_g, ad_kraus, ad_kraus_from_g, gad_kraus, gad_kraus_from, gad_p, gad_q};
pub use dephasing::{
    dephasing_factor, dephasing_kraus, dephasing_kraus_from_factor, dephasing_rate, gamma_fn,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{tensor, ComplexMatrix, DensityMatrix};
use crate::quad::CumulativeIntegral;

/// Tolerance on ‖Σ K†K − I‖ (max entry).
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Absolute tolerance for the dephasing-rate integral.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Ordered operator-sum representation of a channel.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausFamily {
    ops: Vec<ComplexMatrix>,
}

impl KrausFamily {
    /// Checks shape and completeness.
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let family = Self::new_unchecked(ops)?;
        let err = family.completeness_error();
        if !(err <= COMPLETENESS_TOL) {
            return Err(Error::invalid(format!(
                "Kraus family is not complete (deviation {err:e})"
            )));
        }
        Ok(family)
    }

    /// Checks shape only. Incomplete families are rejected later by
    /// [`apply`] and the dilation routines.
    pub fn new_unchecked(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = ops
            .first()
            .ok_or_else(|| Error::invalid("empty Kraus family"))?
            .dim();
        if ops.iter().any(|k| k.dim() != dim) {
            return Err(Error::invalid("Kraus operators of different dimensions"));
        }
        Ok(KrausFamily { ops })
    }

    pub fn identity(dim: usize) -> Self {
        KrausFamily {
            ops: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    /// max |(Σ K†K − I)_ij|
    pub fn completeness_error(&self) -> f64 {
        let n = self.dim();
        let mut sum = ComplexMatrix::zeros(n);
        for k in &self.ops {
            sum = &sum + &k.adjoint().matmul(k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(n))
    }

    pub(crate) fn ensure_complete(&self) -> Result<()> {
        let err = self.completeness_error();
        if !(err <= COMPLETENESS_TOL) {
            return Err(Error::invalid(format!(
                "Kraus family is not complete (deviation {err:e})"
            )));
        }
        Ok(())
    }
}

/// Σᵢ Kᵢ ρ Kᵢ†
pub fn apply(k: &KrausFamily, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if k.dim() != rho.dim() {
        return Err(Error::invalid(format!(
            "channel acts on dimension {}, state has dimension {}",
            k.dim(),
            rho.dim()
        )));
    }
    k.ensure_complete()?;
    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(n);
    for op in k.ops() {
        out = &out + &op.sandwich(rho.matrix());
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// {I₂ ⊗ Kᵢ}: the apparatus channel acting on the system ⊗ apparatus space.
pub fn extend_to_sa(k: &KrausFamily) -> KrausFamily {
    let id = ComplexMatrix::identity(2);
    KrausFamily {
        ops: k.ops().iter().map(|op| tensor(&id, op)).collect(),
    }
}

/// Parameters of one of the three apparatus–environment couplings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelModel {
    /// Spin-boson pure dephasing with bath exponent `s` and cut-off `omega_c`.
    Dephasing { s: f64, omega_c: f64 },
    /// Zero-temperature damping with Lorentzian width `lambda` and coupling `gamma0`.
    #[serde(rename = "ad")]
    AmplitudeDamping { lambda: f64, gamma0: f64 },
    /// P(t) = cos²(ωt), q(t) = e^{-t}.
    #[serde(rename = "gad")]
    GeneralizedAmplitudeDamping { omega: f64 },
}

impl ChannelModel {
    pub fn dephasing(s: f64, omega_c: f64) -> Result<Self> {
        let m = ChannelModel::Dephasing { s, omega_c };
        m.validate()?;
        Ok(m)
    }

    pub fn amplitude_damping(lambda: f64, gamma0: f64) -> Result<Self> {
        let m = ChannelModel::AmplitudeDamping { lambda, gamma0 };
        m.validate()?;
        Ok(m)
    }

    pub fn generalized_amplitude_damping(omega: f64) -> Result<Self> {
        let m = ChannelModel::GeneralizedAmplitudeDamping { omega };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match *self {
            ChannelModel::Dephasing { s, omega_c } => {
                positive("s", s)?;
                positive("omega_c", omega_c)
            }
            ChannelModel::AmplitudeDamping { lambda, gamma0 } => {
                positive("lambda", lambda)?;
                positive("gamma0", gamma0)
            }
            ChannelModel::GeneralizedAmplitudeDamping { omega } => {
                if omega.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid(format!("omega must be finite, got {omega}")))
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelModel::Dephasing { .. } => "dephasing",
            ChannelModel::AmplitudeDamping { .. } => "ad",
            ChannelModel::GeneralizedAmplitudeDamping { .. } => "gad",
        }
    }

    /// 3/ω_c for dephasing, 40/γ₀ for damping, 3 for GAD.
    pub fn default_t_max(&self) -> f64 {
        match *self {
            ChannelModel::Dephasing { omega_c, .. } => 3.0 / omega_c,
            ChannelModel::AmplitudeDamping { gamma0, .. } => 40.0 / gamma0,
            ChannelModel::GeneralizedAmplitudeDamping { .. } => 3.0,
        }
    }

    /// The scalar that fixes the channel at time `t`: γ(t), G(t) or P(t).
    pub fn channel_scalar(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        match *self {
            ChannelModel::Dephasing { s, omega_c } => dephasing_factor(t, s, omega_c),
            ChannelModel::AmplitudeDamping { lambda, gamma0 } => Ok(ad_g(t, lambda, gamma0)),
            ChannelModel::GeneralizedAmplitudeDamping { omega } => Ok(gad_p(t, omega)),
        }
    }

    /// Kraus family at time `t` given its precomputed [`channel_scalar`](Self::channel_scalar).
    pub fn kraus_from_scalar(&self, t: f64, scalar: f64) -> KrausFamily {
        match self {
            ChannelModel::Dephasing { .. } => dephasing_kraus_from_factor(scalar),
            ChannelModel::AmplitudeDamping { .. } => ad_kraus_from_g(scalar),
            ChannelModel::GeneralizedAmplitudeDamping { .. } => gad_kraus_from(scalar, gad_q(t)),
        }
    }

    pub fn kraus(&self, t: f64) -> Result<KrausFamily> {
        let scalar = self.channel_scalar(t)?;
        Ok(self.kraus_from_scalar(t, scalar))
    }

    /// Channel scalars along increasing `times`. For dephasing the rate
    /// integral is accumulated piecewise so the whole sequence costs one
    /// quadrature pass.
    pub fn scalars_along(&self, times: &[f64]) -> Result<Vec<f64>> {
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("times must be non-decreasing"));
        }
        if let Some(&t0) = times.first() {
            check_time(t0)?;
        }
        match *self {
            ChannelModel::Dephasing { s, omega_c } => {
                let horizon = times.last().copied().unwrap_or(0.0);
                let mut integral =
                    CumulativeIntegral::new(|tau| dephasing_rate(tau, s, omega_c), QUADRATURE_TOL, horizon);
                times
                    .iter()
                    .map(|&t| integral.advance(t).map(|v| (-v).exp().min(1.0)).map_err(|e| e.at(t)))
                    .collect()
            }
            _ => times.iter().map(|&t| self.channel_scalar(t)).collect(),
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("time must be non-negative and finite, got {t}")))
    }
}
