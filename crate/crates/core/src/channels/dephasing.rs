//! Pure dephasing of the apparatus by a bosonic bath with spectral density
//! J(ω) = ω^s ω_c^{1-s} e^{-ω/ω_c}.

use std::f64::consts::PI;

use super::{KrausFamily, QUADRATURE_TOL};
use crate::error::{Error, Result};
use crate::qmat::ComplexMatrix;
use crate::quad::adaptive_simpson;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler Γ via the Lanczos approximation (g = 7, nine terms), with the
/// reflection formula below 1/2.
pub fn gamma_fn(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_fn(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// η(τ) = ω_c [1 + (ω_c τ)²]^{-s/2} Γ(s) sin[s·arctan(ω_c τ)]
pub fn dephasing_rate(tau: f64, s: f64, omega_c: f64) -> f64 {
    let x = omega_c * tau;
    omega_c * (1.0 + x * x).powf(-0.5 * s) * gamma_fn(s) * (s * x.atan()).sin()
}

/// γ(t) = exp(−∫₀ᵗ η)
pub fn dephasing_factor(t: f64, s: f64, omega_c: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time must be non-negative, got {t}")));
    }
    let integral = adaptive_simpson(&|tau| dephasing_rate(tau, s, omega_c), 0.0, t, QUADRATURE_TOL)
        .map_err(|e| e.at(t))?;
    Ok((-integral).exp().min(1.0))
}

/// {√((1+γ)/2) I, √((1−γ)/2) σ_z}: keeps populations, scales coherences by γ.
pub fn dephasing_kraus_from_factor(gamma: f64) -> KrausFamily {
    let g = gamma.clamp(-1.0, 1.0);
    KrausFamily {
        ops: vec![
            ComplexMatrix::identity(2).scale_real((0.5 * (1.0 + g)).sqrt()),
            ComplexMatrix::pauli_z().scale_real((0.5 * (1.0 - g)).sqrt()),
        ],
    }
}

pub fn dephasing_kraus(t: f64, s: f64, omega_c: f64) -> Result<KrausFamily> {
    Ok(dephasing_kraus_from_factor(dephasing_factor(t, s, omega_c)?))
}
