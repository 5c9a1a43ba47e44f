//! Amplitude damping with a Lorentzian bath, and the generalized amplitude
//! damping family with P(t) = cos²(ωt), q(t) = e^{-t}.

use super::KrausFamily;
use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, C64};

/// Below this value of |d|·t the closed forms switch to their series in d².
const SERIES_THRESHOLD: f64 = 1e-6;
/// Smallest admissible denominator of the decay rate.
const POLE_TOL: f64 = 1e-12;

/// Which form of d = √(λ² − 2γ₀λ) applies at a given time.
enum Branch {
    /// λ > 2γ₀: d real.
    Real(f64),
    /// λ < 2γ₀: d = i|d|.
    Oscillatory(f64),
    /// |d|·t small; carries d².
    Series(f64),
}

fn branch(t: f64, lambda: f64, gamma0: f64) -> Branch {
    let d2 = lambda * lambda - 2.0 * gamma0 * lambda;
    let d = d2.abs().sqrt();
    if d * t < SERIES_THRESHOLD {
        Branch::Series(d2)
    } else if d2 > 0.0 {
        Branch::Real(d)
    } else {
        Branch::Oscillatory(d)
    }
}

/// G(t) = e^{−λt/2}[cosh(dt/2) + (λ/d) sinh(dt/2)]
pub fn ad_g(t: f64, lambda: f64, gamma0: f64) -> f64 {
    match branch(t, lambda, gamma0) {
        Branch::Real(d) => {
            // Exponentials combined so nothing overflows for long times.
            let r = lambda / d;
            0.5 * (1.0 + r) * (0.5 * (d - lambda) * t).exp() + 0.5 * (1.0 - r) * (-0.5 * (d + lambda) * t).exp()
        }
        Branch::Oscillatory(d) => {
            let x = 0.5 * d * t;
            (-0.5 * lambda * t).exp() * (x.cos() + lambda / d * x.sin())
        }
        Branch::Series(d2) => {
            let bracket = 1.0 + d2 * t * t / 8.0 + 0.5 * lambda * t * (1.0 + d2 * t * t / 24.0);
            (-0.5 * lambda * t).exp() * bracket
        }
    }
}

/// γ(t) = 2γ₀λ sinh(dt/2) / (d cosh(dt/2) + λ sinh(dt/2)).
///
/// On the oscillatory branch the denominator vanishes exactly where G does;
/// such poles are reported as a numerical failure at `t`.
pub fn ad_decay_rate(t: f64, lambda: f64, gamma0: f64) -> Result<f64> {
    match branch(t, lambda, gamma0) {
        Branch::Real(d) => {
            let th = (0.5 * d * t).tanh();
            Ok(2.0 * gamma0 * lambda * th / (d + lambda * th))
        }
        Branch::Oscillatory(d) => {
            let x = 0.5 * d * t;
            let den = d * x.cos() + lambda * x.sin();
            if den.abs() < POLE_TOL {
                return Err(Error::NumericalFailure {
                    t: Some(t),
                    msg: format!("decay rate has a pole (denominator {den:e})"),
                });
            }
            Ok(2.0 * gamma0 * lambda * x.sin() / den)
        }
        Branch::Series(d2) => {
            let num = gamma0 * lambda * t * (1.0 + d2 * t * t / 24.0);
            let den = 1.0 + d2 * t * t / 8.0 + 0.5 * lambda * t * (1.0 + d2 * t * t / 24.0);
            Ok(num / den)
        }
    }
}

/// K₁ = diag(1, G), K₂ = √(1−|G|²) |0⟩⟨1|. A negative G is kept signed in K₁.
pub fn ad_kraus_from_g(g: f64) -> KrausFamily {
    let jump = (1.0 - g * g).max(0.0).sqrt();
    KrausFamily {
        ops: vec![
            ComplexMatrix::diag(&[1.0, g]),
            ComplexMatrix::from_real(2, &[0.0, jump, 0.0, 0.0]).unwrap(),
        ],
    }
}

pub fn ad_kraus(t: f64, lambda: f64, gamma0: f64) -> KrausFamily {
    ad_kraus_from_g(ad_g(t, lambda, gamma0))
}

/// P(t) = cos²(ωt)
pub fn gad_p(t: f64, omega: f64) -> f64 {
    let c = (omega * t).cos();
    c * c
}

/// q(t) = e^{-t}
pub fn gad_q(t: f64) -> f64 {
    (-t).exp()
}

/// E₁ = √P diag(1, √q), E₂ = √P √(1−q)|0⟩⟨1|,
/// E₃ = √(1−P) diag(√q, 1), E₄ = √(1−P) √(1−q)|1⟩⟨0|.
pub fn gad_kraus_from(p: f64, q: f64) -> KrausFamily {
    let p = p.clamp(0.0, 1.0);
    let q = q.clamp(0.0, 1.0);
    let (sp, sp_bar) = (p.sqrt(), (1.0 - p).sqrt());
    let (sq, sq_bar) = (q.sqrt(), (1.0 - q).sqrt());
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    KrausFamily {
        ops: vec![
            ComplexMatrix::from_rows(2, vec![r(sp), z, z, r(sp * sq)]).unwrap(),
            ComplexMatrix::from_rows(2, vec![z, r(sp * sq_bar), z, z]).unwrap(),
            ComplexMatrix::from_rows(2, vec![r(sp_bar * sq), z, z, r(sp_bar)]).unwrap(),
            ComplexMatrix::from_rows(2, vec![z, z, r(sp_bar * sq_bar), z]).unwrap(),
        ],
    }
}

pub fn gad_kraus(t: f64, omega: f64) -> KrausFamily {
    gad_kraus_from(gad_p(t, omega), gad_q(t))
}
