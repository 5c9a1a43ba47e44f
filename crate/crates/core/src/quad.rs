//! Adaptive Simpson quadrature and a cumulative variant for integrating a
//! rate along an increasing sequence of times.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 50;

/// ∫ₐᵇ f with absolute tolerance `tol`, using Richardson-corrected adaptive Simpson.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("non-finite integration bounds"));
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    refine(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::numerical("integrand is not finite"));
    }
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::numerical(format!(
            "adaptive Simpson did not converge on [{a}, {b}] (error estimate {:e})",
            delta.abs() / 15.0
        )));
    }
    Ok(refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Running integral ∫₀ᵗ f evaluated at increasing times, each new piece
/// integrated only once. The tolerance budget is split in proportion to the
/// piece length relative to `horizon`.
pub struct CumulativeIntegral<F> {
    f: F,
    tol: f64,
    horizon: f64,
    last_t: f64,
    value: f64,
}

impl<F> CumulativeIntegral<F>
where
    F: Fn(f64) -> f64,
{
    pub fn new(f: F, tol: f64, horizon: f64) -> Self {
        CumulativeIntegral {
            f,
            tol,
            horizon: horizon.max(f64::MIN_POSITIVE),
            last_t: 0.0,
            value: 0.0,
        }
    }

    /// Advance to `t` (must not decrease) and return ∫₀ᵗ f.
    pub fn advance(&mut self, t: f64) -> Result<f64> {
        if t < self.last_t {
            return Err(Error::invalid(format!(
                "cumulative integral cannot move backwards from {} to {t}",
                self.last_t
            )));
        }
        if t > self.last_t {
            let piece_tol = self.tol * ((t - self.last_t) / self.horizon).min(1.0);
            self.value += adaptive_simpson(&self.f, self.last_t, t, piece_tol).map_err(|e| e.at(t))?;
            self.last_t = t;
        }
        Ok(self.value)
    }
}
