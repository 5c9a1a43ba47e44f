//! Entropic bookkeeping of the system–apparatus–environment picture:
//! entropy exchange, mutual information, classical correlation under
//! projective measurement of the apparatus, discord and total entropy
//! production.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channels::KrausFamily;
use crate::error::{Error, Result};
use crate::optimize::{nelder_mead, SimplexOptions};
use crate::qmat::{
    hermitian_eig, partial_trace, vn_entropy, ComplexMatrix, DensityMatrix, Keep, C64,
};

const THETA_CELLS: usize = 64;
const PHI_CELLS: usize = 128;
const REFINED_CELLS: usize = 3;
const SIMPLEX_DIAMETER: f64 = 1e-8;
const SIMPLEX_MAX_EVALS: usize = 600;

/// Discord values in [-DISCORD_CLAMP, 0) are reported as zero.
pub const DISCORD_CLAMP: f64 = 1e-6;
/// Largest Tr ρ² deficit accepted for a state declared pure.
pub const PURITY_TOL: f64 = 1e-10;

/// Rank-one projective measurement {|n₊⟩⟨n₊|, |n₋⟩⟨n₋|} on a qubit along the
/// Bloch direction (θ, φ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    /// Reduce arbitrary angles to θ ∈ [0, π], φ ∈ [0, 2π) describing the same direction.
    pub fn canonical(theta: f64, phi: f64) -> Self {
        let two_pi = 2.0 * PI;
        let mut theta = theta.rem_euclid(two_pi);
        let mut phi = phi;
        if theta > PI {
            theta = two_pi - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(two_pi);
        if phi >= two_pi {
            phi = 0.0;
        }
        MeasurementBasis { theta, phi }
    }

    /// |n₊⟩ = (cos θ/2, e^{iφ} sin θ/2), |n₋⟩ = (−e^{−iφ} sin θ/2, cos θ/2)
    pub fn vectors(&self) -> [[C64; 2]; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [
            [C64::new(c, 0.0), e * s],
            [-e.conj() * s, C64::new(c, 0.0)],
        ]
    }
}

/// All information quantities for one evolved system–apparatus state, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoQuantities {
    pub mutual: f64,
    pub classical: f64,
    pub discord: f64,
    pub entropy_exchange: f64,
    pub tep: f64,
}

/// W_ij = Tr(K_i ρ K_j†) / Tr(Λ[ρ]): the state the channel leaves in an
/// environment that started pure.
pub fn w_matrix(rho: &DensityMatrix, k: &KrausFamily) -> Result<DensityMatrix> {
    if k.dim() != rho.dim() {
        return Err(Error::invalid(format!(
            "channel acts on dimension {}, state has dimension {}",
            k.dim(),
            rho.dim()
        )));
    }
    let n = k.len();
    let left: Vec<ComplexMatrix> = k.ops().iter().map(|op| op.matmul(rho.matrix())).collect();
    let mut w = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            // Tr(A B†) = Σ_ab A_ab conj(B_ab)
            w[(i, j)] = left[i]
                .as_slice()
                .iter()
                .zip(k.ops()[j].as_slice())
                .map(|(a, b)| a * b.conj())
                .sum();
        }
    }
    let norm = w.trace().re;
    if !(norm > 0.0) {
        return Err(Error::numerical("channel output has vanishing trace"));
    }
    Ok(DensityMatrix::from_trusted(w.scale_real(1.0 / norm)))
}

/// S_e(ρ, Λ) = S(W), in bits.
pub fn entropy_exchange(rho: &DensityMatrix, k: &KrausFamily) -> Result<f64> {
    vn_entropy(&w_matrix(rho, k)?)
}

/// I(X:Y) = S(X) + S(Y) − S(XY)
pub fn mutual_information(rho_xy: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let sx = vn_entropy(&partial_trace(rho_xy, dims, Keep::First)?)?;
    let sy = vn_entropy(&partial_trace(rho_xy, dims, Keep::Second)?)?;
    let sxy = vn_entropy(rho_xy)?;
    Ok((sx + sy - sxy).max(0.0))
}

/// Σᵢ pᵢ S(ρ^{X|i}) after measuring the second (qubit) factor in `basis`.
pub fn conditional_entropy(rho_xy: &DensityMatrix, dims: (usize, usize), basis: &MeasurementBasis) -> Result<f64> {
    check_measured_qubit(rho_xy, dims)?;
    Ok(measured_entropy(rho_xy.matrix(), dims.0, &basis.vectors()))
}

fn check_measured_qubit(rho_xy: &DensityMatrix, dims: (usize, usize)) -> Result<()> {
    if dims.1 != 2 {
        return Err(Error::invalid("the measured factor must be a qubit"));
    }
    if dims.0 * dims.1 != rho_xy.dim() {
        return Err(Error::invalid(format!(
            "dimensions {dims:?} do not match state dimension {}",
            rho_xy.dim()
        )));
    }
    Ok(())
}

/// Σᵢ pᵢ S(ρ^{X|i}) with pᵢ S(μ/pᵢ) = −Σ μ log μ + pᵢ log pᵢ over the
/// unnormalized conditional spectrum μ.
fn measured_entropy(m: &ComplexMatrix, dx: usize, outcomes: &[[C64; 2]; 2]) -> f64 {
    let mut total = 0.0;
    for n in outcomes {
        total += if dx == 2 {
            let (p, q) = (conditional_entry(m, 0, 0, n).re, conditional_entry(m, 1, 1, n).re);
            let off = conditional_entry(m, 0, 1, n);
            let mean = 0.5 * (p + q);
            let radius = (0.25 * (p - q) * (p - q) + off.norm_sqr()).sqrt();
            weighted_entropy(&[mean - radius, mean + radius])
        } else {
            let mut block = ComplexMatrix::zeros(dx);
            for a in 0..dx {
                for b in 0..dx {
                    block[(a, b)] = conditional_entry(m, a, b, n);
                }
            }
            let spectrum = hermitian_eig(&block.hermitian_part()).expect("conditional block is Hermitian");
            weighted_entropy(&spectrum)
        };
    }
    total.max(0.0)
}

/// p S(μ/p) for an unnormalized spectrum μ with p = Σμ.
fn weighted_entropy(spectrum: &[f64]) -> f64 {
    let p: f64 = spectrum.iter().sum();
    if p <= 0.0 {
        return 0.0;
    }
    let mut acc = p * p.log2();
    for &mu in spectrum {
        if mu > 0.0 {
            acc -= mu * mu.log2();
        }
    }
    acc
}

/// ⟨a|⟨n| ρ |b⟩|n⟩ for the conditional state of X given outcome n on Y.
#[inline]
fn conditional_entry(m: &ComplexMatrix, a: usize, b: usize, n: &[C64; 2]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for y in 0..2 {
        for yp in 0..2 {
            acc += n[y].conj() * m[(2 * a + y, 2 * b + yp)] * n[yp];
        }
    }
    acc
}

/// Minimum of Σᵢ pᵢ S(ρ^{X|i}) over projective qubit measurements on Y.
///
/// A 64 × 128 (θ, φ) grid picks the three best cells; each is refined with
/// Nelder–Mead. The reduction keeps the first minimum found in grid order,
/// so equal values resolve to the smaller θ and then smaller φ.
pub fn minimal_conditional_entropy(
    rho_xy: &DensityMatrix,
    dims: (usize, usize),
) -> Result<(f64, MeasurementBasis)> {
    check_measured_qubit(rho_xy, dims)?;
    let m = rho_xy.matrix();
    let objective = |theta: f64, phi: f64| measured_entropy(m, dims.0, &MeasurementBasis { theta, phi }.vectors());

    let theta_step = PI / (THETA_CELLS - 1) as f64;
    let phi_step = 2.0 * PI / PHI_CELLS as f64;
    let mut cells: Vec<(f64, usize, usize)> = Vec::with_capacity(THETA_CELLS * PHI_CELLS);
    for i in 0..THETA_CELLS {
        for j in 0..PHI_CELLS {
            cells.push((objective(i as f64 * theta_step, j as f64 * phi_step), i, j));
        }
    }
    // stable: equal values keep (θ, φ) grid order
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    let (v0, i0, j0) = cells[0];
    let mut best_value = v0;
    let mut best = MeasurementBasis::canonical(i0 as f64 * theta_step, j0 as f64 * phi_step);

    let opts = SimplexOptions {
        initial_step: theta_step,
        diameter_tol: SIMPLEX_DIAMETER,
        max_evals: SIMPLEX_MAX_EVALS,
    };
    for &(_, i, j) in cells.iter().take(REFINED_CELLS) {
        let start = [i as f64 * theta_step, j as f64 * phi_step];
        let r = nelder_mead(|x| objective(x[0], x[1]), &start, &opts);
        if r.value < best_value {
            best_value = r.value;
            best = MeasurementBasis::canonical(r.x[0], r.x[1]);
        }
    }
    Ok((best_value, best))
}

/// J(X|Y) = S(X) − min Σᵢ pᵢ S(ρ^{X|i}), with the minimizing basis.
pub fn classical_correlation(rho_xy: &DensityMatrix, dims: (usize, usize)) -> Result<(f64, MeasurementBasis)> {
    let (min_cond, basis) = minimal_conditional_entropy(rho_xy, dims)?;
    let sx = vn_entropy(&partial_trace(rho_xy, dims, Keep::First)?)?;
    Ok(((sx - min_cond).max(0.0), basis))
}

/// Mutual information split into its classical and quantum (discord) parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Correlations {
    pub mutual: f64,
    pub classical: f64,
    pub discord: f64,
    pub basis: MeasurementBasis,
}

pub fn correlations(rho_xy: &DensityMatrix, dims: (usize, usize)) -> Result<Correlations> {
    let mutual = mutual_information(rho_xy, dims)?;
    let (classical, basis) = classical_correlation(rho_xy, dims)?;
    let raw = mutual - classical;
    let discord = if raw >= 0.0 {
        raw
    } else if raw >= -DISCORD_CLAMP {
        0.0
    } else {
        return Err(Error::numerical(format!("negative discord {raw:e}")));
    };
    Ok(Correlations {
        mutual,
        classical,
        discord,
        basis,
    })
}

/// D(X|Y) = I − J, measured on the second factor.
pub fn discord(rho_xy: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    Ok(correlations(rho_xy, dims)?.discord)
}

/// ΔS_P = S(ρ^{SÃ}) + S(ρ^Ẽ) − S(ρ^{SA}) − S(ρ^E) for a pure initial
/// system–apparatus state and an initially pure environment, where the
/// subtracted terms vanish.
pub fn tep(initial: &DensityMatrix, evolved: &DensityMatrix, env_entropy: f64) -> Result<f64> {
    let purity = initial.purity();
    if (purity - 1.0).abs() > PURITY_TOL {
        return Err(Error::invalid(format!(
            "initial system-apparatus state is not pure (Tr rho^2 = {purity})"
        )));
    }
    Ok(vn_entropy(evolved)? + env_entropy)
}
