//! Small dense complex matrices: tensor products, partial traces, a Jacobi
//! eigensolver for Hermitian operators and the von Neumann entropy.
//!
//! Everything here is sized for a handful of qubits (dimensions up to 16),
//! so matrices are stored as flat row-major `Vec`s without any blocking.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Off-diagonal Frobenius norm (relative to the matrix norm) at which Jacobi stops.
const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Entrywise tolerance for Hermiticity of eigensolver input.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;
/// Entrywise tolerance for Hermiticity and trace of a density matrix.
pub const DENSITY_TOL: f64 = 1e-12;
/// Most negative eigenvalue a density matrix (or entropy argument) may carry.
pub const NEGATIVE_EIG_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build from row-major entries; `data.len()` must equal `dim * dim`.
    pub fn from_rows(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_rows(dim, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// |a⟩⟨b|
    pub fn outer(a: &[C64], b: &[C64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::invalid("outer product of vectors of different length"));
        }
        let n = a.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = a[i] * b[j].conj();
            }
        }
        Ok(m)
    }

    pub fn pauli_x() -> Self {
        Self::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn pauli_y() -> Self {
        Self::from_rows(2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).unwrap()
    }

    pub fn pauli_z() -> Self {
        Self::diag(&[1.0, -1.0])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity, `max |a_ij - conj(a_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// (A + A†)/2
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&adj.data) {
            *z = (*z + *w) * 0.5;
        }
        out
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn apply_to(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch in matrix-vector product");
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    /// A B A†
    pub fn sandwich(&self, b: &ComplexMatrix) -> Self {
        self.matmul(b).matmul(&self.adjoint())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product; entry ((i,k),(j,l)) is `a[i,j] * b[k,l]`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a.data[i * na + j];
            if aij == ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out.data[(i * nb + k) * n + (j * nb + l)] = aij * b.data[k * nb + l];
                }
            }
        }
    }
    out
}

/// Kronecker product of state vectors.
pub fn tensor_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

/// Normalized vector `amplitudes` on a `dim`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Wrap amplitudes whose squared moduli already sum to one (within 1e-12).
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::invalid("empty state vector"));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::invalid(format!(
                "state vector not normalized: squared norm {norm_sqr}"
            )));
        }
        Ok(PureState { amplitudes })
    }

    /// Rescale arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Ok(PureState { amplitudes })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[k] = ONE;
        PureState { amplitudes }
    }

    /// (|00⟩ + |11⟩)/√2
    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState {
            amplitudes: vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// U|ψ⟩ for a unitary `u`; the result is renormalized to absorb roundoff.
    pub fn transformed(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::invalid("unitary and state dimensions differ"));
        }
        Self::normalized(u.apply_to(&self.amplitudes))
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes).unwrap())
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validate Hermiticity (1e-12), unit trace (1e-12) and positivity (eigenvalues ≥ -1e-10).
    pub fn try_new(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_error();
        if herm > DENSITY_TOL {
            return Err(Error::invalid(format!("matrix not Hermitian (deviation {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > DENSITY_TOL {
            return Err(Error::invalid(format!("trace {tr} differs from 1")));
        }
        let spectrum = hermitian_eig(&matrix)?;
        if let Some(&lowest) = spectrum.first() {
            if lowest < -NEGATIVE_EIG_TOL {
                return Err(Error::invalid(format!("negative eigenvalue {lowest:e}")));
            }
        }
        Ok(DensityMatrix(matrix))
    }

    /// For matrices produced by trace- and positivity-preserving operations
    /// on valid density matrices. Enforces exact Hermiticity.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        DensityMatrix(matrix.hermitian_part())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Tr ρ²
    pub fn purity(&self) -> f64 {
        self.0.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        psi.to_density()
    }
}

/// Which factor of a bipartite system survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Reduced state of one factor of a bipartite `dims.0 ⊗ dims.1` system.
pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: Keep) -> Result<DensityMatrix> {
    let kept = match keep {
        Keep::First => [0],
        Keep::Second => [1],
    };
    reduce(rho, &[dims.0, dims.1], &kept)
}

/// Reduced state on the subsystems listed in `keep` (strictly increasing
/// indices into `dims`), tracing out all others.
pub fn reduce(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let m = reduce_matrix(rho.matrix(), dims, keep)?;
    Ok(DensityMatrix::from_trusted(m))
}

pub(crate) fn reduce_matrix(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || total != m.dim() {
        return Err(Error::invalid(format!(
            "subsystem dimensions {dims:?} do not multiply to {}",
            m.dim()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::invalid(format!("invalid kept subsystems {keep:?}")));
    }
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();

    // Split every full index into (kept index, traced index).
    let mut kept_idx = vec![0usize; total];
    let mut traced_idx = vec![0usize; total];
    for r in 0..total {
        let mut rem = r;
        let mut digits = vec![0usize; dims.len()];
        for (s, &d) in dims.iter().enumerate().rev() {
            digits[s] = rem % d;
            rem /= d;
        }
        let (mut ki, mut ti) = (0, 0);
        for (s, &d) in dims.iter().enumerate() {
            if keep.contains(&s) {
                ki = ki * d + digits[s];
            } else {
                ti = ti * d + digits[s];
            }
        }
        kept_idx[r] = ki;
        traced_idx[r] = ti;
    }

    let mut out = ComplexMatrix::zeros(kept_dim);
    for r in 0..total {
        for c in 0..total {
            if traced_idx[r] == traced_idx[c] {
                out[(kept_idx[r], kept_idx[c])] += m[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    match h.dim() {
        1 => Ok(vec![h[(0, 0)].re]),
        2 => {
            let (a, d) = (h[(0, 0)].re, h[(1, 1)].re);
            let b = 0.5 * (h[(0, 1)] + h[(1, 0)].conj());
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            Ok(vec![mean - radius, mean + radius])
        }
        _ => Ok(jacobi(h, false).0),
    }
}

/// Eigenvalues (ascending) and the unitary whose columns are the matching eigenvectors.
pub fn hermitian_eigh(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(h)?;
    let (values, vectors) = jacobi(h, true);
    Ok((values, vectors.expect("eigenvectors requested")))
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    let err = h.hermiticity_error();
    if !(err <= HERMITIAN_INPUT_TOL) {
        return Err(Error::invalid(format!(
            "eigensolver input not Hermitian (deviation {err:e})"
        )));
    }
    Ok(())
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the
/// pivot `a_pq` and then applies the real symmetric Jacobi rotation.
fn jacobi(h: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let scale = a.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = if theta >= 0.0 { 1.0 } else { -1.0 } / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U restricted to the (p, q) plane.
                let upp = C64::new(c, 0.0);
                let upq = C64::new(s, 0.0);
                let uqp = -phase.conj() * s;
                let uqq = phase.conj() * c;

                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * upp + y * uqp;
                    a[(k, q)] = x * upq + y * uqq;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = upp.conj() * x + uqp.conj() * y;
                    a[(q, k)] = upq.conj() * x + uqq.conj() * y;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let (x, y) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = x * upp + y * uqp;
                        v[(k, q)] = x * upq + y * uqq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|v| {
        let mut sorted = ComplexMatrix::zeros(n);
        for (col, &src) in order.iter().enumerate() {
            for k in 0..n {
                sorted[(k, col)] = v[(k, src)];
            }
        }
        sorted
    });
    (values, vectors)
}

/// Shannon entropy in bits of a spectrum; entries in [-1e-10, 0) count as zero.
pub fn entropy_of_spectrum(spectrum: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in spectrum {
        if lambda < -NEGATIVE_EIG_TOL {
            return Err(Error::numerical(format!(
                "eigenvalue {lambda:e} below the tolerated negativity"
            )));
        }
        let p = lambda.clamp(0.0, 1.0);
        if p > 0.0 {
            s -= p * p.log2();
        }
    }
    Ok(s)
}

/// S(ρ) = −Tr ρ log₂ ρ, in bits.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of_spectrum(&hermitian_eig(rho.matrix())?)
}
