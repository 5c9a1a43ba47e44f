//! Random states and operators for tests and sampling-based checks.

use rand::Rng;

use crate::qmat::{ComplexMatrix, DensityMatrix, PureState, C64};

/// Box–Muller draw from N(0, 1).
fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(standard_normal(rng), standard_normal(rng))
}

/// Matrix with i.i.d. complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_rows(dim, (0..dim * dim).map(|_| gaussian_complex(rng)).collect()).unwrap()
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    random_matrix(rng, dim).hermitian_part()
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    PureState::normalized((0..dim).map(|_| gaussian_complex(rng)).collect()).unwrap()
}

/// Full-rank state G G† / Tr(G G†) with Ginibre G.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = random_matrix(rng, dim);
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    DensityMatrix::from_trusted(gg.scale_real(1.0 / tr))
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = random_matrix(rng, dim);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<C64> = (0..dim).map(|i| g[(i, j)]).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in &mut v {
            *vi /= norm;
        }
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}
