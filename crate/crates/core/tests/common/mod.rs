//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use tep_core::qmat::{ComplexMatrix, C64};

pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
    }
}

/// Coefficients c[0..=n] of det(xI − A) = Σ c[k] x^{n−k} by Faddeev–LeVerrier.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Vec<C64> {
    let n = a.dim();
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let mut m = ComplexMatrix::zeros(n);
    for k in 1..=n {
        let shift = ComplexMatrix::identity(n).scale(coeffs[k - 1]);
        m = &a.matmul(&m) + &shift;
        let am = a.matmul(&m);
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

fn eval(poly: &[f64], x: f64) -> f64 {
    poly.iter().fold(0.0, |acc, &c| acc * x + c)
}

fn derivative(poly: &[f64]) -> Vec<f64> {
    let n = poly.len() - 1;
    poly[..n].iter().enumerate().map(|(i, &c)| c * (n - i) as f64).collect()
}

fn bisect(poly: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = eval(poly, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = eval(poly, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real roots of a polynomial with only real roots, ascending. Critical
/// points of the derivative split the line into monotone pieces; each piece
/// holds at most one root.
pub fn real_roots(poly: &[f64]) -> Vec<f64> {
    let degree = poly.len() - 1;
    if degree == 0 {
        return vec![];
    }
    let lead = poly[0];
    let bound = 1.0 + poly[1..].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let mut cuts = vec![-bound];
    cuts.extend(real_roots(&derivative(poly)));
    cuts.push(bound);
    cuts.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (eval(poly, a), eval(poly, b));
            if fa == 0.0 {
                a
            } else if (fa < 0.0) != (fb < 0.0) {
                bisect(poly, a, b)
            } else if fa.abs() < fb.abs() {
                // touching root at a critical point
                a
            } else {
                b
            }
        })
        .collect()
}

/// Eigenvalues of a Hermitian matrix from its characteristic polynomial.
pub fn charpoly_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let poly: Vec<f64> = characteristic_polynomial(h).iter().map(|c| c.re).collect();
    let mut roots = real_roots(&poly);
    roots.sort_by(f64::total_cmp);
    roots
}
