//! Small dense helpers shared by the checks and the optimizer.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use crate::state::complex_normal;

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `M^T == M` entry-wise within `tol`.
pub fn is_symmetric(m: &DMatrix<Complex64>, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.transpose()) <= tol
}

/// `exp(i H)` for Hermitian `H`, through its eigendecomposition.
pub fn exp_i_hermitian(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = h.nrows();
    if n == 1 {
        return DMatrix::from_element(1, 1, Complex64::from_polar(1.0, h[(0, 0)].re));
    }
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, *lambda);
        for r in 0..n {
            scaled[(r, j)] *= phase;
        }
    }
    scaled * v.adjoint()
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_normal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `max |U^dagger U - I|`.
pub fn unitarity_residual(u: &DMatrix<Complex64>) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &DMatrix::identity(u.nrows(), u.ncols()))
}
