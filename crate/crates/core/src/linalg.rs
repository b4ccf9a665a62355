//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Sum of singular values.
pub fn trace_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().sum()
}

/// Largest singular value.
pub fn operator_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Orthonormal basis of `{x : a·x = 0}`: right singular vectors whose
/// singular value is at most `cutoff`.
pub fn null_space(a: &CMat, cutoff: f64) -> Vec<DVector<Complex64>> {
    let cols = a.ncols();
    if cols == 0 {
        return Vec::new();
    }
    // Pad wide systems so the SVD returns a full set of right vectors.
    let padded = if a.nrows() < cols {
        let mut p = CMat::zeros(cols, cols);
        p.rows_mut(0, a.nrows()).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cutoff)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect()
}

/// `f(H)` for Hermitian `H` through its eigendecomposition.
pub fn hermitian_apply(h: &CMat, f: impl Fn(f64) -> Complex64) -> CMat {
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let q = &eig.eigenvectors;
    let d = CMat::from_diagonal(&DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&x| f(x)),
    ));
    q * d * q.adjoint()
}

/// Eigenvalues of a Hermitian matrix in increasing order.
pub fn hermitian_eigenvalues(h: &CMat) -> Vec<f64> {
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Entries uniform in the unit square of the complex plane, centred at 0.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// A unitary from the QR factorization of a random matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMat {
    let q = random_matrix(rng, n, n).qr().q();
    q
}

/// Kronecker product with index `i·dim(b) + i′`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trace_norm_of_rank_one() {
        let mut m = CMat::zeros(3, 3);
        m[(0, 0)] = c(1.0, 0.0);
        assert!((trace_norm(&m) - 1.0).abs() < 1e-15);
        let d = CMat::from_diagonal(&DVector::from_vec(vec![c(-2.0, 0.0), c(0.0, 3.0)]));
        assert!((trace_norm(&d) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn null_space_of_projection() {
        let mut p = CMat::zeros(2, 3);
        p[(0, 0)] = c(1.0, 0.0);
        p[(1, 1)] = c(0.0, 2.0);
        let ns = null_space(&p, 1e-9);
        assert_eq!(ns.len(), 1);
        assert!((ns[0][2].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn functional_calculus_square_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 4, 4);
        let h = &a * a.adjoint();
        let r = hermitian_apply(&h, |x| c(x.max(0.0).sqrt(), 0.0));
        assert!(max_abs(&(&r * &r - &h)) < 1e-12);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_unitary(&mut rng, 5);
        assert!(max_abs(&(u.adjoint() * &u - identity(5))) < 1e-13);
    }
}
