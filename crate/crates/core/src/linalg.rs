//! Small dense complex matrix helpers on top of `nalgebra`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense complex square matrix, column-major.
pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().copied().fold(ZERO, |a, b| a + b)
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let d = m.nrows();
    let mut worst = 0.0f64;
    for c in 0..d {
        for r in 0..=c {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is
/// read, so tiny anti-Hermitian noise is ignored.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// `(m + m†) / 2` in place.
pub fn symmetrize(m: &mut CMatrix) {
    let d = m.nrows();
    for c in 0..d {
        m[(c, c)].im = 0.0;
        for r in 0..c {
            let avg = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            m[(r, c)] = avg;
            m[(c, r)] = avg.conj();
        }
    }
}

/// Rank-one outer product `|a⟩⟨b|` on a `dim`-dimensional basis.
pub fn ket_bra(dim: usize, a: usize, b: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(a, b)] = ONE;
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = CMatrix::from_row_slice(2, 2, &[
            Complex64::new(2.0, 0.0), I,
            -I, Complex64::new(2.0, 0.0),
        ]);
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] - 1.0).abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12);
        assert_eq!(hermiticity_error(&m), 0.0);
    }

    #[test]
    fn symmetrize_removes_antihermitian_part() {
        let mut m = CMatrix::from_row_slice(2, 2, &[ONE, I, ZERO, Complex64::new(0.0, 0.5)]);
        symmetrize(&mut m);
        assert!(hermiticity_error(&m) < 1e-15);
        assert_eq!(m[(0, 1)], I * 0.5);
    }
}
