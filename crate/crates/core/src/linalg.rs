//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// `m ⊗ m ⊗ … ⊗ m` with `n` factors.
pub fn kron_power(m: &DMatrix<C64>, n: usize) -> DMatrix<C64> {
    let mut out = DMatrix::identity(1, 1);
    for _ in 0..n {
        out = out.kronecker(m);
    }
    out
}

/// `‖a − b‖_F / scale`, with the scale floored away from zero.
pub fn rel(a: &DMatrix<C64>, b: &DMatrix<C64>, scale: f64) -> f64 {
    (a - b).norm() / scale.max(f64::MIN_POSITIVE)
}

/// `‖a − b‖_F / max(‖a‖_F, ‖b‖_F)`.
pub fn rel_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    rel(a, b, a.norm().max(b.norm()))
}

pub fn rel_diff_vec(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

pub fn commutator(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a * b - b * a
}

pub fn anticommutator(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a * b + b * a
}

pub fn scale(m: &DMatrix<C64>, c: C64) -> DMatrix<C64> {
    m * c
}

/// Singular values in decreasing order.
pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with relative threshold `rtol`.
pub fn rank(m: &DMatrix<C64>, rtol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > rtol * top).count(),
        _ => 0,
    }
}

pub fn pauli() -> [DMatrix<C64>; 4] {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_power_dimensions() {
        let m = DMatrix::<C64>::identity(3, 3);
        assert_eq!(kron_power(&m, 3).nrows(), 27);
        assert_eq!(kron_power(&m, 0).nrows(), 1);
    }

    #[test]
    fn pauli_algebra() {
        let s = pauli();
        let i = C64::new(0.0, 1.0);
        assert!(rel_diff(&(&s[1] * &s[2]), &(&s[3] * i)) < 1e-15);
        for a in 1..4 {
            assert!(rel_diff(&(&s[a] * &s[a]), &s[0]) < 1e-15);
        }
    }

    #[test]
    fn rank_of_outer_product() {
        let v = DMatrix::from_column_slice(3, 1, &[C64::new(1.0, 0.0), C64::new(2.0, 1.0), C64::new(0.0, -1.0)]);
        assert_eq!(rank(&(&v * v.adjoint()), 1e-12), 1);
    }
}
