use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

/// Roots of `sum_i c[i] x^i`, from the eigenvalues of the companion matrix.
/// Leading and trailing zero coefficients are dropped first, so roots at 0
/// and at infinity are not reported.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let lo = coeffs.iter().position(|c| c.norm() > 0.0);
    let hi = coeffs.iter().rposition(|c| c.norm() > 0.0);
    let (Some(lo), Some(hi)) = (lo, hi) else { return Vec::new() };
    let c = &coeffs[lo..=hi];
    let d = c.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        return vec![-c[0] / c[1]];
    }
    let lead = c[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    let schur = Schur::new(m);
    schur.eigenvalues().expect("complex Schur form is triangular").iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // (x - 1)(x + 2)(x - 3i)
        let r = [Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.0), Complex64::new(0.0, 3.0)];
        let one = Complex64::new(1.0, 0.0);
        let c = [-r[0] * r[1] * r[2], r[0] * r[1] + r[0] * r[2] + r[1] * r[2], -(r[0] + r[1] + r[2]), one];
        let found = polynomial_roots(&c);
        assert_eq!(found.len(), 3);
        for x in r {
            assert!(found.iter().any(|y| (x - y).norm() < 1e-12));
        }
    }

    #[test]
    fn zero_roots_are_stripped() {
        let c = [Complex64::new(0.0, 0.0), Complex64::new(-2.0, 0.0), Complex64::new(1.0, 0.0)];
        let found = polynomial_roots(&c);
        assert_eq!(found.len(), 1);
        assert!((found[0] - 2.0).norm() < 1e-14);
    }
}
