use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::laurent::LaurentPoly2;
use crate::error::{Error, Result};
use crate::lattice::WeightScheme;

/// Residual tolerance for the interpolated polynomial.
pub const INTERPOLATION_TOLERANCE: f64 = 1e-8;

/// The magnetically altered Kasteleyn matrix on the `k x l` torus.
///
/// Rows are whites `w_{X,Y}`, columns blacks `b_{X,Y}`, both indexed
/// `Y * l + X` with `0 <= X < l`, `0 <= Y < k`. Edges wrapping in `Y` pick up
/// `z^{-1}`, edges wrapping in `X` pick up `w`.
pub fn torus_kasteleyn(weights: &WeightScheme, z: Complex64, w: Complex64) -> DMatrix<Complex64> {
    let (k, l) = (weights.k(), weights.l());
    let mut m = DMatrix::zeros(k * l, k * l);
    let one = Complex64::new(1.0, 0.0);
    for y in 0..k {
        for x in 0..l {
            let (alpha, gamma, beta) = weights.at_white(x as i64, y as i64);
            let row = y * l + x;
            let (up, right) = ((y + 1) % k, (x + 1) % l);
            let zf = if y + 1 == k { z.inv() } else { one };
            let wf = if x + 1 == l { w } else { one };
            m[(row, up * l + x)] += alpha * zf;
            m[(row, y * l + x)] += Complex64::new(gamma, 0.0);
            m[(row, up * l + right)] += beta * zf * wf;
            m[(row, y * l + right)] -= wf;
        }
    }
    m
}

fn det(m: DMatrix<Complex64>) -> Complex64 {
    m.lu().determinant()
}

/// `P(z, w) = det K_{G_1}(z, w)` as a Laurent polynomial, with default
/// exponent bounds `|z-exp| <= l + 1`, `|w-exp| <= k + 1`.
pub fn characteristic_polynomial(weights: &WeightScheme) -> Result<LaurentPoly2> {
    characteristic_polynomial_with_bounds(weights, weights.l() as i32 + 1, weights.k() as i32 + 1)
}

/// Interpolates `P` from determinants on the unit torus by a 2-D discrete
/// Fourier transform, exact whenever the true exponents lie in
/// `[-z_bound, z_bound] x [-w_bound, w_bound]`. The result is then checked
/// against fresh determinants at 100 random points with moduli in
/// `[0.5, 2]`.
pub fn characteristic_polynomial_with_bounds(weights: &WeightScheme, z_bound: i32, w_bound: i32) -> Result<LaurentPoly2> {
    let (nz, nw) = ((2 * z_bound + 1) as usize, (2 * w_bound + 1) as usize);
    let zs: Vec<Complex64> = (0..nz).map(|a| Complex64::from_polar(1.0, 2.0 * PI * a as f64 / nz as f64)).collect();
    let ws: Vec<Complex64> = (0..nw).map(|b| Complex64::from_polar(1.0, 2.0 * PI * b as f64 / nw as f64)).collect();
    let values: Vec<Vec<Complex64>> =
        zs.iter().map(|&z| ws.iter().map(|&w| det(torus_kasteleyn(weights, z, w))).collect()).collect();
    let mut terms = Vec::new();
    for p in -z_bound..=z_bound {
        for q in -w_bound..=w_bound {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, &z) in zs.iter().enumerate() {
                for (b, &w) in ws.iter().enumerate() {
                    acc += values[a][b] * z.powi(-p) * w.powi(-q);
                }
            }
            terms.push(((p, q), acc.re / (nz * nw) as f64));
        }
    }
    let poly = LaurentPoly2::from_terms(terms);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI));
        let w = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI));
        let exact = det(torus_kasteleyn(weights, z, w));
        let scale = poly.magnitude(z, w).max(exact.norm());
        worst = worst.max((poly.eval(z, w) - exact).norm() / scale);
    }
    if worst > INTERPOLATION_TOLERANCE {
        return Err(Error::Interpolation { residual: worst, tolerance: INTERPOLATION_TOLERANCE });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one_closed_form() {
        let w = WeightScheme::new(1, 1, vec![vec![0.7]], vec![vec![1.3]], vec![vec![2.1]]).unwrap();
        let p = characteristic_polynomial(&w).unwrap();
        let expected = LaurentPoly2::from_terms([((0, 0), 2.1), ((-1, 0), 0.7), ((-1, 1), 1.3), ((0, 1), -1.0)]);
        assert!(p.max_difference(&expected) < 1e-12, "{p:?}");
    }

    #[test]
    fn coefficients_are_real_and_residual_small() {
        let w = WeightScheme::new(
            2,
            3,
            vec![vec![0.3, 1.7, 0.8], vec![2.2, 0.9, 1.1]],
            vec![vec![1.1, 0.4, 1.9], vec![0.8, 3.0, 0.6]],
            vec![vec![0.6, 1.3, 0.7], vec![1.9, 0.5, 1.4]],
        )
        .unwrap();
        let p = characteristic_polynomial(&w).unwrap();
        let (z0, z1, w0, w1) = p.bounds().unwrap();
        assert!(z1 - z0 <= 3 && w1 - w0 <= 2);
    }

    #[test]
    fn too_small_bounds_are_detected() {
        let w = WeightScheme::symmetric_two_by_two(0.7).unwrap();
        assert!(matches!(characteristic_polynomial_with_bounds(&w, 0, 0), Err(Error::Interpolation { .. })));
    }
}
