use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Target exponent gap for truncating the lattice sum: terms beyond the
/// radius are below `e^{-40}` relative.
const TAIL_EXPONENT: f64 = 40.0;

/// A Riemann matrix: complex symmetric with positive-definite imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaParams {
    b: DMatrix<Complex64>,
    lambda_min: f64,
}

impl ThetaParams {
    pub fn new(b: DMatrix<Complex64>) -> Result<Self> {
        if !b.is_square() || b.nrows() == 0 {
            return Err(Error::InvalidArgument("period matrix must be square and non-empty".into()));
        }
        let asym = (&b - b.transpose()).iter().fold(0.0f64, |m, x| m.max(x.norm()));
        if asym > 1e-12 {
            return Err(Error::InvalidArgument(format!("period matrix is not symmetric (defect {asym:e})")));
        }
        let im = b.map(|x| x.im);
        let im = 0.5 * (&im + im.transpose());
        let lambda_min = im.symmetric_eigenvalues().min();
        if !(lambda_min > 0.0) {
            return Err(Error::InvalidArgument(format!("Im of the period matrix is not positive definite (min eigenvalue {lambda_min:e})")));
        }
        Ok(ThetaParams { b, lambda_min })
    }

    /// Genus one with `B = b`.
    pub fn scalar(b: Complex64) -> Result<Self> {
        Self::new(DMatrix::from_element(1, 1, b))
    }

    pub fn genus(&self) -> usize {
        self.b.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.b
    }

    /// Smallest `R` with `pi lambda_min R^2 - 2 pi |Im z| R >= 40`.
    pub fn truncation_radius(&self, z: &[Complex64]) -> i64 {
        let s = z.iter().map(|x| x.im * x.im).sum::<f64>().sqrt();
        let (qa, qb) = (PI * self.lambda_min, 2.0 * PI * s);
        ((qb + (qb * qb + 4.0 * qa * TAIL_EXPONENT).sqrt()) / (2.0 * qa)).ceil() as i64
    }
}

fn quadratic(b: &DMatrix<Complex64>, n: &[i64]) -> Complex64 {
    let v = DVector::from_iterator(n.len(), n.iter().map(|&x| Complex64::new(x as f64, 0.0)));
    (v.transpose() * b * &v)[(0, 0)]
}

/// Calls `f` on every point of `[-r, r]^g`.
pub(crate) fn for_each_lattice_point(g: usize, r: i64, mut f: impl FnMut(&[i64])) {
    let mut n = vec![-r; g];
    loop {
        f(&n);
        let mut i = 0;
        loop {
            if i == g {
                return;
            }
            if n[i] < r {
                n[i] += 1;
                break;
            }
            n[i] = -r;
            i += 1;
        }
    }
}

/// `theta(z; B) = s e^m`, returned as `(s, m)` so that very large values
/// stay representable.
pub fn theta_scaled(z: &[Complex64], params: &ThetaParams) -> (Complex64, f64) {
    assert_eq!(z.len(), params.genus(), "argument has the wrong dimension");
    let r = params.truncation_radius(z);
    let mut exps = Vec::new();
    for_each_lattice_point(params.genus(), r, |n| {
        let lin: Complex64 = n.iter().zip(z).map(|(&k, &x)| k as f64 * x).sum();
        exps.push(Complex64::i() * PI * (quadratic(&params.b, n) + 2.0 * lin));
    });
    let m = exps.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
    (exps.iter().map(|e| (e - m).exp()).sum(), m)
}

/// `theta(z; B) = sum_n exp(i pi (n.Bn + 2 n.z))`.
pub fn theta(z: &[Complex64], params: &ThetaParams) -> Complex64 {
    let (s, m) = theta_scaled(z, params);
    s * m.exp()
}

/// `|LHS - RHS| / |RHS|` for
/// `theta(z; -B^{-1}) = sqrt(det(-iB)) e^{i pi z.Bz} theta(Bz; B)`.
///
/// The principal square root is exact for genus 1, where `-iB` has
/// positive real part.
pub fn modular_transform_check(z: &[Complex64], b: &ThetaParams) -> Result<f64> {
    let inv = b.matrix().clone().try_inverse().ok_or(Error::Singular)?;
    let dual = ThetaParams::new(-inv)?;
    let lhs = theta(z, &dual);
    let zv = DVector::from_column_slice(z);
    let bz = b.matrix() * &zv;
    let quad = (zv.transpose() * &bz)[(0, 0)];
    let det = (b.matrix() * -Complex64::i()).determinant();
    let (s, m) = theta_scaled(bz.as_slice(), b);
    let rhs = det.sqrt() * s * (Complex64::i() * PI * quad + m).exp();
    Ok((lhs - rhs).norm() / rhs.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_zero() {
        let b = c(0.1, 0.9);
        let p = ThetaParams::scalar(b).unwrap();
        assert!(theta(&[(1.0 + b) / 2.0], &p).norm() < 1e-10);
    }

    #[test]
    fn modular_at_i() {
        let p = ThetaParams::scalar(c(0.0, 1.0)).unwrap();
        assert!(modular_transform_check(&[c(0.3, 0.1)], &p).unwrap() < 1e-10);
        assert!(modular_transform_check(&[c(0.0, 0.0)], &p).unwrap() < 1e-12);
    }

    #[test]
    fn genus_two_periodicity() {
        let b = DMatrix::from_row_slice(2, 2, &[c(0.2, 1.1), c(0.1, 0.3), c(0.1, 0.3), c(-0.3, 0.9)]);
        let p = ThetaParams::new(b).unwrap();
        let z = [c(0.13, 0.2), c(-0.4, 0.05)];
        let t = theta(&z, &p);
        let shifted = theta(&[z[0] + 1.0, z[1] - 2.0], &p);
        assert!((t - shifted).norm() < 1e-12 * t.norm());
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(ThetaParams::scalar(c(0.0, -1.0)).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.1, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
        assert!(ThetaParams::new(asym).is_err());
    }
}
