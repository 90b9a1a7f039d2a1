use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::integrate_endpoint_singular;
use crate::error::{Error, Result};

/// Quadrature tolerance for the period integrals.
const TOL: f64 = 1e-12;

/// The genus-1 spectral curve of the symmetric `2 x 2` model with parameter
/// `a`: `y^2 = z (z + a^2)(z + a^{-2})`, branched over
/// `{0, -a^2, -a^{-2}, inf}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Genus1CurveData {
    pub a: f64,
    /// Finite branch points, descending; infinity is the fourth.
    pub branch_points: [f64; 3],
    /// Cut along the real axis containing 0.
    pub cut_through_zero: [f64; 2],
    /// Finite end of the cut `(-inf, x]` running to infinity.
    pub cut_to_infinity_from: f64,
    /// `omega = c dz / sqrt(z (z + a^2)(z + a^{-2}))`, `int_A omega = 1`.
    pub c: Option<f64>,
    pub period: Option<Complex64>,
}

fn roots(a: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("a must be positive, got {a}")));
    }
    if (a - 1.0).abs() < 1e-12 {
        return Err(Error::Degenerate("a = 1: the branch points -a^2 and -a^-2 collide and the genus drops to 0".into()));
    }
    let (s, t) = (a * a, 1.0 / (a * a));
    Ok((s.min(t), s.max(t)))
}

/// Branch points and cut layout; the period fields are left empty.
pub fn branch_points_genus1(a: f64) -> Result<Genus1CurveData> {
    let (r1, r2) = roots(a)?;
    Ok(Genus1CurveData {
        a,
        branch_points: [0.0, -r1, -r2],
        cut_through_zero: [-r1, 0.0],
        cut_to_infinity_from: -r2,
        c: None,
        period: None,
    })
}

/// Branch points together with the normalisation `c` and the period
/// `B = int_B omega`.
///
/// With `f(z) = z (z + r1)(z + r2)`, `0 < r1 < r2`, `f > 0` on the A-cycle
/// interval `(-r2, -r1)` and `f < 0` on `(-r1, 0)`. So
/// `c = 1 / (2 int_{-r2}^{-r1} |f|^{-1/2})` and
/// `B = 2 i c int_{-r1}^0 |f|^{-1/2}`, with the sign fixed by `Im B > 0`.
pub fn period_genus1(a: f64) -> Result<Genus1CurveData> {
    let mut data = branch_points_genus1(a)?;
    let (r1, r2) = roots(a)?;
    // On (-r2, -r1): |f| = (z + r2)(-r1 - z)(-z); the smooth factor is 1/sqrt(-z).
    let a_half = integrate_endpoint_singular(|z| 1.0 / (-z).sqrt(), -r2, -r1, TOL)?;
    // On (-r1, 0): |f| = (z + r1)(-z)(z + r2); the smooth factor is 1/sqrt(z + r2).
    let b_half = integrate_endpoint_singular(|z| 1.0 / (z + r2).sqrt(), -r1, 0.0, TOL)?;
    let c = 1.0 / (2.0 * a_half);
    data.c = Some(c);
    data.period = Some(Complex64::new(0.0, 2.0 * c * b_half));
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_points() {
        let d = branch_points_genus1(0.7).unwrap();
        assert!((d.branch_points[1] + 0.49).abs() < 1e-15);
        assert!((d.branch_points[2] + 1.0 / 0.49).abs() < 1e-15);
        let d = branch_points_genus1(2.0).unwrap();
        assert_eq!(d.branch_points, [0.0, -0.25, -4.0]);
        assert!(branch_points_genus1(1.0).is_err());
    }

    #[test]
    fn period_is_pure_imaginary_and_symmetric() {
        for a in [0.5, 0.6, 0.7, 0.8, 0.9] {
            let b = period_genus1(a).unwrap().period.unwrap();
            let b_inv = period_genus1(1.0 / a).unwrap().period.unwrap();
            assert!(b.re.abs() <= 1e-8 && b.im > 0.0);
            assert!((b - b_inv).norm() < 1e-8);
        }
    }
}
