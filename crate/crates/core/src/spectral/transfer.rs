use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::WeightScheme;

/// Minimum distance from a pole `beta_i^v` of the even matrices.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// `phi_1(z), ..., phi_{2l}(z)`, each `k x k`.
pub fn transition_matrices(weights: &WeightScheme, z: Complex64) -> Result<Vec<DMatrix<Complex64>>> {
    let (k, l) = (weights.k(), weights.l());
    let beta_v = weights.beta_v();
    for &pole in &beta_v {
        let distance = (z - pole).norm();
        if distance < POLE_TOLERANCE {
            return Err(Error::PoleProximity { z: format!("{z}"), pole, distance });
        }
    }
    let zi = z.inv();
    let mut out = Vec::with_capacity(2 * l);
    for i in 1..=l {
        let mut odd = DMatrix::<Complex64>::zeros(k, k);
        for j in 1..=k {
            odd[(j - 1, j - 1)] += weights.gamma(j, i);
            if j < k {
                odd[(j, j - 1)] += weights.alpha(j, i);
            }
        }
        odd[(0, k - 1)] += weights.alpha(k, i) * zi;
        out.push(odd);

        let beta = |j: usize| weights.beta(j, i);
        let scale = (Complex64::new(1.0, 0.0) - beta_v[i - 1] * zi).inv();
        let even = DMatrix::from_fn(k, k, |r, c| {
            let (r, c) = (r + 1, c + 1);
            let entry = if r == c {
                Complex64::new(1.0, 0.0)
            } else if r > c {
                Complex64::new((c..r).map(beta).product(), 0.0)
            } else {
                (c..=k).chain(1..r).map(beta).product::<f64>() * zi
            };
            entry * scale
        });
        out.push(even);
    }
    Ok(out)
}

/// `Phi(z) = phi_1(z) phi_2(z) ... phi_{2l}(z)`.
pub fn transfer_product(weights: &WeightScheme, z: Complex64) -> Result<DMatrix<Complex64>> {
    let k = weights.k();
    Ok(transition_matrices(weights, z)?.iter().fold(DMatrix::identity(k, k), |acc, m| acc * m))
}
