use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::genus1::period_genus1;
use super::theta::{for_each_lattice_point, theta_scaled, ThetaParams};
use crate::error::{Error, Result};

/// Shift `e` and scale `tau` of a discrete Gaussian on `Z^g`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteGaussianParams {
    e: Vec<f64>,
    theta: ThetaParams,
}

impl DiscreteGaussianParams {
    pub fn new(e: Vec<f64>, tau: DMatrix<Complex64>) -> Result<Self> {
        let theta = ThetaParams::new(tau)?;
        if e.len() != theta.genus() {
            return Err(Error::InvalidArgument(format!("shift has {} entries for genus {}", e.len(), theta.genus())));
        }
        Ok(DiscreteGaussianParams { e, theta })
    }

    pub fn scalar(e: f64, tau: Complex64) -> Result<Self> {
        Self::new(vec![e], DMatrix::from_element(1, 1, tau))
    }

    pub fn genus(&self) -> usize {
        self.e.len()
    }

    pub fn shift(&self) -> &[f64] {
        &self.e
    }

    pub fn tau(&self) -> &DMatrix<Complex64> {
        self.theta.matrix()
    }

    fn tau_e(&self) -> DVector<Complex64> {
        self.tau() * DVector::from_iterator(self.genus(), self.e.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    fn quadratic(&self, v: &[f64]) -> Complex64 {
        let v = DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)));
        (v.transpose() * self.tau() * &v)[(0, 0)]
    }

    /// `ln(theta(-tau e; tau) e^{i pi e.tau e})`, the log normaliser.
    fn log_normalizer(&self) -> Complex64 {
        let arg: Vec<Complex64> = self.tau_e().iter().map(|x| -x).collect();
        let (s, m) = theta_scaled(&arg, &self.theta);
        s.ln() + m + Complex64::i() * PI * self.quadratic(&self.e)
    }

    /// Window of lattice points carrying all but a negligible amount of mass:
    /// half-width `max(10, ceil(8 sqrt(v)))` around the rounded shift, where
    /// `v = 1 / (2 pi lambda_min(Im tau))` bounds every marginal variance of
    /// the untruncated Gaussian envelope.
    fn window(&self, spread: f64) -> (Vec<i64>, i64) {
        let centre = self.e.iter().map(|x| x.round() as i64).collect();
        (centre, 10i64.max((8.0 * spread.sqrt()).ceil() as i64))
    }

    fn envelope_variance(&self) -> f64 {
        let im = self.tau().map(|x| x.im);
        1.0 / (2.0 * PI * im.symmetric_eigenvalues().min())
    }
}

/// `P_{e,tau}(n) = exp(i pi (n-e).tau(n-e)) / (theta(-tau e; tau) exp(i pi e.tau e))`.
pub fn discrete_gaussian_pmf(params: &DiscreteGaussianParams, n: &[i64]) -> f64 {
    pmf_with(params, params.log_normalizer(), n)
}

fn pmf_with(params: &DiscreteGaussianParams, log_norm: Complex64, n: &[i64]) -> f64 {
    let d: Vec<f64> = n.iter().zip(&params.e).map(|(&k, &e)| k as f64 - e).collect();
    (Complex64::i() * PI * params.quadratic(&d) - log_norm).exp().re
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianMoments {
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
}

impl GaussianMoments {
    pub fn is_positive_definite(&self) -> bool {
        let g = self.mean.len();
        let m = DMatrix::from_fn(g, g, |i, j| self.covariance[i][j]);
        m.cholesky().is_some()
    }
}

/// Contour radius and node count for the Cauchy derivative formulas.
const CAUCHY_RADIUS: f64 = 0.25;
const CAUCHY_NODES: usize = 64;

/// First and second derivatives at `t = 0` of `f` along a direction, from
/// the Cauchy integral on a circle (trapezoidal rule, spectrally accurate for
/// entire `f`).
fn cauchy_derivatives(f: impl Fn(Complex64) -> Complex64) -> (Complex64, Complex64, Complex64) {
    let (mut d0, mut d1, mut d2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for j in 0..CAUCHY_NODES {
        let u = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / CAUCHY_NODES as f64);
        let v = f(CAUCHY_RADIUS * u);
        d0 += v;
        d1 += v / u;
        d2 += v / (u * u);
    }
    let n = CAUCHY_NODES as f64;
    (d0 / n, d1 / (n * CAUCHY_RADIUS), 2.0 * d2 / (n * CAUCHY_RADIUS * CAUCHY_RADIUS))
}

/// Mean `(2 pi i)^{-1} grad log theta(z - tau e)` and covariance
/// `(2 pi i)^{-2} Hess log theta(z - tau e)` at `z = 0`.
///
/// Derivatives of `theta` come from Cauchy integrals along coordinate
/// directions; mixed second derivatives use the polarisation
/// `d_i d_j = (d_{i+j}^2 - d_i^2 - d_j^2) / 2`.
pub fn discrete_gaussian_moments(params: &DiscreteGaussianParams) -> GaussianMoments {
    let g = params.genus();
    let base: Vec<Complex64> = params.tau_e().iter().map(|x| -x).collect();
    let (_, m0) = theta_scaled(&base, &params.theta);
    let along = |dir: &[f64]| {
        cauchy_derivatives(|t| {
            let z: Vec<Complex64> = base.iter().zip(dir).map(|(b, d)| b + t * d).collect();
            let (s, m) = theta_scaled(&z, &params.theta);
            s * (m - m0).exp()
        })
    };
    let unit = |i: usize| (0..g).map(|k| (k == i) as u8 as f64).collect::<Vec<_>>();
    let axes: Vec<_> = (0..g).map(|i| along(&unit(i))).collect();
    let th = axes[0].0;
    let tpi = 2.0 * PI * Complex64::i();
    let grad: Vec<Complex64> = axes.iter().map(|a| a.1 / th).collect();
    let mut cov = vec![vec![0.0; g]; g];
    for i in 0..g {
        for j in i..g {
            let second = if i == j {
                axes[i].2
            } else {
                let dir: Vec<f64> = (0..g).map(|k| ((k == i) || (k == j)) as u8 as f64).collect();
                0.5 * (along(&dir).2 - axes[i].2 - axes[j].2)
            };
            let h = second / th - grad[i] * grad[j];
            cov[i][j] = (h / (tpi * tpi)).re;
            cov[j][i] = cov[i][j];
        }
    }
    GaussianMoments { mean: grad.iter().map(|x| (x / tpi).re).collect(), covariance: cov }
}

/// Mean, covariance and total mass by direct summation of the pmf over the
/// sampling window.
pub fn moments_by_summation(params: &DiscreteGaussianParams) -> (GaussianMoments, f64) {
    let g = params.genus();
    let log_norm = params.log_normalizer();
    let (centre, r) = params.window(params.envelope_variance());
    let mut pts: Vec<(Vec<f64>, f64)> = Vec::new();
    for_each_lattice_point(g, r, |d| {
        let n: Vec<i64> = d.iter().zip(&centre).map(|(a, c)| a + c).collect();
        let p = pmf_with(params, log_norm, &n);
        pts.push((n.iter().map(|&x| x as f64).collect(), p));
    });
    let mass: f64 = pts.iter().map(|p| p.1).sum();
    let mean: Vec<f64> = (0..g).map(|i| pts.iter().map(|(n, p)| n[i] * p).sum::<f64>() / mass).collect();
    let covariance = (0..g)
        .map(|i| {
            (0..g)
                .map(|j| pts.iter().map(|(n, p)| (n[i] - mean[i]) * (n[j] - mean[j]) * p).sum::<f64>() / mass)
                .collect()
        })
        .collect();
    (GaussianMoments { mean, covariance }, mass)
}

/// `count` i.i.d. draws by inverse CDF over the window of half-width
/// `max(10, ceil(8 sqrt(max variance)))` around the rounded mean.
pub fn discrete_gaussian_sample(params: &DiscreteGaussianParams, seed: u64, count: usize) -> Vec<Vec<i64>> {
    let g = params.genus();
    let moments = discrete_gaussian_moments(params);
    let max_var = (0..g).map(|i| moments.covariance[i][i]).fold(0.0, f64::max);
    let centre: Vec<i64> = moments.mean.iter().map(|x| x.round() as i64).collect();
    let r = 10i64.max((8.0 * max_var.sqrt()).ceil() as i64);
    let log_norm = params.log_normalizer();
    let mut support = Vec::new();
    let mut cdf = Vec::new();
    let mut acc = 0.0;
    for_each_lattice_point(g, r, |d| {
        let n: Vec<i64> = d.iter().zip(&centre).map(|(a, c)| a + c).collect();
        acc += pmf_with(params, log_norm, &n);
        cdf.push(acc);
        support.push(n);
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            let idx = cdf.partition_point(|&c| c <= u).min(support.len() - 1);
            support[idx].clone()
        })
        .collect()
}

/// The limiting law of the discrete component for the symmetric `2 x 2`
/// model: `tau = -1/B(a)`, `e = 1/4` for `a < 1` and `-1/4` for `a > 1`.
pub fn predicted_z_distribution(a: f64) -> Result<DiscreteGaussianParams> {
    let data = period_genus1(a)?;
    let b = data.period.expect("period is computed");
    let e = if a < 1.0 { 0.25 } else { -0.25 };
    DiscreteGaussianParams::scalar(e, -b.inv())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_when_unshifted() {
        let p = DiscreteGaussianParams::scalar(0.0, Complex64::new(0.0, 0.8)).unwrap();
        for n in 1..5 {
            assert!((discrete_gaussian_pmf(&p, &[n]) - discrete_gaussian_pmf(&p, &[-n])).abs() < 1e-15);
        }
        assert!(discrete_gaussian_moments(&p).mean[0].abs() < 1e-12);
    }

    #[test]
    fn concentrates_for_large_tau() {
        let p = DiscreteGaussianParams::scalar(0.0, Complex64::new(0.0, 10.0)).unwrap();
        assert!(discrete_gaussian_pmf(&p, &[0]) >= 1.0 - 1e-10);
    }

    #[test]
    fn normalised() {
        let p = DiscreteGaussianParams::scalar(0.25, Complex64::new(0.0, 1.0)).unwrap();
        assert!((moments_by_summation(&p).1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = DiscreteGaussianParams::scalar(0.25, Complex64::new(0.0, 0.5)).unwrap();
        assert_eq!(discrete_gaussian_sample(&p, 3, 100), discrete_gaussian_sample(&p, 3, 100));
    }
}
