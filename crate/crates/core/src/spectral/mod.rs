//! Spectral curve numerics: the characteristic polynomial and transition
//! matrices, amoebas, the genus-1 period, theta functions and discrete
//! Gaussian laws.

mod amoeba;
mod charpoly;
mod gaussian;
mod genus1;
mod laurent;
pub mod quadrature;
mod roots;
mod theta;
mod transfer;

pub use amoeba::{amoeba_raster, AmoebaRaster, AmoebaWindow};
pub use charpoly::{characteristic_polynomial, characteristic_polynomial_with_bounds, torus_kasteleyn};
pub use gaussian::{
    discrete_gaussian_moments, discrete_gaussian_pmf, discrete_gaussian_sample, moments_by_summation,
    predicted_z_distribution, DiscreteGaussianParams, GaussianMoments,
};
pub use genus1::{branch_points_genus1, period_genus1, Genus1CurveData};
pub use laurent::{LaurentPoly2, Term};
pub use roots::polynomial_roots;
pub use theta::{modular_transform_check, theta, theta_scaled, ThetaParams};
pub use transfer::{transfer_product, transition_matrices, POLE_TOLERANCE};

pub use num_complex::Complex64 as C64;
