use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Coefficients below this fraction of the largest one are dropped.
pub const TRIM: f64 = 1e-9;

/// One monomial `coeff * z^z_exp * w^w_exp`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub z_exp: i32,
    pub w_exp: i32,
    pub coeff: f64,
}

/// A bivariate Laurent polynomial with real coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Term>", into = "Vec<Term>")]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i32, i32), f64>,
}

impl From<Vec<Term>> for LaurentPoly2 {
    fn from(terms: Vec<Term>) -> Self {
        LaurentPoly2::from_terms(terms.into_iter().map(|t| ((t.z_exp, t.w_exp), t.coeff)))
    }
}

impl From<LaurentPoly2> for Vec<Term> {
    fn from(p: LaurentPoly2) -> Self {
        p.terms().collect()
    }
}

impl LaurentPoly2 {
    /// Sums repeated exponents, then trims.
    pub fn from_terms(terms: impl IntoIterator<Item = ((i32, i32), f64)>) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert(0.0) += c;
        }
        let max = map.values().fold(0.0f64, |m, c: &f64| m.max(c.abs()));
        map.retain(|_, c| c.abs() >= TRIM * max && *c != 0.0);
        LaurentPoly2 { terms: map }
    }

    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|(&(z_exp, w_exp), &coeff)| Term { z_exp, w_exp, coeff })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, z_exp: i32, w_exp: i32) -> f64 {
        self.terms.get(&(z_exp, w_exp)).copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Inclusive exponent ranges `(z_min, z_max, w_min, w_max)`.
    pub fn bounds(&self) -> Option<(i32, i32, i32, i32)> {
        let mut it = self.terms.keys();
        let &(z0, w0) = it.next()?;
        Some(it.fold((z0, z0, w0, w0), |(a, b, c, d), &(z, w)| (a.min(z), b.max(z), c.min(w), d.max(w))))
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.terms.iter().map(|(&(p, q), &c)| c * z.powi(p) * w.powi(q)).sum()
    }

    /// `sum |c| |z|^p |w|^q`, the natural scale for relative residuals.
    pub fn magnitude(&self, z: Complex64, w: Complex64) -> f64 {
        let (az, aw) = (z.norm(), w.norm());
        self.terms.iter().map(|(&(p, q), &c)| c.abs() * az.powi(p) * aw.powi(q)).sum()
    }

    /// Multiply by `z^dz w^dw`.
    pub fn shifted(&self, dz: i32, dw: i32) -> Self {
        LaurentPoly2 { terms: self.terms.iter().map(|(&(p, q), &c)| ((p + dz, q + dw), c)).collect() }
    }

    pub fn scaled(&self, s: f64) -> Self {
        LaurentPoly2 { terms: self.terms.iter().map(|(&e, &c)| (e, c * s)).collect() }
    }

    /// Shift so the exponent box is centred on the origin (lower half wins on
    /// odd widths).
    pub fn centered(&self) -> Self {
        match self.bounds() {
            Some((z0, z1, w0, w1)) => self.shifted(-(z0 + z1).div_euclid(2), -(w0 + w1).div_euclid(2)),
            None => self.clone(),
        }
    }

    /// `P(1/z, w)`.
    pub fn invert_z(&self) -> Self {
        LaurentPoly2 { terms: self.terms.iter().map(|(&(p, q), &c)| ((-p, q), c)).collect() }
    }

    /// `P(w, z)`.
    pub fn swap(&self) -> Self {
        LaurentPoly2 { terms: self.terms.iter().map(|(&(p, q), &c)| ((q, p), c)).collect() }
    }

    /// Centred, then scaled so the coefficient of largest magnitude (first in
    /// exponent order on ties) is `+1`. Two polynomials that differ by a
    /// monomial factor have equal normal forms.
    pub fn normal_form(&self) -> Self {
        let c = self.centered();
        let max = c.max_abs();
        let lead = c.terms.values().copied().find(|v| v.abs() >= max * (1.0 - 1e-12)).unwrap_or(1.0);
        c.scaled(1.0 / lead)
    }

    /// Largest coefficient difference between the two polynomials.
    pub fn max_difference(&self, other: &LaurentPoly2) -> f64 {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|&(p, q)| (self.coeff(p, q) - other.coeff(p, q)).abs())
            .fold(0.0, f64::max)
    }

    /// Coefficients of `w^q` for `q = w_min..=w_max` at fixed `z`, plus `w_min`.
    pub fn w_coefficients(&self, z: Complex64) -> (i32, Vec<Complex64>) {
        let Some((_, _, w0, w1)) = self.bounds() else { return (0, Vec::new()) };
        let mut out = vec![Complex64::new(0.0, 0.0); (w1 - w0 + 1) as usize];
        for (&(p, q), &c) in &self.terms {
            out[(q - w0) as usize] += c * z.powi(p);
        }
        (w0, out)
    }
}
