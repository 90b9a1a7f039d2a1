use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Doubly periodic edge weights `alpha`, `beta`, `gamma`, each a `k x l`
/// array indexed `[j - 1][i - 1]` with `j = 1..k` (rows) and `i = 1..l`.
///
/// The JSON form is `{"k": .., "l": .., "alpha": [[..]], "beta": [[..]],
/// "gamma": [[..]]}` with the row index outermost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct WeightScheme {
    k: usize,
    l: usize,
    alpha: Vec<Vec<f64>>,
    beta: Vec<Vec<f64>>,
    gamma: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawWeights {
    k: usize,
    l: usize,
    alpha: Vec<Vec<f64>>,
    beta: Vec<Vec<f64>>,
    gamma: Vec<Vec<f64>>,
}

impl TryFrom<RawWeights> for WeightScheme {
    type Error = Error;

    fn try_from(raw: RawWeights) -> Result<Self> {
        WeightScheme::new(raw.k, raw.l, raw.alpha, raw.beta, raw.gamma)
    }
}

impl From<WeightScheme> for RawWeights {
    fn from(w: WeightScheme) -> Self {
        RawWeights { k: w.k, l: w.l, alpha: w.alpha, beta: w.beta, gamma: w.gamma }
    }
}

impl WeightScheme {
    pub fn new(
        k: usize,
        l: usize,
        alpha: Vec<Vec<f64>>,
        beta: Vec<Vec<f64>>,
        gamma: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidWeights(format!("periods must be positive, got k={k}, l={l}")));
        }
        for (name, table) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma)] {
            if table.len() != k || table.iter().any(|row| row.len() != l) {
                return Err(Error::InvalidWeights(format!("{name} must be a {k}x{l} array")));
            }
            for (j, row) in table.iter().enumerate() {
                for (i, &v) in row.iter().enumerate() {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(Error::InvalidWeights(format!(
                            "{name}[{}][{}] = {v} is not a positive finite number",
                            j + 1,
                            i + 1
                        )));
                    }
                }
            }
        }
        let scheme = WeightScheme { k, l, alpha, beta, gamma };
        if scheme.beta_v().iter().any(|&b| !(b > 0.0 && b.is_finite())) {
            return Err(Error::InvalidWeights("column products of beta under/overflow".into()));
        }
        Ok(scheme)
    }

    pub fn uniform(k: usize, l: usize) -> Self {
        let ones = vec![vec![1.0; l]; k];
        WeightScheme::new(k, l, ones.clone(), ones.clone(), ones).expect("unit weights are valid")
    }

    /// The one-parameter 2x2 family with `alpha = beta` equal to `a` on the
    /// off-diagonal and `1/a` on the diagonal, `gamma = 1`.
    pub fn symmetric_two_by_two(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidWeights(format!("parameter a = {a} must be positive")));
        }
        let t = vec![vec![1.0 / a, a], vec![a, 1.0 / a]];
        WeightScheme::new(2, 2, t.clone(), t, vec![vec![1.0; 2]; 2])
    }

    /// Recover `a` if this scheme belongs to the symmetric 2x2 family.
    pub fn symmetric_parameter(&self) -> Option<f64> {
        if self.k != 2 || self.l != 2 || self.alpha != self.beta {
            return None;
        }
        if self.gamma.iter().flatten().any(|&g| (g - 1.0).abs() > 1e-12) {
            return None;
        }
        let a = self.alpha[1][0];
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * y.abs().max(1.0);
        (close(self.alpha[0][1], a) && close(self.alpha[0][0], 1.0 / a) && close(self.alpha[1][1], 1.0 / a))
            .then_some(a)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawWeights = serde_json::from_str(text)?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("weights serialize")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// `alpha_{j,i}` with 1-based indices as written in the tables.
    pub fn alpha(&self, j: usize, i: usize) -> f64 {
        self.alpha[j - 1][i - 1]
    }

    pub fn beta(&self, j: usize, i: usize) -> f64 {
        self.beta[j - 1][i - 1]
    }

    pub fn gamma(&self, j: usize, i: usize) -> f64 {
        self.gamma[j - 1][i - 1]
    }

    /// Weights seen by the white vertex `w_{X,Y}`: `(alpha, gamma, beta)` at
    /// `(j + 1, i + 1)` where `i = X mod l`, `j = Y mod k`.
    pub fn at_white(&self, lx: i64, ly: i64) -> (f64, f64, f64) {
        let i = lx.rem_euclid(self.l as i64) as usize;
        let j = ly.rem_euclid(self.k as i64) as usize;
        (self.alpha[j][i], self.gamma[j][i], self.beta[j][i])
    }

    /// Column products `beta_i^v = prod_j beta_{j,i}`, `i = 1..l`.
    pub fn beta_v(&self) -> Vec<f64> {
        (0..self.l).map(|i| (0..self.k).map(|j| self.beta[j][i]).product()).collect()
    }

    /// Ratio between the largest and smallest weight (the implicit `-1`
    /// edges count as weight 1).
    pub fn dynamic_range(&self) -> f64 {
        let all = self.alpha.iter().chain(&self.beta).chain(&self.gamma).flatten().copied();
        let (lo, hi) = all.fold((1.0f64, 1.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi / lo
    }

    pub fn genus(&self) -> usize {
        (self.k - 1) * (self.l - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let w = WeightScheme::symmetric_two_by_two(0.7).unwrap();
        let back = WeightScheme::from_json(&w.to_json()).unwrap();
        assert_eq!(w, back);
        assert_eq!(back.symmetric_parameter(), Some(0.7));
    }

    #[test]
    fn json_layout_is_row_major() {
        let text = r#"{"k":2,"l":3,"alpha":[[1,2,3],[4,5,6]],"beta":[[1,1,1],[1,1,1]],"gamma":[[1,1,1],[1,1,1]]}"#;
        let w = WeightScheme::from_json(text).unwrap();
        assert_eq!(w.alpha(2, 1), 4.0);
        assert_eq!(w.alpha(1, 3), 3.0);
        assert_eq!(w.at_white(5, 3), (6.0, 1.0, 1.0));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(WeightScheme::from_json(r#"{"k":1,"l":1,"alpha":[[0]],"beta":[[1]],"gamma":[[1]]}"#).is_err());
        assert!(WeightScheme::from_json(r#"{"k":1,"l":2,"alpha":[[1]],"beta":[[1]],"gamma":[[1]]}"#).is_err());
        assert!(WeightScheme::from_json(r#"{"k":0,"l":1,"alpha":[],"beta":[],"gamma":[]}"#).is_err());
        assert!(WeightScheme::symmetric_two_by_two(-1.0).is_err());
    }

    #[test]
    fn beta_v_is_column_product() {
        let w = WeightScheme::new(
            2,
            2,
            vec![vec![1.0; 2]; 2],
            vec![vec![2.0, 3.0], vec![5.0, 7.0]],
            vec![vec![1.0; 2]; 2],
        )
        .unwrap();
        assert_eq!(w.beta_v(), vec![10.0, 21.0]);
    }
}
