//! Exact finite-size linear algebra on the Kasteleyn matrix, plus the
//! brute-force matching enumerator that serves as the ground truth for
//! everything else.

mod correlation;
mod enumerate;
mod mean_height;

use std::io::Write;

use nalgebra::{DMatrix, DVector, LU, Dyn};

use crate::error::{Error, Result};
use crate::lattice::{AztecGraph, Edge, EdgeId};

pub use correlation::{joint_centered_correlation, joint_probability, CorrelationQuery};
pub use enumerate::{enumerate_matchings, for_each_matching, DEFAULT_ENUMERATION_CAP};
pub use mean_height::{exact_mean_height, exact_mean_height_along, exact_mean_heights};

/// Signed weighted white x black adjacency matrix.
#[derive(Clone, Debug)]
pub struct KasteleynMatrix {
    matrix: DMatrix<f64>,
}

impl KasteleynMatrix {
    /// Entries `alpha`, `gamma`, `beta` or `-1` (times the combinatorial
    /// weight) following the four non-zero cases of the table.
    pub fn build(graph: &AztecGraph) -> Self {
        Self::build_with_signs(graph, |e| e.kind.sign())
    }

    /// Same pattern with caller-chosen signs; used to check that a wrong
    /// sign is caught by the enumeration oracle.
    pub fn build_with_signs(graph: &AztecGraph, sign: impl Fn(&Edge) -> f64) -> Self {
        let mut matrix = DMatrix::zeros(graph.num_white(), graph.num_black());
        for e in graph.edges() {
            matrix[(e.white as usize, e.black as usize)] = sign(e) * e.weight;
        }
        KasteleynMatrix { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, white: u32, black: u32) -> f64 {
        self.matrix[(white as usize, black as usize)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn lu(&self) -> Result<KasteleynLu> {
        let lu = self.matrix.clone().lu();
        if !lu.is_invertible() || (0..self.dim()).any(|i| lu.u()[(i, i)] == 0.0) {
            return Err(Error::Singular);
        }
        Ok(KasteleynLu { lu })
    }
}

/// LU factorization with partial pivoting; hands out single columns of
/// `K^{-1}` without forming the whole inverse.
pub struct KasteleynLu {
    lu: LU<f64, Dyn, Dyn>,
}

impl KasteleynLu {
    /// `ln |det K|`, finite even when `|det K|` overflows.
    pub fn ln_abs_det(&self) -> f64 {
        let u = self.lu.u();
        (0..u.nrows()).map(|i| u[(i, i)].abs().ln()).sum()
    }

    /// Column `K^{-1}(., w)` indexed by black vertices.
    pub fn inverse_column(&self, white: u32) -> DVector<f64> {
        let n = self.lu.u().nrows();
        let mut rhs = DVector::zeros(n);
        rhs[white as usize] = 1.0;
        self.lu.solve(&rhs).expect("factorization is invertible")
    }

    pub fn inverse(&self) -> InverseKasteleyn {
        InverseKasteleyn { matrix: self.lu.try_inverse().expect("factorization is invertible") }
    }
}

/// `|det K|`, the partition function.
pub fn partition_function(k: &KasteleynMatrix) -> Result<f64> {
    let lu = k.lu()?;
    Ok(lu.ln_abs_det().exp())
}

pub fn ln_partition_function(k: &KasteleynMatrix) -> Result<f64> {
    Ok(k.lu()?.ln_abs_det())
}

/// Dense `K^{-1}` indexed `(black, white)`.
#[derive(Clone, Debug)]
pub struct InverseKasteleyn {
    matrix: DMatrix<f64>,
}

impl InverseKasteleyn {
    pub fn entry(&self, black: u32, white: u32) -> f64 {
        self.matrix[(black as usize, white as usize)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

pub fn inverse_kasteleyn(k: &KasteleynMatrix) -> Result<InverseKasteleyn> {
    Ok(k.lu()?.inverse())
}

/// `P(e in M) = |K(w,b) K^{-1}(b,w)|`. The product is already non-negative
/// with this sign table; the absolute value only removes `-0.0`.
pub fn edge_probability(k: &KasteleynMatrix, kinv: &InverseKasteleyn, white: u32, black: u32) -> f64 {
    (k.entry(white, black) * kinv.entry(black, white)).abs()
}

/// Probabilities for every edge of `graph`, indexed by `EdgeId`.
pub fn edge_probabilities(graph: &AztecGraph, k: &KasteleynMatrix, kinv: &InverseKasteleyn) -> Vec<f64> {
    graph.edges().iter().map(|e| edge_probability(k, kinv, e.white, e.black)).collect()
}

pub fn edge_probability_by_id(graph: &AztecGraph, k: &KasteleynMatrix, kinv: &InverseKasteleyn, id: EdgeId) -> f64 {
    let e = graph.edge(id);
    edge_probability(k, kinv, e.white, e.black)
}

/// Write a dense matrix row-major, one row per line, whitespace separated.
pub fn write_dense(matrix: &DMatrix<f64>, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "# {} {}", matrix.nrows(), matrix.ncols())?;
    for i in 0..matrix.nrows() {
        let row: Vec<String> = (0..matrix.ncols()).map(|j| format!("{:.17e}", matrix[(i, j)])).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::WeightScheme;

    fn uniform(order: usize) -> AztecGraph {
        AztecGraph::with_order(order, WeightScheme::uniform(1, 1)).unwrap()
    }

    #[test]
    fn order_one_determinant_is_two() {
        let g = uniform(1);
        let k = KasteleynMatrix::build(&g);
        assert_eq!(k.dim(), 2);
        assert!((partition_function(&k).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn order_one_probabilities_are_half() {
        let g = uniform(1);
        let k = KasteleynMatrix::build(&g);
        let kinv = inverse_kasteleyn(&k).unwrap();
        for p in edge_probabilities(&g, &k, &kinv) {
            assert!((p - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn order_two_uniform_is_eight() {
        let k = KasteleynMatrix::build(&uniform(2));
        assert!((partition_function(&k).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_weights_fill_the_table_with_expected_values() {
        let a = 0.7;
        let g = AztecGraph::new(1, WeightScheme::symmetric_two_by_two(a).unwrap()).unwrap();
        let k = KasteleynMatrix::build(&g);
        let allowed = [a, 1.0 / a, 1.0, -1.0, 0.0];
        for v in k.matrix().iter() {
            assert!(allowed.iter().any(|x| (x - v).abs() < 1e-15), "unexpected entry {v}");
        }
    }

    #[test]
    fn at_most_four_nonzeros_per_row_and_column() {
        let g = AztecGraph::new(1, WeightScheme::symmetric_two_by_two(0.3).unwrap()).unwrap();
        let k = KasteleynMatrix::build(&g);
        for i in 0..k.dim() {
            assert!(k.matrix().row(i).iter().filter(|v| **v != 0.0).count() <= 4);
            assert!(k.matrix().column(i).iter().filter(|v| **v != 0.0).count() <= 4);
        }
    }

    #[test]
    fn inverse_is_an_inverse() {
        let g = AztecGraph::new(1, WeightScheme::symmetric_two_by_two(0.7).unwrap()).unwrap();
        let k = KasteleynMatrix::build(&g);
        let kinv = inverse_kasteleyn(&k).unwrap();
        let prod = k.matrix() * kinv.matrix();
        let id = DMatrix::<f64>::identity(k.dim(), k.dim());
        assert!((prod - id).amax() < 1e-10);
        let lu = k.lu().unwrap();
        for w in [0u32, 5, 11] {
            let col = lu.inverse_column(w);
            for b in 0..k.dim() {
                assert!((col[b] - kinv.entry(b as u32, w)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn probabilities_sum_to_one_at_each_white() {
        let g = AztecGraph::new(1, WeightScheme::symmetric_two_by_two(0.7).unwrap()).unwrap();
        let k = KasteleynMatrix::build(&g);
        let kinv = inverse_kasteleyn(&k).unwrap();
        let p = edge_probabilities(&g, &k, &kinv);
        for w in 0..g.num_white() as u32 {
            let s: f64 = g.white_edges(w).iter().map(|e| p[e.0 as usize]).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert!(p.iter().all(|&x| (-1e-14..=1.0 + 1e-14).contains(&x)));
    }

    #[test]
    fn log_partition_function_survives_overflow() {
        // Scaling every weight by 1e10 multiplies Z by 1e10^{n(n+1)}, far past
        // f64 range at order 10, while ln Z stays exact.
        let g = uniform(10).map_weights(|_| 1e10);
        let k = KasteleynMatrix::build(&g);
        let expected = 55.0 * std::f64::consts::LN_2 + 110.0 * 1e10f64.ln();
        assert!(partition_function(&k).unwrap().is_infinite());
        assert!((ln_partition_function(&k).unwrap() - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn dump_format() {
        let k = KasteleynMatrix::build(&uniform(1));
        let mut buf = Vec::new();
        write_dense(k.matrix(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# 2 2");
        assert_eq!(lines[1].split_whitespace().count(), 2);
    }
}
