use nalgebra::DMatrix;

use super::{InverseKasteleyn, KasteleynMatrix};
use crate::error::{Error, Result};
use crate::lattice::AztecGraph;

/// An ordered list of vertex-disjoint edges `(white, black)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationQuery {
    edges: Vec<(u32, u32)>,
}

impl CorrelationQuery {
    pub fn new(graph: &AztecGraph, edges: Vec<(u32, u32)>) -> Result<Self> {
        for (i, &(w, b)) in edges.iter().enumerate() {
            if graph.edge_between(w, b).is_none() {
                return Err(Error::InvalidArgument(format!("({w}, {b}) is not an edge")));
            }
            if edges[..i].iter().any(|&(w2, b2)| w2 == w || b2 == b) {
                return Err(Error::InvalidArgument(format!("edge ({w}, {b}) shares a vertex with an earlier edge")));
            }
        }
        Ok(CorrelationQuery { edges })
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

fn local_matrix(k: &KasteleynMatrix, kinv: &InverseKasteleyn, q: &CorrelationQuery) -> DMatrix<f64> {
    let e = q.edges();
    DMatrix::from_fn(e.len(), e.len(), |i, j| k.entry(e[i].0, e[i].1) * kinv.entry(e[j].1, e[i].0))
}

/// `P(e_1, ..., e_r all in M)`.
pub fn joint_probability(k: &KasteleynMatrix, kinv: &InverseKasteleyn, q: &CorrelationQuery) -> f64 {
    if q.is_empty() {
        return 1.0;
    }
    local_matrix(k, kinv, q).determinant()
}

/// `E[prod (1{e_i} - P(e_i))]`.
///
/// Expanding the joint-probability determinant, the centred moment keeps
/// exactly the fixed-point-free permutations, which is the determinant of
/// the same local matrix with its diagonal zeroed.
pub fn joint_centered_correlation(k: &KasteleynMatrix, kinv: &InverseKasteleyn, q: &CorrelationQuery) -> f64 {
    if q.is_empty() {
        return 1.0;
    }
    let mut m = local_matrix(k, kinv, q);
    m.fill_diagonal(0.0);
    m.determinant()
}
