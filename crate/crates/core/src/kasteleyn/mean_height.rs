use std::collections::HashMap;

use super::{InverseKasteleyn, KasteleynLu};
use crate::error::{Error, Result};
use crate::lattice::{dual_step, AztecGraph, DualStep, FaceId, HeightPlan};

fn step_probability(graph: &AztecGraph, st: &DualStep, entry: impl FnOnce(u32, u32) -> f64) -> f64 {
    match (st.white, st.black) {
        (Some(w), Some(b)) => match graph.edge_between(w, b) {
            Some(e) => (graph.edge(e).weight * entry(b, w)).abs(),
            None => 0.0,
        },
        _ => 0.0,
    }
}

/// `E[h(f)] - E[h(base)]` for every face, indexed by `FaceId`.
pub fn exact_mean_heights(graph: &AztecGraph, kinv: &InverseKasteleyn, base: FaceId) -> Vec<f64> {
    HeightPlan::new(graph, base)
        .propagate(|st| st.expected_increment(step_probability(graph, st, |b, w| kinv.entry(b, w))))
}

/// `E[h(face)] - E[h(base)]` relative to the graph's default base face.
pub fn exact_mean_height(graph: &AztecGraph, kinv: &InverseKasteleyn, face: FaceId) -> f64 {
    exact_mean_heights(graph, kinv, graph.default_base_face())[face.0 as usize]
}

/// Mean height difference between the ends of an explicit dual path.
///
/// Only the columns of `K^{-1}` for white vertices the path crosses are
/// solved for, so this works at orders where the full inverse is too large.
pub fn exact_mean_height_along(graph: &AztecGraph, lu: &KasteleynLu, path: &[FaceId]) -> Result<f64> {
    let mut columns = HashMap::new();
    let mut total = 0.0;
    for pair in path.windows(2) {
        let st = dual_step(graph, pair[0], pair[1])
            .ok_or_else(|| Error::InvalidArgument(format!("faces {:?} and {:?} are not adjacent", pair[0], pair[1])))?;
        let p = step_probability(graph, &st, |b, w| {
            columns.entry(w).or_insert_with(|| lu.inverse_column(w))[b as usize]
        });
        total += st.expected_increment(p);
    }
    Ok(total)
}
