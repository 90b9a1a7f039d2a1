//! Coordinates, weight schemes, the Aztec diamond graph, matchings and height
//! functions.

pub mod coords;
mod graph;
mod height;
mod weights;

pub use coords::{Color, Point};
pub use graph::{AztecGraph, Edge, EdgeId, EdgeKind, FaceId, Matching, Vertex};
pub use height::{dual_step, height_function, DualStep, HeightField, HeightPlan};
pub use weights::WeightScheme;

/// The reference matching `M_0`: every edge of the diamond whose Kasteleyn
/// entry is `-1`.
///
/// `M_0` is a perfect matching of the whole plane lattice, so its restriction
/// to the diamond leaves the boundary vertices whose `-1` partner lies outside
/// unmatched.
pub fn reference_matching(graph: &AztecGraph) -> Vec<EdgeId> {
    graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind == EdgeKind::Reference)
        .map(|(id, _)| EdgeId(id as u32))
        .collect()
}
