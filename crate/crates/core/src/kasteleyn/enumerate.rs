use crate::error::{Error, Result};
use crate::lattice::{AztecGraph, Matching, Point};

/// Largest diamond order the enumerator accepts unless told otherwise.
/// Order 6 already has `2^21` matchings.
pub const DEFAULT_ENUMERATION_CAP: usize = 6;

const FREE: u32 = u32::MAX;

/// Every perfect matching with its weight, for `order <= cap`.
pub fn enumerate_matchings(graph: &AztecGraph, cap: usize) -> Result<Vec<(Matching, f64)>> {
    let mut out = Vec::new();
    for_each_matching(graph, cap, |m, w| out.push((m.clone(), w)))?;
    Ok(out)
}

/// Calls `visit(matching, weight)` once per perfect matching.
///
/// Backtracking always extends at the first unmatched vertex in a diagonal
/// sweep from the bottom-left corner, so every partial matching covers a
/// staircase region and dead branches are detected at once.
pub fn for_each_matching(graph: &AztecGraph, cap: usize, mut visit: impl FnMut(&Matching, f64)) -> Result<()> {
    if graph.order() > cap {
        return Err(Error::EnumerationCap { order: graph.order(), cap });
    }
    let mut sweep: Vec<(Point, bool, u32)> = (0..graph.num_white() as u32)
        .map(|w| (graph.white_position(w), true, w))
        .chain((0..graph.num_black() as u32).map(|b| (graph.black_position(b), false, b)))
        .collect();
    sweep.sort_by_key(|(p, ..)| (p.x + p.y, p.y));
    let mut search = Search {
        graph,
        sweep,
        white_partner: vec![FREE; graph.num_white()],
        black_partner: vec![FREE; graph.num_black()],
        visit: &mut visit,
    };
    search.extend(0, 1.0);
    Ok(())
}

struct Search<'a, F> {
    graph: &'a AztecGraph,
    sweep: Vec<(Point, bool, u32)>,
    white_partner: Vec<u32>,
    black_partner: Vec<u32>,
    visit: &'a mut F,
}

impl<F: FnMut(&Matching, f64)> Search<'_, F> {
    fn extend(&mut self, mut cursor: usize, weight: f64) {
        while cursor < self.sweep.len() {
            let (_, white, id) = self.sweep[cursor];
            let partner = if white { &self.white_partner } else { &self.black_partner };
            if partner[id as usize] == FREE {
                break;
            }
            cursor += 1;
        }
        if cursor == self.sweep.len() {
            let m = Matching::from_partner_unchecked(self.white_partner.clone());
            (self.visit)(&m, weight);
            return;
        }
        let (_, white, id) = self.sweep[cursor];
        let edges = if white { self.graph.white_edges(id) } else { self.graph.black_edges(id) };
        for &e in edges {
            let edge = *self.graph.edge(e);
            if self.white_partner[edge.white as usize] != FREE || self.black_partner[edge.black as usize] != FREE {
                continue;
            }
            self.white_partner[edge.white as usize] = edge.black;
            self.black_partner[edge.black as usize] = edge.white;
            self.extend(cursor + 1, weight * edge.weight);
            self.white_partner[edge.white as usize] = FREE;
            self.black_partner[edge.black as usize] = FREE;
        }
    }
}
