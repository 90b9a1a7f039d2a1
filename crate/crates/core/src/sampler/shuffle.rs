use rand::Rng;

use super::tables::{CellEdge, WeightTables};
use crate::lattice::{AztecGraph, Matching};

const PAIR_NE_SW: u8 = CellEdge::NE.bit() | CellEdge::SW.bit();
const PAIR_ES_WN: u8 = CellEdge::ES.bit() | CellEdge::WN.bit();

/// A matching of the order-`m` diamond as one edge bitmask per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleState {
    order: usize,
    cells: Vec<u8>,
}

impl ShuffleState {
    /// The order-0 diamond: no vertices, one (empty) matching.
    pub fn empty() -> Self {
        ShuffleState { order: 0, cells: Vec::new() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Edge bitmask of cell `(ci, cj)`.
    pub fn cell(&self, ci: usize, cj: usize) -> u8 {
        self.cells[cj * self.order + ci]
    }

    /// One shuffling step. Every edge slides into the next order; a cell
    /// hit by two edges is left empty, a cell hit by none gets a pair drawn
    /// from its creation probability.
    pub fn grow(&mut self, tables: &WeightTables, rng: &mut impl Rng) {
        let (old, m) = (self.order, self.order + 1);
        let mut next = vec![0u8; m * m];
        for cj in 0..old {
            for ci in 0..old {
                let mask = self.cells[cj * old + ci];
                if mask == 0 {
                    continue;
                }
                for e in CellEdge::ALL {
                    if mask & e.bit() != 0 {
                        let (dx, dy) = e.slide();
                        next[(cj + dy) * m + ci + dx] |= e.bit();
                    }
                }
            }
        }
        let probs = tables.level(m);
        for (cell, &p) in next.iter_mut().zip(probs) {
            match cell.count_ones() {
                0 => *cell = if rng.random::<f64>() < p { PAIR_NE_SW } else { PAIR_ES_WN },
                1 => {}
                _ => {
                    debug_assert!(*cell == PAIR_NE_SW || *cell == PAIR_ES_WN);
                    *cell = 0;
                }
            }
        }
        self.order = m;
        self.cells = next;
    }

    pub fn into_matching(self, graph: &AztecGraph) -> Matching {
        assert_eq!(self.order, graph.order(), "state and graph orders differ");
        let mut partner = vec![u32::MAX; graph.num_white()];
        for cj in 0..self.order {
            for ci in 0..self.order {
                let mask = self.cells[cj * self.order + ci];
                for e in CellEdge::ALL {
                    if mask & e.bit() != 0 {
                        let (w, b) = e.endpoints(ci, cj);
                        let w = graph.white_at(w).expect("white inside the diamond");
                        partner[w as usize] = graph.black_at(b).expect("black inside the diamond");
                    }
                }
            }
        }
        let m = Matching::from_partner_unchecked(partner);
        debug_assert!(Matching::new(graph, m.partners().to_vec()).is_ok());
        m
    }
}
