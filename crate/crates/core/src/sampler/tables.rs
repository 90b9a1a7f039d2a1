use crate::error::{Error, Result};
use crate::lattice::{AztecGraph, Point};

/// The four edges of a cell, by the vertices they join.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellEdge {
    NE,
    ES,
    SW,
    WN,
}

impl CellEdge {
    pub const ALL: [CellEdge; 4] = [CellEdge::NE, CellEdge::ES, CellEdge::SW, CellEdge::WN];

    pub(crate) const fn bit(self) -> u8 {
        1 << self as u8
    }

    /// Where the edge goes when the diamond grows by one order.
    pub(crate) const fn slide(self) -> (usize, usize) {
        match self {
            CellEdge::SW => (0, 0),
            CellEdge::WN => (0, 1),
            CellEdge::NE => (1, 1),
            CellEdge::ES => (1, 0),
        }
    }

    /// `(white, black)` positions for the cell `(ci, cj)`.
    pub fn endpoints(self, ci: usize, cj: usize) -> (Point, Point) {
        let c = Point::new(2 * ci as i64 + 1, 2 * cj as i64 + 1);
        let (north, south) = (c.offset(0, 1), c.offset(0, -1));
        let (east, west) = (c.offset(1, 0), c.offset(-1, 0));
        match self {
            CellEdge::NE => (north, east),
            CellEdge::ES => (south, east),
            CellEdge::SW => (south, west),
            CellEdge::WN => (north, west),
        }
    }
}

/// Creation probabilities `w_NE w_SW / (w_NE w_SW + w_ES w_WN)` for every
/// cell of every order from 1 up to the graph's order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTables {
    order: usize,
    log_domain: bool,
    /// `levels[m - 1][cj * m + ci]`.
    levels: Vec<Vec<f64>>,
}

/// Weight ratio above which the reduction runs on logarithms.
pub const LOG_DOMAIN_THRESHOLD: f64 = 1e6;

impl WeightTables {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn log_domain(&self) -> bool {
        self.log_domain
    }

    pub fn creation_probability(&self, level: usize, ci: usize, cj: usize) -> f64 {
        self.levels[level - 1][cj * level + ci]
    }

    pub fn level(&self, level: usize) -> &[f64] {
        &self.levels[level - 1]
    }
}

fn cell_weights(graph: &AztecGraph) -> Vec<[f64; 4]> {
    let n = graph.order();
    let mut out = Vec::with_capacity(n * n);
    for cj in 0..n {
        for ci in 0..n {
            out.push(CellEdge::ALL.map(|e| {
                let (w, b) = e.endpoints(ci, cj);
                let (w, b) = (graph.white_at(w).unwrap(), graph.black_at(b).unwrap());
                graph.edge(graph.edge_between(w, b).unwrap()).weight
            }));
        }
    }
    out
}

/// Urban-renewal reduction from the graph's order down to order 1.
///
/// The log-domain path is taken automatically when the edge weights span
/// more than [`LOG_DOMAIN_THRESHOLD`].
pub fn precompute_weight_tables(graph: &AztecGraph) -> Result<WeightTables> {
    let weights = cell_weights(graph);
    let (lo, hi) = weights
        .iter()
        .flatten()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &w| (lo.min(w), hi.max(w)));
    precompute_with_mode(graph.order(), weights, hi / lo > LOG_DOMAIN_THRESHOLD)
}

pub(crate) fn precompute_with_mode(order: usize, weights: Vec<[f64; 4]>, log_domain: bool) -> Result<WeightTables> {
    let mut levels = vec![Vec::new(); order];
    if log_domain {
        let mut cur: Vec<[f64; 4]> = weights.iter().map(|c| c.map(f64::ln)).collect();
        for m in (1..=order).rev() {
            let mut delta = Vec::with_capacity(m * m);
            let mut probs = Vec::with_capacity(m * m);
            for (idx, c) in cur.iter().enumerate() {
                let (x, y) = (c[0] + c[2], c[1] + c[3]);
                let hi = x.max(y);
                let d = hi + ((x - hi).exp() + (y - hi).exp()).ln();
                if !d.is_finite() {
                    return Err(Error::WeightUnderflow { level: m, ci: idx % m, cj: idx / m });
                }
                delta.push(d);
                probs.push((x - d).exp());
            }
            levels[m - 1] = probs;
            cur = reduce(&cur, &delta, m, |w, d| w - d);
        }
    } else {
        let mut cur = weights;
        for m in (1..=order).rev() {
            let mut delta = Vec::with_capacity(m * m);
            let mut probs = Vec::with_capacity(m * m);
            for (idx, c) in cur.iter().enumerate() {
                let x = c[0] * c[2];
                let d = x + c[1] * c[3];
                if !(d > 0.0 && d.is_finite()) {
                    return Err(Error::WeightUnderflow { level: m, ci: idx % m, cj: idx / m });
                }
                delta.push(d);
                probs.push(x / d);
            }
            levels[m - 1] = probs;
            cur = reduce(&cur, &delta, m, |w, d| w / d);
            // Renormalise so repeated reductions neither underflow nor
            // overflow; a global factor leaves every probability unchanged.
            let hi = cur.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
            if hi > 0.0 {
                cur.iter_mut().flatten().for_each(|w| *w /= hi);
            }
        }
    }
    Ok(WeightTables { order, log_domain, levels })
}

/// Order-`m` cells to order-`m - 1` cells. The new cell `(ci, cj)` sits on
/// the even face shared by old cells `(ci..ci+1, cj..cj+1)` and takes each
/// edge from the old cell in that direction.
fn reduce(cur: &[[f64; 4]], delta: &[f64], m: usize, div: impl Fn(f64, f64) -> f64) -> Vec<[f64; 4]> {
    let next = m - 1;
    let mut out = Vec::with_capacity(next * next);
    for cj in 0..next {
        for ci in 0..next {
            let cell = CellEdge::ALL.map(|e| {
                let (dx, dy) = e.slide();
                let src = (cj + dy) * m + ci + dx;
                div(cur[src][e as usize], delta[src])
            });
            out.push(cell);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::WeightScheme;

    #[test]
    fn uniform_weights_give_one_half_everywhere() {
        let g = AztecGraph::with_order(9, WeightScheme::uniform(1, 1)).unwrap();
        let t = precompute_weight_tables(&g).unwrap();
        for m in 1..=9 {
            assert!(t.level(m).iter().all(|&p| p == 0.5));
        }
    }

    #[test]
    fn symmetric_tables_keep_period_two() {
        let g = AztecGraph::new(3, WeightScheme::symmetric_two_by_two(0.7).unwrap()).unwrap();
        let t = precompute_weight_tables(&g).unwrap();
        for m in 1..=g.order() {
            for cj in 0..m {
                for ci in 0..m {
                    let p = t.creation_probability(m, ci, cj);
                    if ci + 2 < m {
                        assert!((p - t.creation_probability(m, ci + 2, cj)).abs() < 1e-12);
                    }
                    if cj + 2 < m {
                        assert!((p - t.creation_probability(m, ci, cj + 2)).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let w = WeightScheme::new(2, 2, vec![vec![0.3, 1.7], vec![2.2, 0.9]], vec![vec![1.1, 0.4], vec![0.8, 3.0]], vec![vec![0.6, 1.3], vec![1.9, 0.5]]).unwrap();
        let g = AztecGraph::with_order(4, w).unwrap();
        assert_eq!(precompute_weight_tables(&g).unwrap(), precompute_weight_tables(&g).unwrap());
    }

    #[test]
    fn log_domain_agrees_with_linear() {
        let g = AztecGraph::new(2, WeightScheme::symmetric_two_by_two(0.4).unwrap()).unwrap();
        let lin = precompute_with_mode(g.order(), cell_weights(&g), false).unwrap();
        let log = precompute_with_mode(g.order(), cell_weights(&g), true).unwrap();
        for m in 1..=g.order() {
            for (a, b) in lin.level(m).iter().zip(log.level(m)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn extreme_ratios_switch_to_logs() {
        let g = AztecGraph::with_order(5, WeightScheme::uniform(1, 1))
            .unwrap()
            .map_weights(|e| if e.white % 2 == 0 { 1e5 } else { 1e-5 });
        let t = precompute_weight_tables(&g).unwrap();
        assert!(t.log_domain());
        assert!(t.level(5).iter().all(|p| p.is_finite()));
    }
}
