use std::collections::VecDeque;

use super::coords::{self, Color, Point};
use super::graph::{AztecGraph, FaceId, Matching};
use crate::error::{Error, Result};

const DIAGONALS: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// One step between diagonally adjacent faces and the lattice edge it
/// crosses. The edge may leave the diamond (boundary steps); then only its
/// reference-matching membership matters.
#[derive(Clone, Copy, Debug)]
pub struct DualStep {
    pub from: FaceId,
    pub to: FaceId,
    pub white: Option<u32>,
    pub black: Option<u32>,
    /// `+1` when the white endpoint is on the right of the step direction.
    pub orientation: i64,
    /// Whether the crossed edge belongs to `M_0`.
    pub reference: bool,
}

impl DualStep {
    /// Height change `h(to) - h(from)` for the given matching.
    #[inline]
    pub fn increment(&self, m: &Matching) -> i64 {
        let in_m = match (self.white, self.black) {
            (Some(w), Some(b)) => m.contains(w, b),
            _ => false,
        };
        self.orientation * (in_m as i64 - self.reference as i64)
    }

    /// Expected increment given the probability that the crossed edge is
    /// matched.
    pub fn expected_increment(&self, probability: f64) -> f64 {
        self.orientation as f64 * (probability - self.reference as u8 as f64)
    }
}

/// Breadth-first spanning tree of the face adjacency graph plus every other
/// dual step, precomputed once per `(graph, base face)` so that heights of
/// many matchings cost one pass each.
#[derive(Clone, Debug)]
pub struct HeightPlan {
    base: FaceId,
    num_faces: usize,
    steps: Vec<DualStep>,
    /// Indices into `steps`, in BFS order; each reaches a new face.
    tree: Vec<usize>,
    /// Steps not in the tree; each closes a dual cycle.
    chords: Vec<usize>,
}

impl HeightPlan {
    pub fn new(graph: &AztecGraph, base: FaceId) -> Self {
        let faces = graph.faces();
        let mut steps = Vec::with_capacity(2 * faces.len());
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::with_capacity(4); faces.len()];
        for (fid, &f) in faces.iter().enumerate() {
            for (dx, dy) in DIAGONALS {
                let Some(to) = graph.face_at(f.offset(dx, dy)) else { continue };
                if (to.0 as usize) < fid {
                    continue;
                }
                let step = crossing(graph, FaceId(fid as u32), to, f, (dx, dy));
                adjacency[fid].push(steps.len());
                adjacency[to.0 as usize].push(steps.len());
                steps.push(step);
            }
        }

        let mut seen = vec![false; faces.len()];
        let mut used = vec![false; steps.len()];
        let mut tree = Vec::with_capacity(faces.len());
        let mut queue = VecDeque::from([base]);
        seen[base.0 as usize] = true;
        while let Some(f) = queue.pop_front() {
            for &s in &adjacency[f.0 as usize] {
                let mut step = steps[s];
                if step.from != f {
                    step = reverse(step);
                }
                if !seen[step.to.0 as usize] {
                    seen[step.to.0 as usize] = true;
                    used[s] = true;
                    steps[s] = step;
                    tree.push(s);
                    queue.push_back(step.to);
                }
            }
        }
        debug_assert!(seen.iter().all(|&s| s), "face graph is connected");
        let chords = (0..steps.len()).filter(|&s| !used[s]).collect();
        HeightPlan { base, num_faces: faces.len(), steps, tree, chords }
    }

    pub fn base(&self) -> FaceId {
        self.base
    }

    pub fn steps(&self) -> &[DualStep] {
        &self.steps
    }

    /// Tree steps in BFS order.
    pub fn tree_steps(&self) -> impl Iterator<Item = &DualStep> {
        self.tree.iter().map(|&s| &self.steps[s])
    }

    /// Heights of `m`, pinned to 0 at the base face. Every non-tree step is
    /// checked, so a broken matching is reported rather than silently
    /// producing a path-dependent field.
    pub fn heights(&self, m: &Matching) -> Result<HeightField> {
        let mut heights = vec![0i64; self.num_faces];
        for &s in &self.tree {
            let st = &self.steps[s];
            heights[st.to.0 as usize] = heights[st.from.0 as usize] + st.increment(m);
        }
        for &s in &self.chords {
            let st = &self.steps[s];
            let expect = heights[st.from.0 as usize] + st.increment(m);
            if expect != heights[st.to.0 as usize] {
                return Err(Error::InconsistentHeight {
                    face: (st.to.0 as i64, st.from.0 as i64),
                    detail: format!("step gives {expect}, tree gives {}", heights[st.to.0 as usize]),
                });
            }
        }
        Ok(HeightField { heights, base: self.base })
    }

    /// Same propagation with real-valued increments, e.g. expected heights
    /// from edge probabilities.
    pub fn propagate(&self, mut increment: impl FnMut(&DualStep) -> f64) -> Vec<f64> {
        let mut out = vec![0.0; self.num_faces];
        for &s in &self.tree {
            let st = &self.steps[s];
            out[st.to.0 as usize] = out[st.from.0 as usize] + increment(st);
        }
        out
    }
}

fn reverse(s: DualStep) -> DualStep {
    DualStep { from: s.to, to: s.from, orientation: -s.orientation, ..s }
}

fn crossing(graph: &AztecGraph, from: FaceId, to: FaceId, f: Point, (dx, dy): (i64, i64)) -> DualStep {
    let p = f.offset(dx, 0);
    let q = f.offset(0, dy);
    let (wp, bp) = match coords::classify(p) {
        Some((Color::White, ..)) => (p, q),
        _ => (q, p),
    };
    // Twice (white - midpoint) = 2 (wp - f) - d; white on the right of d
    // means a negative cross product.
    let (rx, ry) = (2 * (wp.x - f.x) - dx, 2 * (wp.y - f.y) - dy);
    let cross = dx * ry - dy * rx;
    DualStep {
        from,
        to,
        white: graph.white_at(wp),
        black: graph.black_at(bp),
        orientation: if cross < 0 { 1 } else { -1 },
        reference: bp == wp.offset(1, -1),
    }
}

/// The step from `from` to the diagonally adjacent face `to`, if both exist.
pub fn dual_step(graph: &AztecGraph, from: FaceId, to: FaceId) -> Option<DualStep> {
    let f = graph.face_position(from);
    let t = graph.face_position(to);
    let (dx, dy) = (t.x - f.x, t.y - f.y);
    (dx.abs() == 1 && dy.abs() == 1).then(|| crossing(graph, from, to, f, (dx, dy)))
}

/// Integer heights on every face, pinned to 0 at `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightField {
    heights: Vec<i64>,
    base: FaceId,
}

impl HeightField {
    pub fn base(&self) -> FaceId {
        self.base
    }

    pub fn get(&self, face: FaceId) -> i64 {
        self.heights[face.0 as usize]
    }

    pub fn at(&self, graph: &AztecGraph, p: Point) -> Option<i64> {
        graph.face_at(p).map(|f| self.get(f))
    }

    pub fn values(&self) -> &[i64] {
        &self.heights
    }
}

/// Height function of `m` relative to the reference matching, pinned at
/// `base`.
pub fn height_function(graph: &AztecGraph, m: &Matching, base: FaceId) -> Result<HeightField> {
    HeightPlan::new(graph, base).heights(m)
}
