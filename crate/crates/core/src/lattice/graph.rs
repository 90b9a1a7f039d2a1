use serde::{Deserialize, Serialize};

use super::coords::{self, Color, Point};
use super::weights::WeightScheme;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    White(u32),
    Black(u32),
}

/// Which case of the Kasteleyn table an edge falls in, by the offset from the
/// white vertex to the black one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    /// `w_{X,Y} - b_{X,Y+1}`, offset `(-1, +1)`.
    Alpha,
    /// `w_{X,Y} - b_{X,Y}`, offset `(-1, -1)`.
    Gamma,
    /// `w_{X,Y} - b_{X+1,Y+1}`, offset `(+1, +1)`.
    Beta,
    /// `w_{X,Y} - b_{X+1,Y}`, offset `(+1, -1)`; the `-1` entries.
    Reference,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 4] = [EdgeKind::Alpha, EdgeKind::Gamma, EdgeKind::Beta, EdgeKind::Reference];

    pub const fn offset(self) -> (i64, i64) {
        match self {
            EdgeKind::Alpha => (-1, 1),
            EdgeKind::Gamma => (-1, -1),
            EdgeKind::Beta => (1, 1),
            EdgeKind::Reference => (1, -1),
        }
    }

    pub const fn sign(self) -> f64 {
        match self {
            EdgeKind::Reference => -1.0,
            _ => 1.0,
        }
    }

    pub fn from_offset(dx: i64, dy: i64) -> Option<EdgeKind> {
        EdgeKind::ALL.into_iter().find(|k| k.offset() == (dx, dy))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub white: u32,
    pub black: u32,
    pub kind: EdgeKind,
    /// Combinatorial weight (the sign of `-1` edges is stripped).
    pub weight: f64,
}

/// The Aztec diamond of order `k l N` with its periodic edge weights.
///
/// In the plane embedding the diamond is the square `[0, 2n]^2`: every
/// odd-parity integer point is a vertex, whites at (odd, even), blacks at
/// (even, odd).
#[derive(Clone, Debug)]
pub struct AztecGraph {
    periods: usize,
    order: usize,
    weights: WeightScheme,
    whites: Vec<Point>,
    blacks: Vec<Point>,
    vertex_grid: Vec<u32>,
    edges: Vec<Edge>,
    white_edges: Vec<Vec<EdgeId>>,
    black_edges: Vec<Vec<EdgeId>>,
    faces: Vec<Point>,
    face_grid: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl AztecGraph {
    pub fn new(periods: usize, weights: WeightScheme) -> Result<Self> {
        if periods == 0 {
            return Err(Error::InvalidArgument("N must be at least 1".into()));
        }
        let order = weights.k() * weights.l() * periods;
        Ok(Self::build(periods, order, weights))
    }

    /// A diamond of arbitrary order `n` carrying the periodic weights; `n`
    /// need not be a multiple of `k l`. Used for oracle tests on small sizes.
    pub fn with_order(order: usize, weights: WeightScheme) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("order must be at least 1".into()));
        }
        let periods = order / (weights.k() * weights.l());
        Ok(Self::build(periods, order, weights))
    }

    fn build(periods: usize, order: usize, weights: WeightScheme) -> Self {
        let n = order as i64;
        let side = (2 * order + 1) as usize;
        let mut vertex_grid = vec![NONE; side * side];
        let mut whites = Vec::with_capacity(order * (order + 1));
        let mut blacks = Vec::with_capacity(order * (order + 1));
        for y in 0..=2 * n {
            for x in 0..=2 * n {
                let p = Point::new(x, y);
                match coords::classify(p) {
                    Some((Color::White, ..)) => {
                        vertex_grid[(y as usize) * side + x as usize] = whites.len() as u32;
                        whites.push(p);
                    }
                    Some((Color::Black, ..)) => {
                        vertex_grid[(y as usize) * side + x as usize] = blacks.len() as u32;
                        blacks.push(p);
                    }
                    None => {}
                }
            }
        }

        let mut edges = Vec::with_capacity(4 * order * order);
        let mut white_edges = vec![Vec::with_capacity(4); whites.len()];
        let mut black_edges = vec![Vec::with_capacity(4); blacks.len()];
        for (wid, &wp) in whites.iter().enumerate() {
            let (_, lx, ly) = coords::classify(wp).expect("white position");
            let (alpha, gamma, beta) = weights.at_white(lx, ly);
            for kind in EdgeKind::ALL {
                let (dx, dy) = kind.offset();
                let bp = wp.offset(dx, dy);
                if let Some(bid) = lookup(&vertex_grid, order, bp) {
                    let weight = match kind {
                        EdgeKind::Alpha => alpha,
                        EdgeKind::Gamma => gamma,
                        EdgeKind::Beta => beta,
                        EdgeKind::Reference => 1.0,
                    };
                    let id = EdgeId(edges.len() as u32);
                    edges.push(Edge { white: wid as u32, black: bid, kind, weight });
                    white_edges[wid].push(id);
                    black_edges[bid as usize].push(id);
                }
            }
        }

        // Faces: every corner of a vertex square, i.e. the even points of
        // [0, 2n]^2 plus the ring of outer faces just beyond its sides.
        let fside = side + 2;
        let mut face_grid = vec![NONE; fside * fside];
        let mut faces = Vec::new();
        for y in -1..=2 * n + 1 {
            for x in -1..=2 * n + 1 {
                let p = Point::new(x, y);
                if !coords::is_face(p) {
                    continue;
                }
                let touches = [(1, 0), (-1, 0), (0, 1), (0, -1)]
                    .iter()
                    .any(|&(dx, dy)| lookup(&vertex_grid, order, p.offset(dx, dy)).is_some());
                if touches {
                    face_grid[((y + 1) as usize) * fside + (x + 1) as usize] = faces.len() as u32;
                    faces.push(p);
                }
            }
        }

        AztecGraph {
            periods,
            order,
            weights,
            whites,
            blacks,
            vertex_grid,
            edges,
            white_edges,
            black_edges,
            faces,
            face_grid,
        }
    }

    pub fn periods(&self) -> usize {
        self.periods
    }

    /// Side length `n = k l N` of the diamond.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weights(&self) -> &WeightScheme {
        &self.weights
    }

    pub fn num_white(&self) -> usize {
        self.whites.len()
    }

    pub fn num_black(&self) -> usize {
        self.blacks.len()
    }

    pub fn white_position(&self, id: u32) -> Point {
        self.whites[id as usize]
    }

    pub fn black_position(&self, id: u32) -> Point {
        self.blacks[id as usize]
    }

    pub fn vertex_at(&self, p: Point) -> Option<Vertex> {
        let id = lookup(&self.vertex_grid, self.order, p)?;
        match coords::classify(p)?.0 {
            Color::White => Some(Vertex::White(id)),
            Color::Black => Some(Vertex::Black(id)),
        }
    }

    pub fn white_at(&self, p: Point) -> Option<u32> {
        match self.vertex_at(p) {
            Some(Vertex::White(id)) => Some(id),
            _ => None,
        }
    }

    pub fn black_at(&self, p: Point) -> Option<u32> {
        match self.vertex_at(p) {
            Some(Vertex::Black(id)) => Some(id),
            _ => None,
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0 as usize]
    }

    pub fn white_edges(&self, white: u32) -> &[EdgeId] {
        &self.white_edges[white as usize]
    }

    pub fn black_edges(&self, black: u32) -> &[EdgeId] {
        &self.black_edges[black as usize]
    }

    pub fn edge_between(&self, white: u32, black: u32) -> Option<EdgeId> {
        self.white_edges[white as usize].iter().copied().find(|&e| self.edges[e.0 as usize].black == black)
    }

    pub fn faces(&self) -> &[Point] {
        &self.faces
    }

    pub fn face_position(&self, id: FaceId) -> Point {
        self.faces[id.0 as usize]
    }

    pub fn face_at(&self, p: Point) -> Option<FaceId> {
        let fside = 2 * self.order as i64 + 3;
        let (x, y) = (p.x + 1, p.y + 1);
        if x < 0 || y < 0 || x >= fside || y >= fside {
            return None;
        }
        let id = self.face_grid[(y * fside + x) as usize];
        (id != NONE).then_some(FaceId(id))
    }

    /// Default base face for heights: the bottom-left corner `(0, 0)`.
    pub fn default_base_face(&self) -> FaceId {
        self.face_at(Point::new(0, 0)).expect("corner face exists")
    }

    /// Copy of the graph with every edge at `vertex` multiplied by `lambda`.
    pub fn scale_vertex(&self, vertex: Vertex, lambda: f64) -> AztecGraph {
        let mut out = self.clone();
        let ids = match vertex {
            Vertex::White(w) => self.white_edges[w as usize].clone(),
            Vertex::Black(b) => self.black_edges[b as usize].clone(),
        };
        for id in ids {
            out.edges[id.0 as usize].weight *= lambda;
        }
        out
    }

    /// Copy of the graph with edge weights replaced by `f(edge)`.
    pub fn map_weights(&self, mut f: impl FnMut(&Edge) -> f64) -> AztecGraph {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.weight = f(e);
        }
        out
    }
}

fn lookup(grid: &[u32], order: usize, p: Point) -> Option<u32> {
    let side = 2 * order as i64 + 1;
    if p.x < 0 || p.y < 0 || p.x >= side || p.y >= side {
        return None;
    }
    let id = grid[(p.y * side + p.x) as usize];
    (id != NONE).then_some(id)
}

/// A perfect matching stored as the black partner of every white vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    partner: Vec<u32>,
}

impl Matching {
    pub fn new(graph: &AztecGraph, partner: Vec<u32>) -> Result<Self> {
        if partner.len() != graph.num_white() {
            return Err(Error::InvalidMatching(format!(
                "{} partners for {} white vertices",
                partner.len(),
                graph.num_white()
            )));
        }
        let mut seen = vec![false; graph.num_black()];
        for (w, &b) in partner.iter().enumerate() {
            if b as usize >= seen.len() || std::mem::replace(&mut seen[b as usize], true) {
                return Err(Error::InvalidMatching(format!("black {b} reused or out of range")));
            }
            if graph.edge_between(w as u32, b).is_none() {
                return Err(Error::InvalidMatching(format!("white {w} and black {b} are not adjacent")));
            }
        }
        Ok(Matching { partner })
    }

    /// Build from edge ids; every vertex must be covered exactly once.
    pub fn from_edges(graph: &AztecGraph, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let mut partner = vec![NONE; graph.num_white()];
        for id in edges {
            let e = graph.edge(id);
            if partner[e.white as usize] != NONE {
                return Err(Error::InvalidMatching(format!("white {} matched twice", e.white)));
            }
            partner[e.white as usize] = e.black;
        }
        if let Some(w) = partner.iter().position(|&b| b == NONE) {
            return Err(Error::InvalidMatching(format!("white {w} unmatched")));
        }
        Matching::new(graph, partner)
    }

    pub(crate) fn from_partner_unchecked(partner: Vec<u32>) -> Self {
        Matching { partner }
    }

    pub fn partner(&self, white: u32) -> u32 {
        self.partner[white as usize]
    }

    pub fn partners(&self) -> &[u32] {
        &self.partner
    }

    pub fn contains(&self, white: u32, black: u32) -> bool {
        self.partner[white as usize] == black
    }

    pub fn edges<'g>(&'g self, graph: &'g AztecGraph) -> impl Iterator<Item = EdgeId> + 'g {
        self.partner
            .iter()
            .enumerate()
            .map(move |(w, &b)| graph.edge_between(w as u32, b).expect("matching edges exist"))
    }

    /// Product of the combinatorial weights of the matched edges.
    pub fn weight(&self, graph: &AztecGraph) -> f64 {
        self.edges(graph).map(|e| graph.edge(e).weight).product()
    }
}
