//! The single place where lattice labels, plane positions and macroscopic
//! coordinates are converted into each other.
//!
//! Black vertex `b_{X,Y}` sits at `(2X, 2Y + 1)`, white vertex `w_{X,Y}` at
//! `(2X + 1, 2Y + 2)`, with `X = l x + i` and `Y = k y + j`. Faces are the
//! integer points with even coordinate sum. Every edge joins a vertex to one
//! of its four diagonal neighbours.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub const fn offset(self, dx: i64, dy: i64) -> Self {
        Point { x: self.x + dx, y: self.y + dy }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    White,
    Black,
}

pub const fn white_position(lx: i64, ly: i64) -> Point {
    Point::new(2 * lx + 1, 2 * ly + 2)
}

pub const fn black_position(lx: i64, ly: i64) -> Point {
    Point::new(2 * lx, 2 * ly + 1)
}

/// The face directly above `b_{X,Y}`.
pub const fn face_above_black(lx: i64, ly: i64) -> Point {
    Point::new(2 * lx, 2 * ly + 2)
}

pub const fn is_face(p: Point) -> bool {
    (p.x + p.y).rem_euclid(2) == 0
}

/// Colour and lattice label `(X, Y)` of a vertex position, `None` for faces.
pub fn classify(p: Point) -> Option<(Color, i64, i64)> {
    if is_face(p) {
        return None;
    }
    if p.x.rem_euclid(2) == 1 {
        Some((Color::White, (p.x - 1) / 2, (p.y - 2).div_euclid(2)))
    } else {
        Some((Color::Black, p.x / 2, (p.y - 1).div_euclid(2)))
    }
}

/// Split a lattice label into (fundamental domain, offset inside it).
pub const fn split(label: i64, period: usize) -> (i64, usize) {
    let p = period as i64;
    (label.div_euclid(p), label.rem_euclid(p) as usize)
}

/// Macroscopic `(xi, eta)` of a plane position in the diamond of order
/// `order`; the diamond fills `[-1, 1]^2`.
pub fn macroscopic(p: Point, order: usize) -> (f64, f64) {
    let n = order as f64;
    (p.x as f64 / n - 1.0, (p.y - 2) as f64 / n - 1.0)
}

/// Lattice label `X` (resp. `Y`) of the first even face column (row) whose
/// macroscopic coordinate is at least `xi` (resp. `eta`).
pub fn first_label_at_or_after(coord: f64, order: usize) -> i64 {
    ((coord + 1.0) * order as f64 / 2.0 - 1e-9).ceil() as i64
}
