//! Exact integer predicates on grid points and segments.
//!
//! Coordinates are bounded by `±2^30`, so every orientation determinant is
//! below `2^63` in magnitude and every product of two determinants fits in an
//! `i128`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub const COORD_LIMIT: i64 = 1 << 30;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Result<Self> {
        let p = Point { x, y };
        if !p.in_range() {
            return Err(Error::domain(format!("point {p} exceeds the ±2^30 coordinate bound")));
        }
        Ok(p)
    }

    pub fn in_range(self) -> bool {
        self.x.abs() <= COORD_LIMIT && self.y.abs() <= COORD_LIMIT
    }

    pub fn translate(self, dx: i64, dy: i64) -> Point {
        Point {
            x: self.x + dx,
            y: self.y + dy,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Twice the signed area of `abc`: positive for a left turn.
pub fn orient(a: Point, b: Point, c: Point) -> i128 {
    let w = |v: i64| v as i128;
    w(b.x - a.x) * w(c.y - a.y) - w(b.y - a.y) * w(c.x - a.x)
}

fn between(a: i64, b: i64, v: i64) -> bool {
    a.min(b) <= v && v <= a.max(b)
}

/// `p` is on segment `ab` strictly between its endpoints.
pub fn on_open_segment(p: Point, a: Point, b: Point) -> bool {
    p != a && p != b && orient(a, b, p) == 0 && between(a.x, b.x, p.x) && between(a.y, b.y, p.y)
}

/// Collinear segments sharing more than a single point.
pub fn collinear_overlap(a1: Point, a2: Point, b1: Point, b2: Point) -> bool {
    if orient(a1, a2, b1) != 0 || orient(a1, a2, b2) != 0 {
        return false;
    }
    // Project on the dominant axis of `a`.
    let key = |p: Point| {
        if (a2.x - a1.x).abs() >= (a2.y - a1.y).abs() {
            p.x
        } else {
            p.y
        }
    };
    let (lo_a, hi_a) = (key(a1).min(key(a2)), key(a1).max(key(a2)));
    let (lo_b, hi_b) = (key(b1).min(key(b2)), key(b1).max(key(b2)));
    lo_a.max(lo_b) < hi_a.min(hi_b)
}

/// Whether the open segments `a1a2` and `b1b2` meet transversally at a
/// single interior point. Touching configurations (an endpoint on the other
/// segment, shared endpoints) return `false`; collinear overlap is an error.
pub fn segments_properly_cross(a1: Point, a2: Point, b1: Point, b2: Point) -> Result<bool> {
    if a1 == a2 || b1 == b2 {
        return Err(Error::domain("segment with coincident endpoints"));
    }
    if collinear_overlap(a1, a2, b1, b2) {
        return Err(Error::Degenerate(format!(
            "segments {a1}-{a2} and {b1}-{b2} overlap collinearly"
        )));
    }
    Ok(proper_cross(a1, a2, b1, b2))
}

/// The sign test alone, without the degeneracy check.
#[inline]
pub(crate) fn proper_cross(a1: Point, a2: Point, b1: Point, b2: Point) -> bool {
    let d1 = orient(a1, a2, b1).signum();
    let d2 = orient(a1, a2, b2).signum();
    if d1 * d2 >= 0 {
        return false;
    }
    let d3 = orient(b1, b2, a1).signum();
    let d4 = orient(b1, b2, a2).signum();
    d3 * d4 < 0
}

/// Position of the crossing with `b1b2` along `a1a2`, as the exact fraction
/// `num / den` with `den > 0`. Only meaningful for properly crossing segments.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Param {
    num: i128,
    den: i128,
}

impl Param {
    pub(crate) fn along(a1: Point, a2: Point, b1: Point, b2: Point) -> Param {
        let dx = (a2.x - a1.x) as i128;
        let dy = (a2.y - a1.y) as i128;
        let ex = (b2.x - b1.x) as i128;
        let ey = (b2.y - b1.y) as i128;
        let fx = (b1.x - a1.x) as i128;
        let fy = (b1.y - a1.y) as i128;
        let den = dx * ey - dy * ex;
        let num = fx * ey - fy * ex;
        if den < 0 {
            Param { num: -num, den: -den }
        } else {
            Param { num, den }
        }
    }
}

impl PartialEq for Param {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Param {}

impl PartialOrd for Param {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Param {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point { x, y }
    }

    #[test]
    fn basic_crossings() {
        assert!(segments_properly_cross(p(0, 0), p(2, 2), p(0, 2), p(2, 0)).unwrap());
        assert!(!segments_properly_cross(p(0, 0), p(1, 1), p(1, 1), p(2, 0)).unwrap());
        assert!(!segments_properly_cross(p(0, 0), p(1, 0), p(0, 1), p(1, 1)).unwrap());
        // T-junction counts as touching, not crossing.
        assert!(!segments_properly_cross(p(0, 0), p(2, 0), p(1, 0), p(1, 5)).unwrap());
    }

    #[test]
    fn collinear_cases() {
        assert!(matches!(
            segments_properly_cross(p(0, 0), p(4, 0), p(2, 0), p(6, 0)),
            Err(Error::Degenerate(_))
        ));
        // Collinear, touching at a point only.
        assert!(!segments_properly_cross(p(0, 0), p(2, 2), p(2, 2), p(3, 3)).unwrap());
        // Collinear and apart.
        assert!(!segments_properly_cross(p(0, 0), p(1, 0), p(2, 0), p(3, 0)).unwrap());
        assert!(collinear_overlap(p(0, 0), p(0, 5), p(0, 4), p(0, 1)));
    }

    #[test]
    fn point_on_segment() {
        assert!(on_open_segment(p(1, 1), p(0, 0), p(3, 3)));
        assert!(!on_open_segment(p(0, 0), p(0, 0), p(3, 3)));
        assert!(!on_open_segment(p(4, 4), p(0, 0), p(3, 3)));
    }

    #[test]
    fn crossing_parameters_compare_exactly() {
        let a = Param::along(p(0, 0), p(6, 0), p(2, -1), p(2, 1));
        let b = Param::along(p(0, 0), p(6, 0), p(1, -3), p(3, 3));
        let c = Param::along(p(0, 0), p(6, 0), p(3, -1), p(3, 1));
        assert_eq!(a, b);
        assert!(a < c);
    }

    #[test]
    fn extreme_coordinates_do_not_overflow() {
        let m = COORD_LIMIT;
        assert!(segments_properly_cross(p(-m, -m), p(m, m), p(-m, m), p(m, -m)).unwrap());
        assert!(Point::new(m + 1, 0).is_err());
    }
}
