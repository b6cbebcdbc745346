//! Exact rational predicates, convex hulls and tangents.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| format!("bad numerator in {s:?}"))?;
            let d = BigInt::from_str(d.trim()).map_err(|_| format!("bad denominator in {s:?}"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rational::new(n, d))
        }
        None => BigInt::from_str(s)
            .map(Rational::from_integer)
            .map_err(|_| format!("bad number {s:?}")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub(crate) fn minus(&self, o: &Point) -> (Rational, Rational) {
        (&self.x - &o.x, &self.y - &o.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

/// (b - a) x (c - a)
pub fn cross(a: &Point, b: &Point, c: &Point) -> Rational {
    let (ux, uy) = b.minus(a);
    let (vx, vy) = c.minus(a);
    ux * vy - uy * vx
}

fn dot(a: &Point, b: &Point, c: &Point) -> Rational {
    let (ux, uy) = b.minus(a);
    let (vx, vy) = c.minus(a);
    ux * vx + uy * vy
}

pub(crate) fn dist2(a: &Point, b: &Point) -> Rational {
    dot(a, b, b)
}

pub fn orientation(a: &Point, b: &Point, c: &Point) -> Orientation {
    let v = cross(a, b, c);
    if v.is_positive() {
        Orientation::Ccw
    } else if v.is_negative() {
        Orientation::Cw
    } else {
        Orientation::Collinear
    }
}

pub fn collinear(a: &Point, b: &Point, c: &Point) -> bool {
    cross(a, b, c).is_zero()
}

/// True iff `p` lies in the open segment (a, b).
pub fn strictly_between(p: &Point, a: &Point, b: &Point) -> Result<bool> {
    if a == b {
        return Err(Error::DegenerateSegment);
    }
    Ok(between(p, a, b))
}

pub(crate) fn between(p: &Point, a: &Point, b: &Point) -> bool {
    collinear(a, b, p) && dot(a, p, b).is_positive() && dot(b, p, a).is_positive()
}

/// Closed segment membership.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    p == a || p == b || between(p, a, b)
}

/// Closed segments [a,b] and [c,d] share at least one point.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o1 != o2 && o3 != o4 {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let mut seen: HashMap<&Point, usize> = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if let Some(&j) = seen.get(p) {
                return Err(Error::DuplicatePoint(j, i));
            }
            seen.insert(p, i);
        }
        Ok(PointSet { points })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        PointSet::new(coords.iter().map(|&(x, y)| Point::int(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.points[i]
    }

    /// The points at `idx`, in that order. Index `k` of the result is `idx[k]` here.
    pub fn subset(&self, idx: &[usize]) -> PointSet {
        PointSet { points: idx.iter().map(|&i| self.points[i].clone()).collect() }
    }

    /// Reads the `x y` per line format; `#` lines and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        let mut lines = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::Parse {
                    line: no + 1,
                    msg: format!("expected two coordinates, found {}", toks.len()),
                });
            }
            let x = parse_rational(toks[0]).map_err(|msg| Error::Parse { line: no + 1, msg })?;
            let y = parse_rational(toks[1]).map_err(|msg| Error::Parse { line: no + 1, msg })?;
            points.push(Point::new(x, y));
            lines.push(no + 1);
        }
        PointSet::new(points).map_err(|e| match e {
            Error::DuplicatePoint(a, b) => Error::Parse {
                line: lines[b],
                msg: format!("duplicate of the point on line {}", lines[a]),
            },
            e => e,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.points {
            s.push_str(&p.to_string());
            s.push('\n');
        }
        s
    }

    pub fn all_collinear(&self) -> bool {
        all_collinear(&self.points, &(0..self.len()).collect::<Vec<_>>())
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = Point;
    fn index(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

pub(crate) fn all_collinear(points: &[Point], idx: &[usize]) -> bool {
    if idx.len() < 3 {
        return true;
    }
    let a = &points[idx[0]];
    let Some(&j) = idx.iter().find(|&&j| points[j] != *a) else { return true };
    let b = &points[j];
    idx.iter().all(|&k| collinear(a, b, &points[k]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull {
    /// Strict corners, counterclockwise, starting at the lexicographically smallest point.
    pub vertex_indices: Vec<usize>,
    /// Corners plus points interior to hull edges, in the same traversal order.
    pub boundary_indices: Vec<usize>,
}

impl Hull {
    /// A hull with fewer than three corners (a point or a segment).
    pub fn is_degenerate(&self) -> bool {
        self.vertex_indices.len() < 3
    }

    pub fn on_boundary(&self, i: usize) -> bool {
        self.boundary_indices.contains(&i)
    }
}

pub fn convex_hull(ps: &PointSet) -> Result<Hull> {
    hull_of(ps.points(), &(0..ps.len()).collect::<Vec<_>>())
}

/// Hull of the sub-collection `idx`; indices in the result refer to `points`.
pub fn hull_of(points: &[Point], idx: &[usize]) -> Result<Hull> {
    if idx.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut sorted = idx.to_vec();
    sorted.sort_by(|&a, &b| points[a].cmp(&points[b]));
    if sorted.len() == 1 {
        return Ok(Hull { vertex_indices: sorted.clone(), boundary_indices: sorted });
    }
    let chain = |order: &mut dyn Iterator<Item = usize>| {
        let mut h: Vec<usize> = Vec::new();
        for i in order {
            while h.len() >= 2
                && orientation(&points[h[h.len() - 2]], &points[h[h.len() - 1]], &points[i])
                    != Orientation::Ccw
            {
                h.pop();
            }
            h.push(i);
        }
        h
    };
    let mut lower = chain(&mut sorted.iter().copied());
    let mut upper = chain(&mut sorted.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let verts = lower;
    if verts.len() < 3 {
        let ends = vec![sorted[0], *sorted.last().unwrap()];
        return Ok(Hull { vertex_indices: ends, boundary_indices: sorted });
    }
    let mut boundary = Vec::with_capacity(verts.len());
    for k in 0..verts.len() {
        let u = &points[verts[k]];
        let v = &points[verts[(k + 1) % verts.len()]];
        boundary.push(verts[k]);
        let mut inner: Vec<usize> =
            idx.iter().copied().filter(|&i| between(&points[i], u, v)).collect();
        inner.sort_by(|&a, &b| dot(u, &points[a], v).cmp(&dot(u, &points[b], v)));
        boundary.extend(inner);
    }
    Ok(Hull { vertex_indices: verts, boundary_indices: boundary })
}

/// `q` lies strictly outside the (closed) hull polygon.
pub(crate) fn outside_hull(points: &[Point], hull: &Hull, q: &Point) -> bool {
    let v = &hull.vertex_indices;
    match v.len() {
        1 => points[v[0]] != *q,
        2 => !on_segment(q, &points[v[0]], &points[v[1]]),
        n => (0..n).any(|k| {
            orientation(&points[v[k]], &points[v[(k + 1) % n]], q) == Orientation::Cw
        }),
    }
}

pub fn hull_tangents(ps: &PointSet, hull: &Hull, external: &Point) -> Result<(usize, usize)> {
    tangents_of(ps.points(), hull, external)
}

/// Returns `(left, right)`: seen from `q`, every hull point lies counterclockwise of
/// the ray to `right` and clockwise of the ray to `left`. When `q` is collinear with
/// a segment hull the two rays coincide; then `left` is the nearer end.
pub fn tangents_of(points: &[Point], hull: &Hull, q: &Point) -> Result<(usize, usize)> {
    if !outside_hull(points, hull, q) {
        return Err(Error::NotExternal);
    }
    let v = &hull.vertex_indices;
    match v.len() {
        1 => Ok((v[0], v[0])),
        2 => {
            let (a, b) = (v[0], v[1]);
            Ok(match orientation(q, &points[a], &points[b]) {
                Orientation::Ccw => (b, a),
                Orientation::Cw => (a, b),
                Orientation::Collinear => {
                    if dist2(q, &points[a]) < dist2(q, &points[b]) {
                        (a, b)
                    } else {
                        (b, a)
                    }
                }
            })
        }
        _ => {
            let pick = |bad: Orientation| {
                v.iter()
                    .copied()
                    .filter(|&c| v.iter().all(|&w| orientation(q, &points[c], &points[w]) != bad))
                    .max_by(|&a, &b| dist2(q, &points[a]).cmp(&dist2(q, &points[b])))
                    .expect("an external point has two tangents")
            };
            Ok((pick(Orientation::Ccw), pick(Orientation::Cw)))
        }
    }
}

pub fn facing_chain(ps: &PointSet, hull: &Hull, external: &Point) -> Result<Vec<usize>> {
    facing_chain_of(ps.points(), hull, external)
}

/// Boundary points from the left tangent point to the right one along the side
/// of the hull that faces `q`.
pub fn facing_chain_of(points: &[Point], hull: &Hull, q: &Point) -> Result<Vec<usize>> {
    let (left, right) = tangents_of(points, hull, q)?;
    let b = &hull.boundary_indices;
    if hull.is_degenerate() {
        let mut chain = b.clone();
        if chain[0] != left {
            chain.reverse();
        }
        return Ok(chain);
    }
    let start = b.iter().position(|&i| i == left).expect("tangent point is on the boundary");
    let mut chain = Vec::new();
    let mut k = start;
    loop {
        chain.push(b[k]);
        if b[k] == right {
            break;
        }
        k = (k + 1) % b.len();
    }
    Ok(chain)
}

/// Strict corners of the hull of `idx` (one or two for degenerate input).
pub(crate) fn corners(points: &[Point], idx: &[usize]) -> Vec<usize> {
    hull_of(points, idx).map(|h| h.vertex_indices).unwrap_or_default()
}

/// The convex hulls of the two collections share no point.
pub fn convex_sets_disjoint(points: &[Point], a: &[usize], b: &[usize]) -> bool {
    if a.is_empty() || b.is_empty() {
        return true;
    }
    let ca = corners(points, a);
    let cb = corners(points, b);
    let mut axes: Vec<(Rational, Rational)> = Vec::new();
    let mut add_edges = |c: &[usize]| {
        for k in 0..c.len() {
            let next = c[(k + 1) % c.len()];
            if next == c[k] {
                continue;
            }
            let (dx, dy) = points[next].minus(&points[c[k]]);
            axes.push((-dy.clone(), dx.clone()));
            axes.push((dx, dy));
        }
    };
    add_edges(&ca);
    add_edges(&cb);
    let (dx, dy) = points[cb[0]].minus(&points[ca[0]]);
    axes.push((-dy.clone(), dx.clone()));
    axes.push((dx, dy));
    axes.iter().any(|(ax, ay)| {
        let proj = |c: &[usize]| {
            let vals: Vec<Rational> =
                c.iter().map(|&i| &points[i].x * ax + &points[i].y * ay).collect();
            let lo = vals.iter().min().unwrap().clone();
            let hi = vals.iter().max().unwrap().clone();
            (lo, hi)
        };
        let (alo, ahi) = proj(&ca);
        let (blo, bhi) = proj(&cb);
        ahi < blo || bhi < alo
    })
}

/// The closed polygon through `order` is simple and not flat.
pub fn is_simple_polygon(points: &[Point], order: &[usize]) -> bool {
    let n = order.len();
    if n < 3 || all_collinear(points, order) {
        return false;
    }
    let mut uniq = order.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    if uniq.len() != n {
        return false;
    }
    let p = |k: usize| &points[order[k % n]];
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // shared vertex s, the edges must not fold back onto each other
                let (s, a, b) = if j == i + 1 { (p(j), p(i), p(j + 1)) } else { (p(0), p(1), p(n - 1)) };
                if collinear(s, a, b) && dot(s, a, b).is_positive() {
                    return false;
                }
            } else if segments_intersect(p(i), p(i + 1), p(j), p(j + 1)) {
                return false;
            }
        }
    }
    true
}

/// Sorts `others` by angle around `pivot`, a corner of the hull of all of them,
/// giving a simple star-shaped polygon starting at `pivot`.
pub(crate) fn star_polygon(points: &[Point], pivot: usize, others: &[usize]) -> Vec<usize> {
    let p = &points[pivot];
    let mut rest = others.to_vec();
    rest.sort_by(|&a, &b| {
        match orientation(p, &points[a], &points[b]) {
            Orientation::Ccw => Ordering::Less,
            Orientation::Cw => Ordering::Greater,
            Orientation::Collinear => dist2(p, &points[a]).cmp(&dist2(p, &points[b])),
        }
    });
    // the last ray is walked back toward the pivot so the boundary closes cleanly
    if let Some(&last) = rest.last() {
        let start = rest
            .iter()
            .position(|&i| orientation(p, &points[i], &points[last]) == Orientation::Collinear)
            .unwrap();
        if start > 0 {
            rest[start..].reverse();
        }
    }
    let mut poly = vec![pivot];
    poly.extend(rest);
    poly
}

/// A simple polygon through all of `idx` (which must not be collinear).
pub(crate) fn polygon_through(points: &[Point], idx: &[usize]) -> Option<Vec<usize>> {
    if idx.len() < 3 || all_collinear(points, idx) {
        return None;
    }
    let pivot = corners(points, idx)[0];
    let others: Vec<usize> = idx.iter().copied().filter(|&i| i != pivot).collect();
    Some(star_polygon(points, pivot, &others))
}
