//! Point visibility graphs, maximal collinear groups and independent sets.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geom_core::{convex_hull, Point, PointSet, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibilityGraph {
    n: usize,
    adj: Vec<Vec<bool>>,
    blocker: Vec<Vec<Option<usize>>>,
}

impl VisibilityGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn visible(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    /// A point strictly inside segment ij, for invisible pairs.
    pub fn blocker(&self, i: usize, j: usize) -> Option<usize> {
        self.blocker[i][j]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.adj[i][j])
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().filter(|&&b| b).count()
    }

    /// Visible pairs `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.adj[i][j] {
                    e.push((i, j));
                }
            }
        }
        e
    }

    /// Builds a graph straight from an adjacency matrix. Blockers are left empty.
    pub fn from_adjacency(adj: Vec<Vec<bool>>) -> Self {
        let n = adj.len();
        VisibilityGraph { n, adj, blocker: vec![vec![None; n]; n] }
    }
}

fn lcm_den(vals: &[&Rational]) -> BigInt {
    vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scaled(v: &Rational, l: &BigInt) -> BigInt {
    v.numer() * (l / v.denom())
}

/// Primitive integer direction of `q - p`.
fn direction(p: &Point, q: &Point) -> (BigInt, BigInt) {
    let dx = &q.x - &p.x;
    let dy = &q.y - &p.y;
    let l = lcm_den(&[&dx, &dy]);
    let (a, b) = (scaled(&dx, &l), scaled(&dy, &l));
    let g = a.gcd(&b);
    (a / &g, b / g)
}

/// Exact visibility in O(n^2 log n): around each point the others are grouped by
/// primitive direction, and along a ray only the nearest point is visible.
pub fn build_pvg(ps: &PointSet) -> VisibilityGraph {
    let n = ps.len();
    let mut adj = vec![vec![false; n]; n];
    let mut blocker = vec![vec![None; n]; n];
    for i in 0..n {
        let p = &ps[i];
        let mut rays: HashMap<(BigInt, BigInt), Vec<(Rational, usize)>> = HashMap::new();
        for j in 0..n {
            if j != i {
                let q = &ps[j];
                let reach = (&q.x - &p.x).abs() + (&q.y - &p.y).abs();
                rays.entry(direction(p, q)).or_default().push((reach, j));
            }
        }
        for (_, mut ray) in rays {
            ray.sort();
            adj[i][ray[0].1] = true;
            for w in ray.windows(2) {
                blocker[i][w[1].1] = Some(w[0].1);
            }
        }
    }
    VisibilityGraph { n, adj, blocker }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LineGroup {
    /// Primitive `(a, b, c)` with `a x + b y = c`, `a > 0` or `a = 0, b > 0`.
    pub line: (BigInt, BigInt, BigInt),
    /// Members sorted along the line (lexicographically by coordinates).
    pub member_indices: Vec<usize>,
}

impl LineGroup {
    pub fn len(&self) -> usize {
        self.member_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.member_indices.contains(&i)
    }
}

pub fn line_key(p: &Point, q: &Point) -> (BigInt, BigInt, BigInt) {
    let a = &q.y - &p.y;
    let b = &p.x - &q.x;
    let c = &a * &p.x + &b * &p.y;
    let l = lcm_den(&[&a, &b, &c]);
    let (mut a, mut b, mut c) = (scaled(&a, &l), scaled(&b, &l), scaled(&c, &l));
    let g = a.gcd(&b).gcd(&c);
    a /= &g;
    b /= &g;
    c /= &g;
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        (-a, -b, -c)
    } else {
        (a, b, c)
    }
}

/// Every maximal collinear subset with at least two points, sorted by members.
pub fn line_groups(ps: &PointSet) -> Vec<LineGroup> {
    let n = ps.len();
    let mut lines: HashMap<(BigInt, BigInt, BigInt), Vec<usize>> = HashMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let members = lines.entry(line_key(&ps[i], &ps[j])).or_default();
            for k in [i, j] {
                if !members.contains(&k) {
                    members.push(k);
                }
            }
        }
    }
    let mut groups: Vec<LineGroup> = lines
        .into_iter()
        .map(|(line, mut members)| {
            members.sort_by(|&a, &b| ps[a].cmp(&ps[b]));
            LineGroup { line, member_indices: members }
        })
        .collect();
    groups.sort_by(|a, b| a.member_indices.cmp(&b.member_indices));
    groups
}

/// Size of the largest collinear subset; no group is returned below two points.
pub fn max_collinear(ps: &PointSet) -> (usize, Option<LineGroup>) {
    max_collinear_in(&line_groups(ps), ps.len())
}

pub(crate) fn max_collinear_in(groups: &[LineGroup], n: usize) -> (usize, Option<LineGroup>) {
    match groups.iter().max_by(|a, b| a.len().cmp(&b.len()).then(b.member_indices.cmp(&a.member_indices))) {
        Some(g) => (g.len(), Some(g.clone())),
        None => (n.min(1), None),
    }
}

/// Lines through an edge of the convex hull.
pub fn hull_lines(ps: &PointSet, groups: &[LineGroup]) -> Vec<usize> {
    let Ok(hull) = convex_hull(ps) else { return Vec::new() };
    let v = &hull.vertex_indices;
    let mut out = Vec::new();
    for k in 0..v.len() {
        let (a, b) = (v[k], v[(k + 1) % v.len()]);
        if a == b {
            continue;
        }
        if let Some(g) = groups.iter().position(|g| g.contains(a) && g.contains(b)) {
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}

/// The largest independent set of the two shapes an oversized one can take:
/// alternate points of one line, or an exact optimum over the points of two
/// hull-edge lines (under visibility in the whole set).
pub fn max_independent_structured(ps: &PointSet) -> (usize, Vec<usize>) {
    let g = build_pvg(ps);
    let groups = line_groups(ps);
    max_independent_structured_with(ps, &g, &groups)
}

pub(crate) fn max_independent_structured_with(
    ps: &PointSet,
    g: &VisibilityGraph,
    groups: &[LineGroup],
) -> (usize, Vec<usize>) {
    if ps.is_empty() {
        return (0, Vec::new());
    }
    let mut best = vec![0];
    for grp in groups {
        if grp.len().div_ceil(2) > best.len() {
            best = grp.member_indices.iter().step_by(2).copied().collect();
        }
    }
    let hl = hull_lines(ps, groups);
    for (x, &a) in hl.iter().enumerate() {
        for &b in &hl[x + 1..] {
            let mut cand = groups[a].member_indices.clone();
            for &i in &groups[b].member_indices {
                if !cand.contains(&i) {
                    cand.push(i);
                }
            }
            if cand.len() <= best.len() {
                continue;
            }
            let found = exact_mis(g, &cand, best.len());
            if found.len() > best.len() {
                best = found;
            }
        }
    }
    best.sort_unstable();
    (best.len(), best)
}

/// Branch and bound over `cand`; returns a set larger than `floor` if one exists,
/// otherwise possibly an empty vector.
fn exact_mis(g: &VisibilityGraph, cand: &[usize], floor: usize) -> Vec<usize> {
    fn cover_bound(g: &VisibilityGraph, cand: &[usize]) -> usize {
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            match cliques.iter_mut().find(|c| c.iter().all(|&u| g.visible(u, v))) {
                Some(c) => c.push(v),
                None => cliques.push(vec![v]),
            }
        }
        cliques.len()
    }
    fn go(g: &VisibilityGraph, cand: &[usize], cur: &mut Vec<usize>, best: &mut Vec<usize>, floor: usize) {
        if cand.is_empty() {
            if cur.len() > best.len().max(floor) {
                *best = cur.clone();
            }
            return;
        }
        if cur.len() + cover_bound(g, cand) <= best.len().max(floor) {
            return;
        }
        let v = cand[0];
        let kept: Vec<usize> = cand[1..].iter().copied().filter(|&u| !g.visible(u, v)).collect();
        cur.push(v);
        go(g, &kept, cur, best, floor);
        cur.pop();
        go(g, &cand[1..], cur, best, floor);
    }
    let mut best = Vec::new();
    go(g, cand, &mut Vec::new(), &mut best, floor);
    best
}

/// Longest induced path, searching no further once `k` vertices are reached.
pub fn longest_induced_path_atmost(g: &VisibilityGraph, k: usize) -> Result<(usize, Option<Vec<usize>>)> {
    if k < 1 {
        return Err(Error::Precondition("path bound must be at least 1".into()));
    }
    let n = g.n();
    if n == 0 {
        return Ok((0, None));
    }
    struct Search<'a> {
        g: &'a VisibilityGraph,
        k: usize,
        path: Vec<usize>,
        on_path: Vec<bool>,
        // number of path vertices (other than the tip) adjacent to each vertex
        touch: Vec<usize>,
        best: Vec<usize>,
    }
    impl Search<'_> {
        fn free_count(&self) -> usize {
            (0..self.g.n()).filter(|&w| !self.on_path[w] && self.touch[w] == 0).count()
        }
        fn grow(&mut self) -> bool {
            if self.path.len() > self.best.len() {
                self.best = self.path.clone();
                if self.best.len() >= self.k {
                    return true;
                }
            }
            if self.path.len() + self.free_count() <= self.best.len() {
                return false;
            }
            let tip = *self.path.last().unwrap();
            let next: Vec<usize> = self
                .g
                .neighbors(tip)
                .filter(|&w| !self.on_path[w] && self.touch[w] == 0)
                .collect();
            // the tip stops being the tip, so its neighbours become touched
            for w in self.g.neighbors(tip) {
                self.touch[w] += 1;
            }
            let mut done = false;
            for w in next {
                self.path.push(w);
                self.on_path[w] = true;
                done = self.grow();
                self.on_path[w] = false;
                self.path.pop();
                if done {
                    break;
                }
            }
            for w in self.g.neighbors(tip) {
                self.touch[w] -= 1;
            }
            done
        }
    }
    let mut s = Search {
        g,
        k,
        path: Vec::new(),
        on_path: vec![false; n],
        touch: vec![0; n],
        best: Vec::new(),
    };
    for start in 0..n {
        s.path.push(start);
        s.on_path[start] = true;
        let done = s.grow();
        s.on_path[start] = false;
        s.path.pop();
        if done {
            break;
        }
    }
    let mut best = s.best;
    best.truncate(k);
    Ok((best.len(), Some(best)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid3() -> PointSet {
        let mut c = Vec::new();
        for y in 0..3 {
            for x in 0..3 {
                c.push((x, y));
            }
        }
        PointSet::from_ints(&c).unwrap()
    }

    #[test]
    fn small_graphs() {
        let line = PointSet::from_ints(&[(0, 0), (1, 1), (2, 2)]).unwrap();
        let g = build_pvg(&line);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.blocker(0, 2), Some(1));
        let quad = PointSet::from_ints(&[(0, 0), (3, 0), (3, 2), (0, 2)]).unwrap();
        assert_eq!(build_pvg(&quad).edges().len(), 6);
        assert_eq!(build_pvg(&grid3()).edges().len(), 28);
    }

    #[test]
    fn groups_of_grid() {
        let gs = line_groups(&grid3());
        assert_eq!(gs.iter().filter(|g| g.len() >= 3).count(), 8);
        assert_eq!(max_collinear(&grid3()).0, 3);
        let five = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]).unwrap();
        assert_eq!(line_groups(&five).len(), 1);
        let tri = PointSet::from_ints(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        assert_eq!(line_groups(&tri).len(), 3);
        let one = PointSet::from_ints(&[(0, 0)]).unwrap();
        assert_eq!(max_collinear(&one), (1, None));
    }

    #[test]
    fn line_key_is_canonical() {
        let p = Point::int(0, 1);
        let q = Point::new(crate::geom_core::frac(1, 2), crate::geom_core::frac(3, 2));
        assert_eq!(line_key(&p, &q), line_key(&q, &p));
        let (a, b, c) = line_key(&p, &q);
        assert_eq!((a, b, c), (BigInt::from(1), BigInt::from(-1), BigInt::from(-1)));
    }

    #[test]
    fn structured_independent_sets() {
        let five = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]).unwrap();
        assert_eq!(max_independent_structured(&five), (3, vec![0, 2, 4]));
        let quad = PointSet::from_ints(&[(0, 0), (3, 0), (3, 2), (0, 2)]).unwrap();
        assert_eq!(max_independent_structured(&quad).0, 1);
        // two parallel rows carry all four corners, pairwise blocked
        assert_eq!(max_independent_structured(&grid3()).0, 4);
    }

    #[test]
    fn induced_paths() {
        let five = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]).unwrap();
        assert_eq!(longest_induced_path_atmost(&build_pvg(&five), 5).unwrap().0, 5);
        let k6 = VisibilityGraph::from_adjacency(
            (0..6).map(|i| (0..6).map(|j| i != j).collect()).collect(),
        );
        assert_eq!(longest_induced_path_atmost(&k6, 3).unwrap().0, 2);
        assert!(longest_induced_path_atmost(&k6, 0).is_err());
    }
}
