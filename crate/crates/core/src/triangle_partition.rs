//! Disjoint triangle partitions of 3n-point sets with no independent set of n+1 points.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::feasibility::check_triangle_feasible;
use crate::geom_core::{
    all_collinear, convex_sets_disjoint, dist2, facing_chain_of, hull_of, orientation, segments_intersect,
    Orientation, Point, PointSet,
};
use crate::visibility::{hull_lines, line_groups, LineGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triangle {
    pub indices: [usize; 3],
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrianglePartition {
    pub triangles: Vec<Triangle>,
}

/// Work counters of one `partition_triangles` run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionStats {
    pub steps: usize,
    pub feasibility_checks: usize,
    pub collinear_repairs: usize,
    pub two_line_repairs: usize,
    pub exhaustive_fallbacks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    /// Some point is in no triangle.
    Coverage(usize),
    /// A point is used twice, or an index is out of range.
    Overlap(usize),
    Degenerate(usize),
    Crossing(usize, usize),
    AreaOverlap(usize, usize),
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::Coverage(i) => write!(f, "point {i} is not covered"),
            Defect::Overlap(i) => write!(f, "point {i} is used twice or out of range"),
            Defect::Degenerate(t) => write!(f, "triangle {t} is flat"),
            Defect::Crossing(a, b) => write!(f, "triangles {a} and {b} have crossing edges"),
            Defect::AreaOverlap(a, b) => write!(f, "triangles {a} and {b} overlap"),
        }
    }
}

pub fn check_partition(ps: &PointSet, tp: &TrianglePartition) -> std::result::Result<(), Defect> {
    let pts = ps.points();
    let mut seen = vec![false; ps.len()];
    for t in &tp.triangles {
        for &i in &t.indices {
            if i >= ps.len() || seen[i] {
                return Err(Defect::Overlap(i));
            }
            seen[i] = true;
        }
    }
    if let Some(i) = seen.iter().position(|&s| !s) {
        return Err(Defect::Coverage(i));
    }
    for (k, t) in tp.triangles.iter().enumerate() {
        if all_collinear(pts, &t.indices) {
            return Err(Defect::Degenerate(k));
        }
    }
    for (a, ta) in tp.triangles.iter().enumerate() {
        for (b, tb) in tp.triangles.iter().enumerate().skip(a + 1) {
            let [p0, p1, p2] = ta.indices.map(|i| &pts[i]);
            let [q0, q1, q2] = tb.indices.map(|i| &pts[i]);
            let ea = [(p0, p1), (p1, p2), (p2, p0)];
            let eb = [(q0, q1), (q1, q2), (q2, q0)];
            if ea.iter().any(|(u, v)| eb.iter().any(|(s, t)| segments_intersect(u, v, s, t))) {
                return Err(Defect::Crossing(a, b));
            }
            if !convex_sets_disjoint(pts, &ta.indices, &tb.indices) {
                return Err(Defect::AreaOverlap(a, b));
            }
        }
    }
    Ok(())
}

pub fn verify_partition(ps: &PointSet, tp: &TrianglePartition) -> bool {
    check_partition(ps, tp).is_ok()
}

pub fn partition_triangles(ps: &PointSet) -> Result<TrianglePartition> {
    partition_triangles_with_stats(ps).map(|(tp, _)| tp)
}

pub fn partition_triangles_with_stats(ps: &PointSet) -> Result<(TrianglePartition, PartitionStats)> {
    let verdict = check_triangle_feasible(ps)?;
    if !verdict.feasible {
        return Err(Error::Infeasible(verdict.certificate));
    }
    let mut ctx = Ctx::new(ps);
    let all: Vec<usize> = (0..ps.len()).collect();
    let tris = ctx.solve(&all)?;
    let tp = TrianglePartition { triangles: tris.into_iter().map(|indices| Triangle { indices }).collect() };
    check_partition(ps, &tp).map_err(|d| Error::Construction(format!("output rejected: {d}")))?;
    ctx.stats.steps = tp.triangles.len();
    Ok((tp, ctx.stats))
}

struct Ctx<'a> {
    ps: &'a PointSet,
    stats: PartitionStats,
    budget: usize,
}

impl<'a> Ctx<'a> {
    fn new(ps: &'a PointSet) -> Self {
        let n = ps.len().max(3);
        Ctx { ps, stats: PartitionStats::default(), budget: 40 * n * n * n }
    }

    fn pts(&self) -> &'a [Point] {
        self.ps.points()
    }

    fn feasible(&mut self, idx: &[usize]) -> Result<bool> {
        if idx.is_empty() {
            return Ok(true);
        }
        self.stats.feasibility_checks += 1;
        if self.stats.feasibility_checks > self.budget {
            return Err(Error::Construction("feasibility-check budget exceeded".into()));
        }
        Ok(check_triangle_feasible(&self.ps.subset(idx))?.feasible)
    }

    /// `t` is a proper triangle separated from the rest, and the rest stays feasible.
    fn separable(&mut self, idx: &[usize], t: [usize; 3]) -> Result<bool> {
        let pts = self.pts();
        if all_collinear(pts, &t) {
            return Ok(false);
        }
        let rest: Vec<usize> = idx.iter().copied().filter(|i| !t.contains(i)).collect();
        if !convex_sets_disjoint(pts, &t, &rest) {
            return Ok(false);
        }
        self.feasible(&rest)
    }

    fn solve(&mut self, idx: &[usize]) -> Result<Vec<[usize; 3]>> {
        let mut idx = idx.to_vec();
        let mut out = Vec::new();
        while !idx.is_empty() {
            if idx.len() == 3 {
                let t = [idx[0], idx[1], idx[2]];
                if all_collinear(self.pts(), &t) {
                    return Err(Error::Construction("last three points are collinear".into()));
                }
                out.push(t);
                break;
            }
            if let Some(t) = self.first_fit(&idx)? {
                idx.retain(|i| !t.contains(i));
                out.push(t);
                continue;
            }
            if let Some(rest) = self.repairs(&idx)? {
                out.extend(rest);
                break;
            }
            if let Some(t) = self.any_separable(&idx)? {
                self.stats.exhaustive_fallbacks += 1;
                idx.retain(|i| !t.contains(i));
                out.push(t);
                continue;
            }
            return Err(Error::Construction(format!("no separable triangle among {idx:?}")));
        }
        Ok(out)
    }

    /// Hull vertex p plus two consecutive points of the chain facing p, one of them
    /// on the current hull boundary.
    fn first_fit(&mut self, idx: &[usize]) -> Result<Option<[usize; 3]>> {
        let pts = self.pts();
        let hull = hull_of(pts, idx)?;
        for &p in &hull.vertex_indices {
            let rest: Vec<usize> = idx.iter().copied().filter(|&i| i != p).collect();
            let inner = hull_of(pts, &rest)?;
            let chain = facing_chain_of(pts, &inner, &pts[p])?;
            for w in chain.windows(2) {
                if !(hull.on_boundary(w[0]) || hull.on_boundary(w[1])) {
                    continue;
                }
                let t = [p, w[0], w[1]];
                if self.separable(idx, t)? {
                    return Ok(Some(t));
                }
            }
        }
        Ok(None)
    }

    fn repairs(&mut self, idx: &[usize]) -> Result<Option<Vec<[usize; 3]>>> {
        let sub = self.ps.subset(idx);
        let n = idx.len() / 3;
        let groups = line_groups(&sub);
        let lift = |tp: TrianglePartition| -> Vec<[usize; 3]> {
            tp.triangles.iter().map(|t| t.indices.map(|k| idx[k])).collect()
        };
        if let Some(lambda) = groups.iter().find(|g| g.len() == 2 * n || g.len() + 1 == 2 * n) {
            if let Ok(tp) = repair_collinear_line(&sub, lambda) {
                self.stats.collinear_repairs += 1;
                return Ok(Some(lift(tp)));
            }
        }
        let hl = hull_lines(&sub, &groups);
        for (x, &a) in hl.iter().enumerate() {
            for &b in &hl[x + 1..] {
                let mut inner = Ctx { ps: &sub, stats: PartitionStats::default(), budget: self.budget };
                inner.stats.feasibility_checks = self.stats.feasibility_checks;
                let r = inner.two_lines(&groups[a], &groups[b]);
                self.stats.feasibility_checks = inner.stats.feasibility_checks;
                self.stats.collinear_repairs += inner.stats.collinear_repairs;
                self.stats.exhaustive_fallbacks += inner.stats.exhaustive_fallbacks;
                self.stats.two_line_repairs += inner.stats.two_line_repairs;
                match r {
                    Ok(tris) => {
                        self.stats.two_line_repairs += 1;
                        return Ok(Some(tris.into_iter().map(|t| t.map(|k| idx[k])).collect()));
                    }
                    Err(Error::Construction(m)) if m.contains("budget") => return Err(Error::Construction(m)),
                    Err(_) => {}
                }
            }
        }
        Ok(None)
    }

    /// Re-selects the first triangle from an end of `l1` or `l2`, then finishes.
    fn two_lines(&mut self, l1: &LineGroup, l2: &LineGroup) -> Result<Vec<[usize; 3]>> {
        let pts = self.pts();
        let all: Vec<usize> = (0..self.ps.len()).collect();
        let hull = hull_of(pts, &all)?;
        let on_lines = |i: usize| l1.contains(i) || l2.contains(i);
        let ends = [
            l1.member_indices[0],
            *l1.member_indices.last().unwrap(),
            l2.member_indices[0],
            *l2.member_indices.last().unwrap(),
        ];
        for &pa in ends.iter().filter(|&&e| hull.vertex_indices.contains(&e)) {
            let rest: Vec<usize> = all.iter().copied().filter(|&i| i != pa).collect();
            let chain = facing_chain_of(pts, &hull_of(pts, &rest)?, &pts[pa])?;
            let mut pairs: Vec<(usize, [usize; 2])> = chain
                .windows(2)
                .map(|w| (2 - on_lines(w[0]) as usize - on_lines(w[1]) as usize, [w[0], w[1]]))
                .collect();
            pairs.sort_by_key(|p| p.0);
            for (_, [pb, pc]) in pairs {
                let t = [pa, pb, pc];
                if self.separable(&all, t)? {
                    let rest: Vec<usize> = all.iter().copied().filter(|i| !t.contains(i)).collect();
                    match self.solve(&rest) {
                        Ok(mut tris) => {
                            tris.insert(0, t);
                            return Ok(tris);
                        }
                        Err(Error::Construction(m)) if m.contains("budget") => return Err(Error::Construction(m)),
                        Err(_) => {}
                    }
                }
            }
        }
        Err(Error::Construction("no re-selection at the line ends works".into()))
    }

    fn any_separable(&mut self, idx: &[usize]) -> Result<Option<[usize; 3]>> {
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                for c in b + 1..idx.len() {
                    let t = [idx[a], idx[b], idx[c]];
                    if self.separable(idx, t)? {
                        return Ok(Some(t));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Two-line repair entry point: `l1` and `l2` are lines through hull edges of `ps`.
pub fn repair_two_lines(ps: &PointSet, l1: &LineGroup, l2: &LineGroup) -> Result<TrianglePartition> {
    let groups = line_groups(ps);
    let hl = hull_lines(ps, &groups);
    let is_hull_line = |l: &LineGroup| hl.iter().any(|&g| groups[g] == *l);
    if ps.is_empty() || ps.len() % 3 != 0 || l1 == l2 || !is_hull_line(l1) || !is_hull_line(l2) {
        return Err(Error::Precondition("two distinct lines through hull edges of a 3n-point set".into()));
    }
    let verdict = check_triangle_feasible(ps)?;
    if !verdict.feasible {
        return Err(Error::Infeasible(verdict.certificate));
    }
    let mut ctx = Ctx::new(ps);
    let tris = ctx.two_lines(l1, l2)?;
    let tp = TrianglePartition { triangles: tris.into_iter().map(|indices| Triangle { indices }).collect() };
    check_partition(ps, &tp).map_err(|d| Error::Construction(format!("output rejected: {d}")))?;
    Ok(tp)
}

/// The collinear-heavy case: λ holds 2n-1 or 2n of the 3n points. λ is cut into
/// consecutive pairs from its first point on, and each pair takes the free point
/// (above λ first, then below) making the widest angle with λ's direction at the
/// pair's far end.
pub fn repair_collinear_line(ps: &PointSet, lambda: &LineGroup) -> Result<TrianglePartition> {
    let pts = ps.points();
    let total = ps.len();
    let n = total / 3;
    let line = &lambda.member_indices;
    let x = line.len();
    if total % 3 != 0 || n == 0 || !(x == 2 * n || x + 1 == 2 * n) {
        return Err(Error::Precondition(format!("line holds {x} of {total} points, not 2n-1 or 2n")));
    }
    if line.iter().any(|&i| i >= total) || !all_collinear(pts, line) {
        return Err(Error::Precondition("line members are not collinear".into()));
    }
    let (first, last) = (&pts[line[0]], &pts[line[x - 1]]);
    let mut above = Vec::new();
    let mut below = Vec::new();
    for i in 0..total {
        match orientation(first, last, &pts[i]) {
            Orientation::Ccw => above.push(i),
            Orientation::Cw => below.push(i),
            Orientation::Collinear if !line.contains(&i) => {
                return Err(Error::Precondition(format!("point {i} lies on the line but is not a member")))
            }
            Orientation::Collinear => {}
        }
    }
    let mut tris: Vec<[usize; 3]> = Vec::new();
    let mut apex_above = Vec::new();
    for s in 0..x / 2 {
        let r = line[2 * s + 1];
        let (pool, turn) = if !above.is_empty() { (&mut above, Orientation::Ccw) } else { (&mut below, Orientation::Cw) };
        let Some(k) = widest(pts, r, pool, turn) else {
            return Err(Error::Construction("ran out of free points".into()));
        };
        let apex = pool.remove(k);
        apex_above.push(turn == Orientation::Ccw);
        tris.push([line[2 * s], r, apex]);
    }
    if x % 2 == 1 {
        let m = line[x - 1];
        let free: Vec<usize> = above.iter().chain(below.iter()).copied().collect();
        if free.len() != 2 {
            return Err(Error::Construction("lone point left with the wrong number of free points".into()));
        }
        if above.len() != 1 {
            tris.push([m, free[0], free[1]]);
        } else {
            let prev = tris.pop().expect("n >= 2 here");
            let prev_above = apex_above.pop().unwrap();
            let (same, other) = if prev_above { (above[0], below[0]) } else { (below[0], above[0]) };
            tris.push([prev[2], same, m]);
            tris.push([prev[0], prev[1], other]);
        }
    }
    let tp = TrianglePartition { triangles: tris.into_iter().map(|indices| Triangle { indices }).collect() };
    check_partition(ps, &tp).map_err(|d| Error::Construction(format!("collinear repair produced an invalid partition: {d}")))?;
    Ok(tp)
}

/// Index into `pool` of the point seen from `r` at the widest angle from the line's
/// forward direction, turning `turn`-wise; ties go to the nearer point.
pub(crate) fn widest(pts: &[Point], r: usize, pool: &[usize], turn: Orientation) -> Option<usize> {
    let pr = &pts[r];
    (0..pool.len()).max_by(|&a, &b| {
        let (pa, pb) = (&pts[pool[a]], &pts[pool[b]]);
        match orientation(pr, pb, pa) {
            o if o == turn => Ordering::Greater,
            Orientation::Collinear => dist2(pr, pb).cmp(&dist2(pr, pa)),
            _ => Ordering::Less,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::Certificate;

    fn tp(ts: &[[usize; 3]]) -> TrianglePartition {
        TrianglePartition { triangles: ts.iter().map(|&indices| Triangle { indices }).collect() }
    }

    #[test]
    fn verify_reasons() {
        let ps = PointSet::from_ints(&[(0, 0), (4, 0), (0, 4), (1, 1), (5, 1), (1, 5)]).unwrap();
        assert_eq!(check_partition(&ps, &tp(&[[0, 1, 2], [0, 4, 5]])), Err(Defect::Overlap(0)));
        assert_eq!(check_partition(&ps, &tp(&[[0, 1, 2], [3, 4, 5]])), Err(Defect::Crossing(0, 1)));
        assert_eq!(check_partition(&ps, &tp(&[[0, 1, 2]])), Err(Defect::Coverage(3)));
        let nested = PointSet::from_ints(&[(0, 0), (9, 0), (0, 9), (1, 1), (3, 1), (1, 3)]).unwrap();
        assert_eq!(check_partition(&nested, &tp(&[[0, 1, 2], [3, 4, 5]])), Err(Defect::AreaOverlap(0, 1)));
    }

    #[test]
    fn single_and_nested() {
        let one = PointSet::from_ints(&[(0, 0), (3, 1), (1, 4)]).unwrap();
        assert_eq!(partition_triangles(&one).unwrap().triangles.len(), 1);
        let nested = PointSet::from_ints(&[(0, 0), (12, 0), (6, 10), (5, 3), (7, 3), (6, 5)]).unwrap();
        let t = partition_triangles(&nested).unwrap();
        assert!(verify_partition(&nested, &t));
    }

    #[test]
    fn infeasible_is_rejected() {
        let ps = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (2, 3)]).unwrap();
        assert!(matches!(partition_triangles(&ps), Err(Error::Infeasible(Certificate::IndependentSet(_)))));
    }

    #[test]
    fn collinear_repair_cases() {
        // 4 on the line, 2 above
        let a = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 2), (3, 2)]).unwrap();
        let g = line_groups(&a).into_iter().find(|g| g.len() == 4).unwrap();
        assert!(verify_partition(&a, &repair_collinear_line(&a, &g).unwrap()));
        // 3 on the line, 2 above, 1 below
        let b = PointSet::from_ints(&[(0, 0), (2, 0), (4, 0), (1, 2), (3, 3), (2, -2)]).unwrap();
        let g = line_groups(&b).into_iter().find(|g| g.len() == 3).unwrap();
        assert!(verify_partition(&b, &repair_collinear_line(&b, &g).unwrap()));
        // 5 on the line, last two free points on opposite sides
        let c = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (1, 3), (3, 3), (5, -2), (-2, 2)])
            .unwrap();
        let g = line_groups(&c).into_iter().find(|g| g.len() == 5).unwrap();
        assert!(verify_partition(&c, &repair_collinear_line(&c, &g).unwrap()));
        assert!(matches!(
            repair_collinear_line(&a, &line_groups(&a).into_iter().find(|g| g.len() == 2).unwrap()),
            Err(Error::Precondition(_))
        ));
    }
}
