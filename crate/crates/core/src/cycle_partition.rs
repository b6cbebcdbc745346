//! Disjoint cycle partitions for size lists with some cycle longer than 3: hull
//! peeling, the big-line construction and non-crossing matchings.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::feasibility::{check_cycle_feasible, PartitionSpec};
use crate::geom_core::{
    all_collinear, convex_sets_disjoint, corners, cross, hull_of, is_simple_polygon, orientation, polygon_through,
    segments_intersect, star_polygon, Orientation, Point, PointSet,
};
use crate::triangle_partition::{partition_triangles, widest};
use crate::visibility::{line_groups, max_collinear_in, LineGroup};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon {
    pub indices: Vec<usize>,
}

impl Polygon {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePartition {
    pub polygons: Vec<Polygon>,
    pub spec: PartitionSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

/// Which route produced a partition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleStats {
    pub peeled: usize,
    pub bigline: bool,
    pub bigline_variants: usize,
    pub fallback: bool,
    pub triangles_only: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleDefect {
    Coverage(usize),
    Overlap(usize),
    Sizes,
    Flat(usize),
    NonSimple(usize),
    HullOverlap(usize, usize),
}

impl fmt::Display for CycleDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleDefect::Coverage(i) => write!(f, "point {i} is not covered"),
            CycleDefect::Overlap(i) => write!(f, "point {i} is used twice or out of range"),
            CycleDefect::Sizes => write!(f, "polygon sizes do not match the requested sizes"),
            CycleDefect::Flat(k) => write!(f, "polygon {k} is flat"),
            CycleDefect::NonSimple(k) => write!(f, "polygon {k} is not simple"),
            CycleDefect::HullOverlap(a, b) => write!(f, "polygons {a} and {b} have overlapping hulls"),
        }
    }
}

pub fn check_cycles(ps: &PointSet, cp: &CyclePartition) -> std::result::Result<(), CycleDefect> {
    let pts = ps.points();
    let mut seen = vec![false; ps.len()];
    for poly in &cp.polygons {
        for &i in &poly.indices {
            if i >= ps.len() || seen[i] {
                return Err(CycleDefect::Overlap(i));
            }
            seen[i] = true;
        }
    }
    if let Some(i) = seen.iter().position(|&s| !s) {
        return Err(CycleDefect::Coverage(i));
    }
    let mut sizes: Vec<usize> = cp.polygons.iter().map(Polygon::len).collect();
    sizes.sort_unstable();
    if sizes != cp.spec.sizes() {
        return Err(CycleDefect::Sizes);
    }
    for (k, poly) in cp.polygons.iter().enumerate() {
        if all_collinear(pts, &poly.indices) {
            return Err(CycleDefect::Flat(k));
        }
        if !is_simple_polygon(pts, &poly.indices) {
            return Err(CycleDefect::NonSimple(k));
        }
    }
    for a in 0..cp.polygons.len() {
        for b in a + 1..cp.polygons.len() {
            if !convex_sets_disjoint(pts, &cp.polygons[a].indices, &cp.polygons[b].indices) {
                return Err(CycleDefect::HullOverlap(a, b));
            }
        }
    }
    Ok(())
}

pub fn verify_cycles(ps: &PointSet, cp: &CyclePartition) -> bool {
    check_cycles(ps, cp).is_ok()
}

/// Pairs a hull corner with its neighbour along the hull boundary, then recurses
/// on what is left.
pub fn noncrossing_matching(ps: &PointSet) -> Result<Matching> {
    if ps.len() < 2 || ps.len() % 2 != 0 {
        return Err(Error::Precondition(format!("{} points cannot be perfectly matched", ps.len())));
    }
    let pts = ps.points();
    let mut rest: Vec<usize> = (0..ps.len()).collect();
    let mut pairs = Vec::with_capacity(ps.len() / 2);
    while !rest.is_empty() {
        let h = hull_of(pts, &rest)?;
        let (p, q) = (h.boundary_indices[0], h.boundary_indices[1]);
        pairs.push((p, q));
        rest.retain(|&i| i != p && i != q);
    }
    Ok(Matching { pairs })
}

/// Number of crossing (touching counts) segment pairs in a matching.
pub fn matching_crossings(ps: &PointSet, m: &Matching) -> usize {
    let pts = ps.points();
    let mut count = 0;
    for (k, &(a, b)) in m.pairs.iter().enumerate() {
        for &(c, d) in &m.pairs[k + 1..] {
            if segments_intersect(&pts[a], &pts[b], &pts[c], &pts[d]) {
                count += 1;
            }
        }
    }
    count
}

/// A cycle split off from the rest of the points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub cycle: Polygon,
    pub remainder: Vec<usize>,
}

impl Separation {
    pub fn remainder_set(&self, ps: &PointSet) -> PointSet {
        ps.subset(&self.remainder)
    }
}

/// Separates `l` points whose hull misses the hull of the rest, seeding at the
/// lowest then leftmost hull corner and moving on to later corners when a seed fails.
pub fn separate_cycle(ps: &PointSet, l: usize) -> Result<Separation> {
    if l < 3 || ps.len() <= l {
        return Err(Error::Precondition(format!("cannot separate {l} of {} points", ps.len())));
    }
    if ps.all_collinear() {
        return Err(Error::Precondition("all points are collinear".into()));
    }
    let pts = ps.points();
    let all: Vec<usize> = (0..ps.len()).collect();
    let cycle = peel(pts, &all, l)?;
    let remainder = all.iter().copied().filter(|i| !cycle.contains(i)).collect();
    let seed = cycle[0];
    let order = star_polygon(pts, seed, &cycle[1..]);
    Ok(Separation { cycle: Polygon { indices: order }, remainder })
}

/// Hull corners of `idx`, lowest then leftmost first, counterclockwise.
fn seeds(pts: &[Point], idx: &[usize]) -> Result<Vec<usize>> {
    let v = hull_of(pts, idx)?.vertex_indices;
    let start = (0..v.len()).min_by(|&a, &b| (&pts[v[a]].y, &pts[v[a]].x).cmp(&(&pts[v[b]].y, &pts[v[b]].x))).unwrap();
    Ok((0..v.len()).map(|k| v[(start + k) % v.len()]).collect())
}

/// The chain walk can pick up a reflex stretch of the remaining hull whose chord
/// passes over other points; when every seed fails that way, any non-flat group
/// cut off by a line is taken instead.
fn peel(pts: &[Point], idx: &[usize], l: usize) -> Result<Vec<usize>> {
    for seed in seeds(pts, idx)? {
        for reverse in [false, true] {
            if let Ok(c) = separate_from(pts, idx, l, seed, reverse) {
                return Ok(c);
            }
        }
    }
    separable_groups(pts, idx, l)
        .into_iter()
        .find(|g| !all_collinear(pts, g))
        .map(|g| {
            let corner = corners(pts, &g)[0];
            let mut c = vec![corner];
            c.extend(g.into_iter().filter(|&i| i != corner));
            c
        })
        .ok_or(Error::SeparationDegenerate)
}

/// The seed, then consecutive points of the facing chain of the remaining hull; when
/// a chain runs out the point at its far tangent becomes the new seed.
fn separate_from(pts: &[Point], idx: &[usize], l: usize, seed: usize, reverse: bool) -> Result<Vec<usize>> {
    let mut cycle = vec![seed];
    let mut rest: Vec<usize> = idx.iter().copied().filter(|&i| i != seed).collect();
    let mut p = seed;
    while cycle.len() < l {
        let hull = hull_of(pts, &rest)?;
        let mut chain = crate::geom_core::facing_chain_of(pts, &hull, &pts[p])?;
        if reverse {
            chain.reverse();
        }
        for &q in &chain {
            if cycle.len() == l {
                break;
            }
            cycle.push(q);
            rest.retain(|&i| i != q);
        }
        p = *cycle.last().unwrap();
    }
    if all_collinear(pts, &cycle) {
        return Err(Error::SeparationDegenerate);
    }
    if !convex_sets_disjoint(pts, &cycle, &rest) {
        return Err(Error::Construction("separated cycle overlaps the rest".into()));
    }
    Ok(cycle)
}

fn nc_prime(ps_sub: &PointSet, sizes: &[usize]) -> bool {
    let total: usize = sizes.iter().sum();
    max_collinear_in(&line_groups(ps_sub), ps_sub.len()).0 <= total - sizes.len()
}

pub fn partition_cycles(ps: &PointSet, spec: &PartitionSpec) -> Result<CyclePartition> {
    partition_cycles_with_stats(ps, spec).map(|(cp, _)| cp)
}

pub fn partition_cycles_with_stats(ps: &PointSet, spec: &PartitionSpec) -> Result<(CyclePartition, CycleStats)> {
    let verdict = check_cycle_feasible(ps, spec)?;
    if !verdict.feasible {
        return Err(Error::Infeasible(verdict.certificate));
    }
    let mut stats = CycleStats::default();
    if spec.all_triangles() {
        let tp = partition_triangles(ps)?;
        stats.triangles_only = true;
        let polygons = tp.triangles.iter().map(|t| Polygon { indices: t.indices.to_vec() }).collect();
        return Ok((CyclePartition { polygons, spec: spec.clone() }, stats));
    }
    let all: Vec<usize> = (0..ps.len()).collect();
    if let Ok(sets) = peel_route(ps, &all, spec.sizes(), &mut stats) {
        if let Some(cp) = assemble(ps, spec, &sets) {
            return Ok((cp, stats));
        }
    }
    stats.fallback = true;
    let mut budget = 200 * ps.len().pow(3);
    if let Some(sets) = separable_route(ps, &all, spec.sizes().to_vec(), &mut budget)? {
        if let Some(cp) = assemble(ps, spec, &sets) {
            return Ok((cp, stats));
        }
    }
    Err(Error::Construction("no disjoint cycle partition was constructed".into()))
}

/// Orders each point set into a simple polygon and checks the whole partition.
fn assemble(ps: &PointSet, spec: &PartitionSpec, sets: &[Vec<usize>]) -> Option<CyclePartition> {
    let pts = ps.points();
    let polygons = sets
        .iter()
        .map(|s| polygon_through(pts, s).map(|indices| Polygon { indices }))
        .collect::<Option<Vec<_>>>()?;
    let cp = CyclePartition { polygons, spec: spec.clone() };
    verify_cycles(ps, &cp).then_some(cp)
}

/// Peels cycles smallest first while the rest keeps the collinearity bound; at the
/// first violation the big-line construction finishes the current set.
fn peel_route(ps: &PointSet, idx: &[usize], sizes: &[usize], stats: &mut CycleStats) -> Result<Vec<Vec<usize>>> {
    let pts = ps.points();
    let mut rest = idx.to_vec();
    let mut sizes = sizes.to_vec();
    let mut out = Vec::new();
    while sizes.len() > 1 {
        let cycle = peel(pts, &rest, sizes[0])?;
        let after: Vec<usize> = rest.iter().copied().filter(|i| !cycle.contains(i)).collect();
        let after_set = ps.subset(&after);
        if nc_prime(&after_set, &sizes[1..]) {
            out.push(cycle);
            rest = after;
            sizes.remove(0);
            stats.peeled += 1;
            continue;
        }
        let (_, g) = max_collinear_in(&line_groups(&after_set), after.len());
        let g = g.expect("a violated bound means a line with at least three points");
        let (a, b) = (after[g.member_indices[0]], after[g.member_indices[1]]);
        let here = ps.subset(&rest);
        let lambda = line_groups(&here)
            .into_iter()
            .find(|h| h.member_indices.iter().any(|&k| rest[k] == a) && h.member_indices.iter().any(|&k| rest[k] == b))
            .expect("the violating line is a line of the larger set");
        stats.bigline = true;
        let (sets, tried) = bigline_sets(&here, &sizes, &lambda)?;
        stats.bigline_variants += tried;
        out.extend(sets.into_iter().map(|s| s.into_iter().map(|k| rest[k]).collect::<Vec<_>>()));
        return Ok(out);
    }
    if all_collinear(pts, &rest) {
        return Err(Error::Construction("last cycle is flat".into()));
    }
    out.push(rest);
    Ok(out)
}

/// The big-line construction on all of `ps`.
pub fn bigline_partition(ps: &PointSet, spec: &PartitionSpec, lambda: &LineGroup) -> Result<CyclePartition> {
    if ps.len() != spec.total() {
        return Err(Error::SizeMismatch { points: ps.len(), total: spec.total() });
    }
    let (sets, _) = bigline_sets(ps, spec.sizes(), lambda)?;
    assemble(ps, spec, &sets).ok_or_else(|| Error::Construction("big-line output failed verification".into()))
}

/// Tries the block orders, side choices and line directions in turn, returning the
/// first that yields disjoint hulls.
fn bigline_sets(ps: &PointSet, sizes: &[usize], lambda: &LineGroup) -> Result<(Vec<Vec<usize>>, usize)> {
    let pts = ps.points();
    if lambda.len() < 2 || !all_collinear(pts, &lambda.member_indices) {
        return Err(Error::Precondition("λ must hold at least two collinear points".into()));
    }
    let mut asc = sizes.to_vec();
    asc.sort_unstable();
    if asc.len() == 1 {
        if all_collinear(pts, &(0..ps.len()).collect::<Vec<_>>()) {
            return Err(Error::Precondition("a single cycle on collinear points".into()));
        }
        return Ok((vec![(0..ps.len()).collect()], 1));
    }
    let mut orders: Vec<Vec<usize>> = Vec::new();
    let mut lasts = asc.clone();
    lasts.dedup();
    for &last in &lasts {
        let mut others = asc.clone();
        others.remove(others.iter().position(|&s| s == last).unwrap());
        for desc in [false, true] {
            let mut o = others.clone();
            if desc {
                o.reverse();
            }
            o.push(last);
            if !orders.contains(&o) {
                orders.push(o);
            }
        }
    }
    let mut tried = 0;
    let mut last_err = Error::Precondition("no block order satisfies the band".into());
    for order in &orders {
        let l = order.len();
        let head: usize = order[..l - 1].iter().sum();
        let total: usize = order.iter().sum();
        let x = lambda.len();
        if order[..l - 1].iter().all(|&s| s == 3) || x + l < head + 2 || x + l > total {
            continue;
        }
        for reverse in [false, true] {
            let mut line = lambda.member_indices.clone();
            if reverse {
                line.reverse();
            }
            for flip in [false, true] {
                tried += 1;
                match bigline_once(pts, order, &line, flip) {
                    Ok(sets) if sets_disjoint(pts, &sets) => return Ok((sets, tried)),
                    Ok(_) => last_err = Error::Construction("big-line hulls overlap".into()),
                    Err(e) => last_err = e,
                }
            }
        }
    }
    Err(last_err)
}

fn sets_disjoint(pts: &[Point], sets: &[Vec<usize>]) -> bool {
    sets.iter().all(|s| !all_collinear(pts, s))
        && (0..sets.len()).all(|a| (a + 1..sets.len()).all(|b| convex_sets_disjoint(pts, &sets[a], &sets[b])))
}

fn in_open_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> bool {
    let o = [orientation(a, b, p), orientation(b, c, p), orientation(c, a, p)];
    o.iter().all(|&x| x == Orientation::Ccw) || o.iter().all(|&x| x == Orientation::Cw)
}

fn opposite(o: Orientation) -> Orientation {
    match o {
        Orientation::Ccw => Orientation::Cw,
        Orientation::Cw => Orientation::Ccw,
        Orientation::Collinear => Orientation::Collinear,
    }
}

/// One run of the construction. `line` lists λ's points from left to right and the
/// side counterclockwise of that direction is "above" unless `flip`.
fn bigline_once(pts: &[Point], order: &[usize], line: &[usize], flip: bool) -> Result<Vec<Vec<usize>>> {
    let l = order.len();
    let (first, last) = (&pts[line[0]], &pts[line[line.len() - 1]]);
    let up = if flip { Orientation::Cw } else { Orientation::Ccw };
    let mut a_side: Vec<usize> = Vec::new();
    let mut b_side: Vec<usize> = Vec::new();
    for i in 0..pts.len() {
        let o = orientation(first, last, &pts[i]);
        if o == up {
            a_side.push(i);
        } else if o == opposite(up) {
            b_side.push(i);
        } else if !line.contains(&i) {
            return Err(Error::Precondition(format!("point {i} is on λ but not in the group")));
        }
    }
    let (mut a_turn, mut b_turn) = (up, opposite(up));
    let both_large = a_side.len() > l - 1 && b_side.len() > l - 1;
    if !both_large && a_side.len() > l - 1 {
        std::mem::swap(&mut a_side, &mut b_side);
        std::mem::swap(&mut a_turn, &mut b_turn);
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut at = 0;
    for &s in &order[..l - 1] {
        blocks.push(line[at..at + s - 1].to_vec());
        at += s - 1;
    }
    let tail: Vec<usize> = line[at..].to_vec();
    if tail.is_empty() || tail.len() > order[l - 1] - 1 {
        return Err(Error::Precondition("λ size outside the band".into()));
    }
    let mut free_a = a_side.clone();
    let mut free_b = b_side.clone();
    let mut apex_side_a = Vec::new();
    for block in blocks.iter_mut() {
        let use_a = !free_a.is_empty();
        let (all, free, turn) =
            if use_a { (&a_side, &mut free_a, a_turn) } else { (&b_side, &mut free_b, b_turn) };
        if free.is_empty() {
            return Err(Error::Construction("ran out of apex points".into()));
        }
        let (m1, mk) = (&pts[block[0]], &pts[*block.last().unwrap()]);
        let empty: Vec<usize> = free
            .iter()
            .copied()
            .filter(|&u| all.iter().all(|&w| w == u || !in_open_triangle(&pts[w], &pts[u], m1, mk)))
            .collect();
        let pool = if empty.is_empty() { free.clone() } else { empty };
        let pick = pool[widest(pts, *block.last().unwrap(), &pool, turn).unwrap()];
        free.retain(|&i| i != pick);
        block.push(pick);
        apex_side_a.push(use_a);
        if both_large && free_a.is_empty() {
            return Err(Error::Construction("both sides large but one ran out".into()));
        }
    }
    let mut final_set: Vec<usize> = tail.clone();
    final_set.extend(&free_a);
    final_set.extend(&free_b);
    if both_large && tail.len() == 1 || all_collinear(pts, &final_set) {
        // release the last point of the rightmost block by rotating its apex ray
        // toward the free points
        let k = l - 2;
        let mstar = blocks[k][blocks[k].len() - 2];
        let (pool, turn) = if both_large || free_b.is_empty() { (&free_a, a_turn) } else { (&free_b, b_turn) };
        let mut candidates = pool.clone();
        candidates.sort_by(|&p, &q| {
            // earlier in the rotation first; ties nearer first
            match orientation(&pts[mstar], &pts[p], &pts[q]) {
                o if o == turn => std::cmp::Ordering::Greater,
                Orientation::Collinear => crate::geom_core::dist2(&pts[mstar], &pts[p])
                    .cmp(&crate::geom_core::dist2(&pts[mstar], &pts[q])),
                _ => std::cmp::Ordering::Less,
            }
        });
        for cand in candidates {
            let mut blk = blocks[k].clone();
            blk.retain(|&i| i != mstar);
            blk.push(cand);
            let mut fin: Vec<usize> = final_set.iter().copied().filter(|&i| i != cand).collect();
            fin.push(mstar);
            let mut sets = blocks.clone();
            sets[k] = blk;
            sets.push(fin);
            if sets_disjoint(pts, &sets) {
                return Ok(sets);
            }
        }
        return Err(Error::Construction("no release point keeps the hulls apart".into()));
    }
    blocks.push(final_set);
    Ok(blocks)
}

/// Fallback search: repeatedly splits off a line-separable group of one of the
/// requested sizes whose remainder still passes the exact feasibility test.
fn separable_route(
    ps: &PointSet,
    idx: &[usize],
    sizes: Vec<usize>,
    budget: &mut usize,
) -> Result<Option<Vec<Vec<usize>>>> {
    let pts = ps.points();
    if sizes.len() == 1 {
        return Ok((!all_collinear(pts, idx)).then(|| vec![idx.to_vec()]));
    }
    let mut distinct = sizes.clone();
    distinct.dedup();
    for &l in &distinct {
        for group in separable_groups(pts, idx, l) {
            if all_collinear(pts, &group) {
                continue;
            }
            if *budget == 0 {
                return Err(Error::Exhausted);
            }
            *budget -= 1;
            let rest: Vec<usize> = idx.iter().copied().filter(|i| !group.contains(i)).collect();
            let mut rest_sizes = sizes.clone();
            rest_sizes.remove(rest_sizes.iter().position(|&s| s == l).unwrap());
            let spec = PartitionSpec::new(rest_sizes.clone())?;
            if !check_cycle_feasible(&ps.subset(&rest), &spec)?.feasible {
                continue;
            }
            if let Some(mut sets) = separable_route(ps, &rest, rest_sizes, budget)? {
                sets.insert(0, group);
                return Ok(Some(sets));
            }
        }
    }
    Ok(None)
}

/// All `l`-subsets of `idx` cut off by a line: prefixes of the lexicographic order
/// on (offset from the line through two points, position along it).
pub(crate) fn separable_groups(pts: &[Point], idx: &[usize], l: usize) -> Vec<Vec<usize>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for &p in idx {
        for &q in idx {
            if p == q {
                continue;
            }
            for along in [false, true] {
                let mut keyed: Vec<_> = idx
                    .iter()
                    .map(|&r| {
                        let off = cross(&pts[p], &pts[q], &pts[r]);
                        let (dx, dy) = pts[q].minus(&pts[p]);
                        let pos = &pts[r].x * &dx + &pts[r].y * &dy;
                        (off, if along { -pos } else { pos }, r)
                    })
                    .collect();
                keyed.sort();
                let mut g: Vec<usize> = keyed[..l].iter().map(|k| k.2).collect();
                g.sort_unstable();
                if seen.insert(g.clone()) {
                    out.push(g);
                }
            }
        }
    }
    out
}
