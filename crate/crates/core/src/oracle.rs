//! Exhaustive ground-truth solvers. They share only the basic predicates with the
//! constructive code and are meant for small inputs.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::feasibility::PartitionSpec;
use crate::geom_core::{between, convex_sets_disjoint, is_simple_polygon, PointSet};
use crate::sat_gadget::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_points: usize,
    pub max_nodes: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_points: 256, max_nodes: 20_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome<T> {
    Found(T),
    NoSolution,
    Exhausted,
}

impl<T> OracleOutcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, OracleOutcome::Found(_))
    }
}

/// All-pairs visibility by scanning every third point.
pub fn naive_visibility(ps: &PointSet) -> Vec<Vec<bool>> {
    let n = ps.len();
    let mut vis = vec![vec![true; n]; n];
    for (i, row) in vis.iter_mut().enumerate() {
        row[i] = false;
    }
    let blocked: Box<dyn Fn(usize, usize, usize) -> bool> = match integer_coords(ps) {
        Some(c) => Box::new(move |k, i, j| {
            let (ax, ay) = c[i];
            let (bx, by) = c[j];
            let (px, py) = c[k];
            let cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
            cross == 0
                && (px - ax) * (bx - ax) + (py - ay) * (by - ay) > 0
                && (px - bx) * (ax - bx) + (py - by) * (ay - by) > 0
        }),
        None => Box::new(move |k, i, j| between(&ps[k], &ps[i], &ps[j])),
    };
    for i in 0..n {
        for j in (i + 1)..n {
            if (0..n).any(|k| k != i && k != j && blocked(k, i, j)) {
                vis[i][j] = false;
                vis[j][i] = false;
            }
        }
    }
    vis
}

/// Coordinates scaled to a common denominator, when they are small enough for i128 products.
fn integer_coords(ps: &PointSet) -> Option<Vec<(i128, i128)>> {
    let mut den = BigInt::one();
    for p in ps.points() {
        den = den.lcm(p.x.denom()).lcm(p.y.denom());
    }
    let limit = 1i64 << 60;
    ps.points()
        .iter()
        .map(|p| {
            let x = (p.x.numer() * (&den / p.x.denom())).to_i64()?;
            let y = (p.y.numer() * (&den / p.y.denom())).to_i64()?;
            (x.abs() < limit && y.abs() < limit).then_some((x as i128, y as i128))
        })
        .collect()
}

/// Exact search for a partition into hull-disjoint simple polygons of the given sizes.
/// Returned polygons list their points in a simple cyclic order.
pub fn brute_force_cycle_partition(
    ps: &PointSet,
    spec: &PartitionSpec,
    budget: OracleBudget,
) -> Result<OracleOutcome<Vec<Vec<usize>>>> {
    if ps.len() != spec.total() {
        return Err(Error::SizeMismatch { points: ps.len(), total: spec.total() });
    }
    if ps.len() > budget.max_points {
        return Ok(OracleOutcome::Exhausted);
    }
    struct S<'a> {
        ps: &'a PointSet,
        used: Vec<bool>,
        sizes: Vec<(usize, usize)>,
        groups: Vec<Vec<usize>>,
        orders: HashMap<Vec<usize>, Option<Vec<usize>>>,
        nodes: u64,
        cap: u64,
    }
    impl S<'_> {
        fn order_of(&mut self, group: &[usize]) -> Option<Vec<usize>> {
            let mut key = group.to_vec();
            key.sort_unstable();
            if let Some(o) = self.orders.get(&key) {
                return o.clone();
            }
            let o = simple_order(self.ps, &key);
            self.orders.insert(key, o.clone());
            o
        }
        fn go(&mut self) -> Option<bool> {
            let Some(anchor) = self.used.iter().position(|&u| !u) else { return Some(true) };
            let free: Vec<usize> = (anchor + 1..self.used.len()).filter(|&i| !self.used[i]).collect();
            for s in 0..self.sizes.len() {
                if self.sizes[s].1 == 0 {
                    continue;
                }
                let size = self.sizes[s].0;
                if free.len() + 1 < size {
                    continue;
                }
                let mut pick: Vec<usize> = (0..size - 1).collect();
                loop {
                    self.nodes += 1;
                    if self.nodes > self.cap {
                        return None;
                    }
                    let mut group = vec![anchor];
                    group.extend(pick.iter().map(|&k| free[k]));
                    let ok = self.groups.iter().all(|g| convex_sets_disjoint(self.ps.points(), g, &group));
                    if ok {
                        if let Some(order) = self.order_of(&group) {
                            for &i in &group {
                                self.used[i] = true;
                            }
                            self.sizes[s].1 -= 1;
                            self.groups.push(order);
                            match self.go() {
                                Some(true) => return Some(true),
                                None => return None,
                                Some(false) => {}
                            }
                            self.groups.pop();
                            self.sizes[s].1 += 1;
                            for &i in &group {
                                self.used[i] = false;
                            }
                        }
                    }
                    if !next_combination(&mut pick, free.len()) {
                        break;
                    }
                }
            }
            Some(false)
        }
    }
    let mut sizes: Vec<(usize, usize)> = Vec::new();
    for &s in spec.sizes() {
        match sizes.iter_mut().find(|e| e.0 == s) {
            Some(e) => e.1 += 1,
            None => sizes.push((s, 1)),
        }
    }
    let mut st = S {
        ps,
        used: vec![false; ps.len()],
        sizes,
        groups: Vec::new(),
        orders: HashMap::new(),
        nodes: 0,
        cap: budget.max_nodes,
    };
    Ok(match st.go() {
        Some(true) => OracleOutcome::Found(st.groups),
        Some(false) => OracleOutcome::NoSolution,
        None => OracleOutcome::Exhausted,
    })
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Some cyclic order of `group` that is a simple polygon, trying every order up to
/// rotation and reflection.
fn simple_order(ps: &PointSet, group: &[usize]) -> Option<Vec<usize>> {
    let pts = ps.points();
    if group.len() < 3 || crate::geom_core::all_collinear(pts, group) {
        return None;
    }
    let mut rest: Vec<usize> = group[1..].to_vec();
    let mut found = None;
    permute(&mut rest, 0, &mut |perm| {
        if perm[0] > perm[perm.len() - 1] {
            return false;
        }
        let mut order = vec![group[0]];
        order.extend_from_slice(perm);
        if is_simple_polygon(pts, &order) {
            found = Some(order);
            return true;
        }
        false
    });
    found
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == v.len() {
        return f(v);
    }
    for i in k..v.len() {
        v.swap(k, i);
        if permute(v, k + 1, f) {
            v.swap(k, i);
            return true;
        }
        v.swap(k, i);
    }
    false
}

/// Exact search for a partition into `k`-sets of pairwise visible points
/// (visibility judged in the whole set). Exact cover over the precomputed cliques.
pub fn brute_force_clique_partition(
    ps: &PointSet,
    k: usize,
    budget: OracleBudget,
) -> Result<OracleOutcome<Vec<Vec<usize>>>> {
    let n = ps.len();
    if k == 0 || n % k != 0 {
        return Err(Error::Precondition(format!("{n} points do not split into groups of {k}")));
    }
    if n > budget.max_points {
        return Ok(OracleOutcome::Exhausted);
    }
    let vis = naive_visibility(ps);
    let words = n.div_ceil(64);
    let mut nb = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in 0..n {
            if vis[i][j] {
                nb[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    fn grow(nb: &[Vec<u64>], cand: &[u64], cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>, cap: u64) -> bool {
        if cur.len() == k {
            out.push(cur.clone());
            return out.len() as u64 <= cap;
        }
        for w in 0..cand.len() {
            let mut bits = cand[w];
            while bits != 0 {
                let v = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let next: Vec<u64> = cand
                    .iter()
                    .zip(&nb[v])
                    .enumerate()
                    .map(|(x, (a, b))| {
                        let mut m = a & b;
                        // keep only indices above v
                        if x < v / 64 {
                            m = 0;
                        } else if x == v / 64 {
                            let s = v % 64 + 1;
                            m &= if s == 64 { 0 } else { !0u64 << s };
                        }
                        m
                    })
                    .collect();
                cur.push(v);
                let ok = grow(nb, &next, cur, k, out, cap);
                cur.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    for v in 0..n {
        let mut cand = nb[v].clone();
        for (x, w) in cand.iter_mut().enumerate() {
            if x < v / 64 {
                *w = 0;
            } else if x == v / 64 {
                let s = v % 64 + 1;
                *w &= if s == 64 { 0 } else { !0u64 << s };
            }
        }
        if !grow(&nb, &cand, &mut vec![v], k, &mut cliques, budget.max_nodes) {
            return Ok(OracleOutcome::Exhausted);
        }
    }
    // a clique holds at most two points of any line, so each line caps the groups left
    let lines: Vec<Vec<usize>> = crate::visibility::line_groups(ps)
        .into_iter()
        .filter(|g| g.len() > 2)
        .map(|g| g.member_indices)
        .collect();
    let mut by_point = vec![Vec::new(); n];
    for (c, cl) in cliques.iter().enumerate() {
        for &p in cl {
            by_point[p].push(c);
        }
    }
    struct X<'a> {
        cliques: &'a [Vec<usize>],
        by_point: &'a [Vec<usize>],
        lines: &'a [Vec<usize>],
        alive: Vec<bool>,
        count: Vec<usize>,
        covered: Vec<bool>,
        left: usize,
        k: usize,
        chosen: Vec<usize>,
        nodes: u64,
        cap: u64,
    }
    impl X<'_> {
        fn kill(&mut self, c: usize, log: &mut Vec<usize>) {
            if self.alive[c] {
                self.alive[c] = false;
                for &p in &self.cliques[c] {
                    self.count[p] -= 1;
                }
                log.push(c);
            }
        }
        fn revive(&mut self, log: &[usize]) {
            for &c in log.iter().rev() {
                self.alive[c] = true;
                for &p in &self.cliques[c] {
                    self.count[p] += 1;
                }
            }
        }
        fn go(&mut self) -> Option<bool> {
            if self.left == 0 {
                return Some(true);
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return None;
            }
            let groups_left = self.left / self.k;
            for line in self.lines {
                if line.iter().filter(|&&p| !self.covered[p]).count() > 2 * groups_left {
                    return Some(false);
                }
            }
            let p = (0..self.covered.len())
                .filter(|&p| !self.covered[p])
                .min_by_key(|&p| self.count[p])
                .unwrap();
            if self.count[p] == 0 {
                return Some(false);
            }
            let options: Vec<usize> = self.by_point[p].iter().copied().filter(|&c| self.alive[c]).collect();
            for c in options {
                let mut log = Vec::new();
                let members = self.cliques[c].clone();
                let by_point = self.by_point;
                for &q in &members {
                    for &d in &by_point[q] {
                        self.kill(d, &mut log);
                    }
                    self.covered[q] = true;
                }
                self.left -= self.k;
                self.chosen.push(c);
                let r = self.go();
                if r != Some(false) {
                    return r;
                }
                self.chosen.pop();
                self.left += self.k;
                for &q in &members {
                    self.covered[q] = false;
                }
                self.revive(&log);
            }
            Some(false)
        }
    }
    let count = by_point.iter().map(|v| v.len()).collect();
    let mut x = X {
        cliques: &cliques,
        by_point: &by_point,
        lines: &lines,
        alive: vec![true; cliques.len()],
        count,
        covered: vec![false; n],
        left: n,
        k,
        chosen: Vec::new(),
        nodes: 0,
        cap: budget.max_nodes,
    };
    Ok(match x.go() {
        Some(true) => OracleOutcome::Found(x.chosen.iter().map(|&c| cliques[c].clone()).collect()),
        Some(false) => OracleOutcome::NoSolution,
        None => OracleOutcome::Exhausted,
    })
}

/// Maximum independent set of the visibility graph by plain branch and bound.
pub fn brute_force_mis(ps: &PointSet, budget: OracleBudget) -> Result<(usize, Vec<usize>)> {
    if ps.len() > budget.max_points {
        return Err(Error::Exhausted);
    }
    let vis = naive_visibility(ps);
    fn go(vis: &[Vec<bool>], cand: &[usize], cur: &mut Vec<usize>, best: &mut Vec<usize>, nodes: &mut u64, cap: u64) -> bool {
        *nodes += 1;
        if *nodes > cap {
            return false;
        }
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        if cur.len() + cand.len() <= best.len() {
            return true;
        }
        let Some((&v, rest)) = cand.split_first() else { return true };
        let kept: Vec<usize> = rest.iter().copied().filter(|&u| !vis[u][v]).collect();
        cur.push(v);
        let ok = go(vis, &kept, cur, best, nodes, cap);
        cur.pop();
        ok && go(vis, rest, cur, best, nodes, cap)
    }
    let cand: Vec<usize> = (0..ps.len()).collect();
    let mut best = Vec::new();
    let mut nodes = 0;
    if !go(&vis, &cand, &mut Vec::new(), &mut best, &mut nodes, budget.max_nodes) {
        return Err(Error::Exhausted);
    }
    best.sort_unstable();
    Ok((best.len(), best))
}

/// First satisfying assignment with `x_1` as the most significant digit, false before true.
pub fn brute_force_sat(f: &Formula) -> Result<Option<Vec<bool>>> {
    let n = f.num_vars;
    if n > 24 {
        return Err(Error::Precondition(format!("{n} variables exceed the limit of 24")));
    }
    for bits in 0u32..(1u32 << n) {
        let a: Vec<bool> = (0..n).map(|v| bits >> (n - 1 - v) & 1 == 1).collect();
        if f.satisfied_by(&a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}
