//! Moving between satisfying assignments and K_k partitions of a gadget.

use std::collections::HashSet;

use super::build::{Gadget, Levels};
use crate::error::{Error, Result};

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedPartition(msg.into())
}

/// Groups of `g.k` pairwise visible points covering the gadget, built from an
/// assignment that satisfies `g.formula`.
pub fn build_partition_from_assignment(g: &Gadget, assignment: &[bool]) -> Result<Vec<Vec<usize>>> {
    let f = &g.formula;
    if assignment.len() < f.num_vars {
        return Err(Error::Precondition(format!("{} values for {} variables", assignment.len(), f.num_vars)));
    }
    if !f.satisfied_by(assignment) {
        return Err(Error::Precondition("assignment does not satisfy the formula".into()));
    }
    let truth = |l: i32| assignment[l.unsigned_abs() as usize - 1] == (l > 0);
    let m = f.num_clauses();
    let mut used = HashSet::new();
    let mut picks = Vec::with_capacity(m);
    for c in 0..m {
        let o = g
            .occurrences
            .iter()
            .find(|o| o.clause == c && truth(o.literal))
            .ok_or_else(|| malformed(format!("clause {} has no true literal", c + 1)))?;
        for p in o.points {
            if !used.insert(p) {
                return Err(malformed(format!("variable point {p} taken twice")));
            }
        }
        picks.push(o.points);
    }
    let leftover: Vec<usize> = g.variable_line.iter().copied().filter(|p| !used.contains(p)).collect();
    let b = &g.blocking;
    let e = &g.extras;
    let pads = &g.pads;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let (mut bi, mut ei) = (0usize, 0usize);
    let take = |v: &[usize], at: &mut usize, n: usize| -> Result<Vec<usize>> {
        let s = v.get(*at..*at + n).ok_or_else(|| malformed("role counts do not fit the grouping"))?;
        *at += n;
        Ok(s.to_vec())
    };
    if g.base_k == 5 {
        for (c, pair) in picks.iter().enumerate() {
            let mut grp = vec![g.clause_points[c], pair[0], pair[1]];
            grp.extend(take(b, &mut bi, 2)?);
            groups.push(grp);
        }
        for &v in &leftover {
            let mut grp = vec![v];
            grp.extend(take(b, &mut bi, 2)?);
            grp.extend(take(e, &mut ei, 2)?);
            groups.push(grp);
        }
        let mut pi = 0;
        while pi < pads.len() {
            let mut grp = take(e, &mut ei, 1)?;
            grp.extend(take(b, &mut bi, 2)?);
            grp.extend(take(pads, &mut pi, 2)?);
            groups.push(grp);
        }
    } else {
        // clause point x = c + 1 sees the extra at x = c
        for (c, pair) in picks.iter().enumerate() {
            let mut grp = vec![g.clause_points[c], pair[0], pair[1], e[c]];
            grp.extend(take(b, &mut bi, 2)?);
            groups.push(grp);
        }
        ei = picks.len();
        let r = pads.len().checked_sub(leftover.len()).ok_or_else(|| malformed("too few padding points"))?;
        let var_pads: Vec<usize> = pads[r..].to_vec();
        let mut vs = leftover.clone();
        if let Some(at) = var_pads.iter().position(|&p| p == pads[0]) {
            // the first padding point is hidden from some variable points
            let ok = vs
                .iter()
                .position(|v| !g.cut_from_first_pad.contains(v))
                .ok_or_else(|| malformed("every leftover variable point is hidden from the first padding point"))?;
            vs.swap(at, ok);
        }
        for (v, p) in vs.iter().zip(&var_pads) {
            let mut grp = vec![*v, *p];
            grp.extend(take(b, &mut bi, 2)?);
            grp.extend(take(e, &mut ei, 2)?);
            groups.push(grp);
        }
        let mut pi = 0;
        while pi < r {
            let mut grp = take(pads, &mut pi, 2)?;
            grp.extend(take(b, &mut bi, 2)?);
            grp.extend(take(e, &mut ei, 2)?);
            groups.push(grp);
        }
    }
    for (t, grp) in groups.iter_mut().enumerate() {
        for line in &g.aux_lines {
            grp.extend(line.get(2 * t..2 * t + 2).ok_or_else(|| malformed("auxiliary line too short"))?);
        }
    }
    check_groups(g, &groups)?;
    Ok(groups)
}

/// Checks that `groups` is a partition of the gadget into pairwise visible k-sets.
fn check_groups(g: &Gadget, groups: &[Vec<usize>]) -> Result<()> {
    let n = g.len();
    let mut seen = vec![false; n];
    for grp in groups {
        if grp.len() != g.k {
            return Err(malformed(format!("group of {} points, expected {}", grp.len(), g.k)));
        }
        for &p in grp {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(malformed(format!("point {p} is out of range or repeated")));
            }
        }
    }
    if let Some(p) = seen.iter().position(|s| !s) {
        return Err(malformed(format!("point {p} is not covered")));
    }
    let pts = g.points.points();
    let levels = Levels::new(pts);
    for grp in groups {
        for (a, &p) in grp.iter().enumerate() {
            for &q in &grp[a + 1..] {
                if let Some(x) = levels.blocker(&pts[p], &pts[q]) {
                    return Err(malformed(format!("points {p} and {q} are blocked by ({x})")));
                }
            }
        }
    }
    Ok(())
}

/// Reads a satisfying assignment off a K_k partition of the gadget: each clause
/// point's group holds the two variable points of one of its literals.
/// Variables left unconstrained are set to false.
pub fn extract_assignment(g: &Gadget, groups: &[Vec<usize>]) -> Result<Vec<bool>> {
    check_groups(g, groups)?;
    let f = &g.formula;
    let mut value: Vec<Option<bool>> = vec![None; f.num_vars];
    for (c, &cp) in g.clause_points.iter().enumerate() {
        let grp = groups.iter().find(|grp| grp.contains(&cp)).expect("checked cover");
        let o = g
            .occurrences
            .iter()
            .find(|o| o.clause == c && o.points.iter().all(|p| grp.contains(p)))
            .ok_or_else(|| malformed(format!("the group of clause {} holds no literal's point pair", c + 1)))?;
        let v = o.literal.unsigned_abs() as usize - 1;
        let want = o.literal > 0;
        if value[v].is_some_and(|x| x != want) {
            return Err(malformed(format!("x{} is read both ways", v + 1)));
        }
        value[v] = Some(want);
    }
    let a: Vec<bool> = value.into_iter().map(|v| v.unwrap_or(false)).collect();
    if !f.satisfied_by(&a) {
        return Err(malformed("the assignment read off the partition does not satisfy the formula"));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat_gadget::{build_gadget, Formula};

    #[test]
    fn round_trip() {
        let f = Formula::new(4, vec![vec![1, 2], vec![3, -4], vec![-1, -2], vec![-3, 4]]).unwrap();
        for k in [5, 6, 7, 8] {
            let g = build_gadget(&f, k).unwrap();
            let groups = build_partition_from_assignment(&g, &[true, false, true, true]).unwrap();
            assert_eq!(groups.len() * k, g.len());
            let a = extract_assignment(&g, &groups).unwrap();
            assert!(f.satisfied_by(&a));
        }
    }

    #[test]
    fn rejects_bad_groups() {
        let f = Formula::new(4, vec![vec![1, 2], vec![3, -4], vec![-1, -2], vec![-3, 4]]).unwrap();
        let g = build_gadget(&f, 5).unwrap();
        let mut groups = build_partition_from_assignment(&g, &[true, false, false, false]).unwrap();
        let last = groups.len() - 1;
        let (a, b) = (groups[0][0], groups[last][0]);
        groups[0][0] = b;
        groups[last][0] = a;
        assert!(matches!(extract_assignment(&g, &groups), Err(Error::MalformedPartition(_))));
    }
}
