//! Rewrites a 3-occurrence CNF into the shape the gadget needs.

use std::collections::HashSet;

use super::Formula;
use crate::error::{Error, Result};

/// A normalized formula plus the maps between its assignments and the source's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub formula: Formula,
    pub original_vars: usize,
    /// New variable of each source variable (`var_map[v - 1]`), if it survived.
    pub var_map: Vec<Option<usize>>,
    /// Source variables that occurred with one sign only, with that sign.
    pub pure: Vec<(usize, bool)>,
    /// New variables that mirror a source variable's value (split copies).
    copies: Vec<(usize, usize)>,
}

impl Normalized {
    /// Source assignment from a satisfying assignment of the normalized formula.
    pub fn to_original(&self, a: &[bool]) -> Vec<bool> {
        let mut out: Vec<bool> =
            self.var_map.iter().map(|m| m.map(|v| a.get(v - 1).copied().unwrap_or(false)).unwrap_or(false)).collect();
        for &(v, sign) in &self.pure {
            out[v - 1] = sign;
        }
        out
    }

    /// Normalized assignment from a satisfying assignment of the source formula.
    pub fn from_original(&self, a: &[bool]) -> Vec<bool> {
        let mut out = vec![true; self.formula.num_vars];
        for (k, m) in self.var_map.iter().enumerate() {
            if let Some(v) = m {
                out[v - 1] = a.get(k).copied().unwrap_or(false);
            }
        }
        for &(copy, of) in &self.copies {
            out[copy - 1] = out[of - 1];
        }
        out
    }
}

pub fn normalize_formula(f: &Formula) -> Result<Normalized> {
    normalize_formula_with(f, false)
}

/// With `allow_empty`, a formula without clauses comes back unchanged instead of
/// being rejected.
pub fn normalize_formula_with(f: &Formula, allow_empty: bool) -> Result<Normalized> {
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    for c in &f.clauses {
        let mut lits = c.clone();
        lits.sort_unstable_by_key(|l| (l.unsigned_abs(), *l < 0));
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == -w[1]) {
            continue;
        }
        if lits.is_empty() {
            return Ok(unsatisfiable(f.num_vars));
        }
        clauses.push(lits);
    }
    if clauses.is_empty() && !f.clauses.is_empty() {
        return Ok(fixed(f.num_vars, vec![vec![1, -2], vec![3, -4], vec![-1, 2], vec![-3, 4]], 4));
    }
    if clauses.is_empty() {
        if allow_empty {
            return Ok(Normalized {
                formula: Formula { num_vars: 0, clauses: Vec::new() },
                original_vars: f.num_vars,
                var_map: vec![None; f.num_vars],
                pure: Vec::new(),
                copies: Vec::new(),
            });
        }
        return Err(Error::Formula("empty formula".into()));
    }
    let mut count = vec![0usize; f.num_vars + 1];
    for l in clauses.iter().flatten() {
        count[l.unsigned_abs() as usize] += 1;
    }
    if let Some(v) = (1..=f.num_vars).find(|&v| count[v] > 3) {
        return Err(Error::Formula(format!("x{v} occurs {} times", count[v])));
    }

    let mut var_map = vec![None; f.num_vars];
    let mut next = 0usize;
    for v in 1..=f.num_vars {
        if count[v] > 0 {
            next += 1;
            var_map[v - 1] = Some(next);
        }
    }
    for c in clauses.iter_mut() {
        for l in c.iter_mut() {
            let nv = var_map[l.unsigned_abs() as usize - 1].unwrap() as i32;
            *l = if *l > 0 { nv } else { -nv };
        }
    }

    let mut fresh = next;
    let mut new_var = || {
        fresh += 1;
        fresh as i32
    };
    let mut pure = Vec::new();
    let mut copies = Vec::new();
    let mut extra: Vec<Vec<i32>> = Vec::new();
    for v in 1..=f.num_vars {
        let Some(nv) = var_map[v - 1] else { continue };
        let nv = nv as i32;
        let pos = clauses.iter().flatten().filter(|&&l| l == nv).count();
        let neg = clauses.iter().flatten().filter(|&&l| l == -nv).count();
        if pos > 0 && neg > 0 {
            continue;
        }
        let sign = if pos > 0 { 1 } else { -1 };
        pure.push((v, sign > 0));
        let mut target = nv;
        if pos + neg == 3 {
            // move the last occurrence to a copy and tie the copy to the original
            let copy = new_var();
            let c = clauses.iter_mut().rev().find(|c| c.contains(&(sign * nv))).unwrap();
            for l in c.iter_mut() {
                if *l == sign * nv {
                    *l = sign * copy;
                }
            }
            extra.push(vec![-sign * nv, sign * copy]);
            copies.push((copy as usize, nv as usize));
            target = copy;
        }
        let (y, z) = (new_var(), new_var());
        extra.push(vec![-sign * target, y]);
        extra.push(vec![-y, z]);
        extra.push(vec![-z, y]);
    }
    clauses.extend(extra);

    let num_vars = fresh;
    let order = disjoint_order(&clauses);
    let formula = match order {
        Some(o) => Formula { num_vars, clauses: o.into_iter().map(|i| clauses[i].clone()).collect() },
        None => with_separators(num_vars, &clauses),
    };
    formula.check_normalized()?;
    Ok(Normalized { formula, original_vars: f.num_vars, var_map, pure, copies })
}

/// The fixed unsatisfiable stand-in for a formula containing an empty clause.
fn unsatisfiable(original_vars: usize) -> Normalized {
    fixed(original_vars, vec![vec![1], vec![2, -3], vec![-1], vec![3, -2]], 3)
}

/// A stand-in formula sharing no variables with the source; used when the source
/// is decided by its clauses alone (an empty clause, or nothing but tautologies).
fn fixed(original_vars: usize, clauses: Vec<Vec<i32>>, num_vars: usize) -> Normalized {
    let formula = Formula { num_vars, clauses };
    Normalized { formula, original_vars, var_map: vec![None; original_vars], pure: Vec::new(), copies: Vec::new() }
}

fn shares(a: &[i32], b: &[i32]) -> bool {
    a.iter().any(|l| b.iter().any(|m| l.unsigned_abs() == m.unsigned_abs()))
}

/// Depth-first search for an order in which neighbouring clauses share no
/// variable; gives up after a fixed number of steps.
fn disjoint_order(clauses: &[Vec<i32>]) -> Option<Vec<usize>> {
    let n = clauses.len();
    let clash: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| shares(&clauses[i], &clauses[j])).collect()).collect();
    let mut steps = 0usize;
    fn go(
        path: &mut Vec<usize>,
        used: &mut Vec<bool>,
        clash: &[Vec<bool>],
        steps: &mut usize,
    ) -> bool {
        let n = used.len();
        if path.len() == n {
            return true;
        }
        *steps += 1;
        if *steps > 200_000 {
            return false;
        }
        let last = path.last().copied();
        for j in 0..n {
            if used[j] || last.is_some_and(|l| clash[l][j]) {
                continue;
            }
            used[j] = true;
            path.push(j);
            if go(path, used, clash, steps) {
                return true;
            }
            path.pop();
            used[j] = false;
        }
        false
    }
    let mut path = Vec::new();
    let mut used = vec![false; n];
    go(&mut path, &mut used, &clash, &mut steps).then_some(path)
}

/// Keeps the given order and puts a separator clause between every clashing
/// pair; separators form a cycle (s1 ∨ ¬s2), (s2 ∨ ¬s3), ..., (st ∨ ¬s1).
fn with_separators(num_vars: usize, clauses: &[Vec<i32>]) -> Formula {
    let mut slots: Vec<Option<usize>> = Vec::new();
    let mut seps = 0;
    for (i, c) in clauses.iter().enumerate() {
        if i > 0 && shares(&clauses[i - 1], c) {
            slots.push(None);
            seps += 1;
        }
        slots.push(Some(i));
    }
    if seps < 2 {
        slots.push(None);
        seps += 1;
    }
    if seps < 2 {
        slots.insert(0, None);
        seps += 1;
    }
    let s = |k: usize| (num_vars + 1 + k % seps) as i32;
    let mut used: HashSet<usize> = HashSet::new();
    let mut k = 0;
    let mut out = Vec::new();
    for slot in slots {
        match slot {
            Some(i) => {
                used.insert(i);
                out.push(clauses[i].clone());
            }
            None => {
                out.push(vec![s(k), -s(k + 1)]);
                k += 1;
            }
        }
    }
    Formula { num_vars: num_vars + seps, clauses: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_sat;

    fn equisat(f: &Formula) -> Normalized {
        let n = normalize_formula(f).unwrap();
        n.formula.check_normalized().unwrap();
        let a = brute_force_sat(f).unwrap();
        let b = brute_force_sat(&n.formula).unwrap();
        assert_eq!(a.is_some(), b.is_some());
        if let Some(b) = b {
            assert!(f.satisfied_by(&n.to_original(&b)));
        }
        if let Some(a) = a {
            assert!(n.formula.satisfied_by(&n.from_original(&a)));
        }
        n
    }

    #[test]
    fn examples() {
        equisat(&Formula::new(2, vec![vec![1, 2], vec![-1, -2]]).unwrap());
        equisat(&Formula::new(1, vec![vec![1]]).unwrap());
        equisat(&Formula::new(1, vec![vec![1], vec![-1]]).unwrap());
        equisat(&Formula::new(2, vec![vec![1, 2], vec![1], vec![1, -2]]).unwrap());
        assert!(normalize_formula(&Formula::new(2, vec![]).unwrap()).is_err());
        assert!(normalize_formula_with(&Formula::new(2, vec![]).unwrap(), true).is_ok());
        let four = Formula::new(2, vec![vec![1, 2], vec![1], vec![-1], vec![-1, -2]]).unwrap();
        assert!(normalize_formula(&four).is_err());
    }

    #[test]
    fn empty_clause_is_unsat() {
        let n = normalize_formula(&Formula::new(1, vec![vec![1], vec![]]).unwrap()).unwrap();
        assert!(brute_force_sat(&n.formula).unwrap().is_none());
    }

    #[test]
    fn only_tautologies_is_sat() {
        equisat(&Formula::new(2, vec![vec![2, -2], vec![1, -1, 2]]).unwrap());
    }
}
