//! 3-occurrence CNF formulas and their compilation into K5-partition point gadgets.

mod build;
mod grid;
mod normalize;
mod partition;

pub use build::{audit_gadget, bit_bound, build_gadget, extend_gadget, gadget_params, AuditReport, Gadget, GadgetParams, Role};
pub use grid::{grid_pairs_blocked, partial_grid_min_blockers, PartialGrid};
pub use normalize::{normalize_formula, normalize_formula_with, Normalized};
pub use partition::{build_partition_from_assignment, extract_assignment};

use crate::error::{Error, Result};

/// CNF over variables `1..=num_vars`; literal `v` is `x_v`, `-v` its negation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Formula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Formula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(Error::Formula(format!("literal {l} out of range 1..={num_vars}")));
                }
            }
        }
        Ok(Formula { num_vars, clauses })
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// `(positive, negative)` occurrence counts per variable, index 0 unused.
    pub fn occurrences(&self) -> Vec<(usize, usize)> {
        let mut occ = vec![(0, 0); self.num_vars + 1];
        for c in &self.clauses {
            for &l in c {
                let o = &mut occ[l.unsigned_abs() as usize];
                if l > 0 {
                    o.0 += 1;
                } else {
                    o.1 += 1;
                }
            }
        }
        occ
    }

    /// Variables occurring exactly twice and exactly three times.
    pub fn occurrence_split(&self) -> (usize, usize) {
        let occ = self.occurrences();
        let n1 = occ.iter().skip(1).filter(|o| o.0 + o.1 == 2).count();
        let n2 = occ.iter().skip(1).filter(|o| o.0 + o.1 == 3).count();
        (n1, n2)
    }

    /// `assignment[v - 1]` is the value of `x_v`.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = assignment.get(l.unsigned_abs() as usize - 1).copied().unwrap_or(false);
                v == (l > 0)
            })
        })
    }

    /// Checks the shape the gadget needs: every variable occurs two or three times
    /// with both signs, and neighbouring clauses share no variable.
    pub fn check_normalized(&self) -> Result<()> {
        if self.clauses.is_empty() {
            return Err(Error::Formula("no clauses".into()));
        }
        for (v, &(p, n)) in self.occurrences().iter().enumerate().skip(1) {
            if p + n > 3 {
                return Err(Error::Formula(format!("x{v} occurs {} times", p + n)));
            }
            if p == 0 || n == 0 {
                return Err(Error::Formula(format!("x{v} does not occur with both signs")));
            }
        }
        for (i, c) in self.clauses.iter().enumerate() {
            let mut vars: Vec<u32> = c.iter().map(|l| l.unsigned_abs()).collect();
            vars.sort_unstable();
            let mut lits = c.clone();
            lits.sort_unstable();
            lits.dedup();
            if lits.len() != c.len() {
                return Err(Error::Formula(format!("clause {} repeats a literal", i + 1)));
            }
            if i + 1 < self.clauses.len() {
                if let Some(l) = self.clauses[i + 1].iter().find(|l| vars.contains(&l.unsigned_abs())) {
                    return Err(Error::Formula(format!(
                        "clauses {} and {} share x{}",
                        i + 1,
                        i + 2,
                        l.unsigned_abs()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                s.push_str(&format!("{l} "));
            }
            s.push_str("0\n");
        }
        s
    }
}

/// Standard DIMACS CNF; `c` lines are comments and clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<Formula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur = Vec::new();
    let mut last_line = 0;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        last_line = no + 1;
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: no + 1, msg };
        if line.starts_with('p') {
            let t: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || t.len() != 4 || t[1] != "cnf" {
                return Err(err("expected `p cnf <vars> <clauses>`".into()));
            }
            let v = t[2].parse().map_err(|_| err(format!("bad variable count {:?}", t[2])))?;
            let c = t[3].parse().map_err(|_| err(format!("bad clause count {:?}", t[3])))?;
            header = Some((v, c));
            continue;
        }
        let Some((nv, _)) = header else {
            return Err(err("clause before the `p cnf` header".into()));
        };
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| err(format!("bad literal {tok:?}")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else if l.unsigned_abs() as usize > nv {
                return Err(err(format!("literal {l} exceeds the declared {nv} variables")));
            } else {
                cur.push(l);
            }
        }
    }
    let Some((nv, nc)) = header else {
        return Err(Error::Parse { line: last_line.max(1), msg: "missing `p cnf` header".into() });
    };
    if !cur.is_empty() {
        clauses.push(cur);
    }
    if clauses.len() != nc {
        return Err(Error::Parse {
            line: last_line.max(1),
            msg: format!("header declares {nc} clauses, found {}", clauses.len()),
        });
    }
    Formula::new(nv, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let f = parse_dimacs("c demo\np cnf 3 2\n1 -2 0\n2 3\n -1 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2], vec![2, 3, -1]]);
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
        assert!(matches!(parse_dimacs("p cnf 1 1\n2 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_dimacs("1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
    }

    #[test]
    fn normalized_shape() {
        let f = Formula::new(2, vec![vec![1, 2], vec![-1, -2]]).unwrap();
        assert!(f.check_normalized().is_err());
        let g = Formula::new(1, vec![vec![1, -1]]).unwrap();
        assert!(g.check_normalized().is_ok());
        assert_eq!(g.occurrence_split(), (1, 0));
        assert!(g.satisfied_by(&[false]));
    }
}
