#![allow(dead_code)]

use pointpart::feasibility::PartitionSpec;
use pointpart::sat_gadget::Formula;
use pointpart::PointSet;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `n` distinct integer points in `[0, range]²`.
pub fn random_set(rng: &mut ChaCha8Rng, n: usize, range: i64) -> PointSet {
    let mut v: Vec<(i64, i64)> = Vec::new();
    while v.len() < n {
        let p = (rng.gen_range(0..=range), rng.gen_range(0..=range));
        if !v.contains(&p) {
            v.push(p);
        }
    }
    PointSet::from_ints(&v).unwrap()
}

/// Like [`random_set`] but with `line` of the points forced onto one lattice line.
pub fn random_set_with_line(rng: &mut ChaCha8Rng, n: usize, line: usize, range: i64) -> PointSet {
    let dirs = [(1i64, 0i64), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2)];
    loop {
        let (dx, dy) = dirs[rng.gen_range(0..dirs.len())];
        let start = (rng.gen_range(0..=range), rng.gen_range(0..=range));
        let mut v: Vec<(i64, i64)> = Vec::new();
        let mut t = 0;
        while v.len() < line {
            let p = (start.0 + t * dx, start.1 + t * dy);
            if p.0 < 0 || p.0 > range || p.1 < 0 || p.1 > range {
                break;
            }
            if rng.gen_bool(0.7) {
                v.push(p);
            }
            t += 1;
        }
        if v.len() < line {
            continue;
        }
        while v.len() < n {
            let p = (rng.gen_range(0..=range), rng.gen_range(0..=range));
            if !v.contains(&p) {
                v.push(p);
            }
        }
        v.shuffle(rng);
        return PointSet::from_ints(&v).unwrap();
    }
}

/// Exactly `spec.collinear_bound()` points on one line, the rest off it.
pub fn at_bound(rng: &mut ChaCha8Rng, spec: &PartitionSpec) -> PointSet {
    let n = spec.total();
    let x = spec.collinear_bound();
    let (dx, dy) = [(1i64, 0i64), (1, 1), (2, 1), (0, 1)][rng.gen_range(0..4)];
    let mut v: Vec<(i64, i64)> = (0..x as i64).map(|t| (t * dx, t * dy)).collect();
    while v.len() < n {
        let p = (rng.gen_range(-4..=12), rng.gen_range(-6..=6));
        if p.0 * dy == p.1 * dx || v.contains(&p) {
            continue;
        }
        v.push(p);
    }
    v.shuffle(rng);
    PointSet::from_ints(&v).unwrap()
}

/// A formula passing `check_normalized` with at most the given sizes.
pub fn random_normalized(rng: &mut ChaCha8Rng, max_vars: usize, max_clauses: usize) -> Formula {
    loop {
        let n = rng.gen_range(1..=max_vars);
        let m = rng.gen_range(1..=max_clauses);
        let mut clauses: Vec<Vec<i32>> = vec![Vec::new(); m];
        let mut ok = true;
        for v in 1..=n as i32 {
            let mut lits = vec![v, -v];
            if rng.gen_bool(0.5) {
                lits.push(if rng.gen_bool(0.5) { v } else { -v });
            }
            for l in lits {
                let c = rng.gen_range(0..m);
                if clauses[c].contains(&l) {
                    ok = false;
                }
                clauses[c].push(l);
            }
        }
        if !ok || clauses.iter().any(|c| c.is_empty()) {
            continue;
        }
        let f = Formula::new(n, clauses).unwrap();
        if f.check_normalized().is_ok() {
            return f;
        }
    }
}
