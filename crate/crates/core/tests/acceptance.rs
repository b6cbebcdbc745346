//! One PASS/FAIL line per acceptance criterion, written straight to stderr so it
//! shows up even when test output is captured.

mod common;

use std::collections::HashSet;
use std::io::Write;
use std::time::Instant;

use pointpart::cycle_partition::{
    check_cycles, matching_crossings, noncrossing_matching, partition_cycles, CyclePartition, Polygon,
};
use pointpart::feasibility::{check_cycle_feasible, check_triangle_feasible, Certificate, PartitionSpec};
use pointpart::oracle::{
    brute_force_clique_partition, brute_force_cycle_partition, brute_force_sat, OracleBudget, OracleOutcome,
};
use pointpart::sat_gadget::{
    audit_gadget, build_gadget, build_partition_from_assignment, extract_assignment, grid_pairs_blocked,
    partial_grid_min_blockers, Formula, PartialGrid,
};
use pointpart::triangle_partition::{partition_triangles, verify_partition};
use pointpart::visibility::{build_pvg, longest_induced_path_atmost, max_collinear};
use pointpart::PointSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{at_bound, random_normalized, random_set, random_set_with_line};

fn report(n: u32, what: &str, pass: bool, detail: &str, started: Instant) {
    let line = format!(
        "{} criterion {n}: {what} [{detail}; {:.1}s]\n",
        if pass { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{line}");
}

fn note(text: &str) {
    let _ = std::io::stderr().write_all(format!("     {text}\n").as_bytes());
}

fn budget() -> OracleBudget {
    OracleBudget { max_points: 512, max_nodes: 20_000_000 }
}

fn as_cycles(polys: Vec<Vec<usize>>, spec: &PartitionSpec) -> CyclePartition {
    CyclePartition { polygons: polys.into_iter().map(|indices| Polygon { indices }).collect(), spec: spec.clone() }
}

#[test]
fn criterion_1_triangle_oracle_equivalence() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut cases, mut bad, mut infeasible) = (0, Vec::new(), 0);
    for i in 0..600 {
        let n = [6, 9, 12][i % 3];
        let ps = if i % 2 == 0 {
            random_set(&mut rng, n, 20)
        } else {
            let line = rng.gen_range(3..=n.min(8));
            random_set_with_line(&mut rng, n, line, 20)
        };
        cases += 1;
        let spec = PartitionSpec::triangles(n / 3).unwrap();
        let verdict = check_triangle_feasible(&ps).unwrap().feasible;
        let oracle = brute_force_cycle_partition(&ps, &spec, budget()).unwrap();
        let agree = match &oracle {
            OracleOutcome::Found(p) => verdict && check_cycles(&ps, &as_cycles(p.clone(), &spec)).is_ok(),
            OracleOutcome::NoSolution => !verdict,
            OracleOutcome::Exhausted => false,
        };
        if !verdict {
            infeasible += 1;
        }
        let built = !verdict || partition_triangles(&ps).is_ok_and(|tp| verify_partition(&ps, &tp));
        if !agree || !built {
            bad.push(ps.to_text().replace('\n', ";"));
        }
    }
    for b in bad.iter().take(3) {
        note(&format!("disagreement: {b}"));
    }
    report(
        1,
        "triangle feasibility agrees with the exhaustive oracle",
        bad.is_empty() && cases >= 500,
        &format!("{cases} sets, {infeasible} infeasible, {} failures", bad.len()),
        t,
    );
}

#[test]
fn criterion_2_general_oracle_equivalence() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let specs = ["4", "5", "6", "3,4", "4,4", "3,5", "3,3,4", "4,5", "3,3,5", "3,4,4", "4,8", "5,7", "6,6", "3,9", "3,3,6"];
    let (mut cases, mut bad, mut infeasible) = (0, Vec::new(), 0);
    for i in 0..600 {
        let spec = PartitionSpec::parse(specs[i % specs.len()]).unwrap();
        let n = spec.total();
        let ps = match i % 4 {
            0 => random_set(&mut rng, n, 3),
            1 => random_set(&mut rng, n, 20),
            2 => at_bound(&mut rng, &spec),
            _ => {
                let line = rng.gen_range(3..=n.min(10));
                random_set_with_line(&mut rng, n, line, 12)
            }
        };
        cases += 1;
        let verdict = check_cycle_feasible(&ps, &spec).unwrap().feasible;
        let oracle = brute_force_cycle_partition(&ps, &spec, budget()).unwrap();
        let agree = match &oracle {
            OracleOutcome::Found(p) => verdict && check_cycles(&ps, &as_cycles(p.clone(), &spec)).is_ok(),
            OracleOutcome::NoSolution => !verdict,
            OracleOutcome::Exhausted => false,
        };
        let built = match partition_cycles(&ps, &spec) {
            Ok(cp) => verdict && check_cycles(&ps, &cp).is_ok(),
            Err(_) => !verdict,
        };
        if !verdict {
            infeasible += 1;
        }
        if !agree || !built {
            bad.push(format!("{spec}: {}", ps.to_text().replace('\n', ";")));
        }
    }
    for b in bad.iter().take(3) {
        note(&format!("disagreement: {b}"));
    }
    report(
        2,
        "general feasibility and construction agree with the exhaustive oracle",
        bad.is_empty() && cases >= 500,
        &format!("{cases} instances, {infeasible} infeasible, {} failures", bad.len()),
        t,
    );
}

#[test]
fn criterion_3_collinear_bound_is_tight() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let specs = ["4", "5", "3,4", "4,4", "3,3,4", "4,5", "3,6", "4,4,4", "5,7", "3,3,3,4"];
    let (mut made, mut bad) = (0, Vec::new());
    while made < 50 {
        let spec = PartitionSpec::parse(specs[made % specs.len()]).unwrap();
        let ps = at_bound(&mut rng, &spec);
        if max_collinear(&ps).0 != spec.collinear_bound() {
            continue;
        }
        made += 1;
        let ok = partition_cycles(&ps, &spec).is_ok_and(|cp| check_cycles(&ps, &cp).is_ok());
        if !ok {
            bad.push(format!("{spec}: {}", ps.to_text().replace('\n', ";")));
        }
    }
    for b in bad.iter().take(3) {
        note(&format!("failed: {b}"));
    }
    report(
        3,
        "sets with exactly the allowed number of collinear points partition",
        bad.is_empty(),
        &format!("{made} instances, {} failures", bad.len()),
        t,
    );
}

#[test]
fn criterion_4_triangle_insufficiency_fixture() {
    let t = Instant::now();
    let spec = PartitionSpec::triangles(2).unwrap();
    let mut found = None;
    'grid: for side in 2..=4i64 {
        let cells: Vec<(i64, i64)> = (0..=side).flat_map(|x| (0..=side).map(move |y| (x, y))).collect();
        let k = cells.len();
        let mut idx = [0usize, 1, 2, 3, 4, 5];
        loop {
            let pts: Vec<(i64, i64)> = idx.iter().map(|&i| cells[i]).collect();
            let ps = PointSet::from_ints(&pts).unwrap();
            if max_collinear(&ps).0 <= 4
                && brute_force_cycle_partition(&ps, &spec, budget()).unwrap() == OracleOutcome::NoSolution
            {
                found = Some(ps);
                break 'grid;
            }
            // next 6-combination of the grid cells
            let mut i = 5;
            while idx[i] == k - 6 + i {
                if i == 0 {
                    continue 'grid;
                }
                i -= 1;
            }
            idx[i] += 1;
            for j in i + 1..6 {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    let Some(ps) = found else {
        report(4, "a 6-point set with few collinear points has no triangle partition", false, "none found", t);
        return;
    };
    let v = check_triangle_feasible(&ps).unwrap();
    let via_independent = matches!(v.certificate, Certificate::IndependentSet(ref s) if s.len() == 3);
    note(&format!("fixture: {}", ps.to_text().replace('\n', ";")));
    report(
        4,
        "a 6-point set with at most 4 collinear points has no triangle partition",
        !v.feasible && via_independent,
        &format!("max collinear {}, certificate {}", max_collinear(&ps).0, v.certificate),
        t,
    );
}

#[test]
fn criterion_5_partial_grid_blockers() {
    let t = Instant::now();
    let (mut incomplete, mut not_minimal, mut checked) = (Vec::new(), 0, 0);
    let mut needed_ok = true;
    for p in 1..=8 {
        for q in 1..=8 {
            checked += 1;
            let (k, g) = partial_grid_min_blockers(p, q);
            assert_eq!(k, g.mid);
            if !grid_pairs_blocked(&g) {
                incomplete.push(format!("{p}x{q}"));
            }
            if k > 0 && grid_pairs_blocked(&PartialGrid { mid: k - 1, ..g }) {
                not_minimal += 1;
            }
            // the row that does block every pair has p+q-1 points and none can go
            let full = PartialGrid { p, q, mid: p + q - 1 };
            needed_ok &= grid_pairs_blocked(&full) && !grid_pairs_blocked(&PartialGrid { mid: p + q - 2, ..full });
        }
    }
    note(&format!(
        "a middle row at x = 0, 1/2, 1, .. blocks every pair exactly when it has p+q-1 points: {}",
        if needed_ok { "confirmed for all p, q <= 8" } else { "NOT confirmed" }
    ));
    report(
        5,
        "floor((p+q)/2) middle points block every top/bottom pair, and each is needed",
        incomplete.is_empty() && not_minimal == 0,
        &format!("{checked} grids, {} incomplete (e.g. {:?}), {not_minimal} not minimal", incomplete.len(), incomplete.first()),
        t,
    );
}

/// Canonical form under variable renaming and sign flips.
fn canonical(f: &Formula) -> Vec<Vec<i32>> {
    let n = f.num_vars;
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        perms = perms
            .iter()
            .flat_map(|p| (0..n).filter(|v| !p.contains(v)).map(|v| [p.clone(), vec![v]].concat()))
            .collect();
    }
    let mut best: Option<Vec<Vec<i32>>> = None;
    for p in &perms {
        for flips in 0..(1u32 << n) {
            let c: Vec<Vec<i32>> = f
                .clauses
                .iter()
                .map(|c| {
                    let mut v: Vec<i32> = c
                        .iter()
                        .map(|&l| {
                            let i = l.unsigned_abs() as usize - 1;
                            let s = if flips >> i & 1 == 1 { -l.signum() } else { l.signum() };
                            s * (p[i] as i32 + 1)
                        })
                        .collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or_default()
}

/// Every normalized formula with at most 3 variables and 3 clauses, one per
/// renaming/sign class.
fn tiny_formulas() -> Vec<Formula> {
    let lits = [1, -1, 2, -2, 3, -3];
    let clauses: Vec<Vec<i32>> =
        (1u32..64).map(|m| (0..6).filter(|i| m >> i & 1 == 1).map(|i| lits[i]).collect()).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in 1..=3u32 {
        for code in 0..clauses.len().pow(m) {
            let mut c = code;
            let cl: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    let s = clauses[c % clauses.len()].clone();
                    c /= clauses.len();
                    s
                })
                .collect();
            let used: HashSet<u32> = cl.iter().flatten().map(|l| l.unsigned_abs()).collect();
            let n = used.len();
            if (1..=n as u32).any(|v| !used.contains(&v)) {
                continue;
            }
            let f = Formula::new(n, cl).unwrap();
            if f.check_normalized().is_ok() && seen.insert((n, canonical(&f))) {
                out.push(f);
            }
        }
    }
    out
}

#[test]
fn criterion_6_gadget_equivalence() {
    let t = Instant::now();
    let mut formulas = tiny_formulas();
    let exhaustive = formulas.len();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    formulas.extend((0..20).map(|_| random_normalized(&mut rng, 3, 3)));
    let (mut bad, mut unsat) = (Vec::new(), 0);
    for f in &formulas {
        let g = match build_gadget(f, 5) {
            Ok(g) => g,
            Err(e) => {
                bad.push(format!("{:?}: {e}", f.clauses));
                continue;
            }
        };
        let sat = brute_force_sat(f).unwrap();
        let oracle = brute_force_clique_partition(&g.points, 5, budget()).unwrap();
        let ok = match (&sat, &oracle) {
            (Some(a), OracleOutcome::Found(groups)) => {
                // the oracle's own partition must read back as a satisfying assignment
                let read_back = extract_assignment(&g, groups).is_ok_and(|b| f.satisfied_by(&b));
                let round_trip = build_partition_from_assignment(&g, a)
                    .and_then(|p| extract_assignment(&g, &p))
                    .is_ok_and(|b| f.satisfied_by(&b));
                read_back && round_trip
            }
            (None, OracleOutcome::NoSolution) => {
                unsat += 1;
                true
            }
            _ => false,
        };
        if !ok {
            bad.push(format!("{:?}: sat {} oracle {:?}", f.clauses, sat.is_some(), oracle.is_found()));
        }
    }
    for b in bad.iter().take(3) {
        note(&format!("failed: {b}"));
    }
    report(
        6,
        "a gadget has a K5 partition exactly when its formula is satisfiable",
        bad.is_empty(),
        &format!("{exhaustive} exhaustive + 20 random formulas, {unsat} unsatisfiable, {} failures", bad.len()),
        t,
    );
}

#[test]
fn criterion_7_gadget_structure() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut invisibility, mut counts, mut divisible, mut bits, mut audits) = (0, 0, 0, 0, 0);
    let mut worst = (0u64, 0u64);
    let mut built = 0;
    for _ in 0..20 {
        let f = random_normalized(&mut rng, 6, 6);
        let Ok(g) = build_gadget(&f, 5) else { continue };
        built += 1;
        let r = audit_gadget(&g);
        invisibility += r.clause_extra as usize;
        counts += r.counts_match_formulas as usize;
        divisible += r.size_divisible as usize;
        bits += (r.max_bits <= r.bit_bound) as usize;
        audits += r.passed() as usize;
        if r.max_bits > worst.0 {
            worst = (r.max_bits, r.bit_bound);
        }
        if !r.counts_match_formulas && counts == 0 && built == 1 {
            note(&format!(
                "{} clauses: built v={} b_n={} e={} b={} c={}; closed forms v={} b_n={} e={} b={} c={}",
                f.num_clauses(),
                g.counts.v,
                g.counts.b_n,
                g.counts.e,
                g.counts.b,
                g.counts.c,
                g.params.v,
                g.params.b_n,
                g.params.e,
                g.params.b,
                g.params.c
            ));
        }
    }
    note(&format!(
        "clause/extra invisibility {invisibility}/20, closed-form role counts {counts}/20, size divisible by 5 {divisible}/20, bits within bound {bits}/20 (worst {} of {}), full audit {audits}/20",
        worst.0, worst.1
    ));
    report(
        7,
        "gadget audit: invisibility, closed-form role counts, size mod 5, coordinate bits",
        built == 20 && invisibility == 20 && counts == 20 && divisible == 20 && bits == 20,
        &format!("{built} gadgets built, {counts}/20 with closed-form role counts"),
        t,
    );
}

#[test]
fn criterion_8_noncrossing_matching() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = 0;
    for i in 0..1000 {
        let n = 2 * rng.gen_range(1..=20);
        let ps = if i % 2 == 0 { random_set(&mut rng, n, 30) } else { random_set(&mut rng, n, 6) };
        let ok = noncrossing_matching(&ps).is_ok_and(|m| {
            let mut seen: Vec<usize> = m.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            seen.sort_unstable();
            seen == (0..n).collect::<Vec<_>>() && matching_crossings(&ps, &m) == 0
        });
        bad += !ok as usize;
    }
    report(8, "perfect matchings have no crossing segments", bad == 0, &format!("1000 sets, {bad} failures"), t);
}

#[test]
fn criterion_9_induced_paths() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let specs = ["4", "5", "6", "7", "8", "9", "10", "3,4", "4,4", "3,5", "4,5", "3,6", "3,3,4", "5,5", "4,6", "3,7"];
    let (mut cases, mut below, mut mismatch, mut longer) = (0, 0, Vec::new(), 0);
    for i in 0..400 {
        let spec = PartitionSpec::parse(specs[i % specs.len()]).unwrap();
        let n = spec.total();
        let ps = match i % 3 {
            0 => random_set(&mut rng, n, 3),
            1 => random_set(&mut rng, n, 8),
            _ => {
                let line = rng.gen_range(3..=n);
                random_set_with_line(&mut rng, n, line, 10)
            }
        };
        cases += 1;
        let g = build_pvg(&ps);
        let (lip, _) = longest_induced_path_atmost(&g, n).unwrap();
        let mc = max_collinear(&ps).0;
        below += (lip < mc) as usize;
        longer += (lip > mc) as usize;
        let verdict = check_cycle_feasible(&ps, &spec).unwrap().feasible;
        if verdict != (lip < spec.collinear_bound() + 1) {
            mismatch.push(format!("{spec}: path {lip}, collinear {mc}: {}", ps.to_text().replace('\n', ";")));
        }
    }
    for m in mismatch.iter().take(3) {
        note(&format!("mismatch: {m}"));
    }
    report(
        9,
        "longest induced path bounds collinearity and decides feasibility",
        below == 0 && mismatch.is_empty(),
        &format!(
            "{cases} sets, {below} with path shorter than the longest line, {longer} with a longer path, {} verdict mismatches",
            mismatch.len()
        ),
        t,
    );
}
