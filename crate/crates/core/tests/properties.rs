use pointpart::feasibility::{certificate_holds, check_triangle_feasible, PartitionSpec};
use pointpart::geom_core::{convex_hull, orientation, Orientation};
use pointpart::oracle::{brute_force_sat, naive_visibility};
use pointpart::sat_gadget::{normalize_formula, Formula};
use pointpart::triangle_partition::{partition_triangles, verify_partition};
use pointpart::visibility::build_pvg;
use pointpart::PointSet;
use proptest::prelude::*;

fn points(max: usize, range: i64) -> impl Strategy<Value = PointSet> {
    prop::collection::btree_set((0..=range, 0..=range), 1..=max)
        .prop_map(|s| PointSet::from_ints(&s.into_iter().collect::<Vec<_>>()).unwrap())
}

fn satisfies(f: &Formula, a: &[bool]) -> bool {
    f.clauses.iter().all(|c| c.iter().any(|&l| a[l.unsigned_abs() as usize - 1] == (l > 0)))
}

/// Clauses over at most 4 variables, each variable used at most 3 times.
fn small_cnf() -> impl Strategy<Value = Formula> {
    prop::collection::vec(prop::collection::vec((1..=4i32, any::<bool>()), 1..=3), 1..=5).prop_filter_map(
        "too many occurrences",
        |cs| {
            let clauses: Vec<Vec<i32>> =
                cs.into_iter().map(|c| c.into_iter().map(|(v, s)| if s { v } else { -v }).collect()).collect();
            let mut count = [0; 5];
            for l in clauses.iter().flatten() {
                count[l.unsigned_abs() as usize] += 1;
            }
            (count.iter().all(|&c| c <= 3)).then(|| Formula::new(4, clauses).unwrap())
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pvg_matches_naive(ps in points(9, 4)) {
        let g = build_pvg(&ps);
        let naive = naive_visibility(&ps);
        for i in 0..ps.len() {
            for j in 0..ps.len() {
                if i != j {
                    prop_assert_eq!(g.visible(i, j), naive[i][j], "pair {} {}", i, j);
                }
            }
        }
    }

    #[test]
    fn hull_encloses_everything(ps in points(12, 6)) {
        let h = convex_hull(&ps).unwrap();
        let b = &h.boundary_indices;
        if !h.is_degenerate() {
            for k in 0..b.len() {
                let (u, v) = (ps.get(b[k]), ps.get(b[(k + 1) % b.len()]));
                for p in ps.points() {
                    prop_assert_ne!(orientation(u, v, p), Orientation::Cw);
                }
            }
        }
    }

    #[test]
    fn text_round_trip(ps in points(10, 20)) {
        prop_assert_eq!(PointSet::parse(&ps.to_text()).unwrap(), ps);
    }

    #[test]
    fn triangles_or_certificate(ps in points(9, 3).prop_filter("multiple of 3", |p| p.len() % 3 == 0)) {
        let v = check_triangle_feasible(&ps).unwrap();
        if v.feasible {
            let tp = partition_triangles(&ps).unwrap();
            prop_assert!(verify_partition(&ps, &tp));
        } else {
            let spec = PartitionSpec::triangles(ps.len() / 3).unwrap();
            prop_assert!(certificate_holds(&ps, &spec, &v.certificate));
        }
    }

    #[test]
    fn normalisation_preserves_satisfiability(f in small_cnf()) {
        let n = normalize_formula(&f).unwrap();
        prop_assert!(n.formula.check_normalized().is_ok());
        let before = brute_force_sat(&f).unwrap();
        let after = brute_force_sat(&n.formula).unwrap();
        prop_assert_eq!(before.is_some(), after.is_some());
        if let Some(a) = after {
            prop_assert!(satisfies(&f, &n.to_original(&a)));
        }
    }
}
