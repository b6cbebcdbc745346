mod common;

use pointpart::oracle::brute_force_sat;
use pointpart::sat_gadget::{
    audit_gadget, build_gadget, build_partition_from_assignment, extend_gadget, extract_assignment, Formula, Role,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn larger_k_gadgets_audit() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..4 {
        let f = common::random_normalized(&mut rng, 4, 4);
        let base = build_gadget(&f, 5).unwrap();
        for k in [6, 7, 9] {
            let g = extend_gadget(&base, k).unwrap();
            let report = audit_gadget(&g);
            assert!(report.passed(), "k={k}\n{report}");
            assert_eq!(g.len() % k, 0);
        }
    }
}

#[test]
fn assignment_survives_the_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 5 {
        let f = common::random_normalized(&mut rng, 5, 5);
        let Some(a) = brute_force_sat(&f).unwrap() else { continue };
        for k in [5, 6] {
            let g = build_gadget(&f, k).unwrap();
            let groups = build_partition_from_assignment(&g, &a).unwrap();
            let back = extract_assignment(&g, &groups).unwrap();
            assert!(f.clauses.iter().all(|c| c.iter().any(|&l| back[l.unsigned_abs() as usize - 1] == (l > 0))));
        }
        checked += 1;
    }
}

#[test]
fn roles_are_listed_per_point() {
    let f = Formula::new(4, vec![vec![1, 2], vec![3, -4], vec![-1, -2], vec![-3, 4]]).unwrap();
    let g = build_gadget(&f, 5).unwrap();
    let map = g.role_map();
    assert_eq!(map.lines().count(), g.len());
    assert_eq!(g.roles.iter().filter(|&&r| r == Role::Clause).count(), 4);
    assert!(map.lines().next().unwrap().starts_with("0 clause"));
}

#[test]
fn small_k_is_rejected() {
    let f = Formula::new(4, vec![vec![1, 2], vec![3, -4], vec![-1, -2], vec![-3, 4]]).unwrap();
    assert!(build_gadget(&f, 4).is_err());
    let g = build_gadget(&f, 5).unwrap();
    assert!(extend_gadget(&g, 5).is_err());
}
