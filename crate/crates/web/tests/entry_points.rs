use pointpart_web::{check_text, gadget_svg_text, partition_svg_text};

const SEVEN: &str = "0 0\n4 0\n4 3\n0 3\n10 0\n12 1\n11 5/2\n";

#[test]
fn check_reports_certificates() {
    assert_eq!(check_text(SEVEN, "3,4").unwrap(), "feasible");
    let line = "0 0\n1 0\n2 0\n3 0\n4 0\n2 3\n";
    assert!(check_text(line, "triangles").unwrap().starts_with("infeasible: "));
    assert!(check_text("0 0\n1 x\n", "3").is_err());
}

#[test]
fn partition_draws_one_polygon_per_group() {
    let svg = partition_svg_text(SEVEN, "3,4").unwrap();
    assert_eq!(svg.matches("<polygon").count(), 2);
    assert_eq!(svg.matches("<circle").count(), 7);
}

#[test]
fn gadget_is_role_coloured() {
    let svg = gadget_svg_text("p cnf 2 2\n1 -1 0\n2 -2 0\n", 5).unwrap();
    assert!(svg.contains("fill=\"red\""));
    assert!(svg.contains("fill=\"green\""));
    assert!(gadget_svg_text("p cnf 1 1\n1 0\n", 4).is_err());
}
