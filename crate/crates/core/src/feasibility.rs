//! Partition specs and the feasibility tests with their certificates.

use std::fmt;

use crate::error::{Error, Result};
use crate::geom_core::PointSet;
use crate::visibility::{build_pvg, line_groups, max_collinear_in, max_independent_structured_with, LineGroup};

/// Multiset of requested polygon sizes, kept sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionSpec {
    sizes: Vec<usize>,
}

impl PartitionSpec {
    pub fn new(mut sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Spec("no sizes given".into()));
        }
        if let Some(s) = sizes.iter().find(|&&s| s < 3) {
            return Err(Error::Spec(format!("size {s} is below 3")));
        }
        sizes.sort_unstable();
        Ok(PartitionSpec { sizes })
    }

    pub fn triangles(n: usize) -> Result<Self> {
        PartitionSpec::new(vec![3; n])
    }

    /// `3,3,4`; whitespace around entries is ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Spec(format!("not a size: {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        PartitionSpec::new(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn all_triangles(&self) -> bool {
        self.sizes.iter().all(|&s| s == 3)
    }

    /// The most collinear points a partition of this shape can absorb.
    pub fn collinear_bound(&self) -> usize {
        self.total() - self.len()
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Pairwise invisible points, one more than the number of triangles.
    IndependentSet(Vec<usize>),
    /// A line carrying more points than the requested sizes allow.
    Collinear(LineGroup),
    None,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        match self {
            Certificate::IndependentSet(v) => write!(f, "independent {}", list(v)),
            Certificate::Collinear(g) => write!(f, "collinear {}", list(&g.member_indices)),
            Certificate::None => write!(f, "none"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub certificate: Certificate,
}

impl FeasibilityVerdict {
    fn yes() -> Self {
        FeasibilityVerdict { feasible: true, certificate: Certificate::None }
    }
}

pub fn check_triangle_feasible(ps: &PointSet) -> Result<FeasibilityVerdict> {
    if ps.is_empty() || ps.len() % 3 != 0 {
        return Err(Error::Precondition(format!("{} points is not a positive multiple of 3", ps.len())));
    }
    let n = ps.len() / 3;
    let g = build_pvg(ps);
    let groups = line_groups(ps);
    let (size, witness) = max_independent_structured_with(ps, &g, &groups);
    if size <= n {
        return Ok(FeasibilityVerdict::yes());
    }
    Ok(FeasibilityVerdict {
        feasible: false,
        certificate: Certificate::IndependentSet(witness.into_iter().take(n + 1).collect()),
    })
}

pub fn check_cycle_feasible(ps: &PointSet, spec: &PartitionSpec) -> Result<FeasibilityVerdict> {
    if ps.len() != spec.total() {
        return Err(Error::SizeMismatch { points: ps.len(), total: spec.total() });
    }
    if spec.all_triangles() {
        return check_triangle_feasible(ps);
    }
    let (count, group) = max_collinear_in(&line_groups(ps), ps.len());
    match group {
        Some(g) if count > spec.collinear_bound() => {
            Ok(FeasibilityVerdict { feasible: false, certificate: Certificate::Collinear(g) })
        }
        _ => Ok(FeasibilityVerdict::yes()),
    }
}

/// Re-checks an infeasibility certificate from scratch.
pub fn certificate_holds(ps: &PointSet, spec: &PartitionSpec, cert: &Certificate) -> bool {
    match cert {
        Certificate::None => false,
        Certificate::IndependentSet(v) => {
            let g = build_pvg(ps);
            spec.all_triangles()
                && v.len() == spec.len() + 1
                && v.iter().all(|&i| i < ps.len())
                && v.iter().enumerate().all(|(a, &i)| v[a + 1..].iter().all(|&j| i != j && !g.visible(i, j)))
        }
        Certificate::Collinear(g) => {
            g.len() > spec.collinear_bound()
                && g.member_indices.iter().all(|&i| i < ps.len())
                && crate::geom_core::all_collinear(ps.points(), &g.member_indices)
                && {
                    let mut m = g.member_indices.clone();
                    m.sort_unstable();
                    m.dedup();
                    m.len() == g.len()
                }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_parsing() {
        let s = PartitionSpec::parse("4, 3,5").unwrap();
        assert_eq!(s.sizes(), &[3, 4, 5]);
        assert_eq!(s.to_string(), "3,4,5");
        assert_eq!(s.collinear_bound(), 9);
        assert!(PartitionSpec::parse("3,2").is_err());
        assert!(PartitionSpec::parse("").is_err());
        assert!(PartitionSpec::parse("3,x").is_err());
    }

    #[test]
    fn triangle_verdicts() {
        let three = PointSet::from_ints(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        assert!(check_triangle_feasible(&three).unwrap().feasible);
        let five_on_line = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (2, 3)]).unwrap();
        let v = check_triangle_feasible(&five_on_line).unwrap();
        assert!(!v.feasible);
        assert_eq!(v.certificate, Certificate::IndependentSet(vec![0, 2, 4]));
        let spec = PartitionSpec::triangles(2).unwrap();
        assert!(certificate_holds(&five_on_line, &spec, &v.certificate));
        let two = PointSet::from_ints(&[(0, 0), (2, 0), (1, 2), (10, 0), (12, 0), (11, 2)]).unwrap();
        assert!(check_triangle_feasible(&two).unwrap().feasible);
        assert!(check_triangle_feasible(&PointSet::from_ints(&[(0, 0), (1, 1)]).unwrap()).is_err());
    }

    #[test]
    fn cycle_verdicts() {
        let spec = PartitionSpec::parse("3,4").unwrap();
        let six = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (2, 2)]).unwrap();
        let v = check_cycle_feasible(&six, &spec).unwrap();
        assert!(!v.feasible);
        assert!(certificate_holds(&six, &spec, &v.certificate));
        let five = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (2, 2), (1, -3)]).unwrap();
        assert!(check_cycle_feasible(&five, &spec).unwrap().feasible);
        let quad = PointSet::from_ints(&[(0, 0), (3, 0), (3, 2), (0, 2)]).unwrap();
        assert!(check_cycle_feasible(&quad, &PartitionSpec::parse("4").unwrap()).unwrap().feasible);
        assert!(matches!(check_cycle_feasible(&quad, &spec), Err(Error::SizeMismatch { .. })));
    }
}
