//! Three-row partial grids: top and bottom rows at consecutive integers, a middle
//! row at consecutive half-integers.

use crate::geom_core::{frac, int, Point, PointSet};
use crate::visibility::build_pvg;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartialGrid {
    /// Points on y = 1 at x = 0, 1, ..
    pub p: usize,
    /// Points on y = -1 at x = 0, 1, ..
    pub q: usize,
    /// Points on y = 0 at x = 0, 1/2, 1, ..
    pub mid: usize,
}

impl PartialGrid {
    /// Top row first, then bottom row, then the middle row.
    pub fn point_set(&self) -> PointSet {
        let mut pts = Vec::with_capacity(self.p + self.q + self.mid);
        pts.extend((0..self.p).map(|i| Point::new(int(i as i64), int(1))));
        pts.extend((0..self.q).map(|i| Point::new(int(i as i64), int(-1))));
        pts.extend((0..self.mid).map(|i| Point::new(frac(i as i64, 2), int(0))));
        PointSet::new(pts).expect("grid points are distinct")
    }
}

/// Every top point is hidden from every bottom point.
pub fn grid_pairs_blocked(g: &PartialGrid) -> bool {
    let ps = g.point_set();
    let vis = build_pvg(&ps);
    (0..g.p).all(|t| (0..g.q).all(|b| !vis.visible(t, g.p + b)))
}

/// The middle-row size ⌊(p+q)/2⌋ together with that grid.
pub fn partial_grid_min_blockers(p: usize, q: usize) -> (usize, PartialGrid) {
    let mid = (p + q) / 2;
    (mid, PartialGrid { p, q, mid })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grids() {
        let (k, g) = partial_grid_min_blockers(1, 1);
        assert_eq!(k, 1);
        assert!(grid_pairs_blocked(&g));
        assert_eq!(partial_grid_min_blockers(2, 2).0, 2);
        // the segment from (1,1) to (1,-1) crosses the middle row at x = 1
        assert!(!grid_pairs_blocked(&PartialGrid { p: 2, q: 2, mid: 2 }));
        assert!(grid_pairs_blocked(&PartialGrid { p: 2, q: 2, mid: 3 }));
    }
}
