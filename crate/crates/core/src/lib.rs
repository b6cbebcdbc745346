//! Disjoint cycle partitions of planar point sets under exact rational arithmetic,
//! together with the SAT to K5-partition point gadget.

pub mod cycle_partition;
pub mod error;
pub mod feasibility;
pub mod geom_core;
pub mod oracle;
pub mod sat_gadget;
pub mod svg;
pub mod triangle_partition;
pub mod visibility;

pub use error::{Error, Result};
pub use geom_core::{Point, PointSet, Rational};
