//! Benchmark fixtures.

use crossratio_core::fgeom::{enumerate_points, PointSets};
use crossratio_core::gram::GramData;

pub fn points() -> PointSets {
    enumerate_points()
}

/// The 306×306 Gram matrix, built once outside the timed loop.
pub fn gram_306() -> Vec<Vec<i64>> {
    GramData::new().expect("root data").matrix_306()
}
