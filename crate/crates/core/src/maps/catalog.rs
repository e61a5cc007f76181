//! Built-in maps used by the examples, the CLI and the acceptance suite.

use super::{EpsilonProfile, MapError, MapSpec, ScalarProfile, DEFAULT_GRID, DEFAULT_SAFETY};
use crate::domain::ConvexDomain;

pub const DISK_CENTER: [f64; 2] = [0.6, 0.8];
pub const DISK_RADIUS: f64 = 0.3;
pub const CLAMP_BOX: [(f64, f64); 2] = [(0.2, 0.8), (-0.5, 0.5)];

/// Triangle map with `ε₀` calibrated at the default safety factor and grid.
pub fn appendix_a(alpha: f64) -> Result<MapSpec, MapError> {
    MapSpec::appendix_a(EpsilonProfile::calibrated(alpha, DEFAULT_SAFETY, DEFAULT_GRID)?)
}

/// Graph projection with `g(x) = 0.3 + 0.4|x|`.
pub fn appendix_b() -> Result<MapSpec, MapError> {
    MapSpec::appendix_b(ScalarProfile::default())
}

/// Projection onto the disk of centre (0.6, 0.8) and radius 0.3, on `[-1, 1]²`.
pub fn disk_projection() -> Result<MapSpec, MapError> {
    let target = ConvexDomain::ball(DISK_CENTER, DISK_RADIUS)?;
    Ok(MapSpec::euclidean_projection(target, ConvexDomain::cube(2, 1.0)?)?.with_name("disk_projection"))
}

/// Clamp to `[0.2, 0.8] × [-0.5, 0.5]`, on `[-1, 1]²`.
pub fn coord_clamp() -> Result<MapSpec, MapError> {
    MapSpec::coord_clamp(CLAMP_BOX.to_vec(), ConvexDomain::cube(2, 1.0)?)
}

/// Every built-in map, in a fixed order.
pub fn builtins() -> Result<Vec<MapSpec>, MapError> {
    Ok(vec![appendix_a(0.5)?, appendix_b()?, disk_projection()?, coord_clamp()?])
}
