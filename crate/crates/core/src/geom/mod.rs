//! Planar convex-body engine: vectors, polygons, and support oracles.

mod body;
mod polygon;
mod vec2;

pub use body::Body;
pub use polygon::{Polygon, SurfaceMeasure, SNAP};
pub use vec2::Vec2;
