//! Shared fixtures for the criterion benches.

use lpbm_core::geom::{Body, Polygon, Vec2};
use lpbm_core::sample::{instance_rng, random_polygon, DEFAULT_SEED};

pub fn square() -> Polygon {
    Polygon::from_vertices(&[
        Vec2::new(1.0, -1.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(-1.0, 1.0),
        Vec2::new(-1.0, -1.0),
    ])
    .unwrap()
}

pub fn polygons(count: u64) -> Vec<Polygon> {
    (0..count)
        .map(|i| random_polygon(&mut instance_rng(DEFAULT_SEED, i)))
        .collect()
}

pub fn rounded_square(p: f64) -> Body {
    Body::lp_combination(Body::Polygon(square()), Body::unit_ball(), p).unwrap()
}
