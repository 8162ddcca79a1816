//! Deterministic instance generators for the verification suites.
//!
//! Every suite derives a per-instance ChaCha stream from `(base_seed, index)`
//! via splitmix64, so instances are independent of sharding and iteration
//! order, and identical seeds reproduce identical suites byte for byte.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geom::{Polygon, Vec2};
use crate::jensen::DiscreteDistribution;

/// Default base seed for reproducible runs ("LPBM" in ASCII).
pub const DEFAULT_SEED: u64 = 0x4C50_424D;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed fed to the stream of instance `index` under `base_seed`; recorded in
/// suite reports so any single row can be rerun in isolation.
pub fn instance_seed(base_seed: u64, index: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(index))
}

/// Per-instance generator: instance `index` under `base_seed`.
pub fn instance_rng(base_seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(instance_seed(base_seed, index))
}

/// Random strictly convex polygon with the origin interior: sorted uniform
/// angles, radii in `[0.2, 1]`, rejected unless the points are exactly the
/// vertices of their convex hull and the polygon validates.
pub fn random_polygon<R: Rng>(rng: &mut R) -> Polygon {
    for _ in 0..100_000 {
        let k = rng.random_range(3..=10);
        let mut angles: Vec<f64> = (0..k)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pts: Vec<Vec2> = angles
            .iter()
            .map(|&theta| Vec2::unit(theta) * rng.random_range(0.2..=1.0))
            .collect();
        if let Ok(poly) = Polygon::from_vertices(&pts) {
            if poly.edge_count() == k {
                return poly;
            }
        }
    }
    unreachable!("polygon rejection sampling failed to terminate");
}

pub fn random_polygon_pair<R: Rng>(rng: &mut R) -> (Polygon, Polygon) {
    (random_polygon(rng), random_polygon(rng))
}

/// Random finite probability space with a nonnegative function on it.
/// Values mix light tails (uniform, exponential) with heavy tails
/// (lognormal, Pareto); with `allow_zeros`, roughly 15% of atoms carry a
/// zero value.
pub fn random_distribution<R: Rng>(
    rng: &mut R,
    min_atoms: usize,
    max_atoms: usize,
    allow_zeros: bool,
) -> DiscreteDistribution {
    let k = rng.random_range(min_atoms..=max_atoms);
    let mut weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut values: Vec<f64> = (0..k)
        .map(|_| {
            if allow_zeros && rng.random_range(0.0..1.0) < 0.15 {
                return 0.0;
            }
            match rng.random_range(0u8..4) {
                0 => rng.random_range(0.01..2.0),
                1 => -rng.random_range(1e-12f64..1.0).ln(),
                2 => {
                    let z: f64 = rng.sample(StandardNormal);
                    (1.5 * z).exp()
                }
                _ => rng.random_range(1e-9f64..1.0).powf(-1.2),
            }
        })
        .collect();
    if values.iter().all(|&v| v == 0.0) {
        values[k - 1] = 1.0;
    }
    DiscreteDistribution::new(weights, values).expect("generated distribution is valid")
}
