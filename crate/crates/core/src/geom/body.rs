//! Convex bodies presented as support-function oracles.
//!
//! A [`Body`] evaluates `u -> h(u)` for unit directions and is closed under
//! dilation and the Firey `L_p` combination `(h_A^p + h_B^p)^(1/p)`, `p >= 1`.
//! Every constructor keeps the origin strictly interior, so `h > 0`
//! everywhere. Bodies that are not polygons are snapshotted to circumscribed
//! polygons by [`Body::support_polytope`].

use serde::{Deserialize, Serialize};

use super::polygon::{clip_halfplane, Polygon};
use super::vec2::Vec2;
use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "BodyRepr", into = "BodyRepr")]
pub enum Body {
    Polygon(Polygon),
    Ball {
        center: Vec2,
        radius: f64,
    },
    Dilate {
        lambda: f64,
        inner: Box<Body>,
    },
    LpSum {
        p: f64,
        left: Box<Body>,
        right: Box<Body>,
    },
}

/// Wire format: tagged by `type`, with polygon vertices round-tripping
/// bit-identically through JSON.
#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum BodyRepr {
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Ball {
        center: [f64; 2],
        radius: f64,
    },
    Dilate {
        lambda: f64,
        body: Box<BodyRepr>,
    },
    LpSum {
        p: f64,
        left: Box<BodyRepr>,
        right: Box<BodyRepr>,
    },
}

impl TryFrom<BodyRepr> for Body {
    type Error = Error;
    fn try_from(repr: BodyRepr) -> Result<Body> {
        match repr {
            BodyRepr::Polygon { vertices } => {
                let pts: Vec<Vec2> = vertices.into_iter().map(Vec2::from).collect();
                Ok(Body::Polygon(Polygon::from_vertices(&pts)?))
            }
            BodyRepr::Ball { center, radius } => Body::ball(center.into(), radius),
            BodyRepr::Dilate { lambda, body } => Body::dilate(lambda, Body::try_from(*body)?),
            BodyRepr::LpSum { p, left, right } => {
                Body::lp_combination(Body::try_from(*left)?, Body::try_from(*right)?, p)
            }
        }
    }
}

impl From<Body> for BodyRepr {
    fn from(b: Body) -> BodyRepr {
        match b {
            Body::Polygon(p) => BodyRepr::Polygon {
                vertices: p.vertices().iter().map(|&v| v.into()).collect(),
            },
            Body::Ball { center, radius } => BodyRepr::Ball {
                center: center.into(),
                radius,
            },
            Body::Dilate { lambda, inner } => BodyRepr::Dilate {
                lambda,
                body: Box::new((*inner).into()),
            },
            Body::LpSum { p, left, right } => BodyRepr::LpSum {
                p,
                left: Box::new((*left).into()),
                right: Box::new((*right).into()),
            },
        }
    }
}

impl From<Polygon> for Body {
    fn from(p: Polygon) -> Body {
        Body::Polygon(p)
    }
}

impl Body {
    /// Ball of radius `r` around `center`; the origin must stay strictly
    /// interior, i.e. `|center| < r`.
    pub fn ball(center: Vec2, radius: f64) -> Result<Body> {
        if !(radius.is_finite() && radius > 0.0) || !center.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        let clearance = radius - center.norm();
        if clearance <= UNIT_TOL * radius {
            return Err(Error::OriginNotInterior {
                distance: clearance,
            });
        }
        Ok(Body::Ball { center, radius })
    }

    pub fn unit_ball() -> Body {
        Body::Ball {
            center: Vec2::ZERO,
            radius: 1.0,
        }
    }

    pub fn dilate(lambda: f64, inner: Body) -> Result<Body> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dilation factor must be positive, got {lambda}"
            )));
        }
        Ok(Body::Dilate {
            lambda,
            inner: Box::new(inner),
        })
    }

    /// Firey combination: support function `(h_left^p + h_right^p)^(1/p)`.
    /// Requires `p >= 1`; below that the combination is not a support
    /// function of any convex body.
    pub fn lp_combination(left: Body, right: Body, p: f64) -> Result<Body> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "L_p combination needs p >= 1, got {p}"
            )));
        }
        Ok(Body::LpSum {
            p,
            left: Box::new(left),
            right: Box::new(right),
        })
    }

    /// Support value at a unit direction (`|u| = 1` within 1e-12).
    pub fn support(&self, u: Vec2) -> Result<f64> {
        let norm = u.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitDirection { norm });
        }
        Ok(self.support_raw(u))
    }

    /// Unchecked evaluation; callers must pass unit directions.
    pub(crate) fn support_raw(&self, u: Vec2) -> f64 {
        match self {
            Body::Polygon(p) => p.support(u),
            Body::Ball { center, radius } => center.dot(u) + radius,
            Body::Dilate { lambda, inner } => lambda * inner.support_raw(u),
            Body::LpSum { p, left, right } => {
                let a = left.support_raw(u);
                let b = right.support_raw(u);
                // Factor out the max so h^p never overflows: for r <= 1,
                // (a^p + b^p)^(1/p) = max * (1 + r^p)^(1/p).
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                let r = lo / hi;
                hi * ((r.powf(*p)).ln_1p() / p).exp()
            }
        }
    }

    /// Edge normals of every polygon in the oracle tree, used to make
    /// polygon inputs exact under discretization.
    pub fn polygon_normals(&self) -> Vec<Vec2> {
        let mut out = Vec::new();
        self.collect_normals(&mut out);
        out
    }

    fn collect_normals(&self, out: &mut Vec<Vec2>) {
        match self {
            Body::Polygon(p) => out.extend_from_slice(p.edge_normals()),
            Body::Ball { .. } => {}
            Body::Dilate { inner, .. } => inner.collect_normals(out),
            Body::LpSum { left, right, .. } => {
                left.collect_normals(out);
                right.collect_normals(out);
            }
        }
    }

    /// Circumscribed polygon: the intersection of the halfspaces
    /// `<x, u_i> <= h(u_i)` over `n_dirs` equally spaced directions plus the
    /// edge normals of any polygons in the tree (so polygon inputs come back
    /// exactly). Always contains the body; for a smooth support function the
    /// area excess decays like `1/n_dirs^2`.
    pub fn support_polytope(&self, n_dirs: usize) -> Result<Polygon> {
        if n_dirs < 8 {
            return Err(Error::InvalidParameter(format!(
                "support_polytope needs at least 8 directions, got {n_dirs}"
            )));
        }
        let mut dirs: Vec<Vec2> = (0..n_dirs)
            .map(|i| Vec2::unit(2.0 * std::f64::consts::PI * i as f64 / n_dirs as f64))
            .collect();
        dirs.extend(self.polygon_normals());

        let mut h_max = 0.0f64;
        let supports: Vec<f64> = dirs
            .iter()
            .map(|&u| {
                let h = self.support_raw(u);
                h_max = h_max.max(h);
                h
            })
            .collect();
        let half = 4.0 * h_max;
        let mut current = vec![
            Vec2::new(half, -half),
            Vec2::new(half, half),
            Vec2::new(-half, half),
            Vec2::new(-half, -half),
        ];
        for (u, h) in dirs.iter().zip(supports.iter()) {
            current = clip_halfplane(&current, *u, *h);
        }
        Polygon::from_loop(current)
    }

    /// Exact area for polygons; circumscribed-polygon area at `n_dirs`
    /// directions for every other oracle.
    pub fn volume(&self, n_dirs: usize) -> Result<f64> {
        match self {
            Body::Polygon(p) => Ok(p.area()),
            _ => Ok(self.support_polytope(n_dirs)?.area()),
        }
    }

    /// Discretization error estimate for [`Body::volume`]: the observed
    /// `|V_N - V_2N|` plus the circumscribed-polygon bound
    /// `pi^3 R^2 / (3 N^2)` with `R` the largest sampled support value.
    /// Zero for polygons, whose area is exact.
    pub fn volume_error_estimate(&self, n_dirs: usize) -> Result<f64> {
        if matches!(self, Body::Polygon(_)) {
            return Ok(0.0);
        }
        let v1 = self.volume(n_dirs)?;
        let v2 = self.volume(2 * n_dirs)?;
        let r = (0..n_dirs)
            .map(|i| {
                self.support_raw(Vec2::unit(
                    2.0 * std::f64::consts::PI * i as f64 / n_dirs as f64,
                ))
            })
            .fold(0.0f64, f64::max);
        let bound = std::f64::consts::PI.powi(3) * r * r / (3.0 * (n_dirs as f64).powi(2));
        Ok((v1 - v2).abs() + bound)
    }
}
