//! Translated-ball family in general dimension: closed-form deficits and
//! asymmetries for `K` the unit ball and `L` its translate by `eps`, plus
//! scans that fit the `eps^2` scaling of both sides of the stability bound.
//!
//! By rotational symmetry every spherical integral reduces to a weighted
//! one-dimensional integral of the cosine of the polar angle, handled by
//! adaptive quadrature; the overlap of two balls comes from the regularized
//! incomplete beta function in closed form.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Body, Vec2};
use crate::mixed::deficit_beta;
use crate::quad::integrate;
use crate::special::betainc;

const QUAD_REL_TOL: f64 = 1e-12;

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension must be >= 2, got {n}"
        )));
    }
    Ok(())
}

/// Mean of `g(<x0, u>)` over the unit sphere in dimension `n`, for any unit
/// `x0`. Computed as the weighted marginal
/// `int g(cos t) sin^(n-2) t dt / int sin^(n-2) t dt` on `[0, pi]`, which
/// also absorbs the endpoint singularity of the `n = 2` weight.
pub fn sphere_mean<F: Fn(f64) -> f64>(g: F, n: usize) -> Result<f64> {
    check_dim(n)?;
    let w = (n - 2) as i32;
    let num = integrate(
        &|theta: f64| g(theta.cos()) * theta.sin().powi(w),
        0.0,
        std::f64::consts::PI,
        QUAD_REL_TOL,
    )?;
    let den = integrate(
        &|theta: f64| theta.sin().powi(w),
        0.0,
        std::f64::consts::PI,
        QUAD_REL_TOL,
    )?;
    Ok(num / den)
}

/// Mixed-volume deficit of the unit ball against its translate by `eps`:
/// `delta_p = sphere_mean((1 + eps t)^p) - 1` (the two volumes agree, so the
/// normalizing denominator is the ball volume itself). Behaves like
/// `p (p-1) eps^2 / (2n)` at leading order.
pub fn ball_delta_p(n: usize, p: f64, eps: f64) -> Result<f64> {
    check_dim(n)?;
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "ball_delta_p needs p > 1, got {p}"
        )));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "translation must satisfy 0 <= eps < 1 to keep the origin interior, got {eps}"
        )));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    Ok(sphere_mean(|t| (1.0 + eps * t).powf(p), n)? - 1.0)
}

/// Relative asymmetry of two unit balls with centers `eps` apart:
/// `A = 2 I_x(1/2, (n+1)/2)` with `x = eps^2 / 4` (twice the relative
/// volume of one spherical cap pair outside the lens). Leading order in
/// dimension 2 is `4 eps / pi`.
pub fn ball_asymmetry(n: usize, eps: f64) -> Result<f64> {
    check_dim(n)?;
    if !(eps > 0.0 && eps < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "ball_asymmetry needs 0 < eps < 2 (overlapping balls), got {eps}"
        )));
    }
    Ok(2.0 * betainc(0.5, (n as f64 + 1.0) / 2.0, eps * eps / 4.0))
}

/// One row of an epsilon scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanRow {
    pub epsilon: f64,
    pub delta_p: f64,
    pub asymmetry: f64,
    pub asymmetry_sq: f64,
    pub beta_p: Option<f64>,
}

/// Fitted log-log exponents of the scanned quantities against `eps`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FittedSlopes {
    pub delta_p: f64,
    pub asymmetry_sq: f64,
    pub beta_p: Option<f64>,
}

/// Small-`eps` ratio limits, read off at the smallest scanned `eps` (the
/// relative correction there is `O(eps^2)`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioLimits {
    pub delta_over_eps_sq: f64,
    pub asym_over_eps: f64,
}

/// Scan of the translated-ball family over a list of translations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpsilonScan {
    pub n: usize,
    pub p: f64,
    pub rows: Vec<ScanRow>,
    pub fitted_slopes: FittedSlopes,
    pub ratio_limits: RatioLimits,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Log-spaced grid with `per_decade` points per decade, inclusive of both
/// endpoints of `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let e_lo = lo.log10();
    let e_hi = hi.log10();
    let count = ((e_hi - e_lo) * per_decade as f64).round() as usize;
    (0..=count)
        .map(|i| 10f64.powf(e_lo + i as f64 / per_decade as f64))
        .map(|x| x.min(hi))
        .collect()
}

/// Runs the translated-ball scan: per `eps`, the closed-form `delta_p` and
/// `A`, and (when `include_beta`, dimension 2 only) the Firey deficit of the
/// two balls from the planar engine at `n_dirs` directions. Fits the log-log
/// slopes of `delta_p` and `A^2`, which equal 2 in the small-`eps` limit:
/// the exponent of the asymmetry in the stability bounds cannot be raised.
pub fn sharpness_scan(
    n: usize,
    p: f64,
    eps_list: &[f64],
    include_beta: bool,
    n_dirs: usize,
) -> Result<EpsilonScan> {
    check_dim(n)?;
    if eps_list.len() < 5 {
        return Err(Error::InvalidParameter(format!(
            "scan needs at least 5 translations, got {}",
            eps_list.len()
        )));
    }
    let mut eps = eps_list.to_vec();
    eps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if !(eps[0] > 0.0 && *eps.last().unwrap() <= 0.2) {
        return Err(Error::InvalidParameter(
            "translations must lie in (0, 0.2]".into(),
        ));
    }
    if eps.last().unwrap() / eps[0] < 10.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter(
            "translations must span at least a decade".into(),
        ));
    }
    if include_beta && n != 2 {
        return Err(Error::InvalidParameter(
            "beta_p rows need the planar engine (dimension 2)".into(),
        ));
    }

    let rows: Vec<ScanRow> = eps
        .par_iter()
        .map(|&e| -> Result<ScanRow> {
            let delta_p = ball_delta_p(n, p, e)?;
            let asymmetry = ball_asymmetry(n, e)?;
            let beta_p = if include_beta {
                let k = Body::unit_ball();
                let l = Body::ball(Vec2::new(e, 0.0), 1.0)?;
                Some(deficit_beta(&k, &l, p, n_dirs)?)
            } else {
                None
            };
            Ok(ScanRow {
                epsilon: e,
                delta_p,
                asymmetry,
                asymmetry_sq: asymmetry * asymmetry,
                beta_p,
            })
        })
        .collect::<Result<_>>()?;

    let xs: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    let deltas: Vec<f64> = rows.iter().map(|r| r.delta_p).collect();
    let asym_sq: Vec<f64> = rows.iter().map(|r| r.asymmetry_sq).collect();
    let beta_slope = if include_beta {
        let betas: Vec<f64> = rows.iter().map(|r| r.beta_p.unwrap()).collect();
        Some(loglog_slope(&xs, &betas))
    } else {
        None
    };
    let first = &rows[0];
    Ok(EpsilonScan {
        n,
        p,
        fitted_slopes: FittedSlopes {
            delta_p: loglog_slope(&xs, &deltas),
            asymmetry_sq: loglog_slope(&xs, &asym_sq),
            beta_p: beta_slope,
        },
        ratio_limits: RatioLimits {
            delta_over_eps_sq: first.delta_p / (first.epsilon * first.epsilon),
            asym_over_eps: first.asymmetry / first.epsilon,
        },
        rows,
    })
}
