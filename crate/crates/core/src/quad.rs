//! Adaptive Simpson quadrature with Richardson extrapolation.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;

/// Integrates `f` over `[a, b]` to the requested relative tolerance.
///
/// The tolerance is interpreted against the magnitude of the integral (with
/// a floor based on the sampled integrand size, so odd integrands that cancel
/// to zero still converge). Fails with `QuadratureDidNotConverge` if interval
/// bisection exhausts the depth budget.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidParameter(format!("bad interval [{a}, {b}]")));
    }
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("bad tolerance {rel_tol}")));
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    // Scale the tolerance by an L1 estimate of the integrand so odd
    // integrands that cancel to zero still get a sensible target.
    let samples = 16;
    let mut l1 = 0.0;
    for i in 0..=samples {
        let x = a + (b - a) * i as f64 / samples as f64;
        l1 += f(x).abs();
    }
    l1 *= (b - a) / (samples + 1) as f64;
    let magnitude = whole.abs().max(l1);
    if magnitude == 0.0 {
        return Ok(0.0);
    }
    let eps = rel_tol * magnitude;
    recurse(f, a, b, fa, fm, fb, whole, eps, MAX_DEPTH)
}

fn simpson(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
    width / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps || m <= a || m >= b {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureDidNotConverge {
            requested: eps,
            achieved: delta.abs(),
        });
    }
    let half = 0.5 * eps;
    Ok(recurse(f, a, m, fa, flm, fm, left, half, depth - 1)?
        + recurse(f, m, b, fm, frm, fb, right, half, depth - 1)?)
}
