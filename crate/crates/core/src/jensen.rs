//! Sharpened Jensen inequality for Tsallis entropy on finite probability
//! spaces.
//!
//! For a probability vector `w` and a nonnegative function `f` with mean
//! `m = sum w_i f_i > 0`, the normalized power mean defect
//!
//! ```text
//! D_p(f) = (sum w_i (f_i/m)^p - 1) / (p - 1)      (p != 1)
//! D_1(f) = sum w_i (f_i/m) ln(f_i/m)
//! ```
//!
//! is nonnegative, and it dominates `c_p * (sum w_i |f_i/m - 1|)^2` with the
//! constant from [`stability_constant`]. At `p = 1` this is the classical
//! Pinsker–Csiszár–Kullback bound; for general `p > 0` it is its Tsallis
//! analogue. [`stability_check`] evaluates both sides and reports the margin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite probability space together with a nonnegative function on its
/// atoms. Weights are positive and sum to one (within 1e-12); at least one
/// value is strictly positive.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "DistRepr", into = "DistRepr")]
pub struct DiscreteDistribution {
    weights: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DistRepr {
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<DistRepr> for DiscreteDistribution {
    type Error = Error;
    fn try_from(r: DistRepr) -> Result<Self> {
        DiscreteDistribution::new(r.weights, r.values)
    }
}

impl From<DiscreteDistribution> for DistRepr {
    fn from(d: DiscreteDistribution) -> DistRepr {
        DistRepr {
            weights: d.weights,
            values: d.values,
        }
    }
}

impl DiscreteDistribution {
    pub fn new(weights: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() != values.len() {
            return Err(Error::InvalidDistribution(format!(
                "weights and values must have identical nonzero length ({} vs {})",
                weights.len(),
                values.len()
            )));
        }
        if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::InvalidDistribution(
                "every weight must be finite and positive".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "weights must sum to 1, got {total}"
            )));
        }
        if values.iter().any(|&v| !(v.is_finite() && v >= 0.0)) {
            return Err(Error::InvalidDistribution(
                "every value must be finite and nonnegative".into(),
            ));
        }
        if !values.iter().any(|&v| v > 0.0) {
            return Err(Error::InvalidDistribution(
                "at least one value must be positive".into(),
            ));
        }
        Ok(DiscreteDistribution { weights, values })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: length >= 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mean `sum w_i f_i`; the normalization scale used by the entropy and
    /// deviation functionals. Positive by the invariants.
    pub fn mean(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.values)
            .map(|(w, f)| w * f)
            .sum()
    }

    /// Same space with `f` replaced by `c f`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        DiscreteDistribution::new(
            self.weights.clone(),
            self.values.iter().map(|&v| c * v).collect(),
        )
    }

    fn check_positive_values(&self) -> Result<()> {
        if self.values.contains(&0.0) {
            return Err(Error::InvalidDistribution(
                "logarithmic functional needs every value strictly positive".into(),
            ));
        }
        Ok(())
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "p must be a positive finite real, got {p}"
        )));
    }
    Ok(())
}

/// `x ln x` extended by 0 at 0.
fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Stability constant `c_p`: `1/2` for `p >= 1`, and
/// `(p+1)^(p+1) / (8 p^(p-1))` for `0 < p < 1`. Continuous at `p = 1`.
pub fn stability_constant(p: f64) -> Result<f64> {
    check_p(p)?;
    if p >= 1.0 {
        Ok(0.5)
    } else {
        Ok((p + 1.0).powf(p + 1.0) / (8.0 * p.powf(p - 1.0)))
    }
}

/// Tsallis entropy of `f` after normalizing to unit mean: for `p != 1`,
/// `(sum w_i g_i^p - 1)/(p - 1)` with `g = f / mean`; at `p = 1` the Shannon
/// form `sum w_i g_i ln g_i` (with `0 ln 0 = 0`). The normalization scale is
/// [`DiscreteDistribution::mean`].
pub fn tsallis_entropy(d: &DiscreteDistribution, p: f64) -> Result<f64> {
    jensen_deficit(d, p)
}

/// Normalized Jensen defect of the power mean; scale invariant in `f` and
/// always nonnegative. Coincides with [`tsallis_entropy`] of the normalized
/// function.
pub fn jensen_deficit(d: &DiscreteDistribution, p: f64) -> Result<f64> {
    check_p(p)?;
    let m = d.mean();
    if p == 1.0 {
        Ok(d.weights
            .iter()
            .zip(&d.values)
            .map(|(w, f)| w * xlnx(f / m))
            .sum())
    } else {
        let moment: f64 = d
            .weights
            .iter()
            .zip(&d.values)
            .map(|(w, f)| w * (f / m).powf(p))
            .sum();
        Ok((moment - 1.0) / (p - 1.0))
    }
}

/// Mean absolute deviation of the normalized function from 1:
/// `sum w_i |f_i/m - 1|`, always in `[0, 2]`.
pub fn l1_deviation(d: &DiscreteDistribution) -> f64 {
    let m = d.mean();
    d.weights
        .iter()
        .zip(&d.values)
        .map(|(w, f)| w * (f / m - 1.0).abs())
        .sum()
}

/// One stability check: `deficit`, `deviation`, `c_p`, and the margin
/// `deficit - c_p * deviation^2` (nonnegative up to rounding).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JensenReport {
    pub p: f64,
    pub deficit: f64,
    pub deviation: f64,
    pub c_p: f64,
    pub margin: f64,
}

pub fn stability_check(d: &DiscreteDistribution, p: f64) -> Result<JensenReport> {
    let deficit = jensen_deficit(d, p)?;
    let deviation = l1_deviation(d);
    let c_p = stability_constant(p)?;
    Ok(JensenReport {
        p,
        deficit,
        deviation,
        c_p,
        margin: deficit - c_p * deviation * deviation,
    })
}

/// Two-parameter reduction of the stability inequality:
///
/// ```text
/// psi_a(t) = [t^(1-p) a^p + (1-t)^(1-p) (1-a)^p - 1]/(p-1) - 4 c_p (t-a)^2
/// ```
///
/// for `0 < a <= t < 1` and `p > 0`, `p != 1`. Vanishes at `t = a` and is
/// nonnegative on the whole strip; it equals the [`stability_check`] margin
/// of the two-point space `(t, 1-t)` with values `(a/t, (1-a)/(1-t))`.
pub fn psi(a: f64, t: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if p == 1.0 {
        return Err(Error::InvalidParameter("psi is defined for p != 1".into()));
    }
    if !(a > 0.0 && a <= t && t < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "psi needs 0 < a <= t < 1, got a={a}, t={t}"
        )));
    }
    let c_p = stability_constant(p)?;
    let lhs = (t.powf(1.0 - p) * a.powf(p) + (1.0 - t).powf(1.0 - p) * (1.0 - a).powf(p) - 1.0)
        / (p - 1.0);
    Ok(lhs - 4.0 * c_p * (t - a) * (t - a))
}

/// Result of a brute-force grid scan of [`psi`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsiGridScan {
    pub p: f64,
    pub min: f64,
    pub argmin_a: f64,
    pub argmin_t: f64,
    /// Grid spacing in `t` at the argmin row, for locating `t = a`.
    pub t_step: f64,
}

/// Exhaustive minimum of `psi` over `a_steps` interior values of `a` and,
/// per `a`, `t_steps` values spanning `[a, 1 - 1/t_steps]`.
pub fn psi_grid_min(p: f64, a_steps: usize, t_steps: usize) -> Result<PsiGridScan> {
    check_p(p)?;
    if p == 1.0 {
        return Err(Error::InvalidParameter("psi is defined for p != 1".into()));
    }
    if a_steps < 2 || t_steps < 2 {
        return Err(Error::InvalidParameter(
            "grid needs a_steps >= 2 and t_steps >= 2".into(),
        ));
    }
    let mut best = PsiGridScan {
        p,
        min: f64::INFINITY,
        argmin_a: 0.0,
        argmin_t: 0.0,
        t_step: 0.0,
    };
    let t_hi_global = 1.0 - 1.0 / t_steps as f64;
    for i in 1..=a_steps {
        let a = i as f64 / (a_steps + 1) as f64;
        let t_hi = t_hi_global.max(a);
        let step = (t_hi - a) / (t_steps - 1) as f64;
        for j in 0..t_steps {
            let t = if j + 1 == t_steps {
                t_hi
            } else {
                a + step * j as f64
            };
            let value = psi(a, t, p)?;
            if value < best.min {
                best = PsiGridScan {
                    p,
                    min: value,
                    argmin_a: a,
                    argmin_t: t,
                    t_step: step,
                };
            }
            if t_hi == a {
                break;
            }
        }
    }
    Ok(best)
}

/// Sharpened Jensen gap for the logarithm:
/// `ln(sum w f) - sum w ln f - (1/8) deviation^2`, nonnegative whenever all
/// values are strictly positive. This is the `p -> 0` limit of the Tsallis
/// margin scaled by `1/p`.
pub fn log_jensen_gap(d: &DiscreteDistribution) -> Result<f64> {
    d.check_positive_values()?;
    let m = d.mean();
    let mean_log: f64 = d
        .weights
        .iter()
        .zip(&d.values)
        .map(|(w, f)| w * f.ln())
        .sum();
    let dev = l1_deviation(d);
    Ok(m.ln() - mean_log - dev * dev / 8.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(weights: &[f64], values: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::new(weights.to_vec(), values.to_vec()).unwrap()
    }

    #[test]
    fn distribution_validation() {
        assert!(DiscreteDistribution::new(vec![0.5, 0.5], vec![1.0]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.6], vec![1.0, 1.0]).is_err());
        assert!(DiscreteDistribution::new(vec![1.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.5], vec![0.0, 0.0]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.5], vec![-1.0, 1.0]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.5], vec![0.0, 2.0]).is_ok());
    }

    #[test]
    fn stability_constant_branches() {
        assert_eq!(stability_constant(2.0).unwrap(), 0.5);
        assert_eq!(stability_constant(1.0).unwrap(), 0.5);
        // Closed form at p = 1/2: (3/2)^(3/2) / (8 sqrt(2)) = 3 sqrt(3) / 32.
        let c = stability_constant(0.5).unwrap();
        assert!((c - 3.0 * 3.0f64.sqrt() / 32.0).abs() < 1e-15);
        assert!((c - 0.16238).abs() < 1e-5);
        assert!(stability_constant(0.0).is_err());
        assert!(stability_constant(-2.0).is_err());
        assert!(stability_constant(f64::NAN).is_err());
        assert!(stability_constant(f64::INFINITY).is_err());
    }

    #[test]
    fn stability_constant_continuous_at_one() {
        let h = 1e-4;
        assert!((stability_constant(1.0 - h).unwrap() - 0.5).abs() < 1e-3);
        assert_eq!(stability_constant(1.0 + h).unwrap(), 0.5);
    }

    #[test]
    fn tsallis_entropy_examples() {
        let uniform = dist(&[0.25, 0.25, 0.25, 0.25], &[1.0, 1.0, 1.0, 1.0]);
        assert!(tsallis_entropy(&uniform, 3.0).unwrap().abs() < 1e-15);

        let two = dist(&[0.5, 0.5], &[0.0, 2.0]);
        assert!((tsallis_entropy(&two, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((tsallis_entropy(&two, 1.0).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn deficit_examples_and_scale_invariance() {
        let constant = dist(&[0.3, 0.7], &[5.0, 5.0]);
        for &p in &[0.5, 1.0, 2.0, 7.0] {
            assert!(jensen_deficit(&constant, p).unwrap().abs() < 1e-14);
        }
        let two = dist(&[0.5, 0.5], &[0.0, 2.0]);
        assert!((jensen_deficit(&two, 2.0).unwrap() - 1.0).abs() < 1e-15);
        let four = dist(&[0.5, 0.5], &[0.0, 4.0]);
        assert!((jensen_deficit(&four, 2.0).unwrap() - 1.0).abs() < 1e-15);

        let d = dist(&[0.2, 0.5, 0.3], &[0.4, 3.0, 1.1]);
        for &p in &[0.3, 0.9, 1.0, 1.1, 2.0, 5.0] {
            let base = jensen_deficit(&d, p).unwrap();
            for &c in &[1e-6, 1.0, 1e6] {
                let scaled = jensen_deficit(&d.scaled(c).unwrap(), p).unwrap();
                assert!(
                    (scaled - base).abs() <= 1e-10,
                    "p={p} c={c}: {scaled} vs {base}"
                );
            }
        }
    }

    #[test]
    fn deviation_examples() {
        assert!(l1_deviation(&dist(&[0.4, 0.6], &[3.0, 3.0])).abs() < 1e-15);
        assert!((l1_deviation(&dist(&[0.5, 0.5], &[0.0, 2.0])) - 1.0).abs() < 1e-15);
        // Two-point reduction identity: deviation = 2 (t - a).
        let (a, t) = (0.2, 0.5);
        let d = dist(&[t, 1.0 - t], &[a / t, (1.0 - a) / (1.0 - t)]);
        assert!((l1_deviation(&d) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn stability_check_examples() {
        let flat = dist(&[0.5, 0.5], &[1.0, 1.0]);
        assert!(stability_check(&flat, 2.0).unwrap().margin.abs() < 1e-15);

        let two = dist(&[0.5, 0.5], &[0.0, 2.0]);
        let r2 = stability_check(&two, 2.0).unwrap();
        assert!((r2.margin - 0.5).abs() < 1e-15);
        let r1 = stability_check(&two, 1.0).unwrap();
        assert!((r1.margin - (std::f64::consts::LN_2 - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn deficit_is_continuous_in_p_at_one() {
        let d = dist(&[0.2, 0.5, 0.3], &[0.4, 3.0, 1.1]);
        let shannon = jensen_deficit(&d, 1.0).unwrap();
        for &p in &[1.0 - 1e-5, 1.0 + 1e-5] {
            assert!((jensen_deficit(&d, p).unwrap() - shannon).abs() <= 1e-4);
        }
    }

    #[test]
    fn psi_examples() {
        for &(a, p) in &[(0.1, 0.5), (0.37, 2.0), (0.8, 4.0)] {
            assert!(psi(a, a, p).unwrap().abs() < 1e-15);
        }
        assert!((psi(0.25, 0.5, 2.0).unwrap() - 0.125).abs() < 1e-15);
        assert!(psi(0.5, 0.5, 3.0).unwrap().abs() < 1e-15);

        assert!(psi(0.0, 0.5, 2.0).is_err());
        assert!(psi(0.6, 0.5, 2.0).is_err());
        assert!(psi(0.5, 1.0, 2.0).is_err());
        assert!(psi(0.5, 0.6, 1.0).is_err());
    }

    #[test]
    fn psi_matches_two_point_stability_margin() {
        for &p in &[0.3, 0.5, 2.0, 4.0] {
            for &(a, t) in &[(0.05, 0.1), (0.2, 0.5), (0.45, 0.5), (0.3, 0.85)] {
                let d = dist(&[t, 1.0 - t], &[a / t, (1.0 - a) / (1.0 - t)]);
                let margin = stability_check(&d, p).unwrap().margin;
                let value = psi(a, t, p).unwrap();
                assert!((margin - value).abs() < 1e-12, "p={p} a={a} t={t}");
            }
        }
    }

    #[test]
    fn psi_grid_scan_degenerate_edge() {
        let scan = psi_grid_min(2.0, 2, 2).unwrap();
        assert!(scan.min.is_finite());
        assert!(scan.argmin_a == 1.0 / 3.0 || scan.argmin_a == 2.0 / 3.0);
    }

    #[test]
    fn psi_grid_min_is_nonnegative_at_t_eq_a() {
        for &p in &[0.5, 2.0] {
            let scan = psi_grid_min(p, 99, 1000).unwrap();
            assert!(scan.min >= -1e-10, "p={p}: min {}", scan.min);
            assert!(
                (scan.argmin_t - scan.argmin_a).abs() <= scan.t_step + 1e-12,
                "p={p}: argmin ({}, {})",
                scan.argmin_a,
                scan.argmin_t
            );
        }
    }

    #[test]
    fn log_gap_examples() {
        let constant = dist(&[0.25, 0.75], &[2.0, 2.0]);
        assert!(log_jensen_gap(&constant).unwrap().abs() < 1e-15);

        let d = dist(&[0.5, 0.5], &[1.0, 3.0]);
        let expect = std::f64::consts::LN_2 - 0.5 * 3.0f64.ln() - 1.0 / 32.0;
        assert!((log_jensen_gap(&d).unwrap() - expect).abs() < 1e-15);

        let zero = dist(&[0.5, 0.5], &[0.0, 2.0]);
        assert!(log_jensen_gap(&zero).is_err());
    }

    #[test]
    fn log_gap_is_small_p_limit_of_scaled_margin() {
        let d = dist(&[0.3, 0.45, 0.25], &[0.7, 2.2, 1.4]);
        let gap = log_jensen_gap(&d).unwrap();
        let p = 1e-4;
        let report = stability_check(&d, p).unwrap();
        assert!((report.margin / p - gap).abs() < 1e-3);
    }

    #[test]
    fn report_serializes_with_expected_fields() {
        let d = dist(&[0.5, 0.5], &[0.0, 2.0]);
        let report = stability_check(&d, 2.0).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        for key in ["p", "deficit", "deviation", "c_p", "margin"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn distribution_json_round_trip() {
        let text = r#"{"weights":[0.5,0.5],"values":[0.0,2.0]}"#;
        let d: DiscreteDistribution = serde_json::from_str(text).unwrap();
        assert_eq!(d.len(), 2);
        let again = serde_json::to_string(&d).unwrap();
        let back: DiscreteDistribution = serde_json::from_str(&again).unwrap();
        assert_eq!(back.values(), d.values());
        assert!(serde_json::from_str::<DiscreteDistribution>(
            r#"{"weights":[0.5,0.5],"values":[0.0,0.0]}"#
        )
        .is_err());
    }
}
