//! L_p mixed volumes in the plane and the stability functionals built on
//! them.
//!
//! For a polygon `K` the mixed volume integral is an exact finite sum over
//! the surface area measure (one atom per edge), so only volumes of
//! non-polygonal oracles ever need discretization. The two theorem checks
//! bound the mixed-volume deficit `delta_p` and the Brunn–Minkowski–Firey
//! deficit `beta_p` from below by multiples of the squared relative
//! asymmetry; [`proof_chain`] evaluates every intermediate inequality of the
//! derivation as a literal margin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Body, Polygon};

/// Ambient dimension of the exact engine.
pub const PLANE_DIM: usize = 2;

/// Conservative rounding allowance for the fully exact (polygon-only) path.
pub const EXACT_EVAL_ERROR: f64 = 1e-11;

fn check_p_ge_one(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p must be >= 1, got {p}")));
    }
    Ok(())
}

fn check_p_above_one(p: f64) -> Result<()> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "the stability bound needs p > 1 (no information at p = 1), got {p}"
        )));
    }
    Ok(())
}

/// L_p mixed volume `V_p(K, L)`: the exact edge sum
/// `(1/2) sum (h_L(u_i)/h_K(u_i))^p h_K(u_i) len_i` over the surface area
/// measure of `K`. Satisfies `V_p(K, K) = V(K)` and `V_p(K, sK) = s^p V(K)`.
pub fn mixed_volume_p(k: &Polygon, l: &Body, p: f64) -> Result<f64> {
    check_p_ge_one(p)?;
    let mut acc = 0.0;
    for i in 0..k.edge_count() {
        let u = k.edge_normals()[i];
        let hk = k.edge_support(i);
        let hl = l.support_raw(u);
        let ratio = if p == 1.0 { hl / hk } else { (hl / hk).powf(p) };
        acc += ratio * hk * k.edge_lengths()[i];
    }
    Ok(acc / 2.0)
}

/// Mixed-volume deficit `V_p(K,L) / (V(K)^(1-p/2) V(L)^(p/2)) - 1`,
/// nonnegative and zero exactly for dilates. `n_dirs` is used only when `L`
/// is not a polygon (its volume then comes from a circumscribed snapshot).
pub fn deficit_delta(k: &Polygon, l: &Body, p: f64, n_dirs: usize) -> Result<f64> {
    let vp = mixed_volume_p(k, l, p)?;
    let vk = k.area();
    let vl = l.volume(n_dirs)?;
    Ok(vp / (vk.powf(1.0 - p / 2.0) * vl.powf(p / 2.0)) - 1.0)
}

/// Brunn–Minkowski–Firey deficit
/// `V(K +_p L)^(p/2) / (V(K)^(p/2) + V(L)^(p/2)) - 1`, with the combined
/// volume evaluated on a circumscribed polygon at `n_dirs` directions.
pub fn deficit_beta(k: &Body, l: &Body, p: f64, n_dirs: usize) -> Result<f64> {
    check_p_ge_one(p)?;
    if n_dirs < 64 {
        return Err(Error::InvalidParameter(format!(
            "deficit_beta needs n_dirs >= 64, got {n_dirs}"
        )));
    }
    let combined = Body::lp_combination(k.clone(), l.clone(), p)?;
    let q = p / 2.0;
    let vc = combined.volume(n_dirs)?;
    let vk = k.volume(n_dirs)?;
    let vl = l.volume(n_dirs)?;
    Ok(vc.powf(q) / (vk.powf(q) + vl.powf(q)) - 1.0)
}

/// Relative asymmetry `A(K, L) = area(K delta lambda L) / area(K)` with the
/// volume-matching dilation `lambda = sqrt(V(K)/V(L))`. Lies in `[0, 2]` and
/// vanishes exactly for dilates.
pub fn relative_asymmetry(k: &Polygon, l: &Polygon) -> f64 {
    let lambda = (k.area() / l.area()).sqrt();
    let matched = l.scale(lambda);
    k.symmetric_difference_area(&matched) / k.area()
}

/// Relative side factor: the larger of the two volume ratios.
pub fn sigma(vol_k: f64, vol_l: f64) -> f64 {
    (vol_k / vol_l).max(vol_l / vol_k)
}

/// Margin report for one stability check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityReport {
    pub p: f64,
    /// Ambient dimension (always 2 in this engine).
    pub n: usize,
    /// Deficit being bounded from below.
    pub lhs: f64,
    /// Stability bound `constant * A^2`.
    pub rhs: f64,
    pub margin: f64,
    pub asymmetry: f64,
    pub sigma: f64,
    /// Discretization directions used; 0 means fully exact evaluation.
    pub n_dirs: usize,
    /// Estimated numerical error of `margin`.
    pub est_error: f64,
}

/// Mixed-volume stability check: `delta_p >= (p-1)/(128 n^2) A^2` with
/// `n = 2`. Exact for polygon pairs. Requires `p > 1`.
pub fn check_theorem_1(k: &Polygon, l: &Polygon, p: f64) -> Result<StabilityReport> {
    check_p_above_one(p)?;
    let lhs = deficit_delta(k, &Body::Polygon(l.clone()), p, 64)?;
    let asymmetry = relative_asymmetry(k, l);
    let rhs = (p - 1.0) / (128.0 * 4.0) * asymmetry * asymmetry;
    Ok(StabilityReport {
        p,
        n: PLANE_DIM,
        lhs,
        rhs,
        margin: lhs - rhs,
        asymmetry,
        sigma: sigma(k.area(), l.area()),
        n_dirs: 0,
        est_error: EXACT_EVAL_ERROR,
    })
}

/// Brunn–Minkowski–Firey stability check:
/// `beta_p >= (p-1) / (512 n^2 sigma^(p/2)) A^2` with `n = 2`. The combined
/// volume is discretized at `n_dirs`; the reported error estimate propagates
/// the circumscribed-volume estimate through the deficit.
pub fn check_theorem_2(k: &Polygon, l: &Polygon, p: f64, n_dirs: usize) -> Result<StabilityReport> {
    check_p_above_one(p)?;
    if n_dirs < 64 {
        return Err(Error::InvalidParameter(format!(
            "check_theorem_2 needs n_dirs >= 64, got {n_dirs}"
        )));
    }
    let combined = Body::lp_combination(Body::Polygon(k.clone()), Body::Polygon(l.clone()), p)?;
    let q = p / 2.0;
    let vc = combined.volume(n_dirs)?;
    let vk = k.area();
    let vl = l.area();
    let denom = vk.powf(q) + vl.powf(q);
    let lhs = vc.powf(q) / denom - 1.0;
    let asymmetry = relative_asymmetry(k, l);
    let s = sigma(vk, vl);
    let rhs = (p - 1.0) / (512.0 * 4.0 * s.powf(q)) * asymmetry * asymmetry;
    let dv = combined.volume_error_estimate(n_dirs)?;
    let est_error = q * vc.powf(q - 1.0) / denom * dv + EXACT_EVAL_ERROR;
    Ok(StabilityReport {
        p,
        n: PLANE_DIM,
        lhs,
        rhs,
        margin: lhs - rhs,
        asymmetry,
        sigma: s,
        n_dirs,
        est_error,
    })
}

/// Per-step margins of the derivation of the mixed-volume stability bound,
/// each the literal difference `lhs - rhs` of one inequality in the chain.
/// All are nonnegative up to rounding.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofSteps {
    /// Jensen/Tsallis stability applied to the mixed-volume integrand:
    /// `delta_p - [(p-1)/2 gap^2 + p (V1 - 1)]`.
    pub jensen_step: f64,
    /// Support gap against the hull mixed volume:
    /// `gap - [V1(K, K1) - V(K)] / 2`.
    pub support_gap_step: f64,
    /// L1 mixed-volume inequality plus square-root concavity:
    /// `[V1(K, K1) - V(K)] - [V(K1) - V(K)] / (2 sqrt(V(K1)))`.
    pub hull_mixed_step: f64,
    /// Volume cap for the hull: `gamma_p^2 - V(K1)`.
    pub hull_volume_cap: f64,
    /// Hull mixed-volume bound with the capped denominator:
    /// `[V1(K, K1) - V(K)] - [V(K1) - V(K)] / (2 gamma_p)`.
    pub hull_mixed_capped: f64,
    /// The hull contains the union: `[V(K1) - V(K)] - [V(gamma L) - V(K2)]`.
    pub hull_union_step: f64,
    /// Final set-difference bound:
    /// `delta_p - (p-1) V(L \ K)^2 / (8 gamma_p^2)`.
    pub set_difference_bound: f64,
}

impl ProofSteps {
    pub fn min(&self) -> f64 {
        self.as_named()
            .iter()
            .map(|&(_, v)| v)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn as_named(&self) -> [(&'static str, f64); 7] {
        [
            ("jensen_step", self.jensen_step),
            ("support_gap_step", self.support_gap_step),
            ("hull_mixed_step", self.hull_mixed_step),
            ("hull_volume_cap", self.hull_volume_cap),
            ("hull_mixed_capped", self.hull_mixed_capped),
            ("hull_union_step", self.hull_union_step),
            ("set_difference_bound", self.set_difference_bound),
        ]
    }
}

/// Full diagnostic record of the stability derivation on a normalized pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofChainReport {
    pub p: f64,
    /// `1 / V1(K, L)` after normalizing both bodies to unit volume; always
    /// in `[p/(p + delta_p), 1]`.
    pub gamma: f64,
    /// `1 + 2 sqrt(2 delta_p / (p-1))`, the hull volume cap.
    pub gamma_p: f64,
    pub delta_p: f64,
    pub v1: f64,
    /// `(1/2) sum |h_{gamma L} - h_K| len_i`, the L1 support gap over the
    /// surface measure of `K`.
    pub support_gap: f64,
    /// Edge sums with pointwise max/min support values; the gap equals
    /// `v1_max - v1_min` exactly, and `v1_max` equals the hull mixed volume.
    pub v1_max: f64,
    pub v1_min: f64,
    pub vol_k1: f64,
    pub vol_k2: f64,
    pub steps: ProofSteps,
    pub notes: Vec<String>,
}

impl ProofChainReport {
    pub fn min_margin(&self) -> f64 {
        self.steps.min()
    }
}

/// Evaluates every inequality of the stability derivation on the pair
/// `(K, L)` after dilating both to unit volume. Requires `p > 1`.
pub fn proof_chain(k: &Polygon, l: &Polygon, p: f64) -> Result<ProofChainReport> {
    check_p_above_one(p)?;
    let k = k.scale(1.0 / k.area().sqrt());
    let l = l.scale(1.0 / l.area().sqrt());
    let vk = k.area();
    let vl = l.area();

    let l_body = Body::Polygon(l.clone());
    let delta_p = deficit_delta(&k, &l_body, p, 64)?;
    let v1 = mixed_volume_p(&k, &l_body, 1.0)?;
    let gamma = 1.0 / v1;
    let scaled_l = l.scale(gamma);

    let mut support_gap = 0.0;
    let mut v1_max = 0.0;
    let mut v1_min = 0.0;
    for i in 0..k.edge_count() {
        let u = k.edge_normals()[i];
        let hk = k.edge_support(i);
        let hl = scaled_l.support(u);
        let w = 0.5 * k.edge_lengths()[i];
        support_gap += (hl - hk).abs() * w;
        v1_max += hk.max(hl) * w;
        v1_min += hk.min(hl) * w;
    }

    let k1 = k.hull_union(&scaled_l);
    let k2 = k.intersection(&scaled_l);
    let vol_k1 = k1.area();
    let vol_k2 = k2.area();
    let v1_k1 = mixed_volume_p(&k, &Body::Polygon(k1), 1.0)?;

    // Rounding can push delta_p a hair below zero on dilate pairs.
    let gamma_p = 1.0 + 2.0 * (2.0 * delta_p.max(0.0) / (p - 1.0)).sqrt();
    let vol_l_not_k = vl - l.intersection(&k).area();

    let steps = ProofSteps {
        jensen_step: delta_p - ((p - 1.0) / 2.0 * support_gap * support_gap + p * (v1 - 1.0)),
        support_gap_step: support_gap - (v1_k1 - vk) / 2.0,
        hull_mixed_step: (v1_k1 - vk) - (vol_k1 - vk) / (2.0 * vol_k1.sqrt()),
        hull_volume_cap: gamma_p * gamma_p - vol_k1,
        hull_mixed_capped: (v1_k1 - vk) - (vol_k1 - vk) / (2.0 * gamma_p),
        hull_union_step: (vol_k1 - vk) - (gamma * gamma * vl - vol_k2),
        set_difference_bound: delta_p
            - (p - 1.0) * vol_l_not_k * vol_l_not_k / (8.0 * gamma_p * gamma_p),
    };

    Ok(ProofChainReport {
        p,
        gamma,
        gamma_p,
        delta_p,
        v1,
        support_gap,
        v1_max,
        v1_min,
        vol_k1,
        vol_k2,
        steps,
        notes: vec![
            "v1_min uses pointwise min supports; it upper-bounds V1(K, K2) because \
             intersection support can lie strictly below the min of supports"
                .to_string(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec2;
    use std::f64::consts::PI;

    fn square() -> Polygon {
        Polygon::from_vertices(&[
            Vec2::new(1.0, -1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, -1.0),
        ])
        .unwrap()
    }

    fn quad() -> Polygon {
        Polygon::from_vertices(&[
            Vec2::new(2.0, -0.5),
            Vec2::new(1.0, 2.0),
            Vec2::new(-1.5, 1.0),
            Vec2::new(-0.8, -1.2),
        ])
        .unwrap()
    }

    #[test]
    fn mixed_volume_of_body_with_itself_is_volume() {
        let k = quad();
        let body = Body::Polygon(k.clone());
        for &p in &[1.0, 1.5, 2.0, 4.0] {
            let v = mixed_volume_p(&k, &body, p).unwrap();
            assert!((v - k.area()).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn mixed_volume_square_with_unit_ball_is_half_perimeter() {
        // Steiner: area(K + tB) = 4 + 8t + pi t^2, so V_1(K, B) = 8/2 = 4.
        let v = mixed_volume_p(&square(), &Body::unit_ball(), 1.0).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_volume_dilation_homogeneity() {
        let k = quad();
        for &(lam, p) in &[(3.0, 1.0), (0.4, 2.0), (2.0, 3.5)] {
            let l = Body::dilate(lam, Body::Polygon(k.clone())).unwrap();
            let v = mixed_volume_p(&k, &l, p).unwrap();
            assert!((v - lam.powf(p) * k.area()).abs() < 1e-10 * k.area());
        }
    }

    #[test]
    fn mixed_volume_rejects_p_below_one() {
        assert!(mixed_volume_p(&square(), &Body::unit_ball(), 0.5).is_err());
    }

    #[test]
    fn deficit_delta_examples() {
        let k = quad();
        assert!(
            deficit_delta(&k, &Body::Polygon(k.clone()), 2.0, 64)
                .unwrap()
                .abs()
                < 1e-12
        );
        let tripled = Body::dilate(3.0, Body::Polygon(k.clone())).unwrap();
        assert!(deficit_delta(&k, &tripled, 2.0, 64).unwrap().abs() < 1e-12);

        // Square against the unit ball at p = 2: V_2 = 4 exactly, so the
        // deficit is 4/pi - 1 (ball volume discretized at 4096 directions).
        let d = deficit_delta(&square(), &Body::unit_ball(), 2.0, 4096).unwrap();
        assert!((d - (4.0 / PI - 1.0)).abs() < 1e-5);
    }

    #[test]
    fn deficit_delta_scale_invariance() {
        let k = quad();
        let l = square();
        let base = deficit_delta(&k, &Body::Polygon(l.clone()), 2.5, 64).unwrap();
        let scaled = deficit_delta(&k.scale(2.0), &Body::Polygon(l.scale(0.3)), 2.5, 64).unwrap();
        assert!((base - scaled).abs() < 1e-9);
    }

    #[test]
    fn deficit_beta_vanishes_for_dilates() {
        let k = Body::Polygon(square());
        assert!(deficit_beta(&k, &k, 2.0, 256).unwrap().abs() < 1e-12);
        let ball = Body::unit_ball();
        assert!(deficit_beta(&ball, &ball, 1.0, 4096).unwrap().abs() < 1e-12);
    }

    #[test]
    fn deficit_beta_square_vs_ball_converges() {
        let k = Body::Polygon(square());
        let l = Body::unit_ball();
        let b1 = deficit_beta(&k, &l, 2.0, 4096).unwrap();
        let b2 = deficit_beta(&k, &l, 2.0, 8192).unwrap();
        assert!(b1 > 0.0);
        assert!((b1 - b2).abs() < 1e-4);
    }

    #[test]
    fn asymmetry_examples() {
        let k = quad();
        assert!(relative_asymmetry(&k, &k).abs() < 1e-12);
        assert!(relative_asymmetry(&k, &k.scale(5.0)).abs() < 1e-10);

        // Square against its 45-degree rotation: intersection area
        // 8(sqrt(2)-1) at matched volumes, so A = 6 - 4 sqrt(2).
        let s = std::f64::consts::SQRT_2;
        let rot = Polygon::from_vertices(&[
            Vec2::new(s, 0.0),
            Vec2::new(0.0, s),
            Vec2::new(-s, 0.0),
            Vec2::new(0.0, -s),
        ])
        .unwrap();
        let a = relative_asymmetry(&square(), &rot);
        assert!((a - (6.0 - 4.0 * s)).abs() < 1e-12, "A = {a}");
    }

    #[test]
    fn sigma_examples() {
        let k = quad();
        assert_eq!(sigma(k.area(), k.area()), 1.0);
        assert!((sigma(k.area(), k.scale(2.0).area()) - 4.0).abs() < 1e-12);
        assert!((sigma(4.0, PI) - 4.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn theorem_1_on_dilates_and_a_hand_pair() {
        let k = quad();
        let r = check_theorem_1(&k, &k.scale(2.5), 2.0).unwrap();
        assert!(r.lhs.abs() < 1e-10);
        assert!(r.rhs.abs() < 1e-10);
        assert!(r.margin.abs() < 1e-10);

        // Square vs ball snapshot: lhs near 4/pi - 1, margin clearly positive.
        let ball = Body::unit_ball().support_polytope(4096).unwrap();
        let r = check_theorem_1(&square(), &ball, 2.0).unwrap();
        assert!((r.lhs - (4.0 / PI - 1.0)).abs() < 1e-4);
        assert!(r.margin > 0.2);
        assert!(check_theorem_1(&square(), &ball, 1.0).is_err());
    }

    #[test]
    fn theorem_2_square_vs_ball_and_joint_scaling() {
        let k = square();
        let ball = Body::unit_ball().support_polytope(4096).unwrap();
        let r = check_theorem_2(&k, &ball, 2.0, 4096).unwrap();
        assert!(r.margin > 0.0);
        assert!(r.est_error > 0.0);

        let r1 = check_theorem_2(&k, &quad(), 1.5, 512).unwrap();
        let r2 = check_theorem_2(&k.scale(2.0), &quad().scale(2.0), 1.5, 512).unwrap();
        assert!((r1.lhs - r2.lhs).abs() < 1e-9);
        assert!((r1.rhs - r2.rhs).abs() < 1e-9);
        assert!((r1.margin - r2.margin).abs() < 1e-9);
    }

    #[test]
    fn proof_chain_equal_bodies_collapse() {
        let k = quad();
        let report = proof_chain(&k, &k, 2.0).unwrap();
        assert!((report.gamma - 1.0).abs() < 1e-12);
        assert!((report.gamma_p - 1.0).abs() < 1e-7);
        assert!(report.support_gap.abs() < 1e-12);
        assert!((report.vol_k1 - 1.0).abs() < 1e-12);
        assert!((report.vol_k2 - 1.0).abs() < 1e-12);
        for (name, margin) in report.steps.as_named() {
            assert!(margin.abs() < 1e-7, "{name} = {margin}");
        }
    }

    #[test]
    fn proof_chain_square_vs_ball_bounds() {
        let ball = Body::unit_ball().support_polytope(4096).unwrap();
        let report = proof_chain(&square(), &ball, 2.0).unwrap();
        assert!(report.gamma <= 1.0 + 1e-12);
        assert!(report.gamma >= report.p / (report.p + report.delta_p) - 1e-12);
        assert!(report.min_margin() >= -1e-9);
        // Pointwise identity: gap = v1_max - v1_min.
        assert!((report.support_gap - (report.v1_max - report.v1_min)).abs() < 1e-12);
    }

    #[test]
    fn stability_report_serializes_csv_fields() {
        let r = check_theorem_1(&square(), &quad(), 2.0).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        for key in [
            "p",
            "n",
            "lhs",
            "rhs",
            "margin",
            "asymmetry",
            "sigma",
            "n_dirs",
            "est_error",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
