//! Closed-form limit laws for the line-to-nearest-vertex statistics: the
//! general ratio-variance formula, its half-normal specialization, the
//! delta-method laws for cos(theta) and the distance, and the three-regime
//! critical-radius threshold.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::std_normal_quantile;

/// First four moments of a positive random variable normalized to
/// `E X^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    mu: f64,
    m2: f64,
    a: f64,
    b: f64,
}

impl MomentSet {
    /// Strict constructor: `m2` must be exactly 1 (use [`MomentSet::rescaled`]
    /// for raw moments). Consistency: `mu^2 <= 1` and `b >= 1`, i.e. X and
    /// X^2 have nonnegative variance.
    pub fn new(mu: f64, m2: f64, a: f64, b: f64) -> Result<Self> {
        if m2 != 1.0 {
            return Err(Error::domain(format!(
                "MomentSet requires E X^2 = 1 exactly (got {m2}); rescale the moments first"
            )));
        }
        if !(mu.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(Error::domain("moments must be finite"));
        }
        if mu <= 0.0 || mu * mu > 1.0 {
            return Err(Error::domain(format!(
                "mean must satisfy 0 < mu and mu^2 <= E X^2 = 1, got mu={mu}"
            )));
        }
        if b < 1.0 {
            return Err(Error::domain(format!(
                "fourth moment must satisfy b >= (E X^2)^2 = 1, got b={b}"
            )));
        }
        Ok(Self { mu, m2, a, b })
    }

    /// Moments of `X / sqrt(E X^2)` from raw moments of `X`.
    pub fn rescaled(mu: f64, m2: f64, a: f64, b: f64) -> Result<Self> {
        if !m2.is_finite() || m2 <= 0.0 {
            return Err(Error::domain(format!(
                "second moment must be finite and positive, got {m2}"
            )));
        }
        let scale = m2.sqrt();
        Self::new(mu / scale, 1.0, a / (m2 * scale), b / (m2 * m2))
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// A normal limit law N(mean, variance).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitLaw {
    pub mean: f64,
    pub variance: f64,
}

/// Moments of the half-normal distribution |Z|:
/// `mu = sqrt(2/pi)`, `E X^2 = 1`, `E X^3 = 2 sqrt(2/pi)`, `E X^4 = 3`.
pub fn half_normal_moments() -> MomentSet {
    let mu = (2.0 / PI).sqrt();
    MomentSet {
        mu,
        m2: 1.0,
        a: 2.0 * mu,
        b: 3.0,
    }
}

/// Limit variance of `sqrt(n) (s^2/(n t) - mu^2)`:
/// `mu^4 b + 4 mu^2 - 4 mu^3 a - mu^4`.
pub fn ratio_limit_variance(m: &MomentSet) -> Result<f64> {
    let mu = m.mu();
    let mu2 = mu * mu;
    let mu3 = mu2 * mu;
    let mu4 = mu2 * mu2;
    let var = mu4 * m.b() + 4.0 * mu2 - 4.0 * mu3 * m.a() - mu4;
    if var < 0.0 {
        return Err(Error::domain(format!(
            "inconsistent moments: limit variance came out negative ({var})"
        )));
    }
    Ok(var)
}

/// The common limit of `s^2/(n t)` for half-normal coordinates, `2/pi`;
/// equivalently `1 - ` the limit of `d^2/n`.
pub fn cos_sq_limit() -> f64 {
    2.0 / PI
}

/// Limit of the squared-distance ratio `d^2/n`, namely `1 - 2/pi`.
pub fn distance_sq_ratio_limit() -> f64 {
    1.0 - 2.0 / PI
}

/// Law of `sqrt(n) (cos(theta) - sqrt(2/pi))`: N(0, (pi-3)/pi), reported
/// with the centering constant as the mean.
pub fn cos_theta_limit() -> LimitLaw {
    LimitLaw {
        mean: (2.0 / PI).sqrt(),
        variance: (PI - 3.0) / PI,
    }
}

/// Law of `d - sqrt((1 - 2/pi) n)`: N(0, 2(pi-3)/(pi(pi-2))).
pub fn distance_limit() -> LimitLaw {
    LimitLaw {
        mean: 0.0,
        variance: 2.0 * (PI - 3.0) / (PI * (PI - 2.0)),
    }
}

/// Critical radius `sqrt((1 - 2/pi) n) + z * sigma_d`, where `sigma_d` is
/// the standard deviation of [`distance_limit`]. The blocked fraction tends
/// to `Phi(z)` along this sequence.
pub fn threshold_radius(n: u32, z: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
    }
    if !z.is_finite() {
        return Err(Error::domain(format!("offset must be finite, got {z}")));
    }
    let nf = n as f64;
    let r = (distance_sq_ratio_limit() * nf).sqrt() + z * distance_limit().variance.sqrt();
    if !(0.0..=nf.sqrt()).contains(&r) {
        return Err(Error::domain(format!(
            "threshold radius {r} falls outside [0, sqrt(n)] for n={n}, z={z}"
        )));
    }
    Ok(r)
}

/// The offset `z` giving asymptotic blocked fraction `a`: the normal
/// quantile of `a`.
pub fn target_probability_offset(a: f64) -> Result<f64> {
    std_normal_quantile(a).map_err(|_| {
        Error::domain(format!(
            "target probability must lie strictly between 0 and 1, got {a}"
        ))
    })
}

/// Which of the three asymptotic regimes a radius falls in at dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Regime {
    /// Blocked fraction tends to 0.
    Vanishing,
    /// Blocked fraction tends to 1.
    Full,
    /// Inside the critical window; the payload is the offset `z` with
    /// predicted blocked fraction `Phi(z)`.
    Critical(f64),
}

/// Default half-width of the critical window, in limit standard deviations.
/// Beyond 6 sigma the predicted fraction is 0 or 1 to double precision.
pub const DEFAULT_CRITICAL_WINDOW: f64 = 6.0;

/// Classify `(n, r)` with the default +/- 6 sigma critical window.
pub fn classify_regime(n: u32, r: f64) -> Result<Regime> {
    classify_regime_with_window(n, r, DEFAULT_CRITICAL_WINDOW)
}

/// Classify `(n, r)` against the critical radius: compute
/// `z = (r - sqrt((1-2/pi) n)) / sigma_d` and call the regime critical when
/// `|z| <= z_max`, vanishing below, full above.
pub fn classify_regime_with_window(n: u32, r: f64, z_max: f64) -> Result<Regime> {
    if n < 2 {
        return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
    }
    let nf = n as f64;
    if !r.is_finite() || !(0.0..=nf.sqrt()).contains(&r) {
        return Err(Error::domain(format!(
            "radius must lie in [0, sqrt(n)], got {r}"
        )));
    }
    if !z_max.is_finite() || z_max <= 0.0 {
        return Err(Error::domain(format!(
            "critical window must be positive, got {z_max}"
        )));
    }
    let z = (r - (distance_sq_ratio_limit() * nf).sqrt()) / distance_limit().variance.sqrt();
    Ok(if z < -z_max {
        Regime::Vanishing
    } else if z > z_max {
        Regime::Full
    } else {
        Regime::Critical(z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::std_normal_cdf;

    const RATIO_VARIANCE: f64 = 0.114_770_682_054_218_86; // 8/pi - 24/pi^2
    const COS_VARIANCE: f64 = 0.045_070_341_448_627_985; // (pi-3)/pi
    const DIST_VARIANCE: f64 = 0.078_960_461_609_317_68; // 2(pi-3)/(pi(pi-2))

    #[test]
    fn half_normal_moment_values() {
        let m = half_normal_moments();
        assert!((m.mu() - 0.797_884_560_802_865_4).abs() < 1e-15);
        assert_eq!(m.m2(), 1.0);
        assert!((m.a() - 1.595_769_121_605_730_7).abs() < 1e-15);
        assert_eq!(m.b(), 3.0);
    }

    #[test]
    fn ratio_variance_half_normal() {
        let var = ratio_limit_variance(&half_normal_moments()).unwrap();
        let direct = 8.0 / PI - 24.0 / (PI * PI);
        assert!((var - direct).abs() < 1e-14);
        assert!((var - RATIO_VARIANCE).abs() < 1e-14);
    }

    #[test]
    fn ratio_variance_degenerate_and_uniform() {
        // X = 1 identically: 1 + 4 - 4 - 1 = 0.
        let constant = MomentSet::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(ratio_limit_variance(&constant).unwrap(), 0.0);

        // X uniform on [0, sqrt(3)]: mu = sqrt(3)/2, a = 3 sqrt(3)/4, b = 9/5.
        let s3 = 3.0f64.sqrt();
        let uniform = MomentSet::new(s3 / 2.0, 1.0, 3.0 * s3 / 4.0, 9.0 / 5.0).unwrap();
        assert!((ratio_limit_variance(&uniform).unwrap() - 0.075).abs() < 1e-14);
    }

    #[test]
    fn ratio_variance_nonnegative_for_genuine_distributions() {
        // two-point distribution scaled to E X^2 = 1
        for &(lo, p) in &[(0.3f64, 0.5f64), (0.6, 0.25), (0.1, 0.9)] {
            let hi = ((1.0 - p * lo * lo) / (1.0 - p)).sqrt();
            let mk = |k: i32| p * lo.powi(k) + (1.0 - p) * hi.powi(k);
            let m = MomentSet::rescaled(mk(1), mk(2), mk(3), mk(4)).unwrap();
            assert!(ratio_limit_variance(&m).unwrap() >= 0.0);
        }
    }

    #[test]
    fn moment_set_validation() {
        assert!(MomentSet::new(0.8, 0.999, 1.5, 3.0).is_err()); // m2 != 1
        assert!(MomentSet::new(1.1, 1.0, 1.5, 3.0).is_err()); // mu^2 > 1
        assert!(MomentSet::new(-0.5, 1.0, 1.5, 3.0).is_err());
        assert!(MomentSet::new(0.8, 1.0, 1.5, 0.9).is_err()); // b < 1
        // rescaling X ~ half-normal scaled by 2: raw moments scale as 2^k
        let m = half_normal_moments();
        let r =
            MomentSet::rescaled(2.0 * m.mu(), 4.0 * m.m2(), 8.0 * m.a(), 16.0 * m.b()).unwrap();
        assert!((r.mu() - m.mu()).abs() < 1e-15);
        assert!((r.a() - m.a()).abs() < 1e-15);
        assert!((r.b() - m.b()).abs() < 1e-15);
    }

    #[test]
    fn cos_theta_law_and_delta_identity() {
        let law = cos_theta_limit();
        assert!((law.mean - 0.797_884_560_802_865_4).abs() < 1e-15);
        assert!((law.variance - COS_VARIANCE).abs() < 1e-15);
        // delta method with g = sqrt at 2/pi: sigma^2 * (g'(2/pi))^2
        let ratio_var = ratio_limit_variance(&half_normal_moments()).unwrap();
        let g_prime = 0.5 / (2.0 / PI).sqrt();
        assert!((ratio_var * g_prime * g_prime - law.variance).abs() < 1e-12);
    }

    #[test]
    fn distance_law_and_delta_identity() {
        let law = distance_limit();
        assert_eq!(law.mean, 0.0);
        assert!((law.variance - DIST_VARIANCE).abs() < 1e-15);
        // delta method with g = sqrt at 1 - 2/pi
        let ratio_var = ratio_limit_variance(&half_normal_moments()).unwrap();
        let expected = ratio_var / (4.0 * (1.0 - 2.0 / PI));
        assert!((expected - law.variance).abs() < 1e-12);
    }

    #[test]
    fn threshold_radius_examples() {
        let r = threshold_radius(400, 0.0).unwrap();
        assert!((r - 12.056_205_499_781_74).abs() < 1e-12);
        // additive offset independent of n
        for n in [100u32, 400, 2000] {
            let delta = threshold_radius(n, 1.5).unwrap() - threshold_radius(n, 0.0).unwrap();
            assert!((delta - 1.5 * DIST_VARIANCE.sqrt()).abs() < 1e-12);
        }
        // out-of-range radii are rejected, not clamped
        assert!(threshold_radius(4, 50.0).is_err());
        assert!(threshold_radius(4, -50.0).is_err());
    }

    #[test]
    fn threshold_radius_strictly_increasing() {
        for n in [100u32, 400, 1000] {
            let mut prev = threshold_radius(n, -3.0).unwrap();
            for i in 1..=60 {
                let z = -3.0 + 0.1 * i as f64;
                let r = threshold_radius(n, z).unwrap();
                assert!(r > prev, "not increasing in z at n={n}, z={z}");
                prev = r;
            }
        }
        let mut prev = 0.0;
        for n in [100u32, 200, 400, 800, 1600] {
            let r = threshold_radius(n, 1.0).unwrap();
            assert!(r > prev, "not increasing in n at n={n}");
            prev = r;
        }
    }

    #[test]
    fn target_offset_roundtrip() {
        assert_eq!(target_probability_offset(0.5).unwrap(), 0.0);
        let z = target_probability_offset(0.841_344_746_068_543).unwrap();
        assert!((z - 1.0).abs() < 1e-12);
        for &a in &[0.01, 0.2, 0.5, 0.77, 0.99] {
            let z = target_probability_offset(a).unwrap();
            assert!((std_normal_cdf(z).unwrap() - a).abs() < 1e-9);
        }
        assert!(target_probability_offset(0.0).is_err());
        assert!(target_probability_offset(1.0).is_err());
    }

    #[test]
    fn regime_classification() {
        let n = 400u32;
        let nf = n as f64;
        assert_eq!(
            classify_regime(n, (0.2 * nf).sqrt()).unwrap(),
            Regime::Vanishing
        );
        assert_eq!(classify_regime(n, (0.55 * nf).sqrt()).unwrap(), Regime::Full);
        match classify_regime(n, threshold_radius(n, 1.0).unwrap()).unwrap() {
            Regime::Critical(z) => assert!((z - 1.0).abs() < 1e-9),
            other => panic!("expected critical regime, got {other:?}"),
        }
        // round trip across the window for n >= 100
        for n in [100u32, 400, 2000] {
            for i in -30..=30 {
                let z = i as f64 / 10.0;
                let r = threshold_radius(n, z).unwrap();
                match classify_regime(n, r).unwrap() {
                    Regime::Critical(got) => assert!((got - z).abs() < 1e-9),
                    other => panic!("(n={n}, z={z}) misclassified as {other:?}"),
                }
            }
        }
        // configurable window
        let r = threshold_radius(400, 3.0).unwrap();
        assert_eq!(
            classify_regime_with_window(400, r, 2.0).unwrap(),
            Regime::Full
        );
        assert!(classify_regime(400, -1.0).is_err());
        assert!(classify_regime(400, 21.0).is_err());
    }
}
