//! Discrete concentration of measure on the hypercube: latitudes of vertices
//! relative to a pole follow Binomial(n, 1/2), so almost all vertices sit in
//! a thin slab around the equator once `n` is large.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{log_gamma, std_normal_cdf_raw};

/// Exact and normal-approximation mass of a central latitude slab.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlabProbability {
    /// Included latitude range `[k_low, k_high]`.
    pub k_low: u32,
    pub k_high: u32,
    pub exact: f64,
    pub normal_approx: f64,
    /// Set when `n` was too large for the exact summation and the `exact`
    /// field actually carries the normal approximation.
    pub exact_is_approximate: bool,
}

/// Latitude structure of `{-1, 1}^n` relative to a fixed pole vertex:
/// latitude `k` holds the vertices disagreeing with the pole in exactly `k`
/// coordinates, so a uniform vertex lands in latitude `K ~ Binomial(n, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatitudeModel {
    n: u32,
}

/// Above this dimension exact binomial summation is replaced by the normal
/// approximation (flagged in the result).
const EXACT_SUM_LIMIT: u32 = 100_000;

/// Latitude cutoffs within this distance of an integer count as included;
/// absorbs rounding in expressions like `n (1 - cos theta) / 2`.
const CUTOFF_SLACK: f64 = 1e-9;

impl LatitudeModel {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("latitude model requires n >= 1"));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Probability that a uniform vertex lies in latitude `k`:
    /// `C(n, k) / 2^n`, in log space.
    pub fn latitude_pmf(&self, k: u32) -> Result<f64> {
        if k > self.n {
            return Err(Error::domain(format!(
                "latitude index must lie in 0..={}, got {k}",
                self.n
            )));
        }
        Ok(libm::exp(self.ln_pmf(k)))
    }

    fn ln_pmf(&self, k: u32) -> f64 {
        // canonical argument order makes pmf(k) = pmf(n - k) bit-exact
        let k = k.min(self.n - k);
        let n = self.n as f64;
        let k = k as f64;
        let ln_choose = log_gamma_unchecked(n + 1.0)
            - log_gamma_unchecked(k + 1.0)
            - log_gamma_unchecked(n - k + 1.0);
        ln_choose - n * std::f64::consts::LN_2
    }

    /// Cosine of the angle between the pole and any vertex of latitude `k`:
    /// `(n - 2k) / n`.
    pub fn latitude_cosine(&self, k: u32) -> Result<f64> {
        if k > self.n {
            return Err(Error::domain(format!(
                "latitude index must lie in 0..={}, got {k}",
                self.n
            )));
        }
        Ok((self.n as f64 - 2.0 * k as f64) / self.n as f64)
    }

    /// Mass of the central slab: latitudes with `|k - n/2| <= eps * n`,
    /// both as an exact binomial sum and as a continuity-corrected normal
    /// approximation.
    pub fn slab_probability(&self, eps: f64) -> Result<SlabProbability> {
        if !eps.is_finite() || !(0.0..=0.5).contains(&eps) {
            return Err(Error::domain(format!(
                "slab half-width must lie in [0, 1/2], got {eps}"
            )));
        }
        let n = self.n as f64;
        let half = 0.5 * n;
        let k_low = ((half - eps * n - CUTOFF_SLACK).ceil().max(0.0)) as u32;
        let k_high = ((half + eps * n + CUTOFF_SLACK).floor().min(n)) as u32;
        let normal_approx = self.normal_range_mass(k_low, k_high);
        let (exact, flagged) = if self.n > EXACT_SUM_LIMIT {
            (normal_approx, true)
        } else {
            (self.exact_range_mass(k_low, k_high), false)
        };
        Ok(SlabProbability {
            k_low,
            k_high,
            exact,
            normal_approx,
            exact_is_approximate: flagged,
        })
    }

    /// Fraction of vertices whose angle from the pole is at most `theta`:
    /// `P(K <= n (1 - cos theta) / 2)` by exact binomial CDF.
    pub fn cap_mass(&self, theta: f64) -> Result<f64> {
        if !theta.is_finite() || !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::domain(format!(
                "cap angle must lie in [0, pi], got {theta}"
            )));
        }
        let cutoff = self.n as f64 * (1.0 - theta.cos()) / 2.0;
        let k_max = (cutoff + CUTOFF_SLACK).floor();
        if k_max < 0.0 {
            return Ok(0.0);
        }
        let k_max = (k_max as u32).min(self.n);
        Ok(self.exact_range_mass(0, k_max))
    }

    /// Kahan-compensated sum of `pmf(k)` over `k_low..=k_high`.
    fn exact_range_mass(&self, k_low: u32, k_high: u32) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for k in k_low..=k_high {
            let term = libm::exp(self.ln_pmf(k));
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum.min(1.0)
    }

    /// Continuity-corrected normal mass of `k_low..=k_high` with mean `n/2`
    /// and variance `n/4`.
    fn normal_range_mass(&self, k_low: u32, k_high: u32) -> f64 {
        let n = self.n as f64;
        let mean = 0.5 * n;
        let sd = 0.5 * n.sqrt();
        let upper = std_normal_cdf_raw((k_high as f64 + 0.5 - mean) / sd);
        let lower = std_normal_cdf_raw((k_low as f64 - 0.5 - mean) / sd);
        (upper - lower).clamp(0.0, 1.0)
    }
}

fn log_gamma_unchecked(x: f64) -> f64 {
    log_gamma(x).expect("argument is a positive count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn pmf_small_cases_and_symmetry() {
        let m = LatitudeModel::new(4).unwrap();
        assert!((m.latitude_pmf(2).unwrap() - 0.375).abs() < 1e-14);
        assert!((m.latitude_pmf(0).unwrap() - 0.0625).abs() < 1e-15);
        let m = LatitudeModel::new(31).unwrap();
        for k in 0..=31 {
            let a = m.latitude_pmf(k).unwrap();
            let b = m.latitude_pmf(31 - k).unwrap();
            assert!((a - b).abs() < 1e-16, "pmf asymmetry at k={k}");
        }
        assert!(m.latitude_pmf(32).is_err());
        assert!(LatitudeModel::new(0).is_err());
    }

    #[test]
    fn pmf_normalizes_up_to_large_n() {
        for n in [1u32, 2, 17, 1_000, 10_000] {
            let m = LatitudeModel::new(n).unwrap();
            let total: f64 = (0..=n).map(|k| m.latitude_pmf(k).unwrap()).sum();
            assert!(
                (total - 1.0).abs() < 1e-12,
                "pmf sums to {total} at n={n}"
            );
        }
    }

    #[test]
    fn latitude_cosine_values() {
        let m = LatitudeModel::new(10).unwrap();
        assert_eq!(m.latitude_cosine(5).unwrap(), 0.0);
        assert_eq!(m.latitude_cosine(0).unwrap(), 1.0);
        assert_eq!(m.latitude_cosine(10).unwrap(), -1.0);
        for k in 0..=10 {
            let a = m.latitude_cosine(k).unwrap();
            let b = m.latitude_cosine(10 - k).unwrap();
            assert_eq!(a, -b);
        }
    }

    #[test]
    fn slab_whole_range_is_certain() {
        let m = LatitudeModel::new(101).unwrap();
        let slab = m.slab_probability(0.5).unwrap();
        assert_eq!(slab.k_low, 0);
        assert_eq!(slab.k_high, 101);
        assert!((slab.exact - 1.0).abs() < 1e-12);
        assert!(m.slab_probability(0.6).is_err());
        assert!(m.slab_probability(-0.1).is_err());
    }

    #[test]
    fn slab_reference_value_n_1000() {
        let m = LatitudeModel::new(1_000).unwrap();
        let slab = m.slab_probability(0.05).unwrap();
        assert_eq!((slab.k_low, slab.k_high), (450, 550));
        // exact sum evaluated independently with 30-digit arithmetic
        assert!((slab.exact - 0.998_608_258_405_577_9).abs() < 1e-12);
        assert!((slab.normal_approx - 0.998_596_354_820_459_2).abs() < 1e-10);
        assert!((slab.exact - slab.normal_approx).abs() < 1e-3);
        assert!(slab.exact > 0.998);
        assert!(!slab.exact_is_approximate);
    }

    #[test]
    fn slab_lln_at_tiny_width() {
        let m = LatitudeModel::new(100_000).unwrap();
        let slab = m.slab_probability(0.01).unwrap();
        assert!(slab.exact > 0.999, "exact = {}", slab.exact);
        assert!(!slab.exact_is_approximate);
        // past the exact-summation limit the flag trips
        let big = LatitudeModel::new(200_000).unwrap();
        let slab = big.slab_probability(0.01).unwrap();
        assert!(slab.exact_is_approximate);
        assert_eq!(slab.exact, slab.normal_approx);
    }

    #[test]
    fn slab_monotone_in_eps_and_n() {
        let m = LatitudeModel::new(500).unwrap();
        let mut prev = 0.0;
        for i in 0..=10 {
            let eps = 0.05 * i as f64;
            let v = m.slab_probability(eps).unwrap().exact;
            assert!(v >= prev - 1e-15, "not monotone in eps at {eps}");
            prev = v;
        }
        let mut prev = 0.0;
        for n in [100u32, 200, 400, 800, 1_600, 3_200] {
            let v = LatitudeModel::new(n)
                .unwrap()
                .slab_probability(0.05)
                .unwrap()
                .exact;
            assert!(v >= prev - 1e-12, "not monotone in n at {n}");
            prev = v;
        }
    }

    #[test]
    fn normal_approximation_error_band() {
        // |exact - approx| <= 0.01 for n >= 100, eps in [0.01, 0.3]
        for n in [100u32, 250, 1_000, 5_000] {
            let m = LatitudeModel::new(n).unwrap();
            for i in 1..=30 {
                let eps = 0.01 * i as f64;
                if eps > 0.3 {
                    break;
                }
                let slab = m.slab_probability(eps).unwrap();
                assert!(
                    (slab.exact - slab.normal_approx).abs() <= 0.01,
                    "approx gap too big at n={n}, eps={eps}"
                );
            }
        }
    }

    #[test]
    fn cap_mass_edges() {
        let m = LatitudeModel::new(1_000).unwrap();
        assert!((m.cap_mass(PI).unwrap() - 1.0).abs() < 1e-12);
        assert!((m.cap_mass(0.0).unwrap() - m.latitude_pmf(0).unwrap()).abs() < 1e-300);
        assert!(m.cap_mass(-0.1).is_err());
        assert!(m.cap_mass(3.2).is_err());
    }

    #[test]
    fn half_space_mass_by_symmetry() {
        // theta = pi/2 with n even: mass = (1 + P(K = n/2)) / 2
        for n in [10u32, 100, 1_000] {
            let m = LatitudeModel::new(n).unwrap();
            let got = m.cap_mass(FRAC_PI_2).unwrap();
            let expected = 0.5 * (1.0 + m.latitude_pmf(n / 2).unwrap());
            assert!(
                (got - expected).abs() < 1e-12,
                "half-space mass off at n={n}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn quarter_angle_cap_is_negligible() {
        let m = LatitudeModel::new(1_000).unwrap();
        let mass = m.cap_mass(FRAC_PI_4).unwrap();
        assert!(mass > 0.0);
        assert!(mass < 1e-50, "cap mass = {mass}");
    }

    #[test]
    fn slab_and_caps_partition_the_cube() {
        // mass below the slab + slab + mass above = 1, with the side masses
        // expressed through cap_mass at the matching polar angles.
        for n in [8u32, 9, 100, 555] {
            let m = LatitudeModel::new(n).unwrap();
            let slab = m.slab_probability(0.1).unwrap();
            if slab.k_low == 0 {
                continue;
            }
            let cos_low = m.latitude_cosine(slab.k_low - 1).unwrap();
            let theta_low = cos_low.clamp(-1.0, 1.0).acos();
            let below = m.cap_mass(theta_low).unwrap();
            // symmetric cutoffs: the upper tail mirrors the lower one
            assert_eq!(slab.k_low + slab.k_high, n);
            let total = slab.exact + 2.0 * below;
            assert!(
                (total - 1.0).abs() < 1e-12,
                "partition off at n={n}: {total}"
            );
        }
    }
}
