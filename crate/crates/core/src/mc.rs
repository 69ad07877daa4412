//! Monte Carlo estimation of the blocked-light probability and empirical
//! samples of the limit statistics.
//!
//! The hit test uses the nearest-vertex reduction: a random line hits some
//! ball of radius `r` iff its distance to the sign vertex is at most `r`,
//! so one half-normal vector decides a trial in O(n) regardless of the
//! `2^n` balls. Trial `i` consumes substream `stream_id = i` of the run's
//! seed, which makes results a pure function of `(seed, trials)` no matter
//! how trials are scheduled across worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{cos_sq_limit, distance_sq_ratio_limit, LimitLaw};
use crate::capgeom::BallArrangement;
use crate::error::{Error, Result};
use crate::randgeom::{fill_half_normal, line_stats, RandomStream};
use crate::specfun::{std_normal_quantile, std_normal_quantile_raw};

/// One Monte Carlo estimate of the blocked fraction, with a Wilson score
/// confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub n: u32,
    pub r: f64,
    pub trials: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ci_level: f64,
    pub seed: u64,
}

/// Which centered statistic a sample holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StatisticKind {
    /// `sqrt(n) (s^2/(n t) - 2/pi)`
    RatioCentered,
    /// `sqrt(s^2/(n t))`, the cosine itself (uncentered, lies in [0, 1])
    CosTheta,
    /// `sqrt(d^2) - sqrt((1 - 2/pi) n)`
    DistanceCentered,
}

impl StatisticKind {
    pub fn name(&self) -> &'static str {
        match self {
            StatisticKind::RatioCentered => "ratio_centered",
            StatisticKind::CosTheta => "cos_theta",
            StatisticKind::DistanceCentered => "distance_centered",
        }
    }
}

/// Empirical draws of one limit statistic at a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct StatisticSample {
    pub kind: StatisticKind,
    pub n: u32,
    pub seed: u64,
    pub values: Vec<f64>,
}

/// Wilson score interval for a binomial proportion.
fn wilson_interval(hits: u64, trials: u64, ci_level: f64) -> Result<(f64, f64)> {
    let z = std_normal_quantile(0.5 * (1.0 + ci_level)).map_err(|_| {
        Error::domain(format!(
            "confidence level must lie strictly between 0 and 1, got {ci_level}"
        ))
    })?;
    let t = trials as f64;
    let p = hits as f64 / t;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let center = (p + z2 / (2.0 * t)) / denom;
    let half = z * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}

/// Estimate the probability that a random line through the origin hits at
/// least one ball of radius `r` at the vertices of `[-1, 1]^n`.
///
/// Deterministic for fixed `(seed, trials)` and independent of the rayon
/// worker count; fan-out is per trial index.
pub fn estimate_alpha(n: u32, r: f64, trials: u64, seed: u64, ci_level: f64) -> Result<MCEstimate> {
    let arrangement = BallArrangement::new(n, r)?;
    if trials == 0 {
        return Err(Error::domain("trial count must be at least 1"));
    }
    if !(0.0..1.0).contains(&ci_level) || ci_level <= 0.0 {
        return Err(Error::domain(format!(
            "confidence level must lie strictly between 0 and 1, got {ci_level}"
        )));
    }
    let dim = arrangement.n() as usize;
    let radius = arrangement.r();
    let hits = (0..trials)
        .into_par_iter()
        .map_init(
            || vec![0.0f64; dim],
            |buf, trial| {
                let mut rng = RandomStream::new(seed, trial).rng();
                fill_half_normal(buf, &mut rng);
                let stats = line_stats(buf).expect("half-normal draw is valid");
                u64::from(stats.d_sq.sqrt() <= radius)
            },
        )
        .sum::<u64>();
    let (ci_low, ci_high) = wilson_interval(hits, trials, ci_level)?;
    Ok(MCEstimate {
        n,
        r,
        trials,
        hits,
        p_hat: hits as f64 / trials as f64,
        ci_low,
        ci_high,
        ci_level,
        seed,
    })
}

/// Draw `trials` values of the requested limit statistic at dimension `n`.
/// Same substream-per-trial contract as [`estimate_alpha`].
pub fn sample_limit_statistic(
    kind: StatisticKind,
    n: u32,
    trials: u64,
    seed: u64,
) -> Result<StatisticSample> {
    if n == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if trials < 2 {
        return Err(Error::domain("statistic sampling requires trials >= 2"));
    }
    let nf = n as f64;
    let sqrt_n = nf.sqrt();
    let cos_sq_center = cos_sq_limit();
    let dist_center = (distance_sq_ratio_limit() * nf).sqrt();
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map_init(
            || vec![0.0f64; n as usize],
            |buf, trial| {
                let mut rng = RandomStream::new(seed, trial).rng();
                fill_half_normal(buf, &mut rng);
                let stats = line_stats(buf).expect("half-normal draw is valid");
                match kind {
                    StatisticKind::RatioCentered => sqrt_n * (stats.cos_sq - cos_sq_center),
                    StatisticKind::CosTheta => stats.cos_sq.sqrt(),
                    StatisticKind::DistanceCentered => stats.d_sq.sqrt() - dist_center,
                }
            },
        )
        .collect();
    Ok(StatisticSample {
        kind,
        n,
        seed,
        values,
    })
}

/// Result of comparing a sample's first two moments against a limit law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub empirical_mean: f64,
    pub empirical_variance: f64,
    pub law_mean: f64,
    pub law_variance: f64,
    pub tol_mean: f64,
    pub tol_var: f64,
    pub mean_pass: bool,
    /// `None` when the law variance is zero and the relative check is
    /// skipped (with this field doubling as the warning flag).
    pub variance_pass: Option<bool>,
}

impl MomentReport {
    pub fn pass(&self) -> bool {
        self.mean_pass && self.variance_pass.unwrap_or(true)
    }
}

/// Compare empirical mean and variance against `law`: the mean gap is
/// absolute (`<= tol_mean`), the variance gap relative
/// (`|var/law - 1| <= tol_var`).
pub fn moment_check(
    sample: &StatisticSample,
    law: &LimitLaw,
    tol_mean: f64,
    tol_var: f64,
) -> Result<MomentReport> {
    if sample.values.is_empty() {
        return Err(Error::domain("moment check requires a nonempty sample"));
    }
    let m = sample.values.len() as f64;
    let mean = sample.values.iter().sum::<f64>() / m;
    let variance = if sample.values.len() < 2 {
        0.0
    } else {
        sample.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0)
    };
    let mean_pass = (mean - law.mean).abs() <= tol_mean;
    let variance_pass = if law.variance == 0.0 {
        None
    } else {
        Some((variance / law.variance - 1.0).abs() <= tol_var)
    };
    Ok(MomentReport {
        empirical_mean: mean,
        empirical_variance: variance,
        law_mean: law.mean,
        law_variance: law.variance,
        tol_mean,
        tol_var,
        mean_pass,
        variance_pass,
    })
}

/// One quantile comparison inside a [`QuantileReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantileEntry {
    pub probability: f64,
    pub empirical: f64,
    pub law: f64,
    pub gap: f64,
    pub pass: bool,
}

/// Result of comparing empirical quantiles against a normal law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantileReport {
    pub entries: Vec<QuantileEntry>,
    pub tol: f64,
    pub pass: bool,
}

/// Empirical quantile with linear interpolation between order statistics
/// (the common "type 7" convention).
fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let m = sorted.len();
    let h = (m as f64 - 1.0) * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(m - 1);
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Compare empirical quantiles of the sample at the given probabilities
/// against the normal law's quantiles; passes iff every absolute gap is at
/// most `tol` (in value units).
pub fn quantile_check(
    sample: &StatisticSample,
    law: &LimitLaw,
    probabilities: &[f64],
    tol: f64,
) -> Result<QuantileReport> {
    if sample.values.len() < 1000 {
        return Err(Error::domain(format!(
            "quantile check requires at least 1000 samples, got {}",
            sample.values.len()
        )));
    }
    let sd = law.variance.sqrt();
    let mut sorted = sample.values.clone();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("statistic values are finite"));
    let mut entries = Vec::with_capacity(probabilities.len());
    for &p in probabilities {
        if !(0.0..1.0).contains(&p) || p <= 0.0 {
            return Err(Error::domain(format!(
                "quantile probabilities must lie strictly between 0 and 1, got {p}"
            )));
        }
        let emp = empirical_quantile(&sorted, p);
        let law_q = law.mean + sd * std_normal_quantile_raw(p);
        let gap = (emp - law_q).abs();
        entries.push(QuantileEntry {
            probability: p,
            empirical: emp,
            law: law_q,
            gap,
            pass: gap <= tol,
        });
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(QuantileReport { entries, tol, pass })
}

/// One row of the critical-radius convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaRow {
    pub n: u32,
    pub z: f64,
    pub r: f64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub predicted_alpha: f64,
}

/// For each `(n, z)` pair: set `r` to the critical radius, estimate the
/// blocked fraction, and attach the predicted limit `Phi(z)`.
pub fn alpha_convergence_table(
    n_list: &[u32],
    z_list: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<AlphaRow>> {
    let mut rows = Vec::with_capacity(n_list.len() * z_list.len());
    for &n in n_list {
        for &z in z_list {
            let r = crate::asymptotics::threshold_radius(n, z)?;
            let est = estimate_alpha(n, r, trials, seed, 0.95)?;
            rows.push(AlphaRow {
                n,
                z,
                r,
                p_hat: est.p_hat,
                ci_low: est.ci_low,
                ci_high: est.ci_high,
                predicted_alpha: crate::specfun::std_normal_cdf(z)?,
            });
        }
    }
    Ok(rows)
}
