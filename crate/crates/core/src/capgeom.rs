//! Exact geometry of hyperspheres, caps, and ball shadows.
//!
//! A ball of radius `r` centered at a cube vertex (distance `sqrt(n)` from
//! the origin) casts a shadow on the circumscribing sphere that is a cap of
//! half-angle `theta` with `sin(theta) = r / sqrt(n)`. Cap areas reduce to
//! the beta CDF, so every fraction here is computed from [`crate::specfun`]
//! without ever forming `2^n` or `Gamma(n/2)` outside log space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{log_gamma, reg_inc_beta, BetaParams};

/// A spherical cap on the sphere `S^{n-1}(R)`, specified by its half-angle.
///
/// The angle form is interchangeable with the distance-to-plane form
/// (`epsilon = R cos(theta)`) and the chord-radius form
/// (`chord = 2 R sin(theta/2)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapSpec {
    n: u32,
    radius: f64,
    theta: f64,
}

impl CapSpec {
    pub fn new(n: u32, radius: f64, theta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("cap dimension must be >= 2, got {n}")));
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::domain(format!(
                "sphere radius must be finite and positive, got {radius}"
            )));
        }
        if !theta.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::domain(format!(
                "cap half-angle must lie in [0, pi/2], got {theta}"
            )));
        }
        Ok(Self { n, radius, theta })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Distance from the center of the sphere to the cutting plane.
    pub fn epsilon(&self) -> f64 {
        self.radius * self.theta.cos()
    }

    /// Chord radius: distance from the cap's pole to its rim.
    pub fn chord(&self) -> f64 {
        2.0 * self.radius * (self.theta / 2.0).sin()
    }
}

/// Balls of common radius `r` at the `2^n` vertices of `[-1, 1]^n`.
///
/// `r = sqrt(n)` (balls reaching the origin) is accepted as the closed
/// total-blockage boundary; anything larger is rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallArrangement {
    n: u32,
    r: f64,
}

impl BallArrangement {
    pub fn new(n: u32, r: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!(
                "arrangement dimension must be >= 2, got {n}"
            )));
        }
        let max_r = (n as f64).sqrt();
        if !r.is_finite() || r < 0.0 || r > max_r {
            return Err(Error::domain(format!(
                "ball radius must lie in [0, sqrt(n)] = [0, {max_r}], got {r}"
            )));
        }
        Ok(Self { n, r })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Surface area of the sphere `S^{n-1}(R)`: `2 pi^{n/2} R^{n-1} / Gamma(n/2)`.
///
/// Evaluated in log space; an error is returned if the area itself overflows
/// f64 range.
pub fn sphere_area(n: u32, radius: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("sphere dimension must be >= 2, got {n}")));
    }
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::domain(format!(
            "sphere radius must be finite and positive, got {radius}"
        )));
    }
    let nf = n as f64;
    let ln_area = std::f64::consts::LN_2 + 0.5 * nf * libm::log(std::f64::consts::PI)
        + (nf - 1.0) * libm::log(radius)
        - log_gamma(0.5 * nf)?;
    let area = libm::exp(ln_area);
    if !area.is_finite() {
        return Err(Error::numerical(format!(
            "sphere area overflows f64 (ln area = {ln_area}) for n={n}, R={radius}"
        )));
    }
    Ok(area)
}

/// Convert a cap half-angle to the (plane distance, chord radius) pair.
pub fn cap_convert(theta: f64, radius: f64) -> Result<(f64, f64)> {
    // CapSpec owns the validation; n is irrelevant to the conversion.
    let spec = CapSpec::new(2, radius, theta)?;
    Ok((spec.epsilon(), spec.chord()))
}

/// Area of a cap with half-angle `theta` on `S^{n-1}(R)`:
/// half the sphere area times `F(sin^2 theta, (n-1)/2, 1/2)`.
pub fn cap_area(spec: &CapSpec) -> Result<f64> {
    let area = sphere_area(spec.n(), spec.radius())?;
    Ok(0.5 * area * cap_area_fraction(spec.n(), spec.theta())?)
}

/// Fraction of the sphere covered by a cap of half-angle `theta`.
fn cap_area_fraction(n: u32, theta: f64) -> Result<f64> {
    let s = theta.sin();
    let params = BetaParams::new(0.5 * (n as f64 - 1.0), 0.5)?;
    reg_inc_beta((s * s).min(1.0), params)
}

/// Shadow fraction of a single ball of radius `r` at distance `sqrt(n)`:
/// `P_n(r) = F(r^2/n, (n-1)/2, 1/2) / 2`.
pub fn single_shadow_fraction(n: u32, r: f64) -> Result<f64> {
    let arrangement = BallArrangement::new(n, r)?;
    let nf = arrangement.n() as f64;
    // r = sqrt(n) is the closed total-blockage boundary; rounding in
    // sqrt/square would otherwise leave z one ulp short of 1, which the
    // square-root singularity of F(., ., 1/2) amplifies to ~1e-8.
    let z = if arrangement.r() >= nf.sqrt() {
        1.0
    } else {
        (arrangement.r() * arrangement.r() / nf).min(1.0)
    };
    let params = BetaParams::new(0.5 * (nf - 1.0), 0.5)?;
    Ok(0.5 * reg_inc_beta(z, params)?)
}

/// Upper bound `(1/sqrt(pi)) z^{(n-1)/2}` on the tail behavior of
/// `F(z, (n-1)/2, 1/2)`.
///
/// This is the small-z (equivalently fixed-r, growing-n) regime bound that
/// drives the vanishing-shadow conclusion; it does not dominate F for z near
/// 1, so callers should feed it shadow-geometry arguments (`z = r^2/n` with
/// `r <= 1`).
pub fn beta_tail_bound(n: u32, z: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain(format!(
            "beta_tail_bound requires n >= 3, got {n}"
        )));
    }
    if !z.is_finite() || !(0.0..=1.0).contains(&z) {
        return Err(Error::domain(format!(
            "beta_tail_bound requires z in [0, 1], got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let exponent = 0.5 * (n as f64 - 1.0);
    Ok(INV_SQRT_PI * libm::exp(exponent * libm::log(z)))
}

const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Total blocked fraction `min(1, 2^n P_n(r))` in the disjoint-cap regime.
///
/// Valid for `r <= 1`: adjacent caps are tangent exactly at `r = 1` (the
/// tangency test below verifies `cos(2 theta_1) = (n-2)/n`), so the shadow
/// caps cannot overlap and the union is the plain sum.
pub fn disjoint_union_fraction(n: u32, r: f64) -> Result<f64> {
    if !r.is_finite() || !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!(
            "disjoint_union_fraction requires r in [0, 1] (caps overlap beyond 1), got {r}"
        )));
    }
    let single = single_shadow_fraction(n, r)?;
    if single == 0.0 {
        return Ok(0.0);
    }
    // 2^n * single in log space; 2^n alone overflows f64 near n = 1024.
    let ln_total = n as f64 * std::f64::consts::LN_2 + libm::log(single);
    if ln_total >= 0.0 {
        return Ok(1.0);
    }
    Ok(libm::exp(ln_total).min(1.0))
}

/// Inner-sphere radius of the tangent arrangement of unit balls at the
/// vertices of `[-2, 2]^n`, and whether that sphere pokes out of the cube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteeleRadius {
    pub radius: f64,
    pub escapes_cube: bool,
}

/// `sqrt(n) - 1`, which exceeds the cube half-width 2 exactly when `n > 9`.
pub fn steele_inner_radius(n: u32) -> Result<SteeleRadius> {
    if n < 2 {
        return Err(Error::domain(format!(
            "arrangement dimension must be >= 2, got {n}"
        )));
    }
    let radius = (n as f64).sqrt() - 1.0;
    Ok(SteeleRadius {
        radius,
        escapes_cube: radius > 2.0,
    })
}
