//! Geometry and Monte Carlo machinery for the "blocked light" question:
//! balls of common radius sit at the `2^n` vertices of the cube `[-1, 1]^n`,
//! a light source sits at the origin, and we ask what fraction of directions
//! is blocked.
//!
//! - [`specfun`]: log-gamma, regularized incomplete beta, normal CDF and
//!   quantile — the numerical substrate for every exact formula.
//! - [`capgeom`]: hypersphere and cap areas, exact shadow fractions in the
//!   disjoint regime, and the vanishing-shadow tail bound.
//! - [`randgeom`]: seeded sampling on spheres and the nearest-vertex
//!   reduction of a random line to half-normal statistics.
//! - [`mc`]: the Monte Carlo estimator of the blocked fraction plus moment
//!   and quantile convergence checks.
//! - [`asymptotics`]: the limit laws that govern the critical ball radius.
//! - [`concentration`]: binomial latitudes of hypercube vertices, slab and
//!   cap masses.

pub mod asymptotics;
pub mod capgeom;
pub mod concentration;
pub mod error;
pub mod mc;
pub mod randgeom;
pub mod specfun;

pub use asymptotics::{LimitLaw, MomentSet, Regime};
pub use capgeom::{BallArrangement, CapSpec, SteeleRadius};
pub use concentration::{LatitudeModel, SlabProbability};
pub use error::{Error, Result};
pub use mc::{MCEstimate, MomentReport, QuantileReport, StatisticKind, StatisticSample};
pub use randgeom::{LineStats, RandomStream};
pub use specfun::BetaParams;
