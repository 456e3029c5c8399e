//! Simulation and verification toolkit for symmetric stable processes
//! realized as subordinate Brownian motion.
//!
//! The crate evaluates the explicit spectral bounds on torsion functions of
//! convex domains (eigenvalue sandwiches, renewal-function sandwiches, the
//! two-sided eigenvalue window for subordinate processes, and the ball
//! comparison bounds), simulates exit times by repeated resurrection of the
//! subordinate killed process, and assembles Monte Carlo estimates and
//! closed forms into pass/fail verdicts.
//!
//! Modules:
//! - [`analytic`]: gamma, Bessel zeros, Laplace exponents, renewal
//!   functions, and every closed-form bound.
//! - [`geometry`]: convex domains (ball, slab, box, halfspace polytopes)
//!   with exact distance and supporting-hyperplane queries.
//! - [`stochastic`]: reproducible samplers for Brownian exits, stable
//!   subordinators, and the resurrection engine.
//! - [`estimators`]: parallel Monte Carlo estimators with standard errors.
//! - [`verify`]: bound reports with pass/fail/inconclusive verdicts.
//! - [`suite`]: the desk-scale verification grid used by the CLI and the
//!   acceptance tests.

pub mod analytic;
pub mod error;
pub mod estimators;
pub mod geometry;
pub mod stochastic;
pub mod suite;
pub mod verify;

pub use analytic::{BoundLabel, BoundSet, ExtReal, StableParams};
pub use error::{Error, Result};
pub use geometry::ConvexDomain;
pub use stochastic::RngStream;
