//! One-dimensional classical dynamics from multiplicative Lagrangians and
//! Hamiltonians.
//!
//! The standard additive forms L = T - V and H = T + V are one member of a
//! much larger family producing identical equations of motion. This crate
//! implements the deformed, product-form ("multiplicative") Lagrangians and
//! Hamiltonians built around a velocity-scale parameter lambda, the infinite
//! polynomial hierarchies they generate, and their relativistic and
//! two-particle counterparts, together with the machinery needed to verify
//! their defining properties numerically: exact second-order automatic
//! differentiation, adaptive quadrature, Euler-Lagrange and Hamilton
//! equation-of-motion extraction, trajectory integration with conservation
//! monitoring, and series reconstruction checks.

pub mod dynamics;
pub mod eom;
pub mod error;
pub mod hamiltonians;
pub mod hierarchy;
pub mod lagrangians;
pub mod numerics;
pub mod potentials;
pub mod twobody;

pub use error::{Error, Result};
