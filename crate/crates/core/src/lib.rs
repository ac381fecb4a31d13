//! Random-network capacity analysis: small-world and dual-radio network
//! generators, exact s-T min-cut solving, closed-form concentration bounds,
//! and a seeded Monte Carlo harness that checks the bounds empirically.
//!
//! The crate is organized around the analysis pipeline:
//!
//! * [`graph`] — graph, role, and cut value types plus cut-capacity evaluation;
//! * [`generators`] — seeded samplers for the three random models and their
//!   expected-weight graphs;
//! * [`mincut`] — exact max-flow/min-cut solving and brute-force oracles;
//! * [`bounds`] — closed-form evaluation of the capacity bounds (λ, ε, c_min,
//!   per-cut and union tail bounds, assembled reports);
//! * [`experiments`] — Monte Carlo concentration and independence experiments;
//! * [`seeding`] — the deterministic seed-derivation discipline everything
//!   above shares.

#![forbid(unsafe_code)]

pub mod bounds;
mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod mincut;
pub mod seeding;

pub use error::{Error, Result};
