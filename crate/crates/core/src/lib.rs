//! First-order convex optimization toolkit: proximal (sub)gradient and
//! conditional gradient methods over Bregman geometries, driven by a common
//! auxiliary-function engine with online convergence certificates.
//!
//! Module map:
//! * [`geometry`] — norms, prox-functions, Bregman distances, feasible sets,
//!   and the closed-form canonical subproblem solvers;
//! * [`problems`] — non-smooth and structured problem classes with their
//!   lower approximation models and adapters;
//! * [`models`] — the auxiliary-function state machine (extended
//!   mirror-descent, dual averaging, hybrid) kept in exact canonical form;
//! * [`schedules`] — weight/scaling parameter sequences and their growth
//!   validators;
//! * [`engine`] — the classical and modified methods, the conditional
//!   gradient specialization, certificate tracking, and gap-bound tables;
//! * [`instances`] — seeded benchmark families with constructed optima.

pub mod error;
pub mod geometry;
pub mod instances;
pub mod models;
pub mod problems;
pub mod rng;
pub mod schedules;
pub mod engine;

pub use error::{Error, Result};
