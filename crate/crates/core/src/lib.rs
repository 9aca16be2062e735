//! Discrete Bayesian-network engine with a bundled curriculum-effectiveness
//! model.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: variables, structure, CPTs, evidence, JSON model documents
//! - [`inference`]: exact inference by variable elimination, plus a
//!   full-joint enumeration oracle
//! - [`learning`]: parameter fitting, naive Bayes, forward sampling
//! - [`impact`]: log-odds impact ranking and d-separation
//! - [`curriculum`]: the bundled nine-variable curriculum model and plan
//!   evaluation
//! - [`app`]: JSON request handling shared by the CLI, HTTP service and
//!   C interface

pub mod app;
pub mod curriculum;
pub mod error;
pub mod impact;
pub mod inference;
pub mod learning;
pub mod model;

pub use error::{Error, ErrorCode, Result};
