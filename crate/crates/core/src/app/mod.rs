//! Front ends over the engine: a JSON request [`Service`], the command line
//! ([`cli::run`]) and an HTTP server ([`router`], [`serve`]). All three
//! render through the same handlers.

mod api;
pub mod cli;
mod render;
mod server;

pub use api::{
    ApiError, Criterion, Endpoint, ImpactRequest, InferRequest, JointRequest, LikelihoodRequest, MapRequest,
    PlanRequest, Service, WeightsRequest, WhatifRequest,
};
pub use render::{Renderer, DEFAULT_PRECISION, MAX_PRECISION};
pub use server::{router, serve};
