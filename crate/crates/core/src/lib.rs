//! Capacity expansion and dispatch model for a single bidding zone with
//! demand-side flexibility and capacity mechanisms.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod defaults;
pub mod domain;
pub mod flex_derive;
pub mod formulation;
pub mod lp;
pub mod report;
pub mod runner;
pub mod synth;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
