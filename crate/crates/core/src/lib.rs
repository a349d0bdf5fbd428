//! Diversity-multiplexing tradeoff toolkit for intensity-modulated optical
//! wireless MIMO links with peak and average power limits.
//!
//! Channel sampling, the truncated-exponential input law, capacity bounds,
//! the exponent optimizer, closed-form DMT curves, outage Monte Carlo and
//! random-codebook simulation. The `owc-dmt` binary wraps them as a CLI.

// Negated float comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod capacity;
pub mod channel;
pub mod cli;
pub mod coding;
pub mod dmt;
pub mod error;
pub mod exponent;
pub mod outage;
pub mod power;

pub use error::{Error, Result};
