//! Exact algebra and numerical dynamics for finitely generated semigroups
//! of rational maps.

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod expr;
pub mod lift;
pub mod output;

pub use error::{Error, Result};
