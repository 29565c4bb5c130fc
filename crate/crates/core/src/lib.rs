//! Entropy set functions for subshifts over countable groups.

pub mod covers;
pub mod description;
pub mod entropy;
pub mod error;
pub mod group;
pub mod measure;
pub mod properties;
pub mod report;
pub mod reproduce;
pub mod symbolic;

pub use error::{Error, Result};
