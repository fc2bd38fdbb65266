//! Cavity-membrane dynamics of internally coupled ears, solved to first order
//! in the air/membrane density ratio.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod oracle1d;
pub mod perturbation;
pub mod special;
pub mod spinning;
pub mod transient;

pub use error::{Error, Result};
