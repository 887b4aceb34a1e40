//! Categorical color palettes from charged-particle equilibria.
//!
//! Colors are placed on a sphere around mid-gray in CIELAB so that every
//! color sits at the same perceptual distance from the gray background, and
//! spread over that sphere by relaxing them as mutually repelling unit
//! charges. A hue-wheel baseline and a contrast evaluation harness are
//! included for comparison.

pub mod color_space;
pub mod equilibrium;
pub mod error;
pub mod evaluation;
pub mod metrics;
pub mod parallel;
pub mod render;
pub mod schemes;

pub use error::{Error, Result};
