//! Tuning arithmetic and keyboard layouts for 53-tone equal temperament
//! (and the 12/17/24/29/41-tone systems that embed in it).
//!
//! The crate is `no_std` and only needs `alloc`:
//!
//! - [`pitch_math`]: ratios, heights, cents, EDO steps and frequencies.
//! - [`rational_approx`]: continued fractions, the fifth-approximation table,
//!   the next-better-division search and the overtone table.
//! - [`fifth_chain`]: chain-of-fifths step mapping and German note spelling.
//! - [`layout`]: the shipped three-manual (and two-manual) layout variants,
//!   their validation and derived views.
#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

mod error;
pub mod fifth_chain;
pub mod layout;
pub mod pitch_math;
pub mod rational_approx;

pub use error::{Error, Result};
