//! Link budgets, HAPS relay-chain backhaul capacity and Monte Carlo
//! access-rate distributions for an on-demand emergency network.
//!
//! The crate is organised bottom-up:
//!
//! - [`scenario`]: platforms, per-band link parameters, weather tables and
//!   the JSON scenario document.
//! - [`geometry`]: spherical-earth chords, ray clearance and tropospheric
//!   path segments.
//! - [`atmosphere`]: layered Beer-Lambert attenuation.
//! - [`link_budget`]: FSO, THz, Ka-band and S-band budgets.
//! - [`network`]: chain placement, bottleneck capacity, sweeps, access CDFs
//!   and the minimal-chain planner.
//! - [`cli`]: the `stratolink` command-line front end.

pub mod atmosphere;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod link_budget;
pub mod network;
pub mod scenario;

pub use error::{Error, Result};

pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;
