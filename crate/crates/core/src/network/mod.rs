//! Relay-chain backhaul, access-rate Monte Carlo and deployment planning.

mod access;
mod chain;
mod planner;

pub use access::*;
pub use chain::*;
pub use planner::*;
