use std::collections::BTreeMap;

use serde::Serialize;

use super::chain::{chain_capacity, place_chain};
use crate::error::{Error, Result};
use crate::scenario::{Band, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PlanOutcome {
    Feasible { n_haps: usize, capacity_bps: f64 },
    /// No chain with at most `n_max` HAPS meets the target.
    Infeasible { n_max: usize, best_capacity_bps: f64 },
}

impl PlanOutcome {
    pub fn n_haps(&self) -> Option<usize> {
        match self {
            PlanOutcome::Feasible { n_haps, .. } => Some(*n_haps),
            PlanOutcome::Infeasible { .. } => None,
        }
    }
}

/// Clear-sky end-to-end capacity of the placed chain with `n` HAPS.
pub fn clear_sky_capacity(scenario: &Scenario, total_distance_km: f64, n: usize) -> Result<f64> {
    let clear = scenario.weather(crate::scenario::Condition::Clear);
    let chain = place_chain(total_distance_km, n)?;
    Ok(chain_capacity(&chain, scenario.link(Band::Fso), &clear, &clear)?.end_to_end_bps)
}

/// Smallest HAPS count in `1..=n_max` whose clear-sky chain carries `target_bps`.
///
/// Bisects on the node count, then checks `n` and `n - 1` directly; if the
/// capacity curve turns out not to be monotone the answer comes from a
/// linear scan instead.
pub fn plan_min_nodes(scenario: &Scenario, total_distance_km: f64, target_bps: f64, n_max: usize) -> Result<PlanOutcome> {
    if !(target_bps >= 0.0) || !target_bps.is_finite() {
        return Err(Error::domain(format!("target rate must be finite and non-negative, got {target_bps}")));
    }
    if n_max == 0 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    let mut memo = BTreeMap::new();
    let mut capacity = |n: usize| -> Result<f64> {
        if let Some(&c) = memo.get(&n) {
            return Ok(c);
        }
        let c = clear_sky_capacity(scenario, total_distance_km, n)?;
        memo.insert(n, c);
        Ok(c)
    };

    let best = capacity(n_max)?;
    if best < target_bps {
        return Ok(PlanOutcome::Infeasible { n_max, best_capacity_bps: best });
    }
    let (mut lo, mut hi) = (1, n_max);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if capacity(mid)? >= target_bps {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let n = lo;
    let meets = capacity(n)? >= target_bps;
    let previous_fails = n == 1 || capacity(n - 1)? < target_bps;
    if meets && previous_fails {
        return Ok(PlanOutcome::Feasible { n_haps: n, capacity_bps: capacity(n)? });
    }
    for n in 1..=n_max {
        let c = capacity(n)?;
        if c >= target_bps {
            return Ok(PlanOutcome::Feasible { n_haps: n, capacity_bps: c });
        }
    }
    Ok(PlanOutcome::Infeasible { n_max, best_capacity_bps: best })
}
