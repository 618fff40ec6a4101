use serde::Serialize;

use crate::error::{Error, Result};
use crate::link_budget::fso_budget;
use crate::scenario::{Band, LinkBudgetResult, LinkSpec, Node, NodeKind, Scenario, WeatherState};

/// Surface offset of the first HAPS from the ground station.
pub const FIRST_HAPS_OFFSET_KM: f64 = 20.0;

/// Builds a ground station plus `n_haps` HAPS, the last one at `total_distance_km`.
///
/// The first HAPS hovers near the station (at most [`FIRST_HAPS_OFFSET_KM`]
/// away); the rest are equally spaced up to the end-point.
pub fn place_chain(total_distance_km: f64, n_haps: usize) -> Result<Vec<Node>> {
    if n_haps == 0 {
        return Err(Error::domain("a chain needs at least one HAPS"));
    }
    if !(total_distance_km.is_finite() && total_distance_km > 0.0) {
        return Err(Error::domain(format!(
            "chain distance must be positive, got {total_distance_km} km"
        )));
    }
    let mut chain = Vec::with_capacity(n_haps + 1);
    chain.push(Node::new("ground-station", NodeKind::GroundStation, 0.0, 0.0));
    if n_haps == 1 {
        chain.push(Node::haps("haps-1", NodeKind::HapsEndpoint, total_distance_km));
        return Ok(chain);
    }
    let first = FIRST_HAPS_OFFSET_KM.min(total_distance_km / n_haps as f64);
    let spacing = (total_distance_km - first) / (n_haps - 1) as f64;
    for i in 0..n_haps {
        let (kind, arc) = if i == n_haps - 1 {
            (NodeKind::HapsEndpoint, total_distance_km)
        } else {
            (NodeKind::HapsRelay, first + spacing * i as f64)
        };
        chain.push(Node::haps(format!("haps-{}", i + 1), kind, arc));
    }
    Ok(chain)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainResult {
    pub n_haps: usize,
    pub total_distance_km: f64,
    /// Ground station to first HAPS, then HAPS to HAPS.
    pub per_hop: Vec<LinkBudgetResult>,
    pub end_to_end_bps: f64,
    /// Index into `per_hop` of the first hop achieving the minimum.
    pub bottleneck_hop: usize,
}

/// Weather region of a hop. The first hop sits in the central region; later
/// hops take the region nearer to their midpoint. Inter-HAPS hops that stay
/// above the weather ceiling get 0 dB from either region.
fn hop_weather<'w>(
    chain: &[Node],
    hop: usize,
    central: &'w WeatherState,
    disaster: &'w WeatherState,
) -> &'w WeatherState {
    if hop == 0 {
        return central;
    }
    let (a, b) = (&chain[hop], &chain[hop + 1]);
    let station = chain[0].ground_arc_km;
    let region = chain[chain.len() - 1].ground_arc_km;
    let mid = 0.5 * (a.ground_arc_km + b.ground_arc_km);
    if (mid - station).abs() <= (region - mid).abs() {
        central
    } else {
        disaster
    }
}

/// Evaluates every hop of `chain` with the FSO budget and takes the bottleneck.
pub fn chain_capacity(
    chain: &[Node],
    fso: &LinkSpec,
    central: &WeatherState,
    disaster: &WeatherState,
) -> Result<ChainResult> {
    if chain.len() < 2 {
        return Err(Error::domain("a chain needs at least two nodes"));
    }
    if fso.band != Band::Fso {
        return Err(Error::domain("backhaul chains use the fso link"));
    }
    let mut per_hop = Vec::with_capacity(chain.len() - 1);
    for hop in 0..chain.len() - 1 {
        let (a, b) = (&chain[hop], &chain[hop + 1]);
        let weather = hop_weather(chain, hop, central, disaster);
        per_hop.push(fso_budget(a, b, fso, weather)?);
    }
    let (bottleneck_hop, end_to_end_bps) = per_hop
        .iter()
        .map(|h| h.capacity_bps)
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, v)| if v < bv { (i, v) } else { (bi, bv) });
    Ok(ChainResult {
        n_haps: chain.len() - 1,
        total_distance_km: chain[chain.len() - 1].ground_arc_km - chain[0].ground_arc_km,
        per_hop,
        end_to_end_bps,
        bottleneck_hop,
    })
}

/// Backhaul capacity over the Cartesian product of the axes, sorted by
/// `(n_haps, distance)`.
pub fn sweep_backhaul(scenario: &Scenario, distances_km: &[f64], node_counts: &[usize]) -> Result<Vec<ChainResult>> {
    let central = scenario.central_weather();
    let disaster = scenario.disaster_weather();
    let fso = scenario.link(Band::Fso);
    let mut counts = node_counts.to_vec();
    counts.sort_unstable();
    let mut distances = distances_km.to_vec();
    distances.sort_by(f64::total_cmp);

    let mut rows = Vec::with_capacity(counts.len() * distances.len());
    for &n in &counts {
        for &d in &distances {
            let chain = place_chain(d, n)?;
            rows.push(chain_capacity(&chain, fso, &central, &disaster)?);
        }
    }
    Ok(rows)
}
