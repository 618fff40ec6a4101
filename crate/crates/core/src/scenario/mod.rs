//! Scenario description, built-in defaults and validation.
//!
//! A [`Scenario`] is immutable once loaded and can be shared read-only
//! between worker threads.

mod file;
mod types;

use std::path::Path;

pub use file::{ScenarioFile, SPEC_VERSION};
pub use types::*;

use crate::error::{Error, Result};
use crate::network::place_chain;

/// Default bird's-eye distance between the central station and the disaster region.
pub const DEFAULT_DISASTER_DISTANCE_KM: f64 = 800.0;
/// Default number of HAPS (including the end-point) in the scenario chain.
pub const DEFAULT_CHAIN_HAPS: usize = 3;
pub const DEFAULT_DISASTER_RADIUS_KM: f64 = 50.0;

/// A value per terminal kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerTerminal<T> {
    pub handheld_user: T,
    pub vsat_terminal: T,
    pub uav: T,
    pub terrestrial_bs: T,
}

impl<T: Copy> PerTerminal<T> {
    /// `None` for non-terminal kinds.
    pub fn get(&self, kind: NodeKind) -> Option<T> {
        match kind {
            NodeKind::HandheldUser => Some(self.handheld_user),
            NodeKind::VsatTerminal => Some(self.vsat_terminal),
            NodeKind::Uav => Some(self.uav),
            NodeKind::TerrestrialBs => Some(self.terrestrial_bs),
            _ => None,
        }
    }

    pub fn set(&mut self, kind: NodeKind, value: T) {
        match kind {
            NodeKind::HandheldUser => self.handheld_user = value,
            NodeKind::VsatTerminal => self.vsat_terminal = value,
            NodeKind::Uav => self.uav = value,
            NodeKind::TerrestrialBs => self.terrestrial_bs = value,
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxes {
    pub distances_km: Vec<f64>,
    pub node_counts: Vec<usize>,
}

impl Default for SweepAxes {
    fn default() -> Self {
        SweepAxes {
            distances_km: vec![400.0, 500.0, 600.0, 700.0, 800.0],
            node_counts: vec![3, 4, 5],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Ground station first, end-point HAPS last.
    pub chain: Vec<Node>,
    pub disaster_center_arc_km: f64,
    pub disaster_radius_km: f64,
    pub populations: PerTerminal<u64>,
    /// Fraction of each population simultaneously sharing an RF access band.
    pub activity_factors: PerTerminal<f64>,
    pub weather_disaster: Condition,
    pub weather_central: Condition,
    pub atmosphere: Atmosphere,
    /// Indexed by [`Band::index`].
    pub links: [LinkSpec; 4],
    pub rng_seed: u64,
    pub trials: u32,
    pub sweep: SweepAxes,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            chain: place_chain(DEFAULT_DISASTER_DISTANCE_KM, DEFAULT_CHAIN_HAPS)
                .expect("default chain is valid"),
            disaster_center_arc_km: DEFAULT_DISASTER_DISTANCE_KM,
            disaster_radius_km: DEFAULT_DISASTER_RADIUS_KM,
            populations: PerTerminal {
                handheld_user: 1_000_000,
                vsat_terminal: 1000,
                uav: 100,
                terrestrial_bs: 100,
            },
            activity_factors: PerTerminal {
                handheld_user: 1e-3,
                vsat_terminal: 1.0,
                uav: 1.0,
                terrestrial_bs: 1.0,
            },
            weather_disaster: Condition::Clear,
            weather_central: Condition::Clear,
            atmosphere: Atmosphere::default(),
            links: Band::ALL.map(default_linkspec),
            rng_seed: 0,
            trials: 1,
            sweep: SweepAxes::default(),
        }
    }
}

impl Scenario {
    pub fn link(&self, band: Band) -> &LinkSpec {
        &self.links[band.index()]
    }

    pub fn link_mut(&mut self, band: Band) -> &mut LinkSpec {
        &mut self.links[band.index()]
    }

    pub fn ground_station(&self) -> &Node {
        &self.chain[0]
    }

    pub fn endpoint(&self) -> &Node {
        self.chain.last().expect("validated chain is non-empty")
    }

    pub fn weather(&self, condition: Condition) -> WeatherState {
        WeatherState::new(condition, self.atmosphere)
    }

    pub fn central_weather(&self) -> WeatherState {
        self.weather(self.weather_central)
    }

    pub fn disaster_weather(&self) -> WeatherState {
        self.weather(self.weather_disaster)
    }

    /// Checks every model invariant; the error names the offending key.
    pub fn validate(&self) -> Result<()> {
        validate_chain(&self.chain)?;
        if !(self.disaster_center_arc_km.is_finite() && self.disaster_center_arc_km >= 0.0) {
            return Err(Error::config(
                "disaster_center_arc_km",
                format!("must be finite and non-negative, got {}", self.disaster_center_arc_km),
            ));
        }
        if !(self.disaster_radius_km.is_finite() && self.disaster_radius_km > 0.0) {
            return Err(Error::config(
                "disaster_radius_km",
                format!("must be positive, got {}", self.disaster_radius_km),
            ));
        }
        for kind in NodeKind::TERMINALS {
            let af = self.activity_factors.get(kind).unwrap_or(1.0);
            if !(af > 0.0 && af <= 1.0) {
                return Err(Error::config(
                    format!("activity_factors.{kind}"),
                    format!("must lie in (0, 1], got {af}"),
                ));
            }
        }
        self.atmosphere
            .validate()
            .map_err(|(key, msg)| Error::config(key, msg))?;
        for (i, spec) in self.links.iter().enumerate() {
            let band = Band::ALL[i];
            if spec.band != band {
                return Err(Error::config(
                    format!("links.{}", band.key()),
                    format!("band mismatch: slot holds {:?}", spec.band),
                ));
            }
            spec.validate()
                .map_err(|(field, msg)| Error::config(format!("links.{}.{field}", band.key()), msg))?;
        }
        if self.trials < 1 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.sweep.distances_km.is_empty() {
            return Err(Error::config("sweep.distances_km", "must not be empty"));
        }
        if let Some(d) = self
            .sweep
            .distances_km
            .iter()
            .find(|d| !(d.is_finite() && **d > 0.0))
        {
            return Err(Error::config(
                "sweep.distances_km",
                format!("distances must be positive, got {d}"),
            ));
        }
        if self.sweep.node_counts.is_empty() {
            return Err(Error::config("sweep.node_counts", "must not be empty"));
        }
        if self.sweep.node_counts.contains(&0) {
            return Err(Error::config("sweep.node_counts", "node counts must be at least 1"));
        }
        Ok(())
    }
}

fn validate_chain(chain: &[Node]) -> Result<()> {
    if chain.len() < 2 {
        return Err(Error::config(
            "chain",
            format!("needs at least a ground station and an end-point HAPS, got {} nodes", chain.len()),
        ));
    }
    let last = chain.len() - 1;
    for (i, node) in chain.iter().enumerate() {
        let key = format!("chain[{i}]");
        node.validate()
            .map_err(|msg| Error::config(format!("{key}.{}", field_of(&msg)), msg))?;
        let expected_ok = match i {
            0 => node.kind == NodeKind::GroundStation,
            i if i == last => node.kind == NodeKind::HapsEndpoint,
            _ => node.kind == NodeKind::HapsRelay,
        };
        if !expected_ok {
            return Err(Error::config(
                format!("{key}.kind"),
                format!(
                    "chain must be ground_station, haps_relay..., haps_endpoint; found {} at position {i}",
                    node.kind
                ),
            ));
        }
        if i > 0 && node.ground_arc_km <= chain[i - 1].ground_arc_km {
            return Err(Error::config(
                format!("{key}.ground_arc_km"),
                format!(
                    "ground arcs must be strictly increasing ({} after {})",
                    node.ground_arc_km,
                    chain[i - 1].ground_arc_km
                ),
            ));
        }
    }
    Ok(())
}

fn field_of(msg: &str) -> &'static str {
    if msg.starts_with("ground_arc_km") {
        "ground_arc_km"
    } else {
        "altitude_km"
    }
}

/// Reads, default-fills and validates a scenario document.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    ScenarioFile::read(path.as_ref())?.into_scenario()
}

/// Parses a scenario document held in memory.
pub fn parse_scenario(json: &str) -> Result<Scenario> {
    ScenarioFile::parse(json)?.into_scenario()
}
