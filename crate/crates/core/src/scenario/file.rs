//! JSON document layer. Every field is optional; omitted fields take the
//! built-in defaults and unknown keys are rejected.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::types::{Atmosphere, Band, Carrier, Condition, Layer, LinkSpec, Node, NodeKind, WeatherCoefficients};
use super::{PerTerminal, Scenario, SweepAxes, DEFAULT_CHAIN_HAPS, DEFAULT_DISASTER_DISTANCE_KM};
use crate::error::{Error, Result};
use crate::network::place_chain;

/// Schema version accepted by this build.
pub const SPEC_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec_version: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<Node>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disaster_center_arc_km: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disaster_radius_km: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub populations: Option<TerminalTable<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub activity_factors: Option<TerminalTable<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weather_disaster: Option<Condition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weather_central: Option<Condition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atmosphere: Option<AtmosphereFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub links: Option<BandTable<LinkOverride>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepFile>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TerminalTable<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub handheld_user: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vsat_terminal: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uav: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terrestrial_bs: Option<T>,
}

impl<T: Copy> TerminalTable<T> {
    fn apply(&self, target: &mut PerTerminal<T>) {
        let entries = [
            (NodeKind::HandheldUser, self.handheld_user),
            (NodeKind::VsatTerminal, self.vsat_terminal),
            (NodeKind::Uav, self.uav),
            (NodeKind::TerrestrialBs, self.terrestrial_bs),
        ];
        for (kind, value) in entries {
            if let Some(v) = value {
                target.set(kind, v);
            }
        }
    }

    fn full(values: &PerTerminal<T>) -> Self {
        TerminalTable {
            handheld_user: Some(values.handheld_user),
            vsat_terminal: Some(values.vsat_terminal),
            uav: Some(values.uav),
            terrestrial_bs: Some(values.terrestrial_bs),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandTable<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fso: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thz: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ka_band: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_band: Option<T>,
}

impl<T> BandTable<T> {
    fn entries(&self) -> [(Band, Option<&T>); 4] {
        [
            (Band::Fso, self.fso.as_ref()),
            (Band::Thz, self.thz.as_ref()),
            (Band::KaBand, self.ka_band.as_ref()),
            (Band::SBand, self.s_band.as_ref()),
        ]
    }

    fn from_fn(mut f: impl FnMut(Band) -> T) -> Self {
        BandTable {
            fso: Some(f(Band::Fso)),
            thz: Some(f(Band::Thz)),
            ka_band: Some(f(Band::KaBand)),
            s_band: Some(f(Band::SBand)),
        }
    }
}

/// Field-by-field override of a band's [`LinkSpec`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkOverride {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavelength_nm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequency_ghz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tx_power_dbm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tx_gain_dbi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rx_gain_dbi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_psd_dbm_per_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tx_efficiency: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rx_efficiency: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rx_telescope_diameter_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pointing_error_tx_urad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pointing_error_rx_urad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_divergence_urad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub responsivity_a_per_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_current_density_a_per_sqrt_hz: Option<f64>,
}

impl LinkOverride {
    fn apply(&self, spec: &mut LinkSpec) -> Result<()> {
        let prefix = format!("links.{}", spec.band.key());
        match (spec.carrier, self.wavelength_nm, self.frequency_ghz) {
            (Carrier::WavelengthNm(_), _, Some(_)) => {
                return Err(Error::config(
                    format!("{prefix}.frequency_ghz"),
                    "the FSO carrier is set with wavelength_nm",
                ))
            }
            (Carrier::FrequencyGhz(_), Some(_), _) => {
                return Err(Error::config(
                    format!("{prefix}.wavelength_nm"),
                    "RF carriers are set with frequency_ghz",
                ))
            }
            (Carrier::WavelengthNm(_), Some(nm), None) => spec.carrier = Carrier::WavelengthNm(nm),
            (Carrier::FrequencyGhz(_), None, Some(f)) => spec.carrier = Carrier::FrequencyGhz(f),
            _ => {}
        }
        set(&mut spec.tx_power_dbm, self.tx_power_dbm);
        set(&mut spec.bandwidth_hz, self.bandwidth_hz);
        set(&mut spec.tx_gain_dbi, self.tx_gain_dbi);
        set(&mut spec.rx_gain_dbi, self.rx_gain_dbi);
        set(&mut spec.noise_psd_dbm_per_hz, self.noise_psd_dbm_per_hz);

        let optical = [
            ("tx_efficiency", self.tx_efficiency),
            ("rx_efficiency", self.rx_efficiency),
            ("rx_telescope_diameter_m", self.rx_telescope_diameter_m),
            ("pointing_error_tx_urad", self.pointing_error_tx_urad),
            ("pointing_error_rx_urad", self.pointing_error_rx_urad),
            ("full_divergence_urad", self.full_divergence_urad),
            ("responsivity_a_per_w", self.responsivity_a_per_w),
            ("noise_current_density_a_per_sqrt_hz", self.noise_current_density_a_per_sqrt_hz),
        ];
        match spec.optics.as_mut() {
            None => {
                if let Some((key, _)) = optical.iter().find(|(_, v)| v.is_some()) {
                    return Err(Error::config(
                        format!("{prefix}.{key}"),
                        "optical parameters apply to the fso link only",
                    ));
                }
            }
            Some(o) => {
                set(&mut o.tx_efficiency, self.tx_efficiency);
                set(&mut o.rx_efficiency, self.rx_efficiency);
                set(&mut o.rx_telescope_diameter_m, self.rx_telescope_diameter_m);
                set(&mut o.pointing_error_tx_urad, self.pointing_error_tx_urad);
                set(&mut o.pointing_error_rx_urad, self.pointing_error_rx_urad);
                set(&mut o.full_divergence_urad, self.full_divergence_urad);
                set(&mut o.responsivity_a_per_w, self.responsivity_a_per_w);
                set(
                    &mut o.noise_current_density_a_per_sqrt_hz,
                    self.noise_current_density_a_per_sqrt_hz,
                );
            }
        }
        Ok(())
    }

    fn full(spec: &LinkSpec) -> Self {
        let (wavelength_nm, frequency_ghz) = match spec.carrier {
            Carrier::WavelengthNm(nm) => (Some(nm), None),
            Carrier::FrequencyGhz(f) => (None, Some(f)),
        };
        let o = spec.optics;
        LinkOverride {
            wavelength_nm,
            frequency_ghz,
            tx_power_dbm: Some(spec.tx_power_dbm),
            bandwidth_hz: Some(spec.bandwidth_hz),
            tx_gain_dbi: Some(spec.tx_gain_dbi),
            rx_gain_dbi: Some(spec.rx_gain_dbi),
            noise_psd_dbm_per_hz: Some(spec.noise_psd_dbm_per_hz),
            tx_efficiency: o.map(|o| o.tx_efficiency),
            rx_efficiency: o.map(|o| o.rx_efficiency),
            rx_telescope_diameter_m: o.map(|o| o.rx_telescope_diameter_m),
            pointing_error_tx_urad: o.map(|o| o.pointing_error_tx_urad),
            pointing_error_rx_urad: o.map(|o| o.pointing_error_rx_urad),
            full_divergence_urad: o.map(|o| o.full_divergence_urad),
            responsivity_a_per_w: o.map(|o| o.responsivity_a_per_w),
            noise_current_density_a_per_sqrt_hz: o.map(|o| o.noise_current_density_a_per_sqrt_hz),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtmosphereFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weather_ceiling_km: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<LayersFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gaseous_db_per_km: Option<BandTable<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub specific_db_per_km: Option<BandTable<CoefficientsFile>>,
}

/// Layers are written as `[bottom_km, top_km]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayersFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cloud: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fog: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rain: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cloud: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fog: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rain: Option<f64>,
}

impl AtmosphereFile {
    fn apply(&self, atm: &mut Atmosphere) {
        set(&mut atm.weather_ceiling_km, self.weather_ceiling_km);
        if let Some(layers) = &self.layers {
            let to_layer = |v: [f64; 2]| Layer::new(v[0], v[1]);
            set(&mut atm.cloud_layer, layers.cloud.map(to_layer));
            set(&mut atm.fog_layer, layers.fog.map(to_layer));
            set(&mut atm.rain_layer, layers.rain.map(to_layer));
        }
        if let Some(table) = &self.gaseous_db_per_km {
            for (band, v) in table.entries() {
                set(&mut atm.gaseous_db_per_km[band.index()], v.copied());
            }
        }
        if let Some(table) = &self.specific_db_per_km {
            for (band, coeffs) in table.entries() {
                if let Some(c) = coeffs {
                    let slot: &mut WeatherCoefficients = &mut atm.specific_db_per_km[band.index()];
                    set(&mut slot.cloud, c.cloud);
                    set(&mut slot.fog, c.fog);
                    set(&mut slot.rain, c.rain);
                }
            }
        }
    }

    fn full(atm: &Atmosphere) -> Self {
        let layer = |l: Layer| Some([l.bottom_km, l.top_km]);
        AtmosphereFile {
            weather_ceiling_km: Some(atm.weather_ceiling_km),
            layers: Some(LayersFile {
                cloud: layer(atm.cloud_layer),
                fog: layer(atm.fog_layer),
                rain: layer(atm.rain_layer),
            }),
            gaseous_db_per_km: Some(BandTable::from_fn(|b| atm.gaseous(b))),
            specific_db_per_km: Some(BandTable::from_fn(|b| {
                let c = atm.specific_db_per_km[b.index()];
                CoefficientsFile {
                    cloud: Some(c.cloud),
                    fog: Some(c.fog),
                    rain: Some(c.rain),
                }
            })),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distances_km: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_counts: Option<Vec<usize>>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl ScenarioFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    /// Applies the document on top of the built-in defaults and validates.
    pub fn into_scenario(self) -> Result<Scenario> {
        if let Some(v) = self.spec_version {
            if v != SPEC_VERSION {
                return Err(Error::config(
                    "spec_version",
                    format!("unsupported schema version {v} (expected {SPEC_VERSION})"),
                ));
            }
        }
        let mut s = Scenario::default();

        // The chain and the disaster centre default to each other.
        match (self.chain, self.disaster_center_arc_km) {
            (Some(chain), center) => {
                let fallback = chain.last().map(|n| n.ground_arc_km).unwrap_or(0.0);
                s.chain = chain;
                s.disaster_center_arc_km = center.unwrap_or(fallback);
            }
            (None, Some(center)) => {
                s.disaster_center_arc_km = center;
                s.chain = place_chain(center, DEFAULT_CHAIN_HAPS)
                    .map_err(|e| Error::config("disaster_center_arc_km", e.to_string()))?;
            }
            (None, None) => {
                s.disaster_center_arc_km = DEFAULT_DISASTER_DISTANCE_KM;
            }
        }
        set(&mut s.disaster_radius_km, self.disaster_radius_km);
        if let Some(p) = &self.populations {
            p.apply(&mut s.populations);
        }
        if let Some(a) = &self.activity_factors {
            a.apply(&mut s.activity_factors);
        }
        set(&mut s.weather_disaster, self.weather_disaster);
        set(&mut s.weather_central, self.weather_central);
        if let Some(atm) = &self.atmosphere {
            atm.apply(&mut s.atmosphere);
        }
        if let Some(links) = &self.links {
            for (band, o) in links.entries() {
                if let Some(o) = o {
                    o.apply(s.link_mut(band))?;
                }
            }
        }
        set(&mut s.rng_seed, self.rng_seed);
        set(&mut s.trials, self.trials);
        if let Some(sweep) = self.sweep {
            set(&mut s.sweep.distances_km, sweep.distances_km);
            set(&mut s.sweep.node_counts, sweep.node_counts);
        }
        s.validate()?;
        Ok(s)
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        let SweepAxes {
            distances_km,
            node_counts,
        } = s.sweep.clone();
        ScenarioFile {
            spec_version: Some(SPEC_VERSION),
            rng_seed: Some(s.rng_seed),
            trials: Some(s.trials),
            chain: Some(s.chain.clone()),
            disaster_center_arc_km: Some(s.disaster_center_arc_km),
            disaster_radius_km: Some(s.disaster_radius_km),
            populations: Some(TerminalTable::full(&s.populations)),
            activity_factors: Some(TerminalTable::full(&s.activity_factors)),
            weather_disaster: Some(s.weather_disaster),
            weather_central: Some(s.weather_central),
            atmosphere: Some(AtmosphereFile::full(&s.atmosphere)),
            links: Some(BandTable::from_fn(|b| LinkOverride::full(s.link(b)))),
            sweep: Some(SweepFile {
                distances_km: Some(distances_km),
                node_counts: Some(node_counts),
            }),
        }
    }
}

impl Scenario {
    /// Canonical, fully populated JSON form of the scenario.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ScenarioFile::from(self)).expect("scenario serializes")
    }
}
