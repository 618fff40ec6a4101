//! Platforms, link parameter sets and weather descriptions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Default operating altitude of every HAPS platform.
pub const HAPS_ALTITUDE_KM: f64 = 20.0;

/// Upper altitude bound for ground-based platforms.
pub const GROUND_MAX_ALTITUDE_KM: f64 = 0.5;

/// Upper altitude bound for UAVs.
pub const UAV_MAX_ALTITUDE_KM: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    GroundStation,
    HapsRelay,
    HapsEndpoint,
    HandheldUser,
    VsatTerminal,
    Uav,
    #[serde(rename = "terrestrial_bs")]
    TerrestrialBs,
}

impl NodeKind {
    pub const TERMINALS: [NodeKind; 4] = [
        NodeKind::HandheldUser,
        NodeKind::VsatTerminal,
        NodeKind::Uav,
        NodeKind::TerrestrialBs,
    ];

    pub fn is_haps(self) -> bool {
        matches!(self, NodeKind::HapsRelay | NodeKind::HapsEndpoint)
    }

    pub fn is_ground(self) -> bool {
        matches!(
            self,
            NodeKind::GroundStation
                | NodeKind::HandheldUser
                | NodeKind::VsatTerminal
                | NodeKind::TerrestrialBs
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::GroundStation => "ground_station",
            NodeKind::HapsRelay => "haps_relay",
            NodeKind::HapsEndpoint => "haps_endpoint",
            NodeKind::HandheldUser => "handheld_user",
            NodeKind::VsatTerminal => "vsat_terminal",
            NodeKind::Uav => "uav",
            NodeKind::TerrestrialBs => "terrestrial_bs",
        }
    }

    /// Checks the altitude envelope of this platform kind.
    pub fn check_altitude(self, altitude_km: f64) -> Result<(), String> {
        if !altitude_km.is_finite() || altitude_km < 0.0 {
            return Err(format!("altitude must be finite and non-negative, got {altitude_km}"));
        }
        if self.is_ground() && altitude_km > GROUND_MAX_ALTITUDE_KM {
            return Err(format!(
                "{} altitude must lie in [0, {GROUND_MAX_ALTITUDE_KM}] km, got {altitude_km}",
                self.as_str()
            ));
        }
        if self == NodeKind::Uav && !(altitude_km > 0.0 && altitude_km <= UAV_MAX_ALTITUDE_KM) {
            return Err(format!(
                "uav altitude must lie in (0, {UAV_MAX_ALTITUDE_KM}] km, got {altitude_km}"
            ));
        }
        Ok(())
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A platform placed on the chain's great circle.
///
/// Positions are one-dimensional: `ground_arc_km` is the surface distance
/// from the ground station measured along the great circle through the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub ground_arc_km: f64,
    pub altitude_km: f64,
}

impl Node {
    pub fn new(id: impl Into<String>, kind: NodeKind, ground_arc_km: f64, altitude_km: f64) -> Self {
        Node {
            id: id.into(),
            kind,
            ground_arc_km,
            altitude_km,
        }
    }

    /// A HAPS at the default 20 km altitude.
    pub fn haps(id: impl Into<String>, kind: NodeKind, ground_arc_km: f64) -> Self {
        Node::new(id, kind, ground_arc_km, HAPS_ALTITUDE_KM)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !self.ground_arc_km.is_finite() || self.ground_arc_km < 0.0 {
            return Err(format!(
                "ground_arc_km must be finite and non-negative, got {}",
                self.ground_arc_km
            ));
        }
        self.kind.check_altitude(self.altitude_km)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Fso,
    Thz,
    KaBand,
    SBand,
}

impl Band {
    pub const ALL: [Band; 4] = [Band::Fso, Band::Thz, Band::KaBand, Band::SBand];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn key(self) -> &'static str {
        match self {
            Band::Fso => "fso",
            Band::Thz => "thz",
            Band::KaBand => "ka_band",
            Band::SBand => "s_band",
        }
    }

    /// Short token used on the command line and in output file names.
    pub fn token(self) -> &'static str {
        match self {
            Band::Fso => "fso",
            Band::Thz => "thz",
            Band::KaBand => "ka",
            Band::SBand => "s",
        }
    }

    pub fn is_optical(self) -> bool {
        self == Band::Fso
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Clear,
    Cloud,
    Fog,
    Rain,
}

impl Condition {
    pub const ALL: [Condition; 4] = [
        Condition::Clear,
        Condition::Cloud,
        Condition::Fog,
        Condition::Rain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Condition::Clear => "clear",
            Condition::Cloud => "cloud",
            Condition::Fog => "fog",
            Condition::Rain => "rain",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Condition::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown weather `{s}` (valid: clear, cloud, fog, rain)"))
    }
}

/// Carrier of a link: optical wavelength or radio frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Carrier {
    WavelengthNm(f64),
    FrequencyGhz(f64),
}

impl Carrier {
    pub fn frequency_ghz(self) -> f64 {
        match self {
            Carrier::FrequencyGhz(f) => f,
            Carrier::WavelengthNm(nm) => crate::SPEED_OF_LIGHT_M_S / (nm * 1e-9) / 1e9,
        }
    }
}

/// Transmitter/receiver optics and detector of an FSO terminal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FsoOptics {
    pub tx_efficiency: f64,
    pub rx_efficiency: f64,
    pub rx_telescope_diameter_m: f64,
    pub pointing_error_tx_urad: f64,
    pub pointing_error_rx_urad: f64,
    pub full_divergence_urad: f64,
    /// Photodiode responsivity.
    pub responsivity_a_per_w: f64,
    /// Receiver noise current spectral density.
    pub noise_current_density_a_per_sqrt_hz: f64,
}

impl Default for FsoOptics {
    fn default() -> Self {
        FsoOptics {
            tx_efficiency: 0.8,
            rx_efficiency: 0.8,
            rx_telescope_diameter_m: 0.08,
            pointing_error_tx_urad: 1.0,
            pointing_error_rx_urad: 1.0,
            full_divergence_urad: 15.0,
            responsivity_a_per_w: 0.8,
            noise_current_density_a_per_sqrt_hz: 1e-11,
        }
    }
}

/// Transmit/receive/channel parameters of one band.
///
/// For FSO, `bandwidth_hz` is the electrical bandwidth of the detector and
/// the antenna gains are unused.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkSpec {
    pub band: Band,
    pub carrier: Carrier,
    pub tx_power_dbm: f64,
    pub bandwidth_hz: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub noise_psd_dbm_per_hz: f64,
    pub optics: Option<FsoOptics>,
}

impl LinkSpec {
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        let finite = [
            ("tx_power_dbm", self.tx_power_dbm),
            ("tx_gain_dbi", self.tx_gain_dbi),
            ("rx_gain_dbi", self.rx_gain_dbi),
            ("noise_psd_dbm_per_hz", self.noise_psd_dbm_per_hz),
        ];
        for (key, v) in finite {
            if !v.is_finite() {
                return Err((key, format!("must be finite, got {v}")));
            }
        }
        if !(self.bandwidth_hz.is_finite() && self.bandwidth_hz > 0.0) {
            return Err(("bandwidth_hz", format!("must be positive, got {}", self.bandwidth_hz)));
        }
        match self.carrier {
            Carrier::WavelengthNm(nm) if !(nm.is_finite() && nm > 0.0) => {
                return Err(("wavelength_nm", format!("must be positive, got {nm}")));
            }
            Carrier::FrequencyGhz(f) if !(f.is_finite() && f > 0.0) => {
                return Err(("frequency_ghz", format!("must be positive, got {f}")));
            }
            _ => {}
        }
        match (self.band.is_optical(), self.optics) {
            (true, None) => return Err(("optics", "FSO link requires optics parameters".into())),
            (false, Some(_)) => {
                return Err(("optics", "optics parameters apply to the FSO band only".into()))
            }
            _ => {}
        }
        if let Some(o) = self.optics {
            for (key, v) in [("tx_efficiency", o.tx_efficiency), ("rx_efficiency", o.rx_efficiency)] {
                if !(v > 0.0 && v <= 1.0) {
                    return Err((key, format!("must lie in (0, 1], got {v}")));
                }
            }
            let positive = [
                ("rx_telescope_diameter_m", o.rx_telescope_diameter_m),
                ("full_divergence_urad", o.full_divergence_urad),
                ("responsivity_a_per_w", o.responsivity_a_per_w),
                ("noise_current_density_a_per_sqrt_hz", o.noise_current_density_a_per_sqrt_hz),
            ];
            for (key, v) in positive {
                if !(v.is_finite() && v > 0.0) {
                    return Err((key, format!("must be positive, got {v}")));
                }
            }
            for (key, v) in [
                ("pointing_error_tx_urad", o.pointing_error_tx_urad),
                ("pointing_error_rx_urad", o.pointing_error_rx_urad),
            ] {
                if !(v.is_finite() && v >= 0.0) {
                    return Err((key, format!("must be non-negative, got {v}")));
                }
            }
        }
        Ok(())
    }
}

/// The built-in parameter set of a band.
pub fn default_linkspec(band: Band) -> LinkSpec {
    match band {
        Band::Fso => LinkSpec {
            band,
            carrier: Carrier::WavelengthNm(1550.0),
            tx_power_dbm: 17.5,
            bandwidth_hz: 50e9,
            tx_gain_dbi: 0.0,
            rx_gain_dbi: 0.0,
            noise_psd_dbm_per_hz: -174.0,
            optics: Some(FsoOptics::default()),
        },
        Band::Thz => LinkSpec {
            band,
            carrier: Carrier::FrequencyGhz(144.0),
            tx_power_dbm: 17.5,
            bandwidth_hz: 30e9,
            tx_gain_dbi: 55.0,
            rx_gain_dbi: 55.0,
            noise_psd_dbm_per_hz: -174.0,
            optics: None,
        },
        Band::KaBand => LinkSpec {
            band,
            carrier: Carrier::FrequencyGhz(30.0),
            tx_power_dbm: 43.2,
            bandwidth_hz: 400e6,
            tx_gain_dbi: 13.8,
            rx_gain_dbi: 39.7,
            noise_psd_dbm_per_hz: -174.0,
            optics: None,
        },
        Band::SBand => LinkSpec {
            band,
            carrier: Carrier::FrequencyGhz(2.4),
            tx_power_dbm: 43.2,
            bandwidth_hz: 100e6,
            tx_gain_dbi: 13.8,
            rx_gain_dbi: 0.0,
            noise_psd_dbm_per_hz: -174.0,
            optics: None,
        },
    }
}

/// Closed altitude interval `[bottom_km, top_km]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub bottom_km: f64,
    pub top_km: f64,
}

impl Layer {
    pub const fn new(bottom_km: f64, top_km: f64) -> Self {
        Layer { bottom_km, top_km }
    }

    pub fn thickness_km(&self) -> f64 {
        (self.top_km - self.bottom_km).max(0.0)
    }
}

/// Specific attenuation per weather condition, dB/km.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeatherCoefficients {
    pub cloud: f64,
    pub fog: f64,
    pub rain: f64,
}

impl WeatherCoefficients {
    pub fn get(&self, condition: Condition) -> f64 {
        match condition {
            Condition::Clear => 0.0,
            Condition::Cloud => self.cloud,
            Condition::Fog => self.fog,
            Condition::Rain => self.rain,
        }
    }
}

/// Layered atmosphere parameters shared by every weather condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atmosphere {
    /// Top of the weather-bearing troposphere; also the ceiling of the
    /// clear-sky gaseous term.
    pub weather_ceiling_km: f64,
    pub cloud_layer: Layer,
    pub fog_layer: Layer,
    pub rain_layer: Layer,
    /// Clear-sky gaseous absorption per band (indexed by [`Band::index`]), dB/km.
    pub gaseous_db_per_km: [f64; 4],
    /// Weather specific attenuation per band, dB/km.
    pub specific_db_per_km: [WeatherCoefficients; 4],
}

impl Default for Atmosphere {
    fn default() -> Self {
        Atmosphere {
            weather_ceiling_km: 10.0,
            cloud_layer: Layer::new(1.0, 3.0),
            fog_layer: Layer::new(0.0, 0.5),
            rain_layer: Layer::new(0.0, 4.0),
            gaseous_db_per_km: [0.2, 0.5, 0.05, 0.0],
            specific_db_per_km: [
                WeatherCoefficients { cloud: 30.0, fog: 100.0, rain: 6.0 },
                WeatherCoefficients { cloud: 1.0, fog: 1.0, rain: 10.0 },
                WeatherCoefficients { cloud: 0.3, fog: 0.3, rain: 3.0 },
                WeatherCoefficients { cloud: 0.0, fog: 0.0, rain: 0.0 },
            ],
        }
    }
}

impl Atmosphere {
    /// Top of the fog layer.
    pub fn fog_ceiling_km(&self) -> f64 {
        self.fog_layer.top_km
    }

    pub fn gaseous(&self, band: Band) -> f64 {
        self.gaseous_db_per_km[band.index()]
    }

    pub fn specific(&self, band: Band, condition: Condition) -> f64 {
        self.specific_db_per_km[band.index()].get(condition)
    }

    pub fn validate(&self) -> Result<(), (String, String)> {
        let c = self.weather_ceiling_km;
        if !(c > 0.0 && c < HAPS_ALTITUDE_KM) {
            return Err((
                "atmosphere.weather_ceiling_km".into(),
                format!("must lie in (0, {HAPS_ALTITUDE_KM}) km, got {c}"),
            ));
        }
        for (name, layer) in [
            ("cloud", self.cloud_layer),
            ("fog", self.fog_layer),
            ("rain", self.rain_layer),
        ] {
            let ok = layer.bottom_km.is_finite()
                && layer.bottom_km >= 0.0
                && layer.top_km > layer.bottom_km
                && layer.top_km <= c;
            if !ok {
                return Err((
                    format!("atmosphere.layers.{name}"),
                    format!(
                        "layer must satisfy 0 <= bottom < top <= weather_ceiling_km ({c}), got [{}, {}]",
                        layer.bottom_km, layer.top_km
                    ),
                ));
            }
        }
        for band in Band::ALL {
            let g = self.gaseous(band);
            if !(g.is_finite() && g >= 0.0) {
                return Err((
                    format!("atmosphere.gaseous_db_per_km.{}", band.key()),
                    format!("must be finite and non-negative, got {g}"),
                ));
            }
            for cond in [Condition::Cloud, Condition::Fog, Condition::Rain] {
                let v = self.specific(band, cond);
                if !(v.is_finite() && v >= 0.0) {
                    return Err((
                        format!("atmosphere.specific_db_per_km.{}.{}", band.key(), cond),
                        format!("must be finite and non-negative, got {v}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Atmospheric condition over a region plus the layer model that goes with it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeatherState {
    pub condition: Condition,
    pub atmosphere: Atmosphere,
}

impl WeatherState {
    pub fn new(condition: Condition, atmosphere: Atmosphere) -> Self {
        WeatherState { condition, atmosphere }
    }

    pub fn clear() -> Self {
        WeatherState::new(Condition::Clear, Atmosphere::default())
    }

    pub fn with_condition(&self, condition: Condition) -> Self {
        WeatherState { condition, ..*self }
    }
}

/// Per-link outputs of a budget evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkBudgetResult {
    pub band: Band,
    pub rx_power_dbm: f64,
    pub snr_db: f64,
    pub capacity_bps: f64,
    pub path_length_km: f64,
    pub tropospheric_segment_km: f64,
    pub attenuation_db: f64,
    /// The straight ray passes below the Earth's surface.
    pub los_blocked: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fso_defaults_match_parameter_table() {
        let fso = default_linkspec(Band::Fso);
        assert_eq!(fso.carrier, Carrier::WavelengthNm(1550.0));
        assert_eq!(fso.tx_power_dbm, 17.5);
        let o = fso.optics.unwrap();
        assert_eq!((o.tx_efficiency, o.rx_efficiency), (0.8, 0.8));
        assert_eq!(o.rx_telescope_diameter_m, 0.08);
        assert_eq!((o.pointing_error_tx_urad, o.pointing_error_rx_urad), (1.0, 1.0));
        assert_eq!(o.full_divergence_urad, 15.0);
    }

    #[test]
    fn rf_defaults_match_parameter_table() {
        let ka = default_linkspec(Band::KaBand);
        assert_eq!(ka.carrier, Carrier::FrequencyGhz(30.0));
        assert_eq!(ka.tx_power_dbm, 43.2);
        assert_eq!(ka.bandwidth_hz, 400e6);
        assert_eq!((ka.tx_gain_dbi, ka.rx_gain_dbi), (13.8, 39.7));
        assert_eq!(ka.noise_psd_dbm_per_hz, -174.0);

        let s = default_linkspec(Band::SBand);
        assert_eq!(s.carrier, Carrier::FrequencyGhz(2.4));
        assert_eq!(s.tx_power_dbm, 43.2);
        assert_eq!(s.bandwidth_hz, 100e6);
        assert_eq!((s.tx_gain_dbi, s.rx_gain_dbi), (13.8, 0.0));

        let thz = default_linkspec(Band::Thz);
        assert_eq!(thz.carrier, Carrier::FrequencyGhz(144.0));
        assert_eq!(thz.tx_power_dbm, 17.5);
        assert_eq!(thz.bandwidth_hz, 30e9);
        assert_eq!((thz.tx_gain_dbi, thz.rx_gain_dbi), (55.0, 55.0));
    }

    #[test]
    fn every_default_band_validates() {
        for band in Band::ALL {
            default_linkspec(band).validate().unwrap();
        }
        Atmosphere::default().validate().unwrap();
    }

    #[test]
    fn altitude_envelopes() {
        assert!(NodeKind::GroundStation.check_altitude(0.5).is_ok());
        assert!(NodeKind::TerrestrialBs.check_altitude(0.6).is_err());
        assert!(NodeKind::Uav.check_altitude(0.0).is_err());
        assert!(NodeKind::Uav.check_altitude(10.0).is_ok());
        assert!(NodeKind::HapsRelay.check_altitude(-1.0).is_err());
    }

    #[test]
    fn wavelength_to_frequency() {
        let f = Carrier::WavelengthNm(1550.0).frequency_ghz();
        assert!((f - 193_414.489).abs() < 0.01);
    }
}
