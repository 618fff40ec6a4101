//! Received power, SNR and Shannon capacity per band.
//!
//! RF links (THz, Ka, S) use a Friis budget against thermal noise. The FSO
//! link uses a geometric-capture budget with direct detection: the
//! electrical SNR is `(responsivity * P_rx)^2 / (i_n^2 * B)`.

use serde::Serialize;

use crate::atmosphere::path_attenuation;
use crate::error::{Error, Result};
use crate::geometry::ray_clearance;
use crate::scenario::{Band, FsoOptics, LinkBudgetResult, LinkSpec, Node, WeatherState};
use crate::SPEED_OF_LIGHT_M_S;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm) * 1e-3
}

pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w * 1e3)
}

/// Free-space path loss, dB.
pub fn fspl_db(freq_ghz: f64, distance_km: f64) -> Result<f64> {
    if !(distance_km > 0.0) {
        return Err(Error::domain(format!("path loss needs a positive distance, got {distance_km} km")));
    }
    if !(freq_ghz > 0.0) {
        return Err(Error::domain(format!("path loss needs a positive frequency, got {freq_ghz} GHz")));
    }
    let ratio = 4.0 * std::f64::consts::PI * distance_km * 1e3 * freq_ghz * 1e9 / SPEED_OF_LIGHT_M_S;
    Ok(20.0 * ratio.log10())
}

/// `B log2(1 + SNR)` in bit/s.
pub fn shannon_capacity(bandwidth_hz: f64, snr_linear: f64) -> f64 {
    if bandwidth_hz <= 0.0 || snr_linear <= 0.0 {
        return 0.0;
    }
    bandwidth_hz * snr_linear.ln_1p() / std::f64::consts::LN_2
}

/// Linear loss factors of an FSO hop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FsoLossBreakdown {
    /// Fraction of the beam footprint intercepted by the receive telescope.
    pub geometric_capture: f64,
    pub pointing_loss: f64,
    pub optics_efficiency: f64,
    pub atmospheric_db: f64,
}

impl FsoLossBreakdown {
    pub fn new(optics: &FsoOptics, distance_km: f64, atmospheric_db: f64) -> Self {
        let divergence_rad = optics.full_divergence_urad * 1e-6;
        let beam_diameter_m = divergence_rad * distance_km * 1e3;
        let geometric_capture = (optics.rx_telescope_diameter_m / beam_diameter_m).powi(2).min(1.0);

        let sigma = optics.pointing_error_tx_urad.hypot(optics.pointing_error_rx_urad);
        let half_angle = optics.full_divergence_urad / 2.0;
        let pointing_loss = (-2.0 * (sigma / half_angle).powi(2)).exp();

        FsoLossBreakdown {
            geometric_capture,
            pointing_loss,
            optics_efficiency: optics.tx_efficiency * optics.rx_efficiency,
            atmospheric_db,
        }
    }

    /// Product of all loss factors (linear, at most 1).
    pub fn total_linear(&self) -> f64 {
        self.geometric_capture * self.pointing_loss * self.optics_efficiency * db_to_linear(-self.atmospheric_db)
    }
}

fn blocked(band: Band, path_length_km: f64) -> LinkBudgetResult {
    LinkBudgetResult {
        band,
        rx_power_dbm: f64::NEG_INFINITY,
        snr_db: f64::NEG_INFINITY,
        capacity_bps: 0.0,
        path_length_km,
        tropospheric_segment_km: 0.0,
        attenuation_db: 0.0,
        los_blocked: true,
    }
}

pub fn fso_budget(a: &Node, b: &Node, spec: &LinkSpec, weather: &WeatherState) -> Result<LinkBudgetResult> {
    let optics = match (spec.band, spec.optics) {
        (Band::Fso, Some(o)) => o,
        _ => return Err(Error::domain(format!("fso_budget called with a {} link spec", spec.band))),
    };
    let ray = ray_clearance(a, b);
    let distance_km = ray.chord_km;
    if !(distance_km > 0.0) {
        return Err(Error::domain(format!("link {} -> {} has zero length", a.id, b.id)));
    }
    if ray.is_blocked() {
        return Ok(blocked(spec.band, distance_km));
    }
    let atm = path_attenuation(a, b, spec.band, weather)?;
    let losses = FsoLossBreakdown::new(&optics, distance_km, atm.total_db);
    let rx_w = dbm_to_watts(spec.tx_power_dbm) * losses.total_linear();
    let photocurrent = optics.responsivity_a_per_w * rx_w;
    let noise_power = optics.noise_current_density_a_per_sqrt_hz.powi(2) * spec.bandwidth_hz;
    let snr = photocurrent * photocurrent / noise_power;
    Ok(LinkBudgetResult {
        band: spec.band,
        rx_power_dbm: watts_to_dbm(rx_w),
        snr_db: linear_to_db(snr),
        capacity_bps: shannon_capacity(spec.bandwidth_hz, snr),
        path_length_km: distance_km,
        tropospheric_segment_km: atm.tropospheric_km,
        attenuation_db: atm.total_db,
        los_blocked: false,
    })
}

pub fn rf_budget(a: &Node, b: &Node, spec: &LinkSpec, weather: &WeatherState) -> Result<LinkBudgetResult> {
    if spec.band.is_optical() {
        return Err(Error::domain("rf_budget called with the fso link spec"));
    }
    let ray = ray_clearance(a, b);
    let distance_km = ray.chord_km;
    if !(distance_km > 0.0) {
        return Err(Error::domain(format!("link {} -> {} has zero length", a.id, b.id)));
    }
    if ray.is_blocked() {
        return Ok(blocked(spec.band, distance_km));
    }
    let atm = path_attenuation(a, b, spec.band, weather)?;
    let loss = fspl_db(spec.carrier.frequency_ghz(), distance_km)?;
    let rx_power_dbm = spec.tx_power_dbm + spec.tx_gain_dbi + spec.rx_gain_dbi - loss - atm.total_db;
    let noise_dbm = spec.noise_psd_dbm_per_hz + linear_to_db(spec.bandwidth_hz);
    let snr_db = rx_power_dbm - noise_dbm;
    Ok(LinkBudgetResult {
        band: spec.band,
        rx_power_dbm,
        snr_db,
        capacity_bps: shannon_capacity(spec.bandwidth_hz, db_to_linear(snr_db)),
        path_length_km: distance_km,
        tropospheric_segment_km: atm.tropospheric_km,
        attenuation_db: atm.total_db,
        los_blocked: false,
    })
}

/// Evaluates a link with the budget matching its band.
pub fn link_budget(a: &Node, b: &Node, spec: &LinkSpec, weather: &WeatherState) -> Result<LinkBudgetResult> {
    match spec.band {
        Band::Fso => fso_budget(a, b, spec, weather),
        _ => rf_budget(a, b, spec, weather),
    }
}

/// Selection combining of an FSO and a THz link over the same pair.
pub fn hybrid_rate(fso: &LinkBudgetResult, thz: &LinkBudgetResult) -> f64 {
    fso.capacity_bps.max(thz.capacity_bps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{default_linkspec, Condition, NodeKind};

    fn ground(arc: f64) -> Node {
        Node::new("t", NodeKind::TerrestrialBs, arc, 0.0)
    }

    fn haps(arc: f64) -> Node {
        Node::haps("h", NodeKind::HapsEndpoint, arc)
    }

    #[test]
    fn fspl_values() {
        assert!((fspl_db(2.4, 1.0).unwrap() - 100.05).abs() < 0.1);
        let base = fspl_db(10.0, 7.0).unwrap();
        assert!((fspl_db(20.0, 7.0).unwrap() - base - 6.0206).abs() < 1e-3);
        assert!((fspl_db(10.0, 14.0).unwrap() - base - 6.0206).abs() < 1e-3);
        assert!(fspl_db(2.4, 0.0).is_err());
    }

    #[test]
    fn shannon_values() {
        assert_eq!(shannon_capacity(1.0, 1.0), 1.0);
        assert_eq!(shannon_capacity(1e6, 0.0), 0.0);
        let c = shannon_capacity(4e8, 1000.0);
        assert!((c - 3.9869e9).abs() / 3.9869e9 < 1e-4, "{c}");
    }

    #[test]
    fn capture_clamps_at_short_range() {
        let o = FsoOptics::default();
        // beam diameter = telescope diameter at 0.08 / 15e-6 m
        let l = FsoLossBreakdown::new(&o, 5.0, 0.0);
        assert_eq!(l.geometric_capture, 1.0);
    }

    #[test]
    fn zero_jitter_has_no_pointing_loss() {
        let o = FsoOptics {
            pointing_error_tx_urad: 0.0,
            pointing_error_rx_urad: 0.0,
            ..FsoOptics::default()
        };
        assert_eq!(FsoLossBreakdown::new(&o, 400.0, 0.0).pointing_loss, 1.0);
    }

    #[test]
    fn zero_length_is_a_domain_error() {
        let w = WeatherState::clear();
        assert!(fso_budget(&haps(0.0), &haps(0.0), &default_linkspec(Band::Fso), &w).is_err());
        assert!(rf_budget(&haps(0.0), &haps(0.0), &default_linkspec(Band::KaBand), &w).is_err());
    }

    #[test]
    fn wrong_band_is_rejected() {
        let w = WeatherState::clear();
        assert!(fso_budget(&ground(0.0), &haps(0.0), &default_linkspec(Band::Thz), &w).is_err());
        assert!(rf_budget(&ground(0.0), &haps(0.0), &default_linkspec(Band::Fso), &w).is_err());
    }

    #[test]
    fn rx_gain_is_linear_in_db() {
        let w = WeatherState::new(Condition::Rain, Default::default());
        for band in [Band::Thz, Band::KaBand, Band::SBand] {
            let mut spec = default_linkspec(band);
            let before = rf_budget(&ground(12.0), &haps(0.0), &spec, &w).unwrap();
            spec.rx_gain_dbi += 10.0;
            let after = rf_budget(&ground(12.0), &haps(0.0), &spec, &w).unwrap();
            assert!((after.snr_db - before.snr_db - 10.0).abs() < 1e-9);
        }
    }

    #[test]
    fn beyond_horizon_carries_nothing() {
        let r = fso_budget(&ground(0.0), &haps(900.0), &default_linkspec(Band::Fso), &WeatherState::clear()).unwrap();
        assert!(r.los_blocked);
        assert_eq!(r.capacity_bps, 0.0);
    }

    #[test]
    fn hybrid_is_max() {
        let mut f = blocked(Band::Fso, 1.0);
        let mut t = blocked(Band::Thz, 1.0);
        f.capacity_bps = 100.0;
        t.capacity_bps = 40.0;
        assert_eq!(hybrid_rate(&f, &t), 100.0);
        f.capacity_bps = 0.0;
        t.capacity_bps = 7.0;
        assert_eq!(hybrid_rate(&f, &t), 7.0);
    }
}
