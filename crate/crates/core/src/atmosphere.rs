//! Layered Beer-Lambert path attenuation.
//!
//! Each weather condition occupies one altitude layer with a uniform
//! specific attenuation per band. A clear-sky gaseous term applies to the
//! whole troposphere below the weather ceiling. Nothing above the ceiling
//! attenuates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{length_within, tropospheric_length};
use crate::scenario::{Atmosphere, Band, Condition, Layer, Node, WeatherState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathAttenuation {
    pub band: Band,
    pub condition: Condition,
    /// Chord length below the weather ceiling.
    pub tropospheric_km: f64,
    pub gaseous_db: f64,
    pub weather_db: f64,
    pub total_db: f64,
}

/// Altitude interval occupied by a condition; `None` for clear sky.
pub fn condition_layer(atmosphere: &Atmosphere, condition: Condition) -> Option<Layer> {
    match condition {
        Condition::Clear => None,
        Condition::Cloud => Some(atmosphere.cloud_layer),
        Condition::Fog => Some(atmosphere.fog_layer),
        Condition::Rain => Some(atmosphere.rain_layer),
    }
}

pub fn path_attenuation(a: &Node, b: &Node, band: Band, weather: &WeatherState) -> Result<PathAttenuation> {
    let atm = &weather.atmosphere;
    let condition = weather.condition;
    let gamma = atm.specific(band, condition);
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::config(
            format!("atmosphere.specific_db_per_km.{}.{condition}", band.key()),
            format!("specific attenuation must be finite and non-negative, got {gamma}"),
        ));
    }
    let gas = atm.gaseous(band);
    if !(gas.is_finite() && gas >= 0.0) {
        return Err(Error::config(
            format!("atmosphere.gaseous_db_per_km.{}", band.key()),
            format!("gaseous attenuation must be finite and non-negative, got {gas}"),
        ));
    }

    let tropospheric_km = tropospheric_length(a, b, atm.weather_ceiling_km);
    let gaseous_db = gas * tropospheric_km;
    let weather_db = match condition_layer(atm, condition) {
        Some(layer) if gamma > 0.0 => gamma * length_within(a, b, layer.bottom_km, layer.top_km),
        _ => 0.0,
    };
    Ok(PathAttenuation {
        band,
        condition,
        tropospheric_km,
        gaseous_db,
        weather_db,
        total_db: gaseous_db + weather_db,
    })
}
