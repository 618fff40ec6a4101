use std::fs;

use proptest::prelude::*;
use serde_json::{json, Value};

use stratolink::scenario::{load_scenario, parse_scenario, Band, Condition, Scenario};
use stratolink::Error;

#[test]
fn missing_file() {
    let err = load_scenario("/nonexistent/scenario.json").unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
}

#[test]
fn file_on_disk_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    fs::write(
        &path,
        r#"{
            "spec_version": 1,
            "rng_seed": 99,
            "trials": 4,
            "chain": [
                {"id": "gs", "kind": "ground_station", "ground_arc_km": 0, "altitude_km": 0.1},
                {"id": "h1", "kind": "haps_relay", "ground_arc_km": 15, "altitude_km": 20},
                {"id": "h2", "kind": "haps_endpoint", "ground_arc_km": 300, "altitude_km": 21}
            ],
            "weather_disaster": "rain",
            "populations": {"uav": 7},
            "atmosphere": {"weather_ceiling_km": 12},
            "links": {"fso": {"bandwidth_hz": 2e10}},
            "sweep": {"distances_km": [100, 200], "node_counts": [2]}
        }"#,
    )
    .unwrap();
    let s = load_scenario(&path).unwrap();
    assert_eq!(s.rng_seed, 99);
    assert_eq!(s.disaster_center_arc_km, 300.0);
    assert_eq!(s.weather_disaster, Condition::Rain);
    assert_eq!(s.populations.uav, 7);
    assert_eq!(s.link(Band::Fso).bandwidth_hz, 2e10);

    let copy = dir.path().join("copy.json");
    fs::write(&copy, s.to_json()).unwrap();
    assert_eq!(load_scenario(&copy).unwrap(), s);
}

fn scalar_override() -> impl Strategy<Value = (Vec<&'static str>, f64)> {
    let paths = vec![
        vec!["disaster_radius_km"],
        vec!["disaster_center_arc_km"],
        vec!["links", "fso", "tx_power_dbm"],
        vec!["links", "fso", "tx_efficiency"],
        vec!["links", "fso", "full_divergence_urad"],
        vec!["links", "thz", "bandwidth_hz"],
        vec!["links", "ka_band", "rx_gain_dbi"],
        vec!["links", "s_band", "frequency_ghz"],
        vec!["atmosphere", "weather_ceiling_km"],
        vec!["atmosphere", "gaseous_db_per_km", "thz"],
        vec!["atmosphere", "specific_db_per_km", "fso", "fog"],
        vec!["activity_factors", "handheld_user"],
    ];
    (prop::sample::select(paths), -100.0..1e3f64)
}

fn set_path(doc: &mut Value, path: &[&str], v: f64) {
    let mut cur = doc;
    for key in &path[..path.len() - 1] {
        cur = cur
            .as_object_mut()
            .unwrap()
            .entry(key.to_string())
            .or_insert_with(|| json!({}));
    }
    cur[path[path.len() - 1]] = json!(v);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Whatever the loader accepts satisfies every invariant and re-serializes
    /// to an identical scenario.
    #[test]
    fn accepted_configs_are_valid_and_round_trip(
        overrides in prop::collection::vec(scalar_override(), 0..4),
        seed in any::<u64>(),
        trials in 0u32..5,
        weather in prop::sample::select(vec!["clear", "cloud", "fog", "rain"]),
    ) {
        let mut doc = json!({"rng_seed": seed, "trials": trials, "weather_disaster": weather});
        for (path, v) in &overrides {
            set_path(&mut doc, path, *v);
        }
        match parse_scenario(&doc.to_string()) {
            Ok(s) => {
                prop_assert!(s.validate().is_ok());
                prop_assert!(s.trials >= 1);
                let again = parse_scenario(&s.to_json()).unwrap();
                prop_assert_eq!(again, s);
            }
            Err(e) => {
                prop_assert!(matches!(e, Error::Config { .. }), "unexpected {e}");
            }
        }
    }
}

#[test]
fn defaults_round_trip_through_json_value() {
    let s = Scenario::default();
    let v: Value = serde_json::from_str(&s.to_json()).unwrap();
    assert_eq!(v["spec_version"], json!(1));
    assert_eq!(v["links"]["fso"]["wavelength_nm"], json!(1550.0));
    assert!(v["links"]["thz"].get("tx_efficiency").is_none());
    assert_eq!(v["atmosphere"]["layers"]["cloud"], json!([1.0, 3.0]));
}
