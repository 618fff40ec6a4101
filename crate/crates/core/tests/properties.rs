use proptest::prelude::*;

use stratolink::atmosphere::path_attenuation;
use stratolink::geometry::{point_on_ray, ray_clearance, slant_range, tropospheric_length};
use stratolink::link_budget::{
    db_to_linear, dbm_to_watts, fso_budget, hybrid_rate, link_budget, linear_to_db, rf_budget,
};
use stratolink::network::{access_cdf, clear_sky_capacity, place_chain, plan_min_nodes, AccessLink, PlanOutcome};
use stratolink::scenario::{
    default_linkspec, Atmosphere, Band, Condition, Node, NodeKind, Scenario, WeatherState,
};

fn node(kind: NodeKind, arc: f64, alt: f64) -> Node {
    Node::new("n", kind, arc, alt)
}

fn band() -> impl Strategy<Value = Band> {
    prop::sample::select(Band::ALL.to_vec())
}

fn condition() -> impl Strategy<Value = Condition> {
    prop::sample::select(Condition::ALL.to_vec())
}

/// A HAPS above the origin and a ground or UAV terminal within 60 km.
fn access_pair() -> impl Strategy<Value = (Node, Node)> {
    (0.0..60.0f64, 0.0..3.0f64).prop_map(|(arc, alt)| {
        (
            node(NodeKind::HapsEndpoint, 0.0, 20.0),
            node(NodeKind::Uav, arc + 0.01, alt),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn slant_range_is_symmetric(s1 in 0.0..2000.0f64, h1 in 0.0..30.0f64, s2 in 0.0..2000.0f64, h2 in 0.0..30.0f64) {
        let (a, b) = (node(NodeKind::HapsRelay, s1, h1), node(NodeKind::HapsRelay, s2, h2));
        let (ab, ba) = (slant_range(&a, &b), slant_range(&b, &a));
        prop_assert!((ab - ba).abs() <= 1e-9 * ab.max(1.0));
        let (r1, r2) = (ray_clearance(&a, &b), ray_clearance(&b, &a));
        prop_assert!((r1.min_ray_altitude_km - r2.min_ray_altitude_km).abs() < 1e-9);
        prop_assert!((r1.elevation_deg - r2.elevation_deg).abs() < 1e-9);
        prop_assert!(r1.chord_km + 1e-9 >= (h1 - h2).abs());
        prop_assert!(r1.min_ray_altitude_km <= h1.min(h2) + 1e-12);
        prop_assert!((-90.0..=90.0).contains(&r1.elevation_deg));
    }

    #[test]
    fn slant_range_grows_with_separation(h1 in 0.0..25.0f64, h2 in 0.0..25.0f64, d in 0.0..1000.0f64, extra in 0.01..100.0f64) {
        let a = node(NodeKind::HapsRelay, 0.0, h1);
        let near = slant_range(&a, &node(NodeKind::HapsRelay, d, h2));
        let far = slant_range(&a, &node(NodeKind::HapsRelay, d + extra, h2));
        prop_assert!(far > near);
    }

    #[test]
    fn tropospheric_length_bounds(s in 0.0..600.0f64, h1 in 0.0..25.0f64, h2 in 0.0..25.0f64, ceiling in 0.5..15.0f64) {
        let (a, b) = (node(NodeKind::HapsRelay, 0.0, h1), node(NodeKind::HapsRelay, s, h2));
        let d = slant_range(&a, &b);
        let t = tropospheric_length(&a, &b, ceiling);
        prop_assert!(t >= 0.0 && t <= d + 1e-9);
        if h1 < ceiling && h2 < ceiling {
            prop_assert!((t - d).abs() <= 1e-9 * d.max(1.0));
        }
    }

    #[test]
    fn flat_earth_agreement(s in 0.0..50.0f64, h in 0.0..20.0f64) {
        let (a, b) = (node(NodeKind::HapsRelay, 0.0, 0.0), node(NodeKind::HapsRelay, s, h));
        let flat = s.hypot(h);
        prop_assume!(flat > 1.0);
        prop_assert!((slant_range(&a, &b) - flat).abs() / flat < 0.005);
    }

    #[test]
    fn attenuation_splits_additively((a, b) in access_pair(), t in 0.01..0.99f64, band in band(), c in condition()) {
        let w = WeatherState::new(c, Atmosphere::default());
        let m = point_on_ray(&a, &b, t, "m");
        let whole = path_attenuation(&a, &b, band, &w).unwrap().total_db;
        let parts = path_attenuation(&a, &m, band, &w).unwrap().total_db + path_attenuation(&m, &b, band, &w).unwrap().total_db;
        prop_assert!((whole - parts).abs() < 1e-9, "{} vs {}", whole, parts);
    }

    #[test]
    fn clear_sky_is_least_attenuating((a, b) in access_pair(), band in band(), c in condition()) {
        let atm = Atmosphere::default();
        let clear = path_attenuation(&a, &b, band, &WeatherState::new(Condition::Clear, atm)).unwrap();
        let other = path_attenuation(&a, &b, band, &WeatherState::new(c, atm)).unwrap();
        prop_assert!(clear.total_db <= other.total_db);
        prop_assert!((other.total_db - other.gaseous_db - other.weather_db).abs() < 1e-12);
        prop_assert!(other.gaseous_db >= 0.0 && other.weather_db >= 0.0);
    }

    #[test]
    fn attenuation_grows_with_gamma((a, b) in access_pair(), band in band(), c in condition(), bump in 0.0..50.0f64) {
        let atm = Atmosphere::default();
        let mut heavier = atm;
        let coeffs = &mut heavier.specific_db_per_km[band.index()];
        coeffs.cloud += bump;
        coeffs.fog += bump;
        coeffs.rain += bump;
        let base = path_attenuation(&a, &b, band, &WeatherState::new(c, atm)).unwrap();
        let more = path_attenuation(&a, &b, band, &WeatherState::new(c, heavier)).unwrap();
        prop_assert!(more.total_db >= base.total_db);
    }

    #[test]
    fn capacity_falls_with_distance(r1 in 0.0..60.0f64, dr in 0.1..40.0f64, band in band(), c in condition()) {
        let hub = node(NodeKind::HapsEndpoint, 0.0, 20.0);
        let w = WeatherState::new(c, Atmosphere::default());
        let spec = default_linkspec(band);
        let near = link_budget(&hub, &node(NodeKind::TerrestrialBs, r1, 0.0), &spec, &w).unwrap();
        let far = link_budget(&hub, &node(NodeKind::TerrestrialBs, r1 + dr, 0.0), &spec, &w).unwrap();
        prop_assert!(far.path_length_km > near.path_length_km);
        prop_assert!(far.capacity_bps <= near.capacity_bps);
        prop_assert!(far.attenuation_db >= near.attenuation_db);
    }

    #[test]
    fn capacity_falls_with_extra_attenuation((a, b) in access_pair(), band in band(), extra in 0.0..30.0f64) {
        let atm = Atmosphere::default();
        let mut lossier = atm;
        lossier.gaseous_db_per_km[band.index()] += extra;
        let spec = default_linkspec(band);
        let base = link_budget(&a, &b, &spec, &WeatherState::new(Condition::Clear, atm)).unwrap();
        let worse = link_budget(&a, &b, &spec, &WeatherState::new(Condition::Clear, lossier)).unwrap();
        prop_assert!(worse.capacity_bps <= base.capacity_bps);
    }

    #[test]
    fn fso_never_gains_power((a, b) in access_pair(), c in condition(), p in -10.0..40.0f64, eta in 0.05..1.0f64) {
        let mut spec = default_linkspec(Band::Fso);
        spec.tx_power_dbm = p;
        let mut optics = spec.optics.unwrap();
        optics.tx_efficiency = eta;
        optics.rx_efficiency = 1.0;
        optics.rx_telescope_diameter_m = 2.0;
        spec.optics = Some(optics);
        let r = fso_budget(&a, &b, &spec, &WeatherState::new(c, Atmosphere::default())).unwrap();
        prop_assert!(dbm_to_watts(r.rx_power_dbm) <= dbm_to_watts(p));
        prop_assert!(r.capacity_bps >= 0.0 && r.attenuation_db >= 0.0);
    }

    #[test]
    fn rf_rx_power_bounded_by_eirp_plus_gain((a, b) in access_pair(), band in prop::sample::select(vec![Band::Thz, Band::KaBand, Band::SBand]), c in condition()) {
        let spec = default_linkspec(band);
        let r = rf_budget(&a, &b, &spec, &WeatherState::new(c, Atmosphere::default())).unwrap();
        prop_assert!(r.rx_power_dbm <= spec.tx_power_dbm + spec.tx_gain_dbi + spec.rx_gain_dbi);
    }

    #[test]
    fn db_round_trip(x in 1e-30..1e30f64) {
        let back = db_to_linear(linear_to_db(x));
        prop_assert!((back - x).abs() / x < 1e-9);
    }

    #[test]
    fn hybrid_dominates((a, b) in access_pair(), c in condition()) {
        let w = WeatherState::new(c, Atmosphere::default());
        let f = fso_budget(&a, &b, &default_linkspec(Band::Fso), &w).unwrap();
        let t = rf_budget(&a, &b, &default_linkspec(Band::Thz), &w).unwrap();
        let h = hybrid_rate(&f, &t);
        prop_assert!(h >= f.capacity_bps && h >= t.capacity_bps);
        prop_assert_eq!(h, f.capacity_bps.max(t.capacity_bps));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planner_matches_linear_scan(distance in 50.0..900.0f64, target_gbps in 0.0..700.0f64, n_max in 1usize..9) {
        let s = Scenario::default();
        let target = target_gbps * 1e9;
        let oracle = (1..=n_max).find(|&n| clear_sky_capacity(&s, distance, n).unwrap() >= target);
        let plan = plan_min_nodes(&s, distance, target, n_max).unwrap();
        prop_assert_eq!(plan.n_haps(), oracle);
        if let PlanOutcome::Infeasible { n_max: reported, .. } = plan {
            prop_assert_eq!(reported, n_max);
        }
    }

    #[test]
    fn more_haps_never_hurt(distance in 50.0..900.0f64, n in 1usize..8) {
        let s = Scenario::default();
        let fewer = clear_sky_capacity(&s, distance, n).unwrap();
        let more = clear_sky_capacity(&s, distance, n + 1).unwrap();
        prop_assert!(more >= fewer, "{} HAPS: {} > {}", n, fewer, more);
    }

    #[test]
    fn placed_chains_are_valid(distance in 1.0..2000.0f64, n in 1usize..12) {
        let chain = place_chain(distance, n).unwrap();
        prop_assert_eq!(chain.len(), n + 1);
        prop_assert!(chain.windows(2).all(|w| w[1].ground_arc_km > w[0].ground_arc_km));
        prop_assert!((chain[n].ground_arc_km - distance).abs() < 1e-9 * distance);
    }
}

#[test]
fn median_rate_falls_with_radius() {
    let mut s = Scenario::default();
    s.populations.terrestrial_bs = 200;
    let mut last = f64::INFINITY;
    for radius in [5.0, 15.0, 30.0, 50.0, 80.0] {
        s.disaster_radius_km = radius;
        let cdf = access_cdf(&s, AccessLink::Band(Band::KaBand), NodeKind::TerrestrialBs, Condition::Clear, 20).unwrap();
        cdf.check().unwrap();
        assert!(cdf.median() <= last, "radius {radius}");
        last = cdf.median();
    }
}

#[test]
fn reference_geometry_weather_orderings() {
    // End-point HAPS at 20 km, terminal 25 km away along the ground.
    let hub = node(NodeKind::HapsEndpoint, 0.0, 20.0);
    let user = node(NodeKind::TerrestrialBs, 25.0, 0.0);
    let atm = Atmosphere::default();
    let rate = |band, c| {
        link_budget(&hub, &user, &default_linkspec(band), &WeatherState::new(c, atm))
            .unwrap()
            .capacity_bps
    };
    assert!(rate(Band::Fso, Condition::Clear) > rate(Band::Thz, Condition::Clear));
    assert!(rate(Band::Thz, Condition::Cloud) > rate(Band::Fso, Condition::Cloud));
    assert!(rate(Band::Thz, Condition::Fog) > rate(Band::Fso, Condition::Fog));
    assert!(rate(Band::Fso, Condition::Rain) > rate(Band::Thz, Condition::Rain));
    assert!(rate(Band::Thz, Condition::Rain) < 0.1 * rate(Band::Thz, Condition::Clear));
}
