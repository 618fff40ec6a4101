//! Spherical-earth geometry for nodes on a common great circle.
//!
//! A node at ground arc `s` and altitude `h` sits at radius `R + h` and
//! central angle `s / R`. Rays are straight chords between two nodes; no
//! refraction.

use serde::Serialize;

use crate::scenario::Node;

pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Rays dipping less than this below the surface are treated as grazing,
/// not blocked.
const BLOCKAGE_TOLERANCE_KM: f64 = 1e-9;

/// Straight line of sight between two nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeoRay {
    pub endpoints: [Node; 2],
    pub chord_km: f64,
    /// Lowest altitude reached by the chord. Negative when the chord passes
    /// through the Earth.
    pub min_ray_altitude_km: f64,
    /// Elevation of the ray above the local horizontal at the lower endpoint.
    pub elevation_deg: f64,
}

impl GeoRay {
    /// The ray passes through air below `ceiling_km`.
    pub fn is_tropospheric(&self, ceiling_km: f64) -> bool {
        self.min_ray_altitude_km < ceiling_km
    }

    pub fn is_blocked(&self) -> bool {
        self.min_ray_altitude_km < -BLOCKAGE_TOLERANCE_KM
    }
}

/// Scalar description of the chord `P(t) = A + t (B - A)`, `t` in `[0, 1]`,
/// written in cancellation-free form.
#[derive(Debug, Clone, Copy)]
struct Chord {
    alt_a: f64,
    alt_b: f64,
    r_a: f64,
    r_b: f64,
    /// sin of the central angle between the endpoints
    sin_theta: f64,
    /// 1 - cos of the central angle
    versine: f64,
    /// `|B - A|^2`
    len_sq: f64,
    /// `A . (B - A)`
    a_dot_d: f64,
}

impl Chord {
    fn new(a: &Node, b: &Node) -> Self {
        let theta = (b.ground_arc_km - a.ground_arc_km).abs() / EARTH_RADIUS_KM;
        let r_a = EARTH_RADIUS_KM + a.altitude_km;
        let r_b = EARTH_RADIUS_KM + b.altitude_km;
        // 1 - cos(theta) = 2 sin^2(theta / 2)
        let versine = 2.0 * (theta / 2.0).sin().powi(2);
        let dr = r_b - r_a;
        Chord {
            alt_a: a.altitude_km,
            alt_b: b.altitude_km,
            r_a,
            r_b,
            sin_theta: theta.sin(),
            versine,
            len_sq: dr * dr + 2.0 * r_a * r_b * versine,
            a_dot_d: r_a * (dr - r_b * versine),
        }
    }

    fn length(&self) -> f64 {
        self.len_sq.sqrt()
    }

    /// Parameter of the point closest to the Earth's centre, clamped to the segment.
    fn t_lowest(&self) -> f64 {
        if self.len_sq == 0.0 {
            return 0.0;
        }
        (-self.a_dot_d / self.len_sq).clamp(0.0, 1.0)
    }

    fn min_altitude(&self) -> f64 {
        let t = self.t_lowest();
        if t == 0.0 {
            self.alt_a
        } else if t == 1.0 {
            self.alt_b
        } else {
            // perpendicular distance from the centre to the line
            self.r_a * self.r_b * self.sin_theta / self.length() - EARTH_RADIUS_KM
        }
    }

    /// Measure of `{t in [0, 1] : altitude(t) <= alt}`.
    fn fraction_below(&self, alt: f64) -> f64 {
        if self.len_sq == 0.0 {
            return if self.alt_a <= alt { 1.0 } else { 0.0 };
        }
        // |P(t)|^2 - rho^2 = len_sq t^2 + 2 a_dot_d t + c
        let rho = EARTH_RADIUS_KM + alt;
        let c = (self.alt_a - alt) * (self.r_a + rho);
        let half_b = self.a_dot_d;
        let a = self.len_sq;
        let disc = half_b * half_b - a * c;
        if disc <= 0.0 {
            return 0.0;
        }
        let sq = disc.sqrt();
        // stable roots
        let q = -(half_b + half_b.signum() * sq);
        let (mut t1, mut t2) = if q == 0.0 {
            (-sq / a, sq / a)
        } else {
            (q / a, c / q)
        };
        if t1 > t2 {
            std::mem::swap(&mut t1, &mut t2);
        }
        (t2.min(1.0) - t1.max(0.0)).max(0.0)
    }
}

/// Straight-line distance between two nodes, km.
pub fn slant_range(a: &Node, b: &Node) -> f64 {
    Chord::new(a, b).length()
}

pub fn ray_clearance(a: &Node, b: &Node) -> GeoRay {
    let chord = Chord::new(a, b);
    let length = chord.length();
    let elevation_deg = if length == 0.0 {
        0.0
    } else {
        // Component of the unit ray along the local vertical at the lower end.
        let (vertical, r_far) = if a.altitude_km <= b.altitude_km {
            (chord.alt_b - chord.alt_a, chord.r_b)
        } else {
            (chord.alt_a - chord.alt_b, chord.r_a)
        };
        let up = vertical - r_far * chord.versine;
        (up / length).clamp(-1.0, 1.0).asin().to_degrees()
    };
    GeoRay {
        endpoints: [a.clone(), b.clone()],
        chord_km: length,
        min_ray_altitude_km: chord.min_altitude(),
        elevation_deg,
    }
}

/// Length of the chord lying below `ceiling_km`, km.
pub fn tropospheric_length(a: &Node, b: &Node, ceiling_km: f64) -> f64 {
    let chord = Chord::new(a, b);
    chord.length() * chord.fraction_below(ceiling_km)
}

/// Length of the chord whose altitude lies within `[bottom_km, top_km]`, km.
pub fn length_within(a: &Node, b: &Node, bottom_km: f64, top_km: f64) -> f64 {
    if top_km <= bottom_km {
        return 0.0;
    }
    let chord = Chord::new(a, b);
    let frac = chord.fraction_below(top_km) - chord.fraction_below(bottom_km);
    chord.length() * frac.max(0.0)
}

/// The point at parameter `t` along the chord from `a` to `b`, expressed as a
/// node on the same great circle.
pub fn point_on_ray(a: &Node, b: &Node, t: f64, id: impl Into<String>) -> Node {
    let phi_a = a.ground_arc_km / EARTH_RADIUS_KM;
    let phi_b = b.ground_arc_km / EARTH_RADIUS_KM;
    let (ra, rb) = (EARTH_RADIUS_KM + a.altitude_km, EARTH_RADIUS_KM + b.altitude_km);
    let (xa, ya) = (ra * phi_a.sin(), ra * phi_a.cos());
    let (xb, yb) = (rb * phi_b.sin(), rb * phi_b.cos());
    let (x, y) = (xa + t * (xb - xa), ya + t * (yb - ya));
    let r = x.hypot(y);
    Node::new(
        id,
        a.kind,
        x.atan2(y) * EARTH_RADIUS_KM,
        r - EARTH_RADIUS_KM,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::NodeKind;

    fn ground(arc: f64) -> Node {
        Node::new("g", NodeKind::GroundStation, arc, 0.0)
    }

    fn haps(arc: f64) -> Node {
        Node::haps("h", NodeKind::HapsRelay, arc)
    }

    /// Law of cosines on explicit radii, independent of `Chord`.
    fn chord_oracle(a: &Node, b: &Node) -> f64 {
        let theta = (a.ground_arc_km - b.ground_arc_km).abs() / EARTH_RADIUS_KM;
        let ra = EARTH_RADIUS_KM + a.altitude_km;
        let rb = EARTH_RADIUS_KM + b.altitude_km;
        (ra * ra + rb * rb - 2.0 * ra * rb * theta.cos()).sqrt()
    }

    #[test]
    fn vertical_and_identity() {
        assert!((slant_range(&ground(0.0), &haps(0.0)) - 20.0).abs() < 1e-9);
        assert_eq!(slant_range(&haps(5.0), &haps(5.0)), 0.0);
    }

    #[test]
    fn slant_50km_arc() {
        let d = slant_range(&ground(0.0), &haps(50.0));
        let flat = (50.0f64.powi(2) + 20.0f64.powi(2)).sqrt();
        assert!((d - 53.85).abs() / 53.85 < 0.002, "{d}");
        assert!((d - chord_oracle(&ground(0.0), &haps(50.0))).abs() < 1e-9);
        assert!((d - flat).abs() / flat < 0.005);
    }

    #[test]
    fn sagitta_clearance() {
        let r267 = ray_clearance(&haps(0.0), &haps(267.0));
        let sag = 267.0f64.powi(2) / (8.0 * EARTH_RADIUS_KM);
        assert!((sag - 1.40).abs() < 0.005);
        assert!(((20.0 - r267.min_ray_altitude_km) - sag).abs() / sag < 0.01);
        assert!(!r267.is_tropospheric(10.0));

        let r800 = ray_clearance(&haps(0.0), &haps(800.0));
        assert!((r800.min_ray_altitude_km - 7.4).abs() < 0.1, "{}", r800.min_ray_altitude_km);
        assert!(r800.is_tropospheric(10.0));
        assert!(!r800.is_blocked());
    }

    #[test]
    fn ground_endpoint_is_lowest() {
        let r = ray_clearance(&ground(0.0), &haps(0.0));
        assert_eq!(r.min_ray_altitude_km, 0.0);
        assert!(r.is_tropospheric(10.0));
        assert!((r.elevation_deg - 90.0).abs() < 1e-6);
    }

    #[test]
    fn beyond_horizon_is_blocked() {
        let r = ray_clearance(&ground(0.0), &haps(800.0));
        assert!(r.is_blocked());
        assert!(r.elevation_deg < 0.0);
    }

    #[test]
    fn tropospheric_lengths() {
        assert_eq!(tropospheric_length(&haps(0.0), &haps(100.0), 10.0), 0.0);
        assert!((tropospheric_length(&ground(0.0), &haps(0.0), 10.0) - 10.0).abs() < 1e-9);
        let slab = 10.0 / (20.0f64 / 50.0).atan().sin();
        let t = tropospheric_length(&ground(0.0), &haps(50.0), 10.0);
        assert!((t - slab).abs() / slab < 0.01, "{t} vs {slab}");
    }

    #[test]
    fn elevation_matches_flat_estimate() {
        let r = ray_clearance(&haps(50.0), &ground(0.0));
        assert!((r.elevation_deg - 21.8).abs() < 0.5, "{}", r.elevation_deg);
    }

    #[test]
    fn point_on_ray_endpoints() {
        let (a, b) = (ground(10.0), haps(60.0));
        let p0 = point_on_ray(&a, &b, 0.0, "p");
        let p1 = point_on_ray(&a, &b, 1.0, "p");
        assert!((p0.ground_arc_km - 10.0).abs() < 1e-9 && p0.altitude_km.abs() < 1e-9);
        assert!((p1.ground_arc_km - 60.0).abs() < 1e-9 && (p1.altitude_km - 20.0).abs() < 1e-9);
        let mid = point_on_ray(&a, &b, 0.5, "p");
        let d = slant_range(&a, &mid) + slant_range(&mid, &b);
        assert!((d - slant_range(&a, &b)).abs() < 1e-9);
    }
}
