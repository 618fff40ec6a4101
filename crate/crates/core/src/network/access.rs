//! Monte Carlo access and fronthaul rate distributions.
//!
//! Each trial draws terminal positions uniformly over the disaster disk and
//! evaluates the link from the end-point HAPS to every terminal. Trials run
//! on the current rayon pool; results are reduced in trial-index order so the
//! output does not depend on the pool size.

use std::fmt;
use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link_budget::link_budget;
use crate::scenario::{Band, Condition, Node, NodeKind, Scenario};

/// UAV altitudes are drawn from `(UAV_MIN_ALTITUDE_KM, UAV_MAX_DRAW_KM]`.
pub const UAV_MIN_ALTITUDE_KM: f64 = 0.1;
pub const UAV_MAX_DRAW_KM: f64 = 3.0;

/// Independent random stream for one trial: the master seed keys the
/// generator and the trial index selects the stream.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// A point of the disaster disk. `along_km` is the ground arc along the chain's
/// great circle, `cross_km` the perpendicular surface offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    pub along_km: f64,
    pub cross_km: f64,
}

impl DiskPoint {
    /// Surface distance to a point on the chain's great circle.
    pub fn ground_distance_to(&self, arc_km: f64) -> f64 {
        (self.along_km - arc_km).hypot(self.cross_km)
    }
}

/// Draws `count` points uniformly over a disk.
pub fn sample_disk<R: Rng + ?Sized>(count: usize, radius_km: f64, center_arc_km: f64, rng: &mut R) -> Vec<DiskPoint> {
    (0..count)
        .map(|_| {
            let r = radius_km * rng.random::<f64>().sqrt();
            let angle = std::f64::consts::TAU * rng.random::<f64>();
            DiskPoint {
                along_km: center_arc_km + r * angle.cos(),
                cross_km: r * angle.sin(),
            }
        })
        .collect()
}

/// Places a terminal at `point` as seen from `hub`.
///
/// Links from the hub depend only on the surface distance, so the terminal
/// is rotated onto the chain's great circle, beyond the hub.
pub fn terminal_node(hub: &Node, point: &DiskPoint, kind: NodeKind, altitude_km: f64, id: String) -> Node {
    let distance = point.ground_distance_to(hub.ground_arc_km);
    Node::new(id, kind, hub.ground_arc_km + distance, altitude_km)
}

/// Which rate an access study reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccessLink {
    Band(Band),
    /// Selection combining of FSO and THz on the same placement.
    Hybrid,
}

impl AccessLink {
    pub fn token(self) -> &'static str {
        match self {
            AccessLink::Band(b) => b.token(),
            AccessLink::Hybrid => "hybrid",
        }
    }

    /// RF access bands share their bandwidth among active users.
    pub fn is_shared(self) -> bool {
        matches!(self, AccessLink::Band(Band::KaBand | Band::SBand))
    }
}

impl fmt::Display for AccessLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateMetric {
    PerLink,
    Shared,
}

/// Empirical CDF of per-terminal rates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfSeries {
    pub link: AccessLink,
    pub weather: Condition,
    pub terminal: NodeKind,
    pub metric: RateMetric,
    pub trials: u32,
    pub seed: u64,
    /// Ascending.
    pub rates_bps: Vec<f64>,
    pub cum_prob: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CdfRow {
    rate_bps: f64,
    cum_prob: f64,
}

/// `(i + 1) / n` for each sorted sample.
fn empirical_probabilities(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / n as f64).collect()
}

impl CdfSeries {
    pub fn from_samples(
        mut rates_bps: Vec<f64>,
        link: AccessLink,
        weather: Condition,
        terminal: NodeKind,
        metric: RateMetric,
        trials: u32,
        seed: u64,
    ) -> Self {
        rates_bps.sort_by(f64::total_cmp);
        let cum_prob = empirical_probabilities(rates_bps.len());
        CdfSeries {
            link,
            weather,
            terminal,
            metric,
            trials,
            seed,
            rates_bps,
            cum_prob,
        }
    }

    pub fn len(&self) -> usize {
        self.rates_bps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates_bps.is_empty()
    }

    /// Smallest sample whose cumulative probability reaches `p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let idx = self.cum_prob.partition_point(|&c| c < p).min(self.len().saturating_sub(1));
        self.rates_bps[idx]
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    pub fn min(&self) -> f64 {
        self.rates_bps[0]
    }

    pub fn max(&self) -> f64 {
        self.rates_bps[self.len() - 1]
    }

    /// Checks sortedness and the probability ladder.
    pub fn check(&self) -> std::result::Result<(), String> {
        if self.rates_bps.len() != self.cum_prob.len() {
            return Err("rates and probabilities differ in length".into());
        }
        if self.is_empty() {
            return Err("empty series".into());
        }
        if self.rates_bps.windows(2).any(|w| w[0] > w[1]) {
            return Err("rates not sorted ascending".into());
        }
        if self.rates_bps.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err("rates must be finite and non-negative".into());
        }
        if self.cum_prob.windows(2).any(|w| w[0] > w[1]) {
            return Err("probabilities decrease".into());
        }
        if self.cum_prob.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err("probability outside [0, 1]".into());
        }
        if self.cum_prob[self.len() - 1] != 1.0 {
            return Err("final probability is not 1".into());
        }
        Ok(())
    }

    /// Writes `rate_bps,cum_prob` rows.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for (&rate_bps, &cum_prob) in self.rates_bps.iter().zip(&self.cum_prob) {
            w.serialize(CdfRow { rate_bps, cum_prob })?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads `(rate_bps, cum_prob)` pairs back from CSV.
    pub fn read_csv<R: io::Read>(reader: R) -> csv::Result<Vec<(f64, f64)>> {
        csv::Reader::from_reader(reader)
            .deserialize::<CdfRow>()
            .map(|row| row.map(|r| (r.rate_bps, r.cum_prob)))
            .collect()
    }
}

/// Per-terminal rates of one access study, in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct AccessSeries {
    pub link: AccessLink,
    pub per_link_bps: Vec<f64>,
    /// Number of users simultaneously sharing an RF band; 1 for optical links.
    pub active_users: u64,
}

impl AccessSeries {
    pub fn shared_bps(&self) -> Vec<f64> {
        let n = self.active_users as f64;
        self.per_link_bps.iter().map(|r| r / n).collect()
    }
}

/// Result of an access study over several links on identical placements.
#[derive(Debug, Clone, PartialEq)]
pub struct AccessStudy {
    pub terminal: NodeKind,
    pub weather: Condition,
    pub trials: u32,
    pub seed: u64,
    pub series: Vec<AccessSeries>,
}

impl AccessStudy {
    pub fn series(&self, link: AccessLink) -> Option<&AccessSeries> {
        self.series.iter().find(|s| s.link == link)
    }

    fn cdf(&self, s: &AccessSeries, metric: RateMetric) -> CdfSeries {
        let samples = match metric {
            RateMetric::PerLink => s.per_link_bps.clone(),
            RateMetric::Shared => s.shared_bps(),
        };
        CdfSeries::from_samples(samples, s.link, self.weather, self.terminal, metric, self.trials, self.seed)
    }

    /// Reported CDF: shared rates for RF access bands, per-link otherwise.
    pub fn reported_cdf(&self, link: AccessLink) -> Option<CdfSeries> {
        let s = self.series(link)?;
        let metric = if link.is_shared() { RateMetric::Shared } else { RateMetric::PerLink };
        Some(self.cdf(s, metric))
    }

    pub fn per_link_cdf(&self, link: AccessLink) -> Option<CdfSeries> {
        self.series(link).map(|s| self.cdf(s, RateMetric::PerLink))
    }
}

/// Active users sharing an RF band: `floor(population * activity_factor)`,
/// at least one.
pub fn active_users(scenario: &Scenario, kind: NodeKind) -> u64 {
    let population = scenario.populations.get(kind).unwrap_or(0);
    let af = scenario.activity_factors.get(kind).unwrap_or(1.0);
    ((population as f64 * af).floor() as u64).max(1)
}

/// Terminal nodes of one trial.
pub fn trial_terminals(scenario: &Scenario, kind: NodeKind, count: usize, trial: u64) -> Vec<Node> {
    let mut rng = trial_rng(scenario.rng_seed, trial);
    let points = sample_disk(count, scenario.disaster_radius_km, scenario.disaster_center_arc_km, &mut rng);
    // Altitudes are drawn after all positions so placements coincide across kinds.
    let altitudes: Vec<f64> = match kind {
        NodeKind::Uav => (0..count)
            .map(|_| UAV_MAX_DRAW_KM - (UAV_MAX_DRAW_KM - UAV_MIN_ALTITUDE_KM) * rng.random::<f64>())
            .collect(),
        _ => vec![0.0; count],
    };
    let hub = scenario.endpoint();
    points
        .iter()
        .zip(altitudes)
        .enumerate()
        .map(|(i, (p, alt))| terminal_node(hub, p, kind, alt, format!("{kind}-{trial}-{i}")))
        .collect()
}

/// Per-link rate from the end-point HAPS to each terminal.
pub fn terminal_rates(scenario: &Scenario, band: Band, terminals: &[Node], weather: Condition) -> Result<Vec<f64>> {
    let hub = scenario.endpoint();
    let spec = scenario.link(band);
    let w = scenario.weather(weather);
    terminals
        .iter()
        .map(|t| link_budget(hub, t, spec, &w).map(|r| r.capacity_bps))
        .collect()
}

fn bands_for(link: AccessLink) -> &'static [Band] {
    match link {
        AccessLink::Band(Band::Fso) => &[Band::Fso],
        AccessLink::Band(Band::Thz) => &[Band::Thz],
        AccessLink::Band(Band::KaBand) => &[Band::KaBand],
        AccessLink::Band(Band::SBand) => &[Band::SBand],
        AccessLink::Hybrid => &[Band::Fso, Band::Thz],
    }
}

/// Evaluates `links` over `trials` independent placements of the terminal
/// population.
pub fn access_study(
    scenario: &Scenario,
    links: &[AccessLink],
    kind: NodeKind,
    weather: Condition,
    trials: u32,
) -> Result<AccessStudy> {
    let population = scenario
        .populations
        .get(kind)
        .ok_or_else(|| Error::domain(format!("{kind} is not a terminal kind")))?;
    if population == 0 {
        return Err(Error::domain(format!("population of {kind} is zero")));
    }
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    if scenario.endpoint().kind != NodeKind::HapsEndpoint {
        return Err(Error::domain("scenario chain has no end-point HAPS"));
    }
    let count = usize::try_from(population)
        .map_err(|_| Error::domain(format!("population {population} too large")))?;

    let mut bands: Vec<Band> = links.iter().flat_map(|l| bands_for(*l).iter().copied()).collect();
    bands.sort();
    bands.dedup();

    // rates[trial][band slot][terminal]
    let per_trial: Vec<Vec<Vec<f64>>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let terminals = trial_terminals(scenario, kind, count, trial);
            bands
                .iter()
                .map(|&b| terminal_rates(scenario, b, &terminals, weather))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let slot = |b: Band| bands.iter().position(|x| *x == b).expect("band evaluated");
    let users = active_users(scenario, kind);
    let series = links
        .iter()
        .map(|&link| {
            let per_link_bps: Vec<f64> = match link {
                AccessLink::Band(b) => per_trial.iter().flat_map(|t| t[slot(b)].iter().copied()).collect(),
                AccessLink::Hybrid => {
                    let (f, t) = (slot(Band::Fso), slot(Band::Thz));
                    per_trial
                        .iter()
                        .flat_map(|tr| tr[f].iter().zip(&tr[t]).map(|(a, b)| a.max(*b)))
                        .collect()
                }
            };
            AccessSeries {
                link,
                per_link_bps,
                active_users: if link.is_shared() { users } else { 1 },
            }
        })
        .collect();

    Ok(AccessStudy {
        terminal: kind,
        weather,
        trials,
        seed: scenario.rng_seed,
        series,
    })
}

/// CDF of access rates for one link.
pub fn access_cdf(
    scenario: &Scenario,
    link: AccessLink,
    kind: NodeKind,
    weather: Condition,
    trials: u32,
) -> Result<CdfSeries> {
    let study = access_study(scenario, &[link], kind, weather, trials)?;
    Ok(study.reported_cdf(link).expect("requested link is present"))
}
