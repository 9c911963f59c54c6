//! Analysis cases, configuration layering and trajectory runs.

mod io;
mod report;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::antenna::{AntennaPattern, Mount, PointingMode};
use crate::attenuation::{apply_excess, AttenuationConfig, LinkClass, Weather};
use crate::chanstats::SnapshotStats;
use crate::error::{Error, Result};
use crate::mpc::MpcSet;
use crate::raytracer::{Link, Source, TraceConfig, Tracer};
use crate::scene::{HsrScenarioConfig, Scene, SceneDescription, Vec3d};

pub use io::{read_trace, write_trace};
pub use report::{fit_rows, regenerate, write_case_outputs, write_system_outputs, FitRow, PARAMETERS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transmitter {
    /// Terrestrial base station.
    Bs,
    /// Satellite antenna.
    Sa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Receiver {
    /// Train user equipment, served by the base station.
    TrUe,
    /// Satellite user equipment on the train roof.
    SaUe,
}

/// A transmitter/receiver pair regardless of weather.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkKey {
    pub tx: Transmitter,
    pub rx: Receiver,
}

impl LinkKey {
    pub const ALL: [LinkKey; 4] = [
        LinkKey { tx: Transmitter::Bs, rx: Receiver::TrUe },
        LinkKey { tx: Transmitter::Bs, rx: Receiver::SaUe },
        LinkKey { tx: Transmitter::Sa, rx: Receiver::SaUe },
        LinkKey { tx: Transmitter::Sa, rx: Receiver::TrUe },
    ];

    pub fn class(self) -> LinkClass {
        match self.tx {
            Transmitter::Bs => LinkClass::Terrestrial,
            Transmitter::Sa => LinkClass::Satellite,
        }
    }

    /// Whether the receiver belongs to the same system as the transmitter.
    pub fn is_signal(self) -> bool {
        matches!((self.tx, self.rx), (Transmitter::Bs, Receiver::TrUe) | (Transmitter::Sa, Receiver::SaUe))
    }

    pub fn with_weather(self, weather: Weather) -> CaseSpec {
        CaseSpec { tx: self.tx, rx: self.rx, weather }
    }
}

impl fmt::Display for LinkKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tx = match self.tx {
            Transmitter::Bs => "BS",
            Transmitter::Sa => "SA",
        };
        let rx = match self.rx {
            Receiver::TrUe => "TrUE",
            Receiver::SaUe => "SaUE",
        };
        write!(f, "{tx}2{rx}")
    }
}

/// One analysis case: a link under one weather condition, e.g. `BS2TrUE-R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseSpec {
    pub tx: Transmitter,
    pub rx: Receiver,
    pub weather: Weather,
}

impl CaseSpec {
    pub const ALL: [CaseSpec; 8] = [
        case(Transmitter::Bs, Receiver::TrUe, Weather::Rainy),
        case(Transmitter::Bs, Receiver::TrUe, Weather::Sunny),
        case(Transmitter::Bs, Receiver::SaUe, Weather::Rainy),
        case(Transmitter::Bs, Receiver::SaUe, Weather::Sunny),
        case(Transmitter::Sa, Receiver::SaUe, Weather::Rainy),
        case(Transmitter::Sa, Receiver::SaUe, Weather::Sunny),
        case(Transmitter::Sa, Receiver::TrUe, Weather::Rainy),
        case(Transmitter::Sa, Receiver::TrUe, Weather::Sunny),
    ];

    pub fn link(self) -> LinkKey {
        LinkKey { tx: self.tx, rx: self.rx }
    }

    pub fn id(self) -> String {
        self.to_string()
    }
}

const fn case(tx: Transmitter, rx: Receiver, weather: Weather) -> CaseSpec {
    CaseSpec { tx, rx, weather }
}

impl fmt::Display for CaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.link(), self.weather.letter())
    }
}

impl FromStr for CaseSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseSpec::ALL.into_iter().find(|c| c.to_string() == s).ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

/// Signal and interference links of one system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SystemPair {
    pub name: &'static str,
    pub signal: LinkKey,
    pub interference: LinkKey,
}

pub const SYSTEMS: [SystemPair; 2] = [
    SystemPair {
        name: "terrestrial",
        signal: LinkKey { tx: Transmitter::Bs, rx: Receiver::TrUe },
        interference: LinkKey { tx: Transmitter::Sa, rx: Receiver::TrUe },
    },
    SystemPair {
        name: "satellite",
        signal: LinkKey { tx: Transmitter::Sa, rx: Receiver::SaUe },
        interference: LinkKey { tx: Transmitter::Bs, rx: Receiver::SaUe },
    },
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntennaSettings {
    /// Transmit power; ignored for receivers.
    #[serde(default)]
    pub power_dbm: f64,
    pub max_gain_dbi: f64,
    pub beamwidth_deg: f64,
    /// Sidelobe floor below the peak gain.
    #[serde(default = "default_floor")]
    pub floor_below_db: f64,
    pub pointing: PointingMode,
}

fn default_floor() -> f64 {
    30.0
}

impl AntennaSettings {
    fn pattern(&self, boresight: Vec3d) -> Result<AntennaPattern<f64>> {
        AntennaPattern::with_relative_floor(self.max_gain_dbi, self.beamwidth_deg, self.floor_below_db, boresight)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Terminals {
    pub bs: AntennaSettings,
    /// Point the base station boresight passes through.
    pub bs_boresight_target: Vec3d,
    pub sa: AntennaSettings,
    pub tr_ue: AntennaSettings,
    pub sa_ue: AntennaSettings,
}

impl Default for Terminals {
    fn default() -> Self {
        let fixed = PointingMode::FixedOrientation;
        Terminals {
            bs: AntennaSettings {
                power_dbm: 20.0,
                max_gain_dbi: 16.0,
                beamwidth_deg: 20.0,
                floor_below_db: 30.0,
                pointing: fixed,
            },
            bs_boresight_target: Vec3d::new(250.0, 0.0, 4.7),
            sa: AntennaSettings {
                power_dbm: 40.6,
                max_gain_dbi: 53.0,
                beamwidth_deg: 1.0,
                floor_below_db: 30.0,
                pointing: fixed,
            },
            tr_ue: AntennaSettings {
                power_dbm: 0.0,
                max_gain_dbi: 22.0,
                beamwidth_deg: 20.0,
                floor_below_db: 30.0,
                pointing: fixed,
            },
            sa_ue: AntennaSettings {
                power_dbm: 0.0,
                max_gain_dbi: 32.0,
                beamwidth_deg: 3.0,
                floor_below_db: 30.0,
                pointing: PointingMode::TrackTarget,
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationConfig {
    pub trace: TraceConfig,
    pub attenuation: AttenuationConfig,
    pub terminals: Terminals,
    /// Worker threads; `None` lets the caller decide.
    pub workers: Option<usize>,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        self.trace.validate()?;
        self.attenuation.validate()?;
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(())
    }
}

/// Scene file: a scene description plus an optional `[simulation]` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(flatten)]
    pub scene: SceneDescription,
    #[serde(default)]
    pub simulation: SimulationConfig,
}

impl ScenarioFile {
    /// The built-in railway scenario with default simulation settings.
    pub fn builtin() -> Result<Self> {
        Ok(ScenarioFile { scene: HsrScenarioConfig::default().description()?, simulation: SimulationConfig::default() })
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }
}

/// Command-line level overrides, applied on top of the scene file.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub workers: Option<usize>,
    pub cutoff_db: Option<f64>,
    pub tile_m2: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut SimulationConfig) {
        if let Some(w) = self.workers {
            cfg.workers = Some(w);
        }
        if let Some(c) = self.cutoff_db {
            cfg.trace.cutoff_db = c;
        }
        if let Some(t) = self.tile_m2 {
            cfg.trace.tile_m2 = t;
        }
    }
}

/// Traced snapshots of one case with its excess attenuation applied.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseRun {
    pub case: CaseSpec,
    pub excess_db: f64,
    pub track_distance_m: Vec<f64>,
    pub snapshots: Vec<MpcSet<f64>>,
}

impl CaseRun {
    pub fn stats(&self) -> Vec<SnapshotStats<f64>> {
        self.snapshots.iter().map(|s| SnapshotStats::from_mpcs(&s.mpcs)).collect()
    }

    /// Total received power per snapshot, negative infinity when nothing arrives.
    pub fn total_power(&self) -> Vec<f64> {
        self.stats().iter().map(|s| s.power.p_total).collect()
    }
}

/// A built scene together with the simulation settings.
pub struct Campaign {
    scene: Scene,
    config: SimulationConfig,
}

impl Campaign {
    pub fn new(file: &ScenarioFile) -> Result<Self> {
        file.simulation.validate()?;
        Ok(Campaign { scene: Scene::from_description(&file.scene)?, config: file.simulation.clone() })
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    pub fn workers(&self) -> usize {
        self.config.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn snapshot_count(&self) -> usize {
        self.scene.trajectory.sample_count
    }

    fn rx_position(&self, rx: Receiver, index: usize) -> Vec3d {
        let ep = &self.scene.endpoints;
        let h = match rx {
            Receiver::TrUe => ep.true_height_m,
            Receiver::SaUe => ep.saue_height_m,
        };
        self.scene.trajectory.position(index) + Vec3d::unit_z() * h
    }

    /// Link with antennas oriented for snapshot `index`.
    pub fn link(&self, key: LinkKey, index: usize) -> Result<Link> {
        let ep = &self.scene.endpoints;
        let t = &self.config.terminals;
        let sat = ep.satellite_direction();
        let (source, tx_power_dbm, tx_pattern) = match key.tx {
            Transmitter::Bs => {
                let boresight = (t.bs_boresight_target - ep.bs)
                    .try_normalize()
                    .ok_or_else(|| Error::Config("base station boresight target equals its position".into()))?;
                (Source::Point(ep.bs), t.bs.power_dbm, t.bs.pattern(boresight)?)
            }
            Transmitter::Sa => (
                Source::PlaneWave { toward_source: sat, distance_m: ep.satellite_distance_m },
                t.sa.power_dbm,
                t.sa.pattern(-sat)?,
            ),
        };
        let rx = self.rx_position(key.rx, index);
        let start = self.rx_position(key.rx, 0);
        let rx_pattern = match key.rx {
            Receiver::TrUe => {
                let mount = Mount::aimed_at(start, t.tr_ue.pattern(Vec3d::unit_x())?, t.tr_ue.pointing, ep.bs)?;
                mount.orient(rx, ep.bs)?
            }
            Receiver::SaUe => {
                let mount = Mount { position: start, pattern: t.sa_ue.pattern(sat)?, pointing: t.sa_ue.pointing };
                mount.orient_direction(sat)?
            }
        };
        Ok(Link { source, tx_power_dbm, tx_pattern, rx, rx_pattern })
    }

    /// Traces every snapshot of a link, without excess attenuation.
    pub fn trace_link(&self, tracer: &Tracer, key: LinkKey) -> Result<Vec<MpcSet<f64>>> {
        let n = self.snapshot_count();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers())
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        log::info!("tracing {key}: {n} snapshots on {} workers", self.workers());
        pool.install(|| (0..n).into_par_iter().map(|i| tracer.snapshot(&self.link(key, i)?, i)).collect())
    }

    pub fn tracer(&self) -> Result<Tracer<'_>> {
        Tracer::new(&self.scene, self.config.trace.clone())
    }

    pub fn excess_db(&self, case: CaseSpec) -> Result<f64> {
        self.config.attenuation.excess(case.link().class(), case.weather)
    }

    fn case_run(&self, case: CaseSpec, raw: &[MpcSet<f64>]) -> Result<CaseRun> {
        let excess_db = self.excess_db(case)?;
        let snapshots = raw.iter().map(|s| apply_excess(s, excess_db)).collect::<Result<Vec<_>>>()?;
        let track_distance_m = (0..raw.len()).map(|i| self.scene.trajectory.track_distance(i)).collect();
        Ok(CaseRun { case, excess_db, track_distance_m, snapshots })
    }

    pub fn run_case(&self, case: CaseSpec) -> Result<CaseRun> {
        let tracer = self.tracer()?;
        let raw = self.trace_link(&tracer, case.link())?;
        self.case_run(case, &raw)
    }

    /// All eight cases in table order; each link is traced once and reused for both weathers.
    pub fn run_all(&self) -> Result<Vec<CaseRun>> {
        let tracer = self.tracer()?;
        let mut traced = Vec::new();
        for key in LinkKey::ALL {
            traced.push((key, self.trace_link(&tracer, key)?));
        }
        CaseSpec::ALL
            .iter()
            .map(|&case| {
                let raw = &traced.iter().find(|(k, _)| *k == case.link()).expect("all links traced").1;
                self.case_run(case, raw)
            })
            .collect()
    }
}

/// Runs one case and writes its files into `out_dir`.
pub fn run_case_to_dir(campaign: &Campaign, case: CaseSpec, out_dir: &Path) -> Result<Vec<PathBuf>> {
    create_dir(out_dir)?;
    let run = campaign.run_case(case)?;
    write_case_outputs(&run, out_dir)
}

/// Runs all cases and writes per-case files plus SIR, coverage and weather reports.
pub fn run_all_to_dir(campaign: &Campaign, out_dir: &Path) -> Result<Vec<PathBuf>> {
    create_dir(out_dir)?;
    let runs = campaign.run_all()?;
    let mut written = Vec::new();
    for run in &runs {
        written.extend(write_case_outputs(run, out_dir)?);
    }
    written.extend(write_system_outputs(&runs, out_dir)?);
    Ok(written)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}
