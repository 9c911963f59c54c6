//! Deterministic ray tracer: direct, specular reflection (image method), single UTD
//! diffraction, directive scattering and slab transmission.

mod diffraction;
pub mod field;
pub mod fresnel;
mod paths;
mod scattering;
pub mod utd;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::antenna::AntennaPattern;
use crate::error::{Error, Result};
use crate::mpc::{Chain, Mpc, MpcSet};
use crate::scene::{Scene, Vec3d};

pub use fresnel::{fresnel, slab_absorption, FresnelCoefficients, Polarization};
pub use paths::ReflectionPath;
pub use scattering::{scatter_normalization, ScatterTile};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Friis free-space loss in dB.
pub fn free_space_loss(distance_m: f64, frequency_hz: f64) -> Result<f64> {
    if !(distance_m > 0.0 && frequency_hz > 0.0) {
        return Err(Error::InvalidArgument("distance and frequency must be positive".into()));
    }
    Ok(20.0 * (4.0 * PI * distance_m * frequency_hz / SPEED_OF_LIGHT).log10())
}

/// Where the transmitted wave comes from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Source {
    Point(Vec3d),
    /// A distant transmitter seen as a plane wave arriving from `toward_source`.
    PlaneWave {
        toward_source: Vec3d,
        distance_m: f64,
    },
}

/// One transmitter/receiver pair at one snapshot, antennas already oriented.
#[derive(Clone, Copy, Debug)]
pub struct Link {
    pub source: Source,
    pub tx_power_dbm: f64,
    pub tx_pattern: AntennaPattern<f64>,
    pub rx: Vec3d,
    pub rx_pattern: AntennaPattern<f64>,
}

impl Link {
    fn validate(&self) -> Result<()> {
        if !self.rx.is_finite() {
            return Err(Error::InvalidArgument("receiver position must be finite".into()));
        }
        match self.source {
            Source::Point(tx) if tx.distance(self.rx) < 1e-9 => {
                Err(Error::InvalidArgument("transmitter and receiver coincide".into()))
            }
            Source::PlaneWave { toward_source, distance_m }
                if !(distance_m > 0.0) || (toward_source.norm() - 1.0).abs() > 1e-9 =>
            {
                Err(Error::InvalidArgument("plane-wave source needs a unit direction and positive distance".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TraceConfig {
    pub frequency_hz: f64,
    pub direct: bool,
    /// 0 disables reflections; at most 2.
    pub max_reflection_order: usize,
    pub diffraction: bool,
    pub scattering: bool,
    pub transmission: bool,
    /// Target scattering tile area.
    pub tile_m2: f64,
    /// Components weaker than the strongest by more than this are dropped.
    pub cutoff_db: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            frequency_hz: 22.6e9,
            direct: true,
            max_reflection_order: 2,
            diffraction: true,
            scattering: true,
            transmission: true,
            tile_m2: 1.0,
            cutoff_db: 60.0,
        }
    }
}

impl TraceConfig {
    /// Only the direct path.
    pub fn direct_only() -> Self {
        TraceConfig {
            max_reflection_order: 0,
            diffraction: false,
            scattering: false,
            transmission: false,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.frequency_hz > 0.0) {
            return Err(Error::InvalidArgument("frequency must be positive".into()));
        }
        if self.max_reflection_order > 2 {
            return Err(Error::InvalidArgument("reflection order above 2 is not supported".into()));
        }
        if !(self.tile_m2 > 0.0) {
            return Err(Error::InvalidArgument("tile area must be positive".into()));
        }
        if !(self.cutoff_db >= 0.0) {
            return Err(Error::InvalidArgument("cutoff must be non-negative".into()));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz
    }
}

/// A traced path before antenna gains are applied.
struct RawPath {
    /// Received complex amplitude relative to an isotropic 0 dBi pair, power = |a|^2.
    amplitude: Complex64,
    /// Unfolded geometric length, including the nominal range for plane-wave sources.
    length_m: f64,
    /// Propagation direction leaving the transmitter.
    departure: Vec3d,
    /// Propagation direction arriving at the receiver.
    arrival: Vec3d,
    chain: Chain,
}

/// Ray tracer bound to one scene and configuration.
pub struct Tracer<'s> {
    scene: &'s Scene,
    config: TraceConfig,
    k: f64,
    lambda: f64,
    scatter: Option<scattering::ScatterModel>,
}

impl<'s> Tracer<'s> {
    pub fn new(scene: &'s Scene, config: TraceConfig) -> Result<Self> {
        config.validate()?;
        let lambda = config.wavelength();
        let scatter = config.scattering.then(|| scattering::ScatterModel::new(scene, config.tile_m2));
        Ok(Tracer { scene, k: 2.0 * PI / lambda, lambda, config, scatter })
    }

    pub fn scene(&self) -> &Scene {
        self.scene
    }

    pub fn config(&self) -> &TraceConfig {
        &self.config
    }

    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    /// Scattering tiles, empty when scattering is disabled.
    pub fn tiles(&self) -> &[ScatterTile] {
        self.scatter.as_ref().map_or(&[], |s| s.tiles())
    }

    fn finish(&self, link: &Link, path: RawPath) -> Option<Mpc<f64>> {
        let mag = path.amplitude.norm();
        if !(mag > 0.0) || !mag.is_finite() {
            return None;
        }
        let from = -path.arrival;
        let g_tx = link.tx_pattern.gain(path.departure).ok()?;
        let g_rx = link.rx_pattern.gain(from).ok()?;
        Some(Mpc {
            power_dbm: link.tx_power_dbm + g_tx + g_rx + 20.0 * mag.log10(),
            delay_s: path.length_m / SPEED_OF_LIGHT,
            aod_az_deg: path.departure.azimuth_deg(),
            aod_el_deg: path.departure.elevation_deg(),
            aoa_az_deg: from.azimuth_deg(),
            aoa_el_deg: from.elevation_deg(),
            phase_rad: path.amplitude.arg(),
            chain: path.chain,
        })
    }

    /// All components for one snapshot, cut off and sorted.
    pub fn snapshot(&self, link: &Link, index: usize) -> Result<MpcSet<f64>> {
        link.validate()?;
        let mut mpcs = Vec::new();
        let direct = self.trace_direct_raw(link);
        let los_blocked = direct.is_none();
        if self.config.direct {
            mpcs.extend(direct.and_then(|p| self.finish(link, p)));
        }
        if self.config.max_reflection_order > 0 {
            mpcs.extend(self.trace_reflections(link, self.config.max_reflection_order));
        }
        if self.config.diffraction {
            mpcs.extend(self.trace_diffraction(link));
        }
        if self.config.transmission && los_blocked {
            mpcs.extend(self.trace_transmission(link));
        }
        if self.config.scattering {
            let best = mpcs.iter().map(|m| m.power_dbm).fold(f64::NEG_INFINITY, f64::max);
            let floor = best - self.config.cutoff_db;
            mpcs.extend(self.trace_scattering(link, floor));
        }
        Ok(MpcSet::new(index, mpcs, los_blocked, self.config.cutoff_db))
    }

    /// Direct path if the line of sight is clear.
    pub fn trace_direct(&self, link: &Link) -> Option<Mpc<f64>> {
        self.trace_direct_raw(link).and_then(|p| self.finish(link, p))
    }

    /// Unit direction the wave travels when it leaves the source toward `p`.
    fn incident_direction(&self, link: &Link, p: Vec3d) -> Vec3d {
        match link.source {
            Source::Point(tx) => (p - tx).normalize(),
            Source::PlaneWave { toward_source, .. } => -toward_source,
        }
    }

    /// Whether the source illuminates `p` with nothing but `exclude` in between.
    fn source_visible(&self, link: &Link, p: Vec3d, exclude: &[usize]) -> bool {
        match link.source {
            Source::Point(tx) => !self.scene.segment_blocked(tx, p, exclude),
            Source::PlaneWave { toward_source, .. } => !self.scene.ray_blocked(p, toward_source, exclude),
        }
    }

    fn phase(&self, link: &Link, length_m: f64) -> Complex64 {
        let l = match link.source {
            Source::Point(_) => length_m,
            Source::PlaneWave { distance_m, .. } => length_m - distance_m,
        };
        Complex64::from_polar(1.0, -self.k * l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn friis_values() {
        let f = 22.6e9;
        assert!((free_space_loss(1.0, f).unwrap() - 59.53).abs() < 0.005);
        let d = free_space_loss(200.0, f).unwrap() - free_space_loss(100.0, f).unwrap();
        assert!((d - 20.0 * 2f64.log10()).abs() < 1e-12);
        assert!((free_space_loss(37_469_300.0, f).unwrap() - 211.0).abs() < 0.05);
        assert!(free_space_loss(0.0, f).is_err());
        assert!(free_space_loss(1.0, -1.0).is_err());
    }
}
