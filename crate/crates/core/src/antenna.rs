//! Parametric directional antenna patterns and terminal mounts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternShape {
    /// Parabolic-in-dB main lobe with a flat floor.
    #[default]
    Gaussian,
    /// Constant `max_gain` in every direction.
    Isotropic,
}

/// Rotationally symmetric pattern; the off-axis angle from boresight is its only argument.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntennaPattern<T: Scalar> {
    pub max_gain_dbi: T,
    pub beamwidth_3db_deg: T,
    pub sidelobe_floor_dbi: T,
    pub boresight: Vec3<T>,
    #[serde(default)]
    pub shape: PatternShape,
}

impl<T: Scalar> AntennaPattern<T> {
    pub fn new(max_gain_dbi: T, beamwidth_3db_deg: T, sidelobe_floor_dbi: T, boresight: Vec3<T>) -> Result<Self> {
        if !(beamwidth_3db_deg > T::zero() && beamwidth_3db_deg <= T::lit(360.0)) {
            return Err(Error::InvalidArgument(format!("beamwidth {beamwidth_3db_deg} outside (0, 360]")));
        }
        if !(max_gain_dbi > sidelobe_floor_dbi) {
            return Err(Error::InvalidArgument("max gain must exceed the sidelobe floor".into()));
        }
        let boresight = boresight.try_normalize().ok_or(Error::DegenerateRay)?;
        Ok(AntennaPattern {
            max_gain_dbi,
            beamwidth_3db_deg,
            sidelobe_floor_dbi,
            boresight,
            shape: PatternShape::Gaussian,
        })
    }

    /// Pattern with the floor `floor_below_db` under the peak.
    pub fn with_relative_floor(
        max_gain_dbi: T,
        beamwidth_3db_deg: T,
        floor_below_db: T,
        boresight: Vec3<T>,
    ) -> Result<Self> {
        Self::new(max_gain_dbi, beamwidth_3db_deg, max_gain_dbi - floor_below_db, boresight)
    }

    pub fn isotropic(gain_dbi: T) -> Self {
        AntennaPattern {
            max_gain_dbi: gain_dbi,
            beamwidth_3db_deg: T::lit(360.0),
            sidelobe_floor_dbi: gain_dbi - T::one(),
            boresight: Vec3::unit_x(),
            shape: PatternShape::Isotropic,
        }
    }

    /// Gain in dBi for a given off-axis angle.
    pub fn gain_off_axis(&self, off_axis_deg: T) -> T {
        match self.shape {
            PatternShape::Isotropic => self.max_gain_dbi,
            PatternShape::Gaussian => {
                let r = off_axis_deg / self.beamwidth_3db_deg;
                (self.max_gain_dbi - T::lit(12.0) * r * r).max(self.sidelobe_floor_dbi)
            }
        }
    }

    /// Gain in dBi toward `direction`.
    pub fn gain(&self, direction: Vec3<T>) -> Result<T> {
        let d = direction.try_normalize().ok_or(Error::DegenerateRay)?;
        Ok(self.gain_off_axis(self.off_axis_deg(d)))
    }

    pub fn off_axis_deg(&self, direction: Vec3<T>) -> T {
        self.boresight.angle_to(direction).to_degrees()
    }

    pub fn with_boresight(&self, boresight: Vec3<T>) -> Result<Self> {
        let boresight = boresight.try_normalize().ok_or(Error::DegenerateRay)?;
        Ok(AntennaPattern { boresight, ..*self })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointingMode {
    /// Boresight set once and kept while the terminal moves.
    FixedOrientation,
    /// Boresight re-aimed at the target every snapshot.
    TrackTarget,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mount<T: Scalar> {
    pub position: Vec3<T>,
    pub pattern: AntennaPattern<T>,
    pub pointing: PointingMode,
}

impl<T: Scalar> Mount<T> {
    /// Mount whose initial boresight points from `position` at `target`.
    pub fn aimed_at(
        position: Vec3<T>,
        pattern: AntennaPattern<T>,
        pointing: PointingMode,
        target: Vec3<T>,
    ) -> Result<Self> {
        let mount = Mount { position, pattern, pointing };
        let pattern = aim(position, target).and_then(|b| pattern.with_boresight(b))?;
        Ok(Mount { pattern, ..mount })
    }

    /// Pattern to use with the mount at `position` and the target at `target`.
    pub fn orient(&self, position: Vec3<T>, target: Vec3<T>) -> Result<AntennaPattern<T>> {
        let dir = aim(position, target)?;
        self.orient_direction(dir)
    }

    /// Like [`Mount::orient`] for a target at infinity in direction `dir`.
    pub fn orient_direction(&self, dir: Vec3<T>) -> Result<AntennaPattern<T>> {
        match self.pointing {
            PointingMode::FixedOrientation => Ok(self.pattern),
            PointingMode::TrackTarget => self.pattern.with_boresight(dir),
        }
    }
}

fn aim<T: Scalar>(from: Vec3<T>, to: Vec3<T>) -> Result<Vec3<T>> {
    (to - from)
        .try_normalize()
        .ok_or_else(|| Error::InvalidArgument("antenna target coincides with its position".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    type V = Vec3<f64>;

    #[test]
    fn gaussian_lobe_values() {
        let bs = AntennaPattern::with_relative_floor(16.0, 20.0, 30.0, V::unit_x()).unwrap();
        assert_eq!(bs.gain(V::unit_x()).unwrap(), 16.0);
        let ten = V::from_az_el_deg(10.0, 0.0);
        assert!((bs.gain(ten).unwrap() - 13.0).abs() < 1e-9);
        let sa = AntennaPattern::with_relative_floor(53.0, 1.0, 30.0, V::unit_x()).unwrap();
        assert_eq!(sa.gain(V::unit_y()).unwrap(), 23.0);
        assert!(bs.gain(V::zero()).is_err());
    }

    #[test]
    fn invalid_patterns_rejected() {
        assert!(AntennaPattern::new(10.0, 0.0, -20.0, V::unit_x()).is_err());
        assert!(AntennaPattern::new(10.0, 400.0, -20.0, V::unit_x()).is_err());
        assert!(AntennaPattern::new(10.0, 20.0, 10.0, V::unit_x()).is_err());
    }

    #[test]
    fn fixed_mount_keeps_initial_boresight() {
        let pattern = AntennaPattern::with_relative_floor(22.0, 20.0, 30.0, V::unit_x()).unwrap();
        let bs = V::new(-20.0, -12.5, 26.0);
        let start = V::new(0.0, 0.0, 4.7);
        let ue = Mount::aimed_at(start, pattern, PointingMode::FixedOrientation, bs).unwrap();
        let at_start = ue.orient(start, bs).unwrap();
        assert!(at_start.off_axis_deg(bs - start) < 1e-9);
        let end = V::new(500.0, 0.0, 4.7);
        let at_end = ue.orient(end, bs).unwrap();
        assert_eq!(at_end.boresight, at_start.boresight);
        // the boresight looks ~43 deg up; from 500 m the BS is only ~2 deg up
        let off = at_end.off_axis_deg(bs - end);
        assert!(off > 40.0, "{off}");

        let tracking = Mount { pointing: PointingMode::TrackTarget, ..ue };
        assert!(tracking.orient(end, bs).unwrap().off_axis_deg(bs - end) < 1e-9);
        assert!(tracking.orient(bs, bs).is_err());
    }
}
