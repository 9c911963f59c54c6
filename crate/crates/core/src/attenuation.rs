//! Excess propagation attenuation from gases, rain, clouds and scintillation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mpc::MpcSet;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weather {
    Rainy,
    Sunny,
}

impl Weather {
    pub const ALL: [Weather; 2] = [Weather::Rainy, Weather::Sunny];

    /// Suffix letter used in case ids.
    pub fn letter(self) -> char {
        match self {
            Weather::Rainy => 'R',
            Weather::Sunny => 'S',
        }
    }
}

impl fmt::Display for Weather {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weather::Rainy => "rainy",
            Weather::Sunny => "sunny",
        })
    }
}

impl FromStr for Weather {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rainy" | "R" => Ok(Weather::Rainy),
            "sunny" | "S" => Ok(Weather::Sunny),
            _ => Err(Error::InvalidArgument(format!("unknown weather `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkClass {
    Terrestrial,
    Satellite,
}

/// Attenuation components in dB.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AttenuationBudget<T: Scalar> {
    pub a_gas: T,
    pub a_rain: T,
    pub a_cloud: T,
    pub a_scint: T,
    pub link_class: LinkClass,
    pub weather: Weather,
}

impl<T: Scalar> AttenuationBudget<T> {
    pub fn validate(&self) -> Result<()> {
        let parts = [self.a_gas, self.a_rain, self.a_cloud, self.a_scint];
        if parts.iter().any(|&a| !(a >= T::zero()) || !a.is_finite()) {
            return Err(Error::InvalidArgument("attenuation components must be finite and non-negative".into()));
        }
        if self.weather == Weather::Sunny && self.a_rain != T::zero() {
            return Err(Error::InvalidArgument("sunny budget cannot include rain".into()));
        }
        Ok(())
    }
}

/// Total attenuation: gases add directly, the rest combine with scintillation in quadrature.
pub fn combine_total<T: Scalar>(b: &AttenuationBudget<T>) -> T {
    let wet = b.a_rain + b.a_cloud;
    b.a_gas + (wet * wet + b.a_scint * b.a_scint).sqrt()
}

/// Satellite slant-path components in dB.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SatelliteComponents {
    pub gas_db: f64,
    /// Applied on rainy days only.
    pub rain_db: f64,
    pub cloud_db: f64,
    pub scintillation_db: f64,
}

impl Default for SatelliteComponents {
    // 0.7071 is a measured gas loss, not 1/sqrt(2)
    #[allow(clippy::approx_constant)]
    fn default() -> Self {
        SatelliteComponents { gas_db: 0.7071, rain_db: 30.0162, cloud_db: 2.1677, scintillation_db: 0.7638 }
    }
}

/// Terrestrial excess, specified at a reference length and scaled linearly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TerrestrialModel {
    pub reference_km: f64,
    pub gas_db_at_reference: f64,
    pub rain_db_at_reference: f64,
    pub max_length_km: f64,
}

impl Default for TerrestrialModel {
    fn default() -> Self {
        TerrestrialModel {
            reference_km: 0.6,
            gas_db_at_reference: 0.12,
            rain_db_at_reference: 8.1074,
            max_length_km: 0.6,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AttenuationConfig {
    pub terrestrial: TerrestrialModel,
    pub satellite: SatelliteComponents,
}

impl AttenuationConfig {
    pub fn validate(&self) -> Result<()> {
        let t = &self.terrestrial;
        let s = &self.satellite;
        let values =
            [t.gas_db_at_reference, t.rain_db_at_reference, s.gas_db, s.rain_db, s.cloud_db, s.scintillation_db];
        if values.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::Config("attenuation values must be finite and non-negative".into()));
        }
        if !(t.reference_km > 0.0) || !(t.max_length_km > 0.0) {
            return Err(Error::Config("terrestrial reference and maximum lengths must be positive".into()));
        }
        Ok(())
    }

    /// Terrestrial excess in dB for a link of `length_km`.
    pub fn terrestrial_excess<T: Scalar>(&self, weather: Weather, length_km: T) -> Result<T> {
        let t = &self.terrestrial;
        if !(length_km > T::zero()) || length_km > T::lit(t.max_length_km) {
            return Err(Error::InvalidArgument(format!(
                "terrestrial link length must be in (0, {}] km",
                t.max_length_km
            )));
        }
        let per_km = match weather {
            Weather::Sunny => t.gas_db_at_reference,
            Weather::Rainy => t.gas_db_at_reference + t.rain_db_at_reference,
        } / t.reference_km;
        Ok(T::lit(per_km) * length_km)
    }

    pub fn satellite_components<T: Scalar>(&self, weather: Weather) -> AttenuationBudget<T> {
        let s = &self.satellite;
        AttenuationBudget {
            a_gas: T::lit(s.gas_db),
            a_rain: match weather {
                Weather::Rainy => T::lit(s.rain_db),
                Weather::Sunny => T::zero(),
            },
            a_cloud: T::lit(s.cloud_db),
            a_scint: T::lit(s.scintillation_db),
            link_class: LinkClass::Satellite,
            weather,
        }
    }

    /// Excess for a link class. Terrestrial links are evaluated at the maximum link length.
    pub fn excess<T: Scalar>(&self, class: LinkClass, weather: Weather) -> Result<T> {
        match class {
            LinkClass::Terrestrial => self.terrestrial_excess(weather, T::lit(self.terrestrial.max_length_km)),
            LinkClass::Satellite => Ok(combine_total(&self.satellite_components::<T>(weather))),
        }
    }
}

/// Default-model terrestrial excess.
pub fn terrestrial_excess<T: Scalar>(weather: Weather, length_km: T) -> Result<T> {
    AttenuationConfig::default().terrestrial_excess(weather, length_km)
}

/// Default-model satellite budget.
pub fn satellite_components<T: Scalar>(weather: Weather) -> AttenuationBudget<T> {
    AttenuationConfig::default().satellite_components(weather)
}

/// Lowers every component of the set by `excess_db`.
pub fn apply_excess<T: Scalar>(set: &MpcSet<T>, excess_db: T) -> Result<MpcSet<T>> {
    if !(excess_db >= T::zero()) || !excess_db.is_finite() {
        return Err(Error::InvalidArgument("excess attenuation must be finite and non-negative".into()));
    }
    Ok(set.attenuated(excess_db))
}
