use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Electromagnetic and directive-scattering parameters of a surface material.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    /// Real part of the relative permittivity.
    pub eps_r_real: f64,
    pub loss_tangent: f64,
    /// Scattering coefficient S of the directive model.
    pub scatter_coeff: f64,
    /// Lobe exponent alpha of the directive model.
    pub scatter_exponent: f64,
}

impl Material {
    pub fn new(
        name: impl Into<String>,
        eps_r_real: f64,
        loss_tangent: f64,
        scatter_coeff: f64,
        scatter_exponent: f64,
    ) -> Result<Self> {
        let m = Material { name: name.into(), eps_r_real, loss_tangent, scatter_coeff, scatter_exponent };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |reason: &str| Err(Error::InvalidMaterial { name: self.name.clone(), reason: reason.to_string() });
        if !(self.eps_r_real >= 1.0) {
            return fail("eps_r_real must be >= 1");
        }
        if !(self.loss_tangent >= 0.0) {
            return fail("loss_tangent must be >= 0");
        }
        if !(0.0..=1.0).contains(&self.scatter_coeff) {
            return fail("scatter_coeff must lie in [0, 1]");
        }
        if !(self.scatter_exponent >= 1.0) {
            return fail("scatter_exponent must be >= 1");
        }
        Ok(())
    }

    /// Complex relative permittivity eps' (1 - j tan(delta)).
    pub fn permittivity<T: Scalar>(&self) -> Complex<T> {
        let re = T::lit(self.eps_r_real);
        Complex::new(re, -re * T::lit(self.loss_tangent))
    }

    pub fn marble() -> Self {
        Material::new("marble", 3.0045, 0.2828, 0.0022, 15.3747).unwrap()
    }

    pub fn toughened_glass() -> Self {
        Material::new("toughened_glass", 1.0538, 23.9211, 0.0025, 5.5106).unwrap()
    }

    pub fn brick() -> Self {
        Material::new("brick", 1.9155, 0.0568, 0.0019, 49.5724).unwrap()
    }

    pub fn metal() -> Self {
        Material::new("metal", 1.0, 1e7, 0.0026, 17.7691).unwrap()
    }

    pub fn wood() -> Self {
        Material::new("wood", 6.6, 0.9394, 0.0086, 13.1404).unwrap()
    }

    pub fn concrete() -> Self {
        Material::new("concrete", 5.4745, 0.0021, 0.0011, 109.0).unwrap()
    }

    /// The six railway-environment materials with their calibrated parameters.
    pub fn railway_library() -> Vec<Material> {
        vec![
            Material::marble(),
            Material::toughened_glass(),
            Material::brick(),
            Material::metal(),
            Material::wood(),
            Material::concrete(),
        ]
    }
}
