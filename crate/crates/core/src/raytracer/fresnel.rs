use num_complex::Complex;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarization {
    /// Electric field perpendicular to the plane of incidence (TE, soft).
    Perpendicular,
    /// Electric field in the plane of incidence (TM, hard).
    Parallel,
}

/// Reflection and transmission at a planar air/material interface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FresnelCoefficients<T: Scalar> {
    /// Complex reflection coefficient of the electric field.
    pub reflection: Complex<T>,
    /// Complex transmission coefficient of the electric field just inside the material.
    pub transmission: Complex<T>,
    /// Fraction of incident power carried across the interface.
    pub transmittance: T,
}

/// Fresnel coefficients for a wave in air hitting a half-space of relative permittivity `eps`
/// at `theta_i` radians from the normal.
pub fn fresnel<T: Scalar>(eps: Complex<T>, theta_i: T, pol: Polarization) -> FresnelCoefficients<T> {
    let (s, c) = theta_i.sin_cos();
    let c = c.max(T::zero());
    let q = (eps - Complex::from(s * s)).sqrt();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    match pol {
        Polarization::Perpendicular => {
            let den = q + c;
            let reflection = (Complex::from(c) - q) / den;
            let transmission = Complex::from(two * c) / den;
            let transmittance = four * c * q.re / den.norm_sqr();
            FresnelCoefficients { reflection, transmission, transmittance }
        }
        Polarization::Parallel => {
            let den = eps * c + q;
            let reflection = (eps * c - q) / den;
            let transmission = eps.sqrt() * (two * c) / den;
            let transmittance = four * c * (eps * q.conj()).re / den.norm_sqr();
            FresnelCoefficients { reflection, transmission, transmittance }
        }
    }
}

/// Power decay factor for a wave crossing a slab of normal `thickness` entered at `theta_i`.
pub fn slab_absorption<T: Scalar>(eps: Complex<T>, theta_i: T, k0: T, thickness: T) -> T {
    let s = theta_i.sin();
    let q = (eps - Complex::from(s * s)).sqrt();
    (-T::lit(2.0) * k0 * q.im.abs() * thickness).exp()
}
