//! Complex vector fields carried along a path.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use super::fresnel::{fresnel, Polarization};
use crate::scene::Vec3d;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CVec3 {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl CVec3 {
    pub fn from_real(v: Vec3d, a: Complex64) -> Self {
        CVec3 { x: a * v.x, y: a * v.y, z: a * v.z }
    }

    /// Bilinear projection onto a real direction.
    pub fn dot(&self, v: Vec3d) -> Complex64 {
        self.x * v.x + self.y * v.y + self.z * v.z
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    fn add(self, o: CVec3) -> CVec3 {
        CVec3 { x: self.x + o.x, y: self.y + o.y, z: self.z + o.z }
    }
}

impl Mul<Complex64> for CVec3 {
    type Output = CVec3;
    fn mul(self, a: Complex64) -> CVec3 {
        CVec3 { x: self.x * a, y: self.y * a, z: self.z * a }
    }
}

impl Mul<f64> for CVec3 {
    type Output = CVec3;
    fn mul(self, a: f64) -> CVec3 {
        CVec3 { x: self.x * a, y: self.y * a, z: self.z * a }
    }
}

/// Vertical polarization vector for a wave travelling along `dir`: z projected off `dir`.
pub fn vertical_polarization(dir: Vec3d) -> Vec3d {
    let z = Vec3d::unit_z();
    (z - dir * z.dot(dir)).try_normalize().unwrap_or_else(|| dir.any_orthogonal())
}

/// Unit vector perpendicular to the plane of incidence spanned by `s_in` and `normal`.
fn perpendicular_axis(s_in: Vec3d, normal: Vec3d) -> Vec3d {
    s_in.cross(normal).try_normalize().unwrap_or_else(|| s_in.any_orthogonal())
}

/// Angle of incidence from the normal for a ray travelling along `s_in`.
pub fn incidence_angle(s_in: Vec3d, normal: Vec3d) -> f64 {
    s_in.dot(normal).abs().min(1.0).acos()
}

/// Specular reflection of field `e` travelling along `s_in` off a face with normal `normal`.
pub fn reflect(e: CVec3, s_in: Vec3d, normal: Vec3d, eps: Complex64) -> CVec3 {
    let s_out = s_in.reflect(normal);
    let theta = incidence_angle(s_in, normal);
    let perp = perpendicular_axis(s_in, normal);
    let par_in = perp.cross(s_in);
    let par_out = perp.cross(s_out);
    let g_perp = fresnel(eps, theta, Polarization::Perpendicular).reflection;
    let g_par = fresnel(eps, theta, Polarization::Parallel).reflection;
    CVec3::from_real(perp, g_perp * e.dot(perp)) + CVec3::from_real(par_out, g_par * e.dot(par_in))
}

/// Field after crossing one interface without deviation, scaled by the per-polarization power transmittance.
pub fn transmit(e: CVec3, s_in: Vec3d, normal: Vec3d, eps: Complex64) -> CVec3 {
    let theta = incidence_angle(s_in, normal);
    let perp = perpendicular_axis(s_in, normal);
    let par = perp.cross(s_in);
    let t_perp = fresnel(eps, theta, Polarization::Perpendicular).transmittance.max(0.0).sqrt();
    let t_par = fresnel(eps, theta, Polarization::Parallel).transmittance.max(0.0).sqrt();
    CVec3::from_real(perp, e.dot(perp) * t_perp) + CVec3::from_real(par, e.dot(par) * t_par)
}
