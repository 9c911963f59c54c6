//! Single edge diffraction.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::field::{self, CVec3};
use super::fresnel::{fresnel, Polarization};
use super::utd::{diffraction_coefficients, FaceReflection, WedgeEvaluation};
use super::{Link, RawPath, Source, Tracer};
use crate::mpc::{Chain, Interaction, Mpc};
use crate::scene::{Vec3d, Wedge};

const ANGLE_TOL: f64 = 1e-9;
const EDGE_OFFSET: f64 = 1e-6;

impl Tracer<'_> {
    pub fn trace_diffraction(&self, link: &Link) -> Vec<Mpc<f64>> {
        self.scene.wedges.iter().filter_map(|w| self.diffract(link, w)).filter_map(|p| self.finish(link, p)).collect()
    }

    /// Diffraction point on the edge satisfying the Keller cone condition, if it lies on the edge.
    pub fn diffraction_point(&self, link: &Link, wedge: &Wedge) -> Option<Vec3d> {
        let e = wedge.direction;
        let rel = link.rx - wedge.start;
        let t_rx = rel.dot(e);
        let rho_rx = (rel - e * t_rx).norm();
        let t = match link.source {
            Source::Point(tx) => {
                let rel_tx = tx - wedge.start;
                let t_tx = rel_tx.dot(e);
                let rho_tx = (rel_tx - e * t_tx).norm();
                if rho_tx < 1e-9 || rho_rx < 1e-9 {
                    return None;
                }
                (t_tx * rho_rx + t_rx * rho_tx) / (rho_tx + rho_rx)
            }
            Source::PlaneWave { toward_source, .. } => {
                let cos_b = (-toward_source).dot(e);
                let sin_b = (1.0 - cos_b * cos_b).max(0.0).sqrt();
                if sin_b < 1e-9 || rho_rx < 1e-9 {
                    return None;
                }
                t_rx - rho_rx * cos_b / sin_b
            }
        };
        (0.0..=wedge.length()).contains(&t).then(|| wedge.start + e * t)
    }

    fn diffract(&self, link: &Link, wedge: &Wedge) -> Option<RawPath> {
        let q = self.diffraction_point(link, wedge)?;
        let n = wedge.n();
        let s_out = link.rx - q;
        let s = s_out.norm();
        if s < 1e-6 {
            return None;
        }
        let s_out = s_out / s;
        let s_in = self.incident_direction(link, q);
        let phi_p = angle_about(wedge, -s_in);
        let phi = angle_about(wedge, s_out);
        let wedge_span = n * PI;
        if phi_p > wedge_span + ANGLE_TOL || phi > wedge_span + ANGLE_TOL {
            return None;
        }
        // test visibility from just outside the edge so rays grazing a neighbouring face are not lost
        let faces = &wedge.faces[..];
        let outward = (self.scene.surfaces[wedge.faces[0]].normal + self.scene.surfaces[wedge.faces[1]].normal)
            .try_normalize()
            .unwrap_or(wedge.face0_normal);
        let probe = q + outward * EDGE_OFFSET;
        if !self.source_visible(link, probe, faces) || self.scene.segment_blocked(probe, link.rx, faces) {
            return None;
        }

        let beta0 = s_in.dot(wedge.direction).clamp(-1.0, 1.0).acos();
        let sin_b = beta0.sin();
        let (l, spread, length) = match link.source {
            Source::Point(tx) => {
                let sp = tx.distance(q);
                (s * sp * sin_b * sin_b / (s + sp), (sp / (s * (s + sp))).sqrt(), sp + s)
            }
            Source::PlaneWave { .. } => (s * sin_b * sin_b, 1.0 / s.sqrt(), self.leg_length(link, q) + s),
        };
        let eval = WedgeEvaluation { n, phi, phi_prime: phi_p, beta0, k: self.k, l };
        let eps0 = self.scene.material_of(wedge.faces[0]).permittivity();
        let eps_n = self.scene.material_of(wedge.faces[1]).permittivity();
        let r0 = face_reflection(eps0, phi_p);
        let rn = face_reflection(eps_n, wedge_span - phi);
        let (mut d_soft, mut d_hard) = diffraction_coefficients(&eval, r0, rn);
        if phi_p < ANGLE_TOL || phi_p > wedge_span - ANGLE_TOL {
            // grazing incidence: incident and reflected waves merge into one
            d_soft *= 0.5;
            d_hard *= 0.5;
        }

        // incident field at the edge, unit transmit amplitude
        let incident_scale = match link.source {
            Source::Point(tx) => {
                let sp = tx.distance(q);
                self.lambda / (4.0 * PI * sp)
            }
            Source::PlaneWave { distance_m, .. } => self.lambda / (4.0 * PI * distance_m),
        };
        let e_i = CVec3::from_real(field::vertical_polarization(s_in), Complex64::new(incident_scale, 0.0));
        let (beta_i, phi_i) = ray_basis(wedge.direction, s_in);
        let (beta_d, phi_d) = ray_basis(wedge.direction, s_out);
        let e_d = CVec3::from_real(beta_d, d_soft * e_i.dot(beta_i)) + CVec3::from_real(phi_d, d_hard * e_i.dot(phi_i));
        let amplitude = e_d.dot(field::vertical_polarization(s_out)) * spread * self.phase(link, length);
        Some(RawPath {
            amplitude,
            length_m: length,
            departure: s_in,
            arrival: s_out,
            chain: Chain(vec![Interaction::Diffraction(wedge.id)]),
        })
    }
}

/// Angle of direction `v` around the edge measured from face 0, in [0, 2 pi).
fn angle_about(wedge: &Wedge, v: Vec3d) -> f64 {
    let a = v.dot(wedge.face0_normal).atan2(v.dot(wedge.face0_tangent));
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Edge-fixed unit vectors (beta, phi) for a ray travelling along `s`.
fn ray_basis(edge: Vec3d, s: Vec3d) -> (Vec3d, Vec3d) {
    let phi = edge.cross(s).try_normalize().unwrap_or_else(|| s.any_orthogonal());
    (phi.cross(s), phi)
}

/// Face reflection coefficients for a ray grazing the face at `grazing` radians.
fn face_reflection(eps: Complex64, grazing: f64) -> FaceReflection {
    let theta = (FRAC_PI_2 - grazing).abs().min(FRAC_PI_2);
    (
        fresnel(eps, theta, Polarization::Perpendicular).reflection,
        fresnel(eps, theta, Polarization::Parallel).reflection,
    )
}
