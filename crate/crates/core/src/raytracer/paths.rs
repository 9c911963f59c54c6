//! Direct, specularly reflected and transmitted paths.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::field::{self, CVec3};
use super::fresnel::slab_absorption;
use super::{Link, RawPath, Source, Tracer};
use crate::mpc::{Chain, Interaction, Mpc};
use crate::scene::{Surface, SurfaceId, Vec3d, SEGMENT_EPS};

const FRONT_TOL: f64 = 1e-9;

/// Geometry of one specular path: the surfaces hit in order and the bounce points.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionPath {
    pub surfaces: Vec<SurfaceId>,
    pub points: Vec<Vec3d>,
}

impl Tracer<'_> {
    pub(super) fn trace_direct_raw(&self, link: &Link) -> Option<RawPath> {
        let (length_m, dir, scale) = match link.source {
            Source::Point(tx) => {
                if self.scene.segment_blocked(tx, link.rx, &[]) {
                    return None;
                }
                let d = tx.distance(link.rx);
                (d, (link.rx - tx) / d, self.lambda / (4.0 * PI * d))
            }
            Source::PlaneWave { toward_source, distance_m } => {
                if self.scene.ray_blocked(link.rx, toward_source, &[]) {
                    return None;
                }
                let l = distance_m - toward_source.dot(link.rx);
                (l, -toward_source, self.lambda / (4.0 * PI * distance_m))
            }
        };
        Some(RawPath {
            amplitude: self.phase(link, length_m) * scale,
            length_m,
            departure: dir,
            arrival: dir,
            chain: Chain::direct(),
        })
    }

    /// Valid specular paths of order 1..=max_order, in enumeration order.
    pub fn reflection_paths(&self, link: &Link, max_order: usize) -> Vec<ReflectionPath> {
        match link.source {
            Source::Point(tx) => self.point_reflection_paths(tx, link.rx, max_order),
            Source::PlaneWave { toward_source, .. } => self.plane_reflection_paths(toward_source, link.rx, max_order),
        }
    }

    pub fn trace_reflections(&self, link: &Link, max_order: usize) -> Vec<Mpc<f64>> {
        self.reflection_paths(link, max_order)
            .into_iter()
            .filter_map(|p| self.finish(link, self.reflected_raw(link, &p)))
            .collect()
    }

    fn point_reflection_paths(&self, tx: Vec3d, rx: Vec3d, max_order: usize) -> Vec<ReflectionPath> {
        let surfaces = &self.scene.surfaces;
        let facing_tx: Vec<SurfaceId> =
            surfaces.iter().filter(|s| s.signed_distance(tx) > FRONT_TOL).map(|s| s.id).collect();
        let facing_rx: Vec<SurfaceId> =
            surfaces.iter().filter(|s| s.signed_distance(rx) > FRONT_TOL).map(|s| s.id).collect();
        let mut out = Vec::new();
        for &a in &facing_tx {
            let sa = &surfaces[a];
            let img = sa.mirror(tx);
            if max_order >= 1 && sa.signed_distance(rx) > FRONT_TOL {
                if let Some(p) = segment_plane_point(sa, img, rx) {
                    if !self.scene.segment_blocked(tx, p, &[a]) && !self.scene.segment_blocked(p, rx, &[a]) {
                        out.push(ReflectionPath { surfaces: vec![a], points: vec![p] });
                    }
                }
            }
            if max_order < 2 {
                continue;
            }
            for &b in &facing_rx {
                let sb = &surfaces[b];
                if a == b || sb.signed_distance(img) <= FRONT_TOL {
                    continue;
                }
                let img2 = sb.mirror(img);
                let Some(p2) = segment_plane_point(sb, img2, rx) else { continue };
                if sa.signed_distance(p2) <= FRONT_TOL {
                    continue;
                }
                let Some(p1) = segment_plane_point(sa, img, p2) else { continue };
                if sb.signed_distance(p1) <= FRONT_TOL {
                    continue;
                }
                if self.scene.segment_blocked(tx, p1, &[a])
                    || self.scene.segment_blocked(p1, p2, &[a, b])
                    || self.scene.segment_blocked(p2, rx, &[b])
                {
                    continue;
                }
                out.push(ReflectionPath { surfaces: vec![a, b], points: vec![p1, p2] });
            }
        }
        out
    }

    fn plane_reflection_paths(&self, toward: Vec3d, rx: Vec3d, max_order: usize) -> Vec<ReflectionPath> {
        let surfaces = &self.scene.surfaces;
        let d_in = -toward;
        let mut out = Vec::new();
        for sa in surfaces.iter().filter(|s| s.normal.dot(toward) > FRONT_TOL) {
            let d1 = d_in.reflect(sa.normal);
            if max_order >= 1 && sa.signed_distance(rx) > FRONT_TOL {
                if let Some(p) = back_trace(sa, rx, d1) {
                    if !self.scene.ray_blocked(p, toward, &[sa.id]) && !self.scene.segment_blocked(p, rx, &[sa.id]) {
                        out.push(ReflectionPath { surfaces: vec![sa.id], points: vec![p] });
                    }
                }
            }
            if max_order < 2 {
                continue;
            }
            for sb in surfaces.iter() {
                if sb.id == sa.id || sb.normal.dot(d1) >= -FRONT_TOL || sb.signed_distance(rx) <= FRONT_TOL {
                    continue;
                }
                let d2 = d1.reflect(sb.normal);
                let Some(p2) = back_trace(sb, rx, d2) else { continue };
                if sa.signed_distance(p2) <= FRONT_TOL {
                    continue;
                }
                let Some(p1) = back_trace(sa, p2, d1) else { continue };
                if sb.signed_distance(p1) <= FRONT_TOL {
                    continue;
                }
                if self.scene.ray_blocked(p1, toward, &[sa.id])
                    || self.scene.segment_blocked(p1, p2, &[sa.id, sb.id])
                    || self.scene.segment_blocked(p2, rx, &[sb.id])
                {
                    continue;
                }
                out.push(ReflectionPath { surfaces: vec![sa.id, sb.id], points: vec![p1, p2] });
            }
        }
        out
    }

    fn reflected_raw(&self, link: &Link, path: &ReflectionPath) -> RawPath {
        let departure = self.incident_direction(link, path.points[0]);
        let mut e = CVec3::from_real(field::vertical_polarization(departure), Complex64::new(1.0, 0.0));
        let mut s_in = departure;
        let mut length = self.leg_length(link, path.points[0]);
        for (i, (&p, &sid)) in path.points.iter().zip(&path.surfaces).enumerate() {
            let surface = &self.scene.surfaces[sid];
            e = field::reflect(e, s_in, surface.normal, self.scene.material_of(sid).permittivity());
            let next = path.points.get(i + 1).copied().unwrap_or(link.rx);
            length += p.distance(next);
            s_in = (next - p).normalize();
        }
        let scale = match link.source {
            Source::Point(_) => self.lambda / (4.0 * PI * length),
            Source::PlaneWave { distance_m, .. } => self.lambda / (4.0 * PI * distance_m),
        };
        let chain = Chain(path.surfaces.iter().map(|&s| Interaction::Reflection(s)).collect());
        RawPath {
            amplitude: e.dot(field::vertical_polarization(s_in)) * self.phase(link, length) * scale,
            length_m: length,
            departure,
            arrival: s_in,
            chain,
        }
    }

    /// Path length from the source to `p`, including the nominal range of a plane wave.
    pub(super) fn leg_length(&self, link: &Link, p: Vec3d) -> f64 {
        match link.source {
            Source::Point(tx) => tx.distance(p),
            Source::PlaneWave { toward_source, distance_m } => distance_m - toward_source.dot(p),
        }
    }

    /// Straight path through the solids blocking the line of sight, if any of it survives.
    pub fn trace_transmission(&self, link: &Link) -> Vec<Mpc<f64>> {
        self.transmission_raw(link).and_then(|p| self.finish(link, p)).into_iter().collect()
    }

    fn transmission_raw(&self, link: &Link) -> Option<RawPath> {
        let rx = link.rx;
        let (dir, crossings) = match link.source {
            Source::Point(tx) => {
                let len = tx.distance(rx);
                let dir = (rx - tx) / len;
                (dir, self.scene.crossings(tx, dir, SEGMENT_EPS, len - SEGMENT_EPS))
            }
            Source::PlaneWave { toward_source, .. } => {
                // walk back from the receiver and flip into propagation order
                let far = self.scene.crossings(rx, toward_source, SEGMENT_EPS, f64::INFINITY);
                let mut along: Vec<(f64, SurfaceId)> = far.into_iter().map(|(t, s)| (-t, s)).collect();
                along.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
                (-toward_source, along)
            }
        };
        if crossings.is_empty() {
            return None;
        }
        let slabs = pair_slabs(&self.scene.surfaces, &crossings)?;
        let mut e = CVec3::from_real(field::vertical_polarization(dir), Complex64::new(1.0, 0.0));
        let mut chain = Vec::with_capacity(2 * slabs.len());
        for &(t_in, s_in, t_out, s_out) in &slabs {
            let material = self.scene.material_of(s_in);
            let eps = material.permittivity();
            let n_in = self.scene.surfaces[s_in].normal;
            let theta = field::incidence_angle(dir, n_in);
            e = field::transmit(e, dir, n_in, eps);
            let thickness = (t_out - t_in) * theta.cos();
            e = e * slab_absorption(eps, theta, self.k, thickness).sqrt();
            e = field::transmit(e, dir, self.scene.surfaces[s_out].normal, eps);
            chain.push(Interaction::Transmission(s_in));
            chain.push(Interaction::Transmission(s_out));
        }
        let (length, scale) = match link.source {
            Source::Point(tx) => {
                let d = tx.distance(rx);
                (d, self.lambda / (4.0 * PI * d))
            }
            Source::PlaneWave { distance_m, .. } => (self.leg_length(link, rx), self.lambda / (4.0 * PI * distance_m)),
        };
        Some(RawPath {
            amplitude: e.dot(field::vertical_polarization(dir)) * self.phase(link, length) * scale,
            length_m: length,
            departure: dir,
            arrival: dir,
            chain: Chain(chain),
        })
    }
}

/// Point where the segment a->b crosses the surface polygon, strictly between the ends.
fn segment_plane_point(s: &Surface, a: Vec3d, b: Vec3d) -> Option<Vec3d> {
    let t = s.plane_parameter(a, b - a)?;
    if !(t > 0.0 && t < 1.0) {
        return None;
    }
    let p = a + (b - a) * t;
    s.contains_in_plane(p, 1e-9).then_some(p)
}

/// Point on the surface from which a ray travelling along `dir` reaches `p`.
fn back_trace(s: &Surface, p: Vec3d, dir: Vec3d) -> Option<Vec3d> {
    let t = s.plane_parameter(p, -dir)?;
    if !(t > 1e-9) {
        return None;
    }
    let q = p - dir * t;
    s.contains_in_plane(q, 1e-9).then_some(q)
}

/// Groups ordered surface crossings into (entry t, entry surface, exit t, exit surface) per solid.
fn pair_slabs(surfaces: &[Surface], crossings: &[(f64, SurfaceId)]) -> Option<Vec<(f64, SurfaceId, f64, SurfaceId)>> {
    let mut pending: Vec<(f64, SurfaceId)> = crossings.to_vec();
    let mut slabs = Vec::new();
    let mut inside: Option<(usize, f64, SurfaceId)> = None;
    let mut i = 0;
    while i < pending.len() {
        let (t, sid) = pending[i];
        let solid = surfaces[sid].solid?;
        match inside {
            None => inside = Some((solid, t, sid)),
            Some((current, t_in, s_in)) if current == solid => {
                slabs.push((t_in, s_in, t, sid));
                inside = None;
            }
            Some((current, ..)) => {
                // touching solids: the exit of the current one may sort after the next entry
                let j = pending[i + 1..]
                    .iter()
                    .position(|&(tj, sj)| (tj - t).abs() < 1e-9 && surfaces[sj].solid == Some(current))?;
                pending.swap(i, i + 1 + j);
                continue;
            }
        }
        i += 1;
    }
    inside.is_none().then_some(slabs)
}
