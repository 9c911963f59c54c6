//! Directive diffuse scattering from surface tiles.

use std::f64::consts::PI;
use std::ops::Range;

use super::{Link, RawPath, Source, Tracer};
use crate::mpc::{Chain, Interaction, Mpc};
use crate::scene::{Scene, Surface, SurfaceId, Vec3d};

/// Grid cells per side grouped into one bounding chunk.
const CHUNK_CELLS: usize = 8;
/// Incidence-angle resolution of the lobe normalization table.
const NORM_STEP_DEG: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatterTile {
    pub surface: SurfaceId,
    /// Index of the tile within its surface.
    pub index: usize,
    pub center: Vec3d,
    pub area: f64,
}

struct Chunk {
    surface: SurfaceId,
    tiles: Range<usize>,
    lo: Vec3d,
    hi: Vec3d,
    max_area: f64,
}

struct NormTable {
    values: Vec<f64>,
    min: f64,
}

impl NormTable {
    fn new(alpha: f64) -> Self {
        let n = (90.0 / NORM_STEP_DEG).round() as usize + 1;
        let values: Vec<f64> =
            (0..n).map(|i| scatter_normalization(alpha, (i as f64 * NORM_STEP_DEG).to_radians())).collect();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        NormTable { values, min }
    }

    fn at(&self, theta_i: f64) -> f64 {
        let x = theta_i.to_degrees() / NORM_STEP_DEG;
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let f = (x - i as f64).clamp(0.0, 1.0);
        self.values[i] * (1.0 - f) + self.values[i + 1] * f
    }
}

/// Integral of the lobe ((1 + cos psi) / 2)^alpha over the outgoing hemisphere, for incidence
/// `theta_i` from the normal; psi is measured from the specular direction.
pub fn scatter_normalization(alpha: f64, theta_i: f64) -> f64 {
    // narrow lobes need a finer grid
    let n = 180.max((40.0 * alpha.max(0.0).sqrt()).ceil() as usize);
    let (st, ct) = theta_i.sin_cos();
    let dt = 0.5 * PI / n as f64;
    let dp = PI / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let th = (i as f64 + 0.5) * dt;
        let (s, c) = th.sin_cos();
        let mut ring = 0.0;
        for j in 0..n {
            let ph = (j as f64 + 0.5) * dp;
            let cos_psi = s * ph.cos() * st + c * ct;
            ring += (0.5 * (1.0 + cos_psi)).powf(alpha);
        }
        sum += ring * s;
    }
    // the lobe is symmetric in phi, so the half range is doubled
    2.0 * sum * dt * dp
}

pub(super) struct ScatterModel {
    tiles: Vec<ScatterTile>,
    chunks: Vec<Chunk>,
    /// Per material, `None` when it does not scatter.
    norms: Vec<Option<NormTable>>,
}

impl ScatterModel {
    pub(super) fn new(scene: &Scene, tile_m2: f64) -> Self {
        let norms: Vec<Option<NormTable>> = scene
            .materials
            .iter()
            .map(|m| (m.scatter_coeff > 0.0).then(|| NormTable::new(m.scatter_exponent)))
            .collect();
        let mut tiles = Vec::new();
        let mut chunks = Vec::new();
        for s in &scene.surfaces {
            if norms[s.material].is_some() {
                tile_surface(s, tile_m2, &mut tiles, &mut chunks);
            }
        }
        ScatterModel { tiles, chunks, norms }
    }

    pub(super) fn tiles(&self) -> &[ScatterTile] {
        &self.tiles
    }
}

/// Splits a convex polygon into grid cells of side sqrt(tile_m2) in its own plane.
fn tile_surface(s: &Surface, tile_m2: f64, tiles: &mut Vec<ScatterTile>, chunks: &mut Vec<Chunk>) {
    let (u, w) = s.plane_basis();
    let o = s.vertices[0];
    let poly: Vec<(f64, f64)> = s.vertices.iter().map(|v| ((*v - o).dot(u), (*v - o).dot(w))).collect();
    let (mut u0, mut u1, mut w0, mut w1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(a, b) in &poly {
        u0 = u0.min(a);
        u1 = u1.max(a);
        w0 = w0.min(b);
        w1 = w1.max(b);
    }
    let side = tile_m2.sqrt();
    let nu = (((u1 - u0) / side) - 1e-9).ceil().max(1.0) as usize;
    let nw = (((w1 - w0) / side) - 1e-9).ceil().max(1.0) as usize;
    let mut index = 0;
    for cu in (0..nu).step_by(CHUNK_CELLS) {
        for cw in (0..nw).step_by(CHUNK_CELLS) {
            let first = tiles.len();
            let mut lo = Vec3d::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
            let mut hi = -lo;
            let mut max_area: f64 = 0.0;
            for i in cu..(cu + CHUNK_CELLS).min(nu) {
                for j in cw..(cw + CHUNK_CELLS).min(nw) {
                    let a0 = u0 + i as f64 * side;
                    let b0 = w0 + j as f64 * side;
                    let cell = [(a0, b0), (a0 + side, b0), (a0 + side, b0 + side), (a0, b0 + side)];
                    let piece = clip_convex(&cell, &poly);
                    let Some((area, (cu_, cw_))) = polygon_area_centroid(&piece) else { continue };
                    if area < 1e-9 * tile_m2 {
                        continue;
                    }
                    let center = o + u * cu_ + w * cw_;
                    lo = lo.min_by_component(center);
                    hi = hi.max_by_component(center);
                    max_area = max_area.max(area);
                    tiles.push(ScatterTile { surface: s.id, index, center, area });
                    index += 1;
                }
            }
            if tiles.len() > first {
                chunks.push(Chunk { surface: s.id, tiles: first..tiles.len(), lo, hi, max_area });
            }
        }
    }
}

/// Sutherland-Hodgman clip of `subject` by the convex counter-clockwise polygon `clip`.
fn clip_convex(subject: &[(f64, f64)], clip: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = subject.to_vec();
    for k in 0..clip.len() {
        if out.is_empty() {
            break;
        }
        let a = clip[k];
        let b = clip[(k + 1) % clip.len()];
        let side = |p: (f64, f64)| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
        let input = std::mem::take(&mut out);
        for i in 0..input.len() {
            let p = input[i];
            let q = input[(i + 1) % input.len()];
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push((p.0 + (q.0 - p.0) * t, p.1 + (q.1 - p.1) * t));
            }
        }
    }
    out
}

fn polygon_area_centroid(poly: &[(f64, f64)]) -> Option<(f64, (f64, f64))> {
    if poly.len() < 3 {
        return None;
    }
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..poly.len() {
        let (x0, y0) = poly[i];
        let (x1, y1) = poly[(i + 1) % poly.len()];
        let cross = x0 * y1 - x1 * y0;
        a += cross;
        cx += (x0 + x1) * cross;
        cy += (y0 + y1) * cross;
    }
    if a.abs() < 1e-300 {
        return None;
    }
    Some((0.5 * a.abs(), (cx / (3.0 * a), cy / (3.0 * a))))
}

fn aabb_distance(p: Vec3d, lo: Vec3d, hi: Vec3d) -> f64 {
    let d = Vec3d::new(
        (lo.x - p.x).max(0.0).max(p.x - hi.x),
        (lo.y - p.y).max(0.0).max(p.y - hi.y),
        (lo.z - p.z).max(0.0).max(p.z - hi.z),
    );
    d.norm()
}

impl Tracer<'_> {
    /// Scattered components whose power can reach `floor_dbm`.
    pub fn trace_scattering(&self, link: &Link, floor_dbm: f64) -> Vec<Mpc<f64>> {
        let Some(model) = &self.scatter else { return Vec::new() };
        let lam = 20.0 * (self.lambda / (4.0 * PI)).log10();
        let peak = link.tx_power_dbm + link.tx_pattern.max_gain_dbi + link.rx_pattern.max_gain_dbi + lam;
        let mut out = Vec::new();
        for chunk in &model.chunks {
            let surface = &self.scene.surfaces[chunk.surface];
            let material = self.scene.material_of(chunk.surface);
            let Some(norm) = &model.norms[surface.material] else { continue };
            if surface.signed_distance(link.rx) <= 0.0 {
                continue;
            }
            let r_i_min = match link.source {
                Source::Point(tx) => {
                    if surface.signed_distance(tx) <= 0.0 {
                        continue;
                    }
                    aabb_distance(tx, chunk.lo, chunk.hi)
                }
                Source::PlaneWave { toward_source, distance_m } => {
                    if surface.normal.dot(toward_source) <= 0.0 {
                        continue;
                    }
                    distance_m
                }
            };
            let r_s_min = aabb_distance(link.rx, chunk.lo, chunk.hi);
            let s2 = material.scatter_coeff * material.scatter_coeff;
            let bound = peak + 10.0 * (s2 * chunk.max_area / norm.min).log10()
                - 20.0 * r_i_min.max(1e-3).log10()
                - 20.0 * r_s_min.max(1e-3).log10();
            if bound < floor_dbm {
                continue;
            }
            for tile in &model.tiles[chunk.tiles.clone()] {
                if let Some(m) =
                    self.scatter_tile(link, tile, material.scatter_coeff, material.scatter_exponent, norm, floor_dbm)
                {
                    out.push(m);
                }
            }
        }
        out
    }

    fn scatter_tile(
        &self,
        link: &Link,
        tile: &ScatterTile,
        s_coeff: f64,
        alpha: f64,
        norm: &NormTable,
        floor_dbm: f64,
    ) -> Option<Mpc<f64>> {
        let p = tile.center;
        let normal = self.scene.surfaces[tile.surface].normal;
        let s_in = self.incident_direction(link, p);
        let cos_i = -s_in.dot(normal);
        let to_rx = link.rx - p;
        let r_s = to_rx.norm();
        if cos_i <= 0.0 || r_s < 1e-6 || to_rx.dot(normal) <= 0.0 {
            return None;
        }
        let s_out = to_rx / r_s;
        let specular = s_in.reflect(normal);
        let lobe = (0.5 * (1.0 + s_out.dot(specular))).max(0.0).powf(alpha);
        let r_i = match link.source {
            Source::Point(tx) => tx.distance(p),
            Source::PlaneWave { distance_m, .. } => distance_m,
        };
        let theta_i = cos_i.min(1.0).acos();
        let factor = (self.lambda / (4.0 * PI)).powi(2) * s_coeff * s_coeff * tile.area * cos_i * lobe
            / (norm.at(theta_i) * r_i * r_i * r_s * r_s);
        if !(factor > 0.0) {
            return None;
        }
        let g_tx = link.tx_pattern.gain(s_in).ok()?;
        let g_rx = link.rx_pattern.gain(-s_out).ok()?;
        let power = link.tx_power_dbm + g_tx + g_rx + 10.0 * factor.log10();
        if power < floor_dbm {
            return None;
        }
        let exclude = [tile.surface];
        if !self.source_visible(link, p, &exclude) || self.scene.segment_blocked(p, link.rx, &exclude) {
            return None;
        }
        let length = self.leg_length(link, p) + r_s;
        let amplitude = self.phase(link, length) * factor.sqrt();
        self.finish(
            link,
            RawPath {
                amplitude,
                length_m: length,
                departure: s_in,
                arrival: s_out,
                chain: Chain(vec![Interaction::Scattering { surface: tile.surface, tile: tile.index }]),
            },
        )
    }
}
