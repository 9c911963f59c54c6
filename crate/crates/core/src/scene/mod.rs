//! Scene geometry: materials, planar surfaces, diffracting wedges, the
//! trajectory and the terminal positions, plus the procedural railway builder.

mod bvh;
mod hsr;
mod material;
mod surface;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bvh::Bvh;
pub use hsr::{build_hsr_scenario, BuildingSpec, HsrScenarioConfig};
pub use material::Material;
pub use surface::{MaterialId, ObjectTag, Surface, SurfaceId, Vec3d};

pub type WedgeId = usize;

/// Hits closer than this to the ray origin are ignored.
pub const MIN_HIT_DISTANCE: f64 = 1e-9;

/// Slack used when testing whether a path segment between two interaction points is clear.
pub const SEGMENT_EPS: f64 = 1e-6;

/// Straight edge between two faces that meet at a convex angle.
#[derive(Clone, Debug)]
pub struct Wedge {
    pub id: WedgeId,
    pub start: Vec3d,
    pub end: Vec3d,
    /// Face 0 and face n of the wedge.
    pub faces: [SurfaceId; 2],
    /// Angle of free space around the edge, in radians.
    pub exterior_angle: f64,
    /// Unit vector from `start` to `end`.
    pub direction: Vec3d,
    /// Unit vector lying in face 0, perpendicular to the edge, pointing away from it.
    pub face0_tangent: Vec3d,
    /// Outward normal of face 0.
    pub face0_normal: Vec3d,
}

impl Wedge {
    /// Wedge factor: exterior angle divided by pi.
    pub fn n(&self) -> f64 {
        self.exterior_angle / PI
    }

    pub fn length(&self) -> f64 {
        self.start.distance(self.end)
    }

    /// Angle of the point `p` around the edge, measured from face 0 through free space, in [0, 2 pi).
    pub fn angle_of(&self, p: Vec3d) -> f64 {
        let v = p - self.start;
        let v = v - self.direction * v.dot(self.direction);
        let a = v.dot(self.face0_normal).atan2(v.dot(self.face0_tangent));
        if a < 0.0 {
            a + 2.0 * PI
        } else {
            a
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: Vec3d,
    pub end: Vec3d,
    pub sample_count: usize,
    /// Train speed; metadata only.
    #[serde(default)]
    pub speed_mps: f64,
}

impl Trajectory {
    pub fn new(start: Vec3d, end: Vec3d, sample_count: usize, speed_mps: f64) -> Result<Self> {
        let t = Trajectory { start, end, sample_count, speed_mps };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_count < 2 {
            return Err(Error::TooFewSamples { needed: 2, got: self.sample_count });
        }
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(Error::InvalidArgument("trajectory endpoints must be finite".into()));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.start.distance(self.end)
    }

    pub fn spacing(&self) -> f64 {
        self.length() / (self.sample_count - 1) as f64
    }

    /// Distance travelled from the trajectory start at sample `index`.
    pub fn track_distance(&self, index: usize) -> f64 {
        self.length() * index as f64 / (self.sample_count - 1) as f64
    }

    pub fn position(&self, index: usize) -> Vec3d {
        if index + 1 == self.sample_count {
            return self.end;
        }
        let f = index as f64 / (self.sample_count - 1) as f64;
        self.start + (self.end - self.start) * f
    }

    /// Uniformly spaced sample positions, first = start, last = end.
    pub fn sample(&self) -> Result<Vec<Vec3d>> {
        self.validate()?;
        Ok((0..self.sample_count).map(|i| self.position(i)).collect())
    }
}

/// Where the four terminals sit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Endpoints {
    /// Base station antenna position.
    pub bs: Vec3d,
    /// Direction toward the satellite seen from the scene.
    pub satellite_azimuth_deg: f64,
    pub satellite_elevation_deg: f64,
    /// Nominal slant distance to the satellite.
    pub satellite_distance_m: f64,
    /// Antenna height of the train user equipment above the trajectory.
    pub true_height_m: f64,
    /// Antenna height of the satellite user equipment above the trajectory.
    pub saue_height_m: f64,
}

impl Endpoints {
    /// Unit vector pointing from the scene toward the satellite.
    pub fn satellite_direction(&self) -> Vec3d {
        Vec3d::from_az_el_deg(self.satellite_azimuth_deg, self.satellite_elevation_deg)
    }
}

impl Default for Endpoints {
    fn default() -> Self {
        Endpoints {
            bs: Vec3d::new(-20.0, -12.5, 26.0),
            satellite_azimuth_deg: 90.0,
            satellite_elevation_deg: 45.0,
            satellite_distance_m: 37_469_300.0,
            true_height_m: 4.7,
            saue_height_m: 5.2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    /// Axis-aligned closed box; `position` is the minimum corner.
    Box,
    /// Horizontal upward-facing rectangle at `position.z`; `dimensions.z` is ignored.
    Plane,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    pub name: String,
    pub tag: ObjectTag,
    pub shape: ShapeKind,
    pub position: Vec3d,
    pub dimensions: Vec3d,
    pub material: String,
}

impl SceneObject {
    pub fn new_box(name: &str, tag: ObjectTag, min: Vec3d, size: Vec3d, material: &str) -> Self {
        SceneObject {
            name: name.into(),
            tag,
            shape: ShapeKind::Box,
            position: min,
            dimensions: size,
            material: material.into(),
        }
    }

    pub fn new_plane(name: &str, tag: ObjectTag, min: Vec3d, dx: f64, dy: f64, material: &str) -> Self {
        SceneObject {
            name: name.into(),
            tag,
            shape: ShapeKind::Plane,
            position: min,
            dimensions: Vec3d::new(dx, dy, 0.0),
            material: material.into(),
        }
    }

    fn max_corner(&self) -> Vec3d {
        self.position + self.dimensions
    }
}

/// Serializable description of a scene; the on-disk scene file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneDescription {
    pub materials: Vec<Material>,
    pub objects: Vec<SceneObject>,
    pub trajectory: Trajectory,
    pub endpoints: Endpoints,
}

impl SceneDescription {
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

#[derive(Clone, Debug)]
pub struct ObjectInfo {
    pub name: String,
    pub tag: ObjectTag,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hit {
    pub surface: SurfaceId,
    pub point: Vec3d,
    pub distance: f64,
}

/// Immutable world: geometry, materials, spatial index, trajectory and terminal positions.
#[derive(Clone, Debug)]
pub struct Scene {
    pub materials: Vec<Material>,
    pub objects: Vec<ObjectInfo>,
    pub surfaces: Vec<Surface>,
    pub wedges: Vec<Wedge>,
    pub trajectory: Trajectory,
    pub endpoints: Endpoints,
    bvh: Bvh,
}

impl Scene {
    pub fn from_description(desc: &SceneDescription) -> Result<Scene> {
        desc.trajectory.validate()?;
        let mut material_ids = HashMap::new();
        for (i, m) in desc.materials.iter().enumerate() {
            m.validate()?;
            if material_ids.insert(m.name.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate material `{}`", m.name)));
            }
        }
        let mut names = HashMap::new();
        for obj in &desc.objects {
            if !material_ids.contains_key(&obj.material) {
                return Err(Error::UnknownMaterial(obj.material.clone()));
            }
            if names.insert(obj.name.as_str(), ()).is_some() {
                return Err(Error::Config(format!("duplicate object name `{}`", obj.name)));
            }
            let d = obj.dimensions;
            let bad = match obj.shape {
                ShapeKind::Box => !(d.x > 0.0 && d.y > 0.0 && d.z > 0.0),
                ShapeKind::Plane => !(d.x > 0.0 && d.y > 0.0),
            };
            if bad || !obj.position.is_finite() || !d.is_finite() {
                return Err(Error::InvalidGeometry(format!("object `{}` needs positive finite dimensions", obj.name)));
            }
        }
        check_overlaps(&desc.objects)?;

        let planes: Vec<&SceneObject> = desc.objects.iter().filter(|o| o.shape == ShapeKind::Plane).collect();
        let mut surfaces = Vec::new();
        let mut wedges = Vec::new();
        let mut objects = Vec::new();
        for (index, obj) in desc.objects.iter().enumerate() {
            objects.push(ObjectInfo { name: obj.name.clone(), tag: obj.tag });
            let material = material_ids[&obj.material];
            match obj.shape {
                ShapeKind::Plane => {
                    let (lo, hi) = (obj.position, obj.max_corner());
                    let z = lo.z;
                    let verts = vec![
                        Vec3d::new(lo.x, lo.y, z),
                        Vec3d::new(hi.x, lo.y, z),
                        Vec3d::new(hi.x, hi.y, z),
                        Vec3d::new(lo.x, hi.y, z),
                    ];
                    surfaces.push(Surface::new(surfaces.len(), verts, material, obj.tag, index, None)?);
                }
                ShapeKind::Box => {
                    let grounded = planes.iter().any(|p| plane_supports(p, obj));
                    add_box(&mut surfaces, &mut wedges, obj, index, material, grounded)?;
                }
            }
        }
        let bvh = Bvh::build(&surfaces);
        Ok(Scene {
            materials: desc.materials.clone(),
            objects,
            surfaces,
            wedges,
            trajectory: desc.trajectory.clone(),
            endpoints: desc.endpoints.clone(),
            bvh,
        })
    }

    pub fn material_of(&self, surface: SurfaceId) -> &Material {
        &self.materials[self.surfaces[surface].material]
    }

    /// Nearest intersection along a ray, ignoring hits closer than [`MIN_HIT_DISTANCE`].
    pub fn first_hit(&self, origin: Vec3d, direction: Vec3d) -> Result<Option<Hit>> {
        let dir = direction.try_normalize().ok_or(Error::DegenerateRay)?;
        Ok(self
            .bvh
            .closest(&self.surfaces, origin, dir, MIN_HIT_DISTANCE, f64::INFINITY, |_| false)
            .map(|(surface, t)| Hit { surface, point: origin + dir * t, distance: t }))
    }

    /// Whether anything other than the `exclude`d surfaces lies strictly between `a` and `b`.
    pub fn segment_blocked(&self, a: Vec3d, b: Vec3d, exclude: &[SurfaceId]) -> bool {
        let d = b - a;
        let len = d.norm();
        if len <= 2.0 * SEGMENT_EPS {
            return false;
        }
        let dir = d / len;
        self.bvh.any(&self.surfaces, a, dir, SEGMENT_EPS, len - SEGMENT_EPS, |id| exclude.contains(&id))
    }

    /// Whether a ray from `origin` along unit `dir` hits anything (other than `exclude`) before leaving the scene.
    pub fn ray_blocked(&self, origin: Vec3d, dir: Vec3d, exclude: &[SurfaceId]) -> bool {
        self.bvh.any(&self.surfaces, origin, dir, SEGMENT_EPS, f64::INFINITY, |id| exclude.contains(&id))
    }

    /// Every surface crossing along a unit-direction ray within (t_min, t_max), sorted by distance then id.
    pub fn crossings(&self, origin: Vec3d, dir: Vec3d, t_min: f64, t_max: f64) -> Vec<(f64, SurfaceId)> {
        let mut out = Vec::new();
        self.bvh.all(&self.surfaces, origin, dir, t_min, t_max, &mut out);
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        out
    }

    pub fn bvh_node_count(&self) -> usize {
        self.bvh.node_count()
    }

    /// Surfaces belonging to objects with the given tag.
    pub fn surfaces_tagged(&self, tag: ObjectTag) -> impl Iterator<Item = &Surface> {
        self.surfaces.iter().filter(move |s| s.tag == tag)
    }
}

fn plane_supports(plane: &SceneObject, obj: &SceneObject) -> bool {
    let (plo, phi) = (plane.position, plane.max_corner());
    let (lo, hi) = (obj.position, obj.max_corner());
    (plane.position.z - lo.z).abs() < 1e-9 && plo.x <= lo.x && plo.y <= lo.y && phi.x >= hi.x && phi.y >= hi.y
}

fn check_overlaps(objects: &[SceneObject]) -> Result<()> {
    const TOL: f64 = 1e-9;
    let boxes: Vec<&SceneObject> = objects.iter().filter(|o| o.shape == ShapeKind::Box).collect();
    for (i, a) in boxes.iter().enumerate() {
        let (alo, ahi) = (a.position, a.max_corner());
        for b in &boxes[i + 1..] {
            let (blo, bhi) = (b.position, b.max_corner());
            let overlap =
                (0..3).all(|k| alo.component(k) < bhi.component(k) - TOL && blo.component(k) < ahi.component(k) - TOL);
            if overlap {
                return Err(Error::OverlappingSolids { first: a.name.clone(), second: b.name.clone() });
            }
        }
    }
    Ok(())
}

// Box face order: bottom, top, -y, +y, -x, +x.
const BOTTOM: usize = 0;

fn add_box(
    surfaces: &mut Vec<Surface>,
    wedges: &mut Vec<Wedge>,
    obj: &SceneObject,
    object: usize,
    material: MaterialId,
    grounded: bool,
) -> Result<()> {
    let (a, b) = (obj.position, obj.max_corner());
    let p = |x: f64, y: f64, z: f64| Vec3d::new(x, y, z);
    let faces: [[Vec3d; 4]; 6] = [
        [p(a.x, a.y, a.z), p(a.x, b.y, a.z), p(b.x, b.y, a.z), p(b.x, a.y, a.z)],
        [p(a.x, a.y, b.z), p(b.x, a.y, b.z), p(b.x, b.y, b.z), p(a.x, b.y, b.z)],
        [p(a.x, a.y, a.z), p(b.x, a.y, a.z), p(b.x, a.y, b.z), p(a.x, a.y, b.z)],
        [p(a.x, b.y, a.z), p(a.x, b.y, b.z), p(b.x, b.y, b.z), p(b.x, b.y, a.z)],
        [p(a.x, a.y, a.z), p(a.x, a.y, b.z), p(a.x, b.y, b.z), p(a.x, b.y, a.z)],
        [p(b.x, a.y, a.z), p(b.x, b.y, a.z), p(b.x, b.y, b.z), p(b.x, a.y, b.z)],
    ];
    let mut ids = [None; 6];
    for (k, verts) in faces.iter().enumerate() {
        // a face resting on the ground can never be reached
        if grounded && k == BOTTOM {
            continue;
        }
        let id = surfaces.len();
        surfaces.push(Surface::new(id, verts.to_vec(), material, obj.tag, object, Some(object))?);
        ids[k] = Some(id);
    }
    // each box edge as (face 0, face n); endpoints are the shared vertices
    let pairs = [(1, 2), (1, 3), (1, 4), (1, 5), (0, 2), (0, 3), (0, 4), (0, 5), (2, 4), (2, 5), (3, 4), (3, 5)];
    for (fa, fb) in pairs {
        let (Some(ia), Some(ib)) = (ids[fa], ids[fb]) else { continue };
        let shared: Vec<Vec3d> =
            faces[fa].iter().filter(|v| faces[fb].iter().any(|w| w.distance(**v) < 1e-12)).copied().collect();
        if shared.len() != 2 {
            return Err(Error::InvalidGeometry(format!("box `{}` has a malformed edge", obj.name)));
        }
        let id = wedges.len();
        wedges.push(make_wedge(id, shared[0], shared[1], &surfaces[ia], &surfaces[ib])?);
    }
    Ok(())
}

fn make_wedge(id: WedgeId, start: Vec3d, end: Vec3d, face0: &Surface, face_n: &Surface) -> Result<Wedge> {
    let direction =
        (end - start).try_normalize().ok_or_else(|| Error::InvalidGeometry(format!("wedge {id} has zero length")))?;
    for f in [face0, face_n] {
        for q in [start, end] {
            if f.signed_distance(q).abs() > 1e-6 || !f.contains_in_plane(q, 1e-6) {
                return Err(Error::InvalidGeometry(format!("wedge {id} edge is not shared by face {}", f.id)));
            }
        }
    }
    let mid = (start + end) * 0.5;
    let to_centroid = face0.centroid() - mid;
    let face0_tangent = (to_centroid - direction * to_centroid.dot(direction))
        .try_normalize()
        .ok_or_else(|| Error::InvalidGeometry(format!("wedge {id} face 0 is degenerate")))?;
    let exterior_angle = PI + face0.normal.angle_to(face_n.normal);
    if !(exterior_angle > 0.0 && exterior_angle < 2.0 * PI) {
        return Err(Error::InvalidGeometry(format!("wedge {id} has exterior angle {exterior_angle}")));
    }
    Ok(Wedge {
        id,
        start,
        end,
        faces: [face0.id, face_n.id],
        exterior_angle,
        direction,
        face0_tangent,
        face0_normal: face0.normal,
    })
}
