use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;

pub type Vec3d = Vec3<f64>;
pub type SurfaceId = usize;
pub type MaterialId = usize;

const COPLANAR_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectTag {
    Building,
    Bridge,
    Pylon,
    NoiseBarrier,
    Ground,
    Train,
    Wall,
    Tree,
    Furniture,
}

impl ObjectTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectTag::Building => "building",
            ObjectTag::Bridge => "bridge",
            ObjectTag::Pylon => "pylon",
            ObjectTag::NoiseBarrier => "noise-barrier",
            ObjectTag::Ground => "ground",
            ObjectTag::Train => "train",
            ObjectTag::Wall => "wall",
            ObjectTag::Tree => "tree",
            ObjectTag::Furniture => "furniture",
        }
    }
}

impl fmt::Display for ObjectTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ObjectTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "building" => ObjectTag::Building,
            "bridge" => ObjectTag::Bridge,
            "pylon" => ObjectTag::Pylon,
            "noise-barrier" => ObjectTag::NoiseBarrier,
            "ground" => ObjectTag::Ground,
            "train" => ObjectTag::Train,
            "wall" => ObjectTag::Wall,
            "tree" => ObjectTag::Tree,
            "furniture" => ObjectTag::Furniture,
            other => return Err(Error::Config(format!("unknown object tag `{other}`"))),
        })
    }
}

/// A planar convex polygon with an outward normal.
///
/// Vertices wind counter-clockwise when seen from the side the normal points to.
#[derive(Clone, Debug)]
pub struct Surface {
    pub id: SurfaceId,
    pub vertices: Vec<Vec3d>,
    pub normal: Vec3d,
    pub material: MaterialId,
    pub tag: ObjectTag,
    /// Index of the owning scene object.
    pub object: usize,
    /// Set when the owning object is a closed solid, so a ray crossing this face enters or leaves it.
    pub solid: Option<usize>,
    plane_offset: f64,
    /// In-plane inward normals and offsets of the polygon edges.
    edge_planes: Vec<(Vec3d, f64)>,
    pub(crate) aabb_min: Vec3d,
    pub(crate) aabb_max: Vec3d,
}

impl Surface {
    pub fn new(
        id: SurfaceId,
        vertices: Vec<Vec3d>,
        material: MaterialId,
        tag: ObjectTag,
        object: usize,
        solid: Option<usize>,
    ) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidGeometry(format!(
                "surface {id} has {} vertices, need at least 3",
                vertices.len()
            )));
        }
        // Newell's method gives a robust normal for any planar polygon.
        let mut n = Vec3d::zero();
        for (i, a) in vertices.iter().enumerate() {
            let b = vertices[(i + 1) % vertices.len()];
            n.x += (a.y - b.y) * (a.z + b.z);
            n.y += (a.z - b.z) * (a.x + b.x);
            n.z += (a.x - b.x) * (a.y + b.y);
        }
        let normal = n
            .try_normalize()
            .ok_or_else(|| Error::InvalidGeometry(format!("surface {id} has no well-defined normal")))?;
        let plane_offset = normal.dot(vertices[0]);
        for v in &vertices {
            if (normal.dot(*v) - plane_offset).abs() > COPLANAR_TOL {
                return Err(Error::InvalidGeometry(format!("surface {id} is not planar")));
            }
        }
        let mut edge_planes = Vec::with_capacity(vertices.len());
        for (i, a) in vertices.iter().enumerate() {
            let b = vertices[(i + 1) % vertices.len()];
            let inward = normal
                .cross(b - *a)
                .try_normalize()
                .ok_or_else(|| Error::InvalidGeometry(format!("surface {id} has a zero-length edge")))?;
            edge_planes.push((inward, inward.dot(*a)));
        }
        for (inward, off) in &edge_planes {
            if vertices.iter().any(|v| inward.dot(*v) < off - COPLANAR_TOL) {
                return Err(Error::InvalidGeometry(format!("surface {id} is not convex")));
            }
        }
        let (aabb_min, aabb_max) = vertices.iter().fold(
            (
                Vec3d::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
                Vec3d::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
            ),
            |(lo, hi), v| (lo.min_by_component(*v), hi.max_by_component(*v)),
        );
        Ok(Surface {
            id,
            vertices,
            normal,
            material,
            tag,
            object,
            solid,
            plane_offset,
            edge_planes,
            aabb_min,
            aabb_max,
        })
    }

    /// Signed distance of `p` from the surface plane, positive on the normal side.
    #[inline]
    pub fn signed_distance(&self, p: Vec3d) -> f64 {
        self.normal.dot(p) - self.plane_offset
    }

    /// Whether a point lying in the plane falls inside the polygon.
    #[inline]
    pub fn contains_in_plane(&self, p: Vec3d, tol: f64) -> bool {
        self.edge_planes.iter().all(|(inward, off)| inward.dot(p) >= off - tol)
    }

    /// Mirror a point about the surface plane.
    #[inline]
    pub fn mirror(&self, p: Vec3d) -> Vec3d {
        p - self.normal * (2.0 * self.signed_distance(p))
    }

    /// Ray parameter of the plane crossing, if the ray is not parallel to the plane.
    #[inline]
    pub fn plane_parameter(&self, origin: Vec3d, dir: Vec3d) -> Option<f64> {
        let denom = self.normal.dot(dir);
        if denom.abs() < 1e-14 {
            return None;
        }
        Some((self.plane_offset - self.normal.dot(origin)) / denom)
    }

    /// Ray parameter where the ray hits the polygon (either side), within (t_min, t_max).
    #[inline]
    pub fn intersect(&self, origin: Vec3d, dir: Vec3d, t_min: f64, t_max: f64) -> Option<f64> {
        let t = self.plane_parameter(origin, dir)?;
        if t <= t_min || t >= t_max {
            return None;
        }
        let p = origin + dir * t;
        self.contains_in_plane(p, 1e-9).then_some(t)
    }

    pub fn centroid(&self) -> Vec3d {
        let mut c = Vec3d::zero();
        for v in &self.vertices {
            c += *v;
        }
        c / self.vertices.len() as f64
    }

    pub fn area(&self) -> f64 {
        let v0 = self.vertices[0];
        let mut a = Vec3d::zero();
        for w in self.vertices[1..].windows(2) {
            a += (w[0] - v0).cross(w[1] - v0);
        }
        0.5 * a.dot(self.normal).abs()
    }

    /// Orthonormal in-plane basis (u, w) with u along the first edge.
    pub fn plane_basis(&self) -> (Vec3d, Vec3d) {
        let u = (self.vertices[1] - self.vertices[0]).normalize();
        let w = self.normal.cross(u);
        (u, w)
    }
}
