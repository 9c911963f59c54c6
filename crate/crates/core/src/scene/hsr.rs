//! Procedural high-speed-railway scene: steep wall with the base station, two
//! crossing bridges, catenary pylons, a metal noise barrier, buildings and trees.

use serde::{Deserialize, Serialize};

use super::material::Material;
use super::surface::{ObjectTag, Vec3d};
use super::{Endpoints, Scene, SceneDescription, SceneObject, Trajectory};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildingSpec {
    pub name: String,
    pub min: Vec3d,
    pub size: Vec3d,
    pub material: String,
}

impl BuildingSpec {
    fn new(name: &str, min: [f64; 3], size: [f64; 3], material: &str) -> Self {
        BuildingSpec { name: name.into(), min: min.into(), size: size.into(), material: material.into() }
    }
}

/// Dimensions of the procedural railway scene. Distances along the track are x, in meters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HsrScenarioConfig {
    pub track_length_m: f64,
    pub sample_count: usize,
    pub speed_mps: f64,
    /// Ground rectangle margin beyond the track ends.
    pub ground_margin_m: f64,
    pub ground_half_width_m: f64,
    pub wall_height_m: f64,
    /// Along-track extent of the steep wall.
    pub wall_x_m: [f64; 2],
    /// Cross-track extent of the steep wall.
    pub wall_y_m: [f64; 2],
    /// Track-distance intervals covered by crossing bridges.
    pub bridges: Vec<[f64; 2]>,
    pub bridge_clearance_m: f64,
    pub bridge_thickness_m: f64,
    pub bridge_half_width_m: f64,
    pub pylon_positions_m: Vec<f64>,
    /// Cross-track distance from the track centre to the inner face of each pylon post.
    pub pylon_offset_m: f64,
    pub pylon_size_m: f64,
    pub pylon_height_m: f64,
    pub barrier_x_m: [f64; 2],
    /// Cross-track position of the barrier's track-side face.
    pub barrier_y_m: f64,
    pub barrier_thickness_m: f64,
    pub barrier_height_m: f64,
    pub buildings: Vec<BuildingSpec>,
    pub trees: Vec<BuildingSpec>,
    pub endpoints: Endpoints,
}

impl Default for HsrScenarioConfig {
    fn default() -> Self {
        HsrScenarioConfig {
            track_length_m: 500.0,
            sample_count: 1441,
            speed_mps: 300.0 / 3.6,
            ground_margin_m: 60.0,
            ground_half_width_m: 50.0,
            wall_height_m: 24.0,
            wall_x_m: [-60.0, 15.0],
            wall_y_m: [-16.0, -12.0],
            bridges: vec![[20.0, 40.0], [60.0, 90.0]],
            bridge_clearance_m: 6.0,
            bridge_thickness_m: 1.5,
            bridge_half_width_m: 30.0,
            pylon_positions_m: vec![150.0, 250.0, 350.0, 450.0],
            pylon_offset_m: 3.0,
            pylon_size_m: 1.0,
            pylon_height_m: 9.5,
            barrier_x_m: [100.0, 450.0],
            barrier_y_m: -6.0,
            barrier_thickness_m: 0.2,
            barrier_height_m: 3.0,
            buildings: vec![
                BuildingSpec::new("building-a", [150.0, 25.0, 0.0], [40.0, 20.0, 20.0], "marble"),
                BuildingSpec::new("building-b", [280.0, -45.0, 0.0], [40.0, 20.0, 30.0], "toughened_glass"),
                BuildingSpec::new("building-c", [400.0, 20.0, 0.0], [30.0, 15.0, 12.0], "marble"),
            ],
            trees: vec![
                BuildingSpec::new("tree-1", [230.0, 12.0, 0.0], [3.0, 3.0, 8.0], "wood"),
                BuildingSpec::new("tree-2", [330.0, 14.0, 0.0], [3.0, 3.0, 8.0], "wood"),
            ],
            endpoints: Endpoints::default(),
        }
    }
}

impl HsrScenarioConfig {
    /// Scene description for this configuration; geometry validation happens in [`Scene::from_description`].
    pub fn description(&self) -> Result<SceneDescription> {
        if !(self.track_length_m > 0.0) {
            return Err(Error::InvalidArgument("track length must be positive".into()));
        }
        let half = self.ground_half_width_m;
        let mut objects = vec![SceneObject::new_plane(
            "ground",
            ObjectTag::Ground,
            Vec3d::new(-self.ground_margin_m, -half, 0.0),
            self.track_length_m + 2.0 * self.ground_margin_m,
            2.0 * half,
            "concrete",
        )];
        let [wx0, wx1] = self.wall_x_m;
        let [wy0, wy1] = self.wall_y_m;
        objects.push(SceneObject::new_box(
            "steep-wall",
            ObjectTag::Wall,
            Vec3d::new(wx0, wy0, 0.0),
            Vec3d::new(wx1 - wx0, wy1 - wy0, self.wall_height_m),
            "brick",
        ));
        for (i, [x0, x1]) in self.bridges.iter().enumerate() {
            objects.push(SceneObject::new_box(
                &format!("bridge-{}", i + 1),
                ObjectTag::Bridge,
                Vec3d::new(*x0, -self.bridge_half_width_m, self.bridge_clearance_m),
                Vec3d::new(x1 - x0, 2.0 * self.bridge_half_width_m, self.bridge_thickness_m),
                "concrete",
            ));
        }
        let s = self.pylon_size_m;
        for (i, x) in self.pylon_positions_m.iter().enumerate() {
            for (side, y0) in [("n", self.pylon_offset_m), ("s", -self.pylon_offset_m - s)] {
                objects.push(SceneObject::new_box(
                    &format!("pylon-{}{}", i + 1, side),
                    ObjectTag::Pylon,
                    Vec3d::new(x - 0.5 * s, y0, 0.0),
                    Vec3d::new(s, s, self.pylon_height_m),
                    "metal",
                ));
            }
        }
        let [bx0, bx1] = self.barrier_x_m;
        if bx1 > bx0 {
            objects.push(SceneObject::new_box(
                "noise-barrier",
                ObjectTag::NoiseBarrier,
                Vec3d::new(bx0, self.barrier_y_m - self.barrier_thickness_m, 0.0),
                Vec3d::new(bx1 - bx0, self.barrier_thickness_m, self.barrier_height_m),
                "metal",
            ));
        }
        for (specs, tag) in [(&self.buildings, ObjectTag::Building), (&self.trees, ObjectTag::Tree)] {
            for b in specs {
                objects.push(SceneObject::new_box(&b.name, tag, b.min, b.size, &b.material));
            }
        }
        let trajectory = Trajectory::new(
            Vec3d::zero(),
            Vec3d::new(self.track_length_m, 0.0, 0.0),
            self.sample_count,
            self.speed_mps,
        )?;
        Ok(SceneDescription {
            materials: Material::railway_library(),
            objects,
            trajectory,
            endpoints: self.endpoints.clone(),
        })
    }
}

pub fn build_hsr_scenario(config: &HsrScenarioConfig) -> Result<Scene> {
    Scene::from_description(&config.description()?)
}
