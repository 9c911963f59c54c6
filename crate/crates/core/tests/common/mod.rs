#![allow(dead_code)]

pub mod oracle;

use hsrchan::antenna::AntennaPattern;
use hsrchan::mpc::MpcSet;
use hsrchan::raytracer::{Link, Source};
use hsrchan::scene::{Endpoints, Material, ObjectTag, Scene, SceneDescription, SceneObject, Trajectory, Vec3d};
use num_complex::Complex64;

pub fn v(x: f64, y: f64, z: f64) -> Vec3d {
    Vec3d::new(x, y, z)
}

pub fn scene_with(objects: Vec<SceneObject>) -> Scene {
    let desc = SceneDescription {
        materials: Material::railway_library(),
        objects,
        trajectory: Trajectory::new(v(0.0, 0.0, 0.0), v(100.0, 0.0, 0.0), 11, 10.0).unwrap(),
        endpoints: Endpoints::default(),
    };
    Scene::from_description(&desc).unwrap()
}

pub fn single_box(min: Vec3d, size: Vec3d, material: &str) -> Scene {
    scene_with(vec![SceneObject::new_box("block", ObjectTag::Building, min, size, material)])
}

pub fn ground(material: &str) -> SceneObject {
    SceneObject::new_plane("ground", ObjectTag::Ground, v(-200.0, -200.0, 0.0), 400.0, 400.0, material)
}

pub fn iso_link(tx: Vec3d, rx: Vec3d) -> Link {
    Link {
        source: Source::Point(tx),
        tx_power_dbm: 0.0,
        tx_pattern: AntennaPattern::isotropic(0.0),
        rx,
        rx_pattern: AntennaPattern::isotropic(0.0),
    }
}

/// Power of the phasor sum of all components, in dBm.
pub fn coherent_power_dbm(set: &MpcSet<f64>) -> f64 {
    let sum: Complex64 = set.mpcs.iter().map(|m| Complex64::from_polar(m.power_mw().sqrt(), m.phase_rad)).sum();
    10.0 * sum.norm_sqr().log10()
}

pub fn mpc(power_dbm: f64, delay_s: f64, angles: [f64; 4], chain: &str) -> hsrchan::mpc::Mpc<f64> {
    hsrchan::mpc::Mpc {
        power_dbm,
        delay_s,
        aod_az_deg: angles[0],
        aod_el_deg: angles[1],
        aoa_az_deg: angles[2],
        aoa_el_deg: angles[3],
        phase_rad: 0.0,
        chain: chain.parse().unwrap(),
    }
}

/// Random components with distinct chains; the first one is the direct path.
pub fn random_mpcs(rng: &mut impl rand::Rng, n: usize) -> Vec<hsrchan::mpc::Mpc<f64>> {
    (0..n)
        .map(|i| {
            let chain = if i == 0 { "direct".to_string() } else { format!("refl:{i}") };
            mpc(
                rng.random_range(-120.0..-60.0),
                rng.random_range(1e-7..2e-6),
                [
                    rng.random_range(-179.9..180.0),
                    rng.random_range(-89.9..89.9),
                    rng.random_range(-179.9..180.0),
                    rng.random_range(-89.9..89.9),
                ],
                &chain,
            )
        })
        .collect()
}

pub fn mpcs_strategy(max: usize) -> impl proptest::strategy::Strategy<Value = Vec<hsrchan::mpc::Mpc<f64>>> {
    use proptest::prelude::*;
    proptest::collection::vec(
        (-120.0..-60.0f64, 1e-7..2e-6f64, -179.9..180.0f64, -89.9..89.9f64, -179.9..180.0f64, -89.9..89.9f64),
        1..=max,
    )
    .prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (p, d, a, b, c, e))| {
                let chain = if i == 0 { "direct".to_string() } else { format!("refl:{i}") };
                mpc(p, d, [a, b, c, e], &chain)
            })
            .collect()
    })
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Relative comparison with an absolute floor for values that should be zero.
pub fn close_or_tiny(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + floor
}
