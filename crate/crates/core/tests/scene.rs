mod common;

use common::v;
use hsrchan::scene::{build_hsr_scenario, HsrScenarioConfig, Scene, Vec3d, MIN_HIT_DISTANCE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

fn brute_force(scene: &Scene, origin: Vec3d, dir: Vec3d) -> Option<(usize, f64)> {
    scene
        .surfaces
        .iter()
        .filter_map(|s| s.intersect(origin, dir, MIN_HIT_DISTANCE, f64::INFINITY).map(|t| (s.id, t)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
}

#[test]
fn bvh_matches_brute_force_on_random_rays() {
    let scene = build_hsr_scenario(&HsrScenarioConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut hits = 0;
    for _ in 0..10_000 {
        let origin = v(rng.random_range(-50.0..550.0), rng.random_range(-60.0..60.0), rng.random_range(0.1..40.0));
        let d: [f64; 3] = UnitSphere.sample(&mut rng);
        let dir = v(d[0], d[1], d[2]);
        let fast = scene.first_hit(origin, dir).unwrap();
        let slow = brute_force(&scene, origin, dir);
        match (fast, slow) {
            (None, None) => {}
            (Some(h), Some((id, t))) => {
                hits += 1;
                assert!((h.distance - t).abs() < 1e-9, "{origin:?} {dir:?}: {} vs {t}", h.distance);
                if h.surface != id {
                    // coincident hits on a shared edge may resolve to either surface
                    let other = scene.surfaces[h.surface].intersect(origin, dir, MIN_HIT_DISTANCE, f64::INFINITY);
                    assert!((other.unwrap() - t).abs() < 1e-9);
                }
            }
            (f, s) => panic!("{origin:?} {dir:?}: bvh {f:?} brute {s:?}"),
        }
    }
    assert!(hits > 3_000, "only {hits} rays hit anything");
}

#[test]
fn segment_blocking_agrees_with_brute_force() {
    let scene = build_hsr_scenario(&HsrScenarioConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2_000 {
        let mut point =
            || v(rng.random_range(-50.0..550.0), rng.random_range(-60.0..60.0), rng.random_range(0.1..40.0));
        let (a, b) = (point(), point());
        let len = (b - a).norm();
        let dir = (b - a) / len;
        let slow = scene.surfaces.iter().any(|s| s.intersect(a, dir, 1e-6, len - 1e-6).is_some());
        assert_eq!(scene.segment_blocked(a, b, &[]), slow, "{a:?} -> {b:?}");
    }
}

#[test]
fn trajectory_samples_are_uniform() {
    let scene = build_hsr_scenario(&HsrScenarioConfig::default()).unwrap();
    let pts = scene.trajectory.sample().unwrap();
    assert_eq!(pts.len(), 1441);
    assert_eq!(pts[0], v(0.0, 0.0, 0.0));
    assert_eq!(pts[1440], v(500.0, 0.0, 0.0));
    let spacing = scene.trajectory.spacing();
    assert!((spacing - 500.0 / 1440.0).abs() < 1e-12);
    for w in pts.windows(2) {
        assert!(((w[1] - w[0]).norm() - spacing).abs() < 1e-9);
    }
}

#[test]
fn scene_file_roundtrip_rebuilds_identical_scene() {
    let desc = HsrScenarioConfig::default().description().unwrap();
    let text = desc.to_toml_string().unwrap();
    let back = hsrchan::scene::SceneDescription::from_toml_str(&text).unwrap();
    assert_eq!(back, desc);
    let a = Scene::from_description(&desc).unwrap();
    let b = Scene::from_description(&back).unwrap();
    assert_eq!(a.surfaces.len(), b.surfaces.len());
    assert_eq!(a.wedges.len(), b.wedges.len());
}
