mod common;

use std::collections::BTreeMap;

use common::{ground, iso_link, scene_with, single_box, v};
use hsrchan::mpc::Interaction;
use hsrchan::raytracer::{free_space_loss, Source, TraceConfig, Tracer, SPEED_OF_LIGHT};
use hsrchan::scene::{Endpoints, Material, ObjectTag, Scene, SceneDescription, SceneObject, Trajectory};

const F: f64 = 22.6e9;

fn only(f: impl FnOnce(&mut TraceConfig)) -> TraceConfig {
    let mut c = TraceConfig { direct: false, ..TraceConfig::direct_only() };
    f(&mut c);
    c
}

fn custom_scene(materials: Vec<Material>, objects: Vec<SceneObject>) -> Scene {
    let desc = SceneDescription {
        materials,
        objects,
        trajectory: Trajectory::new(v(0.0, 0.0, 0.0), v(10.0, 0.0, 0.0), 2, 1.0).unwrap(),
        endpoints: Endpoints::default(),
    };
    Scene::from_description(&desc).unwrap()
}

#[test]
fn free_space_direct_power_and_delay() {
    let scene = scene_with(vec![]);
    let tracer = Tracer::new(&scene, TraceConfig::direct_only()).unwrap();
    let m = tracer.trace_direct(&iso_link(v(0.0, 0.0, 10.0), v(100.0, 0.0, 10.0))).unwrap();
    assert!((m.power_dbm + free_space_loss(100.0, F).unwrap()).abs() < 1e-9);
    let m = tracer.trace_direct(&iso_link(v(0.0, 0.0, 10.0), v(300.0, 0.0, 10.0))).unwrap();
    assert!((m.delay_s * 1e6 - 1.0007).abs() < 5e-5);
    assert!(m.is_direct());
}

#[test]
fn ground_reflection_point_and_length() {
    let scene = scene_with(vec![ground("concrete")]);
    let tracer = Tracer::new(&scene, only(|c| c.max_reflection_order = 1)).unwrap();
    let link = iso_link(v(0.0, 0.0, 26.0), v(100.0, 0.0, 4.7));
    let paths = tracer.reflection_paths(&link, 1);
    assert_eq!(paths.len(), 1);
    let p = paths[0].points[0];
    assert!((p.x - 84.69).abs() < 0.005 && p.z.abs() < 1e-9, "{p:?}");
    let length = (p - v(0.0, 0.0, 26.0)).norm() + (v(100.0, 0.0, 4.7) - p).norm();
    assert!((length - 104.61).abs() < 0.005);
    let m = &tracer.trace_reflections(&link, 1)[0];
    assert!((m.delay_s - length / SPEED_OF_LIGHT).abs() < 1e-12);
    assert!(length >= 100.0f64.hypot(21.3));
}

#[test]
fn reflections_obey_the_specular_law_and_delay() {
    let objects = vec![
        ground("concrete"),
        SceneObject::new_box("wall", ObjectTag::Wall, v(-50.0, 12.0, 0.0), v(150.0, 2.0, 20.0), "brick"),
        SceneObject::new_box("block", ObjectTag::Building, v(30.0, -25.0, 0.0), v(20.0, 10.0, 15.0), "marble"),
    ];
    let scene = scene_with(objects);
    let tracer = Tracer::new(&scene, only(|c| c.max_reflection_order = 2)).unwrap();
    let mut checked = 0;
    for rx in [v(60.0, 0.0, 4.7), v(80.0, 5.0, 2.0), v(20.0, -5.0, 8.0)] {
        let tx = v(-10.0, 3.0, 20.0);
        let link = iso_link(tx, rx);
        let paths = tracer.reflection_paths(&link, 2);
        assert!(paths.iter().any(|p| p.surfaces.len() == 2), "no second-order path to {rx:?}");
        for path in &paths {
            let mut pts = vec![tx];
            pts.extend(&path.points);
            pts.push(rx);
            for (k, &sid) in path.surfaces.iter().enumerate() {
                let n = scene.surfaces[sid].normal;
                let d_in = (pts[k + 1] - pts[k]).normalize();
                let d_out = (pts[k + 2] - pts[k + 1]).normalize();
                let mirrored = d_in - n * (2.0 * d_in.dot(n));
                let residual = mirrored.angle_to(d_out);
                assert!(residual < 1e-9, "residual {residual} on surface {sid}");
                checked += 1;
            }
            let length: f64 = pts.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
            let chain: Vec<Interaction> = path.surfaces.iter().map(|&s| Interaction::Reflection(s)).collect();
            let mpc = tracer
                .trace_reflections(&link, 2)
                .into_iter()
                .find(|m| m.chain.0 == chain)
                .expect("path has a component");
            assert!((mpc.delay_s - length / SPEED_OF_LIGHT).abs() < 1e-12);
        }
    }
    assert!(checked > 6);
}

#[test]
fn surface_behind_both_ends_gives_no_path() {
    let scene = single_box(v(-10.0, -30.0, 0.0), v(120.0, 2.0, 10.0), "brick");
    let tracer = Tracer::new(&scene, only(|c| c.max_reflection_order = 1)).unwrap();
    // both terminals sit on the far side of the box's back face
    let link = iso_link(v(0.0, -40.0, 5.0), v(100.0, -40.0, 5.0));
    let hits: Vec<_> = tracer
        .reflection_paths(&link, 1)
        .into_iter()
        .filter(|p| scene.surfaces[p.surfaces[0]].normal.y > 0.5)
        .collect();
    assert!(hits.is_empty());
}

#[test]
fn ground_only_scene_has_los_and_one_reflection() {
    let flat = Material::new("flat", 5.0, 0.01, 0.0, 1.0).unwrap();
    let scene = custom_scene(vec![flat], vec![ground("flat")]);
    let tracer = Tracer::new(&scene, TraceConfig::default()).unwrap();
    let set = tracer.snapshot(&iso_link(v(0.0, 0.0, 26.0), v(100.0, 0.0, 4.7)), 0).unwrap();
    assert_eq!(set.len(), 2);
    assert!(set.mpcs[0].is_direct());
    assert_eq!(set.mpcs[1].chain.to_string(), "refl:0");
    assert!(!set.los_blocked);

    let direct_only = Tracer::new(&scene, TraceConfig::direct_only()).unwrap();
    let link = iso_link(v(0.0, 0.0, 26.0), v(100.0, 0.0, 4.7));
    let set = direct_only.snapshot(&link, 3).unwrap();
    assert_eq!(set.mpcs, vec![direct_only.trace_direct(&link).unwrap()]);
    assert_eq!(set.snapshot_index, 3);
}

#[test]
fn glass_attenuates_more_than_brick() {
    let through = |material: &str| {
        let scene = single_box(v(49.9, -20.0, 0.0), v(0.2, 40.0, 20.0), material);
        let tracer = Tracer::new(&scene, only(|c| c.transmission = true)).unwrap();
        let set = tracer.snapshot(&iso_link(v(0.0, 0.0, 5.0), v(100.0, 0.0, 5.0)), 0).unwrap();
        assert!(set.los_blocked);
        set.mpcs.first().map(|m| m.power_dbm)
    };
    let glass = through("toughened_glass").unwrap();
    let brick = through("brick").unwrap();
    assert!(glass < brick, "glass {glass} brick {brick}");
    assert!(brick < -free_space_loss(100.0, F).unwrap());
    // metal is opaque
    assert!(through("metal").is_none());
}

#[test]
fn sharper_lobe_scatters_less_off_specular() {
    let power_by_tile = |alpha: f64| {
        let m = Material::new("lobe", 5.0, 0.01, 0.5, alpha).unwrap();
        let plane = SceneObject::new_plane("patch", ObjectTag::Ground, v(-20.0, -20.0, 0.0), 40.0, 40.0, "lobe");
        let scene = custom_scene(vec![m], vec![plane]);
        let tracer = Tracer::new(&scene, only(|c| c.scattering = true)).unwrap();
        let tiles = tracer.tiles().to_vec();
        let link = iso_link(v(-10.0, 0.0, 10.0), v(10.0, 0.0, 10.0));
        let out: BTreeMap<usize, (f64, f64)> = tracer
            .trace_scattering(&link, f64::NEG_INFINITY)
            .into_iter()
            .map(|mpc| {
                let Interaction::Scattering { tile, .. } = mpc.chain.0[0] else { panic!("not a scatter") };
                let c = tiles[tile].center;
                let d_in = (c - v(-10.0, 0.0, 10.0)).normalize();
                let spec = v(d_in.x, d_in.y, -d_in.z);
                let psi = spec.angle_to((v(10.0, 0.0, 10.0) - c).normalize()).to_degrees();
                (tile, (mpc.power_dbm, psi))
            })
            .collect();
        out
    };
    let soft = power_by_tile(5.0);
    let sharp = power_by_tile(109.0);
    let mut compared = 0;
    for (tile, &(p5, psi)) in &soft {
        if (25.0..35.0).contains(&psi) {
            let p109 = sharp.get(tile).map_or(f64::NEG_INFINITY, |x| x.0);
            assert!(p109 < p5, "tile {tile} psi {psi}: {p109} vs {p5}");
            compared += 1;
        }
        if psi < 0.5 {
            assert!(sharp[tile].0 > p5, "near-specular tile should favour the sharp lobe");
        }
    }
    assert!(compared > 0);

    let zero = Material::new("smooth", 5.0, 0.01, 0.0, 5.0).unwrap();
    let plane = SceneObject::new_plane("patch", ObjectTag::Ground, v(-20.0, -20.0, 0.0), 40.0, 40.0, "smooth");
    let scene = custom_scene(vec![zero], vec![plane]);
    let tracer = Tracer::new(&scene, only(|c| c.scattering = true)).unwrap();
    assert!(tracer.tiles().is_empty());
    assert!(tracer.trace_scattering(&iso_link(v(-10.0, 0.0, 10.0), v(10.0, 0.0, 10.0)), f64::NEG_INFINITY).is_empty());
}

#[test]
fn cutoff_and_ordering_hold_on_the_railway_scene() {
    let scene = hsrchan::scene::build_hsr_scenario(&Default::default()).unwrap();
    let config = TraceConfig { cutoff_db: 30.0, ..Default::default() };
    let tracer = Tracer::new(&scene, config).unwrap();
    let link = iso_link(v(-20.0, -12.5, 26.0), v(120.0, 0.0, 4.7));
    let set = tracer.snapshot(&link, 0).unwrap();
    let top = set.mpcs[0].power_dbm;
    assert!(set.mpcs.iter().all(|m| m.power_dbm >= top - 30.0));
    assert!(set.mpcs.windows(2).all(|w| w[0].power_dbm >= w[1].power_dbm));
    let chains: std::collections::BTreeSet<String> = set.mpcs.iter().map(|m| m.chain.to_string()).collect();
    assert_eq!(chains.len(), set.len(), "duplicate chains");
    for m in &set.mpcs {
        assert!(m.delay_s > 0.0);
        assert!(m.aoa_az_deg > -180.0 && m.aoa_az_deg <= 180.0);
        assert!(m.aod_el_deg.abs() <= 90.0 && m.aoa_el_deg.abs() <= 90.0);
    }
    // same input, same output
    assert_eq!(tracer.snapshot(&link, 0).unwrap(), set);
}

#[test]
fn plane_wave_under_a_bridge_is_blocked_and_weaker() {
    let scene = hsrchan::scene::build_hsr_scenario(&Default::default()).unwrap();
    let tracer = Tracer::new(&scene, TraceConfig::default()).unwrap();
    let sat = scene.endpoints.satellite_direction();
    let mut link = iso_link(v(0.0, 0.0, 0.0), v(30.0, 0.0, 5.2));
    link.source = Source::PlaneWave { toward_source: sat, distance_m: scene.endpoints.satellite_distance_m };
    let set = tracer.snapshot(&link, 0).unwrap();
    assert!(set.los_blocked);
    assert!(set.direct().is_none());
    let mut clear = link;
    clear.rx = v(10.0, 0.0, 5.2);
    let open = tracer.snapshot(&clear, 0).unwrap();
    let los = open.direct().unwrap().power_dbm;
    assert!((los + free_space_loss(scene.endpoints.satellite_distance_m, F).unwrap()).abs() < 1e-6);
    assert!(set.mpcs.iter().all(|m| m.power_dbm < los));
}
