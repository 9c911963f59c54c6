mod common;

use common::{close, close_or_tiny, mpc, mpcs_strategy, oracle};
use hsrchan::chanstats::*;
use hsrchan::mpc::Mpc;
use proptest::prelude::*;

fn shifted(mpcs: &[Mpc<f64>], f: impl Fn(&mut Mpc<f64>)) -> Vec<Mpc<f64>> {
    mpcs.iter()
        .cloned()
        .map(|mut m| {
            f(&mut m);
            m
        })
        .collect()
}

fn spreads(mpcs: &[Mpc<f64>]) -> [f64; 4] {
    AngleKind::ALL.map(|k| angular_spread(mpcs, k).unwrap())
}

proptest! {
    #[test]
    fn matches_direct_summation(mpcs in mpcs_strategy(50)) {
        let p = received_power(&mpcs);
        prop_assert!(close(p.p_total, oracle::total_power_dbm(&mpcs), 1e-9));
        prop_assert!(close_or_tiny(rms_delay_spread(&mpcs).unwrap(), oracle::delay_spread(&mpcs), 1e-9, 1e-18));
        if mpcs.len() > 1 {
            prop_assert!(close(rician_k(&mpcs).unwrap(), oracle::k_factor(&mpcs), 1e-9));
        }
        prop_assert!(close_or_tiny(angular_spread(&mpcs, AngleKind::Asa).unwrap(), oracle::angular_spread(&mpcs, |m| m.aoa_az_deg), 1e-9, 1e-12));
        prop_assert!(close_or_tiny(angular_spread(&mpcs, AngleKind::Asd).unwrap(), oracle::angular_spread(&mpcs, |m| m.aod_az_deg), 1e-9, 1e-12));
        prop_assert!(close_or_tiny(angular_spread(&mpcs, AngleKind::Esa).unwrap(), oracle::angular_spread(&mpcs, |m| m.aoa_el_deg), 1e-9, 1e-12));
        prop_assert!(close_or_tiny(angular_spread(&mpcs, AngleKind::Esd).unwrap(), oracle::angular_spread(&mpcs, |m| m.aod_el_deg), 1e-9, 1e-12));
    }

    #[test]
    fn los_plus_nlos_is_total(mpcs in mpcs_strategy(50)) {
        let p = received_power(&mpcs);
        let lin = |x: Option<f64>| x.map_or(0.0, |v| 10f64.powf(v / 10.0));
        prop_assert!(close(lin(p.p_los) + lin(p.p_nlos), lin(Some(p.p_total)), 1e-12));
    }

    #[test]
    fn power_scaling_leaves_shape_statistics_unchanged(mpcs in mpcs_strategy(50), c in -50.0..50.0f64) {
        let moved = shifted(&mpcs, |m| m.power_dbm += c);
        prop_assert!(close_or_tiny(rms_delay_spread(&moved).unwrap(), rms_delay_spread(&mpcs).unwrap(), 1e-9, 1e-18));
        if mpcs.len() > 1 {
            prop_assert!(close(rician_k(&moved).unwrap(), rician_k(&mpcs).unwrap(), 1e-9));
        }
        for (a, b) in spreads(&moved).iter().zip(spreads(&mpcs)) {
            prop_assert!(close_or_tiny(*a, b, 1e-9, 1e-12));
        }
    }

    #[test]
    fn delay_translation_leaves_spread_unchanged(mpcs in mpcs_strategy(50), t in 0.0..1e-5f64) {
        let moved = shifted(&mpcs, |m| m.delay_s += t);
        let (a, b) = (rms_delay_spread(&moved).unwrap(), rms_delay_spread(&mpcs).unwrap());
        prop_assert!((a - b).abs() <= 1e-9 * b.max(1e-12), "{} vs {}", a, b);
    }

    #[test]
    fn azimuth_rotation_without_wrap_is_invariant(
        rows in proptest::collection::vec((-120.0..-60.0f64, -80.0..80.0f64), 1..40),
        phi in -90.0..90.0f64,
    ) {
        let mpcs: Vec<_> = rows.iter().enumerate().map(|(i, &(p, a))| mpc(p, 1e-6, [0.0, 0.0, a, 0.0], &format!("refl:{i}"))).collect();
        let moved = shifted(&mpcs, |m| m.aoa_az_deg += phi);
        let (a, b) = (angular_spread(&moved, AngleKind::Asa).unwrap(), angular_spread(&mpcs, AngleKind::Asa).unwrap());
        prop_assert!((a - b).abs() <= 1e-9 * b.max(1.0));
    }

    #[test]
    fn spreads_are_bounded(mpcs in mpcs_strategy(50)) {
        prop_assert!(rms_delay_spread(&mpcs).unwrap() >= 0.0);
        for s in spreads(&mpcs) {
            prop_assert!((0.0..=180.0).contains(&s));
        }
        let min = angular_spread_with(&mpcs, AngleKind::Asa, SpreadMode::MinimizedShift).unwrap();
        prop_assert!(min <= angular_spread(&mpcs, AngleKind::Asa).unwrap() + 1e-12);
    }

    #[test]
    fn fit_matches_moments(xs in proptest::collection::vec(-100.0..100.0f64, 2..200)) {
        let fit = fit_normal(&xs).unwrap();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        prop_assert!((fit.mu - mean).abs() < 1e-9);
        prop_assert!((fit.sigma - var.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn cdf_is_a_right_continuous_staircase(xs in proptest::collection::vec(-100.0..100.0f64, 1..200), probe in -120.0..120.0f64) {
        let cdf = empirical_cdf(&xs).unwrap();
        let steps = cdf.steps();
        prop_assert!(steps.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
        prop_assert_eq!(steps.last().unwrap().1, 1.0);
        let below = xs.iter().filter(|&&x| x <= probe).count() as f64 / xs.len() as f64;
        prop_assert_eq!(cdf.eval(probe), below);
        for &(v, f) in &steps {
            prop_assert_eq!(cdf.eval(v), f);
        }
    }
}

#[test]
fn single_component_statistics() {
    let one = [mpc(-70.0, 1e-6, [10.0, 5.0, -20.0, 3.0], "direct")];
    assert_eq!(rms_delay_spread(&one).unwrap(), 0.0);
    assert_eq!(rician_k(&one).unwrap(), f64::INFINITY);
    assert_eq!(spreads(&one), [0.0; 4]);
    let stats = SnapshotStats::from_mpcs(&one);
    assert_eq!(stats.power.p_los, Some(-70.0));
    assert_eq!(stats.power.p_nlos, None);
    let empty = SnapshotStats::<f64>::from_mpcs(&[]);
    assert_eq!(empty.ds_s, None);
    assert_eq!(empty.kf_db, None);
}

#[test]
fn f32_statistics_track_f64() {
    let mpcs = [
        mpc(-60.0, 0.0, [0.0; 4], "direct"),
        mpc(-63.0, 50e-9, [20.0, 0.0, -30.0, 5.0], "refl:1"),
        mpc(-70.0, 200e-9, [-40.0, 0.0, 60.0, -5.0], "refl:2"),
    ];
    let single: Vec<Mpc<f32>> = mpcs
        .iter()
        .map(|m| Mpc {
            power_dbm: m.power_dbm as f32,
            delay_s: m.delay_s as f32,
            aod_az_deg: m.aod_az_deg as f32,
            aod_el_deg: m.aod_el_deg as f32,
            aoa_az_deg: m.aoa_az_deg as f32,
            aoa_el_deg: m.aoa_el_deg as f32,
            phase_rad: 0.0,
            chain: m.chain.clone(),
        })
        .collect();
    let ds64 = rms_delay_spread(&mpcs).unwrap();
    let ds32 = rms_delay_spread(&single).unwrap() as f64;
    assert!((ds64 - ds32).abs() < 1e-5 * ds64);
    let k64 = rician_k(&mpcs).unwrap();
    assert!((k64 - rician_k(&single).unwrap() as f64).abs() < 1e-4);
}
