mod common;

use common::{mpcs_strategy, random_mpcs};
use hsrchan::attenuation::*;
use hsrchan::chanstats::{angular_spread, received_power, rician_k, rms_delay_spread, AngleKind};
use hsrchan::interference::{coverage_probability, sir, sir_series, weather_delta};
use hsrchan::mpc::MpcSet;
use proptest::prelude::*;
use rand::SeedableRng;

fn budget(g: f64, r: f64, c: f64, s: f64) -> AttenuationBudget<f64> {
    AttenuationBudget {
        a_gas: g,
        a_rain: r,
        a_cloud: c,
        a_scint: s,
        link_class: LinkClass::Satellite,
        weather: Weather::Rainy,
    }
}

#[test]
fn published_totals() {
    let rainy = combine_total(&satellite_components::<f64>(Weather::Rainy));
    let sunny = combine_total(&satellite_components::<f64>(Weather::Sunny));
    assert!((rainy - 32.90).abs() < 0.01, "{rainy}");
    assert!((sunny - 3.01).abs() < 0.01, "{sunny}");
    let cfg = AttenuationConfig::default();
    assert!((cfg.excess::<f64>(LinkClass::Terrestrial, Weather::Rainy).unwrap() - 8.2274).abs() < 1e-9);
    assert!((cfg.excess::<f64>(LinkClass::Terrestrial, Weather::Sunny).unwrap() - 0.12).abs() < 1e-9);
    assert!((cfg.excess::<f64>(LinkClass::Satellite, Weather::Rainy).unwrap() - rainy).abs() < 1e-12);
}

#[test]
fn weather_delta_of_the_uniform_model() {
    let cfg = AttenuationConfig::default();
    let t = |w| cfg.excess::<f64>(LinkClass::Terrestrial, w).unwrap();
    let s = |w| cfg.excess::<f64>(LinkClass::Satellite, w).unwrap();
    let terrestrial = (s(Weather::Rainy) - t(Weather::Rainy)) - (s(Weather::Sunny) - t(Weather::Sunny));
    assert!((terrestrial - 21.78).abs() < 0.01, "{terrestrial}");

    let signal = [-70.0, -75.0, -80.0];
    let interference = [-120.0, -118.0, -130.0];
    let run = |w| {
        let sig: Vec<f64> = signal.iter().map(|p| p - t(w)).collect();
        let int: Vec<f64> = interference.iter().map(|p| p - s(w)).collect();
        sir_series(&format!("BS2TrUE-{}", w.letter()), &sig, &format!("SA2TrUE-{}", w.letter()), &int).unwrap()
    };
    for d in weather_delta(&run(Weather::Rainy), &run(Weather::Sunny)).unwrap() {
        assert!((d - terrestrial).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn total_is_monotone_and_bounded_below(
        g in 0.0..5.0f64, r in 0.0..50.0f64, c in 0.0..5.0f64, s in 0.0..5.0f64, bump in 0.0..10.0f64,
    ) {
        let base = combine_total(&budget(g, r, c, s));
        prop_assert!(base >= g);
        prop_assert!(combine_total(&budget(g + bump, r, c, s)) >= base);
        prop_assert!(combine_total(&budget(g, r + bump, c, s)) >= base);
        prop_assert!(combine_total(&budget(g, r, c + bump, s)) >= base);
        prop_assert!(combine_total(&budget(g, r, c, s + bump)) >= base);
    }

    #[test]
    fn terrestrial_excess_scales_linearly(km in 0.01..0.6f64) {
        let full = terrestrial_excess(Weather::Rainy, 0.6).unwrap();
        let part = terrestrial_excess(Weather::Rainy, km).unwrap();
        prop_assert!((part - full * km / 0.6).abs() < 1e-12);
    }

    #[test]
    fn excess_commutes_with_statistics(mpcs in mpcs_strategy(50), excess in 0.0..40.0f64) {
        let set = MpcSet::new(0, mpcs, false, 1e9);
        let moved = apply_excess(&set, excess).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()) + 1e-12;
        prop_assert!(rel(rms_delay_spread(&moved.mpcs).unwrap() * 1e9, rms_delay_spread(&set.mpcs).unwrap() * 1e9));
        if set.len() > 1 {
            prop_assert!(rel(rician_k(&moved.mpcs).unwrap(), rician_k(&set.mpcs).unwrap()));
        }
        for k in AngleKind::ALL {
            prop_assert!(rel(angular_spread(&moved.mpcs, k).unwrap(), angular_spread(&set.mpcs, k).unwrap()));
        }
        let drop = received_power(&set.mpcs).p_total - received_power(&moved.mpcs).p_total;
        prop_assert!((drop - excess).abs() < 1e-9);
        prop_assert_eq!(
            moved.mpcs.iter().map(|m| m.chain.clone()).collect::<Vec<_>>(),
            set.mpcs.iter().map(|m| m.chain.clone()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn sir_is_antisymmetric_and_shift_free(a in -150.0..-30.0f64, b in -150.0..-30.0f64, c in -50.0..50.0f64) {
        prop_assert_eq!(sir(Some(a), Some(b)), -sir(Some(b), Some(a)));
        prop_assert!((sir(Some(a + c), Some(b + c)) - sir(Some(a), Some(b))).abs() < 1e-9);
    }

    #[test]
    fn coverage_falls_with_threshold(xs in proptest::collection::vec(-60.0..90.0f64, 1..100), t1 in -70.0..100.0f64, t2 in -70.0..100.0f64) {
        let zeros = vec![0.0; xs.len()];
        let s = sir_series("A-R", &xs, "B-R", &zeros).unwrap();
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(coverage_probability(&s, lo).unwrap() >= coverage_probability(&s, hi).unwrap());
        prop_assert_eq!(coverage_probability(&s, f64::NEG_INFINITY).unwrap(), 1.0);
        prop_assert_eq!(coverage_probability(&s, 90.0).unwrap(), 0.0);
    }
}

#[test]
fn zero_excess_is_identity_and_negative_is_rejected() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let set = MpcSet::new(0, random_mpcs(&mut rng, 10), false, 60.0);
    assert_eq!(apply_excess(&set, 0.0).unwrap(), set);
    assert!(apply_excess(&set, -1.0).is_err());
}

#[test]
fn sentinels_are_skipped_by_coverage() {
    let s = sir_series("A-R", &[-60.0, f64::NEG_INFINITY, -50.0], "B-R", &[f64::NEG_INFINITY, -90.0, -100.0]).unwrap();
    assert_eq!(s.sir_db[0], f64::INFINITY);
    assert_eq!(s.sir_db[1], f64::NEG_INFINITY);
    assert_eq!(coverage_probability(&s, 40.0).unwrap(), 1.0);
    assert_eq!(s.finite(), vec![50.0]);
}
