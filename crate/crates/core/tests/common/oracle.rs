//! Plain direct-summation reference formulas, kept independent of the library code.

use hsrchan::mpc::Mpc;

fn mw(m: &Mpc<f64>) -> f64 {
    10f64.powf(m.power_dbm / 10.0)
}

pub fn total_power_dbm(mpcs: &[Mpc<f64>]) -> f64 {
    10.0 * mpcs.iter().map(mw).sum::<f64>().log10()
}

pub fn delay_spread(mpcs: &[Mpc<f64>]) -> f64 {
    let t0 = mpcs.iter().map(|m| m.delay_s).fold(f64::INFINITY, f64::min);
    let p: f64 = mpcs.iter().map(mw).sum();
    let m1: f64 = mpcs.iter().map(|m| (m.delay_s - t0) * mw(m)).sum::<f64>() / p;
    let m2: f64 = mpcs.iter().map(|m| (m.delay_s - t0).powi(2) * mw(m)).sum::<f64>() / p;
    (m2 - m1 * m1).max(0.0).sqrt()
}

pub fn k_factor(mpcs: &[Mpc<f64>]) -> f64 {
    let p: Vec<f64> = mpcs.iter().map(mw).collect();
    let max = p.iter().cloned().fold(0.0, f64::max);
    let rest: f64 = p.iter().sum::<f64>() - max;
    10.0 * (max / rest).log10()
}

pub fn angular_spread(mpcs: &[Mpc<f64>], angle: impl Fn(&Mpc<f64>) -> f64) -> f64 {
    let p: f64 = mpcs.iter().map(mw).sum();
    let mu: f64 = mpcs.iter().map(|m| angle(m).to_radians() * mw(m)).sum::<f64>() / p;
    let acc: f64 = mpcs
        .iter()
        .map(|m| {
            let d = angle(m).to_radians() - mu;
            let wrapped = d.sin().atan2(d.cos());
            wrapped * wrapped * mw(m)
        })
        .sum();
    (acc / p).sqrt().to_degrees()
}
