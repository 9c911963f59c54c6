//! Per-snapshot channel parameters, normal fits and empirical CDFs.

use crate::error::{Error, Result};
use crate::mpc::Mpc;
use crate::scalar::{db_to_linear, linear_to_db, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReceivedPower<T: Scalar> {
    pub p_los: Option<T>,
    pub p_nlos: Option<T>,
    /// Negative infinity for an empty set.
    pub p_total: T,
}

/// Direct, non-direct and total received power in dBm, summed in milliwatts.
pub fn received_power<T: Scalar>(mpcs: &[Mpc<T>]) -> ReceivedPower<T> {
    let mut los = None;
    let mut nlos = T::zero();
    let mut any_nlos = false;
    for m in mpcs {
        if m.is_direct() {
            los = Some(m.power_dbm);
        } else {
            nlos += db_to_linear(m.power_dbm);
            any_nlos = true;
        }
    }
    let total = nlos + los.map_or(T::zero(), db_to_linear);
    ReceivedPower {
        p_los: los,
        p_nlos: any_nlos.then(|| linear_to_db(nlos)),
        p_total: if mpcs.is_empty() { T::neg_infinity() } else { linear_to_db(total) },
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PdpBin<T: Scalar> {
    pub delay_s: T,
    pub power_mw: T,
}

/// Power delay profile sorted by delay, components with identical delay merged.
pub fn pdp<T: Scalar>(mpcs: &[Mpc<T>]) -> Vec<PdpBin<T>> {
    let mut bins: Vec<PdpBin<T>> = mpcs.iter().map(|m| PdpBin { delay_s: m.delay_s, power_mw: m.power_mw() }).collect();
    bins.sort_by(|a, b| a.delay_s.partial_cmp(&b.delay_s).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<PdpBin<T>> = Vec::with_capacity(bins.len());
    for b in bins {
        match out.last_mut() {
            Some(last) if last.delay_s == b.delay_s => last.power_mw += b.power_mw,
            _ => out.push(b),
        }
    }
    out
}

/// Linear weights relative to the strongest component, so scaling never overflows.
fn relative_weights<T: Scalar>(mpcs: &[Mpc<T>]) -> Result<Vec<T>> {
    let top = mpcs.iter().map(|m| m.power_dbm).fold(T::neg_infinity(), |a, b| a.max(b));
    if mpcs.is_empty() || !top.is_finite() {
        return Err(Error::EmptySet);
    }
    Ok(mpcs.iter().map(|m| db_to_linear(m.power_dbm - top)).collect())
}

/// Weighted mean and central second moment, two-pass.
fn weighted_moments<T: Scalar>(values: &[T], weights: &[T]) -> (T, T) {
    let mut sw = T::zero();
    let mut sx = T::zero();
    for (&x, &w) in values.iter().zip(weights) {
        sw += w;
        sx += w * x;
    }
    let mean = sx / sw;
    let mut sd = T::zero();
    for (&x, &w) in values.iter().zip(weights) {
        let d = x - mean;
        sd += w * d * d;
    }
    (mean, sd / sw)
}

/// RMS delay spread in seconds.
pub fn rms_delay_spread<T: Scalar>(mpcs: &[Mpc<T>]) -> Result<T> {
    let w = relative_weights(mpcs)?;
    let first = mpcs.iter().map(|m| m.delay_s).fold(T::infinity(), |a, b| a.min(b));
    let excess: Vec<T> = mpcs.iter().map(|m| m.delay_s - first).collect();
    let (_, var) = weighted_moments(&excess, &w);
    Ok(var.max(T::zero()).sqrt())
}

/// Rician K-factor in dB: strongest component over the sum of all others.
/// A single component gives positive infinity.
pub fn rician_k<T: Scalar>(mpcs: &[Mpc<T>]) -> Result<T> {
    let w = relative_weights(mpcs)?;
    let strongest = w.iter().enumerate().fold(0, |best, (i, &x)| if x > w[best] { i } else { best });
    let rest = w.iter().enumerate().filter(|&(i, _)| i != strongest).fold(T::zero(), |acc, (_, &x)| acc + x);
    if rest == T::zero() {
        return Ok(T::infinity());
    }
    Ok(linear_to_db(w[strongest] / rest))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleKind {
    /// Azimuth of arrival.
    Asa,
    /// Azimuth of departure.
    Asd,
    /// Elevation of arrival.
    Esa,
    /// Elevation of departure.
    Esd,
}

impl AngleKind {
    pub const ALL: [AngleKind; 4] = [AngleKind::Asa, AngleKind::Asd, AngleKind::Esa, AngleKind::Esd];

    fn angle_deg<T: Scalar>(self, m: &Mpc<T>) -> T {
        match self {
            AngleKind::Asa => m.aoa_az_deg,
            AngleKind::Asd => m.aod_az_deg,
            AngleKind::Esa => m.aoa_el_deg,
            AngleKind::Esd => m.aod_el_deg,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SpreadMode {
    /// Power-weighted mean, wrapped deviations, RMS about zero.
    #[default]
    AsWritten,
    /// Minimum of the as-written spread over circular shifts of all angles.
    MinimizedShift,
}

fn wrap_pi<T: Scalar>(x: T) -> T {
    let two_pi = T::TAU();
    let pi = T::PI();
    let r = (x + pi) % two_pi;
    let r = if r < T::zero() { r + two_pi } else { r };
    r - pi
}

fn spread_rad<T: Scalar>(theta: &[T], w: &[T]) -> T {
    let mut sw = T::zero();
    let mut sx = T::zero();
    for (&t, &p) in theta.iter().zip(w) {
        sw += p;
        sx += p * t;
    }
    let mu = sx / sw;
    let mut acc = T::zero();
    for (&t, &p) in theta.iter().zip(w) {
        let d = wrap_pi(t - mu);
        acc += p * d * d;
    }
    (acc / sw).sqrt()
}

/// Angular spread in degrees.
pub fn angular_spread<T: Scalar>(mpcs: &[Mpc<T>], kind: AngleKind) -> Result<T> {
    angular_spread_with(mpcs, kind, SpreadMode::AsWritten)
}

pub fn angular_spread_with<T: Scalar>(mpcs: &[Mpc<T>], kind: AngleKind, mode: SpreadMode) -> Result<T> {
    let w = relative_weights(mpcs)?;
    let theta: Vec<T> = mpcs.iter().map(|m| kind.angle_deg(m).to_radians()).collect();
    let spread = match mode {
        SpreadMode::AsWritten => spread_rad(&theta, &w),
        SpreadMode::MinimizedShift => {
            // candidate shifts: a fine grid plus those that move each angle onto the cut
            let mut shifts: Vec<T> = (0..720).map(|i| T::lit(i as f64 * 0.5).to_radians()).collect();
            shifts.extend(theta.iter().map(|&t| T::PI() - t));
            let mut best = spread_rad(&theta, &w);
            let mut shifted = theta.clone();
            for d in shifts {
                for (s, &t) in shifted.iter_mut().zip(&theta) {
                    *s = wrap_pi(t + d);
                }
                best = best.min(spread_rad(&shifted, &w));
            }
            best
        }
    };
    Ok(spread.to_degrees())
}

/// Channel parameters of one snapshot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnapshotStats<T: Scalar> {
    pub power: ReceivedPower<T>,
    pub ds_s: Option<T>,
    pub kf_db: Option<T>,
    pub asa_deg: Option<T>,
    pub asd_deg: Option<T>,
    pub esa_deg: Option<T>,
    pub esd_deg: Option<T>,
}

impl<T: Scalar> SnapshotStats<T> {
    pub fn from_mpcs(mpcs: &[Mpc<T>]) -> Self {
        let spread = |k| angular_spread(mpcs, k).ok();
        SnapshotStats {
            power: received_power(mpcs),
            ds_s: rms_delay_spread(mpcs).ok(),
            kf_db: rician_k(mpcs).ok(),
            asa_deg: spread(AngleKind::Asa),
            asd_deg: spread(AngleKind::Asd),
            esa_deg: spread(AngleKind::Esa),
            esd_deg: spread(AngleKind::Esd),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalFit<T: Scalar> {
    pub mu: T,
    pub sigma: T,
}

/// Moment fit of a normal distribution; sigma is the population standard deviation.
pub fn fit_normal<T: Scalar>(samples: &[T]) -> Result<NormalFit<T>> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: samples.len() });
    }
    let ones = vec![T::one(); samples.len()];
    let (mu, var) = weighted_moments(samples, &ones);
    Ok(NormalFit { mu, sigma: var.max(T::zero()).sqrt() })
}

/// Right-continuous empirical distribution function.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf<T: Scalar> {
    sorted: Vec<T>,
}

impl<T: Scalar> EmpiricalCdf<T> {
    pub fn new(samples: &[T]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        Ok(EmpiricalCdf { sorted })
    }

    /// Fraction of samples less than or equal to `x`.
    pub fn eval(&self, x: T) -> T {
        let count = self.sorted.partition_point(|&v| v <= x);
        T::from_usize(count).unwrap() / T::from_usize(self.sorted.len()).unwrap()
    }

    /// Distinct sample values with the CDF just after each step.
    pub fn steps(&self) -> Vec<(T, T)> {
        let n = T::from_usize(self.sorted.len()).unwrap();
        let mut out: Vec<(T, T)> = Vec::new();
        for (i, &v) in self.sorted.iter().enumerate() {
            let f = T::from_usize(i + 1).unwrap() / n;
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = f,
                _ => out.push((v, f)),
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

pub fn empirical_cdf<T: Scalar>(samples: &[T]) -> Result<EmpiricalCdf<T>> {
    EmpiricalCdf::new(samples)
}
