//! Co-channel signal-to-interference analysis.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// SIR in dB. A missing interferer gives positive infinity, a missing signal negative infinity.
pub fn sir<T: Scalar>(p_signal_dbm: Option<T>, p_interference_dbm: Option<T>) -> T {
    let finite = |p: Option<T>| p.filter(|v| v.is_finite());
    match (finite(p_signal_dbm), finite(p_interference_dbm)) {
        (None, _) => T::neg_infinity(),
        (Some(_), None) => T::infinity(),
        (Some(s), Some(i)) => s - i,
    }
}

/// Per-snapshot SIR for one signal/interference pairing.
#[derive(Clone, Debug, PartialEq)]
pub struct SirSeries<T: Scalar> {
    pub signal_case: String,
    pub interference_case: String,
    pub p_signal_dbm: Vec<T>,
    pub p_interference_dbm: Vec<T>,
    pub sir_db: Vec<T>,
}

impl<T: Scalar> SirSeries<T> {
    pub fn len(&self) -> usize {
        self.sir_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sir_db.is_empty()
    }

    /// Finite SIR values; infinite sentinels are skipped.
    pub fn finite(&self) -> Vec<T> {
        self.sir_db.iter().copied().filter(|v| v.is_finite()).collect()
    }
}

/// Element-wise SIR of two runs of total received power.
/// Non-finite powers (no component received) are treated as absent.
pub fn sir_series<T: Scalar>(
    signal_case: &str,
    signal: &[T],
    interference_case: &str,
    interference: &[T],
) -> Result<SirSeries<T>> {
    if signal.len() != interference.len() {
        return Err(Error::LengthMismatch { left: signal.len(), right: interference.len() });
    }
    let sir_db = signal.iter().zip(interference).map(|(&s, &i)| sir(Some(s), Some(i))).collect();
    Ok(SirSeries {
        signal_case: signal_case.to_string(),
        interference_case: interference_case.to_string(),
        p_signal_dbm: signal.to_vec(),
        p_interference_dbm: interference.to_vec(),
        sir_db,
    })
}

/// Fraction of snapshots with SIR strictly above `threshold_db`.
/// Infinite sentinels are left out of both counts.
pub fn coverage_probability<T: Scalar>(series: &SirSeries<T>, threshold_db: T) -> Result<T> {
    let finite = series.finite();
    if finite.is_empty() {
        return Err(Error::EmptySet);
    }
    let skipped = series.len() - finite.len();
    if skipped > 0 {
        log::debug!("coverage: {skipped} infinite SIR values skipped");
    }
    let covered = finite.iter().filter(|&&v| v > threshold_db).count();
    Ok(T::from_usize(covered).unwrap() / T::from_usize(finite.len()).unwrap())
}

/// Rainy minus sunny SIR, per snapshot.
pub fn weather_delta<T: Scalar>(rainy: &SirSeries<T>, sunny: &SirSeries<T>) -> Result<Vec<T>> {
    if strip_weather(&rainy.signal_case) != strip_weather(&sunny.signal_case)
        || strip_weather(&rainy.interference_case) != strip_weather(&sunny.interference_case)
    {
        return Err(Error::InvalidArgument("weather delta needs the same signal/interference pairing".into()));
    }
    if rainy.len() != sunny.len() {
        return Err(Error::LengthMismatch { left: rainy.len(), right: sunny.len() });
    }
    Ok(rainy.sir_db.iter().zip(&sunny.sir_db).map(|(&r, &s)| r - s).collect())
}

fn strip_weather(case: &str) -> &str {
    case.split_once('-').map_or(case, |(link, _)| link)
}
