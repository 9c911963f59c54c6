//! Multipath components and per-snapshot sets of them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scene::{SurfaceId, WedgeId};

/// One propagation interaction along a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Interaction {
    Reflection(SurfaceId),
    Diffraction(WedgeId),
    Scattering { surface: SurfaceId, tile: usize },
    Transmission(SurfaceId),
}

impl fmt::Display for Interaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interaction::Reflection(s) => write!(f, "refl:{s}"),
            Interaction::Diffraction(w) => write!(f, "diff:{w}"),
            Interaction::Scattering { surface, tile } => write!(f, "scat:{surface}/{tile}"),
            Interaction::Transmission(s) => write!(f, "trans:{s}"),
        }
    }
}

impl FromStr for Interaction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad interaction token `{s}`"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let id = |a: &str| a.parse::<usize>().map_err(|_| bad());
        Ok(match kind {
            "refl" => Interaction::Reflection(id(arg)?),
            "diff" => Interaction::Diffraction(id(arg)?),
            "trans" => Interaction::Transmission(id(arg)?),
            "scat" => {
                let (surface, tile) = arg.split_once('/').ok_or_else(bad)?;
                Interaction::Scattering { surface: id(surface)?, tile: id(tile)? }
            }
            _ => return Err(bad()),
        })
    }
}

/// Ordered interactions from transmitter to receiver. Empty means the direct path.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain(pub Vec<Interaction>);

impl Chain {
    pub fn direct() -> Self {
        Chain(Vec::new())
    }

    pub fn is_direct(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("direct");
        }
        for (i, it) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{it}")?;
        }
        Ok(())
    }
}

impl FromStr for Chain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "direct" {
            return Ok(Chain::direct());
        }
        s.split(';').map(str::parse).collect::<Result<Vec<_>>>().map(Chain)
    }
}

/// One multipath component as seen by the receiver, antenna gains included.
#[derive(Clone, Debug, PartialEq)]
pub struct Mpc<T: Scalar> {
    pub power_dbm: T,
    pub delay_s: T,
    pub aod_az_deg: T,
    pub aod_el_deg: T,
    pub aoa_az_deg: T,
    pub aoa_el_deg: T,
    /// Carrier phase at the receiver, excluding any fixed satellite range.
    pub phase_rad: T,
    pub chain: Chain,
}

impl<T: Scalar> Mpc<T> {
    pub fn power_mw(&self) -> T {
        crate::scalar::db_to_linear(self.power_dbm)
    }

    pub fn is_direct(&self) -> bool {
        self.chain.is_direct()
    }
}

/// Descending power, ties broken by chain so the order is total and reproducible.
pub fn power_order<T: Scalar>(a: &Mpc<T>, b: &Mpc<T>) -> Ordering {
    b.power_dbm.partial_cmp(&a.power_dbm).unwrap_or(Ordering::Equal).then_with(|| a.chain.cmp(&b.chain))
}

/// All retained components of one snapshot, strongest first.
#[derive(Clone, Debug, PartialEq)]
pub struct MpcSet<T: Scalar> {
    pub snapshot_index: usize,
    pub mpcs: Vec<Mpc<T>>,
    pub los_blocked: bool,
}

impl<T: Scalar> MpcSet<T> {
    /// Sorts `mpcs` and drops everything more than `cutoff_db` below the strongest.
    pub fn new(snapshot_index: usize, mut mpcs: Vec<Mpc<T>>, los_blocked: bool, cutoff_db: T) -> Self {
        mpcs.retain(|m| m.power_dbm.is_finite());
        mpcs.sort_by(power_order);
        if let Some(top) = mpcs.first().map(|m| m.power_dbm) {
            let floor = top - cutoff_db;
            mpcs.retain(|m| m.power_dbm >= floor);
        }
        MpcSet { snapshot_index, mpcs, los_blocked }
    }

    pub fn len(&self) -> usize {
        self.mpcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mpcs.is_empty()
    }

    pub fn strongest(&self) -> Option<&Mpc<T>> {
        self.mpcs.first()
    }

    pub fn direct(&self) -> Option<&Mpc<T>> {
        self.mpcs.iter().find(|m| m.is_direct())
    }

    /// Same set with every power lowered by `db`.
    pub fn attenuated(&self, db: T) -> Self {
        let mut out = self.clone();
        for m in &mut out.mpcs {
            m.power_dbm -= db;
        }
        out
    }
}
