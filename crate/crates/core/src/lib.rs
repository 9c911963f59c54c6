//! Site-specific ray-tracing channel simulator for a satellite-terrestrial
//! high-speed-railway scenario at 22.6 GHz.

// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod antenna;
pub mod attenuation;
pub mod campaign;
pub mod chanstats;
pub mod error;
pub mod geometry;
pub mod interference;
pub mod mpc;
pub mod raytracer;
pub mod scalar;
pub mod scene;

pub use error::{Error, Result};

pub type Mpc64 = mpc::Mpc<f64>;
pub type Mpc32 = mpc::Mpc<f32>;
pub type MpcSet64 = mpc::MpcSet<f64>;
pub type MpcSet32 = mpc::MpcSet<f32>;
pub type SnapshotStats64 = chanstats::SnapshotStats<f64>;
pub type SirSeries64 = interference::SirSeries<f64>;
pub type AttenuationBudget64 = attenuation::AttenuationBudget<f64>;
pub type CaseRun = campaign::CaseRun;
