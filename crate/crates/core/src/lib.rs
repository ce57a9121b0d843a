//! Simulation of EPR-steering and CHSH tests under honest play and under
//! Maxwell-demon cheating, with Landauer accounting of the demon's memory
//! erasures and a heat-anomaly detector for the trusted lab.

pub mod adversary;
pub mod bounds;
pub mod error;
pub mod harness;
pub mod protocol;
pub mod qlin;
pub mod rng;
pub mod thermo;

pub use error::{Error, Result};
