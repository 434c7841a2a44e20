//! Numerics for joint reality of quantum observables: dephasing maps,
//! irreality and joint irreality, discord-type correlations, closed-form
//! qubit and Werner oracles, and a seeded Monte Carlo harness.
//!
//! All entropies are in bits.

pub mod channels;
pub mod classical;
pub mod closedform;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod qstate;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianOperator, Side, Spectrum, C64};
pub use measures::MeasureReport;
pub use qstate::{BellSign, BlochVector, DensityMatrix, Observable, RngStream};
