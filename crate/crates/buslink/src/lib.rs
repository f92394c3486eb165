//! Pulse-level simulator and calibration toolkit for two superconducting
//! qubit modules linked by a lossy bus resonator.
//!
//! The crate is organized in layers:
//!
//! - [`quantum`]: truncated-mode operator algebra and a Lindblad integrator
//!   with time-dependent Hamiltonians.
//! - [`model`]: device parameters (frequencies, coherences, cross-Kerr) and
//!   construction of sideband / Raman Hamiltonians, collapse operators,
//!   pump-rate and Stark-shift models.
//! - [`tuneup`]: calibration routines — beam-splitter scheduling, pulse
//!   shaping, iterative Raman rate matching, gate-time optimization, and
//!   dual-rail pulse calibration.
//! - [`analysis`]: curve fits, readout correction, bootstrap statistics,
//!   and entanglement measures.
//! - [`protocols`]: named, reproducible experiment scenarios composed from
//!   the layers above.
//! - [`config`] / [`runner`]: the config-driven scenario runner behind the
//!   `buslink` CLI.

pub mod error;
pub mod model;
pub mod quantum;
pub mod tuneup;
pub mod units;

pub use error::{Error, Result};
