//! Curve fitting, readout correction, bootstrap statistics, and
//! entanglement measures.

mod bootstrap;
mod entanglement;
pub mod levmar;
mod readout;
mod swap_fit;

pub use bootstrap::{bootstrap, BootstrapEstimate};
pub use entanglement::{bell_fidelity, concurrence, xx_correlator, XxCurve};
pub use levmar::{fit_curve, FitResult};
pub use readout::{
    correct_probabilities, correct_readout, sample_readout, ConfusionMatrix,
};
pub use swap_fit::{
    fit_gate_train, fit_swap_decay, loss_per_swap, swap_model_trace, GateTrainFit, SwapFit,
};
