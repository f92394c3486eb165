//! Truncated-mode operator algebra and Lindblad time evolution.

pub mod eig;
pub mod hamiltonian;
pub mod lindblad;
pub mod operator;
pub mod space;

pub use hamiltonian::{real_envelope, Envelope, TimeDependentHamiltonian};
pub use lindblad::{evolve_lindblad, evolve_unitary, SolverOptions, Trajectory};
pub use operator::{
    expectation, expectation_real, partial_trace, state_fidelity, DensityMatrix, Operator,
    StateVector,
};
pub use space::HilbertSpace;
