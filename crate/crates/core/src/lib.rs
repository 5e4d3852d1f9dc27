//! Exact simulation of an HHL-style quantum solver for the one-dimensional
//! Dirichlet Poisson equation.
//!
//! The crate is split into four layers:
//!
//! * [`poisson`]: the finite-difference system, its closed-form spectrum and two
//!   independent classical solvers used as reference oracles.
//! * [`sim`]: a deterministic dense statevector engine.
//! * [`hhl`]: register layout, phase estimation with eigenvalue amplification,
//!   the precomputed angle oracle, controlled rotation, uncomputation and
//!   post-selection.
//! * [`analysis`]: error metrics, success-probability scaling, CNOT cost
//!   estimation and Monte Carlo Pauli-trajectory noise.

pub mod analysis;
pub mod error;
pub mod hhl;
pub mod poisson;
pub mod sim;

pub use analysis::{
    estimate_cost, hardware_fidelity, hardware_fidelity_log10, noisy_trajectories,
    relative_errors, success_scaling, CostReport, CostRules, ErrorReport, NoiseModel,
    NoisyReport, ScalingRow,
};
pub use error::{Error, Result};
pub use hhl::{
    layout_registers, run_hhl, FixedPointFormat, HhlConfig, HhlResult, Mode, OmegaTable,
    RegisterLayout,
};
pub use poisson::{eigenpairs, PoissonProblem, SpectralData, TridiagonalMatrix};
pub use sim::{Circuit, GateOp, QuantumState, Register};
