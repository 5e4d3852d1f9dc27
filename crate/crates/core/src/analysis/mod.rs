//! Accuracy, scaling, cost and noise analyses built on the solver.

mod cost;
mod errors;
mod noise;
mod scaling;

pub use cost::{
    circuit_outline, count_cnots, estimate_cost, hardware_fidelity, hardware_fidelity_log10,
    qft_kinds, CostReport, CostRules, GateKind, DEFAULT_CNOT_ERROR, REFERENCE_GATE_ACCURACY,
};
pub use errors::{relative_errors, total_variation, ErrorReport};
pub use noise::{noisy_trajectories, noisy_trajectories_with_rules, NoiseModel, NoisyReport, MAX_NOISY_QUBITS};
pub use scaling::{spread, success_scaling, ScalingRow};
