//! The HHL circuit for the discretized Poisson problem.
//!
//! Register B (`n` qubits) holds `|b>`, register E (`m = 2n + 2 + f + i`
//! qubits) receives the phase-estimated eigenvalue amplified by `2^(f+i)`,
//! register A (`l` qubits, faithful mode only) receives the precomputed
//! rotation coefficient, and a single ancilla is rotated so that its `|1>`
//! amplitude is `1 / lambda_est`. The angle table is evaluated on the
//! de-amplified estimate `y / 2^(f+i)`, so amplification only changes the
//! precision of the estimate and never the scale of the solution.

mod layout;
mod omega;
mod pipeline;

pub use layout::{layout_registers, FixedPointFormat, HhlConfig, Mode, RegisterLayout, DEFAULT_QUBIT_BUDGET};
pub use omega::{build_omega_table, omega_of, OmegaTable};
pub use pipeline::{
    base_time, controlled_rotation, embed_operator, evolution_power, hhl_circuit, prepare_state,
    qpe_forward, qpe_ops, rotation_ops, run_hhl, run_with_table, uncompute, uncompute_ops,
    HhlResult,
};
