//! Dense statevector engine.
//!
//! Qubit 0 is the least-significant bit of the basis-state index everywhere:
//! in [`QuantumState`] amplitudes, in [`Register`] values and in the row/column
//! index of dense gate matrices (first target = least-significant bit).

mod gate;
mod qft;
mod state;

pub use gate::{
    dagger2, phase_matrix, ry_matrix, Circuit, GateOp, Mat2, Register, Unitary, C64, HADAMARD,
    IDENTITY, PAULI_X, PAULI_Y, PAULI_Z,
};
pub use qft::qft_gates;
pub use state::{init_state, real_amplitudes, QuantumState};
