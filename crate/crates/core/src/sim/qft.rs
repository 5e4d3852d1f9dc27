use std::f64::consts::PI;

use super::gate::{GateOp, Register};

/// Gate-level lowering of [`GateOp::Qft`]: Hadamards, controlled phases and
/// the final bit-reversal swaps. `w(w-1)/2` controlled phases, `w/2` swaps.
pub fn qft_gates(register: Register, inverse: bool) -> Vec<GateOp> {
    let w = register.width;
    let mut ops = Vec::new();
    for j in (0..w).rev() {
        ops.push(GateOp::h(register.qubit(j)));
        for k in (0..j).rev() {
            let phi = PI / (1u64 << (j - k)) as f64;
            ops.push(GateOp::cphase(register.qubit(k), register.qubit(j), phi));
        }
    }
    for i in 0..w / 2 {
        ops.push(GateOp::swap(register.qubit(i), register.qubit(w - 1 - i)));
    }
    if inverse {
        ops = ops.iter().rev().map(GateOp::inverse).collect();
    }
    ops
}
