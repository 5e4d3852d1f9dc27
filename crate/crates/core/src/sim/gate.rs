use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Row-major 2x2 matrix `[m00, m01, m10, m11]`.
pub type Mat2 = [C64; 4];

const UNITARY_TOL: f64 = 1e-12;

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub const IDENTITY: Mat2 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
pub const PAULI_X: Mat2 = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
pub const PAULI_Y: Mat2 = [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)];
pub const PAULI_Z: Mat2 = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)];
pub const HADAMARD: Mat2 = [
    c(FRAC_1_SQRT_2, 0.0),
    c(FRAC_1_SQRT_2, 0.0),
    c(FRAC_1_SQRT_2, 0.0),
    c(-FRAC_1_SQRT_2, 0.0),
];

/// `Ry(theta)|0> = cos(theta/2)|0> + sin(theta/2)|1>`.
pub fn ry_matrix(theta: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    [c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
}

/// `diag(1, e^{i phi})`.
pub fn phase_matrix(phi: f64) -> Mat2 {
    [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), C64::from_polar(1.0, phi)]
}

pub fn dagger2(m: &Mat2) -> Mat2 {
    [m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()]
}

fn check_unitary2(m: &Mat2) -> Result<()> {
    let d = dagger2(m);
    let mut dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let v = d[2 * i] * m[j] + d[2 * i + 1] * m[2 + j];
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((v - target).norm());
        }
    }
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation: dev });
    }
    Ok(())
}

/// A dense square unitary, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    dim: usize,
    data: Vec<C64>,
}

impl Unitary {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        let u = Self { dim, data };
        let dev = u.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(u)
    }

    /// `max |(U^dagger U - I)_{ij}|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.data[k * n + i].conj() * self.data[k * n + j];
                }
                if i == j {
                    acc -= 1.0;
                }
                dev = dev.max(acc.norm());
            }
        }
        dev
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self { dim: n, data }
    }
}

/// Contiguous block of qubits; `start` holds the least-significant bit of the
/// register value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Register {
    pub start: usize,
    pub width: usize,
}

impl Register {
    pub const fn new(start: usize, width: usize) -> Self {
        Self { start, width }
    }

    pub fn end(&self) -> usize {
        self.start + self.width
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        self.start..self.end()
    }

    pub fn qubit(&self, k: usize) -> usize {
        debug_assert!(k < self.width);
        self.start + k
    }

    pub fn size(&self) -> usize {
        1usize << self.width
    }

    pub fn mask(&self) -> usize {
        (self.size() - 1) << self.start
    }

    /// Register value held in basis index `i`.
    pub fn extract(&self, i: usize) -> usize {
        (i >> self.start) & (self.size() - 1)
    }
}

/// One operation of a circuit.
///
/// Operations are validated against unitarity and table coverage when built
/// through the constructors; qubit indices are checked against the state when
/// applied.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    /// 2x2 unitary on `target`, acting only where every control qubit is `|1>`.
    Single {
        target: usize,
        controls: Vec<usize>,
        matrix: Mat2,
    },
    Swap(usize, usize),
    /// Dense unitary on `targets` (first target is the least-significant bit
    /// of the matrix index), acting only where every control is `|1>`.
    Dense {
        targets: Vec<usize>,
        controls: Vec<usize>,
        matrix: Arc<Unitary>,
    },
    /// `|y>_src |a>_dst -> |y>_src |a xor table[y]>_dst`.
    XorLookup {
        source: Register,
        dest: Register,
        table: Arc<[u64]>,
    },
    /// `Ry(angles[y])` on `target` for each value `y` of the select register.
    MultiplexedRy {
        select: Register,
        target: usize,
        angles: Arc<[f64]>,
    },
    /// Quantum Fourier transform on a register:
    /// forward `|x> -> 2^{-w/2} sum_y e^{+2 pi i xy / 2^w} |y>`, inverse with `e^{-...}`.
    Qft { register: Register, inverse: bool },
}

impl GateOp {
    pub fn single(target: usize, matrix: Mat2) -> Result<Self> {
        Self::controlled(vec![], target, matrix)
    }

    pub fn controlled(controls: Vec<usize>, target: usize, matrix: Mat2) -> Result<Self> {
        check_unitary2(&matrix)?;
        Ok(Self::Single {
            target,
            controls,
            matrix,
        })
    }

    fn fixed(controls: Vec<usize>, target: usize, matrix: Mat2) -> Self {
        Self::Single {
            target,
            controls,
            matrix,
        }
    }

    pub fn h(target: usize) -> Self {
        Self::fixed(vec![], target, HADAMARD)
    }

    pub fn x(target: usize) -> Self {
        Self::fixed(vec![], target, PAULI_X)
    }

    pub fn y(target: usize) -> Self {
        Self::fixed(vec![], target, PAULI_Y)
    }

    pub fn z(target: usize) -> Self {
        Self::fixed(vec![], target, PAULI_Z)
    }

    pub fn ry(target: usize, theta: f64) -> Self {
        Self::fixed(vec![], target, ry_matrix(theta))
    }

    pub fn phase(target: usize, phi: f64) -> Self {
        Self::fixed(vec![], target, phase_matrix(phi))
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::fixed(vec![control], target, PAULI_X)
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Self::fixed(vec![c1, c2], target, PAULI_X)
    }

    pub fn cry(control: usize, target: usize, theta: f64) -> Self {
        Self::fixed(vec![control], target, ry_matrix(theta))
    }

    pub fn cphase(control: usize, target: usize, phi: f64) -> Self {
        Self::fixed(vec![control], target, phase_matrix(phi))
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::Swap(a, b)
    }

    pub fn dense(targets: Vec<usize>, controls: Vec<usize>, matrix: Arc<Unitary>) -> Result<Self> {
        if matrix.dim() != 1usize << targets.len() {
            return Err(Error::InvalidGate(format!(
                "{}x{} matrix cannot act on {} qubits",
                matrix.dim(),
                matrix.dim(),
                targets.len()
            )));
        }
        Ok(Self::Dense {
            targets,
            controls,
            matrix,
        })
    }

    pub fn xor_lookup(source: Register, dest: Register, table: Arc<[u64]>) -> Result<Self> {
        if table.len() != source.size() {
            return Err(Error::InvalidGate(format!(
                "lookup table covers {} of {} source values",
                table.len(),
                source.size()
            )));
        }
        if let Some(v) = table.iter().find(|&&v| dest.width < 64 && v >> dest.width != 0) {
            return Err(Error::InvalidGate(format!(
                "table value {v} does not fit in {} destination bits",
                dest.width
            )));
        }
        Ok(Self::XorLookup {
            source,
            dest,
            table,
        })
    }

    pub fn multiplexed_ry(select: Register, target: usize, angles: Arc<[f64]>) -> Result<Self> {
        if angles.len() != select.size() {
            return Err(Error::InvalidGate(format!(
                "multiplexor has {} angles for {} select values",
                angles.len(),
                select.size()
            )));
        }
        Ok(Self::MultiplexedRy {
            select,
            target,
            angles,
        })
    }

    pub fn qft(register: Register) -> Self {
        Self::Qft {
            register,
            inverse: false,
        }
    }

    pub fn inverse_qft(register: Register) -> Self {
        Self::Qft {
            register,
            inverse: true,
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::Single {
                target,
                controls,
                matrix,
            } => Self::Single {
                target: *target,
                controls: controls.clone(),
                matrix: dagger2(matrix),
            },
            Self::Swap(..) | Self::XorLookup { .. } => self.clone(),
            Self::Dense {
                targets,
                controls,
                matrix,
            } => Self::Dense {
                targets: targets.clone(),
                controls: controls.clone(),
                matrix: Arc::new(matrix.dagger()),
            },
            Self::MultiplexedRy {
                select,
                target,
                angles,
            } => Self::MultiplexedRy {
                select: *select,
                target: *target,
                angles: angles.iter().map(|a| -a).collect(),
            },
            Self::Qft { register, inverse } => Self::Qft {
                register: *register,
                inverse: !inverse,
            },
        }
    }

    /// Every qubit the operation reads or writes.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Self::Single {
                target, controls, ..
            } => controls.iter().copied().chain([*target]).collect(),
            Self::Swap(a, b) => vec![*a, *b],
            Self::Dense {
                targets, controls, ..
            } => controls.iter().chain(targets).copied().collect(),
            Self::XorLookup { source, dest, .. } => source.qubits().chain(dest.qubits()).collect(),
            Self::MultiplexedRy { select, target, .. } => {
                select.qubits().chain([*target]).collect()
            }
            Self::Qft { register, .. } => register.qubits().collect(),
        }
    }

    /// Checks indices against a state size and that no qubit is used twice.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        let mut seen = 0u128;
        for &q in &qubits {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
            if seen & (1 << q) != 0 {
                return Err(Error::DuplicateQubit(q));
            }
            seen |= 1 << q;
        }
        Ok(())
    }
}

/// Ordered gate list over a fixed number of qubits.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            ops: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = GateOp>) -> Result<()> {
        for op in ops {
            self.push(op)?;
        }
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        self.extend(other.ops.iter().cloned())
    }

    /// Adjoint circuit: reversed order, each operation inverted.
    pub fn inverse(&self) -> Self {
        Self {
            num_qubits: self.num_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unitary() {
        let m = [c(1.0, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(GateOp::single(0, m), Err(Error::NotUnitary { .. })));
        let d = Unitary::new(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0 + 1e-9, 0.0)]);
        assert!(d.is_err());
        assert!(Unitary::new(2, vec![c(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn lookup_coverage() {
        let src = Register::new(0, 2);
        let dst = Register::new(2, 3);
        assert!(GateOp::xor_lookup(src, dst, Arc::from(vec![0u64; 3])).is_err());
        assert!(GateOp::xor_lookup(src, dst, Arc::from(vec![0u64, 1, 2, 8])).is_err());
        assert!(GateOp::xor_lookup(src, dst, Arc::from(vec![0u64, 1, 2, 7])).is_ok());
    }

    #[test]
    fn validate_indices() {
        assert!(GateOp::cnot(0, 3).validate(3).is_err());
        assert_eq!(GateOp::cnot(1, 1).validate(3), Err(Error::DuplicateQubit(1)));
        let mut c = Circuit::new(2);
        assert!(c.push(GateOp::h(2)).is_err());
        c.push(GateOp::h(1)).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn register_bits() {
        let r = Register::new(2, 3);
        assert_eq!(r.mask(), 0b11100);
        assert_eq!(r.extract(0b10110), 0b101);
        assert_eq!(r.qubits().collect::<Vec<_>>(), vec![2, 3, 4]);
    }
}
