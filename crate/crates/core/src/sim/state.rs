use rustfft::{FftDirection, FftPlanner};

use super::gate::{GateOp, Mat2, Register, Unitary, C64};
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-10;
const ZERO: C64 = C64::new(0.0, 0.0);

/// Dense statevector. Qubit 0 is the least-significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl QuantumState {
    /// `|0...0>`.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![ZERO; 1usize << num_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1usize << num_qubits];
        amps[index] = C64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidGate(format!(
                "amplitude vector length {} is not a power of two",
                amps.len()
            )));
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            num_qubits: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest componentwise distance to another state of the same size.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        match op {
            GateOp::Single {
                target,
                controls,
                matrix,
            } => self.apply_single(*target, controls, matrix),
            GateOp::Swap(a, b) => self.apply_swap(*a, *b),
            GateOp::Dense {
                targets,
                controls,
                matrix,
            } => self.apply_dense(targets, controls, matrix),
            GateOp::XorLookup {
                source,
                dest,
                table,
            } => self.apply_xor_lookup(*source, *dest, table),
            GateOp::MultiplexedRy {
                select,
                target,
                angles,
            } => self.apply_multiplexed_ry(*select, *target, angles),
            GateOp::Qft { register, inverse } => self.apply_qft(*register, *inverse),
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, ops: impl IntoIterator<Item = &'a GateOp>) -> Result<()> {
        for op in ops {
            self.apply(op)?;
        }
        Ok(())
    }

    fn apply_single(&mut self, target: usize, controls: &[usize], m: &Mat2) {
        let tbit = 1usize << target;
        let cmask = mask_of(controls);
        for i in 0..self.amps.len() {
            if i & tbit != 0 || i & cmask != cmask {
                continue;
            }
            let j = i | tbit;
            let (a0, a1) = (self.amps[i], self.amps[j]);
            self.amps[i] = m[0] * a0 + m[1] * a1;
            self.amps[j] = m[2] * a0 + m[3] * a1;
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (abit, bbit) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & abit != 0 && i & bbit == 0 {
                self.amps.swap(i, i ^ abit ^ bbit);
            }
        }
    }

    fn apply_dense(&mut self, targets: &[usize], controls: &[usize], u: &Unitary) {
        let dim = u.dim();
        let tmask = mask_of(targets);
        let cmask = mask_of(controls);
        let offsets: Vec<usize> = (0..dim)
            .map(|s| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| s >> k & 1 == 1)
                    .map(|(_, &q)| 1usize << q)
                    .sum()
            })
            .collect();
        let mut buf = vec![ZERO; dim];
        for base in 0..self.amps.len() {
            if base & tmask != 0 || base & cmask != cmask {
                continue;
            }
            for (b, off) in buf.iter_mut().zip(&offsets) {
                *b = self.amps[base + off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let row = &u.data()[r * dim..(r + 1) * dim];
                self.amps[base + off] = row.iter().zip(&buf).map(|(x, y)| x * y).sum();
            }
        }
    }

    fn apply_xor_lookup(&mut self, source: Register, dest: Register, table: &[u64]) {
        // source bits are untouched, so the permutation is an involution
        for i in 0..self.amps.len() {
            let j = i ^ ((table[source.extract(i)] as usize) << dest.start);
            if j > i {
                self.amps.swap(i, j);
            }
        }
    }

    fn apply_multiplexed_ry(&mut self, select: Register, target: usize, angles: &[f64]) {
        let tbit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & tbit != 0 {
                continue;
            }
            let theta = angles[select.extract(i)];
            if theta == 0.0 {
                continue;
            }
            let (s, co) = (theta / 2.0).sin_cos();
            let j = i | tbit;
            let (a0, a1) = (self.amps[i], self.amps[j]);
            self.amps[i] = a0 * co - a1 * s;
            self.amps[j] = a0 * s + a1 * co;
        }
    }

    fn apply_qft(&mut self, register: Register, inverse: bool) {
        let size = register.size();
        // |x> -> sum_y e^{-2 pi i xy/M}|y> is the DFT in rustfft's forward convention.
        let direction = if inverse {
            FftDirection::Forward
        } else {
            FftDirection::Inverse
        };
        let fft = FftPlanner::new().plan_fft(size, direction);
        let scale = 1.0 / (size as f64).sqrt();
        let stride = 1usize << register.start;
        let rmask = register.mask();
        let mut buf = vec![ZERO; size];
        let mut scratch = vec![ZERO; fft.get_inplace_scratch_len()];
        for base in 0..self.amps.len() {
            if base & rmask != 0 {
                continue;
            }
            for (k, b) in buf.iter_mut().enumerate() {
                *b = self.amps[base + k * stride];
            }
            fft.process_with_scratch(&mut buf, &mut scratch);
            for (k, b) in buf.iter().enumerate() {
                self.amps[base + k * stride] = b * scale;
            }
        }
    }

    /// Probability of measuring `outcome` on `qubit`.
    pub fn probability(&self, qubit: usize, outcome: u8) -> f64 {
        let bit = 1usize << qubit;
        let want = if outcome == 0 { 0 } else { bit };
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit == want)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Conditions on `qubit = outcome`, returning the renormalized state and
    /// the outcome probability. Fails if the probability is zero.
    pub fn post_select(&self, qubit: usize, outcome: u8) -> Result<(Self, f64)> {
        self.post_select_min(qubit, outcome, 0.0)
    }

    /// As [`post_select`](Self::post_select) but fails when the probability is
    /// at or below `min_probability`.
    pub fn post_select_min(&self, qubit: usize, outcome: u8, min_probability: f64) -> Result<(Self, f64)> {
        self.clone().into_post_selected(qubit, outcome, min_probability)
    }

    /// In-place form of [`post_select_min`](Self::post_select_min).
    pub fn into_post_selected(mut self, qubit: usize, outcome: u8, min_probability: f64) -> Result<(Self, f64)> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        let p = self.probability(qubit, outcome);
        if p <= min_probability {
            return Err(Error::ZeroProbability {
                qubit,
                outcome,
                probability: p,
            });
        }
        let bit = 1usize << qubit;
        let want = if outcome == 0 { 0 } else { bit };
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a = if i & bit == want { *a * scale } else { ZERO };
        }
        Ok((self, p))
    }

    /// Outcome distribution of a register, tracing out everything else.
    pub fn marginal_distribution(&self, register: Register) -> Result<Vec<f64>> {
        if register.end() > self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: register.end() - 1,
                num_qubits: self.num_qubits,
            });
        }
        let mut probs = vec![0.0; register.size()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[register.extract(i)] += a.norm_sqr();
        }
        Ok(probs)
    }
}

fn mask_of(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, q| m | 1 << q)
}

/// Zero vector of `2^num_qubits` amplitudes, failing instead of aborting when
/// the allocation cannot be satisfied.
fn zeroed(num_qubits: usize) -> Result<Vec<C64>> {
    let too_large = Error::OutOfMemory { qubits: num_qubits };
    if num_qubits >= usize::BITS as usize - 5 {
        return Err(too_large);
    }
    let size = 1usize << num_qubits;
    let mut amps = Vec::new();
    amps.try_reserve_exact(size).map_err(|_| too_large)?;
    amps.resize(size, ZERO);
    Ok(amps)
}

/// Product state of per-register amplitude vectors; unassigned qubits are `|0>`.
pub fn init_state(num_qubits: usize, assignments: &[(Register, Vec<C64>)]) -> Result<QuantumState> {
    let mut used = 0usize;
    for (reg, amps) in assignments {
        if reg.end() > num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: reg.end() - 1,
                num_qubits,
            });
        }
        if used & reg.mask() != 0 {
            return Err(Error::DuplicateQubit(
                reg.qubits().find(|q| used >> q & 1 == 1).unwrap_or(reg.start),
            ));
        }
        used |= reg.mask();
        if amps.len() != reg.size() {
            return Err(Error::LengthMismatch {
                expected: reg.size(),
                found: amps.len(),
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
    }
    let mut amps = zeroed(num_qubits)?;
    for (i, a) in amps.iter_mut().enumerate() {
        if i & !used != 0 {
            continue;
        }
        *a = assignments
            .iter()
            .map(|(reg, v)| v[reg.extract(i)])
            .product();
    }
    Ok(QuantumState { num_qubits, amps })
}

/// Convenience for real-valued register assignments.
pub fn real_amplitudes(values: &[f64]) -> Vec<C64> {
    values.iter().map(|&x| C64::new(x, 0.0)).collect()
}
