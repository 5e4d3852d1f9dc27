use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poisson::grid_exponent;
use crate::sim::Register;

pub const DEFAULT_QUBIT_BUDGET: usize = 30;

/// How the controlled rotation is driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Angle written into register A by the lookup oracle, then one controlled
    /// `Ry` per register-A bit.
    Faithful,
    /// One `Ry` multiplexed directly on the register-E value.
    #[default]
    Compact,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "faithful" => Ok(Self::Faithful),
            "compact" => Ok(Self::Compact),
            other => Err(Error::InvalidConfig(format!(
                "unknown mode {other:?}, expected faithful or compact"
            ))),
        }
    }
}

/// Fixed-point reading of register E: value `y` stands for
/// `lambda_est = y / 2^(frac_bits + amp_exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointFormat {
    pub int_bits: usize,
    pub frac_bits: usize,
    pub amp_exponent: usize,
}

impl FixedPointFormat {
    pub fn width(&self) -> usize {
        self.int_bits + self.frac_bits + self.amp_exponent
    }

    /// Bits below the binary point, `f + i`.
    pub fn precision_bits(&self) -> usize {
        self.frac_bits + self.amp_exponent
    }

    pub fn scale(&self) -> f64 {
        (1u64 << self.precision_bits()) as f64
    }

    /// De-amplified eigenvalue estimate for register value `y`.
    pub fn decode(&self, y: usize) -> f64 {
        y as f64 / self.scale()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HhlConfig {
    pub frac_bits: usize,
    pub amp_exponent: usize,
    /// Requested register-A width; raised to `m` in faithful mode.
    pub reg_a_bits: usize,
    pub mode: Mode,
    /// Post-selection fails when `P(ancilla = 1)` is at or below this.
    pub post_select_tolerance: Option<f64>,
    pub qubit_budget: usize,
}

impl Default for HhlConfig {
    fn default() -> Self {
        Self {
            frac_bits: 2,
            amp_exponent: 2,
            reg_a_bits: 0,
            mode: Mode::Compact,
            post_select_tolerance: None,
            qubit_budget: DEFAULT_QUBIT_BUDGET,
        }
    }
}

impl HhlConfig {
    pub fn compact(frac_bits: usize, amp_exponent: usize) -> Self {
        Self {
            frac_bits,
            amp_exponent,
            ..Self::default()
        }
    }

    pub fn faithful(frac_bits: usize, amp_exponent: usize, reg_a_bits: usize) -> Self {
        Self {
            frac_bits,
            amp_exponent,
            reg_a_bits,
            mode: Mode::Faithful,
            ..Self::default()
        }
    }

    pub fn min_success_probability(&self) -> f64 {
        self.post_select_tolerance.unwrap_or(1e-14)
    }
}

/// Qubit allocation. Register B occupies the lowest qubits, then E, then A,
/// and the ancilla is the highest qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub mode: Mode,
    pub format: FixedPointFormat,
    pub reg_b: Register,
    pub reg_e: Register,
    pub reg_a: Register,
    pub ancilla: usize,
    pub total_qubits: usize,
}

impl RegisterLayout {
    /// Grid count `N = 2^n`.
    pub fn n_grid(&self) -> usize {
        1 << self.n
    }
}

/// Sizes the registers: `n = log2 N`, `m = 2n + 2 + f + i`, `l = max(l, m)`
/// in faithful mode and 0 in compact mode.
pub fn layout_registers(n_grid: usize, config: &HhlConfig) -> Result<RegisterLayout> {
    let n = grid_exponent(n_grid)?;
    let format = FixedPointFormat {
        int_bits: 2 * n + 2,
        frac_bits: config.frac_bits,
        amp_exponent: config.amp_exponent,
    };
    let m = format.width();
    let l = match config.mode {
        Mode::Faithful => config.reg_a_bits.max(m),
        Mode::Compact => 0,
    };
    let total_qubits = n + m + l + 1;
    if total_qubits > config.qubit_budget {
        return Err(Error::BudgetExceeded {
            required: total_qubits,
            budget: config.qubit_budget,
        });
    }
    Ok(RegisterLayout {
        n,
        m,
        l,
        mode: config.mode,
        format,
        reg_b: Register::new(0, n),
        reg_e: Register::new(n, m),
        reg_a: Register::new(n + m, l),
        ancilla: n + m + l,
        total_qubits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizing_examples() {
        let l = layout_registers(4, &HhlConfig::compact(0, 0)).unwrap();
        assert_eq!((l.n, l.m, l.total_qubits), (2, 6, 9));

        let l = layout_registers(4, &HhlConfig::faithful(2, 2, 0)).unwrap();
        assert_eq!((l.n, l.m, l.l), (2, 10, 10));
        assert_eq!(l.total_qubits, 2 + 10 + 10 + 1);

        let l = layout_registers(8, &HhlConfig::compact(0, 4)).unwrap();
        assert_eq!((l.n, l.m, l.total_qubits), (3, 12, 16));

        let l = layout_registers(4, &HhlConfig::faithful(0, 0, 9)).unwrap();
        assert_eq!(l.l, 9);
    }

    #[test]
    fn registers_are_contiguous_and_disjoint() {
        let l = layout_registers(8, &HhlConfig::faithful(1, 1, 0)).unwrap();
        assert_eq!(l.reg_b.end(), l.reg_e.start);
        assert_eq!(l.reg_e.end(), l.reg_a.start);
        assert_eq!(l.reg_a.end(), l.ancilla);
        assert_eq!(l.ancilla + 1, l.total_qubits);
    }

    #[test]
    fn budget_and_grid_validation() {
        let err = layout_registers(16, &HhlConfig::faithful(4, 4, 0)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 30, .. }));
        assert!(matches!(
            layout_registers(6, &HhlConfig::default()),
            Err(Error::InvalidGridSize(6))
        ));
    }

    #[test]
    fn eigenvalues_fit_integer_part() {
        for n_grid in [2usize, 4, 8, 16, 32] {
            let layout = layout_registers(n_grid, &HhlConfig::compact(0, 0)).unwrap();
            let max = crate::poisson::eigenpairs(n_grid)
                .unwrap()
                .lambdas
                .into_iter()
                .fold(0.0, f64::max);
            assert!(max < (1u64 << layout.format.int_bits) as f64);
        }
    }
}
