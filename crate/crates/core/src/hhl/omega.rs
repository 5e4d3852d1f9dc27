use std::f64::consts::PI;

use super::layout::{FixedPointFormat, RegisterLayout};

/// Rotation coefficient `omega = arccot(sqrt(lambda^2 - 1)) / pi`, so that
/// `sin(pi omega) = 1 / lambda`. Zero for `lambda <= 1`.
pub fn omega_of(lambda_est: f64) -> f64 {
    if lambda_est <= 1.0 {
        return 0.0;
    }
    (1.0f64).atan2((lambda_est * lambda_est - 1.0).sqrt()) / PI
}

/// Precomputed angle oracle over every register-E value.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaTable {
    /// Register-A width the fixed-point entries are quantized to (0 if none).
    pub frac_width: usize,
    /// Real-valued coefficient per register-E value.
    pub omega: Vec<f64>,
    /// `round(omega * 2^l)` clamped to `[0, 2^(l-1)]`; empty when `frac_width == 0`.
    pub fixed: Vec<u64>,
}

impl OmegaTable {
    pub fn new(format: &FixedPointFormat, frac_width: usize) -> Self {
        let size = 1usize << format.width();
        let omega: Vec<f64> = (0..size).map(|y| omega_of(format.decode(y))).collect();
        let fixed = if frac_width == 0 {
            Vec::new()
        } else {
            let scale = (1u64 << frac_width) as f64;
            let max = 1u64 << (frac_width - 1);
            omega
                .iter()
                .map(|w| ((w * scale).round() as u64).min(max))
                .collect()
        };
        Self {
            frac_width,
            omega,
            fixed,
        }
    }

    /// All-zero table: the rotation stage becomes the identity.
    pub fn zeros(m: usize, frac_width: usize) -> Self {
        let size = 1usize << m;
        Self {
            frac_width,
            omega: vec![0.0; size],
            fixed: if frac_width == 0 { Vec::new() } else { vec![0; size] },
        }
    }

    /// Table whose real-valued coefficients are the quantized ones,
    /// `omega = fixed / 2^l`.
    pub fn quantized(&self) -> Self {
        let scale = (1u64 << self.frac_width) as f64;
        Self {
            frac_width: self.frac_width,
            omega: self.fixed.iter().map(|&v| v as f64 / scale).collect(),
            fixed: self.fixed.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// `Ry` angles `2 pi omega(y)` for the multiplexed rotation.
    pub fn angles(&self) -> Vec<f64> {
        self.omega.iter().map(|w| 2.0 * PI * w).collect()
    }
}

pub fn build_omega_table(layout: &RegisterLayout) -> OmegaTable {
    OmegaTable::new(&layout.format, layout.l)
}
