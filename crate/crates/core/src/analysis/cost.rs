//! Static CNOT-equivalent resource estimate for the solver circuit.
//!
//! Every operation is mapped to a [`GateKind`] and priced by a [`CostRules`]
//! table. Fixed-price kinds are plain table entries; multi-controlled gates,
//! dense unitaries and lookup oracles use the standard closed forms unless a
//! size-specific entry such as `dense_3` overrides them.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hhl::{Mode, RegisterLayout};
use crate::sim::{qft_gates, GateOp, Mat2, Register, PAULI_X};

/// Average CNOT error reported for the target hardware.
pub const DEFAULT_CNOT_ERROR: f64 = 8.094e-2;
/// Rounded per-CNOT accuracy used for the back-of-envelope fidelity.
pub const REFERENCE_GATE_ACCURACY: f64 = 0.92;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    SingleQubit,
    Cnot,
    Swap,
    ControlledRotation,
    ControlledPhase,
    Toffoli,
    /// Single-qubit gate (or multiplexor) with `k` controls.
    MultiControlled(usize),
    /// Dense unitary on `w` qubits, controls included.
    Dense(usize),
    /// XOR lookup from `source` bits into `dest` bits.
    XorLookup { source: usize, dest: usize },
}

impl GateKind {
    pub fn name(&self) -> String {
        match self {
            Self::SingleQubit => "single_qubit".into(),
            Self::Cnot => "cnot".into(),
            Self::Swap => "swap".into(),
            Self::ControlledRotation => "controlled_rotation".into(),
            Self::ControlledPhase => "controlled_phase".into(),
            Self::Toffoli => "toffoli".into(),
            Self::MultiControlled(k) => format!("multi_controlled_{k}"),
            Self::Dense(w) => format!("dense_{w}"),
            Self::XorLookup { source, dest } => format!("xor_lookup_{source}_{dest}"),
        }
    }

    /// Kinds making up one operation; a QFT block expands to its gate-level lowering.
    pub fn of(op: &GateOp) -> Vec<GateKind> {
        match op {
            GateOp::Single {
                controls, matrix, ..
            } => vec![classify_single(controls.len(), matrix)],
            GateOp::Swap(..) => vec![Self::Swap],
            GateOp::Dense {
                targets, controls, ..
            } => vec![Self::Dense(targets.len() + controls.len())],
            GateOp::XorLookup { source, dest, .. } => vec![Self::XorLookup {
                source: source.width,
                dest: dest.width,
            }],
            GateOp::MultiplexedRy { select, .. } => vec![Self::MultiControlled(select.width)],
            GateOp::Qft { register, inverse } => qft_kinds(register.width, *inverse),
        }
    }
}

fn classify_single(controls: usize, m: &Mat2) -> GateKind {
    let is_x = m == &PAULI_X;
    let diagonal = m[1].norm() == 0.0 && m[2].norm() == 0.0;
    match controls {
        0 => GateKind::SingleQubit,
        1 if is_x => GateKind::Cnot,
        1 if diagonal => GateKind::ControlledPhase,
        1 => GateKind::ControlledRotation,
        2 if is_x => GateKind::Toffoli,
        k => GateKind::MultiControlled(k),
    }
}

/// Kinds of the lowered `w`-qubit QFT in gate order: `w` Hadamards,
/// `w(w-1)/2` controlled phases and `w/2` swaps.
pub fn qft_kinds(w: usize, inverse: bool) -> Vec<GateKind> {
    qft_gates(Register::new(0, w), inverse)
        .iter()
        .flat_map(GateKind::of)
        .collect()
}

/// Gate kinds of the full solver circuit for a layout, in circuit order.
pub fn circuit_outline(layout: &RegisterLayout) -> Vec<GateKind> {
    let (n, m, l) = (layout.n, layout.m, layout.l);
    let mut qpe = vec![GateKind::SingleQubit; m];
    qpe.extend(std::iter::repeat(GateKind::Dense(n + 1)).take(m));
    qpe.extend(qft_kinds(m, true));
    let mut kinds = qpe.clone();
    let lookup = GateKind::XorLookup { source: m, dest: l };
    match layout.mode {
        Mode::Compact => kinds.push(GateKind::MultiControlled(m)),
        Mode::Faithful => {
            kinds.push(lookup);
            kinds.extend(std::iter::repeat(GateKind::ControlledRotation).take(l));
            kinds.push(lookup);
        }
    }
    kinds.extend(qpe.into_iter().rev());
    kinds
}

/// CNOT-equivalent price list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CostRules {
    table: BTreeMap<String, u64>,
}

impl Default for CostRules {
    fn default() -> Self {
        let table = [
            ("single_qubit", 0),
            ("cnot", 1),
            ("swap", 3),
            ("controlled_rotation", 2),
            ("controlled_phase", 2),
            ("toffoli", 6),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Self { table }
    }
}

impl CostRules {
    /// Default table with overrides from `key = value` lines (TOML).
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let overrides: BTreeMap<String, u64> = toml::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("cost rules: {e}")))?;
        let mut rules = Self::default();
        for (key, value) in overrides {
            if !rules.table.contains_key(&key) && !is_sized_key(&key) {
                return Err(Error::InvalidConfig(format!("unknown gate kind {key:?}")));
            }
            rules.table.insert(key, value);
        }
        Ok(rules)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn table(&self) -> &BTreeMap<String, u64> {
        &self.table
    }

    pub fn cost(&self, kind: GateKind) -> u64 {
        if let Some(v) = self.table.get(&kind.name()) {
            return *v;
        }
        match kind {
            GateKind::MultiControlled(k) => pow_saturating(2, k),
            GateKind::Dense(w) => dense_default(w),
            GateKind::XorLookup { source, dest } => {
                (dest as u64).saturating_mul(self.cost(GateKind::MultiControlled(source)))
            }
            // fixed kinds are always present in the table
            _ => 0,
        }
    }
}

fn is_sized_key(key: &str) -> bool {
    let sized = |prefix: &str, parts: usize| {
        key.strip_prefix(prefix).is_some_and(|rest| {
            let nums: Vec<&str> = rest.split('_').collect();
            nums.len() == parts && nums.iter().all(|s| s.parse::<usize>().is_ok())
        })
    };
    sized("multi_controlled_", 1) || sized("dense_", 1) || sized("xor_lookup_", 2)
}

fn pow_saturating(base: u64, exp: usize) -> u64 {
    base.checked_pow(exp as u32).unwrap_or(u64::MAX)
}

/// `ceil((4^w - 3w - 1) / 4)`.
fn dense_default(w: usize) -> u64 {
    let four_w = pow_saturating(4, w);
    let num = four_w.saturating_sub(3 * w as u64 + 1);
    num.div_ceil(4)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    /// Number of gates of each kind.
    pub gate_counts: BTreeMap<String, u64>,
    /// CNOT-equivalents contributed by each kind.
    pub cnot_counts: BTreeMap<String, u64>,
    pub total_cnots: u64,
    /// Price of every kind that occurs, as applied.
    pub rules: BTreeMap<String, u64>,
    pub cnot_error_rate: f64,
    /// `log10((1 - cnot_error_rate)^c)`.
    pub fidelity_log10: f64,
    pub fidelity: f64,
    pub gate_accuracy: f64,
    /// `log10(gate_accuracy^c)`.
    pub accuracy_fidelity_log10: f64,
    pub accuracy_fidelity: f64,
}

impl CostReport {
    pub fn from_kinds(
        kinds: impl IntoIterator<Item = GateKind>,
        rules: &CostRules,
        cnot_error_rate: f64,
        gate_accuracy: f64,
    ) -> Self {
        let mut gate_counts = BTreeMap::new();
        let mut cnot_counts = BTreeMap::new();
        let mut applied = rules.table().clone();
        let mut total: u64 = 0;
        for kind in kinds {
            let name = kind.name();
            let price = rules.cost(kind);
            *gate_counts.entry(name.clone()).or_insert(0) += 1;
            *cnot_counts.entry(name.clone()).or_insert(0) += price;
            applied.insert(name, price);
            total = total.saturating_add(price);
        }
        Self::assemble(gate_counts, cnot_counts, applied, total, cnot_error_rate, gate_accuracy)
    }

    /// Report for a bare CNOT count, with no gate breakdown.
    pub fn from_total(total: u64, rules: &CostRules, cnot_error_rate: f64, gate_accuracy: f64) -> Self {
        Self::assemble(
            BTreeMap::new(),
            BTreeMap::new(),
            rules.table().clone(),
            total,
            cnot_error_rate,
            gate_accuracy,
        )
    }

    fn assemble(
        gate_counts: BTreeMap<String, u64>,
        cnot_counts: BTreeMap<String, u64>,
        rules: BTreeMap<String, u64>,
        total: u64,
        cnot_error_rate: f64,
        gate_accuracy: f64,
    ) -> Self {
        let fidelity_log10 = hardware_fidelity_log10(total, 1.0 - cnot_error_rate);
        let accuracy_fidelity_log10 = hardware_fidelity_log10(total, gate_accuracy);
        Self {
            gate_counts,
            cnot_counts,
            total_cnots: total,
            rules,
            cnot_error_rate,
            fidelity_log10,
            fidelity: 10f64.powf(fidelity_log10),
            gate_accuracy,
            accuracy_fidelity_log10,
            accuracy_fidelity: 10f64.powf(accuracy_fidelity_log10),
        }
    }
}

/// CNOT-equivalent estimate of the solver circuit for `layout`.
pub fn estimate_cost(layout: &RegisterLayout, rules: &CostRules) -> CostReport {
    CostReport::from_kinds(
        circuit_outline(layout),
        rules,
        DEFAULT_CNOT_ERROR,
        REFERENCE_GATE_ACCURACY,
    )
}

/// CNOT-equivalent total for an explicit gate list.
pub fn count_cnots(ops: &[GateOp], rules: &CostRules) -> u64 {
    ops.iter()
        .flat_map(GateKind::of)
        .map(|k| rules.cost(k))
        .fold(0u64, u64::saturating_add)
}

/// `log10(gate_accuracy^c)`, evaluated without forming the power.
pub fn hardware_fidelity_log10(cnots: u64, gate_accuracy: f64) -> f64 {
    if cnots == 0 {
        return 0.0;
    }
    cnots as f64 * gate_accuracy.log10()
}

/// `gate_accuracy^c`; underflows to 0 for very deep circuits, see
/// [`hardware_fidelity_log10`].
pub fn hardware_fidelity(cnots: u64, gate_accuracy: f64) -> f64 {
    10f64.powf(hardware_fidelity_log10(cnots, gate_accuracy))
}
