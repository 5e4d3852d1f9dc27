//! Monte Carlo Pauli-trajectory model of CNOT error.
//!
//! Each CNOT-equivalent of the circuit is a noise site on a pair of qubits.
//! After the operation that owns it, a site fires with probability
//! `cnot_error_rate` and applies one of the 15 non-identity two-qubit Paulis,
//! chosen uniformly. The QFT stages run at gate level, so their sites sit on
//! the actual control/target pairs. The multiplexed rotation contributes one
//! site per CNOT of its Gray-code lowering, between the toggled select qubit and
//! the ancilla. Dense evolution blocks contribute as many sites as their CNOT
//! price, each on a random pair of the block's qubits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cost::{CostRules, GateKind, DEFAULT_CNOT_ERROR};
use super::errors::total_variation;
use crate::error::{Error, Result};
use crate::hhl::{build_omega_table, hhl_circuit, layout_registers, prepare_state, HhlConfig, Mode, RegisterLayout};
use crate::poisson::{eigenpairs, PoissonProblem};
use crate::sim::{GateOp, QuantumState, PAULI_X, PAULI_Y, PAULI_Z};

/// Largest layout the trajectory simulation accepts.
pub const MAX_NOISY_QUBITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Probability that a CNOT-equivalent is followed by a random Pauli.
    pub cnot_error_rate: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            cnot_error_rate: DEFAULT_CNOT_ERROR,
        }
    }
}

impl NoiseModel {
    pub fn new(cnot_error_rate: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&cnot_error_rate) {
            return Err(Error::InvalidConfig(format!(
                "CNOT error rate must lie in [0, 1], got {cnot_error_rate}"
            )));
        }
        Ok(Self { cnot_error_rate })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyReport {
    /// Post-selected register-B distribution without noise.
    pub noiseless: Vec<f64>,
    /// Post-selected register-B distribution averaged over trajectories,
    /// each weighted by its success probability.
    pub noisy: Vec<f64>,
    /// Noisy probability of register-B basis state 0.
    pub leakage: f64,
    pub noiseless_leakage: f64,
    pub total_variation: f64,
    pub mean_success_probability: f64,
    pub noiseless_success_probability: f64,
    pub trajectories: usize,
    pub seed: u64,
    pub cnot_error_rate: f64,
}

#[derive(Debug, Clone)]
enum Site {
    Pair(usize, usize),
    AnyPairOf(Vec<usize>),
}

/// Noise sites attached to one operation.
fn sites_of(op: &GateOp, rules: &CostRules) -> Vec<Site> {
    let count: u64 = GateKind::of(op).into_iter().map(|k| rules.cost(k)).sum();
    if count == 0 {
        return Vec::new();
    }
    let count = count as usize;
    match op {
        GateOp::Single {
            target, controls, ..
        } if controls.len() == 1 => vec![Site::Pair(controls[0], *target); count],
        GateOp::Swap(a, b) => vec![Site::Pair(*a, *b); count],
        GateOp::MultiplexedRy { select, target, .. } => {
            let cycle = select.size();
            (0..count)
                .map(|e| {
                    // the e-th CNOT of the Gray-code multiplexor toggles on the
                    // bit that flips between codes e and e+1 (cyclically)
                    let step = e % cycle + 1;
                    let bit = if step == cycle {
                        select.width - 1
                    } else {
                        step.trailing_zeros() as usize
                    };
                    Site::Pair(select.qubit(bit), *target)
                })
                .collect()
        }
        _ => vec![Site::AnyPairOf(op.qubits()); count],
    }
}

fn pauli(index: u8) -> Option<crate::sim::Mat2> {
    match index {
        1 => Some(PAULI_X),
        2 => Some(PAULI_Y),
        3 => Some(PAULI_Z),
        _ => None,
    }
}

fn apply_random_pauli(state: &mut QuantumState, a: usize, b: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let r: u8 = rng.gen_range(1..16);
    for (q, p) in [(a, r & 3), (b, r >> 2)] {
        if let Some(m) = pauli(p) {
            state.apply(&GateOp::single(q, m)?)?;
        }
    }
    Ok(())
}

struct NoisyCircuit {
    layout: RegisterLayout,
    initial: QuantumState,
    ops: Vec<(GateOp, Vec<Site>)>,
}

impl NoisyCircuit {
    fn build(problem: &PoissonProblem, config: &HhlConfig, rules: &CostRules) -> Result<Self> {
        if config.mode != Mode::Compact {
            return Err(Error::InvalidConfig(
                "trajectory simulation requires compact mode".into(),
            ));
        }
        let layout = layout_registers(problem.n_grid(), config)?;
        if layout.total_qubits > MAX_NOISY_QUBITS {
            return Err(Error::BudgetExceeded {
                required: layout.total_qubits,
                budget: MAX_NOISY_QUBITS,
            });
        }
        let spectral = eigenpairs(problem.n_grid())?;
        let table = build_omega_table(&layout);
        let circuit = hhl_circuit(&layout, &spectral, &table, true)?;
        let ops = circuit
            .ops()
            .iter()
            .map(|op| (op.clone(), sites_of(op, rules)))
            .collect();
        Ok(Self {
            initial: prepare_state(problem, &layout)?,
            layout,
            ops,
        })
    }

    /// Unnormalized post-selected register-B distribution; sums to `P(ancilla = 1)`.
    fn run(&self, rate: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let mut state = self.initial.clone();
        for (op, sites) in &self.ops {
            state.apply(op)?;
            if rate == 0.0 {
                continue;
            }
            for site in sites {
                if rng.gen::<f64>() >= rate {
                    continue;
                }
                let (a, b) = match site {
                    Site::Pair(a, b) => (*a, *b),
                    Site::AnyPairOf(qs) => {
                        let i = rng.gen_range(0..qs.len());
                        let mut j = rng.gen_range(0..qs.len() - 1);
                        if j >= i {
                            j += 1;
                        }
                        (qs[i], qs[j])
                    }
                };
                apply_random_pauli(&mut state, a, b, rng)?;
            }
        }
        let ancilla = 1usize << self.layout.ancilla;
        let mut dist = vec![0.0; self.layout.reg_b.size()];
        for (i, a) in state.amplitudes().iter().enumerate() {
            if i & ancilla != 0 {
                dist[self.layout.reg_b.extract(i)] += a.norm_sqr();
            }
        }
        Ok(dist)
    }
}

fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn normalize_distribution(weighted: &[f64], min_probability: f64) -> Result<(Vec<f64>, f64)> {
    let total: f64 = weighted.iter().sum();
    if total <= min_probability {
        return Err(Error::ZeroProbability {
            qubit: usize::MAX,
            outcome: 1,
            probability: total,
        });
    }
    Ok((weighted.iter().map(|p| p / total).collect(), total))
}

/// Noisy post-selected register-B distribution with the default cost rules.
pub fn noisy_trajectories(
    problem: &PoissonProblem,
    config: &HhlConfig,
    noise: NoiseModel,
    trajectories: usize,
    seed: u64,
) -> Result<NoisyReport> {
    noisy_trajectories_with_rules(problem, config, noise, trajectories, seed, &CostRules::default())
}

pub fn noisy_trajectories_with_rules(
    problem: &PoissonProblem,
    config: &HhlConfig,
    noise: NoiseModel,
    trajectories: usize,
    seed: u64,
    rules: &CostRules,
) -> Result<NoisyReport> {
    if trajectories == 0 {
        return Err(Error::InvalidConfig("at least one trajectory is required".into()));
    }
    NoiseModel::new(noise.cnot_error_rate)?;
    let circuit = NoisyCircuit::build(problem, config, rules)?;
    let min_p = config.min_success_probability();

    let clean = circuit.run(0.0, &mut trajectory_rng(seed, u64::MAX))?;
    let (noiseless, noiseless_success) = normalize_distribution(&clean, min_p)?;

    let runs: Vec<Vec<f64>> = (0..trajectories as u64)
        .into_par_iter()
        .map(|t| circuit.run(noise.cnot_error_rate, &mut trajectory_rng(seed, t)))
        .collect::<Result<_>>()?;
    // summed in trajectory order so the result does not depend on scheduling
    let mut weighted = vec![0.0; noiseless.len()];
    for run in &runs {
        for (w, p) in weighted.iter_mut().zip(run) {
            *w += p;
        }
    }
    let (noisy, total) = normalize_distribution(&weighted, 0.0)?;
    Ok(NoisyReport {
        leakage: noisy[0],
        noiseless_leakage: noiseless[0],
        total_variation: total_variation(&noisy, &noiseless),
        noiseless,
        noisy,
        mean_success_probability: total / trajectories as f64,
        noiseless_success_probability: noiseless_success,
        trajectories,
        seed,
        cnot_error_rate: noise.cnot_error_rate,
    })
}
