use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::layout::{layout_registers, HhlConfig, Mode, RegisterLayout};
use super::omega::{build_omega_table, OmegaTable};
use crate::analysis::{relative_errors, ErrorReport};
use crate::error::{Error, Result};
use crate::poisson::{eigenpairs, grid_exponent, normalized, solve_thomas, PoissonProblem, SpectralData};
use crate::sim::{init_state, qft_gates, real_amplitudes, Circuit, GateOp, QuantumState, Unitary, C64};

/// The Laplacian lifted to the full `2^n`-dimensional register B: `A` on basis
/// states `1..N-1`, zero on basis state 0.
pub fn embed_operator(n_grid: usize) -> Result<Vec<Vec<f64>>> {
    let a = crate::poisson::build_matrix(n_grid)?.to_dense();
    let mut out = vec![vec![0.0; n_grid]; n_grid];
    for (i, row) in a.iter().enumerate() {
        out[i + 1][1..].copy_from_slice(row);
    }
    Ok(out)
}

/// Evolution time per unit power, `t0 = 2 pi / 2^(2n+2)`.
pub fn base_time(n: usize) -> f64 {
    2.0 * PI / (1u64 << (2 * n + 2)) as f64
}

/// `exp(i A_embedded t0 2^k)` built from the closed-form eigenbasis.
pub fn evolution_power(spectral: &SpectralData, power: usize) -> Result<Unitary> {
    let n_grid = spectral.n_grid;
    let n = grid_exponent(n_grid)?;
    let period = (1u64 << (2 * n + 2)) as f64;
    let scale = (1u64 << power) as f64;
    let mut data = vec![C64::new(0.0, 0.0); n_grid * n_grid];
    data[0] = C64::new(1.0, 0.0);
    for (j, &lambda) in spectral.lambdas.iter().enumerate() {
        // phase lambda * t0 * 2^k reduced modulo 2 pi before exponentiating
        let turns = (lambda * scale / period).rem_euclid(1.0);
        let phase = C64::from_polar(1.0, 2.0 * PI * turns);
        for r in 1..n_grid {
            let ur = spectral.eigenvectors[r - 1][j];
            for c in 1..n_grid {
                data[r * n_grid + c] += phase * (ur * spectral.eigenvectors[c - 1][j]);
            }
        }
    }
    Unitary::new(n_grid, data)
}

/// Hadamards on E, controlled `U^(2^k)` from qubit `k` of E onto B, inverse QFT on E.
pub fn qpe_ops(layout: &RegisterLayout, spectral: &SpectralData, lowered_qft: bool) -> Result<Vec<GateOp>> {
    let mut ops: Vec<GateOp> = layout.reg_e.qubits().map(GateOp::h).collect();
    let targets: Vec<usize> = layout.reg_b.qubits().collect();
    for k in 0..layout.m {
        let u = Arc::new(evolution_power(spectral, k)?);
        ops.push(GateOp::dense(targets.clone(), vec![layout.reg_e.qubit(k)], u)?);
    }
    if lowered_qft {
        ops.extend(qft_gates(layout.reg_e, true));
    } else {
        ops.push(GateOp::inverse_qft(layout.reg_e));
    }
    Ok(ops)
}

/// Angle oracle and ancilla rotation.
pub fn rotation_ops(layout: &RegisterLayout, table: &OmegaTable) -> Result<Vec<GateOp>> {
    match layout.mode {
        Mode::Compact => Ok(vec![GateOp::multiplexed_ry(
            layout.reg_e,
            layout.ancilla,
            Arc::from(table.angles()),
        )?]),
        Mode::Faithful => {
            let mut ops = vec![lookup_op(layout, table)?];
            for q in 0..layout.l {
                // register-A qubit q carries weight 2^(q - l) of omega
                let theta = 2.0 * PI * (q as f64 - layout.l as f64).exp2();
                ops.push(GateOp::cry(layout.reg_a.qubit(q), layout.ancilla, theta));
            }
            Ok(ops)
        }
    }
}

fn lookup_op(layout: &RegisterLayout, table: &OmegaTable) -> Result<GateOp> {
    GateOp::xor_lookup(layout.reg_e, layout.reg_a, Arc::from(table.fixed.as_slice()))
}

/// Clears register A with the same lookup, then runs phase estimation backwards.
pub fn uncompute_ops(
    layout: &RegisterLayout,
    table: &OmegaTable,
    spectral: &SpectralData,
    lowered_qft: bool,
) -> Result<Vec<GateOp>> {
    let mut ops = Vec::new();
    if layout.mode == Mode::Faithful {
        ops.push(lookup_op(layout, table)?);
    }
    let qpe = qpe_ops(layout, spectral, lowered_qft)?;
    ops.extend(qpe.iter().rev().map(GateOp::inverse));
    Ok(ops)
}

/// The whole circuit after state preparation.
pub fn hhl_circuit(
    layout: &RegisterLayout,
    spectral: &SpectralData,
    table: &OmegaTable,
    lowered_qft: bool,
) -> Result<Circuit> {
    let mut circuit = Circuit::new(layout.total_qubits);
    circuit.extend(qpe_ops(layout, spectral, lowered_qft)?)?;
    circuit.extend(rotation_ops(layout, table)?)?;
    circuit.extend(uncompute_ops(layout, table, spectral, lowered_qft)?)?;
    Ok(circuit)
}

/// `|b>` in register B, everything else `|0>`.
pub fn prepare_state(problem: &PoissonProblem, layout: &RegisterLayout) -> Result<QuantumState> {
    init_state(
        layout.total_qubits,
        &[(layout.reg_b, real_amplitudes(problem.rhs()))],
    )
}

pub fn qpe_forward(state: &mut QuantumState, layout: &RegisterLayout, spectral: &SpectralData) -> Result<()> {
    state.apply_all(&qpe_ops(layout, spectral, false)?)
}

pub fn controlled_rotation(state: &mut QuantumState, layout: &RegisterLayout, table: &OmegaTable) -> Result<()> {
    state.apply_all(&rotation_ops(layout, table)?)
}

pub fn uncompute(
    state: &mut QuantumState,
    layout: &RegisterLayout,
    table: &OmegaTable,
    spectral: &SpectralData,
) -> Result<()> {
    state.apply_all(&uncompute_ops(layout, table, spectral, false)?)
}

/// Outcome of one simulated solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HhlResult {
    /// Normalized interior amplitudes, basis states `1..N-1`, read from the
    /// `E = A = 0` component and sign-aligned to the classical reference.
    pub solution: Vec<f64>,
    pub success_probability: f64,
    /// Normalized Thomas solution.
    pub classical_reference: Vec<f64>,
    pub errors: ErrorReport,
    pub state_fidelity: f64,
    /// Post-selected register-B distribution over all `N` basis states.
    pub register_b_distribution: Vec<f64>,
    /// Post-selected probability of register-B basis state 0.
    pub leakage: f64,
    /// Post-selected population left outside `E = A = 0` after uncomputation.
    pub uncompute_residual: f64,
    /// Shannon entropy (bits) of the post-selected register-E marginal.
    pub register_e_entropy: f64,
    pub layout: RegisterLayout,
    pub elapsed_seconds: f64,
}

pub fn run_hhl(problem: &PoissonProblem, config: &HhlConfig) -> Result<HhlResult> {
    let layout = layout_registers(problem.n_grid(), config)?;
    let spectral = eigenpairs(problem.n_grid())?;
    let table = build_omega_table(&layout);
    run_with_table(problem, config, &layout, &spectral, &table)
}

/// [`run_hhl`] with an explicit angle table.
pub fn run_with_table(
    problem: &PoissonProblem,
    config: &HhlConfig,
    layout: &RegisterLayout,
    spectral: &SpectralData,
    table: &OmegaTable,
) -> Result<HhlResult> {
    let start = Instant::now();
    let mut state = prepare_state(problem, layout)?;
    qpe_forward(&mut state, layout, spectral)?;
    controlled_rotation(&mut state, layout, table)?;
    uncompute(&mut state, layout, table, spectral)?;
    let (post, success_probability) =
        state.into_post_selected(layout.ancilla, 1, config.min_success_probability())?;
    let reference = normalized(&solve_thomas(problem));
    let readout = read_solution(&post, layout, &reference)?;
    let errors = relative_errors(&readout.solution, &reference)?;
    Ok(HhlResult {
        state_fidelity: errors.state_fidelity,
        solution: readout.solution,
        success_probability,
        classical_reference: reference,
        errors,
        leakage: readout.distribution[0],
        register_b_distribution: readout.distribution,
        uncompute_residual: readout.residual,
        register_e_entropy: readout.e_entropy,
        layout: layout.clone(),
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

struct Readout {
    solution: Vec<f64>,
    distribution: Vec<f64>,
    residual: f64,
    e_entropy: f64,
}

/// The solution is the coherent component with registers E and A back in
/// `|0>`, after removing the global phase against `reference`. The full
/// register-B marginal, which also carries the uncomputation garbage, is kept
/// as a diagnostic.
fn read_solution(post: &QuantumState, layout: &RegisterLayout, reference: &[f64]) -> Result<Readout> {
    let n_grid = layout.n_grid();
    let distribution = post.marginal_distribution(layout.reg_b)?;
    let ancilla_bit = 1usize << layout.ancilla;
    let clean: Vec<C64> = (0..n_grid)
        .map(|b| post.amplitudes()[b | ancilla_bit])
        .collect();
    let residual = (1.0 - clean.iter().map(|a| a.norm_sqr()).sum::<f64>()).max(0.0);

    let overlap: C64 = clean[1..]
        .iter()
        .zip(reference)
        .map(|(a, r)| a * r)
        .sum();
    if overlap.norm() == 0.0 {
        return Err(Error::ZeroProbability {
            qubit: layout.reg_e.start,
            outcome: 0,
            probability: 1.0 - residual,
        });
    }
    let rotate = overlap.conj() / overlap.norm();
    let raw: Vec<f64> = clean[1..].iter().map(|a| (a * rotate).re).collect();
    let e_entropy = post
        .marginal_distribution(layout.reg_e)?
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    Ok(Readout {
        solution: normalized(&raw),
        distribution,
        residual,
        e_entropy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::eigenvector_rhs;

    #[test]
    fn embedding_blocks() {
        assert_eq!(embed_operator(2).unwrap(), vec![vec![0.0, 0.0], vec![0.0, 8.0]]);
        let e = embed_operator(4).unwrap();
        assert_eq!(e[0], vec![0.0; 4]);
        assert_eq!(e[1], vec![0.0, 32.0, -16.0, 0.0]);
        assert_eq!(e[3], vec![0.0, 0.0, -16.0, 32.0]);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(e[i][j], e[j][i]);
            }
        }
        // {e_0} U {0 + u_j} diagonalize the embedding with spectrum {0} U {lambda_j}
        let s = eigenpairs(4).unwrap();
        for j in 1..=3 {
            let mut v = vec![0.0];
            v.extend(s.mode(j));
            for (i, row) in e.iter().enumerate() {
                let av: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
                assert!((av - s.lambdas[j - 1] * v[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn evolution_matches_embedded_exponential() {
        // exp(i A t) via a truncated Taylor series on the embedded matrix
        let n_grid = 4;
        let a = embed_operator(n_grid).unwrap();
        let s = eigenpairs(n_grid).unwrap();
        let t = base_time(2);
        let mut term: Vec<Vec<C64>> = (0..n_grid)
            .map(|i| (0..n_grid).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        let mut sum = term.clone();
        for k in 1..80 {
            let mut next = vec![vec![C64::new(0.0, 0.0); n_grid]; n_grid];
            for i in 0..n_grid {
                for j in 0..n_grid {
                    for l in 0..n_grid {
                        next[i][j] += term[i][l] * a[l][j];
                    }
                    next[i][j] *= C64::new(0.0, t / k as f64);
                }
            }
            term = next;
            for i in 0..n_grid {
                for j in 0..n_grid {
                    sum[i][j] += term[i][j];
                }
            }
        }
        let u = evolution_power(&s, 0).unwrap();
        for i in 0..n_grid {
            for j in 0..n_grid {
                assert!((u.get(i, j) - sum[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_branch_qpe() {
        let problem = PoissonProblem::new(4, &eigenvector_rhs(4, 2).unwrap()).unwrap();
        let s = eigenpairs(4).unwrap();
        for (f, i, expect) in [(0, 0, 32usize), (0, 2, 128), (1, 1, 128)] {
            let layout = layout_registers(4, &HhlConfig::compact(f, i)).unwrap();
            let mut state = prepare_state(&problem, &layout).unwrap();
            qpe_forward(&mut state, &layout, &s).unwrap();
            let m = state.marginal_distribution(layout.reg_e).unwrap();
            assert!((m[expect] - 1.0).abs() < 1e-10, "f={f} i={i}: {}", m[expect]);
        }
    }

    #[test]
    fn dyadic_scalar_case() {
        let problem = PoissonProblem::new(2, &[0.0, 1.0]).unwrap();
        let s = eigenpairs(2).unwrap();
        for (f, i) in [(0, 0), (3, 0), (1, 2)] {
            let config = HhlConfig::faithful(f, i, 0);
            let layout = layout_registers(2, &config).unwrap();
            let mut state = prepare_state(&problem, &layout).unwrap();
            qpe_forward(&mut state, &layout, &s).unwrap();
            let m = state.marginal_distribution(layout.reg_e).unwrap();
            assert!((m[8 << (f + i)] - 1.0).abs() < 1e-10);
            let table = build_omega_table(&layout);
            controlled_rotation(&mut state, &layout, &table).unwrap();
            uncompute(&mut state, &layout, &table, &s).unwrap();
            let e = state.marginal_distribution(layout.reg_e).unwrap();
            let a = state.marginal_distribution(layout.reg_a).unwrap();
            assert!((e[0] - 1.0).abs() < 1e-10 && (a[0] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_rotation_is_identity() {
        let problem = PoissonProblem::new(4, &crate::poisson::reference_rhs_3x3()).unwrap();
        let s = eigenpairs(4).unwrap();
        for config in [HhlConfig::compact(1, 1), HhlConfig::faithful(0, 0, 0)] {
            let layout = layout_registers(4, &config).unwrap();
            let table = OmegaTable::zeros(layout.m, layout.l);
            let initial = prepare_state(&problem, &layout).unwrap();
            let mut state = initial.clone();
            state
                .apply_all(hhl_circuit(&layout, &s, &table, false).unwrap().ops())
                .unwrap();
            assert!(state.max_distance(&initial) < 1e-10);
            // post-selection of the untouched ancilla must fail explicitly
            assert!(run_with_table(&problem, &config, &layout, &s, &table).is_err());
        }
    }

    #[test]
    fn lowered_qft_circuit_agrees_with_block() {
        let problem = PoissonProblem::new(4, &crate::poisson::reference_rhs_3x3()).unwrap();
        let s = eigenpairs(4).unwrap();
        let layout = layout_registers(4, &HhlConfig::compact(1, 0)).unwrap();
        let table = build_omega_table(&layout);
        let mut a = prepare_state(&problem, &layout).unwrap();
        let mut b = a.clone();
        a.apply_all(hhl_circuit(&layout, &s, &table, false).unwrap().ops()).unwrap();
        b.apply_all(hhl_circuit(&layout, &s, &table, true).unwrap().ops()).unwrap();
        assert!(a.max_distance(&b) < 1e-12);
    }
}
