//! Exit criteria for the solver. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hhl_poisson::analysis::spread;
use hhl_poisson::hhl::{prepare_state, qpe_forward};
use hhl_poisson::poisson::{
    eigenvector_rhs, flat_overlap_rhs, normalized, reference_rhs_3x3, reference_rhs_7x7,
    solve_spectral, solve_thomas,
};
use hhl_poisson::sim::{Unitary, C64};
use hhl_poisson::{
    eigenpairs, estimate_cost, hardware_fidelity_log10, layout_registers, noisy_trajectories,
    run_hhl, success_scaling, CostRules, GateOp, HhlConfig, NoiseModel, PoissonProblem,
    QuantumState, Register,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn three_by_three() -> Outcome {
    let problem = PoissonProblem::new(4, &reference_rhs_3x3()).unwrap();
    let (r, elapsed) = timed(|| run_hhl(&problem, &HhlConfig::compact(4, 4)).unwrap());
    // normalized Thomas solution, frozen
    let expected = [0.55299, 0.67407, 0.48974];
    let oracle = normalized(&solve_thomas(&problem));
    let pass = max_abs_diff(&oracle, &expected) < 1e-5
        && max_abs_diff(&r.solution, &expected) < 1e-4
        && r.state_fidelity > 0.999
        && r.errors.max_relative_error < 0.02
        && elapsed < Duration::from_secs(10);
    Outcome::new(
        pass,
        format!(
            "solution {:.5?}, fidelity {:.9}, max relative error {:.2e}, {:.2?}",
            r.solution, r.state_fidelity, r.errors.max_relative_error, elapsed
        ),
    )
}

fn seven_by_seven() -> Outcome {
    let problem = PoissonProblem::new(8, &reference_rhs_7x7()).unwrap();
    let (r, elapsed) = timed(|| run_hhl(&problem, &HhlConfig::compact(4, 4)).unwrap());
    let pass = r.state_fidelity > 0.99 && elapsed < Duration::from_secs(60);
    Outcome::new(
        pass,
        format!(
            "fidelity {:.9}, max relative error {:.2e}, {:.2?}",
            r.state_fidelity, r.errors.max_relative_error, elapsed
        ),
    )
}

fn amplification_reduces_error() -> Outcome {
    let problem = PoissonProblem::new(8, &reference_rhs_7x7()).unwrap();
    let err = |i| {
        run_hhl(&problem, &HhlConfig::compact(0, i))
            .unwrap()
            .errors
            .max_relative_error
    };
    let (e0, e4) = (err(0), err(4));
    Outcome::new(
        e4 <= 0.75 * e0,
        format!("max relative error {e0:.3e} at i=0, {e4:.3e} at i=4 (ratio {:.3})", e4 / e0),
    )
}

fn exact_branch() -> Outcome {
    let u2 = eigenvector_rhs(4, 2).unwrap();
    let problem = PoissonProblem::new(4, &u2).unwrap();
    let spectral = eigenpairs(4).unwrap();
    let mut worst_e: f64 = 0.0;
    let mut worst_state: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    for (f, i) in [(0, 0), (0, 2), (2, 1)] {
        let config = HhlConfig::compact(f, i);
        let layout = layout_registers(4, &config).unwrap();
        let mut state = prepare_state(&problem, &layout).unwrap();
        qpe_forward(&mut state, &layout, &spectral).unwrap();
        let dist = state.marginal_distribution(layout.reg_e).unwrap();
        worst_e = worst_e.max((dist[32usize << (f + i)] - 1.0).abs());

        let r = run_hhl(&problem, &config).unwrap();
        worst_state = worst_state.max(max_abs_diff(&r.solution, &u2[1..]));
        worst_p = worst_p.max((r.success_probability - 1.0 / 1024.0).abs());
    }
    Outcome::new(
        worst_e < 1e-10 && worst_state < 1e-9 && worst_p < 1e-9,
        format!(
            "register E deviation {worst_e:.1e}, state deviation {worst_state:.1e}, \
             success probability deviation {worst_p:.1e}"
        ),
    )
}

fn success_probability_scaling() -> Outcome {
    let (rows, elapsed) =
        timed(|| success_scaling(&[4, 8, 16], &HhlConfig::default(), flat_overlap_rhs).unwrap());
    let s = spread(&rows);
    let table: Vec<String> = rows
        .iter()
        .map(|r| format!("N={} P*kappa^2={:.4}", r.n_grid, r.p_kappa_sq))
        .collect();
    Outcome::new(
        s < 4.0 && elapsed < Duration::from_secs(300),
        format!("{}, spread {s:.2}, {elapsed:.2?}", table.join(", ")),
    )
}

fn amplification_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n_grid, rhs) in [(4, reference_rhs_3x3()), (8, reference_rhs_7x7())] {
        let problem = PoissonProblem::new(n_grid, &rhs).unwrap();
        for (f, i) in [(0, 1), (0, 4), (2, 2), (1, 3)] {
            let a = run_hhl(&problem, &HhlConfig::compact(f, i)).unwrap();
            let b = run_hhl(&problem, &HhlConfig::compact(f + i, 0)).unwrap();
            worst = worst
                .max(max_abs_diff(&a.solution, &b.solution))
                .max((a.success_probability - b.success_probability).abs());
        }
    }
    Outcome::new(worst < 1e-10, format!("largest difference {worst:.1e}"))
}

fn cost_model() -> Outcome {
    let layout = layout_registers(4, &HhlConfig::faithful(2, 2, 0)).unwrap();
    let report = estimate_cost(&layout, &CostRules::default());
    let log10 = hardware_fidelity_log10(5500, 0.92);
    let pass = (550..=55_000).contains(&report.total_cnots) && (-200.0..=-198.0).contains(&log10);
    Outcome::new(
        pass,
        format!(
            "{} CNOTs on {} qubits, log10(0.92^5500) = {log10:.3}",
            report.total_cnots, layout.total_qubits
        ),
    )
}

fn noise_artifact() -> Outcome {
    let problem = PoissonProblem::new(4, &reference_rhs_3x3()).unwrap();
    let config = HhlConfig::default();
    let noisy = noisy_trajectories(&problem, &config, NoiseModel::default(), 500, 2024).unwrap();
    let clean = noisy_trajectories(&problem, &config, NoiseModel::new(0.0).unwrap(), 50, 2024).unwrap();
    Outcome::new(
        noisy.leakage > 0.01 && clean.leakage == 0.0,
        format!(
            "P(|00>) = {:.4} at rate 8.094e-2, {:.1e} at rate 0",
            noisy.leakage, clean.leakage
        ),
    )
}

fn random_gate(rng: &mut ChaCha8Rng, num_qubits: usize) -> GateOp {
    let mut distinct = |k: usize| {
        let mut qs: Vec<usize> = (0..num_qubits).collect();
        for i in 0..k {
            let j = rng.gen_range(i..num_qubits);
            qs.swap(i, j);
        }
        qs.truncate(k);
        qs
    };
    let q = distinct(3);
    let angle = rng.gen_range(-PI..PI);
    match rng.gen_range(0..11) {
        0 => GateOp::h(q[0]),
        1 => GateOp::ry(q[0], angle),
        2 => GateOp::phase(q[0], angle),
        3 => GateOp::cnot(q[0], q[1]),
        4 => GateOp::cry(q[0], q[1], angle),
        5 => GateOp::cphase(q[0], q[1], angle),
        6 => GateOp::toffoli(q[0], q[1], q[2]),
        7 => GateOp::swap(q[0], q[1]),
        8 => GateOp::dense(vec![q[0], q[1]], vec![q[2]], Arc::new(random_unitary(rng, 4))).unwrap(),
        9 => {
            let select = Register::new(0, 2);
            let angles: Vec<f64> = (0..4).map(|_| rng.gen_range(-PI..PI)).collect();
            GateOp::multiplexed_ry(select, num_qubits - 1, angles.into()).unwrap()
        }
        _ => {
            let start = rng.gen_range(0..num_qubits - 1);
            let width = rng.gen_range(1..=num_qubits - start);
            GateOp::Qft {
                register: Register::new(start, width),
                inverse: rng.gen(),
            }
        }
    }
}

/// Gram-Schmidt on a random complex matrix.
fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> Unitary {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        for c in &cols {
            let dot: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(c).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let data = (0..dim)
        .flat_map(|r| cols.iter().map(move |c| c[r]).collect::<Vec<_>>())
        .collect();
    Unitary::new(dim, data).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, num_qubits: usize) -> QuantumState {
    let amps: Vec<C64> = (0..1usize << num_qubits)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    QuantumState::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn engine_properties() -> Outcome {
    const PER_PROPERTY: usize = 250;
    const QUBITS: usize = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0;

    let mut worst_norm: f64 = 0.0;
    for _ in 0..PER_PROPERTY {
        let mut state = random_state(&mut rng, QUBITS);
        for _ in 0..8 {
            state.apply(&random_gate(&mut rng, QUBITS)).unwrap();
        }
        worst_norm = worst_norm.max((state.norm_sqr() - 1.0).abs());
        cases += 1;
    }
    if worst_norm > 1e-12 {
        failures.push(format!("norm drift {worst_norm:.1e}"));
    }

    let mut worst_inverse: f64 = 0.0;
    for _ in 0..PER_PROPERTY {
        let initial = random_state(&mut rng, QUBITS);
        let gate = random_gate(&mut rng, QUBITS);
        let mut state = initial.clone();
        state.apply(&gate).unwrap();
        state.apply(&gate.inverse()).unwrap();
        worst_inverse = worst_inverse.max(state.max_distance(&initial));
        cases += 1;
    }
    if worst_inverse > 1e-10 {
        failures.push(format!("inverse round trip {worst_inverse:.1e}"));
    }

    let mut worst_lookup: f64 = 0.0;
    for _ in 0..PER_PROPERTY {
        let source = Register::new(0, 3);
        let dest = Register::new(3, 3);
        let table: Vec<u64> = (0..8).map(|_| rng.gen_range(0..8)).collect();
        let lookup = GateOp::xor_lookup(source, dest, table.into()).unwrap();
        let initial = random_state(&mut rng, QUBITS);
        let mut state = initial.clone();
        state.apply(&lookup).unwrap();
        state.apply(&lookup).unwrap();
        worst_lookup = worst_lookup.max(state.max_distance(&initial));
        cases += 1;
    }
    if worst_lookup != 0.0 {
        failures.push(format!("lookup involution {worst_lookup:.1e}"));
    }

    let mut worst_solver: f64 = 0.0;
    for _ in 0..PER_PROPERTY {
        let n_grid = [2, 4, 8, 16, 32][rng.gen_range(0..5)];
        let interior: Vec<f64> = (1..n_grid).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let problem = PoissonProblem::from_interior(n_grid, &interior).unwrap();
        worst_solver = worst_solver.max(max_abs_diff(&solve_thomas(&problem), &solve_spectral(&problem)));
        cases += 1;
    }
    if worst_solver > 1e-10 {
        failures.push(format!("solver disagreement {worst_solver:.1e}"));
    }

    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        failures.push("time limit".into());
    }
    Outcome::new(
        failures.is_empty() && cases == 1000,
        format!(
            "{cases} cases in {elapsed:.2?}; norm {worst_norm:.1e}, inverse {worst_inverse:.1e}, \
             lookup {worst_lookup:.1e}, solvers {worst_solver:.1e}{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failed: {}", failures.join(", "))
            }
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("3x3 reproduction", three_by_three),
        ("7x7 reproduction", seven_by_seven),
        ("amplification reduces error", amplification_reduces_error),
        ("exact eigenbranch", exact_branch),
        ("1/kappa^2 success scaling", success_probability_scaling),
        ("amplification/precision equivalence", amplification_equivalence),
        ("CNOT cost model", cost_model),
        ("noise populates |00>", noise_artifact),
        ("engine property suite", engine_properties),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {}: {name}: {}", k + 1, outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
