use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use hhl_poisson::analysis::{
    circuit_outline, noisy_trajectories_with_rules, REFERENCE_GATE_ACCURACY,
};
use hhl_poisson::poisson::{
    eigenvector_rhs, flat_overlap_rhs, grid_exponent, normalized, reference_rhs_3x3,
    reference_rhs_7x7, solve_spectral, solve_thomas, uniform_rhs,
};
use hhl_poisson::{
    eigenpairs, estimate_cost, layout_registers, relative_errors, run_hhl, CostReport, CostRules,
    Error, HhlConfig, HhlResult, NoiseModel, PoissonProblem,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    CircuitArgs, ClassicalArgs, EstimateArgs, Format, NoisyArgs, OutputArgs, ProblemArgs, Profile,
    SolveArgs, SweepArgs, SweepParam,
};
use crate::report::{emit, problem_value, to_json_string, value, Report};
use crate::UsageError;

fn profile_rhs(profile: Profile, n_grid: usize) -> hhl_poisson::Result<Vec<f64>> {
    grid_exponent(n_grid)?;
    match profile {
        Profile::Reference => match n_grid {
            4 => Ok(reference_rhs_3x3()),
            8 => Ok(reference_rhs_7x7()),
            _ => uniform_rhs(n_grid),
        },
        Profile::Flat => flat_overlap_rhs(n_grid),
        Profile::Uniform => uniform_rhs(n_grid),
        Profile::Lowest => eigenvector_rhs(n_grid, 1),
    }
}

fn parse_inline(list: &str) -> hhl_poisson::Result<Vec<f64>> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidRhs(format!("{:?}: {e}", s.trim())))
        })
        .collect()
}

fn load_problem(args: &ProblemArgs) -> Result<PoissonProblem> {
    grid_exponent(args.n_grid)?;
    let problem = match &args.rhs {
        Some(source) => match source.strip_prefix('@') {
            Some(path) => PoissonProblem::from_file(args.n_grid, path)?,
            None => PoissonProblem::new(args.n_grid, &parse_inline(source)?)?,
        },
        None => PoissonProblem::new(args.n_grid, &profile_rhs(args.rhs_profile, args.n_grid)?)?,
    };
    Ok(problem)
}

fn config(args: &CircuitArgs) -> Result<HhlConfig> {
    if let Some(p) = args.min_success {
        if !(0.0..=1.0).contains(&p) {
            return Err(UsageError(format!("--min-success must lie in [0, 1], got {p}")).into());
        }
    }
    Ok(HhlConfig {
        frac_bits: args.frac_bits,
        amp_exponent: args.amp_exponent,
        reg_a_bits: args.reg_a_bits,
        mode: args.mode.into(),
        post_select_tolerance: args.min_success,
        ..HhlConfig::default()
    })
}

fn rules(path: &Option<PathBuf>) -> Result<CostRules> {
    Ok(match path {
        Some(p) => CostRules::from_file(p)?,
        None => CostRules::default(),
    })
}

fn json_only(output: &OutputArgs) -> Result<()> {
    match output.format {
        Some(Format::Csv) => Err(UsageError("CSV output is only available for sweep".into()).into()),
        _ => Ok(()),
    }
}

fn finish(report: Report, output: &OutputArgs, start: Instant) -> Result<()> {
    let report = Report {
        timing: output.timing.then(|| start.elapsed()),
        ..report
    };
    emit(output.out.as_deref(), &to_json_string(&report.to_value())?)
}

fn result_value(r: &HhlResult) -> Value {
    json!({
        "solution": r.solution,
        "classical_reference": r.classical_reference,
        "success_probability": r.success_probability,
        "state_fidelity": r.state_fidelity,
        "register_b_distribution": r.register_b_distribution,
        "leakage": r.leakage,
        "uncompute_residual": r.uncompute_residual,
        "register_e_entropy": r.register_e_entropy,
    })
}

pub fn solve(args: &SolveArgs) -> Result<()> {
    let start = Instant::now();
    json_only(&args.output)?;
    let problem = load_problem(&args.problem)?;
    let spectral = eigenpairs(problem.n_grid())?;
    let rules = rules(&args.rules)?;
    let r = run_hhl(&problem, &config(&args.circuit)?)?;
    let report = Report {
        problem: problem_value(&problem, &spectral),
        layout: value(&r.layout)?,
        result: result_value(&r),
        errors: value(&r.errors)?,
        cost: value(&estimate_cost(&r.layout, &rules))?,
        timing: None,
    };
    finish(report, &args.output, start)
}

pub fn classical(args: &ClassicalArgs) -> Result<()> {
    let start = Instant::now();
    json_only(&args.output)?;
    let problem = load_problem(&args.problem)?;
    let spectral = eigenpairs(problem.n_grid())?;
    let thomas = solve_thomas(&problem);
    let expansion = solve_spectral(&problem);
    let max_diff = thomas
        .iter()
        .zip(&expansion)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let report = Report {
        problem: problem_value(&problem, &spectral),
        result: json!({
            "thomas": thomas,
            "spectral": expansion,
            "normalized": normalized(&thomas),
            "max_abs_difference": max_diff,
        }),
        errors: value(&relative_errors(&expansion, &thomas)?)?,
        ..Report::default()
    };
    finish(report, &args.output, start)
}

#[derive(Debug, Serialize)]
struct SweepRow {
    parameter: &'static str,
    value: usize,
    n_grid: usize,
    frac_bits: usize,
    amp_exponent: usize,
    total_qubits: Option<usize>,
    max_relative_error: Option<f64>,
    mean_relative_error: Option<f64>,
    state_fidelity: Option<f64>,
    success_probability: Option<f64>,
    status: String,
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let start = Instant::now();
    let base = config(&args.circuit)?;
    let (name, fixed) = match args.param {
        SweepParam::N => {
            if args.problem.rhs.is_some() {
                return Err(UsageError("--rhs cannot be combined with a sweep over N".into()).into());
            }
            ("n", None)
        }
        SweepParam::FracBits => ("frac-bits", Some(load_problem(&args.problem)?)),
        SweepParam::Amp => ("amp", Some(load_problem(&args.problem)?)),
    };

    let rows: Vec<SweepRow> = args
        .values
        .iter()
        .map(|&v| {
            let mut cfg = base.clone();
            let mut n_grid = args.problem.n_grid;
            match args.param {
                SweepParam::FracBits => cfg.frac_bits = v,
                SweepParam::Amp => cfg.amp_exponent = v,
                SweepParam::N => n_grid = v,
            }
            let run = || -> hhl_poisson::Result<HhlResult> {
                match &fixed {
                    Some(problem) => run_hhl(problem, &cfg),
                    None => {
                        let rhs = profile_rhs(args.problem.rhs_profile, n_grid)?;
                        run_hhl(&PoissonProblem::new(n_grid, &rhs)?, &cfg)
                    }
                }
            };
            let outcome = run();
            let ok = outcome.as_ref().ok();
            SweepRow {
                parameter: name,
                value: v,
                n_grid,
                frac_bits: cfg.frac_bits,
                amp_exponent: cfg.amp_exponent,
                total_qubits: ok.map(|r| r.layout.total_qubits),
                max_relative_error: ok.map(|r| r.errors.max_relative_error),
                mean_relative_error: ok.map(|r| r.errors.mean_relative_error),
                state_fidelity: ok.map(|r| r.state_fidelity),
                success_probability: ok.map(|r| r.success_probability),
                status: match &outcome {
                    Ok(_) => "ok".into(),
                    Err(e) => e.to_string(),
                },
            }
        })
        .collect();

    match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                writer.serialize(row)?;
            }
            let bytes = writer.into_inner().context("flushing CSV")?;
            emit(args.output.out.as_deref(), &String::from_utf8(bytes)?)
        }
        Format::Json => {
            let problem = match &fixed {
                Some(p) => problem_value(p, &eigenpairs(p.n_grid())?),
                None => Value::Null,
            };
            let report = Report {
                problem,
                result: json!({ "parameter": name, "rows": value(&rows)? }),
                ..Report::default()
            };
            finish(report, &args.output, start)
        }
    }
}

pub fn estimate(args: &EstimateArgs) -> Result<()> {
    let start = Instant::now();
    json_only(&args.output)?;
    for (flag, v) in [("--cnot-error", args.cnot_error), ("--accuracy", args.accuracy)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(UsageError(format!("{flag} must lie in [0, 1], got {v}")).into());
        }
    }
    let rules = rules(&args.rules)?;
    let n_grid = args.problem.n_grid;
    grid_exponent(n_grid)?;

    let (layout, cost) = if args.empty || args.cnots.is_some() {
        let total = args.cnots.unwrap_or(0);
        (Value::Null, CostReport::from_total(total, &rules, args.cnot_error, args.accuracy))
    } else {
        let layout = layout_registers(n_grid, &config(&args.circuit)?)?;
        let cost = CostReport::from_kinds(circuit_outline(&layout), &rules, args.cnot_error, args.accuracy);
        (value(&layout)?, cost)
    };
    let report = Report {
        problem: json!({ "n_grid": n_grid, "kappa": eigenpairs(n_grid)?.kappa }),
        layout,
        cost: value(&cost)?,
        ..Report::default()
    };
    finish(report, &args.output, start)
}

pub fn noisy(args: &NoisyArgs) -> Result<()> {
    let start = Instant::now();
    json_only(&args.output)?;
    let problem = load_problem(&args.problem)?;
    let spectral = eigenpairs(problem.n_grid())?;
    let cfg = config(&args.circuit)?;
    let rules = rules(&args.rules)?;
    let noise = NoiseModel::new(args.cnot_error)?;
    let outcome = noisy_trajectories_with_rules(&problem, &cfg, noise, args.trajectories, args.seed, &rules)?;
    let layout = layout_registers(problem.n_grid(), &cfg)?;
    let cost = CostReport::from_kinds(
        circuit_outline(&layout),
        &rules,
        args.cnot_error,
        REFERENCE_GATE_ACCURACY,
    );
    let report = Report {
        problem: problem_value(&problem, &spectral),
        layout: value(&layout)?,
        result: value(&outcome)?,
        errors: json!({
            "leakage": outcome.leakage,
            "total_variation": outcome.total_variation,
        }),
        cost: value(&cost)?,
        timing: None,
    };
    finish(report, &args.output, start)
}
