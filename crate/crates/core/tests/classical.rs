use std::f64::consts::PI;

use hhl_poisson::poisson::{build_matrix, solve_spectral, solve_thomas};
use hhl_poisson::{eigenpairs, PoissonProblem};
use proptest::prelude::*;

fn random_problem() -> impl Strategy<Value = PoissonProblem> {
    prop::sample::select(vec![2usize, 4, 8, 16]).prop_flat_map(|n_grid| {
        prop::collection::vec(-1.0f64..1.0, n_grid - 1)
            .prop_filter("nonzero input", |v| v.iter().any(|x| x.abs() > 1e-3))
            .prop_map(move |interior| PoissonProblem::from_interior(n_grid, &interior).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn solvers_agree_and_satisfy_the_system(problem in random_problem()) {
        let thomas = solve_thomas(&problem);
        let spectral = solve_spectral(&problem);
        for (a, b) in thomas.iter().zip(&spectral) {
            prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        let matrix = build_matrix(problem.n_grid()).unwrap();
        let residual = matrix.mul_vec(&thomas);
        for (r, b) in residual.iter().zip(problem.interior()) {
            prop_assert!((r - b).abs() < 1e-10);
        }
    }
}

#[test]
fn eigenpairs_diagonalize_the_matrix() {
    for n_grid in [2, 4, 8, 16, 64] {
        let matrix = build_matrix(n_grid).unwrap();
        let spectral = eigenpairs(n_grid).unwrap();
        let dim = n_grid - 1;
        for j in 1..=dim {
            let u = spectral.mode(j);
            let au = matrix.mul_vec(&u);
            let scale = spectral.lambdas[j - 1];
            for (x, y) in au.iter().zip(&u) {
                assert!((x - scale * y).abs() < 1e-9 * scale);
            }
            for k in 1..=dim {
                let dot: f64 = u.iter().zip(spectral.mode(k)).map(|(a, b)| a * b).sum();
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn condition_number_grows_quadratically() {
    for n_grid in [8, 16, 32, 64, 128, 1024] {
        let kappa = eigenpairs(n_grid).unwrap().kappa;
        let ratio = kappa * PI * PI / (4.0 * (n_grid * n_grid) as f64);
        assert!((0.9..=1.1).contains(&ratio), "N={n_grid}: {ratio}");
    }
}
