use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hhl::{run_hhl, HhlConfig};
use crate::poisson::{eigenpairs, PoissonProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n_grid: usize,
    pub kappa: f64,
    pub success_probability: f64,
    /// `P * kappa^2`; flat in `N` when `P` decays like `1 / kappa^2`.
    pub p_kappa_sq: f64,
}

/// Success probability against condition number over a list of grid sizes.
///
/// `rhs_for` supplies the full `N`-amplitude input for each grid size.
pub fn success_scaling<F>(n_list: &[usize], config: &HhlConfig, rhs_for: F) -> Result<Vec<ScalingRow>>
where
    F: Fn(usize) -> Result<Vec<f64>>,
{
    n_list
        .iter()
        .map(|&n_grid| {
            let kappa = eigenpairs(n_grid)?.kappa;
            let problem = PoissonProblem::new(n_grid, &rhs_for(n_grid)?)?;
            let p = run_hhl(&problem, config)?.success_probability;
            Ok(ScalingRow {
                n_grid,
                kappa,
                success_probability: p,
                p_kappa_sq: p * kappa * kappa,
            })
        })
        .collect()
}

/// `max / min` of the `P * kappa^2` column.
pub fn spread(rows: &[ScalingRow]) -> f64 {
    let max = rows.iter().map(|r| r.p_kappa_sq).fold(f64::MIN, f64::max);
    let min = rows.iter().map(|r| r.p_kappa_sq).fold(f64::MAX, f64::min);
    max / min
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::eigenvector_rhs;

    #[test]
    fn scalar_grid_is_exact() {
        let rows = success_scaling(&[2], &HhlConfig::compact(0, 0), |n| {
            Ok((0..n).map(|i| if i == 1 { 1.0 } else { 0.0 }).collect())
        })
        .unwrap();
        assert!((rows[0].success_probability - 1.0 / 64.0).abs() < 1e-12);
        assert_eq!(rows[0].kappa, 1.0);
    }

    #[test]
    fn lowest_mode_success_probability() {
        // sin^2(theta) = 1 / lambda_1^2 once QPE resolves lambda_1
        let rows = success_scaling(&[4], &HhlConfig::compact(6, 4), |n| eigenvector_rhs(n, 1)).unwrap();
        let lambda1 = 32.0 - 16.0 * 2f64.sqrt();
        let expect = 1.0 / (lambda1 * lambda1);
        assert!((expect - 0.011384).abs() < 1e-6);
        let rel = (rows[0].success_probability - expect).abs() / expect;
        assert!(rel < 1e-3, "P = {} vs {expect}", rows[0].success_probability);
    }
}
