//! One-dimensional Dirichlet Poisson problem on the unit interval.
//!
//! The second derivative is discretized with central differences on `N + 1`
//! grid points, giving the `(N-1) x (N-1)` tridiagonal system
//! `A v = b` with `A = (1/h^2) tridiag(-1, 2, -1)` and `h = 1/N`.
//!
//! Two classical solvers live here. [`solve_thomas`] runs Gaussian elimination
//! specialised to the tridiagonal band and [`solve_spectral`] expands the input in
//! the closed-form sine eigenbasis. They share no code path and are used as
//! mutual oracles and as the reference for the quantum pipeline.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Returns `log2(n_grid)` if the grid count is a power of two no smaller than 2.
pub fn grid_exponent(n_grid: usize) -> Result<usize> {
    if n_grid < 2 || !n_grid.is_power_of_two() {
        return Err(Error::InvalidGridSize(n_grid));
    }
    Ok(n_grid.trailing_zeros() as usize)
}

/// The discretized problem together with its register-B encoding of `|b>`.
///
/// `rhs` has `N` entries indexed by the register-B basis state. Entry 0 is the
/// padding state outside the interior grid and is always zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonProblem {
    n_grid: usize,
    rhs: Vec<f64>,
    scale: f64,
}

impl PoissonProblem {
    /// Builds a problem from a full `N`-amplitude input, normalizing it.
    ///
    /// The pre-normalization Euclidean norm is kept in [`scale`](Self::scale).
    pub fn new(n_grid: usize, rhs: &[f64]) -> Result<Self> {
        grid_exponent(n_grid)?;
        if rhs.len() != n_grid {
            return Err(Error::InvalidRhs(format!(
                "expected {} amplitudes for N = {}, got {}",
                n_grid,
                n_grid,
                rhs.len()
            )));
        }
        if rhs[0] != 0.0 {
            return Err(Error::InvalidRhs(format!(
                "amplitude of basis state 0 must be exactly 0, got {}",
                rhs[0]
            )));
        }
        if let Some(bad) = rhs.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidRhs(format!("non-finite amplitude {bad}")));
        }
        let scale = rhs.iter().map(|x| x * x).sum::<f64>().sqrt();
        if scale == 0.0 {
            return Err(Error::InvalidRhs("right-hand side is identically zero".into()));
        }
        let rhs = rhs.iter().map(|x| x / scale).collect();
        Ok(Self { n_grid, rhs, scale })
    }

    /// Builds a problem from the `N - 1` interior values, prepending the zero pad.
    pub fn from_interior(n_grid: usize, interior: &[f64]) -> Result<Self> {
        let mut rhs = Vec::with_capacity(interior.len() + 1);
        rhs.push(0.0);
        rhs.extend_from_slice(interior);
        Self::new(n_grid, &rhs)
    }

    /// Reads a problem from a text file with one amplitude per line.
    pub fn from_file(n_grid: usize, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidRhs(format!("cannot read {}: {e}", path.display())))?;
        Self::new(n_grid, &parse_rhs_text(&text)?)
    }

    /// Grid count `N`.
    pub fn n_grid(&self) -> usize {
        self.n_grid
    }

    /// Register-B width `n = log2 N`.
    pub fn n_qubits(&self) -> usize {
        self.n_grid.trailing_zeros() as usize
    }

    /// Mesh width `h = 1/N`.
    pub fn mesh_width(&self) -> f64 {
        1.0 / self.n_grid as f64
    }

    /// Normalized amplitudes, including the zero at index 0.
    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// The `N - 1` interior entries of the normalized input.
    pub fn interior(&self) -> &[f64] {
        &self.rhs[1..]
    }

    /// Euclidean norm of the input before normalization.
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// Parses the rhs file format: one real per line, blank lines ignored.
pub fn parse_rhs_text(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidRhs(format!("line {}: {e}: {:?}", i + 1, l.trim())))
        })
        .collect()
}

/// `(1/h^2) tridiag(-1, 2, -1)` of dimension `N - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalMatrix {
    pub dim: usize,
    pub diagonal: f64,
    pub off_diagonal: f64,
}

impl TridiagonalMatrix {
    /// `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| {
                let mut acc = self.diagonal * x[i];
                if i > 0 {
                    acc += self.off_diagonal * x[i - 1];
                }
                if i + 1 < self.dim {
                    acc += self.off_diagonal * x[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| match i.abs_diff(j) {
                        0 => self.diagonal,
                        1 => self.off_diagonal,
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn build_matrix(n_grid: usize) -> Result<TridiagonalMatrix> {
    grid_exponent(n_grid)?;
    let inv_h2 = (n_grid * n_grid) as f64;
    Ok(TridiagonalMatrix {
        dim: n_grid - 1,
        diagonal: 2.0 * inv_h2,
        off_diagonal: -inv_h2,
    })
}

/// Closed-form spectrum of the discrete Laplacian.
///
/// `lambdas[j - 1]` and column `j - 1` of `eigenvectors` belong to mode `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub n_grid: usize,
    pub lambdas: Vec<f64>,
    /// Row-major `(N-1) x (N-1)`; `eigenvectors[k][j]` is component `k` of mode `j + 1`.
    pub eigenvectors: Vec<Vec<f64>>,
    pub kappa: f64,
}

impl SpectralData {
    /// Eigenvector of mode `j` (1-based) as a contiguous vector.
    pub fn mode(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.iter().map(|row| row[j - 1]).collect()
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }
}

/// `lambda_j = 4 N^2 sin^2(j pi / 2N)`, `u_j(k) = sqrt(2/N) sin(j pi k / N)`.
pub fn eigenpairs(n_grid: usize) -> Result<SpectralData> {
    grid_exponent(n_grid)?;
    let nf = n_grid as f64;
    let dim = n_grid - 1;
    let lambdas: Vec<f64> = (1..=dim)
        .map(|j| {
            let s = (j as f64 * PI / (2.0 * nf)).sin();
            4.0 * nf * nf * s * s
        })
        .collect();
    let norm = (2.0 / nf).sqrt();
    let eigenvectors = (1..=dim)
        .map(|k| {
            (1..=dim)
                .map(|j| norm * ((j * k) as f64 * PI / nf).sin())
                .collect()
        })
        .collect();
    let mut spectral = SpectralData {
        n_grid,
        lambdas,
        eigenvectors,
        kappa: 0.0,
    };
    spectral.kappa = condition_number(&spectral);
    Ok(spectral)
}

/// `lambda_max / lambda_min`.
pub fn condition_number(spectral: &SpectralData) -> f64 {
    let max = spectral.lambdas.iter().copied().fold(f64::MIN, f64::max);
    let min = spectral.lambdas.iter().copied().fold(f64::MAX, f64::min);
    max / min
}

/// Thomas elimination on an arbitrary interior right-hand side.
pub fn thomas(matrix: &TridiagonalMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = matrix.dim;
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let (a, d, c) = (matrix.off_diagonal, matrix.diagonal, matrix.off_diagonal);
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    c_prime[0] = c / d;
    d_prime[0] = b[0] / d;
    for i in 1..n {
        let denom = d - a * c_prime[i - 1];
        c_prime[i] = c / denom;
        d_prime[i] = (b[i] - a * d_prime[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d_prime[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d_prime[i] - c_prime[i] * x[i + 1];
    }
    Ok(x)
}

/// Solves `A v = b_interior` for the normalized input with the Thomas algorithm.
pub fn solve_thomas(problem: &PoissonProblem) -> Vec<f64> {
    let matrix = build_matrix(problem.n_grid()).expect("problem holds a valid grid size");
    thomas(&matrix, problem.interior()).expect("interior length matches matrix")
}

/// `v = sum_j (<u_j, b> / lambda_j) u_j` for an arbitrary interior right-hand side.
pub fn spectral_solve(spectral: &SpectralData, b: &[f64]) -> Result<Vec<f64>> {
    let dim = spectral.dim();
    if b.len() != dim {
        return Err(Error::LengthMismatch {
            expected: dim,
            found: b.len(),
        });
    }
    let mut v = vec![0.0; dim];
    for j in 1..=dim {
        let u = spectral.mode(j);
        let beta: f64 = u.iter().zip(b).map(|(x, y)| x * y).sum();
        let coeff = beta / spectral.lambdas[j - 1];
        for (vk, uk) in v.iter_mut().zip(&u) {
            *vk += coeff * uk;
        }
    }
    Ok(v)
}

/// Solves the normalized problem through the eigen-expansion.
pub fn solve_spectral(problem: &PoissonProblem) -> Vec<f64> {
    let spectral = eigenpairs(problem.n_grid()).expect("problem holds a valid grid size");
    spectral_solve(&spectral, problem.interior()).expect("interior length matches spectrum")
}

/// Euclidean normalization; returns the input unchanged if it is zero.
pub fn normalized(v: &[f64]) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / norm).collect()
}

/// The 3x3 input used in the reference experiments: `(0, 1/sqrt 2, 1/2, 1/2)`.
pub fn reference_rhs_3x3() -> Vec<f64> {
    vec![0.0, std::f64::consts::FRAC_1_SQRT_2, 0.5, 0.5]
}

/// The 7x7 input used in the reference experiments.
pub fn reference_rhs_7x7() -> Vec<f64> {
    vec![0.0, 0.25, 0.25, 0.25, 0.25, 0.5, 0.5, 0.5]
}

/// Input with equal overlap `1/sqrt(N-1)` on every eigenvector.
pub fn flat_overlap_rhs(n_grid: usize) -> Result<Vec<f64>> {
    let spectral = eigenpairs(n_grid)?;
    let dim = spectral.dim();
    let w = 1.0 / (dim as f64).sqrt();
    let mut rhs = vec![0.0; n_grid];
    for (k, row) in spectral.eigenvectors.iter().enumerate() {
        rhs[k + 1] = w * row.iter().sum::<f64>();
    }
    Ok(rhs)
}

/// Input equal to eigenvector `j` (1-based), padded with the leading zero.
pub fn eigenvector_rhs(n_grid: usize, j: usize) -> Result<Vec<f64>> {
    let spectral = eigenpairs(n_grid)?;
    if j == 0 || j > spectral.dim() {
        return Err(Error::InvalidRhs(format!(
            "mode {j} out of range 1..={}",
            spectral.dim()
        )));
    }
    let mut rhs = vec![0.0];
    rhs.extend(spectral.mode(j));
    Ok(rhs)
}

/// Constant interior input `1/sqrt(N-1)`.
pub fn uniform_rhs(n_grid: usize) -> Result<Vec<f64>> {
    grid_exponent(n_grid)?;
    let w = 1.0 / ((n_grid - 1) as f64).sqrt();
    let mut rhs = vec![w; n_grid];
    rhs[0] = 0.0;
    Ok(rhs)
}
