//! Helpers for the CLI and acceptance suites: seeded Gaussian data, a dense
//! Gaussian-elimination solver (test oracle), and subprocess plumbing for
//! driving the `tucker` binary.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::process::Command;
use tucker_core::{DenseTensor, Matrix};

pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng))
}

pub fn gaussian_tensor(dims: &[usize], seed: u64) -> DenseTensor {
    let len: usize = dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..len).map(|_| StandardNormal.sample(&mut rng)).collect();
    DenseTensor::new(dims.to_vec(), data).unwrap()
}

/// Dense linear solve by Gaussian elimination with partial pivoting
/// (test-only oracle).
pub fn gauss_solve(a: &Matrix, b: &[f64]) -> Vec<f64> {
    assert_eq!(a.rows(), a.cols());
    assert_eq!(a.rows(), b.len());
    let n = a.rows();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j)).collect())
        .collect();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if m[i][k].abs() > m[piv][k].abs() {
                piv = i;
            }
        }
        m.swap(k, piv);
        rhs.swap(k, piv);
        assert!(m[k][k].abs() > 1e-300, "singular system in test oracle");
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
            rhs[i] -= f * rhs[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in i + 1..n {
            acc -= m[i][j] * x[j];
        }
        x[i] = acc / m[i][i];
    }
    x
}

pub struct CmdResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_tucker(args: &[&str]) -> CmdResult {
    let out = Command::new(env!("CARGO_BIN_EXE_tucker"))
        .args(args)
        .output()
        .expect("failed to launch tucker binary");
    CmdResult {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Extracts `key=<value>` from a summary line.
pub fn parse_field(text: &str, key: &str) -> f64 {
    let needle = format!("{}=", key);
    for token in text.split_whitespace() {
        if let Some(v) = token.strip_prefix(&needle) {
            return v
                .parse()
                .unwrap_or_else(|e| panic!("cannot parse {} from token '{}': {}", key, token, e));
        }
    }
    panic!("field '{}' not found in output: {}", key, text);
}
