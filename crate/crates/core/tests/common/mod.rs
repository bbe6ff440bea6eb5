//! Oracles shared by the integration tests. Nothing here calls into the
//! exchange algorithm, so agreement with it is independent evidence.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Discrete minimax fit on a uniform grid.
#[derive(Debug, Clone)]
pub struct GridMinimax {
    /// Ascending-power coefficients.
    pub coeffs: Vec<f64>,
    pub level: f64,
    pub reference: Vec<f64>,
}

/// Best uniform approximation by polynomials of degree `<= n` on the
/// `points`-point uniform grid of `[0,1]`.
///
/// On a finite set the minimax level equals the largest levelled error over
/// all `(n+2)`-point subsets, and the levelled fit on that subset is the
/// discrete best approximation. Every subset is solved, so this is only
/// usable for small grids.
pub fn grid_minimax(f: &dyn Fn(f64) -> f64, n: usize, points: usize) -> GridMinimax {
    let grid: Vec<f64> = (0..points).map(|i| i as f64 / (points - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let k = n + 2;
    let mut idx: Vec<usize> = (0..k).collect();
    let mut best = GridMinimax { coeffs: vec![0.0; n + 1], level: -1.0, reference: Vec::new() };
    loop {
        let mut m = DMatrix::<f64>::zeros(k, k);
        let mut rhs = DVector::<f64>::zeros(k);
        for (row, &i) in idx.iter().enumerate() {
            let t = grid[i];
            let mut pw = 1.0;
            for j in 0..=n {
                m[(row, j)] = pw;
                pw *= t;
            }
            m[(row, n + 1)] = if row % 2 == 0 { 1.0 } else { -1.0 };
            rhs[row] = values[i];
        }
        if let Some(sol) = m.lu().solve(&rhs) {
            let level = sol[n + 1].abs();
            if level > best.level {
                best = GridMinimax {
                    coeffs: sol.iter().take(n + 1).copied().collect(),
                    level,
                    reference: idx.iter().map(|&i| grid[i]).collect(),
                };
            }
        }
        // next k-subset in lexicographic order
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == points - k + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        idx[pos - 1] += 1;
        for j in pos..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    best
}

/// `max |f - q|` over a uniform grid, for ascending-power `q`.
pub fn grid_error(f: &dyn Fn(f64) -> f64, coeffs: &[f64], points: usize) -> f64 {
    (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            (f(t) - horner(coeffs, t)).abs()
        })
        .fold(0.0, f64::max)
}

pub fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Integer-valued random polynomial coefficients in `[-3, 3]`, degree `<= n`.
pub fn random_poly(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..=n).map(|_| rng.gen_range(-3i32..=3) as f64).collect()
}
