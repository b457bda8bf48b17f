//! Dense-matrix reference implementations, built from the operator
//! definitions without the crate's kernels.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use qwalk::walk::{AngleField, Angles};
use qwalk::{LatticeWindow, C64};

pub const Z1: Angles = Angles::new(-PI / 2.0, PI / 4.0);
pub const Z0: Angles = Angles::new(-PI / 2.0, 3.0 * PI / 4.0);

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Basis index of `(x, coin)`.
pub fn idx(window: LatticeWindow, x: i64, coin: usize) -> usize {
    2 * window.index(x).unwrap() + coin
}

/// Block-diagonal coin operator with `m(x)` at every site.
pub fn dense_coin<F: Fn(i64) -> [[f64; 2]; 2]>(window: LatticeWindow, m: F) -> DMatrix<C64> {
    let d = 2 * window.n_sites();
    let mut u = DMatrix::zeros(d, d);
    for x in window.positions() {
        let b = m(x);
        for r in 0..2 {
            for s in 0..2 {
                u[(idx(window, x, r), idx(window, x, s))] = c(b[r][s]);
            }
        }
    }
    u
}

pub fn rotation(theta: f64) -> [[f64; 2]; 2] {
    let (s, co) = (theta / 2.0).sin_cos();
    [[co, -s], [s, co]]
}

/// `|x, 0⟩ → |x+1, 0⟩`, coin 1 untouched; the column leaving the window is zero.
pub fn dense_t0(window: LatticeWindow) -> DMatrix<C64> {
    let d = 2 * window.n_sites();
    let mut u = DMatrix::zeros(d, d);
    for x in window.positions() {
        u[(idx(window, x, 1), idx(window, x, 1))] = c(1.0);
        if window.contains(x + 1) {
            u[(idx(window, x + 1, 0), idx(window, x, 0))] = c(1.0);
        }
    }
    u
}

/// `|x, 1⟩ → |x−1, 1⟩`, coin 0 untouched.
pub fn dense_t1(window: LatticeWindow) -> DMatrix<C64> {
    let d = 2 * window.n_sites();
    let mut u = DMatrix::zeros(d, d);
    for x in window.positions() {
        u[(idx(window, x, 0), idx(window, x, 0))] = c(1.0);
        if window.contains(x - 1) {
            u[(idx(window, x - 1, 1), idx(window, x, 1))] = c(1.0);
        }
    }
    u
}

/// `T1 R(θ2) T0 R(θ1)` with the angles of `field` at `step`.
pub fn dense_split_step(window: LatticeWindow, field: &AngleField, step: usize) -> DMatrix<C64> {
    let r1 = dense_coin(window, |x| rotation(field.angles_at(x, step).theta1));
    let r2 = dense_coin(window, |x| rotation(field.angles_at(x, step).theta2));
    dense_t1(window) * r2 * dense_t0(window) * r1
}

pub fn dense_hadamard_step(window: LatticeWindow) -> DMatrix<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let coin = dense_coin(window, |_| [[h, h], [h, -h]]);
    dense_t1(window) * dense_t0(window) * coin
}

pub fn basis_vector(d: usize, k: usize) -> DVector<C64> {
    let mut v = DVector::zeros(d);
    v[k] = c(1.0);
    v
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Position distribution of a dense state vector.
pub fn dense_distribution(v: &DVector<C64>) -> Vec<f64> {
    v.as_slice().chunks_exact(2).map(|p| p[0].norm_sqr() + p[1].norm_sqr()).collect()
}
