//! Momentum-space picture of the split-step walk.
//!
//! For translation-invariant angles the step operator is block diagonal in
//! quasimomentum, `U(k) = T1(k) R(θ2) T0(k) R(θ1)` with
//! `T0(k) = diag(e^{ik}, 1)` and `T1(k) = diag(1, e^{−ik})`. `U(k)` lies in
//! SU(2), so it can be written `cos E · I − i sin E (n·σ)`; the winding
//! number counts the turns of the unit axis `n(k)` across the Brillouin zone.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, SymmetricEigen, Vector3};
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::C64;

pub const GAP_THRESHOLD: f64 = 1e-6;
pub const PLANARITY_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_K_POINTS: usize = 1024;
pub const MIN_K_POINTS: usize = 64;
pub const MIN_GRID: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("gapless at k = {k}: sin E = {sin_e:e}")]
    GaplessAt { k: f64, sin_e: f64 },

    #[error("quasienergy gap {gap:e} is below threshold; the winding number is undefined")]
    Gapless { gap: f64 },

    #[error("Bloch axis leaves its plane by {deviation:e}")]
    NotPlanar { deviation: f64 },

    #[error("need at least {min} k-points, got {got}")]
    TooFewKPoints { got: usize, min: usize },

    #[error("phase grid needs at least {min} points per axis, got {got}")]
    GridTooSmall { got: usize, min: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumUnitary {
    pub k: f64,
    pub entries: Matrix2<C64>,
}

impl MomentumUnitary {
    pub fn unitarity_defect(&self) -> f64 {
        (self.entries.adjoint() * self.entries - Matrix2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

fn rotation(theta: f64) -> Matrix2<C64> {
    let (s, c) = (0.5 * theta).sin_cos();
    Matrix2::new(C64::from(c), C64::from(-s), C64::from(s), C64::from(c))
}

pub fn momentum_unitary(theta1: f64, theta2: f64, k: f64) -> MomentumUnitary {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let t0 = Matrix2::new(C64::from_polar(1.0, k), zero, zero, one);
    let t1 = Matrix2::new(one, zero, zero, C64::from_polar(1.0, -k));
    MomentumUnitary {
        k,
        entries: t1 * rotation(theta2) * t0 * rotation(theta1),
    }
}

/// Quasienergy `E ∈ [0, π]` and Bloch axis `n` of one `U(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub k: f64,
    pub quasienergy: f64,
    pub axis: Vector3<f64>,
}

impl BandPoint {
    /// `cos E · I − i sin E (n·σ)`
    pub fn reconstruct(&self) -> Matrix2<C64> {
        let (s, c) = self.quasienergy.sin_cos();
        let n = self.axis;
        let i = C64::i();
        let n_sigma = Matrix2::new(
            C64::from(n.z),
            C64::new(n.x, -n.y),
            C64::new(n.x, n.y),
            C64::from(-n.z),
        );
        Matrix2::identity() * C64::from(c) - n_sigma * (i * s)
    }

    /// Distance of the quasienergy to the closer of 0 and π.
    pub fn gap(&self) -> f64 {
        self.quasienergy.min(PI - self.quasienergy)
    }
}

pub fn band_point(u: &MomentumUnitary) -> Result<BandPoint, TopologyError> {
    let m = &u.entries;
    let half_trace = 0.5 * (m[(0, 0)] + m[(1, 1)]).re;
    let e = half_trace.clamp(-1.0, 1.0).acos();
    let sin_e = e.sin();
    if sin_e <= GAP_THRESHOLD {
        return Err(TopologyError::GaplessAt { k: u.k, sin_e });
    }
    // Tr(U σ_j) = −2i sin E n_j
    let tr_x = m[(0, 1)] + m[(1, 0)];
    let tr_y = C64::i() * (m[(0, 1)] - m[(1, 0)]);
    let tr_z = m[(0, 0)] - m[(1, 1)];
    let raw = Vector3::new(-tr_x.im, -tr_y.im, -tr_z.im) / (2.0 * sin_e);
    Ok(BandPoint {
        k: u.k,
        quasienergy: e,
        axis: raw.normalize(),
    })
}

/// Winding verdict for gapped parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseVerdict {
    pub winding: u32,
    /// Accumulated signed angle of `n(k)` over the zone, in turns.
    pub signed_turns: f64,
    pub gap: f64,
}

/// Uniform k-grid `k_m = −π + offset + 2π m / points`.
pub fn winding_number_on_grid(
    theta1: f64,
    theta2: f64,
    k_points: usize,
    offset: f64,
) -> Result<PhaseVerdict, TopologyError> {
    if k_points < MIN_K_POINTS {
        return Err(TopologyError::TooFewKPoints {
            got: k_points,
            min: MIN_K_POINTS,
        });
    }
    let dk = 2.0 * PI / k_points as f64;
    let mut gap = f64::INFINITY;
    let mut axes = Vec::with_capacity(k_points);
    for m in 0..k_points {
        let k = -PI + offset + dk * m as f64;
        let u = momentum_unitary(theta1, theta2, k);
        let half_trace = (0.5 * (u.entries[(0, 0)] + u.entries[(1, 1)]).re).clamp(-1.0, 1.0);
        let e = half_trace.acos();
        gap = gap.min(e.min(PI - e));
        if gap < GAP_THRESHOLD {
            return Err(TopologyError::Gapless { gap });
        }
        axes.push(band_point(&u).map_err(|_| TopologyError::Gapless { gap })?.axis);
    }

    // Plane normal: eigenvector of Σ n nᵀ with the smallest eigenvalue.
    let scatter = axes
        .iter()
        .fold(Matrix3::zeros(), |acc: Matrix3<f64>, n| acc + n * n.transpose());
    let eig = SymmetricEigen::new(scatter);
    let imin = eig.eigenvalues.imin();
    let normal: Vector3<f64> = eig.eigenvectors.column(imin).into_owned();
    let deviation = axes.iter().map(|n| n.dot(&normal).abs()).fold(0.0, f64::max);
    if deviation > PLANARITY_TOLERANCE {
        return Err(TopologyError::NotPlanar { deviation });
    }

    let e1 = (axes[0] - normal * axes[0].dot(&normal)).normalize();
    let e2 = normal.cross(&e1);
    let phase = |n: &Vector3<f64>| n.dot(&e2).atan2(n.dot(&e1));
    let mut total = 0.0;
    for m in 0..k_points {
        let d = phase(&axes[(m + 1) % k_points]) - phase(&axes[m]);
        total += (d + PI).rem_euclid(2.0 * PI) - PI;
    }
    let signed_turns = total / (2.0 * PI);
    Ok(PhaseVerdict {
        winding: signed_turns.round().abs() as u32,
        signed_turns,
        gap,
    })
}

pub fn winding_number(theta1: f64, theta2: f64, k_points: usize) -> Result<PhaseVerdict, TopologyError> {
    winding_number_on_grid(theta1, theta2, k_points, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseCell {
    Phase(PhaseVerdict),
    /// Gapless (or numerically degenerate) parameters.
    Boundary { gap: f64 },
}

impl PhaseCell {
    pub fn winding(&self) -> Option<u32> {
        match self {
            PhaseCell::Phase(v) => Some(v.winding),
            PhaseCell::Boundary { .. } => None,
        }
    }

    pub fn gap(&self) -> f64 {
        match self {
            PhaseCell::Phase(v) => v.gap,
            PhaseCell::Boundary { gap } => *gap,
        }
    }
}

/// Winding numbers on `grid_n × grid_n` points spanning `[−π, π]²`
/// (endpoints included). `cells[i * grid_n + j]` is at
/// `(θ1, θ2) = (thetas[i], thetas[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    pub thetas: Vec<f64>,
    pub cells: Vec<PhaseCell>,
}

impl PhaseDiagram {
    pub fn grid_n(&self) -> usize {
        self.thetas.len()
    }

    pub fn cell(&self, i: usize, j: usize) -> &PhaseCell {
        &self.cells[i * self.grid_n() + j]
    }
}

pub fn axis_points(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![min];
    }
    let last = count - 1;
    (0..count)
        .map(|i| if i == last { max } else { min + (max - min) * i as f64 / last as f64 })
        .collect()
}

pub fn phase_diagram(grid_n: usize, k_points: usize) -> Result<PhaseDiagram, TopologyError> {
    if grid_n < MIN_GRID {
        return Err(TopologyError::GridTooSmall {
            got: grid_n,
            min: MIN_GRID,
        });
    }
    if k_points < MIN_K_POINTS {
        return Err(TopologyError::TooFewKPoints {
            got: k_points,
            min: MIN_K_POINTS,
        });
    }
    let thetas = axis_points(-PI, PI, grid_n);
    let cells = (0..grid_n * grid_n)
        .into_par_iter()
        .map(|idx| {
            let (t1, t2) = (thetas[idx / grid_n], thetas[idx % grid_n]);
            match winding_number(t1, t2, k_points) {
                Ok(v) => PhaseCell::Phase(v),
                Err(TopologyError::Gapless { gap }) => PhaseCell::Boundary { gap },
                Err(_) => PhaseCell::Boundary { gap: min_gap(t1, t2, k_points) },
            }
        })
        .collect();
    Ok(PhaseDiagram { thetas, cells })
}

fn min_gap(theta1: f64, theta2: f64, k_points: usize) -> f64 {
    let dk = 2.0 * PI / k_points as f64;
    (0..k_points)
        .map(|m| {
            let u = momentum_unitary(theta1, theta2, -PI + dk * m as f64);
            let e = (0.5 * (u.entries[(0, 0)] + u.entries[(1, 1)]).re).clamp(-1.0, 1.0).acos();
            e.min(PI - e)
        })
        .fold(f64::INFINITY, f64::min)
}
