//! State vectors for one and two walkers on a finite 1D lattice, the coin
//! reduced density matrix, and its von Neumann entropy.
//!
//! Amplitudes are stored site-major with the coin index innermost:
//! `(site * 2 + coin)` for one walker and
//! `((site_a * 2 + coin_a) * 2n + site_b * 2 + coin_b)` for a pair, where
//! `n = 2L + 1` is the number of sites.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;

use crate::error::{Result, WalkError};

pub type C64 = Complex<f64>;

/// Normalization tolerance for user-supplied amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Largest negative eigenvalue of a density matrix that is clipped to zero.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-10;
const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Sites `-L ..= L` of a finite lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeWindow {
    half_width: usize,
}

impl LatticeWindow {
    pub fn new(half_width: usize) -> Result<Self> {
        if half_width == 0 {
            return Err(WalkError::EmptyWindow(half_width));
        }
        Ok(Self { half_width })
    }

    /// Smallest window that an `steps`-step walk from the origin can never
    /// leave: the support grows by at most one site per step.
    pub fn for_steps(steps: usize) -> Self {
        Self {
            half_width: steps + 1,
        }
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn n_sites(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn contains(&self, x: i64) -> bool {
        x.unsigned_abs() as usize <= self.half_width
    }

    /// Array index of position `x`, if it lies in the window.
    pub fn index(&self, x: i64) -> Option<usize> {
        self.contains(x)
            .then(|| (x + self.half_width as i64) as usize)
    }

    pub fn position(&self, index: usize) -> i64 {
        index as i64 - self.half_width as i64
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> {
        let l = self.half_width as i64;
        -l..=l
    }

    pub(crate) fn require_index(&self, x: i64) -> Result<usize> {
        self.index(x).ok_or(WalkError::OutsideWindow {
            position: x,
            half_width: self.half_width,
        })
    }

    pub(crate) fn require_same(&self, other: &LatticeWindow) -> Result<()> {
        if self != other {
            return Err(WalkError::WindowMismatch {
                left: self.half_width,
                right: other.half_width,
            });
        }
        Ok(())
    }
}

fn check_coin_amps(coin_amps: [C64; 2]) -> Result<()> {
    let norm_sqr = coin_amps[0].norm_sqr() + coin_amps[1].norm_sqr();
    if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
        return Err(WalkError::NotNormalized { norm_sqr });
    }
    Ok(())
}

/// One walker: amplitudes over (position, coin).
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleState {
    window: LatticeWindow,
    amps: Vec<C64>,
}

impl SingleParticleState {
    /// Walker localized at `x0` with coin state `coin_amps`.
    ///
    /// `x0` has to be strictly inside the window so the first shift cannot
    /// push amplitude off the lattice.
    pub fn new(window: LatticeWindow, x0: i64, coin_amps: [C64; 2]) -> Result<Self> {
        check_coin_amps(coin_amps)?;
        if x0.unsigned_abs() as usize >= window.half_width {
            return Err(WalkError::OutsideWindow {
                position: x0,
                half_width: window.half_width,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 2 * window.n_sites()];
        let site = window.require_index(x0)?;
        amps[2 * site] = coin_amps[0];
        amps[2 * site + 1] = coin_amps[1];
        Ok(Self { window, amps })
    }

    pub fn basis(window: LatticeWindow, x0: i64, coin: usize) -> Result<Self> {
        let mut coin_amps = [C64::new(0.0, 0.0); 2];
        coin_amps[coin.min(1)] = C64::new(1.0, 0.0);
        Self::new(window, x0, coin_amps)
    }

    /// Wraps a raw amplitude vector in `(site * 2 + coin)` order.
    pub fn from_amplitudes(window: LatticeWindow, amps: Vec<C64>) -> Result<Self> {
        let expected = 2 * window.n_sites();
        if amps.len() != expected {
            return Err(WalkError::ShapeMismatch {
                got: amps.len(),
                expected,
            });
        }
        let state = Self { window, amps };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(WalkError::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    /// Amplitude at `(x, coin)`; zero outside the window.
    pub fn amplitude(&self, x: i64, coin: usize) -> C64 {
        self.window
            .index(x)
            .map_or(C64::new(0.0, 0.0), |site| self.amps[2 * site + coin])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `P(x) = Σ_c |ψ(x, c)|²`, indexed like [`LatticeWindow::positions`].
    pub fn position_distribution(&self) -> Vec<f64> {
        self.amps
            .chunks_exact(2)
            .map(|c| c[0].norm_sqr() + c[1].norm_sqr())
            .collect()
    }

    /// Traces out position, leaving the 2×2 coin density matrix.
    pub fn reduce_to_coin(&self) -> CoinDensityMatrix {
        let mut rho = DMatrix::<C64>::zeros(2, 2);
        for c in self.amps.chunks_exact(2) {
            for r in 0..2 {
                for s in r..2 {
                    rho[(r, s)] += c[r] * c[s].conj();
                }
            }
        }
        rho[(1, 0)] = rho[(0, 1)].conj();
        CoinDensityMatrix { entries: rho }
    }
}

/// Two distinguishable walkers on the same window.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    window: LatticeWindow,
    amps: Vec<C64>,
}

impl TwoParticleState {
    /// Product state `a ⊗ b`.
    pub fn tensor(a: &SingleParticleState, b: &SingleParticleState) -> Result<Self> {
        a.window.require_same(&b.window)?;
        let mut amps = Vec::with_capacity(a.amps.len() * b.amps.len());
        for &x in &a.amps {
            amps.extend(b.amps.iter().map(|&y| x * y));
        }
        Ok(Self {
            window: a.window,
            amps,
        })
    }

    /// Wraps a raw amplitude vector in `(a_site, a_coin, b_site, b_coin)`
    /// row-major order.
    pub fn from_amplitudes(window: LatticeWindow, amps: Vec<C64>) -> Result<Self> {
        let lane = 2 * window.n_sites();
        if amps.len() != lane * lane {
            return Err(WalkError::ShapeMismatch {
                got: amps.len(),
                expected: lane * lane,
            });
        }
        let state = Self { window, amps };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(WalkError::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    /// Length of one particle's `(site, coin)` axis.
    pub fn lane(&self) -> usize {
        2 * self.window.n_sites()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn amplitude(&self, x_a: i64, c_a: usize, x_b: i64, c_b: usize) -> C64 {
        match (self.window.index(x_a), self.window.index(x_b)) {
            (Some(ia), Some(ib)) => self.amps[(2 * ia + c_a) * self.lane() + 2 * ib + c_b],
            _ => C64::new(0.0, 0.0),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Traces out both positions, leaving the 4×4 coin density matrix in the
    /// basis `c_a * 2 + c_b`.
    pub fn reduce_to_coin(&self) -> CoinDensityMatrix {
        let lane = self.lane();
        let n = self.window.n_sites();
        let mut acc = [[C64::new(0.0, 0.0); 4]; 4];
        // Sum over x_a, x_b of v v† where v = (ψ(x_a,0,x_b,0), ψ(x_a,0,x_b,1), ψ(x_a,1,x_b,0), ψ(x_a,1,x_b,1)).
        for ia in 0..n {
            let row0 = &self.amps[(2 * ia) * lane..(2 * ia + 1) * lane];
            let row1 = &self.amps[(2 * ia + 1) * lane..(2 * ia + 2) * lane];
            for (b0, b1) in row0.chunks_exact(2).zip(row1.chunks_exact(2)) {
                let v = [b0[0], b0[1], b1[0], b1[1]];
                for r in 0..4 {
                    if v[r] == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for s in r..4 {
                        acc[r][s] += v[r] * v[s].conj();
                    }
                }
            }
        }
        let mut rho = DMatrix::<C64>::zeros(4, 4);
        for r in 0..4 {
            for s in r..4 {
                rho[(r, s)] = acc[r][s];
                rho[(s, r)] = acc[r][s].conj();
            }
            rho[(r, r)].im = 0.0;
        }
        CoinDensityMatrix { entries: rho }
    }
}

/// Reduced density matrix over coin space (dimension 2 or 4).
#[derive(Debug, Clone, PartialEq)]
pub struct CoinDensityMatrix {
    entries: DMatrix<C64>,
}

impl CoinDensityMatrix {
    /// Validates a user-supplied matrix: square of size 2 or 4, Hermitian,
    /// unit trace, and no eigenvalue below `-1e-10`.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let dim = entries.nrows();
        if entries.ncols() != dim || !(dim == 2 || dim == 4) {
            return Err(WalkError::InvalidDensityMatrix(format!(
                "shape {}x{} is not 2x2 or 4x4",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let rho = Self { entries };
        let herm = rho.hermiticity_defect();
        if herm > HERMITIAN_TOLERANCE {
            return Err(WalkError::InvalidDensityMatrix(format!(
                "not Hermitian (defect {herm:e})"
            )));
        }
        let trace = rho.trace();
        if (trace - 1.0).abs() > NORM_TOLERANCE {
            return Err(WalkError::InvalidDensityMatrix(format!("trace {trace}")));
        }
        rho.eigenvalues()?;
        Ok(rho)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            values.iter().map(|&v| C64::new(v, 0.0)),
        ));
        Self::new(d)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.entries[(r, c)]
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for r in 0..d {
            for c in 0..d {
                worst = worst.max((self.entries[(r, c)] - self.entries[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `self ⊗ other` in the basis `r_self * dim_other + r_other`.
    pub fn kron(&self, other: &CoinDensityMatrix) -> DMatrix<C64> {
        self.entries.kronecker(&other.entries)
    }

    /// Eigenvalues with values in `[-1e-10, 0)` clipped to zero.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let eig = SymmetricEigen::new(self.entries.clone());
        eig.eigenvalues
            .iter()
            .map(|&l| {
                if l < -EIGENVALUE_TOLERANCE {
                    Err(WalkError::InvalidDensityMatrix(format!(
                        "negative eigenvalue {l:e}"
                    )))
                } else {
                    Ok(l.clamp(0.0, 1.0))
                }
            })
            .collect()
    }

    /// `S = -Σ λ log2 λ` in bits.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let s: f64 = self
            .eigenvalues()?
            .into_iter()
            .filter(|&l| l > 0.0)
            .map(|l| -l * l.log2())
            .sum();
        // `+ 0.0` turns the −0.0 of a pure state into 0.0.
        Ok(s.clamp(0.0, (self.dim() as f64).log2()) + 0.0)
    }
}
