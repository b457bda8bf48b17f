//! Coin operators, conditional shifts and the single-walker steps built from
//! them: the Hadamard walk `T (I ⊗ C)` and the split-step walk
//! `T1 R(θ2) T0 R(θ1)`.

mod coin;
mod field;
pub(crate) mod kernel;

pub use coin::CoinOperator;
pub use field::{
    AngleField, Angles, BoundarySpec, DisorderKind, DisorderSpec, DisorderTarget, Particle,
    STRONG_DISORDER, WEAK_DISORDER,
};
pub use kernel::BOUNDARY_TOLERANCE;

use crate::error::{Result, WalkError};
use crate::lattice::{LatticeWindow, SingleParticleState, C64};

pub(crate) fn boundary_error(window: LatticeWindow, hit: kernel::BoundaryHit) -> WalkError {
    WalkError::BoundaryReached {
        position: window.position(hit.site),
        magnitude: hit.magnitude,
    }
}

/// Multiplies the coin of every site `x` by `coin_at(x, step)`.
pub fn apply_coin<F>(s: &mut SingleParticleState, coin_at: F, step: usize)
where
    F: Fn(i64, usize) -> CoinOperator,
{
    let window = s.window();
    kernel::apply_coin(s.amplitudes_mut(), window.n_sites(), 1, |site| {
        coin_at(window.position(site), step)
    });
}

pub fn shift_t0(s: &mut SingleParticleState) -> Result<()> {
    let window = s.window();
    kernel::shift_t0(s.amplitudes_mut(), window.n_sites(), 1).map_err(|h| boundary_error(window, h))
}

pub fn shift_t1(s: &mut SingleParticleState) -> Result<()> {
    let window = s.window();
    kernel::shift_t1(s.amplitudes_mut(), window.n_sites(), 1).map_err(|h| boundary_error(window, h))
}

/// One Hadamard-walk step, `T1 T0 (I ⊗ H)`.
pub fn hadamard_step(s: &mut SingleParticleState) -> Result<()> {
    let h = CoinOperator::hadamard();
    apply_coin(s, |_, _| h, 0);
    shift_t0(s)?;
    shift_t1(s)
}

/// Split step `T1 R(θ2) T0 R(θ1)` over `[site][coin][lane]` data, with
/// angles read from `field` at the site the amplitude occupies when each
/// rotation acts.
pub(crate) fn split_step_lanes(
    data: &mut [C64],
    window: LatticeWindow,
    lane: usize,
    field: &AngleField,
    step: usize,
) -> Result<()> {
    let n = window.n_sites();
    let theta1 = field.theta1_row(step);
    let theta2 = field.theta2_row(step);
    kernel::apply_coin(data, n, lane, |site| CoinOperator::rotation(theta1[site]));
    kernel::shift_t0(data, n, lane).map_err(|h| boundary_error(window, h))?;
    kernel::apply_coin(data, n, lane, |site| CoinOperator::rotation(theta2[site]));
    kernel::shift_t1(data, n, lane).map_err(|h| boundary_error(window, h))
}

/// One split step using the angles of `field` at time `step`.
pub fn split_step(s: &mut SingleParticleState, field: &AngleField, step: usize) -> Result<()> {
    let window = s.window();
    field.check_covers(window, step)?;
    split_step_lanes(s.amplitudes_mut(), window, 1, field, step)
}

/// Applies `stepper` for steps `0..n`, calling `observe(t, state)` on the
/// initial state (`t = 0`) and after every completed step (`t = 1..=n`).
pub fn evolve<S, F, O>(state: &mut S, n: usize, mut stepper: F, mut observe: O) -> Result<()>
where
    F: FnMut(&mut S, usize) -> Result<()>,
    O: FnMut(usize, &S) -> Result<()>,
{
    observe(0, state)?;
    for t in 0..n {
        stepper(state, t)?;
        observe(t + 1, state)?;
    }
    Ok(())
}

/// Per-step coin entropy and final position distribution of one walker.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleTrajectory {
    pub entropy_bits: Vec<f64>,
    /// Position variance `⟨x²⟩ − ⟨x⟩²` after each step.
    pub variance: Vec<f64>,
    pub final_state: SingleParticleState,
}

/// Evolves `state` for `n` steps with `stepper`, recording coin entropy and
/// position variance at every step.
pub fn single_trajectory<F>(mut state: SingleParticleState, n: usize, stepper: F) -> Result<SingleTrajectory>
where
    F: FnMut(&mut SingleParticleState, usize) -> Result<()>,
{
    let mut entropy_bits = Vec::with_capacity(n + 1);
    let mut variance = Vec::with_capacity(n + 1);
    evolve(&mut state, n, stepper, |_, s| {
        entropy_bits.push(s.reduce_to_coin().von_neumann_entropy()?);
        variance.push(position_variance(s.window(), &s.position_distribution()));
        Ok(())
    })?;
    Ok(SingleTrajectory {
        entropy_bits,
        variance,
        final_state: state,
    })
}

pub fn position_variance(window: LatticeWindow, p: &[f64]) -> f64 {
    let (m1, m2) = window
        .positions()
        .zip(p)
        .fold((0.0, 0.0), |(m1, m2), (x, &px)| {
            let x = x as f64;
            (m1 + x * px, m2 + x * x * px)
        });
    m2 - m1 * m1
}
