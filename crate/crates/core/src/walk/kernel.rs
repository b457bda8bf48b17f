//! In-place coin and shift kernels over `[site][coin][lane]` buffers.
//!
//! A single walker is the case `lane == 1`. For a pair, particle A's axis is
//! the outer one with `lane == 2n` and particle B's axis is walked row by
//! row with `lane == 1`, so both particles share the same kernels.

use super::coin::CoinOperator;
use crate::lattice::C64;

/// Largest amplitude tolerated at an outgoing boundary site.
pub const BOUNDARY_TOLERANCE: f64 = 1e-14;

/// Returned when a shift would push weight off the lattice.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BoundaryHit {
    pub site: usize,
    pub magnitude: f64,
}

pub(crate) fn apply_coin<F>(data: &mut [C64], n_sites: usize, lane: usize, coin_at: F)
where
    F: Fn(usize) -> CoinOperator,
{
    debug_assert_eq!(data.len(), 2 * n_sites * lane);
    for (site, block) in data.chunks_exact_mut(2 * lane).enumerate() {
        let (c0, c1) = block.split_at_mut(lane);
        if c0.iter().chain(c1.iter()).all(|z| *z == C64::new(0.0, 0.0)) {
            continue;
        }
        let coin = coin_at(site);
        for (a, b) in c0.iter_mut().zip(c1.iter_mut()) {
            (*a, *b) = coin.apply(*a, *b);
        }
    }
}

fn outgoing_check(data: &[C64], lane: usize, site: usize, coin: usize) -> Result<(), BoundaryHit> {
    let start = (2 * site + coin) * lane;
    let magnitude = data[start..start + lane]
        .iter()
        .map(|z| z.norm())
        .fold(0.0_f64, f64::max);
    if magnitude > BOUNDARY_TOLERANCE {
        return Err(BoundaryHit { site, magnitude });
    }
    Ok(())
}

/// `T0`: coin-0 weight moves one site to the right.
pub(crate) fn shift_t0(data: &mut [C64], n_sites: usize, lane: usize) -> Result<(), BoundaryHit> {
    outgoing_check(data, lane, n_sites - 1, 0)?;
    for site in (1..n_sites).rev() {
        let src = (2 * (site - 1)) * lane;
        data.copy_within(src..src + lane, 2 * site * lane);
    }
    data[..lane].fill(C64::new(0.0, 0.0));
    Ok(())
}

/// `T1`: coin-1 weight moves one site to the left.
pub(crate) fn shift_t1(data: &mut [C64], n_sites: usize, lane: usize) -> Result<(), BoundaryHit> {
    outgoing_check(data, lane, 0, 1)?;
    for site in 0..n_sites - 1 {
        let src = (2 * (site + 1) + 1) * lane;
        data.copy_within(src..src + lane, (2 * site + 1) * lane);
    }
    let last = (2 * (n_sites - 1) + 1) * lane;
    data[last..last + lane].fill(C64::new(0.0, 0.0));
    Ok(())
}
