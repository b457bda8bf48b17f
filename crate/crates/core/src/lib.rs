//! Discrete-time quantum walks on a one-dimensional lattice.
//!
//! The crate simulates one walker or two noninteracting walkers under the
//! Hadamard walk and the split-step walk `T1 R(θ2) T0 R(θ1)`, with coin
//! angles that may depend on site and time step (disorder, phase
//! boundaries). Observables are position distributions, two-particle joint
//! distributions, and the von Neumann entropy of the coin-space reduced
//! density matrix. The [`topology`] module computes quasienergy bands and
//! the winding number of the split-step walk in momentum space.
//!
//! [`experiment`] ties everything together into reproducible runs that
//! emit CSV and JSON artifacts; the `qwalk` binary is a thin CLI over it.

pub mod error;
pub mod experiment;
pub mod lattice;
pub mod pair;
pub mod topology;
pub mod walk;

pub use error::{Result, WalkError};
pub use lattice::{CoinDensityMatrix, LatticeWindow, SingleParticleState, TwoParticleState, C64};
