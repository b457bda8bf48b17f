//! Two noninteracting walkers: `U_AB = U_A ⊗ U_B`, joint distributions, and
//! coin entanglement entropy.
//!
//! The joint distribution of the entangled starts `(|01⟩ ± |10⟩)/√2` is
//! available two ways: by marginalizing the evolved pair state directly, and
//! from four single-walker runs through the interference formula
//!
//! ```text
//! P±(i, j) = ½ ( P0ᴬ(i) P1ᴮ(j) + P1ᴬ(i) P0ᴮ(j) ± [ I10ᴬ(i) I01ᴮ(j) + I01ᴬ(i) I10ᴮ(j) ] )
//! ```
//!
//! where `ψc` is the single-walker state evolved from `(x0, coin c)`,
//! `Pc(i) = Σ_s |ψc(i, s)|²`, `I10(i) = Σ_s conj(ψ1(i, s)) ψ0(i, s)` and
//! `I01 = conj(I10)`. Read as `⟨x0, 1| U†ᴺ |i⟩⟨i| Uᴺ |x0, 0⟩` (position, coin),
//! this is the textbook overlap form; the two paths agree to rounding.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::lattice::{LatticeWindow, SingleParticleState, TwoParticleState, C64};
use crate::walk::{self, AngleField};
use std::f64::consts::FRAC_1_SQRT_2;

const CLIP_TOLERANCE: f64 = 1e-12;
const INTERFERENCE_NORM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// `(|01⟩ + |10⟩)/√2`
    PsiPlus,
    /// `(|01⟩ − |10⟩)/√2`
    PsiMinus,
    /// `|01⟩`
    Separable,
}

/// Coin labels are `(c_A c_B)`; both walkers start at `positions`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialPairState {
    pub kind: PairKind,
    #[serde(default)]
    pub positions: (i64, i64),
}

impl InitialPairState {
    pub fn at_origin(kind: PairKind) -> Self {
        Self {
            kind,
            positions: (0, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

pub fn make_pair_state(init: &InitialPairState, window: LatticeWindow) -> Result<TwoParticleState> {
    let (xa, xb) = init.positions;
    let a0 = SingleParticleState::basis(window, xa, 0)?;
    let b1 = SingleParticleState::basis(window, xb, 1)?;
    let first = TwoParticleState::tensor(&a0, &b1)?;
    let sign = match init.kind {
        PairKind::Separable => return Ok(first),
        PairKind::PsiPlus => 1.0,
        PairKind::PsiMinus => -1.0,
    };
    let a1 = SingleParticleState::basis(window, xa, 1)?;
    let b0 = SingleParticleState::basis(window, xb, 0)?;
    let second = TwoParticleState::tensor(&a1, &b0)?;
    let amps = first
        .amplitudes()
        .iter()
        .zip(second.amplitudes())
        .map(|(&p, &q)| (p + q * sign) * FRAC_1_SQRT_2)
        .collect();
    TwoParticleState::from_amplitudes(window, amps)
}

/// One step of `U_A ⊗ U_B`, each particle reading its own field at `step`.
pub fn pair_split_step(
    s: &mut TwoParticleState,
    field_a: &AngleField,
    field_b: &AngleField,
    step: usize,
) -> Result<()> {
    let window = s.window();
    field_a.check_covers(window, step)?;
    field_b.check_covers(window, step)?;
    let lane = s.lane();
    let data = s.amplitudes_mut();
    walk::split_step_lanes(data, window, lane, field_a, step)?;
    for row in data.chunks_exact_mut(lane) {
        walk::split_step_lanes(row, window, 1, field_b, step)?;
    }
    Ok(())
}

/// Evolves a pair for `n` steps, calling `observe` on the initial state and
/// after each step.
pub fn evolve_pair<O>(
    s: &mut TwoParticleState,
    field_a: &AngleField,
    field_b: &AngleField,
    n: usize,
    observe: O,
) -> Result<()>
where
    O: FnMut(usize, &TwoParticleState) -> Result<()>,
{
    walk::evolve(s, n, |s, t| pair_split_step(s, field_a, field_b, t), observe)
}

/// `P(i, j)` with `i` indexing particle A's site and `j` particle B's.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    window: LatticeWindow,
    values: Vec<f64>,
}

impl JointDistribution {
    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    /// Row-major `(2L+1)²` values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: i64, j: i64) -> f64 {
        match (self.window.index(i), self.window.index(j)) {
            (Some(a), Some(b)) => self.values[a * self.window.n_sites() + b],
            _ => 0.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Row sums (particle A) and column sums (particle B).
    pub fn marginals(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.window.n_sites();
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        for (row, pa) in self.values.chunks_exact(n).zip(a.iter_mut()) {
            for (&v, pb) in row.iter().zip(b.iter_mut()) {
                *pa += v;
                *pb += v;
            }
        }
        (a, b)
    }

    /// Total probability over cells where `pred(i, j)` holds.
    pub fn mass_where<F: Fn(i64, i64) -> bool>(&self, pred: F) -> f64 {
        let n = self.window.n_sites();
        self.values
            .iter()
            .enumerate()
            .filter(|(k, _)| pred(self.window.position(k / n), self.window.position(k % n)))
            .map(|(_, v)| v)
            .sum()
    }

    /// Entrywise mean of several distributions on the same window.
    pub fn mean(dists: &[JointDistribution]) -> Result<JointDistribution> {
        let first = dists.first().expect("mean of an empty set of distributions");
        let mut values = vec![0.0; first.values.len()];
        for d in dists {
            d.window.require_same(&first.window)?;
            for (acc, v) in values.iter_mut().zip(&d.values) {
                *acc += v;
            }
        }
        let k = dists.len() as f64;
        values.iter_mut().for_each(|v| *v /= k);
        Ok(JointDistribution {
            window: first.window,
            values,
        })
    }
}

/// `P(i, j) = Σ_{c_A, c_B} |ψ(i, c_A, j, c_B)|²`
pub fn joint_distribution_direct(s: &TwoParticleState) -> JointDistribution {
    let values = s
        .amplitudes()
        .chunks_exact(2 * s.lane())
        .flat_map(|rows| {
            let (r0, r1) = rows.split_at(rows.len() / 2);
            r0.chunks_exact(2)
                .zip(r1.chunks_exact(2))
                .map(|(p, q)| p[0].norm_sqr() + p[1].norm_sqr() + q[0].norm_sqr() + q[1].norm_sqr())
        })
        .collect();
    JointDistribution {
        window: s.window(),
        values,
    }
}

/// One walker evolved from `(x0, coin 0)` and from `(x0, coin 1)` under the
/// same field.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinBasisEvolution {
    pub steps: usize,
    pub from_coin0: SingleParticleState,
    pub from_coin1: SingleParticleState,
}

impl CoinBasisEvolution {
    pub fn run(window: LatticeWindow, x0: i64, field: &AngleField, n: usize) -> Result<Self> {
        let go = |coin| -> Result<SingleParticleState> {
            let mut s = SingleParticleState::basis(window, x0, coin)?;
            walk::evolve(&mut s, n, |s, t| walk::split_step(s, field, t), |_, _| Ok(()))?;
            Ok(s)
        };
        Ok(Self {
            steps: n,
            from_coin0: go(0)?,
            from_coin1: go(1)?,
        })
    }

    /// `(P0(i), P1(i), I10(i))` per site.
    fn site_terms(&self) -> impl Iterator<Item = (f64, f64, C64)> + '_ {
        self.from_coin0
            .amplitudes()
            .chunks_exact(2)
            .zip(self.from_coin1.amplitudes().chunks_exact(2))
            .map(|(p, q)| {
                let p0 = p[0].norm_sqr() + p[1].norm_sqr();
                let p1 = q[0].norm_sqr() + q[1].norm_sqr();
                let i10 = q[0].conj() * p[0] + q[1].conj() * p[1];
                (p0, p1, i10)
            })
    }
}

/// Joint distribution of `(|01⟩ ± |10⟩)/√2` from single-walker runs.
pub fn joint_distribution_interference(
    a: &CoinBasisEvolution,
    b: &CoinBasisEvolution,
    sign: Sign,
) -> Result<JointDistribution> {
    if a.steps != b.steps {
        return Err(WalkError::StepMismatch {
            left: a.steps,
            right: b.steps,
        });
    }
    let window = a.from_coin0.window();
    window.require_same(&b.from_coin0.window())?;
    let ta: Vec<_> = a.site_terms().collect();
    let tb: Vec<_> = b.site_terms().collect();
    let s = sign.factor();
    let mut values = Vec::with_capacity(ta.len() * tb.len());
    for &(pa0, pa1, ia10) in &ta {
        for &(pb0, pb1, ib10) in &tb {
            // I10ᴬ I01ᴮ + I01ᴬ I10ᴮ = 2 Re(I10ᴬ conj(I10ᴮ))
            let cross = 2.0 * (ia10 * ib10.conj()).re;
            let mut v = 0.5 * (pa0 * pb1 + pa1 * pb0 + s * cross);
            if v < 0.0 {
                if v < -CLIP_TOLERANCE {
                    return Err(WalkError::InconsistentInterference(format!(
                        "negative probability {v:e}"
                    )));
                }
                v = 0.0;
            }
            values.push(v);
        }
    }
    let dist = JointDistribution { window, values };
    let total = dist.total();
    if (total - 1.0).abs() > INTERFERENCE_NORM_TOLERANCE {
        return Err(WalkError::InconsistentInterference(format!(
            "total probability {total}"
        )));
    }
    Ok(dist)
}

/// `S(ρ_c)` in bits at steps `0..=N`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EntropySeries {
    pub steps: Vec<usize>,
    pub entropy_bits: Vec<f64>,
}

impl EntropySeries {
    pub fn push(&mut self, step: usize, s: f64) {
        self.steps.push(step);
        self.entropy_bits.push(s);
    }

    pub fn last(&self) -> Option<f64> {
        self.entropy_bits.last().copied()
    }

    /// Mean over the last quarter of the series (at least one entry).
    pub fn long_time_mean(&self) -> Option<f64> {
        let n = self.entropy_bits.len();
        if n == 0 {
            return None;
        }
        let tail = &self.entropy_bits[n - (n / 4).max(1)..];
        Some(tail.iter().sum::<f64>() / tail.len() as f64)
    }
}

/// Result of a recorded pair evolution.
#[derive(Debug, Clone)]
pub struct PairTrajectory {
    pub entropy: EntropySeries,
    pub final_state: TwoParticleState,
}

/// Evolves a pair and records the 4×4 coin entropy after every step.
pub fn pair_entropy_series(
    mut state: TwoParticleState,
    field_a: &AngleField,
    field_b: &AngleField,
    n: usize,
) -> Result<PairTrajectory> {
    let mut entropy = EntropySeries::default();
    evolve_pair(&mut state, field_a, field_b, n, |t, s| {
        entropy.push(t, s.reduce_to_coin().von_neumann_entropy()?);
        Ok(())
    })?;
    Ok(PairTrajectory {
        entropy,
        final_state: state,
    })
}
