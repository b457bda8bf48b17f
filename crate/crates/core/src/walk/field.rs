//! Site- and step-dependent coin angles.

use std::f64::consts::PI;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::lattice::LatticeWindow;

/// Half-width of the weak-disorder interval.
pub const WEAK_DISORDER: f64 = 0.1 * PI;
/// Half-width of the strong-disorder interval (one full 4π period of `R(θ)`).
pub const STRONG_DISORDER: f64 = 2.0 * PI;

// Keeps (negative) positions non-negative in the RNG word index.
const SITE_OFFSET: i64 = 1 << 40;
// RNG words reserved per site; one f64 sample uses two.
const WORDS_PER_SITE: u128 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Particle {
    A,
    B,
}

impl Particle {
    fn stream_tag(self) -> u64 {
        match self {
            Particle::A => 0,
            Particle::B => 1,
        }
    }
}

/// `(θ1, θ2)` for one split step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    pub theta1: f64,
    pub theta2: f64,
}

impl Angles {
    pub const fn new(theta1: f64, theta2: f64) -> Self {
        Self { theta1, theta2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisorderKind {
    #[default]
    None,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisorderTarget {
    #[default]
    A,
    B,
    Both,
}

impl DisorderTarget {
    pub fn includes(self, particle: Particle) -> bool {
        matches!(
            (self, particle),
            (DisorderTarget::Both, _) | (DisorderTarget::A, Particle::A) | (DisorderTarget::B, Particle::B)
        )
    }
}

/// Per-site, per-step uniform randomization of both angles.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DisorderSpec {
    pub kind: DisorderKind,
    pub half_width: f64,
    pub target: DisorderTarget,
    pub seed: u64,
}

impl DisorderSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn uniform(half_width: f64, target: DisorderTarget, seed: u64) -> Self {
        Self {
            kind: DisorderKind::Uniform,
            half_width,
            target,
            seed,
        }
    }

    pub fn weak(target: DisorderTarget, seed: u64) -> Self {
        Self::uniform(WEAK_DISORDER, target, seed)
    }

    pub fn strong(target: DisorderTarget, seed: u64) -> Self {
        Self::uniform(STRONG_DISORDER, target, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.half_width.is_finite() || self.half_width < 0.0 {
            return Err(WalkError::InvalidDisorder(format!(
                "half-width must be finite and non-negative, got {}",
                self.half_width
            )));
        }
        Ok(())
    }

    fn randomizes(&self, particle: Particle) -> bool {
        self.kind == DisorderKind::Uniform && self.half_width > 0.0 && self.target.includes(particle)
    }
}

/// Angles `(θ1, θ2)` on either side of a phase boundary between sites 0
/// and 1: `theta_minus` for `x ≤ 0`, `theta_plus` for `x > 0`.
///
/// The walkers start at the origin, the last site of the minus side, which
/// is where the boundary mode of the split-step walk has its weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub theta_minus: Angles,
    pub theta_plus: Angles,
}

impl BoundarySpec {
    pub fn at(&self, x: i64) -> Angles {
        if x <= 0 {
            self.theta_minus
        } else {
            self.theta_plus
        }
    }
}

/// `θ1(x, t)` and `θ2(x, t)` over a window and a number of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleField {
    window: LatticeWindow,
    steps: usize,
    // [step][site]
    theta1: Vec<f64>,
    theta2: Vec<f64>,
}

impl AngleField {
    pub fn from_fn<F>(window: LatticeWindow, steps: usize, mut f: F) -> Self
    where
        F: FnMut(i64, usize) -> Angles,
    {
        let n = window.n_sites();
        let mut theta1 = Vec::with_capacity(n * steps);
        let mut theta2 = Vec::with_capacity(n * steps);
        for t in 0..steps {
            for x in window.positions() {
                let a = f(x, t);
                theta1.push(a.theta1);
                theta2.push(a.theta2);
            }
        }
        Self {
            window,
            steps,
            theta1,
            theta2,
        }
    }

    pub fn constant(window: LatticeWindow, steps: usize, angles: Angles) -> Self {
        let len = window.n_sites() * steps;
        Self {
            window,
            steps,
            theta1: vec![angles.theta1; len],
            theta2: vec![angles.theta2; len],
        }
    }

    /// Base angles, randomized per site and step when `disorder` targets
    /// `particle`.
    pub fn sample(
        base: Angles,
        disorder: &DisorderSpec,
        particle: Particle,
        steps: usize,
        window: LatticeWindow,
    ) -> Result<Self> {
        Self::constant(window, steps, base).randomized(disorder, particle)
    }

    /// Adds i.i.d. uniform offsets in `[-w, w]` to both angles at every
    /// (site, step) when `disorder` targets `particle`; otherwise returns
    /// the field unchanged.
    ///
    /// Every offset is keyed by (seed, particle, angle, step, site), so the
    /// result does not depend on evaluation order, and a site that two
    /// windows share gets the same offsets in both.
    pub fn randomized(&self, disorder: &DisorderSpec, particle: Particle) -> Result<Self> {
        disorder.validate()?;
        let mut field = self.clone();
        if !disorder.randomizes(particle) {
            return Ok(field);
        }
        let w = disorder.half_width;
        let dist = Uniform::new_inclusive(-w, w);
        let mut rng = ChaCha8Rng::seed_from_u64(disorder.seed);
        let n = self.window.n_sites();
        for (angle, values) in [&mut field.theta1, &mut field.theta2].into_iter().enumerate() {
            for t in 0..self.steps {
                let stream = ((particle.stream_tag() << 1 | angle as u64) << 32) | t as u64;
                rng.set_stream(stream);
                for (site, x) in self.window.positions().enumerate() {
                    rng.set_word_pos(WORDS_PER_SITE * (x + SITE_OFFSET) as u128);
                    values[t * n + site] += dist.sample(&mut rng);
                }
            }
        }
        Ok(field)
    }

    /// Piecewise-constant field across a phase boundary, constant in time.
    pub fn boundary(spec: &BoundarySpec, steps: usize, window: LatticeWindow) -> Self {
        Self::from_fn(window, steps, |x, _| spec.at(x))
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn angles_at(&self, x: i64, step: usize) -> Angles {
        let site = self.window.index(x).expect("position outside the field's window");
        let i = step * self.window.n_sites() + site;
        Angles::new(self.theta1[i], self.theta2[i])
    }

    pub(crate) fn theta1_row(&self, step: usize) -> &[f64] {
        let n = self.window.n_sites();
        &self.theta1[step * n..(step + 1) * n]
    }

    pub(crate) fn theta2_row(&self, step: usize) -> &[f64] {
        let n = self.window.n_sites();
        &self.theta2[step * n..(step + 1) * n]
    }

    pub(crate) fn check_covers(&self, window: LatticeWindow, step: usize) -> Result<()> {
        self.window.require_same(&window)?;
        if step >= self.steps {
            return Err(WalkError::FieldTooShort {
                requested: step,
                available: self.steps,
            });
        }
        Ok(())
    }

    /// Every `(θ1, θ2)` sample, step-major.
    pub fn samples(&self) -> impl Iterator<Item = Angles> + '_ {
        self.theta1
            .iter()
            .zip(&self.theta2)
            .map(|(&a, &b)| Angles::new(a, b))
    }
}
