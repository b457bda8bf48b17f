//! Run configuration: JSON schema, defaults, CLI overrides and validation.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{LatticeWindow, C64, NORM_TOLERANCE};
use crate::pair::{InitialPairState, PairKind};
use crate::topology::{DEFAULT_K_POINTS, MIN_GRID, MIN_K_POINTS};
use crate::walk::{Angles, BoundarySpec, DisorderKind, DisorderSpec, DisorderTarget, STRONG_DISORDER, WEAK_DISORDER};

/// Angles with winding number 1.
pub const TOPOLOGICAL: Angles = Angles::new(-PI / 2.0, PI / 4.0);
/// Angles with winding number 0.
pub const TRIVIAL: Angles = Angles::new(-PI / 2.0, 3.0 * PI / 4.0);

pub const SINGLE_DEFAULT_STEPS: usize = 100;
pub const SWEEP_DEFAULT_STEPS: usize = 50;
pub const DEFAULT_PHASE_GRID: usize = 64;

/// A configuration field that failed validation.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunKind {
    Hadamard,
    SingleSplit,
    Tptpw,
    Tptbw,
    EntropySweep,
    PhaseDiagram,
}

impl RunKind {
    fn default_steps(self) -> usize {
        match self {
            RunKind::EntropySweep => SWEEP_DEFAULT_STEPS,
            RunKind::PhaseDiagram => 0,
            _ => SINGLE_DEFAULT_STEPS,
        }
    }

    fn artifacts(self) -> &'static [ArtifactKind] {
        use ArtifactKind::*;
        match self {
            RunKind::Hadamard | RunKind::SingleSplit => &[Entropy, Distribution],
            RunKind::Tptpw | RunKind::Tptbw => &[Entropy, Joint],
            RunKind::EntropySweep => &[Heatmap],
            RunKind::PhaseDiagram => &[Phase],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    Entropy,
    Distribution,
    Joint,
    Phase,
    Heatmap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum AutoTag {
    Auto,
}

/// Lattice half-width: `"auto"` (steps + 1) or an explicit value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WindowSpec {
    Fixed(usize),
    #[default]
    #[serde(with = "auto_tag")]
    Auto,
}

mod auto_tag {
    use super::AutoTag;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        AutoTag::Auto.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        AutoTag::deserialize(d).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleAngles {
    #[serde(default = "topological")]
    pub a: Angles,
    #[serde(default = "trivial")]
    pub b: Angles,
}

fn topological() -> Angles {
    TOPOLOGICAL
}

fn trivial() -> Angles {
    TRIVIAL
}

impl Default for ParticleAngles {
    fn default() -> Self {
        Self {
            a: TOPOLOGICAL,
            b: TRIVIAL,
        }
    }
}

/// Disorder without its seed; seeds come from `master_seed`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderConfig {
    #[serde(default)]
    pub kind: DisorderKind,
    #[serde(default)]
    pub half_width: f64,
    #[serde(default)]
    pub target: DisorderTarget,
}

impl DisorderConfig {
    pub fn with_seed(&self, seed: u64) -> DisorderSpec {
        DisorderSpec {
            kind: self.kind,
            half_width: self.half_width,
            target: self.target,
            seed,
        }
    }

    pub fn is_active(&self) -> bool {
        self.kind == DisorderKind::Uniform && self.half_width > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepWalk {
    #[default]
    Tptpw,
    Tptbw,
}

/// Scalar recorded per sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepScalar {
    /// Entropy after the last step.
    #[default]
    Final,
    /// Mean entropy over the last quarter of the steps.
    LongTimeMean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn points(&self) -> Vec<f64> {
        crate::topology::axis_points(self.min, self.max, self.count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub walk: SweepWalk,
    pub axes: Vec<SweepAxis>,
    #[serde(default)]
    pub scalar: SweepScalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseConfig {
    #[serde(default = "default_grid")]
    pub grid_n: usize,
    #[serde(default = "default_k_points")]
    pub k_points: usize,
}

fn default_grid() -> usize {
    DEFAULT_PHASE_GRID
}

fn default_k_points() -> usize {
    DEFAULT_K_POINTS
}

impl Default for PhaseConfig {
    fn default() -> Self {
        Self {
            grid_n: DEFAULT_PHASE_GRID,
            k_points: DEFAULT_K_POINTS,
        }
    }
}

fn default_pair_state() -> InitialPairState {
    InitialPairState::at_origin(PairKind::PsiPlus)
}

fn default_coin_state() -> [[f64; 2]; 2] {
    [[1.0, 0.0], [0.0, 0.0]]
}

fn one() -> usize {
    1
}

/// Everything needed to reproduce one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub run_kind: RunKind,
    /// Defaults to 100 for walks and 50 for sweeps.
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default)]
    pub window: WindowSpec,
    #[serde(default)]
    pub angles: ParticleAngles,
    /// Phase boundary for `tptbw`; defaults to winding 1 on the minus side
    /// and winding 0 on the plus side.
    #[serde(default)]
    pub boundary: Option<BoundarySpec>,
    /// Separate boundary for particle B; `boundary` applies to both if unset.
    #[serde(default)]
    pub boundary_b: Option<BoundarySpec>,
    #[serde(default = "default_pair_state")]
    pub initial_state: InitialPairState,
    /// Single-walker coin amplitudes as `[[re, im], [re, im]]`.
    #[serde(default = "default_coin_state")]
    pub coin_state: [[f64; 2]; 2],
    #[serde(default)]
    pub start_position: i64,
    #[serde(default)]
    pub disorder: DisorderConfig,
    #[serde(default = "one")]
    pub ensemble_size: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub phase: PhaseConfig,
    /// Empty selects every artifact the run kind produces.
    #[serde(default)]
    pub outputs: Vec<ArtifactKind>,
}

impl RunConfig {
    pub fn new(run_kind: RunKind) -> Self {
        Self {
            run_kind,
            steps: None,
            window: WindowSpec::Auto,
            angles: ParticleAngles::default(),
            boundary: None,
            boundary_b: None,
            initial_state: default_pair_state(),
            coin_state: default_coin_state(),
            start_position: 0,
            disorder: DisorderConfig::default(),
            ensemble_size: 1,
            master_seed: 0,
            sweep: None,
            phase: PhaseConfig::default(),
            outputs: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::new("config", e.to_string()))
    }

    pub fn steps(&self) -> usize {
        self.steps.unwrap_or_else(|| self.run_kind.default_steps())
    }

    fn max_offset(&self) -> usize {
        match self.run_kind {
            RunKind::Hadamard | RunKind::SingleSplit => self.start_position.unsigned_abs() as usize,
            _ => {
                let (a, b) = self.initial_state.positions;
                a.unsigned_abs().max(b.unsigned_abs()) as usize
            }
        }
    }

    pub fn window(&self) -> LatticeWindow {
        match self.window {
            WindowSpec::Fixed(l) => LatticeWindow::new(l).unwrap_or(LatticeWindow::for_steps(0)),
            WindowSpec::Auto => LatticeWindow::for_steps(self.steps() + self.max_offset()),
        }
    }

    pub fn boundary_a(&self) -> BoundarySpec {
        self.boundary.unwrap_or(BoundarySpec {
            theta_minus: TOPOLOGICAL,
            theta_plus: TRIVIAL,
        })
    }

    pub fn boundary_b(&self) -> BoundarySpec {
        self.boundary_b.unwrap_or_else(|| self.boundary_a())
    }

    pub fn coin_amplitudes(&self) -> [C64; 2] {
        let [a, b] = self.coin_state;
        [C64::new(a[0], a[1]), C64::new(b[0], b[1])]
    }

    pub fn selected_outputs(&self) -> Vec<ArtifactKind> {
        if self.outputs.is_empty() {
            self.run_kind.artifacts().to_vec()
        } else {
            self.outputs.clone()
        }
    }

    /// Fills in defaulted steps and outputs so the manifest echo is explicit.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        c.steps = Some(self.steps());
        c.outputs = self.selected_outputs();
        if matches!(c.run_kind, RunKind::Tptbw) || matches!(&c.sweep, Some(s) if s.walk == SweepWalk::Tptbw) {
            c.boundary = Some(self.boundary_a());
        }
        c
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let steps = self.steps();
        if let WindowSpec::Fixed(l) = self.window {
            let needed = steps + self.max_offset() + 1;
            if l < needed {
                return Err(ConfigError::new(
                    "window",
                    format!("half-width {l} is too small for {steps} steps (need at least {needed})"),
                ));
            }
        }
        if self.ensemble_size == 0 {
            return Err(ConfigError::new("ensemble_size", "must be at least 1"));
        }
        if !self.disorder.half_width.is_finite() || self.disorder.half_width < 0.0 {
            return Err(ConfigError::new("disorder.half_width", "must be finite and non-negative"));
        }
        check_angles("angles.a", self.angles.a)?;
        check_angles("angles.b", self.angles.b)?;
        for (name, b) in [("boundary", self.boundary), ("boundary_b", self.boundary_b)] {
            if let Some(b) = b {
                check_angles(name, b.theta_minus)?;
                check_angles(name, b.theta_plus)?;
            }
        }
        let allowed = self.run_kind.artifacts();
        if let Some(bad) = self.outputs.iter().find(|o| !allowed.contains(o)) {
            return Err(ConfigError::new(
                "outputs",
                format!("{bad:?} is not produced by a {:?} run", self.run_kind),
            ));
        }
        match self.run_kind {
            RunKind::Hadamard | RunKind::SingleSplit => {
                if self.run_kind == RunKind::Hadamard && self.disorder.is_active() {
                    return Err(ConfigError::new("disorder", "the Hadamard walk has no angles to randomize"));
                }
                let [a, b] = self.coin_amplitudes();
                let n = a.norm_sqr() + b.norm_sqr();
                if (n - 1.0).abs() > NORM_TOLERANCE {
                    return Err(ConfigError::new("coin_state", format!("norm squared is {n}, expected 1")));
                }
            }
            RunKind::Tptpw | RunKind::Tptbw => {}
            RunKind::EntropySweep => {
                let sweep = self
                    .sweep
                    .as_ref()
                    .ok_or_else(|| ConfigError::new("sweep", "entropy_sweep needs a sweep section"))?;
                if sweep.axes.len() != 2 {
                    return Err(ConfigError::new(
                        "sweep.axes",
                        format!("exactly two axes are required, got {}", sweep.axes.len()),
                    ));
                }
                for (i, axis) in sweep.axes.iter().enumerate() {
                    SweepParam::parse(&axis.param, sweep.walk)
                        .map_err(|m| ConfigError::new(format!("sweep.axes[{i}].param"), m))?;
                    if axis.count == 0 {
                        return Err(ConfigError::new(format!("sweep.axes[{i}].count"), "must be at least 1"));
                    }
                    if !axis.min.is_finite() || !axis.max.is_finite() {
                        return Err(ConfigError::new(format!("sweep.axes[{i}]"), "bounds must be finite"));
                    }
                }
            }
            RunKind::PhaseDiagram => {
                if self.phase.grid_n < MIN_GRID {
                    return Err(ConfigError::new("phase.grid_n", format!("must be at least {MIN_GRID}")));
                }
                if self.phase.k_points < MIN_K_POINTS {
                    return Err(ConfigError::new("phase.k_points", format!("must be at least {MIN_K_POINTS}")));
                }
            }
        }
        Ok(())
    }
}

fn check_angles(field: &str, a: Angles) -> Result<(), ConfigError> {
    if a.theta1.is_finite() && a.theta2.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::new(field, "angles must be finite"))
    }
}

/// Which side(s) of the boundary a sweep parameter touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Both,
    Minus,
    Plus,
}

/// A sweepable angle: `theta{1,2}{a,b}` with an optional `_minus` / `_plus`
/// suffix for boundary walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepParam {
    pub angle: u8,
    pub particle_b: bool,
    pub side: Side,
}

impl SweepParam {
    pub fn parse(name: &str, walk: SweepWalk) -> Result<Self, String> {
        let undefined = || format!("undefined parameter `{name}` for a {walk:?} sweep");
        let (stem, side) = match name.split_once('_') {
            None => (name, Side::Both),
            Some((stem, "minus")) => (stem, Side::Minus),
            Some((stem, "plus")) => (stem, Side::Plus),
            Some(_) => return Err(undefined()),
        };
        if side != Side::Both && walk != SweepWalk::Tptbw {
            return Err(undefined());
        }
        let (angle, particle_b) = match stem {
            "theta1a" => (1, false),
            "theta2a" => (2, false),
            "theta1b" => (1, true),
            "theta2b" => (2, true),
            _ => return Err(undefined()),
        };
        Ok(Self {
            angle,
            particle_b,
            side,
        })
    }

    fn set(angles: &mut Angles, angle: u8, value: f64) {
        if angle == 1 {
            angles.theta1 = value;
        } else {
            angles.theta2 = value;
        }
    }

    /// Writes `value` into the walk configuration.
    pub fn apply(&self, config: &mut RunConfig, walk: SweepWalk, value: f64) {
        match walk {
            SweepWalk::Tptpw => {
                let target = if self.particle_b { &mut config.angles.b } else { &mut config.angles.a };
                Self::set(target, self.angle, value);
            }
            SweepWalk::Tptbw => {
                let (a, b) = (config.boundary_a(), config.boundary_b());
                let mut spec = if self.particle_b { b } else { a };
                if matches!(self.side, Side::Both | Side::Minus) {
                    Self::set(&mut spec.theta_minus, self.angle, value);
                }
                if matches!(self.side, Side::Both | Side::Plus) {
                    Self::set(&mut spec.theta_plus, self.angle, value);
                }
                if self.particle_b {
                    config.boundary = Some(a);
                    config.boundary_b = Some(spec);
                } else {
                    config.boundary = Some(spec);
                    config.boundary_b = Some(b);
                }
            }
        }
    }
}

/// `none`, `weak`, `strong`, or `width=<radians>`.
pub fn parse_disorder(s: &str) -> Result<(DisorderKind, f64), String> {
    match s {
        "none" => Ok((DisorderKind::None, 0.0)),
        "weak" => Ok((DisorderKind::Uniform, WEAK_DISORDER)),
        "strong" => Ok((DisorderKind::Uniform, STRONG_DISORDER)),
        _ => {
            let w: f64 = s
                .strip_prefix("width=")
                .ok_or_else(|| format!("expected none|weak|strong|width=<radians>, got `{s}`"))?
                .parse()
                .map_err(|e| format!("bad width in `{s}`: {e}"))?;
            if !w.is_finite() || w < 0.0 {
                return Err(format!("width must be finite and non-negative, got {w}"));
            }
            Ok((DisorderKind::Uniform, w))
        }
    }
}

pub fn parse_target(s: &str) -> Result<DisorderTarget, String> {
    match s {
        "a" => Ok(DisorderTarget::A),
        "b" => Ok(DisorderTarget::B),
        "both" => Ok(DisorderTarget::Both),
        _ => Err(format!("expected a|b|both, got `{s}`")),
    }
}

pub fn parse_state(s: &str) -> Result<PairKind, String> {
    match s {
        "psi+" => Ok(PairKind::PsiPlus),
        "psi-" => Ok(PairKind::PsiMinus),
        "sep" => Ok(PairKind::Separable),
        _ => Err(format!("expected psi+|psi-|sep, got `{s}`")),
    }
}

fn parse_floats<const N: usize>(s: &str, what: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("{what} needs {N} comma-separated values, got `{s}`"));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|e| format!("bad number `{p}` in {what}: {e}"))?;
    }
    Ok(out)
}

/// `θ1-,θ2-,θ1+,θ2+`
pub fn parse_boundary(s: &str) -> Result<BoundarySpec, String> {
    let [a, b, c, d] = parse_floats::<4>(s, "boundary")?;
    Ok(BoundarySpec {
        theta_minus: Angles::new(a, b),
        theta_plus: Angles::new(c, d),
    })
}

/// `param:min:max:count`
pub fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [param, min, max, count] = parts[..] else {
        return Err(format!("expected param:min:max:count, got `{s}`"));
    };
    Ok(SweepAxis {
        param: param.to_string(),
        min: min.parse().map_err(|e| format!("bad min in `{s}`: {e}"))?,
        max: max.parse().map_err(|e| format!("bad max in `{s}`: {e}"))?,
        count: count.parse().map_err(|e| format!("bad count in `{s}`: {e}"))?,
    })
}

/// Command-line values that override the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub disorder: Option<(DisorderKind, f64)>,
    pub disorder_target: Option<DisorderTarget>,
    pub state: Option<PairKind>,
    pub theta1a: Option<f64>,
    pub theta2a: Option<f64>,
    pub theta1b: Option<f64>,
    pub theta2b: Option<f64>,
    pub boundary: Option<BoundarySpec>,
    pub ensemble: Option<usize>,
    pub sweep_walk: Option<SweepWalk>,
    pub axes: Vec<SweepAxis>,
    pub scalar: Option<SweepScalar>,
    pub grid_n: Option<usize>,
    pub k_points: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, c: &mut RunConfig) {
        if let Some(s) = self.seed {
            c.master_seed = s;
        }
        if let Some(n) = self.steps {
            c.steps = Some(n);
        }
        if let Some((kind, w)) = self.disorder {
            c.disorder.kind = kind;
            c.disorder.half_width = w;
        }
        if let Some(t) = self.disorder_target {
            c.disorder.target = t;
        }
        if let Some(k) = self.state {
            c.initial_state.kind = k;
        }
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut c.angles.a.theta1, self.theta1a);
        set(&mut c.angles.a.theta2, self.theta2a);
        set(&mut c.angles.b.theta1, self.theta1b);
        set(&mut c.angles.b.theta2, self.theta2b);
        if let Some(b) = self.boundary {
            c.boundary = Some(b);
        }
        if let Some(e) = self.ensemble {
            c.ensemble_size = e;
        }
        if self.sweep_walk.is_some() || !self.axes.is_empty() || self.scalar.is_some() {
            let sweep = c.sweep.get_or_insert_with(|| SweepConfig {
                walk: SweepWalk::Tptpw,
                axes: Vec::new(),
                scalar: SweepScalar::Final,
            });
            if let Some(w) = self.sweep_walk {
                sweep.walk = w;
            }
            if !self.axes.is_empty() {
                sweep.axes = self.axes.clone();
            }
            if let Some(s) = self.scalar {
                sweep.scalar = s;
            }
        }
        if let Some(g) = self.grid_n {
            c.phase.grid_n = g;
        }
        if let Some(k) = self.k_points {
            c.phase.k_points = k;
        }
    }
}

impl fmt::Display for RunKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).map_err(|_| fmt::Error)?;
        write!(f, "{}", s.as_str().unwrap_or("?"))
    }
}
