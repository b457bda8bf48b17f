use chrono::{SecondsFormat, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ArtifactKind, RunConfig, RunKind, SweepAxis, SweepConfig, SweepParam, SweepScalar, SweepWalk};
use super::seeds;
use super::ExperimentError;
use crate::error::Result;
use crate::lattice::{LatticeWindow, SingleParticleState};
use crate::pair::{self, EntropySeries, JointDistribution, PairTrajectory};
use crate::topology::{self, PhaseDiagram};
use crate::walk::{self, AngleField, Particle, SingleTrajectory};

/// Per-step coin entropy, averaged over the ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTable {
    pub mean: Vec<f64>,
    /// Sample standard deviation; present for ensembles of two or more.
    pub std: Option<Vec<f64>>,
}

impl EntropyTable {
    fn from_runs(runs: &[Vec<f64>]) -> Self {
        let k = runs.len() as f64;
        let len = runs[0].len();
        let mean: Vec<f64> = (0..len).map(|t| runs.iter().map(|r| r[t]).sum::<f64>() / k).collect();
        let std = (runs.len() > 1).then(|| {
            (0..len)
                .map(|t| {
                    let ss: f64 = runs.iter().map(|r| (r[t] - mean[t]).powi(2)).sum();
                    (ss / (k - 1.0)).sqrt()
                })
                .collect()
        });
        Self { mean, std }
    }

    pub fn scalar(&self, kind: SweepScalar) -> f64 {
        let series = EntropySeries {
            steps: (0..self.mean.len()).collect(),
            entropy_bits: self.mean.clone(),
        };
        match kind {
            SweepScalar::Final => series.last(),
            SweepScalar::LongTimeMean => series.long_time_mean(),
        }
        .unwrap_or(0.0)
    }
}

/// Single-walker position distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    pub window: LatticeWindow,
    pub probability: Vec<f64>,
}

impl PositionDistribution {
    pub fn get(&self, x: i64) -> f64 {
        self.window.index(x).map_or(0.0, |i| self.probability[i])
    }
}

/// Sweep scalar on a two-axis grid; `values[i * n2 + j]` is at
/// `(axes[0] point i, axes[1] point j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub axes: [SweepAxis; 2],
    pub scalar: SweepScalar,
    pub values: Vec<f64>,
}

impl Heatmap {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.axes[1].count + j]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Provenance record written next to the data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    /// The configuration with every default filled in; running it again
    /// reproduces the data files exactly.
    pub config: RunConfig,
    pub window_half_width: usize,
    pub replicate_seeds: Vec<u64>,
    pub seed_scheme: String,
    pub sweep_scalar: Option<SweepScalar>,
    #[serde(default)]
    pub files: Vec<String>,
    pub version: String,
    pub started_at: String,
    pub finished_at: String,
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub manifest: Manifest,
    pub entropy: Option<EntropyTable>,
    pub distribution: Option<PositionDistribution>,
    pub joint: Option<JointDistribution>,
    pub phase: Option<PhaseDiagram>,
    pub heatmap: Option<Heatmap>,
}

const SEED_SCHEME: &str = "replicate r uses derive(master_seed, 1, r); sweep cell c uses \
master_seed' = derive(master_seed, 2, c); derive(s, d, i) is the first u64 of ChaCha8 seeded \
from s on stream d at word 2i";

/// Angle field of the single split-step walker (particle A's angles).
pub fn single_field(config: &RunConfig, seed: u64) -> Result<AngleField> {
    let window = config.window();
    AngleField::sample(config.angles.a, &config.disorder.with_seed(seed), Particle::A, config.steps(), window)
}

/// Fields of both walkers: uniform angles for `tptpw`, a phase boundary for
/// `tptbw`, randomized per the disorder settings.
pub fn pair_fields(config: &RunConfig, walk: SweepWalk, seed: u64) -> Result<(AngleField, AngleField)> {
    let (window, steps) = (config.window(), config.steps());
    let disorder = config.disorder.with_seed(seed);
    let (a, b) = match walk {
        SweepWalk::Tptpw => (
            AngleField::constant(window, steps, config.angles.a),
            AngleField::constant(window, steps, config.angles.b),
        ),
        SweepWalk::Tptbw => (
            AngleField::boundary(&config.boundary_a(), steps, window),
            AngleField::boundary(&config.boundary_b(), steps, window),
        ),
    };
    Ok((a.randomized(&disorder, Particle::A)?, b.randomized(&disorder, Particle::B)?))
}

pub fn run_single_replicate(config: &RunConfig, seed: u64) -> Result<SingleTrajectory> {
    let window = config.window();
    let state = SingleParticleState::new(window, config.start_position, config.coin_amplitudes())?;
    if config.run_kind == RunKind::Hadamard {
        walk::single_trajectory(state, config.steps(), |s, _| walk::hadamard_step(s))
    } else {
        let field = single_field(config, seed)?;
        walk::single_trajectory(state, config.steps(), |s, t| walk::split_step(s, &field, t))
    }
}

pub fn run_pair_replicate(config: &RunConfig, walk: SweepWalk, seed: u64) -> Result<PairTrajectory> {
    let state = pair::make_pair_state(&config.initial_state, config.window())?;
    let (fa, fb) = pair_fields(config, walk, seed)?;
    pair::pair_entropy_series(state, &fa, &fb, config.steps())
}

fn pair_walk(kind: RunKind) -> SweepWalk {
    if kind == RunKind::Tptbw {
        SweepWalk::Tptbw
    } else {
        SweepWalk::Tptpw
    }
}

/// Validates `config`, runs it and collects the selected artifacts.
pub fn run(config: &RunConfig) -> std::result::Result<RunArtifacts, ExperimentError> {
    config.validate()?;
    let started_at = now();
    let config = config.resolved();
    let outputs = config.selected_outputs();
    let wants = |k| outputs.contains(&k);
    let replicate_seeds = match config.run_kind {
        RunKind::PhaseDiagram | RunKind::EntropySweep => Vec::new(),
        _ => seeds::replicate_seeds(config.master_seed, config.ensemble_size),
    };
    let mut artifacts = RunArtifacts {
        manifest: Manifest {
            config: config.clone(),
            window_half_width: config.window().half_width(),
            replicate_seeds: replicate_seeds.clone(),
            seed_scheme: SEED_SCHEME.to_string(),
            sweep_scalar: config.sweep.as_ref().map(|s| s.scalar),
            files: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_at,
            finished_at: String::new(),
        },
        entropy: None,
        distribution: None,
        joint: None,
        phase: None,
        heatmap: None,
    };

    match config.run_kind {
        RunKind::Hadamard | RunKind::SingleSplit => {
            let runs = replicate_seeds
                .par_iter()
                .map(|&s| run_single_replicate(&config, s))
                .collect::<Result<Vec<_>>>()?;
            let entropies: Vec<_> = runs.iter().map(|r| r.entropy_bits.clone()).collect();
            if wants(ArtifactKind::Entropy) {
                artifacts.entropy = Some(EntropyTable::from_runs(&entropies));
            }
            if wants(ArtifactKind::Distribution) {
                let window = config.window();
                let mut probability = vec![0.0; window.n_sites()];
                for r in &runs {
                    for (acc, p) in probability.iter_mut().zip(r.final_state.position_distribution()) {
                        *acc += p;
                    }
                }
                probability.iter_mut().for_each(|p| *p /= runs.len() as f64);
                artifacts.distribution = Some(PositionDistribution { window, probability });
            }
        }
        RunKind::Tptpw | RunKind::Tptbw => {
            let walk = pair_walk(config.run_kind);
            let want_joint = wants(ArtifactKind::Joint);
            let runs = replicate_seeds
                .par_iter()
                .map(|&s| {
                    let t = run_pair_replicate(&config, walk, s)?;
                    let joint = want_joint.then(|| pair::joint_distribution_direct(&t.final_state));
                    Ok((t.entropy.entropy_bits, joint))
                })
                .collect::<Result<Vec<_>>>()?;
            if wants(ArtifactKind::Entropy) {
                let entropies: Vec<_> = runs.iter().map(|r| r.0.clone()).collect();
                artifacts.entropy = Some(EntropyTable::from_runs(&entropies));
            }
            if want_joint {
                let joints: Vec<_> = runs.into_iter().filter_map(|r| r.1).collect();
                artifacts.joint = Some(JointDistribution::mean(&joints)?);
            }
        }
        RunKind::EntropySweep => {
            let sweep = config.sweep.as_ref().expect("validated sweep section");
            artifacts.heatmap = Some(run_sweep(&config, sweep)?);
        }
        RunKind::PhaseDiagram => {
            artifacts.phase = Some(topology::phase_diagram(config.phase.grid_n, config.phase.k_points)?);
        }
    }
    artifacts.manifest.finished_at = now();
    Ok(artifacts)
}

/// The configuration of a single sweep cell, runnable on its own as a
/// `tptpw` / `tptbw` run with the same entropy series.
pub fn sweep_cell_config(config: &RunConfig, sweep: &SweepConfig, i: usize, j: usize) -> RunConfig {
    let mut cell = config.clone();
    cell.run_kind = match sweep.walk {
        SweepWalk::Tptpw => RunKind::Tptpw,
        SweepWalk::Tptbw => RunKind::Tptbw,
    };
    cell.sweep = None;
    cell.outputs = vec![ArtifactKind::Entropy];
    for (axis, k) in sweep.axes.iter().zip([i, j]) {
        let param = SweepParam::parse(&axis.param, sweep.walk).expect("validated sweep parameter");
        param.apply(&mut cell, sweep.walk, axis.points()[k]);
    }
    cell.master_seed = seeds::cell_seed(config.master_seed, i * sweep.axes[1].count + j);
    cell
}

fn run_sweep(config: &RunConfig, sweep: &SweepConfig) -> Result<Heatmap> {
    let (n1, n2) = (sweep.axes[0].count, sweep.axes[1].count);
    let values = (0..n1 * n2)
        .into_par_iter()
        .map(|c| {
            let cell = sweep_cell_config(config, sweep, c / n2, c % n2);
            let runs = seeds::replicate_seeds(cell.master_seed, cell.ensemble_size)
                .into_iter()
                .map(|s| Ok(run_pair_replicate(&cell, sweep.walk, s)?.entropy.entropy_bits))
                .collect::<Result<Vec<_>>>()?;
            Ok(EntropyTable::from_runs(&runs).scalar(sweep.scalar))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Heatmap {
        axes: [sweep.axes[0].clone(), sweep.axes[1].clone()],
        scalar: sweep.scalar,
        values,
    })
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}
