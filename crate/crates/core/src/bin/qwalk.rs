use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qwalk::experiment::config::{
    parse_axis, parse_boundary, parse_disorder, parse_state, parse_target, Overrides, SweepAxis, SweepScalar,
    SweepWalk,
};
use qwalk::experiment::{run, write_artifacts, ConfigError, ExperimentError, RunArtifacts, RunConfig, RunKind};
use qwalk::pair::PairKind;
use qwalk::walk::{BoundarySpec, DisorderKind, DisorderTarget};

#[derive(Parser)]
#[command(name = "qwalk", version, about = "One- and two-particle split-step quantum walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single walker: Hadamard or split-step.
    Walk {
        /// Defaults to the config file's kind, else `split`.
        #[arg(long, value_enum)]
        kind: Option<WalkKind>,
        #[command(flatten)]
        common: Common,
    },
    /// Two walkers in uniform phases (tptpw) or across a phase boundary (tptbw).
    Pair {
        /// Defaults to the config file's walk, else `tptpw`.
        #[arg(long, value_enum)]
        walk: Option<PairWalk>,
        #[command(flatten)]
        common: Common,
    },
    /// Final or long-time entanglement entropy over a two-parameter grid.
    Sweep {
        #[arg(long, value_enum)]
        walk: Option<PairWalk>,
        /// `param:min:max:count`, given twice.
        #[arg(long = "axis", value_parser = parse_axis, allow_hyphen_values = true)]
        axes: Vec<SweepAxis>,
        #[arg(long, value_enum)]
        scalar: Option<Scalar>,
        #[command(flatten)]
        common: Common,
    },
    /// Winding numbers over (θ1, θ2) ∈ [−π, π]².
    PhaseDiagram {
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        k_points: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WalkKind {
    Hadamard,
    Split,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairWalk {
    Tptpw,
    Tptbw,
}

impl From<PairWalk> for SweepWalk {
    fn from(w: PairWalk) -> Self {
        match w {
            PairWalk::Tptpw => SweepWalk::Tptpw,
            PairWalk::Tptbw => SweepWalk::Tptbw,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Scalar {
    Final,
    Mean,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<usize>,
    /// none | weak | strong | width=<radians>
    #[arg(long, value_parser = parse_disorder)]
    disorder: Option<(DisorderKind, f64)>,
    /// a | b | both
    #[arg(long, value_parser = parse_target)]
    disorder_target: Option<DisorderTarget>,
    /// psi+ | psi- | sep
    #[arg(long, value_parser = parse_state)]
    state: Option<PairKind>,
    #[arg(long, allow_negative_numbers = true)]
    theta1a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta2a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta1b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta2b: Option<f64>,
    /// `θ1-,θ2-,θ1+,θ2+`: angles for x ≤ 0 and x > 0.
    #[arg(long, value_parser = parse_boundary, allow_hyphen_values = true)]
    boundary: Option<BoundarySpec>,
    #[arg(long)]
    ensemble: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            steps: self.steps,
            disorder: self.disorder,
            disorder_target: self.disorder_target,
            state: self.state,
            theta1a: self.theta1a,
            theta2a: self.theta2a,
            theta1b: self.theta1b,
            theta2b: self.theta2b,
            boundary: self.boundary,
            ensemble: self.ensemble,
            ..Default::default()
        }
    }

    /// Loads the config file (if any). `family` lists the run kinds this
    /// subcommand accepts; its first entry is the default.
    fn load(&self, family: &[RunKind], chosen: Option<RunKind>) -> Result<RunConfig, ExperimentError> {
        let Some(path) = &self.config else {
            return Ok(RunConfig::new(chosen.unwrap_or(family[0])));
        };
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
            path: path.clone(),
            source,
        })?;
        let mut c = RunConfig::from_json(&text)?;
        if !family.contains(&c.run_kind) {
            let expected: Vec<String> = family.iter().map(ToString::to_string).collect();
            return Err(ConfigError::new(
                "run_kind",
                format!("`{}` does not fit this subcommand (expected {})", c.run_kind, expected.join(" or ")),
            )
            .into());
        }
        if let Some(k) = chosen {
            c.run_kind = k;
        }
        Ok(c)
    }
}

fn prepare(command: &Command) -> Result<(RunConfig, &Common), ExperimentError> {
    let (family, chosen, common, extra): (&[RunKind], _, _, _) = match command {
        Command::Walk { kind, common } => {
            let k = kind.map(|k| match k {
                WalkKind::Hadamard => RunKind::Hadamard,
                WalkKind::Split => RunKind::SingleSplit,
            });
            (&[RunKind::SingleSplit, RunKind::Hadamard], k, common, Overrides::default())
        }
        Command::Pair { walk, common } => {
            let k = walk.map(|w| match w {
                PairWalk::Tptpw => RunKind::Tptpw,
                PairWalk::Tptbw => RunKind::Tptbw,
            });
            (&[RunKind::Tptpw, RunKind::Tptbw], k, common, Overrides::default())
        }
        Command::Sweep {
            walk,
            axes,
            scalar,
            common,
        } => {
            let o = Overrides {
                sweep_walk: walk.map(Into::into),
                axes: axes.clone(),
                scalar: scalar.map(|s| match s {
                    Scalar::Final => SweepScalar::Final,
                    Scalar::Mean => SweepScalar::LongTimeMean,
                }),
                ..Default::default()
            };
            (&[RunKind::EntropySweep], None, common, o)
        }
        Command::PhaseDiagram { grid, k_points, common } => {
            let o = Overrides {
                grid_n: *grid,
                k_points: *k_points,
                ..Default::default()
            };
            (&[RunKind::PhaseDiagram], None, common, o)
        }
    };
    let mut config = common.load(family, chosen)?;
    common.overrides().apply(&mut config);
    extra.apply(&mut config);
    Ok((config, common))
}

fn summarize(a: &RunArtifacts) -> String {
    let c = &a.manifest.config;
    let mut s = format!("{} run, {} steps, window ±{}", c.run_kind, c.steps(), a.manifest.window_half_width);
    if let Some(e) = &a.entropy {
        s += &format!(", final entropy {:.6} bits", e.mean.last().copied().unwrap_or(0.0));
    }
    if let Some(h) = &a.heatmap {
        s += &format!(", {} cells, max {:.6} bits", h.values.len(), h.max());
    }
    if let Some(p) = &a.phase {
        let boundary = p.cells.iter().filter(|c| c.winding().is_none()).count();
        s += &format!(", {}² cells ({boundary} gapless)", p.grid_n());
    }
    s
}

fn execute(cli: &Cli) -> Result<(), ExperimentError> {
    let (config, common) = prepare(&cli.command)?;
    let artifacts = run(&config)?;
    let written = write_artifacts(&artifacts, &common.out)?;
    // A closed stdout (e.g. piped into `head`) is not an error.
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", summarize(&artifacts));
    for p in written {
        let _ = writeln!(out, "wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let prefix = match &e {
                ExperimentError::Config(ConfigError { .. }) => "configuration error",
                ExperimentError::Walk(_) | ExperimentError::Topology(_) => "numerical error",
                ExperimentError::Io { .. } => "i/o error",
            };
            eprintln!("qwalk: {prefix}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
