//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Tolerances are pinned below.

mod common;

use std::f64::consts::PI;
use std::path::Path;
use std::time::{Duration, Instant};

use common::{Z0, Z1};
use qwalk::experiment::config::{parse_axis, SweepConfig, SweepScalar, SweepWalk};
use qwalk::experiment::{run, write_artifacts, RunConfig, RunKind};
use qwalk::pair::{
    self, joint_distribution_direct, joint_distribution_interference, make_pair_state, CoinBasisEvolution,
    InitialPairState, JointDistribution, PairKind, Sign,
};
use qwalk::topology::winding_number;
use qwalk::walk::{
    self, AngleField, Angles, CoinOperator, DisorderKind, DisorderSpec, DisorderTarget, Particle, STRONG_DISORDER,
};
use qwalk::{LatticeWindow, SingleParticleState, TwoParticleState};

const HADAMARD_ENTROPY: f64 = 0.87;
const HADAMARD_ENTROPY_TOL: f64 = 0.02;
const HADAMARD_RUNTIME: Duration = Duration::from_secs(1);
const BALLISTIC_RATIO: f64 = 2.0;
const BALLISTIC_RATIO_TOL: f64 = 0.2;
const DISORDERED_RATIO_MAX: f64 = 1.5;
const DISORDERED_ENSEMBLE: usize = 20;
const INTERFERENCE_TOL: f64 = 1e-10;
const INTERFERENCE_RUNTIME: Duration = Duration::from_secs(10);
const BOUNDARY_FACTOR_MIN: f64 = 5.0;
const BOUNDARY_NEAR: i64 = 2;
const LOCALIZATION_FACTOR_MIN: f64 = 3.0;
const LOCALIZATION_NEAR: i64 = 5;
const WIPED_OUT_FACTOR_MAX: f64 = 2.0;
const DISORDER_SEED: u64 = 1;
const TPTPW_MAX_ENTROPY: f64 = 1.3;
const TPTBW_MAX_ENTROPY: f64 = 1.2;
const MAX_ENTROPY_TOL: f64 = 0.15;
const NORM_DRIFT_MAX: f64 = 1e-12;
const DATA_SET_RUNTIME: Duration = Duration::from_secs(300);

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn config(json: &str) -> RunConfig {
    RunConfig::from_json(json).unwrap()
}

fn std_dev(window: LatticeWindow, p: &[f64]) -> f64 {
    walk::position_variance(window, p).sqrt()
}

fn hadamard_entropy() -> Verdict {
    let start = Instant::now();
    let a = run(&config(r#"{"run_kind": "hadamard", "steps": 100}"#)).unwrap();
    let elapsed = start.elapsed();
    let s = a.entropy.unwrap().mean[100];
    let pass = (s - HADAMARD_ENTROPY).abs() <= HADAMARD_ENTROPY_TOL && elapsed < HADAMARD_RUNTIME;
    verdict(pass, format!("S(100) = {s:.4} bits (target {HADAMARD_ENTROPY} ± {HADAMARD_ENTROPY_TOL}), {elapsed:.2?}"))
}

fn spreading() -> Verdict {
    let sigma = |json: String| {
        let d = run(&config(&json)).unwrap().distribution.unwrap();
        std_dev(d.window, &d.probability)
    };
    let hadamard = |n| sigma(format!(r#"{{"run_kind": "hadamard", "steps": {n}}}"#));
    let clean = hadamard(100) / hadamard(50);
    // The disorder stream is keyed by step, so the 50-step runs are prefixes
    // of the 100-step runs.
    let disordered = |n| {
        sigma(format!(
            r#"{{"run_kind": "single_split", "steps": {n}, "ensemble_size": {DISORDERED_ENSEMBLE},
                "master_seed": {DISORDER_SEED},
                "disorder": {{"kind": "uniform", "half_width": {STRONG_DISORDER}, "target": "a"}}}}"#
        ))
    };
    let dis = disordered(100) / disordered(50);
    let pass = (clean - BALLISTIC_RATIO).abs() <= BALLISTIC_RATIO_TOL && dis < DISORDERED_RATIO_MAX;
    verdict(
        pass,
        format!("Hadamard σ(100)/σ(50) = {clean:.3}; strong disorder (ensemble {DISORDERED_ENSEMBLE}) = {dis:.3}"),
    )
}

fn interference_equivalence() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for n in [1, 2, 5, 10, 20] {
        let window = LatticeWindow::for_steps(n);
        let weak = DisorderSpec::weak(DisorderTarget::Both, DISORDER_SEED);
        let cases = [
            (AngleField::constant(window, n, Z1), AngleField::constant(window, n, Z1)),
            (AngleField::constant(window, n, Z1), AngleField::constant(window, n, Z0)),
            (
                AngleField::sample(Z1, &weak, Particle::A, n, window).unwrap(),
                AngleField::sample(Z0, &weak, Particle::B, n, window).unwrap(),
            ),
        ];
        for (fa, fb) in &cases {
            let ea = CoinBasisEvolution::run(window, 0, fa, n).unwrap();
            let eb = CoinBasisEvolution::run(window, 0, fb, n).unwrap();
            for (kind, sign) in [(PairKind::PsiPlus, Sign::Plus), (PairKind::PsiMinus, Sign::Minus)] {
                let formula = joint_distribution_interference(&ea, &eb, sign).unwrap();
                let mut s = make_pair_state(&InitialPairState::at_origin(kind), window).unwrap();
                pair::evolve_pair(&mut s, fa, fb, n, |_, _| Ok(())).unwrap();
                let direct = joint_distribution_direct(&s);
                for (x, y) in formula.values().iter().zip(direct.values()) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= INTERFERENCE_TOL && elapsed < INTERFERENCE_RUNTIME;
    verdict(pass, format!("max |formula − direct| = {worst:.2e}, {elapsed:.2?}"))
}

fn phase_anchors() -> Verdict {
    let w = |t1, t2, k| winding_number(t1, t2, k).map(|v| v.winding).ok();
    let anchors = [(-PI / 2.0, PI / 4.0, 1), (-PI / 2.0, 3.0 * PI / 4.0, 0)];
    let mut pass = true;
    let mut detail = Vec::new();
    for (t1, t2, expected) in anchors {
        let (coarse, fine) = (w(t1, t2, 256), w(t1, t2, 1024));
        pass &= coarse == Some(expected) && fine == Some(expected);
        detail.push(format!("W({t1:.3}, {t2:.3}) = {coarse:?} @256, {fine:?} @1024"));
    }
    verdict(pass, detail.join("; "))
}

fn pair_config(kind: RunKind, a: Angles, b: Angles, disorder: Option<DisorderTarget>) -> RunConfig {
    let mut c = RunConfig::new(kind);
    c.steps = Some(100);
    c.angles.a = a;
    c.angles.b = b;
    if let Some(target) = disorder {
        c.disorder.kind = DisorderKind::Uniform;
        c.disorder.half_width = STRONG_DISORDER;
        c.disorder.target = target;
        c.master_seed = DISORDER_SEED;
    }
    c
}

fn joint(c: &RunConfig) -> JointDistribution {
    run(c).unwrap().joint.unwrap()
}

fn near_either(j: &JointDistribution) -> f64 {
    j.mass_where(|i, k| i.abs() <= BOUNDARY_NEAR || k.abs() <= BOUNDARY_NEAR)
}

/// Boundary mass over the larger of the two uniform-phase controls.
fn boundary_factor(disorder: Option<DisorderTarget>) -> (f64, f64, f64, f64) {
    let bw = near_either(&joint(&pair_config(RunKind::Tptbw, Z1, Z0, disorder)));
    let c1 = near_either(&joint(&pair_config(RunKind::Tptpw, Z1, Z1, disorder)));
    let c0 = near_either(&joint(&pair_config(RunKind::Tptpw, Z0, Z0, disorder)));
    (bw / c1.max(c0), bw, c1, c0)
}

fn boundary_state() -> Verdict {
    let (factor, bw, c1, c0) = boundary_factor(None);
    verdict(
        factor >= BOUNDARY_FACTOR_MIN,
        format!("either |x| ≤ {BOUNDARY_NEAR}: boundary {bw:.4}, controls Z=1 {c1:.4} / Z=0 {c0:.4}, factor {factor:.2} (≥ {BOUNDARY_FACTOR_MIN})"),
    )
}

fn disorder_effects() -> Verdict {
    let near_a = |c: &RunConfig| {
        let j = joint(c);
        let (ma, _) = j.marginals();
        j.window().positions().zip(ma).filter(|(x, _)| x.abs() <= LOCALIZATION_NEAR).map(|(_, p)| p).sum::<f64>()
    };
    let clean = near_a(&pair_config(RunKind::Tptpw, Z1, Z0, None));
    let dis = near_a(&pair_config(RunKind::Tptpw, Z1, Z0, Some(DisorderTarget::A)));
    let localization = dis / clean;
    let (wiped, bw, c1, c0) = boundary_factor(Some(DisorderTarget::Both));
    let pass = localization >= LOCALIZATION_FACTOR_MIN && wiped < WIPED_OUT_FACTOR_MAX;
    verdict(
        pass,
        format!(
            "marginal-A |x| ≤ {LOCALIZATION_NEAR}: clean {clean:.4}, strong {dis:.4}, factor {localization:.2} (≥ {LOCALIZATION_FACTOR_MIN}); \
             disordered boundary factor {wiped:.2} (< {WIPED_OUT_FACTOR_MAX}; {bw:.4} vs {c1:.4} / {c0:.4})"
        ),
    )
}

fn sweep_max(walk: SweepWalk, axes: [&str; 2]) -> f64 {
    let mut c = RunConfig::new(RunKind::EntropySweep);
    c.steps = Some(50);
    c.sweep = Some(SweepConfig {
        walk,
        axes: axes.iter().map(|a| parse_axis(&format!("{a}:{}:{}:16", -PI, PI)).unwrap()).collect(),
        scalar: SweepScalar::Final,
    });
    run(&c).unwrap().heatmap.unwrap().max()
}

fn entropy_magnitudes() -> Verdict {
    let pw = sweep_max(SweepWalk::Tptpw, ["theta1a", "theta2a"]);
    let bw = sweep_max(SweepWalk::Tptbw, ["theta1a", "theta2a_plus"]);
    let pass = (pw - TPTPW_MAX_ENTROPY).abs() <= MAX_ENTROPY_TOL && (bw - TPTBW_MAX_ENTROPY).abs() <= MAX_ENTROPY_TOL;
    verdict(
        pass,
        format!(
            "max final S: TPTPW {pw:.3} (target {TPTPW_MAX_ENTROPY} ± {MAX_ENTROPY_TOL}), TPTBW {bw:.3} (target {TPTBW_MAX_ENTROPY} ± {MAX_ENTROPY_TOL})"
        ),
    )
}

fn random_angles(window: LatticeWindow, steps: usize, seed: u64) -> AngleField {
    AngleField::sample(Angles::new(0.0, 0.0), &DisorderSpec::strong(DisorderTarget::Both, seed), Particle::A, steps, window)
        .unwrap()
}

fn invariants() -> Verdict {
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };
    // Exhaustive over windows L ≤ 8, basis starts and evolutions that stay inside.
    for l in 1..=8usize {
        let window = LatticeWindow::new(l).unwrap();
        let field = random_angles(window, l, l as u64);
        for x0 in -(l as i64) + 1..l as i64 {
            let n = l - 1 - x0.unsigned_abs() as usize;
            for c in 0..2 {
                let s = SingleParticleState::basis(window, x0, c).unwrap();
                let t = walk::single_trajectory(s, n, |s, t| walk::split_step(s, &field, t)).unwrap();
                let rho = t.final_state.reduce_to_coin();
                check((t.final_state.norm_sqr() - 1.0).abs() < NORM_DRIFT_MAX, format!("norm L={l} x0={x0}"));
                check((rho.trace() - 1.0).abs() < 1e-12 && rho.hermiticity_defect() < 1e-12, format!("ρ L={l}"));
                check(t.entropy_bits.iter().all(|e| (0.0..=1.0).contains(e)), format!("entropy L={l}"));
            }
        }
        for k in 0..4 * l {
            let theta = field.angles_at(0, 0).theta1 + k as f64;
            check(CoinOperator::rotation(theta).unitarity_defect() < 1e-12, format!("coin θ={theta}"));
        }
    }
    // Pairs on small windows: every initial kind, identical and distinct fields.
    for l in 1..=6usize {
        let window = LatticeWindow::new(l).unwrap();
        let n = l - 1;
        let (fa, fb) = (random_angles(window, n, 100 + l as u64), random_angles(window, n, 200 + l as u64));
        for kind in [PairKind::PsiPlus, PairKind::PsiMinus, PairKind::Separable] {
            for same in [true, false] {
                let fb = if same { &fa } else { &fb };
                let s = make_pair_state(&InitialPairState::at_origin(kind), window).unwrap();
                let t = pair::pair_entropy_series(s, &fa, fb, n).unwrap();
                let j = joint_distribution_direct(&t.final_state);
                check((t.final_state.norm_sqr() - 1.0).abs() < NORM_DRIFT_MAX, format!("pair norm L={l}"));
                check((j.total() - 1.0).abs() < 1e-12, format!("joint total L={l}"));
                check(t.entropy.entropy_bits.iter().all(|e| (0.0..=2.0).contains(e)), format!("pair entropy L={l}"));
                if same && kind != PairKind::Separable {
                    let sym = window.positions().all(|i| window.positions().all(|k| (j.get(i, k) - j.get(k, i)).abs() < 1e-12));
                    check(sym, format!("exchange symmetry L={l} {kind:?}"));
                }
            }
        }
    }
    // Sampled large runs.
    let n = 100;
    let window = LatticeWindow::for_steps(n);
    let fa = random_angles(window, n, 7);
    let fb = random_angles(window, n, 8);
    let sa = SingleParticleState::basis(window, 0, 0).unwrap();
    let sb = SingleParticleState::basis(window, 0, 1).unwrap();
    let evolve = |s: &SingleParticleState, f: &AngleField| {
        walk::single_trajectory(s.clone(), n, |s, t| walk::split_step(s, f, t)).unwrap().final_state
    };
    let (ea, eb) = (evolve(&sa, &fa), evolve(&sb, &fb));
    let mut product = TwoParticleState::tensor(&sa, &sb).unwrap();
    pair::evolve_pair(&mut product, &fa, &fb, n, |_, _| Ok(())).unwrap();
    check((product.norm_sqr() - 1.0).abs() < NORM_DRIFT_MAX, "large pair norm".into());
    let j = joint_distribution_direct(&product);
    let (pa, pb) = (ea.position_distribution(), eb.position_distribution());
    let factorizes = window.positions().enumerate().all(|(a, i)| {
        window.positions().enumerate().all(|(b, k)| (j.get(i, k) - pa[a] * pb[b]).abs() < 1e-12)
    });
    check(factorizes, "separable factorization".into());
    let seeded = pair_config(RunKind::Tptbw, Z1, Z0, Some(DisorderTarget::Both));
    let (r1, r2) = (run(&seeded).unwrap(), run(&seeded).unwrap());
    check(r1.entropy.unwrap().mean == r2.entropy.unwrap().mean, "determinism (entropy)".into());
    check(r1.joint.unwrap() == r2.joint.unwrap(), "determinism (joint)".into());
    let detail = if failures.is_empty() { "all invariants hold".to_string() } else { failures.join(", ") };
    verdict(failures.is_empty(), detail)
}

fn data_set_configs() -> Verdict {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut paths: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    let out = tempfile::TempDir::new().unwrap();
    let start = Instant::now();
    let mut failures = Vec::new();
    for p in &paths {
        let name = p.file_stem().unwrap().to_string_lossy().into_owned();
        let result = RunConfig::from_json(&std::fs::read_to_string(p).unwrap())
            .map_err(|e| e.to_string())
            .and_then(|c| {
                let too_big = c.steps() > 100
                    || c.sweep.as_ref().is_some_and(|s| s.axes.iter().any(|a| a.count > 16));
                if too_big {
                    return Err("exceeds desk scale".into());
                }
                let a = run(&c).map_err(|e| e.to_string())?;
                write_artifacts(&a, &out.path().join(&name)).map_err(|e| e.to_string())
            });
        if let Err(e) = result {
            failures.push(format!("{name}: {e}"));
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < DATA_SET_RUNTIME && paths.len() >= 20;
    let detail = format!("{} configs in {elapsed:.1?} (< {DATA_SET_RUNTIME:?}){}", paths.len(), if failures.is_empty() { String::new() } else { format!("; failed: {}", failures.join(", ")) });
    verdict(pass, detail)
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 Hadamard entropy asymptote", hadamard_entropy),
        ("2 ballistic vs disordered spreading", spreading),
        ("3 interference formula equals direct evolution", interference_equivalence),
        ("4 phase-diagram anchors", phase_anchors),
        ("5 boundary state", boundary_state),
        ("6 disorder localization and boundary destruction", disorder_effects),
        ("7 entropy magnitudes", entropy_magnitudes),
        ("8 invariant suites", invariants),
        ("9 data-set emission", data_set_configs),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let v = check();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {name}: {status} — {} [{:.1?}]", v.detail, start.elapsed());
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
