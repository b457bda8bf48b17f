//! Values frozen from reference runs. A change here means the numerics (or
//! the seeded disorder stream) changed, not just formatting.

#![allow(clippy::excessive_precision)]

use qwalk::experiment::config::{parse_axis, SweepConfig, SweepScalar, SweepWalk};
use qwalk::experiment::{run, run_single_replicate, seeds, RunConfig};
use qwalk::pair::EntropySeries;

fn close(got: f64, expected: f64) -> bool {
    (got - expected).abs() <= 1e-9 * expected.abs().max(1e-12)
}

fn config(json: &str) -> RunConfig {
    RunConfig::from_json(json).unwrap()
}

#[test]
fn strong_disorder_single_walker() {
    let c = config(
        r#"{"run_kind": "single_split", "steps": 100, "master_seed": 42,
            "disorder": {"kind": "uniform", "half_width": 6.283185307179586, "target": "a"}}"#,
    );
    let seed = seeds::replicate_seeds(42, 1)[0];
    assert_eq!(seed, 13222472167927179408);
    let t = run_single_replicate(&c, seed).unwrap();
    assert!(close(t.entropy_bits[100], 9.38497350672883757e-1), "{}", t.entropy_bits[100]);
    assert!(close(t.variance[100], 3.03158470667742534e1), "{}", t.variance[100]);
    assert!(close(t.variance[50], 1.84361874672076809e1), "{}", t.variance[50]);
}

#[test]
fn hadamard_distribution_peak() {
    let a = run(&config(r#"{"run_kind": "hadamard", "steps": 100}"#)).unwrap();
    let d = a.distribution.unwrap();
    let (peak, p) = d
        .window
        .positions()
        .zip(d.probability.iter().copied())
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert_eq!(peak, 68);
    assert!(close(p, 1.30355935803130013e-1));
    // The walk from coin |0⟩ drifts right.
    let right: f64 = d.window.positions().zip(&d.probability).filter(|(x, _)| *x > 0).map(|(_, p)| p).sum();
    assert!(right > 0.5);
}

#[test]
fn clean_pair_runs() {
    let cases = [
        ("tptpw", 1.90789842899399575, 1.90790430177391213, 2.19886117702196178e-6, 3.44391724521135459e-3),
        ("tptbw", 1.50420488166465049, 1.50203782715697276, 1.79965312594005077e-2, 6.73588792801036312e-2),
    ];
    for (kind, s100, ltm, p00, near) in cases {
        let a = run(&config(&format!(r#"{{"run_kind": "{kind}", "steps": 100}}"#))).unwrap();
        let e = a.entropy.unwrap().mean;
        let series = EntropySeries {
            steps: (0..e.len()).collect(),
            entropy_bits: e.clone(),
        };
        let j = a.joint.unwrap();
        assert!(close(e[100], s100), "{kind}: {}", e[100]);
        assert!(close(series.long_time_mean().unwrap(), ltm), "{kind}");
        assert!(close(j.get(0, 0), p00), "{kind}: {}", j.get(0, 0));
        assert!(close(j.mass_where(|i, k| i.abs() <= 5 && k.abs() <= 5), near), "{kind}");
    }
}

#[test]
fn entropy_range_does_not_depend_on_partner_phase() {
    // Sweeping particle A's angles reaches the same maximal entanglement
    // whether particle B is in the winding-1 or winding-0 phase.
    let maxima: Vec<f64> = ["0.7853981633974483", "2.356194490192345"]
        .iter()
        .map(|theta2b| {
            let mut c = config(&format!(
                r#"{{"run_kind": "entropy_sweep", "steps": 30,
                    "angles": {{"b": {{"theta1": -1.5707963267948966, "theta2": {theta2b}}}}}}}"#
            ));
            c.sweep = Some(SweepConfig {
                walk: SweepWalk::Tptpw,
                axes: vec![
                    parse_axis("theta1a:-3.141592653589793:3.141592653589793:8").unwrap(),
                    parse_axis("theta2a:-3.141592653589793:3.141592653589793:8").unwrap(),
                ],
                scalar: SweepScalar::Final,
            });
            run(&c).unwrap().heatmap.unwrap().max()
        })
        .collect();
    assert!((maxima[0] - 1.979552).abs() < 1e-6, "{}", maxima[0]);
    assert!((maxima[1] - 1.972097).abs() < 1e-6, "{}", maxima[1]);
    assert!((maxima[0] - maxima[1]).abs() < 0.05);
}
