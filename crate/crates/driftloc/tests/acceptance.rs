//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any fails. Run with `cargo test -p driftloc --test acceptance`.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use driftloc::methods::{MethodName, MethodParams};
use driftloc_core::conformal::{
    conformal_p_value, median_aggregate, min_class_p_value, sample_bootstrap, ClassCalibration,
};
use driftloc_core::data::{generate_no_drift_stream, ClassSwapSpec};
use driftloc_core::eval::{
    bootstrap_sweep, roc_auc, run_experiment, split_size_sweep, CurvePoint, DataSource, ExperimentConfig, Method,
    Orientation, ResultTable,
};
use driftloc_core::models::{train_decision_tree, Mlp, ModelSpec, TreeParams};
use driftloc_core::rng::{derive_seed, derived_rng, stream};
use driftloc_core::LabeledDataset;
use rand::Rng as _;

const SEED: u64 = 42;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn p_value_formula() -> Outcome {
    let mut failures = Vec::new();
    let mut expect = |name: &str, got: f64, want: f64| {
        if got != want {
            failures.push(format!("{name}: got {got}, want {want}"));
        }
    };
    let cal = [0.2, 0.5, 0.9];
    expect("empty calibration", conformal_p_value(&[], 0.4), 1.0);
    expect("test below all", conformal_p_value(&cal, 0.1), 1.0 / 4.0);
    expect("test ties top", conformal_p_value(&cal, 0.9), 1.0);

    let ds = LabeledDataset::from_parts(vec![vec![0.0], vec![1.0]], vec![0, 1], 2).map_err(|e| e.to_string())?;
    let model = train_decision_tree(&ds, &TreeParams { max_depth: 1, min_leaf_size: 1 }, 0);
    expect("min-class, empty oob", min_class_p_value(&model, &ds, &[], &[0.3]).map_err(|e| e.to_string())?, 1.0);
    let two = ClassCalibration::from_scores(vec![cal.to_vec(), cal.to_vec()]);
    expect("min-class of p0 = 1/4, p1 = 1", two.min_p_value(&[0.1, 0.9]), 1.0 / 4.0);
    // Leaves hold Laplace-smoothed (2/3, 1/3) and (1/3, 2/3); x = 1 duplicates
    // calibration sample 1, whose equal score counts: p1 = (1 + 1) / (1 + 1).
    let probs = model.predict_proba(&[1.0]).map_err(|e| e.to_string())?;
    let oob = ClassCalibration::new(&model, &ds, &[0, 1]);
    expect("duplicate point p1", oob.p_value(1, probs.probs[1]), 1.0);
    expect(
        "duplicate point min-class",
        min_class_p_value(&model, &ds, &[0, 1], &[1.0]).map_err(|e| e.to_string())?,
        1.0 / 2.0,
    );
    check(failures.is_empty(), if failures.is_empty() { "7/7 exact".into() } else { failures.join("; ") })
}

fn validity() -> Outcome {
    let (n, dim, reps, held_out) = (200, 5, 40, 60);
    let alphas = [0.05, 0.1, 0.2];
    let mut observed = [0usize; 3];
    let mut min_class = [0usize; 3];
    let mut total = 0;
    for r in 0..reps {
        let (ds, _) =
            generate_no_drift_stream(n, dim, derive_seed(SEED, stream::DATA, r)).map_err(|e| e.to_string())?;
        let (fresh, _) = generate_no_drift_stream(held_out, dim, derive_seed(SEED ^ 1, stream::DATA, r))
            .map_err(|e| e.to_string())?;
        let split =
            sample_bootstrap(n, &mut derived_rng(SEED, stream::BOOTSTRAP_POOL, r)).map_err(|e| e.to_string())?;
        let model = ModelSpec::DecisionTree(TreeParams::default())
            .fit(&ds, &split.in_bag, derive_seed(SEED, stream::TRAIN, r))
            .map_err(|e| e.to_string())?;
        let cal = ClassCalibration::new(&model, &ds, &split.oob);
        for i in 0..fresh.len() {
            let probs = model.predict_proba(fresh.features(i)).map_err(|e| e.to_string())?.probs;
            let y = fresh.label(i);
            let (p_obs, p_min) = (cal.p_value(y, probs[y]), cal.min_p_value(&probs));
            for (a, &alpha) in alphas.iter().enumerate() {
                observed[a] += usize::from(p_obs <= alpha);
                min_class[a] += usize::from(p_min <= alpha);
            }
            total += 1;
        }
    }
    let mut ok = total >= 2000;
    let mut parts = vec![format!("{total} held-out evaluations")];
    for (a, &alpha) in alphas.iter().enumerate() {
        let (fo, fm) = (observed[a] as f64 / total as f64, min_class[a] as f64 / total as f64);
        ok &= fo <= alpha + 0.03 && fm <= 2.0 * alpha + 0.03;
        parts.push(format!("a={alpha}: P(p_y<=a)={fo:.4}, P(min p<=a)={fm:.4}"));
    }
    check(ok, parts.join(", "))
}

fn coverage() -> Outcome {
    let n = 500;
    let mut total = 0.0;
    for b in 0..1000 {
        let s = sample_bootstrap(n, &mut derived_rng(SEED, stream::BOOTSTRAP_POOL, b)).map_err(|e| e.to_string())?;
        total += s.unique_in_bag().len() as f64 / n as f64;
    }
    let mean = total / 1000.0;
    check((0.61..=0.66).contains(&mean), format!("mean unique in-bag fraction {mean:.4}"))
}

fn median_equivalence() -> Outcome {
    let mut rng = derived_rng(SEED, stream::METHOD, 4);
    let mut checked = 0;
    for t in 0..1000 {
        let len = 1 + t % 40;
        // A 0.01 lattice puts entries exactly on every α.
        let values: Vec<f64> = (0..len).map(|_| rng.random_range(0..=100) as f64 / 100.0).collect();
        let median = median_aggregate(&values).map_err(|e| e.to_string())?;
        for alpha in [0.01, 0.05, 0.5] {
            let below = values.iter().filter(|&&v| v < alpha).count();
            if (median < alpha) != (2 * below > len) {
                return Err(format!("list {values:?}, alpha {alpha}: median {median}, {below} of {len} below"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} list/alpha pairs agree"))
}

fn brute_force_auc(values: &[f64], truth: &[bool], orientation: Orientation) -> f64 {
    let (mut twice, mut pairs) = (0u64, 0u64);
    for (i, &pi) in truth.iter().enumerate() {
        for (j, &pj) in truth.iter().enumerate() {
            if pi && !pj {
                let (a, b) = match orientation {
                    Orientation::Score => (values[i], values[j]),
                    Orientation::PValue => (values[j], values[i]),
                };
                twice += if a > b {
                    2
                } else if a == b {
                    1
                } else {
                    0
                };
                pairs += 1;
            }
        }
    }
    twice as f64 / (2 * pairs) as f64
}

fn auc_oracle() -> Outcome {
    let mut rng = derived_rng(SEED, stream::METHOD, 5);
    let mut instances = 0;
    while instances < 500 {
        let n = rng.random_range(2..=50);
        let levels = rng.random_range(1..=n);
        let values: Vec<f64> = (0..n).map(|_| rng.random_range(0..levels) as f64 / levels as f64).collect();
        let truth: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
        if truth.iter().all(|&t| t) || truth.iter().all(|&t| !t) {
            continue;
        }
        for orientation in [Orientation::Score, Orientation::PValue] {
            let got = roc_auc(&values, &truth, orientation).map_err(|e| e.to_string())?;
            let want = brute_force_auc(&values, &truth, orientation);
            if got != want {
                return Err(format!("n={n}, {orientation:?}: got {got}, brute force {want}"));
            }
        }
        instances += 1;
    }
    Ok(format!("{instances} instances, both orientations exact"))
}

fn experiment(method: Method, data: &DataSource, reps: usize) -> Result<ResultTable, String> {
    run_experiment(&ExperimentConfig { method, data: data.clone(), n_repetitions: reps, seed: SEED })
        .map_err(|e| e.to_string())
}

fn mean_auc(t: &ResultTable) -> f64 {
    t.summary().map_or(f64::NAN, |s| s.mean)
}

fn separable_benchmark() -> Outcome {
    let data = DataSource::ClassSwap(ClassSwapSpec::default());
    let params = MethodParams::default();
    let mut means = Vec::new();
    for name in [MethodName::CpDt, MethodName::CpMlp, MethodName::Kdq, MethodName::Ldd] {
        means.push((name.as_str(), mean_auc(&experiment(params.method(name), &data, 50)?)));
    }
    let detail = means.iter().map(|(n, m)| format!("{n} {m:.3}")).collect::<Vec<_>>().join(", ");
    let baseline = means[2].1.max(means[3].1);
    let ok = means[..2].iter().all(|(_, m)| *m >= 0.9 && *m > baseline);
    check(ok, format!("mean AUC over 50 paired reps: {detail}"))
}

fn hard_regime() -> DataSource {
    DataSource::ClassSwap(ClassSwapSpec {
        samples_per_window: 250,
        n_drifting_per_window: 49,
        sigma: 8.0,
        ..ClassSwapSpec::default()
    })
}

fn medians(points: &[CurvePoint]) -> Result<Vec<f64>, String> {
    points
        .iter()
        .map(|p| p.summary.map(|s| s.median).ok_or_else(|| format!("no defined AUC at {}", p.grid_value)))
        .collect()
}

fn bootstrap_curve() -> Outcome {
    let config = ExperimentConfig {
        method: MethodParams::default().method(MethodName::CpDt),
        data: hard_regime(),
        n_repetitions: 50,
        seed: SEED,
    };
    let m = medians(&bootstrap_sweep(&config, &[1, 10, 50, 100]).map_err(|e| e.to_string())?)?;
    let ok = m[0] < 0.8 && m[3] >= m[1] && m[2] - m[1] > m[3] - m[2];
    check(
        ok,
        format!(
            "median AUC n_boot 1: {:.4}, 10: {:.4}, 50: {:.4}, 100: {:.4}; gain 10->50 {:+.4}, 50->100 {:+.4}",
            m[0],
            m[1],
            m[2],
            m[3],
            m[2] - m[1],
            m[3] - m[2]
        ),
    )
}

fn split_curve() -> Outcome {
    let config = ExperimentConfig {
        method: MethodParams::default().method(MethodName::SplitCp),
        data: hard_regime(),
        n_repetitions: 50,
        seed: SEED,
    };
    let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let m = medians(&split_size_sweep(&config, &grid).map_err(|e| e.to_string())?)?;
    let best = (0..m.len()).fold(0, |b, i| if m[i] > m[b] { i } else { b });
    let curve = grid.iter().zip(&m).map(|(g, v)| format!("{g}: {v:.3}")).collect::<Vec<_>>().join(", ");
    check(best != 0 && best != m.len() - 1, format!("argmax at {}; medians {curve}", grid[best]))
}

fn gradient_check() -> Outcome {
    let inputs = vec![
        vec![0.3, -1.2, 0.8],
        vec![-0.7, 0.4, 1.5],
        vec![1.1, 0.9, -0.2],
        vec![-1.4, -0.3, 0.6],
        vec![0.2, 1.7, -1.1],
    ];
    let labels = vec![0, 1, 1, 0, 1];
    let mut net = Mlp::init(3, 6, 2, 17);
    let analytic = net.loss_gradient(&inputs, &labels);
    let eps = 1e-6;
    let mut worst: f64 = 0.0;
    for (j, &grad) in analytic.iter().enumerate() {
        let orig = net.params()[j];
        net.params_mut()[j] = orig + eps;
        let up = net.loss(&inputs, &labels);
        net.params_mut()[j] = orig - eps;
        let down = net.loss(&inputs, &labels);
        net.params_mut()[j] = orig;
        let numeric = (up - down) / (2.0 * eps);
        let diff = (grad - numeric).abs();
        let scale = grad.abs().max(numeric.abs());
        worst = worst.max(if scale < 1e-7 { diff } else { diff / scale });
    }
    check(worst <= 1e-4, format!("{} parameters, worst relative error {worst:.2e}", net.params().len()))
}

fn bench_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("bench.ini");
    std::fs::write(
        &config,
        "[data]\nkind = class-swap\nsamples_per_window = 60\nn_drifting_per_window = 5\n\n\
         [experiment]\nrepetitions = 10\n\n[method cp-dt]\n[method cp-mlp]\nepochs = 20\n\
         [method mbdl]\nn_boot = 20\nn_perm = 20\n[method rf-heur]\n[method ldd]\n[method kdq]\n",
    )
    .map_err(|e| e.to_string())?;
    let run = |name: &str, jobs: &str| -> Result<std::path::PathBuf, String> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_driftloc"))
            .args(["bench", "--config", path_str(&config)?, "--seed", "7", "--jobs", jobs, "--out", path_str(&out)?])
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("bench exited with {status}"));
        }
        Ok(out)
    };
    let first = run("first", "1")?;
    let second = run("second", "1")?;
    let four = run("four", "4")?;
    let mut files: Vec<String> = std::fs::read_dir(&first)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .filter(|f| f.ends_with(".csv"))
        .collect();
    files.sort();
    for f in &files {
        let a = std::fs::read(first.join(f)).map_err(|e| e.to_string())?;
        for other in [&second, &four] {
            if std::fs::read(other.join(f)).map_err(|e| e.to_string())? != a {
                return Err(format!("{f} differs between {} and {}", first.display(), other.display()));
            }
        }
    }
    check(files.len() == 7, format!("{} CSVs byte-identical across 2 runs and --jobs 1 vs 4", files.len()))
}

fn path_str(p: &Path) -> Result<&str, String> {
    p.to_str().ok_or_else(|| "non-UTF-8 temp path".to_string())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("conformal p-value formula", p_value_formula),
        ("validity on no-drift data", validity),
        ("out-of-bag coverage rate", coverage),
        ("median-ensemble equivalence", median_equivalence),
        ("ROC-AUC brute-force oracle", auc_oracle),
        ("separable-regime benchmark", separable_benchmark),
        ("bootstrap-sweep shape", bootstrap_curve),
        ("split-size trade-off", split_curve),
        ("MLP gradient check", gradient_check),
        ("bench determinism", bench_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(outcome.is_err());
        println!("criterion {:>2} {tag} {name} ({secs:.1}s): {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
