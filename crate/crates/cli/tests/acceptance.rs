//! Acceptance checks, one line per criterion.
//!
//! A criterion that cannot be evaluated because an input file is absent is
//! reported as FAIL (blocked) and does not abort the run; any other FAIL does.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use meancut::check::{check_pathsim, random_points, ratio_grid};
use meancut::cut::{check_assumptions, monotone_trace};
use meancut::metrics::{acc, ari, nmi};
use meancut::mst::{fast_mst_with_stats, kruskal_full};
use meancut::pathsim::pathsim_pipeline;
use meancut::sweep::{best_scores, float_range, run_grid, SweepBase};
use meancut::{
    degrees, gen_synthetic, load_csv, meancut_cluster, minmax_normalize, Kernel, Preset, SynthParams, TruthColumn,
};

struct Outcome {
    pass: bool,
    blocked: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, blocked: false, detail }
    }
}

fn meancut_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meancut")).args(args).output().expect("binary runs")
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn pathsim_equivalence() -> Outcome {
    let t = Instant::now();
    let rep = check_pathsim(64, 100, 2024).unwrap();
    let el = t.elapsed();
    let detail = format!("{}/{} datasets exact, {}", rep.trials - rep.failures, rep.trials, secs(el));
    match rep.first_counterexample {
        Some(c) => Outcome::new(false, format!("{detail}; {c}")),
        None => Outcome::new(rep.passed() && el < Duration::from_secs(60), detail),
    }
}

fn fast_mst_correctness() -> Outcome {
    let t = Instant::now();
    let k = Kernel::default();
    let ratios = ratio_grid();
    for i in 0..50u64 {
        let n = [150, 400, 900, 2000][i as usize % 4];
        let dim = [2, 3, 5][i as usize % 3];
        let d = random_points(n, dim, 77, i);
        let want = kruskal_full(&d, &k).unwrap().edge_set();
        for &r in &ratios {
            let f = fast_mst_with_stats(&d, &k, r).unwrap();
            let sq: usize = f.components.sizes.iter().map(|a| a * a).sum();
            if 2 * f.phase2_candidates != n * n - sq {
                return Outcome::new(false, format!("dataset {i} ratio {r}: {} candidates", f.phase2_candidates));
            }
            if f.tree.edge_set() != want {
                return Outcome::new(false, format!("dataset {i} (n {n}, dim {dim}) ratio {r}: edge sets differ"));
            }
        }
    }
    let el = t.elapsed();
    Outcome::new(
        el < Duration::from_secs(300),
        format!("50 datasets x {} ratios, edge sets and candidate counts equal, {}", ratios.len(), secs(el)),
    )
}

fn degree_descent() -> Outcome {
    let params = SynthParams { sep: 30.0, sigma: 0.5, ..Default::default() };
    let k = Kernel::default();
    let (mut qualified, mut tried, mut traces) = (0, 0, 0);
    for seed in 0..1000 {
        if qualified == 60 {
            break;
        }
        tried += 1;
        let s = gen_synthetic(Preset::Blobs, 90, seed, &params).unwrap();
        let d = minmax_normalize(&s.data);
        let w = pathsim_pipeline(&d, &k, 0.2).unwrap();
        let deg = degrees(&w);
        let truth = d.truth().unwrap();
        if !check_assumptions(&w, &deg, truth).unwrap().all_hold() {
            continue;
        }
        qualified += 1;
        for c in 0..params.k as i64 {
            let tr = monotone_trace(&w, &deg, truth, c).unwrap();
            traces += 1;
            if let Some(i) = tr.windows(2).position(|p| p[1] > p[0] + 1e-12) {
                return Outcome::new(false, format!("seed {seed} cluster {c}: trace rises at step {}", i + 1));
            }
        }
    }
    Outcome::new(
        qualified >= 50,
        format!("{qualified} of {tried} datasets meet the assumptions; {traces} traces non-increasing"),
    )
}

fn table_reproduction() -> Outcome {
    // best ACC, NMI, ARI reported for MeanCut
    let sets = [
        ("iris.csv", "Iris", [0.9070, 0.7599, 0.7574]),
        ("wine.csv", "Wine", [0.9567, 0.8495, 0.8699]),
        ("seeds.csv", "Seeds", [0.9205, 0.7606, 0.7826]),
        ("breast_cancer.csv", "Breast-Cancer", [0.9722, 0.8178, 0.8910]),
    ];
    let base = SweepBase { kernel: Kernel::default(), ratio: 0.2, noise_threshold: 0 };
    let ks: Vec<usize> = (10..=40).collect();
    let ps = float_range(0.6, 0.99, 0.01).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    let mut missing = Vec::new();
    for (file, name, target) in sets {
        let mut path = data_dir().join(file);
        if !path.exists() {
            if let Some(dir) = std::env::var_os("MEANCUT_DATA_DIR") {
                path = PathBuf::from(dir).join(file);
            }
        }
        if !path.exists() {
            missing.push(name);
            parts.push(format!("{name}: data/{file} not found"));
            continue;
        }
        let d = minmax_normalize(&load_csv(&path, Some(TruthColumn::Last)).unwrap());
        let t = Instant::now();
        let rows = run_grid(&d, &base, &ks, &ps).unwrap();
        let el = t.elapsed();
        let (a, n, r) = best_scores(&rows);
        let ok =
            a >= target[0] - 0.05 && n >= target[1] - 0.05 && r >= target[2] - 0.05 && el < Duration::from_secs(600);
        pass &= ok;
        parts.push(format!(
            "{name}: acc {a:.4}/{:.4} nmi {n:.4}/{:.4} ari {r:.4}/{:.4} in {}{}",
            target[0] - 0.05,
            target[1] - 0.05,
            target[2] - 0.05,
            secs(el),
            if ok { "" } else { " (below)" }
        ));
    }
    Outcome { pass: pass && missing.is_empty(), blocked: pass && !missing.is_empty(), detail: parts.join("; ") }
}

fn synthetic_shapes() -> Outcome {
    let base = SweepBase { kernel: Kernel::default(), ratio: 0.2, noise_threshold: 0 };
    let ks: Vec<usize> = (10..=40).step_by(5).collect();
    let ps = float_range(0.0, 0.9, 0.1).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for preset in [Preset::WeakBridge, Preset::RingIsland] {
        let s = gen_synthetic(preset, 600, 0, &SynthParams::default()).unwrap();
        let d = minmax_normalize(&s.data);
        let (_, _, best) = best_scores(&run_grid(&d, &base, &ks, &ps).unwrap());
        pass &= best >= 0.95;
        parts.push(format!("{preset} best ari {best:.4}"));
    }

    // threshold between the largest noise group and the smallest true cluster
    let s = gen_synthetic(Preset::NoisyBlobs, 600, 0, &SynthParams::default()).unwrap();
    let d = minmax_normalize(&s.data);
    let l = meancut_cluster(&d, &Kernel::default(), 0.2, 20).unwrap();
    let truth = d.truth().unwrap();
    let keep: Vec<usize> = (0..d.n()).filter(|&i| truth[i] != -1).collect();
    let t: Vec<i64> = keep.iter().map(|&i| truth[i]).collect();
    let p: Vec<i64> = keep.iter().map(|&i| l.labels()[i]).collect();
    let clean = ari(&t, &p).unwrap();
    let false_noise = p.iter().filter(|&&x| x == -1).count();
    let noise_total = d.n() - keep.len();
    let flagged = (0..d.n()).filter(|&i| truth[i] == -1 && l.labels()[i] == -1).count();
    let ok = clean >= 0.95 && false_noise == 0 && flagged > 0;
    pass &= ok;
    parts.push(format!(
        "noisy_blobs (threshold 20) ari on clusters {clean:.4}, {flagged}/{noise_total} noise points -1, {false_noise} cluster points -1"
    ));
    Outcome::new(pass, parts.join("; "))
}

fn metric_laws() -> Outcome {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let lab = |rng: &mut ChaCha8Rng, n: usize, k: i64| (0..n).map(|_| rng.gen_range(0..k)).collect::<Vec<i64>>();
    let t = lab(&mut rng, 300, 4);
    if acc(&t, &t).unwrap() != 1.0 || nmi(&t, &t).unwrap() != 1.0 || ari(&t, &t).unwrap() != 1.0 {
        return Outcome::new(false, "identical partitions do not score 1".into());
    }
    let p = lab(&mut rng, 300, 5);
    let base = [acc(&t, &p).unwrap(), nmi(&t, &p).unwrap(), ari(&t, &p).unwrap()];
    for _ in 0..1000 {
        let mut ids: Vec<i64> = (0..5).collect();
        ids.shuffle(&mut rng);
        let q: Vec<i64> = p.iter().map(|&x| ids[x as usize]).collect();
        let got = [acc(&t, &q).unwrap(), nmi(&t, &q).unwrap(), ari(&t, &q).unwrap()];
        if got.iter().zip(&base).any(|(a, b)| (a - b).abs() > 1e-12) {
            return Outcome::new(false, format!("relabeling changed scores: {base:?} vs {got:?}"));
        }
    }
    for n in 1..=7 {
        for trial in 0..10 {
            let c: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..100) as f64).collect()).collect();
            let fast = meancut::metrics::hungarian(&c).unwrap().cost;
            let slow = meancut::check::brute_force_assignment(&c).unwrap();
            if fast != slow {
                return Outcome::new(false, format!("{n}x{n} trial {trial}: hungarian {fast} vs brute force {slow}"));
            }
        }
    }
    let mean: f64 = (0..100u64)
        .map(|s| {
            let mut r = ChaCha8Rng::seed_from_u64(1000 + s);
            let a = lab(&mut r, 1000, 3);
            let b = lab(&mut r, 1000, 3);
            ari(&a, &b).unwrap()
        })
        .sum::<f64>()
        / 100.0;
    Outcome::new(
        mean.abs() < 0.05,
        format!("identity, 1000 relabelings, hungarian up to 7x7 ok; mean random ari {mean:.5}"),
    )
}

fn bench_shape() -> Outcome {
    let out = meancut_bin(&["bench", "mst", "--n", "5000", "--repeats", "3"]);
    if !out.status.success() {
        return Outcome::new(false, String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let text = String::from_utf8(out.stdout).unwrap();
    let mut sweep = Vec::new();
    let mut kruskal = f64::NAN;
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let ms: f64 = f[2].parse().unwrap();
        if f[0] == "kruskal" {
            kruskal = ms;
        } else {
            sweep.push((f[0].parse::<f64>().unwrap(), f[1].parse::<usize>().unwrap(), ms));
        }
    }
    let first_one = match sweep.iter().position(|r| r.1 == 1) {
        Some(i) => i,
        None => return Outcome::new(false, "no ratio reaches a single component".into()),
    };
    let min_ms = sweep.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let argmin = sweep.iter().position(|r| r.2 == min_ms).unwrap();
    let lo = first_one.saturating_sub(1);
    let hi = (first_one + 1).min(sweep.len() - 1);
    let near = sweep[lo..=hi].iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let at_02 = sweep.iter().find(|r| (r.0 - 0.2).abs() < 1e-9).map(|r| r.2).unwrap();
    let pass = near <= 1.2 * min_ms && at_02 <= 1.2 * kruskal;
    Outcome::new(
        pass,
        format!(
            "first single component at ratio {}, runtime minimum at {} ({min_ms:.1} ms), best within one step {near:.1} ms; ratio 0.2 {at_02:.1} ms vs kruskal {kruskal:.1} ms",
            sweep[first_one].0, sweep[argmin].0
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.csv");
    let gp = g.to_str().unwrap();
    let gen = ["gen", "--preset", "weak_bridge", "--n", "400", "--seed", "3", "--out", gp];
    let iris = data_dir().join("iris.csv").display().to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec!["cluster", "--input", gp, "--truth-col", "last", "--k", "20", "--percentile", "0.8"],
        vec!["cluster", "--input", &iris, "--truth-col", "last", "--noise-threshold", "5"],
        vec![
            "sweep",
            "--input",
            &iris,
            "--truth-col",
            "last",
            "--k-min",
            "10",
            "--k-max",
            "20",
            "--p-min",
            "0.6",
            "--p-max",
            "0.8",
        ],
        vec!["oracle", "pathsim", "--n", "40", "--trials", "5", "--seed", "1"],
        vec!["oracle", "mst", "--n", "100", "--trials", "2", "--seed", "1"],
        vec!["oracle", "hungarian", "--n", "6", "--trials", "5", "--seed", "1"],
        vec!["oracle", "meancut", "--n", "40", "--trials", "5", "--seed", "1"],
    ];
    let first = meancut_bin(&gen);
    let a = std::fs::read(&g).unwrap();
    let second = meancut_bin(&gen);
    if !first.status.success() || !second.status.success() || a != std::fs::read(&g).unwrap() {
        return Outcome::new(false, "gen output differs".into());
    }
    for args in &runs {
        let (x, y) = (meancut_bin(args), meancut_bin(args));
        if !x.status.success() || x.stdout != y.stdout || x.stderr != y.stderr {
            return Outcome::new(false, format!("{} differs between runs", args.join(" ")));
        }
    }
    // wall-clock timings vary; ratios and component counts must not
    let bench = ["bench", "mst", "--n", "800", "--repeats", "1"];
    let cols = |o: Output| -> Vec<String> {
        String::from_utf8(o.stdout).unwrap().lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
    };
    if cols(meancut_bin(&bench)) != cols(meancut_bin(&bench)) {
        return Outcome::new(false, "bench ratio/subtree_count columns differ".into());
    }
    Outcome::new(true, format!("gen, bench and {} cluster/sweep/oracle runs repeat exactly", runs.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("tree path similarity equals Floyd-Warshall closure", pathsim_equivalence),
        ("two-phase spanning tree equals Kruskal", fast_mst_correctness),
        ("greedy descent on assumption-satisfying data", degree_descent),
        ("benchmark table scores", table_reproduction),
        ("synthetic shapes", synthetic_shapes),
        ("metric laws", metric_laws),
        ("benchmark shape", bench_shape),
        ("CLI determinism", determinism),
    ];
    let mut hard_failures = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let tag = match (o.pass, o.blocked) {
            (true, _) => "PASS",
            (false, true) => "FAIL (blocked: missing input)",
            (false, false) => "FAIL",
        };
        println!("criterion {}: {tag}: {name}: {}", i + 1, o.detail);
        if !o.pass && !o.blocked {
            hard_failures.push(i + 1);
        }
    }
    if !hard_failures.is_empty() {
        eprintln!("criteria failed: {hard_failures:?}");
        std::process::exit(1);
    }
}
