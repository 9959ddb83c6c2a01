use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;

use meancut::check;
use meancut::metrics::{acc, ari, nmi};
use meancut::mst::{fast_mst_with_stats, kruskal_full};
use meancut::sweep::{float_range, rank, run_grid, SweepBase};
use meancut::{gen_synthetic, improved_meancut_run, load_csv, minmax_normalize, Dataset, Kernel, Params, SynthParams};

use crate::{BenchArgs, ClusterArgs, DataArgs, GenArgs, OracleArgs, PipelineArgs, SweepArgs};

#[derive(Debug, Serialize)]
struct MetricsJson {
    acc: f64,
    nmi: f64,
    ari: f64,
    k_pred: usize,
    n_noise: usize,
}

fn load(a: &DataArgs) -> Result<Dataset> {
    let d = load_csv(&a.input, a.truth_col)?;
    Ok(if a.no_normalize { d } else { minmax_normalize(&d) })
}

fn base(p: &PipelineArgs) -> Result<SweepBase> {
    ensure!(p.ratio > 0.0 && p.ratio < 1.0, "--ratio must lie in (0, 1), got {}", p.ratio);
    Ok(SweepBase { kernel: Kernel::new(p.kernel, p.sigma)?, ratio: p.ratio, noise_threshold: p.noise_threshold })
}

/// Writes to `path`, or to stdout when there is none.
fn emit(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

pub fn cluster(a: ClusterArgs) -> Result<ExitCode> {
    let d = load(&a.data)?;
    let b = base(&a.pipeline)?;
    if a.out_metrics.is_some() && d.truth().is_none() {
        bail!("--out-metrics needs truth labels (--truth-col)");
    }
    let p = Params {
        kernel: b.kernel,
        ratio: b.ratio,
        k: a.k,
        percentile: a.percentile,
        noise_threshold: b.noise_threshold,
    };
    let run = improved_meancut_run(&d, &p)?;
    let labels = run.labeling.labels();

    let mut out_labels = String::with_capacity(labels.len() * 3);
    for l in labels {
        writeln!(out_labels, "{l}")?;
    }

    let metrics = match d.truth() {
        Some(t) => {
            let m = MetricsJson {
                acc: acc(t, labels)?,
                nmi: nmi(t, labels)?,
                ari: ari(t, labels)?,
                k_pred: run.labeling.k(),
                n_noise: run.labeling.noise_count(),
            };
            Some(serde_json::to_string_pretty(&m)? + "\n")
        }
        None => None,
    };

    let scores = a.out_scores.as_ref().map(|_| {
        let mut junction = vec![false; run.scores.dgf.len()];
        for &j in &run.split.junction {
            junction[j] = true;
        }
        let mut s = String::from("point_index,density,dgf,is_junction\n");
        for (i, &slot) in run.slot.iter().enumerate() {
            let _ = writeln!(s, "{i},{},{},{}", run.scores.density[slot], run.scores.dgf[slot], junction[slot] as u8);
        }
        s
    });

    emit(a.out_labels.as_deref(), &out_labels)?;
    if let Some(m) = metrics {
        match &a.out_metrics {
            Some(path) => emit(Some(path), &m)?,
            None => eprint!("{m}"),
        }
    }
    if let (Some(path), Some(s)) = (&a.out_scores, scores) {
        emit(Some(path), &s)?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn sweep(a: SweepArgs) -> Result<ExitCode> {
    let d = load(&a.data)?;
    ensure!(d.truth().is_some(), "sweep needs truth labels (--truth-col)");
    let b = base(&a.pipeline)?;
    ensure!(a.k_step > 0 && a.k_min <= a.k_max, "empty K range {}..={} step {}", a.k_min, a.k_max, a.k_step);
    let ks: Vec<usize> = (a.k_min..=a.k_max).step_by(a.k_step).collect();
    let ps = float_range(a.p_min, a.p_max, a.p_step)?;
    let mut rows = run_grid(&d, &b, &ks, &ps)?;
    ensure!(!rows.is_empty(), "no grid point fits the data");
    rank(&mut rows, a.rank_by);

    let mut out = String::from("K,percentile,acc,nmi,ari,k_pred\n");
    for r in &rows {
        writeln!(out, "{},{},{:.6},{:.6},{:.6},{}", r.k, r.percentile, r.acc, r.nmi, r.ari, r.k_pred)?;
    }
    emit(a.out.as_deref(), &out)?;
    let best = &rows[0];
    eprintln!(
        "best: K={} percentile={} acc={:.4} nmi={:.4} ari={:.4} k_pred={}",
        best.k, best.percentile, best.acc, best.nmi, best.ari, best.k_pred
    );
    Ok(ExitCode::SUCCESS)
}

pub fn gen(a: GenArgs) -> Result<ExitCode> {
    let s = gen_synthetic(a.preset, a.n, a.seed, &SynthParams::default())?;
    let d = &s.data;
    let truth = d.truth().expect("generated data carries labels");
    let mut out = String::new();
    let header: Vec<String> = (0..d.dim()).map(|c| format!("x{c}")).chain(["label".to_string()]).collect();
    writeln!(out, "{}", header.join(","))?;
    for (row, t) in d.rows().zip(truth) {
        for v in row {
            write!(out, "{v},")?;
        }
        writeln!(out, "{t}")?;
    }
    emit(a.out.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn oracle(a: OracleArgs) -> Result<ExitCode> {
    let rep = check::run(a.kind, a.n, a.trials, a.seed)?;
    println!("{:?}: {}/{} trials passed", a.kind, rep.trials - rep.failures, rep.trials);
    if let Some(c) = &rep.first_counterexample {
        println!("first counterexample: {c}");
    }
    Ok(if rep.passed() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn median_ms(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(f64::total_cmp);
    let m = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[m]
    } else {
        (samples[m - 1] + samples[m]) / 2.0
    }
}

pub fn bench(a: BenchArgs) -> Result<ExitCode> {
    ensure!(a.task == "mst", "unknown bench task {:?} (only `mst`)", a.task);
    ensure!(a.repeats > 0, "--repeats must be at least 1");
    if a.repeats == 1 {
        eprintln!("note: repeats=1, runtimes are single samples");
    }
    let ratios = float_range(a.ratio_min, a.ratio_max, a.ratio_step)?;
    ensure!(ratios.iter().all(|&r| r > 0.0 && r < 1.0), "ratios must lie in (0, 1)");
    let d = gen_synthetic(meancut::Preset::Blobs, a.n, a.seed, &SynthParams::default())?.data;
    let k = Kernel::default();

    let mut out = String::from("ratio,subtree_count,median_runtime_ms\n");
    for &ratio in &ratios {
        let mut samples = Vec::with_capacity(a.repeats);
        let mut count = 0;
        for _ in 0..a.repeats {
            let t = Instant::now();
            let f = fast_mst_with_stats(&d, &k, ratio)?;
            samples.push(t.elapsed().as_secs_f64() * 1e3);
            count = f.components.count();
        }
        writeln!(out, "{ratio},{count},{:.3}", median_ms(samples))?;
    }
    let mut samples = Vec::with_capacity(a.repeats);
    for _ in 0..a.repeats {
        let t = Instant::now();
        kruskal_full(&d, &k)?;
        samples.push(t.elapsed().as_secs_f64() * 1e3);
    }
    writeln!(out, "kruskal,1,{:.3}", median_ms(samples))?;
    emit(a.out.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}
