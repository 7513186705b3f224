use std::fmt;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{EncodeMode, FlowMethod, RunConfig};
use super::inputs::resolve_inputs;
use crate::bench::{time_pipeline_stream, write_csv, BenchReport};
use crate::encode::sidecar::Sidecar;
use crate::encode::{encode_hsv, encode_plus, read_flo_file, write_flo_file, write_png_file};
use crate::error::{Error, Result};
use crate::flow::combined_flow;
use crate::imgcore::{load_frame, Frame};
use crate::synth::{
    endpoint_errors, render_frame, write_sequence, EpeStats, Manifest, ValidityMask, MANIFEST_NAME,
};

const FRAME_EXTS: &[&str] = &["png", "pgm", "ppm", "pnm"];

fn input_frames(cfg: &RunConfig, needed: usize) -> Result<Vec<PathBuf>> {
    let spec = cfg
        .input
        .as_deref()
        .ok_or_else(|| Error::Config("no --input given".into()))?;
    let paths = resolve_inputs(spec, FRAME_EXTS)?;
    if paths.len() < needed {
        return Err(Error::NotEnoughFrames {
            needed,
            found: paths.len(),
        });
    }
    Ok(paths)
}

fn with_threads<T: Send>(
    threads: Option<usize>,
    job: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    match threads {
        None => job(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(job),
    }
}

/// Runs `per_pair(n, current, next)` over consecutive pairs, loading each
/// frame once.
fn for_each_pair(
    paths: &[PathBuf],
    mut per_pair: impl FnMut(usize, &Frame, &Frame) -> Result<()>,
) -> Result<()> {
    let mut current = load_frame(&paths[0])?;
    for (n, path) in paths.iter().enumerate().skip(1) {
        let next = load_frame(path)?;
        per_pair(n - 1, &current, &next)?;
        current = next;
    }
    Ok(())
}

/// Writes `v_o_NNNN.flo`, `v_r_NNNN.flo`, `v_R_NNNN.flo` (per method) and a
/// `flow_NNNN.json` sidecar for each pair. Returns every written path.
pub fn cmd_flow(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let paths = input_frames(cfg, 2)?;
    fs::create_dir_all(&cfg.output)?;
    let pipeline = cfg.pipeline();
    let mut written = Vec::new();
    with_threads(cfg.threads, || {
        for_each_pair(&paths, |n, cur, next| {
            let mut outputs = Vec::new();
            let mut save = |name: &str, flow: &crate::flow::FlowField| -> Result<()> {
                let p = cfg.output.join(format!("{name}_{n:04}.flo"));
                write_flo_file(flow, &p)?;
                outputs.push(p);
                Ok(())
            };
            match cfg.method {
                FlowMethod::Lk => save("v_o", &pipeline.optical(cur, next)?)?,
                FlowMethod::Reynolds => save("v_r", &pipeline.reynolds(cur, next)?)?,
                FlowMethod::Combined => {
                    let pair = pipeline.compute(cur, next)?;
                    save("v_o", &pair.optical)?;
                    save("v_r", &pair.reynolds)?;
                    save("v_R", &pair.combined)?;
                }
            }
            let sidecar_path = cfg.output.join(format!("flow_{n:04}.json"));
            write_pair_sidecar("flow", cfg, n, &paths, outputs.clone(), &sidecar_path)?;
            written.extend(outputs);
            written.push(sidecar_path);
            Ok(())
        })
    })?;
    Ok(written)
}

/// Writes `hsv_NNNN.png` or `plus_NNNN.png` plus a JSON sidecar per pair.
pub fn cmd_encode(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let paths = input_frames(cfg, 2)?;
    fs::create_dir_all(&cfg.output)?;
    let pipeline = cfg.pipeline();
    let stem = cfg.encode.to_string();
    let mut written = Vec::new();
    with_threads(cfg.threads, || {
        for_each_pair(&paths, |n, cur, next| {
            let image = match cfg.encode {
                EncodeMode::Plus => {
                    let (vo, vr) = pipeline.components(cur, next)?;
                    encode_plus(&vo, &vr, cur, &cfg.norm)?
                }
                EncodeMode::Hsv => {
                    let field = match cfg.method {
                        FlowMethod::Lk => pipeline.optical(cur, next)?,
                        FlowMethod::Reynolds => pipeline.reynolds(cur, next)?,
                        FlowMethod::Combined => {
                            let (vo, vr) = pipeline.components(cur, next)?;
                            combined_flow(&vo, &vr)?
                        }
                    };
                    encode_hsv(&field, &cfg.norm)
                }
            };
            let png = cfg.output.join(format!("{stem}_{n:04}.png"));
            write_png_file(&image, &png)?;
            let sidecar_path = cfg.output.join(format!("{stem}_{n:04}.json"));
            write_pair_sidecar("encode", cfg, n, &paths, vec![png.clone()], &sidecar_path)?;
            written.push(png);
            written.push(sidecar_path);
            Ok(())
        })
    })?;
    Ok(written)
}

fn write_pair_sidecar(
    command: &str,
    cfg: &RunConfig,
    n: usize,
    paths: &[PathBuf],
    outputs: Vec<PathBuf>,
    dest: &Path,
) -> Result<()> {
    let mut sidecar = Sidecar::new(command, cfg);
    sidecar.pair = Some(n);
    sidecar.inputs = vec![paths[n].clone(), paths[n + 1].clone()];
    sidecar.outputs = outputs;
    sidecar.write(dest)
}

/// Renders the configured synthetic sequence into the output directory.
pub fn cmd_synth(cfg: &RunConfig) -> Result<Manifest> {
    let manifest = write_sequence(&cfg.synth, &cfg.output)?;
    println!(
        "wrote {} frames and {} ground-truth fields to {}",
        manifest.frames.len(),
        manifest.truth.len(),
        cfg.output.display()
    );
    Ok(manifest)
}

/// Benchmarks `cfg.bench.method` on the input frames, or on the synthetic
/// sequence when no input is configured. Writes `bench_<method>.csv` and
/// `bench_<method>.json`.
pub fn cmd_bench(cfg: &RunConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let bench = cfg.bench_config();
    let method = cfg.bench.method;
    let report = match cfg.input {
        Some(_) => {
            let paths = input_frames(cfg, 3)?;
            time_pipeline_stream(paths.iter().map(load_frame), method, &bench)?
        }
        None => {
            cfg.synth.validate()?;
            if cfg.synth.frame_count < 3 {
                return Err(Error::NotEnoughFrames {
                    needed: 3,
                    found: cfg.synth.frame_count,
                });
            }
            let spec = cfg.synth;
            time_pipeline_stream(
                (0..spec.frame_count).map(|n| render_frame(&spec, n)),
                method,
                &bench,
            )?
        }
    };
    fs::create_dir_all(&cfg.output)?;
    let csv = cfg
        .bench
        .csv
        .clone()
        .unwrap_or_else(|| cfg.output.join(format!("bench_{method}.csv")));
    write_csv(&report, BufWriter::new(File::create(&csv)?))?;
    let mut sidecar = Sidecar::new("bench", cfg);
    sidecar.outputs = vec![csv.clone()];
    let json = csv.with_extension("json");
    fs::write(
        &json,
        serde_json::to_string_pretty(&serde_json::json!({ "sidecar": sidecar, "report": report }))?
            + "\n",
    )?;
    println!(
        "{} {}x{}: mean {:.4} s/frame, median {:.4}, p95 {:.4} over {} pairs [{}; {}]",
        report.method,
        report.width,
        report.height,
        report.mean,
        report.median,
        report.p95,
        report.frames,
        report.mode,
        report.hardware
    );
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct PairEval {
    pub index: usize,
    pub estimate: PathBuf,
    pub truth: PathBuf,
    pub stats: EpeStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub pairs: Vec<PairEval>,
    /// Pooled over every scored pixel of every pair.
    pub aggregate: EpeStats,
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |s: &EpeStats| {
            format!(
                "mean {:.4}  median {:.4}  p95 {:.4}  ({} px)",
                s.mean, s.median, s.p95, s.count
            )
        };
        for p in &self.pairs {
            writeln!(f, "pair {:04}: {}", p.index, line(&p.stats))?;
        }
        writeln!(f, "aggregate: {}", line(&self.aggregate))
    }
}

/// Endpoint error of each estimate against the matching ground truth. A
/// `truth` directory holding a synthetic manifest also supplies validity masks.
pub fn cmd_eval(estimates: &str, truth: &str) -> Result<EvalReport> {
    let estimate_paths = resolve_inputs(estimates, &["flo"])?;
    let truth_dir = Path::new(truth);
    let (truth_paths, mask_paths): (Vec<PathBuf>, Option<Vec<PathBuf>>) =
        if truth_dir.join(MANIFEST_NAME).is_file() {
            let manifest: Manifest =
                serde_json::from_str(&fs::read_to_string(truth_dir.join(MANIFEST_NAME))?)?;
            (
                manifest.truth.iter().map(|p| truth_dir.join(p)).collect(),
                Some(manifest.masks.iter().map(|p| truth_dir.join(p)).collect()),
            )
        } else {
            (resolve_inputs(truth, &["flo"])?, None)
        };
    if estimate_paths.len() != truth_paths.len() || estimate_paths.is_empty() {
        return Err(Error::Config(format!(
            "found {} estimate(s) but {} ground-truth field(s)",
            estimate_paths.len(),
            truth_paths.len()
        )));
    }
    let mut pairs = Vec::new();
    let mut pooled = Vec::new();
    for (i, (e, t)) in estimate_paths.iter().zip(&truth_paths).enumerate() {
        let mask = match &mask_paths {
            Some(m) => Some(ValidityMask::from_frame(&load_frame(&m[i])?)),
            None => None,
        };
        let errors = endpoint_errors(&read_flo_file(e)?, &read_flo_file(t)?, mask.as_ref())?;
        pooled.extend_from_slice(&errors);
        pairs.push(PairEval {
            index: i,
            estimate: e.clone(),
            truth: t.clone(),
            stats: EpeStats::from_errors(errors)?,
        });
    }
    Ok(EvalReport {
        pairs,
        aggregate: EpeStats::from_errors(pooled)?,
    })
}
