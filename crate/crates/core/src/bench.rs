//! Per-frame runtime measurement of the full flow + encoding pipeline.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::encode::{
    encode_hsv, encode_hsv_into, encode_plus, encode_plus_into, write_flo, EncodedImage,
    NormalizationPolicy,
};
use crate::error::{check_same_dims, Error, Result};
use crate::flow::{combined_flow, combined_flow_into, lucas_kanade_into, FlowField};
use crate::imgcore::Frame;
use crate::pipeline::FlowPipeline;
use crate::synth::percentile_sorted;

/// Environment variable consulted for the hardware descriptor.
pub const HARDWARE_ENV: &str = "REYNOLDSFLOW_HARDWARE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// `v_o + v_r` rendered in HSV.
    ReynoldsHsv,
    /// `[|v_o|, |v_r|, f]` magnitude stack.
    ReynoldsPlus,
    /// Optical flow alone, no encoding.
    LkOnly,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::ReynoldsHsv, Method::ReynoldsPlus, Method::LkOnly];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::ReynoldsHsv => "reynolds_hsv",
            Method::ReynoldsPlus => "reynolds_plus",
            Method::LkOnly => "lk_only",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('-', "_");
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == norm)
            .ok_or_else(|| format!("unknown method '{s}' (reynolds_hsv|reynolds_plus|lk_only)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub pipeline: FlowPipeline,
    pub normalization: NormalizationPolicy,
    /// 1 runs every operation on a single thread.
    pub threads: usize,
    /// Free-form description; falls back to `REYNOLDSFLOW_HARDWARE`.
    pub hardware: Option<String>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            pipeline: FlowPipeline::default(),
            normalization: NormalizationPolicy::default(),
            threads: 1,
            hardware: None,
        }
    }
}

/// Output of one pipeline invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodOutput {
    Image(EncodedImage),
    Flow(FlowField),
}

impl MethodOutput {
    /// Serialized bytes: raw RGB for images, `.flo` for flows.
    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            MethodOutput::Image(img) => img.data().to_vec(),
            MethodOutput::Flow(flow) => {
                let mut out = Vec::new();
                write_flo(flow, &mut out).expect("writing to a Vec cannot fail");
                out
            }
        }
    }
}

/// Full pipeline for one frame pair: flow estimation plus the method's encoding.
pub fn run_method(
    method: Method,
    pipeline: &FlowPipeline,
    norm: &NormalizationPolicy,
    current: &Frame,
    next: &Frame,
) -> Result<MethodOutput> {
    Ok(match method {
        Method::LkOnly => MethodOutput::Flow(pipeline.optical(current, next)?),
        Method::ReynoldsPlus => {
            let (vo, vr) = pipeline.components(current, next)?;
            MethodOutput::Image(encode_plus(&vo, &vr, current, norm)?)
        }
        Method::ReynoldsHsv => {
            let (vo, vr) = pipeline.components(current, next)?;
            MethodOutput::Image(encode_hsv(&combined_flow(&vo, &vr)?, norm))
        }
    })
}

/// Output buffers reused from one frame pair to the next, as a streaming
/// pipeline would keep them.
#[derive(Debug)]
pub struct Workspace {
    optical: FlowField,
    reynolds: FlowField,
    combined: FlowField,
    image: EncodedImage,
}

impl Default for Workspace {
    fn default() -> Self {
        Self {
            optical: FlowField::empty(),
            reynolds: FlowField::empty(),
            combined: FlowField::empty(),
            image: EncodedImage::empty(),
        }
    }
}

impl Workspace {
    /// Result of the last [`run_method_into`] call for `method`.
    pub fn output(&self, method: Method) -> MethodOutput {
        match method {
            Method::LkOnly => MethodOutput::Flow(self.optical.clone()),
            _ => MethodOutput::Image(self.image.clone()),
        }
    }

    fn output_bytes(&self, method: Method) -> Vec<u8> {
        match method {
            Method::LkOnly => MethodOutput::Flow(self.optical.clone()).to_bytes(),
            _ => self.image.data().to_vec(),
        }
    }
}

/// [`run_method`] writing into `ws`; results are identical.
pub fn run_method_into(
    method: Method,
    pipeline: &FlowPipeline,
    norm: &NormalizationPolicy,
    current: &Frame,
    next: &Frame,
    ws: &mut Workspace,
) -> Result<()> {
    match method {
        Method::LkOnly => lucas_kanade_into(current, next, &pipeline.lk, &mut ws.optical),
        Method::ReynoldsPlus => {
            pipeline.components_into(current, next, &mut ws.optical, &mut ws.reynolds)?;
            encode_plus_into(&ws.optical, &ws.reynolds, current, norm, &mut ws.image)
        }
        Method::ReynoldsHsv => {
            pipeline.components_into(current, next, &mut ws.optical, &mut ws.reynolds)?;
            combined_flow_into(&ws.optical, &ws.reynolds, &mut ws.combined)?;
            encode_hsv_into(&ws.combined, norm, &mut ws.image);
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub method: Method,
    pub width: usize,
    pub height: usize,
    /// Number of measured pairs (the warm-up pair is not counted).
    pub frames: usize,
    pub times: Vec<f64>,
    pub mean: f64,
    pub median: f64,
    pub p95: f64,
    pub min: f64,
    pub max: f64,
    /// `sequential` or `parallel(N)`.
    pub mode: String,
    pub config: BenchConfig,
    pub hardware: String,
    /// SHA-256 over every measured output, in order.
    pub output_digest: String,
}

/// Times `method` over consecutive pairs of `frames`.
pub fn time_pipeline(
    frames: &[Frame],
    method: Method,
    config: &BenchConfig,
) -> Result<BenchReport> {
    if frames.len() < 3 {
        return Err(Error::NotEnoughFrames {
            needed: 3,
            found: frames.len(),
        });
    }
    time_pipeline_stream(frames.iter().cloned().map(Ok), method, config)
}

/// Streaming variant of [`time_pipeline`]: frames are pulled one at a time,
/// so long high-resolution sequences need not be held in memory. Frame
/// production happens outside the timed region.
pub fn time_pipeline_stream<I>(
    frames: I,
    method: Method,
    config: &BenchConfig,
) -> Result<BenchReport>
where
    I: IntoIterator<Item = Result<Frame>>,
{
    if config.threads == 0 {
        return Err(Error::InvalidParameter("threads must be at least 1".into()));
    }
    config.normalization.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let mut frames = frames.into_iter();
    let mut seen = 0usize;
    let mut pull = |dims: Option<(usize, usize)>| -> Result<Option<Frame>> {
        match frames.next() {
            None => Ok(None),
            Some(f) => {
                let f = f?;
                if let Some(d) = dims {
                    check_same_dims(d, f.dims())?;
                }
                seen += 1;
                Ok(Some(f))
            }
        }
    };

    let first = pull(None)?.ok_or(Error::NotEnoughFrames {
        needed: 3,
        found: 0,
    })?;
    let dims = first.dims();
    let Some(second) = pull(Some(dims))? else {
        return Err(Error::NotEnoughFrames {
            needed: 3,
            found: 1,
        });
    };
    let (pipeline, norm) = (config.pipeline, config.normalization);

    // Warm-up pair: run, not timed. It also sizes the reused buffers.
    let mut ws = Workspace::default();
    pool.install(|| run_method_into(method, &pipeline, &norm, &first, &second, &mut ws))?;

    let mut times = Vec::new();
    let mut hasher = Sha256::new();
    let mut prev = second;
    let mut last = None;
    while let Some(next) = pull(Some(dims))? {
        let start = Instant::now();
        pool.install(|| run_method_into(method, &pipeline, &norm, &prev, &next, &mut ws))?;
        times.push(start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE));
        hasher.update(ws.output_bytes(method));
        last = Some((prev, next.clone()));
        prev = next;
    }
    let Some((a, b)) = last else {
        return Err(Error::NotEnoughFrames {
            needed: 3,
            found: 2,
        });
    };
    let timed = ws.output(method);
    // The timed path must agree with an untimed, freshly allocating run.
    let reference = pool.install(|| run_method(method, &pipeline, &norm, &a, &b))?;
    if reference != timed {
        return Err(Error::InvalidParameter(
            "timed output differs from the untimed reference run".into(),
        ));
    }
    debug_assert_eq!(seen, times.len() + 2);

    let mut sorted = times.clone();
    sorted.sort_by(f64::total_cmp);
    let hardware = config
        .hardware
        .clone()
        .or_else(|| std::env::var(HARDWARE_ENV).ok())
        .unwrap_or_else(|| "unspecified".to_string());
    Ok(BenchReport {
        method,
        width: dims.0,
        height: dims.1,
        frames: times.len(),
        mean: times.iter().sum::<f64>() / times.len() as f64,
        median: percentile_sorted(&sorted, 50.0),
        p95: percentile_sorted(&sorted, 95.0),
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        mode: if config.threads == 1 {
            "sequential".to_string()
        } else {
            format!("parallel({})", config.threads)
        },
        config: config.clone(),
        hardware,
        output_digest: hex_digest(hasher.finalize().as_slice()),
        times,
    })
}

fn hex_digest(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub const CSV_HEADER: &str = "method,width,height,frames,mean_s,median_s,p95_s";

/// Header plus one data row. Numbers use `.` decimals and never exponents.
pub fn write_csv<W: Write>(report: &BenchReport, mut sink: W) -> Result<()> {
    writeln!(sink, "{CSV_HEADER}")?;
    writeln!(
        sink,
        "{},{},{},{},{},{},{}",
        report.method,
        report.width,
        report.height,
        report.frames,
        report.mean,
        report.median,
        report.p95
    )?;
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report_with(mean: f64) -> BenchReport {
        BenchReport {
            method: Method::ReynoldsPlus,
            width: 1920,
            height: 1080,
            frames: 99,
            times: vec![mean],
            mean,
            median: 0.04,
            p95: 0.05,
            min: 0.03,
            max: 0.06,
            mode: "sequential".into(),
            config: BenchConfig::default(),
            hardware: "test".into(),
            output_digest: String::new(),
        }
    }

    #[test]
    fn csv_contract() {
        let mut buf = Vec::new();
        write_csv(&report_with(0.0415), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines.iter().all(|l| l.split(',').count() == 7));
        assert_eq!(lines[1], "reynolds_plus,1920,1080,99,0.0415,0.04,0.05");

        let mut buf = Vec::new();
        write_csv(&report_with(0.00001234), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert!(
            !row.split(',').skip(4).any(|f| f.contains(['e', 'E'])),
            "{row}"
        );
    }

    #[test]
    fn method_names() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert_eq!(
            "reynolds-plus".parse::<Method>().unwrap(),
            Method::ReynoldsPlus
        );
        assert!("farneback".parse::<Method>().is_err());
    }

    #[test]
    fn three_identical_frames() {
        let f = Frame::from_fn(64, 64, |x, y| ((x * 13 + y * 7) % 31) as f64 * 8.0);
        let frames = vec![f.clone(), f.clone(), f];
        for method in Method::ALL {
            let r = time_pipeline(&frames, method, &BenchConfig::default()).unwrap();
            assert_eq!(r.frames, 1);
            assert_eq!(r.times.len(), 1);
            assert!(r.times[0] > 0.0);
            assert!(r.p95 >= r.median && r.median >= r.min);
            let out = run_method(
                method,
                &FlowPipeline::default(),
                &NormalizationPolicy::default(),
                &frames[0],
                &frames[1],
            )
            .unwrap();
            match out {
                MethodOutput::Flow(fl) => assert!(fl.is_zero()),
                MethodOutput::Image(img) if method == Method::ReynoldsHsv => {
                    assert!(img.data().iter().all(|&b| b == 0))
                }
                MethodOutput::Image(img) => {
                    assert!(img
                        .channel(0)
                        .iter()
                        .chain(&img.channel(1))
                        .all(|&b| b == 0))
                }
            }
        }
    }

    #[test]
    fn too_few_frames() {
        let f = Frame::zeros(8, 8);
        let err = time_pipeline(&[f.clone(), f], Method::LkOnly, &BenchConfig::default());
        assert!(matches!(
            err,
            Err(Error::NotEnoughFrames {
                needed: 3,
                found: 2
            })
        ));
    }
}
