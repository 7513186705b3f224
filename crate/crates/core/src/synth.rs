//! Synthetic frame sequences with analytic ground-truth motion.
//!
//! Frames are rendered in closed form: pixel `p` of frame `n` takes the
//! pattern value at the back-advected point, so ground truth carries no
//! resampling error. Motion follows the explicit Euler update
//! `p(n+1) = p(n) + v(p(n))` with unit time step.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encode::{write_flo_file, write_png_file};
use crate::error::{check_same_dims, Error, Result};
use crate::flow::FlowField;
use crate::imgcore::Frame;

/// Largest per-frame translation the generator accepts, in pixels.
pub const MAX_DISPLACEMENT: f64 = 3.0;
/// Ground-truth pixels closer than this to the frame edge are not scored.
pub const MASK_BORDER: usize = 5;
/// Pattern gradient magnitude below which a pixel is not scored.
pub const MASK_MIN_GRADIENT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    /// Bright isotropic Gaussian on a dark background, centred in the frame.
    #[default]
    GaussianBlob,
    /// Two crossed sinusoidal gratings (a plaid), so both flow components
    /// are observable.
    SineGrating,
    /// Seeded sum of low-frequency sinusoids.
    RandomSmooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Motion {
    /// Constant velocity `(dx, dy)` in pixels per frame.
    Translation { dx: f64, dy: f64 },
    /// `v(p) = alpha * (p - c)` about the frame centre `c`.
    Divergent { alpha: f64 },
}

impl Default for Motion {
    fn default() -> Self {
        Motion::Translation { dx: 1.0, dy: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Illumination {
    #[default]
    None,
    /// Adds `beta * n` to every pixel of frame `n`.
    UniformRamp { beta: f64 },
    /// Adds `gamma * n * x` to pixel column `x` of frame `n`.
    SpatialRamp { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SequenceSpec {
    pub width: usize,
    pub height: usize,
    pub frame_count: usize,
    pub pattern: Pattern,
    pub motion: Motion,
    pub illumination: Illumination,
    pub seed: u64,
}

impl Default for SequenceSpec {
    fn default() -> Self {
        Self {
            width: 64,
            height: 64,
            frame_count: 10,
            pattern: Pattern::GaussianBlob,
            motion: Motion::default(),
            illumination: Illumination::None,
            seed: 0,
        }
    }
}

impl SequenceSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.width < 3 || self.height < 3 {
            return bad(format!(
                "frames must be at least 3x3, got {}x{}",
                self.width, self.height
            ));
        }
        if self.frame_count < 2 {
            return bad(format!("need at least 2 frames, got {}", self.frame_count));
        }
        match self.motion {
            Motion::Translation { dx, dy } => {
                if !(dx.is_finite() && dy.is_finite())
                    || dx.abs() > MAX_DISPLACEMENT
                    || dy.abs() > MAX_DISPLACEMENT
                {
                    return bad(format!(
                        "translation ({dx}, {dy}) exceeds {MAX_DISPLACEMENT} px/frame"
                    ));
                }
            }
            Motion::Divergent { alpha } => {
                if !alpha.is_finite() || alpha.abs() >= 1.0 {
                    return bad(format!(
                        "divergence alpha must satisfy |alpha| < 1, got {alpha}"
                    ));
                }
            }
        }
        let ok = match self.illumination {
            Illumination::None => true,
            Illumination::UniformRamp { beta } => beta.is_finite(),
            Illumination::SpatialRamp { gamma } => gamma.is_finite(),
        };
        if !ok {
            return bad("illumination rate must be finite".into());
        }
        Ok(())
    }

    fn center(&self) -> (f64, f64) {
        (
            (self.width as f64 - 1.0) / 2.0,
            (self.height as f64 - 1.0) / 2.0,
        )
    }

    /// Where the content shown at `(x, y)` in frame `n` sat in frame 0.
    fn back_advect(&self, x: f64, y: f64, n: usize) -> (f64, f64, f64) {
        match self.motion {
            Motion::Translation { dx, dy } => (x - n as f64 * dx, y - n as f64 * dy, 1.0),
            Motion::Divergent { alpha } => {
                let (cx, cy) = self.center();
                let s = (1.0 + alpha).powi(n as i32).recip();
                (cx + (x - cx) * s, cy + (y - cy) * s, s)
            }
        }
    }

    fn velocity(&self, x: f64, y: f64) -> (f64, f64) {
        match self.motion {
            Motion::Translation { dx, dy } => (dx, dy),
            Motion::Divergent { alpha } => {
                let (cx, cy) = self.center();
                (alpha * (x - cx), alpha * (y - cy))
            }
        }
    }

    fn illumination_at(&self, x: f64, n: usize) -> f64 {
        match self.illumination {
            Illumination::None => 0.0,
            Illumination::UniformRamp { beta } => beta * n as f64,
            Illumination::SpatialRamp { gamma } => gamma * n as f64 * x,
        }
    }
}

impl fmt::Display for Motion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Motion::Translation { dx, dy } => write!(f, "translate:{dx},{dy}"),
            Motion::Divergent { alpha } => write!(f, "divergent:{alpha}"),
        }
    }
}

impl FromStr for Motion {
    type Err = String;

    /// `translate:<dx>,<dy>` or `divergent:<alpha>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number '{t}' in motion '{s}'"))
        };
        if let Some(rest) = s.strip_prefix("translate:") {
            let (dx, dy) = rest
                .split_once(',')
                .ok_or_else(|| format!("expected translate:<dx>,<dy>, got '{s}'"))?;
            return Ok(Motion::Translation {
                dx: num(dx)?,
                dy: num(dy)?,
            });
        }
        if let Some(rest) = s.strip_prefix("divergent:") {
            return Ok(Motion::Divergent { alpha: num(rest)? });
        }
        Err(format!(
            "unknown motion '{s}' (translate:<dx>,<dy>|divergent:<alpha>)"
        ))
    }
}

impl FromStr for Illumination {
    type Err = String;

    /// `none`, `uniform:<beta>` or `spatial:<gamma>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number in illumination '{s}'"))
        };
        if s == "none" {
            Ok(Illumination::None)
        } else if let Some(b) = s.strip_prefix("uniform:") {
            Ok(Illumination::UniformRamp { beta: num(b)? })
        } else if let Some(g) = s.strip_prefix("spatial:") {
            Ok(Illumination::SpatialRamp { gamma: num(g)? })
        } else {
            Err(format!(
                "unknown illumination '{s}' (none|uniform:<beta>|spatial:<gamma>)"
            ))
        }
    }
}

impl FromStr for Pattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "gaussian_blob" | "blob" => Ok(Pattern::GaussianBlob),
            "sine_grating" | "grating" => Ok(Pattern::SineGrating),
            "random_smooth" | "random" => Ok(Pattern::RandomSmooth),
            _ => Err(format!(
                "unknown pattern '{s}' (gaussian_blob|sine_grating|random_smooth)"
            )),
        }
    }
}

/// Closed-form intensity pattern with an analytic gradient.
#[derive(Debug, Clone)]
enum PatternField {
    Blob {
        cx: f64,
        cy: f64,
        sigma: f64,
        amplitude: f64,
        background: f64,
    },
    Waves {
        offset: f64,
        waves: Vec<Wave>,
    },
}

#[derive(Debug, Clone, Copy)]
struct Wave {
    amplitude: f64,
    kx: f64,
    ky: f64,
    phase: f64,
}

impl PatternField {
    fn new(spec: &SequenceSpec) -> Self {
        let (cx, cy) = spec.center();
        let short_side = spec.width.min(spec.height) as f64;
        match spec.pattern {
            Pattern::GaussianBlob => PatternField::Blob {
                cx,
                cy,
                sigma: short_side / 8.0,
                amplitude: 200.0,
                background: 20.0,
            },
            Pattern::SineGrating => {
                let k = 2.0 * std::f64::consts::PI / 16.0;
                let wave = |deg: f64| {
                    let t = deg.to_radians();
                    Wave {
                        amplitude: 50.0,
                        kx: k * t.cos(),
                        ky: k * t.sin(),
                        phase: 0.0,
                    }
                };
                PatternField::Waves {
                    offset: 128.0,
                    waves: vec![wave(30.0), wave(120.0)],
                }
            }
            Pattern::RandomSmooth => {
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                let waves = (0..8)
                    .map(|_| {
                        let wavelength: f64 = rng.random_range(12.0..40.0);
                        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                        let k = std::f64::consts::TAU / wavelength;
                        Wave {
                            amplitude: rng.random_range(6.0..14.0),
                            kx: k * theta.cos(),
                            ky: k * theta.sin(),
                            phase: rng.random_range(0.0..std::f64::consts::TAU),
                        }
                    })
                    .collect();
                PatternField::Waves {
                    offset: 128.0,
                    waves,
                }
            }
        }
    }

    /// Intensity and gradient at a frame-0 point.
    fn eval(&self, x: f64, y: f64) -> (f64, f64, f64) {
        match self {
            PatternField::Blob {
                cx,
                cy,
                sigma,
                amplitude,
                background,
            } => {
                let (rx, ry) = (x - cx, y - cy);
                let s2 = sigma * sigma;
                let g = amplitude * (-(rx * rx + ry * ry) / (2.0 * s2)).exp();
                (background + g, -g * rx / s2, -g * ry / s2)
            }
            PatternField::Waves { offset, waves } => {
                let mut val = *offset;
                let (mut gx, mut gy) = (0.0, 0.0);
                for w in waves {
                    let arg = w.kx * x + w.ky * y + w.phase;
                    val += w.amplitude * arg.sin();
                    let c = w.amplitude * arg.cos();
                    gx += c * w.kx;
                    gy += c * w.ky;
                }
                (val, gx, gy)
            }
        }
    }
}

/// Per-pixel flag: `true` where the analytic motion is scored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityMask {
    width: usize,
    height: usize,
    valid: Vec<bool>,
}

impl ValidityMask {
    pub fn new(width: usize, height: usize, valid: Vec<bool>) -> Result<Self> {
        if valid.len() != width * height {
            return Err(Error::BadLength {
                len: valid.len(),
                width,
                height,
                channels: 1,
            });
        }
        Ok(Self {
            width,
            height,
            valid,
        })
    }

    pub fn all(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            valid: vec![true; width * height],
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        self.valid[y * self.width + x]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.valid
    }

    pub fn count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    pub fn coverage(&self) -> f64 {
        self.count() as f64 / self.valid.len() as f64
    }

    /// Mask as a frame of 0 / 255, for PNG export.
    pub fn to_frame(&self) -> Frame {
        Frame::from_parts(
            self.width,
            self.height,
            self.valid
                .iter()
                .map(|&v| if v { 255.0 } else { 0.0 })
                .collect(),
        )
    }

    /// Inverse of [`ValidityMask::to_frame`]: nonzero pixels are valid.
    pub fn from_frame(frame: &Frame) -> Self {
        let (width, height) = frame.dims();
        Self {
            width,
            height,
            valid: frame.data().iter().map(|&v| v > 127.0).collect(),
        }
    }
}

/// Analytic flow and validity mask for each consecutive frame pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub flows: Vec<FlowField>,
    pub masks: Vec<ValidityMask>,
}

impl GroundTruth {
    pub fn pairs(&self) -> usize {
        self.flows.len()
    }

    /// Endpoint error of `estimate` against pair `n`.
    pub fn evaluate(&self, n: usize, estimate: &FlowField) -> Result<EpeStats> {
        let flow = self
            .flows
            .get(n)
            .ok_or_else(|| Error::InvalidParameter(format!("no ground truth for pair {n}")))?;
        endpoint_error(estimate, flow, Some(&self.masks[n]))
    }
}

/// Renders frame `n` of the sequence.
pub fn render_frame(spec: &SequenceSpec, n: usize) -> Result<Frame> {
    spec.validate()?;
    Ok(render_with(spec, &PatternField::new(spec), n))
}

fn render_with(spec: &SequenceSpec, pattern: &PatternField, n: usize) -> Frame {
    if let (Motion::Translation { dx, dy }, PatternField::Waves { offset, waves }) =
        (spec.motion, pattern)
    {
        return render_translated_waves(spec, *offset, waves, n, (n as f64 * dx, n as f64 * dy));
    }
    Frame::from_fn(spec.width, spec.height, |x, y| {
        let (px, py) = (x as f64, y as f64);
        let (bx, by, _) = spec.back_advect(px, py, n);
        pattern.eval(bx, by).0 + spec.illumination_at(px, n)
    })
}

/// Translated sinusoids factor into column and row tables through
/// `sin(a + b) = sin a cos b + cos a sin b`, so the per-pixel work has no
/// trigonometry.
fn render_translated_waves(
    spec: &SequenceSpec,
    offset: f64,
    waves: &[Wave],
    n: usize,
    (sx, sy): (f64, f64),
) -> Frame {
    let (w, h) = (spec.width, spec.height);
    let tables: Vec<(Vec<f64>, Vec<f64>)> = waves
        .iter()
        .map(|wave| {
            (0..w)
                .map(|x| {
                    let a = wave.kx * (x as f64 - sx) + wave.phase;
                    (wave.amplitude * a.sin(), wave.amplitude * a.cos())
                })
                .unzip()
        })
        .collect();
    let illumination: Vec<f64> = (0..w).map(|x| spec.illumination_at(x as f64, n)).collect();
    let mut data = Vec::with_capacity(w * h);
    let mut row = vec![0.0; w];
    for y in 0..h {
        row.fill(offset);
        for (wave, (sin_x, cos_x)) in waves.iter().zip(&tables) {
            let b = wave.ky * (y as f64 - sy);
            let (sin_y, cos_y) = b.sin_cos();
            for ((r, s), c) in row.iter_mut().zip(sin_x).zip(cos_x) {
                *r += s * cos_y + c * sin_y;
            }
        }
        data.extend(row.iter().zip(&illumination).map(|(r, l)| r + l));
    }
    Frame::from_parts(w, h, data)
}

/// Frames and ground truth for a whole sequence.
pub fn generate(spec: &SequenceSpec) -> Result<(Vec<Frame>, GroundTruth)> {
    spec.validate()?;
    let pattern = PatternField::new(spec);
    let frames = (0..spec.frame_count)
        .map(|n| render_with(spec, &pattern, n))
        .collect();
    let (w, h) = (spec.width, spec.height);
    let mut flows = Vec::with_capacity(spec.frame_count - 1);
    let mut masks = Vec::with_capacity(spec.frame_count - 1);
    for n in 0..spec.frame_count - 1 {
        flows.push(FlowField::from_fn(w, h, |x, y| {
            spec.velocity(x as f64, y as f64)
        }));
        let mut valid = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                let inside = x >= MASK_BORDER
                    && y >= MASK_BORDER
                    && x + MASK_BORDER < w
                    && y + MASK_BORDER < h;
                let (bx, by, scale) = spec.back_advect(x as f64, y as f64, n);
                let (_, gx, gy) = pattern.eval(bx, by);
                valid.push(inside && gx.hypot(gy) * scale >= MASK_MIN_GRADIENT);
            }
        }
        masks.push(ValidityMask {
            width: w,
            height: h,
            valid,
        });
    }
    Ok((frames, GroundTruth { flows, masks }))
}

/// Endpoint-error summary over the scored pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpeStats {
    pub mean: f64,
    pub median: f64,
    pub p95: f64,
    pub count: usize,
}

impl EpeStats {
    /// Summary of raw per-pixel errors.
    pub fn from_errors(mut errors: Vec<f64>) -> Result<Self> {
        if errors.is_empty() {
            return Err(Error::EmptyMask);
        }
        errors.sort_by(f64::total_cmp);
        Ok(EpeStats {
            mean: errors.iter().sum::<f64>() / errors.len() as f64,
            median: percentile_sorted(&errors, 50.0),
            p95: percentile_sorted(&errors, 95.0),
            count: errors.len(),
        })
    }
}

/// Per-pixel `|estimate - truth|` over `mask` (all pixels when `None`),
/// summarized by mean, median and 95th percentile. Percentiles interpolate
/// linearly between order statistics.
pub fn endpoint_error(
    estimate: &FlowField,
    truth: &FlowField,
    mask: Option<&ValidityMask>,
) -> Result<EpeStats> {
    EpeStats::from_errors(endpoint_errors(estimate, truth, mask)?)
}

/// The unsummarized per-pixel errors behind [`endpoint_error`].
pub fn endpoint_errors(
    estimate: &FlowField,
    truth: &FlowField,
    mask: Option<&ValidityMask>,
) -> Result<Vec<f64>> {
    check_same_dims(truth.dims(), estimate.dims())?;
    if let Some(m) = mask {
        check_same_dims(truth.dims(), m.dims())?;
    }
    Ok((0..truth.u().len())
        .filter(|&i| mask.is_none_or(|m| m.valid[i]))
        .map(|i| {
            let du = estimate.u()[i] - truth.u()[i];
            let dv = estimate.v()[i] - truth.v()[i];
            du.hypot(dv)
        })
        .collect())
}

pub(crate) fn percentile_sorted(sorted: &[f64], pct: f64) -> f64 {
    let pos = pct / 100.0 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Advances every vertex one Euler step under `v(p) = alpha * p` and returns
/// the moved polygon together with the shoelace area ratio new / old.
///
/// The first-order area law predicts `1 + 2 alpha dt`, the divergence of `v`
/// being `2 alpha`; the exact ratio is `(1 + alpha dt)^2`.
pub fn advect_patch_area(
    alpha: f64,
    dt: f64,
    polygon: &[[f64; 2]],
) -> Result<(Vec<[f64; 2]>, f64)> {
    if !(dt > 0.0 && dt.is_finite()) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need finite alpha and dt > 0, got alpha={alpha}, dt={dt}"
        )));
    }
    if polygon.len() < 3 {
        return Err(Error::InvalidPolygon(format!(
            "need at least 3 vertices, got {}",
            polygon.len()
        )));
    }
    if polygon.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::InvalidPolygon("non-finite vertex".into()));
    }
    let before = shoelace_area(polygon);
    if before == 0.0 {
        return Err(Error::InvalidPolygon("zero area".into()));
    }
    if !is_simple(polygon) {
        return Err(Error::InvalidPolygon("self-intersecting".into()));
    }
    let moved: Vec<[f64; 2]> = polygon
        .iter()
        .map(|&[x, y]| [x + alpha * x * dt, y + alpha * y * dt])
        .collect();
    Ok((moved.clone(), shoelace_area(&moved).abs() / before.abs()))
}

/// Signed area, positive for counter-clockwise vertex order.
pub fn shoelace_area(polygon: &[[f64; 2]]) -> f64 {
    let n = polygon.len();
    0.5 * (0..n)
        .map(|i| {
            let [x0, y0] = polygon[i];
            let [x1, y1] = polygon[(i + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum::<f64>()
}

fn is_simple(polygon: &[[f64; 2]]) -> bool {
    let n = polygon.len();
    let seg = |i: usize| (polygon[i], polygon[(i + 1) % n]);
    for i in 0..n {
        for j in i + 1..n {
            // Adjacent edges share a vertex by construction.
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        let v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
        v.partial_cmp(&0.0).map_or(0, |o| o as i8)
    };
    let on_segment = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        r[0] >= p[0].min(q[0])
            && r[0] <= p[0].max(q[0])
            && r[1] >= p[1].min(q[1])
            && r[1] <= p[1].max(q[1])
    };
    let (o1, o2, o3, o4) = (
        orient(a, b, c),
        orient(a, b, d),
        orient(c, d, a),
        orient(c, d, b),
    );
    if o1 != o2 && o3 != o4 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// Index of an exported sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub spec: SequenceSpec,
    pub frames: Vec<PathBuf>,
    pub truth: Vec<PathBuf>,
    pub masks: Vec<PathBuf>,
}

pub const MANIFEST_NAME: &str = "manifest.json";
const MASK_DIR: &str = "masks";

/// Writes `frame_NNNN.png`, `gt_NNNN.flo`, `masks/mask_NNNN.png` and
/// `manifest.json` into `dir`. Paths in the manifest are relative to `dir`;
/// the manifest also records the generating spec, which reproduces every
/// file exactly.
pub fn write_sequence(spec: &SequenceSpec, dir: impl AsRef<Path>) -> Result<Manifest> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let (frames, truth) = generate(spec)?;
    let mut manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        spec: *spec,
        frames: vec![],
        truth: vec![],
        masks: vec![],
    };
    fs::create_dir_all(dir.join(MASK_DIR))?;
    for (n, frame) in frames.iter().enumerate() {
        let name = PathBuf::from(format!("frame_{n:04}.png"));
        write_png_file(frame, dir.join(&name))?;
        manifest.frames.push(name);
    }
    for (n, (flow, mask)) in truth.flows.iter().zip(&truth.masks).enumerate() {
        let gt = PathBuf::from(format!("gt_{n:04}.flo"));
        write_flo_file(flow, dir.join(&gt))?;
        manifest.truth.push(gt);
        let m = Path::new(MASK_DIR).join(format!("mask_{n:04}.png"));
        write_png_file(&mask.to_frame(), dir.join(&m))?;
        manifest.masks.push(m);
    }
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(dir.join(MANIFEST_NAME), text)?;
    Ok(manifest)
}
