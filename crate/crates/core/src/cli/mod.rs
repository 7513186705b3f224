//! Command-line front end: `flow`, `encode`, `synth`, `bench`, `eval`.
//!
//! Parameters resolve as built-in defaults, then `--config <file>` (TOML, or
//! JSON including sidecars written by this tool), then command-line flags.

mod commands;
mod config;
mod inputs;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_bench, cmd_encode, cmd_eval, cmd_flow, cmd_synth, EvalReport};
pub use config::{BenchSection, EncodeMode, FlowMethod, RunConfig};
pub use inputs::resolve_inputs;

use crate::bench::Method;
use crate::encode::NormalizationPolicy;
use crate::error::Result;
use crate::imgcore::BorderPolicy;
use crate::synth::{Illumination, Motion, Pattern};

#[derive(Debug, Parser)]
#[command(
    name = "reynoldsflow",
    version,
    about = "Dense optical and Reynolds flow for frame sequences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write v_o / v_r / v_R .flo files for every consecutive frame pair.
    Flow {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        method: Option<FlowMethod>,
    },
    /// Write HSV or magnitude-stack PNGs for every consecutive frame pair.
    Encode {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        method: Option<FlowMethod>,
        #[arg(long, value_enum)]
        encode: Option<EncodeMode>,
    },
    /// Render a synthetic sequence with ground-truth flow.
    Synth {
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        height: Option<usize>,
        #[arg(long)]
        frames: Option<usize>,
        /// gaussian_blob | sine_grating | random_smooth
        #[arg(long)]
        pattern: Option<Pattern>,
        /// translate:<dx>,<dy> | divergent:<alpha>
        #[arg(long, allow_hyphen_values = true)]
        motion: Option<Motion>,
        /// none | uniform:<beta> | spatial:<gamma>
        #[arg(long, allow_hyphen_values = true)]
        illumination: Option<Illumination>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Time the full pipeline per frame pair and write a CSV report.
    ///
    /// Without --input, frames are streamed from the synthetic spec of the
    /// config file.
    Bench {
        #[command(flatten)]
        common: CommonArgs,
        /// reynolds_hsv | reynolds_plus | lk_only
        #[arg(long)]
        method: Option<Method>,
        /// Hardware descriptor recorded in the report (else $REYNOLDSFLOW_HARDWARE).
        #[arg(long)]
        hardware: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Synthetic frame size as <width>x<height> when no --input is given.
        #[arg(long)]
        size: Option<String>,
        /// Synthetic frame count when no --input is given.
        #[arg(long)]
        frames: Option<usize>,
    },
    /// Endpoint error of estimated .flo files against ground truth.
    Eval {
        /// Directory, %0Nd pattern, or glob of estimated .flo files.
        #[arg(long)]
        estimates: String,
        /// Synthetic sequence directory (with manifest.json), or .flo files.
        #[arg(long)]
        truth: String,
        /// Print machine-readable JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

/// Flags shared by the frame-processing subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Directory, %0Nd pattern, or glob naming the input frames.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Gaussian sigma of the Reynolds smoothing stage.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Odd least-squares window side.
    #[arg(long)]
    pub window: Option<usize>,
    /// Minimum structure-tensor eigenvalue.
    #[arg(long)]
    pub tau: Option<f64>,
    /// per-frame | fixed:<scale>
    #[arg(long, value_parser = config::parse_norm)]
    pub norm: Option<NormalizationPolicy>,
    #[arg(long)]
    pub border: Option<BorderPolicy>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// TOML or JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = base_config(self.config.as_ref())?;
        let c = self.clone();
        if c.input.is_some() {
            cfg.input = c.input;
        }
        if let Some(v) = c.output {
            cfg.output = v;
        }
        if let Some(v) = c.sigma {
            cfg.sigma = v;
        }
        if let Some(v) = c.window {
            cfg.window = v;
        }
        if let Some(v) = c.tau {
            cfg.tau = v;
        }
        if let Some(v) = c.norm {
            cfg.norm = v;
        }
        if let Some(v) = c.border {
            cfg.border = v;
        }
        if c.threads.is_some() {
            cfg.threads = c.threads;
        }
        Ok(cfg)
    }
}

fn base_config(path: Option<&PathBuf>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::from_file(p),
        None => Ok(RunConfig::default()),
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Flow { common, method } => {
            let mut cfg = common.resolve()?;
            if let Some(m) = method {
                cfg.method = m;
            }
            cmd_flow(&cfg).map(|_| ())
        }
        Command::Encode {
            common,
            method,
            encode,
        } => {
            let mut cfg = common.resolve()?;
            if let Some(m) = method {
                cfg.method = m;
            }
            if let Some(e) = encode {
                cfg.encode = e;
            }
            cmd_encode(&cfg).map(|_| ())
        }
        Command::Synth {
            output,
            config,
            width,
            height,
            frames,
            pattern,
            motion,
            illumination,
            seed,
        } => {
            let mut cfg = base_config(config.as_ref())?;
            if let Some(v) = output {
                cfg.output = v;
            }
            let s = &mut cfg.synth;
            s.width = width.unwrap_or(s.width);
            s.height = height.unwrap_or(s.height);
            s.frame_count = frames.unwrap_or(s.frame_count);
            s.pattern = pattern.unwrap_or(s.pattern);
            s.motion = motion.unwrap_or(s.motion);
            s.illumination = illumination.unwrap_or(s.illumination);
            s.seed = seed.unwrap_or(s.seed);
            cmd_synth(&cfg).map(|_| ())
        }
        Command::Bench {
            common,
            method,
            hardware,
            csv,
            size,
            frames,
        } => {
            let mut cfg = common.resolve()?;
            if let Some(m) = method {
                cfg.bench.method = m;
            }
            if hardware.is_some() {
                cfg.bench.hardware = hardware;
            }
            if csv.is_some() {
                cfg.bench.csv = csv;
            }
            if let Some(size) = size {
                let parsed = size
                    .split_once('x')
                    .and_then(|(w, h)| Some((w.parse().ok()?, h.parse().ok()?)));
                let (w, h) = parsed.ok_or_else(|| {
                    crate::Error::Config(format!("--size expects <width>x<height>, got '{size}'"))
                })?;
                cfg.synth.width = w;
                cfg.synth.height = h;
            }
            if let Some(n) = frames {
                cfg.synth.frame_count = n;
            }
            cmd_bench(&cfg).map(|_| ())
        }
        Command::Eval {
            estimates,
            truth,
            json,
        } => {
            let report = cmd_eval(&estimates, &truth)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{report}");
            }
            Ok(())
        }
    }
}
