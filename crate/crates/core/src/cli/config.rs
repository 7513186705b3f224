//! Resolved run configuration: defaults, then a config file, then flags.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bench::{BenchConfig, Method};
use crate::encode::NormalizationPolicy;
use crate::error::{Error, Result};
use crate::flow::{LkConfig, ReynoldsConfig};
use crate::imgcore::BorderPolicy;
use crate::pipeline::FlowPipeline;
use crate::synth::SequenceSpec;

/// Which flow fields `flow` writes, and which field `encode --encode hsv` renders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FlowMethod {
    /// Optical flow `v_o` only.
    Lk,
    /// Reynolds flow `v_r` only.
    Reynolds,
    /// `v_o`, `v_r` and `v_R = v_o + v_r`.
    #[default]
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EncodeMode {
    /// Direction as hue, magnitude as value.
    #[default]
    Hsv,
    /// `[|v_o|, |v_r|, f]` as RGB.
    Plus,
}

impl fmt::Display for EncodeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodeMode::Hsv => "hsv",
            EncodeMode::Plus => "plus",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchSection {
    pub method: Method,
    pub hardware: Option<String>,
    /// CSV destination; defaults to `<output>/bench_<method>.csv`.
    pub csv: Option<PathBuf>,
}

impl Default for BenchSection {
    fn default() -> Self {
        Self {
            method: Method::ReynoldsPlus,
            hardware: None,
            csv: None,
        }
    }
}

/// Every knob of a run. Serialized verbatim into output sidecars, and
/// loadable back through `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Directory, `%0Nd` pattern, or `*` glob naming the input frames.
    pub input: Option<String>,
    pub output: PathBuf,
    pub method: FlowMethod,
    pub encode: EncodeMode,
    pub sigma: f64,
    pub window: usize,
    pub tau: f64,
    pub norm: NormalizationPolicy,
    pub border: BorderPolicy,
    /// Worker threads; unset means one per core (one for `bench`).
    pub threads: Option<usize>,
    pub synth: SequenceSpec,
    pub bench: BenchSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        let pipeline = FlowPipeline::default();
        Self {
            input: None,
            output: PathBuf::from("out"),
            method: FlowMethod::default(),
            encode: EncodeMode::default(),
            sigma: pipeline.reynolds.sigma,
            window: pipeline.lk.window,
            tau: pipeline.lk.eigen_threshold,
            norm: NormalizationPolicy::default(),
            border: BorderPolicy::default(),
            threads: None,
            synth: SequenceSpec::default(),
            bench: BenchSection::default(),
        }
    }
}

impl RunConfig {
    /// Reads a TOML file, or JSON when the extension is `.json`. A JSON
    /// sidecar written by this tool is accepted as well: its `config`
    /// object is used.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let inner = match value.get("config") {
                Some(c) if value.get("tool").is_some() => c.clone(),
                _ => value,
            };
            Ok(serde_json::from_value(inner)?)
        } else {
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        }
    }

    pub fn pipeline(&self) -> FlowPipeline {
        FlowPipeline::new(
            LkConfig {
                window: self.window,
                eigen_threshold: self.tau,
            },
            ReynoldsConfig {
                sigma: self.sigma,
                border: self.border,
            },
        )
    }

    pub fn bench_config(&self) -> BenchConfig {
        BenchConfig {
            pipeline: self.pipeline(),
            normalization: self.norm,
            threads: self.threads.unwrap_or(1),
            hardware: self.bench.hardware.clone(),
        }
    }

    /// Rejects parameter combinations no command can run with.
    pub fn validate(&self) -> Result<()> {
        let pipeline = self.pipeline();
        pipeline.lk.validate()?;
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidSigma(self.sigma));
        }
        self.norm.validate()?;
        if self.threads == Some(0) {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        Ok(())
    }
}

/// `per-frame` or `fixed:<scale>`; used by clap.
pub(crate) fn parse_norm(s: &str) -> std::result::Result<NormalizationPolicy, String> {
    NormalizationPolicy::from_str(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_partial_override() {
        let cfg: RunConfig = toml::from_str(
            r#"
            sigma = 2.0
            norm = "fixed:4"
            border = "reflect"
            [synth]
            frame_count = 4
            motion = { kind = "translation", dx = 0.5, dy = -1.0 }
            "#,
        )
        .unwrap();
        assert_eq!(cfg.sigma, 2.0);
        assert_eq!(cfg.norm, NormalizationPolicy::FixedScale(4.0));
        assert_eq!(cfg.border, BorderPolicy::Reflect);
        assert_eq!(cfg.window, 3);
        assert_eq!(cfg.synth.frame_count, 4);
        assert_eq!(cfg.synth.width, 64);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<RunConfig>("sigmaa = 2.0").is_err());
    }

    #[test]
    fn json_roundtrip() {
        let cfg = RunConfig {
            input: Some("frames/%04d.png".into()),
            threads: Some(4),
            ..RunConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
    }

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        assert!(RunConfig {
            window: 4,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            sigma: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            threads: Some(0),
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
