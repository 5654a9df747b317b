//! TOML experiment configuration.
//!
//! ```toml
//! name = "my_run"
//! scenario = "soft_circular"
//! trials = 20
//! samples = 3000
//! snr_db = 15.0
//! seed = 1
//!
//! [novelty]
//! delta1 = 0.15
//! delta2 = 0.2
//!
//! [[arm]]
//! name = "gcklms"
//! algorithm = "gcklms"
//! mu = 0.142857
//! kernel.k_rr = { kind = "gaussian", gamma = 6.5 }
//! kernel.k_jj = { kind = "gaussian", gamma = 5.5 }
//!
//! [[arm]]
//! name = "cklms2"
//! algorithm = "cklms2"
//! mu = 0.125
//! kernel.complex_gaussian = 10.0
//! ```
//!
//! Unknown keys are rejected. Within a kernel table, `k_jj` defaults to
//! `k_rr` and the off-diagonal entries default to zero.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{Algorithm, FilterSpec, KernelChoice, NoveltyParams};
use crate::harness::{
    ArmConfig, ExperimentConfig, Scenario, DEFAULT_EQUALIZER_DELAY, DEFAULT_EQUALIZER_TAPS,
};
use crate::kernels::{KernelSpec, RealSubKernel};
use crate::signal_lab::PROCESS_GRID_POINTS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default = "default_name")]
    name: String,
    #[serde(default = "default_scenario")]
    scenario: String,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default = "default_snr")]
    snr_db: f64,
    #[serde(default)]
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    novelty: Option<RawNovelty>,
    #[serde(default = "default_taps")]
    equalizer_taps: usize,
    #[serde(default = "default_delay")]
    equalizer_delay: usize,
    #[serde(default = "default_grid")]
    grid_points: usize,
    #[serde(default)]
    arm: Vec<RawArm>,
}

fn default_name() -> String {
    "experiment".into()
}
fn default_scenario() -> String {
    Scenario::SoftCircular.as_str().into()
}
fn default_trials() -> usize {
    20
}
fn default_samples() -> usize {
    3000
}
fn default_snr() -> f64 {
    15.0
}
fn default_taps() -> usize {
    DEFAULT_EQUALIZER_TAPS
}
fn default_delay() -> usize {
    DEFAULT_EQUALIZER_DELAY
}
fn default_grid() -> usize {
    PROCESS_GRID_POINTS
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNovelty {
    delta1: f64,
    delta2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArm {
    name: String,
    algorithm: String,
    mu: f64,
    kernel: RawKernel,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKernel {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    complex_gaussian: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k_rr: Option<RealSubKernel<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k_jj: Option<RealSubKernel<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k_rj: Option<RealSubKernel<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k_jr: Option<RealSubKernel<f64>>,
}

impl RawKernel {
    fn resolve(&self, path: &str) -> Result<KernelChoice<f64>> {
        let composed = [&self.k_rr, &self.k_jj, &self.k_rj, &self.k_jr]
            .iter()
            .any(|k| k.is_some());
        match (self.complex_gaussian, composed) {
            (Some(_), true) => Err(Error::config(
                path,
                "give either complex_gaussian or the sub-kernels k_rr/k_jj/k_rj/k_jr, not both",
            )),
            (Some(gamma), false) => {
                if !(gamma > 0.0) || !gamma.is_finite() {
                    return Err(Error::config(
                        format!("{path}.complex_gaussian"),
                        format!("kernel width must be positive, got {gamma}"),
                    ));
                }
                Ok(KernelChoice::ComplexGaussian { gamma })
            }
            (None, true) => {
                let k_rr = self
                    .k_rr
                    .ok_or_else(|| Error::config(format!("{path}.k_rr"), "missing"))?;
                let spec = KernelSpec {
                    k_rr,
                    k_jj: self.k_jj.unwrap_or(k_rr),
                    k_rj: self.k_rj.unwrap_or_else(RealSubKernel::zero),
                    k_jr: self.k_jr.unwrap_or_else(RealSubKernel::zero),
                };
                spec.validate(path)?;
                Ok(KernelChoice::Composed(spec))
            }
            (None, false) => Err(Error::config(path, "no kernel given")),
        }
    }

    fn from_choice(k: &KernelChoice<f64>) -> Self {
        match *k {
            KernelChoice::ComplexGaussian { gamma } => RawKernel {
                complex_gaussian: Some(gamma),
                ..Default::default()
            },
            KernelChoice::Composed(s) => RawKernel {
                complex_gaussian: None,
                k_rr: Some(s.k_rr),
                k_jj: Some(s.k_jj),
                k_rj: Some(s.k_rj),
                k_jr: Some(s.k_jr),
            },
        }
    }
}

impl RawConfig {
    fn resolve(self) -> Result<ExperimentConfig> {
        let scenario: Scenario = self.scenario.parse()?;
        let novelty = self
            .novelty
            .map(|n| NoveltyParams::new(n.delta1, n.delta2))
            .transpose()?;
        let arms = self
            .arm
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let path = format!("arm[{i}]");
                let algorithm: Algorithm = a.algorithm.parse().map_err(|_| {
                    Error::config(
                        format!("{path}.algorithm"),
                        format!("unknown algorithm `{}`", a.algorithm),
                    )
                })?;
                if !(a.mu > 0.0) || !a.mu.is_finite() {
                    return Err(Error::config(
                        format!("{path}.mu"),
                        format!("step size must be positive, got {}", a.mu),
                    ));
                }
                Ok(ArmConfig {
                    name: a.name.clone(),
                    filter: FilterSpec {
                        algorithm,
                        kernel: a.kernel.resolve(&format!("{path}.kernel"))?,
                        mu: a.mu,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let cfg = ExperimentConfig {
            name: self.name,
            scenario,
            arms,
            trials: self.trials,
            samples_per_trial: self.samples,
            snr_db: self.snr_db,
            novelty,
            base_seed: self.seed,
            equalizer_taps: self.equalizer_taps,
            equalizer_delay: self.equalizer_delay,
            grid_points: self.grid_points,
        };
        Ok(cfg)
    }

    fn from_config(cfg: &ExperimentConfig) -> Self {
        RawConfig {
            name: cfg.name.clone(),
            scenario: cfg.scenario.as_str().into(),
            trials: cfg.trials,
            samples: cfg.samples_per_trial,
            snr_db: cfg.snr_db,
            seed: cfg.base_seed,
            novelty: cfg.novelty.map(|n| RawNovelty {
                delta1: n.delta1,
                delta2: n.delta2,
            }),
            equalizer_taps: cfg.equalizer_taps,
            equalizer_delay: cfg.equalizer_delay,
            grid_points: cfg.grid_points,
            arm: cfg
                .arms
                .iter()
                .map(|a| RawArm {
                    name: a.name.clone(),
                    algorithm: a.filter.algorithm.as_str().into(),
                    mu: a.filter.mu,
                    kernel: RawKernel::from_choice(&a.filter.kernel),
                })
                .collect(),
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn toml_error(text: &str, e: toml::de::Error) -> Error {
    let location = e
        .span()
        .map(|s| format!("line {}", line_of(text, s.start)))
        .unwrap_or_else(|| "config".into());
    Error::config(location, e.message().to_string())
}

/// Sets `key = value` in a parsed TOML document. Dotted keys descend into
/// tables; numeric segments index arrays (`arm.0.mu`). The value is parsed as
/// TOML and falls back to a plain string.
pub fn apply_override(root: &mut toml::Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::config(assignment, "override must look like key=value"))?;
    let (key, raw) = (key.trim(), raw.trim());
    if key.is_empty() {
        return Err(Error::config(assignment, "empty override key"));
    }
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    let (last, parents) = parts.split_last().expect("split yields at least one part");
    let mut cur = root;
    for p in parents {
        cur = descend(cur, p)
            .ok_or_else(|| Error::config(key, format!("no such key segment `{p}`")))?;
    }
    match cur {
        toml::Value::Table(t) => {
            t.insert((*last).to_string(), value);
        }
        toml::Value::Array(a) => {
            let i: usize = last
                .parse()
                .map_err(|_| Error::config(key, "array segment must be an index"))?;
            *a.get_mut(i)
                .ok_or_else(|| Error::config(key, "index out of range"))? = value;
        }
        _ => return Err(Error::config(key, "cannot assign into a scalar")),
    }
    Ok(())
}

fn descend<'a>(v: &'a mut toml::Value, seg: &str) -> Option<&'a mut toml::Value> {
    match v {
        toml::Value::Table(t) => t.get_mut(seg),
        toml::Value::Array(a) => seg.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
        _ => None,
    }
}

/// Parses config text, applying `--set` overrides before validation.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<ExperimentConfig> {
    let cfg = parse_config_unvalidated(text, overrides)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Like [`parse_config`] but skips the cross-field checks of
/// [`ExperimentConfig::validate`], for callers that adjust the result first.
pub fn parse_config_unvalidated(text: &str, overrides: &[String]) -> Result<ExperimentConfig> {
    if overrides.is_empty() {
        // direct deserialization keeps spans, so unknown keys get line numbers too
        let raw: RawConfig = toml::from_str(text).map_err(|e| toml_error(text, e))?;
        return raw.resolve();
    }
    let table: toml::Table = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    let mut root = toml::Value::Table(table);
    for o in overrides {
        apply_override(&mut root, o)?;
    }
    let raw: RawConfig = root
        .try_into()
        .map_err(|e: toml::de::Error| Error::config("config", e.message().to_string()))?;
    raw.resolve()
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    load_config_with(path, &[])
}

pub fn load_config_with(path: &Path, overrides: &[String]) -> Result<ExperimentConfig> {
    let cfg = load_config_unvalidated(path, overrides)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config_unvalidated(path: &Path, overrides: &[String]) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    parse_config_unvalidated(&text, overrides)
}

/// Serializes a config in the format read by [`parse_config`].
pub fn serialize_config(cfg: &ExperimentConfig) -> String {
    toml::to_string(&RawConfig::from_config(cfg)).expect("config is serializable")
}
