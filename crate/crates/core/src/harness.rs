//! Multi-trial experiment runner and learning-curve statistics.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;

use crate::complex_algebra::ComplexVec;
use crate::error::{Error, Result};
use crate::filters::{Algorithm, FilterSpec, KernelChoice, NoveltyParams};
use crate::kernels::KernelSpec;
use crate::signal_lab::{self, ChannelModel, SignalSource};

type C64 = Complex<f64>;

/// Floor applied when converting mean squared errors to dB.
pub const DB_FLOOR: f64 = -120.0;
/// Window of the moving average used by [`samples_to_reach`].
pub const REACH_WINDOW: usize = 100;

pub const DEFAULT_EQUALIZER_TAPS: usize = 5;
pub const DEFAULT_EQUALIZER_DELAY: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    SoftCircular,
    SoftNoncircular,
    StrongCircular,
    StrongNoncircular,
    SoftBinary,
    RandomProcess,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::SoftCircular,
        Scenario::SoftNoncircular,
        Scenario::StrongCircular,
        Scenario::StrongNoncircular,
        Scenario::SoftBinary,
        Scenario::RandomProcess,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::SoftCircular => "soft_circular",
            Scenario::SoftNoncircular => "soft_noncircular",
            Scenario::StrongCircular => "strong_circular",
            Scenario::StrongNoncircular => "strong_noncircular",
            Scenario::SoftBinary => "soft_binary",
            Scenario::RandomProcess => "random_process",
        }
    }

    pub fn is_equalization(self) -> bool {
        self != Scenario::RandomProcess
    }

    fn channel(self) -> Option<ChannelModel> {
        match self {
            Scenario::SoftCircular | Scenario::SoftNoncircular | Scenario::SoftBinary => {
                Some(signal_lab::soft_channel())
            }
            Scenario::StrongCircular | Scenario::StrongNoncircular => {
                Some(signal_lab::strong_channel())
            }
            Scenario::RandomProcess => None,
        }
    }

    fn source(self, seed: u64) -> Option<SignalSource> {
        match self {
            Scenario::SoftCircular | Scenario::StrongCircular => {
                Some(SignalSource::circular_gaussian(seed))
            }
            Scenario::SoftNoncircular | Scenario::StrongNoncircular => {
                Some(SignalSource::noncircular_gaussian(seed))
            }
            Scenario::SoftBinary => Some(SignalSource::unbalanced_binary(seed)),
            Scenario::RandomProcess => None,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| Error::config("scenario", format!("unknown scenario `{s}`")))
    }
}

/// One filter under test.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmConfig {
    pub name: String,
    pub filter: FilterSpec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub scenario: Scenario,
    pub arms: Vec<ArmConfig>,
    pub trials: usize,
    pub samples_per_trial: usize,
    /// `f64::INFINITY` disables noise.
    pub snr_db: f64,
    pub novelty: Option<NoveltyParams<f64>>,
    pub base_seed: u64,
    pub equalizer_taps: usize,
    pub equalizer_delay: usize,
    /// Points per axis of the process grid.
    pub grid_points: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials", "need at least one trial"));
        }
        if self.samples_per_trial == 0 {
            return Err(Error::config(
                "samples",
                "need at least one sample per trial",
            ));
        }
        if self.snr_db.is_nan() {
            return Err(Error::config("snr_db", "SNR is NaN"));
        }
        if self.arms.is_empty() {
            return Err(Error::config("arm", "need at least one arm"));
        }
        for (i, a) in self.arms.iter().enumerate() {
            if self.arms[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::config(
                    format!("arm[{i}].name"),
                    format!("duplicate arm name `{}`", a.name),
                ));
            }
            if let KernelChoice::Composed(spec) = &a.filter.kernel {
                spec.validate(&format!("arm[{i}].kernel"))?;
            }
            a.filter.build().map_err(|e| match e {
                Error::Config { path, msg } => Error::config(format!("arm[{i}].{path}"), msg),
                other => other,
            })?;
        }
        if self.scenario.is_equalization() {
            if self.equalizer_taps == 0 || self.samples_per_trial < self.equalizer_taps {
                return Err(Error::config(
                    "equalizer_taps",
                    "filter length must be positive and no longer than the trial",
                ));
            }
        } else {
            if self.grid_points < 2 {
                return Err(Error::config(
                    "grid_points",
                    "need at least 2 points per axis",
                ));
            }
            if self.samples_per_trial > self.grid_points * self.grid_points {
                return Err(Error::config(
                    "samples",
                    format!(
                        "at most {} grid nodes available",
                        self.grid_points * self.grid_points
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.base_seed.wrapping_add(trial as u64)
    }

    /// Switches to the full paper scale: 100 trials of 5000 samples for the
    /// Gaussian channel scenarios, 10000 for the binary and process ones.
    pub fn full_scale(&mut self) {
        self.trials = 100;
        self.samples_per_trial = match self.scenario {
            Scenario::SoftBinary => 10_000,
            Scenario::RandomProcess => self.grid_points * self.grid_points,
            _ => 5_000,
        };
    }
}

/// Inputs and targets seen by every arm in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialData {
    pub inputs: Vec<ComplexVec<f64>>,
    pub targets: Vec<C64>,
}

/// Generates the data of one trial. Deterministic in `(cfg, trial)`.
pub fn trial_data(cfg: &ExperimentConfig, trial: usize) -> Result<TrialData> {
    let seed = cfg.trial_seed(trial);
    let n = cfg.samples_per_trial;
    match (cfg.scenario.channel(), cfg.scenario.source(seed)) {
        (Some(channel), Some(source)) => {
            let s = source.generate(n)?;
            let q = channel.apply(&s);
            let r = signal_lab::add_awgn(&q, cfg.snr_db, seed)?;
            let frames = signal_lab::equalizer_frames(&r, cfg.equalizer_taps, cfg.equalizer_delay)?;
            let (inputs, targets) = frames.into_iter().map(|(x, i)| (x, s[i])).unzip();
            Ok(TrialData { inputs, targets })
        }
        _ => {
            let field = signal_lab::filtered_process(cfg.grid_points, seed)?;
            let order = &field.presentation_order(seed)[..n];
            let clean: Vec<C64> = order.iter().map(|&(a, b)| field.value(a, b)).collect();
            let targets = signal_lab::add_awgn(&clean, cfg.snr_db, seed)?;
            let inputs = order.iter().map(|&(a, b)| field.input(a, b)).collect();
            Ok(TrialData { inputs, targets })
        }
    }
}

/// Per-step squared errors of one arm in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmTrace {
    pub sq: Vec<f64>,
    pub sq_re: Vec<f64>,
    pub sq_im: Vec<f64>,
    pub dict: Vec<f64>,
}

/// Runs one arm over a trial's data.
pub fn run_arm(
    arm: &ArmConfig,
    novelty: Option<NoveltyParams<f64>>,
    data: &TrialData,
) -> Result<ArmTrace> {
    let mut filter = arm.filter.build()?;
    if let Some(p) = novelty {
        filter = filter.with_novelty(p);
    }
    let trace = filter.run_sequence(&data.inputs, &data.targets)?;
    Ok(ArmTrace {
        sq: trace.iter().map(|t| t.sq_error).collect(),
        sq_re: trace.iter().map(|t| t.sq_error_re).collect(),
        sq_im: trace.iter().map(|t| t.sq_error_im).collect(),
        dict: trace.iter().map(|t| t.dict_size as f64).collect(),
    })
}

/// Running sums of raw per-step errors across trials.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveAccumulator {
    pub sum_sq: Vec<f64>,
    pub sum_sq_re: Vec<f64>,
    pub sum_sq_im: Vec<f64>,
    pub sum_dict: Vec<f64>,
    pub trials: usize,
}

impl CurveAccumulator {
    pub fn new(len: usize) -> Self {
        Self {
            sum_sq: vec![0.0; len],
            sum_sq_re: vec![0.0; len],
            sum_sq_im: vec![0.0; len],
            sum_dict: vec![0.0; len],
            trials: 0,
        }
    }

    pub fn add(&mut self, t: &ArmTrace) {
        let add = |acc: &mut Vec<f64>, v: &[f64]| acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
        add(&mut self.sum_sq, &t.sq);
        add(&mut self.sum_sq_re, &t.sq_re);
        add(&mut self.sum_sq_im, &t.sq_im);
        add(&mut self.sum_dict, &t.dict);
        self.trials += 1;
    }

    pub fn merge(&mut self, other: &CurveAccumulator) {
        let add = |acc: &mut Vec<f64>, v: &[f64]| acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
        add(&mut self.sum_sq, &other.sum_sq);
        add(&mut self.sum_sq_re, &other.sum_sq_re);
        add(&mut self.sum_sq_im, &other.sum_sq_im);
        add(&mut self.sum_dict, &other.sum_dict);
        self.trials += other.trials;
    }

    pub fn finish(&self) -> LearningCurve {
        let n = self.trials.max(1) as f64;
        let db = |v: &[f64]| v.iter().map(|s| to_db(s / n)).collect();
        LearningCurve {
            mse_db: db(&self.sum_sq),
            mse_re_db: db(&self.sum_sq_re),
            mse_im_db: db(&self.sum_sq_im),
            dict_size_mean: self.sum_dict.iter().map(|s| s / n).collect(),
        }
    }
}

/// `10 log10(v)`, floored at [`DB_FLOOR`]; never NaN.
pub fn to_db(v: f64) -> f64 {
    if v > 0.0 {
        (10.0 * v.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

/// Trial-averaged learning curve of one arm.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningCurve {
    pub mse_db: Vec<f64>,
    pub mse_re_db: Vec<f64>,
    pub mse_im_db: Vec<f64>,
    pub dict_size_mean: Vec<f64>,
}

impl LearningCurve {
    pub fn len(&self) -> usize {
        self.mse_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mse_db.is_empty()
    }
}

/// Arm name → curve, in arm order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub name: String,
    pub curves: Vec<(String, LearningCurve)>,
}

impl ExperimentResult {
    pub fn get(&self, arm: &str) -> Option<&LearningCurve> {
        self.curves.iter().find(|(n, _)| n == arm).map(|(_, c)| c)
    }

    /// Writes `sample_index` followed by four columns per arm.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut header = vec!["sample_index".to_string()];
        for (name, _) in &self.curves {
            for col in ["mse_db", "mse_re_db", "mse_im_db", "dict_size_mean"] {
                header.push(format!("{name}_{col}"));
            }
        }
        writeln!(w, "{}", header.join(","))?;
        let len = self.curves.first().map_or(0, |(_, c)| c.len());
        for i in 0..len {
            let mut row = vec![i.to_string()];
            for (_, c) in &self.curves {
                for v in [
                    c.mse_db[i],
                    c.mse_re_db[i],
                    c.mse_im_db[i],
                    c.dict_size_mean[i],
                ] {
                    row.push(format_sig6(v));
                }
            }
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Formats with 6 significant digits.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.5e}")
    }
}

/// Accumulates the given trial range for every arm. Trials run in parallel
/// on the current rayon pool; reduction happens in trial order.
pub fn accumulate_trials(
    cfg: &ExperimentConfig,
    trials: std::ops::Range<usize>,
) -> Result<Vec<CurveAccumulator>> {
    cfg.validate()?;
    let per_trial: Vec<Result<Vec<ArmTrace>>> = trials
        .clone()
        .into_par_iter()
        .map(|t| {
            let data = trial_data(cfg, t).map_err(|e| Error::Arm {
                trial: t,
                arm: "<data>".into(),
                source: Box::new(e),
            })?;
            cfg.arms
                .iter()
                .map(|arm| {
                    run_arm(arm, cfg.novelty, &data).map_err(|e| Error::Arm {
                        trial: t,
                        arm: arm.name.clone(),
                        source: Box::new(e),
                    })
                })
                .collect()
        })
        .collect();
    let mut acc = vec![CurveAccumulator::new(cfg.samples_per_trial); cfg.arms.len()];
    for traces in per_trial {
        for (a, t) in acc.iter_mut().zip(traces?) {
            a.add(&t);
        }
    }
    Ok(acc)
}

/// Runs every trial and arm and averages squared errors across trials.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let acc = accumulate_trials(cfg, 0..cfg.trials)?;
    Ok(ExperimentResult {
        name: cfg.name.clone(),
        curves: cfg
            .arms
            .iter()
            .zip(&acc)
            .map(|(arm, a)| (arm.name.clone(), a.finish()))
            .collect(),
    })
}

/// Mean of the last `tail_fraction` of a series (at least one sample).
pub fn tail_mean(series: &[f64], tail_fraction: f64) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::InvalidInput("empty curve".into()));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "tail fraction {tail_fraction} outside (0, 1]"
        )));
    }
    let k = ((series.len() as f64 * tail_fraction).round() as usize).clamp(1, series.len());
    let tail = &series[series.len() - k..];
    Ok(tail.iter().sum::<f64>() / k as f64)
}

/// Steady-state MSE in dB: mean of `mse_db` over the final `tail_fraction`.
pub fn steady_state_mse(curve: &LearningCurve, tail_fraction: f64) -> Result<f64> {
    tail_mean(&curve.mse_db, tail_fraction)
}

/// First index `i` where the mean of `series[i..i + 100]` drops below
/// `level_db`. Shorter series use a single window over everything.
pub fn first_below(series: &[f64], level_db: f64) -> Option<usize> {
    if series.is_empty() {
        return None;
    }
    let w = REACH_WINDOW.min(series.len());
    let mut sum: f64 = series[..w].iter().sum();
    for i in 0..=series.len() - w {
        if i > 0 {
            sum += series[i + w - 1] - series[i - 1];
        }
        if sum / (w as f64) < level_db {
            return Some(i);
        }
    }
    None
}

pub fn samples_to_reach(curve: &LearningCurve, level_db: f64) -> Option<usize> {
    first_below(&curve.mse_db, level_db)
}

fn arm(name: &str, algorithm: Algorithm, kernel: KernelChoice<f64>, mu: f64) -> ArmConfig {
    ArmConfig {
        name: name.into(),
        filter: FilterSpec {
            algorithm,
            kernel,
            mu,
        },
    }
}

fn rg(gamma: f64) -> KernelChoice<f64> {
    KernelChoice::Composed(KernelSpec::independent(gamma, gamma))
}

fn cg(gamma: f64) -> KernelChoice<f64> {
    KernelChoice::ComplexGaussian { gamma }
}

/// Names of the built-in presets.
pub const PRESET_NAMES: [&str; 7] = [
    "soft_circular",
    "soft_noncircular",
    "strong_circular",
    "strong_noncircular",
    "soft_binary",
    "random_process",
    "random_process_snr15",
];

fn channel_preset(
    name: &str,
    scenario: Scenario,
    arms: Vec<ArmConfig>,
    samples: usize,
) -> ExperimentConfig {
    ExperimentConfig {
        name: name.into(),
        scenario,
        arms,
        trials: 20,
        samples_per_trial: samples,
        snr_db: 15.0,
        novelty: Some(NoveltyParams {
            delta1: 0.15,
            delta2: 0.2,
        }),
        base_seed: 1,
        equalizer_taps: DEFAULT_EQUALIZER_TAPS,
        equalizer_delay: DEFAULT_EQUALIZER_DELAY,
        grid_points: signal_lab::PROCESS_GRID_POINTS,
    }
}

/// Built-in experiment presets with the published hyperparameters, at
/// desk scale.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    use Algorithm::*;
    let soft_arms = || {
        vec![
            arm("cklms2_cg", Cklms2, cg(10.0), 1.0 / 8.0),
            arm("acklms_cg", Acklms, cg(10.0), 1.0 / 8.0),
            arm("acklms_rg", Acklms, rg(5.0), 1.0 / 10.0),
            arm(
                "gcklms",
                Gcklms,
                KernelChoice::Composed(KernelSpec::independent(6.5, 5.5)),
                1.0 / 7.0,
            ),
        ]
    };
    let strong_arms = || {
        vec![
            arm("cklms2_cg", Cklms2, cg(15.0), 1.0 / 6.0),
            arm("acklms_cg", Acklms, cg(15.0), 1.0 / 6.0),
            arm("acklms_rg", Acklms, rg(5.0), 1.0 / 10.0),
            arm(
                "gcklms",
                Gcklms,
                KernelChoice::Composed(KernelSpec::independent(5.0, 3.0)),
                1.0 / 7.0,
            ),
        ]
    };
    let process = |name: &str, snr_db: f64| ExperimentConfig {
        name: name.into(),
        scenario: Scenario::RandomProcess,
        arms: vec![
            arm(
                "gcklms_v0.09",
                Gcklms,
                KernelChoice::Composed(KernelSpec::coupled(1.73, 0.58, 0.09, 1.11)),
                1.0 / 4.0,
            ),
            arm(
                "gcklms_v0",
                Gcklms,
                KernelChoice::Composed(KernelSpec::independent(1.62, 0.59)),
                1.0 / 4.0,
            ),
            arm("acklms", Acklms, rg(0.76), 1.0 / 2.0),
        ],
        trials: 20,
        samples_per_trial: signal_lab::PROCESS_GRID_POINTS * signal_lab::PROCESS_GRID_POINTS,
        snr_db,
        novelty: None,
        base_seed: 1,
        equalizer_taps: DEFAULT_EQUALIZER_TAPS,
        equalizer_delay: DEFAULT_EQUALIZER_DELAY,
        grid_points: signal_lab::PROCESS_GRID_POINTS,
    };
    Some(match name {
        "soft_circular" => channel_preset(name, Scenario::SoftCircular, soft_arms(), 3000),
        "soft_noncircular" => channel_preset(name, Scenario::SoftNoncircular, soft_arms(), 3000),
        "strong_circular" => channel_preset(name, Scenario::StrongCircular, strong_arms(), 3000),
        "strong_noncircular" => {
            channel_preset(name, Scenario::StrongNoncircular, strong_arms(), 3000)
        }
        "soft_binary" => channel_preset(
            name,
            Scenario::SoftBinary,
            vec![
                arm("acklms_g0.5", Acklms, rg(0.5), 0.5),
                arm("acklms_g1", Acklms, rg(1.0), 0.5),
                arm("acklms_g1.52", Acklms, rg(1.52), 0.5),
                arm(
                    "gcklms",
                    Gcklms,
                    KernelChoice::Composed(KernelSpec::independent(0.59, 1.63)),
                    0.5,
                ),
            ],
            4000,
        ),
        "random_process" => process(name, 50.0),
        "random_process_snr15" => process(name, 15.0),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(v: Vec<f64>) -> LearningCurve {
        LearningCurve {
            mse_re_db: v.clone(),
            mse_im_db: v.clone(),
            dict_size_mean: vec![0.0; v.len()],
            mse_db: v,
        }
    }

    #[test]
    fn steady_state_examples() {
        let c = curve(vec![-12.0; 50]);
        assert_eq!(steady_state_mse(&c, 0.2).unwrap(), -12.0);
        let dec = curve((0..100).map(|i| -(i as f64)).collect());
        let full = steady_state_mse(&dec, 1.0).unwrap();
        assert_eq!(full, -49.5);
        assert!(steady_state_mse(&dec, 0.2).unwrap() < full);
        assert!(steady_state_mse(&curve(vec![]), 0.2).is_err());
        assert!(steady_state_mse(&c, 0.0).is_err());
    }

    #[test]
    fn reach_examples() {
        assert_eq!(samples_to_reach(&curve(vec![-5.0; 300]), -10.0), None);
        assert_eq!(samples_to_reach(&curve(vec![-15.0; 300]), -10.0), Some(0));
        assert_eq!(samples_to_reach(&curve(vec![-15.0; 30]), -10.0), Some(0));
        let mut v = vec![0.0; 200];
        v.extend(vec![-20.0; 200]);
        // window mean below −10 once more than half the window is at −20
        assert_eq!(samples_to_reach(&curve(v), -10.0), Some(151));
    }

    #[test]
    fn db_floor() {
        assert_eq!(to_db(0.0), DB_FLOOR);
        assert_eq!(to_db(1e-30), DB_FLOOR);
        assert_eq!(to_db(0.1), -10.0);
        assert_eq!(to_db(f64::NAN), DB_FLOOR);
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(-12.3456789), "-12.3457");
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(-120.0), "-120.000");
        assert_eq!(format_sig6(3.0), "3.00000");
        assert_eq!(format_sig6(1234567.0), "1.23457e6");
        assert_eq!(format_sig6(0.000123456789), "0.000123457");
    }

    #[test]
    fn presets_validate() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            p.validate().unwrap();
            assert_eq!(p.name, name);
        }
        assert!(preset("nosuch").is_none());
        let soft = preset("soft_circular").unwrap();
        let g = &soft.arms[3];
        assert_eq!(
            g.filter.kernel,
            KernelChoice::Composed(KernelSpec::independent(6.5, 5.5))
        );
        assert_eq!(g.filter.mu, 1.0 / 7.0);
    }

    #[test]
    fn zero_error_floor() {
        // targets identically zero: every error is zero and the curve sits on the floor
        let mut cfg = preset("soft_circular").unwrap();
        cfg.trials = 1;
        cfg.samples_per_trial = 50;
        cfg.snr_db = f64::INFINITY;
        let data = trial_data(&cfg, 0).unwrap();
        let zeros = TrialData {
            targets: vec![C64::new(0.0, 0.0); data.inputs.len()],
            ..data
        };
        let t = run_arm(&cfg.arms[3], None, &zeros).unwrap();
        let mut acc = CurveAccumulator::new(50);
        acc.add(&t);
        let c = acc.finish();
        assert!(c.mse_db.iter().all(|&v| v == DB_FLOOR));
    }

    #[test]
    fn trial_data_shapes() {
        let mut cfg = preset("strong_noncircular").unwrap();
        cfg.samples_per_trial = 40;
        let d = trial_data(&cfg, 2).unwrap();
        assert_eq!(d.inputs.len(), 40);
        assert_eq!(d.inputs[0].dim(), 5);
        assert_eq!(d, trial_data(&cfg, 2).unwrap());
        assert_ne!(d, trial_data(&cfg, 3).unwrap());

        let mut p = preset("random_process").unwrap();
        p.grid_points = 10;
        p.samples_per_trial = 60;
        let d = trial_data(&p, 0).unwrap();
        assert_eq!(d.inputs.len(), 60);
        assert_eq!(d.inputs[0].dim(), 1);
        p.samples_per_trial = 101;
        assert!(p.validate().is_err());
    }

    #[test]
    fn full_scale_sizes() {
        let mut c = preset("soft_circular").unwrap();
        c.full_scale();
        assert_eq!((c.trials, c.samples_per_trial), (100, 5000));
        let mut b = preset("soft_binary").unwrap();
        b.full_scale();
        assert_eq!(b.samples_per_trial, 10_000);
    }
}
