//! Signal generators for the equalization and filtered-process experiments.
//!
//! Every generator is a pure function of its seed. Independent quantities
//! drawn for the same trial seed use distinct ChaCha streams.

use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::complex_algebra::ComplexVec;
use crate::error::{Error, Result};

type C64 = Complex<f64>;

pub const SOURCE_STREAM: u64 = 1;
pub const NOISE_STREAM: u64 = 2;
pub const ORDER_STREAM: u64 = 3;
pub const FIELD_STREAM: u64 = 4;

/// Imaginary mixing for circular Gaussian inputs.
pub const CIRCULAR_RHO: f64 = std::f64::consts::FRAC_1_SQRT_2;
pub const NONCIRCULAR_RHO: f64 = 0.1;
/// Overall amplitude of the Gaussian sources.
pub const GAUSSIAN_AMPLITUDE: f64 = 0.7;

pub const BINARY_AMP_RE: f64 = 0.2;
pub const BINARY_AMP_IM: f64 = 0.1;

/// Filter constant for the continuous process filter.
pub const PROCESS_ALPHA: f64 = 0.0228;
pub const PROCESS_EXTENT: f64 = 5.0;
pub const PROCESS_GRID_POINTS: usize = 100;

/// Deterministic generator for `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Linear FIR filter followed by a memoryless cubic nonlinearity.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    pub taps: Vec<C64>,
    pub poly2: C64,
    pub poly3: C64,
}

pub fn soft_channel() -> ChannelModel {
    ChannelModel {
        taps: vec![C64::new(-0.9, 0.8), C64::new(0.6, -0.7)],
        poly2: C64::new(0.1, 0.15),
        poly3: C64::new(0.06, 0.05),
    }
}

pub fn strong_channel() -> ChannelModel {
    ChannelModel {
        taps: vec![
            C64::new(-0.9, 0.8),
            C64::new(0.6, -0.7),
            C64::new(-0.4, 0.3),
            C64::new(0.3, -0.2),
            C64::new(-0.1, -0.2),
        ],
        poly2: C64::new(0.2, 0.25),
        poly3: C64::new(0.08, 0.09),
    }
}

impl ChannelModel {
    /// `t(n) = Σ h_k s(n − k)` with zero initial state, then
    /// `q(n) = t + p2 t² + p3 t³`.
    pub fn apply(&self, s: &[C64]) -> Vec<C64> {
        (0..s.len())
            .map(|n| {
                let t: C64 = self
                    .taps
                    .iter()
                    .enumerate()
                    .take(n + 1)
                    .map(|(k, h)| h * s[n - k])
                    .sum();
                let t2 = t * t;
                t + self.poly2 * t2 + self.poly3 * t2 * t
            })
            .collect()
    }
}

pub fn apply_channel(ch: &ChannelModel, s: &[C64]) -> Vec<C64> {
    ch.apply(s)
}

/// `0.7 (√(1 − ρ²) X + j ρ Y)` with independent standard normal `X`, `Y`.
pub fn gaussian_source(rho: f64, n: usize, seed: u64) -> Result<Vec<C64>> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::config(
            "rho",
            format!("must lie in [0, 1], got {rho}"),
        ));
    }
    let mut rng = rng_for(seed, SOURCE_STREAM);
    let a = GAUSSIAN_AMPLITUDE * (1.0 - rho * rho).sqrt();
    let b = GAUSSIAN_AMPLITUDE * rho;
    Ok((0..n)
        .map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            C64::new(a * x, b * y)
        })
        .collect())
}

/// Independent ±1 streams scaled to `amp_re X + j amp_im Y`.
pub fn binary_source_with(amp_re: f64, amp_im: f64, n: usize, seed: u64) -> Vec<C64> {
    let mut rng = rng_for(seed, SOURCE_STREAM);
    (0..n)
        .map(|_| {
            let x = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let y = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            C64::new(amp_re * x, amp_im * y)
        })
        .collect()
}

/// Unbalanced binary source with amplitudes 0.2 (real) and 0.1 (imaginary).
pub fn binary_source(n: usize, seed: u64) -> Vec<C64> {
    binary_source_with(BINARY_AMP_RE, BINARY_AMP_IM, n, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    CircularGaussian,
    NoncircularGaussian,
    UnbalancedBinary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalSource {
    pub kind: SourceKind,
    pub rho: f64,
    pub amp_re: f64,
    pub amp_im: f64,
    pub seed: u64,
}

impl SignalSource {
    pub fn circular_gaussian(seed: u64) -> Self {
        Self {
            kind: SourceKind::CircularGaussian,
            rho: CIRCULAR_RHO,
            amp_re: 0.0,
            amp_im: 0.0,
            seed,
        }
    }

    pub fn noncircular_gaussian(seed: u64) -> Self {
        Self {
            kind: SourceKind::NoncircularGaussian,
            rho: NONCIRCULAR_RHO,
            ..Self::circular_gaussian(seed)
        }
    }

    pub fn unbalanced_binary(seed: u64) -> Self {
        Self {
            kind: SourceKind::UnbalancedBinary,
            rho: 0.0,
            amp_re: BINARY_AMP_RE,
            amp_im: BINARY_AMP_IM,
            seed,
        }
    }

    pub fn generate(&self, n: usize) -> Result<Vec<C64>> {
        match self.kind {
            SourceKind::CircularGaussian | SourceKind::NoncircularGaussian => {
                gaussian_source(self.rho, n, self.seed)
            }
            SourceKind::UnbalancedBinary => {
                Ok(binary_source_with(self.amp_re, self.amp_im, n, self.seed))
            }
        }
    }
}

/// Adds circular white Gaussian noise at `snr_db` relative to the empirical
/// mean power of `q`. An infinite SNR returns `q` unchanged.
pub fn add_awgn(q: &[C64], snr_db: f64, seed: u64) -> Result<Vec<C64>> {
    if snr_db.is_nan() {
        return Err(Error::config("snr_db", "SNR is NaN"));
    }
    if snr_db == f64::INFINITY {
        return Ok(q.to_vec());
    }
    if q.is_empty() {
        return Err(Error::DegenerateSignal(
            "cannot add noise to an empty signal".into(),
        ));
    }
    let power = q.iter().map(|z| z.norm_sqr()).sum::<f64>() / q.len() as f64;
    if !(power > 0.0) {
        return Err(Error::DegenerateSignal(
            "signal has zero power; SNR is undefined".into(),
        ));
    }
    let sigma = (power * 10f64.powf(-snr_db / 10.0)).sqrt();
    let scale = sigma * std::f64::consts::FRAC_1_SQRT_2;
    let mut rng = rng_for(seed, NOISE_STREAM);
    Ok(q.iter()
        .map(|z| {
            let g1: f64 = rng.sample(StandardNormal);
            let g2: f64 = rng.sample(StandardNormal);
            z + C64::new(scale * g1, scale * g2)
        })
        .collect())
}

/// Tapped-delay-line frames `[r(n+D), r(n+D−1), …, r(n+D−L+1)]` for every
/// `n` in `0..r.len()`, zero outside the received sequence. Each frame is
/// paired with its target index `n`.
pub fn equalizer_frames(
    r: &[C64],
    taps: usize,
    delay: usize,
) -> Result<Vec<(ComplexVec<f64>, usize)>> {
    if taps == 0 {
        return Err(Error::config(
            "equalizer_taps",
            "filter length must be positive",
        ));
    }
    if r.len() < taps {
        return Err(Error::config(
            "equalizer_taps",
            format!(
                "received sequence of length {} is shorter than L = {taps}",
                r.len()
            ),
        ));
    }
    let at = |i: isize| -> C64 {
        if i >= 0 && (i as usize) < r.len() {
            r[i as usize]
        } else {
            C64::new(0.0, 0.0)
        }
    };
    (0..r.len())
        .map(|n| {
            let top = n as isize + delay as isize;
            let entries = (0..taps as isize).map(|k| at(top - k)).collect();
            Ok((ComplexVec::new(entries)?, n))
        })
        .collect()
}

/// The continuous complex process filter `α (2 e^{−|x|²/3} + j e^{−|x|²/0.5})`.
pub fn process_filter_continuous(x: C64) -> C64 {
    let r2 = x.norm_sqr();
    C64::new(2.0 * (-r2 / 3.0).exp(), (-r2 / 0.5).exp()).scale(PROCESS_ALPHA)
}

/// Uniform grid of `n` points on `[−5, 5]`.
pub fn process_grid(n: usize) -> Vec<f64> {
    let step = 2.0 * PROCESS_EXTENT / (n - 1) as f64;
    (0..n).map(|i| -PROCESS_EXTENT + step * i as f64).collect()
}

/// The process filter sampled at the offsets `−(n−1)..=(n−1)` of an
/// `n`-point grid and rescaled to unit ℓ² norm. It factors as
/// `h[i][j] = gain · (2 a_i a_j + j b_i b_j)`.
#[derive(Debug, Clone)]
pub struct DiscreteProcessFilter {
    /// `exp(−u²/3)` per offset.
    pub wide: Vec<f64>,
    /// `exp(−u²/0.5)` per offset.
    pub narrow: Vec<f64>,
    pub gain: f64,
    pub grid_points: usize,
}

impl DiscreteProcessFilter {
    pub fn new(grid_points: usize) -> Result<Self> {
        if grid_points < 2 {
            return Err(Error::config(
                "grid_points",
                "need at least 2 points per axis",
            ));
        }
        let step = 2.0 * PROCESS_EXTENT / (grid_points - 1) as f64;
        let offsets = -(grid_points as isize - 1)..=(grid_points as isize - 1);
        let (wide, narrow): (Vec<f64>, Vec<f64>) = offsets
            .map(|i| {
                let u = i as f64 * step;
                ((-u * u / 3.0).exp(), (-u * u / 0.5).exp())
            })
            .unzip();
        // |2A + jB|² = 4A² + B² for real A, B; both terms are separable.
        let sw: f64 = wide.iter().map(|a| a * a).sum();
        let sn: f64 = narrow.iter().map(|b| b * b).sum();
        let norm_sq = PROCESS_ALPHA * PROCESS_ALPHA * (4.0 * sw * sw + sn * sn);
        Ok(Self {
            wide,
            narrow,
            gain: PROCESS_ALPHA / norm_sq.sqrt(),
            grid_points,
        })
    }

    /// Tap at integer offset `(i, j)`, each in `−(n−1)..=(n−1)`.
    pub fn tap(&self, i: isize, j: isize) -> C64 {
        let c = self.grid_points as isize - 1;
        let (a, b) = ((i + c) as usize, (j + c) as usize);
        C64::new(
            2.0 * self.wide[a] * self.wide[b],
            self.narrow[a] * self.narrow[b],
        )
        .scale(self.gain)
    }

    /// Zero-padded 2-D convolution of a real row-major `n × n` field.
    pub fn convolve(&self, s: &[f64]) -> Vec<C64> {
        let n = self.grid_points;
        let c = n as isize - 1;
        let pass = |input: &[f64], taps: &[f64], along_rows: bool| -> Vec<f64> {
            let mut out = vec![0.0; n * n];
            for a in 0..n {
                for b in 0..n {
                    let mut acc = 0.0;
                    for k in 0..n {
                        let (idx, off) = if along_rows {
                            (a * n + k, b as isize - k as isize)
                        } else {
                            (k * n + b, a as isize - k as isize)
                        };
                        acc += input[idx] * taps[(off + c) as usize];
                    }
                    out[a * n + b] = acc;
                }
            }
            out
        };
        let wide = pass(&pass(s, &self.wide, true), &self.wide, false);
        let narrow = pass(&pass(s, &self.narrow, true), &self.narrow, false);
        wide.iter()
            .zip(&narrow)
            .map(|(w, v)| C64::new(2.0 * w, *v).scale(self.gain))
            .collect()
    }
}

/// One realization of the filtered 2-D process on an `n × n` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessField {
    pub grid_re: Vec<f64>,
    pub grid_im: Vec<f64>,
    /// Row-major, `values[a * grid_im.len() + b]` at `(grid_re[a], grid_im[b])`.
    pub values: Vec<C64>,
    pub seed: u64,
}

impl ProcessField {
    pub fn value(&self, a: usize, b: usize) -> C64 {
        self.values[a * self.grid_im.len() + b]
    }

    /// Filter input for node `(a, b)`: the scalar `x_r(a) + j x_j(b)`.
    pub fn input(&self, a: usize, b: usize) -> ComplexVec<f64> {
        ComplexVec::scalar(C64::new(self.grid_re[a], self.grid_im[b])).expect("finite grid")
    }

    /// Node indices in a seeded uniformly random order.
    pub fn presentation_order(&self, seed: u64) -> Vec<(usize, usize)> {
        let nb = self.grid_im.len();
        let mut nodes: Vec<_> = (0..self.grid_re.len())
            .flat_map(|a| (0..nb).map(move |b| (a, b)))
            .collect();
        nodes.shuffle(&mut rng_for(seed, ORDER_STREAM));
        nodes
    }
}

/// White unit-variance real Gaussian field passed through the unit-norm
/// discretized process filter.
pub fn filtered_process(grid_points_per_axis: usize, seed: u64) -> Result<ProcessField> {
    let filter = DiscreteProcessFilter::new(grid_points_per_axis)?;
    let n = grid_points_per_axis;
    let mut rng = rng_for(seed, FIELD_STREAM);
    let s: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    let grid = process_grid(n);
    Ok(ProcessField {
        grid_re: grid.clone(),
        grid_im: grid,
        values: filter.convolve(&s),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn channel_constants() {
        assert_eq!(soft_channel().taps[0], C64::new(-0.9, 0.8));
        assert_eq!(strong_channel().taps.len(), 5);
        assert_eq!(soft_channel().poly2, C64::new(0.1, 0.15));
        assert_eq!(strong_channel().poly2, C64::new(0.2, 0.25));
    }

    #[test]
    fn soft_channel_impulse() {
        // t = −0.9+0.8j, t² = 0.17−1.44j, t³ = 0.999+1.432j
        // q = t + (0.1+0.15j) t² + (0.06+0.05j) t³ = −0.67866 + 0.81737j
        let mut s = vec![C64::new(0.0, 0.0); 4];
        s[0] = C64::new(1.0, 0.0);
        let q = soft_channel().apply(&s);
        assert_abs_diff_eq!(q[0].re, -0.67866, epsilon = 1e-12);
        assert_abs_diff_eq!(q[0].im, 0.81737, epsilon = 1e-12);
        assert_eq!(q[3], C64::new(0.0, 0.0));
    }

    #[test]
    fn linear_reduction_and_zero_input() {
        let ch = ChannelModel {
            poly2: C64::new(0.0, 0.0),
            poly3: C64::new(0.0, 0.0),
            ..strong_channel()
        };
        let s = gaussian_source(0.3, 20, 7).unwrap();
        let q = ch.apply(&s);
        for n in 0..s.len() {
            let fir: C64 = (0..ch.taps.len().min(n + 1))
                .map(|k| ch.taps[k] * s[n - k])
                .sum();
            assert_eq!(q[n], fir);
        }
        let zeros = vec![C64::new(0.0, 0.0); 10];
        assert!(soft_channel()
            .apply(&zeros)
            .iter()
            .all(|z| *z == C64::new(0.0, 0.0)));
    }

    #[test]
    fn channel_is_causal() {
        let s = gaussian_source(CIRCULAR_RHO, 50, 3).unwrap();
        let full = strong_channel().apply(&s);
        let prefix = strong_channel().apply(&s[..20]);
        assert_eq!(&full[..20], &prefix[..]);
    }

    #[test]
    fn awgn_edge_cases() {
        let q = gaussian_source(0.5, 8, 1).unwrap();
        assert_eq!(add_awgn(&q, f64::INFINITY, 3).unwrap(), q);
        assert!(matches!(
            add_awgn(&[C64::new(0.0, 0.0); 4], 15.0, 1),
            Err(Error::DegenerateSignal(_))
        ));
        assert_eq!(
            add_awgn(&q, 10.0, 5).unwrap(),
            add_awgn(&q, 10.0, 5).unwrap()
        );
        assert_ne!(
            add_awgn(&q, 10.0, 5).unwrap(),
            add_awgn(&q, 10.0, 6).unwrap()
        );
    }

    #[test]
    fn frames() {
        let r: Vec<C64> = (0..20).map(|i| C64::new(i as f64, -(i as f64))).collect();
        let f = equalizer_frames(&r, 1, 0).unwrap();
        assert_eq!(f.len(), 20);
        assert_eq!(f[7].0.entries(), &[r[7]]);
        let f = equalizer_frames(&r, 5, 2).unwrap();
        assert_eq!(f[10].1, 10);
        assert_eq!(f[10].0.entries(), &[r[12], r[11], r[10], r[9], r[8]]);
        // zero padded at both ends
        assert_eq!(f[0].0.entries()[3], C64::new(0.0, 0.0));
        assert_eq!(f[19].0.entries()[0], C64::new(0.0, 0.0));
        for n in 0..19 {
            assert_eq!(&f[n + 1].0.entries()[1..], &f[n].0.entries()[..4]);
        }
        assert!(equalizer_frames(&r[..4], 5, 2).is_err());
        assert!(equalizer_frames(&r, 0, 2).is_err());
    }

    #[test]
    fn sources_are_reproducible() {
        assert_eq!(
            gaussian_source(0.1, 100, 9).unwrap(),
            gaussian_source(0.1, 100, 9).unwrap()
        );
        assert_ne!(
            gaussian_source(0.1, 100, 9).unwrap(),
            gaussian_source(0.1, 100, 10).unwrap()
        );
        assert_eq!(binary_source(100, 4), binary_source(100, 4));
        assert!(gaussian_source(0.0, 100, 1)
            .unwrap()
            .iter()
            .all(|z| z.im == 0.0));
        assert!(gaussian_source(1.5, 10, 1).is_err());
        let src = SignalSource::noncircular_gaussian(4);
        assert_eq!(
            src.generate(10).unwrap(),
            gaussian_source(NONCIRCULAR_RHO, 10, 4).unwrap()
        );
    }

    #[test]
    fn binary_constellation() {
        for z in binary_source(1000, 2) {
            assert_eq!(z.re.abs(), 0.2);
            assert_eq!(z.im.abs(), 0.1);
        }
    }

    #[test]
    fn process_filter_center_value() {
        let h0 = process_filter_continuous(C64::new(0.0, 0.0));
        assert_abs_diff_eq!(h0.re, 0.0456, epsilon = 1e-15);
        assert_abs_diff_eq!(h0.im, 0.0228, epsilon = 1e-15);
    }

    #[test]
    fn discrete_filter_has_unit_norm() {
        for n in [5, 17, 100] {
            let f = DiscreteProcessFilter::new(n).unwrap();
            let c = n as isize - 1;
            let mut norm_sq = 0.0;
            for i in -c..=c {
                for j in -c..=c {
                    norm_sq += f.tap(i, j).norm_sqr();
                }
            }
            assert_abs_diff_eq!(norm_sq.sqrt(), 1.0, epsilon = 1e-12);
        }
        assert!(DiscreteProcessFilter::new(1).is_err());
    }

    #[test]
    fn separable_convolution_matches_direct_sum() {
        let n = 9;
        let f = DiscreteProcessFilter::new(n).unwrap();
        let mut rng = rng_for(11, 0);
        let s: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
        let fast = f.convolve(&s);
        for a in 0..n {
            for b in 0..n {
                let mut direct = C64::new(0.0, 0.0);
                for a2 in 0..n {
                    for b2 in 0..n {
                        direct += f.tap(a as isize - a2 as isize, b as isize - b2 as isize)
                            * s[a2 * n + b2];
                    }
                }
                assert!((direct - fast[a * n + b]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn process_field_shape_and_order() {
        let p = filtered_process(12, 3).unwrap();
        assert_eq!(p.values.len(), 144);
        assert!(p
            .values
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite()));
        assert_eq!(p.grid_re[0], -5.0);
        assert_abs_diff_eq!(p.grid_re[11], 5.0, epsilon = 1e-12);
        let order = p.presentation_order(8);
        assert_eq!(order.len(), 144);
        let mut sorted = order.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 144);
        assert_eq!(order, p.presentation_order(8));
        assert_eq!(
            p.input(2, 5).entries()[0],
            C64::new(p.grid_re[2], p.grid_im[5])
        );
        assert_eq!(p, filtered_process(12, 3).unwrap());
        assert!(filtered_process(1, 0).is_err());
    }
}
