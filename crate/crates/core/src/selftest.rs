//! Built-in equivalence checks: the augmented recursion against its
//! composite form, and the special cases that collapse onto CKLMS2 and
//! ACKLMS.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::complex_algebra::{composite_to_augmented, ComplexVec};
use crate::error::Result;
use crate::filters::KlmsFilter;
use crate::kernels::{compose_kernel, BaseKernel, ComplexKernelPair, KernelSpec};

type C64 = Complex<f64>;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub steps: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Random complex Gaussian inputs of dimension `dim` with random targets.
pub fn random_stream(n: usize, dim: usize, seed: u64) -> (Vec<ComplexVec<f64>>, Vec<C64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Vec::with_capacity(n);
    let mut targets = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<C64> = (0..dim)
            .map(|_| C64::new(normal(&mut rng), normal(&mut rng)))
            .collect();
        inputs.push(ComplexVec::new(x).expect("finite entries"));
        targets.push(C64::new(normal(&mut rng), normal(&mut rng)));
    }
    (inputs, targets)
}

/// Runs both filters over the same stream and returns the largest gap
/// between their predictions.
pub fn max_prediction_gap(
    a: &mut KlmsFilter<f64>,
    b: &mut KlmsFilter<f64>,
    inputs: &[ComplexVec<f64>],
    targets: &[C64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for (x, &y) in inputs.iter().zip(targets) {
        let pa = a.update(x, y)?.prediction;
        let pb = b.update(x, y)?.prediction;
        worst = worst.max((pa - pb).norm());
    }
    Ok(worst)
}

/// Random coupled spec (`k_rj = k_jr`) that is positive semidefinite on
/// complex inputs of dimension `dim`. With widths `a`, `b` on the diagonal
/// and `c`, scale `v` off it, comparing Gaussian Fourier transforms on
/// `R^(2 dim)` gives the sufficient condition `c² ≥ (a² + b²)/2` and
/// `v ≤ (ab/c²)^dim`.
pub fn random_psd_coupled_spec(rng: &mut ChaCha8Rng, dim: usize) -> KernelSpec<f64> {
    let a: f64 = rng.gen_range(2.0..6.0);
    let b: f64 = rng.gen_range(2.0..6.0);
    let c2 = 0.5 * (a * a + b * b) * rng.gen_range(1.0..1.5);
    let v = rng.gen_range(0.0..1.0) * (a * b / c2).powi(dim as i32);
    KernelSpec::coupled(a, b, v, c2.sqrt())
}

fn oracle_check(seed: u64) -> Result<Check> {
    let steps = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 5;
    let spec = random_psd_coupled_spec(&mut rng, dim);
    let (inputs, targets) = random_stream(steps, dim, seed ^ 0x5eed);
    let mut aug = KlmsFilter::gcklms(compose_kernel(spec), 0.25)?;
    let mut comp = KlmsFilter::composite_oracle(spec, 0.25)?;
    let mut worst = 0.0f64;
    for (x, &y) in inputs.iter().zip(&targets) {
        let pa = aug.predict(x)?;
        let pc = composite_to_augmented(comp.predict_composite(x)?)?.val;
        worst = worst.max((pa - pc).norm());
        aug.update(x, y)?;
        comp.update(x, y)?;
    }
    Ok(Check {
        name: "gcklms == composite form",
        steps,
        max_deviation: worst,
        tolerance: 1e-10,
    })
}

/// Runs every check with a fixed seed.
pub fn run_all() -> Result<Vec<Check>> {
    let seed = 7;
    let steps = 500;
    let (inputs, targets) = random_stream(steps, 5, seed);
    let mut checks = vec![oracle_check(seed)?];

    let gamma = 6.0;
    let mut g = KlmsFilter::gcklms(ComplexKernelPair::complex_gaussian(gamma), 0.2)?;
    let mut c = KlmsFilter::cklms2(ComplexKernelPair::complex_gaussian(gamma), 0.2)?;
    checks.push(Check {
        name: "gcklms(complex gaussian) == cklms2",
        steps,
        max_deviation: max_prediction_gap(&mut g, &mut c, &inputs, &targets)?,
        tolerance: 1e-12,
    });

    let spec = KernelSpec::independent(gamma, gamma);
    let mut g = KlmsFilter::gcklms(compose_kernel(spec), 0.2)?;
    let mut c = KlmsFilter::cklms2(compose_kernel(spec), 0.2)?;
    checks.push(Check {
        name: "gcklms(null pseudo-kernel) == cklms2",
        steps,
        max_deviation: max_prediction_gap(&mut g, &mut c, &inputs, &targets)?,
        tolerance: 1e-12,
    });

    let mut g = KlmsFilter::gcklms(compose_kernel(spec), 0.2)?;
    let mut a = KlmsFilter::acklms(BaseKernel::real_gaussian(gamma), 0.2)?;
    checks.push(Check {
        name: "gcklms(equal widths) == acklms",
        steps,
        max_deviation: max_prediction_gap(&mut g, &mut a, &inputs, &targets)?,
        tolerance: 1e-12,
    });

    let base = BaseKernel::ComplexGaussian { gamma };
    let mut a = KlmsFilter::acklms(base, 0.2)?;
    let mut b = KlmsFilter::acklms_conjugate_sum(base, 0.2)?;
    checks.push(Check {
        name: "acklms real-part == conjugate-sum form",
        steps,
        max_deviation: max_prediction_gap(&mut a, &mut b, &inputs, &targets)?,
        tolerance: 1e-12,
    });
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_all().unwrap() {
            assert!(c.passed(), "{c:?}");
        }
    }
}
