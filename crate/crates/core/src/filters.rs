//! Online kernel LMS filters for complex-valued regression.
//!
//! All members share a growing dictionary of centers and stored error
//! coefficients `μ e(l)` and differ only in how a prediction is formed:
//!
//! | algorithm          | prediction                                    |
//! |--------------------|-----------------------------------------------|
//! | gCKLMS             | `Σ μe(l) k(x, x_l) + Σ μe*(l) k̃(x, x_l)`     |
//! | CKLMS2             | `Σ μe(l) k(x, x_l)`                           |
//! | ACKLMS             | `Σ 2 μe(l) Re{k(x, x_l)}`                     |
//! | composite oracle   | `2 Σ K(x, x_l) [Re μe(l), Im μe(l)]ᵀ`         |
//!
//! Predictions at step `i` use the dictionary built from steps `< i`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::complex_algebra::{ComplexVec, CompositePair};
use crate::error::{Error, Result};
use crate::kernels::{
    check_null_pseudo_conditions, compose_kernel, BaseKernel, ComplexKernelPair, KernelSpec,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Gcklms,
    Cklms2,
    Acklms,
    CompositeOracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Gcklms,
        Algorithm::Cklms2,
        Algorithm::Acklms,
        Algorithm::CompositeOracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Gcklms => "gcklms",
            Algorithm::Cklms2 => "cklms2",
            Algorithm::Acklms => "acklms",
            Algorithm::CompositeOracle => "composite-oracle",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| {
                Error::config(
                    "algorithm",
                    format!("unknown algorithm `{s}` (expected gcklms, cklms2, acklms or composite-oracle)"),
                )
            })
    }
}

/// Novelty-criterion sparsification thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoveltyParams<T> {
    /// Minimum distance to every existing center.
    pub delta1: T,
    /// Minimum prediction-error magnitude.
    pub delta2: T,
}

impl<T: Scalar> NoveltyParams<T> {
    pub fn new(delta1: T, delta2: T) -> Result<Self> {
        if !(delta1 > T::zero()) || !delta1.is_finite() {
            return Err(Error::config("novelty.delta1", "must be positive"));
        }
        if !(delta2 > T::zero()) || !delta2.is_finite() {
            return Err(Error::config("novelty.delta2", "must be positive"));
        }
        Ok(Self { delta1, delta2 })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryEntry<T> {
    pub center: ComplexVec<T>,
    /// `μ e(l)`
    pub coeff: Complex<T>,
    /// `μ e*(l)`, kept alongside `coeff` so both sums can be checked separately.
    pub coeff_conj: Complex<T>,
}

/// How the ACKLMS prediction is evaluated. Both forms give the same sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcklmsForm {
    /// `Σ 2 μe(l) Re{k}`
    RealPart,
    /// `Σ μe(l) (k + k*)`
    ConjugateSum,
}

#[derive(Debug, Clone, PartialEq)]
enum FilterKernel<T> {
    Augmented(ComplexKernelPair<T>),
    Acklms {
        base: BaseKernel<T>,
        form: AcklmsForm,
    },
    Composite(KernelSpec<T>),
}

/// Kernel selection for [`FilterSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelChoice<T> {
    Composed(KernelSpec<T>),
    ComplexGaussian { gamma: T },
}

/// Declarative filter description: algorithm, kernel and step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec<T> {
    pub algorithm: Algorithm,
    pub kernel: KernelChoice<T>,
    pub mu: T,
}

impl<T: Scalar> FilterSpec<T> {
    pub fn build(&self) -> Result<KlmsFilter<T>> {
        match (self.algorithm, self.kernel) {
            (Algorithm::Gcklms, KernelChoice::Composed(spec)) => {
                KlmsFilter::gcklms(compose_kernel(spec), self.mu)
            }
            (Algorithm::Gcklms, KernelChoice::ComplexGaussian { gamma }) => {
                KlmsFilter::gcklms(ComplexKernelPair::complex_gaussian(gamma), self.mu)
            }
            (Algorithm::Cklms2, KernelChoice::Composed(spec)) => {
                KlmsFilter::cklms2(compose_kernel(spec), self.mu)
            }
            (Algorithm::Cklms2, KernelChoice::ComplexGaussian { gamma }) => {
                KlmsFilter::cklms2(ComplexKernelPair::complex_gaussian(gamma), self.mu)
            }
            (Algorithm::Acklms, KernelChoice::Composed(spec)) => {
                let base = acklms_base_from_spec(&spec)?;
                KlmsFilter::acklms(base, self.mu)
            }
            (Algorithm::Acklms, KernelChoice::ComplexGaussian { gamma }) => {
                KlmsFilter::acklms(BaseKernel::ComplexGaussian { gamma }, self.mu)
            }
            (Algorithm::CompositeOracle, KernelChoice::Composed(spec)) => {
                KlmsFilter::composite_oracle(spec, self.mu)
            }
            (Algorithm::CompositeOracle, KernelChoice::ComplexGaussian { .. }) => Err(
                Error::config("kernel", "the composite oracle needs four real sub-kernels"),
            ),
        }
    }
}

/// ACKLMS is the gCKLMS with `k_rr = k_jj` and zero off-diagonal entries;
/// its real kernel is then `k_rr`.
fn acklms_base_from_spec<T: Scalar>(spec: &KernelSpec<T>) -> Result<BaseKernel<T>> {
    if spec.k_jj != spec.k_rr {
        return Err(Error::config("kernel.k_jj", "acklms requires k_jj == k_rr"));
    }
    if !spec.is_uncoupled() {
        return Err(Error::config(
            "kernel.k_rj",
            "acklms requires zero off-diagonal sub-kernels",
        ));
    }
    Ok(BaseKernel::Real(spec.k_rr))
}

fn check_mu<T: Scalar>(mu: T) -> Result<()> {
    if !(mu > T::zero()) || !mu.is_finite() {
        return Err(Error::config(
            "mu",
            format!("step size must be positive, got {mu}"),
        ));
    }
    Ok(())
}

/// Distances at which a CKLMS2 request is probed for a null pseudo-kernel.
fn null_pseudo_probes<T: Scalar>() -> Vec<(ComplexVec<T>, ComplexVec<T>)> {
    let origin = ComplexVec::scalar(Complex::new(T::zero(), T::zero())).unwrap();
    (0..64)
        .map(|i| {
            let r = T::lit(i as f64 * 0.125);
            let p = ComplexVec::scalar(Complex::new(r, T::lit(0.5) * r)).unwrap();
            (p, origin.clone())
        })
        .collect()
}

/// Result of one online step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome<T> {
    pub prediction: Complex<T>,
    pub error: Complex<T>,
    pub admitted: bool,
}

/// One row of a [`LearningTrace`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep<T> {
    pub prediction: Complex<T>,
    pub error: Complex<T>,
    pub sq_error: T,
    pub sq_error_re: T,
    pub sq_error_im: T,
    pub dict_size: usize,
}

pub type LearningTrace<T> = Vec<TraceStep<T>>;

/// Kernel LMS filter state: algorithm, kernel, step size and dictionary.
#[derive(Debug, Clone, PartialEq)]
pub struct KlmsFilter<T> {
    algorithm: Algorithm,
    kernel: FilterKernel<T>,
    mu: T,
    dictionary: Vec<DictionaryEntry<T>>,
    novelty: Option<NoveltyParams<T>>,
    samples_seen: usize,
}

impl<T: Scalar> KlmsFilter<T> {
    fn with_kernel(algorithm: Algorithm, kernel: FilterKernel<T>, mu: T) -> Result<Self> {
        check_mu(mu)?;
        Ok(Self {
            algorithm,
            kernel,
            mu,
            dictionary: Vec::new(),
            novelty: None,
            samples_seen: 0,
        })
    }

    pub fn gcklms(pair: ComplexKernelPair<T>, mu: T) -> Result<Self> {
        Self::with_kernel(Algorithm::Gcklms, FilterKernel::Augmented(pair), mu)
    }

    /// CKLMS2 drops the pseudo-kernel sum, which is only legitimate when the
    /// kernel pair has a null pseudo-kernel.
    pub fn cklms2(pair: ComplexKernelPair<T>, mu: T) -> Result<Self> {
        if let Some(spec) = pair.spec() {
            if !check_null_pseudo_conditions(spec, &null_pseudo_probes()) {
                return Err(Error::config(
                    "kernel",
                    "cklms2 requires k_rr == k_jj and k_jr == -k_rj (null pseudo-kernel)",
                ));
            }
        }
        Self::with_kernel(Algorithm::Cklms2, FilterKernel::Augmented(pair), mu)
    }

    pub fn acklms(base: BaseKernel<T>, mu: T) -> Result<Self> {
        Self::with_kernel(
            Algorithm::Acklms,
            FilterKernel::Acklms {
                base,
                form: AcklmsForm::RealPart,
            },
            mu,
        )
    }

    /// ACKLMS evaluated as `Σ μe(l) (k + k*)`.
    pub fn acklms_conjugate_sum(base: BaseKernel<T>, mu: T) -> Result<Self> {
        Self::with_kernel(
            Algorithm::Acklms,
            FilterKernel::Acklms {
                base,
                form: AcklmsForm::ConjugateSum,
            },
            mu,
        )
    }

    pub fn composite_oracle(spec: KernelSpec<T>, mu: T) -> Result<Self> {
        Self::with_kernel(
            Algorithm::CompositeOracle,
            FilterKernel::Composite(spec),
            mu,
        )
    }

    pub fn with_novelty(mut self, params: NoveltyParams<T>) -> Self {
        self.novelty = Some(params);
        self
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn novelty(&self) -> Option<NoveltyParams<T>> {
        self.novelty
    }

    pub fn dictionary(&self) -> &[DictionaryEntry<T>] {
        &self.dictionary
    }

    pub fn samples_seen(&self) -> usize {
        self.samples_seen
    }

    fn check_input(&self, x: &ComplexVec<T>) -> Result<()> {
        match self.dictionary.first() {
            Some(e) => e.center.check_dim(x),
            None => Ok(()),
        }
    }

    /// `Σ coeff_l k(x, c_l)` for the augmented-form filters.
    pub fn kernel_sum(&self, x: &ComplexVec<T>) -> Result<Complex<T>> {
        self.check_input(x)?;
        let pair = self.augmented_pair()?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for e in &self.dictionary {
            let (k, _) = pair.eval_unchecked(x, &e.center)?;
            acc += e.coeff * k;
        }
        Ok(acc)
    }

    /// `Σ coeff_conj_l k̃(x, c_l)` for the augmented-form filters.
    pub fn pseudo_kernel_sum(&self, x: &ComplexVec<T>) -> Result<Complex<T>> {
        self.check_input(x)?;
        let pair = self.augmented_pair()?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for e in &self.dictionary {
            let (_, pk) = pair.eval_unchecked(x, &e.center)?;
            acc += e.coeff_conj * pk;
        }
        Ok(acc)
    }

    fn augmented_pair(&self) -> Result<&ComplexKernelPair<T>> {
        match &self.kernel {
            FilterKernel::Augmented(pair) => Ok(pair),
            _ => Err(Error::InvalidInput(format!(
                "{} has no kernel/pseudo-kernel pair",
                self.algorithm
            ))),
        }
    }

    /// Output for input `x` from the current dictionary.
    pub fn predict(&self, x: &ComplexVec<T>) -> Result<Complex<T>> {
        self.check_input(x)?;
        self.predict_unchecked(x)
    }

    fn predict_unchecked(&self, x: &ComplexVec<T>) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        match &self.kernel {
            FilterKernel::Augmented(pair) => {
                let with_pseudo = self.algorithm == Algorithm::Gcklms;
                for e in &self.dictionary {
                    debug_assert_eq!(e.coeff_conj, e.coeff.conj());
                    let (k, pk) = pair.eval_unchecked(x, &e.center)?;
                    acc += e.coeff * k;
                    if with_pseudo {
                        acc += e.coeff_conj * pk;
                    }
                }
            }
            FilterKernel::Acklms { base, form } => {
                let two = T::lit(2.0);
                for e in &self.dictionary {
                    let k = base.eval_unchecked(x, &e.center)?;
                    match form {
                        AcklmsForm::RealPart => acc += e.coeff.scale(two * k.re),
                        AcklmsForm::ConjugateSum => acc += e.coeff * k + e.coeff * k.conj(),
                    }
                }
            }
            FilterKernel::Composite(_) => acc = self.composite_unchecked(x).to_complex(),
        }
        Ok(acc)
    }

    /// Composite-form output `2 Σ K(x, c_l) [Re coeff_l, Im coeff_l]ᵀ`.
    pub fn predict_composite(&self, x: &ComplexVec<T>) -> Result<CompositePair<T>> {
        if !matches!(self.kernel, FilterKernel::Composite(_)) {
            return Err(Error::InvalidInput(format!(
                "predict_composite requires the composite oracle, not {}",
                self.algorithm
            )));
        }
        self.check_input(x)?;
        Ok(self.composite_unchecked(x))
    }

    fn composite_unchecked(&self, x: &ComplexVec<T>) -> CompositePair<T> {
        let FilterKernel::Composite(spec) = &self.kernel else {
            unreachable!("composite kernel");
        };
        let (mut re, mut im) = (T::zero(), T::zero());
        for e in &self.dictionary {
            let [[rr, rj], [jr, jj]] = spec.matrix_sq_dist(x.sq_distance(&e.center));
            re += rr * e.coeff.re + rj * e.coeff.im;
            im += jr * e.coeff.re + jj * e.coeff.im;
        }
        let two = T::lit(2.0);
        CompositePair::new(two * re, two * im)
    }

    /// Novelty criterion: admit when `x` is farther than `delta1` from every
    /// center and `|error| > delta2`. Always admits without thresholds or
    /// with an empty dictionary.
    pub fn admit_sample(&self, x: &ComplexVec<T>, error: Complex<T>) -> bool {
        let Some(p) = self.novelty else {
            return true;
        };
        if self.dictionary.is_empty() {
            return true;
        }
        if !(error.norm() > p.delta2) {
            return false;
        }
        let d1_sq = p.delta1 * p.delta1;
        self.dictionary
            .iter()
            .all(|e| e.center.dim() == x.dim() && e.center.sq_distance(x) > d1_sq)
    }

    /// Predicts with the current dictionary, then adapts on the error.
    pub fn update(&mut self, x: &ComplexVec<T>, y: Complex<T>) -> Result<StepOutcome<T>> {
        if !y.re.is_finite() || !y.im.is_finite() {
            return Err(Error::InvalidInput("target is not finite".into()));
        }
        self.check_input(x)?;
        let prediction = self.predict_unchecked(x)?;
        let error = y - prediction;
        if !error.re.is_finite() || !error.im.is_finite() {
            return Err(Error::InvalidInput(
                "prediction diverged to a non-finite value".into(),
            ));
        }
        let admitted = self.admit_sample(x, error);
        if admitted {
            let coeff = error.scale(self.mu);
            self.dictionary.push(DictionaryEntry {
                center: x.clone(),
                coeff,
                coeff_conj: coeff.conj(),
            });
        }
        self.samples_seen += 1;
        Ok(StepOutcome {
            prediction,
            error,
            admitted,
        })
    }

    /// Runs `update` over a whole sequence.
    pub fn run_sequence(
        &mut self,
        inputs: &[ComplexVec<T>],
        targets: &[Complex<T>],
    ) -> Result<LearningTrace<T>> {
        if inputs.len() != targets.len() {
            return Err(Error::Shape {
                expected: inputs.len(),
                got: targets.len(),
            });
        }
        let mut trace = Vec::with_capacity(inputs.len());
        for (index, (x, &y)) in inputs.iter().zip(targets).enumerate() {
            let out = self.update(x, y).map_err(|e| Error::AtStep {
                index,
                source: Box::new(e),
            })?;
            trace.push(TraceStep {
                prediction: out.prediction,
                error: out.error,
                sq_error: out.error.norm_sqr(),
                sq_error_re: out.error.re * out.error.re,
                sq_error_im: out.error.im * out.error.im,
                dict_size: self.dictionary.len(),
            });
        }
        Ok(trace)
    }
}
