//! Kernel catalog and the composition of a complex kernel / pseudo-kernel
//! pair from four real sub-kernels.
//!
//! For a 2×2 real matrix-valued kernel
//!
//! ```text
//! K(x, x') = | k_rr  k_rj |
//!            | k_jr  k_jj |
//! ```
//!
//! the augmented kernel `T K Tᴴ` has first row `[k, k̃]` with
//!
//! ```text
//! k  = k_rr + k_jj + j (k_jr − k_rj)
//! k̃ = k_rr − k_jj + j (k_jr + k_rj)
//! ```

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::complex_algebra::ComplexVec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerance used when checking that a composed spec has a null pseudo-kernel.
pub const NULL_PSEUDO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubKernelKind {
    Gaussian,
    Zero,
    ScaledGaussian,
}

fn one<T: Scalar>() -> T {
    T::one()
}

/// One real entry of the matrix-valued kernel: `scale · exp(−‖x − x'‖² / γ²)`
/// for the Gaussian kinds, identically zero otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    deny_unknown_fields,
    bound = "T: Scalar + Serialize + for<'a> Deserialize<'a>"
)]
pub struct RealSubKernel<T> {
    pub kind: SubKernelKind,
    #[serde(default)]
    pub gamma: T,
    #[serde(default = "one")]
    pub scale: T,
}

impl<T: Scalar> RealSubKernel<T> {
    pub fn gaussian(gamma: T) -> Self {
        Self {
            kind: SubKernelKind::Gaussian,
            gamma,
            scale: T::one(),
        }
    }

    pub fn scaled_gaussian(scale: T, gamma: T) -> Self {
        Self {
            kind: SubKernelKind::ScaledGaussian,
            gamma,
            scale,
        }
    }

    pub fn zero() -> Self {
        Self {
            kind: SubKernelKind::Zero,
            gamma: T::zero(),
            scale: T::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.kind == SubKernelKind::Zero || self.scale == T::zero()
    }

    /// Checks parameters; `path` prefixes the field names in the error.
    pub fn validate(&self, path: &str) -> Result<()> {
        match self.kind {
            SubKernelKind::Zero => Ok(()),
            SubKernelKind::Gaussian | SubKernelKind::ScaledGaussian => {
                if !(self.gamma > T::zero()) || !self.gamma.is_finite() {
                    return Err(Error::config(
                        format!("{path}.gamma"),
                        format!(
                            "kernel width must be positive and finite, got {}",
                            self.gamma
                        ),
                    ));
                }
                if !self.scale.is_finite() {
                    return Err(Error::config(
                        format!("{path}.scale"),
                        "scale must be finite",
                    ));
                }
                Ok(())
            }
        }
    }

    /// Evaluates from a precomputed squared distance.
    #[inline]
    pub fn eval_sq_dist(&self, sq_dist: T) -> T {
        match self.kind {
            SubKernelKind::Zero => T::zero(),
            SubKernelKind::Gaussian | SubKernelKind::ScaledGaussian => {
                self.scale * (-sq_dist / (self.gamma * self.gamma)).exp()
            }
        }
    }

    pub fn eval(&self, x: &ComplexVec<T>, x2: &ComplexVec<T>) -> Result<T> {
        x.check_dim(x2)?;
        Ok(self.eval_sq_dist(x.sq_distance(x2)))
    }
}

/// The four real sub-kernels of the matrix-valued kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    deny_unknown_fields,
    bound = "T: Scalar + Serialize + for<'a> Deserialize<'a>"
)]
pub struct KernelSpec<T> {
    pub k_rr: RealSubKernel<T>,
    pub k_jj: RealSubKernel<T>,
    pub k_rj: RealSubKernel<T>,
    pub k_jr: RealSubKernel<T>,
}

/// Evaluated 2×2 real kernel matrix, row-major `[[k_rr, k_rj], [k_jr, k_jj]]`.
pub type KernelMatrix<T> = [[T; 2]; 2];

impl<T: Scalar> KernelSpec<T> {
    /// Independent real and imaginary parts: Gaussian diagonal, zero off-diagonal.
    pub fn independent(gamma_r: T, gamma_j: T) -> Self {
        Self {
            k_rr: RealSubKernel::gaussian(gamma_r),
            k_jj: RealSubKernel::gaussian(gamma_j),
            k_rj: RealSubKernel::zero(),
            k_jr: RealSubKernel::zero(),
        }
    }

    /// Gaussian diagonal plus symmetric scaled-Gaussian coupling `v · k_G(γ_jr)`
    /// on both off-diagonal entries.
    pub fn coupled(gamma_r: T, gamma_j: T, v: T, gamma_jr: T) -> Self {
        let off = RealSubKernel::scaled_gaussian(v, gamma_jr);
        Self {
            k_rr: RealSubKernel::gaussian(gamma_r),
            k_jj: RealSubKernel::gaussian(gamma_j),
            k_rj: off,
            k_jr: off,
        }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        self.k_rr.validate(&format!("{path}.k_rr"))?;
        self.k_jj.validate(&format!("{path}.k_jj"))?;
        self.k_rj.validate(&format!("{path}.k_rj"))?;
        self.k_jr.validate(&format!("{path}.k_jr"))
    }

    /// True when both off-diagonal sub-kernels are identically zero.
    pub fn is_uncoupled(&self) -> bool {
        self.k_rj.is_zero() && self.k_jr.is_zero()
    }

    #[inline]
    pub fn matrix_sq_dist(&self, sq_dist: T) -> KernelMatrix<T> {
        [
            [
                self.k_rr.eval_sq_dist(sq_dist),
                self.k_rj.eval_sq_dist(sq_dist),
            ],
            [
                self.k_jr.eval_sq_dist(sq_dist),
                self.k_jj.eval_sq_dist(sq_dist),
            ],
        ]
    }

    pub fn matrix(&self, x: &ComplexVec<T>, x2: &ComplexVec<T>) -> Result<KernelMatrix<T>> {
        x.check_dim(x2)?;
        Ok(self.matrix_sq_dist(x.sq_distance(x2)))
    }
}

/// `exp(−‖x − x2‖² / γ²)` with the Hermitian norm.
pub fn eval_real_gaussian<T: Scalar>(x: &ComplexVec<T>, x2: &ComplexVec<T>, gamma: T) -> Result<T> {
    if !(gamma > T::zero()) {
        return Err(Error::InvalidInput(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    RealSubKernel::gaussian(gamma).eval(x, x2)
}

/// Exponent of the complex Gaussian kernel, split into real and imaginary
/// parts: `−(x − x2*)ᵀ(x − x2*) / γ²` with a plain transpose.
#[inline]
fn complex_gaussian_exponent<T: Scalar>(x: &ComplexVec<T>, x2: &ComplexVec<T>, gamma: T) -> (T, T) {
    let mut re = T::zero();
    let mut im = T::zero();
    for (a, b) in x.entries().iter().zip(x2.entries()) {
        // a − b* = (a.re − b.re) + j (a.im + b.im)
        let p = a.re - b.re;
        let q = a.im + b.im;
        re += p * p - q * q;
        im += p * q;
    }
    let g2 = gamma * gamma;
    (-re / g2, -(im + im) / g2)
}

#[inline]
pub(crate) fn complex_gaussian_unchecked<T: Scalar>(
    x: &ComplexVec<T>,
    x2: &ComplexVec<T>,
    gamma: T,
) -> Result<Complex<T>> {
    let (er, ei) = complex_gaussian_exponent(x, x2, gamma);
    if er.as_f64() > T::EXP_LIMIT {
        return Err(Error::KernelOverflow {
            exponent: er.as_f64(),
            limit: T::EXP_LIMIT,
        });
    }
    let mag = er.exp();
    Ok(Complex::new(mag * ei.cos(), mag * ei.sin()))
}

/// `exp(−(x − x2*)ᵀ(x − x2*) / γ²)`. Its magnitude is unbounded; exponents
/// beyond the scalar's overflow limit are reported as [`Error::KernelOverflow`].
pub fn eval_complex_gaussian<T: Scalar>(
    x: &ComplexVec<T>,
    x2: &ComplexVec<T>,
    gamma: T,
) -> Result<Complex<T>> {
    if !(gamma > T::zero()) {
        return Err(Error::InvalidInput(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    x.check_dim(x2)?;
    complex_gaussian_unchecked(x, x2, gamma)
}

/// Complex kernel `k` and pseudo-kernel `k̃` used by the filters.
#[derive(Debug, Clone, PartialEq)]
pub enum ComplexKernelPair<T> {
    /// Built from four real sub-kernels.
    Composed {
        spec: KernelSpec<T>,
        shared: SharedEval,
    },
    /// Complex Gaussian kernel with identically zero pseudo-kernel.
    ComplexGaussian { gamma: T },
}

/// Which sub-kernel evaluations can be reused within one kernel-pair call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharedEval {
    jj_is_rr: bool,
    jr_is_rj: bool,
}

/// Builds the kernel pair of a composed spec.
pub fn compose_kernel<T: Scalar>(spec: KernelSpec<T>) -> ComplexKernelPair<T> {
    ComplexKernelPair::Composed {
        spec,
        shared: SharedEval {
            jj_is_rr: spec.k_jj == spec.k_rr,
            jr_is_rj: spec.k_jr == spec.k_rj,
        },
    }
}

impl<T: Scalar> ComplexKernelPair<T> {
    pub fn complex_gaussian(gamma: T) -> Self {
        ComplexKernelPair::ComplexGaussian { gamma }
    }

    pub fn spec(&self) -> Option<&KernelSpec<T>> {
        match self {
            ComplexKernelPair::Composed { spec, .. } => Some(spec),
            ComplexKernelPair::ComplexGaussian { .. } => None,
        }
    }

    /// `(k(x, x2), k̃(x, x2))` without a dimension check.
    #[inline]
    pub(crate) fn eval_unchecked(
        &self,
        x: &ComplexVec<T>,
        x2: &ComplexVec<T>,
    ) -> Result<(Complex<T>, Complex<T>)> {
        match self {
            ComplexKernelPair::Composed { spec, shared } => {
                let d2 = x.sq_distance(x2);
                let rr = spec.k_rr.eval_sq_dist(d2);
                let jj = if shared.jj_is_rr {
                    rr
                } else {
                    spec.k_jj.eval_sq_dist(d2)
                };
                let rj = spec.k_rj.eval_sq_dist(d2);
                let jr = if shared.jr_is_rj {
                    rj
                } else {
                    spec.k_jr.eval_sq_dist(d2)
                };
                Ok(pair_from_entries(rr, jj, rj, jr))
            }
            ComplexKernelPair::ComplexGaussian { gamma } => {
                let k = complex_gaussian_unchecked(x, x2, *gamma)?;
                Ok((k, Complex::new(T::zero(), T::zero())))
            }
        }
    }

    pub fn eval(&self, x: &ComplexVec<T>, x2: &ComplexVec<T>) -> Result<(Complex<T>, Complex<T>)> {
        x.check_dim(x2)?;
        self.eval_unchecked(x, x2)
    }

    pub fn k(&self, x: &ComplexVec<T>, x2: &ComplexVec<T>) -> Result<Complex<T>> {
        Ok(self.eval(x, x2)?.0)
    }

    pub fn pk(&self, x: &ComplexVec<T>, x2: &ComplexVec<T>) -> Result<Complex<T>> {
        Ok(self.eval(x, x2)?.1)
    }
}

/// Kernel and pseudo-kernel from the four evaluated sub-kernel values.
#[inline]
pub fn pair_from_entries<T: Scalar>(rr: T, jj: T, rj: T, jr: T) -> (Complex<T>, Complex<T>) {
    (
        Complex::new(rr + jj, jr - rj),
        Complex::new(rr - jj, jr + rj),
    )
}

/// Checks `k_rr = k_jj` and `k_jr = −k_rj` on every sampled pair, which is
/// exactly when the composed pseudo-kernel vanishes.
pub fn check_null_pseudo_conditions<T: Scalar>(
    spec: &KernelSpec<T>,
    sample_pairs: &[(ComplexVec<T>, ComplexVec<T>)],
) -> bool {
    if sample_pairs.is_empty() {
        return false;
    }
    let tol = T::lit(NULL_PSEUDO_TOL);
    sample_pairs.iter().all(|(a, b)| match spec.matrix(a, b) {
        Ok([[rr, rj], [jr, jj]]) => (rr - jj).abs() <= tol && (jr + rj).abs() <= tol,
        Err(_) => false,
    })
}

/// Base kernel of the ACKLMS family: a real sub-kernel `k_Re`, or the
/// complex Gaussian whose real part is used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseKernel<T> {
    Real(RealSubKernel<T>),
    ComplexGaussian { gamma: T },
}

impl<T: Scalar> BaseKernel<T> {
    pub fn real_gaussian(gamma: T) -> Self {
        BaseKernel::Real(RealSubKernel::gaussian(gamma))
    }

    /// The full (possibly complex) kernel value.
    #[inline]
    pub(crate) fn eval_unchecked(
        &self,
        x: &ComplexVec<T>,
        x2: &ComplexVec<T>,
    ) -> Result<Complex<T>> {
        match *self {
            BaseKernel::Real(k) => Ok(Complex::new(k.eval_sq_dist(x.sq_distance(x2)), T::zero())),
            BaseKernel::ComplexGaussian { gamma } => complex_gaussian_unchecked(x, x2, gamma),
        }
    }

    pub fn eval(&self, x: &ComplexVec<T>, x2: &ComplexVec<T>) -> Result<Complex<T>> {
        x.check_dim(x2)?;
        self.eval_unchecked(x, x2)
    }
}
