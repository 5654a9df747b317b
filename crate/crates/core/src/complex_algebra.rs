//! Complex vectors and the composite / augmented representations of a
//! complex scalar.
//!
//! The composite form stacks real over imaginary part, `[re, im]`. The
//! augmented form stacks a value over its conjugate, `[y, y*]`. They are
//! related by `aug = T c` with `T = [[1, j], [1, -j]]`, and `T Tᴴ = 2I`, so the
//! inverse map is `c = ½ Tᴴ aug`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Fixed-dimension complex input sample with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec<T> {
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexVec<T> {
    pub fn new(entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput(
                "complex vector must have dim >= 1".into(),
            ));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidInput(
                "complex vector has non-finite entries".into(),
            ));
        }
        Ok(Self { entries })
    }

    pub fn from_parts(re: &[T], im: &[T]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::Shape {
                expected: re.len(),
                got: im.len(),
            });
        }
        Self::new(
            re.iter()
                .zip(im)
                .map(|(&a, &b)| Complex::new(a, b))
                .collect(),
        )
    }

    pub fn scalar(z: Complex<T>) -> Result<Self> {
        Self::new(vec![z])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Shape {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    /// ‖self − other‖², the Hermitian squared distance. Dimensions must match.
    pub fn sq_distance(&self, other: &Self) -> T {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum()
    }

    pub fn distance(&self, other: &Self) -> T {
        self.sq_distance(other).sqrt()
    }
}

/// Composite (dual real channel) representation `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CompositePair<T> {
    pub re: T,
    pub im: T,
}

/// Augmented representation `[val, conj]` with `conj == val*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentedPair<T> {
    pub val: Complex<T>,
    pub conj: Complex<T>,
}

impl<T: Scalar> CompositePair<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn from_complex(z: Complex<T>) -> Self {
        Self { re: z.re, im: z.im }
    }

    pub fn to_complex(self) -> Complex<T> {
        Complex::new(self.re, self.im)
    }
}

impl<T: Scalar> AugmentedPair<T> {
    pub fn from_value(val: Complex<T>) -> Self {
        Self {
            val,
            conj: val.conj(),
        }
    }
}

/// `aug = T c`.
pub fn composite_to_augmented<T: Scalar>(c: CompositePair<T>) -> Result<AugmentedPair<T>> {
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(Error::InvalidInput(
            "composite pair has non-finite entries".into(),
        ));
    }
    let j = Complex::new(T::zero(), T::one());
    let re = Complex::new(c.re, T::zero());
    let im = Complex::new(c.im, T::zero());
    Ok(AugmentedPair {
        val: re + j * im,
        conj: re - j * im,
    })
}

/// `c = ½ Tᴴ aug`. Rejects pairs whose second entry is not the exact
/// conjugate of the first.
pub fn augmented_to_composite<T: Scalar>(a: AugmentedPair<T>) -> Result<CompositePair<T>> {
    if a.conj != a.val.conj() {
        return Err(Error::InvalidInput(
            "augmented pair is not conjugate-consistent".into(),
        ));
    }
    let half = T::lit(0.5);
    let j = Complex::new(T::zero(), T::one());
    // Tᴴ = [[1, 1], [-j, j]]
    let re = (a.val + a.conj).scale(half);
    let im = (-j * a.val + j * a.conj).scale(half);
    Ok(CompositePair {
        re: re.re,
        im: im.re,
    })
}
