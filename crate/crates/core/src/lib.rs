//! Widely linear kernel adaptive filtering.
//!
//! The generalized complex kernel LMS (gCKLMS) learns a complex-valued map
//! with both a kernel and a pseudo-kernel term, built from four real
//! sub-kernels. CKLMS2 and ACKLMS are included as the special cases with a
//! null pseudo-kernel, along with a composite (real 2-vector) form of the
//! same recursion that serves as an algebraic cross-check.
//!
//! The algebra, kernel and filter layers are generic over [`Scalar`]
//! (`f32`/`f64`); the signal generators, experiment harness and CLI run in
//! `f64`.

// `!(x > 0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod complex_algebra;
pub mod config;
pub mod error;
pub mod filters;
pub mod harness;
pub mod kernels;
pub mod scalar;
pub mod selftest;
pub mod signal_lab;

pub use num_complex::Complex;

pub use complex_algebra::{
    augmented_to_composite, composite_to_augmented, AugmentedPair, ComplexVec, CompositePair,
};
pub use config::{load_config, parse_config, serialize_config};
pub use error::{Error, Result};
pub use filters::{Algorithm, FilterSpec, KernelChoice, KlmsFilter, NoveltyParams};
pub use harness::{
    preset, run_experiment, ArmConfig, ExperimentConfig, ExperimentResult, LearningCurve, Scenario,
    PRESET_NAMES,
};
pub use kernels::{
    compose_kernel, BaseKernel, ComplexKernelPair, KernelSpec, RealSubKernel, SubKernelKind,
};
pub use scalar::Scalar;

pub type C64 = Complex<f64>;
pub type ComplexVec64 = ComplexVec<f64>;
pub type KernelSpec64 = KernelSpec<f64>;
pub type KlmsFilter64 = KlmsFilter<f64>;
pub type FilterSpec64 = FilterSpec<f64>;
pub type ComplexVec32 = ComplexVec<f32>;
pub type KlmsFilter32 = KlmsFilter<f32>;
