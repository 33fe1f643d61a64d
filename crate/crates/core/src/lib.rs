//! Spectra, ranks and angle structure of finite Gabor POVMs in C^d.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double precision case.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod arith;
pub mod error;
pub mod frame;
pub mod generators;
pub mod numerics;
pub mod scalar;
pub mod search;
pub mod transforms;

pub use analysis::verify::{run_suite, Suite, SuiteParams, VerifyReport};
pub use error::{GaborError, Result};
pub use frame::{
    ambiguity_table, ambiguity_table_of, frame_tightness_check, gabor_vector, gram_frame,
    gram_projectors, modulate, rank, spectrum_closed_form, spectrum_from_table, spectrum_oracle,
    translate, AmbiguityTable, FrameBound, GramMatrix, OracleSpectrum, SpectrumReport,
    UnitVector,
};
pub use numerics::{dft, idft, inner, is_zero, root_of_unity, CVec, TolerancePolicy};
pub use scalar::Real;
pub use search::{search, sic_gradient, sic_objective, FiducialResult, SearchConfig};
pub use transforms::{apply, apply_all, predict_ambiguity, TransformKind, TransformSpec};
pub use generators::GeneratorSpec;

pub type Complex64 = num_complex::Complex<f64>;
pub type CVec64 = CVec<f64>;
pub type UnitVector64 = UnitVector<f64>;
pub type AmbiguityTable64 = AmbiguityTable<f64>;
pub type SpectrumReport64 = SpectrumReport<f64>;
pub type TolerancePolicy64 = TolerancePolicy<f64>;
