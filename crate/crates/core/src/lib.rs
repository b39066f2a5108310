//! Expander-based LDPC codes: constructions, spectral and expansion
//! measurements, the closed-form lower bounds on minimum distance, stopping
//! set size and pseudocodeword weight, and exact desk-scale oracles to check
//! them against.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix the two
//! instantiations used throughout.

pub mod bec;
pub mod bounds;
pub mod expansion;
pub mod gf2;
pub mod lpsolve;
pub mod polytope;
pub mod scalar;
pub mod seeds;
pub mod spectral;
pub mod subcodes;
pub mod tanner;

pub use gf2::{BitMatrix, CodeParams, Gf2Error};
pub use scalar::{Rational, Scalar};
pub use subcodes::SubcodeSpec;
pub use tanner::{TannerError, TannerGraph};

/// Exact linear program.
pub type ExactLp = lpsolve::LinearProgram<Rational>;
/// Floating-point linear program.
pub type FloatLp = lpsolve::LinearProgram<f64>;
/// Exact pseudocodeword.
pub type ExactPseudocodeword = polytope::Pseudocodeword<Rational>;
/// Floating-point spectrum.
pub type Spectrum = spectral::SpectrumReport<f64>;
