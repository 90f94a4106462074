//! Exact computer algebra for quantum Serre duality on projective spaces.
//!
//! The crate builds the small J-function of Pⁿ, the Euler-twisted and local
//! I-functions of the anticanonical bundle, their mirror maps, the second
//! structure connections in the Fourier–Laplace dual variable x, truncated
//! Laplace transforms of fundamental solutions, the associated Picard–Fuchs
//! operators, Γ-class identities and Hodge filtrations. All core routines are
//! generic over [`Scalar`]; the aliases below fix the common choices.

pub mod coh_algebra;
pub mod error;
pub mod gamma_hrr;
pub mod givental;
pub mod golden;
pub mod hodge;
pub mod laplace;
pub mod lefschetz;
pub mod ratfn;
pub mod report;
pub mod scalar;
pub mod second_structure;
pub mod series;
pub mod suites;
pub mod weyl;

pub use coh_algebra::{AlgebraPresentation, CohElement};
pub use error::{Error, Result};
pub use report::{Check, Report};
pub use scalar::{Rational, Scalar, UniPoly};
pub use series::{CohSeries, UniSeries, ZPoly, ZqSeries};

/// Polynomials in the formal symbol Π = π√−1.
pub type PiPoly = UniPoly;
/// Polynomials in a symbolic connection parameter σ.
pub type SigmaPoly = UniPoly;

pub type QElement = CohElement<Rational>;
pub type QSeries = UniSeries<Rational>;
pub type QCohSeries = CohSeries<Rational>;
