//! Exact-arithmetic toolkit for two-dimensional Diophantine approximation
//! with sign-constrained integer coefficients.
//!
//! The crate computes, for a pair Θ = (θ¹, θ²) of reals in (0, 1):
//!
//! * the record (best-approximation) step functions ψ, ψ* and ψ₊ of the
//!   linear form ‖m₁θ¹ + m₂θ²‖ under three coefficient regimes
//!   ([`psi`]), with a brute-force oracle and a contract-equal
//!   accelerated path;
//! * empirical ordinary and uniform exponents read off finite record
//!   sequences ([`exponents`]);
//! * the closed-form lower bounds relating the positive-coefficient
//!   exponents to (ω, ω̂), including the region split and G(ω)
//!   ([`bounds`]);
//! * an exact rational linear-programming verification of the max-min
//!   inequality behind the combined bound, with a bisection for the
//!   supremal exponent and a comparison against the closed form
//!   ([`maxmin`]);
//! * a certified enclosure of the quartic root σ, the counterexample
//!   constants derived from it with printed-value audits, and a finite
//!   window checker for positive lower-bound certificates
//!   ([`constants`], [`sturm`]).
//!
//! All record and LP computations run on exact rationals; floating point
//! appears only at reporting boundaries. Interval enclosures make every
//! comparison certified: results are never silently rounded past a tie.
//!
//! The `parallel` feature (on by default) runs the large enumeration loops
//! on a rayon pool; disabling it yields a sequential build with identical
//! output.

pub mod bounds;
pub mod constants;
pub mod exponents;
pub mod maxmin;
pub mod psi;
pub mod rat;
pub mod scalar;
pub mod sturm;
pub mod theta;

pub use bounds::{BoundError, BoundReport, ExponentPoint, RegionClass};
pub use constants::{
    Certificate, CertificateReport, ConstantsError, CounterexampleConstants, SigmaRoot,
};
pub use exponents::{ExponentError, ExponentEstimate, ExponentTable};
pub use maxmin::{LogPolytope, LpOutcome, MaxMinError, MaxMinInstance};
pub use psi::{
    AccelOutcome, EngineConfig, PsiError, RecordEvent, RecordSequence, Variant, Witness,
};
pub use scalar::{NumericError, PreciseScalar};
pub use theta::{GeneratorKind, LinearFormTable, Provenance, ThetaError, ThetaPair};
