//! Traces of singular moduli and related modular-forms computations.
//!
//! The crate is organized around a small exact q-series engine:
//!
//! - [`qseries`]: truncated Laurent series in q with exact rational
//!   coefficients and fractional exponents, plus the standard forms
//!   (eta, Delta, j, Eisenstein series, theta functions, eta quotients,
//!   Rankin-Cohen brackets).
//! - [`quadforms`]: binary quadratic forms, reduction, class enumeration,
//!   Hurwitz class numbers and level-p form sets.
//! - [`traces`]: numerical singular moduli, trace functions, Hilbert class
//!   polynomials, Faber polynomials and small modular polynomials.
//! - [`plusspace`]: weight 1/2 and 3/2 weakly holomorphic bases in the
//!   Kohnen plus-space at level 4 and 4p, Zagier duality and half-integral
//!   Hecke operators.
//! - [`jacobi`]: weak Jacobi forms, the Eichler-Zagier generators and the
//!   index-raising operator V_p.
//! - [`fricke`]: hauptmoduln for the Fricke groups, Rademacher series and
//!   Fricke traces.
//! - [`borcherds`]: the Borcherds lift and infinite-product verification.
//! - [`suite`]: the end-to-end verification suite behind the CLI.

pub mod bigfloat;
pub mod borcherds;
pub mod error;
pub mod fricke;
pub mod jacobi;
pub mod plusspace;
pub mod qseries;
pub mod quadforms;
pub mod suite;
pub mod traces;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
