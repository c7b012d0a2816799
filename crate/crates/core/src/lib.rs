//! Asymptotic expansions relative to an analytic germ `P`.
//!
//! The crate covers generalized Weierstrass division by `P`, the unique
//! rewriting `f = Σ gₙ Pⁿ` with remainders supported off the cone of the
//! leading exponent, blow-up and ramification substitutions, Gevrey-order
//! estimation of the resulting expansions, and numerical Borel-Laplace
//! summation of them at a point.

pub mod borel;
pub mod error;
pub mod gevrey;
pub mod harness;
pub mod json;
pub mod order;
pub mod pade;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod series;
pub mod transforms;
pub mod weierstrass;

pub use error::{Error, Result};
pub use order::{MonomialOrder, TieBreak};
pub use scalar::Scalar;
pub use series::{Exponent, PolyRadius, TruncatedSeries, EXACT};
