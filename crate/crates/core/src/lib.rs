//! Exact calculus for integrals over products of the harmonic-oscillator
//! correlation function `Δ`, its derivatives and Dirac `δ` factors, together
//! with the vacuum diagrams of a coordinate-transformed oscillator whose
//! perturbative corrections must cancel.

pub mod error;
pub mod expr;
pub mod integrand;
pub mod reducer;
pub mod ring;
pub mod verify;
pub mod wick;

pub use error::{Error, Result};
pub use integrand::{IntegrandMonomial, IntegrandSum, Powers};
pub use reducer::{reduce, ReductionTrace, Rule, TraceStep};
pub use ring::{rat, Bindings, Exponents, Rational, Symbol, ValuePoly};
pub use verify::{CheckResult, OrderCheckOptions};
pub use wick::{Contraction, DiagramClass, DiagramTerm, Vertex};
