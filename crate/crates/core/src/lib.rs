//! Exact rough-probability calculus on finite approximation spaces.
//!
//! A space is a finite universe `X`, a set-valued map `T : X -> P*(X)` and a
//! probability measure `P`. Events are approximated from inside by
//! `T⁺(A) = {x : T(x) ⊆ A}` and from outside by `T⁻¹(A) = {x : T(x) ∩ A ≠ ∅}`,
//! which gives lower and upper probabilities `P̲(A) = P(T⁺(A))` and
//! `P̄(A) = P(T⁻¹(A))`. Random variables inherit lower/upper singleton masses,
//! distribution functions, expectations and variances from those.
//!
//! All arithmetic is exact ([`Rational`]). The [`verify`] module sweeps every
//! set-valued map on small universes and checks the algebraic laws of the
//! calculus, and [`document`] reads and writes the JSON space format.

pub mod document;
pub mod error;
pub mod measure;
pub mod rational;
pub mod space;
pub mod variable;
pub mod verify;

pub use error::Error;
pub use measure::{cond_lower, cond_upper, lower_prob, rough_prob, upper_prob, ProbTable, RoughPair};
pub use rational::Rational;
pub use space::{build_space, ApproximationSpace, Event, ProbabilityMeasure, SetValuedMap, Universe};
pub use variable::{build_variable, Bound, CdfMode, PiecewiseCdf, RoughVariable, SingletonRow, Step};
