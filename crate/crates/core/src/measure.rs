//! Lower, upper and rough probabilities, plain and conditional.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::Rational;
use crate::space::{ApproximationSpace, Event};

/// An ordered `(lower, upper)` pair. Pairs returned by [`rough_prob`] satisfy
/// `0 <= lower <= upper <= 1`; pairs built from singleton masses (CDF,
/// expectation, variance) carry no upper bound of one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RoughPair {
    pub lower: Rational,
    pub upper: Rational,
}

impl RoughPair {
    pub fn new(lower: Rational, upper: Rational) -> Self {
        RoughPair { lower, upper }
    }

    pub fn is_collapsed(&self) -> bool {
        self.lower == self.upper
    }
}

impl fmt::Display for RoughPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

/// `P̲(A) = P(T⁺(A))`.
pub fn lower_prob(space: &ApproximationSpace, event: &Event) -> Result<Rational, Error> {
    let inner = space.lower_inverse(event)?;
    Ok(space.measure().prob(&inner))
}

/// `P̄(A) = P(T⁻¹(A))`.
pub fn upper_prob(space: &ApproximationSpace, event: &Event) -> Result<Rational, Error> {
    let outer = space.upper_inverse(event)?;
    Ok(space.measure().prob(&outer))
}

pub fn rough_prob(space: &ApproximationSpace, event: &Event) -> Result<RoughPair, Error> {
    Ok(RoughPair::new(lower_prob(space, event)?, upper_prob(space, event)?))
}

/// `P̲(A|B) = P̲(A∩B) / P̲(B)`, defined only when `P̲(B) != 0`.
pub fn cond_lower(space: &ApproximationSpace, event: &Event, given: &Event) -> Result<Rational, Error> {
    event.check_same_universe(given)?;
    let denom = lower_prob(space, given)?;
    if denom.is_zero() {
        return Err(Error::ZeroConditioningMass("lower"));
    }
    Ok(&lower_prob(space, &(*event & *given))? / &denom)
}

/// `P̄(A|B) = P̄(A∩B) / P̄(B)`, defined only when `P̄(B) != 0`.
pub fn cond_upper(space: &ApproximationSpace, event: &Event, given: &Event) -> Result<Rational, Error> {
    event.check_same_universe(given)?;
    let denom = upper_prob(space, given)?;
    if denom.is_zero() {
        return Err(Error::ZeroConditioningMass("upper"));
    }
    Ok(&upper_prob(space, &(*event & *given))? / &denom)
}

/// Lower and upper probability of every event of a space, indexed by the
/// event's bitmask. Used by the law checker, which evaluates the same few
/// events many times over.
#[derive(Debug, Clone)]
pub struct ProbTable {
    size: usize,
    classical: Vec<Rational>,
    lower: Vec<Rational>,
    upper: Vec<Rational>,
    lower_inv: Vec<Event>,
    upper_inv: Vec<Event>,
}

impl ProbTable {
    /// Panics for universes with more than 20 elements.
    pub fn new(space: &ApproximationSpace) -> Self {
        let n = space.len();
        assert!(n <= 20, "probability table over 2^{n} events");
        let measure = space.measure();
        let events: Vec<Event> = Event::all(n).collect();
        let classical: Vec<Rational> = events.iter().map(|e| measure.prob(e)).collect();
        let lower_inv: Vec<Event> = events.iter().map(|e| space.lower_inverse_unchecked(e)).collect();
        let upper_inv: Vec<Event> = events.iter().map(|e| space.upper_inverse_unchecked(e)).collect();
        let lower = lower_inv.iter().map(|e| classical[e.bits() as usize].clone()).collect();
        let upper = upper_inv.iter().map(|e| classical[e.bits() as usize].clone()).collect();
        ProbTable { size: n, classical, lower, upper, lower_inv, upper_inv }
    }

    pub fn universe_size(&self) -> usize {
        self.size
    }

    pub fn prob(&self, e: Event) -> &Rational {
        &self.classical[e.bits() as usize]
    }

    pub fn lower(&self, e: Event) -> &Rational {
        &self.lower[e.bits() as usize]
    }

    pub fn upper(&self, e: Event) -> &Rational {
        &self.upper[e.bits() as usize]
    }

    pub fn lower_inverse(&self, e: Event) -> Event {
        self.lower_inv[e.bits() as usize]
    }

    pub fn upper_inverse(&self, e: Event) -> Event {
        self.upper_inv[e.bits() as usize]
    }

    pub fn cond_lower(&self, a: Event, b: Event) -> Option<Rational> {
        let denom = self.lower(b);
        (!denom.is_zero()).then(|| self.lower(a & b) / denom)
    }

    pub fn cond_upper(&self, a: Event, b: Event) -> Option<Rational> {
        let denom = self.upper(b);
        (!denom.is_zero()).then(|| self.upper(a & b) / denom)
    }

    pub fn is_exact(&self, e: Event) -> bool {
        self.lower_inverse(e) == e && self.upper_inverse(e) == e
    }
}
