//! Exhaustive checking of the calculus' laws on small spaces.
//!
//! [`enumerate_spaces`] yields every set-valued map on a universe of up to
//! three elements, each paired with the uniform measure and optionally some
//! seeded random rational measures. [`check_law`] evaluates one catalog law on
//! one space and input, and [`run_suite`] sweeps the whole catalog and
//! collects a [`LawReport`] per law.

mod enumerate;
mod laws;
mod suite;

pub use enumerate::{
    enumerate_maps, enumerate_spaces, map_count, random_measure, random_variable, set_partitions, two_block_covers,
    EnumeratedSpace, MeasurePlan, EXHAUSTIVE_LIMIT, LARGE_LIMIT,
};
pub use laws::{check_law, Counterexample, LawId, LawInput, Outcome, Relation, Value};
pub use suite::{run_suite, LawReport, SuiteConfig, SuiteReport, Verdict};
