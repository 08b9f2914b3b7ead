use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{
    enumerate_spaces_with_limit, random_variable, set_partitions, two_block_covers, EnumeratedSpace, MeasurePlan,
    EXHAUSTIVE_LIMIT, LARGE_LIMIT,
};
use super::laws::{counterexample, evaluate, Arity, Counterexample, Evaluation, LawId, LawInput};
use crate::error::Error;
use crate::measure::ProbTable;
use crate::rational::Rational;
use crate::space::Event;
use crate::variable::RoughVariable;

/// Counterexamples kept per law; the total is always counted.
pub const KEPT_COUNTEREXAMPLES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Sweep universes of size `1..=n_max`.
    pub n_max: usize,
    /// Seeds for the random measures added next to the uniform one.
    pub seeds: Vec<u64>,
    pub measures_per_seed: usize,
    /// Random integer-valued variables per space, on top of the identity.
    pub variables_per_space: usize,
    /// `a` and `b` both range over this grid for the affine laws.
    pub affine_constants: Vec<Rational>,
    pub laws: Vec<LawId>,
    /// Treat the cover variant of the lower total-probability law as a law
    /// that should hold rather than as a negative control.
    pub include_cover_variant: bool,
    /// Permit `n_max` up to [`LARGE_LIMIT`].
    pub allow_large: bool,
    pub parallel: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_max: EXHAUSTIVE_LIMIT,
            seeds: vec![1, 2],
            measures_per_seed: 1,
            variables_per_space: 2,
            affine_constants: [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2)]
                .iter()
                .map(|&(n, d)| Rational::new(n, d).expect("nonzero"))
                .collect(),
            laws: LawId::ALL.to_vec(),
            include_cover_variant: false,
            allow_large: false,
            parallel: true,
        }
    }
}

impl SuiteConfig {
    fn expects_counterexample(&self, law: LawId) -> bool {
        law.is_control() && !(law == LawId::LowerTotalCover && self.include_cover_variant)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// No counterexample and at least one instance met the hypotheses.
    Holds,
    Violated,
    /// Every instance was vacuous.
    NeverExercised,
    /// A negative control produced the counterexample it should.
    ControlConfirmed,
    /// A negative control found nothing: the checker is broken.
    ControlMissed,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub law: LawId,
    pub statement: &'static str,
    pub control: bool,
    pub verdict: Verdict,
    pub instances_checked: u64,
    pub vacuous: u64,
    pub non_vacuous: u64,
    pub counterexample_count: u64,
    /// The first few counterexamples in sweep order; empty iff none exist.
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub n_max: usize,
    pub seeds: Vec<u64>,
    pub spaces: u64,
    pub laws: Vec<LawReport>,
}

impl LawReport {
    /// The kept counterexamples with their law, as pretty JSON.
    pub fn counterexamples_json(&self) -> String {
        #[derive(Serialize)]
        struct View<'a> {
            law: LawId,
            verdict: Verdict,
            counterexample_count: u64,
            counterexamples: &'a [Counterexample],
        }
        serde_json::to_string_pretty(&View {
            law: self.law,
            verdict: self.verdict,
            counterexample_count: self.counterexample_count,
            counterexamples: &self.counterexamples,
        })
        .expect("reports always serialize")
    }
}

impl SuiteReport {
    pub fn report(&self, law: LawId) -> Option<&LawReport> {
        self.laws.iter().find(|r| r.law == law)
    }

    /// Laws expected to hold that did not.
    pub fn violations(&self) -> impl Iterator<Item = &LawReport> {
        self.laws.iter().filter(|r| matches!(r.verdict, Verdict::Violated | Verdict::NeverExercised))
    }

    pub fn missed_controls(&self) -> impl Iterator<Item = &LawReport> {
        self.laws.iter().filter(|r| r.verdict == Verdict::ControlMissed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// One summary line per law; with `timing`, per-law CPU time is appended,
    /// which makes the output run-dependent.
    pub fn render_text(&self, timing: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "swept {} spaces (n <= {}, uniform + seeds {:?})", self.spaces, self.n_max, self.seeds);
        let _ = write!(out, "{:<14} {:<18} {:>10} {:>10} {:>10}", "law", "verdict", "checked", "vacuous", "failures");
        if timing {
            let _ = write!(out, " {:>10}", "ms");
        }
        out.push('\n');
        for r in &self.laws {
            let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
            let _ = write!(
                out,
                "{:<14} {:<18} {:>10} {:>10} {:>10}",
                r.law.code(),
                verdict.as_str().unwrap_or_default(),
                r.instances_checked,
                r.vacuous,
                r.counterexample_count
            );
            if timing {
                let _ = write!(out, " {:>10.1}", r.elapsed.as_secs_f64() * 1e3);
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Default, Clone)]
struct Tally {
    checked: u64,
    vacuous: u64,
    failures: u64,
    kept: Vec<Counterexample>,
    elapsed: Duration,
}

impl Tally {
    fn record(&mut self, evaluation: Evaluation, build: impl FnOnce(Evaluation) -> Counterexample) {
        self.checked += 1;
        match evaluation {
            Evaluation::Pass => {}
            Evaluation::Vacuous => self.vacuous += 1,
            fail @ Evaluation::Fail(_) => {
                self.failures += 1;
                if self.kept.len() < KEPT_COUNTEREXAMPLES {
                    self.kept.push(build(fail));
                }
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.vacuous += other.vacuous;
        self.failures += other.failures;
        self.elapsed += other.elapsed;
        let room = KEPT_COUNTEREXAMPLES - self.kept.len();
        self.kept.extend(other.kept.into_iter().take(room));
    }
}

/// Sweep every configured law over every enumerated space. The report is
/// identical whether or not the sweep runs in parallel.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, Error> {
    let limit = if config.allow_large { LARGE_LIMIT } else { EXHAUSTIVE_LIMIT };
    if config.n_max > limit {
        return Err(Error::DomainTooLarge(config.n_max, limit));
    }
    let plan = MeasurePlan::uniform_plus_random(config.measures_per_seed, config.seeds.clone());

    let mut totals = vec![Tally::default(); config.laws.len()];
    let mut spaces = 0u64;
    if config.laws.is_empty() {
        return Ok(finish(config, spaces, totals));
    }
    for n in 1..=config.n_max {
        let batch: Vec<EnumeratedSpace> = enumerate_spaces_with_limit(n, &plan, limit)?.collect();
        spaces += batch.len() as u64;
        let per_space: Vec<Vec<Tally>> = if config.parallel {
            batch.par_iter().map(|s| sweep_space(config, s)).collect()
        } else {
            batch.iter().map(|s| sweep_space(config, s)).collect()
        };
        for tallies in per_space {
            for (total, tally) in totals.iter_mut().zip(tallies) {
                total.merge(tally);
            }
        }
    }
    Ok(finish(config, spaces, totals))
}

fn finish(config: &SuiteConfig, spaces: u64, totals: Vec<Tally>) -> SuiteReport {
    let laws = config
        .laws
        .iter()
        .zip(totals)
        .map(|(&law, t)| {
            let non_vacuous = t.checked - t.vacuous;
            let verdict = if config.expects_counterexample(law) {
                if t.failures > 0 {
                    Verdict::ControlConfirmed
                } else {
                    Verdict::ControlMissed
                }
            } else if t.failures > 0 {
                Verdict::Violated
            } else if non_vacuous == 0 {
                Verdict::NeverExercised
            } else {
                Verdict::Holds
            };
            LawReport {
                law,
                statement: law.statement(),
                control: config.expects_counterexample(law),
                verdict,
                instances_checked: t.checked,
                vacuous: t.vacuous,
                non_vacuous,
                counterexample_count: t.failures,
                counterexamples: t.kept,
                elapsed: t.elapsed,
            }
        })
        .collect();
    SuiteReport { n_max: config.n_max, seeds: config.seeds.clone(), spaces, laws }
}

fn sweep_space(config: &SuiteConfig, enumerated: &EnumeratedSpace) -> Vec<Tally> {
    let space = &enumerated.space;
    let n = space.len();
    let table = ProbTable::new(space);
    let origin = format!("n={} map={} measure={}", n, enumerated.map_index, enumerated.measure);
    let events: Vec<Event> = Event::all(n).collect();

    let variable_seed = config.seeds.first().copied().unwrap_or(0);
    let mut variables = vec![RoughVariable::identity(space)];
    variables.extend((0..config.variables_per_space).map(|j| {
        let stream = (enumerated.map_index * config.variables_per_space + j) as u64;
        random_variable(space, variable_seed, stream)
    }));

    config
        .laws
        .iter()
        .map(|&law| {
            let started = Instant::now();
            let mut tally = Tally::default();
            let mut check = |input: LawInput| {
                let evaluation = evaluate(law, space, &table, &input).expect("sweep inputs fit their law");
                tally.record(evaluation, |fail| {
                    let Evaluation::Fail(f) = fail else { unreachable!("only failures are built") };
                    let mut cx = counterexample(law, space, &input, *f);
                    cx.origin = origin.clone();
                    cx
                });
            };
            match law.arity() {
                Arity::Nullary => check(LawInput::None),
                Arity::Single => events.iter().for_each(|&a| check(LawInput::Events(vec![a]))),
                Arity::Pair => {
                    for &a in &events {
                        for &b in &events {
                            check(LawInput::Events(vec![a, b]));
                        }
                    }
                }
                Arity::Triple => {
                    for &a in &events {
                        for &b in &events {
                            for &c in &events {
                                check(LawInput::Events(vec![a, b, c]));
                            }
                        }
                    }
                }
                Arity::Partition => {
                    for blocks in set_partitions(n) {
                        for &event in &events {
                            check(LawInput::Blocks { event, blocks: blocks.clone() });
                        }
                    }
                }
                Arity::Cover => {
                    for (b1, b2) in two_block_covers(n) {
                        for &event in &events {
                            check(LawInput::Blocks { event, blocks: vec![b1, b2] });
                        }
                    }
                }
                Arity::Variable => variables.iter().for_each(|v| check(LawInput::Variable(v))),
                Arity::Affine => {
                    for v in &variables {
                        for a in &config.affine_constants {
                            for b in &config.affine_constants {
                                check(LawInput::Affine { variable: v, a, b });
                            }
                        }
                    }
                }
            }
            tally.elapsed = started.elapsed();
            tally
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_law_list_gives_empty_report() {
        let config = SuiteConfig { laws: Vec::new(), ..SuiteConfig::default() };
        let report = run_suite(&config).unwrap();
        assert!(report.laws.is_empty());
    }

    #[test]
    fn rejects_large_domains() {
        let config = SuiteConfig { n_max: 4, ..SuiteConfig::default() };
        assert_eq!(run_suite(&config).unwrap_err(), Error::DomainTooLarge(4, 3));
        let config = SuiteConfig { n_max: 9, allow_large: true, ..SuiteConfig::default() };
        assert_eq!(run_suite(&config).unwrap_err(), Error::DomainTooLarge(9, 4));
    }

    #[test]
    fn small_sweep_counts() {
        let config = SuiteConfig {
            n_max: 2,
            seeds: Vec::new(),
            laws: vec![LawId::EmptySet, LawId::Complement, LawId::CondLowerUnion],
            ..SuiteConfig::default()
        };
        let report = run_suite(&config).unwrap();
        assert_eq!(report.spaces, 1 + 9);
        assert_eq!(report.laws[0].instances_checked, 10);
        assert_eq!(report.laws[1].instances_checked, 2 + 9 * 4);
        assert_eq!(report.laws[2].instances_checked, 8 + 9 * 64);
    }

    #[test]
    fn parallel_and_serial_agree() {
        let base = SuiteConfig { n_max: 2, ..SuiteConfig::default() };
        let serial = run_suite(&SuiteConfig { parallel: false, ..base.clone() }).unwrap();
        let parallel = run_suite(&base).unwrap();
        assert_eq!(serial.to_json(), parallel.to_json());
    }
}
