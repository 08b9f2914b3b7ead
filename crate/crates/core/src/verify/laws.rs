use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::document::SpaceDocument;
use crate::error::Error;
use crate::measure::ProbTable;
use crate::rational::Rational;
use crate::space::{ApproximationSpace, Event};
use crate::variable::{Bound, RoughVariable};

macro_rules! laws {
    ($($variant:ident => $code:literal, $arity:ident, $statement:literal;)*) => {
        /// Catalog of checkable laws, plus two negative controls that are
        /// known to be false and must produce counterexamples.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum LawId {
            $($variant,)*
        }

        impl LawId {
            pub const ALL: &'static [LawId] = &[$(LawId::$variant,)*];

            pub fn code(self) -> &'static str {
                match self {
                    $(LawId::$variant => $code,)*
                }
            }

            pub fn arity(self) -> Arity {
                match self {
                    $(LawId::$variant => Arity::$arity,)*
                }
            }

            pub fn statement(self) -> &'static str {
                match self {
                    $(LawId::$variant => $statement,)*
                }
            }
        }

        impl FromStr for LawId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Error> {
                match s {
                    $($code => Ok(LawId::$variant),)*
                    other => Err(Error::UnknownLaw(other.to_string())),
                }
            }
        }
    };
}

laws! {
    EmptySet => "P2.1.1", Nullary, "P̲(∅) = P̄(∅) = 0";
    WholeSpace => "P2.1.2", Nullary, "P̲(X) = P̄(X) = 1";
    UpperSubadditive => "P2.1.3", Pair, "P̄(A∪B) ≤ P̄(A) + P̄(B) − P̄(A∩B)";
    LowerSuperadditive => "P2.1.4", Pair, "P̲(A∪B) ≥ P̲(A) + P̲(B) − P̲(A∩B)";
    Complement => "P2.1.5", Single, "P̲(Aᶜ) = 1 − P̄(A)";
    Difference => "P2.1.6", Pair, "P̲(A−B) ≤ P̲(A) − P̲(A∩B)";
    LowerBelowUpper => "P2.1.7", Single, "P̲(A) ≤ P̄(A)";
    Monotone => "P2.1.8", Pair, "A ⊆ B ⇒ P̲(A) ≤ P̲(B) and P̄(A) ≤ P̄(B)";
    ReflexiveSandwich => "L2.3.1", Single, "T reflexive ⇒ P̲(A) ≤ P(A) ≤ P̄(A)";
    IteratedInverse => "L2.3.2", Single, "T reflexive and transitive ⇒ P̲(T⁺(A)) = P̲(A) and P̄(T⁻¹(A)) = P̄(A)";
    ExactCollapse => "L2.3.3", Single, "A exact ⇒ P̲(A) = P(A) = P̄(A)";
    CondSelf => "L2.6.1", Single, "P̲(A|A) = P̄(A|A) = 1";
    CondEmpty => "L2.6.2", Single, "P̲(∅|A) = P̄(∅|A) = 0";
    CondWhole => "L2.6.3", Single, "P̲(A|X) = P̲(A) and P̄(A|X) = P̄(A)";
    CondLowerComplement => "L2.6.4", Pair, "P̲(Aᶜ|B) ≤ 1 − P̲(A|B)";
    CondLowerUnion => "L2.6.5", Triple, "P̲(A∪B|C) ≥ P̲(A|C) + P̲(B|C) − P̲(A∩B|C)";
    CondUpperComplement => "L2.6.6", Pair, "P̄(Aᶜ|B) ≥ 1 − P̄(A|B)";
    CondUpperUnion => "L2.6.7", Triple, "P̄(A∪B|C) ≤ P̄(A|C) + P̄(B|C) − P̄(A∩B|C)";
    LowerTotal => "L2.6.8", Partition, "{Bᵢ} partition of X ⇒ P̲(A) ≥ Σ P̲(A|Bᵢ) P̲(Bᵢ)";
    UpperTotal => "L2.6.9", Partition, "{Bᵢ} partition of X ⇒ P̄(A) ≤ Σ P̄(A|Bᵢ) P̄(Bᵢ)";
    CondExactSandwich => "L2.6.10", Pair, "T transitive, B exact, P(B) ≠ 0 ⇒ P̲(A|B) ≤ P(A|B) ≤ P̄(A|B)";
    AffineLowerExpectation => "T2.14", Affine, "E̲(aU+b) = a E̲(U) + b c, 0 ≤ c ≤ 1";
    AffineUpperExpectation => "T2.15", Affine, "Ē(aU+b) = a Ē(U) + b d, 1 ≤ d ≤ n";
    LowerVariance => "T2.18", Variable, "V̲(U) = E̲(U²) − (2 − c) E̲(U)²";
    UpperVariance => "T2.19", Variable, "V̄(U) = Ē(U²) − (2 − d) Ē(U)²";
    AffineLowerVariance => "T2.20", Affine, "V̲(aU+b) = a² E̲(U²) − (2a − c) E̲(U)² + 2b(a − c) E̲(U) + b² c";
    AffineUpperVariance => "T2.21", Affine, "V̄(aU+b) = a² Ē(U²) − (2a − d) Ē(U)² + 2b(a − d) Ē(U) + b² d";
    Duality => "DUAL", Single, "T⁺(Aᶜ) = T⁻¹(A)ᶜ";
    Idempotent => "IDEMPOTENT", Single, "T reflexive and transitive ⇒ T⁺(T⁺(A)) = T⁺(A) and T⁻¹(T⁻¹(A)) = T⁻¹(A)";
    InverseMonotone => "MONOTONE", Pair, "A ⊆ B ⇒ T⁺(A) ⊆ T⁺(B) and T⁻¹(A) ⊆ T⁻¹(B)";
    Containment => "CONTAIN", Single, "T⁺(A) ⊆ T⁻¹(A)";
    LowerTotalCover => "L2.6.8-COVER", Cover, "B₁ ∪ B₂ = X ⇒ P̲(A) ≥ P̲(A|B₁) P̲(B₁) + P̲(A|B₂) P̲(B₂)";
    UpperSuperadditive => "NC-SUPERADD", Pair, "P̄(A∪B) ≥ P̄(A) + P̄(B)";
}

impl LawId {
    /// Laws that are expected to hold.
    pub fn catalog() -> impl Iterator<Item = LawId> {
        LawId::ALL.iter().copied().filter(|l| !l.is_control())
    }

    /// Negative controls: statements known to be false.
    pub fn controls() -> impl Iterator<Item = LawId> {
        LawId::ALL.iter().copied().filter(|l| l.is_control())
    }

    pub fn is_control(self) -> bool {
        matches!(self, LawId::LowerTotalCover | LawId::UpperSuperadditive)
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for LawId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

/// Shape of the inputs a law is quantified over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Nullary,
    Single,
    Pair,
    Triple,
    /// An event and a set partition of the universe.
    Partition,
    /// An event and a two-block cover of the universe.
    Cover,
    Variable,
    /// A variable and constants `a`, `b`.
    Affine,
}

#[derive(Debug, Clone)]
pub enum LawInput<'a> {
    None,
    Events(Vec<Event>),
    Blocks { event: Event, blocks: Vec<Event> },
    Variable(&'a RoughVariable),
    Affine { variable: &'a RoughVariable, a: &'a Rational, b: &'a Rational },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "subset")]
    Subset,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Subset => "⊆",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Number(Rational),
    /// An event, already rendered with the space's labels.
    Set(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(q) => q.fmt(f),
            Value::Set(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub law: LawId,
    /// Where in the sweep the instance came from; empty for direct calls.
    #[serde(skip_serializing_if = "String::is_empty")]
    pub origin: String,
    /// The space as a compact JSON document.
    pub space: String,
    pub inputs: Vec<String>,
    /// The sub-statement that failed.
    pub check: &'static str,
    pub relation: Relation,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// The law's hypotheses do not hold for this instance.
    Vacuous,
    Counterexample(Box<Counterexample>),
}

pub(crate) struct Failure {
    check: &'static str,
    relation: Relation,
    lhs: Value,
    rhs: Value,
}

type Check = Result<(), Box<Failure>>;

fn num(check: &'static str, relation: Relation, lhs: &Rational, rhs: &Rational) -> Check {
    let holds = match relation {
        Relation::Eq => lhs == rhs,
        Relation::Le => lhs <= rhs,
        Relation::Ge => lhs >= rhs,
        Relation::Subset => unreachable!("numeric subset"),
    };
    if holds {
        Ok(())
    } else {
        Err(Box::new(Failure { check, relation, lhs: Value::Number(lhs.clone()), rhs: Value::Number(rhs.clone()) }))
    }
}

/// Evaluate `law` on one space and input with exact arithmetic. Instances
/// whose hypotheses fail are reported as [`Outcome::Vacuous`].
pub fn check_law(law: LawId, space: &ApproximationSpace, input: &LawInput<'_>) -> Result<Outcome, Error> {
    let table = ProbTable::new(space);
    check_with_table(law, space, &table, input)
}

pub(crate) fn check_with_table(
    law: LawId,
    space: &ApproximationSpace,
    table: &ProbTable,
    input: &LawInput<'_>,
) -> Result<Outcome, Error> {
    Ok(match evaluate(law, space, table, input)? {
        Evaluation::Pass => Outcome::Pass,
        Evaluation::Vacuous => Outcome::Vacuous,
        Evaluation::Fail(f) => Outcome::Counterexample(Box::new(counterexample(law, space, input, *f))),
    })
}

/// Result of a check before any counterexample payload is built.
pub(crate) enum Evaluation {
    Pass,
    Vacuous,
    Fail(Box<Failure>),
}

pub(crate) fn counterexample(
    law: LawId,
    space: &ApproximationSpace,
    input: &LawInput<'_>,
    f: Failure,
) -> Counterexample {
    Counterexample {
        law,
        origin: String::new(),
        space: SpaceDocument::from_space(space).to_json(),
        inputs: describe_input(space, input),
        check: f.check,
        relation: f.relation,
        lhs: f.lhs,
        rhs: f.rhs,
    }
}

pub(crate) fn evaluate(
    law: LawId,
    space: &ApproximationSpace,
    table: &ProbTable,
    input: &LawInput<'_>,
) -> Result<Evaluation, Error> {
    let n = space.len();
    let bad = |why: &str| Error::BadLawInput(law.code().to_string(), why.to_string());
    let checked = match (law.arity(), input) {
        (Arity::Nullary, LawInput::None) => nullary(law, table, n),
        (Arity::Single, LawInput::Events(es)) if es.len() == 1 => {
            same_size(&es[..], n).ok_or_else(|| bad("event from another universe"))?;
            single(law, space, table, es[0])
        }
        (Arity::Pair, LawInput::Events(es)) if es.len() == 2 => {
            same_size(&es[..], n).ok_or_else(|| bad("event from another universe"))?;
            pair(law, space, table, es[0], es[1])
        }
        (Arity::Triple, LawInput::Events(es)) if es.len() == 3 => {
            same_size(&es[..], n).ok_or_else(|| bad("event from another universe"))?;
            triple(law, table, es[0], es[1], es[2])
        }
        (Arity::Partition | Arity::Cover, LawInput::Blocks { event, blocks }) => {
            same_size(blocks, n).and(same_size(&[*event], n)).ok_or_else(|| bad("event from another universe"))?;
            let union = blocks.iter().fold(Event::empty(n), |acc, b| acc | *b);
            if !union.is_full() {
                return Err(bad("blocks do not cover the universe"));
            }
            if law.arity() == Arity::Partition {
                let disjoint = blocks.iter().map(Event::count).sum::<usize>() == n;
                if !disjoint || blocks.iter().any(Event::is_empty) {
                    return Err(bad("blocks are not a partition"));
                }
            }
            blocks_law(law, table, *event, blocks)
        }
        (Arity::Variable, LawInput::Variable(variable)) => {
            if variable.space().len() != n {
                return Err(bad("variable over another universe"));
            }
            variable_law(law, variable, &Rational::one(), &Rational::zero())
        }
        (Arity::Affine, LawInput::Affine { variable, a, b }) => {
            if variable.space().len() != n {
                return Err(bad("variable over another universe"));
            }
            variable_law(law, variable, a, b)
        }
        _ => return Err(bad("wrong input shape")),
    };
    Ok(match checked {
        None => Evaluation::Vacuous,
        Some(Ok(())) => Evaluation::Pass,
        Some(Err(f)) => Evaluation::Fail(f),
    })
}

fn same_size(events: &[Event], n: usize) -> Option<()> {
    events.iter().all(|e| e.universe_size() == n).then_some(())
}

fn describe_input(space: &ApproximationSpace, input: &LawInput<'_>) -> Vec<String> {
    const NAMES: [&str; 3] = ["A", "B", "C"];
    match input {
        LawInput::None => Vec::new(),
        LawInput::Events(es) => {
            es.iter().zip(NAMES).map(|(e, name)| format!("{name}={}", space.format_event(e))).collect()
        }
        LawInput::Blocks { event, blocks } => {
            let mut out = vec![format!("A={}", space.format_event(event))];
            out.extend(blocks.iter().enumerate().map(|(i, b)| format!("B{}={}", i + 1, space.format_event(b))));
            out
        }
        LawInput::Variable(v) => vec![describe_variable(v)],
        LawInput::Affine { variable, a, b } => vec![describe_variable(variable), format!("a={a}"), format!("b={b}")],
    }
}

fn describe_variable(v: &RoughVariable) -> String {
    let values: Vec<String> = v.values().iter().map(Rational::to_string).collect();
    format!("U=[{}]", values.join(","))
}

type Guarded = Option<Check>;

fn nullary(law: LawId, t: &ProbTable, n: usize) -> Guarded {
    let (empty, full) = (Event::empty(n), Event::full(n));
    let (zero, one) = (Rational::zero(), Rational::one());
    Some(match law {
        LawId::EmptySet => num("P̲(∅) = 0", Relation::Eq, t.lower(empty), &zero)
            .and_then(|_| num("P̄(∅) = 0", Relation::Eq, t.upper(empty), &zero)),
        LawId::WholeSpace => num("P̲(X) = 1", Relation::Eq, t.lower(full), &one)
            .and_then(|_| num("P̄(X) = 1", Relation::Eq, t.upper(full), &one)),
        _ => unreachable!("{law} is not nullary"),
    })
}

fn single(law: LawId, space: &ApproximationSpace, t: &ProbTable, a: Event) -> Guarded {
    let n = t.universe_size();
    let one = Rational::one();
    let set = |e: Event| Value::Set(space.format_event(&e));
    let set_check = |check: &'static str, relation: Relation, lhs: Event, rhs: Event| -> Check {
        let holds = match relation {
            Relation::Eq => lhs == rhs,
            Relation::Subset => lhs.is_subset(&rhs),
            _ => unreachable!("set comparison"),
        };
        if holds {
            Ok(())
        } else {
            Err(Box::new(Failure { check, relation, lhs: set(lhs), rhs: set(rhs) }))
        }
    };
    Some(match law {
        LawId::Complement => num("P̲(Aᶜ) = 1 − P̄(A)", Relation::Eq, t.lower(!a), &(&one - t.upper(a))),
        LawId::LowerBelowUpper => num("P̲(A) ≤ P̄(A)", Relation::Le, t.lower(a), t.upper(a)),
        LawId::ReflexiveSandwich => {
            if !space.is_reflexive() {
                return None;
            }
            num("P̲(A) ≤ P(A)", Relation::Le, t.lower(a), t.prob(a))
                .and_then(|_| num("P(A) ≤ P̄(A)", Relation::Le, t.prob(a), t.upper(a)))
        }
        LawId::IteratedInverse => {
            if !(space.is_reflexive() && space.is_transitive()) {
                return None;
            }
            num("P̲(T⁺(A)) = P̲(A)", Relation::Eq, t.lower(t.lower_inverse(a)), t.lower(a))
                .and_then(|_| num("P̄(T⁻¹(A)) = P̄(A)", Relation::Eq, t.upper(t.upper_inverse(a)), t.upper(a)))
        }
        LawId::ExactCollapse => {
            if !t.is_exact(a) {
                return None;
            }
            num("P̲(A) = P(A)", Relation::Eq, t.lower(a), t.prob(a))
                .and_then(|_| num("P(A) = P̄(A)", Relation::Eq, t.prob(a), t.upper(a)))
        }
        LawId::CondSelf => {
            let lower = t.cond_lower(a, a);
            let upper = t.cond_upper(a, a);
            if lower.is_none() && upper.is_none() {
                return None;
            }
            lower
                .map_or(Ok(()), |q| num("P̲(A|A) = 1", Relation::Eq, &q, &one))
                .and_then(|_| upper.map_or(Ok(()), |q| num("P̄(A|A) = 1", Relation::Eq, &q, &one)))
        }
        LawId::CondEmpty => {
            let empty = Event::empty(n);
            let lower = t.cond_lower(empty, a);
            let upper = t.cond_upper(empty, a);
            if lower.is_none() && upper.is_none() {
                return None;
            }
            let zero = Rational::zero();
            lower
                .map_or(Ok(()), |q| num("P̲(∅|A) = 0", Relation::Eq, &q, &zero))
                .and_then(|_| upper.map_or(Ok(()), |q| num("P̄(∅|A) = 0", Relation::Eq, &q, &zero)))
        }
        LawId::CondWhole => {
            let full = Event::full(n);
            let lower = t.cond_lower(a, full)?;
            let upper = t.cond_upper(a, full)?;
            num("P̲(A|X) = P̲(A)", Relation::Eq, &lower, t.lower(a))
                .and_then(|_| num("P̄(A|X) = P̄(A)", Relation::Eq, &upper, t.upper(a)))
        }
        LawId::Duality => set_check("T⁺(Aᶜ) = T⁻¹(A)ᶜ", Relation::Eq, t.lower_inverse(!a), !t.upper_inverse(a)),
        LawId::Idempotent => {
            if !(space.is_reflexive() && space.is_transitive()) {
                return None;
            }
            let inner = t.lower_inverse(a);
            let outer = t.upper_inverse(a);
            set_check("T⁺(T⁺(A)) = T⁺(A)", Relation::Eq, t.lower_inverse(inner), inner)
                .and_then(|_| set_check("T⁻¹(T⁻¹(A)) = T⁻¹(A)", Relation::Eq, t.upper_inverse(outer), outer))
        }
        LawId::Containment => set_check("T⁺(A) ⊆ T⁻¹(A)", Relation::Subset, t.lower_inverse(a), t.upper_inverse(a)),
        _ => unreachable!("{law} does not take one event"),
    })
}

fn pair(law: LawId, space: &ApproximationSpace, t: &ProbTable, a: Event, b: Event) -> Guarded {
    let one = Rational::one();
    Some(match law {
        LawId::UpperSubadditive => num(
            "P̄(A∪B) ≤ P̄(A) + P̄(B) − P̄(A∩B)",
            Relation::Le,
            t.upper(a | b),
            &(t.upper(a) + t.upper(b) - t.upper(a & b)),
        ),
        LawId::LowerSuperadditive => num(
            "P̲(A∪B) ≥ P̲(A) + P̲(B) − P̲(A∩B)",
            Relation::Ge,
            t.lower(a | b),
            &(t.lower(a) + t.lower(b) - t.lower(a & b)),
        ),
        LawId::Difference => {
            num("P̲(A−B) ≤ P̲(A) − P̲(A∩B)", Relation::Le, t.lower(a - b), &(t.lower(a) - t.lower(a & b)))
        }
        LawId::Monotone => {
            if !a.is_subset(&b) {
                return None;
            }
            num("P̲(A) ≤ P̲(B)", Relation::Le, t.lower(a), t.lower(b))
                .and_then(|_| num("P̄(A) ≤ P̄(B)", Relation::Le, t.upper(a), t.upper(b)))
        }
        LawId::CondLowerComplement => {
            let given = t.cond_lower(a, b)?;
            let complement = t.cond_lower(!a, b)?;
            num("P̲(Aᶜ|B) ≤ 1 − P̲(A|B)", Relation::Le, &complement, &(&one - &given))
        }
        LawId::CondUpperComplement => {
            let given = t.cond_upper(a, b)?;
            let complement = t.cond_upper(!a, b)?;
            num("P̄(Aᶜ|B) ≥ 1 − P̄(A|B)", Relation::Ge, &complement, &(&one - &given))
        }
        LawId::CondExactSandwich => {
            if !(space.is_transitive() && t.is_exact(b)) || t.prob(b).is_zero() {
                return None;
            }
            let lower = t.cond_lower(a, b)?;
            let upper = t.cond_upper(a, b)?;
            let classical = t.prob(a & b) / t.prob(b);
            num("P̲(A|B) ≤ P(A|B)", Relation::Le, &lower, &classical)
                .and_then(|_| num("P(A|B) ≤ P̄(A|B)", Relation::Le, &classical, &upper))
        }
        LawId::InverseMonotone => {
            if !a.is_subset(&b) {
                return None;
            }
            let fail = |check, lhs: Event, rhs: Event| {
                Box::new(Failure {
                    check,
                    relation: Relation::Subset,
                    lhs: Value::Set(space.format_event(&lhs)),
                    rhs: Value::Set(space.format_event(&rhs)),
                })
            };
            let (la, lb) = (t.lower_inverse(a), t.lower_inverse(b));
            let (ua, ub) = (t.upper_inverse(a), t.upper_inverse(b));
            if !la.is_subset(&lb) {
                Err(fail("T⁺(A) ⊆ T⁺(B)", la, lb))
            } else if !ua.is_subset(&ub) {
                Err(fail("T⁻¹(A) ⊆ T⁻¹(B)", ua, ub))
            } else {
                Ok(())
            }
        }
        LawId::UpperSuperadditive => {
            num("P̄(A∪B) ≥ P̄(A) + P̄(B)", Relation::Ge, t.upper(a | b), &(t.upper(a) + t.upper(b)))
        }
        _ => unreachable!("{law} does not take two events"),
    })
}

fn triple(law: LawId, t: &ProbTable, a: Event, b: Event, c: Event) -> Guarded {
    Some(match law {
        LawId::CondLowerUnion => {
            let union = t.cond_lower(a | b, c)?;
            let rhs = t.cond_lower(a, c)? + t.cond_lower(b, c)? - t.cond_lower(a & b, c)?;
            num("P̲(A∪B|C) ≥ P̲(A|C) + P̲(B|C) − P̲(A∩B|C)", Relation::Ge, &union, &rhs)
        }
        LawId::CondUpperUnion => {
            let union = t.cond_upper(a | b, c)?;
            let rhs = t.cond_upper(a, c)? + t.cond_upper(b, c)? - t.cond_upper(a & b, c)?;
            num("P̄(A∪B|C) ≤ P̄(A|C) + P̄(B|C) − P̄(A∩B|C)", Relation::Le, &union, &rhs)
        }
        _ => unreachable!("{law} does not take three events"),
    })
}

fn blocks_law(law: LawId, t: &ProbTable, a: Event, blocks: &[Event]) -> Guarded {
    Some(match law {
        LawId::LowerTotal | LawId::LowerTotalCover => {
            let mut total = Rational::zero();
            for &b in blocks {
                total = total + t.cond_lower(a, b)? * t.lower(b);
            }
            num("P̲(A) ≥ Σ P̲(A|Bᵢ) P̲(Bᵢ)", Relation::Ge, t.lower(a), &total)
        }
        LawId::UpperTotal => {
            let mut total = Rational::zero();
            for &b in blocks {
                total = total + t.cond_upper(a, b)? * t.upper(b);
            }
            num("P̄(A) ≤ Σ P̄(A|Bᵢ) P̄(Bᵢ)", Relation::Le, t.upper(a), &total)
        }
        _ => unreachable!("{law} does not take blocks"),
    })
}

fn variable_law(law: LawId, v: &RoughVariable, a: &Rational, b: &Rational) -> Guarded {
    let (zero, one) = (Rational::zero(), Rational::one());
    Some(match law {
        LawId::AffineLowerExpectation => {
            let c = v.lower_total();
            num("0 ≤ c", Relation::Le, &zero, &c).and_then(|_| num("c ≤ 1", Relation::Le, &c, &one)).and_then(|_| {
                num(
                    "Σ (a uₖ + b) P̲(uₖ) = a E̲(U) + b c",
                    Relation::Eq,
                    &v.affine_expectation_direct_at(Bound::Lower, a, b),
                    &v.affine_expectation_at(Bound::Lower, a, b),
                )
            })
        }
        LawId::AffineUpperExpectation => {
            let d = v.upper_total();
            let levels = Rational::from_integer(v.levels().len() as i64);
            num("1 ≤ d", Relation::Le, &one, &d).and_then(|_| num("d ≤ n", Relation::Le, &d, &levels)).and_then(|_| {
                num(
                    "Σ (a uₖ + b) P̄(uₖ) = a Ē(U) + b d",
                    Relation::Eq,
                    &v.affine_expectation_direct_at(Bound::Upper, a, b),
                    &v.affine_expectation_at(Bound::Upper, a, b),
                )
            })
        }
        LawId::LowerVariance => num(
            "Σ (uₖ − E̲(U))² P̲(uₖ) = E̲(U²) − (2 − c) E̲(U)²",
            Relation::Eq,
            &v.variance_direct().lower,
            &v.variance_formula().lower,
        ),
        LawId::UpperVariance => num(
            "Σ (uₖ − Ē(U))² P̄(uₖ) = Ē(U²) − (2 − d) Ē(U)²",
            Relation::Eq,
            &v.variance_direct().upper,
            &v.variance_formula().upper,
        ),
        LawId::AffineLowerVariance => num(
            "Σ (a uₖ + b − E̲(U))² P̲(uₖ) = closed form",
            Relation::Eq,
            &v.affine_variance_direct_at(Bound::Lower, a, b),
            &v.affine_variance_formula_at(Bound::Lower, a, b),
        ),
        LawId::AffineUpperVariance => num(
            "Σ (a uₖ + b − Ē(U))² P̄(uₖ) = closed form",
            Relation::Eq,
            &v.affine_variance_direct_at(Bound::Upper, a, b),
            &v.affine_variance_formula_at(Bound::Upper, a, b),
        ),
        _ => unreachable!("{law} does not take a variable"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::r;
    use crate::space::build_space;
    use crate::space::tests::example_space;

    fn ev(space: &ApproximationSpace, list: &str) -> Event {
        space.parse_event(list).unwrap()
    }

    #[test]
    fn codes_round_trip() {
        for &law in LawId::ALL {
            assert_eq!(law.code().parse::<LawId>().unwrap(), law);
        }
        assert_eq!("P9.9".parse::<LawId>(), Err(Error::UnknownLaw("P9.9".into())));
        assert_eq!(LawId::catalog().count(), 31);
        assert_eq!(LawId::controls().count(), 2);
    }

    #[test]
    fn complement_law_on_example() {
        let s = example_space();
        let input = LawInput::Events(vec![ev(&s, "1,3,5")]);
        assert_eq!(check_law(LawId::Complement, &s, &input).unwrap(), Outcome::Pass);
        // P̲({2,4,6}) = 1/6 = 1 − 5/6
        assert_eq!(crate::lower_prob(&s, &ev(&s, "2,4,6")).unwrap(), r!(1 / 6));
    }

    #[test]
    fn reflexive_hypothesis_guard() {
        let s = build_space(["a", "b"], [("a", vec!["b"]), ("b", vec!["b"])], None::<Vec<(&str, Rational)>>).unwrap();
        let input = LawInput::Events(vec![ev(&s, "a")]);
        assert_eq!(check_law(LawId::ReflexiveSandwich, &s, &input).unwrap(), Outcome::Vacuous);
    }

    #[test]
    fn superadditivity_control_fails_on_example() {
        let s = example_space();
        let input = LawInput::Events(vec![ev(&s, "1"), ev(&s, "2")]);
        let Outcome::Counterexample(cx) = check_law(LawId::UpperSuperadditive, &s, &input).unwrap() else {
            panic!("expected a counterexample");
        };
        // P̄({1,2}) = 4/6 against P̄({1}) + P̄({2}) = 4/6 + 1/6
        assert_eq!(cx.lhs, Value::Number(r!(2 / 3)));
        assert_eq!(cx.rhs, Value::Number(r!(5 / 6)));
        assert_eq!(cx.inputs, vec!["A={1}", "B={2}"]);
    }

    #[test]
    fn cover_control_fails_on_doubled_whole_space() {
        let s = example_space();
        let full = s.full();
        let input = LawInput::Blocks { event: ev(&s, "1,3,5"), blocks: vec![full, full] };
        let Outcome::Counterexample(cx) = check_law(LawId::LowerTotalCover, &s, &input).unwrap() else {
            panic!("expected a counterexample");
        };
        assert_eq!(cx.lhs, Value::Number(r!(1 / 3)));
        assert_eq!(cx.rhs, Value::Number(r!(2 / 3)));
    }

    #[test]
    fn partition_law_rejects_overlapping_blocks() {
        let s = example_space();
        let full = s.full();
        let input = LawInput::Blocks { event: full, blocks: vec![full, full] };
        assert!(matches!(check_law(LawId::LowerTotal, &s, &input), Err(Error::BadLawInput(..))));
    }

    #[test]
    fn wrong_input_shape() {
        let s = example_space();
        assert!(matches!(check_law(LawId::Complement, &s, &LawInput::None), Err(Error::BadLawInput(..))));
        assert!(matches!(
            check_law(LawId::Complement, &s, &LawInput::Events(vec![Event::full(2)])),
            Err(Error::BadLawInput(..))
        ));
    }

    #[test]
    fn variable_laws_pass_on_example() {
        let s = example_space();
        let u = RoughVariable::identity(&s);
        for law in [LawId::LowerVariance, LawId::UpperVariance] {
            assert_eq!(check_law(law, &s, &LawInput::Variable(&u)).unwrap(), Outcome::Pass);
        }
        let (a, b) = (r!(2), r!(1));
        let input = LawInput::Affine { variable: &u, a: &a, b: &b };
        for law in [
            LawId::AffineLowerExpectation,
            LawId::AffineUpperExpectation,
            LawId::AffineLowerVariance,
            LawId::AffineUpperVariance,
        ] {
            assert_eq!(check_law(law, &s, &input).unwrap(), Outcome::Pass);
        }
    }
}
