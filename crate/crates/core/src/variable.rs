//! Rough random variables: singleton masses, distribution functions,
//! expectation and variance, including the closed-form affine identities.
//!
//! Everything here is a weighted sum over the variable's levels `u_k`, with
//! weights `P̲(U = u_k)` or `P̄(U = u_k)`. Those weights need not sum to one:
//! `c = Σ P̲(U = u_k) <= 1 <= d = Σ P̄(U = u_k)`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::measure::{lower_prob, upper_prob, RoughPair};
use crate::rational::Rational;
use crate::space::{ApproximationSpace, Event};

/// Which component of a lower/upper pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Lower,
    Upper,
}

/// How [`RoughVariable::cdf`] accumulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CdfMode {
    /// Sum the singleton masses of all levels `<= u`. The upper component
    /// can exceed one.
    SingletonSum,
    /// Apply `P̲` and `P̄` to the event `{x : U(x) <= u}`.
    Event,
}

impl FromStr for CdfMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "singleton-sum" => Ok(CdfMode::SingletonSum),
            "event" => Ok(CdfMode::Event),
            other => Err(format!("unknown cdf mode `{other}` (expected singleton-sum or event)")),
        }
    }
}

/// One level of a variable with its singleton masses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingletonRow {
    pub level: Rational,
    pub lower: Rational,
    pub upper: Rational,
}

/// A constant piece of a step function, valid on `[from, next.from)`.
/// `from == None` means the piece starts at minus infinity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub from: Option<Rational>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseCdf {
    pub lower: Vec<Step>,
    pub upper: Vec<Step>,
}

#[derive(Debug, Clone)]
pub struct RoughVariable {
    space: ApproximationSpace,
    values: Vec<Rational>,
    levels: Vec<Rational>,
    preimages: Vec<Event>,
    lower_mass: Vec<Rational>,
    upper_mass: Vec<Rational>,
    moments: Moments,
}

#[derive(Debug, Clone)]
struct Moments {
    lower_total: Rational,
    upper_total: Rational,
    first: RoughPair,
    second: RoughPair,
}

/// Build a variable from `(label, value)` pairs covering every element.
pub fn build_variable<I, K>(space: &ApproximationSpace, values: I) -> Result<RoughVariable, Error>
where
    I: IntoIterator<Item = (K, Rational)>,
    K: AsRef<str>,
{
    let n = space.len();
    let mut slots: Vec<Option<Rational>> = vec![None; n];
    for (label, value) in values {
        let x = space.universe().index_of(label.as_ref())?;
        if slots[x].is_some() {
            return Err(Error::DuplicateElement(label.as_ref().to_string()));
        }
        slots[x] = Some(value);
    }
    let values = slots
        .into_iter()
        .enumerate()
        .map(|(x, v)| v.ok_or_else(|| Error::MissingValue(space.universe().label(x).to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    RoughVariable::from_values(space, values)
}

impl RoughVariable {
    /// `values[x]` is `U(x)`, indexed like the space's universe.
    pub fn from_values(space: &ApproximationSpace, values: Vec<Rational>) -> Result<Self, Error> {
        let n = space.len();
        if values.len() != n {
            return Err(Error::UniverseMismatch(n, values.len()));
        }
        let mut levels = values.clone();
        levels.sort();
        levels.dedup();

        let preimages: Vec<Event> = levels
            .iter()
            .map(|level| Event::from_indices(n, values.iter().enumerate().filter(|(_, v)| *v == level).map(|(x, _)| x)))
            .collect();
        let lower_mass = preimages.iter().map(|e| lower_prob(space, e)).collect::<Result<Vec<_>, _>>()?;
        let upper_mass = preimages.iter().map(|e| upper_prob(space, e)).collect::<Result<Vec<_>, _>>()?;

        let moments = Moments {
            lower_total: lower_mass.iter().sum(),
            upper_total: upper_mass.iter().sum(),
            first: weighted_sums(&levels, &lower_mass, &upper_mass, |u| u.clone()),
            second: weighted_sums(&levels, &lower_mass, &upper_mass, Rational::square),
        };
        Ok(RoughVariable { space: space.clone(), values, levels, preimages, lower_mass, upper_mass, moments })
    }

    /// `U(x) = x`-th label read as a number when possible, otherwise the
    /// 1-based index. On a universe labelled `1..=n` this is the identity.
    pub fn identity(space: &ApproximationSpace) -> Self {
        let values = space
            .universe()
            .labels()
            .iter()
            .enumerate()
            .map(|(i, label)| label.parse().unwrap_or_else(|_| Rational::from_integer(i as i64 + 1)))
            .collect();
        RoughVariable::from_values(space, values).expect("one value per element")
    }

    pub fn space(&self) -> &ApproximationSpace {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn levels(&self) -> &[Rational] {
        &self.levels
    }

    pub fn preimages(&self) -> &[Event] {
        &self.preimages
    }

    pub fn lower_mass(&self) -> &[Rational] {
        &self.lower_mass
    }

    pub fn upper_mass(&self) -> &[Rational] {
        &self.upper_mass
    }

    /// `c = Σ P̲(U = u_k)`.
    pub fn lower_total(&self) -> Rational {
        self.moments.lower_total.clone()
    }

    /// `d = Σ P̄(U = u_k)`.
    pub fn upper_total(&self) -> Rational {
        self.moments.upper_total.clone()
    }

    pub fn singleton_table(&self) -> Vec<SingletonRow> {
        self.levels
            .iter()
            .zip(&self.lower_mass)
            .zip(&self.upper_mass)
            .map(|((level, lower), upper)| SingletonRow {
                level: level.clone(),
                lower: lower.clone(),
                upper: upper.clone(),
            })
            .collect()
    }

    pub fn cdf(&self, u: &Rational, mode: CdfMode) -> RoughPair {
        let below = self.levels.iter().take_while(|level| *level <= u).count();
        match mode {
            CdfMode::SingletonSum => {
                RoughPair::new(self.lower_mass[..below].iter().sum(), self.upper_mass[..below].iter().sum())
            }
            CdfMode::Event => {
                let event = self.preimages[..below].iter().fold(self.space.empty(), |acc, e| acc | *e);
                RoughPair::new(
                    lower_prob(&self.space, &event).expect("same universe"),
                    upper_prob(&self.space, &event).expect("same universe"),
                )
            }
        }
    }

    /// Both components of the distribution function as step functions, with
    /// adjacent equal pieces merged.
    pub fn piecewise_cdf(&self, mode: CdfMode) -> PiecewiseCdf {
        let mut lower = vec![Step { from: None, value: Rational::zero() }];
        let mut upper = lower.clone();
        for level in &self.levels {
            let pair = self.cdf(level, mode);
            push_step(&mut lower, level, pair.lower);
            push_step(&mut upper, level, pair.upper);
        }
        PiecewiseCdf { lower, upper }
    }

    /// `(Σ u_k P̲(U = u_k), Σ u_k P̄(U = u_k))`.
    pub fn expectation(&self) -> RoughPair {
        self.moments.first.clone()
    }

    /// `(Σ u_k^k P̲(U = u_k), Σ u_k^k P̄(U = u_k))`; `k = 0` gives `(c, d)`.
    pub fn raw_moment(&self, k: u32) -> RoughPair {
        match k {
            1 => self.moments.first.clone(),
            2 => self.moments.second.clone(),
            _ => self.weighted(|u| u.pow(k)),
        }
    }

    /// `E̲(aU + b) = a E̲(U) + b c` and `Ē(aU + b) = a Ē(U) + b d`, over the
    /// original singleton masses.
    pub fn affine_expectation(&self, a: &Rational, b: &Rational) -> RoughPair {
        RoughPair::new(self.affine_expectation_at(Bound::Lower, a, b), self.affine_expectation_at(Bound::Upper, a, b))
    }

    /// One component of [`affine_expectation`](Self::affine_expectation).
    pub fn affine_expectation_at(&self, bound: Bound, a: &Rational, b: &Rational) -> Rational {
        let (e, total) = match bound {
            Bound::Lower => (&self.moments.first.lower, &self.moments.lower_total),
            Bound::Upper => (&self.moments.first.upper, &self.moments.upper_total),
        };
        a * e + b * total
    }

    /// `(Σ (a u_k + b) P̲(U = u_k), Σ (a u_k + b) P̄(U = u_k))`.
    pub fn affine_expectation_direct(&self, a: &Rational, b: &Rational) -> RoughPair {
        self.weighted(|u| a * u + b)
    }

    /// One component of [`affine_expectation_direct`](Self::affine_expectation_direct).
    pub fn affine_expectation_direct_at(&self, bound: Bound, a: &Rational, b: &Rational) -> Rational {
        let masses = match bound {
            Bound::Lower => &self.lower_mass,
            Bound::Upper => &self.upper_mass,
        };
        self.levels.iter().zip(masses).map(|(u, p)| (a * u + b) * p).sum()
    }

    /// Squared deviation about the matching expectation:
    /// `Σ (u_k - E̲(U))² P̲(U = u_k)` and `Σ (u_k - Ē(U))² P̄(U = u_k)`.
    pub fn variance_direct(&self) -> RoughPair {
        self.affine_variance_direct(&Rational::one(), &Rational::zero())
    }

    /// `V̲(U) = E̲(U²) - (2 - c) E̲(U)²`, and likewise with `d` for the upper
    /// component.
    pub fn variance_formula(&self) -> RoughPair {
        let e = self.expectation();
        let m2 = self.raw_moment(2);
        let two = Rational::from_integer(2);
        let closed = |m2: &Rational, e: &Rational, total: &Rational| m2 - &((&two - total) * e.square());
        RoughPair::new(
            closed(&m2.lower, &e.lower, &self.lower_total()),
            closed(&m2.upper, &e.upper, &self.upper_total()),
        )
    }

    /// `a² E̲(U²) - (2a - c) E̲(U)² + 2b (a - c) E̲(U) + b² c`, and likewise with
    /// `d`. Centred at `E̲(U)`, not at `E̲(aU + b)`.
    pub fn affine_variance_formula(&self, a: &Rational, b: &Rational) -> RoughPair {
        RoughPair::new(
            self.affine_variance_formula_at(Bound::Lower, a, b),
            self.affine_variance_formula_at(Bound::Upper, a, b),
        )
    }

    /// One component of [`affine_variance_formula`](Self::affine_variance_formula).
    pub fn affine_variance_formula_at(&self, bound: Bound, a: &Rational, b: &Rational) -> Rational {
        let (m2, e, total) = match bound {
            Bound::Lower => (&self.moments.second.lower, &self.moments.first.lower, &self.moments.lower_total),
            Bound::Upper => (&self.moments.second.upper, &self.moments.first.upper, &self.moments.upper_total),
        };
        let two = Rational::from_integer(2);
        a.square() * m2 - (&two * a - total) * e.square() + &two * b * (a - total) * e + b.square() * total
    }

    /// `Σ (a u_k + b - E̲(U))² P̲(U = u_k)` and `Σ (a u_k + b - Ē(U))² P̄(U = u_k)`.
    pub fn affine_variance_direct(&self, a: &Rational, b: &Rational) -> RoughPair {
        RoughPair::new(
            self.affine_variance_direct_at(Bound::Lower, a, b),
            self.affine_variance_direct_at(Bound::Upper, a, b),
        )
    }

    /// One component of [`affine_variance_direct`](Self::affine_variance_direct).
    pub fn affine_variance_direct_at(&self, bound: Bound, a: &Rational, b: &Rational) -> Rational {
        let (masses, centre) = match bound {
            Bound::Lower => (&self.lower_mass, &self.moments.first.lower),
            Bound::Upper => (&self.upper_mass, &self.moments.first.upper),
        };
        self.levels.iter().zip(masses).map(|(u, p)| (a * u + b - centre).square() * p).sum()
    }

    fn weighted(&self, f: impl Fn(&Rational) -> Rational) -> RoughPair {
        weighted_sums(&self.levels, &self.lower_mass, &self.upper_mass, f)
    }
}

fn weighted_sums(
    levels: &[Rational],
    lower_mass: &[Rational],
    upper_mass: &[Rational],
    f: impl Fn(&Rational) -> Rational,
) -> RoughPair {
    let mut lower = Rational::zero();
    let mut upper = Rational::zero();
    for ((u, pl), pu) in levels.iter().zip(lower_mass).zip(upper_mass) {
        let fu = f(u);
        lower = lower + &fu * pl;
        upper = upper + &fu * pu;
    }
    RoughPair::new(lower, upper)
}

fn push_step(steps: &mut Vec<Step>, at: &Rational, value: Rational) {
    if steps.last().map(|s| &s.value) != Some(&value) {
        steps.push(Step { from: Some(at.clone()), value });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::r;
    use crate::space::tests::example_space;
    use crate::space::{build_space, ProbabilityMeasure, SetValuedMap, Universe};
    use std::sync::Arc;

    fn die_identity_map() -> ApproximationSpace {
        ApproximationSpace::new(
            Arc::new(Universe::numbered(6).unwrap()),
            SetValuedMap::identity(6),
            ProbabilityMeasure::uniform(6),
        )
        .unwrap()
    }

    fn sixths(ns: &[i64]) -> Vec<Rational> {
        ns.iter().map(|&n| Rational::new(n, 6).unwrap()).collect()
    }

    fn parity(space: &ApproximationSpace) -> RoughVariable {
        let values = (1..=6).map(|x| r!(x % 2)).collect();
        RoughVariable::from_values(space, values).unwrap()
    }

    #[test]
    fn identity_variable_masses() {
        let u = RoughVariable::identity(&example_space());
        assert_eq!(u.levels(), &(1..=6).map(Rational::from_integer).collect::<Vec<_>>()[..]);
        assert_eq!(u.lower_mass(), &sixths(&[1, 0, 1, 1, 0, 0])[..]);
        assert_eq!(u.upper_mass(), &sixths(&[4, 1, 1, 1, 2, 2])[..]);
        assert_eq!(u.lower_total(), r!(1 / 2));
        assert_eq!(u.upper_total(), r!(11 / 6));
    }

    #[test]
    fn constant_variable() {
        let s = example_space();
        let u = RoughVariable::from_values(&s, vec![r!(5); 6]).unwrap();
        assert_eq!(u.singleton_table(), vec![SingletonRow { level: r!(5), lower: r!(1), upper: r!(1) }]);
        assert_eq!(u.raw_moment(3), RoughPair::new(r!(125), r!(125)));
        assert_eq!(u.variance_direct(), RoughPair::new(r!(0), r!(0)));
        assert_eq!(u.variance_formula(), RoughPair::new(r!(0), r!(0)));
    }

    #[test]
    fn parity_variable() {
        let s = example_space();
        let u = parity(&s);
        assert_eq!(u.levels(), &[r!(0), r!(1)]);
        // {2,4,6}: T⁺ = {4}, T⁻¹ = {2,4,5,6}; {1,3,5}: T⁺ = {1,3}, T⁻¹ = {1,2,3,5,6}
        assert_eq!(u.lower_mass(), &[r!(1 / 6), r!(2 / 6)]);
        assert_eq!(u.upper_mass(), &[r!(4 / 6), r!(5 / 6)]);
        assert_eq!(u.expectation(), RoughPair::new(r!(1 / 3), r!(5 / 6)));
        assert_eq!(u.variance_formula(), u.variance_direct());
    }

    #[test]
    fn build_variable_by_label() {
        let s = example_space();
        let u = build_variable(&s, (1..=6).map(|x| (x.to_string(), r!(x)))).unwrap();
        assert_eq!(u.expectation(), RoughVariable::identity(&s).expectation());
        assert_eq!(
            build_variable(&s, (1..=5).map(|x| (x.to_string(), r!(x)))).unwrap_err(),
            Error::MissingValue("6".into())
        );
        assert_eq!(build_variable(&s, [("9", r!(1))]).unwrap_err(), Error::UnknownLabel("9".into()));
    }

    #[test]
    fn non_injective_levels_are_merged() {
        let s = build_space(
            ["a", "b", "c"],
            [("a", vec!["a"]), ("b", vec!["b"]), ("c", vec!["c"])],
            None::<Vec<(&str, Rational)>>,
        )
        .unwrap();
        let u = RoughVariable::from_values(&s, vec![r!(2), r!(-1), r!(2)]).unwrap();
        assert_eq!(u.levels(), &[r!(-1), r!(2)]);
        assert_eq!(u.lower_mass(), &[r!(1 / 3), r!(2 / 3)]);
    }

    #[test]
    fn cdf_examples() {
        let u = RoughVariable::identity(&example_space());
        assert_eq!(u.cdf(&r!(2), CdfMode::SingletonSum), RoughPair::new(r!(1 / 6), r!(5 / 6)));
        assert_eq!(u.cdf(&r!(6), CdfMode::SingletonSum), RoughPair::new(r!(3 / 6), r!(11 / 6)));
        // T⁺({1,2}) = {1,2}, T⁻¹({1,2}) = {1,2,5,6}
        assert_eq!(u.cdf(&r!(2), CdfMode::Event), RoughPair::new(r!(2 / 6), r!(4 / 6)));
        for mode in [CdfMode::SingletonSum, CdfMode::Event] {
            assert_eq!(u.cdf(&r!(1 / 2), mode), RoughPair::new(r!(0), r!(0)));
        }
        assert_eq!(u.cdf(&r!(100), CdfMode::Event), RoughPair::new(r!(1), r!(1)));
    }

    #[test]
    fn piecewise_cdf_merges_flat_pieces() {
        let u = RoughVariable::identity(&example_space());
        let pw = u.piecewise_cdf(CdfMode::SingletonSum);
        let lower: Vec<_> = pw.lower.iter().map(|s| (s.from.clone(), s.value.clone())).collect();
        assert_eq!(
            lower,
            vec![(None, r!(0)), (Some(r!(1)), r!(1 / 6)), (Some(r!(3)), r!(2 / 6)), (Some(r!(4)), r!(3 / 6)),]
        );
        let upper: Vec<_> = pw.upper.iter().map(|s| s.value.clone()).collect();
        assert_eq!(upper, sixths(&[0, 4, 5, 6, 7, 9, 11]));
    }

    #[test]
    fn expectation_examples() {
        let u = RoughVariable::identity(&example_space());
        assert_eq!(u.expectation(), RoughPair::new(r!(4 / 3), r!(35 / 6)));
        assert_eq!(u.raw_moment(1), u.expectation());
        assert_eq!(u.raw_moment(2), RoughPair::new(r!(13 / 3), r!(155 / 6)));

        let die = RoughVariable::identity(&die_identity_map());
        assert_eq!(die.expectation(), RoughPair::new(r!(7 / 2), r!(7 / 2)));
        assert_eq!(die.variance_direct(), RoughPair::new(r!(35 / 12), r!(35 / 12)));
    }

    #[test]
    fn affine_expectation_examples() {
        let u = RoughVariable::identity(&example_space());
        assert_eq!(u.affine_expectation(&r!(2), &r!(3)).lower, r!(25 / 6));
        assert_eq!(u.affine_expectation(&r!(1), &r!(0)), u.expectation());
        assert_eq!(u.affine_expectation(&r!(0), &r!(1)).lower, r!(1 / 2));
        assert_eq!(u.affine_expectation(&r!(2), &r!(3)), u.affine_expectation_direct(&r!(2), &r!(3)));
    }

    #[test]
    fn variance_examples() {
        let u = RoughVariable::identity(&example_space());
        let expected = RoughPair::new(r!(5 / 3), r!(4355 / 216));
        assert_eq!(u.variance_direct(), expected);
        assert_eq!(u.variance_formula(), expected);
    }

    #[test]
    fn affine_variance_examples() {
        let u = RoughVariable::identity(&example_space());
        assert_eq!(u.affine_variance_formula(&r!(1), &r!(0)), u.variance_formula());
        // Σ (2u + 1 - 4/3)² / 6 over u in {1, 3, 4}
        assert_eq!(u.affine_variance_formula(&r!(2), &r!(1)).lower, r!(281 / 18));
        let e = u.expectation();
        assert_eq!(
            u.affine_variance_formula(&r!(0), &r!(0)),
            RoughPair::new(u.lower_total() * e.lower.square(), u.upper_total() * e.upper.square())
        );
        assert_eq!(u.affine_variance_formula(&r!(2), &r!(1)), u.affine_variance_direct(&r!(2), &r!(1)));
    }

    #[test]
    fn cdf_mode_parses() {
        assert_eq!("event".parse::<CdfMode>().unwrap(), CdfMode::Event);
        assert_eq!("singleton-sum".parse::<CdfMode>().unwrap(), CdfMode::SingletonSum);
        assert!("sum".parse::<CdfMode>().is_err());
    }
}
