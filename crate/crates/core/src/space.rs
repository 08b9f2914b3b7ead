//! Finite universes, events, set-valued maps and the two inverse
//! approximation operators.
//!
//! Events are bitmasks over element indices, so a universe holds at most
//! [`MAX_ELEMENTS`] elements. That is far beyond anything the exhaustive
//! checker can sweep anyway.

use std::collections::HashMap;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};
use std::sync::Arc;

use crate::error::Error;
use crate::rational::Rational;

pub const MAX_ELEMENTS: usize = 64;

/// Ordered, duplicate-free element labels. Index order is the label order
/// given at construction and is used for all output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(labels: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if labels.len() > MAX_ELEMENTS {
            return Err(Error::UniverseTooLarge(labels.len()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateElement(label.clone()));
            }
        }
        Ok(Universe { labels, index })
    }

    /// Universe labelled `1..=n`.
    pub fn numbered(n: usize) -> Result<Self, Error> {
        Universe::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, Error> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn event<I, S>(&self, labels: I) -> Result<Event, Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut bits = 0u64;
        for label in labels {
            bits |= 1 << self.index_of(label.as_ref())?;
        }
        Ok(Event::from_bits(self.len(), bits))
    }

    pub fn full(&self) -> Event {
        Event::full(self.len())
    }

    pub fn empty(&self) -> Event {
        Event::empty(self.len())
    }

    /// `{1,3,5}` in label order; the empty event prints as `{}`.
    pub fn format_event(&self, event: &Event) -> String {
        let parts: Vec<&str> = event.indices().map(|i| self.label(i)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// A subset of a universe of `size` elements.
///
/// Binary set operations panic if the operands come from universes of
/// different size; the space-level operations check this and return
/// [`Error::UniverseMismatch`] instead.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    bits: u64,
    size: u8,
}

fn mask(size: usize) -> u64 {
    if size >= 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

impl Event {
    pub fn empty(size: usize) -> Self {
        debug_assert!(size <= MAX_ELEMENTS);
        Event { bits: 0, size: size as u8 }
    }

    pub fn full(size: usize) -> Self {
        Event { bits: mask(size), size: size as u8 }
    }

    /// Bits beyond `size` are dropped.
    pub fn from_bits(size: usize, bits: u64) -> Self {
        Event { bits: bits & mask(size), size: size as u8 }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(size: usize, indices: I) -> Self {
        let bits = indices.into_iter().fold(0u64, |acc, i| {
            assert!(i < size, "index {i} outside universe of size {size}");
            acc | (1 << i)
        });
        Event::from_bits(size, bits)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn universe_size(&self) -> usize {
        self.size as usize
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.universe_size() && self.bits & (1 << index) != 0
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == mask(self.universe_size())
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.same_universe(other);
        self.bits & !other.bits == 0
    }

    pub fn intersects(&self, other: &Event) -> bool {
        self.same_universe(other);
        self.bits & other.bits != 0
    }

    pub fn complement(&self) -> Event {
        Event::from_bits(self.universe_size(), !self.bits)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe_size()).filter(move |&i| self.bits & (1 << i) != 0)
    }

    /// Every event over a universe of `size` elements, in bitmask order.
    pub fn all(size: usize) -> impl Iterator<Item = Event> + Clone {
        assert!(size < 64, "cannot enumerate 2^{size} events");
        (0..1u64 << size).map(move |bits| Event::from_bits(size, bits))
    }

    pub fn check_same_universe(&self, other: &Event) -> Result<(), Error> {
        if self.size == other.size {
            Ok(())
        } else {
            Err(Error::UniverseMismatch(self.universe_size(), other.universe_size()))
        }
    }

    fn same_universe(&self, other: &Event) {
        assert_eq!(self.size, other.size, "events from universes of different size");
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

impl BitOr for Event {
    type Output = Event;
    fn bitor(self, rhs: Event) -> Event {
        self.same_universe(&rhs);
        Event { bits: self.bits | rhs.bits, size: self.size }
    }
}

impl BitAnd for Event {
    type Output = Event;
    fn bitand(self, rhs: Event) -> Event {
        self.same_universe(&rhs);
        Event { bits: self.bits & rhs.bits, size: self.size }
    }
}

impl Sub for Event {
    type Output = Event;
    fn sub(self, rhs: Event) -> Event {
        self.same_universe(&rhs);
        Event { bits: self.bits & !rhs.bits, size: self.size }
    }
}

impl Not for Event {
    type Output = Event;
    fn not(self) -> Event {
        self.complement()
    }
}

/// `T : X -> P*(X)`; every image is non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetValuedMap {
    images: Vec<Event>,
}

impl SetValuedMap {
    /// `images[x]` is `T(x)`. Fails if an image is empty or sized for a
    /// different universe.
    pub fn new(universe: &Universe, images: Vec<Event>) -> Result<Self, Error> {
        let n = universe.len();
        if images.len() != n {
            return Err(Error::UniverseMismatch(n, images.len()));
        }
        for (x, image) in images.iter().enumerate() {
            if image.universe_size() != n {
                return Err(Error::UniverseMismatch(n, image.universe_size()));
            }
            if image.is_empty() {
                return Err(Error::EmptyImage(universe.label(x).to_string()));
            }
        }
        Ok(SetValuedMap { images })
    }

    /// `T(x) = {x}`.
    pub fn identity(n: usize) -> Self {
        SetValuedMap { images: (0..n).map(|x| Event::from_indices(n, [x])).collect() }
    }

    pub fn image(&self, x: usize) -> Event {
        self.images[x]
    }

    pub fn images(&self) -> &[Event] {
        &self.images
    }
}

/// Point masses `p(x)`, non-negative and summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityMeasure {
    weights: Vec<Rational>,
}

impl ProbabilityMeasure {
    pub fn new(weights: Vec<Rational>) -> Result<Self, Error> {
        if weights.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::BadMeasure(format!("negative weight {w}")));
        }
        let total: Rational = weights.iter().sum();
        if total != 1 {
            return Err(Error::BadMeasure(format!("weights sum to {total}, not 1")));
        }
        Ok(ProbabilityMeasure { weights })
    }

    pub fn uniform(n: usize) -> Self {
        let p = Rational::new(1, n as i64).expect("n >= 1");
        ProbabilityMeasure { weights: vec![p; n] }
    }

    pub fn weight(&self, x: usize) -> &Rational {
        &self.weights[x]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// `P(A) = sum of p(x) over x in A`.
    pub fn prob(&self, event: &Event) -> Rational {
        event.indices().map(|x| &self.weights[x]).sum()
    }
}

/// A finite universe with a set-valued map and a probability measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximationSpace {
    universe: Arc<Universe>,
    map: SetValuedMap,
    measure: ProbabilityMeasure,
}

impl ApproximationSpace {
    pub fn new(universe: Arc<Universe>, map: SetValuedMap, measure: ProbabilityMeasure) -> Result<Self, Error> {
        let n = universe.len();
        if map.images.len() != n {
            return Err(Error::UniverseMismatch(n, map.images.len()));
        }
        if measure.weights.len() != n {
            return Err(Error::UniverseMismatch(n, measure.weights.len()));
        }
        Ok(ApproximationSpace { universe, map, measure })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn shared_universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn map(&self) -> &SetValuedMap {
        &self.map
    }

    pub fn measure(&self) -> &ProbabilityMeasure {
        &self.measure
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn full(&self) -> Event {
        self.universe.full()
    }

    pub fn empty(&self) -> Event {
        self.universe.empty()
    }

    /// Same map and universe, different measure.
    pub fn with_measure(&self, measure: ProbabilityMeasure) -> Result<Self, Error> {
        ApproximationSpace::new(self.universe.clone(), self.map.clone(), measure)
    }

    pub fn check_event(&self, event: &Event) -> Result<(), Error> {
        if event.universe_size() == self.len() {
            Ok(())
        } else {
            Err(Error::UniverseMismatch(self.len(), event.universe_size()))
        }
    }

    /// Classical `P(A)`.
    pub fn prob(&self, event: &Event) -> Result<Rational, Error> {
        self.check_event(event)?;
        Ok(self.measure.prob(event))
    }

    /// `T⁺(A) = {x : T(x) ⊆ A}`.
    pub fn lower_inverse(&self, event: &Event) -> Result<Event, Error> {
        self.check_event(event)?;
        Ok(self.lower_inverse_unchecked(event))
    }

    /// `T⁻¹(A) = {x : T(x) ∩ A ≠ ∅}`.
    pub fn upper_inverse(&self, event: &Event) -> Result<Event, Error> {
        self.check_event(event)?;
        Ok(self.upper_inverse_unchecked(event))
    }

    pub(crate) fn lower_inverse_unchecked(&self, event: &Event) -> Event {
        let bits = self
            .map
            .images
            .iter()
            .enumerate()
            .filter(|(_, image)| image.bits & !event.bits == 0)
            .fold(0u64, |acc, (x, _)| acc | (1 << x));
        Event::from_bits(self.len(), bits)
    }

    pub(crate) fn upper_inverse_unchecked(&self, event: &Event) -> Event {
        let bits = self
            .map
            .images
            .iter()
            .enumerate()
            .filter(|(_, image)| image.bits & event.bits != 0)
            .fold(0u64, |acc, (x, _)| acc | (1 << x));
        Event::from_bits(self.len(), bits)
    }

    /// `x ∈ T(x)` for every `x`.
    pub fn is_reflexive(&self) -> bool {
        self.map.images.iter().enumerate().all(|(x, image)| image.contains(x))
    }

    /// `y ∈ T(x)` implies `T(y) ⊆ T(x)`.
    pub fn is_transitive(&self) -> bool {
        self.map.images.iter().all(|image| image.indices().all(|y| self.map.images[y].is_subset(image)))
    }

    /// `T⁺(A) = T⁻¹(A) = A`.
    pub fn is_exact(&self, event: &Event) -> Result<bool, Error> {
        self.check_event(event)?;
        Ok(self.lower_inverse_unchecked(event) == *event && self.upper_inverse_unchecked(event) == *event)
    }

    /// Parse a comma-separated label list; the empty string is the empty event.
    pub fn parse_event(&self, list: &str) -> Result<Event, Error> {
        let list = list.trim();
        if list.is_empty() {
            return Ok(self.empty());
        }
        self.universe.event(list.split(',').map(str::trim))
    }

    pub fn format_event(&self, event: &Event) -> String {
        self.universe.format_event(event)
    }
}

/// Validate labels, images and weights and assemble a space. Without weights
/// the uniform measure `p(x) = 1/n` is used.
pub fn build_space<E, M, K, V, I, W, WK>(
    elements: E,
    mapping: M,
    weights: Option<W>,
) -> Result<ApproximationSpace, Error>
where
    E: IntoIterator,
    E::Item: Into<String>,
    M: IntoIterator<Item = (K, V)>,
    K: AsRef<str>,
    V: IntoIterator<Item = I>,
    I: AsRef<str>,
    W: IntoIterator<Item = (WK, Rational)>,
    WK: AsRef<str>,
{
    let universe = Universe::new(elements)?;
    let n = universe.len();

    let mut images: Vec<Option<Event>> = vec![None; n];
    for (label, image) in mapping {
        let x = universe.index_of(label.as_ref())?;
        if images[x].is_some() {
            return Err(Error::DuplicateElement(label.as_ref().to_string()));
        }
        images[x] = Some(universe.event(image)?);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(x, image)| image.ok_or_else(|| Error::MissingImage(universe.label(x).to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let map = SetValuedMap::new(&universe, images)?;

    let measure = match weights {
        None => ProbabilityMeasure::uniform(n),
        Some(weights) => {
            let mut slots: Vec<Option<Rational>> = vec![None; n];
            for (label, w) in weights {
                let x = universe.index_of(label.as_ref())?;
                if slots[x].is_some() {
                    return Err(Error::DuplicateElement(label.as_ref().to_string()));
                }
                slots[x] = Some(w);
            }
            let weights = slots
                .into_iter()
                .enumerate()
                .map(|(x, w)| w.ok_or_else(|| Error::BadMeasure(format!("no weight for `{}`", universe.label(x)))))
                .collect::<Result<Vec<_>, _>>()?;
            ProbabilityMeasure::new(weights)?
        }
    };

    ApproximationSpace::new(Arc::new(universe), map, measure)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::r;

    pub(crate) fn example_space() -> ApproximationSpace {
        build_space(
            ["1", "2", "3", "4", "5", "6"],
            [
                ("1", vec!["1"]),
                ("2", vec!["1", "2"]),
                ("3", vec!["3"]),
                ("4", vec!["4"]),
                ("5", vec!["1", "5", "6"]),
                ("6", vec!["1", "5", "6"]),
            ],
            None::<Vec<(&str, Rational)>>,
        )
        .unwrap()
    }

    fn small(images: &[&[&str]], labels: &[&str]) -> ApproximationSpace {
        build_space(
            labels.iter().copied(),
            labels.iter().zip(images).map(|(l, im)| (*l, im.to_vec())),
            None::<Vec<(&str, Rational)>>,
        )
        .unwrap()
    }

    fn ev(space: &ApproximationSpace, list: &str) -> Event {
        space.parse_event(list).unwrap()
    }

    #[test]
    fn example_space_is_uniform() {
        let s = example_space();
        assert_eq!(s.len(), 6);
        assert!(s.measure().weights().iter().all(|w| *w == r!(1 / 6)));
    }

    #[test]
    fn singleton_space() {
        let s = small(&[&["a"]], &["a"]);
        assert_eq!(s.measure().weight(0), &r!(1));
    }

    #[test]
    fn build_errors() {
        let none = None::<Vec<(&str, Rational)>>;
        assert_eq!(
            build_space(["a", "b"], [("a", vec![]), ("b", vec!["b"])], none.clone()),
            Err(Error::EmptyImage("a".into()))
        );
        assert_eq!(
            build_space(Vec::<String>::new(), Vec::<(&str, Vec<&str>)>::new(), none.clone()),
            Err(Error::EmptyUniverse)
        );
        assert_eq!(build_space(["a", "a"], [("a", vec!["a"])], none.clone()), Err(Error::DuplicateElement("a".into())));
        assert_eq!(build_space(["a"], [("a", vec!["z"])], none.clone()), Err(Error::UnknownLabel("z".into())));
        assert_eq!(build_space(["a", "b"], [("a", vec!["a"])], none), Err(Error::MissingImage("b".into())));
        assert!(matches!(
            build_space(["a", "b"], [("a", vec!["a"]), ("b", vec!["b"])], Some([("a", r!(1)), ("b", r!(1))])),
            Err(Error::BadMeasure(_))
        ));
        assert!(matches!(
            build_space(["a", "b"], [("a", vec!["a"]), ("b", vec!["b"])], Some([("a", r!(2)), ("b", r!(-1))])),
            Err(Error::BadMeasure(_))
        ));
        assert_eq!(build_space(["a"], [("a", vec!["a"])], Some([("q", r!(1))])), Err(Error::UnknownLabel("q".into())));
    }

    #[test]
    fn lower_inverse_examples() {
        let s = example_space();
        assert_eq!(s.lower_inverse(&ev(&s, "1,3,5")).unwrap(), ev(&s, "1,3"));
        assert_eq!(s.lower_inverse(&s.full()).unwrap(), s.full());
        assert_eq!(s.lower_inverse(&s.empty()).unwrap(), s.empty());
        assert_eq!(s.lower_inverse(&ev(&s, "1,2")).unwrap(), ev(&s, "1,2"));
    }

    #[test]
    fn upper_inverse_examples() {
        let s = example_space();
        assert_eq!(s.upper_inverse(&ev(&s, "1,3,5")).unwrap(), ev(&s, "1,2,3,5,6"));
        assert_eq!(s.upper_inverse(&s.empty()).unwrap(), s.empty());
        assert_eq!(s.upper_inverse(&ev(&s, "5")).unwrap(), ev(&s, "5,6"));
    }

    #[test]
    fn mismatched_event_is_rejected() {
        let s = example_space();
        let other = Event::full(3);
        assert_eq!(s.lower_inverse(&other), Err(Error::UniverseMismatch(6, 3)));
        assert_eq!(s.upper_inverse(&other), Err(Error::UniverseMismatch(6, 3)));
        assert_eq!(s.is_exact(&other), Err(Error::UniverseMismatch(6, 3)));
    }

    #[test]
    fn structural_predicates() {
        let s = example_space();
        assert!(s.is_reflexive());
        assert!(s.is_transitive());

        let id = small(&[&["a"], &["b"]], &["a", "b"]);
        assert!(id.is_reflexive() && id.is_transitive());

        let not_refl = small(&[&["b"], &["b"]], &["a", "b"]);
        assert!(!not_refl.is_reflexive());

        let not_trans = small(&[&["a", "b"], &["b", "c"], &["c"]], &["a", "b", "c"]);
        assert!(!not_trans.is_transitive());
    }

    #[test]
    fn exactness() {
        let s = example_space();
        assert!(s.is_exact(&ev(&s, "3")).unwrap());
        assert!(!s.is_exact(&ev(&s, "1")).unwrap());
        assert_eq!(s.upper_inverse(&ev(&s, "1")).unwrap(), ev(&s, "1,2,5,6"));
        assert!(s.is_exact(&s.full()).unwrap());
        assert!(s.is_exact(&s.empty()).unwrap());
    }

    #[test]
    fn event_formatting_and_parsing() {
        let s = example_space();
        assert_eq!(s.format_event(&ev(&s, " 5, 1 ,3")), "{1,3,5}");
        assert_eq!(s.format_event(&s.empty()), "{}");
        assert_eq!(s.parse_event("7"), Err(Error::UnknownLabel("7".into())));
    }
}
