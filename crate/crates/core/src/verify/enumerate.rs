use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::rational::Rational;
use crate::space::{ApproximationSpace, Event, ProbabilityMeasure, SetValuedMap, Universe};
use crate::variable::RoughVariable;

/// Largest universe swept by default.
pub const EXHAUSTIVE_LIMIT: usize = 3;
/// Largest universe swept at all; `(2⁴ - 1)⁴ = 50625` maps.
pub const LARGE_LIMIT: usize = 4;

/// Which measures accompany each enumerated map. The uniform measure is
/// always first; then `per_seed` random measures for each seed in order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MeasurePlan {
    pub seeds: Vec<u64>,
    pub per_seed: usize,
}

impl MeasurePlan {
    pub fn uniform() -> Self {
        MeasurePlan::default()
    }

    pub fn uniform_plus_random(per_seed: usize, seeds: Vec<u64>) -> Self {
        MeasurePlan { seeds, per_seed }
    }

    pub fn measures_per_map(&self) -> usize {
        1 + self.seeds.len() * self.per_seed
    }
}

#[derive(Debug, Clone)]
pub struct EnumeratedSpace {
    /// Position of the map in enumeration order.
    pub map_index: usize,
    /// `uniform`, or `seed <s> #<j>`.
    pub measure: String,
    pub space: ApproximationSpace,
}

/// `(2ⁿ - 1)ⁿ`.
pub fn map_count(n: usize) -> usize {
    ((1usize << n) - 1).pow(n as u32)
}

/// Every `T : X -> P*(X)` on `n` elements, exactly once. Map `m` reads its
/// images off the base-`(2ⁿ - 1)` digits of `m`, least significant digit
/// first, each digit `k` standing for the image with bitmask `k + 1`.
pub fn enumerate_maps(n: usize) -> impl Iterator<Item = SetValuedMap> {
    let base = (1usize << n) - 1;
    let universe = Universe::numbered(n).expect("n >= 1");
    (0..map_count(n)).map(move |mut m| {
        let images = (0..n)
            .map(|_| {
                let digit = m % base;
                m /= base;
                Event::from_bits(n, digit as u64 + 1)
            })
            .collect();
        SetValuedMap::new(&universe, images).expect("images are non-empty")
    })
}

/// All maps on `n` elements with every measure of `plan`, ordered by map
/// index and then by measure. Fails for `n` outside `1..=EXHAUSTIVE_LIMIT`.
pub fn enumerate_spaces(n: usize, plan: &MeasurePlan) -> Result<impl Iterator<Item = EnumeratedSpace>, Error> {
    enumerate_spaces_with_limit(n, plan, EXHAUSTIVE_LIMIT)
}

/// Like [`enumerate_spaces`] with a caller-chosen bound, itself capped at
/// [`LARGE_LIMIT`].
pub fn enumerate_spaces_with_limit(
    n: usize,
    plan: &MeasurePlan,
    limit: usize,
) -> Result<impl Iterator<Item = EnumeratedSpace>, Error> {
    let limit = limit.min(LARGE_LIMIT);
    if n > limit {
        return Err(Error::DomainTooLarge(n, limit));
    }
    if n == 0 {
        return Err(Error::EmptyUniverse);
    }
    let universe = Arc::new(Universe::numbered(n)?);
    let plan = plan.clone();
    Ok(enumerate_maps(n).enumerate().flat_map(move |(map_index, map)| {
        let mut out = Vec::with_capacity(plan.measures_per_map());
        let uniform = ApproximationSpace::new(universe.clone(), map.clone(), ProbabilityMeasure::uniform(n))
            .expect("consistent sizes");
        out.push(EnumeratedSpace { map_index, measure: "uniform".into(), space: uniform });
        for &seed in &plan.seeds {
            for j in 0..plan.per_seed {
                let stream = (map_index * plan.per_seed + j) as u64;
                let measure = random_measure(n, seed, stream);
                let space = ApproximationSpace::new(universe.clone(), map.clone(), measure).expect("consistent sizes");
                out.push(EnumeratedSpace { map_index, measure: format!("seed {seed} #{j}"), space });
            }
        }
        out
    }))
}

/// `p(x) = r_x / Σ r` with `r_x` drawn from `0..=4`, redrawn if all zero.
/// Zero weights are allowed, so conditioning events with zero classical mass
/// occur in the sweep.
pub fn random_measure(n: usize, seed: u64, stream: u64) -> ProbabilityMeasure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    loop {
        let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
        let total: i64 = raw.iter().sum();
        if total == 0 {
            continue;
        }
        let weights = raw.iter().map(|&r| Rational::new(r, total).expect("total > 0")).collect();
        return ProbabilityMeasure::new(weights).expect("normalized by construction");
    }
}

/// Integer values in `-3..=3`.
pub fn random_variable(space: &ApproximationSpace, seed: u64, stream: u64) -> RoughVariable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let values = (0..space.len()).map(|_| Rational::from_integer(rng.gen_range(-3..=3))).collect();
    RoughVariable::from_values(space, values).expect("one value per element")
}

/// All set partitions of an `n`-element universe, blocks in order of their
/// smallest element. Generated from restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<Event>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<Event>>) {
        let n = labels.len();
        if i == n {
            let blocks = (0..max).map(|b| Event::from_indices(n, (0..n).filter(|&x| labels[x] == b))).collect();
            out.push(blocks);
            return;
        }
        for b in 0..=max {
            labels[i] = b;
            rec(i + 1, max.max(b + 1), labels, out);
        }
    }
    if n > 0 {
        rec(1, 1, &mut labels, &mut out);
    }
    out
}

/// Ordered pairs of non-empty events whose union is the whole universe,
/// including overlapping ones such as `(X, X)`.
pub fn two_block_covers(n: usize) -> Vec<(Event, Event)> {
    let full = Event::full(n);
    let events: Vec<Event> = Event::all(n).filter(|e| !e.is_empty()).collect();
    events.iter().flat_map(|&a| events.iter().map(move |&b| (a, b))).filter(|&(a, b)| (a | b) == full).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn map_counts() {
        assert_eq!(enumerate_maps(1).count(), 1);
        assert_eq!(enumerate_maps(2).count(), 9);
        assert_eq!(enumerate_maps(3).count(), 343);
        assert_eq!(map_count(4), 50625);
    }

    #[test]
    fn maps_are_distinct() {
        let seen: HashSet<Vec<u64>> =
            enumerate_maps(3).map(|m| m.images().iter().map(|e| e.bits()).collect()).collect();
        assert_eq!(seen.len(), 343);
    }

    #[test]
    fn single_element_space() {
        let spaces: Vec<_> = enumerate_spaces(1, &MeasurePlan::uniform()).unwrap().collect();
        assert_eq!(spaces.len(), 1);
        assert_eq!(spaces[0].space.map().image(0), Event::full(1));
    }

    #[test]
    fn measures_are_attached_in_order() {
        let plan = MeasurePlan::uniform_plus_random(1, vec![1, 2]);
        let spaces: Vec<_> = enumerate_spaces(2, &plan).unwrap().collect();
        assert_eq!(spaces.len(), 27);
        assert_eq!(spaces[0].measure, "uniform");
        assert_eq!(spaces[1].measure, "seed 1 #0");
        assert_eq!(spaces[2].measure, "seed 2 #0");
        assert_eq!(spaces[3].map_index, 1);
    }

    #[test]
    fn too_large_is_rejected() {
        assert_eq!(enumerate_spaces(4, &MeasurePlan::uniform()).err(), Some(Error::DomainTooLarge(4, 3)));
        assert!(enumerate_spaces_with_limit(4, &MeasurePlan::uniform(), 4).is_ok());
        assert!(enumerate_spaces_with_limit(5, &MeasurePlan::uniform(), 9).is_err());
    }

    #[test]
    fn random_measures_are_deterministic_and_normalized() {
        for stream in 0..50 {
            let m = random_measure(3, 7, stream);
            assert_eq!(m, random_measure(3, 7, stream));
            assert_eq!(m.weights().iter().sum::<Rational>(), Rational::one());
        }
        assert_ne!(
            (0..10).map(|s| random_measure(3, 1, s)).collect::<Vec<_>>(),
            (0..10).map(|s| random_measure(3, 2, s)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=5).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52]);
        for p in set_partitions(4) {
            let union = p.iter().fold(Event::empty(4), |acc, b| acc | *b);
            assert!(union.is_full());
            assert_eq!(p.iter().map(Event::count).sum::<usize>(), 4);
        }
    }

    #[test]
    fn covers_include_overlapping_pairs() {
        let covers = two_block_covers(2);
        assert!(covers.contains(&(Event::full(2), Event::full(2))));
        // (a, b) with a ∪ b = {0, 1} over non-empty subsets of a 2-set
        assert_eq!(covers.len(), 7);
    }
}
