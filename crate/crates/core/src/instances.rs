//! Seeded instance generators and the two worked elections.
//!
//! All generators draw from a ChaCha8 stream seeded with a `u64`, so the
//! same seed gives the same instance on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::orders::{CandidateSet, CostInstance, LinearOrder, PartialOrder, Profile};
use crate::set::{VertexSet, MAX_VERTICES};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sizes of consecutive clusters; elements are assigned to clusters in a
/// seeded random order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucketSpec {
    pub sizes: Vec<usize>,
    pub seed: u64,
}

/// Every element of a cluster precedes every element of each later
/// cluster; elements within a cluster are incomparable.
pub fn generate_bucket_order(spec: &BucketSpec) -> Result<PartialOrder> {
    if spec.sizes.contains(&0) {
        return Err(Error::input("bucket sizes must be positive"));
    }
    let n: usize = spec.sizes.iter().sum();
    if n == 0 {
        return Err(Error::input("at least one bucket is required"));
    }
    if n > MAX_VERTICES {
        return Err(Error::capability(format!(
            "at most {MAX_VERTICES} elements, got {n}"
        )));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng(spec.seed));
    let mut buckets = Vec::with_capacity(spec.sizes.len());
    let mut it = perm.into_iter();
    for &s in &spec.sizes {
        buckets.push(it.by_ref().take(s).collect::<Vec<_>>());
    }
    PartialOrder::from_buckets(n, &buckets)
}

/// A linear extension built by repeatedly picking a uniformly random
/// minimal element among those left.
pub fn random_extension(base: &PartialOrder, rng: &mut impl Rng) -> LinearOrder {
    let n = base.n();
    let mut rest = VertexSet::full(n);
    let mut perm = Vec::with_capacity(n);
    while !rest.is_empty() {
        let minimal: Vec<usize> = rest
            .iter()
            .filter(|&v| base.below(v).intersection(rest).is_empty())
            .collect();
        let v = minimal[rng.random_range(0..minimal.len())];
        perm.push(v);
        rest.remove(v);
    }
    LinearOrder::new(perm).expect("permutation")
}

/// `m` linear votes, each a random extension of `base` followed by `noise`
/// random adjacent transpositions. The votes need not extend `base`
/// afterwards.
pub fn generate_profile(base: &PartialOrder, m: usize, noise: usize, seed: u64) -> Result<Profile> {
    if m == 0 {
        return Err(Error::input("a profile needs at least one vote"));
    }
    let n = base.n();
    let mut r = rng(seed);
    let votes = (0..m)
        .map(|_| {
            let mut perm = random_extension(base, &mut r).as_slice().to_vec();
            if n >= 2 {
                for _ in 0..noise {
                    let i = r.random_range(0..n - 1);
                    perm.swap(i, i + 1);
                }
            }
            let vote = LinearOrder::new(perm)
                .expect("permutation")
                .to_partial_order();
            (vote, 1)
        })
        .collect();
    Profile::new(CandidateSet::alphabetic(n)?, votes)
}

/// A random partial order on `n` elements: a hidden random ranking, with
/// each of its pairs kept with probability `density`, then closed.
pub fn random_partial_order(n: usize, density: f64, rng: &mut impl Rng) -> PartialOrder {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    PartialOrder::from_pairs(n, pairs).expect("pairs follow one ranking")
}

/// A random weak order: a random ranking cut into buckets at random.
pub fn random_weak_order(n: usize, rng: &mut impl Rng) -> PartialOrder {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new()];
    for v in perm {
        if !buckets.last().expect("non-empty").is_empty() && rng.random_bool(0.5) {
            buckets.push(Vec::new());
        }
        buckets.last_mut().expect("non-empty").push(v);
    }
    PartialOrder::from_buckets(n, &buckets).expect("disjoint buckets")
}

/// A random partial vote: a weak order, a random partial order, or a
/// ranking, each with multiplicity 1 to 3.
pub fn random_partial_vote(n: usize, rng: &mut impl Rng) -> (PartialOrder, u64) {
    let vote = match rng.random_range(0..3) {
        0 => random_weak_order(n, rng),
        1 => {
            let density = rng.random_range(0.2..0.9);
            random_partial_order(n, density, rng)
        }
        _ => random_extension(&PartialOrder::antichain(n), rng).to_partial_order(),
    };
    (vote, rng.random_range(1..=3))
}

pub fn random_partial_profile(n: usize, m: usize, seed: u64) -> Result<Profile> {
    let mut r = rng(seed);
    let votes = (0..m).map(|_| random_partial_vote(n, &mut r)).collect();
    Profile::new(CandidateSet::alphabetic(n)?, votes)
}

/// Random base order with independent costs in `0..=max_cost` on every
/// ordered pair, or `1..=max_cost` when `positive`.
pub fn random_cost_instance(n: usize, max_cost: u64, positive: bool, seed: u64) -> CostInstance {
    let mut r = rng(seed);
    let density = r.random_range(0.0..0.8);
    let base = random_partial_order(n, density, &mut r);
    let lo = u64::from(positive);
    let cost = (0..n * n)
        .map(|i| {
            if i / n == i % n {
                0
            } else {
                r.random_range(lo..=max_cost.max(lo))
            }
        })
        .collect();
    CostInstance::new(base, cost, 0).expect("valid random instance")
}

fn letters(spec: &str) -> Vec<Vec<usize>> {
    spec.split('<')
        .map(|b| {
            b.split('=')
                .map(|c| (c.as_bytes()[0] - b'A') as usize)
                .collect()
        })
        .collect()
}

fn fixture(votes: &[(&str, u64)]) -> Profile {
    let votes = votes
        .iter()
        .map(|&(s, m)| {
            (
                PartialOrder::from_buckets(5, &letters(s)).expect("fixture"),
                m,
            )
        })
        .collect();
    Profile::new(CandidateSet::alphabetic(5).expect("five names"), votes).expect("fixture")
}

/// Ninety voters of five types over candidates A to E.
pub fn five_type_profile() -> Profile {
    fixture(&[
        ("A=B<C=D=E", 10),
        ("A=B<D<C=E", 10),
        ("A=B=C<D=E", 10),
        ("A=B=C=D<E", 40),
        ("A<B<C=D=E", 20),
    ])
}

/// Fifty voters each for two rankings that differ in one adjacent pair.
pub fn fifty_fifty_profile() -> Profile {
    fixture(&[("A<B<C<D<E", 50), ("A<B<D<C<E", 50)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::width::{cocomparability_graph, exact_pathwidth};

    #[test]
    fn bucket_examples() {
        let lin = generate_bucket_order(&BucketSpec {
            sizes: vec![1, 1, 1],
            seed: 3,
        })
        .unwrap();
        assert!(lin.is_linear());
        let anti = generate_bucket_order(&BucketSpec {
            sizes: vec![4],
            seed: 3,
        })
        .unwrap();
        assert_eq!(anti, PartialOrder::antichain(4));
        let two = generate_bucket_order(&BucketSpec {
            sizes: vec![2, 2],
            seed: 9,
        })
        .unwrap();
        assert_eq!(exact_pathwidth(&cocomparability_graph(&two)).unwrap(), 1);
        assert!(generate_bucket_order(&BucketSpec {
            sizes: vec![2, 0],
            seed: 0
        })
        .is_err());
    }

    #[test]
    fn noiseless_votes_extend_base() {
        let base = generate_bucket_order(&BucketSpec {
            sizes: vec![2, 3, 1],
            seed: 1,
        })
        .unwrap();
        let p = generate_profile(&base, 7, 0, 42).unwrap();
        assert_eq!(p.m(), 7);
        assert!(p.votes().iter().all(|(v, _)| base.is_subset_of(v)));
        assert!(base.is_subset_of(&crate::orders::unanimity_order(&p)));
    }

    #[test]
    fn seeds_are_stable() {
        let a = random_partial_profile(6, 4, 77).unwrap();
        let b = random_partial_profile(6, 4, 77).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            random_cost_instance(5, 4, true, 1),
            random_cost_instance(5, 4, true, 1)
        );
        assert!(random_cost_instance(5, 4, true, 1).is_pco());
    }

    #[test]
    fn fixtures() {
        let five = five_type_profile();
        // The listed multiplicities sum to 90.
        assert_eq!(five.m(), 90);
        assert_eq!(
            five.votes().iter().map(|v| v.1).collect::<Vec<_>>(),
            vec![10, 10, 10, 40, 20]
        );
        let ff = fifty_fifty_profile();
        assert_eq!(ff.votes().len(), 2);
        assert!(ff.votes().iter().all(|v| v.1 == 50 && v.0.is_linear()));
    }
}
