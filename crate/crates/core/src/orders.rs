//! Candidates, partial and linear orders, Kendall-Tau machinery and the
//! reduction from rank aggregation to ordering completion.
//!
//! Relations are stored as one [`VertexSet`] row per element, so closure,
//! intersection and distance computations work a machine word at a time.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::set::{VertexSet, MAX_VERTICES};

/// An ordered list of distinct, non-empty candidate labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl CandidateSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::input("candidate list is empty"));
        }
        if names.len() > MAX_VERTICES {
            return Err(Error::capability(format!(
                "{} candidates exceed the supported maximum of {MAX_VERTICES}",
                names.len()
            )));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::input("empty candidate label"));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate candidate label `{name}`")));
            }
        }
        Ok(CandidateSet { names, index })
    }

    /// Candidates labelled `A`, `B`, ... (`A`..`Z`, then `C26`, `C27`, ...).
    pub fn alphabetic(n: usize) -> Result<Self> {
        CandidateSet::new((0..n).map(|i| {
            if i < 26 {
                ((b'A' + i as u8) as char).to_string()
            } else {
                format!("C{i}")
            }
        }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Renders a linear order as `A<B<C`.
    pub fn format_ranking(&self, ranking: &LinearOrder) -> String {
        ranking
            .as_slice()
            .iter()
            .map(|&v| self.names[v].as_str())
            .collect::<Vec<_>>()
            .join("<")
    }
}

/// An arbitrary binary relation over `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    rows: Vec<VertexSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        assert!(
            n <= MAX_VERTICES,
            "relation over more than {MAX_VERTICES} elements"
        );
        Relation {
            n,
            rows: vec![VertexSet::EMPTY; n],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rel = Relation::empty(n);
        for (x, y) in pairs {
            rel.insert(x, y);
        }
        rel
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn row(&self, x: usize) -> VertexSet {
        self.rows[x]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| self.rows[x].iter().map(move |y| (x, y)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        Relation {
            n: self.n,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.union(*b))
                .collect(),
        }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// Smallest transitive superset of `rel` (Warshall over bit rows).
///
/// Cycles are preserved; callers that need a partial order must check
/// antisymmetry of the result.
pub fn transitive_closure(rel: &Relation) -> Relation {
    let mut rows = rel.rows.clone();
    for k in 0..rel.n {
        let rk = rows[k];
        for row in rows.iter_mut() {
            if row.contains(k) {
                *row = row.union(rk);
            }
        }
    }
    Relation { n: rel.n, rows }
}

/// A reflexive, antisymmetric, transitive relation; `x <= y` is stored in
/// `up[x]`. The transposed rows are cached in `down`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialOrder {
    n: usize,
    up: Vec<VertexSet>,
    down: Vec<VertexSet>,
}

impl PartialOrder {
    /// Validates an explicit relation as a partial order. The relation must
    /// already be reflexive and transitive.
    pub fn from_relation(rel: &Relation) -> Result<Self> {
        let n = rel.n;
        for x in 0..n {
            if !rel.contains(x, x) {
                return Err(Error::input(format!(
                    "relation is not reflexive at element {x}"
                )));
            }
        }
        let closed = transitive_closure(rel);
        if closed != *rel {
            return Err(Error::input("relation is not transitive"));
        }
        Self::from_closed(closed)
    }

    /// Builds the partial order generated by a set of strict pairs
    /// `x < y`. Fails if the pairs contain a cycle.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut rel = Relation::from_pairs(n, pairs);
        for x in 0..n {
            rel.insert(x, x);
        }
        Self::from_closed(transitive_closure(&rel))
    }

    fn from_closed(rel: Relation) -> Result<Self> {
        let n = rel.n;
        let mut down = vec![VertexSet::EMPTY; n];
        for x in 0..n {
            for y in rel.rows[x].iter() {
                if x != y && rel.rows[y].contains(x) {
                    return Err(Error::input(format!(
                        "order contains a cycle through elements {x} and {y}"
                    )));
                }
                down[y].insert(x);
            }
        }
        Ok(PartialOrder {
            n,
            up: rel.rows,
            down,
        })
    }

    /// Only reflexive pairs: every two distinct elements are incomparable.
    pub fn antichain(n: usize) -> Self {
        let up: Vec<_> = (0..n).map(VertexSet::singleton).collect();
        PartialOrder {
            n,
            down: up.clone(),
            up,
        }
    }

    /// Weak order from a chain of buckets: elements of an earlier bucket
    /// precede elements of every later bucket; elements sharing a bucket
    /// (and elements in no bucket) are incomparable.
    pub fn from_buckets(n: usize, buckets: &[Vec<usize>]) -> Result<Self> {
        let mut seen = VertexSet::EMPTY;
        let mut above = VertexSet::EMPTY;
        for b in buckets {
            for &v in b {
                if v >= n {
                    return Err(Error::input(format!("element {v} out of range")));
                }
                if seen.contains(v) {
                    return Err(Error::input(format!("element {v} appears twice")));
                }
                seen.insert(v);
            }
        }
        let mut up: Vec<VertexSet> = (0..n).map(VertexSet::singleton).collect();
        for b in buckets.iter().rev() {
            for &v in b {
                up[v] = up[v].union(above);
            }
            above = above.union(b.iter().copied().collect());
        }
        Self::from_closed(Relation { n, rows: up })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `x <= y`.
    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// `x < y`.
    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.up[x].contains(y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// `{y : x < y}`.
    #[inline]
    pub fn above(&self, x: usize) -> VertexSet {
        let mut s = self.up[x];
        s.remove(x);
        s
    }

    /// `{y : y < x}`.
    #[inline]
    pub fn below(&self, x: usize) -> VertexSet {
        let mut s = self.down[x];
        s.remove(x);
        s
    }

    /// Strict pairs `(x, y)` with `x < y`.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| self.above(x).iter().map(move |y| (x, y)))
    }

    pub fn strict_pair_count(&self) -> usize {
        (0..self.n).map(|x| self.above(x).len()).sum()
    }

    pub fn relation(&self) -> Relation {
        Relation {
            n: self.n,
            rows: self.up.clone(),
        }
    }

    pub fn is_linear(&self) -> bool {
        self.strict_pair_count() == self.n * self.n.saturating_sub(1) / 2
    }

    /// `self ⊆ other` as relations.
    pub fn is_subset_of(&self, other: &PartialOrder) -> bool {
        self.n == other.n && self.up.iter().zip(&other.up).all(|(a, b)| a.is_subset(*b))
    }

    /// Pairwise intersection; the intersection of partial orders is again a
    /// partial order.
    pub fn intersection(&self, other: &PartialOrder) -> PartialOrder {
        assert_eq!(self.n, other.n);
        let up = self
            .up
            .iter()
            .zip(&other.up)
            .map(|(a, b)| a.intersection(*b))
            .collect();
        let down = self
            .down
            .iter()
            .zip(&other.down)
            .map(|(a, b)| a.intersection(*b))
            .collect();
        PartialOrder {
            n: self.n,
            up,
            down,
        }
    }

    /// True when `ranking` is a linear extension of this order.
    pub fn is_extended_by(&self, ranking: &LinearOrder) -> bool {
        ranking.len() == self.n && self.strict_pairs().all(|(x, y)| ranking.before(x, y))
    }

    /// Cover (Hasse) pairs: `x < y` with nothing strictly between.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .filter(|&(x, y)| self.above(x).intersection(self.below(y)).is_empty())
            .collect()
    }

    /// If incomparability is an equivalence relation, returns the buckets of
    /// the weak order from bottom to top (members ascending).
    pub fn weak_order_buckets(&self) -> Option<Vec<Vec<usize>>> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (self.below(v).len(), v));
        let mut buckets: Vec<Vec<usize>> = Vec::new();
        for v in order {
            match buckets.last_mut() {
                Some(b) if !self.comparable(b[0], v) => b.push(v),
                _ => buckets.push(vec![v]),
            }
        }
        let rebuilt = PartialOrder::from_buckets(self.n, &buckets).ok()?;
        (rebuilt == *self).then_some(buckets)
    }
}

impl fmt::Debug for PartialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialOrder(n={}, ", self.n)?;
        f.debug_set().entries(self.strict_pairs()).finish()?;
        write!(f, ")")
    }
}

/// A permutation of `0..n`; position 0 holds the smallest element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearOrder {
    perm: Vec<usize>,
    pos: Vec<usize>,
}

impl LinearOrder {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in perm.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::input(format!("{perm:?} is not a permutation")));
            }
            pos[v] = i;
        }
        Ok(LinearOrder { perm, pos })
    }

    pub fn identity(n: usize) -> Self {
        LinearOrder {
            perm: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    pub fn reversed(&self) -> Self {
        let mut perm = self.perm.clone();
        perm.reverse();
        LinearOrder::new(perm).expect("reversal of a permutation")
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    /// `x` strictly before `y`.
    #[inline]
    pub fn before(&self, x: usize, y: usize) -> bool {
        self.pos[x] < self.pos[y]
    }

    pub fn to_partial_order(&self) -> PartialOrder {
        let n = self.len();
        let mut up = vec![VertexSet::EMPTY; n];
        let mut down = vec![VertexSet::EMPTY; n];
        let mut suffix = VertexSet::EMPTY;
        for &v in self.perm.iter().rev() {
            suffix.insert(v);
            up[v] = suffix;
        }
        let mut prefix = VertexSet::EMPTY;
        for &v in &self.perm {
            prefix.insert(v);
            down[v] = prefix;
        }
        PartialOrder { n, up, down }
    }
}

impl fmt::Debug for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.perm)
    }
}

/// A list of partial votes with positive integer multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    candidates: CandidateSet,
    votes: Vec<(PartialOrder, u64)>,
    total: u64,
}

impl Profile {
    pub fn new(candidates: CandidateSet, votes: Vec<(PartialOrder, u64)>) -> Result<Self> {
        let n = candidates.len();
        let mut total: u64 = 0;
        for (i, (vote, mult)) in votes.iter().enumerate() {
            if vote.n() != n {
                return Err(Error::input(format!(
                    "vote {} ranges over {} candidates, expected {n}",
                    i + 1,
                    vote.n()
                )));
            }
            if *mult == 0 {
                return Err(Error::input(format!(
                    "vote {} has multiplicity zero",
                    i + 1
                )));
            }
            total = total
                .checked_add(*mult)
                .ok_or_else(|| Error::capability("total vote multiplicity overflows"))?;
        }
        if total == 0 {
            return Err(Error::input("profile contains no votes"));
        }
        // Any Kemeny score is at most n^2 * m; keep that representable.
        (n as u64)
            .checked_mul(n as u64)
            .and_then(|nn| nn.checked_mul(total))
            .ok_or_else(|| Error::capability("n^2 * m exceeds the 64-bit score range"))?;
        Ok(Profile {
            candidates,
            votes,
            total,
        })
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn n(&self) -> usize {
        self.candidates.len()
    }

    pub fn votes(&self) -> &[(PartialOrder, u64)] {
        &self.votes
    }

    /// Total multiplicity.
    pub fn m(&self) -> u64 {
        self.total
    }

    pub fn all_votes_linear(&self) -> bool {
        self.votes.iter().all(|(v, _)| v.is_linear())
    }
}

/// A Completion-of-an-Ordering instance: extend `base` to a linear order
/// while paying `cost(x, y)` for every chosen pair `x` before `y` that is
/// not already in `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostInstance {
    base: PartialOrder,
    cost: Vec<u64>,
    budget: u64,
}

impl CostInstance {
    /// `cost` is row-major: `cost[x * n + y]` is the price of `x` before `y`.
    pub fn new(base: PartialOrder, cost: Vec<u64>, budget: u64) -> Result<Self> {
        let n = base.n();
        if cost.len() != n * n {
            return Err(Error::input(format!(
                "cost table has {} entries, expected {}",
                cost.len(),
                n * n
            )));
        }
        for x in 0..n {
            if cost[x * n + x] != 0 {
                return Err(Error::input(format!("cost({x},{x}) must be zero")));
            }
        }
        let mut total: u64 = 0;
        for &c in &cost {
            total = total
                .checked_add(c)
                .ok_or_else(|| Error::capability("sum of pair costs overflows 64 bits"))?;
        }
        Ok(CostInstance { base, cost, budget })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn base(&self) -> &PartialOrder {
        &self.base
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Raw table entry.
    pub fn cost(&self, x: usize, y: usize) -> u64 {
        self.cost[x * self.n() + y]
    }

    /// Price actually paid for placing `x` before `y`: pairs already in the
    /// base order are free.
    #[inline]
    pub fn charge(&self, x: usize, y: usize) -> u64 {
        if self.base.leq(x, y) {
            0
        } else {
            self.cost[x * self.n() + y]
        }
    }

    /// Positive completion: every incomparable pair is priced strictly
    /// positively in both directions.
    pub fn is_pco(&self) -> bool {
        let n = self.n();
        (0..n).all(|x| {
            (x + 1..n)
                .all(|y| self.base.comparable(x, y) || (self.cost(x, y) > 0 && self.cost(y, x) > 0))
        })
    }

    /// `Σ cost(x, y)` over pairs of `ranking` outside the base order.
    pub fn extension_cost(&self, ranking: &LinearOrder) -> u64 {
        let p = ranking.as_slice();
        let mut total = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                total += self.charge(p[i], p[j]);
            }
        }
        total
    }
}

fn check_same_size(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::input(format!("orders over {a} and {b} elements")));
    }
    Ok(())
}

/// Number of ordered pairs `(x, y)` with `x <_a y` and `y <_b x`.
pub fn kt_distance(a: &PartialOrder, b: &PartialOrder) -> Result<u64> {
    check_same_size(a.n(), b.n())?;
    Ok((0..a.n())
        .map(|x| a.above(x).intersection(b.below(x)).len() as u64)
        .sum())
}

/// Kendall-Tau distance between two rankings (inversion count).
pub fn kt_distance_linear(a: &LinearOrder, b: &LinearOrder) -> Result<u64> {
    check_same_size(a.len(), b.len())?;
    let p = a.as_slice();
    let mut d = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if b.before(p[j], p[i]) {
                d += 1;
            }
        }
    }
    Ok(d)
}

/// Sum over votes of multiplicity times the distance to `ranking`.
pub fn kemeny_score(profile: &Profile, ranking: &LinearOrder) -> Result<u64> {
    check_same_size(profile.n(), ranking.len())?;
    let r = ranking.to_partial_order();
    let mut score = 0;
    for (vote, mult) in profile.votes() {
        score += mult * kt_distance(&r, vote)?;
    }
    Ok(score)
}

/// Sum of distances over unordered pairs of distinct rankings.
pub fn diversity(rankings: &[LinearOrder]) -> Result<u64> {
    let mut total = 0;
    for i in 0..rankings.len() {
        for j in i + 1..rankings.len() {
            if rankings[i] == rankings[j] {
                return Err(Error::input(format!(
                    "rankings {} and {} are identical; diversity is defined on sets",
                    i + 1,
                    j + 1
                )));
            }
            total += kt_distance_linear(&rankings[i], &rankings[j])?;
        }
    }
    Ok(total)
}

/// Pairs ordered the same way by every vote.
pub fn unanimity_order(profile: &Profile) -> PartialOrder {
    let mut votes = profile.votes().iter().map(|(v, _)| v);
    let first = votes.next().expect("profiles are non-empty").clone();
    votes.fold(first, |acc, v| acc.intersection(v))
}

/// `cost(c, c')` counts (with multiplicity) the votes that place `c'`
/// before `c`; the base order is the unanimity order. The budget is set to
/// the trivial upper bound `m * n(n-1)/2`.
pub fn reduce_to_co(profile: &Profile) -> CostInstance {
    let n = profile.n();
    let mut cost = vec![0u64; n * n];
    for (vote, mult) in profile.votes() {
        for (lo, hi) in vote.strict_pairs() {
            cost[hi * n + lo] += mult;
        }
    }
    let base = unanimity_order(profile);
    let budget = profile.m() * (n * n.saturating_sub(1) / 2) as u64;
    CostInstance::new(base, cost, budget).expect("reduction produces a valid instance")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(v: &[usize]) -> LinearOrder {
        LinearOrder::new(v.to_vec()).unwrap()
    }

    // A=0 .. E=4
    fn weak(buckets: &[&[usize]]) -> PartialOrder {
        let b: Vec<Vec<usize>> = buckets.iter().map(|b| b.to_vec()).collect();
        PartialOrder::from_buckets(5, &b).unwrap()
    }

    #[test]
    fn closure_examples() {
        let r = Relation::from_pairs(3, [(0, 1), (1, 2)]);
        let c = transitive_closure(&r);
        assert!(c.contains(0, 2));
        assert_eq!(transitive_closure(&c), c);

        let cyc = transitive_closure(&Relation::from_pairs(2, [(0, 1), (1, 0)]));
        assert!(cyc.contains(0, 1) && cyc.contains(1, 0));
        assert!(PartialOrder::from_pairs(2, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn from_relation_rejects_non_orders() {
        let mut r = Relation::from_pairs(2, [(0, 1)]);
        assert!(PartialOrder::from_relation(&r).is_err());
        r.insert(0, 0);
        r.insert(1, 1);
        assert!(PartialOrder::from_relation(&r).is_ok());
        let mut t = Relation::from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]);
        assert!(PartialOrder::from_relation(&t).is_err());
        t.insert(0, 2);
        assert!(PartialOrder::from_relation(&t).is_ok());
    }

    #[test]
    fn kt_distance_examples() {
        let p = lin(&[0, 1, 2, 3, 4]);
        assert_eq!(
            kt_distance(&p.to_partial_order(), &p.to_partial_order()).unwrap(),
            0
        );
        let q = lin(&[0, 1, 3, 2, 4]);
        assert_eq!(
            kt_distance(&p.to_partial_order(), &q.to_partial_order()).unwrap(),
            1
        );
        let a = lin(&[0, 1, 2, 3]);
        assert_eq!(
            kt_distance(&a.to_partial_order(), &a.reversed().to_partial_order()).unwrap(),
            6
        );
        let type_two = weak(&[&[0, 1], &[3], &[2, 4]]);
        assert_eq!(kt_distance(&type_two, &p.to_partial_order()).unwrap(), 1);
        assert!(kt_distance(&PartialOrder::antichain(2), &PartialOrder::antichain(3)).is_err());
    }

    #[test]
    fn diversity_examples() {
        let p = lin(&[0, 1, 2, 3, 4]);
        assert_eq!(diversity(std::slice::from_ref(&p)).unwrap(), 0);
        assert_eq!(diversity(&[p.clone(), lin(&[0, 1, 3, 2, 4])]).unwrap(), 1);
        let a = lin(&[2, 0, 3, 1]);
        assert_eq!(diversity(&[a.clone(), a.reversed()]).unwrap(), 6);
        assert!(diversity(&[p.clone(), p]).is_err());
    }

    #[test]
    fn unanimity_examples() {
        let c = CandidateSet::alphabetic(3).unwrap();
        let v = lin(&[0, 1, 2]).to_partial_order();
        let same = Profile::new(c.clone(), vec![(v.clone(), 2), (v.clone(), 1)]).unwrap();
        assert_eq!(unanimity_order(&same), v);
        let rev = lin(&[2, 1, 0]).to_partial_order();
        let opposed = Profile::new(c, vec![(v, 1), (rev, 1)]).unwrap();
        assert_eq!(unanimity_order(&opposed), PartialOrder::antichain(3));
    }

    #[test]
    fn identical_linear_votes_reduce_to_indicator_costs() {
        let c = CandidateSet::alphabetic(4).unwrap();
        let v = lin(&[2, 0, 3, 1]);
        let prof = Profile::new(c, vec![(v.to_partial_order(), 7)]).unwrap();
        let inst = reduce_to_co(&prof);
        for x in 0..4 {
            for y in 0..4 {
                let expected = if x != y && v.before(y, x) { 7 } else { 0 };
                assert_eq!(inst.cost(x, y), expected);
            }
        }
        assert!(inst.is_pco());
        assert!(inst.base().is_linear());
    }

    #[test]
    fn weak_order_detection() {
        let w = weak(&[&[0, 1], &[3], &[2, 4]]);
        assert_eq!(
            w.weak_order_buckets(),
            Some(vec![vec![0, 1], vec![3], vec![2, 4]])
        );
        let not_weak = PartialOrder::from_pairs(3, [(0, 1)]).unwrap();
        assert_eq!(not_weak.weak_order_buckets(), None);
    }

    #[test]
    fn candidate_set_validation() {
        assert!(CandidateSet::new(["A", "A"]).is_err());
        assert!(CandidateSet::new(["A", ""]).is_err());
        assert!(CandidateSet::new(Vec::<String>::new()).is_err());
        assert!(matches!(
            CandidateSet::alphabetic(65),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn profile_rejects_zero_multiplicity() {
        let c = CandidateSet::alphabetic(2).unwrap();
        assert!(Profile::new(c.clone(), vec![(PartialOrder::antichain(2), 0)]).is_err());
        assert!(Profile::new(c, vec![]).is_err());
    }
}
