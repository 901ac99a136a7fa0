//! Several near-optimal completions that differ from each other.
//!
//! The program runs `r` copies of the single-solution program in lockstep.
//! A state holds one triple per solution plus two kinds of registers: the
//! Kendall-Tau distance of every pair of solutions so far (capped at the
//! scatteredness threshold `s`) and the total pairwise distance (capped at
//! the diversity threshold `d`). Pairs of candidates are counted exactly
//! once, at the step where the later of the two is introduced.
//!
//! Slots whose cost cannot be completed within `opt + delta` are dropped
//! using the backward costs of the tail graph. States are stored with their
//! slots sorted, so permutations of the same solution set coincide, and
//! among states with equal slots and pair registers only the one with the
//! larger diversity register is kept.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::orders::{diversity, kt_distance_linear, CostInstance, LinearOrder};
use crate::set::VertexSet;
use crate::single::{
    dp_schedule, reconstruct_extension, triple_bound, DpStats, SolveOptions, TailGraph, Triple,
};
use crate::width::consistent_path_decomposition_with;

/// Largest number of solutions per query; slot permutations are packed
/// four bits per slot.
pub const MAX_SOLUTIONS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiverseMode {
    /// Is there a solution set meeting every threshold?
    Decide,
    /// Largest diversity among solution sets meeting the scatteredness
    /// threshold.
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiverseQuery {
    /// Number of solutions.
    pub r: usize,
    /// Allowed excess over the optimum per solution.
    pub delta: u64,
    /// Required total pairwise distance (ignored when maximizing).
    pub d: u64,
    /// Required distance between every two solutions.
    pub s: u64,
    /// Require the solutions to be pairwise different, which raises `s`
    /// to at least 1 when `r >= 2`.
    pub distinct: bool,
    pub mode: DiverseMode,
}

impl DiverseQuery {
    pub fn decide(r: usize, delta: u64, d: u64, s: u64) -> Self {
        DiverseQuery {
            r,
            delta,
            d,
            s,
            distinct: true,
            mode: DiverseMode::Decide,
        }
    }

    pub fn maximize(r: usize, delta: u64) -> Self {
        DiverseQuery {
            mode: DiverseMode::Maximize,
            ..Self::decide(r, delta, 0, 0)
        }
    }

    /// `r` pairwise different optimal solutions.
    pub fn distinct_optima(r: usize) -> Self {
        Self::decide(r, 0, 0, 1)
    }

    pub fn effective_s(&self) -> u64 {
        if self.distinct && self.r >= 2 {
            self.s.max(1)
        } else {
            self.s
        }
    }

    /// Cap of the diversity register for an instance on `n` elements.
    pub fn diversity_cap(&self, n: usize) -> u64 {
        match self.mode {
            DiverseMode::Decide => self.d,
            DiverseMode::Maximize => (self.r * n * n) as u64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::input("the number of solutions must be at least 1"));
        }
        if self.r > MAX_SOLUTIONS {
            return Err(Error::capability(format!(
                "at most {MAX_SOLUTIONS} solutions per query"
            )));
        }
        Ok(())
    }
}

/// Index of the unordered pair `{i, j}` (`i < j`) among `r` slots.
pub fn pair_index(r: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < r);
    i * (2 * r - i - 1) / 2 + (j - i - 1)
}

pub fn pair_count(r: usize) -> usize {
    r * r.saturating_sub(1) / 2
}

/// One slot per solution: tail index at the current position and cost.
pub type Slot = (u32, u64);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiverseState {
    pub slots: Vec<Slot>,
    /// Capped pairwise distances, indexed by [`pair_index`].
    pub pairs: Vec<u64>,
    /// Capped total distance.
    pub diversity: u64,
}

const ABSENT: u8 = u8::MAX;

fn positions(tail: &[usize]) -> [u8; 64] {
    let mut pos = [ABSENT; 64];
    for (k, &v) in tail.iter().enumerate() {
        pos[v] = k as u8;
    }
    pos
}

/// Pairs newly ordered differently by two solutions when a step
/// introduces the vertices of `insertion` (in that order) after bag
/// `prev_bag`. `tail_i` and `tail_j` are the two tails after the step.
///
/// Each introduced `v` is compared with the previous bag and the vertices
/// introduced before it. A vertex missing from a tail lies before all of
/// it. The result does not depend on the order of `insertion`.
pub fn scatteredness_increase(
    prev_bag: VertexSet,
    insertion: &[usize],
    tail_i: &[usize],
    tail_j: &[usize],
) -> u64 {
    let pi = positions(tail_i);
    let pj = positions(tail_j);
    let before = |pos: &[u8; 64], u: usize, v: usize| pos[u] == ABSENT || pos[u] < pos[v];
    let after = |pos: &[u8; 64], u: usize, v: usize| pos[u] != ABSENT && pos[v] < pos[u];
    let mut seen = prev_bag;
    let mut total = 0;
    for &v in insertion {
        for u in seen.iter() {
            if u == v {
                continue;
            }
            total += u64::from(before(&pi, u, v) && after(&pj, u, v));
            total += u64::from(before(&pj, u, v) && after(&pi, u, v));
        }
        seen.insert(v);
    }
    total
}

/// Sum of [`scatteredness_increase`] over all pairs of tails.
pub fn diversity_increase(prev_bag: VertexSet, insertion: &[usize], tails: &[&[usize]]) -> u64 {
    let mut total = 0;
    for i in 0..tails.len() {
        for j in i + 1..tails.len() {
            total += scatteredness_increase(prev_bag, insertion, tails[i], tails[j]);
        }
    }
    total
}

fn inversions(a: &[usize], b: &[usize]) -> u64 {
    let pb = positions(b);
    let mut c = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            c += u64::from(pb[a[j]] < pb[a[i]]);
        }
    }
    c
}

/// Which threshold a negative answer fell short of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailedConstraint {
    /// Not even `required` pairwise different solutions are within budget.
    TooFewSolutions { required: usize },
    /// Best achievable minimum pairwise distance.
    Scatteredness { best: u64, required: u64 },
    /// Best achievable total distance among sets meeting scatteredness.
    Diversity { best: u64, required: u64 },
}

#[derive(Clone, Debug)]
pub struct DiverseOutcome {
    pub found: bool,
    pub optimum: u64,
    /// Witness solutions, sorted.
    pub witnesses: Vec<LinearOrder>,
    /// Cost of each witness.
    pub costs: Vec<u64>,
    /// Exact total pairwise distance of the witnesses.
    pub diversity: u64,
    /// Exact minimum pairwise distance of the witnesses (0 for one witness).
    pub min_distance: u64,
    pub failure: Option<FailedConstraint>,
    pub stats: DpStats,
}

/// Prepared lockstep program for one instance and query.
pub struct DiverseSearch<'a> {
    graph: TailGraph<'a>,
    query: DiverseQuery,
    s_cap: u64,
    d_cap: u64,
    limit: u64,
    options: SolveOptions,
}

impl<'a> DiverseSearch<'a> {
    pub fn new(
        instance: &'a CostInstance,
        query: DiverseQuery,
        options: &SolveOptions,
    ) -> Result<Self> {
        query.validate()?;
        let cpd = consistent_path_decomposition_with(instance.base(), options.strategy)?;
        let graph = TailGraph::build(instance, dp_schedule(&cpd.decomposition), options)?;
        let limit = graph.optimum.saturating_add(query.delta);
        Ok(DiverseSearch {
            s_cap: query.effective_s(),
            d_cap: query.diversity_cap(instance.n()),
            graph,
            query,
            limit,
            options: *options,
        })
    }

    pub fn optimum(&self) -> u64 {
        self.graph.optimum
    }

    pub fn positions(&self) -> usize {
        self.graph.layers.len()
    }

    /// The triple a slot stands for at position `p`.
    pub fn triple(&self, p: usize, slot: Slot) -> Triple {
        self.graph.triple(p, slot.0, slot.1)
    }

    fn completable(&self, p: usize, slot: Slot) -> bool {
        slot.1 + self.graph.layers[p].togo[slot.0 as usize] <= self.limit
    }

    /// Starting states: every multiset of `r` first-bag triples that can
    /// still be completed within budget, with slots in ascending order.
    pub fn initial_states(&self) -> Vec<DiverseState> {
        let layer = &self.graph.layers[0];
        let eligible: Vec<Slot> = (0..layer.tails.len() as u32)
            .map(|i| (i, layer.best[i as usize]))
            .filter(|&s| self.completable(0, s))
            .collect();
        let r = self.query.r;
        let mut out = Vec::new();
        let mut pick = vec![0usize; r];
        if eligible.is_empty() {
            return out;
        }
        loop {
            let slots: Vec<Slot> = pick.iter().map(|&k| eligible[k]).collect();
            let mut pairs = vec![0; pair_count(r)];
            let mut div = 0u64;
            for i in 0..r {
                for j in i + 1..r {
                    let x = inversions(
                        &layer.tails[slots[i].0 as usize],
                        &layer.tails[slots[j].0 as usize],
                    );
                    pairs[pair_index(r, i, j)] = x.min(self.s_cap);
                    div += x;
                }
            }
            out.push(DiverseState {
                slots,
                pairs,
                diversity: div.min(self.d_cap),
            });
            // Next nondecreasing index tuple.
            let Some(k) = (0..r).rev().find(|&k| pick[k] + 1 < eligible.len()) else {
                break;
            };
            let v = pick[k] + 1;
            for x in &mut pick[k..] {
                *x = v;
            }
        }
        out
    }

    /// Every state at position `p + 1` reachable from `state` at `p`, in
    /// slot order (not canonicalised).
    pub fn tuple_successors(&self, p: usize, state: &DiverseState) -> Vec<DiverseState> {
        let mut cache = HashMap::new();
        let mut out = Vec::new();
        self.successors_into(p, state, &mut cache, |s| out.push(s));
        out
    }

    fn successors_into(
        &self,
        p: usize,
        state: &DiverseState,
        cache: &mut HashMap<(u32, u32), u64>,
        mut emit: impl FnMut(DiverseState),
    ) {
        let r = self.query.r;
        let layer = &self.graph.layers[p];
        let next = &self.graph.layers[p + 1];
        let options: Vec<Vec<Slot>> = state
            .slots
            .iter()
            .map(|&(k, c)| {
                layer.edges[k as usize]
                    .iter()
                    .map(|&(j, inc)| (j, c + inc))
                    .filter(|&s| self.completable(p + 1, s))
                    .collect()
            })
            .collect();
        if options.iter().any(|o| o.is_empty()) {
            return;
        }
        let schedule = &self.graph.schedule;
        let prev_bag = schedule.bag(p);
        let insertion: Vec<usize> = schedule.introduced(p + 1).iter().collect();
        let mut choice = vec![0usize; r];
        loop {
            let slots: Vec<Slot> = (0..r).map(|i| options[i][choice[i]]).collect();
            let mut pairs = state.pairs.clone();
            let mut div = state.diversity;
            if !insertion.is_empty() {
                for i in 0..r {
                    for j in i + 1..r {
                        let (a, b) = (slots[i].0, slots[j].0);
                        let inc = *cache.entry((a.min(b), a.max(b))).or_insert_with(|| {
                            scatteredness_increase(
                                prev_bag,
                                &insertion,
                                &next.tails[a as usize],
                                &next.tails[b as usize],
                            )
                        });
                        let x = &mut pairs[pair_index(r, i, j)];
                        *x = (*x + inc).min(self.s_cap);
                        div = div.saturating_add(inc);
                    }
                }
            }
            emit(DiverseState {
                slots,
                pairs,
                diversity: div.min(self.d_cap),
            });
            let Some(k) = (0..r).rev().find(|&k| choice[k] + 1 < options[k].len()) else {
                break;
            };
            choice[k] += 1;
            for x in &mut choice[k + 1..] {
                *x = 0;
            }
        }
    }

    fn satisfied(&self, state: &DiverseState) -> bool {
        state.pairs.iter().all(|&x| x >= self.s_cap)
            && (self.query.mode == DiverseMode::Maximize || state.diversity >= self.query.d)
    }

    fn tuple_bound(&self) -> f64 {
        let r = self.query.r as i32;
        let t = triple_bound(self.query.delta, self.graph.schedule.width());
        t.powi(r)
            * (self.s_cap as f64 + 1.0).powi(pair_count(self.query.r) as i32)
            * (self.d_cap as f64 + 1.0)
    }

    /// Runs the program to the end, or until a satisfying state appears
    /// when deciding.
    pub fn run(self) -> Result<DiverseOutcome> {
        let r = self.query.r;
        let q = self.positions();
        let mut stats = self.graph.stats(self.query.delta);
        stats.max_triples = 0;
        stats.triple_bound_violations = 0;
        let tbound = triple_bound(self.query.delta, stats.width);
        let ubound = self.tuple_bound();

        let mut layers: Vec<Vec<DiverseState>> = Vec::with_capacity(q);
        let mut back: Vec<Vec<(u32, u64)>> = Vec::with_capacity(q);
        let record = |states: &[DiverseState], stats: &mut DpStats| {
            let mut distinct: Vec<Slot> = states
                .iter()
                .flat_map(|s| s.slots.iter().copied())
                .collect();
            distinct.sort_unstable();
            distinct.dedup();
            stats.max_triples = stats.max_triples.max(distinct.len());
            stats.triple_bound_violations += usize::from(distinct.len() as f64 > tbound);
            stats.max_tuples = stats.max_tuples.max(states.len());
            stats.tuple_bound_violations += usize::from(states.len() as f64 > ubound);
        };

        let first = self.initial_states();
        let mut hit = if self.query.mode == DiverseMode::Decide {
            first.iter().position(|s| self.satisfied(s)).map(|i| (0, i))
        } else {
            None
        };
        back.push(vec![(u32::MAX, identity_perm(r)); first.len()]);
        record(&first, &mut stats);
        layers.push(first);

        let mut p = 0;
        while hit.is_none() && p + 1 < q {
            self.options.check_deadline()?;
            let mut index: HashMap<(Vec<Slot>, Vec<u64>), u32> = HashMap::new();
            let mut states: Vec<DiverseState> = Vec::new();
            let mut ptrs: Vec<(u32, u64)> = Vec::new();
            let mut cache = HashMap::new();
            for (from, state) in layers[p].iter().enumerate() {
                if from % 1024 == 1023 {
                    self.options.check_deadline()?;
                }
                self.successors_into(p, state, &mut cache, |raw| {
                    let (canon, perm) = canonicalize(raw);
                    let key = (canon.slots.clone(), canon.pairs.clone());
                    match index.get(&key) {
                        Some(&k) => {
                            if canon.diversity > states[k as usize].diversity {
                                states[k as usize].diversity = canon.diversity;
                                ptrs[k as usize] = (from as u32, perm);
                            }
                        }
                        None => {
                            index.insert(key, states.len() as u32);
                            states.push(canon);
                            ptrs.push((from as u32, perm));
                        }
                    }
                });
            }
            if self.query.mode == DiverseMode::Decide {
                hit = states
                    .iter()
                    .position(|s| self.satisfied(s))
                    .map(|i| (p + 1, i));
            }
            record(&states, &mut stats);
            layers.push(states);
            back.push(ptrs);
            p += 1;
        }
        debug_assert_eq!(
            stats.triple_bound_violations, 0,
            "triple count bound exceeded"
        );
        debug_assert_eq!(
            stats.tuple_bound_violations, 0,
            "tuple count bound exceeded"
        );

        let pick = match self.query.mode {
            DiverseMode::Decide => hit,
            DiverseMode::Maximize => {
                let last = &layers[q - 1];
                let mut best: Option<usize> = None;
                for (i, s) in last.iter().enumerate() {
                    if self.satisfied(s) && best.is_none_or(|b| s.diversity > last[b].diversity) {
                        best = Some(i);
                    }
                }
                best.map(|i| (q - 1, i))
            }
        };
        let Some((at, idx)) = pick else {
            return Ok(DiverseOutcome {
                found: false,
                optimum: self.graph.optimum,
                witnesses: Vec::new(),
                costs: Vec::new(),
                diversity: 0,
                min_distance: 0,
                failure: Some(self.explain(&layers[q - 1])),
                stats,
            });
        };

        // Walk the back pointers to the first position, following each
        // solution's slot through the canonicalising permutations.
        let mut keys: Vec<Vec<Slot>> = vec![Vec::with_capacity(at + 1); r];
        let mut slot_of: Vec<usize> = (0..r).collect();
        let mut cur = idx;
        for t in (0..=at).rev() {
            let state = &layers[t][cur];
            for i in 0..r {
                keys[i].push(state.slots[slot_of[i]]);
            }
            let (pred, perm) = back[t][cur];
            for s in &mut slot_of {
                *s = perm_get(perm, *s);
            }
            cur = pred as usize;
        }
        let mut solved: Vec<(LinearOrder, u64)> = Vec::with_capacity(r);
        for mut chain_keys in keys {
            chain_keys.reverse();
            let (end, end_cost) = chain_keys[at];
            let rest = self.graph.complete_from(at, end);
            let total = end_cost + self.graph.layers[at].togo[end as usize];
            let mut chain: Vec<Triple> = chain_keys
                .iter()
                .enumerate()
                .map(|(t, &s)| self.triple(t, s))
                .collect();
            chain.extend(
                rest.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, &j)| self.graph.triple(at + k, j, total)),
            );
            let ranking = reconstruct_extension(&chain, self.graph.instance.base())?;
            let cost = self.graph.instance.extension_cost(&ranking);
            if cost != total || cost > self.limit {
                return Err(Error::internal(format!(
                    "witness costs {cost}, program reported {total}"
                )));
            }
            solved.push((ranking, cost));
        }
        solved.sort();
        let (witnesses, costs): (Vec<_>, Vec<_>) = solved.into_iter().unzip();
        let exact_div = diversity_multiset(&witnesses)?;
        let mut min_distance = if r >= 2 { u64::MAX } else { 0 };
        for i in 0..r {
            for j in i + 1..r {
                min_distance = min_distance.min(kt_distance_linear(&witnesses[i], &witnesses[j])?);
            }
        }
        let state = &layers[at][idx];
        let reg_min = state.pairs.iter().copied().min().unwrap_or(0);
        let register_ok = |reg: u64, exact: u64, cap: u64, at_end: bool| {
            if reg >= cap {
                exact >= cap
            } else if at_end {
                exact == reg
            } else {
                exact >= reg
            }
        };
        let at_end = at == q - 1;
        if !register_ok(state.diversity, exact_div, self.d_cap, at_end)
            || !register_ok(reg_min, min_distance, self.s_cap, at_end)
        {
            return Err(Error::internal(format!(
                "registers (min {reg_min}, total {}) disagree with witnesses (min {min_distance}, total {exact_div})",
                state.diversity
            )));
        }
        Ok(DiverseOutcome {
            found: true,
            optimum: self.graph.optimum,
            witnesses,
            costs,
            diversity: exact_div,
            min_distance,
            failure: None,
            stats,
        })
    }

    fn explain(&self, last: &[DiverseState]) -> FailedConstraint {
        let best_min = last
            .iter()
            .map(|s| s.pairs.iter().copied().min().unwrap_or(u64::MAX))
            .max();
        match best_min {
            None => FailedConstraint::TooFewSolutions {
                required: self.query.r,
            },
            Some(0) if self.s_cap > 0 && self.query.distinct => FailedConstraint::TooFewSolutions {
                required: self.query.r,
            },
            Some(b) if b < self.s_cap => FailedConstraint::Scatteredness {
                best: b,
                required: self.query.s,
            },
            _ => FailedConstraint::Diversity {
                best: last
                    .iter()
                    .filter(|s| self.satisfied_scatter(s))
                    .map(|s| s.diversity)
                    .max()
                    .unwrap_or(0),
                required: self.query.d,
            },
        }
    }

    fn satisfied_scatter(&self, state: &DiverseState) -> bool {
        state.pairs.iter().all(|&x| x >= self.s_cap)
    }
}

fn diversity_multiset(rankings: &[LinearOrder]) -> Result<u64> {
    let mut distinct = rankings.to_vec();
    distinct.dedup();
    if distinct.len() == rankings.len() {
        return diversity(rankings);
    }
    let mut total = 0;
    for i in 0..rankings.len() {
        for j in i + 1..rankings.len() {
            total += kt_distance_linear(&rankings[i], &rankings[j])?;
        }
    }
    Ok(total)
}

fn identity_perm(r: usize) -> u64 {
    (0..r).fold(0, |acc, i| acc | ((i as u64) << (4 * i)))
}

fn perm_get(perm: u64, i: usize) -> usize {
    ((perm >> (4 * i)) & 0xf) as usize
}

/// Sorts the slots and permutes the pair registers to match. Returns the
/// permutation mapping each new slot to its old slot.
fn canonicalize(state: DiverseState) -> (DiverseState, u64) {
    let r = state.slots.len();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&i| state.slots[i]);
    let slots = order.iter().map(|&i| state.slots[i]).collect();
    let mut pairs = vec![0; state.pairs.len()];
    for a in 0..r {
        for b in a + 1..r {
            let (x, y) = (order[a].min(order[b]), order[a].max(order[b]));
            pairs[pair_index(r, a, b)] = state.pairs[pair_index(r, x, y)];
        }
    }
    let perm = order
        .iter()
        .enumerate()
        .fold(0, |acc, (a, &i)| acc | ((i as u64) << (4 * a)));
    (
        DiverseState {
            slots,
            pairs,
            diversity: state.diversity,
        },
        perm,
    )
}

pub fn solve_diverse(instance: &CostInstance, query: DiverseQuery) -> Result<DiverseOutcome> {
    solve_diverse_with(instance, query, &SolveOptions::default())
}

pub fn solve_diverse_with(
    instance: &CostInstance,
    query: DiverseQuery,
    options: &SolveOptions,
) -> Result<DiverseOutcome> {
    DiverseSearch::new(instance, query, options)?.run()
}

/// Largest total pairwise distance of `r` different solutions each within
/// `delta` of the optimum.
pub fn solve_max_diversity(
    instance: &CostInstance,
    r: usize,
    delta: u64,
) -> Result<DiverseOutcome> {
    solve_diverse(instance, DiverseQuery::maximize(r, delta))
}

/// Whether there are `r` different optimal solutions.
pub fn find_distinct_optima(instance: &CostInstance, r: usize) -> Result<DiverseOutcome> {
    solve_diverse(instance, DiverseQuery::distinct_optima(r))
}
