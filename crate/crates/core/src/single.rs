//! Optimal completion of an ordering over a consistent path decomposition.
//!
//! A partial solution is summarised at each bag by its *tail*: the bag
//! vertices placed after every vertex forgotten so far, in solution order.
//! Everything before the tail is committed, and by consistency every vertex
//! introduced later must come after it, so the tail plus the accumulated
//! cost is all the program needs to carry forward.
//!
//! Triples `(tail set, tail order, cost)` are advanced bag by bag:
//!
//! * on a forget, the forgotten vertex that is last in the tail order cuts
//!   the tail, and it together with everything before it leaves the tail;
//! * on an introduce, the new vertex is inserted at every position of the
//!   tail compatible with the base order, and pays for the pairs it forms
//!   with the tail and with the committed bag vertices before the tail.
//!
//! Only the cheapest triple per tail is kept. The solution is recovered by
//! walking back through cost-tight predecessors and closing the base order
//! together with every tail order on the chain.

use std::collections::HashMap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::orders::{transitive_closure, CostInstance, LinearOrder, PartialOrder, Relation};
use crate::set::VertexSet;
use crate::width::{consistent_path_decomposition_with, PathDecomposition, WidthStrategy};

/// Knobs shared by the solvers.
#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    pub strategy: WidthStrategy,
    /// Abort with [`Error::Timeout`] once this instant has passed.
    pub deadline: Option<Instant>,
}

impl SolveOptions {
    pub(crate) fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }
}

/// One summarised partial solution at a bag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub tail: VertexSet,
    /// Tail vertices in solution order, smallest first.
    pub order: Vec<usize>,
    pub cost: u64,
}

impl Triple {
    pub fn new(order: Vec<usize>, cost: u64) -> Self {
        Triple {
            tail: order.iter().copied().collect(),
            order,
            cost,
        }
    }
}

/// Counters collected while running a dynamic program.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    pub width: usize,
    pub positions: usize,
    /// Largest number of kept triples at one position.
    pub max_triples: usize,
    /// Positions where the kept triples exceeded `e * (delta+1) * (w+1)!`.
    pub triple_bound_violations: usize,
    /// Largest number of tuples at one position (diverse solver only).
    pub max_tuples: usize,
    /// Positions where the tuple count exceeded its bound (diverse solver only).
    pub tuple_bound_violations: usize,
}

/// `e * (delta + 1) * (w + 1)!`, as a float to stay finite for wide bags.
pub fn triple_bound(delta: u64, width: usize) -> f64 {
    let fact: f64 = (1..=width + 1).map(|i| i as f64).product();
    std::f64::consts::E * (delta as f64 + 1.0) * fact
}

/// The decomposition the programs walk: the nice decomposition followed by
/// single-vertex forgets (ascending) until the bag is empty, so the last
/// position has the empty tail and carries the full solution cost.
pub fn dp_schedule(decomposition: &PathDecomposition) -> PathDecomposition {
    let mut bags = decomposition.bags().to_vec();
    if let Some(&last) = bags.last() {
        let mut b = last;
        for v in last.iter() {
            b.remove(v);
            bags.push(b);
        }
    } else {
        bags.push(VertexSet::EMPTY);
    }
    PathDecomposition::new(bags)
}

/// Linear extensions of the base order restricted to `set`, in
/// lexicographic order.
fn restricted_extensions(base: &PartialOrder, set: VertexSet) -> Vec<Vec<usize>> {
    fn rec(base: &PartialOrder, rest: VertexSet, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for v in rest.iter() {
            if base.below(v).intersection(rest).is_empty() {
                cur.push(v);
                let mut r = rest;
                r.remove(v);
                rec(base, r, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(base, set, &mut Vec::with_capacity(set.len()), &mut out);
    out
}

fn order_cost(instance: &CostInstance, order: &[usize]) -> u64 {
    let mut c = 0;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            c += instance.charge(order[i], order[j]);
        }
    }
    c
}

/// Triples of the first bag: one per linear extension of the base order
/// restricted to it, priced by the pairs it orders.
pub fn initial_triples(instance: &CostInstance, bag1: VertexSet) -> Vec<Triple> {
    restricted_extensions(instance.base(), bag1)
        .into_iter()
        .map(|order| {
            let c = order_cost(instance, &order);
            Triple::new(order, c)
        })
        .collect()
}

/// Enumerates the tails reachable from `order` when moving from bag `p` to
/// bag `p + 1`, reporting each with its cost increase.
pub(crate) fn for_each_successor(
    instance: &CostInstance,
    schedule: &PathDecomposition,
    p: usize,
    order: &[usize],
    mut emit: impl FnMut(Vec<usize>, u64),
) {
    let base = instance.base();
    let forgotten = schedule.forgotten(p + 1);
    let introduced = schedule.introduced(p + 1);
    let next_bag = schedule.bag(p + 1);

    // Keep only what follows the last forgotten tail vertex.
    let kept = match order.iter().rposition(|&v| forgotten.contains(v)) {
        Some(i) => &order[i + 1..],
        None => order,
    };
    let kept_set: VertexSet = kept.iter().copied().collect();
    let new_tail = kept_set.union(introduced);
    let committed = next_bag.difference(new_tail);
    let fresh: Vec<usize> = introduced.iter().collect();

    fn insert_all(
        base: &PartialOrder,
        fresh: &[usize],
        seq: &mut Vec<usize>,
        done: &mut impl FnMut(&[usize]),
    ) {
        let Some((&w, rest)) = fresh.split_first() else {
            done(seq);
            return;
        };
        let lo = seq
            .iter()
            .rposition(|&x| base.lt(x, w))
            .map_or(0, |i| i + 1);
        let hi = seq.iter().position(|&x| base.lt(w, x)).unwrap_or(seq.len());
        for pos in lo..=hi {
            seq.insert(pos, w);
            insert_all(base, rest, seq, done);
            seq.remove(pos);
        }
    }

    let mut seq = kept.to_vec();
    insert_all(base, &fresh, &mut seq, &mut |tail: &[usize]| {
        let mut inc = 0;
        for (i, &v) in tail.iter().enumerate() {
            if !introduced.contains(v) {
                continue;
            }
            for &u in &tail[..i] {
                inc += instance.charge(u, v);
            }
            for &u in &tail[i + 1..] {
                if kept_set.contains(u) {
                    inc += instance.charge(v, u);
                }
            }
            for u in committed.iter() {
                inc += instance.charge(u, v);
            }
        }
        emit(tail.to_vec(), inc);
    });
}

/// All triples at bag `p + 1` compatible with `t` at bag `p`.
pub fn triple_successors(
    t: &Triple,
    schedule: &PathDecomposition,
    p: usize,
    instance: &CostInstance,
) -> Vec<Triple> {
    let mut out = Vec::new();
    for_each_successor(instance, schedule, p, &t.order, |order, inc| {
        out.push(Triple::new(order, t.cost + inc));
    });
    out
}

/// Closes the base order together with every tail order of a compatible
/// chain and reads off the resulting linear order.
pub fn reconstruct_extension(chain: &[Triple], order: &PartialOrder) -> Result<LinearOrder> {
    let n = order.n();
    let mut rel = order.relation();
    for t in chain {
        for w in t.order.windows(2) {
            rel.insert(w[0], w[1]);
        }
    }
    let closed = transitive_closure(&rel);
    let mut rank = Vec::with_capacity(n);
    for x in 0..n {
        for y in closed.row(x).iter() {
            if x != y && closed.contains(y, x) {
                return Err(Error::internal(format!(
                    "tail orders conflict on elements {x} and {y}"
                )));
            }
        }
        let above = closed.row(x).len();
        rank.push((n - above, x));
    }
    let total = (0..n).all(|x| closed.row(x).len() + below_count(&closed, x) == n + 1);
    if !total {
        return Err(Error::internal("tail orders leave some pair unordered"));
    }
    rank.sort_unstable();
    LinearOrder::new(rank.into_iter().map(|(_, x)| x).collect())
}

fn below_count(rel: &Relation, x: usize) -> usize {
    (0..rel.n()).filter(|&y| rel.contains(y, x)).count()
}

/// The triples a given solution induces along the schedule: at bag `p` the
/// tail is every bag vertex after the last forgotten vertex, and the cost
/// is that of the solution restricted to forgotten and bag vertices.
pub fn project_solution(
    schedule: &PathDecomposition,
    instance: &CostInstance,
    ranking: &LinearOrder,
) -> Vec<Triple> {
    (0..schedule.len())
        .map(|p| {
            let left = schedule.leftset(p);
            let bag = schedule.bag(p);
            let cut = left.iter().map(|v| ranking.position(v)).max();
            let mut tail: Vec<usize> = bag
                .iter()
                .filter(|&v| cut.is_none_or(|c| ranking.position(v) > c))
                .collect();
            tail.sort_by_key(|&v| ranking.position(v));
            let mut seen: Vec<usize> = left.union(bag).iter().collect();
            seen.sort_by_key(|&v| ranking.position(v));
            Triple::new(tail, order_cost(instance, &seen))
        })
        .collect()
}

/// Reachable tails at one position.
pub(crate) struct Layer {
    pub tails: Vec<Vec<usize>>,
    /// Cheapest cost of a partial solution ending in each tail.
    pub best: Vec<u64>,
    /// Cheapest cost of completing each tail to a full solution.
    pub togo: Vec<u64>,
    /// Successor tails in the next layer with their cost increases.
    pub edges: Vec<Vec<(u32, u64)>>,
}

/// Every tail reachable along the schedule with forward (best) and
/// backward (togo) cheapest costs. Both solvers run on this structure.
pub(crate) struct TailGraph<'a> {
    pub instance: &'a CostInstance,
    pub schedule: PathDecomposition,
    pub layers: Vec<Layer>,
    pub optimum: u64,
}

impl<'a> TailGraph<'a> {
    pub fn build(
        instance: &'a CostInstance,
        schedule: PathDecomposition,
        options: &SolveOptions,
    ) -> Result<Self> {
        let q = schedule.len();
        let first: Vec<Triple> = initial_triples(instance, schedule.bag(0));
        let mut layers = Vec::with_capacity(q);
        layers.push(Layer {
            best: first.iter().map(|t| t.cost).collect(),
            tails: first.into_iter().map(|t| t.order).collect(),
            togo: Vec::new(),
            edges: Vec::new(),
        });
        for p in 0..q - 1 {
            options.check_deadline()?;
            let cur = layers.last_mut().expect("non-empty");
            let mut index: HashMap<Vec<usize>, u32> = HashMap::new();
            let mut next = Layer {
                tails: Vec::new(),
                best: Vec::new(),
                togo: Vec::new(),
                edges: Vec::new(),
            };
            cur.edges = Vec::with_capacity(cur.tails.len());
            for (i, tail) in cur.tails.iter().enumerate() {
                if i % 4096 == 4095 {
                    options.check_deadline()?;
                }
                let from = cur.best[i];
                let mut out = Vec::new();
                for_each_successor(instance, &schedule, p, tail, |t, inc| {
                    let j = *index.entry(t).or_insert_with_key(|t| {
                        next.tails.push(t.clone());
                        next.best.push(u64::MAX);
                        (next.tails.len() - 1) as u32
                    });
                    let c = &mut next.best[j as usize];
                    *c = (*c).min(from + inc);
                    out.push((j, inc));
                });
                cur.edges.push(out);
            }
            layers.push(next);
        }
        let last = layers.last_mut().expect("non-empty");
        last.togo = vec![0; last.tails.len()];
        last.edges = vec![Vec::new(); last.tails.len()];
        for p in (0..q - 1).rev() {
            let (head, tail) = layers.split_at_mut(p + 1);
            let (cur, next) = (&mut head[p], &tail[0]);
            cur.togo = cur
                .edges
                .iter()
                .map(|es| {
                    es.iter()
                        .map(|&(j, inc)| inc + next.togo[j as usize])
                        .min()
                        .expect("every tail has a successor")
                })
                .collect();
        }
        let last = layers.last().expect("non-empty");
        let optimum = *last.best.iter().min().expect("final layer is non-empty");
        Ok(TailGraph {
            instance,
            schedule,
            layers,
            optimum,
        })
    }

    pub fn triple(&self, p: usize, idx: u32, cost: u64) -> Triple {
        Triple::new(self.layers[p].tails[idx as usize].clone(), cost)
    }

    /// Cheapest completion of tail `idx` at position `p`, breaking ties
    /// towards the lexicographically smallest tail at every step.
    pub fn complete_from(&self, p: usize, idx: u32) -> Vec<u32> {
        let mut chain = vec![idx];
        let mut cur = idx;
        for t in p..self.layers.len() - 1 {
            let layer = &self.layers[t];
            let next = &self.layers[t + 1];
            let target = layer.togo[cur as usize];
            let (j, _) = layer.edges[cur as usize]
                .iter()
                .filter(|&&(j, inc)| inc + next.togo[j as usize] == target)
                .min_by(|a, b| next.tails[a.0 as usize].cmp(&next.tails[b.0 as usize]))
                .copied()
                .expect("a tight successor exists");
            chain.push(j);
            cur = j;
        }
        chain
    }

    /// Cheapest prefix ending in tail `idx` at position `p`, as tail
    /// indices for positions `0..=p`, preferring lexicographically small
    /// tails.
    pub fn best_prefix(&self, p: usize, idx: u32) -> Vec<u32> {
        let mut chain = vec![idx];
        let mut cur = idx;
        for t in (0..p).rev() {
            let layer = &self.layers[t];
            let target = self.layers[t + 1].best[cur as usize];
            let mut pick: Option<u32> = None;
            for (i, es) in layer.edges.iter().enumerate() {
                let tight = es
                    .iter()
                    .any(|&(j, inc)| j == cur && layer.best[i] + inc == target);
                if tight && pick.is_none_or(|k| layer.tails[i] < layer.tails[k as usize]) {
                    pick = Some(i as u32);
                }
            }
            cur = pick.expect("a tight predecessor exists");
            chain.push(cur);
        }
        chain.reverse();
        chain
    }

    pub fn stats(&self, delta: u64) -> DpStats {
        let width = self.schedule.width();
        let bound = triple_bound(delta, width);
        DpStats {
            width,
            positions: self.layers.len(),
            max_triples: self.layers.iter().map(|l| l.tails.len()).max().unwrap_or(0),
            triple_bound_violations: self
                .layers
                .iter()
                .filter(|l| l.tails.len() as f64 > bound)
                .count(),
            ..DpStats::default()
        }
    }
}

/// Kept triples per position, for inspecting what the program generates.
pub struct TailTable {
    layers: Vec<HashMap<Vec<usize>, u64>>,
}

impl TailTable {
    pub fn new(
        instance: &CostInstance,
        schedule: PathDecomposition,
        options: &SolveOptions,
    ) -> Result<Self> {
        let graph = TailGraph::build(instance, schedule, options)?;
        let layers = graph
            .layers
            .into_iter()
            .map(|l| l.tails.into_iter().zip(l.best).collect())
            .collect();
        Ok(TailTable { layers })
    }

    pub fn positions(&self) -> usize {
        self.layers.len()
    }

    /// Number of kept triples at position `p`.
    pub fn len(&self, p: usize) -> usize {
        self.layers[p].len()
    }

    /// Cheapest cost kept for the tail `order` at position `p`.
    pub fn best(&self, p: usize, order: &[usize]) -> Option<u64> {
        self.layers[p].get(order).copied()
    }
}

/// An optimal linear extension and its cost.
#[derive(Clone, Debug)]
pub struct SingleSolution {
    pub ranking: LinearOrder,
    pub cost: u64,
    /// The compatible chain of triples the ranking was rebuilt from.
    pub chain: Vec<Triple>,
    pub stats: DpStats,
}

pub fn solve_single(instance: &CostInstance) -> Result<SingleSolution> {
    solve_single_with(instance, &SolveOptions::default())
}

pub fn solve_single_with(
    instance: &CostInstance,
    options: &SolveOptions,
) -> Result<SingleSolution> {
    let cpd = consistent_path_decomposition_with(instance.base(), options.strategy)?;
    solve_on_schedule(instance, dp_schedule(&cpd.decomposition), options)
}

/// Runs the program on a caller-supplied schedule, which must be a path
/// decomposition of the cocomparability graph consistent with the base
/// order.
pub fn solve_on_schedule(
    instance: &CostInstance,
    schedule: PathDecomposition,
    options: &SolveOptions,
) -> Result<SingleSolution> {
    let graph = TailGraph::build(instance, schedule, options)?;
    let stats = graph.stats(0);
    debug_assert_eq!(
        stats.triple_bound_violations, 0,
        "triple count bound exceeded"
    );
    let q = graph.layers.len();
    let last = &graph.layers[q - 1];
    let end = (0..last.tails.len())
        .filter(|&i| last.best[i] == graph.optimum)
        .min_by(|&a, &b| last.tails[a].cmp(&last.tails[b]))
        .expect("final layer is non-empty") as u32;
    let idxs = graph.best_prefix(q - 1, end);
    let chain: Vec<Triple> = idxs
        .iter()
        .enumerate()
        .map(|(p, &i)| graph.triple(p, i, graph.layers[p].best[i as usize]))
        .collect();
    let ranking = reconstruct_extension(&chain, instance.base())?;
    let cost = instance.extension_cost(&ranking);
    if cost != graph.optimum {
        return Err(Error::internal(format!(
            "rebuilt ranking costs {cost}, program reported {}",
            graph.optimum
        )));
    }
    Ok(SingleSolution {
        ranking,
        cost,
        chain,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(base: PartialOrder, entries: &[(usize, usize, u64)]) -> CostInstance {
        let n = base.n();
        let mut cost = vec![0; n * n];
        for &(x, y, c) in entries {
            cost[x * n + y] = c;
        }
        CostInstance::new(base, cost, u64::MAX).unwrap()
    }

    fn sched(v: &[&[usize]]) -> PathDecomposition {
        PathDecomposition::new(v.iter().map(|b| b.iter().copied().collect()).collect())
    }

    #[test]
    fn initial_triple_examples() {
        let anti = instance(PartialOrder::antichain(2), &[(0, 1, 2), (1, 0, 3)]);
        assert_eq!(
            initial_triples(&anti, VertexSet::singleton(0)),
            vec![Triple::new(vec![0], 0)]
        );
        assert_eq!(
            initial_triples(&anti, VertexSet(0b11)),
            vec![Triple::new(vec![0, 1], 2), Triple::new(vec![1, 0], 3)]
        );
        let chain = instance(PartialOrder::from_pairs(2, [(0, 1)]).unwrap(), &[(1, 0, 5)]);
        assert_eq!(
            initial_triples(&chain, VertexSet(0b11)),
            vec![Triple::new(vec![0, 1], 0)]
        );
    }

    #[test]
    fn forget_steps_cut_the_tail() {
        // u = 0, v = 1; forget v.
        let inst = instance(PartialOrder::antichain(2), &[]);
        let s = sched(&[&[0, 1], &[0]]);
        let kept = triple_successors(&Triple::new(vec![1, 0], 4), &s, 0, &inst);
        assert_eq!(kept, vec![Triple::new(vec![0], 4)]);
        let dropped = triple_successors(&Triple::new(vec![0, 1], 4), &s, 0, &inst);
        assert_eq!(dropped, vec![Triple::new(vec![], 4)]);
    }

    #[test]
    fn introduce_step_prices_both_insertions() {
        // u = 0, w = 1, cost(u,w)=1, cost(w,u)=4.
        let inst = instance(PartialOrder::antichain(2), &[(0, 1, 1), (1, 0, 4)]);
        let s = sched(&[&[0], &[0, 1]]);
        let mut succ = triple_successors(&Triple::new(vec![0], 7), &s, 0, &inst);
        succ.sort();
        assert_eq!(
            succ,
            vec![Triple::new(vec![0, 1], 8), Triple::new(vec![1, 0], 11)]
        );
    }

    #[test]
    fn introduce_pays_committed_bag_vertices() {
        // Bag {0,1}, tail only {1} (0 committed before it); introduce 2.
        let inst = instance(
            PartialOrder::antichain(3),
            &[(0, 2, 5), (2, 0, 1), (1, 2, 2), (2, 1, 3)],
        );
        let s = sched(&[&[0, 1], &[0, 1, 2]]);
        let mut succ = triple_successors(&Triple::new(vec![1], 0), &s, 0, &inst);
        succ.sort();
        assert_eq!(
            succ,
            vec![Triple::new(vec![1, 2], 7), Triple::new(vec![2, 1], 8)]
        );
    }

    #[test]
    fn reconstruct_examples() {
        let anti = PartialOrder::antichain(3);
        let single = reconstruct_extension(&[Triple::new(vec![2, 0, 1], 0)], &anti).unwrap();
        assert_eq!(single.as_slice(), &[2, 0, 1]);

        // Bags {0,1} then {1,2}: tail (0,1), forget 0 keeps (1), introduce 2 after 1.
        let chain = [
            Triple::new(vec![0, 1], 0),
            Triple::new(vec![1], 0),
            Triple::new(vec![1, 2], 0),
        ];
        let base = PartialOrder::from_pairs(3, [(0, 2)]).unwrap();
        assert_eq!(
            reconstruct_extension(&chain, &base).unwrap().as_slice(),
            &[0, 1, 2]
        );

        let bad = [Triple::new(vec![0, 1], 0), Triple::new(vec![1, 0], 0)];
        assert!(matches!(
            reconstruct_extension(&bad, &anti),
            Err(Error::Internal(_))
        ));
        let partial = [Triple::new(vec![0, 1], 0)];
        assert!(reconstruct_extension(&partial, &anti).is_err());
    }

    #[test]
    fn linear_base_costs_nothing() {
        let base = LinearOrder::new(vec![3, 1, 0, 2]).unwrap();
        let n = 4;
        let cost = (0..n * n)
            .map(|i| if i / n == i % n { 0 } else { 9 })
            .collect();
        let inst = CostInstance::new(base.to_partial_order(), cost, 0).unwrap();
        let sol = solve_single(&inst).unwrap();
        assert_eq!(sol.cost, 0);
        assert_eq!(sol.ranking, base);
    }

    #[test]
    fn schedule_ends_empty() {
        let s = dp_schedule(&sched(&[&[0], &[0, 1]]));
        assert_eq!(s, sched(&[&[0], &[0, 1], &[1], &[]]));
    }
}
