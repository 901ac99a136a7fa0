use std::fmt;

use super::chordal::{maximal_cliques, minimal_triangulation, minimalize_triangulation};
use super::graph::{cocomparability_graph, Graph};
use crate::error::{Error, Result};
use crate::orders::{CandidateSet, PartialOrder, Relation};
use crate::set::VertexSet;

/// Largest vertex count accepted by the subset-memoized width oracles unless
/// a caller raises it explicitly.
pub const DEFAULT_EXACT_CAP: usize = 12;
/// Hard ceiling for [`exact_pathwidth_with_cap`]; the memo table has
/// `2^n` entries.
pub const MAX_EXACT_CAP: usize = 24;
/// Largest graph examined by [`has_long_induced_cycle`].
pub const INDUCED_CYCLE_CAP: usize = 16;

/// A sequence of bags together with the introduce/forget bookkeeping used
/// by the dynamic programs.
#[derive(Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    bags: Vec<VertexSet>,
    introduced: Vec<VertexSet>,
    forgotten: Vec<VertexSet>,
    leftset: Vec<VertexSet>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<VertexSet>) -> Self {
        let q = bags.len();
        let mut introduced = Vec::with_capacity(q);
        let mut forgotten = Vec::with_capacity(q);
        let mut leftset = Vec::with_capacity(q);
        let mut left = VertexSet::EMPTY;
        for p in 0..q {
            let (intro, forg) = if p == 0 {
                (bags[0], VertexSet::EMPTY)
            } else {
                (
                    bags[p].difference(bags[p - 1]),
                    bags[p - 1].difference(bags[p]),
                )
            };
            left = left.union(forg);
            introduced.push(intro);
            forgotten.push(forg);
            leftset.push(left);
        }
        PathDecomposition {
            bags,
            introduced,
            forgotten,
            leftset,
        }
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn bag(&self, p: usize) -> VertexSet {
        self.bags[p]
    }

    /// Vertices of bag `p` absent from bag `p - 1` (all of bag 0 at `p = 0`).
    pub fn introduced(&self, p: usize) -> VertexSet {
        self.introduced[p]
    }

    pub fn forgotten(&self, p: usize) -> VertexSet {
        self.forgotten[p]
    }

    /// Vertices forgotten at some position `<= p`.
    pub fn leftset(&self, p: usize) -> VertexSet {
        self.leftset[p]
    }

    /// Largest bag size minus one; zero for an empty sequence.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    fn span(&self, v: usize) -> Option<(usize, usize)> {
        let first = self.bags.iter().position(|b| b.contains(v))?;
        let last = self.bags.iter().rposition(|b| b.contains(v))?;
        Some((first, last))
    }

    /// Checks vertex coverage, edge coverage and the connectivity
    /// condition against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), DecompositionError> {
        let all = self.bags.iter().fold(VertexSet::EMPTY, |a, b| a.union(*b));
        if all != VertexSet::full(g.n()) {
            let missing = VertexSet::full(g.n()).difference(all);
            return Err(DecompositionError::Uncovered(missing));
        }
        for (u, v) in g.edges() {
            if !self.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
                return Err(DecompositionError::EdgeUncovered(u, v));
            }
        }
        for v in 0..g.n() {
            let (first, last) = self.span(v).expect("coverage checked above");
            if let Some(p) = (first..=last).find(|&p| !self.bags[p].contains(v)) {
                return Err(DecompositionError::Disconnected {
                    vertex: v,
                    position: p,
                });
            }
        }
        Ok(())
    }

    /// No pair `x < y` of `order` has `y` leave the sequence before `x`
    /// enters it.
    pub fn check_consistent(&self, order: &PartialOrder) -> Result<(), DecompositionError> {
        for (x, y) in order.strict_pairs() {
            if let (Some((first_x, _)), Some((_, last_y))) = (self.span(x), self.span(y)) {
                if last_y < first_x {
                    return Err(DecompositionError::Inconsistent { lower: x, upper: y });
                }
            }
        }
        Ok(())
    }

    pub fn is_consistent(&self, order: &PartialOrder) -> bool {
        self.check_consistent(order).is_ok()
    }

    /// Consecutive bags differ by exactly one introduced or one forgotten
    /// vertex.
    pub fn is_nice(&self) -> bool {
        (1..self.bags.len()).all(|p| self.introduced[p].len() + self.forgotten[p].len() == 1)
    }

    /// Text dump: one bag per line, labels separated by single spaces.
    pub fn to_text(&self, names: &CandidateSet) -> String {
        let mut out = String::new();
        for b in &self.bags {
            let labels: Vec<&str> = b.iter().map(|v| names.name(v)).collect();
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses [`PathDecomposition::to_text`] output. Every line is a bag
    /// (blank lines are empty bags); a final newline does not start a bag.
    pub fn parse_text(text: &str, names: &CandidateSet) -> Result<Self> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        if body.is_empty() {
            return Ok(PathDecomposition::new(Vec::new()));
        }
        let mut bags = Vec::new();
        for (i, line) in body.split('\n').enumerate() {
            let mut bag = VertexSet::EMPTY;
            for tok in line.split_whitespace() {
                let v = names.index_of(tok).ok_or_else(|| {
                    Error::input(format!("line {}: unknown candidate `{tok}`", i + 1))
                })?;
                bag.insert(v);
            }
            bags.push(bag);
        }
        Ok(PathDecomposition::new(bags))
    }
}

impl fmt::Debug for PathDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.bags).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionError {
    Uncovered(VertexSet),
    EdgeUncovered(usize, usize),
    Disconnected { vertex: usize, position: usize },
    Inconsistent { lower: usize, upper: usize },
    NotNice { position: usize },
}

impl fmt::Display for DecompositionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionError::Uncovered(s) => write!(f, "vertices {s:?} appear in no bag"),
            DecompositionError::EdgeUncovered(u, v) => write!(f, "edge {u}-{v} lies in no bag"),
            DecompositionError::Disconnected { vertex, position } => {
                write!(
                    f,
                    "vertex {vertex} is missing from bag {position} inside its span"
                )
            }
            DecompositionError::Inconsistent { lower, upper } => {
                write!(
                    f,
                    "{upper} is forgotten before {lower} is introduced although {lower} < {upper}"
                )
            }
            DecompositionError::NotNice { position } => {
                write!(
                    f,
                    "bag {position} does not differ from its predecessor by one vertex"
                )
            }
        }
    }
}

impl std::error::Error for DecompositionError {}

/// Collapses repeated bags and splits every transition into single-vertex
/// steps: forgets first, then introduces, each in ascending vertex order.
pub fn make_nice(d: &PathDecomposition) -> PathDecomposition {
    let mut bags: Vec<VertexSet> = Vec::with_capacity(d.len() * 2);
    for &next in d.bags() {
        let Some(&cur) = bags.last() else {
            bags.push(next);
            continue;
        };
        if cur == next {
            continue;
        }
        let mut b = cur;
        for v in cur.difference(next).iter() {
            b.remove(v);
            bags.push(b);
        }
        for v in next.difference(cur).iter() {
            b.insert(v);
            bags.push(b);
        }
    }
    PathDecomposition::new(bags)
}

/// `order` minus every comparable pair joined by a fill edge of
/// `triangulated`. For a minimal triangulation of the cocomparability graph
/// the result is an interval order; a transitivity failure is reported as
/// an internal error.
pub fn interval_order_from_fill(
    order: &PartialOrder,
    triangulated: &Graph,
) -> Result<PartialOrder> {
    let mut kept = Relation::empty(order.n());
    for (x, y) in order.relation().pairs() {
        if x == y || !triangulated.has_edge(x, y) {
            kept.insert(x, y);
        }
    }
    PartialOrder::from_relation(&kept).map_err(|e| {
        Error::internal(format!(
            "removing fill pairs broke the order ({e}); fill is not minimal"
        ))
    })
}

/// Exact pathwidth through vertex separation over all vertex subsets.
pub fn exact_pathwidth(g: &Graph) -> Result<usize> {
    exact_pathwidth_with_cap(g, DEFAULT_EXACT_CAP)
}

pub fn exact_pathwidth_with_cap(g: &Graph, cap: usize) -> Result<usize> {
    vertex_separation_layout(g, cap).map(|(w, _)| w)
}

/// Optimal vertex separation number and a layout achieving it.
///
/// `best[S]` is the minimum over orderings of `S` (as a prefix) of the
/// largest boundary seen so far, where the boundary of a prefix is the set
/// of its vertices with a neighbour outside it.
pub fn vertex_separation_layout(g: &Graph, cap: usize) -> Result<(usize, Vec<usize>)> {
    let n = g.n();
    let cap = cap.min(MAX_EXACT_CAP);
    if n > cap {
        return Err(Error::capability(format!(
            "exact pathwidth is limited to {cap} vertices (got {n})"
        )));
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let full = (1usize << n) - 1;
    let nbr: Vec<usize> = (0..n).map(|v| g.neighbors(v).0 as usize).collect();
    let boundary = |s: usize| -> u8 {
        let mut c = 0;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if nbr[v] & !s != 0 {
                c += 1;
            }
        }
        c
    };
    let mut best = vec![u8::MAX; full + 1];
    best[0] = 0;
    for s in 1..=full {
        let mut m = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            m = m.min(best[s & !(1 << v)]);
        }
        best[s] = m.max(boundary(s));
    }
    // Walk back from the full set, always removing the smallest vertex
    // that keeps the optimum.
    let mut layout = vec![0; n];
    let mut s = full;
    for slot in (0..n).rev() {
        let v = (0..n)
            .find(|&v| s >> v & 1 == 1 && best[s & !(1 << v)] <= best[full])
            .expect("an optimal predecessor exists");
        layout[slot] = v;
        s &= !(1 << v);
    }
    Ok((best[full] as usize, layout))
}

/// Path decomposition read off a vertex layout: bag `i` holds the `i`-th
/// vertex plus every earlier vertex with a neighbour at or after it.
pub fn layout_decomposition(g: &Graph, layout: &[usize]) -> PathDecomposition {
    let mut bags = Vec::with_capacity(layout.len());
    let mut prefix = VertexSet::EMPTY;
    let mut suffix: VertexSet = layout.iter().copied().collect();
    for &v in layout {
        let mut bag = VertexSet::singleton(v);
        for u in prefix.iter() {
            if !g.neighbors(u).intersection(suffix).is_empty() {
                bag.insert(u);
            }
        }
        bags.push(bag);
        prefix.insert(v);
        suffix.remove(v);
    }
    PathDecomposition::new(bags)
}

/// True iff `g` has an induced cycle on five or more vertices. Exhaustive
/// over vertex subsets; intended for small test graphs.
pub fn has_long_induced_cycle(g: &Graph) -> Result<bool> {
    let n = g.n();
    if n > INDUCED_CYCLE_CAP {
        return Err(Error::capability(format!(
            "induced cycle search is limited to {INDUCED_CYCLE_CAP} vertices (got {n})"
        )));
    }
    for bits in 0u64..(1u64 << n) {
        let s = VertexSet(bits);
        if s.len() < 5 {
            continue;
        }
        if s.iter().any(|v| g.neighbors(v).intersection(s).len() != 2) {
            continue;
        }
        // 2-regular: a single cycle iff connected.
        let start = s.min().expect("non-empty");
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(g.neighbors(v));
            }
            next = next.intersection(s).difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        if seen == s {
            return Ok(true);
        }
    }
    Ok(false)
}

/// How the triangulation behind a consistent decomposition is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WidthStrategy {
    /// Exact below [`DEFAULT_EXACT_CAP`] vertices, heuristic above.
    #[default]
    Auto,
    /// Optimal vertex-separation layout, its bags filled into cliques, then
    /// fill edges removed until the triangulation is minimal. Width equals
    /// the pathwidth. Subject to the exact cap.
    Exact,
    /// MCS-M minimal triangulation. No width guarantee.
    Heuristic,
}

/// A nice path decomposition of the cocomparability graph of `order` in
/// which no element is forgotten before a smaller element is introduced.
#[derive(Clone, Debug)]
pub struct ConsistentPathDecomposition {
    /// The nice decomposition consumed by the solvers.
    pub decomposition: PathDecomposition,
    /// Maximal cliques of the triangulation in interval order, before
    /// splitting into single-vertex steps.
    pub cliques: PathDecomposition,
    pub order: PartialOrder,
    /// `order` with the fill pairs removed.
    pub interval_order: PartialOrder,
    pub triangulation: Graph,
    pub graph: Graph,
    pub strategy: WidthStrategy,
    pub nice: bool,
}

impl ConsistentPathDecomposition {
    pub fn width(&self) -> usize {
        self.decomposition.width()
    }

    /// Runs every structural check: the three decomposition axioms,
    /// consistency with `order`, and niceness.
    pub fn validate(&self) -> Result<(), DecompositionError> {
        self.decomposition.validate(&self.graph)?;
        self.decomposition.check_consistent(&self.order)?;
        if self.nice {
            let d = &self.decomposition;
            if let Some(p) =
                (1..d.len()).find(|&p| d.introduced(p).len() + d.forgotten(p).len() != 1)
            {
                return Err(DecompositionError::NotNice { position: p });
            }
        }
        Ok(())
    }
}

pub fn consistent_path_decomposition(order: &PartialOrder) -> Result<ConsistentPathDecomposition> {
    consistent_path_decomposition_with(order, WidthStrategy::Auto)
}

pub fn consistent_path_decomposition_with(
    order: &PartialOrder,
    strategy: WidthStrategy,
) -> Result<ConsistentPathDecomposition> {
    let g = cocomparability_graph(order);
    let strategy = match strategy {
        WidthStrategy::Auto if g.n() <= DEFAULT_EXACT_CAP => WidthStrategy::Exact,
        WidthStrategy::Auto => WidthStrategy::Heuristic,
        s => s,
    };
    let h = match strategy {
        WidthStrategy::Exact => {
            let (_, layout) = vertex_separation_layout(&g, DEFAULT_EXACT_CAP)?;
            let mut filled = g.clone();
            for bag in layout_decomposition(&g, &layout).bags() {
                for u in bag.iter() {
                    for v in bag.iter() {
                        filled.add_edge(u, v);
                    }
                }
            }
            minimalize_triangulation(&g, &filled)
        }
        _ => minimal_triangulation(&g),
    };
    let iota = interval_order_from_fill(order, &h)?;
    let cliques =
        maximal_cliques(&h).ok_or_else(|| Error::internal("triangulation is not chordal"))?;

    // X precedes Y when some x in X lies below some y in Y in the interval
    // order. On the maximal cliques of an interval graph this is a strict
    // linear order, so the number of predecessors is the rank; the second
    // and third keys only matter if that ever fails.
    let precedes =
        |x: VertexSet, y: VertexSet| x.iter().any(|a| !iota.above(a).intersection(y).is_empty());
    let downset = |c: VertexSet| c.iter().map(|v| iota.below(v).len()).min().unwrap_or(0);
    let mut keyed: Vec<(usize, usize, VertexSet)> = cliques
        .iter()
        .map(|&c| {
            let rank = cliques
                .iter()
                .filter(|&&d| d != c && precedes(d, c))
                .count();
            (rank, downset(c), c)
        })
        .collect();
    keyed.sort();
    let clique_path = PathDecomposition::new(keyed.into_iter().map(|(_, _, c)| c).collect());
    let nice = make_nice(&clique_path);

    let cpd = ConsistentPathDecomposition {
        decomposition: nice,
        cliques: clique_path,
        order: order.clone(),
        interval_order: iota,
        triangulation: h,
        graph: g,
        strategy,
        nice: true,
    };
    cpd.validate()
        .map_err(|e| Error::internal(format!("constructed decomposition is invalid: {e}")))?;
    Ok(cpd)
}
