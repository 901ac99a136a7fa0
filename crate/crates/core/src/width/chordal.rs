//! Chordality testing, clique extraction and minimal triangulations.

use super::graph::Graph;
use crate::set::VertexSet;

/// Maximum cardinality search. Returns a vertex order that is a perfect
/// elimination ordering whenever the graph is chordal (first element is
/// eliminated first). Ties go to the smallest index.
fn mcs_elimination_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut numbered = VertexSet::EMPTY;
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !numbered.contains(v))
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .expect("an unnumbered vertex remains");
        numbered.insert(v);
        visit.push(v);
        for u in g.neighbors(v).difference(numbered).iter() {
            weight[u] += 1;
        }
    }
    visit.reverse();
    visit
}

fn is_perfect_elimination_order(g: &Graph, order: &[usize]) -> bool {
    let mut later = VertexSet::full(g.n());
    for &v in order {
        later.remove(v);
        if !g.is_clique(g.neighbors(v).intersection(later)) {
            return false;
        }
    }
    true
}

/// Perfect elimination ordering, if the graph is chordal.
pub fn perfect_elimination_order(g: &Graph) -> Option<Vec<usize>> {
    let order = mcs_elimination_order(g);
    is_perfect_elimination_order(g, &order).then_some(order)
}

pub fn is_chordal(g: &Graph) -> bool {
    perfect_elimination_order(g).is_some()
}

/// All maximal cliques of a chordal graph, sorted by their bit pattern.
/// Returns `None` if the graph is not chordal.
pub fn maximal_cliques(g: &Graph) -> Option<Vec<VertexSet>> {
    let order = perfect_elimination_order(g)?;
    let mut later = VertexSet::full(g.n());
    let mut candidates = Vec::with_capacity(order.len());
    for &v in &order {
        later.remove(v);
        let mut c = g.neighbors(v).intersection(later);
        c.insert(v);
        candidates.push(c);
    }
    let mut cliques: Vec<VertexSet> = candidates
        .iter()
        .copied()
        .filter(|&c| !candidates.iter().any(|&d| d != c && c.is_subset(d)))
        .collect();
    cliques.sort();
    cliques.dedup();
    Some(cliques)
}

/// MCS-M: a minimal triangulation computed in one elimination pass.
pub fn minimal_triangulation(g: &Graph) -> Graph {
    let n = g.n();
    let mut h = g.clone();
    let mut weight = vec![0usize; n];
    let mut unnumbered = VertexSet::full(n);
    for _ in 0..n {
        let v = unnumbered
            .iter()
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .expect("an unnumbered vertex remains");
        unnumbered.remove(v);

        // u joins the reach set of v if some path v ~ u runs through
        // unnumbered vertices all lighter than u.
        let mut thresholds: Vec<usize> = unnumbered.iter().map(|u| weight[u]).collect();
        thresholds.sort_unstable();
        thresholds.dedup();
        let mut reached = VertexSet::EMPTY;
        for t in thresholds {
            let allowed: VertexSet = unnumbered.iter().filter(|&x| weight[x] < t).collect();
            let mut seen = VertexSet::singleton(v);
            let mut frontier = VertexSet::singleton(v);
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for x in frontier.iter() {
                    next = next.union(g.neighbors(x));
                }
                next = next.intersection(allowed).difference(seen);
                seen = seen.union(next);
                frontier = next;
            }
            for u in unnumbered.iter().filter(|&u| weight[u] == t) {
                if !g.neighbors(u).intersection(seen).is_empty() {
                    reached.insert(u);
                }
            }
        }
        for u in reached.iter() {
            weight[u] += 1;
            h.add_edge(u, v);
        }
    }
    h
}

/// Removes fill edges of the triangulation `h` of `g` one at a time while
/// the graph stays chordal. A triangulation admitting no such single
/// removal is minimal, so the result is a minimal triangulation of `g`
/// contained in `h`.
pub fn minimalize_triangulation(g: &Graph, h: &Graph) -> Graph {
    debug_assert!(g.is_subgraph_of(h));
    let mut h = h.clone();
    loop {
        let mut changed = false;
        let fill: Vec<(usize, usize)> = h.edges().filter(|&(u, v)| !g.has_edge(u, v)).collect();
        for (u, v) in fill {
            h.remove_edge(u, v);
            if is_chordal(&h) {
                changed = true;
            } else {
                h.add_edge(u, v);
            }
        }
        if !changed {
            return h;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chordality() {
        assert!(is_chordal(&Graph::complete(5)));
        assert!(is_chordal(&Graph::path(6)));
        assert!(!is_chordal(&Graph::cycle(4)));
        assert!(!is_chordal(&Graph::cycle(7)));
        assert!(is_chordal(&Graph::empty(3)));
    }

    #[test]
    fn chordal_input_is_unchanged() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]);
        assert_eq!(minimal_triangulation(&g), g);
    }

    #[test]
    fn four_cycle_gets_one_chord() {
        let g = Graph::cycle(4);
        let h = minimal_triangulation(&g);
        assert!(is_chordal(&h));
        assert_eq!(h.edge_count(), 5);
    }

    #[test]
    fn minimalize_removes_redundant_fill() {
        let g = Graph::cycle(4);
        let h = minimalize_triangulation(&g, &Graph::complete(4));
        assert_eq!(h.edge_count(), 5);
        assert!(is_chordal(&h));
    }

    #[test]
    fn cliques_of_a_path() {
        let cl = maximal_cliques(&Graph::path(3)).unwrap();
        assert_eq!(cl, vec![VertexSet(0b011), VertexSet(0b110)]);
        assert!(maximal_cliques(&Graph::cycle(5)).is_none());
    }
}
