//! Backtracking search for embeddings of a pattern into a host.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::combinatorics::falling_factorial;
use crate::hypergraph::Hypergraph;
use crate::pattern::Pattern;

/// An injective, edge-preserving map `V(F) -> V(H)`; `map[u]` is the image of `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    /// Image vertices in increasing order.
    pub fn image(&self) -> Vec<usize> {
        let mut v = self.map.clone();
        v.sort_unstable();
        v
    }
}

/// Assignment order for pattern vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOrder {
    /// `0, 1, .., b-1`: embeddings come out in lexicographic order of the image tuple.
    Lexicographic,
    /// Anchored vertices first, then greedily the vertex with most already-placed neighbours.
    Connected,
}

/// A prepared embedding search of one pattern into one host.
pub struct Matcher<'a> {
    host: &'a Hypergraph,
    b: usize,
    order: Vec<usize>,
    /// Pattern edges completed when the vertex at this position is placed.
    closing: Vec<Vec<Vec<usize>>>,
    /// Already-placed neighbours of the vertex at this position.
    back_neighbours: Vec<Vec<usize>>,
    allowed: FixedBitSet,
    anchors: Vec<Option<usize>>,
}

impl<'a> Matcher<'a> {
    pub fn new(pattern: &Pattern, host: &'a Hypergraph, order: SearchOrder) -> Self {
        Self::with_anchors(pattern, host, order, &[])
    }

    /// `anchors` pins pattern vertices to host vertices.
    pub fn with_anchors(pattern: &Pattern, host: &'a Hypergraph, order: SearchOrder, anchors: &[(usize, usize)]) -> Self {
        let b = pattern.b();
        let g = pattern.graph();
        let mut pinned = vec![None; b];
        for &(u, w) in anchors {
            pinned[u] = Some(w);
        }
        let mut adjacency = vec![vec![false; b]; b];
        for e in g.edges() {
            for &u in e {
                for &w in e {
                    if u != w {
                        adjacency[u][w] = true;
                    }
                }
            }
        }
        let order: Vec<usize> = match order {
            SearchOrder::Lexicographic => (0..b).collect(),
            SearchOrder::Connected => {
                let degree = g.vertex_degrees();
                let mut placed = vec![false; b];
                let mut out = Vec::with_capacity(b);
                for u in 0..b {
                    if pinned[u].is_some() {
                        placed[u] = true;
                        out.push(u);
                    }
                }
                while out.len() < b {
                    let next = (0..b)
                        .filter(|&u| !placed[u])
                        .max_by_key(|&u| {
                            let links = out.iter().filter(|&&w| adjacency[u][w]).count();
                            (links, degree[u], std::cmp::Reverse(u))
                        })
                        .expect("unplaced vertex");
                    placed[next] = true;
                    out.push(next);
                }
                out
            }
        };
        let mut position = vec![0; b];
        for (i, &u) in order.iter().enumerate() {
            position[u] = i;
        }
        let mut closing = vec![Vec::new(); b];
        for e in g.edges() {
            let last = e.iter().map(|&u| position[u]).max().expect("edge");
            closing[last].push(e.to_vec());
        }
        let back_neighbours = order
            .iter()
            .enumerate()
            .map(|(i, &u)| order[..i].iter().copied().filter(|&w| adjacency[u][w]).collect())
            .collect();
        let mut allowed = FixedBitSet::with_capacity(host.n());
        allowed.insert_range(..);
        Matcher {
            host,
            b,
            order,
            closing,
            back_neighbours,
            allowed,
            anchors: pinned,
        }
    }

    /// Restricts images to the given host vertices.
    pub fn restrict_to(mut self, allowed: &FixedBitSet) -> Self {
        self.allowed = allowed.clone();
        self
    }

    /// Calls `visit` with each embedding map; stops when `visit` returns `false`.
    pub fn for_each(&self, mut visit: impl FnMut(&[usize]) -> bool) {
        if self.b > self.host.n() {
            return;
        }
        let mut map = vec![usize::MAX; self.b];
        let mut used = FixedBitSet::with_capacity(self.host.n());
        self.extend(0, &mut map, &mut used, &mut visit);
    }

    fn candidates(&self, pos: usize, map: &[usize], used: &FixedBitSet) -> Vec<usize> {
        let u = self.order[pos];
        if let Some(w) = self.anchors[u] {
            let ok = w < self.host.n() && self.allowed.contains(w) && !used.contains(w);
            return if ok { vec![w] } else { Vec::new() };
        }
        let mut cand = match self.back_neighbours[pos].first() {
            Some(&first) => {
                let mut c = self.host.shadow(map[first]).clone();
                for &w in &self.back_neighbours[pos][1..] {
                    c.intersect_with(self.host.shadow(map[w]));
                }
                c.intersect_with(&self.allowed);
                c
            }
            None => self.allowed.clone(),
        };
        cand.difference_with(used);
        cand.ones().collect()
    }

    fn extend(&self, pos: usize, map: &mut [usize], used: &mut FixedBitSet, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if pos == self.b {
            return visit(map);
        }
        let u = self.order[pos];
        let k = self.host.k();
        let mut image = vec![0usize; k];
        for w in self.candidates(pos, map, used) {
            map[u] = w;
            let fits = self.closing[pos].iter().all(|e| {
                for (slot, &x) in image.iter_mut().zip(e) {
                    *slot = map[x];
                }
                image.sort_unstable();
                self.host.has_edge(&image)
            });
            if fits {
                used.insert(w);
                let go_on = self.extend(pos + 1, map, used, visit);
                used.set(w, false);
                if !go_on {
                    map[u] = usize::MAX;
                    return false;
                }
            }
        }
        map[u] = usize::MAX;
        true
    }

    pub fn first(&self) -> Option<Embedding> {
        let mut found = None;
        self.for_each(|m| {
            found = Some(Embedding { map: m.to_vec() });
            false
        });
        found
    }
}

/// All labelled embeddings of `pattern` into `host` in lexicographic order of the image
/// tuple, at most `limit` of them.
pub fn enumerate_embeddings(pattern: &Pattern, host: &Hypergraph, limit: Option<usize>) -> Vec<Embedding> {
    let mut out = Vec::new();
    if limit == Some(0) {
        return out;
    }
    Matcher::new(pattern, host, SearchOrder::Lexicographic).for_each(|m| {
        out.push(Embedding { map: m.to_vec() });
        limit.is_none_or(|l| out.len() < l)
    });
    out
}

/// The pattern restricted to its non-isolated vertices (relabelled in order), those
/// vertices, and the number of isolated ones. `None` for an edgeless pattern.
pub(crate) fn core_of(pattern: &Pattern) -> (Option<Pattern>, Vec<usize>, usize) {
    let degree = pattern.graph().vertex_degrees();
    let kept: Vec<usize> = (0..pattern.b()).filter(|&u| degree[u] > 0).collect();
    let isolated = pattern.b() - kept.len();
    if pattern.f() == 0 {
        return (None, kept, isolated);
    }
    if isolated == 0 {
        return (Some(pattern.clone()), kept, 0);
    }
    let mut position = vec![usize::MAX; pattern.b()];
    for (i, &u) in kept.iter().enumerate() {
        position[u] = i;
    }
    let edges: Vec<Vec<usize>> = pattern
        .graph()
        .edges()
        .map(|e| e.iter().map(|&u| position[u]).collect())
        .collect();
    let core = Pattern::from_edges(pattern.k(), kept.len(), edges).expect("an edge spans k vertices");
    (Some(core), kept, isolated)
}

/// Number of labelled embeddings, with images inside `allowed` (all vertices if `None`) and
/// the given anchors. Isolated pattern vertices are counted by a falling factorial.
pub fn count_embeddings(pattern: &Pattern, host: &Hypergraph, anchors: &[(usize, usize)], allowed: Option<&FixedBitSet>) -> u128 {
    let degree = pattern.graph().vertex_degrees();
    let free_isolated = (0..pattern.b())
        .filter(|&u| degree[u] == 0 && !anchors.iter().any(|&(a, _)| a == u))
        .count();
    let budget_vertices = match allowed {
        Some(a) => a.count_ones(..),
        None => host.n(),
    };
    if pattern.f() == 0 {
        // only anchored vertices constrain the count
        let mut seen = FixedBitSet::with_capacity(host.n());
        for &(_, w) in anchors {
            if w >= host.n() || seen.contains(w) || allowed.is_some_and(|a| !a.contains(w)) {
                return 0;
            }
            seen.insert(w);
        }
        return falling_factorial(budget_vertices.saturating_sub(anchors.len()), free_isolated);
    }
    // embed the non-isolated part and anchored isolated vertices, then place the rest
    let kept: Vec<usize> = (0..pattern.b())
        .filter(|&u| degree[u] > 0 || anchors.iter().any(|&(a, _)| a == u))
        .collect();
    let mut position = vec![usize::MAX; pattern.b()];
    for (i, &u) in kept.iter().enumerate() {
        position[u] = i;
    }
    let edges: Vec<Vec<usize>> = pattern
        .graph()
        .edges()
        .map(|e| e.iter().map(|&u| position[u]).collect())
        .collect();
    let sub = Pattern::new(Hypergraph::new(pattern.k(), kept.len(), edges).expect("valid"))
        .expect("core has an edge so at least k vertices");
    let sub_anchors: Vec<(usize, usize)> = anchors.iter().map(|&(u, w)| (position[u], w)).collect();
    let mut matcher = Matcher::with_anchors(&sub, host, SearchOrder::Connected, &sub_anchors);
    if let Some(a) = allowed {
        matcher = matcher.restrict_to(a);
    }
    let mut count: u128 = 0;
    matcher.for_each(|_| {
        count += 1;
        true
    });
    count * falling_factorial(budget_vertices.saturating_sub(kept.len()), free_isolated)
}

/// Labelled embeddings of the star subgraph `F_v` (edges of `F` through `v`) mapping `v` to `w`.
pub fn count_rooted(pattern: &Pattern, v: usize, host: &Hypergraph, w: usize) -> crate::Result<u128> {
    if v >= pattern.b() || w >= host.n() {
        return Err(crate::Error::InvalidVertexSet(format!(
            "root {v} -> {w} out of range"
        )));
    }
    let star = Pattern::new(pattern.graph().star_subgraph(v)?)?;
    Ok(count_embeddings(&star, host, &[(v, w)], None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Pattern {
        Pattern::from_edges(2, 3, [[0, 1], [0, 2], [1, 2]]).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let h = Hypergraph::new(3, 6, [[0, 1, 2], [2, 3, 4], [1, 4, 5]]).unwrap();
        let e = Pattern::single_edge(3).unwrap();
        let all = enumerate_embeddings(&e, &h, None);
        assert_eq!(all.len(), 6 * 3);
        assert!(all.windows(2).all(|w| w[0].map < w[1].map));
        assert!(enumerate_embeddings(&e, &Hypergraph::empty(3, 6).unwrap(), None).is_empty());
        let k4 = Hypergraph::complete(4, 2).unwrap();
        assert_eq!(enumerate_embeddings(&k3(), &k4, None).len(), 24);
        assert_eq!(enumerate_embeddings(&k3(), &k4, Some(5)).len(), 5);
    }

    #[test]
    fn rooted_counts() {
        let e = Pattern::single_edge(3).unwrap();
        let k7 = Hypergraph::complete(7, 3).unwrap();
        assert_eq!(count_rooted(&e, 0, &k7, 3).unwrap(), 30);
        let h = Hypergraph::new(3, 6, [[0, 1, 2]]).unwrap();
        assert_eq!(count_rooted(&e, 1, &h, 5).unwrap(), 0);
    }

    #[test]
    fn isolated_vertices_are_counted_combinatorially() {
        // one 2-edge plus an isolated vertex, in K_5: 5*4 ordered edges * 3 choices
        let f = Pattern::from_edges(2, 3, [[0, 1]]).unwrap();
        let k5 = Hypergraph::complete(5, 2).unwrap();
        assert_eq!(count_embeddings(&f, &k5, &[], None), 60);
        assert_eq!(enumerate_embeddings(&f, &k5, None).len(), 60);
    }

    #[test]
    fn anchors_and_restriction() {
        let k5 = Hypergraph::complete(5, 2).unwrap();
        let mut allowed = FixedBitSet::with_capacity(5);
        allowed.insert_range(0..3);
        let n = count_embeddings(&k3(), &k5, &[(0, 1)], Some(&allowed));
        assert_eq!(n, 2);
    }
}
