//! Immutable k-uniform hypergraphs on the vertex set `0..n`.
//!
//! Edges are kept as strictly increasing k-tuples in one flat, lexicographically sorted
//! buffer; that buffer is the source of truth. Membership queries go through a colex-rank
//! bitmap when `C(n, k)` is small enough, and through binary search otherwise. Per-vertex
//! incidence bitsets (for `degree`) and 2-shadow neighbourhoods (for embedding search) are
//! built lazily on first use.

use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, for_each_combination, for_each_combination_lex, BinomialTable};
use crate::error::{Error, Result};

/// Largest uniformity accepted anywhere in the crate.
pub const MAX_UNIFORMITY: usize = 16;

const DENSE_LOOKUP_MAX_BITS: u128 = 1 << 27;

/// A strictly increasing list of vertex indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Accepts only strictly increasing input.
    pub fn new(members: Vec<usize>) -> Result<Self> {
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidVertexSet(format!(
                "members must be strictly increasing: {members:?}"
            )));
        }
        Ok(VertexSet(members))
    }

    pub fn from_unsorted<I: IntoIterator<Item = usize>>(members: I) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn range(start: usize, end: usize) -> Self {
        VertexSet((start..end).collect())
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_unsorted(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    /// Fails unless every member is `< n`.
    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::InvalidVertexSet(format!(
                "vertex {v} out of range for n = {n}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn to_bitset(&self, n: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(n);
        for &v in &self.0 {
            bits.insert(v);
        }
        bits
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

#[derive(Clone)]
enum Lookup {
    Dense { table: BinomialTable, bits: FixedBitSet },
    Sorted,
}

/// A k-uniform hypergraph with vertices `0..n`.
#[derive(Clone)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<usize>,
    lookup: Lookup,
    shadow: OnceLock<Vec<FixedBitSet>>,
    incidence: OnceLock<Vec<FixedBitSet>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("k", &self.k)
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

fn check_uniformity(k: usize) -> Result<()> {
    if k == 0 || k > MAX_UNIFORMITY {
        return Err(Error::InvalidArity(format!(
            "uniformity must lie in 1..={MAX_UNIFORMITY}, got {k}"
        )));
    }
    Ok(())
}

impl Hypergraph {
    /// Builds a hypergraph from arbitrary edge lists. Each edge is sorted; edges must have
    /// exactly `k` distinct vertices below `n`, and no edge may appear twice.
    pub fn new<I, E>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        check_uniformity(k)?;
        let mut flat = Vec::new();
        let mut scratch = Vec::with_capacity(k);
        for e in edges {
            let e = e.as_ref();
            scratch.clear();
            scratch.extend_from_slice(e);
            scratch.sort_unstable();
            validate_edge(k, n, &scratch)?;
            flat.extend_from_slice(&scratch);
        }
        let flat = sort_flat(k, flat, true)?;
        Ok(Self::from_sorted_flat(k, n, flat))
    }

    /// Like [`Hypergraph::new`] but silently merges duplicate edges.
    pub fn from_edges_dedup<I, E>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        check_uniformity(k)?;
        let mut flat = Vec::new();
        let mut scratch = Vec::with_capacity(k);
        for e in edges {
            scratch.clear();
            scratch.extend_from_slice(e.as_ref());
            scratch.sort_unstable();
            validate_edge(k, n, &scratch)?;
            flat.extend_from_slice(&scratch);
        }
        let flat = sort_flat(k, flat, false)?;
        Ok(Self::from_sorted_flat(k, n, flat))
    }

    pub fn empty(k: usize, n: usize) -> Result<Self> {
        check_uniformity(k)?;
        Ok(Self::from_sorted_flat(k, n, Vec::new()))
    }

    /// The complete k-graph `K_n^(k)`.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        check_uniformity(k)?;
        if n < k {
            return Err(Error::InvalidArity(format!(
                "complete graph needs n >= k, got n = {n}, k = {k}"
            )));
        }
        let total = binomial(n, k);
        if total > 50_000_000 {
            return Err(Error::GuardExceeded(format!("C({n},{k}) = {total} edges")));
        }
        let mut flat = Vec::with_capacity(total as usize * k);
        for_each_combination_lex(n, k, |c| {
            flat.extend_from_slice(c);
            true
        });
        Ok(Self::from_sorted_flat(k, n, flat))
    }

    /// `flat` must already be lexicographically sorted, duplicate free and valid.
    pub(crate) fn from_sorted_flat(k: usize, n: usize, flat: Vec<usize>) -> Self {
        let lookup = if binomial(n, k) <= DENSE_LOOKUP_MAX_BITS {
            let table = BinomialTable::new(n, k);
            let mut bits = FixedBitSet::with_capacity(binomial(n, k) as usize);
            for e in flat.chunks_exact(k) {
                bits.insert(table.colex_rank(e) as usize);
            }
            Lookup::Dense { table, bits }
        } else {
            Lookup::Sorted
        };
        Hypergraph {
            k,
            n,
            edges: flat,
            lookup,
            shadow: OnceLock::new(),
            incidence: OnceLock::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len() / self.k
    }

    pub fn is_edgeless(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> std::slice::ChunksExact<'_, usize> {
        self.edges.chunks_exact(self.k)
    }

    pub fn edge(&self, i: usize) -> &[usize] {
        &self.edges[i * self.k..(i + 1) * self.k]
    }

    pub fn edge_vecs(&self) -> Vec<Vec<usize>> {
        self.edges().map(|e| e.to_vec()).collect()
    }

    /// Membership for a strictly increasing tuple.
    pub fn has_edge(&self, sorted: &[usize]) -> bool {
        if sorted.len() != self.k || sorted.iter().any(|&v| v >= self.n) {
            return false;
        }
        match &self.lookup {
            Lookup::Dense { table, bits } => bits.contains(table.colex_rank(sorted) as usize),
            Lookup::Sorted => self.find_edge(sorted).is_some(),
        }
    }

    /// Membership for a tuple in any order; repeated vertices never form an edge.
    pub fn has_edge_unsorted(&self, e: &[usize]) -> bool {
        if e.len() != self.k {
            return false;
        }
        let mut buf = [0usize; MAX_UNIFORMITY];
        let buf = &mut buf[..e.len()];
        buf.copy_from_slice(e);
        buf.sort_unstable();
        if buf.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        self.has_edge(buf)
    }

    fn find_edge(&self, sorted: &[usize]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.num_edges());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edge(mid).cmp(sorted) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    fn incidence(&self) -> &[FixedBitSet] {
        self.incidence.get_or_init(|| {
            let m = self.num_edges();
            let mut inc = vec![FixedBitSet::with_capacity(m); self.n];
            for (i, e) in self.edges().enumerate() {
                for &v in e {
                    inc[v].insert(i);
                }
            }
            inc
        })
    }

    /// Vertices sharing at least one edge with `v`.
    pub fn shadow(&self, v: usize) -> &FixedBitSet {
        &self.shadows()[v]
    }

    pub(crate) fn shadows(&self) -> &[FixedBitSet] {
        self.shadow.get_or_init(|| {
            let mut sh = vec![FixedBitSet::with_capacity(self.n); self.n];
            for e in self.edges() {
                for &u in e {
                    for &w in e {
                        if u != w {
                            sh[u].insert(w);
                        }
                    }
                }
            }
            sh
        })
    }

    /// Number of edges containing every vertex of `s`; requires `1 <= |s| <= k - 1`.
    pub fn degree(&self, s: &VertexSet) -> Result<usize> {
        if s.is_empty() || s.len() >= self.k {
            return Err(Error::InvalidArity(format!(
                "degree needs 1 <= |S| <= k - 1 = {}, got |S| = {}",
                self.k.saturating_sub(1),
                s.len()
            )));
        }
        s.check_within(self.n)?;
        let inc = self.incidence();
        let members = s.members();
        if members.len() == 1 {
            return Ok(inc[members[0]].count_ones(..));
        }
        if members.len() == 2 {
            return Ok(inc[members[0]].intersection_count(&inc[members[1]]));
        }
        let mut acc = inc[members[0]].clone();
        for &v in &members[1..] {
            acc.intersect_with(&inc[v]);
        }
        Ok(acc.count_ones(..))
    }

    /// Degree of every vertex, by a single pass over the edges.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &v in &self.edges {
            deg[v] += 1;
        }
        deg
    }

    /// Minimum d-degree over all d-subsets; requires `1 <= d <= k - 1` and `n >= d`.
    pub fn min_degree(&self, d: usize) -> Result<usize> {
        if d == 0 || d >= self.k {
            return Err(Error::InvalidArity(format!(
                "minimum d-degree needs 1 <= d <= k - 1 = {}, got d = {d}",
                self.k.saturating_sub(1)
            )));
        }
        if self.n < d {
            return Err(Error::InvalidArity(format!(
                "no {d}-subsets in a {}-vertex hypergraph",
                self.n
            )));
        }
        if d == 1 {
            return Ok(self.vertex_degrees().into_iter().min().unwrap_or(0));
        }
        let inc = self.incidence();
        let mut best = usize::MAX;
        let mut acc = FixedBitSet::with_capacity(self.num_edges());
        for_each_combination(self.n, d, |c| {
            acc.clone_from(&inc[c[0]]);
            for &v in &c[1..] {
                acc.intersect_with(&inc[v]);
            }
            best = best.min(acc.count_ones(..));
            best > 0
        });
        Ok(best)
    }

    /// The subgraph induced on `s`, relabelled order-preservingly to `0..|s|`.
    pub fn induced(&self, s: &VertexSet) -> Result<Hypergraph> {
        s.check_within(self.n)?;
        let members = s.members();
        let k = self.k;
        let mut flat = Vec::new();
        if binomial(members.len(), k) <= self.num_edges() as u128 {
            let mut image = Vec::with_capacity(k);
            for_each_combination_lex(members.len(), k, |c| {
                image.clear();
                image.extend(c.iter().map(|&i| members[i]));
                if self.has_edge(&image) {
                    flat.extend_from_slice(c);
                }
                true
            });
        } else {
            let mut position = vec![usize::MAX; self.n];
            for (i, &v) in members.iter().enumerate() {
                position[v] = i;
            }
            for e in self.edges() {
                if e.iter().all(|&v| position[v] != usize::MAX) {
                    flat.extend(e.iter().map(|&v| position[v]));
                }
            }
        }
        Ok(Hypergraph::from_sorted_flat(k, members.len(), flat))
    }

    /// Edge-set union of two hypergraphs on the same vertex set.
    pub fn union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if self.k != other.k || self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "union of (k={}, n={}) and (k={}, n={})",
                self.k, self.n, other.k, other.n
            )));
        }
        let k = self.k;
        let mut flat = Vec::with_capacity(self.edges.len() + other.edges.len());
        let (mut a, mut b) = (self.edges().peekable(), other.edges().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.cmp(y) {
                    std::cmp::Ordering::Less => flat.extend_from_slice(a.next().unwrap()),
                    std::cmp::Ordering::Greater => flat.extend_from_slice(b.next().unwrap()),
                    std::cmp::Ordering::Equal => {
                        flat.extend_from_slice(a.next().unwrap());
                        b.next();
                    }
                },
                (Some(_), None) => flat.extend_from_slice(a.next().unwrap()),
                (None, Some(_)) => flat.extend_from_slice(b.next().unwrap()),
                (None, None) => break,
            }
        }
        Ok(Hypergraph::from_sorted_flat(k, self.n, flat))
    }

    /// The (k-1)-uniform link of `v` on the other `n - 1` vertices (relabelled in order).
    pub fn link(&self, v: usize) -> Result<Hypergraph> {
        if self.k < 2 {
            return Err(Error::InvalidArity("link needs k >= 2".into()));
        }
        if v >= self.n {
            return Err(Error::InvalidVertexSet(format!("vertex {v} out of range")));
        }
        let relabel = |u: usize| if u > v { u - 1 } else { u };
        let edges: Vec<Vec<usize>> = self
            .edges()
            .filter(|e| e.contains(&v))
            .map(|e| e.iter().filter(|&&u| u != v).map(|&u| relabel(u)).collect())
            .collect();
        Hypergraph::new(self.k - 1, self.n - 1, edges)
    }

    /// Spanning subgraph keeping exactly the edges that contain `v`.
    pub fn star_subgraph(&self, v: usize) -> Result<Hypergraph> {
        if v >= self.n {
            return Err(Error::InvalidVertexSet(format!("vertex {v} out of range")));
        }
        let flat: Vec<usize> = self
            .edges()
            .filter(|e| e.contains(&v))
            .flat_map(|e| e.iter().copied())
            .collect();
        Ok(Hypergraph::from_sorted_flat(self.k, self.n, flat))
    }

    /// Serialises to the `khg/1` text format.
    pub fn to_khg(&self) -> String {
        let mut out = format!("{} {} {}\n", self.k, self.n, self.num_edges());
        for e in self.edges() {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the `khg/1` text format: a header `k n m` followed by `m` lines of `k`
    /// ascending vertex indices. Blank lines are ignored.
    pub fn parse_khg(text: &str) -> Result<Hypergraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header `k n m`".into(),
        })?;
        let nums = parse_numbers(hline, header)?;
        if nums.len() != 3 {
            return Err(Error::Parse {
                line: hline,
                message: format!("header needs 3 integers `k n m`, found {}", nums.len()),
            });
        }
        let (k, n, m) = (nums[0], nums[1], nums[2]);
        if k == 0 || k > MAX_UNIFORMITY {
            return Err(Error::Parse {
                line: hline,
                message: format!("uniformity {k} outside 1..={MAX_UNIFORMITY}"),
            });
        }
        let mut flat = Vec::with_capacity(m * k);
        let mut seen = std::collections::HashSet::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = lines.next().ok_or(Error::Parse {
                line: text.lines().count() + 1,
                message: format!("expected {m} edge lines"),
            })?;
            let e = parse_numbers(ln, line)?;
            if e.len() != k {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("edge has {} vertices, expected {k}", e.len()),
                });
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("vertex {v} out of range for n = {n}"),
                });
            }
            if e.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse {
                    line: ln,
                    message: "edge vertices must be strictly ascending".into(),
                });
            }
            if !seen.insert(e.clone()) {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("duplicate edge {e:?}"),
                });
            }
            flat.extend_from_slice(&e);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse {
                line: ln,
                message: format!("trailing content after {m} edges"),
            });
        }
        let flat = sort_flat(k, flat, true)?;
        Ok(Hypergraph::from_sorted_flat(k, n, flat))
    }
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("not a non-negative integer: {tok:?}"),
            })
        })
        .collect()
}

fn validate_edge(k: usize, n: usize, sorted: &[usize]) -> Result<()> {
    if sorted.len() != k {
        return Err(Error::InvalidEdge {
            edge: sorted.to_vec(),
            reason: format!("expected {k} vertices"),
        });
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidEdge {
            edge: sorted.to_vec(),
            reason: "repeated vertex".into(),
        });
    }
    if let Some(&v) = sorted.last() {
        if v >= n {
            return Err(Error::InvalidEdge {
                edge: sorted.to_vec(),
                reason: format!("vertex {v} out of range for n = {n}"),
            });
        }
    }
    Ok(())
}

/// Sorts flat k-tuples lexicographically; duplicates are an error or merged.
fn sort_flat(k: usize, flat: Vec<usize>, reject_duplicates: bool) -> Result<Vec<usize>> {
    let m = flat.len() / k;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_unstable_by(|&a, &b| flat[a * k..(a + 1) * k].cmp(&flat[b * k..(b + 1) * k]));
    let mut out = Vec::with_capacity(flat.len());
    let mut prev: Option<usize> = None;
    for i in order {
        let e = &flat[i * k..(i + 1) * k];
        if let Some(p) = prev {
            if &flat[p * k..(p + 1) * k] == e {
                if reject_duplicates {
                    return Err(Error::DuplicateEdge(e.to_vec()));
                }
                continue;
            }
        }
        out.extend_from_slice(e);
        prev = Some(i);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::new(v.to_vec()).unwrap()
    }

    fn split_host_6() -> Hypergraph {
        // all triples meeting A = {0, 1}
        let mut edges = Vec::new();
        for_each_combination_lex(6, 3, |c| {
            if c[0] < 2 {
                edges.push(c.to_vec());
            }
            true
        });
        Hypergraph::new(3, 6, edges).unwrap()
    }

    #[test]
    fn degree_examples() {
        let k6 = Hypergraph::complete(6, 3).unwrap();
        assert_eq!(k6.degree(&vs(&[0])).unwrap(), 10);
        let empty = Hypergraph::empty(3, 6).unwrap();
        assert_eq!(empty.degree(&vs(&[0, 1])).unwrap(), 0);
        assert_eq!(split_host_6().degree(&vs(&[2, 3])).unwrap(), 2);
    }

    #[test]
    fn degree_rejects_bad_arity() {
        let k6 = Hypergraph::complete(6, 3).unwrap();
        assert!(matches!(k6.degree(&vs(&[])), Err(Error::InvalidArity(_))));
        assert!(matches!(k6.degree(&vs(&[0, 1, 2])), Err(Error::InvalidArity(_))));
    }

    #[test]
    fn min_degree_examples() {
        let k7 = Hypergraph::complete(7, 3).unwrap();
        assert_eq!(k7.min_degree(1).unwrap(), 15);
        assert_eq!(k7.min_degree(2).unwrap(), 5);
        let path = Hypergraph::new(2, 3, [[0, 1], [1, 2]]).unwrap();
        assert_eq!(path.min_degree(1).unwrap(), 1);
        assert!(k7.min_degree(3).is_err());
        assert!(k7.min_degree(0).is_err());
    }

    #[test]
    fn induced_examples() {
        let k6 = Hypergraph::complete(6, 3).unwrap();
        let k4 = Hypergraph::complete(4, 3).unwrap();
        assert_eq!(k6.induced(&vs(&[1, 2, 4, 5])).unwrap(), k4);
        assert!(k6.induced(&vs(&[0, 5])).unwrap().is_edgeless());
        // host with A = {0}: B spans nothing
        let mut edges = Vec::new();
        for_each_combination_lex(6, 3, |c| {
            if c[0] == 0 {
                edges.push(c.to_vec());
            }
            true
        });
        let host = Hypergraph::new(3, 6, edges).unwrap();
        assert!(host.induced(&VertexSet::range(1, 6)).unwrap().is_edgeless());
    }

    #[test]
    fn induced_relabels_in_order() {
        let h = Hypergraph::new(2, 5, [[1, 3], [3, 4], [0, 2]]).unwrap();
        let sub = h.induced(&vs(&[1, 3, 4])).unwrap();
        assert_eq!(sub.edge_vecs(), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn union_examples() {
        let g = Hypergraph::new(3, 5, [[0, 1, 2], [1, 2, 3]]).unwrap();
        let h = Hypergraph::new(3, 5, [[0, 3, 4]]).unwrap();
        let e = Hypergraph::empty(3, 5).unwrap();
        assert_eq!(g.union(&g).unwrap(), g);
        assert_eq!(g.union(&e).unwrap(), g);
        assert_eq!(g.union(&h).unwrap().num_edges(), 3);
        let other_k = Hypergraph::empty(2, 5).unwrap();
        assert!(matches!(g.union(&other_k), Err(Error::ShapeMismatch(_))));
        let other_n = Hypergraph::empty(3, 6).unwrap();
        assert!(g.union(&other_n).is_err());
    }

    #[test]
    fn link_examples() {
        let k4 = Hypergraph::complete(4, 3).unwrap();
        for v in 0..4 {
            assert_eq!(k4.link(v).unwrap(), Hypergraph::complete(3, 2).unwrap());
        }
        let iso = Hypergraph::new(3, 5, [[0, 1, 2]]).unwrap();
        assert!(iso.link(4).unwrap().is_edgeless());
        // K4^(3)- : vertex 0 lies in all three edges
        let k4m = Hypergraph::new(3, 4, [[0, 1, 2], [0, 1, 3], [0, 2, 3]]).unwrap();
        let l = k4m.link(0).unwrap();
        assert_eq!(l.n(), 3);
        assert_eq!(l.num_edges(), 3);
    }

    #[test]
    fn star_examples() {
        let e = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(e.star_subgraph(1).unwrap(), e);
        let f = Hypergraph::new(3, 4, [[0, 1, 2]]).unwrap();
        let s = f.star_subgraph(3).unwrap();
        assert!(s.is_edgeless());
        assert_eq!(s.n(), 4);
        let k3 = Hypergraph::complete(3, 2).unwrap();
        assert_eq!(k3.star_subgraph(0).unwrap().num_edges(), 2);
    }

    #[test]
    fn complete_examples() {
        assert_eq!(Hypergraph::complete(5, 3).unwrap().num_edges(), 10);
        assert_eq!(Hypergraph::complete(4, 4).unwrap().num_edges(), 1);
        assert_eq!(Hypergraph::complete(6, 3).unwrap().min_degree(1).unwrap(), 10);
        assert!(Hypergraph::complete(2, 3).is_err());
    }

    #[test]
    fn constructor_rejects_invalid_edges() {
        assert!(matches!(
            Hypergraph::new(3, 4, [[0, 1, 4]]),
            Err(Error::InvalidEdge { .. })
        ));
        assert!(matches!(
            Hypergraph::new(3, 4, [[0, 1, 1]]),
            Err(Error::InvalidEdge { .. })
        ));
        assert!(matches!(
            Hypergraph::new(3, 4, [[0, 1, 2], [2, 1, 0]]),
            Err(Error::DuplicateEdge(_))
        ));
        let merged = Hypergraph::from_edges_dedup(3, 4, [[0, 1, 2], [2, 1, 0]]).unwrap();
        assert_eq!(merged.num_edges(), 1);
    }

    #[test]
    fn khg_round_trip_and_errors() {
        let h = Hypergraph::new(3, 6, [[0, 1, 2], [3, 4, 5], [0, 2, 5]]).unwrap();
        let text = h.to_khg();
        assert_eq!(text, "3 6 3\n0 1 2\n0 2 5\n3 4 5\n");
        assert_eq!(Hypergraph::parse_khg(&text).unwrap(), h);

        let dup = "3 6 2\n0 1 2\n0 1 2\n";
        assert!(matches!(Hypergraph::parse_khg(dup), Err(Error::Parse { line: 3, .. })));
        let range = "3 6 1\n0 1 6\n";
        assert!(matches!(Hypergraph::parse_khg(range), Err(Error::Parse { line: 2, .. })));
        let order = "2 4 1\n3 1\n";
        assert!(matches!(Hypergraph::parse_khg(order), Err(Error::Parse { line: 2, .. })));
        let short = "2 4 2\n0 1\n";
        assert!(matches!(Hypergraph::parse_khg(short), Err(Error::Parse { .. })));
        let junk = "2 4 x\n";
        assert!(matches!(Hypergraph::parse_khg(junk), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn sorted_lookup_path_matches_dense() {
        // C(300, 4) exceeds the dense-bitmap limit, forcing binary search
        let h = Hypergraph::new(4, 300, [[0, 1, 2, 3], [5, 100, 200, 299], [1, 2, 3, 4]]).unwrap();
        assert!(matches!(h.lookup, Lookup::Sorted));
        assert!(h.has_edge(&[5, 100, 200, 299]));
        assert!(h.has_edge_unsorted(&[299, 5, 200, 100]));
        assert!(!h.has_edge(&[0, 1, 2, 4]));
    }
}
