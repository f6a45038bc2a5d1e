//! Absorber predicates and the two-phase simple-absorber search.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{count_rooted, has_factor, Embedding, Matcher, SearchOrder, Tiling};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::pattern::{link_is_partite, Pattern};
use crate::random::PerturbedInstance;

/// `b` disjoint blocks `A_1..A_b` of `b` vertices each, with a labelling `s_1..s_b` of `S`.
/// The last vertex of each block is its diagonal vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorberStructure {
    pub blocks: Vec<Vec<usize>>,
    pub s: Vec<usize>,
}

impl AbsorberStructure {
    /// `A_{b+1}`: the last vertex of every block.
    pub fn diagonal(&self) -> Vec<usize> {
        self.blocks.iter().map(|blk| *blk.last().expect("non-empty block")).collect()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::from_unsorted(self.blocks.iter().flatten().copied())
    }

    pub fn validate(&self, n: usize, b: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedStructure(msg));
        if self.s.len() != b || self.blocks.len() != b {
            return bad(format!("need {b} blocks and |S| = {b}"));
        }
        let mut seen = vec![false; n];
        for &v in self.s.iter().chain(self.blocks.iter().flatten()) {
            if v >= n {
                return bad(format!("vertex {v} out of range"));
            }
            if std::mem::replace(&mut seen[v], true) {
                return bad(format!("vertex {v} used twice"));
            }
        }
        if self.blocks.iter().any(|blk| blk.len() != b) {
            return bad(format!("every block needs {b} vertices"));
        }
        Ok(())
    }
}

fn spans_copy(f: &Pattern, h: &Hypergraph, set: &[usize]) -> bool {
    if set.len() != f.b() {
        return false;
    }
    let allowed = VertexSet::from_unsorted(set.iter().copied()).to_bitset(h.n());
    Matcher::new(f, h, SearchOrder::Connected).restrict_to(&allowed).first().is_some()
}

fn copy_on(f: &Pattern, h: &Hypergraph, set: &[usize]) -> Option<Embedding> {
    let allowed = VertexSet::from_unsorted(set.iter().copied()).to_bitset(h.n());
    Matcher::new(f, h, SearchOrder::Connected).restrict_to(&allowed).first()
}

/// `A` absorbs `S` when both `H[A]` and `H[A ∪ S]` have F-factors.
pub fn is_absorber(h: &Hypergraph, s: &VertexSet, a: &VertexSet, f: &Pattern) -> Result<bool> {
    s.check_within(h.n())?;
    a.check_within(h.n())?;
    if s.len() != f.b() {
        return Err(Error::InvalidVertexSet(format!("|S| must be {}", f.b())));
    }
    if a.is_empty() || !a.len().is_multiple_of(f.b()) {
        return Err(Error::InvalidVertexSet(format!(
            "|A| = {} must be a positive multiple of {}",
            a.len(),
            f.b()
        )));
    }
    if !a.is_disjoint(s) {
        return Err(Error::InvalidVertexSet("A and S intersect".into()));
    }
    Ok(has_factor(f, &h.induced(a)?).is_factor() && has_factor(f, &h.induced(&a.union(s))?).is_factor())
}

/// Checks the `2b + 1` copy conditions for the given labelling of `S`.
pub fn is_simple_absorber(h: &Hypergraph, structure: &AbsorberStructure, f: &Pattern) -> Result<bool> {
    structure.validate(h.n(), f.b())?;
    for (i, blk) in structure.blocks.iter().enumerate() {
        if !spans_copy(f, h, blk) {
            return Ok(false);
        }
        let mut swapped = blk[..blk.len() - 1].to_vec();
        swapped.push(structure.s[i]);
        if !spans_copy(f, h, &swapped) {
            return Ok(false);
        }
    }
    Ok(spans_copy(f, h, &structure.diagonal()))
}

/// Tries every labelling of `S`; returns the first that works.
pub fn simple_absorber_labelling(h: &Hypergraph, s: &[usize], blocks: &[Vec<usize>], f: &Pattern) -> Result<Option<AbsorberStructure>> {
    let candidate = AbsorberStructure {
        blocks: blocks.to_vec(),
        s: s.to_vec(),
    };
    candidate.validate(h.n(), f.b())?;
    let b = f.b();
    // block i accepts s_j when {s_j} ∪ (A_i minus its diagonal vertex) spans a copy
    let fits: Vec<Vec<bool>> = blocks
        .iter()
        .map(|blk| {
            s.iter()
                .map(|&x| {
                    let mut set = blk[..b - 1].to_vec();
                    set.push(x);
                    spans_copy(f, h, &set)
                })
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..b).collect();
    let mut found = None;
    permute(&mut order, 0, &mut |perm| {
        if perm.iter().enumerate().all(|(i, &j)| fits[i][j]) {
            found = Some(perm.iter().map(|&j| s[j]).collect::<Vec<_>>());
            true
        } else {
            false
        }
    });
    let Some(labelling) = found else { return Ok(None) };
    let structure = AbsorberStructure {
        blocks: blocks.to_vec(),
        s: labelling,
    };
    Ok(is_simple_absorber(h, &structure, f)?.then_some(structure))
}

fn permute(items: &mut [usize], start: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if start == items.len() {
        return visit(items);
    }
    for i in start..items.len() {
        items.swap(start, i);
        let done = permute(items, start + 1, visit);
        items.swap(start, i);
        if done {
            return true;
        }
    }
    false
}

/// The two F-factors a simple absorber provides: on `A`, and on `A ∪ S`.
pub fn simple_absorber_tilings(h: &Hypergraph, structure: &AbsorberStructure, f: &Pattern) -> Option<(Tiling, Tiling)> {
    let b = f.b();
    let mut without = Tiling::default();
    let mut with = Tiling::default();
    for (i, blk) in structure.blocks.iter().enumerate() {
        without.copies.push(copy_on(f, h, blk)?);
        let mut swapped = blk[..b - 1].to_vec();
        swapped.push(structure.s[i]);
        with.copies.push(copy_on(f, h, &swapped)?);
    }
    with.copies.push(copy_on(f, h, &structure.diagonal())?);
    Some((without, with))
}

/// Picks the root vertex for the search: among vertices with a partite link (all vertices
/// if there are none), the one maximising the smallest rooted-copy count over `roots`.
pub fn choose_root(f: &Pattern, host: &Hypergraph, roots: &[usize]) -> Result<usize> {
    let mut candidates = Vec::new();
    for v in 0..f.b() {
        if link_is_partite(f, v)? {
            candidates.push(v);
        }
    }
    if candidates.is_empty() {
        candidates = (0..f.b()).collect();
    }
    let mut best: Option<(u128, usize)> = None;
    for v in candidates {
        let mut worst = u128::MAX;
        for &w in roots {
            worst = worst.min(count_rooted(f, v, host, w)?);
        }
        if best.is_none_or(|(score, _)| worst > score) {
            best = Some((worst, v));
        }
    }
    Ok(best.expect("pattern has a vertex").1)
}

/// Limits for [`find_simple_absorber`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimpleSearchOptions {
    /// Root vertex; chosen by [`choose_root`] when `None`.
    pub root: Option<usize>,
    /// Rooted copies tried per block.
    pub per_block: usize,
    /// Diagonal embeddings examined per block choice.
    pub diagonal_budget: usize,
}

impl Default for SimpleSearchOptions {
    fn default() -> Self {
        SimpleSearchOptions {
            root: None,
            per_block: 4,
            diagonal_budget: 10_000,
        }
    }
}

/// Finds a simple `S`-absorber avoiding `forbidden`, labelling `S` in the given order.
///
/// Phase one uses host edges only: for each `s_i` it picks a copy of the root star `F_{v*}`
/// mapping `v*` to `s_i`, whose remaining edges are present in the union. Phase two picks
/// one fresh vertex per block to play `v*` inside the block, such that all block edges are
/// present and the fresh vertices span a copy of `F`.
pub fn find_simple_absorber(
    instance: &PerturbedInstance,
    s: &[usize],
    f: &Pattern,
    forbidden: &VertexSet,
    options: &SimpleSearchOptions,
) -> Result<Option<AbsorberStructure>> {
    let (n, b) = (instance.union.n(), f.b());
    if s.len() != b {
        return Err(Error::InvalidVertexSet(format!("|S| must be {b}")));
    }
    let s_set = VertexSet::from_unsorted(s.iter().copied());
    if s_set.len() != b {
        return Err(Error::InvalidVertexSet("S has repeated vertices".into()));
    }
    s_set.check_within(n)?;
    forbidden.check_within(n)?;
    if !forbidden.is_disjoint(&s_set) {
        return Err(Error::InvalidVertexSet("forbidden set meets S".into()));
    }
    let root = match options.root {
        Some(r) => r,
        None => choose_root(f, &instance.host, s)?,
    };
    let mut blocked = forbidden.to_bitset(n);
    for &x in s {
        blocked.insert(x);
    }
    let mut search = SimpleSearch {
        instance,
        f,
        s,
        root,
        options,
        rests: Vec::new(),
        maps: Vec::new(),
    };
    let found = search.pick_block(0, &mut blocked);
    let Some(structure) = found else { return Ok(None) };
    if !is_simple_absorber(&instance.union, &structure, f)? {
        return Err(Error::MalformedStructure("simple absorber failed self-verification".into()));
    }
    Ok(Some(structure))
}

struct SimpleSearch<'a> {
    instance: &'a PerturbedInstance,
    f: &'a Pattern,
    s: &'a [usize],
    root: usize,
    options: &'a SimpleSearchOptions,
    /// Per block: images of the non-root pattern vertices.
    rests: Vec<Vec<usize>>,
    maps: Vec<Vec<usize>>,
}

impl SimpleSearch<'_> {
    fn pick_block(&mut self, i: usize, blocked: &mut FixedBitSet) -> Option<AbsorberStructure> {
        if i == self.f.b() {
            return self.pick_diagonal(blocked);
        }
        let n = self.instance.union.n();
        let mut allowed = FixedBitSet::with_capacity(n);
        allowed.insert_range(..);
        allowed.difference_with(blocked);
        allowed.insert(self.s[i]);
        let host = &self.instance.host;
        let root_edges: Vec<&[usize]> = self.f.graph().edges().filter(|e| e.contains(&self.root)).collect();
        let mut options: Vec<Vec<usize>> = Vec::new();
        Matcher::with_anchors(self.f, &self.instance.union, SearchOrder::Connected, &[(self.root, self.s[i])])
            .restrict_to(&allowed)
            .for_each(|m| {
                let in_host = root_edges.iter().all(|e| {
                    let img: Vec<usize> = e.iter().map(|&u| m[u]).collect();
                    host.has_edge_unsorted(&img)
                });
                if in_host {
                    options.push(m.to_vec());
                }
                options.len() < self.options.per_block
            });
        for map in options {
            let rest: Vec<usize> = (0..self.f.b()).filter(|&u| u != self.root).map(|u| map[u]).collect();
            for &v in &rest {
                blocked.insert(v);
            }
            self.rests.push(rest);
            self.maps.push(map);
            if let Some(found) = self.pick_block(i + 1, blocked) {
                return Some(found);
            }
            self.maps.pop();
            let rest = self.rests.pop().expect("pushed above");
            for v in rest {
                blocked.set(v, false);
            }
        }
        None
    }

    fn pick_diagonal(&self, blocked: &FixedBitSet) -> Option<AbsorberStructure> {
        let union = &self.instance.union;
        let n = union.n();
        let b = self.f.b();
        // fresh vertices able to play the root inside each block
        let fits: Vec<FixedBitSet> = self
            .maps
            .iter()
            .map(|map| {
                let mut ok = FixedBitSet::with_capacity(n);
                let mut image = map.clone();
                for w in 0..n {
                    if blocked.contains(w) {
                        continue;
                    }
                    image[self.root] = w;
                    let all = self.f.graph().edges().filter(|e| e.contains(&self.root)).all(|e| {
                        let img: Vec<usize> = e.iter().map(|&u| image[u]).collect();
                        union.has_edge_unsorted(&img)
                    });
                    if all {
                        ok.insert(w);
                    }
                }
                ok
            })
            .collect();
        let mut pool = FixedBitSet::with_capacity(n);
        for set in &fits {
            pool.union_with(set);
        }
        let mut seen = 0usize;
        let mut result = None;
        Matcher::new(self.f, union, SearchOrder::Connected)
            .restrict_to(&pool)
            .for_each(|m| {
                seen += 1;
                let mut image = m.to_vec();
                image.sort_unstable();
                if let Some(assign) = assign_to_blocks(&image, &fits, b) {
                    result = Some(assign);
                    return false;
                }
                seen < self.options.diagonal_budget
            });
        let assign = result?;
        let blocks = (0..b)
            .map(|i| {
                let mut blk = self.rests[i].clone();
                blk.push(assign[i]);
                blk
            })
            .collect();
        Some(AbsorberStructure {
            blocks,
            s: self.s.to_vec(),
        })
    }
}

/// A bijection giving block `i` a vertex of `image` inside `fits[i]`.
fn assign_to_blocks(image: &[usize], fits: &[FixedBitSet], b: usize) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..b).collect();
    let mut out = None;
    permute(&mut order, 0, &mut |perm| {
        if (0..b).all(|i| fits[i].contains(image[perm[i]])) {
            out = Some((0..b).map(|i| image[perm[i]]).collect());
            true
        } else {
            false
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{perturb, SeededSampler};

    #[test]
    fn edge_absorber_example() {
        let e = Pattern::single_edge(3).unwrap();
        let h = Hypergraph::new(3, 6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        let s = VertexSet::new(vec![0, 1, 2]).unwrap();
        let a = VertexSet::new(vec![3, 4, 5]).unwrap();
        assert!(is_absorber(&h, &s, &a, &e).unwrap());
        let h = Hypergraph::new(3, 6, [[3, 4, 5]]).unwrap();
        assert!(!is_absorber(&h, &s, &a, &e).unwrap());
        assert!(is_absorber(&h, &s, &VertexSet::new(vec![2, 3, 4]).unwrap(), &e).is_err());
    }

    #[test]
    fn complete_host_is_simple_absorber() {
        let e = Pattern::single_edge(3).unwrap();
        let k = Hypergraph::complete(12, 3).unwrap();
        let st = AbsorberStructure {
            blocks: vec![vec![3, 4, 5], vec![6, 7, 8], vec![9, 10, 11]],
            s: vec![0, 1, 2],
        };
        assert!(is_simple_absorber(&k, &st, &e).unwrap());
        // drop the diagonal edge {5, 8, 11}
        let edges: Vec<Vec<usize>> = k.edges().filter(|x| *x != [5, 8, 11]).map(|x| x.to_vec()).collect();
        let h = Hypergraph::new(3, 12, edges).unwrap();
        assert!(!is_simple_absorber(&h, &st, &e).unwrap());
        let (without, with) = simple_absorber_tilings(&k, &st, &e).unwrap();
        assert_eq!(without.copies.len(), 3);
        assert_eq!(with.copies.len(), 4);
    }

    #[test]
    fn finds_absorber_with_complete_random_part() {
        let e = Pattern::single_edge(3).unwrap();
        let host = Hypergraph::complete(15, 3).unwrap();
        let inst = perturb(&host, 1.0, &SeededSampler::new(0, 0)).unwrap();
        let st = find_simple_absorber(&inst, &[0, 1, 2], &e, &VertexSet::empty(), &SimpleSearchOptions::default())
            .unwrap()
            .expect("absorber");
        assert!(is_simple_absorber(&inst.union, &st, &e).unwrap());
        assert!(is_absorber(&inst.union, &VertexSet::range(0, 3), &st.vertices(), &e).unwrap());
    }

    #[test]
    fn empty_graph_has_no_absorber() {
        let e = Pattern::single_edge(3).unwrap();
        let host = Hypergraph::empty(3, 15).unwrap();
        let inst = perturb(&host, 0.0, &SeededSampler::new(0, 0)).unwrap();
        let found = find_simple_absorber(&inst, &[0, 1, 2], &e, &VertexSet::empty(), &SimpleSearchOptions::default()).unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn labelling_search() {
        let e = Pattern::single_edge(2).unwrap();
        // block {2,3} accepts only s = 1, block {4,5} only s = 0
        let h = Hypergraph::new(2, 6, [[2, 3], [4, 5], [1, 2], [0, 4], [3, 5]]).unwrap();
        let st = simple_absorber_labelling(&h, &[0, 1], &[vec![2, 3], vec![4, 5]], &e).unwrap().unwrap();
        assert_eq!(st.s, vec![1, 0]);
    }
}
