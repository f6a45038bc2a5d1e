//! F-factor decision by exact cover over unlabelled copies.
//!
//! Items are host vertices, options are the vertex sets of copies of the pattern's
//! non-isolated part. When the pattern has isolated vertices, a vertex may instead be left
//! "free" to host one of them; at most `(n / b) * isolated` vertices may be free.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::embed::{core_of, Embedding, Matcher, SearchOrder};
use super::Tiling;
use crate::hypergraph::Hypergraph;
use crate::pattern::Pattern;

/// Why no factor exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoFactorReason {
    /// `b` does not divide `n`.
    Divisibility,
    /// The search space was exhausted.
    Exhausted,
}

/// Result of a budgeted factor search.
#[derive(Clone, Debug, PartialEq)]
pub enum FactorOutcome {
    Factor(Tiling),
    NoFactor(NoFactorReason),
    /// The node budget ran out before a decision.
    Unknown { nodes: u64 },
}

impl FactorOutcome {
    pub fn is_factor(&self) -> bool {
        matches!(self, FactorOutcome::Factor(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, FactorOutcome::Unknown { .. })
    }

    pub fn tiling(&self) -> Option<&Tiling> {
        match self {
            FactorOutcome::Factor(t) => Some(t),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FactorOutcome::Factor(_) => "factor",
            FactorOutcome::NoFactor(_) => "no-factor",
            FactorOutcome::Unknown { .. } => "unknown",
        }
    }
}

/// Distinct copies of `pattern` in `host` restricted to `allowed`, as sorted vertex sets in
/// lexicographic order, each with one representative embedding.
pub fn unlabelled_copies(pattern: &Pattern, host: &Hypergraph, allowed: Option<&FixedBitSet>) -> Vec<(Vec<usize>, Embedding)> {
    let mut matcher = Matcher::new(pattern, host, SearchOrder::Connected);
    if let Some(a) = allowed {
        matcher = matcher.restrict_to(a);
    }
    let mut copies: BTreeMap<Vec<usize>, Embedding> = BTreeMap::new();
    let mut key = Vec::with_capacity(pattern.b());
    matcher.for_each(|m| {
        key.clear();
        key.extend_from_slice(m);
        key.sort_unstable();
        if !copies.contains_key(&key) {
            copies.insert(key.clone(), Embedding { map: m.to_vec() });
        }
        true
    });
    copies.into_iter().collect()
}

/// Algorithm X over a fixed option list with per-vertex live-option counts.
pub(crate) struct CoverSearch<'a> {
    options: &'a [Vec<usize>],
    containing: Vec<Vec<usize>>,
    live: Vec<bool>,
    live_count: Vec<usize>,
    covered: FixedBitSet,
    free_slots: usize,
    budget: Option<u64>,
    nodes: u64,
    chosen: Vec<usize>,
    freed: Vec<usize>,
}

pub(crate) enum Search {
    Found,
    Exhausted,
    OutOfBudget,
}

impl<'a> CoverSearch<'a> {
    pub(crate) fn new(n: usize, options: &'a [Vec<usize>], free_slots: usize, budget: Option<u64>) -> Self {
        let mut containing = vec![Vec::new(); n];
        for (i, o) in options.iter().enumerate() {
            for &v in o {
                containing[v].push(i);
            }
        }
        let live_count = containing.iter().map(Vec::len).collect();
        CoverSearch {
            options,
            containing,
            live: vec![true; options.len()],
            live_count,
            covered: FixedBitSet::with_capacity(n),
            free_slots,
            budget,
            nodes: 0,
            chosen: Vec::new(),
            freed: Vec::new(),
        }
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }

    pub(crate) fn solution(&self) -> (&[usize], &[usize]) {
        (&self.chosen, &self.freed)
    }

    /// Covers `v`, killing every live option through it; returns the killed options.
    fn cover_vertex(&mut self, v: usize, killed: &mut Vec<usize>) {
        self.covered.insert(v);
        for idx in 0..self.containing[v].len() {
            let o = self.containing[v][idx];
            if self.live[o] {
                self.live[o] = false;
                for &u in &self.options[o] {
                    self.live_count[u] -= 1;
                }
                killed.push(o);
            }
        }
    }

    fn restore(&mut self, vertices: &[usize], killed: &[usize]) {
        for &o in killed.iter().rev() {
            self.live[o] = true;
            for &u in &self.options[o] {
                self.live_count[u] += 1;
            }
        }
        for &v in vertices {
            self.covered.set(v, false);
        }
    }

    pub(crate) fn run(&mut self) -> Search {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Search::OutOfBudget;
        }
        // uncovered vertex with fewest live options, smallest index on ties
        let n = self.containing.len();
        let mut pick: Option<(usize, usize)> = None;
        for v in 0..n {
            if self.covered.contains(v) {
                continue;
            }
            let c = self.live_count[v];
            if pick.is_none_or(|(_, best)| c < best) {
                pick = Some((v, c));
                if c == 0 {
                    break;
                }
            }
        }
        let Some((v, count)) = pick else {
            return Search::Found;
        };
        if count == 0 && self.free_slots == 0 {
            return Search::Exhausted;
        }
        let candidates: Vec<usize> = self.containing[v].iter().copied().filter(|&o| self.live[o]).collect();
        for o in candidates {
            let mut killed = Vec::new();
            let verts = self.options[o].clone();
            for &u in &verts {
                self.cover_vertex(u, &mut killed);
            }
            self.chosen.push(o);
            match self.run() {
                Search::Found => return Search::Found,
                Search::OutOfBudget => return Search::OutOfBudget,
                Search::Exhausted => {}
            }
            self.chosen.pop();
            self.restore(&verts, &killed);
        }
        if self.free_slots > 0 {
            let mut killed = Vec::new();
            self.cover_vertex(v, &mut killed);
            self.free_slots -= 1;
            self.freed.push(v);
            match self.run() {
                Search::Found => return Search::Found,
                Search::OutOfBudget => return Search::OutOfBudget,
                Search::Exhausted => {}
            }
            self.freed.pop();
            self.free_slots += 1;
            self.restore(&[v], &killed);
        }
        Search::Exhausted
    }
}

/// Decides whether `host` has an F-factor, without a node budget.
pub fn has_factor(pattern: &Pattern, host: &Hypergraph) -> FactorOutcome {
    has_factor_with_budget(pattern, host, None)
}

/// Decides whether `host` has an F-factor; exhausting `budget` search nodes yields
/// [`FactorOutcome::Unknown`].
pub fn has_factor_with_budget(pattern: &Pattern, host: &Hypergraph, budget: Option<u64>) -> FactorOutcome {
    let (n, b) = (host.n(), pattern.b());
    if n % b != 0 {
        return FactorOutcome::NoFactor(NoFactorReason::Divisibility);
    }
    let (core, kept, isolated) = core_of(pattern);
    let free_slots = (n / b) * isolated;
    let copies = match &core {
        Some(c) => unlabelled_copies(c, host, None),
        None => Vec::new(),
    };
    let options: Vec<Vec<usize>> = copies.iter().map(|(set, _)| set.clone()).collect();
    let mut search = CoverSearch::new(n, &options, free_slots, budget);
    match search.run() {
        Search::OutOfBudget => FactorOutcome::Unknown { nodes: search.nodes() },
        Search::Exhausted => FactorOutcome::NoFactor(NoFactorReason::Exhausted),
        Search::Found => {
            let (chosen, freed) = search.solution();
            let cores: Vec<&Embedding> = chosen.iter().map(|&o| &copies[o].1).collect();
            FactorOutcome::Factor(assemble_tiling(pattern, &kept, isolated, &cores, freed))
        }
    }
}

/// Builds full-pattern embeddings from core embeddings, taking isolated vertices first from
/// `spare` and then from the surplus core copies.
pub(crate) fn assemble_tiling(pattern: &Pattern, kept: &[usize], isolated: usize, cores: &[&Embedding], spare: &[usize]) -> Tiling {
    let b = pattern.b();
    if isolated == 0 {
        return Tiling {
            copies: cores.iter().map(|e| (*e).clone()).collect(),
        };
    }
    let total = (cores.len() * kept.len() + spare.len()) / b;
    let mut pool: Vec<usize> = spare.to_vec();
    for e in &cores[total.min(cores.len())..] {
        pool.extend_from_slice(&e.map);
    }
    pool.sort_unstable();
    let isolated_vertices: Vec<usize> = (0..b).filter(|u| !kept.contains(u)).collect();
    let mut pool = pool.into_iter();
    let copies = cores[..total.min(cores.len())]
        .iter()
        .map(|core| {
            let mut map = vec![usize::MAX; b];
            for (i, &u) in kept.iter().enumerate() {
                map[u] = core.map[i];
            }
            for &u in &isolated_vertices {
                map[u] = pool.next().expect("enough spare vertices");
            }
            Embedding { map }
        })
        .collect();
    Tiling { copies }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::verify_tiling;

    #[test]
    fn complete_host_has_matching() {
        let e = Pattern::single_edge(3).unwrap();
        let k6 = Hypergraph::complete(6, 3).unwrap();
        let out = has_factor(&e, &k6);
        let t = out.tiling().expect("factor");
        assert!(verify_tiling(&e, &k6, t, true));
    }

    #[test]
    fn single_apex_host_has_no_matching() {
        let e = Pattern::single_edge(3).unwrap();
        let mut edges = Vec::new();
        crate::combinatorics::for_each_combination_lex(6, 3, |c| {
            if c[0] == 0 {
                edges.push(c.to_vec());
            }
            true
        });
        let h = Hypergraph::new(3, 6, edges).unwrap();
        assert_eq!(has_factor(&e, &h), FactorOutcome::NoFactor(NoFactorReason::Exhausted));
        let h7 = Hypergraph::complete(7, 3).unwrap();
        assert_eq!(has_factor(&e, &h7), FactorOutcome::NoFactor(NoFactorReason::Divisibility));
    }

    #[test]
    fn tiny_budget_reports_unknown() {
        let e = Pattern::single_edge(3).unwrap();
        let k12 = Hypergraph::complete(12, 3).unwrap();
        assert!(has_factor_with_budget(&e, &k12, Some(2)).is_unknown());
    }

    #[test]
    fn patterns_with_isolated_vertices() {
        // one 2-edge plus an isolated vertex; the host has a single edge per triple block
        let f = Pattern::from_edges(2, 3, [[0, 1]]).unwrap();
        let h = Hypergraph::new(2, 6, [[0, 1], [3, 4]]).unwrap();
        let out = has_factor(&f, &h);
        assert!(verify_tiling(&f, &h, out.tiling().expect("factor"), true));
        let h = Hypergraph::new(2, 6, [[0, 1]]).unwrap();
        assert!(!has_factor(&f, &h).is_factor());
        // a surplus of core copies still leaves enough isolated slots
        let k6 = Hypergraph::complete(6, 2).unwrap();
        let out = has_factor(&f, &k6);
        assert!(verify_tiling(&f, &k6, out.tiling().expect("factor"), true));
    }
}
