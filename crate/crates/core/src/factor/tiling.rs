//! Maximum and greedy tilings, and the labelled copy count.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::cover::{assemble_tiling, unlabelled_copies};
use super::embed::{core_of, count_embeddings, Embedding, Matcher, SearchOrder};
use super::Tiling;
use crate::combinatorics::falling_factorial_f64;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::pattern::Pattern;

/// Largest host for exact maximum tiling.
pub const EXACT_TILING_MAX_VERTICES: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TilingMode {
    Exact,
    /// Greedy followed by one-out, two-in swaps.
    Heuristic,
}

/// A maximum (exact mode) or large (heuristic mode) F-tiling.
pub fn max_tiling(pattern: &Pattern, host: &Hypergraph, mode: TilingMode) -> Result<Tiling> {
    let n = host.n();
    let (core, kept, isolated) = core_of(pattern);
    let cap = n / pattern.b();
    let Some(core) = core else {
        // edgeless pattern: any b vertices form a copy
        let vertices: Vec<usize> = (0..cap * pattern.b()).collect();
        let copies = vertices.chunks(pattern.b()).map(|c| Embedding { map: c.to_vec() }).collect();
        return Ok(Tiling { copies });
    };
    let copies = unlabelled_copies(&core, host, None);
    let chosen = match mode {
        TilingMode::Exact => {
            if n > EXACT_TILING_MAX_VERTICES {
                return Err(Error::GuardExceeded(format!(
                    "exact tiling limited to {EXACT_TILING_MAX_VERTICES} vertices, got {n}"
                )));
            }
            exact_packing(n, &copies)
        }
        TilingMode::Heuristic => heuristic_packing(n, &copies),
    };
    let take = chosen.len().min(cap);
    let cores: Vec<&Embedding> = chosen[..take].iter().map(|&i| &copies[i].1).collect();
    if isolated == 0 {
        return Ok(Tiling {
            copies: cores.into_iter().cloned().collect(),
        });
    }
    // isolated pattern vertices go to uncovered host vertices
    let mut used = vec![false; n];
    for e in &cores {
        for &v in &e.map {
            used[v] = true;
        }
    }
    let spare: Vec<usize> = (0..n).filter(|&v| !used[v]).take(take * isolated).collect();
    Ok(assemble_tiling(pattern, &kept, isolated, &cores, &spare))
}

fn mask_of(set: &[usize]) -> u32 {
    set.iter().fold(0u32, |m, &v| m | 1 << v)
}

/// Maximum number of disjoint copies by memoised search over vertex subsets.
fn exact_packing(n: usize, copies: &[(Vec<usize>, Embedding)]) -> Vec<usize> {
    let masks: Vec<u32> = copies.iter().map(|(s, _)| mask_of(s)).collect();
    let mut by_low: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &m) in masks.iter().enumerate() {
        by_low[m.trailing_zeros() as usize].push(i);
    }
    let full: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let mut memo = vec![u8::MAX; 1usize << n];
    fn best(mask: u32, masks: &[u32], by_low: &[Vec<usize>], memo: &mut [u8]) -> u8 {
        if mask == 0 {
            return 0;
        }
        if memo[mask as usize] != u8::MAX {
            return memo[mask as usize];
        }
        let v = mask.trailing_zeros() as usize;
        // either v stays uncovered or the copy covering v has v as its lowest vertex
        let mut r = best(mask & (mask - 1), masks, by_low, memo);
        for &i in &by_low[v] {
            if masks[i] & !mask == 0 {
                r = r.max(1 + best(mask & !masks[i], masks, by_low, memo));
            }
        }
        memo[mask as usize] = r;
        r
    }
    let target = best(full, &masks, &by_low, &mut memo);
    let mut chosen = Vec::with_capacity(target as usize);
    let mut mask = full;
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        let here = best(mask, &masks, &by_low, &mut memo);
        let next = by_low[v].iter().copied().find(|&i| {
            masks[i] & !mask == 0 && 1 + best(mask & !masks[i], &masks, &by_low, &mut memo) == here
        });
        match next {
            Some(i) => {
                chosen.push(i);
                mask &= !masks[i];
            }
            None => mask &= mask - 1,
        }
    }
    chosen
}

fn heuristic_packing(n: usize, copies: &[(Vec<usize>, Embedding)]) -> Vec<usize> {
    let mut used = vec![false; n];
    let mut chosen: Vec<usize> = Vec::new();
    let fits = |set: &[usize], used: &[bool]| set.iter().all(|&v| !used[v]);
    for (i, (set, _)) in copies.iter().enumerate() {
        if fits(set, &used) {
            set.iter().for_each(|&v| used[v] = true);
            chosen.push(i);
        }
    }
    // replace one copy by two whenever possible
    let mut improved = true;
    while improved {
        improved = false;
        for slot in 0..chosen.len() {
            let out = chosen[slot];
            copies[out].0.iter().for_each(|&v| used[v] = false);
            let mut swap = None;
            'outer: for (i, (a, _)) in copies.iter().enumerate() {
                if i == out || !fits(a, &used) {
                    continue;
                }
                a.iter().for_each(|&v| used[v] = true);
                for (j, (c, _)) in copies.iter().enumerate().skip(i + 1) {
                    if j != out && fits(c, &used) {
                        swap = Some((i, j));
                        a.iter().for_each(|&v| used[v] = false);
                        break 'outer;
                    }
                }
                a.iter().for_each(|&v| used[v] = false);
            }
            match swap {
                Some((i, j)) => {
                    for &v in copies[i].0.iter().chain(&copies[j].0) {
                        used[v] = true;
                    }
                    chosen[slot] = i;
                    chosen.push(j);
                    improved = true;
                    break;
                }
                None => copies[out].0.iter().for_each(|&v| used[v] = true),
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Repeatedly removes the first copy of `F` found among uncovered vertices until fewer than
/// `max(leftover, b)` remain or no copy is left. Returns the tiling and the uncovered set.
pub fn greedy_tiling(pattern: &Pattern, host: &Hypergraph, leftover: usize) -> (Tiling, VertexSet) {
    greedy_tiling_within(pattern, host, &VertexSet::range(0, host.n()), leftover)
}

/// [`greedy_tiling`] restricted to the vertices of `within`.
pub fn greedy_tiling_within(pattern: &Pattern, host: &Hypergraph, within: &VertexSet, leftover: usize) -> (Tiling, VertexSet) {
    let mut uncovered = within.to_bitset(host.n());
    let stop = leftover.max(pattern.b());
    let mut copies = Vec::new();
    while uncovered.count_ones(..) >= stop {
        let found = Matcher::new(pattern, host, SearchOrder::Connected)
            .restrict_to(&uncovered)
            .first();
        let Some(e) = found else { break };
        for &v in &e.map {
            uncovered.set(v, false);
        }
        copies.push(e);
    }
    (Tiling { copies }, VertexSet::from_unsorted(uncovered.ones()))
}

/// Number of labelled copies of `J` in `host`, i.e. embeddings.
pub fn copy_count_statistic(j: &Pattern, host: &Hypergraph) -> u128 {
    count_embeddings(j, host, &[], None)
}

/// `n (n-1) ... (n-s+1) p^j`, the expected labelled copy count in `H^(k)(n, p)`.
pub fn copy_count_mean(n: usize, j: &Pattern, p: f64) -> f64 {
    falling_factorial_f64(n, j.b()) * p.powi(j.f() as i32)
}

/// Vertices of `host` covered by `tiling`.
pub fn covered(tiling: &Tiling, n: usize) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(n);
    for e in &tiling.copies {
        for &v in &e.map {
            bits.insert(v);
        }
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::verify_tiling;

    #[test]
    fn complete_and_empty_hosts() {
        let e = Pattern::single_edge(3).unwrap();
        let k10 = Hypergraph::complete(10, 3).unwrap();
        for mode in [TilingMode::Exact, TilingMode::Heuristic] {
            let t = max_tiling(&e, &k10, mode).unwrap();
            assert_eq!(t.copies.len(), 3);
            assert!(verify_tiling(&e, &k10, &t, false));
            let empty = Hypergraph::empty(3, 10).unwrap();
            assert!(max_tiling(&e, &empty, mode).unwrap().copies.is_empty());
        }
        assert!(max_tiling(&e, &Hypergraph::complete(16, 3).unwrap(), TilingMode::Exact).is_err());
    }

    #[test]
    fn exact_beats_first_fit() {
        // first-fit takes {0,1,2}, which blocks the two disjoint edges {0,3,4} and {1,5,6}
        let e = Pattern::single_edge(3).unwrap();
        let h = Hypergraph::new(3, 7, [[0, 1, 2], [0, 3, 4], [1, 5, 6]]).unwrap();
        let t = max_tiling(&e, &h, TilingMode::Exact).unwrap();
        assert_eq!(t.copies.len(), 2);
        let t = max_tiling(&e, &h, TilingMode::Heuristic).unwrap();
        assert_eq!(t.copies.len(), 2);
    }

    #[test]
    fn greedy_examples() {
        let e = Pattern::single_edge(3).unwrap();
        let k9 = Hypergraph::complete(9, 3).unwrap();
        let (t, r) = greedy_tiling(&e, &k9, 0);
        assert_eq!(t.copies.len(), 3);
        assert!(r.is_empty());
        let empty = Hypergraph::empty(3, 9).unwrap();
        let (t, r) = greedy_tiling(&e, &empty, 0);
        assert!(t.copies.is_empty());
        assert_eq!(r.len(), 9);
        let (_, r) = greedy_tiling(&e, &k9, 4);
        assert!(r.len() < 4 + 3);
    }

    #[test]
    fn copy_counts() {
        let e = Pattern::single_edge(3).unwrap();
        let h = Hypergraph::new(3, 6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        assert_eq!(copy_count_statistic(&e, &h), 12);
        assert_eq!(copy_count_statistic(&e, &Hypergraph::empty(3, 6).unwrap()), 0);
        assert!((copy_count_mean(18, &e, 0.05) - 4896.0 * 0.05).abs() < 1e-9);
    }
}
