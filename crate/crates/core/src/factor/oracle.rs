//! Brute-force F-factor decision for small hosts.
//!
//! Deliberately independent of the search engine: it keeps its own edge set, walks every
//! partition of the vertex set into b-blocks, and tests each block against every bijection
//! from the pattern's vertices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::pattern::Pattern;

/// Largest host the oracle accepts.
pub const ORACLE_MAX_VERTICES: usize = 12;

pub fn brute_force_oracle(pattern: &Pattern, host: &Hypergraph) -> Result<bool> {
    let n = host.n();
    if n > ORACLE_MAX_VERTICES {
        return Err(Error::GuardExceeded(format!(
            "oracle limited to {ORACLE_MAX_VERTICES} vertices, got {n}"
        )));
    }
    let b = pattern.b();
    if !n.is_multiple_of(b) {
        return Ok(false);
    }
    let edges: BTreeSet<Vec<usize>> = host.edges().map(|e| e.to_vec()).collect();
    let pattern_edges: Vec<Vec<usize>> = pattern.graph().edges().map(|e| e.to_vec()).collect();
    let remaining: Vec<usize> = (0..n).collect();
    Ok(partition(&remaining, b, &edges, &pattern_edges))
}

fn partition(remaining: &[usize], b: usize, edges: &BTreeSet<Vec<usize>>, pattern_edges: &[Vec<usize>]) -> bool {
    if remaining.is_empty() {
        return true;
    }
    let first = remaining[0];
    let rest: Vec<usize> = remaining[1..].to_vec();
    let mut picks: Vec<usize> = Vec::with_capacity(b - 1);
    blocks(&rest, 0, b - 1, &mut picks, &mut |others| {
        let mut block = vec![first];
        block.extend_from_slice(others);
        if !spans_copy(&block, edges, pattern_edges) {
            return false;
        }
        let left: Vec<usize> = rest.iter().copied().filter(|v| !others.contains(v)).collect();
        partition(&left, b, edges, pattern_edges)
    })
}

/// Visits every `r`-subset of `items[from..]`; stops at the first `true` from `visit`.
fn blocks(items: &[usize], from: usize, r: usize, picks: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if r == 0 {
        return visit(picks);
    }
    for i in from..items.len() {
        if items.len() - i < r {
            break;
        }
        picks.push(items[i]);
        let done = blocks(items, i + 1, r - 1, picks, visit);
        picks.pop();
        if done {
            return true;
        }
    }
    false
}

/// Whether some bijection from pattern vertices onto `block` maps every pattern edge to an edge.
fn spans_copy(block: &[usize], edges: &BTreeSet<Vec<usize>>, pattern_edges: &[Vec<usize>]) -> bool {
    let mut perm: Vec<usize> = block.to_vec();
    permutations(&mut perm, 0, &mut |image| {
        pattern_edges.iter().all(|e| {
            let mut mapped: Vec<usize> = e.iter().map(|&u| image[u]).collect();
            mapped.sort_unstable();
            edges.contains(&mapped)
        })
    })
}

fn permutations(items: &mut [usize], start: usize, test: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if start == items.len() {
        return test(items);
    }
    for i in start..items.len() {
        items.swap(start, i);
        if permutations(items, start + 1, test) {
            items.swap(start, i);
            return true;
        }
        items.swap(start, i);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        let e = Pattern::single_edge(3).unwrap();
        assert!(brute_force_oracle(&e, &Hypergraph::complete(6, 3).unwrap()).unwrap());
        let star = Hypergraph::new(3, 6, [[0, 1, 2], [0, 3, 4], [0, 4, 5]]).unwrap();
        assert!(!brute_force_oracle(&e, &star).unwrap());
        assert!(brute_force_oracle(&e, &Hypergraph::complete(13, 3).unwrap()).is_err());
    }

    #[test]
    fn non_symmetric_pattern() {
        // path a-b-c needs the middle vertex at the shared position
        let path = Pattern::from_edges(2, 3, [[0, 1], [1, 2]]).unwrap();
        let h = Hypergraph::new(2, 6, [[0, 2], [1, 2], [3, 4], [4, 5]]).unwrap();
        assert!(brute_force_oracle(&path, &h).unwrap());
        let h = Hypergraph::new(2, 6, [[0, 2], [3, 4], [4, 5], [1, 5]]).unwrap();
        assert!(!brute_force_oracle(&path, &h).unwrap());
    }
}
