//! Embeddings, tilings and exact F-factor decision.

mod cover;
mod embed;
mod oracle;
mod tiling;

use serde::{Deserialize, Serialize};

pub use cover::{has_factor, has_factor_with_budget, unlabelled_copies, FactorOutcome, NoFactorReason};
pub use embed::{count_embeddings, count_rooted, enumerate_embeddings, Embedding, Matcher, SearchOrder};
pub use oracle::{brute_force_oracle, ORACLE_MAX_VERTICES};
pub use tiling::{
    copy_count_mean, copy_count_statistic, covered, greedy_tiling, greedy_tiling_within, max_tiling, TilingMode,
    EXACT_TILING_MAX_VERTICES,
};

use crate::hypergraph::Hypergraph;
use crate::pattern::Pattern;

/// Vertex-disjoint copies of a pattern.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tiling {
    pub copies: Vec<Embedding>,
}

impl Tiling {
    /// Number of covered vertices.
    pub fn coverage(&self) -> usize {
        self.copies.iter().map(|e| e.map.len()).sum()
    }

    pub fn extend(&mut self, other: Tiling) {
        self.copies.extend(other.copies);
    }
}

/// Re-checks a tiling from scratch: every map is injective and edge-preserving, images are
/// pairwise disjoint, and with `spanning` every host vertex is covered.
pub fn verify_tiling(pattern: &Pattern, host: &Hypergraph, tiling: &Tiling, spanning: bool) -> bool {
    let mut seen = vec![false; host.n()];
    let mut count = 0;
    for copy in &tiling.copies {
        if copy.map.len() != pattern.b() {
            return false;
        }
        for &v in &copy.map {
            if v >= host.n() || seen[v] {
                return false;
            }
            seen[v] = true;
            count += 1;
        }
        let preserved = pattern.graph().edges().all(|e| {
            let image: Vec<usize> = e.iter().map(|&u| copy.map[u]).collect();
            host.has_edge_unsorted(&image)
        });
        if !preserved {
            return false;
        }
    }
    !spanning || count == host.n()
}

/// Like [`verify_tiling`], additionally requiring the covered set to equal `target` exactly.
pub fn verify_tiling_covers(pattern: &Pattern, host: &Hypergraph, tiling: &Tiling, target: &[usize]) -> bool {
    if !verify_tiling(pattern, host, tiling, false) {
        return false;
    }
    let mut image: Vec<usize> = tiling.copies.iter().flat_map(|e| e.map.iter().copied()).collect();
    image.sort_unstable();
    image == target
}
