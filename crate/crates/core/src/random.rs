//! Seeded binomial random k-graphs.
//!
//! Each k-set gets one uniform value taken from a ChaCha8 keystream: the key is the seed,
//! the stream id selects the ChaCha stream, and the word position is twice the k-set's
//! colex rank. Values therefore depend only on `(seed, stream, k-set)`, never on the order
//! in which trials run, and raising `p` can only add edges.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binomial, for_each_combination, BinomialTable};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Largest `C(n, k)` a sampler will enumerate.
pub const MAX_KSETS: u128 = 10_000_000;

/// A reproducible source of per-k-set uniforms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeededSampler {
    pub seed: u64,
    pub stream: u64,
}

fn to_unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl SeededSampler {
    pub fn new(seed: u64, stream: u64) -> Self {
        SeededSampler { seed, stream }
    }

    fn keystream(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// The uniform in `[0, 1)` attached to the k-set with the given colex rank.
    pub fn uniform_at(&self, rank: u64) -> f64 {
        let mut rng = self.keystream();
        rng.set_word_pos(2 * rank as u128);
        to_unit(rng.next_u64())
    }

    /// An independent sampler for a sub-task, keyed by `tag`.
    pub fn child(&self, tag: u64) -> SeededSampler {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream.to_le_bytes());
        key[16..24].copy_from_slice(&tag.to_le_bytes());
        key[24] = 0x5a;
        let mut rng = ChaCha8Rng::from_seed(key);
        SeededSampler::new(rng.next_u64(), rng.next_u64())
    }

    /// A general-purpose generator for non-edge randomness (vertex sampling, shuffles).
    pub fn rng(&self, tag: u64) -> ChaCha8Rng {
        self.child(tag).keystream()
    }

    /// Calls `f(k-set, uniform)` for every k-set of `0..n` in colex order.
    fn for_each_uniform(&self, n: usize, k: usize, mut f: impl FnMut(&[usize], f64)) -> Result<()> {
        check_size(n, k)?;
        let mut rng = self.keystream();
        rng.set_word_pos(0);
        for_each_combination(n, k, |c| {
            // two 32-bit words per rank keep positions aligned with `uniform_at`
            f(c, to_unit(rng.next_u64()));
            true
        });
        Ok(())
    }
}

fn check_size(n: usize, k: usize) -> Result<()> {
    let total = binomial(n, k);
    if total > MAX_KSETS {
        return Err(Error::GuardExceeded(format!(
            "C({n}, {k}) = {total} k-sets exceeds {MAX_KSETS}"
        )));
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// `H^(k)(n, p)`: each k-set independently with probability `p`.
pub fn sample_binomial(n: usize, k: usize, p: f64, sampler: &SeededSampler) -> Result<Hypergraph> {
    check_probability(p)?;
    Ok(sample_coupled(n, k, &[p], sampler)?.pop().expect("one probability"))
}

/// Graphs for ascending probabilities from one draw per k-set; the edge sets are nested.
pub fn sample_coupled(n: usize, k: usize, ps: &[f64], sampler: &SeededSampler) -> Result<Vec<Hypergraph>> {
    for &p in ps {
        check_probability(p)?;
    }
    if ps.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter(format!("probabilities not ascending: {ps:?}")));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidArity(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let mut edge_lists: Vec<Vec<usize>> = vec![Vec::new(); ps.len()];
    sampler.for_each_uniform(n, k, |c, u| {
        // first index whose probability exceeds u; every later graph contains c too
        let start = ps.partition_point(|&p| p <= u);
        for list in &mut edge_lists[start..] {
            list.extend_from_slice(c);
        }
    })?;
    edge_lists
        .into_iter()
        .map(|flat| Hypergraph::new(k, n, flat.chunks_exact(k)))
        .collect()
}

/// `p'` with `(1 - p')^2 = 1 - p`.
pub fn two_round_split(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(1.0 - (1.0 - p).sqrt())
}

/// Two independent `H^(k)(n, p')` rounds whose union is distributed as `H^(k)(n, p)`.
pub fn sample_two_rounds(n: usize, k: usize, p: f64, sampler: &SeededSampler) -> Result<(Hypergraph, Hypergraph)> {
    let q = two_round_split(p)?;
    let first = sample_binomial(n, k, q, &sampler.child(1))?;
    let second = sample_binomial(n, k, q, &sampler.child(2))?;
    Ok((first, second))
}

/// A host together with a random part on the same vertex set.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedInstance {
    pub host: Hypergraph,
    pub random_part: Hypergraph,
    pub union: Hypergraph,
}

impl PerturbedInstance {
    pub fn new(host: Hypergraph, random_part: Hypergraph) -> Result<Self> {
        let union = host.union(&random_part)?;
        Ok(PerturbedInstance { host, random_part, union })
    }
}

/// `host ∪ H^(k)(n, p)`.
pub fn perturb(host: &Hypergraph, p: f64, sampler: &SeededSampler) -> Result<PerturbedInstance> {
    let random_part = sample_binomial(host.n(), host.k(), p, sampler)?;
    PerturbedInstance::new(host.clone(), random_part)
}

/// Perturbed instances for ascending probabilities sharing one coupled random draw.
pub fn perturb_coupled(host: &Hypergraph, ps: &[f64], sampler: &SeededSampler) -> Result<Vec<PerturbedInstance>> {
    sample_coupled(host.n(), host.k(), ps, sampler)?
        .into_iter()
        .map(|r| PerturbedInstance::new(host.clone(), r))
        .collect()
}

/// Colex rank of a sorted k-set, matching the sampler's word positions.
pub fn kset_rank(n: usize, kset: &[usize]) -> u64 {
    BinomialTable::new(n, kset.len()).colex_rank(kset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_probabilities() {
        let s = SeededSampler::new(7, 0);
        assert!(sample_binomial(8, 3, 0.0, &s).unwrap().is_edgeless());
        assert_eq!(sample_binomial(8, 3, 1.0, &s).unwrap(), Hypergraph::complete(8, 3).unwrap());
        assert!(sample_binomial(8, 3, 1.5, &s).is_err());
        assert!(sample_binomial(300, 4, 0.1, &s).is_err());
    }

    #[test]
    fn deterministic_and_counter_addressed() {
        let s = SeededSampler::new(42, 3);
        let a = sample_binomial(12, 3, 0.3, &s).unwrap();
        let b = sample_binomial(12, 3, 0.3, &s).unwrap();
        assert_eq!(a, b);
        for e in Hypergraph::complete(12, 3).unwrap().edges() {
            let present = s.uniform_at(kset_rank(12, e)) < 0.3;
            assert_eq!(present, a.has_edge(e));
        }
        let other = sample_binomial(12, 3, 0.3, &SeededSampler::new(42, 4)).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn draws_are_stable_when_n_grows() {
        let s = SeededSampler::new(5, 1);
        let small = sample_binomial(9, 3, 0.4, &s).unwrap();
        let large = sample_binomial(11, 3, 0.4, &s).unwrap();
        let restricted = large.induced(&crate::hypergraph::VertexSet::range(0, 9)).unwrap();
        assert_eq!(small, restricted);
    }

    #[test]
    fn coupled_graphs_are_nested() {
        let s = SeededSampler::new(1, 0);
        let gs = sample_coupled(10, 3, &[0.0, 0.1, 0.4, 1.0], &s).unwrap();
        assert!(gs[0].is_edgeless());
        assert_eq!(gs[3], Hypergraph::complete(10, 3).unwrap());
        for w in gs.windows(2) {
            assert!(w[0].edges().all(|e| w[1].has_edge(e)));
        }
        assert!(sample_coupled(10, 3, &[0.5, 0.1], &s).is_err());
    }

    #[test]
    fn two_round_split_values() {
        assert_eq!(two_round_split(0.0).unwrap(), 0.0);
        assert!((two_round_split(0.75).unwrap() - 0.5).abs() < 1e-15);
        for i in 1..=100 {
            let p = i as f64 / 100.0;
            assert!(two_round_split(p).unwrap() > p / 2.0);
        }
    }

    #[test]
    fn perturb_examples() {
        let s = SeededSampler::new(9, 0);
        let host = Hypergraph::new(3, 7, [[0, 1, 2], [2, 3, 4]]).unwrap();
        let inst = perturb(&host, 0.0, &s).unwrap();
        assert_eq!(inst.union, host);
        let complete = Hypergraph::complete(7, 3).unwrap();
        assert_eq!(perturb(&complete, 0.3, &s).unwrap().union, complete);
        let inst = perturb(&host, 0.3, &s).unwrap();
        assert!(inst.union.num_edges() >= inst.host.num_edges().max(inst.random_part.num_edges()));
    }

    #[test]
    fn children_differ() {
        let s = SeededSampler::new(3, 0);
        assert_ne!(s.child(1), s.child(2));
        assert_eq!(s.child(1), s.child(1));
    }
}
