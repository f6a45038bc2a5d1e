//! Bipartite template graphs whose matchings survive deleting any `βm` flexible vertices.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::random::SeededSampler;

/// Largest `C(m + βm, m)` the verifier enumerates.
pub const TEMPLATE_MAX_SUBSETS: u128 = 4096;
/// Largest `m` the verifier accepts.
pub const TEMPLATE_MAX_M: usize = 8;
/// Degree bound for templates.
pub const TEMPLATE_MAX_DEGREE: usize = 100;

/// Left class is `X_m` (indices `0..m+βm`) followed by `Y_m` (`2m` more); right class is
/// `Z_m` with `3m` vertices. `adjacency[l]` lists the right neighbours of left vertex `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateGraph {
    pub m: usize,
    pub beta_m: usize,
    pub adjacency: Vec<Vec<usize>>,
}

/// `⌊βm⌋`.
pub fn beta_m(m: usize, beta: &BigRational) -> Result<usize> {
    if *beta < BigRational::from_integer(0.into()) {
        return Err(Error::InvalidParameter("beta must be non-negative".into()));
    }
    (beta * BigRational::from_integer(m.into()))
        .floor()
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::InvalidParameter("beta * m too large".into()))
}

impl TemplateGraph {
    pub fn x_len(&self) -> usize {
        self.m + self.beta_m
    }

    pub fn y_len(&self) -> usize {
        2 * self.m
    }

    pub fn z_len(&self) -> usize {
        3 * self.m
    }

    pub fn left_len(&self) -> usize {
        self.x_len() + self.y_len()
    }

    pub fn new(m: usize, beta_m: usize, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        let t = TemplateGraph { m, beta_m, adjacency };
        if t.adjacency.len() != t.left_len() {
            return Err(Error::MalformedStructure(format!(
                "expected {} left vertices, got {}",
                t.left_len(),
                t.adjacency.len()
            )));
        }
        for list in &t.adjacency {
            if list.windows(2).any(|w| w[0] >= w[1]) || list.iter().any(|&z| z >= t.z_len()) {
                return Err(Error::MalformedStructure("adjacency lists must be sorted and in range".into()));
            }
        }
        Ok(t)
    }

    /// `(X ∪ Y) × Z` complete.
    pub fn complete(m: usize, beta_m: usize) -> Self {
        let left = m + beta_m + 2 * m;
        TemplateGraph {
            m,
            beta_m,
            adjacency: vec![(0..3 * m).collect(); left],
        }
    }

    /// `Y_j` joined to `Z_j` for `j < 2m`, and all of `X` joined to the last `m` vertices of `Z`.
    pub fn sparse(m: usize, beta_m: usize) -> Self {
        let mut adjacency = vec![(2 * m..3 * m).collect::<Vec<_>>(); m + beta_m];
        adjacency.extend((0..2 * m).map(|j| vec![j]));
        TemplateGraph { m, beta_m, adjacency }
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Edges as `(left, right)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(l, list)| list.iter().map(move |&z| (l, z)))
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        let mut right = vec![0usize; self.z_len()];
        for list in &self.adjacency {
            for &z in list {
                right[z] += 1;
            }
        }
        self.adjacency
            .iter()
            .map(Vec::len)
            .chain(right)
            .max()
            .unwrap_or(0)
    }

    /// A matching of `left` saturating `Z`, as `(left, right)` pairs, if one exists.
    pub fn saturating_matching(&self, left: &[usize]) -> Option<Vec<(usize, usize)>> {
        let mut owner: Vec<Option<usize>> = vec![None; self.z_len()];
        for &l in left {
            let mut visited = vec![false; self.z_len()];
            // unmatched left vertices are fine as long as Z ends up saturated
            self.augment(l, &mut owner, &mut visited);
        }
        let pairs: Option<Vec<(usize, usize)>> = owner.iter().enumerate().map(|(z, o)| o.map(|l| (l, z))).collect();
        pairs.map(|mut p| {
            p.sort_unstable();
            p
        })
    }

    fn augment(&self, l: usize, owner: &mut [Option<usize>], visited: &mut [bool]) -> bool {
        for &z in &self.adjacency[l] {
            if visited[z] {
                continue;
            }
            visited[z] = true;
            if owner[z].is_none_or(|o| self.augment(o, owner, visited)) {
                owner[z] = Some(l);
                return true;
            }
        }
        false
    }
}

fn check_guard(m: usize, beta_m: usize) -> Result<()> {
    let subsets = binomial(m + beta_m, m);
    if m > TEMPLATE_MAX_M || subsets > TEMPLATE_MAX_SUBSETS {
        return Err(Error::GuardExceeded(format!(
            "template check needs m <= {TEMPLATE_MAX_M} and C(m + beta m, m) <= {TEMPLATE_MAX_SUBSETS}, got m = {m}, C = {subsets}"
        )));
    }
    Ok(())
}

/// Whether every `m`-subset `X'` of `X_m` together with `Y_m` has a matching saturating `Z_m`.
pub fn template_verify(template: &TemplateGraph, m: usize, beta: &BigRational) -> Result<bool> {
    let bm = beta_m(m, beta)?;
    if template.m != m || template.beta_m != bm {
        return Err(Error::ShapeMismatch(format!(
            "template has m = {}, beta m = {}, expected {m}, {bm}",
            template.m, template.beta_m
        )));
    }
    check_guard(m, bm)?;
    let y: Vec<usize> = (template.x_len()..template.left_len()).collect();
    let mut all = true;
    crate::combinatorics::for_each_combination_lex(template.x_len(), m, |x_prime| {
        let mut left = x_prime.to_vec();
        left.extend_from_slice(&y);
        all = template.saturating_matching(&left).is_some();
        all
    });
    Ok(all)
}

/// Outcome of [`template_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateSearch {
    pub template: Option<TemplateGraph>,
    pub attempts: usize,
}

/// Samples random maximal graphs with every degree at most `delta_cap` (edges offered in
/// random order, kept while both endpoints have room) and returns the first passing
/// [`template_verify`].
pub fn template_search(m: usize, beta: &BigRational, delta_cap: usize, sampler: &SeededSampler, attempts: usize) -> Result<TemplateSearch> {
    let bm = beta_m(m, beta)?;
    check_guard(m, bm)?;
    let shape = TemplateGraph::complete(m, bm);
    let pairs = shape.edges();
    for attempt in 1..=attempts {
        let mut rng = sampler.rng(attempt as u64);
        let mut order = pairs.clone();
        order.shuffle(&mut rng);
        let mut left_deg = vec![0usize; shape.left_len()];
        let mut right_deg = vec![0usize; shape.z_len()];
        let mut adjacency = vec![Vec::new(); shape.left_len()];
        for (l, z) in order {
            if left_deg[l] < delta_cap && right_deg[z] < delta_cap {
                left_deg[l] += 1;
                right_deg[z] += 1;
                adjacency[l].push(z);
            }
        }
        adjacency.iter_mut().for_each(|a| a.sort_unstable());
        let candidate = TemplateGraph {
            m,
            beta_m: bm,
            adjacency,
        };
        if template_verify(&candidate, m, beta)? {
            return Ok(TemplateSearch {
                template: Some(candidate),
                attempts: attempt,
            });
        }
    }
    Ok(TemplateSearch { template: None, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn complete_and_sparse_pass() {
        for m in 1..=4 {
            let beta = ratio(1, 2);
            let bm = beta_m(m, &beta).unwrap();
            assert!(template_verify(&TemplateGraph::complete(m, bm), m, &beta).unwrap());
            assert!(template_verify(&TemplateGraph::sparse(m, bm), m, &beta).unwrap());
        }
        let t = TemplateGraph::sparse(1, 12);
        assert_eq!(t.num_edges(), 15);
        assert_eq!(t.max_degree(), 13);
    }

    #[test]
    fn isolated_z_vertex_fails() {
        let beta = ratio(1, 2);
        let mut t = TemplateGraph::complete(2, 1);
        for list in &mut t.adjacency {
            list.retain(|&z| z != 0);
        }
        assert!(!template_verify(&t, 2, &beta).unwrap());
    }

    #[test]
    fn guard_and_shape() {
        let t = TemplateGraph::complete(9, 0);
        assert!(matches!(template_verify(&t, 9, &ratio(0, 1)), Err(Error::GuardExceeded(_))));
        assert!(template_verify(&TemplateGraph::complete(2, 1), 2, &ratio(1, 4)).is_err());
        assert!(TemplateGraph::new(1, 0, vec![vec![0]; 2]).is_err());
    }

    #[test]
    fn search_extremes() {
        let s = SeededSampler::new(3, 0);
        let beta = ratio(1, 2);
        let found = template_search(2, &beta, 10, &s, 5).unwrap();
        assert_eq!(found.attempts, 1);
        assert!(found.template.is_some());
        let none = template_search(2, &beta, 0, &s, 5).unwrap();
        assert!(none.template.is_none());
        assert_eq!(none.attempts, 5);
    }
}
