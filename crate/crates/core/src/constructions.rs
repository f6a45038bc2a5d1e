//! Extremal host constructions: the split host whose edges are the k-sets meeting a set `A`,
//! and the sparse-host perfect-matching counterexample.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, for_each_combination_lex};
use crate::error::{Error, Result};
use crate::exact::PowerProduct;
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::pattern::{d_star, p_from_c, Pattern};
use crate::random::{sample_binomial, SeededSampler};

/// Host on `0..n` whose edges are all k-sets meeting `a = {0, .., |A| - 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitHost {
    pub graph: Hypergraph,
    pub a: VertexSet,
    pub b: VertexSet,
    /// `|A| / n`.
    pub eta: BigRational,
}

impl SplitHost {
    pub fn a_size(&self) -> usize {
        self.a.len()
    }
}

fn split_host_with(n: usize, k: usize, a_size: usize) -> Result<SplitHost> {
    if k < 2 || n < k {
        return Err(Error::InvalidArity(format!("need n >= k >= 2, got n = {n}, k = {k}")));
    }
    if binomial(n, k) > 50_000_000 {
        return Err(Error::GuardExceeded(format!("C({n},{k}) edges")));
    }
    let mut flat = Vec::new();
    for_each_combination_lex(n, k, |c| {
        if c[0] < a_size {
            flat.extend_from_slice(c);
        }
        true
    });
    let graph = Hypergraph::new(k, n, flat.chunks_exact(k))?;
    Ok(SplitHost {
        graph,
        a: VertexSet::range(0, a_size),
        b: VertexSet::range(a_size, n),
        eta: BigRational::new(BigInt::from(a_size), BigInt::from(n)),
    })
}

/// Split host with `|A| = eta * n`, which must be an integer.
pub fn build_split_host(n: usize, k: usize, eta: &BigRational) -> Result<SplitHost> {
    if *eta <= BigRational::zero() || *eta > BigRational::one() {
        return Err(Error::InvalidParameter(format!("eta = {eta} outside (0, 1]")));
    }
    let size = eta * BigRational::from_integer(BigInt::from(n));
    if !size.is_integer() {
        return Err(Error::InvalidParameter(format!("eta * n = {size} is not an integer")));
    }
    split_host_with(n, k, size.to_integer().to_usize().expect("size <= n"))
}

/// `C(n-1, k-1) - C(n-|A|-1, k-1)`, the minimum vertex degree of a split host.
pub fn split_host_min_degree(n: usize, k: usize, a_size: usize) -> u128 {
    let outside = if a_size >= n { 0 } else { binomial(n - a_size - 1, k - 1) };
    binomial(n - 1, k - 1) - outside
}

/// `min(k |A|, n)`: every host edge uses a vertex of `A`.
pub fn matching_cover_bound(host: &SplitHost) -> usize {
    (host.graph.k() * host.a_size()).min(host.graph.n())
}

/// Parameters of the sparse-host counterexample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub n: usize,
    pub k: usize,
    pub omega: f64,
    pub a_size: usize,
    /// `|A| / n` after rounding.
    pub eta_realized: f64,
    /// `ln(omega) / (2 C(n-1, k-1))`.
    pub p: f64,
}

/// Split host with `|A| = max(1, floor(n / (3 k omega)))` and `p = ln(omega) / (2 C(n-1,k-1))`.
pub fn sublinear_counterexample(n: usize, k: usize, omega: f64) -> Result<(SplitHost, Counterexample)> {
    if !omega.is_finite() || omega <= 1.0 {
        return Err(Error::InvalidParameter(format!("omega must be finite and > 1, got {omega}")));
    }
    if k < 2 || n < k {
        return Err(Error::InvalidArity(format!("need n >= k >= 2, got n = {n}, k = {k}")));
    }
    let a_size = ((n as f64 / (3.0 * k as f64 * omega)).floor() as usize).max(1);
    let p = omega.ln() / (2.0 * binomial(n - 1, k - 1) as f64);
    if p > 1.0 {
        return Err(Error::InvalidParameter(format!("p = {p} exceeds 1")));
    }
    let host = split_host_with(n, k, a_size)?;
    let params = Counterexample {
        n,
        k,
        omega,
        a_size,
        eta_realized: a_size as f64 / n as f64,
        p,
    };
    Ok((host, params))
}

/// `n (1 - p)^C(n-1, k-1)`.
pub fn isolated_vertex_expectation(n: usize, k: usize, p: f64) -> f64 {
    let d = binomial(n - 1, k - 1) as f64;
    n as f64 * (1.0 - p).powf(d)
}

pub fn count_isolated(h: &Hypergraph) -> usize {
    h.vertex_degrees().into_iter().filter(|&d| d == 0).count()
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl MeanEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let m = xs.len();
        let mean = xs.iter().sum::<f64>() / m as f64;
        let var = if m > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64
        } else {
            0.0
        };
        MeanEstimate {
            mean,
            std_error: (var / m as f64).sqrt(),
            samples: m,
        }
    }

    /// `|mean - target|` in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        if self.std_error == 0.0 {
            if (self.mean - target).abs() < 1e-12 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - target).abs() / self.std_error
        }
    }
}

/// Monte Carlo estimate of the isolated-vertex count of `H^(k)(n, p)` over seeds `0..seeds`.
pub fn isolated_vertex_monte_carlo(n: usize, k: usize, p: f64, seeds: u64, stream: u64) -> Result<MeanEstimate> {
    let counts: Result<Vec<f64>> = (0..seeds)
        .into_par_iter()
        .map(|seed| {
            let h = sample_binomial(n, k, p, &SeededSampler::new(seed, stream))?;
            Ok(count_isolated(&h) as f64)
        })
        .collect();
    Ok(MeanEstimate::from_samples(&counts?))
}

/// The copy-count identity for the densest subgraph `J` (with `s` vertices, `j` edges):
/// at `c = (theta / 2b)^(1/j)` and `p = c n^(-1/d*)`, `n^s p^j = theta n / 2b`.
#[derive(Clone, Debug)]
pub struct CopyIdentity {
    pub s: usize,
    pub j: usize,
    pub c: PowerProduct,
    pub p: PowerProduct,
    pub lhs: PowerProduct,
    pub rhs: PowerProduct,
}

impl CopyIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn copy_identity(f: &Pattern, theta: &BigRational, n: u64) -> Result<CopyIdentity> {
    if *theta <= BigRational::zero() {
        return Err(Error::InvalidParameter(format!("theta = {theta} must be positive")));
    }
    let d = d_star(f)?;
    let s = d.densest.vertices.len();
    let j = d.densest.edges.len();
    let base = theta / BigRational::from_integer(BigInt::from(2 * f.b()));
    let c = PowerProduct::power(base.clone(), Rational64::new(1, j as i64))?;
    // p = c n^(-1/d*) with c kept symbolic
    let p = c.mul(&p_from_c(&BigRational::one(), n, d.ratio)?);
    let n_pp = PowerProduct::integer(n)?;
    let lhs = n_pp.powi(s as i64).mul(&p.powi(j as i64));
    let rhs = PowerProduct::rational(base * BigRational::from_integer(BigInt::from(n)))?;
    Ok(CopyIdentity { s, j, c, p, lhs, rhs })
}

/// `c = (theta / 2b)^(1/j)` as a float.
pub fn proof_constant(f: &Pattern, theta: f64) -> Result<f64> {
    let j = d_star(f)?.densest.edges.len();
    Ok((theta / (2.0 * f.b() as f64)).powf(1.0 / j as f64))
}
