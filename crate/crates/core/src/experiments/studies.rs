//! Coverage in the pure random model and the isolated-vertex counterexample.

use rayon::prelude::*;
use serde::Serialize;

use super::scan::in_pool;
use crate::constructions::{count_isolated, isolated_vertex_expectation, matching_cover_bound, sublinear_counterexample, MeanEstimate};
use crate::error::{Error, Result};
use crate::factor::{copy_count_mean, copy_count_statistic, max_tiling, TilingMode, EXACT_TILING_MAX_VERTICES};
use crate::pattern::{d_star, Pattern};
use crate::random::{sample_binomial, SeededSampler};

/// Streams at or above this offset belong to the coverage study.
const COVERAGE_STREAM: u64 = 1 << 40;
/// Streams at or above this offset belong to the counterexample study.
const COUNTEREXAMPLE_STREAM: u64 = 1 << 41;

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageStudy {
    pub pattern: Pattern,
    pub n: Vec<usize>,
    pub theta: f64,
    /// Defaults to `(θ/(2b))^{1/j}` for the densest subgraph with `j` edges.
    pub c: Option<f64>,
    pub seeds: u64,
    pub seed_offset: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageRow {
    pub n: usize,
    pub c: f64,
    pub p: f64,
    /// Expected labelled copies of the densest subgraph.
    pub mu: f64,
    pub mean_coverage: f64,
    pub coverage_at_least_theta: f64,
    pub copies_at_least_twice_mu: f64,
    pub seeds: u64,
}

/// Per `n`: tiling coverage of `H^(k)(n, p)` at `p = c n^{-1/d*}` and the copy count of the
/// densest subgraph against twice its mean.
pub fn prop2_experiment(study: &CoverageStudy, workers: Option<usize>) -> Result<Vec<CoverageRow>> {
    if study.seeds == 0 || !(0.0..=1.0).contains(&study.theta) {
        return Err(Error::InvalidParameter("need seeds >= 1 and theta in [0, 1]".into()));
    }
    let f = &study.pattern;
    let ds = d_star(f)?;
    let j = ds.densest.to_pattern(f)?;
    let c = match study.c {
        Some(c) => c,
        None => crate::constructions::proof_constant(f, study.theta)?,
    };
    let exponent = -(ds.ratio.denominator as f64) / ds.ratio.numerator as f64;
    study
        .n
        .iter()
        .map(|&n| {
            let p = (c * (n as f64).powf(exponent)).min(1.0);
            let mu = copy_count_mean(n, &j, p);
            let mode = if n <= EXACT_TILING_MAX_VERTICES {
                TilingMode::Exact
            } else {
                TilingMode::Heuristic
            };
            let trials: Vec<(f64, bool)> = in_pool(workers, || {
                (0..study.seeds)
                    .into_par_iter()
                    .map(|seed| {
                        let sampler = SeededSampler::new(study.seed_offset + seed, COVERAGE_STREAM + n as u64);
                        let h = sample_binomial(n, f.k(), p, &sampler)?;
                        let cov = max_tiling(f, &h, mode)?.coverage() as f64 / n as f64;
                        Ok((cov, copy_count_statistic(&j, &h) as f64 >= 2.0 * mu))
                    })
                    .collect::<Result<Vec<_>>>()
            })??;
            let m = trials.len() as f64;
            Ok(CoverageRow {
                n,
                c,
                p,
                mu,
                mean_coverage: trials.iter().map(|t| t.0).sum::<f64>() / m,
                coverage_at_least_theta: trials.iter().filter(|t| t.0 >= study.theta).count() as f64 / m,
                copies_at_least_twice_mu: trials.iter().filter(|t| t.1).count() as f64 / m,
                seeds: study.seeds,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleRow {
    pub n: usize,
    pub a_size: usize,
    pub p: f64,
    pub expected_isolated: f64,
    pub isolated: MeanEstimate,
    /// Vertices a matching of host edges can cover at most, `min(k|A|, n)`.
    pub host_cover_bound: usize,
    /// Fraction of seeds with more than `k|A|` vertices isolated in the random part.
    pub forced_failure_rate: f64,
    pub seeds: u64,
}

/// Builds the sublinear-degree host and its `p` for each `n`, samples the random part, and
/// counts isolated vertices.
pub fn counterexample_experiment(n_list: &[usize], k: usize, omega: f64, seeds: u64, seed_offset: u64, workers: Option<usize>) -> Result<Vec<CounterexampleRow>> {
    if seeds == 0 {
        return Err(Error::InvalidParameter("need seeds >= 1".into()));
    }
    n_list
        .iter()
        .map(|&n| {
            let (host, ce) = sublinear_counterexample(n, k, omega)?;
            let counts: Vec<usize> = in_pool(workers, || {
                (0..seeds)
                    .into_par_iter()
                    .map(|seed| {
                        let sampler = SeededSampler::new(seed_offset + seed, COUNTEREXAMPLE_STREAM + n as u64);
                        Ok(count_isolated(&sample_binomial(n, k, ce.p, &sampler)?))
                    })
                    .collect::<Result<Vec<_>>>()
            })??;
            let forced = counts.iter().filter(|&&c| c > k * ce.a_size).count();
            let samples: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
            Ok(CounterexampleRow {
                n,
                a_size: ce.a_size,
                p: ce.p,
                expected_isolated: isolated_vertex_expectation(n, k, ce.p),
                isolated: MeanEstimate::from_samples(&samples),
                host_cover_bound: matching_cover_bound(&host),
                forced_failure_rate: forced as f64 / seeds as f64,
                seeds,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_extremes() {
        let e = Pattern::single_edge(3).unwrap();
        let mut study = CoverageStudy {
            pattern: e,
            n: vec![9],
            theta: 0.5,
            c: Some(0.0),
            seeds: 3,
            seed_offset: 0,
        };
        let rows = prop2_experiment(&study, None).unwrap();
        assert_eq!(rows[0].mean_coverage, 0.0);
        study.c = Some(1e9);
        let rows = prop2_experiment(&study, None).unwrap();
        assert_eq!(rows[0].p, 1.0);
        assert_eq!(rows[0].mean_coverage, 1.0);
        assert_eq!(rows[0].coverage_at_least_theta, 1.0);
    }

    #[test]
    fn omega_near_one_isolates_almost_everything() {
        let rows = counterexample_experiment(&[12], 3, 1.0001, 20, 0, None).unwrap();
        assert!(rows[0].p < 1e-5);
        assert!(rows[0].isolated.mean > 11.5);
        assert!(counterexample_experiment(&[12], 3, 8.0, 0, 0, None).is_err());
    }
}
