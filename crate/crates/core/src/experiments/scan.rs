//! Threshold scans over perturbed instances.

use std::path::Path;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::spec::{Axis, ExperimentSpec};
use super::stats::{median_with_infinity, Proportion};
use crate::error::{Error, Result};
use crate::factor::{copy_count_statistic, has_factor_with_budget, max_tiling, FactorOutcome, TilingMode, EXACT_TILING_MAX_VERTICES};
use crate::hypergraph::Hypergraph;
use crate::pattern::{d_star, p_from_c, DensityRatio, Pattern};
use crate::random::{perturb, perturb_coupled, PerturbedInstance, SeededSampler};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Factor,
    NoFactor,
    Unknown,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Factor => "factor",
            Outcome::NoFactor => "no-factor",
            Outcome::Unknown => "unknown",
        }
    }
}

/// One perturbed trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    /// `None` when the scan runs over `p` directly.
    pub c: Option<f64>,
    pub p: f64,
    pub seed: u64,
    pub outcome: Outcome,
    /// Fraction of vertices covered by the best tiling found.
    pub coverage: f64,
    /// Labelled copies of the pattern in the random part.
    pub copies: u128,
    pub wall_ms: u64,
}

/// Aggregate over the seeds of one `(n, c)` cell; unknown outcomes are left out of `rate`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellSummary {
    pub n: usize,
    pub c: Option<f64>,
    pub p: f64,
    pub rate: Proportion,
    pub unknown: usize,
}

/// Per-seed coupled thresholds for one `n` and their median.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    pub n: usize,
    pub per_seed: Vec<Option<f64>>,
    pub median: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub records: Vec<TrialRecord>,
    pub cells: Vec<CellSummary>,
    pub thresholds: Vec<ThresholdEstimate>,
}

/// `c n^{-1/d*}` rounded once to the nearest float and capped at 1.
pub fn p_for(c: &BigRational, n: usize, d: DensityRatio) -> Result<f64> {
    if num_traits::Zero::is_zero(c) {
        return Ok(0.0);
    }
    Ok(p_from_c(c, n as u64, d)?.to_f64().min(1.0))
}

/// Seeds of one `n` share stream `n`, so adding cells never shifts existing draws.
pub fn trial_sampler(spec: &ExperimentSpec, n: usize, seed: u64) -> SeededSampler {
    SeededSampler::new(spec.seed_offset + seed, n as u64)
}

fn classify(pattern: &Pattern, inst: &PerturbedInstance, budget: Option<u64>) -> Result<(Outcome, f64)> {
    let n = inst.union.n();
    let (outcome, coverage) = match has_factor_with_budget(pattern, &inst.union, budget) {
        FactorOutcome::Factor(_) => (Outcome::Factor, n),
        other => {
            let mode = if n <= EXACT_TILING_MAX_VERTICES {
                TilingMode::Exact
            } else {
                TilingMode::Heuristic
            };
            let outcome = if other.is_unknown() { Outcome::Unknown } else { Outcome::NoFactor };
            (outcome, max_tiling(pattern, &inst.union, mode)?.coverage())
        }
    };
    Ok((outcome, if n == 0 { 1.0 } else { coverage as f64 / n as f64 }))
}

/// Runs every `(n, c)` cell for every seed, with the random parts of one seed coupled
/// across the axis. Output order is `(n, axis value, seed)` whatever the thread count.
pub fn scan_threshold(spec: &ExperimentSpec, base: &Path, workers: Option<usize>) -> Result<ScanResult> {
    spec.validate()?;
    let pattern = spec.pattern(base)?;
    let axis = spec.axis()?;
    let ratio = d_star(&pattern)?.ratio;
    let hosts: Vec<Hypergraph> = spec.n.iter().map(|&n| spec.host(n, base)).collect::<Result<_>>()?;
    let mut probabilities: Vec<Vec<f64>> = Vec::with_capacity(spec.n.len());
    for &n in &spec.n {
        probabilities.push(match &axis {
            Axis::C(cs) => cs.iter().map(|c| p_for(c, n, ratio)).collect::<Result<_>>()?,
            Axis::P(ps) => ps.clone(),
        });
    }
    let c_values: Option<Vec<f64>> = match &axis {
        Axis::C(cs) => Some(cs.iter().map(crate::exact::rational_to_f64).collect()),
        Axis::P(_) => None,
    };
    let jobs: Vec<(usize, u64)> = (0..spec.n.len())
        .flat_map(|i| (0..spec.seeds_per_cell).map(move |s| (i, s)))
        .collect();
    let run_job = |&(i, seed): &(usize, u64)| -> Result<Vec<TrialRecord>> {
        let n = spec.n[i];
        let ps = &probabilities[i];
        // coupled sampling needs ascending probabilities
        let mut order: Vec<usize> = (0..ps.len()).collect();
        order.sort_by(|&a, &b| ps[a].total_cmp(&ps[b]).then(a.cmp(&b)));
        let sorted: Vec<f64> = order.iter().map(|&j| ps[j]).collect();
        let instances = perturb_coupled(&hosts[i], &sorted, &trial_sampler(spec, n, seed))?;
        let mut records: Vec<Option<TrialRecord>> = vec![None; ps.len()];
        for (inst, &j) in instances.iter().zip(&order) {
            let start = spec.timing.then(Instant::now);
            let (outcome, coverage) = classify(&pattern, inst, spec.node_budget)?;
            let copies = copy_count_statistic(&pattern, &inst.random_part);
            records[j] = Some(TrialRecord {
                n,
                c: c_values.as_ref().map(|c| c[j]),
                p: ps[j],
                seed,
                outcome,
                coverage,
                copies,
                wall_ms: start.map_or(0, |t| t.elapsed().as_millis() as u64),
            });
        }
        Ok(records.into_iter().map(|r| r.expect("every axis value visited")).collect())
    };
    let per_job: Vec<Vec<TrialRecord>> = in_pool(workers, || jobs.par_iter().map(run_job).collect::<Result<Vec<_>>>())??;

    let seeds = spec.seeds_per_cell as usize;
    let mut records = Vec::with_capacity(per_job.len() * axis.len());
    let mut cells = Vec::new();
    for i in 0..spec.n.len() {
        let block = &per_job[i * seeds..(i + 1) * seeds];
        for j in 0..axis.len() {
            let column: Vec<&TrialRecord> = block.iter().map(|r| &r[j]).collect();
            let decided = column.iter().filter(|r| r.outcome != Outcome::Unknown).count();
            let wins = column.iter().filter(|r| r.outcome == Outcome::Factor).count();
            cells.push(CellSummary {
                n: spec.n[i],
                c: column[0].c,
                p: column[0].p,
                rate: Proportion::wilson(wins, decided),
                unknown: column.len() - decided,
            });
            records.extend(column.into_iter().cloned());
        }
    }

    let thresholds = match (&spec.bisection, &axis) {
        (Some(b), Axis::C(_)) => spec
            .n
            .iter()
            .zip(&hosts)
            .map(|(&n, host)| {
                let per_seed = in_pool(workers, || {
                    (0..spec.seeds_per_cell)
                        .into_par_iter()
                        .map(|seed| seed_threshold(&pattern, host, ratio, spec, seed, b.lo, b.hi, b.iterations))
                        .collect::<Result<Vec<_>>>()
                })??;
                Ok(ThresholdEstimate {
                    n,
                    median: median_with_infinity(&per_seed),
                    per_seed,
                })
            })
            .collect::<Result<_>>()?,
        (Some(_), Axis::P(_)) => return Err(Error::InvalidParameter("bisection needs a c axis".into())),
        (None, _) => Vec::new(),
    };
    Ok(ScanResult {
        records,
        cells,
        thresholds,
    })
}

/// Smallest `c` (up to the bisection resolution) at which this seed's coupled instance has
/// a factor; `None` if even `hi` fails or stays undecided.
#[allow(clippy::too_many_arguments)]
fn seed_threshold(
    pattern: &Pattern,
    host: &Hypergraph,
    ratio: DensityRatio,
    spec: &ExperimentSpec,
    seed: u64,
    lo: f64,
    hi: f64,
    iterations: usize,
) -> Result<Option<f64>> {
    let n = host.n();
    let sampler = trial_sampler(spec, n, seed);
    let succeeds = |c: f64| -> Result<Option<bool>> {
        let c = crate::exact::parse_rational(&c.to_string())?;
        let inst = perturb(host, p_for(&c, n, ratio)?, &sampler)?;
        Ok(match has_factor_with_budget(pattern, &inst.union, spec.node_budget) {
            FactorOutcome::Unknown { .. } => None,
            other => Some(other.is_factor()),
        })
    };
    if succeeds(hi)? != Some(true) {
        return Ok(None);
    }
    if succeeds(lo)? == Some(true) {
        return Ok(Some(lo));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..iterations {
        let mid = (a * b).sqrt();
        match succeeds(mid)? {
            Some(true) => b = mid,
            Some(false) => a = mid,
            None => return Ok(None),
        }
    }
    Ok(Some(b))
}

/// Runs `job` on a pool of `workers` threads, or on the global pool.
pub fn in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}
