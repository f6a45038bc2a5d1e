//! Absorbing set, almost-cover and absorption on one perturbed instance.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::absorbing::{absorb, build_absorbing_set, AbsorbingConfig, AbsorbingConstants, AbsorbingOutcome, AbsorbingTrace};
use crate::error::Result;
use crate::factor::{greedy_tiling_within, verify_tiling, Tiling};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::pattern::Pattern;
use crate::random::{sample_two_rounds, SeededSampler};

/// Stage-by-stage record of [`run_pipeline`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineTrace {
    pub n: usize,
    pub p: f64,
    pub first_round_edges: usize,
    pub second_round_edges: usize,
    pub absorbing: AbsorbingTrace,
    pub cover_copies: usize,
    pub leftover: Option<usize>,
    pub leftover_bound: Option<usize>,
    pub factor_verified: bool,
    pub failure: Option<String>,
}

/// Splits `H^(k)(n, p)` into two rounds, builds an absorbing set in `host ∪ H_1`, covers the
/// rest greedily in `host ∪ H_2` leaving at most `ξn` vertices, and absorbs them.
pub fn run_pipeline(
    host: &Hypergraph,
    f: &Pattern,
    p: f64,
    constants: &AbsorbingConstants,
    config: &AbsorbingConfig,
    sampler: &SeededSampler,
) -> Result<(PipelineTrace, Option<Tiling>)> {
    let n = host.n();
    let (first, second) = sample_two_rounds(n, host.k(), p, sampler)?;
    let with_first = host.union(&first)?;
    let with_second = host.union(&second)?;
    let outcome = build_absorbing_set(&with_first, f, constants, config, &sampler.child(3))?;
    let mut trace = PipelineTrace {
        n,
        p,
        first_round_edges: first.num_edges(),
        second_round_edges: second.num_edges(),
        absorbing: outcome.trace().clone(),
        cover_copies: 0,
        leftover: None,
        leftover_bound: None,
        factor_verified: false,
        failure: None,
    };
    let set = match outcome {
        AbsorbingOutcome::Built(set) => set,
        AbsorbingOutcome::Failed(t) => {
            let stage = t.failure.as_ref().map(|s| s.stage.label()).unwrap_or("unknown");
            trace.failure = Some(format!("absorbing set: {stage}"));
            return Ok((trace, None));
        }
    };
    let bound = (&constants.xi * BigRational::from_integer(n.into()))
        .floor()
        .to_integer()
        .to_usize()
        .unwrap_or(usize::MAX);
    trace.leftover_bound = Some(bound);
    let rest = VertexSet::range(0, n).difference(&set.vertices);
    let (cover, left) = greedy_tiling_within(f, &with_second, &rest, bound.max(1));
    trace.cover_copies = cover.copies.len();
    trace.leftover = Some(left.len());
    if left.len() > bound {
        trace.failure = Some(format!("almost-cover left {} vertices, bound {bound}", left.len()));
        return Ok((trace, None));
    }
    let mut tiling = match absorb(&set, &with_first, f, &left) {
        Ok(t) => t,
        Err(e) => {
            trace.failure = Some(format!("absorb: {e}"));
            return Ok((trace, None));
        }
    };
    tiling.extend(cover);
    let whole = with_first.union(&second)?;
    trace.factor_verified = verify_tiling(f, &whole, &tiling, true);
    if !trace.factor_verified {
        trace.failure = Some("combined tiling failed verification".into());
        return Ok((trace, None));
    }
    Ok((trace, Some(tiling)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absorbers::{AbsorberKind, FamilySource, TemplateChoice};

    #[test]
    fn complete_host_pipeline() {
        let e = Pattern::single_edge(3).unwrap();
        let h = Hypergraph::complete(90, 3).unwrap();
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let c = AbsorbingConstants::toy(r(1, 1), r(1, 9), r(6, 1), r(1, 30)).unwrap();
        let config = AbsorbingConfig {
            families: FamilySource::XFirst,
            template: TemplateChoice::Sparse,
            absorbers: AbsorberKind::Minimal { max_tries: 100 },
            ..AbsorbingConfig::default()
        };
        let (trace, tiling) = run_pipeline(&h, &e, 0.0, &c, &config, &SeededSampler::new(1, 0)).unwrap();
        assert!(trace.failure.is_none(), "{:?}", trace.failure);
        assert_eq!(tiling.unwrap().copies.len(), 30);
    }
}
