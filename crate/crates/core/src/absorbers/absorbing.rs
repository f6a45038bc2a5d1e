//! Absorbing-set assembly and the absorption step.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use super::simple::{choose_root, find_simple_absorber, simple_absorber_tilings, SimpleSearchOptions};
use super::template::{template_search, template_verify, TemplateGraph, TEMPLATE_MAX_DEGREE};
use crate::error::{Error, Result};
use crate::factor::{has_factor, verify_tiling_covers, Embedding, Matcher, SearchOrder, Tiling};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::pattern::Pattern;
use crate::random::{PerturbedInstance, SeededSampler};

fn rat(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `ρ`, `q`, `β`, `ξ` of the absorbing-set construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsorbingConstants {
    pub rho: BigRational,
    pub q: BigRational,
    pub beta: BigRational,
    pub xi: BigRational,
}

impl AbsorbingConstants {
    /// `q = ρ/(1300 b²)`, `β = q^{b−1} ρ/8`, `ξ = βq/(2(1+β)(b−1))`.
    pub fn from_rho(rho: &BigRational, b: usize) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidParameter("b must be at least 2".into()));
        }
        let q = rho / rat(1300 * b * b);
        let beta = num_traits::pow(q.clone(), b - 1) * rho / rat(8);
        let xi = &beta * &q / (rat(2) * (BigRational::one() + &beta) * rat(b - 1));
        Self::toy(rho.clone(), q, beta, xi)
    }

    /// Arbitrary constants with `0 < ρ, q ≤ 1` and `β, ξ > 0`.
    pub fn toy(rho: BigRational, q: BigRational, beta: BigRational, xi: BigRational) -> Result<Self> {
        let one = BigRational::one();
        if !(rho > BigRational::zero() && rho <= one && q > BigRational::zero() && q <= one) {
            return Err(Error::InvalidParameter("need 0 < rho, q <= 1".into()));
        }
        if beta <= BigRational::zero() || xi <= BigRational::zero() {
            return Err(Error::InvalidParameter("need beta, xi > 0".into()));
        }
        Ok(AbsorbingConstants { rho, q, beta, xi })
    }
}

/// Where the per-vertex families of rooted copies come from.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySource {
    /// `families[v]`: copies of `F` through `v` whose other vertices are pairwise disjoint.
    Given(Vec<Vec<Embedding>>),
    /// Greedy disjoint rooted copies over the whole vertex set, then restricted to `X`.
    Greedy,
    /// Greedy disjoint rooted copies built inside `X` once `X` is drawn.
    XFirst,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TemplateChoice {
    Complete,
    Sparse,
    Given(TemplateGraph),
    Search { delta_cap: usize, attempts: usize },
}

/// How each template edge gets its absorber.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AbsorberKind {
    /// Simple absorbers on `b²` vertices.
    Simple(SimpleSearchOptions),
    /// `b`-vertex absorbers: a copy `A` with `H[A ∪ S]` factorisable; at most `max_tries`
    /// copies are tried per edge.
    Minimal { max_tries: usize },
}

impl AbsorberKind {
    fn size(&self, b: usize) -> usize {
        match self {
            AbsorberKind::Simple(_) => b * b,
            AbsorberKind::Minimal { .. } => b,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AbsorbingConfig {
    pub families: FamilySource,
    pub template: TemplateChoice,
    pub absorbers: AbsorberKind,
    /// Vertices kept out of `X`.
    pub v0: VertexSet,
    pub max_x_retries: usize,
}

impl Default for AbsorbingConfig {
    fn default() -> Self {
        AbsorbingConfig {
            families: FamilySource::Greedy,
            template: TemplateChoice::Complete,
            absorbers: AbsorberKind::Simple(SimpleSearchOptions::default()),
            v0: VertexSet::empty(),
            max_x_retries: 50,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbsorbingStage {
    XConcentration,
    FamilyShortfall,
    Template,
    ConstantsTooLarge,
    Allocation,
}

impl AbsorbingStage {
    pub fn label(&self) -> &'static str {
        match self {
            AbsorbingStage::XConcentration => "x-concentration",
            AbsorbingStage::FamilyShortfall => "family-shortfall",
            AbsorbingStage::Template => "template",
            AbsorbingStage::ConstantsTooLarge => "constants-too-large",
            AbsorbingStage::Allocation => "allocation",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageFailure {
    pub stage: AbsorbingStage,
    pub detail: String,
}

/// Sizes and counters from every stage of the build.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AbsorbingTrace {
    pub n: usize,
    pub b: usize,
    pub rho: String,
    pub q: String,
    pub beta: String,
    pub xi: String,
    pub x_attempts: usize,
    pub x_sampled: usize,
    pub x_size: usize,
    pub m: usize,
    pub beta_m: usize,
    pub family_min: Option<usize>,
    pub family_required: Option<usize>,
    pub y_size: usize,
    pub z_size: usize,
    pub template_edges: usize,
    pub template_max_degree: usize,
    pub template_attempts: Option<usize>,
    pub accounting_used: usize,
    pub accounting_budget: String,
    pub absorbers_placed: usize,
    pub absorbing_set_size: usize,
    pub failure: Option<StageFailure>,
}

/// An absorber placed for one template edge, with both of its factors.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedAbsorber {
    pub edge: (usize, usize),
    pub s: Vec<usize>,
    pub vertices: VertexSet,
    pub without_s: Tiling,
    pub with_s: Tiling,
}

/// The absorbing set `A = X ∪ Y ∪ Z ∪ ⋃ A_e` with the bookkeeping `absorb` needs.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsorbingSet {
    pub n: usize,
    pub constants: AbsorbingConstants,
    pub m: usize,
    pub beta_m: usize,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z_parts: Vec<Vec<usize>>,
    pub template: TemplateGraph,
    pub absorbers: Vec<PlacedAbsorber>,
    /// `families[v]`: rooted copies through `v` whose other vertices lie in `X`.
    pub families: Vec<Vec<Embedding>>,
    pub vertices: VertexSet,
    pub trace: AbsorbingTrace,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AbsorbingOutcome {
    Built(Box<AbsorbingSet>),
    Failed(AbsorbingTrace),
}

impl AbsorbingOutcome {
    pub fn built(&self) -> Option<&AbsorbingSet> {
        match self {
            AbsorbingOutcome::Built(s) => Some(s),
            AbsorbingOutcome::Failed(_) => None,
        }
    }

    pub fn trace(&self) -> &AbsorbingTrace {
        match self {
            AbsorbingOutcome::Built(s) => &s.trace,
            AbsorbingOutcome::Failed(t) => t,
        }
    }

    pub fn failed_stage(&self) -> Option<AbsorbingStage> {
        self.trace().failure.as_ref().map(|f| f.stage)
    }
}

/// Copies of `F` through `v` inside `allowed ∪ {v}`, chosen greedily so that their other
/// vertices are pairwise disjoint.
pub fn rooted_family(f: &Pattern, h: &Hypergraph, v: usize, allowed: &FixedBitSet) -> Vec<Embedding> {
    let mut free = allowed.clone();
    free.insert(v);
    let mut family = Vec::new();
    loop {
        let found = (0..f.b()).find_map(|u| {
            Matcher::with_anchors(f, h, SearchOrder::Connected, &[(u, v)])
                .restrict_to(&free)
                .first()
        });
        let Some(copy) = found else { break };
        for &w in &copy.map {
            if w != v {
                free.set(w, false);
            }
        }
        family.push(copy);
    }
    family
}

fn others(copy: &Embedding, v: usize) -> impl Iterator<Item = usize> + '_ {
    copy.map.iter().copied().filter(move |&w| w != v)
}

/// Maps a tiling of `H[set]` back to host labels.
fn lift(tiling: &Tiling, set: &VertexSet) -> Tiling {
    let labels = set.members();
    Tiling {
        copies: tiling
            .copies
            .iter()
            .map(|e| Embedding {
                map: e.map.iter().map(|&i| labels[i]).collect(),
            })
            .collect(),
    }
}

fn fail(mut trace: AbsorbingTrace, stage: AbsorbingStage, detail: String) -> AbsorbingOutcome {
    trace.failure = Some(StageFailure { stage, detail });
    AbsorbingOutcome::Failed(trace)
}

/// Builds an absorbing set in `h` for `F`.
///
/// Per-vertex inclusion in `X` with probability `q` is retried until
/// `qn/2 ≤ |X| ≤ 2qn` and every restricted family has at least `max(1, ⌈q^{b−1}|F_v|/4⌉)`
/// members. `m` is the largest integer with `βm` integral and `(1+β)m ≤ |X|`; `X` is then
/// trimmed to its lowest `(1+β)m` vertices. Before allocation the exact vertex count
/// `|X| + |Y| + |Z| + (absorber size)·|E(B)|` must be at most `ρn/2`.
pub fn build_absorbing_set(
    h: &Hypergraph,
    f: &Pattern,
    constants: &AbsorbingConstants,
    config: &AbsorbingConfig,
    sampler: &SeededSampler,
) -> Result<AbsorbingOutcome> {
    let (n, b) = (h.n(), f.b());
    if h.k() != f.k() {
        return Err(Error::ShapeMismatch(format!("host is a {}-graph, pattern a {}-graph", h.k(), f.k())));
    }
    config.v0.check_within(n)?;
    if let FamilySource::Given(families) = &config.families {
        if families.len() != n {
            return Err(Error::ShapeMismatch(format!("need {n} families, got {}", families.len())));
        }
    }
    let mut trace = AbsorbingTrace {
        n,
        b,
        rho: constants.rho.to_string(),
        q: constants.q.to_string(),
        beta: constants.beta.to_string(),
        xi: constants.xi.to_string(),
        ..AbsorbingTrace::default()
    };
    let outside_v0: Vec<usize> = (0..n).filter(|&v| !config.v0.contains(v)).collect();
    let mut everything = FixedBitSet::with_capacity(n);
    everything.insert_range(..);
    // unrestricted families, used for the size requirement
    let full: Vec<Vec<Embedding>> = match &config.families {
        FamilySource::Given(families) => families.clone(),
        _ => (0..n).map(|v| rooted_family(f, h, v, &everything)).collect(),
    };
    let q_pow = num_traits::pow(constants.q.clone(), b - 1);
    let required: Vec<usize> = full
        .iter()
        .map(|fam| {
            let need = (&q_pow * rat(fam.len()) / rat(4)).ceil().to_integer();
            need.to_usize().unwrap_or(usize::MAX).max(1)
        })
        .collect();
    let q_f64 = constants.q.to_f64().unwrap_or(0.0);
    let qn = &constants.q * rat(n);
    let (beta_numer, beta_denom) = (constants.beta.numer().clone(), constants.beta.denom().clone());
    let step = beta_denom.to_usize().ok_or_else(|| Error::InvalidParameter("beta denominator too large".into()))?;

    let mut last_failure = (AbsorbingStage::XConcentration, String::from("no attempts made"));
    let mut chosen: Option<(Vec<usize>, usize, Vec<Vec<Embedding>>)> = None;
    for attempt in 0..config.max_x_retries {
        trace.x_attempts = attempt + 1;
        let mut rng = sampler.rng(attempt as u64);
        let x: Vec<usize> = outside_v0.iter().copied().filter(|_| rng.gen::<f64>() < q_f64).collect();
        trace.x_sampled = x.len();
        let size = rat(x.len());
        if size < &qn / rat(2) || size > &qn * rat(2) {
            last_failure = (
                AbsorbingStage::XConcentration,
                format!("|X| = {} outside [qn/2, 2qn] with qn = {qn}", x.len()),
            );
            continue;
        }
        // largest multiple m of the denominator of beta with (1 + beta) m <= |X|
        let unit = step + (beta_numer.to_usize().unwrap_or(usize::MAX));
        let m = (x.len() / unit) * step;
        if m == 0 {
            last_failure = (
                AbsorbingStage::XConcentration,
                format!("|X| = {} too small for (1 + beta) m with m >= 1", x.len()),
            );
            continue;
        }
        let beta_m = m / step * beta_numer.to_usize().expect("checked above");
        let x: Vec<usize> = x[..m + beta_m].to_vec();
        let x_bits = VertexSet::new(x.clone())?.to_bitset(n);
        let families: Vec<Vec<Embedding>> = match &config.families {
            FamilySource::XFirst => (0..n).map(|v| rooted_family(f, h, v, &x_bits)).collect(),
            _ => full
                .iter()
                .enumerate()
                .map(|(v, fam)| {
                    fam.iter()
                        .filter(|c| others(c, v).all(|w| x_bits.contains(w)))
                        .cloned()
                        .collect()
                })
                .collect(),
        };
        let short = outside_v0.iter().copied().find(|&v| families[v].len() < required[v]);
        trace.family_min = outside_v0.iter().map(|&v| families[v].len()).min();
        trace.family_required = outside_v0.iter().map(|&v| required[v]).max();
        if let Some(v) = short {
            last_failure = (
                AbsorbingStage::FamilyShortfall,
                format!("vertex {v} has {} copies inside X, needs {}", families[v].len(), required[v]),
            );
            continue;
        }
        chosen = Some((x, m, families));
        break;
    }
    let Some((x, m, families)) = chosen else {
        return Ok(fail(trace, last_failure.0, last_failure.1));
    };
    let beta_m = (BigRational::from_integer(m.into()) * &constants.beta).to_integer().to_usize().expect("integral");
    trace.x_size = x.len();
    trace.m = m;
    trace.beta_m = beta_m;

    // Y and Z: lowest-index vertices outside X and V0
    let mut taken = VertexSet::new(x.clone())?.union(&config.v0).to_bitset(n);
    let mut rest = (0..n).filter(|&v| !taken.contains(v));
    let y: Vec<usize> = rest.by_ref().take(2 * m).collect();
    let z: Vec<usize> = rest.by_ref().take(3 * m * (b - 1)).collect();
    trace.y_size = y.len();
    trace.z_size = z.len();
    if y.len() < 2 * m || z.len() < 3 * m * (b - 1) {
        return Ok(fail(trace, AbsorbingStage::Allocation, "not enough vertices for Y and Z".into()));
    }
    for &v in y.iter().chain(&z) {
        taken.insert(v);
    }
    let z_parts: Vec<Vec<usize>> = z.chunks(b - 1).map(<[usize]>::to_vec).collect();

    let template = match &config.template {
        TemplateChoice::Complete => TemplateGraph::complete(m, beta_m),
        TemplateChoice::Sparse => TemplateGraph::sparse(m, beta_m),
        TemplateChoice::Given(t) => t.clone(),
        TemplateChoice::Search { delta_cap, attempts } => {
            let found = template_search(m, &constants.beta, *delta_cap, &sampler.child(u64::MAX), *attempts)?;
            trace.template_attempts = Some(found.attempts);
            match found.template {
                Some(t) => t,
                None => {
                    return Ok(fail(
                        trace,
                        AbsorbingStage::Template,
                        format!("no template within {} attempts", found.attempts),
                    ))
                }
            }
        }
    };
    trace.template_edges = template.num_edges();
    trace.template_max_degree = template.max_degree();
    if template.m != m || template.beta_m != beta_m {
        return Ok(fail(trace, AbsorbingStage::Template, "template has the wrong class sizes".into()));
    }
    if template.max_degree() > TEMPLATE_MAX_DEGREE {
        return Ok(fail(
            trace,
            AbsorbingStage::Template,
            format!("template degree {} exceeds {TEMPLATE_MAX_DEGREE}", template.max_degree()),
        ));
    }
    match template_verify(&template, m, &constants.beta) {
        Ok(true) => {}
        Ok(false) => return Ok(fail(trace, AbsorbingStage::Template, "template matching property fails".into())),
        // too large to enumerate; the matching is still checked inside absorb
        Err(Error::GuardExceeded(_)) => {}
        Err(e) => return Err(e),
    }

    let used = x.len() + y.len() + z.len() + config.absorbers.size(b) * template.num_edges();
    let budget = &constants.rho * rat(n) / rat(2);
    trace.accounting_used = used;
    trace.accounting_budget = budget.to_string();
    if rat(used) > budget {
        return Ok(fail(
            trace,
            AbsorbingStage::ConstantsTooLarge,
            format!("absorbing structure needs {used} vertices, budget rho n / 2 = {budget}"),
        ));
    }

    let owned_instance;
    let root = match config.absorbers {
        AbsorberKind::Simple(opts) => {
            owned_instance = Some(PerturbedInstance::new(h.clone(), Hypergraph::empty(h.k(), n)?)?);
            Some(match opts.root {
                Some(r) => r,
                None => choose_root(f, h, &[0])?,
            })
        }
        AbsorberKind::Minimal { .. } => {
            owned_instance = None;
            None
        }
    };
    let mut absorbers = Vec::with_capacity(template.num_edges());
    for (l, zi) in template.edges() {
        let left_vertex = if l < template.x_len() { x[l] } else { y[l - template.x_len()] };
        let mut s = z_parts[zi].clone();
        s.push(left_vertex);
        s.sort_unstable();
        let placed = match config.absorbers {
            AbsorberKind::Simple(opts) => {
                let instance = owned_instance.as_ref().expect("built above");
                let forbidden = VertexSet::from_unsorted(taken.ones().filter(|v| !s.contains(v)));
                let opts = SimpleSearchOptions { root, ..opts };
                find_simple_absorber(instance, &s, f, &forbidden, &opts)?.and_then(|st| {
                    let (without_s, with_s) = simple_absorber_tilings(h, &st, f)?;
                    Some(PlacedAbsorber {
                        edge: (l, zi),
                        s: s.clone(),
                        vertices: st.vertices(),
                        without_s,
                        with_s,
                    })
                })
            }
            AbsorberKind::Minimal { max_tries } => minimal_absorber(h, f, &s, &taken, max_tries)?.map(|(a, without_s, with_s)| PlacedAbsorber {
                edge: (l, zi),
                s: s.clone(),
                vertices: a,
                without_s,
                with_s,
            }),
        };
        let Some(placed) = placed else {
            trace.absorbers_placed = absorbers.len();
            return Ok(fail(
                trace,
                AbsorbingStage::Allocation,
                format!("no absorber for S = {s:?} avoiding used vertices"),
            ));
        };
        for v in placed.vertices.iter() {
            taken.insert(v);
        }
        absorbers.push(placed);
    }
    trace.absorbers_placed = absorbers.len();

    let mut all: Vec<usize> = x.iter().chain(&y).chain(&z).copied().collect();
    for a in &absorbers {
        all.extend(a.vertices.iter());
    }
    let vertices = VertexSet::from_unsorted(all);
    trace.absorbing_set_size = vertices.len();
    Ok(AbsorbingOutcome::Built(Box::new(AbsorbingSet {
        n,
        constants: constants.clone(),
        m,
        beta_m,
        x,
        y,
        z_parts,
        template,
        absorbers,
        families,
        vertices,
        trace,
    })))
}

/// A `b`-vertex absorber for `s` avoiding `taken`: a copy `A` of `F` with an F-factor on
/// `A ∪ S`.
fn minimal_absorber(h: &Hypergraph, f: &Pattern, s: &[usize], taken: &FixedBitSet, max_tries: usize) -> Result<Option<(VertexSet, Tiling, Tiling)>> {
    let mut allowed = FixedBitSet::with_capacity(h.n());
    allowed.insert_range(..);
    allowed.difference_with(taken);
    for &v in s {
        allowed.set(v, false);
    }
    let s_set = VertexSet::new(s.to_vec())?;
    let mut tries = 0;
    let mut found = None;
    let mut failure = None;
    Matcher::new(f, h, SearchOrder::Connected).restrict_to(&allowed).for_each(|copy| {
        tries += 1;
        let a = VertexSet::from_unsorted(copy.iter().copied());
        let joint = a.union(&s_set);
        match h.induced(&joint) {
            Ok(sub) => {
                if let Some(t) = has_factor(f, &sub).tiling() {
                    let without = Tiling {
                        copies: vec![Embedding { map: copy.to_vec() }],
                    };
                    found = Some((a, without, lift(t, &joint)));
                    return false;
                }
            }
            Err(e) => {
                failure = Some(e);
                return false;
            }
        }
        tries < max_tries
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// Extends the absorbing set's factor to `A ∪ R`.
///
/// Takes `X'` as the lowest `(βm − (b−1)|R|)/b` vertices of `X`, gives every vertex of
/// `R ∪ X'` the first family member disjoint from everything chosen so far, matches the
/// rest of `X` together with `Y` onto `Z` in the template, and uses each absorber's
/// factor with or without its `S` accordingly.
pub fn absorb(state: &AbsorbingSet, h: &Hypergraph, f: &Pattern, r: &VertexSet) -> Result<Tiling> {
    let (n, b) = (state.n, f.b());
    if h.n() != n {
        return Err(Error::ShapeMismatch(format!("host has {} vertices, absorbing set was built for {n}", h.n())));
    }
    r.check_within(n)?;
    if !r.is_disjoint(&state.vertices) {
        return Err(Error::InvalidVertexSet("R meets the absorbing set".into()));
    }
    if rat(r.len()) > &state.constants.xi * rat(n) {
        return Err(Error::InvalidParameter(format!(
            "|R| = {} exceeds xi n = {}",
            r.len(),
            &state.constants.xi * rat(n)
        )));
    }
    if !(state.vertices.len() + r.len()).is_multiple_of(b) {
        return Err(Error::InvalidParameter(format!(
            "b = {b} does not divide |A| + |R| = {}",
            state.vertices.len() + r.len()
        )));
    }
    let spent = (b - 1) * r.len();
    if spent > state.beta_m || !(state.beta_m - spent).is_multiple_of(b) {
        return Err(Error::InvalidParameter(format!(
            "beta m - (b-1)|R| = {} - {spent} is not in b N",
            state.beta_m
        )));
    }
    let x_prime: Vec<usize> = state.x[..(state.beta_m - spent) / b].to_vec();
    let mut blocked = FixedBitSet::with_capacity(n);
    for &v in &x_prime {
        blocked.insert(v);
    }
    let mut tiling = Tiling::default();
    for v in r.iter().chain(x_prime.iter().copied()) {
        let pick = state.families[v]
            .iter()
            .find(|c| others(c, v).all(|w| !blocked.contains(w)))
            .ok_or_else(|| Error::AbsorptionFailed(format!("no free family member left for vertex {v}")))?;
        for w in others(pick, v) {
            blocked.insert(w);
        }
        tiling.copies.push(pick.clone());
    }
    // X minus Q, in template labels, plus Y
    let x_len = state.template.x_len();
    let mut left: Vec<usize> = (0..x_len).filter(|&l| !blocked.contains(state.x[l])).collect();
    if left.len() != state.m {
        return Err(Error::AbsorptionFailed(format!("|X minus Q| = {}, expected m = {}", left.len(), state.m)));
    }
    left.extend(x_len..state.template.left_len());
    let matching = state
        .template
        .saturating_matching(&left)
        .ok_or_else(|| Error::AbsorptionFailed("template has no matching for this X'".into()))?;
    for a in &state.absorbers {
        let part = if matching.binary_search(&a.edge).is_ok() {
            &a.with_s
        } else {
            &a.without_s
        };
        tiling.copies.extend(part.copies.iter().cloned());
    }
    let target = state.vertices.union(r);
    if !verify_tiling_covers(f, h, &tiling, target.members()) {
        return Err(Error::AbsorptionFailed("assembled tiling failed verification".into()));
    }
    Ok(tiling)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn toy_config() -> AbsorbingConfig {
        AbsorbingConfig {
            families: FamilySource::XFirst,
            template: TemplateChoice::Sparse,
            absorbers: AbsorberKind::Minimal { max_tries: 1000 },
            ..AbsorbingConfig::default()
        }
    }

    #[test]
    fn proof_constants() {
        let c = AbsorbingConstants::from_rho(&r(1, 2), 3).unwrap();
        assert_eq!(c.q, r(1, 23400));
        assert_eq!(c.beta, r(1, 23400 * 23400 * 16));
        assert!(AbsorbingConstants::toy(r(0, 1), r(1, 2), r(1, 1), r(1, 1)).is_err());
    }

    #[test]
    fn complete_host_round_trip() {
        let e = Pattern::single_edge(3).unwrap();
        let h = Hypergraph::complete(90, 3).unwrap();
        // beta m = 6 leaves room for |R| = 3, and 42 used vertices fit in rho n / 2 = 45
        let c = AbsorbingConstants::toy(r(1, 1), r(1, 9), r(6, 1), r(1, 30)).unwrap();
        let out = build_absorbing_set(&h, &e, &c, &toy_config(), &SeededSampler::new(1, 0)).unwrap();
        let set = out.built().unwrap_or_else(|| panic!("{:?}", out.trace().failure));
        assert!(rat(set.vertices.len()) <= &c.rho * rat(90) / rat(2));
        let empty = absorb(set, &h, &e, &VertexSet::empty()).unwrap();
        assert_eq!(empty.coverage(), set.vertices.len());
        let outside: Vec<usize> = (0..90).filter(|&v| !set.vertices.contains(v)).take(3).collect();
        let t = absorb(set, &h, &e, &VertexSet::new(outside).unwrap()).unwrap();
        assert_eq!(t.coverage(), set.vertices.len() + 3);
    }

    #[test]
    fn edgeless_host_fails_allocation() {
        let e = Pattern::single_edge(3).unwrap();
        let h = Hypergraph::empty(3, 90).unwrap();
        let c = AbsorbingConstants::toy(r(1, 1), r(1, 15), r(2, 1), r(1, 30)).unwrap();
        let out = build_absorbing_set(&h, &e, &c, &toy_config(), &SeededSampler::new(1, 0)).unwrap();
        assert_eq!(out.failed_stage(), Some(AbsorbingStage::FamilyShortfall));
        // degenerate families pass the size check, so the build reaches allocation
        let families = (0..90).map(|v| vec![Embedding { map: vec![v, v, v] }]).collect();
        let config = AbsorbingConfig {
            families: FamilySource::Given(families),
            ..toy_config()
        };
        let out = build_absorbing_set(&h, &e, &c, &config, &SeededSampler::new(1, 0)).unwrap();
        assert_eq!(out.failed_stage(), Some(AbsorbingStage::Allocation));
    }

    #[test]
    fn oversized_structure_reports_constants() {
        let e = Pattern::single_edge(3).unwrap();
        let h = Hypergraph::complete(30, 3).unwrap();
        let c = AbsorbingConstants::toy(r(1, 4), r(1, 5), r(1, 1), r(1, 30)).unwrap();
        let out = build_absorbing_set(&h, &e, &c, &toy_config(), &SeededSampler::new(1, 0)).unwrap();
        assert_eq!(out.failed_stage(), Some(AbsorbingStage::ConstantsTooLarge));
    }
}
