//! Labelled patterns and their density parameters.
//!
//! Every parameter here is a max or min over subgraphs, and for each vertex count `v'` only
//! the largest edge count matters. [`SubgraphProfile`] records that maximum (with a
//! canonical witness) for every `v'`; `d*`, `Phi` and strict balancedness are read off it.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::PowerProduct;
use crate::hypergraph::Hypergraph;

const EDGE_ROUTE_MAX_EDGES: usize = 22;
const VERTEX_ROUTE_MAX_VERTICES: usize = 26;

/// A labelled k-graph `F` used as a tiling pattern.
#[derive(Clone)]
pub struct Pattern {
    graph: Hypergraph,
    profile: OnceLock<Result<SubgraphProfile>>,
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Pattern").field(&self.graph).finish()
    }
}

impl Pattern {
    /// Requires at least `k` vertices.
    pub fn new(graph: Hypergraph) -> Result<Self> {
        if graph.n() < graph.k() {
            return Err(Error::InvalidArity(format!(
                "pattern needs at least k = {} vertices, got {}",
                graph.k(),
                graph.n()
            )));
        }
        Ok(Pattern {
            graph,
            profile: OnceLock::new(),
        })
    }

    pub fn from_edges<E: AsRef<[usize]>>(k: usize, b: usize, edges: impl IntoIterator<Item = E>) -> Result<Self> {
        Pattern::new(Hypergraph::new(k, b, edges)?)
    }

    /// One k-edge on k vertices.
    pub fn single_edge(k: usize) -> Result<Self> {
        Pattern::new(Hypergraph::complete(k, k)?)
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.graph.k()
    }

    /// Number of vertices.
    pub fn b(&self) -> usize {
        self.graph.n()
    }

    /// Number of edges.
    pub fn f(&self) -> usize {
        self.graph.num_edges()
    }

    pub(crate) fn require_edges(&self, what: &str) -> Result<()> {
        if self.f() == 0 {
            return Err(Error::UndefinedParameter(format!("{what} needs a pattern with an edge")));
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<&SubgraphProfile> {
        self.profile
            .get_or_init(|| SubgraphProfile::compute(&self.graph))
            .as_ref()
            .map_err(Clone::clone)
    }
}

/// An exact ratio `edges / (vertices - 1)`.
#[derive(Clone, Copy, Debug, Eq, Serialize)]
pub struct DensityRatio {
    pub numerator: u64,
    pub denominator: u64,
}

impl DensityRatio {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator >= 1, "density ratio needs a positive denominator");
        DensityRatio { numerator, denominator }
    }

    pub fn to_rational(self) -> Rational64 {
        Rational64::new(self.numerator as i64, self.denominator as i64)
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl PartialEq for DensityRatio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl PartialOrd for DensityRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DensityRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.numerator as u128 * other.denominator as u128)
            .cmp(&(other.numerator as u128 * self.denominator as u128))
    }
}

impl fmt::Display for DensityRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_rational();
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// A subgraph of a pattern given by vertex and edge indices of the pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    /// Indices into the pattern's lexicographically ordered edge list.
    pub edges: Vec<usize>,
}

impl Subgraph {
    /// The subgraph as a pattern of its own, relabelled in vertex order.
    pub fn to_pattern(&self, f: &Pattern) -> Result<Pattern> {
        let mut position = vec![usize::MAX; f.b()];
        for (i, &v) in self.vertices.iter().enumerate() {
            position[v] = i;
        }
        let edges: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|&i| f.graph().edge(i).iter().map(|&v| position[v]).collect())
            .collect();
        Pattern::from_edges(f.k(), self.vertices.len(), edges)
    }
}

/// For each vertex count `v'`, the most edges of any subgraph on `v'` vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgraphProfile {
    /// `max_edges[v']` for `v'` in `0..=b`.
    pub max_edges: Vec<usize>,
    /// Lexicographically smallest edge-index list attaining `max_edges[v']` on at most
    /// `v'` vertices.
    pub witness: Vec<Vec<usize>>,
}

impl SubgraphProfile {
    pub fn compute(g: &Hypergraph) -> Result<Self> {
        let (b, f) = (g.n(), g.num_edges());
        if f <= EDGE_ROUTE_MAX_EDGES && b <= 64 && (f <= b || b > VERTEX_ROUTE_MAX_VERTICES) {
            Ok(Self::by_edge_subsets(g))
        } else if b <= VERTEX_ROUTE_MAX_VERTICES {
            Ok(Self::by_vertex_subsets(g))
        } else {
            Err(Error::GuardExceeded(format!(
                "subgraph enumeration for a pattern with {b} vertices and {f} edges"
            )))
        }
    }

    fn by_edge_subsets(g: &Hypergraph) -> Self {
        let (b, f) = (g.n(), g.num_edges());
        let edge_masks: Vec<u64> = g.edges().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
        let total = 1usize << f;
        let mut span = vec![0u64; total];
        let mut best_by_span = vec![0usize; b + 1];
        for mask in 1..total {
            let low = mask.trailing_zeros() as usize;
            span[mask] = span[mask & (mask - 1)] | edge_masks[low];
            let s = span[mask].count_ones() as usize;
            let c = mask.count_ones() as usize;
            if c > best_by_span[s] {
                best_by_span[s] = c;
            }
        }
        let mut max_edges = vec![0usize; b + 1];
        for v in 1..=b {
            max_edges[v] = max_edges[v - 1].max(best_by_span[v]);
        }
        // lexicographically smallest index list: the lowest differing bit belongs to it
        let mut best_mask: Vec<Option<usize>> = vec![None; b + 1];
        best_mask[0] = Some(0);
        for v in 1..=b {
            if max_edges[v] == 0 {
                best_mask[v] = Some(0);
            }
        }
        for mask in 1..total {
            let s = span[mask].count_ones() as usize;
            let c = mask.count_ones() as usize;
            for v in s..=b {
                if max_edges[v] != c {
                    continue;
                }
                let better = match best_mask[v] {
                    None => true,
                    Some(cur) => {
                        let diff = cur ^ mask;
                        diff != 0 && mask & diff & diff.wrapping_neg() != 0
                    }
                };
                if better {
                    best_mask[v] = Some(mask);
                }
            }
        }
        let witness = best_mask
            .into_iter()
            .map(|m| {
                let m = m.unwrap_or(0);
                (0..f).filter(|&i| m >> i & 1 == 1).collect()
            })
            .collect();
        SubgraphProfile { max_edges, witness }
    }

    fn by_vertex_subsets(g: &Hypergraph) -> Self {
        let b = g.n();
        let edge_masks: Vec<u32> = g.edges().map(|e| e.iter().fold(0u32, |m, &v| m | 1 << v)).collect();
        // edges grouped by their largest vertex
        let mut by_top: Vec<Vec<u32>> = vec![Vec::new(); b];
        for &m in &edge_masks {
            by_top[31 - m.leading_zeros() as usize].push(m);
        }
        let total = 1usize << b;
        let mut count = vec![0u32; total];
        let mut max_edges = vec![0usize; b + 1];
        for set in 1..total {
            let top = (usize::BITS - 1 - set.leading_zeros()) as usize;
            let rest = set & !(1 << top);
            let extra = by_top[top].iter().filter(|&&m| m as usize & !set == 0).count() as u32;
            count[set] = count[rest] + extra;
            let v = set.count_ones() as usize;
            max_edges[v] = max_edges[v].max(count[set] as usize);
        }
        let mut witness: Vec<Option<Vec<usize>>> = vec![None; b + 1];
        for set in 0..total {
            let v = set.count_ones() as usize;
            if count[set] as usize != max_edges[v] {
                continue;
            }
            let induced: Vec<usize> = (0..edge_masks.len())
                .filter(|&i| edge_masks[i] as usize & !set == 0)
                .collect();
            if witness[v].as_ref().is_none_or(|cur| induced < *cur) {
                witness[v] = Some(induced);
            }
        }
        SubgraphProfile {
            max_edges,
            witness: witness.into_iter().map(Option::unwrap_or_default).collect(),
        }
    }

    fn subgraph(&self, g: &Hypergraph, v: usize) -> Subgraph {
        let edges = self.witness[v].clone();
        let mut vertices: Vec<usize> = edges.iter().flat_map(|&i| g.edge(i).iter().copied()).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut pad = 0;
        while vertices.len() < v {
            if !vertices.contains(&pad) {
                vertices.push(pad);
            }
            pad += 1;
        }
        vertices.sort_unstable();
        Subgraph { vertices, edges }
    }
}

/// `d*(F)` with its canonical maximising subgraph `J`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DStar {
    pub ratio: DensityRatio,
    pub densest: Subgraph,
}

/// Maximum of `e'/(v'-1)` over subgraphs with at least two vertices. Ties go to the fewest
/// vertices, then to the lexicographically smallest edge-index list.
pub fn d_star(f: &Pattern) -> Result<DStar> {
    f.require_edges("d*")?;
    let profile = f.profile()?;
    let mut best: Option<(DensityRatio, usize)> = None;
    for v in 2..=f.b() {
        let r = DensityRatio::new(profile.max_edges[v] as u64, (v - 1) as u64);
        if best.is_none_or(|(cur, _)| r > cur) {
            best = Some((r, v));
        }
    }
    let (ratio, v) = best.expect("a pattern with an edge has at least two vertices");
    Ok(DStar {
        ratio,
        densest: profile.subgraph(f.graph(), v),
    })
}

/// `ln Phi_F` and a minimising subgraph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiValue {
    pub log_value: f64,
    pub minimiser: Subgraph,
}

/// Relative tolerance for float comparisons of log-scale `Phi` values.
pub const PHI_FLOAT_TOLERANCE: f64 = 1e-12;

/// `ln Phi_F(n, p)` for `p = exp(log_p) <= 1`.
pub fn phi(f: &Pattern, n: u64, log_p: f64) -> Result<PhiValue> {
    f.require_edges("Phi")?;
    if log_p > 0.0 || log_p.is_nan() {
        return Err(Error::InvalidParameter(format!("log p must be <= 0, got {log_p}")));
    }
    let profile = f.profile()?;
    let ln_n = (n as f64).ln();
    let mut best: Option<(f64, usize)> = None;
    for v in 1..=f.b() {
        let e = profile.max_edges[v];
        if e == 0 {
            continue;
        }
        let value = v as f64 * ln_n + e as f64 * log_p;
        let improves = match best {
            None => true,
            Some((cur, _)) => value < cur - PHI_FLOAT_TOLERANCE * cur.abs().max(1.0),
        };
        if improves {
            best = Some((value, v));
        }
    }
    let (log_value, v) = best.expect("pattern has an edge");
    Ok(PhiValue {
        log_value,
        minimiser: profile.subgraph(f.graph(), v),
    })
}

/// `Phi_F(n, p)` in exact arithmetic for any positive `p`.
pub fn phi_exact(f: &Pattern, n: u64, p: &PowerProduct) -> Result<(PowerProduct, Subgraph)> {
    f.require_edges("Phi")?;
    let profile = f.profile()?;
    let n_pp = PowerProduct::integer(n)?;
    if p.cmp_value(&PowerProduct::one()) == Ordering::Greater {
        // with p > 1 a single edge is the cheapest subgraph
        let first = Subgraph {
            vertices: f.graph().edge(0).to_vec(),
            edges: vec![0],
        };
        return Ok((n_pp.powi(f.k() as i64).mul(p), first));
    }
    let mut best: Option<(PowerProduct, usize)> = None;
    for v in 1..=f.b() {
        let e = profile.max_edges[v];
        if e == 0 {
            continue;
        }
        let value = n_pp.powi(v as i64).mul(&p.powi(e as i64));
        if best.as_ref().is_none_or(|(cur, _)| value < *cur) {
            best = Some((value, v));
        }
    }
    let (value, v) = best.expect("pattern has an edge");
    Ok((value, profile.subgraph(f.graph(), v)))
}

/// `p = c * n^(-1/d)` as an exact power product.
pub fn p_from_c(c: &BigRational, n: u64, d: DensityRatio) -> Result<PowerProduct> {
    let exponent = -Rational64::new(d.denominator as i64, d.numerator as i64);
    let c_pp = PowerProduct::rational(c.clone())?;
    let n_rat = BigRational::from_integer(BigInt::from(n));
    Ok(c_pp.mul(&PowerProduct::power(n_rat, exponent)?))
}

/// Every proper subgraph on at least two vertices has a strictly smaller ratio than `F`.
pub fn is_strictly_balanced(f: &Pattern) -> Result<bool> {
    f.require_edges("strict balancedness")?;
    if f.b() < 2 {
        return Err(Error::UndefinedParameter("strict balancedness needs two vertices".into()));
    }
    let profile = f.profile()?;
    let own = DensityRatio::new(f.f() as u64, (f.b() - 1) as u64);
    Ok((2..f.b()).all(|v| DensityRatio::new(profile.max_edges[v] as u64, (v - 1) as u64) < own))
}

/// Whether the link of `v` splits into `k - 1` classes with every link edge transversal.
pub fn link_is_partite(f: &Pattern, v: usize) -> Result<bool> {
    let link = f.graph().link(v)?;
    let parts = f.k() - 1;
    if parts == 1 || link.is_edgeless() {
        return Ok(true);
    }
    let mut colour = vec![usize::MAX; link.n()];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); link.n()];
    for (i, e) in link.edges().enumerate() {
        for &u in e {
            incident[u].push(i);
        }
    }
    let order: Vec<usize> = (0..link.n()).filter(|&u| !incident[u].is_empty()).collect();
    Ok(colour_transversally(&link, &incident, &order, 0, parts, 0, &mut colour))
}

fn colour_transversally(
    link: &Hypergraph,
    incident: &[Vec<usize>],
    order: &[usize],
    pos: usize,
    parts: usize,
    used: usize,
    colour: &mut [usize],
) -> bool {
    if pos == order.len() {
        return true;
    }
    let u = order[pos];
    // colours beyond the first unused one are symmetric
    for c in 0..parts.min(used + 1) {
        colour[u] = c;
        let ok = incident[u].iter().all(|&i| {
            link.edge(i)
                .iter()
                .filter(|&&w| w != u)
                .all(|&w| colour[w] != c)
        });
        if ok && colour_transversally(link, incident, order, pos + 1, parts, used.max(c + 1), colour) {
            return true;
        }
    }
    colour[u] = usize::MAX;
    false
}

/// True iff some vertex of `F` has a `(k-1)`-partite link.
pub fn alpha_is_zero(f: &Pattern) -> Result<bool> {
    f.require_edges("alpha")?;
    for v in 0..f.b() {
        if link_is_partite(f, v)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A member of the glued family: a centre copy of `F` plus `b` pairwise disjoint petal copies,
/// petal `i` sharing exactly one vertex with the centre.
#[derive(Clone, Debug, PartialEq)]
pub struct GluedFamilyMember {
    pub graph: Hypergraph,
    /// Labels of the centre copy; the centre occupies `0..b`.
    pub center: Vec<usize>,
    /// `petals[i][u]` is the label of pattern vertex `u` in petal `i`.
    pub petals: Vec<Vec<usize>>,
}

impl GluedFamilyMember {
    /// Re-checks the structural invariants.
    pub fn verify(&self, f: &Pattern) -> bool {
        let b = f.b();
        let copy_ok = |labels: &[usize]| {
            f.graph().edges().all(|e| {
                let mut img: Vec<usize> = e.iter().map(|&u| labels[u]).collect();
                img.sort_unstable();
                self.graph.has_edge(&img)
            })
        };
        if self.graph.n() != b * b || self.petals.len() != b || !copy_ok(&self.center) {
            return false;
        }
        let mut owner = vec![usize::MAX; b * b];
        for (i, petal) in self.petals.iter().enumerate() {
            if !copy_ok(petal) {
                return false;
            }
            let shared = petal.iter().filter(|v| self.center.contains(v)).count();
            if shared != 1 {
                return false;
            }
            for &v in petal {
                if owner[v] != usize::MAX {
                    return false;
                }
                owner[v] = i;
            }
        }
        true
    }
}

/// Glues `b` petals onto a centre copy. `attach[i] = (c, t)` identifies vertex `t` of petal
/// `i` with vertex `c` of the centre. The centre vertices must be distinct, since the petals
/// have to be pairwise disjoint.
pub fn assemble_glued(f: &Pattern, attach: &[(usize, usize)]) -> Result<GluedFamilyMember> {
    let b = f.b();
    if attach.len() != b {
        return Err(Error::MalformedStructure(format!(
            "need one attachment per petal ({b}), got {}",
            attach.len()
        )));
    }
    let mut seen = vec![false; b];
    for &(c, t) in attach {
        if c >= b || t >= b {
            return Err(Error::MalformedStructure(format!("attachment ({c}, {t}) out of range")));
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(Error::MalformedStructure(format!(
                "centre vertex {c} used by two petals, which would overlap"
            )));
        }
    }
    let center: Vec<usize> = (0..b).collect();
    let mut next = b;
    let mut petals = Vec::with_capacity(b);
    for &(c, t) in attach {
        let labels: Vec<usize> = (0..b)
            .map(|u| {
                if u == t {
                    c
                } else {
                    next += 1;
                    next - 1
                }
            })
            .collect();
        petals.push(labels);
    }
    let mut edges: Vec<Vec<usize>> = f.graph().edge_vecs();
    for labels in &petals {
        edges.extend(f.graph().edges().map(|e| e.iter().map(|&u| labels[u]).collect::<Vec<_>>()));
    }
    let graph = Hypergraph::new(f.k(), b * b, edges)?;
    Ok(GluedFamilyMember { graph, center, petals })
}

/// Union of `f1` and `f2` with vertex `glue[0].1` of `f2` identified with `glue[0].0` of `f1`.
/// `f1` keeps its labels; the other vertices of `f2` follow in order.
pub fn glue_patterns(f1: &Pattern, f2: &Pattern, glue: &[(usize, usize)]) -> Result<Pattern> {
    if glue.len() != 1 {
        return Err(Error::OverlapNotSingleton(glue.len()));
    }
    if f1.k() != f2.k() {
        return Err(Error::ShapeMismatch(format!("uniformities {} and {}", f1.k(), f2.k())));
    }
    let (u, w) = glue[0];
    if u >= f1.b() || w >= f2.b() {
        return Err(Error::InvalidVertexSet(format!("glue vertices ({u}, {w}) out of range")));
    }
    let mut next = f1.b();
    let labels: Vec<usize> = (0..f2.b())
        .map(|x| {
            if x == w {
                u
            } else {
                next += 1;
                next - 1
            }
        })
        .collect();
    let mut edges = f1.graph().edge_vecs();
    edges.extend(f2.graph().edges().map(|e| e.iter().map(|&x| labels[x]).collect::<Vec<_>>()));
    Pattern::from_edges(f1.k(), f1.b() + f2.b() - 1, edges)
}

/// Checks `Phi(F1 u F2) >= min{Phi(F1), Phi(F2), Phi(F1) Phi(F2) / n}` exactly.
pub fn phi_union_bound_check(
    f1: &Pattern,
    f2: &Pattern,
    glue: &[(usize, usize)],
    n: u64,
    p: &PowerProduct,
) -> Result<bool> {
    let union = glue_patterns(f1, f2, glue)?;
    let (phi1, _) = phi_exact(f1, n, p)?;
    let (phi2, _) = phi_exact(f2, n, p)?;
    let (phi_u, _) = phi_exact(&union, n, p)?;
    let cross = phi1.mul(&phi2).div(&PowerProduct::integer(n)?);
    let bound = PowerProduct::min_of(PowerProduct::min_of(phi1, phi2), cross);
    Ok(phi_u >= bound)
}
