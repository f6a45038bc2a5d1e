use std::collections::BTreeSet;

use num_rational::Rational64;
use proptest::prelude::*;

use pfactor::combinatorics::for_each_combination_lex;
use pfactor::factor::{count_embeddings, count_rooted, has_factor, brute_force_oracle, verify_tiling};
use pfactor::pattern::{alpha_is_zero, d_star, link_is_partite};
use pfactor::random::{sample_coupled, SeededSampler};
use pfactor::{Hypergraph, Pattern, VertexSet};

fn ksets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    for_each_combination_lex(n, k, |c| {
        all.push(c.to_vec());
        true
    });
    all
}

/// `(k, n, chosen edges)` with `2 <= k <= kmax` and `k <= n <= nmax`.
fn graph_strategy(kmax: usize, nmax: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=kmax)
        .prop_flat_map(move |k| (Just(k), k..=nmax))
        .prop_flat_map(|(k, n)| {
            let all = ksets(n, k);
            let len = all.len();
            (Just((k, n, all)), proptest::collection::vec(any::<bool>(), len))
        })
        .prop_map(|((k, n, all), keep)| {
            let edges: Vec<Vec<usize>> = all.into_iter().zip(keep).filter(|(_, t)| *t).map(|(e, _)| e).collect();
            Hypergraph::new(k, n, edges).unwrap()
        })
}

fn pattern_strategy(kmax: usize, bmax: usize) -> impl Strategy<Value = Pattern> {
    graph_strategy(kmax, bmax)
        .prop_filter("pattern needs an edge", |g| !g.is_edgeless())
        .prop_map(|g| Pattern::new(g).unwrap())
}

fn relabel(g: &Hypergraph, perm: &[usize]) -> Hypergraph {
    let edges: Vec<Vec<usize>> = g
        .edges()
        .map(|e| {
            let mut img: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
            img.sort_unstable();
            img
        })
        .collect();
    Hypergraph::new(g.k(), g.n(), edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn degree_matches_naive_scan(g in graph_strategy(4, 8), picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let size = picks.len().min(g.k() - 1);
        let set: BTreeSet<usize> = picks.iter().take(size).map(|i| i.index(g.n())).collect();
        let s = VertexSet::new(set.iter().copied().collect()).unwrap();
        let naive = g.edges().filter(|e| set.iter().all(|v| e.contains(v))).count();
        prop_assert_eq!(g.degree(&s).unwrap(), naive);
    }

    #[test]
    fn degree_sum_is_k_times_edges(g in graph_strategy(4, 8)) {
        prop_assert_eq!(g.vertex_degrees().iter().sum::<usize>(), g.k() * g.num_edges());
    }

    #[test]
    fn link_size_is_degree(g in graph_strategy(4, 8), v in any::<prop::sample::Index>()) {
        let v = v.index(g.n());
        let d = g.degree(&VertexSet::new(vec![v]).unwrap()).unwrap();
        prop_assert_eq!(g.link(v).unwrap().num_edges(), d);
    }

    #[test]
    fn induced_commutes_with_union(a in graph_strategy(3, 7), mask in any::<u8>(), extra in any::<u64>()) {
        let (k, n) = (a.k(), a.n());
        let other: Vec<Vec<usize>> = ksets(n, k).into_iter().enumerate().filter(|(i, _)| extra >> (i % 64) & 1 == 1).map(|(_, e)| e).collect();
        let b = Hypergraph::new(k, n, other).unwrap();
        let s = VertexSet::from_unsorted((0..n).filter(|v| mask >> v & 1 == 1));
        let left = a.union(&b).unwrap().induced(&s).unwrap();
        let right = a.induced(&s).unwrap().union(&b.induced(&s).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn khg_round_trip(g in graph_strategy(4, 8)) {
        prop_assert_eq!(Hypergraph::parse_khg(&g.to_khg()).unwrap(), g);
    }

    #[test]
    fn d_star_matches_subset_oracle(f in pattern_strategy(4, 6)) {
        // max over vertex subsets U, |U| >= 2, of e(U) / (|U| - 1); fewest vertices on ties
        let b = f.b();
        let mut best: Option<(Rational64, usize)> = None;
        for mask in 0u32..(1 << b) {
            let size = mask.count_ones() as usize;
            if size < 2 {
                continue;
            }
            let inside = f.graph().edges().filter(|e| e.iter().all(|&v| mask >> v & 1 == 1)).count();
            let r = Rational64::new(inside as i64, size as i64 - 1);
            if best.is_none_or(|(br, bs)| r > br || (r == br && size < bs)) {
                best = Some((r, size));
            }
        }
        let (ratio, size) = best.unwrap();
        let ds = d_star(&f).unwrap();
        prop_assert_eq!(ds.ratio.to_rational(), ratio);
        prop_assert_eq!(ds.densest.vertices.len(), size);
        let inside = ds.densest.edges.len() as i64;
        prop_assert_eq!(Rational64::new(inside, size as i64 - 1), ratio);
    }

    #[test]
    fn alpha_invariant_under_relabelling(f in pattern_strategy(4, 6), seed in any::<u64>()) {
        let b = f.b();
        let mut perm: Vec<usize> = (0..b).collect();
        let mut x = seed;
        for i in (1..b).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        let g = Pattern::new(relabel(f.graph(), &perm)).unwrap();
        prop_assert_eq!(alpha_is_zero(&f).unwrap(), alpha_is_zero(&g).unwrap());
        for v in 0..b {
            prop_assert_eq!(link_is_partite(&f, v).unwrap(), link_is_partite(&g, perm[v]).unwrap());
        }
    }

    #[test]
    fn coupled_samples_are_nested(seed in any::<u64>(), mut ps in proptest::collection::vec(0.0f64..=1.0, 1..5)) {
        ps.sort_by(f64::total_cmp);
        let graphs = sample_coupled(9, 3, &ps, &SeededSampler::new(seed, 7)).unwrap();
        for pair in graphs.windows(2) {
            prop_assert!(pair[0].edges().all(|e| pair[1].has_edge(e)));
        }
    }

    #[test]
    fn rooted_counts_sum_to_embeddings(f in pattern_strategy(3, 4), h in graph_strategy(3, 7), v in any::<prop::sample::Index>()) {
        prop_assume!(f.k() == h.k());
        let v = v.index(f.b());
        let total: u128 = (0..h.n()).map(|w| count_rooted(&f, v, &h, w).unwrap()).sum();
        let star = Pattern::new(f.graph().star_subgraph(v).unwrap()).unwrap();
        prop_assert_eq!(total, count_embeddings(&star, &h, &[], None));
    }

    #[test]
    fn factor_search_agrees_with_oracle(f in pattern_strategy(3, 4), h in graph_strategy(3, 8)) {
        prop_assume!(f.k() == h.k());
        let out = has_factor(&f, &h);
        prop_assert_eq!(out.is_factor(), brute_force_oracle(&f, &h).unwrap());
        if let Some(t) = out.tiling() {
            prop_assert!(verify_tiling(&f, &h, t, true));
        }
    }
}
