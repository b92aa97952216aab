//! Property suites grounding every construction in the brute-force prefix
//! oracle, plus the algebraic invariants of the canonical machinery.

use proptest::prelude::*;

use pathsets::canonical::{
    canonicalize, closure_sets, equals, find_eventually_periodic, is_member, is_shift_invariant,
    is_subset,
};
use pathsets::construct::{
    decimate, determinize, determinize_full, label_product, shift, shift_closure, union,
};
use pathsets::corpus::{gen_random, oracle_prefixes, PrefixLanguage};
use pathsets::entropy::{adjacency, anywhere_block_count, block_series, initial_block_count,
    spectral_radius};
use pathsets::graph::{DuplicateEdges, Edge, LabeledGraph, PointedGraph};

fn instance() -> impl Strategy<Value = PointedGraph> {
    (0u64..2000, 1usize..=5, 1usize..=3, 0.15f64..0.5)
        .prop_map(|(seed, states, symbols, density)| {
            gen_random(seed, states, symbols, density).expect("params in range")
        })
}

fn instance_pair() -> impl Strategy<Value = (PointedGraph, PointedGraph)> {
    (0u64..2000, 0u64..2000, 1usize..=5, 1usize..=3, 0.15f64..0.5).prop_map(
        |(s1, s2, states, symbols, density)| {
            (
                gen_random(s1, states, symbols, density).expect("params in range"),
                gen_random(s2, states, symbols, density).expect("params in range"),
            )
        },
    )
}

fn oracle(p: &PointedGraph, n: usize) -> PrefixLanguage {
    oracle_prefixes(p, n).expect("depth within cap")
}

/// Blocks of the path set anywhere, straight from the oracle: the union of
/// the walk languages at every vertex of the pruned presentation.
fn oracle_anywhere(p: &PointedGraph, n: usize) -> PrefixLanguage {
    let pruned = p.prune();
    let g = pruned.graph();
    let mut acc = PrefixLanguage::new(n, Vec::new());
    for v in 0..g.vertex_count() {
        let at_v = PointedGraph::new(g.clone(), v).expect("vertex exists");
        acc = acc.union(&oracle(&at_v, n));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn prune_is_idempotent_and_normalized(p in instance()) {
        let pruned = p.prune();
        prop_assert_eq!(pruned.prune(), pruned.clone());
        let g = pruned.graph();
        for v in 0..g.vertex_count() {
            prop_assert!(!g.out(v).is_empty());
        }
        prop_assert_eq!(pruned.reachability_radius().is_ok(), true);
    }

    #[test]
    fn prune_preserves_member_prefixes(p in instance()) {
        // Decorate a pruned instance with a reachable dead-end chain and an
        // unreachable component, then check that pruning restores exactly
        // the strings that extend to length n + |V| (such walks reach a
        // cycle, hence extend forever).
        let g = p.graph();
        let nv = g.vertex_count();
        let mut names = g.names().to_vec();
        names.push("x0".into());
        names.push("x1".into());
        names.push("x2".into());
        let mut edges = g.edges().to_vec();
        edges.push(Edge { from: p.start(), label: 0, to: nv });     // into dead chain
        edges.push(Edge { from: nv, label: 0, to: nv + 1 });        // chain step, x1 stranded
        edges.push(Edge { from: nv + 2, label: 0, to: p.start() }); // unreachable
        edges.push(Edge { from: nv + 2, label: 0, to: nv + 2 });
        let decorated = LabeledGraph::from_indexed(
            g.alphabet().clone(),
            names,
            edges,
            DuplicateEdges::Collapse,
        )
        .expect("decoration is valid")
        .graph;
        let decorated = PointedGraph::new(decorated, p.start()).expect("start exists");

        let n = 5;
        let total = decorated.graph().vertex_count();
        let long = oracle(&decorated, n + total);
        let truncated = PrefixLanguage::new(
            n,
            long.words().iter().map(|w| w[..n].to_vec()).collect(),
        );
        prop_assert_eq!(oracle(&decorated.prune(), n), truncated);
    }

    #[test]
    fn determinize_is_right_resolving_pruned_and_equal(p in instance()) {
        let det = determinize(&p);
        prop_assert!(det.graph().is_right_resolving());
        prop_assert_eq!(det.prune(), det.clone());
        prop_assert_eq!(oracle(&det, 6), oracle(&p.prune(), 6));
    }

    #[test]
    fn subset_states_present_member_unions(p in instance()) {
        let det = determinize_full(&p);
        let source = det.source.graph();
        let per_vertex: Vec<PrefixLanguage> = (0..source.vertex_count())
            .map(|v| oracle(&PointedGraph::new(source.clone(), v).expect("vertex"), 6))
            .collect();
        for (state, members) in det.state_members.iter().enumerate() {
            let at_state =
                PointedGraph::new(det.result.graph().clone(), state).expect("state exists");
            let mut expected = PrefixLanguage::new(6, Vec::new());
            for &v in members {
                expected = expected.union(&per_vertex[v]);
            }
            prop_assert_eq!(oracle(&at_state, 6), expected);
        }
    }

    #[test]
    fn product_presents_intersection(pair in instance_pair()) {
        let (p1, p2) = pair;
        let prod = label_product(&p1, &p2).expect("same alphabet");
        let expected = oracle(&p1, 6).intersect(&oracle(&p2, 6));
        prop_assert_eq!(oracle(&prod, 6), expected);
    }

    #[test]
    fn union_presents_union(pair in instance_pair()) {
        let (p1, p2) = pair;
        let u = union(&p1, &p2).expect("same alphabet");
        let expected = oracle(&p1, 6).union(&oracle(&p2, 6));
        prop_assert_eq!(oracle(&u, 6), expected);
    }

    #[test]
    fn shift_drops_first_symbol(p in instance()) {
        let s = shift(&p);
        prop_assert_eq!(oracle(&s, 6), oracle(&p, 7).shifted());
    }

    #[test]
    fn closure_collects_blocks_anywhere(p in instance()) {
        let c = shift_closure(&p);
        prop_assert_eq!(oracle(&c, 6), oracle_anywhere(&p, 6));
    }

    #[test]
    fn decimation_reads_off_digits(p in instance()) {
        for (j, m, k) in [(0usize, 2usize, 4usize), (1, 2, 4), (0, 3, 3), (2, 1, 6)] {
            let d = decimate(&p, j, m).expect("m >= 1");
            let depth = j + (k - 1) * m + 1;
            let expected = oracle(&p, depth).decimated(j, m, k);
            prop_assert_eq!(oracle(&d, k), expected);
        }
    }

    #[test]
    fn decimation_composes(p in instance()) {
        let twice = decimate(&decimate(&p, 0, 2).expect("ok"), 0, 2).expect("ok");
        let squared = decimate(&p, 0, 4).expect("ok");
        prop_assert!(equals(&twice, &squared).expect("same alphabet"));
    }

    #[test]
    fn canonicalize_is_idempotent(p in instance()) {
        let c = canonicalize(&p);
        prop_assert_eq!(canonicalize(c.pointed()), c.clone());
        if !c.is_empty() {
            prop_assert!(c.pointed().graph().is_right_resolving());
            prop_assert_eq!(c.pointed().prune(), c.pointed().clone());
        }
    }

    #[test]
    fn equality_agrees_with_prefix_language(pair in instance_pair()) {
        let (p1, p2) = pair;
        let eq = equals(&p1, &p2).expect("same alphabet");
        // Pruned presentations are determined by their prefix languages,
        // and the depth-10 language determines all shallower ones.
        prop_assert_eq!(eq, oracle(&p1, 10) == oracle(&p2, 10));
    }

    #[test]
    fn mutual_subset_is_equality(pair in instance_pair()) {
        let (p1, p2) = pair;
        let fwd = is_subset(&p1, &p2).expect("same alphabet");
        let bwd = is_subset(&p2, &p1).expect("same alphabet");
        let eq = equals(&p1, &p2).expect("same alphabet");
        prop_assert_eq!(fwd && bwd, eq);
        // Containment agrees with the oracle on finite prefixes.
        let l1 = oracle(&p1, 8);
        let l2 = oracle(&p2, 8);
        prop_assert_eq!(fwd, l1.intersect(&l2) == l1);
    }

    #[test]
    fn witness_is_member(p in instance()) {
        let w = find_eventually_periodic(&p).expect("non-empty");
        prop_assert!(is_member(&p, &w).expect("labels in range"));
    }

    #[test]
    fn shift_invariance_formulations_agree(p in instance()) {
        let direct = is_shift_invariant(&p);
        let via_union = equals(&union(&shift(&p), &p).expect("same alphabet"), &p)
            .expect("same alphabet");
        prop_assert_eq!(direct, via_union);
    }

    #[test]
    fn sofic_presentations_are_shift_invariant(p in instance()) {
        let sofic = pathsets::construct::determinize_sofic(p.prune().graph()).expect("non-empty");
        prop_assert!(is_shift_invariant(&sofic));
    }

    #[test]
    fn closure_family_is_closed_and_bounded(p in instance()) {
        let family = closure_sets(&p);
        let alphabet = p.graph().alphabet();
        let g = alphabet.len();
        let d = family.members[0].state_count();
        prop_assert!(family.size() <= (1usize << d) * (1 + g));
        for (i, member) in family.members.iter().enumerate() {
            let shifted = canonicalize(&shift(member.pointed()));
            prop_assert_eq!(&family.members[family.shift_image[i]], &shifted);
            for j in 0..g {
                let z = pathsets::construct::prefix_graph(alphabet, alphabet.symbol(j))
                    .expect("symbol in alphabet");
                let inter = canonicalize(&label_product(member.pointed(), &z).expect("alphabet"));
                match family.intersections[i][j] {
                    None => prop_assert!(inter.is_empty()),
                    Some(k) => {
                        prop_assert_eq!(&family.members[k], &inter);
                        let after = canonicalize(&shift(inter.pointed()));
                        let t = family.transitions[i][j].expect("non-empty intersection");
                        prop_assert_eq!(&family.members[t], &after);
                    }
                }
            }
        }
    }

    #[test]
    fn block_count_inequalities(p in instance()) {
        let series = block_series(&p, 12).expect("non-empty");
        prop_assert!(series.lower_sandwich_holds());
        prop_assert!(series.summed_sandwich_holds());
        // Initial counts never decrease on pruned presentations.
        for w in series.initial.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn anywhere_counts_match_closure_counts(p in instance()) {
        let closure = shift_closure(&p);
        for n in [1usize, 3, 6] {
            prop_assert_eq!(
                anywhere_block_count(&p, n),
                initial_block_count(&closure, n)
            );
        }
    }

    #[test]
    fn entropy_is_presentation_invariant(p in instance()) {
        let canon = canonicalize(&p);
        let det = determinize(&p);
        let tol = 1e-6;
        let from_canon = spectral_radius(&adjacency(canon.pointed().graph()), 1e-9);
        let from_det = spectral_radius(&adjacency(det.graph()), 1e-9);
        prop_assert!((from_canon - from_det).abs() <= tol,
            "canonical {} vs determinized {}", from_canon, from_det);
    }

    #[test]
    fn shift_entropy_bounded_by_closure_entropy(p in instance()) {
        let shifted = shift(&p);
        let closure = shift_closure(&p);
        if shifted.is_empty() {
            return Ok(());
        }
        let h_shift = spectral_radius(&adjacency(canonicalize(&shifted).pointed().graph()), 1e-9)
            .ln();
        let h_closure =
            spectral_radius(&adjacency(canonicalize(&closure).pointed().graph()), 1e-9).ln();
        prop_assert!(h_shift <= h_closure + 1e-9);
    }
}
