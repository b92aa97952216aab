//! Constructions that build new path sets from old ones.
//!
//! Everything here returns fresh, pruned presentations and treats the
//! inputs as read-only. The subset construction is lazy: only states
//! reachable from the initial subset are materialized, never the full
//! table of nonempty subsets.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::graph::{DuplicateEdges, Edge, LabeledGraph, PointedGraph};

/// Output of the subset construction, keeping enough of the provenance to
/// check each materialized state against the source presentation.
#[derive(Debug, Clone)]
pub struct Determinized {
    /// The right-resolving, pruned, reachable result.
    pub result: PointedGraph,
    /// The pruned source presentation the subsets refer to.
    pub source: PointedGraph,
    /// For each result vertex, the source vertices it stands for.
    pub state_members: Vec<Vec<usize>>,
}

fn join_names(source: &LabeledGraph, members: &[usize]) -> String {
    members
        .iter()
        .map(|&v| source.name(v))
        .collect::<Vec<_>>()
        .join("+")
}

fn uniquify(mut names: Vec<String>) -> Vec<String> {
    let mut used: HashSet<String> = HashSet::with_capacity(names.len());
    for n in names.iter_mut() {
        if used.insert(n.clone()) {
            continue;
        }
        let base = n.clone();
        let mut k = 2usize;
        loop {
            let candidate = format!("{base}_{k}");
            if used.insert(candidate.clone()) {
                *n = candidate;
                break;
            }
            k += 1;
        }
    }
    names
}

/// Subset construction over `source`, explored lazily from `initial`.
/// `source` must have no stranded vertices so that finite walks always
/// extend; callers prune or trim first.
fn subset_construct(source: &LabeledGraph, initial: Vec<usize>) -> (PointedGraph, Vec<Vec<usize>>) {
    debug_assert!(!initial.is_empty());
    let g = source.alphabet().len();
    let mut states: Vec<Vec<usize>> = vec![initial.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(initial, 0)]);
    let mut edges: Vec<Edge> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        for a in 0..g {
            let mut targets: BTreeSet<usize> = BTreeSet::new();
            for v in &states[i] {
                for e in source.out(*v) {
                    if e.label == a {
                        targets.insert(e.to);
                    }
                }
            }
            if targets.is_empty() {
                continue;
            }
            let key: Vec<usize> = targets.into_iter().collect();
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = states.len();
                    states.push(key.clone());
                    index.insert(key, id);
                    id
                }
            };
            edges.push(Edge {
                from: i,
                label: a,
                to: id,
            });
        }
        i += 1;
    }
    let names = uniquify(states.iter().map(|s| join_names(source, s)).collect());
    let graph = LabeledGraph::from_indexed(
        source.alphabet().clone(),
        names,
        edges,
        DuplicateEdges::Error,
    )
    .expect("subset construction emits valid edges")
    .graph;
    (
        PointedGraph::new(graph, 0).expect("state 0 exists"),
        states,
    )
}

/// Right-resolving presentation of the same path set, built lazily from
/// the singleton `{start}`. The empty path set passes through unchanged.
pub fn determinize(p: &PointedGraph) -> PointedGraph {
    determinize_full(p).result
}

/// [`determinize`] plus the subset each materialized state stands for.
pub fn determinize_full(p: &PointedGraph) -> Determinized {
    let source = p.prune();
    if source.is_empty() {
        return Determinized {
            result: source.clone(),
            source,
            state_members: vec![vec![0]],
        };
    }
    let (result, state_members) = subset_construct(source.graph(), vec![source.start()]);
    Determinized {
        result,
        source,
        state_members,
    }
}

/// Iteratively removes vertices with no exit edges. Unlike pruning there
/// is no reachability requirement; every surviving vertex is a legal walk
/// start.
fn trim_stranded(g: &LabeledGraph) -> LabeledGraph {
    let nv = g.vertex_count();
    let mut outdeg: Vec<usize> = (0..nv).map(|v| g.out(v).len()).collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for e in g.edges() {
        preds[e.to].push(e.from);
    }
    let mut dead = vec![false; nv];
    let mut peel: Vec<usize> = (0..nv).filter(|&v| outdeg[v] == 0).collect();
    while let Some(v) = peel.pop() {
        if dead[v] {
            continue;
        }
        dead[v] = true;
        for &p in &preds[v] {
            outdeg[p] -= 1;
            if outdeg[p] == 0 {
                peel.push(p);
            }
        }
    }
    let mut remap = vec![usize::MAX; nv];
    let mut names = Vec::new();
    for v in 0..nv {
        if !dead[v] {
            remap[v] = names.len();
            names.push(g.name(v).to_string());
        }
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| !dead[e.from] && !dead[e.to])
        .map(|e| Edge {
            from: remap[e.from],
            label: e.label,
            to: remap[e.to],
        })
        .collect();
    LabeledGraph::from_indexed(g.alphabet().clone(), names, edges, DuplicateEdges::Error)
        .expect("trimming preserves validity")
        .graph
}

/// The one-sided sofic shift of `g` presented as a path set: the subset
/// construction pointed at the full vertex set. Vertices without exit
/// edges generate no infinite walks and are dropped first.
pub fn determinize_sofic(g: &LabeledGraph) -> Result<PointedGraph> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let trimmed = trim_stranded(g);
    if trimmed.vertex_count() == 0 {
        return Ok(PointedGraph::empty(g.alphabet().clone(), g.name(0)));
    }
    let all: Vec<usize> = (0..trimmed.vertex_count()).collect();
    Ok(subset_construct(&trimmed, all).0)
}

/// Presents the intersection of the two path sets via the pointed label
/// product: vertices are pairs, edges are pairs of equally labeled edges.
pub fn label_product(p1: &PointedGraph, p2: &PointedGraph) -> Result<PointedGraph> {
    if p1.graph().alphabet() != p2.graph().alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let a = p1.prune();
    let b = p2.prune();
    let alphabet = a.graph().alphabet().clone();
    if a.is_empty() || b.is_empty() {
        return Ok(PointedGraph::empty(alphabet, "p"));
    }
    let (ga, gb) = (a.graph(), b.graph());
    let mut pairs: Vec<(usize, usize)> = vec![(a.start(), b.start())];
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([((a.start(), b.start()), 0)]);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (x, y) = pairs[i];
        for ea in ga.out(x) {
            for eb in gb.out(y) {
                if ea.label != eb.label {
                    continue;
                }
                let key = (ea.to, eb.to);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = pairs.len();
                        pairs.push(key);
                        index.insert(key, id);
                        id
                    }
                };
                edges.push(Edge {
                    from: i,
                    label: ea.label,
                    to: id,
                });
            }
        }
        i += 1;
    }
    let names = uniquify(
        pairs
            .iter()
            .map(|&(x, y)| format!("{}.{}", ga.name(x), gb.name(y)))
            .collect(),
    );
    let graph = LabeledGraph::from_indexed(alphabet, names, edges, DuplicateEdges::Error)
        .expect("product emits valid edges")
        .graph;
    Ok(PointedGraph::new(graph, 0).expect("pair 0 exists").prune())
}

/// Presents the union of the two path sets: disjoint sum plus a fresh
/// start vertex carrying copies of both start vertices' exit edges.
pub fn union(p1: &PointedGraph, p2: &PointedGraph) -> Result<PointedGraph> {
    if p1.graph().alphabet() != p2.graph().alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let a = p1.prune();
    let b = p2.prune();
    let alphabet = a.graph().alphabet().clone();
    let (ga, gb) = (a.graph(), b.graph());
    let off = ga.vertex_count();
    let fresh = off + gb.vertex_count();

    let mut names: Vec<String> = ga.names().to_vec();
    names.extend(gb.names().iter().cloned());
    names.push("u".to_string());
    let names = uniquify(names);

    let mut edges: Vec<Edge> = ga.edges().to_vec();
    edges.extend(gb.edges().iter().map(|e| Edge {
        from: e.from + off,
        label: e.label,
        to: e.to + off,
    }));
    edges.extend(ga.out(a.start()).iter().map(|e| Edge {
        from: fresh,
        label: e.label,
        to: e.to,
    }));
    edges.extend(gb.out(b.start()).iter().map(|e| Edge {
        from: fresh,
        label: e.label,
        to: e.to + off,
    }));

    let graph = LabeledGraph::from_indexed(alphabet, names, edges, DuplicateEdges::Collapse)
        .expect("disjoint sum emits valid edges")
        .graph;
    Ok(PointedGraph::new(graph, fresh)
        .expect("fresh vertex exists")
        .prune())
}

/// Points `g` at the union of the path sets of `targets`: a fresh vertex
/// carrying copies of every target's exit edges (or a plain re-point for a
/// single target). `g` must be free of stranded vertices.
fn point_at_union(g: &LabeledGraph, targets: &BTreeSet<usize>) -> PointedGraph {
    match targets.len() {
        0 => PointedGraph::empty(g.alphabet().clone(), "s"),
        1 => {
            let w = *targets.iter().next().expect("one target");
            PointedGraph::new(g.clone(), w).expect("target exists").prune()
        }
        _ => {
            let fresh = g.vertex_count();
            let mut names = g.names().to_vec();
            names.push("s".to_string());
            let names = uniquify(names);
            let mut edges = g.edges().to_vec();
            for &w in targets {
                for e in g.out(w) {
                    edges.push(Edge {
                        from: fresh,
                        label: e.label,
                        to: e.to,
                    });
                }
            }
            let graph = LabeledGraph::from_indexed(
                g.alphabet().clone(),
                names,
                edges,
                DuplicateEdges::Collapse,
            )
            .expect("copied edges are valid")
            .graph;
            PointedGraph::new(graph, fresh)
                .expect("fresh vertex exists")
                .prune()
        }
    }
}

/// Presents the shifted path set (first symbol dropped): the union of the
/// path sets at the start's one-step successors.
pub fn shift(p: &PointedGraph) -> PointedGraph {
    let q = p.prune();
    if q.is_empty() {
        return q;
    }
    let successors: BTreeSet<usize> = q.graph().out(q.start()).iter().map(|e| e.to).collect();
    point_at_union(q.graph(), &successors)
}

/// Presents the shift closure (union of all iterated shift images): the
/// union of the path sets at every vertex of the pruned presentation.
pub fn shift_closure(p: &PointedGraph) -> PointedGraph {
    let q = p.prune();
    if q.is_empty() {
        return q;
    }
    let all: BTreeSet<usize> = (0..q.graph().vertex_count()).collect();
    point_at_union(q.graph(), &all)
}

/// Presents the decimated path set: the subsequences formed by the digits
/// at indices `j, j+m, j+2m, ...` of the members.
///
/// The `j` leading digits are consumed by iterated shifts; the remaining
/// step-`m` extraction is built on the determinized presentation, with an
/// edge `u -> w` labeled `l` whenever some `m`-step walk from `u` to `w`
/// starts with an edge labeled `l`. With `m = 1` this degenerates to the
/// iterated shift.
pub fn decimate(p: &PointedGraph, j: usize, m: usize) -> Result<PointedGraph> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "decimation step m must be at least 1".into(),
        ));
    }
    let mut q = p.prune();
    for _ in 0..j {
        if q.is_empty() {
            break;
        }
        q = shift(&q);
    }
    if q.is_empty() {
        return Ok(q);
    }
    let d = determinize(&q);
    let g = d.graph();
    let nv = g.vertex_count();

    // Vertex sets reachable in exactly m-1 steps, per source vertex.
    let mut reach: Vec<BTreeSet<usize>> = (0..nv).map(|v| BTreeSet::from([v])).collect();
    for _ in 1..m {
        reach = reach
            .iter()
            .map(|set| {
                set.iter()
                    .flat_map(|&v| g.out(v).iter().map(|e| e.to))
                    .collect()
            })
            .collect();
    }

    let mut edges = Vec::new();
    for u in 0..nv {
        for e in g.out(u) {
            for &w in &reach[e.to] {
                edges.push(Edge {
                    from: u,
                    label: e.label,
                    to: w,
                });
            }
        }
    }
    let graph = LabeledGraph::from_indexed(
        g.alphabet().clone(),
        g.names().to_vec(),
        edges,
        DuplicateEdges::Collapse,
    )
    .expect("decimation emits valid edges")
    .graph;
    Ok(PointedGraph::new(graph, d.start())
        .expect("start survives")
        .prune())
}

/// The two-vertex presentation of the prefix set of `sym`: all sequences
/// whose first symbol is `sym`, with arbitrary continuation.
pub fn prefix_graph(alphabet: &Alphabet, sym: &str) -> Result<PointedGraph> {
    let j = alphabet
        .index_of(sym)
        .ok_or_else(|| Error::UnknownLabel(sym.to_string()))?;
    let mut edges = vec![Edge {
        from: 0,
        label: j,
        to: 1,
    }];
    for a in 0..alphabet.len() {
        edges.push(Edge {
            from: 1,
            label: a,
            to: 1,
        });
    }
    let graph = LabeledGraph::from_indexed(
        alphabet.clone(),
        vec!["v0".into(), "v1".into()],
        edges,
        DuplicateEdges::Error,
    )
    .expect("prefix graph is valid")
    .graph;
    PointedGraph::new(graph, 0)
}

/// Embeds a presentation into a sofic-shift presentation over an enlarged
/// alphabet: an extra vertex with a self-loop labeled `loop_symbol` and a
/// single edge into the old start labeled `new_symbol`. Reading the fresh
/// symbol then pins the old start, so the follower of that one-letter word
/// in the sofic shift of the result is the original path set.
pub fn follower_embedding(
    p: &PointedGraph,
    loop_symbol: &str,
    new_symbol: &str,
) -> Result<LabeledGraph> {
    let g = p.graph();
    let loop_idx = g
        .alphabet()
        .index_of(loop_symbol)
        .ok_or_else(|| Error::UnknownLabel(loop_symbol.to_string()))?;
    let extended = g.alphabet().extended(new_symbol)?;
    let new_idx = extended.len() - 1;
    let fresh = g.vertex_count();

    let mut names = g.names().to_vec();
    names.push("w".to_string());
    let names = uniquify(names);

    let mut edges = g.edges().to_vec();
    edges.push(Edge {
        from: fresh,
        label: loop_idx,
        to: fresh,
    });
    edges.push(Edge {
        from: fresh,
        label: new_idx,
        to: p.start(),
    });
    Ok(
        LabeledGraph::from_indexed(extended, names, edges, DuplicateEdges::Error)
            .expect("embedding emits valid edges")
            .graph,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{canonicalize, equals, follower_of_word, Word};
    use crate::corpus::{gen_blowup, gen_cycle, gen_fig4, gen_golden, gen_prefix_example};
    use crate::graph::build_graph;

    fn cycle_at(v: usize) -> PointedGraph {
        PointedGraph::new(gen_cycle(), v).unwrap()
    }

    fn full_shift(g: usize) -> PointedGraph {
        let alphabet = Alphabet::decimal(g);
        let edges: Vec<Edge> = (0..g).map(|a| Edge { from: 0, label: a, to: 0 }).collect();
        let built = LabeledGraph::from_indexed(
            alphabet,
            vec!["v0".into()],
            edges,
            DuplicateEdges::Error,
        )
        .unwrap();
        PointedGraph::new(built.graph, 0).unwrap()
    }

    #[test]
    fn determinize_sofic_fig4_counts() {
        let det = determinize_sofic(&gen_fig4()).unwrap();
        assert_eq!(det.graph().vertex_count(), 4);
        assert!(det.graph().is_right_resolving());
        assert_eq!(det.prune(), det);
    }

    #[test]
    fn determinize_already_deterministic() {
        let det = determinize(&gen_golden());
        assert_eq!(det.graph().vertex_count(), 2);
        assert!(equals(&det, &gen_golden()).unwrap());
    }

    #[test]
    fn determinize_sofic_blowup3_reaches_all_subsets() {
        let det = determinize_sofic(&gen_blowup(3).unwrap()).unwrap();
        assert_eq!(det.graph().vertex_count(), 7);
    }

    #[test]
    fn determinize_sofic_single_loop() {
        let p = full_shift(1);
        let det = determinize_sofic(p.graph()).unwrap();
        assert_eq!(det.graph().vertex_count(), 1);
    }

    #[test]
    fn determinize_sofic_rejects_empty_graph() {
        let g = LabeledGraph::from_indexed(
            Alphabet::decimal(1),
            vec![],
            vec![],
            DuplicateEdges::Error,
        )
        .unwrap()
        .graph;
        assert_eq!(determinize_sofic(&g), Err(Error::EmptyGraph));
    }

    #[test]
    fn product_with_prefix_set() {
        let golden = gen_golden();
        let z1 = gen_prefix_example(2, 1).unwrap();
        let p = label_product(&golden, &z1).unwrap();
        let l2 = crate::corpus::oracle_prefixes(&p, 2).unwrap();
        assert_eq!(l2.len(), 1);
        let l3 = crate::corpus::oracle_prefixes(&p, 3).unwrap();
        assert_eq!(l3.len(), 2);
    }

    #[test]
    fn product_idempotent_and_disjoint() {
        let golden = gen_golden();
        assert!(equals(&label_product(&golden, &golden).unwrap(), &golden).unwrap());

        let z0 = gen_prefix_example(2, 0).unwrap();
        let z1 = gen_prefix_example(2, 1).unwrap();
        assert!(label_product(&z0, &z1).unwrap().is_empty());
    }

    #[test]
    fn product_rejects_alphabet_mismatch() {
        let z0 = gen_prefix_example(2, 0).unwrap();
        let z0over3 = gen_prefix_example(3, 0).unwrap();
        assert_eq!(label_product(&z0, &z0over3), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn union_of_prefix_sets_is_full_shift() {
        let z0 = gen_prefix_example(2, 0).unwrap();
        let z1 = gen_prefix_example(2, 1).unwrap();
        let u = union(&z0, &z1).unwrap();
        assert!(equals(&u, &full_shift(2)).unwrap());
        let c = canonicalize(&u);
        assert_eq!(c.state_count(), 1);
        assert_eq!(c.pointed().graph().edge_count(), 2);
    }

    #[test]
    fn union_with_empty_is_identity() {
        let golden = gen_golden();
        let empty = PointedGraph::empty(Alphabet::decimal(2), "e");
        assert!(equals(&union(&golden, &empty).unwrap(), &golden).unwrap());
        assert!(equals(&union(&empty, &golden).unwrap(), &golden).unwrap());
    }

    #[test]
    fn union_of_cycle_vertices() {
        let u = union(&union(&cycle_at(0), &cycle_at(1)).unwrap(), &cycle_at(2)).unwrap();
        for n in 1..=8 {
            assert_eq!(crate::corpus::oracle_prefixes(&u, n).unwrap().len(), 3);
        }
    }

    #[test]
    fn shift_examples() {
        let z1 = gen_prefix_example(2, 1).unwrap();
        assert!(equals(&shift(&z1), &full_shift(2)).unwrap());

        assert!(equals(&shift(&cycle_at(0)), &cycle_at(1)).unwrap());

        let golden = gen_golden();
        assert!(equals(&shift(&golden), &golden).unwrap());
    }

    #[test]
    fn shift_closure_examples() {
        let z1 = gen_prefix_example(2, 1).unwrap();
        assert!(equals(&shift_closure(&z1), &full_shift(2)).unwrap());

        let all = union(&union(&cycle_at(0), &cycle_at(1)).unwrap(), &cycle_at(2)).unwrap();
        assert!(equals(&shift_closure(&cycle_at(0)), &all).unwrap());

        let golden = gen_golden();
        assert!(equals(&shift_closure(&golden), &golden).unwrap());
    }

    #[test]
    fn decimate_golden_by_two_is_full_shift() {
        let d = decimate(&gen_golden(), 0, 2).unwrap();
        assert!(equals(&d, &full_shift(2)).unwrap());
    }

    #[test]
    fn decimate_cycle_by_two() {
        let d = decimate(&cycle_at(0), 0, 2).unwrap();
        let alphabet = Alphabet::decimal(3);
        let expected = build_graph(
            &alphabet,
            &["a", "b", "c"],
            &[("a", "b", "0"), ("b", "c", "2"), ("c", "a", "1")],
            DuplicateEdges::Error,
        )
        .unwrap();
        let expected = PointedGraph::new(expected.graph, 0).unwrap();
        assert!(equals(&d, &expected).unwrap());
    }

    #[test]
    fn decimate_step_one_is_iterated_shift() {
        for p in [gen_golden(), cycle_at(0), gen_prefix_example(2, 1).unwrap()] {
            let d = decimate(&p, 3, 1).unwrap();
            let s = shift(&shift(&shift(&p)));
            assert!(equals(&d, &s).unwrap());
        }
        assert!(decimate(&gen_golden(), 0, 0).is_err());
    }

    #[test]
    fn prefix_graph_examples() {
        let alphabet = Alphabet::decimal(2);
        let z1 = prefix_graph(&alphabet, "1").unwrap();
        assert_eq!(z1.graph().vertex_count(), 2);
        assert_eq!(z1.graph().edge_count(), 3);
        assert_eq!(prefix_graph(&alphabet, "7"), Err(Error::UnknownLabel("7".into())));
    }

    #[test]
    fn follower_embedding_examples() {
        let z1 = gen_prefix_example(2, 1).unwrap();
        let embedded = follower_embedding(&z1, "0", "n").unwrap();
        assert_eq!(embedded.vertex_count(), 3);
        assert_eq!(embedded.alphabet().len(), 3);

        let sofic = determinize_sofic(&embedded).unwrap();
        let n_idx = embedded.alphabet().index_of("n").unwrap();
        let follower = follower_of_word(&sofic, &Word(vec![n_idx])).unwrap();
        let expected = z1.reembedded(embedded.alphabet()).unwrap();
        assert!(equals(&follower, &expected).unwrap());

        assert_eq!(
            follower_embedding(&z1, "7", "n"),
            Err(Error::UnknownLabel("7".into()))
        );
        assert_eq!(
            follower_embedding(&z1, "0", "1"),
            Err(Error::SymbolCollision("1".into()))
        );
    }

    #[test]
    fn decimation_composes() {
        for p in [gen_golden(), cycle_at(0), gen_prefix_example(2, 1).unwrap()] {
            let twice = decimate(&decimate(&p, 0, 2).unwrap(), 0, 2).unwrap();
            let once = decimate(&p, 0, 4).unwrap();
            assert!(equals(&twice, &once).unwrap());
        }
    }

    #[test]
    fn empty_inputs_propagate() {
        let empty = PointedGraph::empty(Alphabet::decimal(2), "e");
        assert!(determinize(&empty).is_empty());
        assert!(shift(&empty).is_empty());
        assert!(shift_closure(&empty).is_empty());
        assert!(decimate(&empty, 1, 2).unwrap().is_empty());
        let golden = gen_golden();
        assert!(label_product(&golden, &empty).unwrap().is_empty());
    }
}
