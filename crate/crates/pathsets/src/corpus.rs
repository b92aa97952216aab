//! Reference graphs, random instances, and the brute-force prefix oracle
//! that grounds the property suites.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::graph::{build_graph, DuplicateEdges, Edge, LabeledGraph, PointedGraph};

/// Hard cap on oracle enumeration depth.
pub const ORACLE_MAX_DEPTH: usize = 14;

/// The set of label strings of a fixed length, kept sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixLanguage {
    pub depth: usize,
    words: Vec<Vec<usize>>,
}

impl PrefixLanguage {
    pub fn new(depth: usize, mut words: Vec<Vec<usize>>) -> Self {
        words.sort_unstable();
        words.dedup();
        debug_assert!(words.iter().all(|w| w.len() == depth));
        PrefixLanguage { depth, words }
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &[usize]) -> bool {
        self.words.binary_search_by(|w| w.as_slice().cmp(word)).is_ok()
    }

    /// Set intersection; both languages must have the same depth.
    pub fn intersect(&self, other: &PrefixLanguage) -> PrefixLanguage {
        assert_eq!(self.depth, other.depth);
        let words = self
            .words
            .iter()
            .filter(|w| other.contains(w))
            .cloned()
            .collect();
        PrefixLanguage {
            depth: self.depth,
            words,
        }
    }

    /// Set union; both languages must have the same depth.
    pub fn union(&self, other: &PrefixLanguage) -> PrefixLanguage {
        assert_eq!(self.depth, other.depth);
        let mut words = self.words.clone();
        words.extend(other.words.iter().cloned());
        PrefixLanguage::new(self.depth, words)
    }

    /// Drops the first symbol of every word: the shift transform, one
    /// level shallower.
    pub fn shifted(&self) -> PrefixLanguage {
        assert!(self.depth >= 1);
        let words = self.words.iter().map(|w| w[1..].to_vec()).collect();
        PrefixLanguage::new(self.depth - 1, words)
    }

    /// Reads off the digits at indices `j, j+m, ..., j+(k-1)m` of every
    /// word: the decimation transform at depth `k`.
    pub fn decimated(&self, j: usize, m: usize, k: usize) -> PrefixLanguage {
        assert!(m >= 1);
        assert!(k == 0 || j + (k - 1) * m + 1 <= self.depth);
        let words = self
            .words
            .iter()
            .map(|w| (0..k).map(|i| w[j + i * m]).collect())
            .collect();
        PrefixLanguage::new(k, words)
    }
}

/// All length-`n` label strings of walks leaving the start, by direct
/// depth-first enumeration on the raw graph — no determinization and no
/// canonicalization, so results are independent of the code under test.
/// The search tracks the set of walk endpoints per string prefix, which
/// dedups equal-labeled walks without changing the enumerated language.
///
/// On a pruned presentation this is exactly the depth-`n` prefix language
/// of the path set.
pub fn oracle_prefixes(p: &PointedGraph, n: usize) -> Result<PrefixLanguage> {
    if n > ORACLE_MAX_DEPTH {
        return Err(Error::DepthTooLarge {
            requested: n,
            max: ORACLE_MAX_DEPTH,
        });
    }
    let g = p.graph();
    let symbols = g.alphabet().len();
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut prefix: Vec<usize> = Vec::with_capacity(n);

    fn dfs(
        g: &LabeledGraph,
        symbols: usize,
        ends: &[usize],
        prefix: &mut Vec<usize>,
        n: usize,
        words: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == n {
            words.push(prefix.clone());
            return;
        }
        for a in 0..symbols {
            let mut next: BTreeSet<usize> = BTreeSet::new();
            for &v in ends {
                for e in g.out(v) {
                    if e.label == a {
                        next.insert(e.to);
                    }
                }
            }
            if next.is_empty() {
                continue;
            }
            let next: Vec<usize> = next.into_iter().collect();
            prefix.push(a);
            dfs(g, symbols, &next, prefix, n, words);
            prefix.pop();
        }
    }

    dfs(g, symbols, &[p.start()], &mut prefix, n, &mut words);
    // Symbols are explored in order, so the output is already sorted and
    // duplicate-free.
    Ok(PrefixLanguage { depth: n, words })
}

/// The two-vertex presentation of the prefix set of digit `j` over the
/// decimal alphabet of size `g`.
pub fn gen_prefix_example(g: usize, j: usize) -> Result<PointedGraph> {
    if g == 0 {
        return Err(Error::InvalidArgument("alphabet size must be >= 1".into()));
    }
    if j >= g {
        return Err(Error::IndexOutOfRange { index: j, bound: g });
    }
    let alphabet = Alphabet::decimal(g);
    crate::construct::prefix_graph(&alphabet, &j.to_string())
}

/// Three-cycle with edge labels 0, 1, 2: each vertex generates a
/// one-element path set.
pub fn gen_cycle() -> LabeledGraph {
    let alphabet = Alphabet::decimal(3);
    build_graph(
        &alphabet,
        &["v0", "v1", "v2"],
        &[("v0", "v1", "0"), ("v1", "v2", "1"), ("v2", "v0", "2")],
        DuplicateEdges::Error,
    )
    .expect("cycle graph is valid")
    .graph
}

/// The golden-mean presentation: binary sequences without the block 11.
pub fn gen_golden() -> PointedGraph {
    let alphabet = Alphabet::decimal(2);
    let built = build_graph(
        &alphabet,
        &["v0", "v1"],
        &[("v0", "v0", "0"), ("v0", "v1", "1"), ("v1", "v0", "0")],
        DuplicateEdges::Error,
    )
    .expect("golden-mean graph is valid");
    PointedGraph::new(built.graph, 0).expect("v0 exists")
}

/// A three-vertex sofic-shift presentation that is not right-resolving
/// (vertex A has two exit edges labeled 0).
pub fn gen_fig4() -> LabeledGraph {
    let alphabet = Alphabet::decimal(3);
    build_graph(
        &alphabet,
        &["A", "B", "C"],
        &[
            ("A", "C", "0"),
            ("C", "A", "2"),
            ("A", "B", "0"),
            ("B", "A", "1"),
            ("B", "C", "1"),
            ("C", "B", "2"),
        ],
        DuplicateEdges::Error,
    )
    .expect("graph is valid")
    .graph
}

/// The blow-up family G_n over the decimal alphabet `{0, ..., 2n-1}`:
/// vertex `v_i` carries self-loops labeled `n..2n-1` except `n+i`, and for
/// `i != j` an edge `v_i -> v_j` labeled `(j - i) mod n`. Right-resolving,
/// strongly connected, with `n(2n-2)` edges; its sofic shift needs
/// exponentially many states when presented as a path set.
pub fn gen_blowup(n: usize) -> Result<LabeledGraph> {
    if n < 2 {
        return Err(Error::InvalidArgument("blow-up size must be >= 2".into()));
    }
    let alphabet = Alphabet::decimal(2 * n);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for s in n..2 * n {
            if s != n + i {
                edges.push(Edge {
                    from: i,
                    label: s,
                    to: i,
                });
            }
        }
        for j in 0..n {
            if i != j {
                edges.push(Edge {
                    from: i,
                    label: (j + n - i) % n,
                    to: j,
                });
            }
        }
    }
    Ok(
        LabeledGraph::from_indexed(alphabet, names, edges, DuplicateEdges::Error)
            .expect("blow-up graph is valid")
            .graph,
    )
}

/// Seeded random pruned non-empty pointed graph. Identical parameters give
/// an identical graph; empty draws are retried with a derived seed.
pub fn gen_random(
    seed: u64,
    states: usize,
    alphabet_size: usize,
    density: f64,
) -> Result<PointedGraph> {
    if states == 0 || states > 6 {
        return Err(Error::InvalidArgument(
            "states must be between 1 and 6".into(),
        ));
    }
    if alphabet_size == 0 || alphabet_size > 3 {
        return Err(Error::InvalidArgument(
            "alphabet size must be between 1 and 3".into(),
        ));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(
            "density must lie in [0, 1]".into(),
        ));
    }
    let alphabet = Alphabet::decimal(alphabet_size);
    for attempt in 0u64..10_000 {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed ^ attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15),
        );
        let nv = rng.gen_range(1..=states);
        let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        for from in 0..nv {
            for to in 0..nv {
                for label in 0..alphabet_size {
                    if rng.gen::<f64>() < density {
                        edges.push(Edge { from, label, to });
                    }
                }
            }
        }
        let graph =
            LabeledGraph::from_indexed(alphabet.clone(), names, edges, DuplicateEdges::Error)
                .expect("generated edges are valid")
                .graph;
        let pruned = PointedGraph::new(graph, 0).expect("v0 exists").prune();
        if !pruned.is_empty() {
            return Ok(pruned);
        }
    }
    // Unreachable for any positive density; covers density 0.
    let built = build_graph(
        &alphabet,
        &["v0"],
        &[("v0", "v0", "0")],
        DuplicateEdges::Error,
    )
    .expect("loop graph is valid");
    Ok(PointedGraph::new(built.graph, 0).expect("v0 exists"))
}
