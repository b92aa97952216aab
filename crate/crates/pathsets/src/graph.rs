//! Edge-labeled directed multigraphs with a marked start vertex.
//!
//! A [`PointedGraph`] presents a path set: the set of infinite label
//! sequences of one-sided walks leaving the start vertex. Presentations are
//! normalized by [`PointedGraph::prune`], which keeps exactly the vertices
//! that are reachable from the start and admit an infinite continuation.
//! The path set itself is unchanged by pruning.
//!
//! Vertices and labels are dense integer indices; names are kept for I/O
//! only. All values are immutable after construction, so sharing across
//! threads is safe.

use std::collections::{HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// A labeled edge. Field order matters: the derived `Ord` sorts edge lists
/// by `(from, label, to)`, which is the order every constructor normalizes
/// to and the order the text format writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub label: usize,
    pub to: usize,
}

/// Policy for duplicate `(from, to, label)` triples at build time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DuplicateEdges {
    /// Duplicates are an error.
    Error,
    /// Duplicates collapse to a single edge; the count is reported.
    Collapse,
}

/// Result of building a graph: the graph plus the number of duplicate
/// edges that were collapsed (always zero in strict mode).
#[derive(Debug, Clone)]
pub struct Built {
    pub graph: LabeledGraph,
    pub duplicates: usize,
}

/// A finite edge-labeled directed multigraph over a fixed [`Alphabet`].
///
/// Loops and parallel edges with distinct labels are allowed; identical
/// `(from, to, label)` triples are not (they are collapsed or rejected at
/// construction). Edges are stored sorted by `(from, label, to)`.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    names: Vec<String>,
    edges: Vec<Edge>,
    out_offsets: Vec<usize>,
}

impl LabeledGraph {
    /// Builds a graph from vertex names and index-based edges.
    pub fn from_indexed(
        alphabet: Alphabet,
        names: Vec<String>,
        mut edges: Vec<Edge>,
        mode: DuplicateEdges,
    ) -> Result<Built> {
        let mut seen: HashMap<&str, usize> = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.chars().any(char::is_whitespace) {
                return Err(Error::InvalidArgument(format!(
                    "vertex name {n:?} is empty or contains whitespace"
                )));
            }
            if seen.insert(n, i).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate vertex name `{n}`"
                )));
            }
        }
        let nv = names.len();
        let g = alphabet.len();
        for e in &edges {
            if e.from >= nv {
                return Err(Error::IndexOutOfRange {
                    index: e.from,
                    bound: nv,
                });
            }
            if e.to >= nv {
                return Err(Error::IndexOutOfRange {
                    index: e.to,
                    bound: nv,
                });
            }
            if e.label >= g {
                return Err(Error::UnknownLabel(format!("label #{}", e.label)));
            }
        }
        edges.sort_unstable();
        let before = edges.len();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            if mode == DuplicateEdges::Error {
                let e = w[0];
                return Err(Error::DuplicateEdge {
                    from: names[e.from].clone(),
                    to: names[e.to].clone(),
                    label: alphabet.symbol(e.label).to_string(),
                });
            }
        }
        edges.dedup();
        let duplicates = before - edges.len();

        let mut out_offsets = vec![0usize; nv + 1];
        for e in &edges {
            out_offsets[e.from + 1] += 1;
        }
        for i in 0..nv {
            out_offsets[i + 1] += out_offsets[i];
        }
        Ok(Built {
            graph: LabeledGraph {
                alphabet,
                names,
                edges,
                out_offsets,
            },
            duplicates,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of the vertex with the given name.
    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// All edges, sorted by `(from, label, to)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Exit edges of `v`, sorted by `(label, to)`.
    pub fn out(&self, v: usize) -> &[Edge] {
        &self.edges[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    /// True iff no vertex has two exit edges carrying the same label.
    pub fn is_right_resolving(&self) -> bool {
        (0..self.vertex_count())
            .all(|v| self.out(v).windows(2).all(|w| w[0].label != w[1].label))
    }

    /// Per-vertex, per-symbol transition targets. Meaningful for
    /// right-resolving graphs; on others the first edge in sort order wins.
    pub fn transition_table(&self) -> Vec<Vec<Option<usize>>> {
        let g = self.alphabet.len();
        (0..self.vertex_count())
            .map(|v| {
                let mut row = vec![None; g];
                for e in self.out(v).iter().rev() {
                    row[e.label] = Some(e.to);
                }
                row
            })
            .collect()
    }

    /// The same graph re-read over `target`, mapping labels by symbol name.
    pub fn reembedded(&self, target: &Alphabet) -> Result<LabeledGraph> {
        let map: Vec<usize> = self
            .alphabet
            .symbols()
            .map(|s| {
                target
                    .index_of(s)
                    .ok_or_else(|| Error::UnknownLabel(s.to_string()))
            })
            .collect::<Result<_>>()?;
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                from: e.from,
                label: map[e.label],
                to: e.to,
            })
            .collect();
        Ok(LabeledGraph::from_indexed(
            target.clone(),
            self.names.clone(),
            edges,
            DuplicateEdges::Collapse,
        )
        .expect("relabeling preserves validity")
        .graph)
    }
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.names == other.names && self.edges == other.edges
    }
}

impl Eq for LabeledGraph {}

impl Hash for LabeledGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.alphabet.hash(state);
        self.names.hash(state);
        self.edges.hash(state);
    }
}

/// Validates vertex names and name-based edge triples, then builds.
///
/// With `DuplicateEdges::Collapse` identical triples merge into one edge and
/// `Built::duplicates` reports how many were dropped; with
/// `DuplicateEdges::Error` they are rejected.
pub fn build_graph(
    alphabet: &Alphabet,
    vertex_names: &[&str],
    edges: &[(&str, &str, &str)],
    mode: DuplicateEdges,
) -> Result<Built> {
    let mut index: HashMap<&str, usize> = HashMap::with_capacity(vertex_names.len());
    for (i, n) in vertex_names.iter().enumerate() {
        if index.insert(n, i).is_some() {
            return Err(Error::InvalidArgument(format!(
                "duplicate vertex name `{n}`"
            )));
        }
    }
    let mut indexed = Vec::with_capacity(edges.len());
    for (from, to, sym) in edges {
        let f = *index
            .get(from)
            .ok_or_else(|| Error::UnknownVertex(from.to_string()))?;
        let t = *index
            .get(to)
            .ok_or_else(|| Error::UnknownVertex(to.to_string()))?;
        let l = alphabet
            .index_of(sym)
            .ok_or_else(|| Error::UnknownLabel(sym.to_string()))?;
        indexed.push(Edge {
            from: f,
            label: l,
            to: t,
        });
    }
    LabeledGraph::from_indexed(
        alphabet.clone(),
        vertex_names.iter().map(|s| s.to_string()).collect(),
        indexed,
        mode,
    )
}

/// A labeled graph with a marked start vertex: a presentation of the path
/// set of all infinite walks leaving the start.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointedGraph {
    graph: LabeledGraph,
    start: usize,
}

impl PointedGraph {
    pub fn new(graph: LabeledGraph, start: usize) -> Result<Self> {
        if start >= graph.vertex_count() {
            return Err(Error::IndexOutOfRange {
                index: start,
                bound: graph.vertex_count(),
            });
        }
        Ok(PointedGraph { graph, start })
    }

    /// The distinguished presentation of the empty path set: one vertex,
    /// no edges.
    pub fn empty(alphabet: Alphabet, name: &str) -> PointedGraph {
        let built = LabeledGraph::from_indexed(
            alphabet,
            vec![name.to_string()],
            Vec::new(),
            DuplicateEdges::Error,
        )
        .expect("a single named vertex is a valid graph");
        PointedGraph {
            graph: built.graph,
            start: 0,
        }
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// True iff this presents the empty path set. Meaningful on pruned
    /// presentations, where a start without exit edges admits no walk.
    pub fn is_empty(&self) -> bool {
        self.graph.out(self.start).is_empty()
    }

    /// Keeps the vertices reachable from the start that admit an infinite
    /// continuation, dropping everything else. If the start itself admits
    /// none, the result is the distinguished empty presentation. The path
    /// set is unchanged.
    pub fn prune(&self) -> PointedGraph {
        let g = &self.graph;
        let nv = g.vertex_count();

        let mut reachable = vec![false; nv];
        let mut queue = VecDeque::from([self.start]);
        reachable[self.start] = true;
        while let Some(v) = queue.pop_front() {
            for e in g.out(v) {
                if !reachable[e.to] {
                    reachable[e.to] = true;
                    queue.push_back(e.to);
                }
            }
        }

        // Iteratively peel stranded vertices (no exit edges) inside the
        // reachable part. Every edge out of a reachable vertex stays inside
        // the reachable part, so out-degrees need no re-filtering.
        let mut outdeg = vec![0usize; nv];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for e in g.edges() {
            if reachable[e.from] {
                outdeg[e.from] += 1;
                preds[e.to].push(e.from);
            }
        }
        let mut dead = vec![false; nv];
        let mut peel: VecDeque<usize> = (0..nv)
            .filter(|&v| reachable[v] && outdeg[v] == 0)
            .collect();
        while let Some(v) = peel.pop_front() {
            dead[v] = true;
            for &p in &preds[v] {
                outdeg[p] -= 1;
                if outdeg[p] == 0 && !dead[p] {
                    peel.push_back(p);
                }
            }
        }

        if dead[self.start] {
            return PointedGraph::empty(g.alphabet().clone(), g.name(self.start));
        }

        let mut remap = vec![usize::MAX; nv];
        let mut names = Vec::new();
        for v in 0..nv {
            if reachable[v] && !dead[v] {
                remap[v] = names.len();
                names.push(g.name(v).to_string());
            }
        }
        let edges: Vec<Edge> = g
            .edges()
            .iter()
            .filter(|e| remap[e.from] != usize::MAX && remap[e.to] != usize::MAX)
            .map(|e| Edge {
                from: remap[e.from],
                label: e.label,
                to: remap[e.to],
            })
            .collect();
        let graph = LabeledGraph::from_indexed(
            g.alphabet().clone(),
            names,
            edges,
            DuplicateEdges::Error,
        )
        .expect("pruning preserves validity")
        .graph;
        PointedGraph {
            graph,
            start: remap[self.start],
        }
    }

    /// Smallest `k` such that every vertex of the pruned presentation is
    /// reachable from the start within `k` steps.
    pub fn reachability_radius(&self) -> Result<usize> {
        let p = self.prune();
        if p.is_empty() {
            return Err(Error::EmptyPathSet);
        }
        let g = p.graph();
        let mut dist = vec![usize::MAX; g.vertex_count()];
        dist[p.start] = 0;
        let mut queue = VecDeque::from([p.start]);
        let mut radius = 0;
        while let Some(v) = queue.pop_front() {
            for e in g.out(v) {
                if dist[e.to] == usize::MAX {
                    dist[e.to] = dist[v] + 1;
                    radius = radius.max(dist[e.to]);
                    queue.push_back(e.to);
                }
            }
        }
        Ok(radius)
    }

    /// The same presentation re-read over `target` (see
    /// [`LabeledGraph::reembedded`]).
    pub fn reembedded(&self, target: &Alphabet) -> Result<PointedGraph> {
        Ok(PointedGraph {
            graph: self.graph.reembedded(target)?,
            start: self.start,
        })
    }
}
