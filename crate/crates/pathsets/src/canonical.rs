//! Semantic identity of path sets.
//!
//! Two presentations define the same path set exactly when their prefix
//! languages agree: in a pruned presentation every finite walk extends to
//! an infinite one and branching is finite, so the path set is the limit
//! set of its prefix language. That reduces path-set equality to equality
//! of prefix-closed regular languages, decided here through a canonical
//! form: prune, determinize, merge states with identical follower
//! behavior (Moore partition refinement over partial transition tables),
//! and renumber breadth-first with symbols visited in alphabet order. The
//! canonical form is the unique minimal reachable right-resolving
//! presentation of the prefix language, so structural identity of
//! canonical forms is a complete equality test.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::alphabet::Alphabet;
use crate::construct::{decimate, determinize, label_product, prefix_graph, shift, shift_closure};
use crate::error::{Error, Result};
use crate::graph::{DuplicateEdges, Edge, LabeledGraph, PointedGraph};

/// Pruned, reachable, right-resolving, state-minimal presentation with
/// states renumbered breadth-first. Structural equality of two canonical
/// presentations over the same alphabet coincides with equality of the
/// presented path sets. The empty path set is carried as a distinguished
/// flagged value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalPresentation {
    inner: PointedGraph,
    empty: bool,
}

impl CanonicalPresentation {
    /// The canonical value of the empty path set over `alphabet`.
    pub fn empty(alphabet: Alphabet) -> Self {
        CanonicalPresentation {
            inner: PointedGraph::empty(alphabet, "q0"),
            empty: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Number of states; zero for the empty path set.
    pub fn state_count(&self) -> usize {
        if self.empty {
            0
        } else {
            self.inner.graph().vertex_count()
        }
    }

    /// The canonical presentation as a pointed graph. For the empty path
    /// set this is the distinguished one-vertex, zero-edge presentation.
    pub fn pointed(&self) -> &PointedGraph {
        &self.inner
    }

    pub fn into_pointed(self) -> PointedGraph {
        self.inner
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.inner.graph().alphabet()
    }
}

/// Per-vertex, per-symbol targets of a right-resolving graph.
fn delta(g: &LabeledGraph) -> Vec<Vec<Option<usize>>> {
    debug_assert!(g.is_right_resolving());
    g.transition_table()
}

/// Moore partition refinement over a deterministic, reachable, pruned
/// presentation. Starts from a single class and splits on the per-symbol
/// target-class signature; a missing transition acts as a distinguished
/// sink signature but no sink state is ever materialized.
fn minimize(det: &PointedGraph) -> PointedGraph {
    let g = det.graph();
    let n = g.vertex_count();
    let symbols = g.alphabet().len();
    let table = delta(g);

    let mut class = vec![0usize; n];
    let mut class_count = 1usize;
    loop {
        let mut ids: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
        let mut next = vec![0usize; n];
        for v in 0..n {
            let signature: Vec<Option<usize>> = (0..symbols)
                .map(|a| table[v][a].map(|t| class[t]))
                .collect();
            let slot = ids.len();
            let id = *ids.entry((class[v], signature)).or_insert(slot);
            next[v] = id;
        }
        let refined = ids.len();
        class = next;
        if refined == class_count {
            break;
        }
        class_count = refined;
    }

    // Quotient transition table; members of a class share signatures.
    let mut class_delta = vec![vec![None; symbols]; class_count];
    for v in 0..n {
        for a in 0..symbols {
            class_delta[class[v]][a] = table[v][a].map(|t| class[t]);
        }
    }

    // Breadth-first renumbering from the start class, symbols in alphabet
    // order.
    let start_class = class[det.start()];
    let mut order: Vec<usize> = vec![start_class];
    let mut position = vec![usize::MAX; class_count];
    position[start_class] = 0;
    let mut queue = VecDeque::from([start_class]);
    while let Some(c) = queue.pop_front() {
        for a in 0..symbols {
            if let Some(t) = class_delta[c][a] {
                if position[t] == usize::MAX {
                    position[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
    }
    debug_assert_eq!(order.len(), class_count);

    let mut edges = Vec::new();
    for (idx, &c) in order.iter().enumerate() {
        for a in 0..symbols {
            if let Some(t) = class_delta[c][a] {
                edges.push(Edge {
                    from: idx,
                    label: a,
                    to: position[t],
                });
            }
        }
    }
    let names = (0..class_count).map(|i| format!("q{i}")).collect();
    let graph = LabeledGraph::from_indexed(
        g.alphabet().clone(),
        names,
        edges,
        DuplicateEdges::Error,
    )
    .expect("quotient emits valid edges")
    .graph;
    PointedGraph::new(graph, 0).expect("start class exists")
}

/// Canonical presentation of the path set of `p`: prune, determinize,
/// minimize, renumber. Idempotent up to structural identity.
pub fn canonicalize(p: &PointedGraph) -> CanonicalPresentation {
    let pruned = p.prune();
    if pruned.is_empty() {
        return CanonicalPresentation::empty(pruned.graph().alphabet().clone());
    }
    let det = determinize(&pruned);
    CanonicalPresentation {
        inner: minimize(&det),
        empty: false,
    }
}

/// Path-set equality, decided by structural identity of canonical forms.
pub fn equals(p1: &PointedGraph, p2: &PointedGraph) -> Result<bool> {
    if p1.graph().alphabet() != p2.graph().alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(canonicalize(p1) == canonicalize(p2))
}

/// Containment of path sets, by synchronized traversal of the canonical
/// forms: containment fails exactly when some reachable state pair has an
/// exit symbol on the left that the right lacks.
pub fn is_subset(p1: &PointedGraph, p2: &PointedGraph) -> Result<bool> {
    if p1.graph().alphabet() != p2.graph().alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let c1 = canonicalize(p1);
    if c1.is_empty() {
        return Ok(true);
    }
    let c2 = canonicalize(p2);
    if c2.is_empty() {
        return Ok(false);
    }
    let d1 = delta(c1.pointed().graph());
    let d2 = delta(c2.pointed().graph());
    let symbols = c1.alphabet().len();
    let start = (c1.pointed().start(), c2.pointed().start());
    let mut seen: HashSet<(usize, usize)> = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some((x, y)) = stack.pop() {
        for a in 0..symbols {
            let Some(t1) = d1[x][a] else { continue };
            let Some(t2) = d2[y][a] else {
                return Ok(false);
            };
            if seen.insert((t1, t2)) {
                stack.push((t1, t2));
            }
        }
    }
    Ok(true)
}

/// A finite word over an alphabet, stored as label indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    /// Resolves symbol tokens against an alphabet.
    pub fn parse<S: AsRef<str>>(alphabet: &Alphabet, tokens: &[S]) -> Result<Word> {
        tokens
            .iter()
            .map(|t| {
                alphabet
                    .index_of(t.as_ref())
                    .ok_or_else(|| Error::UnknownLabel(t.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Symbol rendering: plain concatenation when every symbol of the
    /// alphabet is a single character, comma-separated otherwise.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        let compact = alphabet.symbols().all(|s| s.chars().count() == 1);
        let parts: Vec<&str> = self.0.iter().map(|&i| alphabet.symbol(i)).collect();
        if compact {
            parts.concat()
        } else {
            parts.join(",")
        }
    }
}

/// An eventually periodic word `preperiod . period^infinity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventuallyPeriodicWord {
    pub preperiod: Word,
    pub period: Word,
}

impl EventuallyPeriodicWord {
    pub fn new(preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument("period must be non-empty".into()));
        }
        Ok(EventuallyPeriodicWord { preperiod, period })
    }
}

fn run_word(table: &[Vec<Option<usize>>], mut state: usize, word: &[usize]) -> Option<usize> {
    for &a in word {
        state = table[state][a]?;
    }
    Some(state)
}

fn check_word_labels(alphabet: &Alphabet, word: &Word) -> Result<()> {
    for &a in &word.0 {
        if a >= alphabet.len() {
            return Err(Error::UnknownLabel(format!("label #{a}")));
        }
    }
    Ok(())
}

/// Membership of an eventually periodic word: run the preperiod through
/// the canonical presentation, then iterate full periods until a state
/// repeats. The word belongs to the path set iff no transition is ever
/// missing.
pub fn is_member(p: &PointedGraph, w: &EventuallyPeriodicWord) -> Result<bool> {
    let alphabet = p.graph().alphabet();
    check_word_labels(alphabet, &w.preperiod)?;
    check_word_labels(alphabet, &w.period)?;
    if w.period.is_empty() {
        return Err(Error::InvalidArgument("period must be non-empty".into()));
    }
    let c = canonicalize(p);
    if c.is_empty() {
        return Ok(false);
    }
    let table = delta(c.pointed().graph());
    let Some(mut state) = run_word(&table, c.pointed().start(), &w.preperiod.0) else {
        return Ok(false);
    };
    let mut seen = HashSet::from([state]);
    loop {
        let Some(next) = run_word(&table, state, &w.period.0) else {
            return Ok(false);
        };
        if !seen.insert(next) {
            return Ok(true);
        }
        state = next;
    }
}

/// Some eventually periodic member of the path set: walk greedily from the
/// start along the alphabet-least exit edge until a vertex repeats, then
/// split the label trace at the repeat.
pub fn find_eventually_periodic(p: &PointedGraph) -> Result<EventuallyPeriodicWord> {
    let pruned = p.prune();
    if pruned.is_empty() {
        return Err(Error::EmptyPathSet);
    }
    let g = pruned.graph();
    let mut first_visit: HashMap<usize, usize> = HashMap::from([(pruned.start(), 0)]);
    let mut labels: Vec<usize> = Vec::new();
    let mut v = pruned.start();
    loop {
        // out(v) is sorted by (label, to); the first edge is the greedy one.
        let e = g.out(v)[0];
        labels.push(e.label);
        v = e.to;
        let pos = labels.len();
        if let Some(&j) = first_visit.get(&v) {
            let preperiod = Word(labels[..j].to_vec());
            let period = Word(labels[j..].to_vec());
            return EventuallyPeriodicWord::new(preperiod, period);
        }
        first_visit.insert(v, pos);
    }
}

/// True iff the path set equals its shift closure, i.e. is a one-sided
/// sofic shift. The empty path set is shift-invariant by convention.
pub fn is_shift_invariant(p: &PointedGraph) -> bool {
    equals(p, &shift_closure(p)).expect("same alphabet")
}

/// The follower path set of a finite initial word: all infinite tails that
/// can extend `w` inside the path set. Empty when `w` prefixes no member.
pub fn follower_of_word(p: &PointedGraph, w: &Word) -> Result<PointedGraph> {
    let alphabet = p.graph().alphabet();
    check_word_labels(alphabet, w)?;
    let c = canonicalize(p);
    if c.is_empty() {
        return Ok(c.into_pointed());
    }
    let table = delta(c.pointed().graph());
    match run_word(&table, c.pointed().start(), &w.0) {
        None => Ok(PointedGraph::empty(alphabet.clone(), "q0")),
        Some(state) => Ok(PointedGraph::new(c.pointed().graph().clone(), state)
            .expect("state exists")
            .prune()),
    }
}

/// The smallest family of path sets containing the input and closed under
/// the shift and under intersection with every prefix set. Empty results
/// of intersections are recorded as absent transitions rather than as
/// members (the empty set only appears as a member when the input itself
/// is empty).
#[derive(Debug, Clone)]
pub struct ClosureFamily {
    /// Member 0 is the input path set.
    pub members: Vec<CanonicalPresentation>,
    /// `shift_image[i]` is the member index of the shifted member `i`.
    pub shift_image: Vec<usize>,
    /// `intersections[i][j]`: member index of member `i` intersected with
    /// the prefix set of symbol `j`; `None` when that intersection is
    /// empty.
    pub intersections: Vec<Vec<Option<usize>>>,
    /// `transitions[i][j]`: member index of the shifted intersection
    /// (the edge relation of the follower presentation); `None` when the
    /// intersection is empty.
    pub transitions: Vec<Vec<Option<usize>>>,
}

impl ClosureFamily {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Computes the closure family of `p` by a worklist over canonical forms.
/// Termination is guaranteed: every member is a union of vertex path sets
/// of a fixed right-resolving presentation, possibly intersected with one
/// prefix set, and there are finitely many of those.
pub fn closure_sets(p: &PointedGraph) -> ClosureFamily {
    let alphabet = p.graph().alphabet().clone();
    let symbols = alphabet.len();
    let c0 = canonicalize(p);

    if c0.is_empty() {
        return ClosureFamily {
            members: vec![c0],
            shift_image: vec![0],
            intersections: vec![vec![None; symbols]],
            transitions: vec![vec![None; symbols]],
        };
    }

    let prefix_sets: Vec<PointedGraph> = (0..symbols)
        .map(|j| prefix_graph(&alphabet, alphabet.symbol(j)).expect("symbol is in alphabet"))
        .collect();

    let mut members = vec![c0.clone()];
    let mut index: HashMap<CanonicalPresentation, usize> = HashMap::from([(c0, 0)]);
    let mut shift_image = Vec::new();
    let mut intersections = Vec::new();
    let mut transitions = Vec::new();

    let intern = |members: &mut Vec<CanonicalPresentation>,
                      index: &mut HashMap<CanonicalPresentation, usize>,
                      c: CanonicalPresentation| {
        if let Some(&i) = index.get(&c) {
            return i;
        }
        let i = members.len();
        members.push(c.clone());
        index.insert(c, i);
        i
    };

    let mut i = 0;
    while i < members.len() {
        let member = members[i].clone();
        let shifted = canonicalize(&shift(member.pointed()));
        shift_image.push(intern(&mut members, &mut index, shifted));

        let mut inter_row = vec![None; symbols];
        let mut trans_row = vec![None; symbols];
        for j in 0..symbols {
            let restricted = label_product(member.pointed(), &prefix_sets[j])
                .expect("same alphabet by construction");
            let canon = canonicalize(&restricted);
            if canon.is_empty() {
                continue;
            }
            let after = canonicalize(&shift(canon.pointed()));
            inter_row[j] = Some(intern(&mut members, &mut index, canon));
            trans_row[j] = Some(intern(&mut members, &mut index, after));
        }
        intersections.push(inter_row);
        transitions.push(trans_row);
        i += 1;
    }

    ClosureFamily {
        members,
        shift_image,
        intersections,
        transitions,
    }
}

/// One application of a kernel generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelGenerator {
    /// The one-sided shift.
    Shift,
    /// Decimation by the kernel modulus, starting at index 0.
    Decimate,
}

/// Verdict of a bounded kernel exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelVerdict {
    Finite,
    BudgetExhausted,
}

/// Result of exploring the m-kernel: the distinct path sets found, a
/// shortest generator composition for each, and whether the closure was
/// exhausted within budget.
#[derive(Debug, Clone)]
pub struct KernelReport {
    pub members: Vec<CanonicalPresentation>,
    pub traces: Vec<Vec<KernelGenerator>>,
    pub verdict: KernelVerdict,
}

/// Closure of the input under the shift and step-`m` decimation, with
/// canonical deduplication. These two generators produce exactly the
/// decimations at every start index and every power of `m`, so the closure
/// is the m-kernel. The member count may be infinite for some path sets,
/// hence the explicit budget.
pub fn kernel(p: &PointedGraph, m: usize, budget: usize) -> Result<KernelReport> {
    if m < 2 {
        return Err(Error::InvalidArgument(
            "kernel modulus m must be at least 2".into(),
        ));
    }
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    let c0 = canonicalize(p);
    let mut members = vec![c0.clone()];
    let mut traces: Vec<Vec<KernelGenerator>> = vec![Vec::new()];
    let mut index: HashMap<CanonicalPresentation, usize> = HashMap::from([(c0, 0)]);
    let mut queue = VecDeque::from([0usize]);

    while let Some(i) = queue.pop_front() {
        for generator in [KernelGenerator::Shift, KernelGenerator::Decimate] {
            let source = members[i].pointed();
            let image = match generator {
                KernelGenerator::Shift => shift(source),
                KernelGenerator::Decimate => decimate(source, 0, m)?,
            };
            let canon = canonicalize(&image);
            if index.contains_key(&canon) {
                continue;
            }
            if members.len() >= budget {
                return Ok(KernelReport {
                    members,
                    traces,
                    verdict: KernelVerdict::BudgetExhausted,
                });
            }
            let id = members.len();
            members.push(canon.clone());
            index.insert(canon, id);
            let mut trace = traces[i].clone();
            trace.push(generator);
            traces.push(trace);
            queue.push_back(id);
        }
    }
    Ok(KernelReport {
        members,
        traces,
        verdict: KernelVerdict::Finite,
    })
}
