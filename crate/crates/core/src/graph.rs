//! Finite-vertex directed multigraphs whose edge multiplicities may be
//! countably infinite, together with the graph-theoretic predicates the
//! classification results depend on.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Number of edges between an ordered pair of vertices: a natural number or
/// a countably infinite bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mult {
    Finite(u64),
    Infinite,
}

impl Mult {
    pub const ZERO: Mult = Mult::Finite(0);
    pub const ONE: Mult = Mult::Finite(1);

    pub fn is_zero(self) -> bool {
        self == Mult::ZERO
    }

    pub fn is_infinite(self) -> bool {
        self == Mult::Infinite
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Mult::Finite(n) => Some(n),
            Mult::Infinite => None,
        }
    }

    /// `None` only on `u64` overflow.
    pub fn checked_add(self, other: Mult) -> Option<Mult> {
        match (self, other) {
            (Mult::Finite(a), Mult::Finite(b)) => a.checked_add(b).map(Mult::Finite),
            _ => Some(Mult::Infinite),
        }
    }

    /// Product with `0 * inf = 0`.
    pub fn checked_mul(self, other: Mult) -> Option<Mult> {
        match (self, other) {
            (Mult::Finite(a), Mult::Finite(b)) => a.checked_mul(b).map(Mult::Finite),
            (Mult::Finite(0), Mult::Infinite) | (Mult::Infinite, Mult::Finite(0)) => {
                Some(Mult::ZERO)
            }
            _ => Some(Mult::Infinite),
        }
    }

    pub(crate) fn sum<I: IntoIterator<Item = Mult>>(iter: I) -> Option<Mult> {
        iter.into_iter()
            .try_fold(Mult::ZERO, |acc, m| acc.checked_add(m))
    }
}

impl From<u64> for Mult {
    fn from(n: u64) -> Self {
        Mult::Finite(n)
    }
}

impl fmt::Display for Mult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mult::Finite(n) => write!(f, "{n}"),
            Mult::Infinite => f.write_str("inf"),
        }
    }
}

/// Sets of vertices are carried as indices into [`Graph::names`].
pub type VertexSet = BTreeSet<usize>;

/// A directed multigraph on a finite, ordered vertex set.
///
/// The vertex order fixes the row/column order of the vertex matrix; every
/// predicate and invariant computed from a graph is independent of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    mult: Vec<Mult>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexClassification {
    pub regular: VertexSet,
    pub singular: VertexSet,
    pub sinks: VertexSet,
    pub infinite_emitters: VertexSet,
    pub sources: VertexSet,
}

/// Per-condition breakdown of graph simplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplicityReport {
    pub cofinal: bool,
    pub condition_l: bool,
    pub singular_reachable: bool,
}

impl SimplicityReport {
    pub fn is_simple(&self) -> bool {
        self.cofinal && self.condition_l && self.singular_reachable
    }
}

impl Graph {
    /// Builds a graph from vertex names and a row-major square matrix of
    /// multiplicities (`rows[u][v]` edges from `u` to `v`).
    pub fn new<S: Into<String>>(names: Vec<S>, rows: Vec<Vec<Mult>>) -> Result<Graph> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::input(format!(
                "vertex matrix must be {n}x{n} to match the vertex list"
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::input(format!("invalid vertex identifier `{name}`")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        Ok(Graph {
            names,
            index,
            mult: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a graph from a list of `(source, range, multiplicity)` triples.
    /// Repeated pairs accumulate.
    pub fn from_edges<S: AsRef<str>>(names: &[S], edges: &[(&str, &str, Mult)]) -> Result<Graph> {
        let n = names.len();
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut g = Graph::new(names, vec![vec![Mult::ZERO; n]; n])?;
        for &(s, r, m) in edges {
            let (i, j) = (g.index_of(s)?, g.index_of(r)?);
            let cur = g.mult(i, j);
            g.mult[i * n + j] = cur
                .checked_add(m)
                .ok_or_else(|| Error::Capacity("edge multiplicity overflow".into()))?;
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn mult(&self, from: usize, to: usize) -> Mult {
        self.mult[from * self.len() + to]
    }

    pub fn row(&self, from: usize) -> &[Mult] {
        let n = self.len();
        &self.mult[from * n..(from + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<Mult>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Total number of edges leaving `v`; infinite when any entry is.
    pub fn out_total(&self, v: usize) -> Mult {
        Mult::sum(self.row(v).iter().copied()).unwrap_or(Mult::Infinite)
    }

    pub fn in_total(&self, v: usize) -> Mult {
        Mult::sum((0..self.len()).map(|u| self.mult(u, v))).unwrap_or(Mult::Infinite)
    }

    /// True when some pair of vertices is joined by infinitely many edges,
    /// i.e. the edge set is infinite.
    pub fn has_infinite_edges(&self) -> bool {
        self.mult.iter().any(|m| m.is_infinite())
    }

    pub fn is_regular(&self, v: usize) -> bool {
        matches!(self.out_total(v), Mult::Finite(n) if n > 0)
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.in_total(v).is_zero()
    }

    fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v)
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(j, _)| j)
    }

    pub fn classify_vertices(&self) -> VertexClassification {
        let mut c = VertexClassification::default();
        for v in 0..self.len() {
            match self.out_total(v) {
                Mult::Finite(0) => {
                    c.sinks.insert(v);
                    c.singular.insert(v);
                }
                Mult::Infinite => {
                    c.infinite_emitters.insert(v);
                    c.singular.insert(v);
                }
                Mult::Finite(_) => {
                    c.regular.insert(v);
                }
            }
            if self.is_source(v) {
                c.sources.insert(v);
            }
        }
        c
    }

    pub fn singular_count(&self) -> usize {
        (0..self.len()).filter(|&v| !self.is_regular(v)).count()
    }

    /// Vertices reachable from `from` by a path of length >= 0.
    pub fn reachable_from(&self, from: usize) -> VertexSet {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for w in self.successors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        (0..self.len()).filter(|&v| seen[v]).collect()
    }

    /// `closure[u][v]` iff a path (possibly of length zero) leads from u to v.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        (0..self.len())
            .map(|u| {
                let r = self.reachable_from(u);
                (0..self.len()).map(|v| r.contains(&v)).collect()
            })
            .collect()
    }

    pub fn reaches(&self, from: &str, to: &str) -> Result<bool> {
        let (u, v) = (self.index_of(from)?, self.index_of(to)?);
        Ok(self.reachable_from(u).contains(&v))
    }

    /// Vertices through which some cycle passes: those whose strongly
    /// connected component carries at least one edge.
    pub fn vertices_on_cycles(&self) -> VertexSet {
        let reach = self.reachability();
        (0..self.len())
            .filter(|&v| self.successors(v).any(|w| reach[w][v]))
            .collect()
    }

    pub fn has_cycle(&self) -> bool {
        !self.vertices_on_cycles().is_empty()
    }

    /// Cofinality for finite vertex sets: every vertex reaches every vertex
    /// lying on a cycle. An infinite path visits some vertex infinitely
    /// often, and such a vertex lies on a cycle; conversely every cycle
    /// unrolls to an infinite path. Reaching a vertex of an infinite path is
    /// therefore the same as reaching a cycle vertex it visits forever.
    pub fn is_cofinal(&self) -> bool {
        let reach = self.reachability();
        let cyc = self.vertices_on_cycles();
        (0..self.len()).all(|u| cyc.iter().all(|&c| reach[u][c]))
    }

    /// Every cycle has an exit. A cycle without exit is a cyclic sequence of
    /// distinct vertices, each emitting exactly one edge, to the next one.
    pub fn satisfies_condition_l(&self) -> bool {
        let n = self.len();
        let next: Vec<Option<usize>> = (0..n)
            .map(|v| {
                if self.out_total(v) == Mult::ONE {
                    self.successors(v).next()
                } else {
                    None
                }
            })
            .collect();
        for start in 0..n {
            let mut cur = start;
            for _ in 0..n {
                match next[cur] {
                    Some(w) if w == start => return false,
                    Some(w) => cur = w,
                    None => break,
                }
            }
        }
        true
    }

    pub fn simplicity(&self) -> SimplicityReport {
        let reach = self.reachability();
        let singular: Vec<usize> = (0..self.len()).filter(|&v| !self.is_regular(v)).collect();
        SimplicityReport {
            cofinal: self.is_cofinal(),
            condition_l: self.satisfies_condition_l(),
            singular_reachable: (0..self.len()).all(|u| singular.iter().all(|&s| reach[u][s])),
        }
    }

    pub fn is_simple(&self) -> bool {
        self.simplicity().is_simple()
    }

    /// Smallest hereditary saturated set containing `set`.
    pub fn saturation_of(&self, set: &VertexSet) -> VertexSet {
        let mut sat = VertexSet::new();
        for &v in set {
            sat.extend(self.reachable_from(v));
        }
        loop {
            let added: Vec<usize> = (0..self.len())
                .filter(|v| !sat.contains(v) && self.is_regular(*v))
                .filter(|&v| self.successors(v).all(|w| sat.contains(&w)))
                .collect();
            if added.is_empty() {
                return sat;
            }
            sat.extend(added);
        }
    }

    pub fn saturation<S: AsRef<str>>(&self, set: &[S]) -> Result<VertexSet> {
        let idx = set
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<VertexSet>>()?;
        Ok(self.saturation_of(&idx))
    }

    /// Is `set` full, i.e. does its saturation exhaust the vertex set?
    pub fn is_full(&self, set: &VertexSet) -> bool {
        self.saturation_of(set).len() == self.len()
    }

    /// Per-vertex data preserved by isomorphisms, used to prune searches.
    fn vertex_keys(&self) -> Vec<VertexKey> {
        (0..self.len())
            .map(|v| {
                let out = self.row(v).iter().copied().sorted().collect();
                let inc = (0..self.len()).map(|u| self.mult(u, v)).sorted().collect();
                VertexKey {
                    looped: self.mult(v, v),
                    out,
                    inc,
                }
            })
            .collect()
    }

    /// Row-major vertex matrix minimized lexicographically over all vertex
    /// orders compatible with the sorted vertex keys. Equal for two graphs
    /// exactly when they are isomorphic.
    pub fn canonical_form(&self, bound: usize) -> Result<CanonicalForm> {
        let n = self.len();
        if n > bound {
            return Err(Error::Capacity(format!(
                "{n} vertices exceeds the canonical-form bound {bound}"
            )));
        }
        let keys = self.vertex_keys();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let classes: Vec<Vec<usize>> = order
            .iter()
            .chunk_by(|&&v| &keys[v])
            .into_iter()
            .map(|(_, grp)| grp.copied().collect())
            .collect();

        let mut best: Option<Vec<Mult>> = None;
        let perms = classes
            .iter()
            .map(|c| c.iter().copied().permutations(c.len()).collect::<Vec<_>>())
            .multi_cartesian_product();
        let mut visit = |perm: Vec<usize>| {
            let m: Vec<Mult> = perm
                .iter()
                .flat_map(|&i| perm.iter().map(move |&j| (i, j)))
                .map(|(i, j)| self.mult(i, j))
                .collect();
            if best.as_ref().is_none_or(|b| m < *b) {
                best = Some(m);
            }
        };
        if classes.is_empty() {
            visit(Vec::new());
        } else {
            for combo in perms {
                visit(combo.into_iter().flatten().collect());
            }
        }
        Ok(CanonicalForm {
            size: n,
            entries: best.unwrap_or_default(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct VertexKey {
    looped: Mult,
    out: Vec<Mult>,
    inc: Vec<Mult>,
}

/// Isomorphism-class representative used as a search key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub size: usize,
    pub entries: Vec<Mult>,
}

pub const DEFAULT_ISO_VERTEX_BOUND: usize = 10;

/// Is there a bijection of vertex sets carrying the multiplicities of `a`
/// onto those of `b`? Backtracking over key-compatible assignments.
pub fn graphs_isomorphic(a: &Graph, b: &Graph, bound: usize) -> Result<bool> {
    let n = a.len();
    if n.max(b.len()) > bound {
        return Err(Error::Capacity(format!(
            "isomorphism check limited to {bound} vertices"
        )));
    }
    if n != b.len() {
        return Ok(false);
    }
    let (ka, kb) = (a.vertex_keys(), b.vertex_keys());
    if ka.iter().sorted().ne(kb.iter().sorted()) {
        return Ok(false);
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend_iso(a, b, &ka, &kb, 0, &mut image, &mut used))
}

fn extend_iso(
    a: &Graph,
    b: &Graph,
    ka: &[VertexKey],
    kb: &[VertexKey],
    next: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if next == a.len() {
        return true;
    }
    for cand in 0..b.len() {
        if used[cand] || ka[next] != kb[cand] {
            continue;
        }
        let consistent = (0..next).all(|u| {
            a.mult(u, next) == b.mult(image[u], cand) && a.mult(next, u) == b.mult(cand, image[u])
        }) && a.mult(next, next) == b.mult(cand, cand);
        if !consistent {
            continue;
        }
        image[next] = cand;
        used[cand] = true;
        if extend_iso(a, b, ka, kb, next + 1, image, used) {
            return true;
        }
        used[cand] = false;
    }
    false
}
