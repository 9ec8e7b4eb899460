//! Graph moves that preserve Morita equivalence, scripts of moves, and
//! bridges between two graphs.

mod search;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{graphs_isomorphic, Graph, Mult};
use crate::ktheory::k0;

pub use search::{search_move_equivalence, SearchConfig, SearchOutcome};

/// A split of the edges at a vertex into blocks, each block given as edge
/// counts per neighbor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionSpec {
    pub blocks: Vec<Vec<(String, Mult)>>,
}

impl PartitionSpec {
    pub fn new(blocks: Vec<Vec<(String, Mult)>>) -> Self {
        PartitionSpec { blocks }
    }

    /// Blocks resolved to vertex indices with repeated neighbors merged.
    fn resolve(&self, g: &Graph) -> Result<Vec<BTreeMap<usize, Mult>>> {
        if self.blocks.is_empty() {
            return Err(Error::precondition("partition must have at least one block"));
        }
        self.blocks
            .iter()
            .map(|block| {
                let mut out = BTreeMap::new();
                for (name, m) in block {
                    if m.is_zero() {
                        return Err(Error::precondition(format!(
                            "block count for `{name}` must be positive"
                        )));
                    }
                    let v = g.index_of(name)?;
                    let slot = out.entry(v).or_insert(Mult::ZERO);
                    *slot = slot.checked_add(*m).ok_or_else(overflow)?;
                }
                if out.is_empty() {
                    return Err(Error::precondition("every block must be nonempty"));
                }
                Ok(out)
            })
            .collect()
    }
}

fn overflow() -> Error {
    Error::Capacity("edge multiplicity overflow".into())
}

/// Checks that the blocks add up, neighbor by neighbor, to `edges`.
fn check_partition(
    g: &Graph,
    blocks: &[BTreeMap<usize, Mult>],
    edges: impl Fn(usize) -> Mult,
    what: &str,
) -> Result<()> {
    for v in 0..g.len() {
        let total = Mult::sum(blocks.iter().map(|b| b.get(&v).copied().unwrap_or(Mult::ZERO)))
            .ok_or_else(overflow)?;
        if total != edges(v) {
            return Err(Error::precondition(format!(
                "blocks give {total} edges for `{}` but {what} has {}",
                g.name(v),
                edges(v)
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    RemoveSource(String),
    Outsplit(String, PartitionSpec),
    Insplit(String, PartitionSpec),
    Reduce(String),
    Collapse(String),
    Transitive(Vec<String>),
    CuntzSplice(String),
}

impl Step {
    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        match self {
            Step::RemoveSource(w) => remove_source(g, w),
            Step::Outsplit(w, p) => outsplit(g, w, p),
            Step::Insplit(w, p) => insplit(g, w, p),
            Step::Reduce(w) => reduce(g, w),
            Step::Collapse(w) => collapse(g, w),
            Step::Transitive(path) => transitive(g, path),
            Step::CuntzSplice(w) => cuntz_splice(g, w),
        }
    }
}

fn write_blocks(f: &mut fmt::Formatter<'_>, p: &PartitionSpec) -> fmt::Result {
    for block in &p.blocks {
        let pairs: Vec<String> = block.iter().map(|(v, m)| format!("{v}={m}")).collect();
        write!(f, " :: {}", pairs.join(","))?;
    }
    Ok(())
}

/// One line of the script text format.
impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::RemoveSource(w) => write!(f, "remove-source {w}"),
            Step::Outsplit(w, p) => {
                write!(f, "outsplit {w}")?;
                write_blocks(f, p)
            }
            Step::Insplit(w, p) => {
                write!(f, "insplit {w}")?;
                write_blocks(f, p)
            }
            Step::Reduce(w) => write!(f, "reduce {w}"),
            Step::Collapse(w) => write!(f, "collapse {w}"),
            Step::Transitive(path) => write!(f, "transitive {}", path.join(" ")),
            Step::CuntzSplice(w) => write!(f, "cuntz-splice {w}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MoveScript {
    pub steps: Vec<Step>,
}

impl MoveScript {
    pub fn new(steps: Vec<Step>) -> Self {
        MoveScript { steps }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }
}

impl fmt::Display for MoveScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

/// Mutable copy of a graph used while building the result of a move.
struct Work {
    names: Vec<String>,
    rows: Vec<Vec<Mult>>,
}

impl Work {
    fn of(g: &Graph) -> Self {
        Work {
            names: g.names().to_vec(),
            rows: g.rows(),
        }
    }

    fn remove(&mut self, v: usize) {
        self.names.remove(v);
        self.rows.remove(v);
        for row in &mut self.rows {
            row.remove(v);
        }
    }

    fn add_to(&mut self, u: usize, v: usize, m: Mult) -> Result<()> {
        self.rows[u][v] = self.rows[u][v].checked_add(m).ok_or_else(overflow)?;
        Ok(())
    }

    fn build(self) -> Result<Graph> {
        Graph::new(self.names, self.rows)
    }
}

fn fresh_names(g: &Graph, w: &str, suffixes: impl Iterator<Item = String>) -> Result<Vec<String>> {
    suffixes
        .map(|s| {
            let name = format!("{w}.{s}");
            if g.contains(&name) {
                Err(Error::input(format!("new vertex name `{name}` is already in use")))
            } else {
                Ok(name)
            }
        })
        .collect()
}

/// Replaces vertex `w` by `n` copies at its position. `old(i)` maps an index
/// of the new graph that is not a copy to its old index.
struct Split {
    w: usize,
    n: usize,
}

impl Split {
    fn old(&self, i: usize) -> usize {
        if i < self.w {
            i
        } else {
            i + 1 - self.n
        }
    }

    fn copy(&self, i: usize) -> Option<usize> {
        (self.w..self.w + self.n).contains(&i).then(|| i - self.w)
    }

    fn names(&self, g: &Graph, copies: Vec<String>) -> Vec<String> {
        let mut names = g.names().to_vec();
        names.splice(self.w..=self.w, copies);
        names
    }
}

/// Move (S): delete a regular source.
pub fn remove_source(g: &Graph, w: &str) -> Result<Graph> {
    let wi = g.index_of(w)?;
    if !g.is_source(wi) {
        return Err(Error::precondition(format!("`{w}` must be a source")));
    }
    if !g.is_regular(wi) {
        return Err(Error::precondition(format!("`{w}` must be a regular vertex")));
    }
    if g.len() == 1 {
        return Err(Error::precondition("cannot remove the only vertex"));
    }
    let mut work = Work::of(g);
    work.remove(wi);
    work.build()
}

/// Move (O): split the out-edges of `w` into blocks, one new vertex per
/// block, each receiving a copy of every edge into `w`.
pub fn outsplit(g: &Graph, w: &str, p: &PartitionSpec) -> Result<Graph> {
    let wi = g.index_of(w)?;
    if g.out_total(wi).is_zero() {
        return Err(Error::precondition(format!("`{w}` must not be a sink")));
    }
    let blocks = p.resolve(g)?;
    check_partition(g, &blocks, |v| g.mult(wi, v), &format!("s^-1({w})"))?;
    let infinite = blocks
        .iter()
        .filter(|b| b.values().any(|m| m.is_infinite()))
        .count();
    if infinite > 1 {
        return Err(Error::precondition("at most one block may be infinite"));
    }
    let n = blocks.len();
    let split = Split { w: wi, n };
    let names = split.names(g, fresh_names(g, w, (1..=n).map(|i| i.to_string()))?);
    let size = g.len() + n - 1;
    let mut rows = vec![vec![Mult::ZERO; size]; size];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = match (split.copy(i), split.copy(j)) {
                (None, None) => g.mult(split.old(i), split.old(j)),
                (None, Some(_)) => g.mult(split.old(i), wi),
                (Some(b), None) => blocks[b].get(&split.old(j)).copied().unwrap_or(Mult::ZERO),
                (Some(b), Some(_)) => blocks[b].get(&wi).copied().unwrap_or(Mult::ZERO),
            };
        }
    }
    Graph::new(names, rows)
}

/// Move (I): split the in-edges of a regular non-source `w` into blocks, one
/// new vertex per block, each emitting a copy of every edge out of `w`.
pub fn insplit(g: &Graph, w: &str, p: &PartitionSpec) -> Result<Graph> {
    let wi = g.index_of(w)?;
    if !g.is_regular(wi) {
        return Err(Error::precondition(format!("`{w}` must be a regular vertex")));
    }
    if g.in_total(wi).is_zero() {
        return Err(Error::precondition(format!("`{w}` must not be a source")));
    }
    let blocks = p.resolve(g)?;
    if blocks.iter().any(|b| b.values().any(|m| m.is_infinite())) {
        return Err(Error::precondition("insplit blocks must have finite counts"));
    }
    check_partition(g, &blocks, |v| g.mult(v, wi), &format!("r^-1({w})"))?;
    let n = blocks.len();
    let split = Split { w: wi, n };
    let names = split.names(g, fresh_names(g, w, (1..=n).map(|i| i.to_string()))?);
    let size = g.len() + n - 1;
    let mut rows = vec![vec![Mult::ZERO; size]; size];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = match (split.copy(i), split.copy(j)) {
                (None, None) => g.mult(split.old(i), split.old(j)),
                (None, Some(b)) => blocks[b].get(&split.old(i)).copied().unwrap_or(Mult::ZERO),
                (Some(_), None) => g.mult(wi, split.old(j)),
                (Some(_), Some(b)) => blocks[b].get(&wi).copied().unwrap_or(Mult::ZERO),
            };
        }
    }
    Graph::new(names, rows)
}

/// Move (R): remove a regular `w` fed by a single vertex `x` and emitting a
/// single edge `f` to `r(f) != w`, rerouting every `x -> w` edge through `f`.
pub fn reduce(g: &Graph, w: &str) -> Result<Graph> {
    let wi = g.index_of(w)?;
    if !g.is_regular(wi) {
        return Err(Error::precondition(format!("`{w}` must be a regular vertex")));
    }
    if g.out_total(wi) != Mult::ONE {
        return Err(Error::precondition(format!("s^-1({w}) must be a single edge")));
    }
    let y = (0..g.len())
        .find(|&v| !g.mult(wi, v).is_zero())
        .expect("one out-edge");
    if y == wi {
        return Err(Error::precondition(format!("the edge out of `{w}` must not be a loop")));
    }
    let feeders: Vec<usize> = (0..g.len()).filter(|&u| !g.mult(u, wi).is_zero()).collect();
    let [x] = feeders[..] else {
        return Err(Error::precondition(format!(
            "edges into `{w}` must all come from a single vertex"
        )));
    };
    let mut work = Work::of(g);
    work.add_to(x, y, g.mult(x, wi))?;
    work.remove(wi);
    work.build()
}

/// Move (C): remove a regular `w` without loops, replacing each two-edge path
/// `u -> w -> v` by an edge `u -> v`.
pub fn collapse(g: &Graph, w: &str) -> Result<Graph> {
    let wi = g.index_of(w)?;
    if !g.is_regular(wi) {
        return Err(Error::precondition(format!("`{w}` must be a regular vertex")));
    }
    if !g.mult(wi, wi).is_zero() {
        return Err(Error::precondition(format!("`{w}` must not have a loop")));
    }
    if g.len() == 1 {
        return Err(Error::precondition("cannot collapse the only vertex"));
    }
    let mut work = Work::of(g);
    for u in 0..g.len() {
        for v in 0..g.len() {
            if u != wi && v != wi {
                let m = g.mult(u, wi).checked_mul(g.mult(wi, v)).ok_or_else(overflow)?;
                work.add_to(u, v, m)?;
            }
        }
    }
    work.remove(wi);
    work.build()
}

/// Move (T): given a path whose first edge has infinite multiplicity, add
/// infinitely many edges from its source to its range.
pub fn transitive<S: AsRef<str>>(g: &Graph, path: &[S]) -> Result<Graph> {
    if path.len() < 2 {
        return Err(Error::precondition("path must have at least one edge"));
    }
    let idx: Vec<usize> = path
        .iter()
        .map(|v| g.index_of(v.as_ref()))
        .collect::<Result<_>>()?;
    if !g.mult(idx[0], idx[1]).is_infinite() {
        return Err(Error::precondition(format!(
            "the first edge `{}` -> `{}` must have infinite multiplicity",
            path[0].as_ref(),
            path[1].as_ref()
        )));
    }
    if let Some(k) = idx.windows(2).position(|e| g.mult(e[0], e[1]).is_zero()) {
        return Err(Error::precondition(format!(
            "no edge `{}` -> `{}` on the path",
            path[k].as_ref(),
            path[k + 1].as_ref()
        )));
    }
    let mut work = Work::of(g);
    work.rows[idx[0]][idx[idx.len() - 1]] = Mult::Infinite;
    work.build()
}

/// Number of simple cycles based at `w` (closed paths returning to `w` only
/// at their end), capped at 2.
pub fn simple_cycle_count(g: &Graph, w: usize) -> u64 {
    let n = g.len();
    let cap = |m: Mult| m.finite().map_or(2, |x| x.min(2));
    // vertices other than w lying on some w -> ... -> w path avoiding w inside
    let avoid = |start: Vec<usize>, forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = start;
        while let Some(v) = stack.pop() {
            if v == w || seen[v] {
                continue;
            }
            seen[v] = true;
            for u in 0..n {
                let m = if forward { g.mult(v, u) } else { g.mult(u, v) };
                if !m.is_zero() {
                    stack.push(u);
                }
            }
        }
        seen
    };
    let out: Vec<usize> = (0..n).filter(|&v| v != w && !g.mult(w, v).is_zero()).collect();
    let inc: Vec<usize> = (0..n).filter(|&v| v != w && !g.mult(v, w).is_zero()).collect();
    let (fwd, bwd) = (avoid(out, true), avoid(inc, false));
    let relevant: Vec<usize> = (0..n).filter(|&v| fwd[v] && bwd[v]).collect();

    // paths[v] = number of paths v -> ... -> w through relevant vertices,
    // computed in reverse topological order; a cycle means infinitely many
    let mut paths = vec![None::<u64>; n];
    let mut state = vec![0u8; n];
    fn visit(
        g: &Graph,
        v: usize,
        w: usize,
        relevant: &[bool],
        state: &mut [u8],
        paths: &mut [Option<u64>],
    ) -> Option<u64> {
        if state[v] == 2 {
            return paths[v];
        }
        if state[v] == 1 {
            return None;
        }
        state[v] = 1;
        let mut total = g.mult(v, w).finite().map_or(2, |x| x.min(2));
        for u in 0..g.len() {
            let m = g.mult(v, u);
            if u == w || !relevant[u] || m.is_zero() {
                continue;
            }
            let sub = visit(g, u, w, relevant, state, paths)?;
            let m = m.finite().map_or(2, |x| x.min(2));
            total = (total + m * sub).min(2);
        }
        state[v] = 2;
        paths[v] = Some(total);
        Some(total)
    }
    let mut mask = vec![false; n];
    for &v in &relevant {
        mask[v] = true;
    }
    let mut total = cap(g.mult(w, w));
    for &v in &relevant {
        let m = g.mult(w, v);
        if m.is_zero() {
            continue;
        }
        match visit(g, v, w, &mask, &mut state, &mut paths) {
            None => return 2,
            Some(c) if c > 0 => total = (total + cap(m) * c).min(2),
            Some(_) => {}
        }
    }
    // a cycle among relevant vertices not met from the out-neighbors above
    for &v in &relevant {
        if visit(g, v, w, &mask, &mut state, &mut paths).is_none() {
            return 2;
        }
    }
    total
}

/// Cuntz splice at a base point of two simple cycles: attach `w.cs1` and
/// `w.cs2` with `w <-> w.cs1 <-> w.cs2` and a loop at each new vertex.
pub fn cuntz_splice(g: &Graph, w: &str) -> Result<Graph> {
    let wi = g.index_of(w)?;
    if simple_cycle_count(g, wi) < 2 {
        return Err(Error::precondition(format!(
            "`{w}` must be the base point of at least two simple cycles"
        )));
    }
    let new = fresh_names(g, w, ["cs1".to_string(), "cs2".to_string()].into_iter())?;
    let n = g.len();
    let mut names = g.names().to_vec();
    names.extend(new);
    let mut rows = g.rows();
    for row in &mut rows {
        row.extend([Mult::ZERO, Mult::ZERO]);
    }
    rows.push(vec![Mult::ZERO; n + 2]);
    rows.push(vec![Mult::ZERO; n + 2]);
    let (a, b) = (n, n + 1);
    for (u, v) in [(wi, a), (a, wi), (a, b), (b, a), (a, a), (b, b)] {
        rows[u][v] = Mult::ONE;
    }
    Graph::new(names, rows)
}

/// The result of a script together with the graph before and after each
/// step (`trace[0]` is the input).
#[derive(Clone, Debug)]
pub struct ScriptRun {
    pub graph: Graph,
    pub trace: Vec<Graph>,
}

fn check_step(start: &Graph, start_simple: bool, next: &Graph) -> Result<()> {
    if next.singular_count() != start.singular_count() {
        return Err(Error::InvariantViolation(format!(
            "singular vertex count changed from {} to {}",
            start.singular_count(),
            next.singular_count()
        )));
    }
    let (a, b) = (k0(start).0, k0(next).0);
    if a != b {
        return Err(Error::InvariantViolation(format!("K0 changed from {a} to {b}")));
    }
    if start_simple && !next.is_simple() {
        return Err(Error::InvariantViolation("simplicity lost".into()));
    }
    Ok(())
}

pub fn apply_script(g: &Graph, script: &MoveScript, check: bool) -> Result<ScriptRun> {
    let simple = check && g.is_simple();
    let mut trace = vec![g.clone()];
    let mut current = g.clone();
    for (i, step) in script.steps.iter().enumerate() {
        let wrap = |e: Error| Error::Step {
            index: i + 1,
            step: step.to_string(),
            source: Box::new(e),
        };
        let next = step.apply(&current).map_err(wrap)?;
        if check {
            check_step(g, simple, &next).map_err(wrap)?;
        }
        trace.push(next.clone());
        current = next;
    }
    Ok(ScriptRun {
        graph: current,
        trace,
    })
}

/// Do the two scripts carry `g1` and `g2` to isomorphic graphs?
pub fn verify_bridge(
    g1: &Graph,
    s1: &MoveScript,
    g2: &Graph,
    s2: &MoveScript,
    iso_vertex_bound: usize,
) -> Result<bool> {
    let a = apply_script(g1, s1, false)?.graph;
    let b = apply_script(g2, s2, false)?.graph;
    graphs_isomorphic(&a, &b, iso_vertex_bound)
}
