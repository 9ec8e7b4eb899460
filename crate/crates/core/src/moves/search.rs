use std::collections::BTreeMap;

use itertools::Itertools;

use super::{verify_bridge, MoveScript, PartitionSpec, Step};
use crate::error::Result;
use crate::graph::{CanonicalForm, Graph, Mult, DEFAULT_ISO_VERTEX_BOUND};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Graphs with more vertices are neither compared nor expanded.
    pub iso_vertex_bound: usize,
    /// Maximum number of moves on each side of the bridge.
    pub search_depth: usize,
    /// Largest piece split off a multiplicity when enumerating partitions.
    pub max_split: u64,
    /// Maximum number of distinct graphs visited on both sides together.
    pub max_states: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            iso_vertex_bound: DEFAULT_ISO_VERTEX_BOUND,
            search_depth: 4,
            max_split: 1,
            max_states: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Scripts carrying the first and the second graph to isomorphic graphs.
    Found(MoveScript, MoveScript),
    NotFoundWithinBounds,
}

/// Graphs reached from one endpoint, keyed by isomorphism class.
struct Side {
    seen: BTreeMap<CanonicalForm, (Graph, Vec<Step>)>,
    frontier: Vec<CanonicalForm>,
    depth: usize,
}

impl Side {
    fn start(g: &Graph, key: CanonicalForm) -> Self {
        let mut seen = BTreeMap::new();
        seen.insert(key.clone(), (g.clone(), Vec::new()));
        Side {
            seen,
            frontier: vec![key],
            depth: 0,
        }
    }
}

/// Bidirectional breadth-first search for two move scripts from `g1` and
/// `g2` that end at isomorphic graphs. Moves used: (S), (O) and (I) with two
/// blocks, (R), (C), and (T) along paths of length two. The Cuntz splice is
/// never used. A returned bridge has been checked with [`verify_bridge`].
pub fn search_move_equivalence(g1: &Graph, g2: &Graph, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let bound = cfg.iso_vertex_bound;
    let (Ok(k1), Ok(k2)) = (g1.canonical_form(bound), g2.canonical_form(bound)) else {
        return Ok(SearchOutcome::NotFoundWithinBounds);
    };
    let mut sides = [Side::start(g1, k1), Side::start(g2, k2)];
    loop {
        if let Some(found) = meeting(&sides) {
            let (s1, s2) = found;
            if verify_bridge(g1, &s1, g2, &s2, bound)? {
                return Ok(SearchOutcome::Found(s1, s2));
            }
            return Ok(SearchOutcome::NotFoundWithinBounds);
        }
        let open: Vec<usize> = (0..2)
            .filter(|&i| sides[i].depth < cfg.search_depth && !sides[i].frontier.is_empty())
            .collect();
        let Some(&i) = open.iter().min_by_key(|&&i| (sides[i].frontier.len(), i)) else {
            return Ok(SearchOutcome::NotFoundWithinBounds);
        };
        if !expand(&mut sides[i], cfg) {
            return Ok(SearchOutcome::NotFoundWithinBounds);
        }
        if sides[0].seen.len() + sides[1].seen.len() > cfg.max_states {
            return Ok(SearchOutcome::NotFoundWithinBounds);
        }
    }
}

fn meeting(sides: &[Side; 2]) -> Option<(MoveScript, MoveScript)> {
    let best = sides[0]
        .seen
        .iter()
        .filter_map(|(k, (_, p1))| sides[1].seen.get(k).map(|(_, p2)| (p1.len() + p2.len(), k, p1, p2)))
        .min_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)))?;
    Some((MoveScript::new(best.2.clone()), MoveScript::new(best.3.clone())))
}

/// Expands one breadth-first layer; false when the state budget runs out.
fn expand(side: &mut Side, cfg: &SearchConfig) -> bool {
    let frontier = std::mem::take(&mut side.frontier);
    let mut next = Vec::new();
    for key in frontier {
        let (g, path) = side.seen[&key].clone();
        for step in candidate_steps(&g, cfg.max_split) {
            let Ok(h) = step.apply(&g) else { continue };
            let Ok(hk) = h.canonical_form(cfg.iso_vertex_bound) else {
                continue;
            };
            if side.seen.contains_key(&hk) {
                continue;
            }
            let mut p = path.clone();
            p.push(step);
            side.seen.insert(hk.clone(), (h, p));
            next.push(hk);
            if side.seen.len() > cfg.max_states {
                return false;
            }
        }
    }
    next.sort();
    side.frontier = next;
    side.depth += 1;
    true
}

fn candidate_steps(g: &Graph, max_split: u64) -> Vec<Step> {
    let n = g.len();
    let name = |v: usize| g.name(v).to_string();
    let mut steps = Vec::new();
    for v in 0..n {
        if g.is_source(v) && g.is_regular(v) {
            steps.push(Step::RemoveSource(name(v)));
        }
    }
    for v in 0..n {
        if g.is_regular(v) {
            if g.out_total(v) == Mult::ONE {
                steps.push(Step::Reduce(name(v)));
            }
            if g.mult(v, v).is_zero() {
                steps.push(Step::Collapse(name(v)));
            }
        }
    }
    for (a, b, c) in (0..n).cartesian_product(0..n).cartesian_product(0..n).map(|((a, b), c)| (a, b, c)) {
        if g.mult(a, b).is_infinite() && !g.mult(b, c).is_zero() && !g.mult(a, c).is_infinite() {
            steps.push(Step::Transitive(vec![name(a), name(b), name(c)]));
        }
    }
    for w in 0..n {
        if !g.out_total(w).is_zero() {
            let edges: Vec<(usize, Mult)> = (0..n).map(|v| (v, g.mult(w, v))).collect();
            for p in two_block_splits(g, &edges, max_split) {
                steps.push(Step::Outsplit(name(w), p));
            }
        }
        if g.is_regular(w) && !g.in_total(w).is_zero() {
            let edges: Vec<(usize, Mult)> = (0..n).map(|v| (v, g.mult(v, w))).collect();
            for p in two_block_splits(g, &edges, max_split) {
                steps.push(Step::Insplit(name(w), p));
            }
        }
    }
    steps
}

/// Ways of sending part of each multiplicity to a first block: all of it,
/// none, or a piece of size at most `max_split` (or all but such a piece).
fn pieces(m: Mult, max_split: u64) -> Vec<(Mult, Mult)> {
    match m {
        Mult::Infinite => {
            let mut out = vec![(Mult::Infinite, Mult::ZERO), (Mult::ZERO, Mult::Infinite)];
            for k in 1..=max_split {
                out.push((Mult::Finite(k), Mult::Infinite));
                out.push((Mult::Infinite, Mult::Finite(k)));
            }
            out
        }
        Mult::Finite(m) => {
            let mut ks: Vec<u64> = (0..=m.min(max_split))
                .chain(m.saturating_sub(max_split)..=m)
                .collect();
            ks.sort_unstable();
            ks.dedup();
            ks.into_iter()
                .map(|k| (Mult::Finite(k), Mult::Finite(m - k)))
                .collect()
        }
    }
}

fn two_block_splits(g: &Graph, edges: &[(usize, Mult)], max_split: u64) -> Vec<PartitionSpec> {
    let present: Vec<(usize, Mult)> = edges.iter().copied().filter(|(_, m)| !m.is_zero()).collect();
    let mut out = Vec::new();
    for choice in present
        .iter()
        .map(|&(_, m)| pieces(m, max_split))
        .multi_cartesian_product()
    {
        let block = |side: usize| -> Vec<(String, Mult)> {
            present
                .iter()
                .zip(&choice)
                .map(|(&(v, _), &(a, b))| (v, if side == 0 { a } else { b }))
                .filter(|(_, m)| !m.is_zero())
                .map(|(v, m)| (g.name(v).to_string(), m))
                .collect()
        };
        let (a, b) = (block(0), block(1));
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let inf = |blk: &[(String, Mult)]| blk.iter().any(|(_, m)| m.is_infinite());
        if inf(&a) && inf(&b) {
            continue;
        }
        // the swapped pair gives an isomorphic graph
        if a > b {
            continue;
        }
        out.push(PartitionSpec::new(vec![a, b]));
    }
    out
}
