#![allow(dead_code)]
pub mod oracles;

use leavitt::moves::{simple_cycle_count, PartitionSpec, Step};
use leavitt::{Graph, IntMatrix, Mult};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const INF: Mult = Mult::Infinite;

pub fn f(n: u64) -> Mult {
    Mult::Finite(n)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn graph(rows: &[&[Mult]]) -> Graph {
    let names: Vec<String> = (0..rows.len()).map(|i| format!("v{i}")).collect();
    Graph::new(names, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

pub fn e_inf() -> Graph {
    graph(&[&[INF]])
}

pub fn e2() -> Graph {
    graph(&[&[f(2)]])
}

pub fn counter_e() -> Graph {
    graph(&[&[INF, f(1)], &[f(1), INF]])
}

pub fn counter_f() -> Graph {
    graph(&[&[f(2), f(1), f(1)], &[f(1), f(2), f(1)], &[f(1), f(1), INF]])
}

pub fn f_tilde() -> Graph {
    graph(&[&[f(2), f(1)], &[f(1), f(2)]])
}

/// Random graph on `1..=max_n` vertices. Each pair gets an edge bundle with
/// probability `density`; a bundle is infinite with probability `inf_prob`.
pub fn random_graph(rng: &mut StdRng, max_n: usize, density: f64, inf_prob: f64) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if !rng.gen_bool(density) {
                        Mult::ZERO
                    } else if rng.gen_bool(inf_prob) {
                        INF
                    } else {
                        f(rng.gen_range(1..=3))
                    }
                })
                .collect()
        })
        .collect();
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    Graph::new(names, rows).unwrap()
}

pub fn random_simple_graph(rng: &mut StdRng, max_n: usize, inf_prob: f64) -> Graph {
    loop {
        let g = random_graph(rng, max_n, 0.6, inf_prob);
        if g.is_simple() {
            return g;
        }
    }
}

/// Simple graph with at least one infinite bundle.
pub fn random_infinite_simple_graph(rng: &mut StdRng, max_n: usize) -> Graph {
    loop {
        let g = random_simple_graph(rng, max_n, 0.3);
        if g.has_infinite_edges() {
            return g;
        }
    }
}

/// Simple graph together with a vertex supporting two simple cycles.
pub fn random_spliceable(rng: &mut StdRng, max_n: usize, inf_prob: f64) -> (Graph, String) {
    loop {
        let g = random_simple_graph(rng, max_n, inf_prob);
        let ws: Vec<usize> = (0..g.len()).filter(|&w| simple_cycle_count(&g, w) >= 2).collect();
        if !ws.is_empty() {
            let w = ws[rng.gen_range(0..ws.len())];
            return (g.clone(), g.name(w).to_string());
        }
    }
}

pub fn random_matrix(rng: &mut StdRng, max_dim: usize, range: i64) -> IntMatrix {
    let r = rng.gen_range(1..=max_dim);
    let c = rng.gen_range(1..=max_dim);
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| (0..c).map(|_| rng.gen_range(-range..=range)).collect())
        .collect();
    IntMatrix::from_rows(&rows).unwrap()
}

/// Splits a multiplicity into two parts, at most one of them infinite.
fn split_mult(rng: &mut StdRng, m: Mult) -> (Mult, Mult) {
    match m {
        Mult::Finite(n) => {
            let k = rng.gen_range(0..=n);
            (f(k), f(n - k))
        }
        Mult::Infinite => match rng.gen_range(0..4) {
            0 => (INF, Mult::ZERO),
            1 => (Mult::ZERO, INF),
            2 => (f(rng.gen_range(1..=2)), INF),
            _ => (INF, f(rng.gen_range(1..=2))),
        },
    }
}

fn random_partition(rng: &mut StdRng, g: &Graph, edges: &[(usize, Mult)]) -> PartitionSpec {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for &(v, m) in edges.iter().filter(|(_, m)| !m.is_zero()) {
        let (x, y) = split_mult(rng, m);
        if !x.is_zero() {
            a.push((g.name(v).to_string(), x));
        }
        if !y.is_zero() {
            b.push((g.name(v).to_string(), y));
        }
    }
    PartitionSpec::new([a, b].into_iter().filter(|blk| !blk.is_empty()).collect())
}

/// A random step of type (S), (O), (I), (R), (C) or (T). It may fail its
/// preconditions.
pub fn random_step(rng: &mut StdRng, g: &Graph, kind: usize) -> Step {
    let n = g.len();
    let w = rng.gen_range(0..n);
    let name = g.name(w).to_string();
    match kind {
        0 => {
            let sources: Vec<usize> = (0..n).filter(|&v| g.is_source(v)).collect();
            let v = sources.get(rng.gen_range(0..sources.len().max(1))).copied().unwrap_or(w);
            Step::RemoveSource(g.name(v).to_string())
        }
        1 => {
            let edges: Vec<(usize, Mult)> = (0..n).map(|v| (v, g.mult(w, v))).collect();
            Step::Outsplit(name, random_partition(rng, g, &edges))
        }
        2 => {
            let edges: Vec<(usize, Mult)> = (0..n).map(|v| (v, g.mult(v, w))).collect();
            Step::Insplit(name, random_partition(rng, g, &edges))
        }
        3 => {
            let single: Vec<usize> = (0..n).filter(|&v| g.out_total(v) == Mult::ONE).collect();
            let v = single.get(rng.gen_range(0..single.len().max(1))).copied().unwrap_or(w);
            Step::Reduce(g.name(v).to_string())
        }
        4 => Step::Collapse(name),
        _ => {
            let (b, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
            Step::Transitive(vec![name, g.name(b).to_string(), g.name(c).to_string()])
        }
    }
}

/// `count` successful random steps, cycling through the six move types;
/// returns the `(before, step, after)` triples. Half the starting graphs are
/// simple.
pub fn random_applications(rng: &mut StdRng, count: usize, max_n: usize) -> Vec<(Graph, Step, Graph)> {
    let fresh = |rng: &mut StdRng| {
        if rng.gen_bool(0.5) {
            random_simple_graph(rng, max_n, 0.3)
        } else {
            random_graph(rng, max_n, 0.35, 0.2)
        }
    };
    let mut out = Vec::new();
    let mut g = fresh(rng);
    while out.len() < count {
        let kind = out.len() % 6;
        loop {
            if g.len() > 6 {
                g = fresh(rng);
            }
            let found = (0..20).find_map(|_| {
                let step = random_step(rng, &g, kind);
                step.apply(&g).ok().map(|h| (step, h))
            });
            match found {
                Some((step, h)) => {
                    out.push((g.clone(), step, h.clone()));
                    g = h;
                    break;
                }
                None => g = fresh(rng),
            }
        }
    }
    out
}

/// Simple acyclic graph: edges only go forward and every vertex reaches the
/// last one, which is the unique sink.
pub fn random_acyclic_simple_graph(rng: &mut StdRng, max_n: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let mut rows = vec![vec![Mult::ZERO; n]; n];
    for i in 0..n.saturating_sub(1) {
        for m in rows[i].iter_mut().skip(i + 1) {
            if rng.gen_bool(0.4) {
                *m = f(rng.gen_range(1..=3));
            }
        }
        if rows[i].iter().all(|m| m.is_zero()) {
            rows[i][rng.gen_range(i + 1..n)] = f(1);
        }
    }
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let g = Graph::new(names, rows).unwrap();
    debug_assert!(g.is_simple() && !g.has_cycle());
    g
}

/// Simple graph with a cycle and no sources, so that every vertex is the
/// base point of two simple cycles.
pub fn random_source_free_graph(rng: &mut StdRng, max_n: usize, inf_prob: f64) -> Graph {
    loop {
        let g = random_simple_graph(rng, max_n, inf_prob);
        if g.has_cycle() && (0..g.len()).all(|v| !g.is_source(v)) {
            return g;
        }
    }
}
