//! Exhaustive reference computations, independent of the library code paths.

use std::collections::BTreeSet;

use leavitt::{Graph, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Determinant by cofactor expansion.
fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

/// Cokernel of `m` as `(free rank, invariant factors >= 2)`, from the gcds
/// of the k x k minors.
pub fn coker_by_minors(m: &IntMatrix) -> (usize, Vec<BigInt>) {
    let (r, c) = (m.rows(), m.cols());
    let mut divisors = vec![BigInt::one()];
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect())
                    .collect();
                g = g.gcd(&cofactor_det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    let rank = divisors.len() - 1;
    let factors = divisors
        .windows(2)
        .map(|w| &w[1] / &w[0])
        .filter(|d| d > &BigInt::one())
        .collect();
    (r - rank, factors)
}

/// Transitive closure by Warshall; `reach[u][v]` includes paths of length 0.
pub fn closure(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.len();
    let mut reach: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| u == v || !g.mult(u, v).is_zero()).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    reach
}

/// Every simple cycle as a vertex sequence, listed once from its least vertex.
pub fn simple_cycles(g: &Graph) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, start: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        for v in 0..g.len() {
            if g.mult(last, v).is_zero() {
                continue;
            }
            if v == start {
                out.push(path.clone());
            } else if v > start && !path.contains(&v) {
                path.push(v);
                extend(g, start, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..g.len() {
        extend(g, s, &mut vec![s], &mut out);
    }
    out
}

pub fn cofinal(g: &Graph) -> bool {
    let reach = closure(g);
    simple_cycles(g)
        .iter()
        .all(|cycle| (0..g.len()).all(|v| cycle.iter().any(|&c| reach[v][c])))
}

pub fn condition_l(g: &Graph) -> bool {
    simple_cycles(g).iter().all(|cycle| {
        cycle.iter().any(|&v| {
            let total: u128 = (0..g.len())
                .map(|w| g.mult(v, w).finite().map_or(2, u128::from))
                .sum();
            total >= 2
        })
    })
}

pub fn simple(g: &Graph) -> bool {
    let reach = closure(g);
    let singular: Vec<usize> = (0..g.len())
        .filter(|&v| {
            let row = g.row(v);
            row.iter().all(|m| m.is_zero()) || row.iter().any(|m| m.is_infinite())
        })
        .collect();
    cofinal(g) && condition_l(g) && (0..g.len()).all(|v| singular.iter().all(|&s| reach[v][s]))
}

/// A finite abelian group `Z_{d1} (+) ... (+) Z_{dk}` of order at most 64.
/// Elements are indices in mixed radix, first factor most significant.
pub struct FiniteGroup {
    pub orders: Vec<u64>,
    size: usize,
    add: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn new(orders: &[u64]) -> Self {
        let size = orders.iter().product::<u64>() as usize;
        assert!(size <= 64);
        let mut g = FiniteGroup {
            orders: orders.to_vec(),
            size,
            add: Vec::new(),
        };
        g.add = (0..size)
            .map(|a| {
                (0..size)
                    .map(|b| {
                        let (x, y) = (g.coords(a), g.coords(b));
                        let sum: Vec<u64> = x.iter().zip(&y).zip(&g.orders).map(|((p, q), d)| (p + q) % d).collect();
                        g.index(&sum)
                    })
                    .collect()
            })
            .collect();
        g
    }

    pub fn coords(&self, mut i: usize) -> Vec<u64> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &d) in out.iter_mut().zip(&self.orders).rev() {
            *slot = i as u64 % d;
            i /= d as usize;
        }
        out
    }

    fn index(&self, x: &[u64]) -> usize {
        x.iter().zip(&self.orders).fold(0, |acc, (v, d)| acc * *d as usize + *v as usize)
    }

    fn scale(&self, a: usize, k: u64) -> usize {
        (0..k).fold(0, |acc, _| self.add[acc][a])
    }

    pub fn apply(&self, images: &[usize], x: usize) -> usize {
        self.coords(x)
            .iter()
            .zip(images)
            .fold(0, |acc, (&k, &img)| self.add[acc][self.scale(img, k)])
    }

    /// All automorphisms, each as the full table of images.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let candidates: Vec<Vec<usize>> = self
            .orders
            .iter()
            .map(|&d| (0..self.size).filter(|&e| self.scale(e, d) == 0).collect())
            .collect();
        let mut out = Vec::new();
        self.search(&candidates, &mut Vec::new(), &mut out);
        out
    }

    fn search(&self, candidates: &[Vec<usize>], choice: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if choice.len() == candidates.len() {
            let table: Vec<usize> = (0..self.size).map(|x| self.apply(choice, x)).collect();
            let hit: u64 = table.iter().fold(0, |acc, &y| acc | 1 << y);
            if hit.count_ones() as usize == self.size {
                out.push(table);
            }
            return;
        }
        for &c in &candidates[choice.len()] {
            choice.push(c);
            self.search(candidates, choice, out);
            choice.pop();
        }
    }

    /// The orbit of every element, as a bitmask.
    pub fn orbits(&self) -> Vec<u64> {
        let auts = self.automorphisms();
        (0..self.size)
            .map(|x| auts.iter().fold(0, |acc, a| acc | 1 << a[x]))
            .collect()
    }
}

/// Invariant-factor lists of every finite abelian group of order `n` with at
/// most `max_factors` factors.
pub fn abelian_groups(n: u64, max_factors: usize) -> Vec<Vec<u64>> {
    fn chains(n: u64, first: u64, left: usize) -> Vec<Vec<u64>> {
        if n == 1 {
            return vec![vec![]];
        }
        if left == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        for d in 2..=n {
            if n.is_multiple_of(d) && d % first == 0 {
                for rest in chains(n / d, d, left - 1) {
                    if rest.first().is_none_or(|&r| r % d == 0) {
                        out.push([vec![d], rest].concat());
                    }
                }
            }
        }
        out
    }
    chains(n, 1, max_factors)
}

/// Size of `{d * a : a in Z_n}` and of `{a : d * a = 0}` by enumeration.
pub fn cyclic_image_and_kernel(n: u64, d: u64) -> (u64, u64) {
    let image: BTreeSet<u64> = (0..n).map(|a| d * a % n).collect();
    let kernel = (0..n).filter(|a| (d * a).is_multiple_of(n)).count() as u64;
    (image.len() as u64, kernel)
}

/// Compares the library's invariance and pointed tests with enumerated
/// automorphism orbits on every group of order `<= max_order` with at most
/// three invariant factors. Every element is checked for invariance; pairs
/// are exhaustive up to order `all_pairs_upto`, and above that each element
/// is paired with every 9th element and with one other orbit mate. Returns
/// the number of comparisons, or the first disagreement.
pub fn compare_orbits(max_order: u64, all_pairs_upto: u64) -> Result<usize, String> {
    use leavitt::groups::{element_automorphism_invariant, pointed_isomorphic, Bounded, CokerElement, FgAbelianGroup};
    let mut checked = 0;
    for n in 2..=max_order {
        for orders in abelian_groups(n, 3) {
            let t = FiniteGroup::new(&orders);
            let g = FgAbelianGroup::from_cyclic_orders(&orders);
            let orbits = t.orbits();
            let elems: Vec<CokerElement> = (0..n as usize)
                .map(|x| CokerElement {
                    group: g.clone(),
                    torsion: t.coords(x).into_iter().map(BigInt::from).collect(),
                    free: vec![],
                })
                .collect();
            for (x, &orbit) in orbits.iter().enumerate() {
                let fixed = element_automorphism_invariant(&g, &elems[x], 64).map_err(|e| e.to_string())?;
                if fixed == Bounded::Undecided || (fixed == Bounded::Yes) != (orbit.count_ones() == 1) {
                    return Err(format!("invariance of {:?} in {orders:?}: library says {fixed}", t.coords(x)));
                }
                checked += 1;
                let mate = (0..n as usize).find(|&y| y != x && orbit >> y & 1 == 1);
                let partners = (0..n as usize).filter(|&y| n <= all_pairs_upto || y % 9 == x % 9 || Some(y) == mate);
                for y in partners {
                    let p = pointed_isomorphic(&g, &elems[x], &g, &elems[y], 64).map_err(|e| e.to_string())?;
                    if (p == Bounded::Yes) != (orbit >> y & 1 == 1) {
                        return Err(format!(
                            "pointed test {:?} ~ {:?} in {orders:?}: library says {p}",
                            t.coords(x),
                            t.coords(y)
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}
