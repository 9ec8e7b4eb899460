use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{factorize, CokerElement, FgAbelianGroup};
use crate::error::Result;

pub const DEFAULT_AUT_BOUND: usize = 2048;

/// Visited-state budget for a single orbit computation.
const STATE_BUDGET: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bounded {
    Yes,
    No,
    Undecided,
}

impl fmt::Display for Bounded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bounded::Yes => "yes",
            Bounded::No => "no",
            Bounded::Undecided => "undecided",
        })
    }
}

/// A finite abelian p-group `Z_{p^e1} (+) ... (+) Z_{p^ek}` with elements
/// encoded in mixed radix.
struct PGroup {
    p: u64,
    moduli: Vec<u64>,
    order: usize,
}

impl PGroup {
    fn decode(&self, mut x: usize) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&m| {
                let c = (x as u64) % m;
                x /= m as usize;
                c
            })
            .collect()
    }

    fn encode(&self, coords: &[u64]) -> usize {
        let mut x = 0usize;
        for (c, &m) in coords.iter().zip(&self.moduli).rev() {
            x = x * m as usize + (*c % m) as usize;
        }
        x
    }

    fn add(&self, mut a: usize, mut b: usize) -> usize {
        let (mut out, mut place) = (0usize, 1usize);
        for &m in &self.moduli {
            let m = m as usize;
            out += (a % m + b % m) % m * place;
            place *= m;
            a /= m;
            b /= m;
        }
        out
    }

    fn scale(&self, mut a: usize, k: u64) -> usize {
        let (mut out, mut place) = (0usize, 1usize);
        for &m in &self.moduli {
            let c = ((a as u64 % m) as u128 * k as u128 % m as u128) as usize;
            out += c * place;
            place *= m as usize;
            a /= m as usize;
        }
        out
    }

    /// Is `x` in `dT`? Coordinate `i` must be divisible by `gcd(d, p^e_i)`.
    fn in_multiple(&self, x: usize, d: &BigInt) -> bool {
        self.decode(x).iter().zip(&self.moduli).all(|(c, &m)| {
            let g = d.gcd(&BigInt::from(m)).to_u64().unwrap_or(m);
            c % g == 0
        })
    }
}

/// Splits the torsion coordinates of an element of `⊕ Z_{d_i}` into primary
/// components.
fn primary_parts(factors: &[BigInt], t: &[BigInt]) -> Option<Vec<(PGroup, usize)>> {
    let mut primes: Vec<u64> = Vec::new();
    for d in factors {
        for (p, _) in factorize(d) {
            let p = p.to_u64()?;
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort_unstable();
    let mut out = Vec::new();
    for p in primes {
        let mut moduli = Vec::new();
        let mut coords = Vec::new();
        for (d, x) in factors.iter().zip(t) {
            let mut m = 1u64;
            let pb = BigInt::from(p);
            let mut rest = d.clone();
            while rest.is_multiple_of(&pb) {
                rest /= &pb;
                m = m.checked_mul(p)?;
            }
            if m > 1 {
                moduli.push(m);
                coords.push(x.mod_floor(&BigInt::from(m)).to_u64()?);
            }
        }
        let order = moduli
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m as usize))?;
        let g = PGroup { p, moduli, order };
        let x = g.encode(&coords);
        out.push((g, x));
    }
    Some(out)
}

/// All images of `t` under automorphisms of `g`, or `None` when the state
/// budget runs out.
///
/// An automorphism is fixed by images `h_j` of the standard generators with
/// `ord(h_j) | p^e_j`; it is bijective iff every prefix `h_0..h_j` generates a
/// subgroup of order `p^(e_0 + ... + e_j)`. States `(j, <h_0..h_{j-1}>,
/// partial image)` are memoized.
fn orbit(g: &PGroup, t: usize) -> Option<Vec<bool>> {
    let mut seen = vec![false; g.order];
    if t == 0 {
        seen[0] = true;
        return Some(seen);
    }
    let coords = g.decode(t);
    let words = g.order.div_ceil(64);
    let mut start = vec![0u64; words];
    start[0] = 1;
    let mut visited: HashSet<(usize, Vec<u64>, usize)> = HashSet::new();
    // images allowed for generator j: elements killed by its order
    let candidates: Vec<Vec<usize>> = g
        .moduli
        .iter()
        .map(|&m| (0..g.order).filter(|&h| g.scale(h, m) == 0).collect())
        .collect();
    let mut stack = vec![(0usize, start, 0usize, 1usize)];
    while let Some((j, sub, partial, size)) = stack.pop() {
        if j == g.moduli.len() {
            seen[partial] = true;
            continue;
        }
        if !visited.insert((j, sub.clone(), partial)) {
            continue;
        }
        if visited.len() > STATE_BUDGET {
            return None;
        }
        let m = g.moduli[j];
        let members: Vec<usize> = (0..g.order)
            .filter(|&x| sub[x / 64] >> (x % 64) & 1 == 1)
            .collect();
        for &h in &candidates[j] {
            let Some(next) = extend(g, &sub, &members, h, size * m as usize) else {
                continue;
            };
            let image = g.add(partial, g.scale(h, coords[j]));
            stack.push((j + 1, next, image, size * m as usize));
        }
    }
    Some(seen)
}

/// `<sub, h>` as a bitset if it has exactly `want` elements.
fn extend(g: &PGroup, sub: &[u64], members: &[usize], h: usize, want: usize) -> Option<Vec<u64>> {
    let mut out = sub.to_vec();
    let mut count = members.len();
    let mut shift = h;
    while shift != 0 && sub[shift / 64] >> (shift % 64) & 1 == 0 {
        for &x in members {
            let y = g.add(x, shift);
            if out[y / 64] >> (y % 64) & 1 == 0 {
                out[y / 64] |= 1 << (y % 64);
                count += 1;
            }
        }
        if count > want {
            return None;
        }
        shift = g.add(shift, h);
    }
    (count == want).then_some(out)
}

fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Is `x` fixed by every automorphism of `g`?
pub fn element_automorphism_invariant(
    g: &FgAbelianGroup,
    x: &CokerElement,
    bound: usize,
) -> Result<Bounded> {
    x.check_membership(g)?;
    if x.free.iter().any(|c| !c.is_zero()) {
        return Ok(Bounded::No);
    }
    let Some(parts) = primary_parts(g.invariant_factors(), &x.torsion) else {
        return Ok(Bounded::Undecided);
    };
    for (pg, t) in parts {
        if pg.order > bound {
            return Ok(Bounded::Undecided);
        }
        match orbit(&pg, t) {
            None => return Ok(Bounded::Undecided),
            Some(seen) => {
                if seen.iter().filter(|&&b| b).count() != 1 {
                    return Ok(Bounded::No);
                }
            }
        }
    }
    Ok(Bounded::Yes)
}

/// Is there an automorphism `g1 -> g2` taking `x1` to `x2`?
pub fn pointed_isomorphic(
    g1: &FgAbelianGroup,
    x1: &CokerElement,
    g2: &FgAbelianGroup,
    x2: &CokerElement,
    bound: usize,
) -> Result<Bounded> {
    x1.check_membership(g1)?;
    x2.check_membership(g2)?;
    if g1 != g2 {
        return Ok(Bounded::No);
    }
    let d = gcd_all(&x1.free);
    if d != gcd_all(&x2.free) {
        return Ok(Bounded::No);
    }
    let (Some(p1), Some(p2)) = (
        primary_parts(g1.invariant_factors(), &x1.torsion),
        primary_parts(g1.invariant_factors(), &x2.torsion),
    ) else {
        return Ok(Bounded::Undecided);
    };
    let mut undecided = false;
    for ((pg, t1), (_, t2)) in p1.into_iter().zip(p2) {
        // With d a unit at p the coset is everything.
        if !d.is_zero() && !d.is_multiple_of(&BigInt::from(pg.p)) {
            continue;
        }
        if pg.order > bound {
            undecided = true;
            continue;
        }
        match orbit(&pg, t1) {
            None => undecided = true,
            Some(seen) => {
                let neg_t2 = pg.scale(t2, pg.order as u64 - 1);
                let hit = (0..pg.order)
                    .filter(|&s| seen[s])
                    .any(|s| pg.in_multiple(pg.add(s, neg_t2), &d));
                if !hit {
                    return Ok(Bounded::No);
                }
            }
        }
    }
    Ok(if undecided {
        Bounded::Undecided
    } else {
        Bounded::Yes
    })
}
