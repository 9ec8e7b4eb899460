//! Finitely generated abelian groups in invariant-factor normal form,
//! cokernel classes, and symbolic extensions by unit groups of fields.

mod automorphism;
mod expr;
mod field;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{snf, IntMatrix, SnfResult};

pub use automorphism::{
    element_automorphism_invariant, pointed_isomorphic, Bounded, DEFAULT_AUT_BOUND,
};
pub use expr::{expr_isomorphic, unit_group_coker, unit_group_ker, Count, GroupExpr};
pub use field::{no_free_quotients, FieldDescriptor, FieldKind};

/// Three-valued answer for questions that opaque symbols can block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        })
    }
}

/// `Z^free_rank (+) Z_{d1} (+) ... (+) Z_{dk}` with `2 <= d1 | d2 | ... | dk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        FgAbelianGroup {
            invariant_factors: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            invariant_factors: Vec::new(),
            free_rank: rank,
        }
    }

    /// Validating constructor for an already normalized invariant-factor list.
    pub fn new(invariant_factors: Vec<BigInt>, free_rank: usize) -> Result<Self> {
        let two = BigInt::from(2);
        if invariant_factors.iter().any(|d| d < &two) {
            return Err(Error::input("invariant factors must be at least 2"));
        }
        if invariant_factors
            .windows(2)
            .any(|w| !w[1].is_multiple_of(&w[0]))
        {
            return Err(Error::input("invariant factors must form a divisibility chain"));
        }
        Ok(FgAbelianGroup {
            invariant_factors,
            free_rank,
        })
    }

    /// Direct sum of cyclic groups of the given orders; order 0 means `Z`.
    pub fn from_cyclic_orders<T: Into<BigInt> + Clone>(orders: &[T]) -> Self {
        let orders: Vec<BigInt> = orders.iter().cloned().map(|x| x.into().abs()).collect();
        let n = orders.len();
        let r = snf(&IntMatrix::diagonal(n, n, &orders));
        Self::from_diagonal(&r.d, n)
    }

    /// Cokernel of a diagonal map into `Z^ambient` with diagonal `d`.
    fn from_diagonal(d: &[BigInt], ambient: usize) -> Self {
        let one = BigInt::one();
        let invariant_factors = d.iter().filter(|x| *x > &one).cloned().collect();
        let rank = d.iter().filter(|x| !x.is_zero()).count();
        FgAbelianGroup {
            invariant_factors,
            free_rank: ambient - rank,
        }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> Self {
        let orders: Vec<BigInt> = self
            .invariant_factors
            .iter()
            .chain(&other.invariant_factors)
            .cloned()
            .collect();
        let mut g = Self::from_cyclic_orders(&orders);
        g.free_rank = self.free_rank + other.free_rank;
        g
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" (+) "))
        }
    }
}

pub fn fg_isomorphic(a: &FgAbelianGroup, b: &FgAbelianGroup) -> bool {
    a == b
}

/// The class of an integer vector in a cokernel, in the coordinates fixed by
/// the cokernel's Smith form: one residue per invariant factor followed by
/// the free coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CokerElement {
    pub group: FgAbelianGroup,
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigInt>,
}

impl CokerElement {
    pub fn zero(group: &FgAbelianGroup) -> Self {
        CokerElement {
            torsion: vec![BigInt::zero(); group.invariant_factors.len()],
            free: vec![BigInt::zero(); group.free_rank],
            group: group.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.torsion.iter().chain(&self.free).all(Zero::is_zero)
    }

    /// Checks that coordinates fit the group: right lengths and residues in
    /// `[0, d_i)`.
    pub fn check_membership(&self, group: &FgAbelianGroup) -> Result<()> {
        if &self.group != group
            || self.torsion.len() != group.invariant_factors.len()
            || self.free.len() != group.free_rank
        {
            return Err(Error::input(format!(
                "element does not belong to the group {group}"
            )));
        }
        for (t, d) in self.torsion.iter().zip(&group.invariant_factors) {
            if t.is_negative() || t >= d {
                return Err(Error::input(format!("residue {t} out of range for Z_{d}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for CokerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.torsion.is_empty() && self.free.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .torsion
            .iter()
            .zip(&self.group.invariant_factors)
            .map(|(t, d)| format!("[{t}]_{d}"))
            .chain(self.free.iter().map(ToString::to_string))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `coker(m : Z^cols -> Z^rows)` together with the Smith form that fixes its
/// coordinates.
#[derive(Clone, Debug)]
pub struct Cokernel {
    rows: usize,
    snf: SnfResult,
    group: FgAbelianGroup,
}

impl Cokernel {
    pub fn new(m: &IntMatrix) -> Self {
        let snf = snf(m);
        let group = FgAbelianGroup::from_diagonal(&snf.d, m.rows());
        Cokernel {
            rows: m.rows(),
            snf,
            group,
        }
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn snf(&self) -> &SnfResult {
        &self.snf
    }

    /// Canonical representative of `[x]`: with `y = u x`, keep `y_i mod d_i`
    /// for `d_i >= 2`, drop coordinates with `d_i = 1`, and keep `y_i` where
    /// `d_i = 0`.
    pub fn class_of(&self, x: &[BigInt]) -> Result<CokerElement> {
        if x.len() != self.rows {
            return Err(Error::input(format!(
                "vector of length {} for a cokernel of Z^{}",
                x.len(),
                self.rows
            )));
        }
        let y = self.snf.u.mul_vec(x)?;
        let one = BigInt::one();
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for (i, yi) in y.into_iter().enumerate() {
            let d = self.snf.diag(i);
            if d.is_zero() {
                free.push(yi);
            } else if d > one {
                torsion.push(yi.mod_floor(&d));
            }
        }
        Ok(CokerElement {
            group: self.group.clone(),
            torsion,
            free,
        })
    }
}

pub fn coker_structure(m: &IntMatrix) -> FgAbelianGroup {
    Cokernel::new(m).group
}

/// Kernel of `m : Z^cols -> Z^rows`; always free.
pub fn ker_structure(m: &IntMatrix) -> FgAbelianGroup {
    FgAbelianGroup::free(m.cols() - snf(m).rank())
}

pub fn coker_class(m: &IntMatrix, x: &[BigInt]) -> Result<CokerElement> {
    Cokernel::new(m).class_of(x)
}

/// Prime factorization by trial division.
pub(crate) fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let n = n.abs();
    if let Some(small) = n.to_u64() {
        return factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
    }
    let mut out = Vec::new();
    let mut rest = n;
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if rest > BigInt::one() {
        out.push((rest, 1));
    }
    out
}

fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some(p)` when `q = p^k` for a prime `p` and `k >= 1`.
pub(crate) fn prime_power_base(q: u64) -> Option<u64> {
    match factorize_u64(q).as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}
