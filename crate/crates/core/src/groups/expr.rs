use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{FieldDescriptor, FieldKind};
use super::{factorize, FgAbelianGroup, Tri};
use crate::error::{Error, Result};
use crate::intlinalg::{snf, IntMatrix};

/// Multiplicity of a summand: finitely many or countably many copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Count {
    Finite(usize),
    Countable,
}

impl Count {
    pub const ZERO: Count = Count::Finite(0);

    pub fn is_zero(self) -> bool {
        self == Count::ZERO
    }
}

impl Add for Count {
    type Output = Count;

    fn add(self, rhs: Count) -> Count {
        match (self, rhs) {
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a + b),
            _ => Count::Countable,
        }
    }
}

impl From<usize> for Count {
    fn from(n: usize) -> Self {
        Count::Finite(n)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Countable => f.write_str("w"),
        }
    }
}

/// Abelian group built from cyclic groups, `Z`, and unit-group symbols of a
/// field, kept in a normal form.
///
/// Cyclic torsion is stored by primary components (prime power to
/// multiplicity), which is a complete invariant for direct sums of cyclic
/// groups. Unit-group terms the field resolves are rewritten into these
/// components; the rest stay as opaque symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupExpr {
    field: FieldDescriptor,
    free: Count,
    primary: BTreeMap<BigInt, Count>,
    unit_copies: Count,
    unit_quotients: BTreeMap<BigInt, Count>,
    unit_torsion: BTreeMap<BigInt, Count>,
}

impl GroupExpr {
    pub fn trivial(field: FieldDescriptor) -> Self {
        GroupExpr {
            field,
            free: Count::ZERO,
            primary: BTreeMap::new(),
            unit_copies: Count::ZERO,
            unit_quotients: BTreeMap::new(),
            unit_torsion: BTreeMap::new(),
        }
    }

    pub fn from_fg(group: &FgAbelianGroup, field: FieldDescriptor) -> Self {
        let mut e = Self::trivial(field);
        e.free = Count::Finite(group.free_rank());
        for d in group.invariant_factors() {
            e.add_cyclic(d, Count::Finite(1));
        }
        e
    }

    /// `Z^count`.
    pub fn free(count: Count, field: FieldDescriptor) -> Self {
        let mut e = Self::trivial(field);
        e.free = count;
        e
    }

    /// `(Z_n)^count`; order 0 means `Z`.
    pub fn cyclic(n: impl Into<BigInt>, count: Count, field: FieldDescriptor) -> Self {
        let n: BigInt = n.into();
        let mut e = Self::trivial(field);
        if n.is_zero() {
            e.free = count;
        } else {
            e.add_cyclic(&n, count);
        }
        e
    }

    /// `(K^x)^count`.
    pub fn units(count: Count, field: FieldDescriptor) -> Self {
        let mut e = Self::trivial(field);
        e.add_units(count);
        e
    }

    /// `K^x / <x^d>`; `d = 0` gives `K^x` itself.
    pub fn unit_quotient(d: impl Into<BigInt>, field: FieldDescriptor) -> Self {
        let mut e = Self::trivial(field);
        e.add_unit_quotient(&d.into(), Count::Finite(1));
        e
    }

    /// `K^x[d]`, the `d`-torsion of the unit group; `d = 0` gives `K^x`.
    pub fn unit_torsion(d: impl Into<BigInt>, field: FieldDescriptor) -> Self {
        let mut e = Self::trivial(field);
        e.add_unit_torsion(&d.into(), Count::Finite(1));
        e
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn free_count(&self) -> Count {
        self.free
    }

    /// Primary cyclic components: prime power to multiplicity.
    pub fn primary_components(&self) -> &BTreeMap<BigInt, Count> {
        &self.primary
    }

    pub fn unit_copies(&self) -> Count {
        self.unit_copies
    }

    pub fn unit_quotients(&self) -> &BTreeMap<BigInt, Count> {
        &self.unit_quotients
    }

    pub fn unit_torsion_terms(&self) -> &BTreeMap<BigInt, Count> {
        &self.unit_torsion
    }

    /// No opaque unit-group symbols remain.
    pub fn is_resolved(&self) -> bool {
        self.unit_copies.is_zero() && self.unit_quotients.is_empty() && self.unit_torsion.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.free.is_zero() && self.primary.is_empty() && self.is_resolved()
    }

    pub fn direct_sum(&self, other: &GroupExpr) -> Result<GroupExpr> {
        if self.field != other.field {
            return Err(field_mismatch(&self.field, &other.field));
        }
        let mut e = self.clone();
        e.free = e.free + other.free;
        merge(&mut e.primary, &other.primary);
        e.unit_copies = e.unit_copies + other.unit_copies;
        merge(&mut e.unit_quotients, &other.unit_quotients);
        merge(&mut e.unit_torsion, &other.unit_torsion);
        Ok(e)
    }

    /// `self^count`.
    pub fn repeat(&self, count: Count) -> GroupExpr {
        let scale = |c: Count| match (c, count) {
            (Count::Finite(0), _) | (_, Count::Finite(0)) => Count::ZERO,
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a * b),
            _ => Count::Countable,
        };
        let scale_map = |m: &BTreeMap<BigInt, Count>| {
            m.iter()
                .map(|(k, &c)| (k.clone(), scale(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect()
        };
        GroupExpr {
            field: self.field,
            free: scale(self.free),
            primary: scale_map(&self.primary),
            unit_copies: scale(self.unit_copies),
            unit_quotients: scale_map(&self.unit_quotients),
            unit_torsion: scale_map(&self.unit_torsion),
        }
    }

    fn add_cyclic(&mut self, n: &BigInt, count: Count) {
        if count.is_zero() {
            return;
        }
        for (p, e) in factorize(n) {
            bump(&mut self.primary, num_traits::pow(p, e as usize), count);
        }
    }

    fn add_units(&mut self, count: Count) {
        if count.is_zero() {
            return;
        }
        match self.field.kind {
            FieldKind::Rationals => {
                // Q^x = Z_2 (+) Z^(w)
                self.add_cyclic(&BigInt::from(2), count);
                self.free = Count::Countable;
            }
            FieldKind::Finite { q } => self.add_cyclic(&BigInt::from(q - 1), count),
            _ => self.unit_copies = self.unit_copies + count,
        }
    }

    fn add_unit_quotient(&mut self, d: &BigInt, count: Count) {
        let d = d.abs();
        if d.is_zero() {
            return self.add_units(count);
        }
        if d.is_one() || count.is_zero() {
            return;
        }
        let two = BigInt::from(2);
        match self.field.kind {
            FieldKind::Rationals => {
                self.add_cyclic(&d.gcd(&two), count);
                self.add_cyclic(&d, Count::Countable);
            }
            FieldKind::Finite { q } => self.add_cyclic(&d.gcd(&BigInt::from(q - 1)), count),
            FieldKind::AlgClosed { .. } | FieldKind::Complexes => {}
            FieldKind::Reals => self.add_cyclic(&d.gcd(&two), count),
            FieldKind::NoFreeQuotientsGeneric | FieldKind::Generic => {
                bump(&mut self.unit_quotients, d, count)
            }
        }
    }

    fn add_unit_torsion(&mut self, d: &BigInt, count: Count) {
        let d = d.abs();
        if d.is_zero() {
            return self.add_units(count);
        }
        if d.is_one() || count.is_zero() {
            return;
        }
        let two = BigInt::from(2);
        match self.field.kind {
            FieldKind::Rationals | FieldKind::Reals => self.add_cyclic(&d.gcd(&two), count),
            FieldKind::Finite { q } => self.add_cyclic(&d.gcd(&BigInt::from(q - 1)), count),
            FieldKind::Complexes | FieldKind::AlgClosed { characteristic: 0 } => {
                self.add_cyclic(&d, count)
            }
            FieldKind::AlgClosed { characteristic } => {
                let c = BigInt::from(characteristic);
                let mut d = d;
                while d.is_multiple_of(&c) {
                    d /= &c;
                }
                self.add_cyclic(&d, count)
            }
            FieldKind::NoFreeQuotientsGeneric | FieldKind::Generic => {
                bump(&mut self.unit_torsion, d, count)
            }
        }
    }

    /// Is every element of finite order?
    pub fn is_torsion(&self) -> Tri {
        if !self.free.is_zero() {
            return Tri::No;
        }
        if self.unit_copies.is_zero() {
            // quotient and torsion symbols are killed by d
            return Tri::Yes;
        }
        match self.field.kind {
            FieldKind::AlgClosed { characteristic } if characteristic > 0 => Tri::Yes,
            FieldKind::AlgClosed { .. } | FieldKind::Complexes | FieldKind::Reals => Tri::No,
            _ => Tri::Unknown,
        }
    }

    /// The finite-multiplicity torsion as an invariant-factor group.
    fn finite_torsion(&self) -> FgAbelianGroup {
        let orders: Vec<BigInt> = self
            .primary
            .iter()
            .filter_map(|(q, c)| match c {
                Count::Finite(n) => Some(std::iter::repeat_n(q.clone(), *n)),
                Count::Countable => None,
            })
            .flatten()
            .collect();
        FgAbelianGroup::from_cyclic_orders(&orders)
    }
}

fn field_mismatch(a: &FieldDescriptor, b: &FieldDescriptor) -> Error {
    Error::input(format!("group expressions over different fields ({a} and {b})"))
}

fn bump(map: &mut BTreeMap<BigInt, Count>, key: BigInt, count: Count) {
    let slot = map.entry(key).or_insert(Count::ZERO);
    *slot = *slot + count;
}

fn merge(into: &mut BTreeMap<BigInt, Count>, from: &BTreeMap<BigInt, Count>) {
    for (k, &c) in from {
        bump(into, k.clone(), c);
    }
}

/// Decides `a ≅ b` where the normal forms allow it.
pub fn expr_isomorphic(a: &GroupExpr, b: &GroupExpr) -> Result<Tri> {
    if a.field != b.field {
        return Err(field_mismatch(&a.field, &b.field));
    }
    if a == b {
        return Ok(Tri::Yes);
    }
    if a.is_resolved() && b.is_resolved() {
        return Ok(Tri::No);
    }
    Ok(match a.field.kind {
        // K^x is divisible with p-rank 1 for every p other than the
        // characteristic, so the copies of K^x are counted by that p-rank and
        // split off; the normal form is then complete.
        FieldKind::AlgClosed { .. } | FieldKind::Complexes => Tri::No,
        // R^x = Z_2 (+) V with V a nonzero rational vector space; V^a ≅ V.
        FieldKind::Reals => {
            let fold = |e: &GroupExpr| {
                let mut t = e.clone();
                let copies = t.unit_copies;
                t.unit_copies = Count::ZERO;
                t.add_cyclic(&BigInt::from(2), copies);
                (t, copies.is_zero())
            };
            Tri::from_bool(fold(a) == fold(b))
        }
        // Direct summands without free quotients cancel against free parts.
        FieldKind::NoFreeQuotientsGeneric if a.free != b.free => Tri::No,
        _ => Tri::Unknown,
    })
}

/// Number of positions with each diagonal value, reading `len` entries of
/// the Smith diagonal (zeros past its end).
fn diagonal_profile(m: &IntMatrix, len: usize) -> (Count, BTreeMap<BigInt, Count>) {
    let r = snf(m);
    let mut zeros = 0;
    let mut others = BTreeMap::new();
    for i in 0..len {
        let d = r.diag(i);
        if d.is_zero() {
            zeros += 1;
        } else if !d.is_one() {
            bump(&mut others, d, Count::Finite(1));
        }
    }
    (Count::Finite(zeros), others)
}

/// `coker(m : (K^x)^cols -> (K^x)^rows)` with `m` acting multiplicatively.
pub fn unit_group_coker(m: &IntMatrix, field: FieldDescriptor) -> GroupExpr {
    let (copies, quotients) = diagonal_profile(m, m.rows());
    let mut e = GroupExpr::trivial(field);
    e.add_units(copies);
    for (d, c) in quotients {
        e.add_unit_quotient(&d, c);
    }
    e
}

/// `ker(m : (K^x)^cols -> (K^x)^rows)` with `m` acting multiplicatively.
pub fn unit_group_ker(m: &IntMatrix, field: FieldDescriptor) -> GroupExpr {
    let (copies, torsion) = diagonal_profile(m, m.cols());
    let mut e = GroupExpr::trivial(field);
    e.add_units(copies);
    for (d, c) in torsion {
        e.add_unit_torsion(&d, c);
    }
    e
}

fn power(base: &str, count: Count) -> String {
    match count {
        Count::Finite(1) => base.to_string(),
        c => format!("{base}^{c}"),
    }
}

/// `Z^r (+) Z_d1 (+) ... (+) (Z_n)^w (+) Kx^a (+) Kx/{d} (+) Kx[d]`, or `0`.
impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.free.is_zero() {
            parts.push(power("Z", self.free));
        }
        for d in self.finite_torsion().invariant_factors() {
            parts.push(format!("Z_{d}"));
        }
        if !self.unit_copies.is_zero() {
            parts.push(power("Kx", self.unit_copies));
        }
        for (d, &c) in &self.unit_quotients {
            parts.push(power(&format!("Kx/{{{d}}}"), c));
        }
        for (d, &c) in &self.unit_torsion {
            parts.push(power(&format!("Kx[{d}]"), c));
        }
        for (q, c) in &self.primary {
            if *c == Count::Countable {
                parts.push(format!("(Z_{q})^w"));
            }
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" (+) "))
    }
}

/// Convenience for small integer orders in tests and callers.
impl GroupExpr {
    pub fn primary_multiplicity(&self, prime_power: u64) -> Count {
        self.primary
            .iter()
            .find(|(q, _)| q.to_u64() == Some(prime_power))
            .map_or(Count::ZERO, |(_, &c)| c)
    }
}
