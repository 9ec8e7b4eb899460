use std::fmt;
use std::str::FromStr;

use super::{prime_power_base, Tri};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Reals,
    Complexes,
    /// The finite field with `q` elements.
    Finite { q: u64 },
    /// An algebraically closed field of the given characteristic (0 or a
    /// prime).
    AlgClosed { characteristic: u64 },
    /// A field known to have no free quotients but otherwise unspecified.
    NoFreeQuotientsGeneric,
    Generic,
}

/// Coefficient field, described only by what the invariants need: the
/// structure of its unit group and whether its second K-group is torsion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub k2_is_torsion: Option<bool>,
}

impl FieldDescriptor {
    pub fn new(kind: FieldKind) -> Self {
        // K_2(Q) = Z_2 (+) (+)_p Z_p^x (Tate); K_2 of a finite field vanishes.
        let k2_is_torsion = match kind {
            FieldKind::Rationals | FieldKind::Finite { .. } => Some(true),
            _ => None,
        };
        FieldDescriptor {
            kind,
            k2_is_torsion,
        }
    }

    pub fn rationals() -> Self {
        Self::new(FieldKind::Rationals)
    }

    pub fn reals() -> Self {
        Self::new(FieldKind::Reals)
    }

    pub fn complexes() -> Self {
        Self::new(FieldKind::Complexes)
    }

    pub fn finite(q: u64) -> Result<Self, Error> {
        if prime_power_base(q).is_none() {
            return Err(Error::input(format!("F{q}: field order must be a prime power")));
        }
        Ok(Self::new(FieldKind::Finite { q }))
    }

    pub fn alg_closed(characteristic: u64) -> Result<Self, Error> {
        if characteristic != 0 && !is_prime(characteristic) {
            return Err(Error::input(format!(
                "characteristic {characteristic} is neither 0 nor prime"
            )));
        }
        Ok(Self::new(FieldKind::AlgClosed { characteristic }))
    }

    pub fn nfq() -> Self {
        Self::new(FieldKind::NoFreeQuotientsGeneric)
    }

    pub fn generic() -> Self {
        Self::new(FieldKind::Generic)
    }

    /// Does the unit group have no nonzero free quotient?
    pub fn no_free_quotients(&self) -> Tri {
        match self.kind {
            FieldKind::Rationals => Tri::No,
            FieldKind::Generic => Tri::Unknown,
            _ => Tri::Yes,
        }
    }

    pub fn characteristic(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Rationals | FieldKind::Reals | FieldKind::Complexes => Some(0),
            FieldKind::Finite { q } => prime_power_base(q),
            FieldKind::AlgClosed { characteristic } => Some(characteristic),
            _ => None,
        }
    }
}

pub fn no_free_quotients(field: &FieldDescriptor) -> Tri {
    field.no_free_quotients()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && prime_power_base(n) == Some(n)
}

/// `Q`, `R`, `C`, `F<q>`, `algclosed`, `algclosed:p=<prime>`, `nfq`,
/// `generic`.
impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s {
            "Q" => return Ok(Self::rationals()),
            "R" => return Ok(Self::reals()),
            "C" => return Ok(Self::complexes()),
            "algclosed" => return Self::alg_closed(0),
            "nfq" => return Ok(Self::nfq()),
            "generic" => return Ok(Self::generic()),
            _ => {}
        }
        if let Some(p) = s.strip_prefix("algclosed:p=") {
            let p = p
                .parse::<u64>()
                .map_err(|_| Error::input(format!("bad characteristic in `{s}`")))?;
            return Self::alg_closed(p);
        }
        if let Some(q) = s.strip_prefix('F') {
            let q = q
                .parse::<u64>()
                .map_err(|_| Error::input(format!("bad field order in `{s}`")))?;
            return Self::finite(q);
        }
        Err(Error::input(format!("unknown field descriptor `{s}`")))
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => f.write_str("Q"),
            FieldKind::Reals => f.write_str("R"),
            FieldKind::Complexes => f.write_str("C"),
            FieldKind::Finite { q } => write!(f, "F{q}"),
            FieldKind::AlgClosed { characteristic: 0 } => f.write_str("algclosed"),
            FieldKind::AlgClosed { characteristic } => write!(f, "algclosed:p={characteristic}"),
            FieldKind::NoFreeQuotientsGeneric => f.write_str("nfq"),
            FieldKind::Generic => f.write_str("generic"),
        }
    }
}
