//! Morita equivalence and isomorphism verdicts for Leavitt path algebras of
//! graphs with finitely many vertices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::graph::Graph;
use crate::groups::{
    element_automorphism_invariant, expr_isomorphic, pointed_isomorphic, Bounded, FieldDescriptor,
    Tri, DEFAULT_AUT_BOUND,
};
use crate::ktheory::{det_sign, k0, k1_alg};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dichotomy {
    NotSimple,
    PurelyInfinite,
    /// Isomorphic to the algebra of `n x n` matrices over the field.
    Ultramatricial(BigInt),
}

impl fmt::Display for Dichotomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dichotomy::NotSimple => f.write_str("not simple"),
            Dichotomy::PurelyInfinite => f.write_str("purely infinite"),
            Dichotomy::Ultramatricial(n) => write!(f, "matrix algebra M_{n}"),
        }
    }
}

pub fn dichotomy(g: &Graph) -> Dichotomy {
    if !g.is_simple() {
        return Dichotomy::NotSimple;
    }
    if g.has_cycle() {
        return Dichotomy::PurelyInfinite;
    }
    Dichotomy::Ultramatricial(paths_to_sinks(g))
}

/// Number of paths (including trivial ones) ending at a sink of an acyclic
/// graph with finitely many edges.
fn paths_to_sinks(g: &Graph) -> BigInt {
    let n = g.len();
    let mut memo: Vec<Option<BigInt>> = vec![None; n];
    fn from(g: &Graph, v: usize, memo: &mut Vec<Option<BigInt>>) -> BigInt {
        if let Some(x) = &memo[v] {
            return x.clone();
        }
        let mut total = if g.out_total(v).is_zero() {
            BigInt::one()
        } else {
            BigInt::zero()
        };
        for u in 0..g.len() {
            let m = g.mult(v, u).finite().expect("acyclic simple graphs have finite edges");
            if m > 0 {
                total += from(g, u, memo) * m;
            }
        }
        memo[v] = Some(total.clone());
        total
    }
    (0..n).map(|v| from(g, v, &mut memo)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoritaOutcome {
    Equivalent,
    NotEquivalent,
    OpenProblem,
    NotApplicable,
}

/// The rule that produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    NotSimple,
    BothMatrixAlgebras,
    MatrixAlgebraVsPurelyInfinite,
    /// Both simple with infinitely many edges: K0 and singular counts decide.
    InfiniteEdgeInvariants,
    /// One simple graph with finitely many edges, one with infinitely many.
    MixedEdgeSets,
    FiniteK0Differs,
    /// Finite graphs with isomorphic K0 and equal determinant signs.
    FiniteDetSignsAgree,
    /// Finite graphs with isomorphic K0 and opposite determinant signs.
    FiniteDetSignsDiffer,
    /// K0 together with the algebraic K1 group, over fields without free
    /// quotients.
    K1Invariants,
    NotInfiniteEdge,
    UnitNotInvariant,
    PointedK0,
    SingCountsDiffer,
}

/// How a verdict relates to the K1 route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum K1Route {
    /// The verdict comes from the K1 comparison.
    Used,
    /// The field has free quotients (or unknown structure); K0 with K1 is not
    /// a complete invariant, so the K0 and singular-count rule decided.
    Refused,
    /// The K1 comparison was inconclusive; the K0 rule decided.
    Inconclusive,
    NotAttempted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoritaVerdict {
    pub outcome: MoritaOutcome,
    pub clause: Clause,
    pub reason: String,
    pub k1_route: K1Route,
}

impl MoritaVerdict {
    fn new(outcome: MoritaOutcome, clause: Clause, reason: String) -> Self {
        MoritaVerdict {
            outcome,
            clause,
            reason,
            k1_route: K1Route::NotAttempted,
        }
    }
}

impl fmt::Display for MoritaOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoritaOutcome::Equivalent => "Equivalent",
            MoritaOutcome::NotEquivalent => "NotEquivalent",
            MoritaOutcome::OpenProblem => "OpenProblem",
            MoritaOutcome::NotApplicable => "NotApplicable",
        })
    }
}

fn not_simple(g1: &Graph, g2: &Graph) -> Option<String> {
    let which: Vec<&str> = [(g1, "first"), (g2, "second")]
        .iter()
        .filter(|(g, _)| !g.is_simple())
        .map(|(_, w)| *w)
        .collect();
    match which[..] {
        [] => None,
        [w] => Some(format!("the {w} graph is not simple")),
        _ => Some("neither graph is simple".into()),
    }
}

/// Morita equivalence of `L_K(g1)` and `L_K(g2)` for simple graphs.
pub fn decide_morita(g1: &Graph, g2: &Graph, _field: FieldDescriptor) -> MoritaVerdict {
    use MoritaOutcome::*;
    if let Some(r) = not_simple(g1, g2) {
        return MoritaVerdict::new(NotApplicable, Clause::NotSimple, r);
    }
    match (dichotomy(g1), dichotomy(g2)) {
        (Dichotomy::Ultramatricial(a), Dichotomy::Ultramatricial(b)) => {
            return MoritaVerdict::new(
                Equivalent,
                Clause::BothMatrixAlgebras,
                format!("M_{a} and M_{b} are both Morita equivalent to the field"),
            );
        }
        (Dichotomy::Ultramatricial(_), _) | (_, Dichotomy::Ultramatricial(_)) => {
            return MoritaVerdict::new(
                NotEquivalent,
                Clause::MatrixAlgebraVsPurelyInfinite,
                "a matrix algebra is not Morita equivalent to a purely infinite algebra".into(),
            );
        }
        _ => {}
    }
    let (a, b) = (k0(g1).0, k0(g2).0);
    let (s1, s2) = (g1.singular_count(), g2.singular_count());
    match (g1.has_infinite_edges(), g2.has_infinite_edges()) {
        (true, true) => {
            let (outcome, detail) = if a != b {
                (NotEquivalent, format!("K0 {a} vs {b}"))
            } else if s1 != s2 {
                (NotEquivalent, format!("sing_count {s1} != {s2}"))
            } else {
                (Equivalent, format!("K0 {a} and sing_count {s1} agree"))
            };
            MoritaVerdict::new(outcome, Clause::InfiniteEdgeInvariants, detail)
        }
        (true, false) | (false, true) => MoritaVerdict::new(
            NotEquivalent,
            Clause::MixedEdgeSets,
            "one graph has finitely many edges and the other infinitely many".into(),
        ),
        (false, false) => {
            if a != b {
                return MoritaVerdict::new(
                    NotEquivalent,
                    Clause::FiniteK0Differs,
                    format!("K0 {a} vs {b}"),
                );
            }
            let (d1, d2) = (det_sign(g1), det_sign(g2));
            if d1 == d2 {
                MoritaVerdict::new(
                    Equivalent,
                    Clause::FiniteDetSignsAgree,
                    format!("K0 {a} agrees and det(I - A^t) has sign {d1} for both"),
                )
            } else {
                MoritaVerdict::new(
                    OpenProblem,
                    Clause::FiniteDetSignsDiffer,
                    format!(
                        "K0 {a} agrees but det(I - A^t) signs differ ({d1} vs {d2}); \
                         whether these are Morita equivalent is unknown"
                    ),
                )
            }
        }
    }
}

/// Morita equivalence decided from K0 and algebraic K1, which is complete
/// for simple graphs with infinitely many edges over fields whose unit group
/// has no free quotients. Other fields fall back to [`decide_morita`].
pub fn decide_morita_via_k1(g1: &Graph, g2: &Graph, field: FieldDescriptor) -> MoritaVerdict {
    use MoritaOutcome::*;
    if let Some(r) = not_simple(g1, g2) {
        return MoritaVerdict::new(NotApplicable, Clause::NotSimple, r);
    }
    if !(g1.has_infinite_edges() && g2.has_infinite_edges()) {
        return MoritaVerdict::new(
            NotApplicable,
            Clause::NotInfiniteEdge,
            "the K1 route needs both graphs to have infinitely many edges".into(),
        );
    }
    if field.no_free_quotients() != Tri::Yes {
        let mut v = decide_morita(g1, g2, field);
        v.k1_route = K1Route::Refused;
        v.reason = format!(
            "{}; K0 with K1 does not determine Morita equivalence over {field}, whose unit group \
             may have free quotients",
            v.reason
        );
        return v;
    }
    let (a, b) = (k0(g1).0, k0(g2).0);
    let (x, y) = (k1_alg(g1, field), k1_alg(g2, field));
    let same_k1 = expr_isomorphic(&x, &y).expect("both over the same field");
    let verdict = match (a == b, same_k1) {
        (false, _) => Some((NotEquivalent, format!("K0 {a} vs {b}"))),
        (true, Tri::Yes) => Some((Equivalent, format!("K0 {a} and K1 {x} agree"))),
        (true, Tri::No) => Some((NotEquivalent, format!("K1 {x} vs {y}"))),
        (true, Tri::Unknown) => None,
    };
    match verdict {
        Some((outcome, reason)) => MoritaVerdict {
            outcome,
            clause: Clause::K1Invariants,
            reason,
            k1_route: K1Route::Used,
        },
        None => {
            let mut v = decide_morita(g1, g2, field);
            v.k1_route = K1Route::Inconclusive;
            v.reason = format!("{}; K1 groups {x} and {y} could not be compared", v.reason);
            v
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsoOutcome {
    Isomorphic,
    NotIsomorphic,
    OpenProblem,
    Undecided,
    NotApplicable,
}

impl fmt::Display for IsoOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsoOutcome::Isomorphic => "Isomorphic",
            IsoOutcome::NotIsomorphic => "NotIsomorphic",
            IsoOutcome::OpenProblem => "OpenProblem",
            IsoOutcome::Undecided => "Undecided",
            IsoOutcome::NotApplicable => "NotApplicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoVerdict {
    pub outcome: IsoOutcome,
    pub clause: Clause,
    pub reason: String,
}

pub fn decide_isomorphism(g1: &Graph, g2: &Graph, field: FieldDescriptor) -> IsoVerdict {
    decide_isomorphism_bounded(g1, g2, field, DEFAULT_AUT_BOUND)
}

/// Ring isomorphism of `L_K(g1)` and `L_K(g2)` for simple graphs with
/// infinitely many edges, when the unit class of `g1` is fixed by every
/// automorphism of its K0 group.
pub fn decide_isomorphism_bounded(
    g1: &Graph,
    g2: &Graph,
    _field: FieldDescriptor,
    aut_bound: usize,
) -> IsoVerdict {
    use IsoOutcome::*;
    let verdict = |outcome, clause, reason: String| IsoVerdict {
        outcome,
        clause,
        reason,
    };
    if let Some(r) = not_simple(g1, g2) {
        return verdict(NotApplicable, Clause::NotSimple, r);
    }
    if !(g1.has_infinite_edges() && g2.has_infinite_edges()) {
        return verdict(
            NotApplicable,
            Clause::NotInfiniteEdge,
            "both graphs must have infinitely many edges".into(),
        );
    }
    let (a, ua) = k0(g1);
    let (b, ub) = k0(g2);
    let invariant = element_automorphism_invariant(&a, &ua, aut_bound)
        .expect("unit class belongs to its K0 group");
    if invariant != Bounded::Yes {
        let why = if invariant == Bounded::No {
            "is moved by an automorphism"
        } else {
            "could not be certified automorphism invariant within the enumeration bound"
        };
        return verdict(
            NotApplicable,
            Clause::UnitNotInvariant,
            format!(
                "the unit class {ua} of K0 {a} {why}; the classification is only known for \
                 invariant unit classes (conjecturally the hypothesis is unnecessary)"
            ),
        );
    }
    let (s1, s2) = (g1.singular_count(), g2.singular_count());
    if s1 != s2 {
        return verdict(
            NotIsomorphic,
            Clause::SingCountsDiffer,
            format!("sing_count {s1} != {s2}"),
        );
    }
    let pointed = pointed_isomorphic(&a, &ua, &b, &ub, aut_bound)
        .expect("unit classes belong to their K0 groups");
    match pointed {
        Bounded::Yes => verdict(
            Isomorphic,
            Clause::PointedK0,
            format!("(K0, unit) ({a}, {ua}) matches ({b}, {ub}) and sing_count {s1} agrees"),
        ),
        Bounded::No => verdict(
            NotIsomorphic,
            Clause::PointedK0,
            format!("no isomorphism K0 {a} -> {b} carries {ua} to {ub}"),
        ),
        Bounded::Undecided => verdict(
            Undecided,
            Clause::PointedK0,
            format!("automorphism orbits of K0 {a} exceed the enumeration bound {aut_bound}"),
        ),
    }
}
