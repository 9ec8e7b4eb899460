//! K-theoretic invariants of a graph with finitely many vertices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::graph::Graph;
use crate::groups::{
    ker_structure, unit_group_coker, unit_group_ker, CokerElement, Cokernel, FgAbelianGroup,
    FieldDescriptor, GroupExpr, Tri,
};
use crate::intlinalg::{det, IntMatrix};

/// `(B^t - I ; C^t) : Z^{regular} -> Z^{vertices}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackedMatrix {
    pub m: IntMatrix,
    /// Vertex indices labelling the rows: regular vertices, then singular.
    pub row_order: Vec<usize>,
    /// Regular vertex indices labelling the columns.
    pub col_order: Vec<usize>,
}

pub fn stacked_matrix(g: &Graph) -> StackedMatrix {
    let (regular, singular): (Vec<usize>, Vec<usize>) = (0..g.len()).partition(|&v| g.is_regular(v));
    let row_order: Vec<usize> = regular.iter().chain(&singular).copied().collect();
    let mut m = IntMatrix::zeros(row_order.len(), regular.len());
    for (i, &u) in row_order.iter().enumerate() {
        for (j, &w) in regular.iter().enumerate() {
            let a = g
                .mult(w, u)
                .finite()
                .expect("regular vertices emit finitely many edges");
            let mut e = BigInt::from(a);
            if u == w {
                e -= 1;
            }
            m[(i, j)] = e;
        }
    }
    StackedMatrix {
        m,
        row_order,
        col_order: regular,
    }
}

/// `K_0` together with the class of the unit `sum of all vertices`.
pub fn k0(g: &Graph) -> (FgAbelianGroup, CokerElement) {
    let s = stacked_matrix(g);
    let c = Cokernel::new(&s.m);
    let ones = vec![BigInt::one(); s.m.rows()];
    let unit = c.class_of(&ones).expect("unit vector has one entry per vertex");
    (c.group().clone(), unit)
}

pub fn k1_top(g: &Graph) -> FgAbelianGroup {
    ker_structure(&stacked_matrix(g).m)
}

pub fn k1_alg(g: &Graph, field: FieldDescriptor) -> GroupExpr {
    let s = stacked_matrix(g);
    let ker = GroupExpr::from_fg(&ker_structure(&s.m), field);
    ker.direct_sum(&unit_group_coker(&s.m, field))
        .expect("same field on both summands")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DetSign {
    Neg,
    Zero,
    Pos,
    /// Some multiplicity is infinite.
    NotApplicable,
}

impl fmt::Display for DetSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetSign::Neg => "-1",
            DetSign::Zero => "0",
            DetSign::Pos => "+1",
            DetSign::NotApplicable => "n/a",
        })
    }
}

/// Sign of `det(I - A^t)`.
pub fn det_sign(g: &Graph) -> DetSign {
    if g.has_infinite_edges() {
        return DetSign::NotApplicable;
    }
    let n = g.len();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let a = BigInt::from(g.mult(j, i).finite().unwrap_or_default());
            m[(i, j)] = if i == j { BigInt::one() - a } else { -a };
        }
    }
    let d = det(&m).expect("square matrix");
    if d.is_zero() {
        DetSign::Zero
    } else if d.is_negative() {
        DetSign::Neg
    } else {
        DetSign::Pos
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantBundle {
    pub k0: FgAbelianGroup,
    pub unit_class: CokerElement,
    pub k1_top: FgAbelianGroup,
    pub k1_alg: GroupExpr,
    pub sing_count: usize,
    pub det_sign: DetSign,
    pub simple: bool,
    pub has_cycle: bool,
    pub infinite_edges: bool,
}

impl InvariantBundle {
    /// `(key, value)` pairs in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("k0", self.k0.to_string()),
            ("unit_class", self.unit_class.to_string()),
            ("k1_top", self.k1_top.to_string()),
            ("k1_alg", self.k1_alg.to_string()),
            ("sing_count", self.sing_count.to_string()),
            ("det_sign", self.det_sign.to_string()),
            ("simple", self.simple.to_string()),
            ("has_cycle", self.has_cycle.to_string()),
            ("infinite_edges", self.infinite_edges.to_string()),
        ]
    }
}

pub fn invariants(g: &Graph, field: FieldDescriptor) -> InvariantBundle {
    let (k0, unit_class) = k0(g);
    InvariantBundle {
        k0,
        unit_class,
        k1_top: k1_top(g),
        k1_alg: k1_alg(g, field),
        sing_count: g.singular_count(),
        det_sign: det_sign(g),
        simple: g.is_simple(),
        has_cycle: g.has_cycle(),
        infinite_edges: g.has_infinite_edges(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum K2Status {
    Torsion,
    NotTorsion,
    Unknown,
}

impl fmt::Display for K2Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            K2Status::Torsion => "torsion",
            K2Status::NotTorsion => "not-torsion",
            K2Status::Unknown => "unknown",
        })
    }
}

/// Whether `K_2` of the Leavitt path algebra is a torsion group, read off
/// the exact sequence
/// `K_2(K)^{reg} -> K_2(K)^{vertices} -> K_2(L) -> ker(K^x-map) -> 0`.
pub fn k2_torsion_status(g: &Graph, field: FieldDescriptor) -> K2Status {
    let kappa = unit_group_ker(&stacked_matrix(g).m, field);
    match kappa.is_torsion() {
        Tri::No => K2Status::NotTorsion,
        Tri::Yes if field.k2_is_torsion == Some(true) => K2Status::Torsion,
        _ => K2Status::Unknown,
    }
}
