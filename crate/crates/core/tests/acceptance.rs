//! Acceptance gate: one PASS/FAIL line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};

use common::oracles::{cofinal, coker_by_minors, compare_orbits, condition_l, simple};
use common::*;
use leavitt::classify::{decide_morita, decide_morita_via_k1, Clause, K1Route, MoritaOutcome};
use leavitt::format::parse_script;
use leavitt::graph::graphs_isomorphic;
use leavitt::groups::{coker_structure, expr_isomorphic, fg_isomorphic, Count, FgAbelianGroup, FieldDescriptor, GroupExpr, Tri};
use leavitt::intlinalg::{det, snf};
use leavitt::ktheory::{det_sign, k0, k1_alg, k1_top, k2_torsion_status, DetSign, K2Status};
use leavitt::moves::{apply_script, cuntz_splice, verify_bridge};
use leavitt::{Graph, IntMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

// Everything below is exact arithmetic: no numeric tolerance applies, and
// every comparison is equality of integers or of group normal forms.
const SNF_RANDOM_MATRICES: usize = 1000;
const SNF_MAX_DIM: usize = 6;
const SNF_ENTRY_RANGE: i64 = 25;
const SPLICE_RANDOM_GRAPHS: usize = 200;
const UNIT_ZERO_RANDOM_GRAPHS: usize = 50;
const MOVE_APPLICATIONS: usize = 1200;
const RANK_IDENTITY_GRAPHS: usize = 1500;
const VIA_K1_PAIRS: usize = 500;
const ORACLE_MAX_VERTICES: usize = 5;
const ORACLE_MAX_GROUP_ORDER: u64 = 64;
const ISO_VERTEX_BOUND: usize = 10;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q() -> FieldDescriptor {
    FieldDescriptor::rationals()
}

fn same_expr(a: &GroupExpr, b: &GroupExpr) -> bool {
    expr_isomorphic(a, b) == Ok(Tri::Yes)
}

fn criterion_1() -> Outcome {
    let (e, f) = (counter_e(), counter_f());
    let z2 = FgAbelianGroup::free(2);
    ensure(k0(&e).0 == z2 && k0(&f).0 == z2, || "k0 is not Z^2 for both".into())?;
    let units2 = GroupExpr::units(Count::Finite(2), q());
    let (ke, kf) = (k1_alg(&e, q()), k1_alg(&f, q()));
    ensure(same_expr(&ke, &units2) && same_expr(&kf, &units2), || format!("k1_alg {ke} / {kf}"))?;
    ensure((e.singular_count(), f.singular_count()) == (2, 1), || "sing counts".into())?;
    let v = decide_morita(&e, &f, q());
    ensure(v.outcome == MoritaOutcome::NotEquivalent, || format!("verdict {}", v.outcome))?;
    let (se, sf) = (k2_torsion_status(&e, q()), k2_torsion_status(&f, q()));
    ensure((se, sf) == (K2Status::Torsion, K2Status::NotTorsion), || format!("k2 {se} / {sf}"))?;
    Ok(format!("k0 Z^2, k1_alg {ke}, sing 2 vs 1, {} ({}), k2 {se} vs {sf}", v.outcome, v.reason))
}

fn criterion_2() -> Outcome {
    let (e, f) = (e_inf(), f_tilde());
    let z = FgAbelianGroup::free(1);
    ensure(k0(&e).0 == z && k0(&f).0 == z, || "k0 is not Z for both".into())?;
    let units = GroupExpr::units(Count::Finite(1), q());
    let (ke, kf) = (k1_alg(&e, q()), k1_alg(&f, q()));
    ensure(same_expr(&ke, &units) && same_expr(&kf, &units), || format!("k1_alg {ke} / {kf}"))?;
    let v = decide_morita(&e, &f, q());
    ensure(
        v.outcome == MoritaOutcome::NotEquivalent && v.clause == Clause::MixedEdgeSets,
        || format!("verdict {} via {:?}", v.outcome, v.clause),
    )?;
    let (se, sf) = (k2_torsion_status(&e, q()), k2_torsion_status(&f, q()));
    ensure((se, sf) == (K2Status::Torsion, K2Status::NotTorsion), || format!("k2 {se} / {sf}"))?;
    Ok(format!("k0 Z, k1_alg {ke}, {} via {:?}, k2 {se} vs {sf}", v.outcome, v.clause))
}

fn snf_checks(m: &IntMatrix) -> Result<(), String> {
    let r = snf(m);
    let d = IntMatrix::diagonal(m.rows(), m.cols(), &r.d);
    ensure(r.u.mul(m).unwrap().mul(&r.v).unwrap() == d, || format!("U*M*V != D for\n{m}"))?;
    ensure(det(&r.u).unwrap().abs().is_one() && det(&r.v).unwrap().abs().is_one(), || {
        format!("transforms not unimodular for\n{m}")
    })?;
    ensure(r.d.iter().all(|x| !x.is_negative()), || format!("negative diagonal for\n{m}"))?;
    for w in r.d.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
        ensure(ok, || format!("divisibility fails for\n{m}"))?;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let ones = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1], vec![1, 1]]).unwrap();
    let d = snf(&ones).d;
    ensure(d == vec![BigInt::one(), BigInt::zero()], || format!("golden d = {d:?}"))?;
    snf_checks(&ones)?;
    let mut r = rng(3);
    for _ in 0..SNF_RANDOM_MATRICES {
        snf_checks(&random_matrix(&mut r, SNF_MAX_DIM, SNF_ENTRY_RANGE))?;
    }
    Ok(format!("golden d = [1, 0]; {SNF_RANDOM_MATRICES} random matrices up to {SNF_MAX_DIM}x{SNF_MAX_DIM}"))
}

fn flipped(d: DetSign) -> DetSign {
    match d {
        DetSign::Neg => DetSign::Pos,
        DetSign::Pos => DetSign::Neg,
        other => other,
    }
}

fn splice_preserves(g: &Graph, w: &str) -> Result<(), String> {
    let h = cuntz_splice(g, w).map_err(|e| e.to_string())?;
    ensure(fg_isomorphic(&k0(g).0, &k0(&h).0), || format!("k0 changed splicing {w} in {g:?}"))?;
    for field in [q(), FieldDescriptor::finite(4).unwrap()] {
        ensure(same_expr(&k1_alg(g, field), &k1_alg(&h, field)), || {
            format!("k1_alg over {field} changed splicing {w} in {g:?}")
        })?;
    }
    ensure(det_sign(&h) == flipped(det_sign(g)), || format!("det sign not flipped splicing {w} in {g:?}"))?;
    ensure(!g.is_simple() || h.is_simple(), || format!("simplicity lost splicing {w} in {g:?}"))?;
    Ok(())
}

fn criterion_4() -> Outcome {
    let h = cuntz_splice(&e2(), "v0").map_err(|e| e.to_string())?;
    let want = graph(&[&[f(2), f(1), f(0)], &[f(1), f(1), f(1)], &[f(0), f(1), f(1)]]);
    ensure(h.rows() == want.rows(), || format!("CS(E2) = {:?}", h.rows()))?;
    ensure((det_sign(&e2()), det_sign(&h)) == (DetSign::Neg, DetSign::Pos), || "det sign of E2".into())?;
    splice_preserves(&e2(), "v0")?;
    splice_preserves(&e_inf(), "v0")?;
    let mut r = rng(4);
    let mut finite = 0;
    for i in 0..SPLICE_RANDOM_GRAPHS {
        let (g, w) = random_spliceable(&mut r, 4, if i % 2 == 0 { 0.0 } else { 0.3 });
        finite += usize::from(!g.has_infinite_edges());
        splice_preserves(&g, &w)?;
    }
    Ok(format!("CS(E2) golden, det -1 -> +1; {SPLICE_RANDOM_GRAPHS} random graphs ({finite} finite) keep k0, k1_alg"))
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    for i in 0..UNIT_ZERO_RANDOM_GRAPHS {
        let g = random_source_free_graph(&mut r, 4, if i % 2 == 0 { 0.0 } else { 0.3 });
        let mut h = g.clone();
        for w in g.names() {
            h = cuntz_splice(&h, w).map_err(|e| format!("splicing {w} in {g:?}: {e}"))?;
        }
        let (_, unit) = k0(&h);
        ensure(unit.is_zero(), || format!("unit class {unit} after splicing every vertex of {g:?}"))?;
    }
    Ok(format!("{UNIT_ZERO_RANDOM_GRAPHS} graphs spliced at every vertex have unit class 0"))
}

const BRIDGE_A: &str = "\
outsplit v0 :: v0=1 :: v0=inf
outsplit v0.2 :: v0.2=1 :: v0.2=inf,v0.1=inf
outsplit v0.2.2 :: v0.1=1 :: v0.1=inf,v0.2.1=inf,v0.2.2=inf
collapse v0.2.2.1
";

const BRIDGE_B: &str = "\
outsplit v0.cs1 :: v0=1,v0.cs2=1 :: v0.cs1=1
collapse v0.cs1.1
transitive v0 v0 v0.cs1.2
transitive v0 v0 v0.cs2
";

fn criterion_6() -> Outcome {
    let g1 = e_inf();
    let g2 = cuntz_splice(&g1, "v0").map_err(|e| e.to_string())?;
    let (s1, s2) = (parse_script(BRIDGE_A).unwrap(), parse_script(BRIDGE_B).unwrap());
    let r1 = apply_script(&g1, &s1, true).map_err(|e| e.to_string())?;
    let r2 = apply_script(&g2, &s2, true).map_err(|e| e.to_string())?;
    for h in r1.trace.iter().chain(&r2.trace) {
        ensure(h.is_simple(), || format!("intermediate not simple: {h:?}"))?;
        ensure(k0(h).0 == FgAbelianGroup::free(1), || format!("intermediate k0 not Z: {h:?}"))?;
        ensure(h.singular_count() == 1, || format!("intermediate sing_count: {h:?}"))?;
    }
    ensure(r1.graph.len() == 3 && r2.graph.len() == 3, || "end graphs are not 3-vertex".into())?;
    ensure(graphs_isomorphic(&r1.graph, &r2.graph, ISO_VERTEX_BOUND).unwrap(), || "ends differ".into())?;
    let ok = verify_bridge(&g1, &s1, &g2, &s2, ISO_VERTEX_BOUND).map_err(|e| e.to_string())?;
    ensure(ok, || "verify_bridge returned false".into())?;
    Ok(format!("{} + {} steps meet at a 3-vertex graph; all intermediates simple, k0 Z, sing 1", s1.len(), s2.len()))
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let apps = random_applications(&mut r, MOVE_APPLICATIONS, 4);
    let mut simple_inputs = 0;
    for (g, step, h) in &apps {
        ensure(g.singular_count() == h.singular_count(), || format!("sing_count changed by `{step}` on {g:?}"))?;
        ensure(fg_isomorphic(&k0(g).0, &k0(h).0), || format!("k0 changed by `{step}` on {g:?}"))?;
        if g.is_simple() {
            simple_inputs += 1;
            ensure(h.is_simple(), || format!("simplicity lost by `{step}` on {g:?}"))?;
        }
    }
    Ok(format!("{} applications of S/O/I/R/C/T ({simple_inputs} on simple graphs)", apps.len()))
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    for i in 0..RANK_IDENTITY_GRAPHS {
        let g = random_graph(&mut r, 6, 0.2 + 0.6 * (i % 4) as f64 / 4.0, 0.25);
        let lhs = g.singular_count() as i64;
        let rhs = k0(&g).0.free_rank() as i64 - k1_top(&g).free_rank() as i64;
        ensure(lhs == rhs, || format!("{lhs} != {rhs} for {g:?}"))?;
    }
    Ok(format!("sing_count = rank k0 - rank k1_top on {RANK_IDENTITY_GRAPHS} graphs"))
}

fn criterion_9() -> Outcome {
    let e_inf_minus = cuntz_splice(&e_inf(), "v0").unwrap();
    let e2_minus = cuntz_splice(&e2(), "v0").unwrap();
    let v = decide_morita(&e_inf(), &e_inf_minus, q());
    ensure(v.outcome == MoritaOutcome::Equivalent, || format!("(E_inf, E_inf-) {}", v.outcome))?;
    let v = decide_morita(&e2(), &e2_minus, q());
    ensure(v.outcome == MoritaOutcome::OpenProblem, || format!("(E2, E2-) {}", v.outcome))?;
    let mut r = rng(9);
    let acyclic: Vec<Graph> = (0..15).map(|_| random_acyclic_simple_graph(&mut r, 5)).collect();
    let infinite: Vec<Graph> = (0..25).map(|_| random_simple_graph(&mut r, 4, 0.3)).filter(Graph::has_cycle).collect();
    for a in &acyclic {
        for b in &acyclic {
            ensure(decide_morita(a, b, q()).outcome == MoritaOutcome::Equivalent, || format!("{a:?} vs {b:?}"))?;
        }
        for b in &infinite {
            ensure(decide_morita(a, b, q()).outcome == MoritaOutcome::NotEquivalent, || format!("{a:?} vs {b:?}"))?;
        }
    }
    let corpus: Vec<&Graph> = acyclic.iter().chain(&infinite).collect();
    for a in &corpus {
        ensure(decide_morita(a, a, q()).outcome == MoritaOutcome::Equivalent, || format!("not reflexive on {a:?}"))?;
        for b in &corpus {
            let (x, y) = (decide_morita(a, b, q()), decide_morita(b, a, q()));
            ensure(x.outcome == y.outcome && x.clause == y.clause, || format!("asymmetric on {a:?}, {b:?}"))?;
        }
    }
    Ok(format!("table rows hold; symmetric and reflexive on {} graphs", corpus.len()))
}

fn criterion_10() -> Outcome {
    let fields = [
        FieldDescriptor::finite(4).unwrap(),
        FieldDescriptor::complexes(),
        FieldDescriptor::alg_closed(0).unwrap(),
    ];
    let mut r = rng(10);
    let mut equivalent = 0;
    for i in 0..VIA_K1_PAIRS {
        let a = random_infinite_simple_graph(&mut r, 4);
        // every third pair shares a K0 group by construction
        let b = if i % 3 == 0 {
            random_applications_from(&mut r, &a)
        } else {
            random_infinite_simple_graph(&mut r, 4)
        };
        let base = decide_morita(&a, &b, q()).outcome;
        equivalent += usize::from(base == MoritaOutcome::Equivalent);
        for field in fields {
            let v = decide_morita_via_k1(&a, &b, field);
            ensure(v.outcome == decide_morita(&a, &b, field).outcome, || {
                format!("over {field}: via_k1 {} for {a:?} vs {b:?}", v.outcome)
            })?;
            ensure(v.k1_route == K1Route::Used, || format!("over {field}: K1 route {:?}", v.k1_route))?;
        }
    }
    let v = decide_morita_via_k1(&counter_e(), &counter_f(), q());
    ensure(v.k1_route == K1Route::Refused, || format!("over Q the route was {:?}", v.k1_route))?;
    let same_k1 = same_expr(&k1_alg(&counter_e(), q()), &k1_alg(&counter_f(), q()));
    ensure(same_k1 && v.outcome == MoritaOutcome::NotEquivalent, || "(E, F) does not witness the refusal".into())?;
    Ok(format!(
        "{VIA_K1_PAIRS} pairs ({equivalent} equivalent) agree over F4, C, algclosed; Q refused, (E, F) share K0 and K1"
    ))
}

fn criterion_11() -> Outcome {
    let mut r = rng(11);
    for _ in 0..500 {
        let m = random_matrix(&mut r, 4, 4);
        let (free, factors) = coker_by_minors(&m);
        let g = coker_structure(&m);
        ensure(g.free_rank() == free && g.invariant_factors() == &factors[..], || format!("cokernel of\n{m}"))?;
    }
    for _ in 0..1500 {
        let g = random_graph(&mut r, ORACLE_MAX_VERTICES, 0.35, 0.2);
        ensure(g.is_cofinal() == cofinal(&g), || format!("cofinality of {g:?}"))?;
        ensure(g.satisfies_condition_l() == condition_l(&g), || format!("condition (L) of {g:?}"))?;
        ensure(g.is_simple() == simple(&g), || format!("simplicity of {g:?}"))?;
    }
    let checked = compare_orbits(ORACLE_MAX_GROUP_ORDER, 16)?;
    Ok(format!(
        "500 cokernels, 1500 graphs up to {ORACLE_MAX_VERTICES} vertices, {checked} orbit checks up to order {ORACLE_MAX_GROUP_ORDER}"
    ))
}

/// A graph reached from `g` by a few random moves.
fn random_applications_from(r: &mut rand::rngs::StdRng, g: &Graph) -> Graph {
    use rand::Rng;
    let mut h = g.clone();
    let mut done = 0;
    for _ in 0..60 {
        if done == 2 || h.len() >= 6 {
            break;
        }
        let kind = r.gen_range(0..6);
        let step = random_step(r, &h, kind);
        if let Ok(next) = step.apply(&h) {
            h = next;
            done += 1;
        }
    }
    h
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("counter-example E vs F over Q", criterion_1),
        ("E_inf vs F~ over Q", criterion_2),
        ("Smith normal form", criterion_3),
        ("Cuntz splice effects", criterion_4),
        ("unit class zero after splicing", criterion_5),
        ("E_inf bridge", criterion_6),
        ("move invariance", criterion_7),
        ("rank identity", criterion_8),
        ("Morita verdict table", criterion_9),
        ("K1 route over fields without free quotients", criterion_10),
        ("brute-force oracles", criterion_11),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
