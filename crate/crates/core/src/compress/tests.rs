use super::*;
use crate::formula::{parse_formula, Formula, Sequent};
use crate::hsc::{prove_lm, sc_to_nd};
use crate::nd::{maximal_threads, unfold, DeductionBuilder, ViolationKind};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn identity() -> Deduction {
    let mut b = DeductionBuilder::new();
    let p = b.leaf(f("p"));
    let root = b.imp_intro(f("p"), p);
    b.build(root).unwrap()
}

/// `a→b` is inferred by `→I` and by `→E` at the same depth; both branches
/// are closed by the common introductions at the root.
fn clash() -> (Deduction, NodeId) {
    let mut b = DeductionBuilder::new();
    let leaf_b = b.leaf(f("b"));
    let x1 = b.imp_intro(f("a"), leaf_b);
    let c = b.leaf(f("c"));
    let g = b.leaf(f("c->a->b"));
    let x2 = b.imp_elim(c, g);
    let rep = b.rep(x2);
    let h = b.leaf(f("(a->b)->(a->b)->d"));
    let e1 = b.imp_elim(x1, h);
    let e2 = b.imp_elim(rep, e1);
    let i1 = b.imp_intro(f("(a->b)->(a->b)->d"), e2);
    let i2 = b.imp_intro(f("c->a->b"), i1);
    let i3 = b.imp_intro(f("c"), i2);
    let root = b.imp_intro(f("b"), i3);
    (b.build(root).unwrap(), x1)
}

#[test]
fn leaves_merge_per_level() {
    let mut b = DeductionBuilder::new();
    let p1 = b.leaf(f("p"));
    let minor = b.imp_intro(f("x"), p1);
    let p2 = b.leaf(f("p"));
    let q = b.leaf(f("p->(x->p)->r"));
    let major = b.imp_elim(p2, q);
    let root = b.imp_elim(minor, major);
    let t = b.build(root).unwrap();
    let lc = compress_levels(&t).unwrap();
    let level2: Vec<String> = (0..lc.prime.len())
        .filter(|&id| lc.prime.level(id) == 2)
        .map(|id| lc.prime.node(id).formula.to_string())
        .collect();
    assert_eq!(level2, vec!["p", "p -> (x -> p) -> r"]);
    assert_eq!(lc.image[p1], lc.image[p2]);
    assert_eq!(lc.shapes[lc.image[p1]].len(), 1);
}

#[test]
fn clash_merges_into_three_premises() {
    let (t, x1) = clash();
    let lc = compress_levels(&t).unwrap();
    let merged = lc.image[x1];
    let node = lc.prime.node(merged);
    let premises: Vec<String> = node.premises.iter().map(|&p| lc.prime.node(p).formula.to_string()).collect();
    assert_eq!(premises, vec!["b", "c", "c -> a -> b"]);
    assert_eq!(lc.shapes[merged].len(), 2);
    let report = check_local_correctness(&lc.prime);
    assert!(report
        .violations_at(merged)
        .any(|v| matches!(v.kind, ViolationKind::Arity { found: 3, .. })));

    let sep = insert_separation(&lc);
    let s = sep.flat.node(sep.top[merged]);
    assert_eq!(s.rule, Rule::Sep);
    let rules: Vec<&str> = s.premises.iter().map(|&p| sep.flat.node(p).rule.name()).collect();
    assert_eq!(rules, vec!["impI", "impE"]);
    assert!(check_local_correctness(&sep.flat).is_ok());
}

#[test]
fn clash_cleanses_to_one_branch() {
    let (t, _) = clash();
    let trace = compress_proof(&t, DEFAULT_THREAD_CAP).unwrap();
    assert!(trace.certified(), "{:?}", trace.verdicts);
    assert_eq!(trace.sep_nodes.len(), 1);
    let s = trace.sep_nodes[0];
    assert_eq!(trace.choices.keys().copied().collect::<Vec<_>>(), vec![s]);
    let star_sep = trace.star_to_flat.iter().position(|&k| k == s).unwrap();
    assert_eq!(trace.star.node(star_sep).rule, Rule::Rep);
    let materialized = &trace.flat.node(s).premises;
    let kept = materialized.iter().filter(|m| trace.star_to_flat.contains(m)).count();
    assert_eq!(kept, 1);
    assert_eq!(trace.route, CleanseRoute::Threads);
}

#[test]
fn identity_is_unchanged() {
    let t = identity();
    let trace = compress_proof(&t, DEFAULT_THREAD_CAP).unwrap();
    assert!(trace.certified());
    assert_eq!(trace.star.len(), 2);
    assert_eq!(trace.prime.len(), t.len());
    assert_eq!(trace.prime.formula_set(), t.formula_set());
    assert_eq!(trace.threads, 1);
    assert_eq!(trace.bounds, Bounds { h: 1, phi: 4, w_tree: 4, w_prime: 4, w_flat: 4, w_star: 4 });
}

#[test]
fn distinct_levels_give_isomorphic_prime() {
    let pr = prove_lm(&Sequent::goal(f("(p->q->r)->(p->q)->p->r"))).unwrap();
    let t = sc_to_nd(&pr).unwrap();
    let lc = compress_levels(&t).unwrap();
    let mut distinct = true;
    for lvl in 0..=t.height() {
        let fs: Vec<_> = (0..t.len()).filter(|&i| t.level(i) == lvl).map(|i| &t.node(i).formula).collect();
        let set: std::collections::BTreeSet<_> = fs.iter().collect();
        distinct &= set.len() == fs.len();
        let merged: std::collections::BTreeSet<_> = (0..lc.prime.len())
            .filter(|&i| lc.prime.level(i) == lvl)
            .map(|i| &lc.prime.node(i).formula)
            .collect();
        assert_eq!(merged, set.into_iter().copied().collect());
    }
    if distinct {
        assert_eq!(lc.prime.len(), t.len());
    }
}

#[test]
fn two_leaf_tree_has_two_threads() {
    let pr = prove_lm(&Sequent::goal(f("((p->p)->q)->q"))).unwrap();
    let t = sc_to_nd(&pr).unwrap();
    let trace = compress_proof(&t, DEFAULT_THREAD_CAP).unwrap();
    assert!(trace.certified(), "{:?}", trace.verdicts);
    assert!(trace.bounds.w_star <= trace.bounds.w_flat);
    assert!(trace.bounds.w_flat <= 2 * trace.bounds.h * trace.bounds.phi);
    let u = unfold(&trace.star, 100_000).unwrap();
    assert!(proves_threads(&u.tree));
}

#[test]
fn tree_threads_are_coherent() {
    let (t, _) = clash();
    let threads = ThreadSet::new(maximal_threads(&t, 100).unwrap());
    assert!(verify_local_coherency(&t, &threads).is_ok());

    let missing = ThreadSet::new(threads.threads()[1..].to_vec());
    let report = verify_local_coherency(&t, &missing);
    assert!(report.violations.iter().any(|v| matches!(v, CoherencyViolation::NotDense { .. })));
}

#[test]
fn mismatched_sibling_prefix_is_reported() {
    // Two parallel routes into the same →E node: the major premise is only
    // reached through the right route.
    let mut b = DeductionBuilder::new();
    let p = b.leaf(f("p"));
    let pp = b.leaf(f("p->p"));
    let e = b.imp_elim(p, pp);
    let left = b.rep(e);
    let right = b.rep(e);
    let s = b.sep(vec![left, right]);
    let i = b.imp_intro(f("p"), s);
    let root = b.imp_intro(f("p->p"), i);
    let d = b.build(root).unwrap();
    let threads = ThreadSet::new(vec![
        vec![root, i, s, left, e, p],
        vec![root, i, s, right, e, pp],
    ]);
    let report = verify_local_coherency(&d, &threads);
    assert!(report.violations.contains(&CoherencyViolation::Unpreserved { thread: 0, node: e, child: pp }));
    assert!(matches!(cleanse(&d, &threads), Err(CompressError::Incoherent { .. })));
}

#[test]
fn sep_free_input_is_kept_whole() {
    let t = identity();
    let threads = ThreadSet::new(maximal_threads(&t, 10).unwrap());
    let c = cleanse(&t, &threads).unwrap();
    assert_eq!(c.star, t);
    assert!(c.choices.is_empty());
}

#[test]
fn rejects_bad_inputs() {
    let mut b = DeductionBuilder::new();
    let p = b.leaf(f("p"));
    let open = b.build(p).unwrap();
    assert_eq!(compress_proof(&open, 10).unwrap_err(), CompressError::NotProof);
    let (t, _) = clash();
    assert_eq!(compress_proof(&t, 2).unwrap_err(), CompressError::ThreadCap { cap: 2 });
}

#[test]
fn trace_document_round_trips_stages() {
    let (t, _) = clash();
    let trace = compress_proof(&t, DEFAULT_THREAD_CAP).unwrap();
    let json = serde_json::to_string(&trace.to_document()).unwrap();
    let doc: TraceDocument = serde_json::from_str(&json).unwrap();
    assert_eq!(doc.stages.star.to_deduction().unwrap(), trace.star);
    let flat = doc.stages.flat.to_deduction().unwrap();
    let choices = doc.stages.flat.choice_map().unwrap().unwrap();
    assert!(crate::nd::proves_with_choices(&flat, &choices).unwrap().is_empty());
    assert!(json.contains("\"w_prime\""));
}
