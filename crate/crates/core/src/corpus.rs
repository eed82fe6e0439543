//! Deterministic formula and proof generators for sweeps and benchmarks.

use std::collections::BTreeSet;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, Sequent};
use crate::hsc::prove_lm;
use crate::nd::{Deduction, DeductionBuilder, NodeId};

/// Variable names `p`, `q`, `r`, `s`, then `v4`, `v5`, ...
pub fn variable_names(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| match i {
            0..=3 => ["p", "q", "r", "s"][i].to_string(),
            _ => format!("v{i}"),
        })
        .collect()
}

/// Every purely implicational formula over `vars` with weight at most
/// `max_weight`, by increasing weight.
pub fn exhaustive_implicational(vars: &[String], max_weight: usize) -> Vec<Formula> {
    // by_weight[w] holds all formulas of weight exactly w.
    let mut by_weight: Vec<Vec<Formula>> = vec![Vec::new(); max_weight + 1];
    for w in 1..=max_weight {
        if w == 1 {
            by_weight[1] = vars.iter().map(|v| Formula::var(v)).collect();
            continue;
        }
        let mut here = Vec::new();
        for left in 1..w.saturating_sub(1) {
            let right = w - 1 - left;
            for a in &by_weight[left] {
                for b in &by_weight[right] {
                    here.push(Formula::imp(a.clone(), b.clone()));
                }
            }
        }
        by_weight[w] = here;
    }
    by_weight.into_iter().flatten().collect()
}

fn random_formula<R: Rng>(
    rng: &mut R,
    leaves: usize,
    atom: &mut impl FnMut(&mut R) -> Formula,
    connect: &mut impl FnMut(&mut R, Formula, Formula) -> Formula,
) -> Formula {
    if leaves == 1 {
        return atom(rng);
    }
    let left = rng.gen_range(1..leaves);
    let a = random_formula(rng, left, atom, connect);
    let b = random_formula(rng, leaves - left, atom, connect);
    connect(rng, a, b)
}

fn leaves_for<R: Rng>(rng: &mut R, max_weight: usize) -> usize {
    rng.gen_range(1..=max_weight.div_ceil(2).max(1))
}

/// Random purely implicational formulas with weight at most `max_weight`.
pub fn random_implicational(seed: u64, count: usize, max_weight: usize, vars: &[String]) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let leaves = leaves_for(&mut rng, max_weight);
            random_formula(
                &mut rng,
                leaves,
                &mut |r| Formula::var(&vars[r.gen_range(0..vars.len())]),
                &mut |_, a, b| Formula::imp(a, b),
            )
        })
        .collect()
}

/// Distinct provable implicational formulas, drawn from a seeded stream of
/// random formulas. Returns fewer than `count` only if `attempts` draws do
/// not suffice.
pub fn random_provable(seed: u64, count: usize, max_weight: usize, vars: &[String], attempts: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..attempts {
        if out.len() == count {
            break;
        }
        let leaves = leaves_for(&mut rng, max_weight);
        let f = random_formula(
            &mut rng,
            leaves,
            &mut |r| Formula::var(&vars[r.gen_range(0..vars.len())]),
            &mut |_, a, b| Formula::imp(a, b),
        );
        if seen.insert(f.clone()) && prove_lm(&Sequent::goal(f.clone())).is_some() {
            out.push(f);
        }
    }
    out
}

/// Random formulas over `->`, `&`, `|` and `false`.
pub fn random_full_language(seed: u64, count: usize, max_weight: usize, vars: &[String]) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let leaves = leaves_for(&mut rng, max_weight);
            random_formula(
                &mut rng,
                leaves,
                &mut |r| {
                    if r.gen_ratio(1, 6) {
                        Formula::Falsum
                    } else {
                        Formula::var(&vars[r.gen_range(0..vars.len())])
                    }
                },
                &mut |r, a, b| match r.gen_range(0..4) {
                    0 | 1 => Formula::imp(a, b),
                    2 => Formula::and(a, b),
                    _ => Formula::or(a, b),
                },
            )
        })
        .collect()
}

enum Shape {
    Leaf(Formula),
    Rep(Rc<Shape>),
    Intro(Formula, Rc<Shape>),
    Elim(Rc<Shape>, Rc<Shape>),
}

struct Candidate {
    formula: Formula,
    shape: Rc<Shape>,
}

fn build(shape: &Shape, b: &mut DeductionBuilder) -> NodeId {
    match shape {
        Shape::Leaf(f) => b.leaf(f.clone()),
        Shape::Rep(s) => {
            let p = build(s, b);
            b.rep(p)
        }
        Shape::Intro(a, s) => {
            let p = build(s, b);
            b.imp_intro(a.clone(), p)
        }
        Shape::Elim(m, j) => {
            let m = build(m, b);
            let j = build(j, b);
            b.imp_elim(m, j)
        }
    }
}

/// Every locally correct, separation-free tree with at most `max_nodes`
/// nodes whose formulas all come from `pool`.
pub fn locally_correct_trees(pool: &[Formula], max_nodes: usize) -> Vec<Deduction> {
    let in_pool: BTreeSet<&Formula> = pool.iter().collect();
    // by_size[n] holds all trees with exactly n nodes.
    let mut by_size: Vec<Vec<Candidate>> = (0..=max_nodes).map(|_| Vec::new()).collect();
    for n in 1..=max_nodes {
        let mut here = Vec::new();
        if n == 1 {
            for f in pool {
                here.push(Candidate { formula: f.clone(), shape: Rc::new(Shape::Leaf(f.clone())) });
            }
        } else {
            for c in &by_size[n - 1] {
                here.push(Candidate { formula: c.formula.clone(), shape: Rc::new(Shape::Rep(c.shape.clone())) });
                for a in pool {
                    let concl = Formula::imp(a.clone(), c.formula.clone());
                    if in_pool.contains(&concl) {
                        here.push(Candidate {
                            formula: concl,
                            shape: Rc::new(Shape::Intro(a.clone(), c.shape.clone())),
                        });
                    }
                }
            }
            for minor_size in 1..n - 1 {
                let major_size = n - 1 - minor_size;
                for m in &by_size[minor_size] {
                    for j in &by_size[major_size] {
                        if let Some((a, b)) = j.formula.as_imp() {
                            if *a == m.formula {
                                here.push(Candidate {
                                    formula: b.clone(),
                                    shape: Rc::new(Shape::Elim(m.shape.clone(), j.shape.clone())),
                                });
                            }
                        }
                    }
                }
            }
        }
        by_size[n] = here;
    }
    by_size
        .iter()
        .flatten()
        .map(|c| {
            let mut b = DeductionBuilder::new();
            let root = build(&c.shape, &mut b);
            b.build(root).expect("generated trees are acyclic")
        })
        .collect()
}
