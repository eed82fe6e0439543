//! Provability: assumption sets, closed threads, separation choices,
//! unfolding, normality and size measures.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::Formula;

use super::{Deduction, Node, NodeId, Rule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("node {node} is a separation inference; the plain assumption semantics does not apply")]
    SepPresent { node: NodeId },
    #[error("more than {cap} maximal threads")]
    ThreadCap { cap: usize },
    #[error("unfolding needs more than {budget} nodes")]
    Budget { budget: usize },
    #[error("choice for node {node} is invalid")]
    BadChoice { node: NodeId },
}

pub type AssumptionSet = BTreeSet<Formula>;

/// `A(x)` for every node of a separation-free deduction, computed once per
/// node from the top level down to the root.
pub fn assumption_sets(d: &Deduction) -> Result<Vec<AssumptionSet>, SemanticsError> {
    if let Some(node) = d.nodes().iter().position(|n| n.rule == Rule::Sep) {
        return Err(SemanticsError::SepPresent { node });
    }
    Ok(evaluate(d, |_, _| unreachable!("no separation nodes")))
}

/// Bottom-up evaluation of the assumption semantics; `sep` resolves the value
/// of a separation node from the already computed values.
fn evaluate<F>(d: &Deduction, mut sep: F) -> Vec<AssumptionSet>
where
    F: FnMut(NodeId, &[AssumptionSet]) -> AssumptionSet,
{
    let mut sets: Vec<AssumptionSet> = vec![BTreeSet::new(); d.len()];
    for id in d.top_down_order().into_iter().rev() {
        let node = d.node(id);
        sets[id] = match &node.rule {
            Rule::Leaf => BTreeSet::from([node.formula.clone()]),
            Rule::Rep => sets[node.premises[0]].clone(),
            Rule::ImpIntro { discharged } => {
                let mut s = sets[node.premises[0]].clone();
                s.remove(discharged);
                s
            }
            Rule::ImpElim => {
                let mut s = sets[node.premises[0]].clone();
                s.extend(sets[node.premises[1]].iter().cloned());
                s
            }
            Rule::Sep => sep(id, &sets),
        };
    }
    sets
}

/// `A(r)` of a separation-free deduction.
pub fn open_assumptions(d: &Deduction) -> Result<AssumptionSet, SemanticsError> {
    let mut sets = assumption_sets(d)?;
    Ok(std::mem::take(&mut sets[d.root()]))
}

/// `∂ ⊢ ρ` decided as `A(r) = ∅`.
pub fn proves(d: &Deduction) -> Result<bool, SemanticsError> {
    Ok(open_assumptions(d)?.is_empty())
}

/// A thread is closed iff some `→I` on it discharges its leaf formula.
pub fn thread_is_closed(d: &Deduction, thread: &[NodeId]) -> bool {
    let Some(&leaf) = thread.last() else {
        return false;
    };
    let leaf_formula = &d.node(leaf).formula;
    thread.iter().any(|&id| {
        matches!(&d.node(id).rule, Rule::ImpIntro { discharged } if discharged == leaf_formula)
    })
}

/// `∂ ⊢ ρ` decided by walking every maximal thread and checking that it is
/// closed. Exponential on dags; intended for trees.
pub fn proves_threads(d: &Deduction) -> bool {
    fn walk<'a>(d: &'a Deduction, id: NodeId, discharged: &mut Vec<&'a Formula>) -> bool {
        let node = d.node(id);
        if node.premises.is_empty() {
            return discharged.contains(&&node.formula);
        }
        let pushed = if let Rule::ImpIntro { discharged: a } = &node.rule {
            discharged.push(a);
            true
        } else {
            false
        };
        let ok = node.premises.iter().all(|&p| walk(d, p, discharged));
        if pushed {
            discharged.pop();
        }
        ok
    }
    walk(d, d.root(), &mut Vec::new())
}

/// All maximal root-to-leaf threads in depth-first, left-to-right order.
pub fn maximal_threads(d: &Deduction, cap: usize) -> Result<Vec<Vec<NodeId>>, SemanticsError> {
    let mut out = Vec::new();
    let mut path = vec![d.root()];
    fn walk(
        d: &Deduction,
        path: &mut Vec<NodeId>,
        out: &mut Vec<Vec<NodeId>>,
        cap: usize,
    ) -> Result<(), SemanticsError> {
        let id = *path.last().expect("non-empty path");
        let premises = &d.node(id).premises;
        if premises.is_empty() {
            if out.len() == cap {
                return Err(SemanticsError::ThreadCap { cap });
            }
            out.push(path.clone());
            return Ok(());
        }
        for &p in premises {
            path.push(p);
            walk(d, path, out, cap)?;
            path.pop();
        }
        Ok(())
    }
    walk(d, &mut path, &mut out, cap)?;
    Ok(out)
}

/// Outcome of checking a deduction that may contain separation nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModifiedVerdict {
    /// `A(r) ▷ ∅` under the given choice: separation node → index of the
    /// chosen premise. Only separation nodes reachable under the choice are
    /// listed.
    Proved { choices: BTreeMap<NodeId, usize> },
    NotProved,
}

impl ModifiedVerdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, ModifiedVerdict::Proved { .. })
    }
}

/// `A(r)` with every separation node resolved by `choices`. Fails if a
/// separation node reachable under the choice has no valid entry.
pub fn proves_with_choices(
    d: &Deduction,
    choices: &BTreeMap<NodeId, usize>,
) -> Result<AssumptionSet, SemanticsError> {
    let reachable = reachable_under(d, choices);
    for (id, node) in d.nodes().iter().enumerate() {
        if reachable[id] && node.rule == Rule::Sep {
            match choices.get(&id) {
                Some(&i) if i < node.premises.len() => {}
                _ => return Err(SemanticsError::BadChoice { node: id }),
            }
        }
    }
    let mut sets = evaluate(d, |id, sets| match choices.get(&id) {
        Some(&i) if i < d.node(id).premises.len() => sets[d.node(id).premises[i]].clone(),
        _ => BTreeSet::new(),
    });
    Ok(std::mem::take(&mut sets[d.root()]))
}

fn reachable_under(d: &Deduction, choices: &BTreeMap<NodeId, usize>) -> Vec<bool> {
    let mut seen = vec![false; d.len()];
    let mut stack = vec![d.root()];
    while let Some(id) = stack.pop() {
        if std::mem::replace(&mut seen[id], true) {
            continue;
        }
        let node = d.node(id);
        if node.rule == Rule::Sep {
            if let Some(&i) = choices.get(&id) {
                if let Some(&p) = node.premises.get(i) {
                    stack.push(p);
                }
            }
        } else {
            stack.extend(node.premises.iter().copied());
        }
    }
    seen
}

/// Search for a choice of one premise per separation node such that the
/// induced separation-free deduction has `A(r) = ∅`.
///
/// Separation nodes are decided top-down (lowest level first), premises tried
/// left to right. A partial choice is abandoned as soon as a lower bound on
/// `A(r)` is non-empty: an undecided separation node contributes the
/// intersection of its premises' values, and the semantics is monotone in
/// every premise value, so no completion can do better.
pub fn proves_modified(d: &Deduction) -> ModifiedVerdict {
    let order = d.top_down_order();
    let mut choices = BTreeMap::new();
    if search(d, &order, &mut choices) {
        ModifiedVerdict::Proved { choices }
    } else {
        ModifiedVerdict::NotProved
    }
}

fn search(d: &Deduction, order: &[NodeId], choices: &mut BTreeMap<NodeId, usize>) -> bool {
    let lower = evaluate(d, |id, sets| {
        let premises = &d.node(id).premises;
        match choices.get(&id) {
            Some(&i) => sets[premises[i]].clone(),
            None => {
                let mut iter = premises.iter().map(|&p| &sets[p]);
                let first = iter.next().cloned().unwrap_or_default();
                iter.fold(first, |acc, s| acc.intersection(s).cloned().collect())
            }
        }
    });
    if !lower[d.root()].is_empty() {
        return false;
    }
    let reachable = reachable_under(d, choices);
    let pending = order
        .iter()
        .copied()
        .find(|&id| reachable[id] && d.node(id).rule == Rule::Sep && !choices.contains_key(&id));
    let Some(sep) = pending else {
        return true;
    };
    for i in 0..d.node(sep).premises.len() {
        choices.insert(sep, i);
        if search(d, order, choices) {
            return true;
        }
    }
    choices.remove(&sep);
    false
}

/// A tree-like copy of a deduction together with the original node of every
/// copy.
#[derive(Debug, Clone)]
pub struct Unfolded {
    pub tree: Deduction,
    pub origin: Vec<NodeId>,
}

/// Replace every node with several conclusions by one identically labeled
/// copy per conclusion, top-down from the root.
pub fn unfold(d: &Deduction, budget: usize) -> Result<Unfolded, SemanticsError> {
    fn copy(
        d: &Deduction,
        id: NodeId,
        nodes: &mut Vec<Node>,
        origin: &mut Vec<NodeId>,
        budget: usize,
    ) -> Result<NodeId, SemanticsError> {
        let node = d.node(id);
        let mut premises = Vec::with_capacity(node.premises.len());
        for &p in &node.premises {
            premises.push(copy(d, p, nodes, origin, budget)?);
        }
        if nodes.len() == budget {
            return Err(SemanticsError::Budget { budget });
        }
        nodes.push(Node {
            formula: node.formula.clone(),
            rule: node.rule.clone(),
            premises,
        });
        origin.push(id);
        Ok(nodes.len() - 1)
    }
    let mut nodes = Vec::new();
    let mut origin = Vec::new();
    let root = copy(d, d.root(), &mut nodes, &mut origin, budget)?;
    let tree = Deduction::new(nodes, root).expect("copies of an acyclic deduction are acyclic");
    Ok(Unfolded { tree, origin })
}

/// No `→I` conclusion is the major premise of a `→E`.
pub fn is_normal(d: &Deduction) -> bool {
    d.nodes().iter().all(|n| {
        n.rule != Rule::ImpElim
            || !matches!(d.node(n.premises[1]).rule, Rule::ImpIntro { .. })
    })
}

/// Every formula in the deduction is a subformula of the root formula or of a
/// formula discharged somewhere in it.
pub fn weak_subformula_holds(d: &Deduction) -> bool {
    let mut allowed = d.root_formula().subformulas();
    for node in d.nodes() {
        if let Rule::ImpIntro { discharged } = &node.rule {
            allowed.extend(discharged.subformulas());
        }
    }
    d.nodes().iter().all(|n| allowed.contains(&n.formula))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Measures {
    /// `|∂|`: sum of node formula weights.
    pub weight: usize,
    /// `h(∂)`: maximum level.
    pub height: usize,
    /// `φ(∂)`: total weight of the distinct formulas.
    pub phi: usize,
}

pub fn measures(d: &Deduction) -> Measures {
    Measures {
        weight: d.nodes().iter().map(|n| n.formula.weight()).sum(),
        height: d.height(),
        phi: d.formula_set().into_iter().map(Formula::weight).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::nd::DeductionBuilder;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn identity() -> Deduction {
        let mut b = DeductionBuilder::new();
        let p = b.leaf(f("p"));
        let root = b.imp_intro(f("p"), p);
        b.build(root).unwrap()
    }

    #[test]
    fn identity_proof() {
        let d = identity();
        let sets = assumption_sets(&d).unwrap();
        assert_eq!(sets[0], BTreeSet::from([f("p")]));
        assert!(sets[1].is_empty());
        assert!(proves(&d).unwrap());
        assert!(proves_threads(&d));
        assert!(is_normal(&d));
        assert_eq!(
            measures(&d),
            Measures {
                weight: 4,
                height: 1,
                phi: 4
            }
        );
    }

    #[test]
    fn open_leaf() {
        let mut b = DeductionBuilder::new();
        let p = b.leaf(f("p"));
        let d = b.build(p).unwrap();
        assert_eq!(open_assumptions(&d).unwrap(), BTreeSet::from([f("p")]));
        assert!(!proves(&d).unwrap());
        assert!(!proves_threads(&d));
        assert_eq!(
            measures(&d),
            Measures {
                weight: 1,
                height: 0,
                phi: 1
            }
        );
    }

    #[test]
    fn vacuous_discharge() {
        let mut b = DeductionBuilder::new();
        let a = b.leaf(f("a"));
        let ba = b.imp_intro(f("b"), a);
        let root = b.imp_intro(f("a"), ba);
        let d = b.build(root).unwrap();
        assert_eq!(d.root_formula(), &f("a->b->a"));
        let sets = assumption_sets(&d).unwrap();
        assert_eq!(sets[a], BTreeSet::from([f("a")]));
        assert_eq!(sets[ba], BTreeSet::from([f("a")]));
        assert!(sets[root].is_empty());
    }

    #[test]
    fn elimination_unions() {
        let mut b = DeductionBuilder::new();
        let p = b.leaf(f("p"));
        let pq = b.leaf(f("p->q"));
        let q = b.imp_elim(p, pq);
        let d = b.build(q).unwrap();
        assert_eq!(open_assumptions(&d).unwrap(), BTreeSet::from([f("p"), f("p->q")]));
    }

    #[test]
    fn sep_is_rejected_by_plain_semantics() {
        let mut b = DeductionBuilder::new();
        let p = b.leaf(f("p"));
        let s = b.sep(vec![p]);
        let d = b.build(s).unwrap();
        assert_eq!(assumption_sets(&d), Err(SemanticsError::SepPresent { node: s }));
    }

    #[test]
    fn modified_proof_picks_the_closed_premise() {
        // sep over an open leaf p and a proof of p->p ... both labeled p->p.
        let mut b = DeductionBuilder::new();
        let open = b.leaf(f("p->p"));
        let p = b.leaf(f("p"));
        let closed = b.imp_intro(f("p"), p);
        let s = b.sep(vec![open, closed]);
        let d = b.build(s).unwrap();
        assert_eq!(
            proves_modified(&d),
            ModifiedVerdict::Proved {
                choices: BTreeMap::from([(s, 1)])
            }
        );
        assert_eq!(
            proves_with_choices(&d, &BTreeMap::from([(s, 0)])).unwrap(),
            BTreeSet::from([f("p->p")])
        );
        assert!(proves_with_choices(&d, &BTreeMap::from([(s, 1)]))
            .unwrap()
            .is_empty());
        assert_eq!(
            proves_with_choices(&d, &BTreeMap::new()),
            Err(SemanticsError::BadChoice { node: s })
        );
    }

    #[test]
    fn modified_agrees_on_sep_free_input() {
        let d = identity();
        assert_eq!(
            proves_modified(&d),
            ModifiedVerdict::Proved {
                choices: BTreeMap::new()
            }
        );
        let mut b = DeductionBuilder::new();
        let p = b.leaf(f("p"));
        let d = b.build(p).unwrap();
        assert_eq!(proves_modified(&d), ModifiedVerdict::NotProved);
    }

    #[test]
    fn nested_separation_search_backtracks() {
        // The left branch only offers open leaves; the right branch closes
        // with its second premise.
        let mut b = DeductionBuilder::new();
        let o1 = b.leaf(f("p->p"));
        let o2 = b.leaf(f("p->p"));
        let inner_bad = b.sep(vec![o1, o2]);
        let left = b.rep(inner_bad);
        let o3 = b.leaf(f("p->p"));
        let p = b.leaf(f("p"));
        let closed = b.imp_intro(f("p"), p);
        let inner_good = b.sep(vec![o3, closed]);
        let right = b.rep(inner_good);
        let outer = b.sep(vec![left, right]);
        let d = b.build(outer).unwrap();
        let ModifiedVerdict::Proved { choices } = proves_modified(&d) else {
            panic!("expected a modified proof")
        };
        assert_eq!(choices, BTreeMap::from([(outer, 1), (inner_good, 1)]));
        assert!(proves_with_choices(&d, &choices).unwrap().is_empty());
    }

    #[test]
    fn threads_of_an_elimination() {
        let mut b = DeductionBuilder::new();
        let p = b.leaf(f("p"));
        let pq = b.leaf(f("p->q"));
        let q = b.imp_elim(p, pq);
        let i1 = b.imp_intro(f("p->q"), q);
        let root = b.imp_intro(f("p"), i1);
        let d = b.build(root).unwrap();
        let threads = maximal_threads(&d, 10).unwrap();
        assert_eq!(threads, vec![vec![root, i1, q, p], vec![root, i1, q, pq]]);
        assert!(threads.iter().all(|t| thread_is_closed(&d, t)));
        assert!(proves_threads(&d));
        assert_eq!(maximal_threads(&d, 1), Err(SemanticsError::ThreadCap { cap: 1 }));
    }

    #[test]
    fn unfolding_duplicates_shared_nodes() {
        let mut b = DeductionBuilder::new();
        let p = b.leaf(f("p"));
        let pp = b.leaf(f("p->p->q"));
        let e1 = b.imp_elim(p, pp);
        let e2 = b.imp_elim(p, e1);
        let root = b.imp_intro(f("p"), e2);
        let d = b.build(root).unwrap();
        assert!(!d.is_tree_like());
        let u = unfold(&d, 100).unwrap();
        assert!(u.tree.is_tree_like());
        assert_eq!(u.tree.len(), d.len() + 1);
        assert_eq!(u.origin.iter().filter(|&&o| o == p).count(), 2);
        assert_eq!(proves(&u.tree).unwrap(), proves(&d).unwrap());
        assert_eq!(unfold(&d, 3).unwrap_err(), SemanticsError::Budget { budget: 3 });

        let tree = identity();
        assert_eq!(unfold(&tree, 10).unwrap().tree, tree);
    }

    #[test]
    fn redex_is_not_normal() {
        let mut b = DeductionBuilder::new();
        let p = b.leaf(f("p"));
        let id = b.imp_intro(f("p"), p);
        let minor = b.leaf(f("p"));
        let e = b.imp_elim(minor, id);
        let d = b.build(e).unwrap();
        assert!(!is_normal(&d));
        assert!(is_normal(&identity()));
    }

    #[test]
    fn weak_subformula_predicate() {
        assert!(weak_subformula_holds(&identity()));
        // p -> p obtained from open assumptions s and s -> (p -> p).
        let mut b = DeductionBuilder::new();
        let s = b.leaf(f("s"));
        let major = b.leaf(f("s->p->p"));
        let e = b.imp_elim(s, major);
        let d = b.build(e).unwrap();
        assert!(!weak_subformula_holds(&d));
    }
}
