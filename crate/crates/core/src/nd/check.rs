use std::fmt;

use crate::formula::Formula;

use super::{Deduction, NodeId, Rule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// Wrong number of premises for the rule.
    Arity { expected: &'static str, found: usize },
    /// `rep`/`sep` premise carries a different formula.
    PremiseMismatch { premise: NodeId },
    /// `→I` conclusion is not `discharged -> premise`.
    BadIntroduction,
    /// `→E` premises are not `α` and `α -> conclusion`.
    BadElimination,
    /// The node cannot be reached from the root.
    Unreachable,
    /// The root does not sit at level 0.
    RootLevel { level: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node: NodeId,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: ", self.node)?;
        match &self.kind {
            ViolationKind::Arity { expected, found } => {
                write!(f, "expected {expected} premises, found {found}")
            }
            ViolationKind::PremiseMismatch { premise } => {
                write!(f, "premise {premise} carries a different formula")
            }
            ViolationKind::BadIntroduction => f.write_str("not a correct ->I inference"),
            ViolationKind::BadElimination => f.write_str("not a correct ->E inference"),
            ViolationKind::Unreachable => f.write_str("unreachable from the root"),
            ViolationKind::RootLevel { level } => write!(f, "root at level {level}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LocalReport {
    pub violations: Vec<Violation>,
}

impl LocalReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_at(&self, node: NodeId) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.node == node)
    }
}

/// Check every node against the premise shape of its rule. Acyclicity and
/// level monotonicity are guaranteed by [`Deduction`] construction; this adds
/// reachability and the root level.
pub fn check_local_correctness(d: &Deduction) -> LocalReport {
    let mut violations = Vec::new();
    let mut flag = |node, kind| violations.push(Violation { node, kind });

    if d.level(d.root()) != 0 {
        flag(d.root(), ViolationKind::RootLevel { level: d.level(d.root()) });
    }
    let reachable = d.reachable();
    for (id, node) in d.nodes().iter().enumerate() {
        if !reachable[id] {
            flag(id, ViolationKind::Unreachable);
        }
        let premise = |i: usize| &d.node(node.premises[i]).formula;
        let count = node.premises.len();
        match &node.rule {
            Rule::Leaf => {
                if count != 0 {
                    flag(id, ViolationKind::Arity { expected: "0", found: count });
                }
            }
            Rule::Rep => {
                if count != 1 {
                    flag(id, ViolationKind::Arity { expected: "1", found: count });
                } else if *premise(0) != node.formula {
                    flag(id, ViolationKind::PremiseMismatch { premise: node.premises[0] });
                }
            }
            Rule::ImpIntro { discharged } => {
                if count != 1 {
                    flag(id, ViolationKind::Arity { expected: "1", found: count });
                } else {
                    let ok = matches!(
                        node.formula.as_imp(),
                        Some((a, b)) if a == discharged && b == premise(0)
                    );
                    if !ok {
                        flag(id, ViolationKind::BadIntroduction);
                    }
                }
            }
            Rule::ImpElim => {
                if count != 2 {
                    flag(id, ViolationKind::Arity { expected: "2", found: count });
                } else {
                    let expected_major = Formula::imp(premise(0).clone(), node.formula.clone());
                    if *premise(1) != expected_major {
                        flag(id, ViolationKind::BadElimination);
                    }
                }
            }
            Rule::Sep => {
                if count == 0 {
                    flag(id, ViolationKind::Arity { expected: "at least 1", found: 0 });
                }
                for &p in &node.premises {
                    if d.node(p).formula != node.formula {
                        flag(id, ViolationKind::PremiseMismatch { premise: p });
                    }
                }
            }
        }
    }
    LocalReport { violations }
}
