//! Tree-like and dag-like natural deductions for implicational minimal logic,
//! optionally extended with the separation rule.
//!
//! A [`Deduction`] is a rooted dag of [`Node`]s. Edges run from a conclusion
//! to its premises, and every node carries a level that strictly increases
//! along edges, so the root sits at level 0 and leaves at the top.

mod check;
mod document;
mod semantics;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

pub use check::{check_local_correctness, LocalReport, Violation, ViolationKind};
pub use document::{NodeDocument, ProofDocument};
pub use semantics::{
    assumption_sets, is_normal, maximal_threads, measures, open_assumptions, proves,
    proves_modified, proves_threads, proves_with_choices, thread_is_closed, unfold,
    weak_subformula_holds, Measures, ModifiedVerdict, SemanticsError, Unfolded,
};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Leaf,
    /// `→I`; the conclusion is `discharged -> β` over a premise `β`.
    ImpIntro { discharged: Formula },
    /// `→E`; premises are `[minor α, major α -> β]`.
    ImpElim,
    Rep,
    Sep,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Leaf => "leaf",
            Rule::ImpIntro { .. } => "impI",
            Rule::ImpElim => "impE",
            Rule::Rep => "rep",
            Rule::Sep => "sep",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::ImpIntro { discharged } => write!(f, "impI[{discharged}]"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub formula: Formula,
    pub rule: Rule,
    pub premises: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeductionError {
    #[error("root {root} is not a node (deduction has {len} nodes)")]
    BadRoot { root: NodeId, len: usize },
    #[error("node {node} refers to missing premise {premise}")]
    DanglingPremise { node: NodeId, premise: NodeId },
    #[error("cycle through node {node}")]
    Cycle { node: NodeId },
    #[error("level of premise {premise} does not exceed level of its conclusion {node}")]
    LevelOrder { node: NodeId, premise: NodeId },
    #[error("expected {expected} levels, found {found}")]
    LevelCount { expected: usize, found: usize },
    #[error("malformed proof document: {0}")]
    Document(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deduction {
    nodes: Vec<Node>,
    root: NodeId,
    levels: Vec<usize>,
}

impl Deduction {
    /// Build a deduction; each node's level is its longest distance from a
    /// parentless node (for a tree: its depth).
    pub fn new(nodes: Vec<Node>, root: NodeId) -> Result<Deduction, DeductionError> {
        validate_ids(&nodes, root)?;
        let order = topological_order(&nodes)?;
        let mut levels = vec![0usize; nodes.len()];
        for &id in &order {
            for &p in &nodes[id].premises {
                levels[p] = levels[p].max(levels[id] + 1);
            }
        }
        Ok(Deduction {
            nodes,
            root,
            levels,
        })
    }

    /// Build a deduction with explicit levels; premises must sit strictly
    /// above their conclusions.
    pub fn with_levels(
        nodes: Vec<Node>,
        root: NodeId,
        levels: Vec<usize>,
    ) -> Result<Deduction, DeductionError> {
        validate_ids(&nodes, root)?;
        if levels.len() != nodes.len() {
            return Err(DeductionError::LevelCount {
                expected: nodes.len(),
                found: levels.len(),
            });
        }
        for (id, node) in nodes.iter().enumerate() {
            for &p in &node.premises {
                if levels[p] <= levels[id] {
                    return Err(DeductionError::LevelOrder { node: id, premise: p });
                }
            }
        }
        Ok(Deduction {
            nodes,
            root,
            levels,
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn root_formula(&self) -> &Formula {
        &self.nodes[self.root].formula
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn level(&self, id: NodeId) -> usize {
        self.levels[id]
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Maximum level, i.e. `h(∂)`.
    pub fn height(&self) -> usize {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    pub fn parents(&self) -> Vec<Vec<NodeId>> {
        let mut parents = vec![Vec::new(); self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            for &p in &node.premises {
                parents[p].push(id);
            }
        }
        parents
    }

    /// Every node has exactly one conclusion except the root, which has none.
    pub fn is_tree_like(&self) -> bool {
        let parents = self.parents();
        parents.iter().enumerate().all(|(id, ps)| {
            if id == self.root {
                ps.is_empty()
            } else {
                ps.len() == 1
            }
        })
    }

    /// Every edge joins adjacent levels.
    pub fn is_leveled(&self) -> bool {
        self.nodes.iter().enumerate().all(|(id, n)| {
            n.premises
                .iter()
                .all(|&p| self.levels[p] == self.levels[id] + 1)
        })
    }

    pub fn has_sep(&self) -> bool {
        self.nodes.iter().any(|n| n.rule == Rule::Sep)
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id], true) {
                continue;
            }
            stack.extend(self.nodes[id].premises.iter().copied());
        }
        seen
    }

    /// Node ids ordered so that every conclusion precedes its premises.
    pub fn top_down_order(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = (0..self.nodes.len()).collect();
        order.sort_by_key(|&id| (self.levels[id], id));
        order
    }

    /// The distinct formulas occurring in the deduction.
    pub fn formula_set(&self) -> BTreeSet<&Formula> {
        self.nodes.iter().map(|n| &n.formula).collect()
    }

    /// Graphviz rendering: one vertex per node labeled `formula\nrule`, edges
    /// from premise to conclusion, one rank per level.
    pub fn to_dot(&self, name: &str) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
        for (id, node) in self.nodes.iter().enumerate() {
            let label = format!("{}\\n{}", escape(&node.formula.to_string()), escape(&node.rule.to_string()));
            let _ = writeln!(out, "  n{id} [label=\"{label}\"];");
        }
        for (id, node) in self.nodes.iter().enumerate() {
            for &p in &node.premises {
                let _ = writeln!(out, "  n{p} -> n{id};");
            }
        }
        let mut by_level: std::collections::BTreeMap<usize, Vec<NodeId>> = Default::default();
        for (id, &lvl) in self.levels.iter().enumerate() {
            by_level.entry(lvl).or_default().push(id);
        }
        for ids in by_level.values() {
            let members: Vec<String> = ids.iter().map(|id| format!("n{id};")).collect();
            let _ = writeln!(out, "  {{ rank=same; {} }}", members.join(" "));
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn validate_ids(nodes: &[Node], root: NodeId) -> Result<(), DeductionError> {
    if root >= nodes.len() {
        return Err(DeductionError::BadRoot {
            root,
            len: nodes.len(),
        });
    }
    for (id, node) in nodes.iter().enumerate() {
        if let Some(&premise) = node.premises.iter().find(|&&p| p >= nodes.len()) {
            return Err(DeductionError::DanglingPremise { node: id, premise });
        }
    }
    Ok(())
}

/// Conclusions before premises; fails on cycles.
fn topological_order(nodes: &[Node]) -> Result<Vec<NodeId>, DeductionError> {
    let mut indegree = vec![0usize; nodes.len()];
    for node in nodes {
        for &p in &node.premises {
            indegree[p] += 1;
        }
    }
    let mut queue: Vec<NodeId> = (0..nodes.len()).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(id) = queue.pop() {
        order.push(id);
        for &p in &nodes[id].premises {
            indegree[p] -= 1;
            if indegree[p] == 0 {
                queue.push(p);
            }
        }
    }
    if order.len() != nodes.len() {
        let node = (0..nodes.len()).find(|&i| indegree[i] > 0).unwrap_or(0);
        return Err(DeductionError::Cycle { node });
    }
    Ok(order)
}

/// Incremental construction of deductions, premises first.
#[derive(Default, Debug, Clone)]
pub struct DeductionBuilder {
    nodes: Vec<Node>,
}

impl DeductionBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, formula: Formula, rule: Rule, premises: Vec<NodeId>) -> NodeId {
        self.nodes.push(Node {
            formula,
            rule,
            premises,
        });
        self.nodes.len() - 1
    }

    pub fn formula(&self, id: NodeId) -> &Formula {
        &self.nodes[id].formula
    }

    pub fn leaf(&mut self, formula: Formula) -> NodeId {
        self.push(formula, Rule::Leaf, Vec::new())
    }

    /// `→I` discharging `discharged` over `premise`.
    pub fn imp_intro(&mut self, discharged: Formula, premise: NodeId) -> NodeId {
        let conclusion = Formula::imp(discharged.clone(), self.nodes[premise].formula.clone());
        self.push(conclusion, Rule::ImpIntro { discharged }, vec![premise])
    }

    /// `→E` from `minor` and `major`.
    ///
    /// # Panics
    /// If the major premise is not an implication.
    pub fn imp_elim(&mut self, minor: NodeId, major: NodeId) -> NodeId {
        let conclusion = match &self.nodes[major].formula {
            Formula::Imp(_, b) => (**b).clone(),
            other => panic!("major premise {other} is not an implication"),
        };
        self.push(conclusion, Rule::ImpElim, vec![minor, major])
    }

    pub fn rep(&mut self, premise: NodeId) -> NodeId {
        let formula = self.nodes[premise].formula.clone();
        self.push(formula, Rule::Rep, vec![premise])
    }

    pub fn sep(&mut self, premises: Vec<NodeId>) -> NodeId {
        let formula = self.nodes[premises[0]].formula.clone();
        self.push(formula, Rule::Sep, premises)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn build(self, root: NodeId) -> Result<Deduction, DeductionError> {
        Deduction::new(self.nodes, root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn levels_are_depths_in_trees() {
        let mut b = DeductionBuilder::new();
        let p = b.leaf(f("p"));
        let pq = b.leaf(f("p->q"));
        let q = b.imp_elim(p, pq);
        let root = b.imp_intro(f("p"), q);
        let d = b.build(root).unwrap();
        assert_eq!(d.level(root), 0);
        assert_eq!(d.level(q), 1);
        assert_eq!(d.level(p), 2);
        assert_eq!(d.height(), 2);
        assert!(d.is_tree_like());
        assert!(d.is_leveled());
    }

    #[test]
    fn shared_nodes_make_dags() {
        let mut b = DeductionBuilder::new();
        let p = b.leaf(f("p"));
        let pp = b.leaf(f("p->p"));
        let e = b.imp_elim(p, pp);
        let r = b.rep(p);
        let sep = b.push(f("p"), Rule::Sep, vec![e, r]);
        let d = b.build(sep).unwrap();
        assert!(!d.is_tree_like());
        assert!(d.has_sep());
        assert_eq!(d.level(p), 2);
    }

    #[test]
    fn rejects_cycles_and_dangling_ids() {
        let leaf = |premises| Node {
            formula: f("p"),
            rule: Rule::Rep,
            premises,
        };
        assert_eq!(
            Deduction::new(vec![leaf(vec![1]), leaf(vec![0])], 0),
            Err(DeductionError::Cycle { node: 0 })
        );
        assert_eq!(
            Deduction::new(vec![leaf(vec![3])], 0),
            Err(DeductionError::DanglingPremise { node: 0, premise: 3 })
        );
        assert!(matches!(
            Deduction::new(vec![leaf(vec![])], 2),
            Err(DeductionError::BadRoot { .. })
        ));
        assert_eq!(
            Deduction::with_levels(vec![leaf(vec![1]), leaf(vec![])], 0, vec![1, 1]),
            Err(DeductionError::LevelOrder { node: 0, premise: 1 })
        );
    }

    #[test]
    fn dot_export_mentions_every_node() {
        let mut b = DeductionBuilder::new();
        let p = b.leaf(f("p"));
        let root = b.imp_intro(f("p"), p);
        let d = b.build(root).unwrap();
        let dot = d.to_dot("id");
        assert!(dot.contains("n0 [label=\"p\\nleaf\"]"));
        assert!(dot.contains("n1 [label=\"p -> p\\nimpI[p]\"]"));
        assert!(dot.contains("n0 -> n1;"));
        assert!(dot.contains("rank=same"));
    }
}
