use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::nd::{proves, proves_modified, Deduction, ModifiedVerdict, Node, NodeId, Rule};

use super::threads::{verify_local_coherency, ThreadSet};
use super::CompressError;

/// How the separation choices of a cleansed proof were found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CleanseRoute {
    /// Read off the thread set.
    Threads,
    /// The thread-guided choice left open assumptions; found by exhaustive
    /// search over separation choices instead.
    Search,
}

#[derive(Debug, Clone)]
pub struct Cleansed {
    pub star: Deduction,
    /// `∂*` node → `∂♭` node.
    pub kept: Vec<NodeId>,
    /// Separation node of `∂♭` → chosen premise index.
    pub choices: BTreeMap<NodeId, usize>,
    pub route: CleanseRoute,
}

/// Resolve every separation node to one premise and drop what becomes
/// unreachable; resolved separation nodes turn into repetitions.
pub fn cleanse(d: &Deduction, f: &ThreadSet) -> Result<Cleansed, CompressError> {
    let report = verify_local_coherency(d, f);
    if !report.is_ok() {
        return Err(CompressError::Incoherent { violations: report.violations.len() });
    }
    if let Some(choices) = thread_guided_choices(d, f) {
        let (star, kept) = restrict(d, &choices);
        if proves(&star).expect("separation-free") {
            return Ok(Cleansed { star, kept, choices, route: CleanseRoute::Threads });
        }
    }
    match proves_modified(d) {
        ModifiedVerdict::Proved { choices } => {
            let (star, kept) = restrict(d, &choices);
            debug_assert!(proves(&star).expect("separation-free"));
            Ok(Cleansed { star, kept, choices, route: CleanseRoute::Search })
        }
        ModifiedVerdict::NotProved => Err(CompressError::NoChoice),
    }
}

/// Visit separation nodes reachable under the choices made so far, lowest
/// level first. At each, follow the lexicographically least thread still
/// consistent with earlier choices and discard the threads leaving the node
/// elsewhere. Gives up if no consistent thread reaches a pending node.
fn thread_guided_choices(d: &Deduction, f: &ThreadSet) -> Option<BTreeMap<NodeId, usize>> {
    let order = d.top_down_order();
    let mut active = vec![true; f.len()];
    let mut choices = BTreeMap::new();
    loop {
        let reachable = reachable_under(d, &choices);
        let Some(s) = order
            .iter()
            .copied()
            .find(|&id| reachable[id] && d.node(id).rule == Rule::Sep && !choices.contains_key(&id))
        else {
            return Some(choices);
        };
        let successor = |t: &[NodeId]| t.iter().position(|&u| u == s).map(|i| t[i + 1]);
        let next = f
            .threads()
            .iter()
            .zip(&active)
            .filter(|(_, &a)| a)
            .find_map(|(t, _)| successor(t))?;
        let index = d.node(s).premises.iter().position(|&p| p == next)?;
        choices.insert(s, index);
        for (t, a) in f.threads().iter().zip(active.iter_mut()) {
            if *a && successor(t).is_some_and(|n| n != next) {
                *a = false;
            }
        }
    }
}

fn reachable_under(d: &Deduction, choices: &BTreeMap<NodeId, usize>) -> Vec<bool> {
    let mut seen = vec![false; d.len()];
    let mut stack = vec![d.root()];
    while let Some(id) = stack.pop() {
        if std::mem::replace(&mut seen[id], true) {
            continue;
        }
        let node = d.node(id);
        match (node.rule == Rule::Sep, choices.get(&id)) {
            (true, Some(&i)) => stack.push(node.premises[i]),
            (true, None) => {}
            (false, _) => stack.extend(node.premises.iter().copied()),
        }
    }
    seen
}

fn restrict(d: &Deduction, choices: &BTreeMap<NodeId, usize>) -> (Deduction, Vec<NodeId>) {
    let reachable = reachable_under(d, choices);
    let kept: Vec<NodeId> = (0..d.len()).filter(|&id| reachable[id]).collect();
    let mut renumber = vec![usize::MAX; d.len()];
    for (new, &old) in kept.iter().enumerate() {
        renumber[old] = new;
    }
    let nodes = kept
        .iter()
        .map(|&old| {
            let node = d.node(old);
            let (rule, premises) = match node.rule {
                Rule::Sep => (Rule::Rep, vec![node.premises[choices[&old]]]),
                _ => (node.rule.clone(), node.premises.clone()),
            };
            Node {
                formula: node.formula.clone(),
                rule,
                premises: premises.into_iter().map(|p| renumber[p]).collect(),
            }
        })
        .collect();
    let levels = kept.iter().map(|&old| d.level(old)).collect();
    let star = Deduction::with_levels(nodes, renumber[d.root()], levels)
        .expect("a sub-deduction keeps level order");
    (star, kept)
}
