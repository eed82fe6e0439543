use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::nd::{maximal_threads, thread_is_closed, Deduction, NodeId, Rule, SemanticsError};

use super::levels::{LevelCompression, Separation};
use super::CompressError;

pub const DEFAULT_THREAD_CAP: usize = 1_000_000;

/// A set of maximal threads over a dag, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreadSet {
    threads: Vec<Vec<NodeId>>,
    /// For each thread, the first tree thread mapped onto it, if any.
    origin: Vec<Option<Vec<NodeId>>>,
}

impl ThreadSet {
    pub fn new(threads: impl IntoIterator<Item = Vec<NodeId>>) -> ThreadSet {
        let mut threads: Vec<Vec<NodeId>> = threads.into_iter().collect();
        threads.sort();
        threads.dedup();
        let origin = vec![None; threads.len()];
        ThreadSet { threads, origin }
    }

    pub fn threads(&self) -> &[Vec<NodeId>] {
        &self.threads
    }

    pub fn origin(&self, i: usize) -> Option<&[NodeId]> {
        self.origin[i].as_deref()
    }

    pub fn len(&self) -> usize {
        self.threads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.threads.is_empty()
    }
}

/// Images in `∂♭` of all maximal threads of the source tree.
pub fn extract_fst(
    t: &Deduction,
    lc: &LevelCompression,
    sep: &Separation,
    cap: usize,
) -> Result<ThreadSet, CompressError> {
    if !crate::nd::proves_threads(t) {
        return Err(CompressError::NotProof);
    }
    let tree_threads = maximal_threads(t, cap).map_err(|e| match e {
        SemanticsError::ThreadCap { cap } => CompressError::ThreadCap { cap },
        other => unreachable!("thread enumeration only fails on the cap: {other}"),
    })?;
    let mut images: BTreeMap<Vec<NodeId>, Vec<NodeId>> = BTreeMap::new();
    for thread in tree_threads {
        let image: Vec<NodeId> = thread.iter().flat_map(|&u| sep.path_of(lc, u)).collect();
        images.entry(image).or_insert(thread);
    }
    let (threads, origin) = images.into_iter().map(|(k, v)| (k, Some(v))).unzip();
    Ok(ThreadSet { threads, origin })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoherencyViolation {
    /// The node lies on no thread.
    NotDense { node: NodeId },
    /// The thread does not run from the root along premises to a leaf.
    NotMaximal { thread: usize },
    /// The thread's leaf formula is not discharged on the thread.
    Open { thread: usize },
    /// Thread `thread` passes `node` into one premise, but no thread with
    /// the same prefix up to `node` continues into premise `child`.
    Unpreserved { thread: usize, node: NodeId, child: NodeId },
}

impl fmt::Display for CoherencyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoherencyViolation::NotDense { node } => write!(f, "node {node} lies on no thread"),
            CoherencyViolation::NotMaximal { thread } => write!(f, "thread {thread} is not maximal"),
            CoherencyViolation::Open { thread } => write!(f, "thread {thread} is open"),
            CoherencyViolation::Unpreserved { thread, node, child } => write!(
                f,
                "thread {thread} branches at node {node} but no thread with its prefix enters {child}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoherencyReport {
    pub violations: Vec<CoherencyViolation>,
}

impl CoherencyReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check density, closedness, and preservation of `→E` branching: for every
/// thread through a non-separation node `u` with distinct premises, each
/// other premise `w` of `u` is entered by some thread sharing the prefix up
/// to `u`.
pub fn verify_local_coherency(d: &Deduction, f: &ThreadSet) -> CoherencyReport {
    let mut violations = Vec::new();
    let mut covered = vec![false; d.len()];
    // Prefix trie: (parent trie node, dag node) → trie node; the empty
    // prefix is trie node 0.
    let mut trie: HashMap<(usize, NodeId), usize> = HashMap::new();
    let mut maximal = vec![false; f.len()];
    for (i, thread) in f.threads().iter().enumerate() {
        maximal[i] = thread.first() == Some(&d.root())
            && thread.windows(2).all(|w| d.node(w[0]).premises.contains(&w[1]))
            && thread.last().is_some_and(|&l| d.node(l).premises.is_empty());
        if !maximal[i] {
            violations.push(CoherencyViolation::NotMaximal { thread: i });
            continue;
        }
        if !thread_is_closed(d, thread) {
            violations.push(CoherencyViolation::Open { thread: i });
        }
        let mut at = 0;
        for &u in thread {
            covered[u] = true;
            let fresh = trie.len() + 1;
            at = *trie.entry((at, u)).or_insert(fresh);
        }
    }
    for (node, _) in covered.iter().enumerate().filter(|(_, &c)| !c) {
        violations.push(CoherencyViolation::NotDense { node });
    }
    for (i, thread) in f.threads().iter().enumerate() {
        if !maximal[i] {
            continue;
        }
        let mut at = 0;
        for (pos, &u) in thread.iter().enumerate() {
            at = trie[&(at, u)];
            let node = d.node(u);
            if node.rule == Rule::Sep || pos + 1 == thread.len() {
                continue;
            }
            let next = thread[pos + 1];
            for &w in &node.premises {
                if w != next && !trie.contains_key(&(at, w)) {
                    violations.push(CoherencyViolation::Unpreserved { thread: i, node: u, child: w });
                }
            }
        }
    }
    CoherencyReport { violations }
}
