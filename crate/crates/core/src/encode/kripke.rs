use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::formula::Formula;

use super::EncodeError;

pub const MAX_WORLDS: usize = 7;

/// A rooted finite partial order; world 0 is the root and `up[w]` is the
/// bitmask of worlds above or equal to `w`.
#[derive(Debug, Clone)]
struct Frame {
    worlds: usize,
    up: Vec<u32>,
}

impl Frame {
    /// Up-closed world sets in ascending bitmask order.
    fn up_sets(&self) -> Vec<u32> {
        (0..1u32 << self.worlds)
            .filter(|&s| (0..self.worlds).all(|w| s & (1 << w) == 0 || s & self.up[w] == self.up[w]))
            .collect()
    }

    fn relation_code(&self, perm: &[usize]) -> u64 {
        let mut code = 0u64;
        for (i, j) in (0..self.worlds).cartesian_product(0..self.worlds) {
            if self.up[i] & (1 << j) != 0 {
                code |= 1 << (perm[i] * self.worlds + perm[j]);
            }
        }
        code
    }

    fn canonical_code(&self) -> u64 {
        (1..self.worlds)
            .permutations(self.worlds - 1)
            .map(|rest| {
                let mut perm = vec![0];
                perm.extend(rest);
                self.relation_code(&perm)
            })
            .min()
            .unwrap_or(0)
    }
}

/// All rooted partial orders on exactly `k` worlds up to isomorphism, each
/// numbered so that numbering extends the order. Each new world picks a down-closed set of earlier
/// worlds containing the root as its strict predecessors.
fn generate_frames(k: usize) -> Vec<Frame> {
    let mut frames = vec![Frame { worlds: 1, up: vec![1] }];
    for j in 1..k {
        let mut next = Vec::new();
        for frame in &frames {
            // Strict down-sets of earlier worlds, as bitmasks.
            let down: Vec<u32> = (0..j)
                .map(|w| (0..j).filter(|&v| frame.up[v] & (1 << w) != 0).fold(0, |m, v| m | 1 << v))
                .collect();
            for preds in 1..(1u32 << j) {
                if preds & 1 == 0 {
                    continue;
                }
                let closed = (0..j).all(|w| preds & (1 << w) == 0 || preds & down[w] == down[w]);
                if !closed {
                    continue;
                }
                let mut up = frame.up.clone();
                for (w, u) in up.iter_mut().enumerate() {
                    if preds & (1 << w) != 0 {
                        *u |= 1 << j;
                    }
                }
                up.push(1 << j);
                next.push(Frame { worlds: j + 1, up });
            }
        }
        frames = next;
    }
    let mut seen = HashSet::new();
    frames.retain(|f| seen.insert(f.canonical_code()));
    frames
}

fn frames(k: usize) -> &'static [Frame] {
    static CACHE: [OnceLock<Vec<Frame>>; MAX_WORLDS + 1] = [const { OnceLock::new() }; MAX_WORLDS + 1];
    CACHE[k].get_or_init(|| generate_frames(k))
}

/// Worlds forcing `f`, as a bitmask. `false` is forced nowhere.
fn forcing(f: &Formula, frame: &Frame, val: &BTreeMap<Arc<str>, u32>) -> u32 {
    match f {
        Formula::Var(v) => val[v],
        Formula::Falsum => 0,
        Formula::And(a, b) => forcing(a, frame, val) & forcing(b, frame, val),
        Formula::Or(a, b) => forcing(a, frame, val) | forcing(b, frame, val),
        Formula::Imp(a, b) => {
            let bad = forcing(a, frame, val) & !forcing(b, frame, val);
            (0..frame.worlds)
                .filter(|&w| frame.up[w] & bad == 0)
                .fold(0, |m, w| m | 1 << w)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: usize,
    /// Strict order pairs `(i, j)` with `i < j` in the order.
    order: BTreeSet<(usize, usize)>,
    valuation: Vec<BTreeSet<Arc<str>>>,
}

impl KripkeModel {
    fn from_frame(frame: &Frame, val: &BTreeMap<Arc<str>, u32>) -> KripkeModel {
        let order = (0..frame.worlds)
            .cartesian_product(0..frame.worlds)
            .filter(|&(i, j)| i != j && frame.up[i] & (1 << j) != 0)
            .collect();
        let valuation = (0..frame.worlds)
            .map(|w| {
                val.iter()
                    .filter(|(_, &m)| m & (1 << w) != 0)
                    .map(|(v, _)| v.clone())
                    .collect()
            })
            .collect();
        KripkeModel { worlds: frame.worlds, order, valuation }
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn order(&self) -> &BTreeSet<(usize, usize)> {
        &self.order
    }

    pub fn true_at(&self, world: usize) -> &BTreeSet<Arc<str>> {
        &self.valuation[world]
    }

    pub fn le(&self, u: usize, v: usize) -> bool {
        u == v || self.order.contains(&(u, v))
    }

    pub fn is_persistent(&self) -> bool {
        self.order
            .iter()
            .all(|&(u, v)| self.valuation[u].is_subset(&self.valuation[v]))
    }

    /// Direct forcing relation, independent of the bitmask search.
    pub fn forces(&self, world: usize, f: &Formula) -> bool {
        match f {
            Formula::Var(v) => self.valuation[world].contains(v),
            Formula::Falsum => false,
            Formula::And(a, b) => self.forces(world, a) && self.forces(world, b),
            Formula::Or(a, b) => self.forces(world, a) || self.forces(world, b),
            Formula::Imp(a, b) => (0..self.worlds)
                .filter(|&v| self.le(world, v))
                .all(|v| !self.forces(v, a) || self.forces(v, b)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    worlds: usize,
    order: Vec<[usize; 2]>,
    valuation: BTreeMap<String, Vec<String>>,
}

impl Serialize for KripkeModel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ModelDocument {
            worlds: self.worlds,
            order: self.order.iter().map(|&(i, j)| [i, j]).collect(),
            valuation: self
                .valuation
                .iter()
                .enumerate()
                .map(|(w, vs)| (format!("w{w}"), vs.iter().map(|v| v.to_string()).collect()))
                .collect(),
        }
        .serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KripkeVerdict {
    /// No countermodel with at most this many worlds. Not a validity proof.
    NoCountermodel { max_worlds: usize },
    Countermodel(KripkeModel),
}

impl KripkeVerdict {
    pub fn countermodel(&self) -> Option<&KripkeModel> {
        match self {
            KripkeVerdict::Countermodel(m) => Some(m),
            KripkeVerdict::NoCountermodel { .. } => None,
        }
    }
}

/// Search rooted frames by increasing size and monotone valuations over the
/// variables of `f` for a model whose root does not force `f`.
pub fn kripke_valid(f: &Formula, max_worlds: usize) -> Result<KripkeVerdict, EncodeError> {
    if max_worlds > MAX_WORLDS {
        return Err(EncodeError::TooManyWorlds { requested: max_worlds, bound: MAX_WORLDS });
    }
    let vars: Vec<Arc<str>> = f.variables().into_iter().collect();
    for k in 1..=max_worlds {
        for frame in frames(k) {
            let ups = frame.up_sets();
            let choices = vars.iter().map(|_| ups.iter().copied()).multi_cartesian_product();
            // multi_cartesian_product yields nothing for zero variables.
            let assignments: Box<dyn Iterator<Item = Vec<u32>>> = if vars.is_empty() {
                Box::new(std::iter::once(Vec::new()))
            } else {
                Box::new(choices)
            };
            for masks in assignments {
                let val: BTreeMap<Arc<str>, u32> = vars.iter().cloned().zip(masks).collect();
                if forcing(f, frame, &val) & 1 == 0 {
                    let model = KripkeModel::from_frame(frame, &val);
                    debug_assert!(model.is_persistent());
                    return Ok(KripkeVerdict::Countermodel(model));
                }
            }
        }
    }
    Ok(KripkeVerdict::NoCountermodel { max_worlds })
}
