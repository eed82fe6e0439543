use std::collections::HashMap;

use crate::formula::Formula;
use crate::nd::{Deduction, Node, NodeId, Rule};

use super::CompressError;

/// One way a merged node is inferred: a rule over merged premises, with the
/// tree nodes that share it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub rule: Rule,
    pub premises: Vec<NodeId>,
    pub sources: Vec<NodeId>,
}

/// Result of merging a tree level by level.
#[derive(Debug, Clone)]
pub struct LevelCompression {
    /// `∂′`. A node with several shapes carries the first shape's rule over
    /// the union of all premises and is in general locally incorrect.
    pub prime: Deduction,
    /// Tree node → merged node.
    pub image: Vec<NodeId>,
    /// Tree node → index of its shape in `shapes[image]`.
    pub shape_of: Vec<usize>,
    /// Merged node → its distinct shapes in order of first occurrence.
    pub shapes: Vec<Vec<Shape>>,
}

fn depths(t: &Deduction) -> Vec<usize> {
    let mut depth = vec![0; t.len()];
    let mut stack = vec![t.root()];
    while let Some(id) = stack.pop() {
        for &p in &t.node(id).premises {
            depth[p] = depth[id] + 1;
            stack.push(p);
        }
    }
    depth
}

/// Merge all nodes carrying the same formula at the same depth.
pub fn compress_levels(t: &Deduction) -> Result<LevelCompression, CompressError> {
    if !t.is_tree_like() {
        return Err(CompressError::NotTree);
    }
    if let Some(node) = t.nodes().iter().position(|n| n.rule == Rule::Sep) {
        return Err(CompressError::SepPresent { node });
    }
    let depth = depths(t);
    let mut order: Vec<NodeId> = (0..t.len()).collect();
    order.sort_by_key(|&id| (depth[id], id));

    let mut index: HashMap<(usize, &Formula), NodeId> = HashMap::new();
    let mut image = vec![0; t.len()];
    let mut formulas: Vec<Formula> = Vec::new();
    let mut levels: Vec<usize> = Vec::new();
    for &id in &order {
        let f = &t.node(id).formula;
        image[id] = *index.entry((depth[id], f)).or_insert_with(|| {
            formulas.push(f.clone());
            levels.push(depth[id]);
            formulas.len() - 1
        });
    }

    let mut shapes: Vec<Vec<Shape>> = vec![Vec::new(); formulas.len()];
    let mut shape_of = vec![0; t.len()];
    for &id in &order {
        let node = t.node(id);
        let premises: Vec<NodeId> = node.premises.iter().map(|&p| image[p]).collect();
        let list = &mut shapes[image[id]];
        let k = match list.iter().position(|s| s.rule == node.rule && s.premises == premises) {
            Some(k) => k,
            None => {
                list.push(Shape { rule: node.rule.clone(), premises, sources: Vec::new() });
                list.len() - 1
            }
        };
        list[k].sources.push(id);
        shape_of[id] = k;
    }

    let nodes = formulas
        .into_iter()
        .zip(&shapes)
        .map(|(formula, list)| {
            let mut premises: Vec<NodeId> = Vec::new();
            for s in list {
                for &p in &s.premises {
                    if !premises.contains(&p) {
                        premises.push(p);
                    }
                }
            }
            Node { formula, rule: list[0].rule.clone(), premises }
        })
        .collect();
    let prime = Deduction::with_levels(nodes, image[t.root()], levels)
        .expect("inherited edges go one level up");
    Ok(LevelCompression { prime, image, shape_of, shapes })
}

/// Placement of merged nodes in `∂♭`.
#[derive(Debug, Clone)]
pub struct Separation {
    pub flat: Deduction,
    /// Merged node → the `∂♭` node standing for it (a separation node when
    /// it has several shapes).
    pub top: Vec<NodeId>,
    /// Merged node → one materialized node per shape, empty when the merged
    /// node has a single shape.
    pub materialized: Vec<Vec<NodeId>>,
}

impl Separation {
    /// The `∂♭` nodes a tree node passes through, conclusion first.
    pub fn path_of(&self, lc: &LevelCompression, tree_node: NodeId) -> Vec<NodeId> {
        let x = lc.image[tree_node];
        let mut path = vec![self.top[x]];
        if let Some(&m) = self.materialized[x].get(lc.shape_of[tree_node]) {
            path.push(m);
        }
        path
    }
}

/// Replace every merged node with `k > 1` shapes by a separation node over
/// `k` materialized single-shape nodes. A merged node at level `n` goes to
/// level `2n` and its materialized nodes to `2n + 1`.
pub fn insert_separation(lc: &LevelCompression) -> Separation {
    let prime = &lc.prime;
    let mut top = vec![0; prime.len()];
    let mut materialized = vec![Vec::new(); prime.len()];
    let mut next = 0;
    for x in 0..prime.len() {
        top[x] = next;
        next += 1;
        if lc.shapes[x].len() > 1 {
            materialized[x] = (next..next + lc.shapes[x].len()).collect();
            next += lc.shapes[x].len();
        }
    }
    let mut nodes = Vec::with_capacity(next);
    let mut levels = Vec::with_capacity(next);
    for x in 0..prime.len() {
        let formula = &prime.node(x).formula;
        let level = prime.level(x);
        let realize = |s: &Shape| Node {
            formula: formula.clone(),
            rule: s.rule.clone(),
            premises: s.premises.iter().map(|&p| top[p]).collect(),
        };
        if materialized[x].is_empty() {
            nodes.push(realize(&lc.shapes[x][0]));
            levels.push(2 * level);
        } else {
            nodes.push(Node {
                formula: formula.clone(),
                rule: Rule::Sep,
                premises: materialized[x].clone(),
            });
            levels.push(2 * level);
            for s in &lc.shapes[x] {
                nodes.push(realize(s));
                levels.push(2 * level + 1);
            }
        }
    }
    let flat = Deduction::with_levels(nodes, top[prime.root()], levels)
        .expect("premises sit two levels up");
    Separation { flat, top, materialized }
}
