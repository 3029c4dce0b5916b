use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use super::{Cursor, PerSymbolWeights, Symbol, Word, WordLanguage};
use crate::{Error, Limits, Result};

pub type NodeId = usize;

const NO_CURSOR: Cursor = Cursor::MAX;

/// The cylinders `[s]`, `s in L^n`, `0 <= n <= D`, as a rooted tree.
///
/// Nodes are stored level by level in lexicographic order, so children of a
/// node occupy a contiguous index range and a level's range lists its words
/// in order. Node `0` is the root (the empty word). Cumulative weights of any
/// number of potentials are stored per node.
#[derive(Clone, Debug)]
pub struct CylinderTree {
    depth: usize,
    parent: Vec<u32>,
    symbol: Vec<Symbol>,
    cursor: Vec<Cursor>,
    node_depth: Vec<u16>,
    children: Vec<(u32, u32)>,
    level_start: Vec<usize>,
    weights: Vec<Vec<f64>>,
}

/// Builds the cylinder tree to depth `depth`, accumulating each potential in
/// `potentials` along every path.
pub fn build_cylinder_tree(
    lang: &WordLanguage,
    depth: usize,
    potentials: &[&PerSymbolWeights],
    limits: &Limits,
) -> Result<CylinderTree> {
    if depth > u16::MAX as usize {
        return Err(Error::InvalidParameter("tree depth too large".into()));
    }
    for w in potentials {
        w.check_language(lang)?;
    }
    let total: f64 = (0..=depth).map(|n| lang.count_words(n)).sum();
    limits.check_nodes(total)?;

    let cap = total as usize;
    let a = lang.automaton();
    let mut t = CylinderTree {
        depth,
        parent: Vec::with_capacity(cap),
        symbol: Vec::with_capacity(cap),
        cursor: Vec::with_capacity(cap),
        node_depth: Vec::with_capacity(cap),
        children: Vec::with_capacity(cap),
        level_start: vec![0, 1],
        weights: potentials.iter().map(|_| Vec::with_capacity(cap)).collect(),
    };
    t.parent.push(u32::MAX);
    t.symbol.push(0);
    t.cursor.push(NO_CURSOR);
    t.node_depth.push(0);
    for w in &mut t.weights {
        w.push(0.0);
    }

    for n in 0..depth {
        let level = t.level_start[n]..t.level_start[n + 1];
        for id in level {
            let out = if n == 0 {
                a.initial()
            } else {
                a.edges(t.cursor[id])
            };
            let first = t.parent.len() as u32;
            for &(s, c) in out {
                t.parent.push(id as u32);
                t.symbol.push(s);
                t.cursor.push(c);
                t.node_depth.push((n + 1) as u16);
                for (k, w) in potentials.iter().enumerate() {
                    let v = t.weights[k][id] + w.get(s);
                    t.weights[k].push(v);
                }
            }
            t.children.push((first, t.parent.len() as u32));
        }
        t.level_start.push(t.parent.len());
    }
    let leaves = t.level_start[depth]..t.level_start[depth + 1];
    for _ in leaves {
        let end = t.parent.len() as u32;
        t.children.push((end, end));
    }
    Ok(t)
}

impl CylinderTree {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    /// Node indices of the cylinders of length `n`.
    pub fn level(&self, n: usize) -> Range<NodeId> {
        self.level_start[n]..self.level_start[n + 1]
    }

    pub fn children(&self, id: NodeId) -> Range<NodeId> {
        let (a, b) = self.children[id];
        a as usize..b as usize
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.children(id).is_empty()
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        (id != 0).then(|| self.parent[id] as usize)
    }

    pub fn node_depth(&self, id: NodeId) -> usize {
        self.node_depth[id] as usize
    }

    /// Last symbol of the node's word; `None` for the root.
    pub fn symbol(&self, id: NodeId) -> Option<Symbol> {
        (id != 0).then(|| self.symbol[id])
    }

    /// Automaton cursor after the node's word; `None` for the root.
    pub fn cursor(&self, id: NodeId) -> Option<Cursor> {
        (id != 0).then(|| self.cursor[id])
    }

    pub fn word(&self, id: NodeId) -> Word {
        let mut v = Vec::with_capacity(self.node_depth(id));
        let mut cur = id;
        while cur != 0 {
            v.push(self.symbol[cur]);
            cur = self.parent[cur] as usize;
        }
        v.reverse();
        Word(v)
    }

    /// Cumulative weight of potential `k` along the node's word.
    #[inline]
    pub fn weight(&self, id: NodeId, k: usize) -> f64 {
        self.weights[k][id]
    }

    pub fn num_potentials(&self) -> usize {
        self.weights.len()
    }

    /// Node of a word of length at most `depth`, if admissible.
    pub fn find(&self, word: &[Symbol]) -> Option<NodeId> {
        if word.len() > self.depth {
            return None;
        }
        let mut id = 0;
        for &s in word {
            let r = self.children(id);
            let syms = &self.symbol[r.clone()];
            let k = syms.binary_search(&s).ok()?;
            id = r.start + k;
        }
        Some(id)
    }
}
