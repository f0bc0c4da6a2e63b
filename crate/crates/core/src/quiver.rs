//! The underlying quiver of an exchange matrix and its block structure.
//!
//! The quiver has vertices `1..=n` and an arrow `i -> j` of weight `b_ij`
//! whenever `b_ij > 0`. Vertices are 1-based throughout this module.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::ExchangeMatrix;
use crate::matrix::{Entry, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub weight: Entry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverGraph {
    vertex_count: usize,
    arrows: Vec<Arrow>,
}

/// Connectivity of the underlying undirected graph and acyclicity of the
/// quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverClass {
    pub connected: bool,
    pub acyclic: bool,
}

impl QuiverGraph {
    /// Arrows at the positive entries of a square matrix, in row-major order.
    pub fn from_matrix(b: &IntMatrix) -> Self {
        let n = b.rows();
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..b.cols() {
                if b[(i, j)] > 0 {
                    arrows.push(Arrow {
                        source: i + 1,
                        target: j + 1,
                        weight: b[(i, j)],
                    });
                }
            }
        }
        Self {
            vertex_count: n,
            arrows,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    fn out_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for a in &self.arrows {
            adj[a.source - 1].push(a.target - 1);
        }
        adj
    }

    fn in_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for a in &self.arrows {
            adj[a.target - 1].push(a.source - 1);
        }
        adj
    }

    fn check_vertex(&self, a: usize) -> Result<()> {
        if a == 0 || a > self.vertex_count {
            Err(Error::IndexOutOfRange {
                index: a,
                max: self.vertex_count,
            })
        } else {
            Ok(())
        }
    }

    /// Vertices reachable from `a` by a directed path, including `a`.
    pub fn successors(&self, a: usize) -> Result<BTreeSet<usize>> {
        self.check_vertex(a)?;
        Ok(reach(&self.out_adjacency(), a - 1))
    }

    /// Vertices with a directed path to `a`, including `a`.
    pub fn predecessors(&self, a: usize) -> Result<BTreeSet<usize>> {
        self.check_vertex(a)?;
        Ok(reach(&self.in_adjacency(), a - 1))
    }

    /// `(predecessors, successors)` of `a`.
    pub fn reachability_sets(&self, a: usize) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
        Ok((self.predecessors(a)?, self.successors(a)?))
    }

    pub fn classify(&self) -> QuiverClass {
        let n = self.vertex_count;
        let connected = n == 0 || {
            let mut undirected = self.out_adjacency();
            for a in &self.arrows {
                undirected[a.target - 1].push(a.source - 1);
            }
            reach(&undirected, 0).len() == n
        };
        let acyclic = self
            .strongly_connected_components()
            .iter()
            .all(|c| c.len() == 1)
            && self.arrows.iter().all(|a| a.source != a.target);
        QuiverClass { connected, acyclic }
    }

    /// Strongly connected components in topological order of the
    /// condensation, sources first. Incomparable components are ordered by
    /// their smallest vertex. Each component is sorted ascending.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let (comp_of, comps) = tarjan(&self.out_adjacency());
        let order = condensation_order(&comp_of, &comps, &self.arrows, false);
        order.into_iter().map(|c| comps[c].clone()).collect()
    }

    /// Component index (into [`Self::strongly_connected_components`]) of
    /// each vertex, 0-based by vertex.
    fn component_ids(&self) -> Vec<usize> {
        let comps = self.strongly_connected_components();
        let mut ids = vec![0; self.vertex_count];
        for (c, comp) in comps.iter().enumerate() {
            for &v in comp {
                ids[v - 1] = c;
            }
        }
        ids
    }

    /// Whether every arrow lies on an oriented cycle.
    pub fn every_arrow_on_cycle(&self) -> bool {
        let ids = self.component_ids();
        self.arrows
            .iter()
            .all(|a| ids[a.source - 1] == ids[a.target - 1])
    }
}

fn reach(adj: &[Vec<usize>], start: usize) -> BTreeSet<usize> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(v, _)| v + 1)
        .collect()
}

/// Iterative Tarjan. Returns the component id of every vertex (0-based) and
/// the components as sorted 1-based vertex lists.
fn tarjan(adj: &[Vec<usize>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp_of = vec![UNSEEN; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, position of the next child to visit)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*next) {
                *next += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = comps.len();
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp_of[w] = id;
                    comp.push(w + 1);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    (comp_of, comps)
}

/// Kahn's algorithm on the condensation with smallest-vertex tie-breaking.
/// With `sinks_first`, arrows are followed backwards.
fn condensation_order(
    comp_of: &[usize],
    comps: &[Vec<usize>],
    arrows: &[Arrow],
    sinks_first: bool,
) -> Vec<usize> {
    let c = comps.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); c];
    for a in arrows {
        let (mut s, mut t) = (comp_of[a.source - 1], comp_of[a.target - 1]);
        if sinks_first {
            std::mem::swap(&mut s, &mut t);
        }
        if s != t {
            succ[s].insert(t);
        }
    }
    let mut indegree = vec![0usize; c];
    for targets in &succ {
        for &t in targets {
            indegree[t] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<(usize, usize)>> = (0..c)
        .filter(|&x| indegree[x] == 0)
        .map(|x| Reverse((comps[x][0], x)))
        .collect();
    let mut order = Vec::with_capacity(c);
    while let Some(Reverse((_, x))) = ready.pop() {
        order.push(x);
        for &t in &succ[x] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push(Reverse((comps[t][0], t)));
            }
        }
    }
    order
}

pub fn underlying_quiver(b: &ExchangeMatrix) -> QuiverGraph {
    QuiverGraph::from_matrix(b.matrix())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IrreducibilityMethod {
    /// Search all row/column bipartitions for a nonnegative cross block.
    Definition,
    /// Connected, with every arrow on an oriented cycle.
    Cycle,
}

/// Largest size accepted by [`IrreducibilityMethod::Definition`].
pub const DEFINITION_METHOD_LIMIT: usize = 12;

/// A matrix of size `n >= 2` is reducible when some bipartition `I ⊔ J` of
/// its vertices makes the submatrix on rows `I`, columns `J` nonnegative.
///
/// A disconnected matrix is always reducible (take `I` to be one connected
/// component), so the cycle method also requires connectivity.
pub fn is_irreducible(b: &ExchangeMatrix, method: IrreducibilityMethod) -> Result<bool> {
    let n = b.n();
    match method {
        IrreducibilityMethod::Definition => {
            if n > DEFINITION_METHOD_LIMIT {
                return Err(Error::SizeLimit {
                    n,
                    limit: DEFINITION_METHOD_LIMIT,
                });
            }
            let m = b.matrix();
            let full = (1u32 << n) - 1;
            for rows in 1..full {
                let nonneg = (0..n).filter(|i| rows >> i & 1 == 1).all(|i| {
                    (0..n)
                        .filter(|j| rows >> j & 1 == 0)
                        .all(|j| m[(i, j)] >= 0)
                });
                if nonneg {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        IrreducibilityMethod::Cycle => {
            let q = underlying_quiver(b);
            Ok(q.classify().connected && q.every_arrow_on_cycle())
        }
    }
}

/// Ordered partition of the vertices into irreducible blocks.
///
/// `order[t]` is the original (1-based) vertex placed at position `t + 1`
/// after relabeling; the blocks appear consecutively in that order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub blocks: Vec<Vec<usize>>,
    pub order: Vec<usize>,
}

impl BlockDecomposition {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// `B` with rows and columns permuted by `order`.
    pub fn relabeled(&self, b: &ExchangeMatrix) -> Result<ExchangeMatrix> {
        b.relabel(&self.order)
    }

    /// Every entry below the block diagonal of the relabeled matrix is
    /// nonnegative, and every block is a single strongly connected piece.
    pub fn is_valid_for(&self, b: &ExchangeMatrix) -> bool {
        let n = b.n();
        let mut covered: Vec<usize> = self.blocks.concat();
        if covered != self.order {
            return false;
        }
        covered.sort_unstable();
        if covered != (1..=n).collect::<Vec<_>>() {
            return false;
        }
        let mut block_of = vec![0; n];
        for (t, block) in self.blocks.iter().enumerate() {
            for &v in block {
                block_of[v - 1] = t;
            }
        }
        let m = b.matrix();
        for i in 0..n {
            for j in 0..n {
                if block_of[i] > block_of[j] && m[(i, j)] < 0 {
                    return false;
                }
            }
        }
        self.blocks.iter().all(|block| {
            b.principal_submatrix(block)
                .map(|sub| underlying_quiver(&sub).every_arrow_on_cycle())
                .unwrap_or(false)
        })
    }
}

/// Splits `B` into the strongly connected components of its quiver, sinks
/// first, so that every arrow between blocks points from a later block to
/// an earlier one.
pub fn decompose(b: &ExchangeMatrix) -> BlockDecomposition {
    let q = underlying_quiver(b);
    let (comp_of, comps) = tarjan(&q.out_adjacency());
    let order = condensation_order(&comp_of, &comps, &q.arrows, true);
    let blocks: Vec<Vec<usize>> = order.into_iter().map(|c| comps[c].clone()).collect();
    BlockDecomposition {
        order: blocks.concat(),
        blocks,
    }
}
