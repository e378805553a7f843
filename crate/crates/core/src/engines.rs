//! The randomized greedy MIS family: the plain sequential greedy, the
//! recursive membership oracle with early break, and its bottom-up
//! sequential form that marks query edges.
//!
//! All three engines go through [`RankedGraph`], which sorts each vertex's
//! lower-ranked neighbors once so every variant sees the same ordering.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::ranks::RankAssignment;

/// A vertex subset stored as a membership mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndependentSet {
    mask: Vec<bool>,
}

impl IndependentSet {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        Self { mask }
    }

    pub fn from_members(n: usize, members: &[Vertex]) -> Self {
        let mut mask = vec![false; n];
        for &v in members {
            mask[v] = true;
        }
        Self { mask }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    pub fn members(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v)
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }
}

/// Query edges of one full run plus per-vertex recursive call counts.
///
/// `queried[v]` lists the `w` with `(w, v)` a query edge, in increasing
/// rank of `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryTrace {
    pub queried: Vec<Vec<Vertex>>,
    pub call_count: Vec<u64>,
}

impl QueryTrace {
    /// Query edges `(w, v)` in rank(v)-major order.
    pub fn query_edges<'a>(&'a self, ranks: &'a RankAssignment) -> impl Iterator<Item = (Vertex, Vertex)> + 'a {
        ranks
            .order()
            .iter()
            .flat_map(move |&v| self.queried[v].iter().map(move |&w| (w, v)))
    }

    pub fn query_edge_count(&self) -> usize {
        self.queried.iter().map(Vec::len).sum()
    }

    pub fn is_query_edge(&self, w: Vertex, v: Vertex) -> bool {
        self.queried[v].contains(&w)
    }
}

/// Outcome of one top-level recursive membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub in_mis: bool,
    pub recursive_calls: u64,
    /// `(caller, callee)` in execution order.
    pub call_log: Vec<(Vertex, Vertex)>,
}

/// A graph together with a full rank assignment.
#[derive(Clone, Debug)]
pub struct RankedGraph<'a> {
    graph: &'a Graph,
    ranks: &'a RankAssignment,
    lower: Vec<Vec<Vertex>>,
}

impl<'a> RankedGraph<'a> {
    pub fn new(graph: &'a Graph, ranks: &'a RankAssignment) -> Result<Self> {
        if ranks.len() != graph.vertex_count() {
            return Err(Error::RankMismatch { expected: graph.vertex_count(), found: ranks.len() });
        }
        let lower = (0..graph.vertex_count())
            .map(|v| {
                let rv = ranks.rank(v);
                let mut below: Vec<Vertex> =
                    graph.neighbors(v).iter().copied().filter(|&w| ranks.rank(w) < rv).collect();
                below.sort_unstable_by_key(|&w| ranks.rank(w));
                below
            })
            .collect();
        Ok(Self { graph, ranks, lower })
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    pub fn ranks(&self) -> &'a RankAssignment {
        self.ranks
    }

    /// Neighbors of `v` with smaller rank, in increasing rank.
    pub fn lower_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.lower[v]
    }

    /// Processes vertices in rank order and keeps a vertex iff none of its
    /// neighbors was kept. The neighbor check is order independent.
    pub fn sequential_greedy(&self) -> IndependentSet {
        let mut mask = vec![false; self.graph.vertex_count()];
        for &v in self.ranks.order() {
            if !self.graph.neighbors(v).iter().any(|&w| mask[w]) {
                mask[v] = true;
            }
        }
        IndependentSet { mask }
    }

    /// Bottom-up early-break run. During iteration `rank(v)` the lower
    /// neighbors of `v` are examined in rank order until the first one
    /// already in the set; every examined `w` yields query edge `(w, v)`.
    pub fn early_break_run(&self) -> (IndependentSet, QueryTrace) {
        let n = self.graph.vertex_count();
        let mut mask = vec![false; n];
        let mut queried = vec![Vec::new(); n];
        for &v in self.ranks.order() {
            let mut blocked = false;
            for &w in &self.lower[v] {
                queried[v].push(w);
                if mask[w] {
                    blocked = true;
                    break;
                }
            }
            mask[v] = !blocked;
        }
        let call_count = dp_counts(&queried, self.ranks.order());
        (IndependentSet { mask }, QueryTrace { queried, call_count })
    }

    /// Recursive membership oracle for `v`, executed on an explicit stack.
    /// Every invocation below the top level is counted, repeats included.
    pub fn recursive_membership(&self, v: Vertex) -> Result<Membership> {
        let mut call_log = Vec::new();
        let (in_mis, recursive_calls) = self.walk(v, |caller, callee| call_log.push((caller, callee)))?;
        Ok(Membership { in_mis, recursive_calls, call_log })
    }

    /// Same as [`Self::recursive_membership`] without recording the log.
    pub fn recursive_count(&self, v: Vertex) -> Result<(bool, u64)> {
        self.walk(v, |_, _| {})
    }

    /// Counts how often each ordered pair `(callee, caller)` is directly
    /// invoked during the top-level query from `v`, added into `counts`,
    /// which is indexed by `callee * n + caller`.
    pub fn tally_direct_invocations(&self, v: Vertex, counts: &mut [u64]) -> Result<()> {
        let n = self.graph.vertex_count();
        self.walk(v, |caller, callee| counts[callee * n + caller] += 1)?;
        Ok(())
    }

    fn walk<F: FnMut(Vertex, Vertex)>(&self, root: Vertex, mut on_call: F) -> Result<(bool, u64)> {
        if !self.graph.contains_vertex(root) {
            return Err(Error::UnknownVertex { v: root, n: self.graph.vertex_count() });
        }
        // (vertex, index of the next lower neighbor to try)
        let mut stack: Vec<(Vertex, usize)> = vec![(root, 0)];
        let mut calls = 0u64;
        let mut returned: Option<bool> = None;
        loop {
            let top = stack.len() - 1;
            if let Some(child_in) = returned.take() {
                if child_in {
                    stack.pop();
                    if stack.is_empty() {
                        return Ok((false, calls));
                    }
                    returned = Some(false);
                    continue;
                }
                stack[top].1 += 1;
            }
            let (v, next) = stack[top];
            match self.lower[v].get(next) {
                Some(&w) => {
                    on_call(v, w);
                    calls += 1;
                    stack.push((w, 0));
                }
                None => {
                    stack.pop();
                    if stack.is_empty() {
                        return Ok((true, calls));
                    }
                    returned = Some(true);
                }
            }
        }
    }

    /// Checks the shape of a trace: each `queried[v]` is the rank-ordered
    /// prefix of the lower neighbors of `v` that ends at the first member
    /// of `mis` (or covers all of them). Returns the first offending vertex.
    pub fn check_trace_shape(&self, mis: &IndependentSet, trace: &QueryTrace) -> Option<Vertex> {
        (0..self.graph.vertex_count()).find(|&v| {
            let lower = &self.lower[v];
            let expected_len = lower.iter().position(|&w| mis.contains(w)).map_or(lower.len(), |i| i + 1);
            trace.queried[v].as_slice() != &lower[..expected_len]
        })
    }
}

fn dp_counts(queried: &[Vec<Vertex>], order: &[Vertex]) -> Vec<u64> {
    let mut count = vec![0u64; queried.len()];
    for &v in order {
        count[v] = queried[v].iter().map(|&w| 1 + count[w]).sum();
    }
    count
}

pub fn sequential_greedy(g: &Graph, ranks: &RankAssignment) -> Result<IndependentSet> {
    Ok(RankedGraph::new(g, ranks)?.sequential_greedy())
}

pub fn recursive_membership(g: &Graph, ranks: &RankAssignment, v: Vertex) -> Result<Membership> {
    RankedGraph::new(g, ranks)?.recursive_membership(v)
}

pub fn early_break_run(g: &Graph, ranks: &RankAssignment) -> Result<(IndependentSet, QueryTrace)> {
    Ok(RankedGraph::new(g, ranks)?.early_break_run())
}

/// `c(v) = sum over query edges (w, v) of (1 + c(w))`, evaluated in
/// increasing rank; equals the number of query paths ending at `v`.
pub fn call_counts_via_dp(g: &Graph, ranks: &RankAssignment, trace: &QueryTrace) -> Result<Vec<u64>> {
    let n = g.vertex_count();
    if ranks.len() != n {
        return Err(Error::RankMismatch { expected: n, found: ranks.len() });
    }
    if trace.queried.len() != n {
        return Err(Error::InconsistentTrace { vertex: n, reason: "trace covers a different vertex count" });
    }
    for (v, list) in trace.queried.iter().enumerate() {
        for &w in list {
            if !g.has_edge(w, v) {
                return Err(Error::InconsistentTrace { vertex: v, reason: "query edge is not a graph edge" });
            }
            if ranks.rank(w) >= ranks.rank(v) {
                return Err(Error::InconsistentTrace { vertex: v, reason: "queried vertex does not rank lower" });
            }
        }
    }
    Ok(dp_counts(&trace.queried, ranks.order()))
}

/// Independent and maximal.
pub fn verify_mis(g: &Graph, s: &IndependentSet) -> bool {
    (0..g.vertex_count()).all(|v| {
        let blocked = g.neighbors(v).iter().any(|&w| s.contains(w));
        if s.contains(v) {
            !blocked
        } else {
            blocked
        }
    })
}
