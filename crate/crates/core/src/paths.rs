//! Query paths, dangerous paths and the potential
//! `phi_t(a, b) = |Q_t(a, b)| + |D_t(a, b)| / 2` over a partially revealed
//! ordering.
//!
//! A [`FiltrationState`] holds only the revealed prefix of the ordering and
//! the independent set built on it, so every classification here is a
//! function of the revealed randomness alone. The exhaustive
//! [`dangerous_probability_oracle`] is the one place that looks at
//! completions, and it enumerates all of them.

use alloc::vec;
use alloc::vec::Vec;

use crate::engines::RankedGraph;
use crate::error::{Error, Result};
use crate::graph::{Graph, OrderedEdge, Vertex};
use crate::ranks::{factorial, for_each_permutation, RankAssignment};
use crate::Rational;

/// Default limit on `n - t` for the completion oracle.
pub const DEFAULT_COMPLETION_BOUND: usize = 9;

/// Graphs up to this size use explicit path listing in [`CountMode::Auto`].
pub const LISTING_VERTEX_LIMIT: usize = 10;

/// The revealed prefix `(v_1, ..., v_t)` of an ordering and the greedy
/// independent set `I_t` built on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiltrationState<'g> {
    graph: &'g Graph,
    revealed: Vec<Vertex>,
    // 0 = not yet revealed
    rank: Vec<usize>,
    in_mis: Vec<bool>,
}

impl<'g> FiltrationState<'g> {
    /// The state at time 0.
    pub fn initial(graph: &'g Graph) -> Self {
        let n = graph.vertex_count();
        Self { graph, revealed: Vec::with_capacity(n), rank: vec![0; n], in_mis: vec![false; n] }
    }

    /// Reveals the first `t` vertices of `prefix` in order.
    pub fn from_prefix(graph: &'g Graph, prefix: &[Vertex]) -> Result<Self> {
        let mut state = Self::initial(graph);
        for &v in prefix {
            state.reveal(v)?;
        }
        Ok(state)
    }

    /// Reveals `v` as the next vertex, producing the state at time `t + 1`.
    pub fn extend(&self, v: Vertex) -> Result<Self> {
        let mut next = self.clone();
        next.reveal(v)?;
        Ok(next)
    }

    fn reveal(&mut self, v: Vertex) -> Result<()> {
        let n = self.graph.vertex_count();
        if v >= n {
            return Err(Error::UnknownVertex { v, n });
        }
        if self.rank[v] != 0 {
            return Err(Error::AlreadyRevealed { v });
        }
        self.revealed.push(v);
        self.rank[v] = self.revealed.len();
        self.in_mis[v] = !self.graph.neighbors(v).iter().any(|&w| self.in_mis[w]);
        Ok(())
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn time(&self) -> usize {
        self.revealed.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn is_complete(&self) -> bool {
        self.time() == self.vertex_count()
    }

    pub fn revealed(&self) -> &[Vertex] {
        &self.revealed
    }

    pub fn rank(&self, v: Vertex) -> Option<usize> {
        match self.rank[v] {
            0 => None,
            r => Some(r),
        }
    }

    pub fn is_revealed(&self, v: Vertex) -> bool {
        self.rank[v] != 0
    }

    /// Membership in `I_t`.
    pub fn in_mis(&self, v: Vertex) -> bool {
        self.in_mis[v]
    }

    pub fn independent_set(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.revealed.iter().copied().filter(|&v| self.in_mis[v])
    }

    pub fn unrevealed(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).filter(|&v| self.rank[v] == 0)
    }

    /// The pair condition of a query path: `x` revealed, `x` ranked below
    /// `y` (an unrevealed `y` ranks above every revealed vertex), and no
    /// neighbor of `y` ranked below `x` is in `I_t`.
    fn query_step(&self, x: Vertex, y: Vertex) -> bool {
        let rx = self.rank[x];
        if rx == 0 {
            return false;
        }
        let ry = self.rank[y];
        if ry != 0 && ry <= rx {
            return false;
        }
        !self.graph.neighbors(y).iter().any(|&w| self.in_mis[w] && self.rank[w] < rx)
    }

    /// The tail condition of a dangerous path ending `(u_k, z)`: both
    /// unrevealed and no revealed neighbor of `z` in `I_t`.
    fn dangerous_step(&self, u: Vertex, z: Vertex) -> bool {
        self.rank[u] == 0 && self.rank[z] == 0 && !self.graph.neighbors(z).iter().any(|&w| self.in_mis[w])
    }

    /// A vertex with no revealed neighbor in `I_t`.
    fn unblocked(&self, w: Vertex) -> bool {
        !self.graph.neighbors(w).iter().any(|&v| self.in_mis[v])
    }
}

/// The state after the first `t` vertices of `ranks` are revealed.
pub fn filtration<'g>(g: &'g Graph, ranks: &RankAssignment, t: usize) -> Result<FiltrationState<'g>> {
    let n = g.vertex_count();
    if ranks.len() != n {
        return Err(Error::RankMismatch { expected: n, found: ranks.len() });
    }
    if t > n {
        return Err(Error::InvalidTime { t, n });
    }
    FiltrationState::from_prefix(g, &ranks.order()[..t])
}

/// A walk `(u_1, ..., u_k)`, `k >= 2`, with consecutive vertices adjacent.
/// Simplicity is not required by construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexPath(Vec<Vertex>);

impl VertexPath {
    pub fn new(g: &Graph, vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::PathTooShort { len: vertices.len() });
        }
        let n = g.vertex_count();
        if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
            return Err(Error::UnknownVertex { v, n });
        }
        if let Some(w) = vertices.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(Error::NotAdjacent { u: w[0], v: w[1] });
        }
        Ok(Self(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first_edge(&self) -> OrderedEdge {
        OrderedEdge::new(self.0[0], self.0[1])
    }

    pub fn last(&self) -> Vertex {
        self.0[self.0.len() - 1]
    }

    pub fn is_simple(&self) -> bool {
        let mut seen: Vec<Vertex> = self.0.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// The path with `w` appended. The caller guarantees adjacency.
    fn pushed(&self, w: Vertex) -> Self {
        let mut v = self.0.clone();
        v.push(w);
        Self(v)
    }

    fn without_last(&self) -> &[Vertex] {
        &self.0[..self.0.len() - 1]
    }
}

fn check_path(state: &FiltrationState<'_>, p: &VertexPath) -> Result<()> {
    if p.len() < 2 {
        return Err(Error::PathTooShort { len: p.len() });
    }
    let g = state.graph();
    let n = g.vertex_count();
    if let Some(&v) = p.0.iter().find(|&&v| v >= n) {
        return Err(Error::UnknownVertex { v, n });
    }
    if let Some(w) = p.0.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
        return Err(Error::NotAdjacent { u: w[0], v: w[1] });
    }
    Ok(())
}

fn query_prefix_holds(state: &FiltrationState<'_>, vertices: &[Vertex]) -> bool {
    vertices.windows(2).all(|w| state.query_step(w[0], w[1]))
}

pub fn is_query_path(state: &FiltrationState<'_>, p: &VertexPath) -> Result<bool> {
    check_path(state, p)?;
    Ok(query_prefix_holds(state, p.vertices()))
}

/// `(u_1, .., u_k, z)` is dangerous at `t` iff (for `k >= 2`) the prefix is
/// a query path, `u_k` and `z` are unrevealed, and no revealed neighbor of
/// `z` is in `I_t`.
pub fn is_dangerous_path(state: &FiltrationState<'_>, p: &VertexPath) -> Result<bool> {
    check_path(state, p)?;
    let head = p.without_last();
    let u = head[head.len() - 1];
    Ok(query_prefix_holds(state, head) && state.dangerous_step(u, p.last()))
}

/// Exact probability, over all orderings of the unrevealed vertices, that
/// `p` is a query path once everything is revealed.
pub fn dangerous_probability_oracle(state: &FiltrationState<'_>, p: &VertexPath) -> Result<Rational> {
    Ok(completion_probabilities(state, core::slice::from_ref(p), DEFAULT_COMPLETION_BOUND)?.remove(0))
}

/// Batch form of [`dangerous_probability_oracle`]: every completion is run
/// once through the early-break engine and all paths are scored against
/// its query edges.
pub fn completion_probabilities(
    state: &FiltrationState<'_>,
    paths: &[VertexPath],
    bound: usize,
) -> Result<Vec<Rational>> {
    for p in paths {
        check_path(state, p)?;
    }
    let g = state.graph();
    let n = g.vertex_count();
    let hidden: Vec<Vertex> = state.unrevealed().collect();
    if hidden.len() > bound {
        return Err(Error::CompletionSpaceTooLarge { unrevealed: hidden.len(), bound });
    }
    let total = factorial(hidden.len()).expect("bounded completion count");
    let mut hits = vec![0u128; paths.len()];
    let mut order: Vec<Vertex> = Vec::with_capacity(n);
    let mut is_query = vec![false; n * n];
    for_each_permutation(&hidden, |tail| {
        order.clear();
        order.extend_from_slice(state.revealed());
        order.extend_from_slice(tail);
        let ranks = RankAssignment::from_order(order.clone()).expect("completion is a bijection");
        let rg = RankedGraph::new(g, &ranks).expect("sizes match");
        let (_, trace) = rg.early_break_run();
        is_query.iter_mut().for_each(|b| *b = false);
        for (v, list) in trace.queried.iter().enumerate() {
            for &w in list {
                is_query[w * n + v] = true;
            }
        }
        for (hit, p) in hits.iter_mut().zip(paths) {
            if p.vertices().windows(2).all(|w| is_query[w[0] * n + w[1]]) {
                *hit += 1;
            }
        }
    });
    Ok(hits.into_iter().map(|h| Rational::new(h as i128, total as i128)).collect())
}

/// How path sets are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CountMode {
    /// Listing for graphs with at most [`LISTING_VERTEX_LIMIT`] vertices,
    /// the DAG recurrence beyond.
    #[default]
    Auto,
    Listing,
    Recurrence,
}

/// Explicitly listed paths. `non_simple` collects any path that passed
/// the conditions while revisiting a vertex; it is expected to stay empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathListing {
    pub paths: Vec<VertexPath>,
    pub non_simple: Vec<VertexPath>,
}

/// All query paths beginning with `e`, by depth-first extension.
pub fn enumerate_query_paths(state: &FiltrationState<'_>, e: OrderedEdge) -> PathListing {
    let mut listing = PathListing::default();
    let g = state.graph();
    if !g.has_edge(e.from, e.to) || !state.query_step(e.from, e.to) {
        return listing;
    }
    let mut stack = vec![VertexPath(vec![e.from, e.to])];
    while let Some(p) = stack.pop() {
        let last = p.last();
        for &y in g.neighbors(last) {
            if state.query_step(last, y) {
                let longer = p.pushed(y);
                if p.0.contains(&y) {
                    listing.non_simple.push(longer);
                } else {
                    stack.push(longer);
                }
            }
        }
        listing.paths.push(p);
    }
    listing.paths.sort();
    listing
}

/// All dangerous paths beginning with `e`: the bare edge when it
/// qualifies, plus one-vertex extensions of the query paths beginning
/// with `e`.
pub fn enumerate_dangerous_paths(state: &FiltrationState<'_>, e: OrderedEdge) -> PathListing {
    let mut listing = PathListing::default();
    let g = state.graph();
    if !g.has_edge(e.from, e.to) {
        return listing;
    }
    if state.dangerous_step(e.from, e.to) {
        listing.paths.push(VertexPath(vec![e.from, e.to]));
    }
    for p in enumerate_query_paths(state, e).paths {
        let last = p.last();
        for &z in g.neighbors(last) {
            if state.dangerous_step(last, z) {
                let longer = p.pushed(z);
                if p.0.contains(&z) {
                    listing.non_simple.push(longer);
                } else {
                    listing.paths.push(longer);
                }
            }
        }
    }
    listing.paths.sort();
    listing
}

/// `|Q_t(e)|` and `|D_t(e)|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PathCounts {
    pub query: u64,
    pub dangerous: u64,
}

impl PathCounts {
    pub fn potential(&self) -> Rational {
        Rational::from_integer(self.query as i128) + Rational::new(self.dangerous as i128, 2)
    }
}

/// Per-vertex tables of the DAG recurrence for one state.
///
/// The query relation `x -> y` (`query_step`) only leaves revealed vertices
/// and strictly raises rank, so it is acyclic. `reach[v]` counts query
/// walks starting at `v` (the trivial one included) and `danger[v]` counts
/// dangerous one-vertex extensions summed over those walks.
#[derive(Clone, Debug)]
pub struct PathTables {
    reach: Vec<u64>,
    danger: Vec<u64>,
}

impl PathTables {
    pub fn new(state: &FiltrationState<'_>) -> Self {
        let g = state.graph();
        let n = g.vertex_count();
        let mut reach = vec![1u64; n];
        let mut danger = vec![0u64; n];
        for y in state.unrevealed() {
            danger[y] = g.neighbors(y).iter().filter(|&&z| state.dangerous_step(y, z)).count() as u64;
        }
        for &x in state.revealed().iter().rev() {
            let (mut r, mut d) = (1u64, 0u64);
            for &y in g.neighbors(x) {
                if state.query_step(x, y) {
                    r += reach[y];
                    d += danger[y];
                }
            }
            reach[x] = r;
            danger[x] = d;
        }
        Self { reach, danger }
    }

    pub fn counts(&self, state: &FiltrationState<'_>, e: OrderedEdge) -> PathCounts {
        if !state.graph().has_edge(e.from, e.to) {
            return PathCounts::default();
        }
        let mut counts = PathCounts::default();
        if state.query_step(e.from, e.to) {
            counts.query = self.reach[e.to];
            counts.dangerous = self.danger[e.to];
        }
        if state.dangerous_step(e.from, e.to) {
            counts.dangerous += 1;
        }
        counts
    }
}

pub fn path_counts(state: &FiltrationState<'_>, e: OrderedEdge, mode: CountMode) -> PathCounts {
    let listing = match mode {
        CountMode::Listing => true,
        CountMode::Recurrence => false,
        CountMode::Auto => state.vertex_count() <= LISTING_VERTEX_LIMIT,
    };
    if listing {
        PathCounts {
            query: enumerate_query_paths(state, e).paths.len() as u64,
            dangerous: enumerate_dangerous_paths(state, e).paths.len() as u64,
        }
    } else {
        PathTables::new(state).counts(state, e)
    }
}

/// Counts for every ordered edge of the graph, in `Graph::ordered_edges`
/// order, via the recurrence.
pub fn all_path_counts(state: &FiltrationState<'_>) -> Vec<PathCounts> {
    let tables = PathTables::new(state);
    state.graph().ordered_edges().map(|e| tables.counts(state, e)).collect()
}

/// Number of query paths ending at each vertex: `e(v) = sum over query
/// steps w -> v of (1 + e(w))`.
pub fn query_paths_ending_at(state: &FiltrationState<'_>) -> Vec<u64> {
    let g = state.graph();
    let mut ending = vec![0u64; g.vertex_count()];
    for &x in state.revealed() {
        for &y in g.neighbors(x) {
            if state.query_step(x, y) {
                ending[y] += 1 + ending[x];
            }
        }
    }
    ending
}

pub fn potential(state: &FiltrationState<'_>, e: OrderedEdge) -> Rational {
    path_counts(state, e, CountMode::Auto).potential()
}

fn require_future(state: &FiltrationState<'_>) -> Result<()> {
    if state.is_complete() {
        return Err(Error::InvalidTime { t: state.time(), n: state.vertex_count() });
    }
    Ok(())
}

/// States at time `t + 1`, one per unrevealed vertex, each of weight
/// `1 / (n - t)`.
pub fn successors<'g>(state: &FiltrationState<'g>) -> Vec<FiltrationState<'g>> {
    state.unrevealed().map(|v| state.extend(v).expect("unrevealed vertex")).collect()
}

/// `E[phi_{t+1}(e) | F_t]`, averaging over the next revealed vertex.
pub fn one_step_expectation(state: &FiltrationState<'_>, e: OrderedEdge) -> Result<Rational> {
    require_future(state)?;
    let next = successors(state);
    let sum: Rational = next.iter().map(|s| potential(s, e)).sum();
    Ok(sum / Rational::from_integer(next.len() as i128))
}

/// Returns `(E[|Q_{t+1}(e)| - |Q_t(e)| | F_t], |D_t(e)| / (n - t))`.
pub fn query_increment_check(state: &FiltrationState<'_>, e: OrderedEdge) -> Result<(Rational, Rational)> {
    require_future(state)?;
    let now = path_counts(state, e, CountMode::Auto);
    let next = successors(state);
    let width = Rational::from_integer(next.len() as i128);
    let gained: i128 = next
        .iter()
        .map(|s| path_counts(s, e, CountMode::Auto).query as i128 - now.query as i128)
        .sum();
    Ok((Rational::from_integer(gained) / width, Rational::from_integer(now.dangerous as i128) / width))
}

fn require_dangerous(state: &FiltrationState<'_>, r: &VertexPath) -> Result<()> {
    if is_dangerous_path(state, r)? {
        Ok(())
    } else {
        Err(Error::NotDangerous)
    }
}

/// Neighbors `w != u_k` of the endpoint `z` of a dangerous path that are
/// unrevealed and have no revealed neighbor in `I_t`.
pub fn extension_set(state: &FiltrationState<'_>, r: &VertexPath) -> Result<Vec<Vertex>> {
    require_dangerous(state, r)?;
    let z = r.last();
    let u = r.without_last()[r.len() - 2];
    Ok(state
        .graph()
        .neighbors(z)
        .iter()
        .copied()
        .filter(|&w| w != u && !state.is_revealed(w) && state.unblocked(w))
        .collect())
}

/// Net change in dangerous paths attributable to a dangerous `r` at the
/// next step: dangerous one-vertex extensions at `t + 1`, minus one if `r`
/// stops being dangerous.
pub fn delta_r(next: &FiltrationState<'_>, r: &VertexPath) -> i128 {
    let z = r.last();
    let extensions = next
        .graph()
        .neighbors(z)
        .iter()
        .filter(|&&w| !r.vertices().contains(&w))
        .filter(|&&w| is_dangerous_path(next, &r.pushed(w)).expect("adjacent extension"))
        .count() as i128;
    let ceased = !is_dangerous_path(next, r).expect("valid path");
    extensions - i128::from(ceased)
}

/// `E[delta_R | F_t]` for a dangerous `r`, exact over the `n - t` choices
/// of the next revealed vertex.
pub fn delta_r_expectation(state: &FiltrationState<'_>, r: &VertexPath) -> Result<Rational> {
    require_future(state)?;
    require_dangerous(state, r)?;
    let next = successors(state);
    let sum: i128 = next.iter().map(|s| delta_r(s, r)).sum();
    Ok(Rational::new(sum, next.len() as i128))
}

/// `|Q_t|`, `|D_t|` and `phi_t` for one ordered edge at one time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub query: u64,
    pub dangerous: u64,
    pub phi: Rational,
}

/// Path counts for every ordered edge at every time `0..=n` along one
/// ordering. `entries[t][i]` belongs to the `i`-th edge of `edges`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialLedger {
    pub edges: Vec<OrderedEdge>,
    pub entries: Vec<Vec<LedgerEntry>>,
}

impl PotentialLedger {
    pub fn build(g: &Graph, ranks: &RankAssignment) -> Result<Self> {
        let n = g.vertex_count();
        let edges: Vec<OrderedEdge> = g.ordered_edges().collect();
        let mut entries = Vec::with_capacity(n + 1);
        let mut state = filtration(g, ranks, 0)?;
        for t in 0..=n {
            entries.push(
                all_path_counts(&state)
                    .into_iter()
                    .map(|c| LedgerEntry { query: c.query, dangerous: c.dangerous, phi: c.potential() })
                    .collect(),
            );
            if t < n {
                state = state.extend(ranks.vertex_at(t + 1))?;
            }
        }
        Ok(Self { edges, entries })
    }
}
