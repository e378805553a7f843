//! Simple undirected graphs on dense `0..n` vertex ids, plus the standard
//! families and the Erdős–Rényi generator used as test corpora.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A simple undirected graph. Neighbor lists are sorted and duplicate free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    edge_count: usize,
}

/// Result of [`build_graph`]: the graph plus every input pair that
/// duplicated an earlier one (in input order, as given).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphBuild {
    pub graph: Graph,
    pub duplicates: Vec<(Vertex, Vertex)>,
}

/// An edge `{from, to}` read in one direction. `(a, b)` and `(b, a)` are
/// distinct ordered edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedEdge {
    pub from: Vertex,
    pub to: Vertex,
}

impl OrderedEdge {
    pub const fn new(from: Vertex, to: Vertex) -> Self {
        Self { from, to }
    }

    pub const fn reversed(self) -> Self {
        Self { from: self.to, to: self.from }
    }
}

impl fmt::Display for OrderedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.from, self.to)
    }
}

/// Builds a graph on `n` vertices. Duplicate pairs are collapsed and
/// reported; out-of-range endpoints and self-loops are rejected.
pub fn build_graph<I>(n: usize, edges: I) -> Result<GraphBuild>
where
    I: IntoIterator<Item = (Vertex, Vertex)>,
{
    let mut adjacency = vec![Vec::new(); n];
    for (u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::EndpointOutOfRange { u, v, n });
        }
        if u == v {
            return Err(Error::SelfLoop { v });
        }
        adjacency[u].push(v);
        adjacency[v].push(u);
    }

    let mut duplicates = Vec::new();
    for (u, list) in adjacency.iter_mut().enumerate() {
        list.sort_unstable();
        let before = list.len();
        let mut i = 1;
        while i < list.len() {
            if list[i] == list[i - 1] {
                // record each duplicate once, from its smaller endpoint
                if u < list[i] {
                    duplicates.push((u, list[i]));
                }
                list.remove(i);
            } else {
                i += 1;
            }
        }
        debug_assert!(list.len() <= before);
    }

    let graph = Graph::from_sorted_adjacency(adjacency);
    Ok(GraphBuild { graph, duplicates })
}

impl Graph {
    fn from_sorted_adjacency(adjacency: Vec<Vec<Vertex>>) -> Self {
        let degree_sum: usize = adjacency.iter().map(Vec::len).sum();
        let graph = Self { adjacency, edge_count: degree_sum / 2 };
        debug_assert!(graph.is_well_formed());
        graph
    }

    /// Graph on `n` vertices without edges.
    pub fn empty(n: usize) -> Self {
        Self { adjacency: vec![Vec::new(); n], edge_count: 0 }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v < self.vertex_count()
    }

    /// Undirected edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Both orientations of every edge, sorted by `(from, to)`.
    pub fn ordered_edges(&self) -> impl Iterator<Item = OrderedEdge> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| OrderedEdge::new(u, v)))
    }

    /// Symmetric, loop free, sorted and duplicate free adjacency.
    pub fn is_well_formed(&self) -> bool {
        let n = self.vertex_count();
        let mut degree_sum = 0;
        for (u, list) in self.adjacency.iter().enumerate() {
            degree_sum += list.len();
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &v in list {
                if v >= n || v == u || self.adjacency[v].binary_search(&u).is_err() {
                    return false;
                }
            }
        }
        degree_sum == 2 * self.edge_count
    }

    /// True iff no three vertices are pairwise adjacent.
    pub fn is_triangle_free(&self) -> bool {
        self.edges().all(|(u, v)| !sorted_intersect(&self.adjacency[u], &self.adjacency[v]))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("m", &self.edge_count)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

fn sorted_intersect(a: &[Vertex], b: &[Vertex]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => return true,
        }
    }
    false
}

pub fn is_triangle_free(g: &Graph) -> bool {
    g.is_triangle_free()
}

/// Named graph families.
///
/// Labeling: `Path(k)` is `0-1-..-(k-1)`; `Cycle(k)` adds `{k-1, 0}`;
/// `CompleteBipartite(a, b)` puts `0..a` on the left and `a..a+b` on the
/// right; `Star(k)` has center `0` and leaves `1..=k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    Star(usize),
}

impl Family {
    pub fn labeling(&self) -> &'static str {
        match self {
            Family::Path(_) => "path: vertices 0..k in order, edges {i, i+1}",
            Family::Cycle(_) => "cycle: vertices 0..k in order, edges {i, i+1 mod k}",
            Family::Complete(_) => "complete: vertices 0..k, all pairs",
            Family::CompleteBipartite(..) => "complete_bipartite: left 0..a, right a..a+b",
            Family::Star(_) => "star: center 0, leaves 1..=k",
        }
    }

    pub fn generate(&self) -> Result<Graph> {
        generate_named(*self)
    }
}

pub fn generate_named(family: Family) -> Result<Graph> {
    let (n, edges): (usize, Vec<(Vertex, Vertex)>) = match family {
        Family::Path(k) => {
            if k < 1 {
                return Err(Error::InvalidSize("path requires >= 1 vertex"));
            }
            (k, (1..k).map(|i| (i - 1, i)).collect())
        }
        Family::Cycle(k) => {
            if k < 3 {
                return Err(Error::InvalidSize("cycle requires ≥ 3 vertices"));
            }
            (k, (0..k).map(|i| (i, (i + 1) % k)).collect())
        }
        Family::Complete(k) => {
            if k < 1 {
                return Err(Error::InvalidSize("complete requires >= 1 vertex"));
            }
            (k, (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))).collect())
        }
        Family::CompleteBipartite(a, b) => {
            if a < 1 || b < 1 {
                return Err(Error::InvalidSize("complete_bipartite requires both sides >= 1"));
            }
            (a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect())
        }
        Family::Star(k) => {
            if k < 1 {
                return Err(Error::InvalidSize("star requires >= 1 leaf"));
            }
            (k + 1, (1..=k).map(|leaf| (0, leaf)).collect())
        }
    };
    Ok(build_graph(n, edges)?.graph)
}

/// G(n, p): pairs `(u, v)`, `u < v`, are visited in lexicographic order and
/// each is kept when a ChaCha8 draw (seeded from `seed`) in `[0, 1)` falls
/// below `p`.
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let x: f64 = rng.random();
            if x < p {
                edges.push((u, v));
            }
        }
    }
    Ok(build_graph(n, edges)?.graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_small_graphs() {
        let k2 = build_graph(2, [(0, 1)]).unwrap();
        assert_eq!(k2.graph.edge_count(), 1);
        assert!(k2.duplicates.is_empty());

        let k3 = build_graph(3, [(0, 1), (1, 2), (0, 2)]).unwrap().graph;
        assert_eq!(k3.edge_count(), 3);
        assert_eq!(k3.neighbors(1), &[0, 2]);

        let single = build_graph(1, []).unwrap().graph;
        assert_eq!(single.vertex_count(), 1);
        assert_eq!(single.edge_count(), 0);
    }

    #[test]
    fn build_reports_duplicates() {
        let built = build_graph(2, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(built.graph.edge_count(), 1);
        assert_eq!(built.duplicates, vec![(0, 1), (0, 1)]);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            build_graph(2, [(0, 2)]).unwrap_err(),
            Error::EndpointOutOfRange { u: 0, v: 2, n: 2 }
        );
        assert_eq!(build_graph(3, [(1, 1)]).unwrap_err(), Error::SelfLoop { v: 1 });
    }

    #[test]
    fn named_families() {
        let p3 = generate_named(Family::Path(3)).unwrap();
        assert_eq!(p3.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(generate_named(Family::Complete(3)).unwrap().edge_count(), 3);

        let k22 = generate_named(Family::CompleteBipartite(2, 2)).unwrap();
        let c4 = generate_named(Family::Cycle(4)).unwrap();
        assert_eq!(k22.edge_count(), 4);
        // 0-2-1-3-0 relabels K_{2,2} onto C4
        let relabel = [0, 2, 1, 3];
        for (u, v) in k22.edges() {
            assert!(c4.has_edge(relabel[u], relabel[v]));
        }

        let star = generate_named(Family::Star(5)).unwrap();
        assert_eq!((star.vertex_count(), star.edge_count()), (6, 5));
        assert_eq!(star.max_degree(), 5);

        assert!(generate_named(Family::Cycle(2)).is_err());
        assert!(generate_named(Family::Path(0)).is_err());
        assert!(generate_named(Family::CompleteBipartite(0, 3)).is_err());
    }

    #[test]
    fn er_extremes_and_determinism() {
        assert_eq!(generate_er(10, 0.0, 99).unwrap().edge_count(), 0);
        assert_eq!(generate_er(5, 1.0, 1).unwrap().edge_count(), 10);
        assert_eq!(generate_er(100, 0.1, 7).unwrap(), generate_er(100, 0.1, 7).unwrap());
        assert_ne!(generate_er(100, 0.1, 7).unwrap(), generate_er(100, 0.1, 8).unwrap());
        assert_eq!(generate_er(3, 1.5, 0).unwrap_err(), Error::InvalidProbability(1.5));
        assert!(generate_er(3, -0.1, 0).is_err());

        // frozen, so pinned seeds keep naming the same graph
        let g = generate_er(8, 0.5, 1).unwrap();
        let expected = [
            (0, 1), (0, 2), (0, 4), (0, 5), (0, 7), (1, 2), (1, 5), (1, 7), (2, 3), (2, 4),
            (2, 5), (3, 5), (3, 6), (3, 7), (4, 5), (4, 6), (4, 7), (5, 6), (6, 7),
        ];
        assert_eq!(g.edges().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn triangle_detection() {
        assert!(generate_named(Family::Path(3)).unwrap().is_triangle_free());
        assert!(!generate_named(Family::Complete(3)).unwrap().is_triangle_free());
        assert!(generate_named(Family::CompleteBipartite(3, 3)).unwrap().is_triangle_free());
        assert!(generate_named(Family::Cycle(5)).unwrap().is_triangle_free());
    }

    #[test]
    fn ordered_edges_cover_both_orientations() {
        let p3 = generate_named(Family::Path(3)).unwrap();
        let ordered: Vec<_> = p3.ordered_edges().collect();
        assert_eq!(
            ordered,
            vec![
                OrderedEdge::new(0, 1),
                OrderedEdge::new(1, 0),
                OrderedEdge::new(1, 2),
                OrderedEdge::new(2, 1)
            ]
        );
    }
}
