//! Immutable undirected graphs and the general-graph-model query oracle.
//!
//! A [`Graph`] is stored in compressed sparse row form. Every neighbor list is
//! strictly ascending, which pins down the answer to "the i-th neighbor of v".
//! Algorithms never touch a [`Graph`] directly: they go through an
//! [`Oracle`], which counts every degree, neighbor and pair query.

mod io;
mod oracle;

pub use io::{load_graph, parse_graph, save_graph, write_graph};
pub use oracle::{GraphParams, Oracle, QueryLedger};

use crate::error::{Error, Result};

/// Vertex ids are `0..n`.
pub type Vertex = usize;

/// An undirected edge stored with `u < v`.
pub type Edge = (Vertex, Vertex);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Edges may be given in either
    /// orientation; self-loops, repeated edges and out-of-range ids are
    /// rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut normalized = Vec::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_unique(n, &normalized))
    }

    /// `edges` must be sorted, deduplicated, loop-free and in range.
    fn from_sorted_unique(n: usize, edges: &[Edge]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * edges.len()];
        // With edges sorted by (u, v), vertex x first receives its smaller
        // neighbors (from edges (a, x)) in ascending order, then its larger
        // ones (from edges (x, b)), so every list comes out sorted.
        for &(u, v) in edges {
            targets[cursor[u]] = v;
            cursor[u] += 1;
            targets[cursor[v]] = u;
            cursor[v] += 1;
        }
        Self { offsets, targets }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Neighbors of `v`, strictly ascending.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Average degree `2m/n`.
    pub fn avg_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            2.0 * self.m() as f64 / self.n() as f64
        }
    }

    /// Edge density `m/n`, half of [`Graph::avg_degree`].
    pub fn edge_density(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            self.m() as f64 / self.n() as f64
        }
    }

    pub fn non_isolated_count(&self) -> usize {
        self.vertices().filter(|&v| self.degree(v) > 0).count()
    }

    /// Disjoint union: `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let edges: Vec<Edge> = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + shift, v + shift)))
            .collect();
        Graph::from_sorted_unique(shift + other.n(), &edges)
    }

    /// The same graph with `extra` isolated vertices appended.
    pub fn with_isolated(&self, extra: usize) -> Graph {
        let mut offsets = self.offsets.clone();
        let last = *offsets.last().unwrap();
        offsets.extend(std::iter::repeat_n(last, extra));
        Graph {
            offsets,
            targets: self.targets.clone(),
        }
    }

    /// Keeps the edges for which `keep` returns true.
    pub fn filter_edges(&self, mut keep: impl FnMut(Vertex, Vertex) -> bool) -> Graph {
        let edges: Vec<Edge> = self.edges().filter(|&(u, v)| keep(u, v)).collect();
        Graph::from_sorted_unique(self.n(), &edges)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).unwrap()
    }

    /// Star `K_{1,k}` with center 0.
    pub fn star(k: usize) -> Graph {
        Graph::from_edges(k + 1, (1..=k).map(|leaf| (0, leaf))).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_self_loop_and_duplicates() {
        assert!(matches!(Graph::from_edges(3, [(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(matches!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn basic_shapes() {
        let k3 = triangle();
        assert_eq!((k3.n(), k3.m()), (3, 3));
        assert_eq!(k3.neighbors(2), &[0, 1]);
        let s = star(5);
        assert_eq!(s.degree(0), 5);
        assert_eq!(s.max_degree(), 5);
        assert!((s.avg_degree() - 10.0 / 6.0).abs() < 1e-12);
        assert!((s.edge_density() - 5.0 / 6.0).abs() < 1e-12);
        assert_eq!(Graph::empty(4).m(), 0);
    }

    #[test]
    fn union_and_padding() {
        let g = triangle().disjoint_union(&path(3));
        assert_eq!((g.n(), g.m()), (6, 5));
        assert!(g.has_edge(3, 4) && g.has_edge(4, 5) && !g.has_edge(3, 5));
        let p = triangle().with_isolated(7);
        assert_eq!((p.n(), p.m()), (10, 3));
        assert_eq!(p.degree(9), 0);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..24).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..80).prop_map(move |pairs| {
                let mut set: Vec<Edge> = pairs
                    .into_iter()
                    .filter(|(a, b)| a != b)
                    .map(|(a, b)| (a.min(b), a.max(b)))
                    .collect();
                set.sort_unstable();
                set.dedup();
                Graph::from_edges(n, set).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn adjacency_invariants(g in arb_graph()) {
            let mut degree_sum = 0;
            for v in g.vertices() {
                let nb = g.neighbors(v);
                prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(!nb.contains(&v));
                for &u in nb {
                    prop_assert!(g.neighbors(u).contains(&v));
                }
                degree_sum += nb.len();
            }
            prop_assert_eq!(degree_sum, 2 * g.m());
            prop_assert_eq!(g.edges().count(), g.m());
        }
    }
}
