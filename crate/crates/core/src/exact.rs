//! Brute-force ground truth: triangles, greedy edge-disjoint triangle
//! packing, degeneracy, small-graph arboricity, and the exact outcome
//! distribution of the edge sampler. These read the whole graph and are
//! meant for desk-scale instances.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::subgraph::Threshold;

/// Largest `n` accepted by [`exact_arboricity_small`].
pub const ARBORICITY_LIMIT: usize = 16;

/// All triangles `(a, b, c)` with `a < b < c`, in lexicographic order.
pub fn enumerate_triangles(graph: &Graph) -> Vec<[Vertex; 3]> {
    let mut out = Vec::new();
    for a in graph.vertices() {
        let na = graph.neighbors(a);
        for (i, &b) in na.iter().enumerate() {
            if b < a {
                continue;
            }
            let nb = graph.neighbors(b);
            // c ranges over N(a) ∩ N(b) above b
            let mut x = i + 1;
            let mut y = nb.partition_point(|&c| c <= b);
            while x < na.len() && y < nb.len() {
                match na[x].cmp(&nb[y]) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        out.push([a, b, na[x]]);
                        x += 1;
                        y += 1;
                    }
                }
            }
        }
    }
    out
}

pub fn is_triangle_free(graph: &Graph) -> bool {
    for (a, b) in graph.edges() {
        let (na, nb) = (graph.neighbors(a), graph.neighbors(b));
        let (mut x, mut y) = (0, 0);
        while x < na.len() && y < nb.len() {
            match na[x].cmp(&nb[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrianglePacking {
    pub triangles: Vec<[Vertex; 3]>,
    pub edges_deleted: usize,
}

impl TrianglePacking {
    pub fn size(&self) -> usize {
        self.triangles.len()
    }
}

/// Repeatedly removes the lexicographically first triangle of the residual
/// graph until none is left.
///
/// Deleting edges only destroys triangles, so scanning candidate triangles
/// once in lexicographic order and keeping each one whose three edges are
/// still present extracts exactly the same sequence.
pub fn greedy_packing(graph: &Graph) -> TrianglePacking {
    let mut deleted: HashSet<Edge> = HashSet::new();
    let mut triangles = Vec::new();
    for [a, b, c] in enumerate_triangles(graph) {
        if deleted.contains(&(a, b)) || deleted.contains(&(a, c)) || deleted.contains(&(b, c)) {
            continue;
        }
        deleted.extend([(a, b), (a, c), (b, c)]);
        triangles.push([a, b, c]);
    }
    TrianglePacking {
        edges_deleted: 3 * triangles.len(),
        triangles,
    }
}

/// Largest minimum degree over all subgraphs, by min-degree peeling with
/// bucket queues in `O(n + m)`.
pub fn degeneracy(graph: &Graph) -> usize {
    let n = graph.n();
    let mut degree: Vec<usize> = graph.vertices().map(|v| graph.degree(v)).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<Vertex>> = vec![Vec::new(); max_deg + 1];
    for v in graph.vertices() {
        buckets[degree[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut best = 0;
    let mut low = 0;
    let mut remaining = n;
    while remaining > 0 {
        // entries are lazily invalidated when a vertex's degree drops
        let v = loop {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop().unwrap();
            if !removed[v] && degree[v] == low {
                break v;
            }
        };
        removed[v] = true;
        remaining -= 1;
        best = best.max(low);
        for &u in graph.neighbors(v) {
            if !removed[u] {
                degree[u] -= 1;
                buckets[degree[u]].push(u);
                low = low.min(degree[u]);
            }
        }
    }
    best
}

/// `max ⌈e(S)/(|S| - 1)⌉` over vertex subsets with `|S| >= 2`, which equals
/// the arboricity. Exponential in `n`; limited to `n <= 16`.
pub fn exact_arboricity_small(graph: &Graph) -> Result<usize> {
    let n = graph.n();
    if n > ARBORICITY_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: ARBORICITY_LIMIT,
        });
    }
    let adj: Vec<u32> = graph
        .vertices()
        .map(|v| graph.neighbors(v).iter().fold(0u32, |acc, &u| acc | 1 << u))
        .collect();
    let mut best = 0;
    for set in 1u32..(1u32 << n) {
        let size = set.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let doubled: u32 = (0..n)
            .filter(|&v| set >> v & 1 == 1)
            .map(|v| (adj[v] & set).count_ones())
            .sum();
        let edges = doubled as usize / 2;
        best = best.max(edges.div_ceil(size - 1));
    }
    Ok(best)
}

/// `⌈e/(v - 1)⌉` for the subgraph spanned by the non-isolated vertices: a
/// Nash-Williams lower bound on the arboricity.
pub fn density_lower_bound(graph: &Graph) -> usize {
    let v = graph.non_isolated_count();
    if v < 2 {
        0
    } else {
        graph.m().div_ceil(v - 1)
    }
}

/// For each edge of `H(G, t)`, the number of sampler outcomes `(v, j)` out
/// of the `n·t` equally likely ones that return it.
pub fn sampler_outcome_counts(graph: &Graph, t: Threshold) -> BTreeMap<Edge, u64> {
    let mut counts = BTreeMap::new();
    for v in graph.vertices() {
        let nb = graph.neighbors(v);
        if t.is_heavy(nb.len()) {
            continue;
        }
        // j ranges over [1, t]; only j <= deg(v) succeeds, once per neighbor
        for &u in nb {
            *counts.entry((v.min(u), v.max(u))).or_insert(0) += 1;
        }
    }
    counts
}

/// Probability of each edge given that a sampler attempt succeeds.
pub fn sampler_conditional_distribution(graph: &Graph, t: Threshold) -> Result<BTreeMap<Edge, f64>> {
    let counts = sampler_outcome_counts(graph, t);
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(Error::EmptySupport);
    }
    Ok(counts.into_iter().map(|(e, c)| (e, c as f64 / total as f64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::from_edges(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y)))).unwrap()
    }

    #[test]
    fn triangle_examples() {
        assert_eq!(enumerate_triangles(&triangle()), vec![[0, 1, 2]]);
        assert_eq!(enumerate_triangles(&complete(4)).len(), 4);
        assert_eq!(enumerate_triangles(&complete(6)).len(), 20);
        assert!(enumerate_triangles(&complete_bipartite(3, 4)).is_empty());
        assert!(is_triangle_free(&complete_bipartite(3, 4)));
        assert!(!is_triangle_free(&complete(4)));
    }

    #[test]
    fn packing_examples() {
        let disjoint = triangle().disjoint_union(&triangle()).disjoint_union(&triangle());
        assert_eq!(greedy_packing(&disjoint).size(), 3);
        let k4 = greedy_packing(&complete(4));
        assert_eq!(k4.triangles, vec![[0, 1, 2]]);
        assert_eq!(k4.edges_deleted, 3);
        assert_eq!(greedy_packing(&cycle(6)).size(), 0);
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(degeneracy(&path(10)), 1);
        assert_eq!(degeneracy(&star(6)), 1);
        assert_eq!(degeneracy(&complete(4)), 3);
        assert_eq!(degeneracy(&complete_bipartite(5, 5)), 5);
        assert_eq!(degeneracy(&Graph::empty(3)), 0);
        assert_eq!(degeneracy(&cycle(7)), 2);
    }

    #[test]
    fn arboricity_examples() {
        assert_eq!(exact_arboricity_small(&triangle()).unwrap(), 2);
        assert_eq!(exact_arboricity_small(&path(9)).unwrap(), 1);
        assert_eq!(exact_arboricity_small(&complete(5)).unwrap(), 3);
        assert_eq!(exact_arboricity_small(&Graph::empty(4)).unwrap(), 0);
        assert!(matches!(
            exact_arboricity_small(&path(17)),
            Err(Error::TooLarge { n: 17, .. })
        ));
        assert_eq!(density_lower_bound(&complete(5)), 3);
    }

    #[test]
    fn sampler_distribution_examples() {
        let k3 = sampler_conditional_distribution(&triangle(), Threshold::new(2).unwrap()).unwrap();
        assert!(k3.values().all(|&p| (p - 1.0 / 3.0).abs() < 1e-12));
        let s = sampler_conditional_distribution(&star(5), Threshold::new(3).unwrap()).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.values().all(|&p| (p - 0.2).abs() < 1e-12));
        assert!(matches!(
            sampler_conditional_distribution(&triangle(), Threshold::new(1).unwrap()),
            Err(Error::EmptySupport)
        ));
    }
}
