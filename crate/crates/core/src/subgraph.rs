//! Heavy/light classification at a degree threshold `t`, the graph `H(G, t)`
//! obtained by deleting heavy–heavy edges, and its orientation `D(G, t)`.
//!
//! [`classify`] and [`orient`] work through an [`Oracle`] and touch single
//! vertices or edges. [`build_h`] and [`edges_of_h`] read the whole graph and
//! serve as reference constructions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Oracle, Vertex};

/// Degree threshold separating light (`deg <= t`) from heavy (`deg > t`) vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Threshold(usize);

impl Threshold {
    pub fn new(t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("threshold must be at least 1".into()));
        }
        Ok(Self(t))
    }

    /// `⌈x⌉` clamped to at least 1. A relative slack of 1e-12 absorbs float
    /// noise, so `8 / (24 * (1/24))` maps to 8 and not 9.
    pub fn ceil_of(x: f64) -> Self {
        Self((ceil_tolerant(x) as usize).max(1))
    }

    pub fn get(self) -> usize {
        self.0
    }

    #[inline]
    pub fn is_heavy(self, degree: usize) -> bool {
        degree > self.0
    }
}

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn ceil_tolerant(x: f64) -> f64 {
    (x * (1.0 - 1e-12)).ceil()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdClass {
    Heavy,
    Light,
}

impl ThresholdClass {
    pub fn of(degree: usize, t: Threshold) -> Self {
        if t.is_heavy(degree) {
            Self::Heavy
        } else {
            Self::Light
        }
    }
}

/// An edge of `D(G, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientedEdge {
    pub from: Vertex,
    pub to: Vertex,
}

/// One degree query.
pub fn classify(oracle: &mut Oracle<'_>, v: Vertex, t: Threshold) -> Result<ThresholdClass> {
    Ok(ThresholdClass::of(oracle.degree(v)?, t))
}

/// Orientation of the edge `{u, v}` given both degrees; `None` when both
/// endpoints are heavy. Light→heavy, and light→light from the smaller id.
#[inline]
pub fn orientation(u: Vertex, deg_u: usize, v: Vertex, deg_v: usize, t: Threshold) -> Option<OrientedEdge> {
    match (t.is_heavy(deg_u), t.is_heavy(deg_v)) {
        (true, true) => None,
        (false, true) => Some(OrientedEdge { from: u, to: v }),
        (true, false) => Some(OrientedEdge { from: v, to: u }),
        (false, false) if u < v => Some(OrientedEdge { from: u, to: v }),
        (false, false) => Some(OrientedEdge { from: v, to: u }),
    }
}

/// Orients `{u, v}`, which the caller guarantees is an edge. Two degree queries.
pub fn orient(oracle: &mut Oracle<'_>, u: Vertex, v: Vertex, t: Threshold) -> Result<Option<OrientedEdge>> {
    let deg_u = oracle.degree(u)?;
    let deg_v = oracle.degree(v)?;
    Ok(orientation(u, deg_u, v, deg_v, t))
}

/// `H(G, t)` materialized on the same vertex set.
pub fn build_h(graph: &Graph, t: Threshold) -> Graph {
    graph.filter_edges(|u, v| !(t.is_heavy(graph.degree(u)) && t.is_heavy(graph.degree(v))))
}

/// `|E(H(G, t))|`.
pub fn edges_of_h(graph: &Graph, t: Threshold) -> usize {
    graph
        .edges()
        .filter(|&(u, v)| !(t.is_heavy(graph.degree(u)) && t.is_heavy(graph.degree(v))))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    fn th(t: usize) -> Threshold {
        Threshold::new(t).unwrap()
    }

    #[test]
    fn threshold_rounding() {
        assert!(Threshold::new(0).is_err());
        assert_eq!(Threshold::ceil_of(8.0 / (24.0 * (1.0 / 24.0))).get(), 8);
        assert_eq!(Threshold::ceil_of(1.0 / 24.0).get(), 1);
        assert_eq!(Threshold::ceil_of(2.0 / 24.0).get(), 1);
        assert_eq!(Threshold::ceil_of(32.0 / 24.0).get(), 2);
        assert_eq!(Threshold::ceil_of(0.0).get(), 1);
    }

    #[test]
    fn classify_examples() {
        let s = star(5);
        let mut o = Oracle::new(&s);
        assert_eq!(classify(&mut o, 0, th(3)).unwrap(), ThresholdClass::Heavy);
        assert_eq!(classify(&mut o, 4, th(3)).unwrap(), ThresholdClass::Light);
        assert_eq!(o.ledger().degree, 2);
        let k3 = triangle();
        let mut o = Oracle::new(&k3);
        for v in 0..3 {
            assert_eq!(classify(&mut o, v, th(2)).unwrap(), ThresholdClass::Light);
        }
    }

    #[test]
    fn orient_examples() {
        // 2 and 7 light; 0 heavy in a star centred at 0 with leaves 1..=8.
        let s = star(8);
        let mut o = Oracle::new(&s);
        assert_eq!(
            orient(&mut o, 2, 0, th(3)).unwrap(),
            Some(OrientedEdge { from: 2, to: 0 })
        );
        assert_eq!(
            orient(&mut o, 0, 2, th(3)).unwrap(),
            Some(OrientedEdge { from: 2, to: 0 })
        );
        assert_eq!(o.ledger().degree, 4);
        assert_eq!(orientation(7, 1, 2, 1, th(3)), Some(OrientedEdge { from: 2, to: 7 }));
        assert_eq!(orientation(2, 5, 7, 9, th(3)), None);
        let k3 = triangle();
        assert_eq!(orient(&mut Oracle::new(&k3), 0, 1, th(1)).unwrap(), None);
    }

    #[test]
    fn build_h_examples() {
        assert_eq!(build_h(&star(5), th(3)), star(5));
        assert_eq!(edges_of_h(&star(5), th(3)), 5);
        assert_eq!(build_h(&triangle(), th(1)).m(), 0);
        assert_eq!(edges_of_h(&triangle(), th(1)), 0);
        assert_eq!(build_h(&triangle(), th(2)), triangle());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (2usize..20).prop_flat_map(|n| {
            proptest::collection::btree_set((0..n, 0..n), 0..70).prop_map(move |pairs| {
                let mut edges: Vec<_> = pairs
                    .into_iter()
                    .filter(|(a, b)| a != b)
                    .map(|(a, b)| (a.min(b), a.max(b)))
                    .collect();
                edges.sort_unstable();
                edges.dedup();
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn edges_of_h_is_monotone(g in arb_graph(), t1 in 1usize..12, dt in 0usize..12) {
            prop_assert!(edges_of_h(&g, th(t1)) <= edges_of_h(&g, th(t1 + dt)));
        }

        #[test]
        fn orient_agrees_with_build_h(g in arb_graph(), t in 1usize..10) {
            let t = th(t);
            let h = build_h(&g, t);
            prop_assert_eq!(h.m(), edges_of_h(&g, t));
            let mut o = Oracle::new(&g);
            let mut out = vec![0usize; g.n()];
            let mut inn = vec![0usize; g.n()];
            for (u, v) in g.edges() {
                let oriented = orient(&mut o, u, v, t).unwrap();
                prop_assert_eq!(oriented.is_some(), h.has_edge(u, v));
                if let Some(e) = oriented {
                    prop_assert!(!t.is_heavy(g.degree(e.from)));
                    out[e.from] += 1;
                    inn[e.to] += 1;
                }
            }
            for v in g.vertices() {
                if out[v] > 0 {
                    prop_assert!(!t.is_heavy(g.degree(v)));
                }
                if !t.is_heavy(g.degree(v)) {
                    prop_assert_eq!(out[v] + inn[v], g.degree(v));
                }
            }
        }
    }
}
