use serde::{Deserialize, Serialize};

use super::{Graph, Vertex};
use crate::error::{Error, Result};

/// Per-kind query counters of one oracle session.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub degree: u64,
    pub neighbor: u64,
    pub pair: u64,
}

impl QueryLedger {
    pub fn total(&self) -> u64 {
        self.degree + self.neighbor + self.pair
    }

    /// Queries made between `earlier` and `self`.
    pub fn since(&self, earlier: &QueryLedger) -> QueryLedger {
        QueryLedger {
            degree: self.degree - earlier.degree,
            neighbor: self.neighbor - earlier.neighbor,
            pair: self.pair - earlier.pair,
        }
    }
}

impl std::ops::Add for QueryLedger {
    type Output = QueryLedger;

    fn add(self, rhs: QueryLedger) -> QueryLedger {
        QueryLedger {
            degree: self.degree + rhs.degree,
            neighbor: self.neighbor + rhs.neighbor,
            pair: self.pair + rhs.pair,
        }
    }
}

impl std::ops::AddAssign for QueryLedger {
    fn add_assign(&mut self, rhs: QueryLedger) {
        *self = *self + rhs;
    }
}

/// The inputs every tester run receives besides query access.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    pub n: usize,
    pub m: usize,
    pub eps: f64,
}

impl GraphParams {
    pub fn new(n: usize, m: usize, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidParameter(format!("eps must lie in (0, 1], got {eps}")));
        }
        Ok(Self { n, m, eps })
    }

    pub fn for_graph(graph: &Graph, eps: f64) -> Result<Self> {
        Self::new(graph.n(), graph.m(), eps)
    }

    /// `2m/n`.
    pub fn avg_degree(&self) -> f64 {
        2.0 * self.m as f64 / self.n as f64
    }

    /// `m/n`.
    pub fn edge_density(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

/// Query access to a graph in the general graph model.
///
/// Answers are pure functions of the graph; each call only bumps the ledger.
/// A session is single-threaded; run several sessions to parallelize.
#[derive(Debug)]
pub struct Oracle<'g> {
    graph: &'g Graph,
    ledger: QueryLedger,
}

impl<'g> Oracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            ledger: QueryLedger::default(),
        }
    }

    /// Number of vertices. This is a parameter of the model, not a query.
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn ledger(&self) -> QueryLedger {
        self.ledger
    }

    #[inline]
    fn check(&self, v: Vertex) -> Result<()> {
        if v < self.graph.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.graph.n(),
            })
        }
    }

    #[inline]
    pub fn degree(&mut self, v: Vertex) -> Result<usize> {
        self.check(v)?;
        self.ledger.degree += 1;
        Ok(self.graph.degree(v))
    }

    /// The `i`-th smallest neighbor of `v`, with `i` in `1..=deg(v)`.
    #[inline]
    pub fn neighbor(&mut self, v: Vertex, i: usize) -> Result<Vertex> {
        self.check(v)?;
        let nb = self.graph.neighbors(v);
        if i == 0 || i > nb.len() {
            return Err(Error::NeighborIndexOutOfRange {
                vertex: v,
                index: i,
                degree: nb.len(),
            });
        }
        self.ledger.neighbor += 1;
        Ok(nb[i - 1])
    }

    /// One degree query, then a neighbor query only if `j <= deg(v)`.
    pub fn jth_neighbor(&mut self, v: Vertex, j: usize) -> Result<Option<Vertex>> {
        if j == 0 {
            return Err(Error::Contract("neighbor indices start at 1".into()));
        }
        let degree = self.degree(v)?;
        if j > degree {
            return Ok(None);
        }
        self.neighbor(v, j).map(Some)
    }

    pub fn pair(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::PairQuerySameVertex(u));
        }
        self.ledger.pair += 1;
        Ok(self.graph.has_edge(u, v))
    }
}
