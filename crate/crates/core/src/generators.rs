//! Seeded constructors for lower-bound families, planted-triangle
//! instances and triangle-free controls. Every instance carries certified
//! bounds: arboricity is sandwiched between a density bound and degeneracy,
//! and farness is bounded below by a count of edge-disjoint triangles.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{degeneracy, density_lower_bound};
use crate::graph::{Edge, Graph, Vertex};
use crate::rng::seeded_rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedInstance {
    pub graph: Graph,
    pub family: String,
    pub arboricity_lower: usize,
    /// Which subgraph's density gives `arboricity_lower`.
    pub arboricity_witness: String,
    pub arboricity_upper: usize,
    pub disjoint_triangles_lower: usize,
    /// At least `farness_lower · m` edges must go to make the graph triangle-free.
    pub farness_lower: Ratio<u64>,
}

/// Everything in a [`CertifiedInstance`] except the graph, for sidecar files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMetadata {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub arboricity_lower: usize,
    pub arboricity_witness: String,
    pub arboricity_upper: usize,
    pub disjoint_triangles_lower: usize,
    pub farness_lower: Ratio<u64>,
}

impl CertifiedInstance {
    pub fn metadata(&self) -> InstanceMetadata {
        InstanceMetadata {
            family: self.family.clone(),
            n: self.graph.n(),
            m: self.graph.m(),
            max_degree: self.graph.max_degree(),
            arboricity_lower: self.arboricity_lower,
            arboricity_witness: self.arboricity_witness.clone(),
            arboricity_upper: self.arboricity_upper,
            disjoint_triangles_lower: self.disjoint_triangles_lower,
            farness_lower: self.farness_lower,
        }
    }

    /// Certifies an arbitrary graph with the exact oracles: degeneracy,
    /// whole-graph density and a greedy triangle packing.
    pub fn certify(graph: Graph, family: impl Into<String>) -> Self {
        let packing = crate::exact::greedy_packing(&graph).size();
        Self {
            arboricity_lower: density_lower_bound(&graph),
            arboricity_witness: "non-isolated vertices".into(),
            arboricity_upper: degeneracy(&graph),
            disjoint_triangles_lower: packing,
            farness_lower: farness(packing, graph.m()),
            family: family.into(),
            graph,
        }
    }
}

fn farness(disjoint_triangles: usize, m: usize) -> Ratio<u64> {
    Ratio::new(disjoint_triangles as u64, m.max(1) as u64)
}

fn check(violations: Vec<String>) -> Result<()> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Infeasible(violations))
    }
}

/// Two sides `V1`, `V2` of `2m/(3Γ)` vertices and a hub set `V3` of `Γ/2`
/// vertices, with `V3` complete to `V1 ∪ V2` and `Γ/2` cyclic-shift perfect
/// matchings between `V1` and `V2`. Vertices are laid out `V3, V1, V2`,
/// then isolated ones up to `n`.
///
/// Each matching edge `{u, v}` of shift `k` closes the triangle
/// `{u, v, w_k}`; these `m/3` triangles are edge-disjoint, so the graph is
/// `1/3`-far from triangle-free.
pub fn gen_lb_matchings(n: usize, m: usize, gamma: usize) -> Result<CertifiedInstance> {
    let mut violations = Vec::new();
    if gamma < 2 || !gamma.is_multiple_of(2) {
        violations.push(format!("Γ = {gamma} must be even and at least 2"));
    }
    if m == 0 {
        violations.push("m must be positive".into());
    }
    if gamma > 0 && !(2 * m).is_multiple_of(3 * gamma) {
        violations.push(format!("3Γ = {} must divide 2m = {}", 3 * gamma, 2 * m));
    }
    check(violations)?;

    let side = 2 * m / (3 * gamma);
    let hubs = gamma / 2;
    let mut violations = Vec::new();
    if hubs > side {
        violations.push(format!(
            "Γ/2 = {hubs} edge-disjoint matchings need |V1| = 2m/(3Γ) = {side} >= Γ/2"
        ));
    }
    if 2 * side + hubs > n {
        violations.push(format!("n = {n} is below 2|V1| + Γ/2 = {}", 2 * side + hubs));
    }
    check(violations)?;

    let v1 = |i: usize| hubs + i;
    let v2 = |i: usize| hubs + side + i;
    let mut edges: Vec<Edge> = Vec::with_capacity(m);
    for w in 0..hubs {
        for i in 0..side {
            edges.push((w, v1(i)));
            edges.push((w, v2(i)));
        }
    }
    for shift in 0..hubs {
        for i in 0..side {
            edges.push((v1(i), v2((i + shift) % side)));
        }
    }
    let graph = Graph::from_edges(n, edges)?;
    debug_assert_eq!(graph.m(), m);
    Ok(CertifiedInstance {
        arboricity_lower: density_lower_bound(&graph),
        arboricity_witness: "V1 ∪ V2 ∪ V3".into(),
        arboricity_upper: gamma,
        disjoint_triangles_lower: m / 3,
        farness_lower: farness(m / 3, m),
        family: format!("lb-matchings(gamma={gamma})"),
        graph,
    })
}

/// Smallest `n` accepted by [`gen_lb_matchings`] for these `m` and `Γ`.
pub fn lb_matchings_min_n(m: usize, gamma: usize) -> usize {
    2 * (2 * m / (3 * gamma)) + gamma / 2
}

/// `base` plus isolated vertices up to `n`. Edges, triangles and arboricity
/// are unchanged.
pub fn gen_lb_isolated_pad(base: &CertifiedInstance, n: usize) -> Result<CertifiedInstance> {
    if n < base.graph.n() {
        return Err(Error::Infeasible(vec![format!(
            "padded n = {n} is below the base's {} vertices",
            base.graph.n()
        )]));
    }
    Ok(CertifiedInstance {
        graph: base.graph.with_isolated(n - base.graph.n()),
        family: format!("isolated-pad({})", base.family),
        ..base.clone()
    })
}

/// `base ⊎ K_{Γ,Γ} ⊎` isolated vertices up to `n`. The bipartite block adds
/// `Γ²` edges and no triangles.
pub fn gen_lb_bipartite_pad(base: &CertifiedInstance, gamma: usize, n: usize) -> Result<CertifiedInstance> {
    let mut violations = Vec::new();
    if gamma == 0 {
        violations.push("Γ must be at least 1".into());
    }
    if n < base.graph.n() + 2 * gamma {
        violations.push(format!("n = {n} is below base n + 2Γ = {}", base.graph.n() + 2 * gamma));
    }
    if base.graph.max_degree() > gamma {
        violations.push(format!(
            "base max degree {} exceeds Γ = {gamma}",
            base.graph.max_degree()
        ));
    }
    check(violations)?;

    let block = complete_bipartite(gamma, gamma)?;
    let joined = base.graph.disjoint_union(&block.graph);
    let graph = joined.with_isolated(n - joined.n());
    let (arboricity_lower, arboricity_witness) = if block.arboricity_lower > base.arboricity_lower {
        (block.arboricity_lower, format!("K_{{{gamma},{gamma}}} block"))
    } else {
        (base.arboricity_lower, format!("base: {}", base.arboricity_witness))
    };
    let m = graph.m();
    Ok(CertifiedInstance {
        graph,
        family: format!("bipartite-pad({}, gamma={gamma})", base.family),
        arboricity_lower,
        arboricity_witness,
        arboricity_upper: base.arboricity_upper.max(gamma),
        disjoint_triangles_lower: base.disjoint_triangles_lower,
        farness_lower: farness(base.disjoint_triangles_lower, m),
    })
}

/// `K_{a,b}` with sides `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<CertifiedInstance> {
    let edges = (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y)));
    let graph = Graph::from_edges(a + b, edges)?;
    Ok(CertifiedInstance {
        arboricity_lower: density_lower_bound(&graph),
        arboricity_witness: "whole graph".into(),
        arboricity_upper: a.min(b),
        disjoint_triangles_lower: 0,
        farness_lower: farness(0, graph.m()),
        family: format!("complete-bipartite({a},{b})"),
        graph,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControlKind {
    Tree,
    CycleEven,
    BipartiteRandom,
    Forest,
}

impl fmt::Display for ControlKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Tree => "tree",
            Self::CycleEven => "cycle-even",
            Self::BipartiteRandom => "bipartite-random",
            Self::Forest => "forest",
        })
    }
}

impl FromStr for ControlKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(Self::Tree),
            "cycle-even" | "cycle_even" => Ok(Self::CycleEven),
            "bipartite-random" | "bipartite_random" => Ok(Self::BipartiteRandom),
            "forest" => Ok(Self::Forest),
            other => Err(Error::InvalidParameter(format!("unknown control kind {other:?}"))),
        }
    }
}

/// Triangle-free graphs for completeness checks. `m` is implied for trees
/// (`n - 1`) and even cycles (`n`); when given it must agree.
pub fn gen_triangle_free_control(
    kind: ControlKind,
    n: usize,
    m: Option<usize>,
    seed: u64,
) -> Result<CertifiedInstance> {
    let mut rng = seeded_rng(seed);
    let implied = match kind {
        ControlKind::Tree => Some(n.saturating_sub(1)),
        ControlKind::CycleEven => Some(n),
        _ => None,
    };
    let m = match (implied, m) {
        (Some(want), Some(got)) if want != got => {
            return Err(Error::Infeasible(vec![format!(
                "{kind} on {n} vertices has {want} edges, not {got}"
            )]))
        }
        (Some(want), _) => want,
        (None, Some(got)) => got,
        (None, None) => return Err(Error::Infeasible(vec![format!("{kind} needs an edge count m")])),
    };
    if n == 0 {
        return Err(Error::Infeasible(vec!["n must be at least 1".into()]));
    }

    let graph = match kind {
        ControlKind::Tree | ControlKind::Forest => {
            if m > n - 1 {
                return Err(Error::Infeasible(vec![format!(
                    "a forest on {n} vertices has at most {} edges, asked for {m}",
                    n - 1
                )]));
            }
            random_forest(n, m, &mut rng)?
        }
        ControlKind::CycleEven => {
            if n < 4 || !n.is_multiple_of(2) {
                return Err(Error::Infeasible(vec![format!(
                    "an even cycle needs an even n >= 4, got {n}"
                )]));
            }
            Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))?
        }
        ControlKind::BipartiteRandom => {
            let a = n / 2;
            let b = n - a;
            if m > a * b {
                return Err(Error::Infeasible(vec![format!(
                    "bipartite graph with sides {a} and {b} has at most {} edges, asked for {m}",
                    a * b
                )]));
            }
            let picks = index::sample(&mut rng, a * b, m);
            Graph::from_edges(n, picks.into_iter().map(|i| (i / b, a + i % b)))?
        }
    };
    let forest = matches!(kind, ControlKind::Tree | ControlKind::Forest);
    Ok(CertifiedInstance {
        arboricity_lower: if forest {
            usize::from(m > 0)
        } else {
            density_lower_bound(&graph)
        },
        arboricity_witness: "non-isolated vertices".into(),
        arboricity_upper: degeneracy(&graph),
        disjoint_triangles_lower: 0,
        farness_lower: farness(0, m),
        family: format!("control-{kind}"),
        graph,
    })
}

/// Forest with `m` edges: vertices in random order, the last `m` each
/// attached to a uniformly chosen earlier vertex.
fn random_forest<R: Rng>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    let edges: Vec<Edge> = (n - m..n).map(|i| (order[i], order[rng.random_range(0..i)])).collect();
    Graph::from_edges(n, edges)
}

/// `k` vertex-disjoint triangles on randomly chosen vertices, plus a random
/// bipartite base graph of maximum degree at most `d` that avoids the
/// triangles' edges.
pub fn gen_planted(n: usize, d: usize, k: usize, seed: u64) -> Result<CertifiedInstance> {
    if 3 * k > n {
        return Err(Error::Infeasible(vec![format!(
            "{k} vertex-disjoint triangles need 3k = {} <= n = {n}",
            3 * k
        )]));
    }
    let mut rng = seeded_rng(seed);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut edges: HashSet<Edge> = HashSet::new();
    for tri in order[..3 * k].chunks_exact(3) {
        for (a, b) in [(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])] {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let side: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let mut base_degree = vec![0usize; n];
    if d > 0 {
        for _ in 0..n * d {
            let x = rng.random_range(0..n);
            let y = rng.random_range(0..n);
            if side[x] == side[y] || base_degree[x] >= d || base_degree[y] >= d {
                continue;
            }
            if edges.insert((x.min(y), x.max(y))) {
                base_degree[x] += 1;
                base_degree[y] += 1;
            }
        }
    }
    let mut edges: Vec<Edge> = edges.into_iter().collect();
    edges.sort_unstable();
    let graph = Graph::from_edges(n, edges)?;
    let density = density_lower_bound(&graph);
    let (arboricity_lower, arboricity_witness) = if k > 0 && density < 2 {
        (2, "a planted triangle".to_string())
    } else {
        (density, "non-isolated vertices".to_string())
    };
    let m = graph.m();
    Ok(CertifiedInstance {
        arboricity_lower,
        arboricity_witness,
        arboricity_upper: degeneracy(&graph),
        disjoint_triangles_lower: k,
        farness_lower: farness(k, m),
        family: format!("planted(d={d},k={k})"),
        graph,
    })
}

/// A named family with its parameters, as used by the benchmark harness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    LbMatchings {
        n: usize,
        m: usize,
        gamma: usize,
    },
    /// The tightest lower-bound instance for `(m, Γ)`, padded with isolated vertices to `n`.
    LbIsolatedPad {
        n: usize,
        m: usize,
        gamma: usize,
    },
    /// A planted instance on `base_n` vertices plus `K_{Γ,Γ}`, padded to `n`.
    LbBipartitePad {
        n: usize,
        base_n: usize,
        d: usize,
        k: usize,
        gamma: usize,
    },
    Planted {
        n: usize,
        d: usize,
        k: usize,
    },
    Control {
        kind: ControlKind,
        n: usize,
        m: Option<usize>,
    },
    CompleteBipartite {
        a: usize,
        b: usize,
    },
}

pub fn generate(spec: &FamilySpec, seed: u64) -> Result<CertifiedInstance> {
    match *spec {
        FamilySpec::LbMatchings { n, m, gamma } => gen_lb_matchings(n, m, gamma),
        FamilySpec::LbIsolatedPad { n, m, gamma } => {
            let min_n = if gamma > 0 { lb_matchings_min_n(m, gamma) } else { 0 };
            gen_lb_isolated_pad(&gen_lb_matchings(min_n, m, gamma)?, n)
        }
        FamilySpec::LbBipartitePad { n, base_n, d, k, gamma } => {
            gen_lb_bipartite_pad(&gen_planted(base_n, d, k, seed)?, gamma, n)
        }
        FamilySpec::Planted { n, d, k } => gen_planted(n, d, k, seed),
        FamilySpec::Control { kind, n, m } => gen_triangle_free_control(kind, n, m, seed),
        FamilySpec::CompleteBipartite { a, b } => complete_bipartite(a, b),
    }
}
