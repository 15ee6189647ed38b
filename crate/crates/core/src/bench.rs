//! Seeded experiment grids over generator families, and the sampler
//! uniformity report.
//!
//! A suite config is TOML with one `[[cell]]` table per experiment:
//!
//! ```toml
//! [[cell]]
//! name = "lb16"
//! family = "lb-isolated-pad"
//! n = 3000
//! m = 24000
//! gamma = [8, 16]              # arrays expand into a grid
//! eps = 0.25                   # default 0.25
//! threshold_mode = "validated" # or "paper"; default "validated"
//! seeds = { start = 0, count = 300 }
//! instance_seed = 0            # seed for randomized families; default 0
//! expect_reject_at_least = 0.6 # optional check
//! expect_reject_at_most = 0.0  # optional check
//! ```
//!
//! Every key other than `name`, `seeds`, `instance_seed` and the
//! `expect_*` checks is a grid axis. `eps` and `threshold_mode` configure
//! the tester; the rest, with `family`, select a
//! [`FamilySpec`](crate::generators::FamilySpec).
//!
//! Runs execute on the rayon pool (`RAYON_NUM_THREADS` sets its size) and
//! rows come back ordered by cell, then seed, so reruns are byte-identical.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exact::sampler_conditional_distribution;
use crate::generators::{generate, CertifiedInstance, FamilySpec};
use crate::graph::{Graph, GraphParams, Oracle, QueryLedger};
use crate::rng::seeded_rng;
use crate::sampler::sample_edge;
use crate::subgraph::Threshold;
use crate::tester::{test_triangle_freeness_with, Decision, ThresholdMode, Verdict};

/// Written in the first column of every run and summary row.
pub const SCHEMA_VERSION: &str = "trifree-bench/1";

const DEFAULT_EPS: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub struct SeedRange {
    pub start: u64,
    pub count: u64,
}

#[derive(Debug, Deserialize)]
struct RawSuite {
    #[serde(default)]
    cell: Vec<RawCell>,
}

#[derive(Debug, Deserialize)]
struct RawCell {
    name: String,
    seeds: SeedRange,
    #[serde(default)]
    instance_seed: u64,
    expect_reject_at_least: Option<f64>,
    expect_reject_at_most: Option<f64>,
    #[serde(flatten)]
    grid: toml::Table,
}

/// One point of a cell's grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CellConfig {
    pub label: String,
    pub family: FamilySpec,
    pub eps: f64,
    pub threshold_mode: ThresholdMode,
    pub seeds: SeedRange,
    pub instance_seed: u64,
    pub expect_reject_at_least: Option<f64>,
    pub expect_reject_at_most: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub cells: Vec<CellConfig>,
}

impl SuiteConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawSuite = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cells = Vec::new();
        for cell in raw.cell {
            expand(cell, &mut cells)?;
        }
        Ok(Self { cells })
    }
}

fn expand(cell: RawCell, out: &mut Vec<CellConfig>) -> Result<()> {
    let axes: Vec<(String, Vec<toml::Value>)> = cell
        .grid
        .into_iter()
        .map(|(k, v)| match v {
            toml::Value::Array(items) => (k, items),
            single => (k, vec![single]),
        })
        .collect();
    if let Some((key, _)) = axes.iter().find(|(_, values)| values.is_empty()) {
        return Err(Error::Config(format!("cell {:?}: axis {key:?} is empty", cell.name)));
    }
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for (_, values) in &axes {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                (0..values.len()).map(move |i| {
                    let mut next = prefix.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
    }
    for combo in combos {
        let mut table = toml::Table::new();
        let mut varying = Vec::new();
        for ((key, values), &i) in axes.iter().zip(&combo) {
            table.insert(key.clone(), values[i].clone());
            if values.len() > 1 {
                varying.push(format!("{key}={}", values[i]));
            }
        }
        let context = |e: &dyn std::fmt::Display| Error::Config(format!("cell {:?}: {e}", cell.name));
        let eps = match table.remove("eps") {
            None => DEFAULT_EPS,
            Some(toml::Value::Float(x)) => x,
            Some(toml::Value::Integer(x)) => x as f64,
            Some(other) => return Err(context(&format!("eps must be a number, got {other}"))),
        };
        let threshold_mode = match table.remove("threshold_mode") {
            None => ThresholdMode::default(),
            Some(v) => v.try_into().map_err(|e| context(&e))?,
        };
        let family: FamilySpec = toml::Value::Table(table).try_into().map_err(|e| context(&e))?;
        let label = if varying.is_empty() {
            cell.name.clone()
        } else {
            format!("{}[{}]", cell.name, varying.join(","))
        };
        out.push(CellConfig {
            label,
            family,
            eps,
            threshold_mode,
            seeds: cell.seeds,
            instance_seed: cell.instance_seed,
            expect_reject_at_least: cell.expect_reject_at_least,
            expect_reject_at_most: cell.expect_reject_at_most,
        });
    }
    Ok(())
}

/// One tester run, or one failed cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub cell: String,
    pub family: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
    pub eps: f64,
    pub threshold_mode: ThresholdMode,
    pub outcome: std::result::Result<Verdict, String>,
    pub wall_ms: Option<f64>,
}

const RUN_HEADER: [&str; 25] = [
    "schema",
    "cell",
    "family",
    "n",
    "m",
    "seed",
    "eps",
    "threshold_mode",
    "decision",
    "witness",
    "gamma_star",
    "threshold",
    "rounds",
    "sampler_timeouts",
    "probe_exhausted",
    "degree_queries",
    "neighbor_queries",
    "pair_queries",
    "total_queries",
    "probe_queries",
    "sampling_queries",
    "intersection_queries",
    "validation_queries",
    "error",
    "wall_ms",
];

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl ExperimentRecord {
    fn fields(&self, with_timing: bool) -> Vec<String> {
        let mut row = vec![
            SCHEMA_VERSION.to_string(),
            self.cell.clone(),
            self.family.clone(),
            opt(self.n),
            opt(self.m),
            opt(self.seed),
            self.eps.to_string(),
            self.threshold_mode.to_string(),
        ];
        match &self.outcome {
            Ok(v) => {
                let total = v.total_queries;
                row.extend([
                    v.decision.to_string(),
                    v.witness.map(|[a, b, c]| format!("{a} {b} {c}")).unwrap_or_default(),
                    v.gamma_star.to_string(),
                    v.threshold.to_string(),
                    v.rounds_run.to_string(),
                    v.sampler_timeouts.to_string(),
                    v.probe_exhausted.to_string(),
                    total.degree.to_string(),
                    total.neighbor.to_string(),
                    total.pair.to_string(),
                    total.total().to_string(),
                    v.phases.probe.total().to_string(),
                    v.phases.sampling.total().to_string(),
                    v.phases.intersection.total().to_string(),
                    v.phases.validation.total().to_string(),
                    String::new(),
                ]);
            }
            Err(message) => {
                row.extend(std::iter::repeat_n(String::new(), 15));
                row.push(message.clone());
            }
        }
        if with_timing {
            row.push(self.wall_ms.map(|ms| format!("{ms:.3}")).unwrap_or_default());
        }
        row
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub cell: String,
    pub family: String,
    pub eps: f64,
    pub threshold_mode: ThresholdMode,
    pub runs: usize,
    pub errors: usize,
    pub rejections: usize,
    pub mean_queries: f64,
    pub median_queries: f64,
    /// `None` when the cell has no checks.
    pub check_passed: Option<bool>,
}

impl CellSummary {
    pub fn rejection_frequency(&self) -> f64 {
        if self.runs == 0 {
            0.0
        } else {
            self.rejections as f64 / self.runs as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub records: Vec<ExperimentRecord>,
    pub summaries: Vec<CellSummary>,
}

impl SuiteReport {
    /// Labels of cells whose checks failed.
    pub fn failed_checks(&self) -> Vec<&str> {
        self.summaries
            .iter()
            .filter(|s| s.check_passed == Some(false))
            .map(|s| s.cell.as_str())
            .collect()
    }

    pub fn write_runs_csv<W: Write>(&self, writer: W, with_timing: bool) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        let width = if with_timing {
            RUN_HEADER.len()
        } else {
            RUN_HEADER.len() - 1
        };
        csv.write_record(&RUN_HEADER[..width])?;
        for record in &self.records {
            csv.write_record(record.fields(with_timing))?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn write_summary_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record([
            "schema",
            "cell",
            "family",
            "eps",
            "threshold_mode",
            "runs",
            "errors",
            "rejections",
            "rejection_frequency",
            "mean_queries",
            "median_queries",
            "check",
        ])?;
        for s in &self.summaries {
            csv.write_record([
                SCHEMA_VERSION.to_string(),
                s.cell.clone(),
                s.family.clone(),
                s.eps.to_string(),
                s.threshold_mode.to_string(),
                s.runs.to_string(),
                s.errors.to_string(),
                s.rejections.to_string(),
                format!("{:.6}", s.rejection_frequency()),
                format!("{:.3}", s.mean_queries),
                format!("{:.1}", s.median_queries),
                match s.check_passed {
                    None => String::new(),
                    Some(true) => "pass".into(),
                    Some(false) => "fail".into(),
                },
            ])?;
        }
        csv.flush()?;
        Ok(())
    }
}

fn median(sorted: &[u64]) -> f64 {
    match sorted.len() {
        0 => 0.0,
        len if len % 2 == 1 => sorted[len / 2] as f64,
        len => (sorted[len / 2 - 1] + sorted[len / 2]) as f64 / 2.0,
    }
}

fn run_one(
    graph: &Graph,
    cell: &CellConfig,
    seed: u64,
    with_timing: bool,
) -> (std::result::Result<Verdict, String>, Option<f64>) {
    let start = Instant::now();
    let outcome = GraphParams::new(graph.n(), graph.m(), cell.eps).and_then(|params| {
        let mut oracle = Oracle::new(graph);
        test_triangle_freeness_with(&mut oracle, &params, seed, cell.threshold_mode)
    });
    let wall = with_timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    (outcome.map_err(|e| e.to_string()), wall)
}

pub fn run_suite(config: &SuiteConfig, with_timing: bool) -> SuiteReport {
    let instances: Vec<std::result::Result<CertifiedInstance, String>> = config
        .cells
        .par_iter()
        .map(|cell| generate(&cell.family, cell.instance_seed).map_err(|e| e.to_string()))
        .collect();

    let jobs: Vec<(usize, Option<u64>)> = config
        .cells
        .iter()
        .zip(&instances)
        .enumerate()
        .flat_map(|(i, (cell, instance))| -> Vec<(usize, Option<u64>)> {
            match instance {
                Ok(_) => (0..cell.seeds.count).map(|k| (i, Some(cell.seeds.start + k))).collect(),
                Err(_) => vec![(i, None)],
            }
        })
        .collect();

    let records: Vec<ExperimentRecord> = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let cell = &config.cells[i];
            let (family, n, m, outcome, wall_ms) = match (&instances[i], seed) {
                (Ok(inst), Some(seed)) => {
                    let (outcome, wall) = run_one(&inst.graph, cell, seed, with_timing);
                    (
                        inst.family.clone(),
                        Some(inst.graph.n()),
                        Some(inst.graph.m()),
                        outcome,
                        wall,
                    )
                }
                (Err(message), _) => (String::new(), None, None, Err(message.clone()), None),
                (Ok(_), None) => unreachable!("feasible cells always have seeds"),
            };
            ExperimentRecord {
                cell: cell.label.clone(),
                family,
                n,
                m,
                seed,
                eps: cell.eps,
                threshold_mode: cell.threshold_mode,
                outcome,
                wall_ms,
            }
        })
        .collect();

    let mut by_cell: BTreeMap<usize, Vec<&ExperimentRecord>> = BTreeMap::new();
    for (record, &(i, _)) in records.iter().zip(&jobs) {
        by_cell.entry(i).or_default().push(record);
    }
    let summaries = config
        .cells
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            let rows = by_cell.get(&i).map(Vec::as_slice).unwrap_or_default();
            let verdicts: Vec<&Verdict> = rows.iter().filter_map(|r| r.outcome.as_ref().ok()).collect();
            let mut queries: Vec<u64> = verdicts.iter().map(|v| v.total_queries.total()).collect();
            queries.sort_unstable();
            let rejections = verdicts.iter().filter(|v| v.decision == Decision::Reject).count();
            let runs = verdicts.len();
            let errors = rows.len() - runs;
            let mut summary = CellSummary {
                cell: cell.label.clone(),
                family: rows.first().map(|r| r.family.clone()).unwrap_or_default(),
                eps: cell.eps,
                threshold_mode: cell.threshold_mode,
                runs,
                errors,
                rejections,
                mean_queries: if runs == 0 {
                    0.0
                } else {
                    queries.iter().sum::<u64>() as f64 / runs as f64
                },
                median_queries: median(&queries),
                check_passed: None,
            };
            if cell.expect_reject_at_least.is_some() || cell.expect_reject_at_most.is_some() {
                let freq = summary.rejection_frequency();
                let ok = errors == 0
                    && runs > 0
                    && cell.expect_reject_at_least.is_none_or(|lo| freq >= lo)
                    && cell.expect_reject_at_most.is_none_or(|hi| freq <= hi);
                summary.check_passed = Some(ok);
            }
            summary
        })
        .collect();
    SuiteReport { records, summaries }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformityRow {
    pub edge: (usize, usize),
    pub exact_probability: f64,
    pub count: u64,
    pub empirical_frequency: f64,
    /// `(count − N·p) / sqrt(N·p·(1−p))`.
    pub z_score: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformityReport {
    pub t: Threshold,
    pub samples: u64,
    pub seed: u64,
    pub attempts: u64,
    pub queries: QueryLedger,
    pub rows: Vec<UniformityRow>,
}

fn max_min_ratio(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

impl UniformityReport {
    pub fn exact_ratio(&self) -> f64 {
        max_min_ratio(self.rows.iter().map(|r| r.exact_probability))
    }

    /// Infinite when some edge of `H(G, t)` was never drawn.
    pub fn empirical_ratio(&self) -> f64 {
        max_min_ratio(self.rows.iter().map(|r| r.empirical_frequency))
    }

    pub fn max_abs_z(&self) -> f64 {
        self.rows.iter().map(|r| r.z_score.abs()).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let exact_min = self
            .rows
            .iter()
            .map(|r| r.exact_probability)
            .fold(f64::INFINITY, f64::min);
        let empirical_min = self
            .rows
            .iter()
            .map(|r| r.empirical_frequency)
            .fold(f64::INFINITY, f64::min);
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record([
            "u",
            "v",
            "exact_probability",
            "count",
            "empirical_frequency",
            "z_score",
            "exact_ratio_to_min",
            "empirical_ratio_to_min",
        ])?;
        for r in &self.rows {
            csv.write_record([
                r.edge.0.to_string(),
                r.edge.1.to_string(),
                format!("{:.9}", r.exact_probability),
                r.count.to_string(),
                format!("{:.9}", r.empirical_frequency),
                format!("{:.4}", r.z_score),
                format!("{:.6}", r.exact_probability / exact_min),
                format!("{:.6}", r.empirical_frequency / empirical_min),
            ])?;
        }
        csv.flush()?;
        Ok(())
    }
}

/// Draws `samples` successful sampler outcomes on `graph` at threshold `t`
/// and compares edge frequencies with the exact conditional distribution.
pub fn uniformity_report(graph: &Graph, t: Threshold, samples: u64, seed: u64) -> Result<UniformityReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let exact = sampler_conditional_distribution(graph, t)?;
    let mut counts: BTreeMap<(usize, usize), u64> = exact.keys().map(|&e| (e, 0)).collect();
    let mut rng = seeded_rng(seed);
    let mut oracle = Oracle::new(graph);
    let mut attempts = 0;
    for _ in 0..samples {
        let draw = sample_edge(&mut oracle, t, u64::MAX, &mut rng)?;
        attempts += draw.attempts;
        let edge = draw.edge.expect("support is non-empty").normalized();
        *counts
            .get_mut(&edge)
            .ok_or_else(|| Error::Contract(format!("sampler returned {edge:?}, which is outside H(G, t)")))? += 1;
    }
    let n = samples as f64;
    let rows = exact
        .iter()
        .map(|(&edge, &p)| {
            let count = counts[&edge];
            let sd = (n * p * (1.0 - p)).sqrt();
            UniformityRow {
                edge,
                exact_probability: p,
                count,
                empirical_frequency: count as f64 / n,
                z_score: if sd > 0.0 { (count as f64 - n * p) / sd } else { 0.0 },
            }
        })
        .collect();
    Ok(UniformityReport {
        t,
        samples,
        seed,
        attempts,
        queries: oracle.ledger(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    const SUITE: &str = r#"
[[cell]]
name = "k3"
family = "lb-matchings"
n = 3
m = 3
gamma = 2
eps = [1.0, 0.5]
seeds = { start = 0, count = 5 }
expect_reject_at_least = 0.9

[[cell]]
name = "trees"
family = "control"
kind = "tree"
n = 40
seeds = { start = 10, count = 4 }
expect_reject_at_most = 0.0

[[cell]]
name = "bad"
family = "lb-matchings"
n = 100
m = 10
gamma = 4
seeds = { start = 0, count = 3 }
"#;

    #[test]
    fn config_expands_grids() {
        let config = SuiteConfig::parse(SUITE).unwrap();
        let labels: Vec<&str> = config.cells.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["k3[eps=1.0]", "k3[eps=0.5]", "trees", "bad"]);
        assert_eq!(config.cells[1].eps, 0.5);
        assert_eq!(config.cells[2].eps, DEFAULT_EPS);
        assert_eq!(config.cells[2].seeds, SeedRange { start: 10, count: 4 });
    }

    #[test]
    fn config_errors() {
        assert!(SuiteConfig::parse("[[cell]]\nname = \"x\"\n").is_err());
        let unknown = "[[cell]]\nname = \"x\"\nfamily = \"nope\"\nseeds = { start = 0, count = 1 }\n";
        assert!(matches!(SuiteConfig::parse(unknown), Err(Error::Config(_))));
    }

    #[test]
    fn suite_rows_and_checks() {
        let config = SuiteConfig::parse(SUITE).unwrap();
        let report = run_suite(&config, false);
        assert_eq!(report.records.len(), 5 + 5 + 4 + 1);
        let seeds: Vec<Option<u64>> = report.records[10..14].iter().map(|r| r.seed).collect();
        assert_eq!(seeds, [Some(10), Some(11), Some(12), Some(13)]);
        let bad = report.records.last().unwrap();
        assert!(bad.outcome.as_ref().unwrap_err().contains("must divide"));

        let s = &report.summaries;
        assert_eq!(s[0].rejection_frequency(), 1.0);
        assert_eq!(s[2].rejections, 0);
        assert_eq!(s[3].errors, 1);
        assert_eq!(s[3].check_passed, None);
        assert!(report.failed_checks().is_empty());
    }

    #[test]
    fn rerun_is_byte_identical() {
        let config = SuiteConfig::parse(SUITE).unwrap();
        let render = || {
            let report = run_suite(&config, false);
            let mut runs = Vec::new();
            let mut summary = Vec::new();
            report.write_runs_csv(&mut runs, false).unwrap();
            report.write_summary_csv(&mut summary).unwrap();
            (runs, summary)
        };
        let first = render();
        assert_eq!(first, render());
        let text = String::from_utf8(first.0).unwrap();
        assert!(text.starts_with("schema,cell,family,n,m,seed"));
        assert!(!text.lines().next().unwrap().contains("wall_ms"));
    }

    #[test]
    fn query_columns_match_ledgers() {
        let config = SuiteConfig::parse(SUITE).unwrap();
        let report = run_suite(&config, true);
        for record in &report.records {
            if let Ok(v) = &record.outcome {
                let p = &v.phases;
                assert_eq!(p.probe + p.sampling + p.intersection + p.validation, v.total_queries);
                assert!(record.wall_ms.is_some());
            }
        }
    }

    #[test]
    fn uniformity_on_triangle() {
        let g = triangle();
        let report = uniformity_report(&g, Threshold::new(2).unwrap(), 30_000, 4).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert_eq!(report.exact_ratio(), 1.0);
        assert!(report.empirical_ratio() < 1.1);
        assert!(report.max_abs_z() < 4.0);
        assert_eq!(report.queries.degree, report.attempts);
    }

    #[test]
    fn uniformity_single_edge_and_empty() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let report = uniformity_report(&g, Threshold::new(1).unwrap(), 100, 0).unwrap();
        assert_eq!(report.empirical_ratio(), 1.0);
        assert!(matches!(
            uniformity_report(&Graph::empty(3), Threshold::new(1).unwrap(), 10, 0),
            Err(Error::EmptySupport)
        ));
        // every vertex of K4 is heavy at t = 2
        assert!(matches!(
            uniformity_report(&complete(4), Threshold::new(2).unwrap(), 10, 0),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn uniformity_csv_layout() {
        let report = uniformity_report(&star(3), Threshold::new(3).unwrap(), 1000, 1).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("u,v,exact_probability"));
    }
}
