use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use trifree::bench::{run_suite, uniformity_report, SuiteConfig};
use trifree::estimator::{estimate_edges, EstimatorConfig};
use trifree::exact::{degeneracy, enumerate_triangles, exact_arboricity_small, greedy_packing};
use trifree::generators::{generate, ControlKind, FamilySpec, InstanceMetadata};
use trifree::graph::{load_graph, save_graph, Graph, GraphParams, Oracle};
use trifree::probe::probe_gamma_star;
use trifree::rng::{derive_seed, seeded_rng};
use trifree::sampler::{default_timeout, sample_edge};
use trifree::subgraph::{build_h, Threshold};
use trifree::tester::{test_triangle_freeness_with, Decision, ThresholdMode};

#[derive(Parser)]
#[command(
    name = "trifree",
    version,
    about = "Sublinear triangle-freeness testing in the general graph model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Edge-list validation and statistics.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Inspect the heavy/light subgraph H(G, t).
    #[command(subcommand)]
    Subgraph(SubgraphCommand),
    /// Run the edge-count estimator on H(G, t); prints CSV.
    EstimateEdges {
        path: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        fail_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
    /// Run the effective-arboricity probe.
    ProbeGamma {
        path: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw edges of H(G, t) with the rejection sampler; prints CSV.
    SampleEdges {
        path: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Attempts per draw; defaults to ⌈40·t/d̄⌉.
        #[arg(long)]
        timeout: Option<u64>,
    },
    /// Test triangle freeness; prints a JSON verdict. Exit code 0 = ACCEPT, 1 = REJECT, 2 = error.
    Test {
        path: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Validated)]
        threshold_mode: ModeArg,
    },
    /// Generate a certified instance: edge list plus `<out>.meta.json`.
    Gen(GenArgs),
    /// Exact brute-force answers.
    Oracle {
        #[arg(value_enum)]
        query: OracleQuery,
        path: PathBuf,
    },
    /// Experiment harness.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Subcommand)]
enum GraphCommand {
    Validate { path: PathBuf },
    Stats { path: PathBuf },
}

#[derive(Subcommand)]
enum SubgraphCommand {
    /// Count and list the edges of H(G, t).
    EdgesOfH {
        path: PathBuf,
        #[arg(long)]
        t: usize,
        /// Print the count only.
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Run a TOML suite config; exits 1 if any check in the config fails.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Per-cell summary CSV; defaults to `<out>.summary.csv`.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Add a wall_ms column. Timing makes reruns differ byte-wise.
        #[arg(long)]
        with_timing: bool,
    },
    /// Compare sampler frequencies with the exact edge distribution.
    Uniformity {
        path: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Validated,
    Paper,
}

impl From<ModeArg> for ThresholdMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Validated => Self::Validated,
            ModeArg::Paper => Self::Paper,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleQuery {
    Triangles,
    Packing,
    Degeneracy,
    Arboricity,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    LbMatchings,
    LbIsolatedPad,
    LbBipartitePad,
    Planted,
    Control,
    CompleteBipartite,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    gamma: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Control kind: tree, cycle-even, bipartite-random or forest.
    #[arg(long)]
    kind: Option<String>,
    /// Maximum base degree for planted instances.
    #[arg(long)]
    d: Option<usize>,
    /// Number of planted triangles.
    #[arg(long)]
    k: Option<usize>,
    /// Vertices of the planted base of a bipartite pad.
    #[arg(long)]
    base_n: Option<usize>,
    /// Sides of a complete bipartite graph.
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

fn need<T>(value: Option<T>, flag: &str) -> anyhow::Result<T> {
    value.with_context(|| format!("--{flag} is required for this family"))
}

impl GenArgs {
    fn spec(&self) -> anyhow::Result<FamilySpec> {
        Ok(match self.family {
            FamilyArg::LbMatchings => FamilySpec::LbMatchings {
                n: need(self.n, "n")?,
                m: need(self.m, "m")?,
                gamma: need(self.gamma, "gamma")?,
            },
            FamilyArg::LbIsolatedPad => FamilySpec::LbIsolatedPad {
                n: need(self.n, "n")?,
                m: need(self.m, "m")?,
                gamma: need(self.gamma, "gamma")?,
            },
            FamilyArg::LbBipartitePad => FamilySpec::LbBipartitePad {
                n: need(self.n, "n")?,
                base_n: need(self.base_n, "base-n")?,
                d: self.d.unwrap_or(0),
                k: need(self.k, "k")?,
                gamma: need(self.gamma, "gamma")?,
            },
            FamilyArg::Planted => FamilySpec::Planted {
                n: need(self.n, "n")?,
                d: self.d.unwrap_or(0),
                k: need(self.k, "k")?,
            },
            FamilyArg::Control => FamilySpec::Control {
                kind: need(self.kind.as_deref(), "kind")?.parse::<ControlKind>()?,
                n: need(self.n, "n")?,
                m: self.m,
            },
            FamilyArg::CompleteBipartite => FamilySpec::CompleteBipartite {
                a: need(self.a, "a")?,
                b: need(self.b, "b")?,
            },
        })
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    spec: &'a FamilySpec,
    seed: u64,
    #[serde(flatten)]
    metadata: InstanceMetadata,
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn threshold(t: usize) -> anyhow::Result<Threshold> {
    Ok(Threshold::new(t)?)
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn graph_stats(graph: &Graph) -> serde_json::Value {
    json!({
        "n": graph.n(),
        "m": graph.m(),
        "avg_degree": graph.avg_degree(),
        "max_degree": graph.max_degree(),
        "degeneracy": degeneracy(graph),
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Graph(GraphCommand::Validate { path }) => {
            let g = load_graph(&path)?;
            writeln!(stdout, "ok: n = {}, m = {}", g.n(), g.m())?;
        }
        Command::Graph(GraphCommand::Stats { path }) => {
            let g = load_graph(&path)?;
            writeln!(stdout, "{}", serde_json::to_string_pretty(&graph_stats(&g))?)?;
        }
        Command::Subgraph(SubgraphCommand::EdgesOfH { path, t, count_only }) => {
            let g = load_graph(&path)?;
            let h = build_h(&g, threshold(t)?);
            writeln!(stdout, "{}", h.m())?;
            if !count_only {
                for (u, v) in h.edges() {
                    writeln!(stdout, "{u} {v}")?;
                }
            }
        }
        Command::EstimateEdges {
            path,
            t,
            eps,
            fail_prob,
            seed,
            trials,
        } => {
            let g = load_graph(&path)?;
            let t = threshold(t)?;
            let config = EstimatorConfig::new(eps, t, fail_prob, g.n(), g.m())?;
            let exact = build_h(&g, t).m();
            writeln!(
                stdout,
                "trial,seed,estimate,exact_m_prime,samples,degree_queries,neighbor_queries,total_queries"
            )?;
            for trial in 0..trials {
                let trial_seed = derive_seed(seed, trial);
                let mut oracle = Oracle::new(&g);
                let est = estimate_edges(&mut oracle, &config, trial_seed)?;
                let q = est.queries_used;
                writeln!(
                    stdout,
                    "{trial},{trial_seed},{},{exact},{},{},{},{}",
                    est.value,
                    est.samples_used,
                    q.degree,
                    q.neighbor,
                    q.total()
                )?;
            }
        }
        Command::ProbeGamma { path, eps, seed } => {
            let g = load_graph(&path)?;
            let params = GraphParams::for_graph(&g, eps)?;
            let mut oracle = Oracle::new(&g);
            let result = probe_gamma_star(&mut oracle, &params, seed)?;
            writeln!(stdout, "gamma_star: {}", result.gamma_star)?;
            writeln!(stdout, "threshold: {}", result.threshold(eps))?;
            writeln!(stdout, "exhausted: {}", result.exhausted)?;
            writeln!(
                stdout,
                "{:>4} {:>10} {:>10} {:>14} {:>10}",
                "iter", "gamma", "t", "estimate", "samples"
            )?;
            for (i, it) in result.per_iteration.iter().enumerate() {
                writeln!(
                    stdout,
                    "{:>4} {:>10} {:>10} {:>14.2} {:>10}",
                    i + 1,
                    it.gamma,
                    it.t,
                    it.estimate,
                    it.samples
                )?;
            }
            let q = result.queries_used;
            writeln!(
                stdout,
                "queries: degree {} neighbor {} pair {} total {}",
                q.degree,
                q.neighbor,
                q.pair,
                q.total()
            )?;
        }
        Command::SampleEdges {
            path,
            t,
            count,
            seed,
            timeout,
        } => {
            let g = load_graph(&path)?;
            let t = threshold(t)?;
            let timeout = match timeout {
                Some(x) => x,
                None => default_timeout(t, &GraphParams::for_graph(&g, 1.0)?),
            };
            let mut rng = seeded_rng(seed);
            let mut oracle = Oracle::new(&g);
            writeln!(stdout, "draw,light,other,attempts")?;
            for draw in 0..count {
                let sample = sample_edge(&mut oracle, t, timeout, &mut rng)?;
                match sample.edge {
                    Some(e) => writeln!(stdout, "{draw},{},{},{}", e.light, e.other, sample.attempts)?,
                    None => writeln!(stdout, "{draw},,,{}", sample.attempts)?,
                }
            }
        }
        Command::Test {
            path,
            eps,
            seed,
            threshold_mode,
        } => {
            let g = load_graph(&path)?;
            let params = GraphParams::for_graph(&g, eps)?;
            let mut oracle = Oracle::new(&g);
            let verdict = test_triangle_freeness_with(&mut oracle, &params, seed, threshold_mode.into())?;
            let q = verdict.total_queries;
            let out = json!({
                "decision": verdict.decision,
                "witness": verdict.witness,
                "gamma_star": verdict.gamma_star,
                "threshold": verdict.threshold.get(),
                "threshold_mode": ThresholdMode::from(threshold_mode).to_string(),
                "rounds": verdict.rounds_run,
                "sampler_timeouts": verdict.sampler_timeouts,
                "probe_exhausted": verdict.probe_exhausted,
                "queries": { "degree": q.degree, "neighbor": q.neighbor, "pair": q.pair, "total": q.total() },
                "phases": verdict.phases,
                "seed": verdict.seed,
            });
            writeln!(stdout, "{}", serde_json::to_string_pretty(&out)?)?;
            return Ok(match verdict.decision {
                Decision::Accept => ExitCode::SUCCESS,
                Decision::Reject => ExitCode::from(1),
            });
        }
        Command::Gen(args) => {
            let spec = args.spec()?;
            let instance = generate(&spec, args.seed)?;
            save_graph(&instance.graph, &args.out)?;
            let sidecar = Sidecar {
                spec: &spec,
                seed: args.seed,
                metadata: instance.metadata(),
            };
            let meta_path = sidecar_path(&args.out);
            let mut meta = create(&meta_path)?;
            serde_json::to_writer_pretty(&mut meta, &sidecar)?;
            writeln!(meta)?;
            meta.flush()?;
            writeln!(
                stdout,
                "wrote {} (n = {}, m = {}) and {}",
                args.out.display(),
                instance.graph.n(),
                instance.graph.m(),
                meta_path.display()
            )?;
        }
        Command::Oracle { query, path } => {
            let g = load_graph(&path)?;
            match query {
                OracleQuery::Triangles => {
                    let triangles = enumerate_triangles(&g);
                    writeln!(stdout, "{}", triangles.len())?;
                    for [a, b, c] in triangles {
                        writeln!(stdout, "{a} {b} {c}")?;
                    }
                }
                OracleQuery::Packing => {
                    let packing = greedy_packing(&g);
                    writeln!(stdout, "{}", packing.size())?;
                    for [a, b, c] in packing.triangles {
                        writeln!(stdout, "{a} {b} {c}")?;
                    }
                }
                OracleQuery::Degeneracy => writeln!(stdout, "{}", degeneracy(&g))?,
                OracleQuery::Arboricity => writeln!(stdout, "{}", exact_arboricity_small(&g)?)?,
            }
        }
        Command::Bench(BenchCommand::Run {
            config,
            out,
            summary,
            with_timing,
        }) => {
            let suite = SuiteConfig::load(&config)?;
            let report = run_suite(&suite, with_timing);
            let mut runs = create(&out)?;
            report.write_runs_csv(&mut runs, with_timing)?;
            runs.flush()?;
            let summary_path = summary.unwrap_or_else(|| {
                let mut name = out.as_os_str().to_owned();
                name.push(".summary.csv");
                PathBuf::from(name)
            });
            let mut summary_file = create(&summary_path)?;
            report.write_summary_csv(&mut summary_file)?;
            summary_file.flush()?;
            for s in &report.summaries {
                let check = match s.check_passed {
                    None => "",
                    Some(true) => "  [pass]",
                    Some(false) => "  [FAIL]",
                };
                writeln!(
                    stdout,
                    "{}: runs {} errors {} rejection {:.3} mean queries {:.1}{check}",
                    s.cell,
                    s.runs,
                    s.errors,
                    s.rejection_frequency(),
                    s.mean_queries
                )?;
            }
            let failed = report.failed_checks();
            if !failed.is_empty() {
                writeln!(stdout, "failed checks: {}", failed.join(", "))?;
                return Ok(ExitCode::from(1));
            }
        }
        Command::Bench(BenchCommand::Uniformity {
            path,
            t,
            samples,
            seed,
            out,
        }) => {
            let g = load_graph(&path)?;
            let report = uniformity_report(&g, threshold(t)?, samples, seed)?;
            let mut file = create(&out)?;
            report.write_csv(&mut file)?;
            file.flush()?;
            writeln!(stdout, "edges: {}", report.rows.len())?;
            writeln!(stdout, "exact max/min: {:.6}", report.exact_ratio())?;
            writeln!(stdout, "empirical max/min: {:.6}", report.empirical_ratio())?;
            writeln!(stdout, "max |z|: {:.3}", report.max_abs_z())?;
            if report.exact_ratio() > 2.0 + 1e-9 {
                bail!("exact max/min ratio {} exceeds 2", report.exact_ratio());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Output piped into a reader that closed early, such as `head`.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|cause| {
        cause
            .downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
