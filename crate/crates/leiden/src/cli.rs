//! The `leiden` command line: `detect`, `audit` and `bench`.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use leiden_core::quality::community_sizes;
use leiden_core::{
    disconnected_communities, leiden, modularity, CsrGraph, LabelStrategy, LeidenConfig,
    LeidenResult, PhaseSeconds, RefineStrategy,
};

use crate::io::{load_graph, read_membership, write_membership};
use crate::report::{rate, BenchRow, PhaseReport, RunReport, SizeStats};
use crate::runtime::ThreadPoolRuntime;

#[derive(Debug, Parser)]
#[command(
    name = "leiden",
    version,
    about = "Parallel Leiden community detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find communities and write `vertex<TAB>community` lines.
    Detect(DetectArgs),
    /// Score a membership file: modularity and disconnected communities.
    /// Exits 1 when any community is disconnected.
    Audit(AuditArgs),
    /// Time detection over thread counts and strategies; prints CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph file: `.mtx` for MatrixMarket, anything else is an edge list.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Worker threads; 0 uses every available CPU.
    #[arg(long, short, env = "LEIDEN_THREADS", default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args, Default)]
pub struct AlgoArgs {
    /// `key = value` lines applied before the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Initial per-iteration convergence threshold [default: 0.01]
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Divisor applied to the tolerance after each pass [default: 10]
    #[arg(long)]
    pub tolerance_drop: Option<f64>,
    /// Stop when a pass keeps more than this fraction of vertices [default: 0.8]
    #[arg(long)]
    pub aggregation_tolerance: Option<f64>,
    /// Local-moving iterations per pass [default: 20]
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Upper bound on passes [default: 10]
    #[arg(long)]
    pub max_passes: Option<usize>,
    /// Refinement: greedy | random [default: greedy]
    #[arg(long)]
    pub refine: Option<RefineStrategy>,
    /// Super-vertex labels: move | refine [default: move]
    #[arg(long)]
    pub label: Option<LabelStrategy>,
    /// Nonzero xorshift32 seed for random refinement [default: 1]
    #[arg(long)]
    pub seed: Option<u32>,
    /// Rescan every vertex in every local-moving iteration.
    #[arg(long)]
    pub no_prune: bool,
    /// Vertices claimed per scheduling step.
    #[arg(long)]
    pub chunk_size: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub algo: AlgoArgs,
    /// Membership output file.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Runs to average timings over.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Membership file as written by `detect`.
    #[arg(long, short)]
    pub membership: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Graph file: `.mtx` for MatrixMarket, anything else is an edge list.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Thread counts to sweep, e.g. `1,2,4,8`.
    #[arg(
        long,
        value_delimiter = ',',
        env = "LEIDEN_THREADS",
        default_value = "1"
    )]
    pub threads_list: Vec<usize>,
    /// `all`, or a list of `refine:label` pairs such as `greedy:move,random:refine`.
    /// Defaults to the pair selected by --refine and --label.
    #[arg(long)]
    pub strategies: Option<String>,
    #[command(flatten)]
    pub algo: AlgoArgs,
    #[arg(long, default_value_t = 5)]
    pub repeat: usize,
    /// CSV output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! fail {
    ($($t:tt)*) => { CliError(format!($($t)*)) };
}

/// Parses `args` (program name first) and runs the command, writing
/// reports to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Detect(a) => detect(a, out),
        Command::Audit(a) => audit(a, out),
        Command::Bench(a) => bench(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn load(path: &Path) -> Result<CsrGraph, CliError> {
    load_graph(path).map_err(|e| match e {
        crate::io::LoadError::Io { .. } => fail!("cannot read {e}"),
        other => fail!("{}: {other}", path.display()),
    })
}

fn runtime(threads: usize) -> Result<ThreadPoolRuntime, CliError> {
    ThreadPoolRuntime::new(threads).map_err(|e| fail!("cannot start {threads} threads: {e}"))
}

fn resolve_threads(threads: usize) -> usize {
    if threads == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        threads
    }
}

impl AlgoArgs {
    pub fn config(&self, threads: usize) -> Result<LeidenConfig, CliError> {
        let mut cfg = LeidenConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| fail!("cannot read {}: {e}", path.display()))?;
            for (no, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    fail!("{}:{}: expected `key = value`", path.display(), no + 1)
                })?;
                cfg.set(k.trim(), v)
                    .map_err(|e| fail!("{}:{}: {} ({e})", path.display(), no + 1, k.trim()))?;
            }
        }
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = self.tolerance_drop {
            cfg.tolerance_drop = v;
        }
        if let Some(v) = self.aggregation_tolerance {
            cfg.aggregation_tolerance = v;
        }
        if let Some(v) = self.max_iterations {
            cfg.max_iterations = v;
        }
        if let Some(v) = self.max_passes {
            cfg.max_passes = v;
        }
        if let Some(v) = self.refine {
            cfg.refine_strategy = v;
        }
        if let Some(v) = self.label {
            cfg.label_strategy = v;
        }
        if let Some(v) = self.seed {
            cfg.rng_seed = v;
        }
        if let Some(v) = self.chunk_size {
            cfg.chunk_size = v;
        }
        if self.no_prune {
            cfg.prune = false;
        }
        cfg.threads = resolve_threads(threads);
        cfg.validate()
            .map_err(|e| fail!("invalid configuration: {e}"))?;
        Ok(cfg)
    }
}

/// Mean timings over `repeat` runs plus the last result.
struct Timed {
    result: LeidenResult,
    phases: PhaseSeconds,
    wall: f64,
}

fn timed_runs(
    g: &CsrGraph,
    cfg: &LeidenConfig,
    rt: &ThreadPoolRuntime,
    repeat: usize,
) -> Result<Timed, CliError> {
    let repeat = repeat.max(1);
    let mut sum = PhaseSeconds::default();
    let mut wall = 0.0;
    let mut last = None;
    for _ in 0..repeat {
        let start = Instant::now();
        let r = leiden(g, cfg, rt).map_err(|e| fail!("invalid configuration: {e}"))?;
        wall += start.elapsed().as_secs_f64();
        sum.local_moving += r.phase_seconds.local_moving;
        sum.refinement += r.phase_seconds.refinement;
        sum.aggregation += r.phase_seconds.aggregation;
        sum.other += r.phase_seconds.other;
        last = Some(r);
    }
    let k = repeat as f64;
    Ok(Timed {
        result: last.expect("at least one run"),
        phases: PhaseSeconds {
            local_moving: sum.local_moving / k,
            refinement: sum.refinement / k,
            aggregation: sum.aggregation / k,
            other: sum.other / k,
        },
        wall: wall / k,
    })
}

/// Modularity (absent for edgeless graphs), sizes and disconnected flags.
struct Quality {
    modularity: Option<f64>,
    sizes: Vec<usize>,
    disconnected: Vec<bool>,
}

impl Quality {
    fn num_disconnected(&self) -> usize {
        self.disconnected.iter().filter(|&&d| d).count()
    }

    fn num_communities(&self) -> usize {
        self.sizes.iter().filter(|&&s| s > 0).count()
    }
}

fn quality(g: &CsrGraph, membership: &[u32], rt: &ThreadPoolRuntime) -> Result<Quality, CliError> {
    let disconnected = disconnected_communities(g, membership, rt).map_err(|e| fail!("{e}"))?;
    let modularity = if g.total_weight() > 0.0 {
        Some(modularity(g, membership, rt).map_err(|e| fail!("{e}"))?)
    } else {
        None
    };
    Ok(Quality {
        modularity,
        sizes: community_sizes(rt, membership),
        disconnected,
    })
}

fn graph_name(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn fmt_q(q: Option<f64>) -> String {
    q.map_or_else(|| "undefined (no edges)".to_owned(), |q| format!("{q:.6}"))
}

fn io_fail(e: std::io::Error) -> CliError {
    fail!("cannot write output: {e}")
}

fn detect(a: &DetectArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = a.algo.config(a.graph.threads)?;
    let g = load(&a.graph.input)?;
    let rt = runtime(cfg.threads)?;
    let t = timed_runs(&g, &cfg, &rt, a.repeat)?;
    let q = quality(&g, &t.result.membership, &rt)?;
    if let Some(path) = &a.output {
        write_membership(path, &t.result.membership).map_err(|e| fail!("cannot write {e}"))?;
    }
    let report = RunReport {
        graph_name: graph_name(&a.graph.input),
        num_vertices: g.num_vertices(),
        num_edges: g.num_arcs(),
        config: (&cfg).into(),
        repeat: a.repeat.max(1),
        num_communities: t.result.num_communities,
        passes: t.result.passes,
        iterations: t.result.iterations.clone(),
        phase_seconds: t.phases.into(),
        modularity: q.modularity,
        community_sizes: SizeStats::of(&q.sizes),
        num_disconnected: q.num_disconnected(),
        disconnected_fraction: fraction(q.num_disconnected(), t.result.num_communities),
        wall_seconds: t.wall,
        edges_per_second: rate(g.num_arcs(), t.wall),
    };
    if a.json {
        let text = serde_json::to_string_pretty(&report).map_err(|e| fail!("{e}"))?;
        writeln!(out, "{text}").map_err(io_fail)?;
    } else {
        print_run(out, &report).map_err(io_fail)?;
    }
    Ok(0)
}

fn fraction(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        part as f64 / whole as f64
    }
}

fn print_run(out: &mut dyn Write, r: &RunReport) -> std::io::Result<()> {
    let p: PhaseReport = r.phase_seconds;
    writeln!(
        out,
        "graph            {} (N={}, M={})",
        r.graph_name, r.num_vertices, r.num_edges
    )?;
    writeln!(
        out,
        "config           refine={} label={} seed={} threads={} repeat={}",
        r.config.refine, r.config.label, r.config.seed, r.config.threads, r.repeat
    )?;
    writeln!(out, "communities      {}", r.num_communities)?;
    writeln!(out, "modularity       {}", fmt_q(r.modularity))?;
    writeln!(
        out,
        "disconnected     {} ({:.4})",
        r.num_disconnected, r.disconnected_fraction
    )?;
    writeln!(out, "passes           {} {:?}", r.passes, r.iterations)?;
    writeln!(
        out,
        "phase seconds    local-moving={:.6} refinement={:.6} aggregation={:.6} other={:.6}",
        p.local_moving, p.refinement, p.aggregation, p.other
    )?;
    writeln!(out, "wall seconds     {:.6}", r.wall_seconds)?;
    writeln!(out, "edges/s          {:.0}", r.edges_per_second)
}

#[derive(serde::Serialize)]
struct AuditJson {
    modularity: Option<f64>,
    num_communities: usize,
    community_sizes: SizeStats,
    num_disconnected: usize,
    disconnected_fraction: f64,
}

fn audit(a: &AuditArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load(&a.graph.input)?;
    let membership = read_membership(&a.membership).map_err(|e| match e {
        crate::io::LoadError::Io { .. } => fail!("cannot read {e}"),
        other => fail!("{}: {other}", a.membership.display()),
    })?;
    if membership.len() != g.num_vertices() {
        return Err(fail!(
            "membership/graph size mismatch: {} entries for {} vertices",
            membership.len(),
            g.num_vertices()
        ));
    }
    let rt = runtime(resolve_threads(a.graph.threads))?;
    let q = quality(&g, &membership, &rt)?;
    let report = AuditJson {
        modularity: q.modularity,
        num_communities: q.num_communities(),
        community_sizes: SizeStats::of(&q.sizes),
        num_disconnected: q.num_disconnected(),
        disconnected_fraction: fraction(q.num_disconnected(), q.num_communities()),
    };
    let written = if a.json {
        serde_json::to_string_pretty(&report)
            .map_err(|e| fail!("{e}"))
            .and_then(|t| writeln!(out, "{t}").map_err(io_fail))
    } else {
        (|| {
            writeln!(out, "modularity       {}", fmt_q(report.modularity))?;
            writeln!(out, "communities      {}", report.num_communities)?;
            let s = report.community_sizes;
            writeln!(
                out,
                "sizes            min={} max={} mean={:.2}",
                s.min, s.max, s.mean
            )?;
            writeln!(out, "disconnected     {}", report.num_disconnected)?;
            writeln!(out, "fraction         {:.6}", report.disconnected_fraction)
        })()
        .map_err(io_fail)
    };
    written?;
    Ok(if report.num_disconnected == 0 { 0 } else { 1 })
}

/// Parses a `--strategies` value.
pub fn parse_strategies(list: &str) -> Result<Vec<(RefineStrategy, LabelStrategy)>, CliError> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(RefineStrategy::ALL
            .iter()
            .flat_map(|&r| LabelStrategy::ALL.iter().map(move |&l| (r, l)))
            .collect());
    }
    list.split(',')
        .map(|item| {
            let (r, l) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| fail!("strategy {item:?} is not `refine:label`"))?;
            let r = r
                .parse()
                .map_err(|_| fail!("unknown refine strategy {r:?}"))?;
            let l = l
                .parse()
                .map_err(|_| fail!("unknown label strategy {l:?}"))?;
            Ok((r, l))
        })
        .collect()
}

fn bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let base = a.algo.config(1)?;
    let strategies = match &a.strategies {
        Some(s) => parse_strategies(s)?,
        None => vec![(base.refine_strategy, base.label_strategy)],
    };
    if a.threads_list.is_empty() {
        return Err(fail!("--threads-list is empty"));
    }
    let threads: Vec<usize> = a.threads_list.iter().map(|&t| resolve_threads(t)).collect();
    let g = load(&a.input)?;

    let mut rows = Vec::new();
    for &(refine, label) in &strategies {
        let mut baseline = None;
        let first = rows.len();
        for &t in &threads {
            let cfg = LeidenConfig {
                refine_strategy: refine,
                label_strategy: label,
                threads: t,
                ..base.clone()
            };
            let rt = runtime(t)?;
            let timed = timed_runs(&g, &cfg, &rt, a.repeat)?;
            let q = quality(&g, &timed.result.membership, &rt)?;
            let p = timed.phases;
            let other = (timed.wall - p.local_moving - p.refinement - p.aggregation).max(0.0);
            if baseline.is_none_or(|(bt, _)| t < bt) {
                baseline = Some((t, timed.wall));
            }
            rows.push(BenchRow {
                threads: t,
                refine: refine.to_string(),
                label: label.to_string(),
                repeat: a.repeat.max(1),
                wall_seconds: timed.wall,
                local_moving_seconds: p.local_moving,
                refinement_seconds: p.refinement,
                aggregation_seconds: p.aggregation,
                other_seconds: other,
                modularity: q.modularity.unwrap_or(f64::NAN),
                num_communities: timed.result.num_communities,
                num_disconnected: q.num_disconnected(),
                speedup: 0.0,
            });
        }
        let (_, base_wall) = baseline.expect("threads list is not empty");
        for row in &mut rows[first..] {
            row.speedup = if row.wall_seconds > 0.0 {
                base_wall / row.wall_seconds
            } else {
                1.0
            };
        }
    }

    let sink: Box<dyn Write + '_> = match &a.output {
        Some(path) => Box::new(
            std::fs::File::create(path)
                .map_err(|e| fail!("cannot write {}: {e}", path.display()))?,
        ),
        None => Box::new(&mut *out),
    };
    let mut w = csv::Writer::from_writer(sink);
    for row in &rows {
        w.serialize(row)
            .map_err(|e| fail!("cannot write CSV: {e}"))?;
    }
    w.flush().map_err(io_fail)?;
    Ok(0)
}
