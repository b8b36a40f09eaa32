use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mindist::exact::{apsp, eccentricities_from_matrix, ExactSummary};
use mindist::generators::{
    choose_t, gen_connected_dag, gen_connectivity_gadget, gen_dag_gadget, gen_random_dag, gen_triangle_free,
    gen_triangle_instance, reduce_triangle_to_minradius, TriangleInstance,
};
use mindist::harness::{cmd_bench, cmd_verify, BenchSpec, CorpusSpec, VerifyOptions, DEFAULT_ORACLE_CAP};
use mindist::io::{self as graph_io, Format};
use mindist::mindiam::EpsilonChoice;
use mindist::minecc::PartitionStrategy;
use mindist::registry::{Params, Registry};
use mindist::{Dag, Error};

#[derive(Parser)]
#[command(name = "mindist", version, about = "Min-distance eccentricity, radius and diameter of DAGs")]
struct Cli {
    /// Graph input; stdin when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Graph format for input and output.
    #[arg(long, global = true, value_enum, default_value_t = GraphFormat::Edgelist)]
    format: GraphFormat,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print counters and timings to stderr.
    #[arg(long, global = true)]
    stats: bool,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Edgelist,
    Json,
}

impl From<GraphFormat> for Format {
    fn from(f: GraphFormat) -> Self {
        match f {
            GraphFormat::Edgelist => Format::EdgeList,
            GraphFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate graphs and instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Exact eccentricities, radius and diameter.
    Exact {
        /// Also write the all-pairs distance matrix as CSV.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Approximate eccentricities, radius or diameter.
    #[command(subcommand)]
    Approx(ApproxCommand),
    /// Check every estimator against the exact oracle on a corpus.
    Verify(VerifyArgs),
    /// Run estimators on generated graphs and emit a result table.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Random DAG with a hidden topological order.
    RandomDag {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        w_max: u64,
        /// Include a path through the order so every eccentricity is finite.
        #[arg(long)]
        connected: bool,
    },
    /// Tripartite graph, written as JSON.
    Triangle(TriangleArgs),
    /// Min-radius instance from a tripartite graph, plus a JSON layer map.
    Reduction {
        /// Gadget parameter; derived from --delta when given instead.
        #[arg(long, conflicts_with = "delta")]
        t: Option<u32>,
        #[arg(long)]
        delta: Option<f64>,
        /// Layer map path; defaults to `<out>.layers.json`.
        #[arg(long)]
        layers: Option<PathBuf>,
        /// Generate the tripartite graph instead of reading it from --input.
        #[command(flatten)]
        triangle: TriangleArgs,
    },
    /// A gadget on its own, as a graph.
    Gadget {
        #[arg(value_enum)]
        kind: GadgetKind,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 2)]
        t: u32,
    },
}

#[derive(Args)]
struct TriangleArgs {
    #[arg(long, default_value_t = 12)]
    a: usize,
    #[arg(long, default_value_t = 12)]
    b: usize,
    #[arg(long, default_value_t = 12)]
    c: usize,
    /// Edge probability per part pair.
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    #[arg(long)]
    planted: bool,
    #[arg(long, conflicts_with = "planted")]
    triangle_free: bool,
}

impl TriangleArgs {
    fn generate(&self, seed: u64) -> Result<TriangleInstance> {
        let sizes = (self.a, self.b, self.c);
        Ok(if self.triangle_free {
            gen_triangle_free(sizes, self.p, seed)?
        } else {
            gen_triangle_instance(sizes, self.p, self.planted, seed)?
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetKind {
    Dag,
    Connectivity,
}

#[derive(Subcommand)]
enum ApproxCommand {
    /// Per-vertex estimates within a factor k + delta.
    Ecc {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[command(flatten)]
        common: ApproxArgs,
    },
    /// Radius estimate within a factor k.
    Radius {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[command(flatten)]
        common: ApproxArgs,
    },
    /// Diameter estimate within 3/2, unweighted graphs only.
    Diam {
        #[command(flatten)]
        epsilon: EpsilonArgs,
        #[command(flatten)]
        common: ApproxArgs,
    },
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long, default_value_t = PartitionStrategy::Auto)]
    strategy: PartitionStrategy,
    /// Compare against the exact values; exit 1 on a contract violation.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct EpsilonArgs {
    /// Fixed near-set exponent in [0, 1].
    #[arg(long, conflicts_with = "auto_epsilon")]
    epsilon: Option<f64>,
    #[arg(long, value_enum, default_value_t = AutoEpsilon::Formula)]
    auto_epsilon: AutoEpsilon,
}

#[derive(Clone, Copy, ValueEnum)]
enum AutoEpsilon {
    Formula,
    Pragmatic,
}

impl EpsilonArgs {
    fn choice(&self) -> EpsilonChoice {
        match (self.epsilon, self.auto_epsilon) {
            (Some(e), _) => EpsilonChoice::Fixed(e),
            (None, AutoEpsilon::Formula) => EpsilonChoice::Formula,
            (None, AutoEpsilon::Pragmatic) => EpsilonChoice::Pragmatic,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Corpus as JSON; the built-in 600-instance corpus when omitted.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Keep only instances with at most this many vertices.
    #[arg(long)]
    max_n: Option<usize>,
    /// Keep only the first N instances.
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3])]
    ks: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1.0])]
    deltas: Vec<f64>,
    #[arg(long, default_value_t = PartitionStrategy::Auto)]
    strategy: PartitionStrategy,
    #[command(flatten)]
    epsilon: EpsilonArgs,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    #[arg(long)]
    no_certifiers: bool,
    /// Self-test: replace this estimator's output with garbage.
    #[arg(long, hide = true)]
    corrupt: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 4096, 16384])]
    sizes: Vec<usize>,
    /// Edges per vertex.
    #[arg(long, default_value_t = 4.0)]
    density: f64,
    #[arg(long, default_value_t = 1)]
    w_max: u64,
    /// Plain random DAGs instead of ones with a path backbone.
    #[arg(long)]
    unconnected: bool,
    #[arg(long = "algo", value_delimiter = ',', default_values_t = [String::from("radius-approx")])]
    algorithms: Vec<String>,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = PartitionStrategy::Auto)]
    strategy: PartitionStrategy,
    #[command(flatten)]
    epsilon: EpsilonArgs,
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    /// Also compute exact values and ratios.
    #[arg(long)]
    exact: bool,
    /// Allow --exact above the oracle cap.
    #[arg(long)]
    force: bool,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    emit: TableFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

/// Exit status for a failed run: bad input data is an I/O error, anything
/// else the caller asked for is a usage error.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::Io(_)
            | Error::Parse { .. }
            | Error::CycleDetected
            | Error::NegativeWeight(..)
            | Error::VertexOutOfRange { .. }
            | Error::WeightOverflow,
        ) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

struct Io<'a> {
    cli: &'a Cli,
}

impl Io<'_> {
    fn read_input(&self) -> Result<String> {
        let mut text = String::new();
        match &self.cli.input {
            Some(path) => text = read_file(path)?,
            None => {
                io::stdin().read_to_string(&mut text).map_err(|e| Error::Io(format!("stdin: {e}")))?;
            }
        }
        Ok(text)
    }

    fn read_graph(&self) -> Result<Dag> {
        Ok(graph_io::parse(&self.read_input()?, self.cli.format.into())?)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.cli.out {
            Some(path) => write_file(path, text),
            None => io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Error::Io(format!("stdout: {e}")).into()),
        }
    }

    fn emit_graph(&self, dag: &Dag) -> Result<()> {
        self.emit(&graph_io::write(dag, self.cli.format.into()))
    }

    fn emit_json(&self, value: &impl serde::Serialize) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.emit(&text)
    }

    fn stat(&self, line: impl AsRef<str>) {
        if self.cli.stats {
            eprintln!("{}", line.as_ref());
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    Ok(fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?)
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse {
            line: e.line(),
            message: format!("{what}: {e}"),
        }
        .into()
    })
}

/// Returns whether every check passed.
fn run(cli: &Cli) -> Result<bool> {
    let io = Io { cli };
    let start = Instant::now();
    match &cli.command {
        Command::Gen(cmd) => gen(&io, cmd)?,
        Command::Exact { matrix } => {
            let dag = io.read_graph()?;
            let m = apsp(&dag);
            let summary = ExactSummary::from_eccentricities(eccentricities_from_matrix(&m))?;
            if let Some(path) = matrix {
                write_file(path, &m.to_csv())?;
            }
            io.emit_json(&summary)?;
            io.stat(format!("n={} m={} sssp_calls={} ms={:.1}", dag.n(), dag.m(), dag.n(), ms(start)));
        }
        Command::Approx(cmd) => return approx(&io, cmd),
        Command::Verify(args) => return verify(&io, args),
        Command::Bench(args) => bench(&io, args)?,
    }
    Ok(true)
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

fn gen(io: &Io, cmd: &GenCommand) -> Result<()> {
    let seed = io.cli.seed;
    match cmd {
        GenCommand::RandomDag { n, m, w_max, connected } => {
            let dag = if *connected {
                gen_connected_dag(*n, *m, *w_max, seed)?
            } else {
                gen_random_dag(*n, *m, *w_max, seed)?
            };
            io.emit_graph(&dag)
        }
        GenCommand::Triangle(args) => io.emit_json(&args.generate(seed)?),
        GenCommand::Reduction { t, delta, layers, triangle } => {
            let layers_path = match (layers, &io.cli.out) {
                (Some(path), _) => path.clone(),
                (None, Some(out)) => {
                    let mut name = out.clone().into_os_string();
                    name.push(".layers.json");
                    PathBuf::from(name)
                }
                (None, None) => bail!(Error::InvalidParameter(
                    "the layer map needs --layers or --out".into()
                )),
            };
            let g: TriangleInstance = match &io.cli.input {
                Some(_) => parse_json(&io.read_input()?, "tripartite graph")?,
                None => triangle.generate(seed)?,
            };
            let t = match (t, delta) {
                (Some(t), _) => *t,
                (None, Some(d)) => choose_t(*d)?,
                (None, None) => 3,
            };
            let red = reduce_triangle_to_minradius(&g, t)?;
            io.emit_graph(&red.dag)?;
            let mut map = serde_json::to_string_pretty(&red.layer_map())?;
            map.push('\n');
            write_file(&layers_path, &map)?;
            io.stat(format!("t={t} n={} m={} layers={}", red.dag.n(), red.dag.m(), layers_path.display()));
            Ok(())
        }
        GenCommand::Gadget { kind, size, t } => {
            let dag = match kind {
                GadgetKind::Dag => {
                    let base: Vec<usize> = (0..*size).collect();
                    let g = gen_dag_gadget(&base, *t, *size)?;
                    let edges: Vec<_> = g.edges.iter().map(|&(u, v)| (u, v, 1)).collect();
                    Dag::new(size + g.hubs.len(), &edges)?
                }
                GadgetKind::Connectivity => {
                    // v_0..v_{n-1}, then the gadget nodes, then the copies v'_j.
                    let g = gen_connectivity_gadget(*size)?;
                    let mid = *size;
                    let copies = mid + g.size();
                    let mut edges: Vec<_> = g.into.iter().map(|&(i, u)| (i, mid + u, 1)).collect();
                    edges.extend(g.out_of.iter().map(|&(u, j)| (mid + u, copies + j, 1)));
                    Dag::new(copies + size, &edges)?
                }
            };
            io.emit_graph(&dag)
        }
    }
}

fn approx(io: &Io, cmd: &ApproxCommand) -> Result<bool> {
    let (name, params, common) = match cmd {
        ApproxCommand::Ecc { k, delta, common } => (
            "ecc-approx",
            Params { k: *k, delta: *delta, strategy: common.strategy, ..Params::default() },
            common,
        ),
        ApproxCommand::Radius { k, common } => (
            "radius-approx",
            Params { k: *k, strategy: common.strategy, ..Params::default() },
            common,
        ),
        ApproxCommand::Diam { epsilon, common } => (
            "diam-approx",
            Params { epsilon: epsilon.choice(), strategy: common.strategy, ..Params::default() },
            common,
        ),
    };
    let registry = Registry::default();
    let est = registry.get(name)?;
    let dag = io.read_graph()?;
    if !est.supports(&dag) {
        bail!(Error::WeightedInput);
    }
    let start = Instant::now();
    let got = est.estimate(&dag, &params)?;
    io.stat(format!(
        "{name}: n={} m={} sssp_calls={} ms={:.1}",
        dag.n(),
        dag.m(),
        got.sssp_calls,
        ms(start)
    ));
    io.emit_json(&got)?;
    if !common.check {
        return Ok(true);
    }
    let exact = ExactSummary::from_eccentricities(eccentricities_from_matrix(&apsp(&dag)))?;
    let violations = est.violations(&got, &exact, &params);
    for v in &violations {
        eprintln!("violation: {v}");
    }
    Ok(violations.is_empty())
}

fn verify(io: &Io, args: &VerifyArgs) -> Result<bool> {
    let mut corpus = match &args.corpus {
        Some(path) => parse_json::<CorpusSpec>(&read_file(path)?, "corpus")?,
        None => CorpusSpec::default_corpus(io.cli.seed),
    };
    if let Some(max_n) = args.max_n {
        corpus.instances.retain(|s| s.n <= max_n);
    }
    if let Some(limit) = args.limit {
        corpus.instances.truncate(limit);
    }
    let options = VerifyOptions {
        ks: args.ks.clone(),
        deltas: args.deltas.clone(),
        strategy: args.strategy,
        epsilon: args.epsilon.choice(),
        oracle_cap: args.oracle_cap,
        certifiers: !args.no_certifiers,
        corrupt: args.corrupt.clone(),
    };
    let start = Instant::now();
    let report = cmd_verify(&corpus, &Registry::default(), &options)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for v in &report.violations {
        eprintln!("violation: {} [{}] {}", v.instance, v.check, v.detail);
    }
    io.stat(format!(
        "{} instances, {} checks, {} violations, ms={:.1}",
        report.instances,
        report.checks,
        report.violations.len(),
        ms(start)
    ));
    io.emit_json(&report)?;
    Ok(report.passed())
}

fn bench(io: &Io, args: &BenchArgs) -> Result<()> {
    let spec = BenchSpec {
        sizes: args.sizes.clone(),
        density: args.density,
        w_max: args.w_max,
        connected: !args.unconnected,
        algorithms: args.algorithms.clone(),
        params: Params {
            k: args.k,
            delta: args.delta,
            strategy: args.strategy,
            epsilon: args.epsilon.choice(),
        },
        repetitions: args.repetitions,
        seed: io.cli.seed,
        exact: args.exact,
        force: args.force,
        oracle_cap: args.oracle_cap,
    };
    let table = cmd_bench(&spec, &Registry::default()).context("bench")?;
    if io.cli.stats {
        for row in table.aggregates() {
            eprintln!("{}", serde_json::to_string(&row)?);
        }
    }
    match args.emit {
        TableFormat::Csv => io.emit(&table.to_csv()),
        TableFormat::Json => io.emit(&table.to_json()),
    }
}
