use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sbm_ppm::assign::{project_auto, verify_certificate};
use sbm_ppm::bench::csv::{GRID_HEADER, TRAJECTORY_HEADER};
use sbm_ppm::bench::io::{parse_capacities, parse_score_matrix};
use sbm_ppm::bench::plot::{phase_svg, trajectory_svg};
use sbm_ppm::bench::{
    load_graph, parse_grid_csv, parse_trajectory_csv, run_convergence, run_phase_grid_with,
    run_real, write_grid_row, write_real_csv, write_trajectory_csv, ConvergenceSpec, GraphFormat,
    GridSpec, LoadOptions, RealRunOptions, ValueRange,
};
use sbm_ppm::init::InitMethod;
use sbm_ppm::Stopping;

#[derive(Parser)]
#[command(
    name = "sbm-ppm",
    version,
    about = "Projected power method for stochastic block models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical exact-recovery rates over an (alpha, beta) grid.
    Grid(GridArgs),
    /// Distance-to-truth trajectories from several random starts on one graph.
    Converge(ConvergeArgs),
    /// Best-of-several runs on a user-supplied graph.
    Real(RealArgs),
    /// Project one score matrix onto clusterings with given group sizes.
    Project(ProjectArgs),
    /// Render a grid or trajectory CSV as SVG.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// n = 300, K = 3, coarse steps, 20 trials.
    Desk,
    /// n = 300, K = 3, alpha step 0.5, beta step 0.4, 40 trials.
    Full300,
    /// n = 600, K = 6, alpha step 1, beta step 0.8, 40 trials.
    Full600,
}

#[derive(Clone, Copy, ValueEnum)]
enum StoppingArg {
    Budget,
    Cycle,
}

impl From<StoppingArg> for Stopping {
    fn from(s: StoppingArg) -> Self {
        match s {
            StoppingArg::Budget => Stopping::FixedBudget,
            StoppingArg::Cycle => Stopping::cycle(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Spectral,
    Random,
}

impl From<InitArg> for InitMethod {
    fn from(i: InitArg) -> Self {
        match i {
            InitArg::Spectral => InitMethod::Spectral,
            InitArg::Random => InitMethod::Random,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Edgelist,
    Mtx,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Edgelist => GraphFormat::EdgeList,
            FormatArg::Mtx => GraphFormat::MatrixMarket,
        }
    }
}

#[derive(Args)]
struct GridArgs {
    /// Starting grid; individual flags override it.
    #[arg(long, value_enum, default_value = "desk")]
    preset: Preset,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// `min:max:step`, or a single value.
    #[arg(long)]
    alpha_range: Option<ValueRange>,
    #[arg(long)]
    beta_range: Option<ValueRange>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "spectral")]
    init: InitArg,
    /// Defaults to the theoretical budget (at least 30).
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long, value_enum, default_value = "cycle")]
    stopping: StoppingArg,
    #[arg(long)]
    no_self_loops: bool,
    /// Certify every projection (slower).
    #[arg(long)]
    verify: bool,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long, default_value_t = 6000)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 18.0)]
    alpha: f64,
    #[arg(long, default_value_t = 4.0)]
    beta: f64,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    max_iters: usize,
    #[arg(long, value_enum, default_value = "budget")]
    stopping: StoppingArg,
    #[arg(long)]
    no_self_loops: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RealArgs {
    /// Edge list or MatrixMarket file.
    graph: PathBuf,
    /// One integer community label per vertex.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "edgelist")]
    format: FormatArg,
    /// Community sizes, comma separated; defaults to the label counts.
    #[arg(long)]
    capacities: Option<String>,
    /// Drop communities with fewer members than this.
    #[arg(long, default_value_t = 0)]
    min_community_size: usize,
    /// Keep diagonal entries of the input (dropped by default).
    #[arg(long)]
    keep_self_loops: bool,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Certify every projection (slower).
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProjectArgs {
    /// Whitespace-separated score matrix, one row per vertex.
    scores: PathBuf,
    /// Group sizes, comma separated. Defaults to a balanced split.
    #[arg(long)]
    capacities: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Grid or trajectory CSV.
    input: PathBuf,
    /// Number of communities, used for the threshold curve of grid plots.
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn grid(args: GridArgs) -> Result<()> {
    let base = match args.preset {
        Preset::Desk => GridSpec::desk_default(),
        Preset::Full300 => GridSpec::full_n300(),
        Preset::Full600 => GridSpec::full_n600(),
    };
    let spec = GridSpec {
        n: args.n.unwrap_or(base.n),
        k: args.k.unwrap_or(base.k),
        alpha: args.alpha_range.unwrap_or(base.alpha),
        beta: args.beta_range.unwrap_or(base.beta),
        trials: args.trials.unwrap_or(base.trials),
        seed: args.seed,
        init: args.init.into(),
        max_iterations: args.max_iters,
        stopping: args.stopping.into(),
        self_loops: !args.no_self_loops,
        verify: args.verify,
    };
    let mut out = output(args.out.as_deref())?;
    writeln!(out, "{GRID_HEADER}")?;
    run_phase_grid_with(&spec, |record| {
        write_grid_row(&mut out, record)?;
        out.flush()?;
        Ok(())
    })?;
    Ok(())
}

fn converge(args: ConvergeArgs) -> Result<()> {
    let spec = ConvergenceSpec {
        max_iterations: Some(args.max_iters),
        stopping: args.stopping.into(),
        self_loops: !args.no_self_loops,
        ..ConvergenceSpec::new(
            args.n,
            args.k,
            args.alpha,
            args.beta,
            args.repeats,
            args.seed,
        )
    };
    let rows = run_convergence(&spec)?;
    let mut out = output(args.out.as_deref())?;
    write_trajectory_csv(&mut out, &rows)?;
    out.flush()?;
    Ok(())
}

fn real(args: RealArgs) -> Result<()> {
    let options = LoadOptions {
        format: args.format.into(),
        keep_self_loops: args.keep_self_loops,
        min_community_size: args.min_community_size,
    };
    let graph = load_graph(&args.graph, args.labels.as_deref(), &options)?;
    let run_options = RealRunOptions {
        repeats: args.repeats,
        seed: args.seed,
        max_iterations: args.max_iters,
        capacities: args
            .capacities
            .as_deref()
            .map(parse_capacities)
            .transpose()?,
        verify: args.verify,
    };
    let summary = run_real(&graph, &run_options)?;
    let best = summary.best_run();
    eprintln!(
        "{}: n={} K={} best objective {} after {} iterations, misclassified {}",
        summary.name,
        summary.n,
        summary.k,
        best.objective,
        best.iterations,
        best.mismatches
            .map_or_else(|| "n/a".to_string(), |m| m.to_string()),
    );
    let mut out = output(args.out.as_deref())?;
    write_real_csv(&mut out, &summary)?;
    out.flush()?;
    Ok(())
}

fn project(args: ProjectArgs) -> Result<()> {
    let c = parse_score_matrix(&read(&args.scores)?)?;
    let capacities = match args.capacities.as_deref() {
        Some(text) => parse_capacities(text)?,
        None => sbm_ppm::balanced_capacities(c.n(), c.k())?,
    };
    let res = project_auto(&c, &capacities)?;
    let cert = verify_certificate(&c, &res.clustering)?;
    if !cert.feasible {
        bail!("projection failed its optimality certificate");
    }
    let mut out = output(args.out.as_deref())?;
    writeln!(out, "# objective {}", res.objective)?;
    writeln!(
        out,
        "# dual {}",
        res.dual
            .w
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    )?;
    for label in res.clustering.labels() {
        writeln!(out, "{label}")?;
    }
    out.flush()?;
    Ok(())
}

fn plot(args: PlotArgs) -> Result<()> {
    let text = read(&args.input)?;
    let header = text.lines().next().unwrap_or_default().trim();
    let svg = if header == GRID_HEADER {
        phase_svg(&parse_grid_csv(&text)?, args.k)
    } else if header == TRAJECTORY_HEADER {
        trajectory_svg(&parse_trajectory_csv(&text)?)
    } else {
        bail!(
            "{} is neither a grid nor a trajectory CSV",
            args.input.display()
        );
    };
    let mut out = output(args.out.as_deref())?;
    out.write_all(svg.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("SBM_PPM_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .with_context(|| format!("SBM_PPM_THREADS must be a positive integer, got '{value}'"))?;
    if threads == 0 {
        bail!("SBM_PPM_THREADS must be positive");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    configure_threads()?;
    match cli.command {
        Command::Grid(a) => grid(a),
        Command::Converge(a) => converge(a),
        Command::Real(a) => real(a),
        Command::Project(a) => project(a),
        Command::Plot(a) => plot(a),
    }
}
