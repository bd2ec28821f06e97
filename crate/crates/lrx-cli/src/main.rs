//! Command line driver for the lrx-core experiments.
//!
//! Every subcommand writes its result files into `--out` together with a
//! `run.json` manifest recording the subcommand, the full configuration,
//! crate versions, and wall-clock seconds. Exit codes: 0 on success, 2 on
//! invalid input or configuration, 3 when a memory budget was exceeded.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use lrx_core::analysis::{growth_stats, gumbel_fit, histogram, poly_fit, spectrum};
use lrx_core::beam::{beam_search, solve_batch, BeamConfig, BeamHeuristic};
use lrx_core::bellman::{dp_solve, tropical_power, DpConfig, TropicalMatrix};
use lrx_core::error::{Error, Result};
use lrx_core::estimator::{train_dqn, train_warmup, DistanceEstimator, ModelConfig, Optimizer};
use lrx_core::graph::{longest_element, GraphSpec};
use lrx_core::perm::Permutation;
use lrx_core::search::{bfs, geodesic_ensemble, DistanceTable, LayerProfile};
use lrx_core::solvers::{axial_lower_bound, constructive_solve, longest_word, solve_length_bound};
use lrx_core::walks::{
    exact_diffusion, generate_walks, layer_mean_dd, mixing_curve, WalkConfig, WalkKind,
};

#[derive(Parser)]
#[command(name = "lrx", version, about = "Experiments on the LRX Cayley graph of S_n")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Breadth-first survey of the full graph: layer sizes and farthest states.
    Bfs(BfsArgs),
    /// Breadth-first survey of the binary coset graph.
    CosetBfs(BfsArgs),
    /// Value iteration against exact BFS distances, with a per-sweep trace.
    Dp(DpArgs),
    /// All-pairs distances as a min-plus power of the adjacency matrix.
    Tropical(TropicalArgs),
    /// First-visit training pairs harvested from random walks.
    Walks(WalksArgs),
    /// Exact diffusion distances for every state, with per-layer means.
    DdExact(DdArgs),
    /// Inversion-count mixing profile of the random walk.
    Mixing(MixingArgs),
    /// Supervised warm-up of the neural distance estimator.
    Train(TrainArgs),
    /// Bootstrapped refinement of a trained estimator.
    Dqn(DqnArgs),
    /// Guided beam search from one start state.
    Beam(BeamArgs),
    /// Repeated beam runs with per-run statistics.
    SolveBatch(BatchArgs),
    /// Explicit reduced word for the reversal permutation.
    LongestWord(NArgs),
    /// Constructive solution of one state, within the proven length bound.
    Construct(ConstructArgs),
    /// Closed-form length bounds for one ring size.
    Bounds(NArgs),
    /// Moments of the distance-from-start distribution.
    Growth(GrowthArgs),
    /// Left-skewed Gumbel fit of the layer profile.
    Gumbel(GrowthArgs),
    /// Polynomial fit of diameters measured across ring sizes.
    Fit(FitArgs),
    /// Adjacency spectrum of the full graph, with a histogram.
    Spectrum(SpectrumArgs),
    /// Mean sorting trajectories over the geodesic ensemble of the reversal.
    Sortnet(NArgs),
}

#[derive(Args, Clone, Serialize)]
struct Common {
    /// Ring size.
    #[arg(long)]
    n: usize,
    /// Master seed for every stochastic component.
    #[arg(long, default_value_t = 12345)]
    seed: u64,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; 0 keeps the library default.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Working-memory cap in bytes for the heavy computations.
    #[arg(long)]
    mem_budget_bytes: Option<u64>,
}

#[derive(Args, Serialize)]
struct BfsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct NArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct DpArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Graph to iterate on.
    #[arg(long, value_enum, default_value_t = KindArg::Full)]
    kind: KindArg,
    /// Damping factor; 1 is undamped value iteration.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Convergence threshold on the largest per-sweep change.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Sweep cap.
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
}

#[derive(Args, Serialize)]
struct TropicalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = KindArg::Full)]
    kind: KindArg,
}

#[derive(Args, Serialize)]
struct WalksArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Steps per trajectory.
    #[arg(long, default_value_t = 100)]
    kmax: u32,
    /// Number of trajectories.
    #[arg(long, default_value_t = 1000)]
    walks: u32,
    /// Skip the swap from states whose first two entries are in order.
    #[arg(long)]
    x_trick: bool,
    /// Ban revisiting this many recent states; 0 is the plain walk.
    #[arg(long, default_value_t = 0)]
    history_depth: usize,
}

#[derive(Args, Serialize)]
struct DdArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Censoring horizon.
    #[arg(long, default_value_t = 15)]
    kmax: u32,
}

#[derive(Args, Serialize)]
struct MixingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Steps per trajectory; defaults to 10 n^3.
    #[arg(long)]
    kmax: Option<u32>,
    /// Number of trajectories.
    #[arg(long, default_value_t = 5000)]
    walks: u32,
    #[arg(long)]
    x_trick: bool,
    #[arg(long, default_value_t = 0)]
    history_depth: usize,
}

#[derive(Args, Serialize)]
struct TrainArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Steps per trajectory; defaults to 4 n^2.
    #[arg(long)]
    kmax: Option<u32>,
    /// Number of trajectories.
    #[arg(long, default_value_t = 2000)]
    walks: u32,
    /// Hidden layer width.
    #[arg(long, default_value_t = 128)]
    hidden: usize,
    /// Supervised epochs over the walk labels.
    #[arg(long, default_value_t = 20)]
    epochs_warmup: usize,
    #[arg(long, default_value_t = 128)]
    batch_size: usize,
    /// Learning rate.
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long)]
    x_trick: bool,
    #[arg(long, default_value_t = 0)]
    history_depth: usize,
    /// Where to save the model; defaults to <out>/model.json.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct DqnArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Warm-started model to refine.
    #[arg(long)]
    checkpoint: PathBuf,
    /// Steps per trajectory; defaults to 4 n^2.
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long, default_value_t = 2000)]
    walks: u32,
    /// Bootstrapped epochs.
    #[arg(long, default_value_t = 10)]
    epochs_dqn: usize,
    #[arg(long, default_value_t = 128)]
    batch_size: usize,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long)]
    x_trick: bool,
    #[arg(long, default_value_t = 0)]
    history_depth: usize,
}

#[derive(Args, Serialize)]
struct BeamArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Beam width.
    #[arg(long, default_value_t = 1024)]
    width: usize,
    /// Recent frontiers banned from re-expansion.
    #[arg(long, default_value_t = 1)]
    history_depth: usize,
    #[arg(long)]
    x_trick: bool,
    /// Candidate ranking signal.
    #[arg(long, value_enum, default_value_t = HeuristicArg::Hamming)]
    heuristic: HeuristicArg,
    /// Model file for --heuristic model.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Step cap; defaults to 2 n (n-1).
    #[arg(long)]
    step_limit: Option<usize>,
    /// Start state in one-line notation; defaults to the reversal.
    #[arg(long)]
    start: Option<String>,
}

#[derive(Args, Serialize)]
struct BatchArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1024)]
    width: usize,
    #[arg(long, default_value_t = 1)]
    history_depth: usize,
    #[arg(long)]
    x_trick: bool,
    #[arg(long, value_enum, default_value_t = HeuristicArg::Hamming)]
    heuristic: HeuristicArg,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    step_limit: Option<usize>,
    /// Start states: seeded uniform draws or the reversal.
    #[arg(long, value_enum, default_value_t = StartsArg::Random)]
    starts: StartsArg,
    /// Number of random starts.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Runs per start, each with a fresh hash seed.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
}

#[derive(Args, Serialize)]
struct ConstructArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// State to solve in one-line notation; defaults to a seeded draw.
    #[arg(long)]
    state: Option<String>,
}

#[derive(Args, Serialize)]
struct GrowthArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = KindArg::Full)]
    kind: KindArg,
}

#[derive(Args, Serialize)]
struct FitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Graph family to measure; sizes run up to --n.
    #[arg(long, value_enum, default_value_t = KindArg::Full)]
    kind: KindArg,
    #[arg(long, default_value_t = 2)]
    degree: usize,
}

#[derive(Args, Serialize)]
struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Histogram bins.
    #[arg(long, default_value_t = 64)]
    bins: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KindArg {
    Full,
    Coset,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum HeuristicArg {
    Hamming,
    Oracle,
    Model,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StartsArg {
    Random,
    Longest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lrx: {e}");
            if e.is_resource() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Bfs(a) => exec(&a, "bfs", |a| cmd_bfs(a, KindArg::Full)),
        Cmd::CosetBfs(a) => exec(&a, "coset-bfs", |a| cmd_bfs(a, KindArg::Coset)),
        Cmd::Dp(a) => exec(&a, "dp", cmd_dp),
        Cmd::Tropical(a) => exec(&a, "tropical", cmd_tropical),
        Cmd::Walks(a) => exec(&a, "walks", cmd_walks),
        Cmd::DdExact(a) => exec(&a, "dd-exact", cmd_dd_exact),
        Cmd::Mixing(a) => exec(&a, "mixing", cmd_mixing),
        Cmd::Train(a) => exec(&a, "train", cmd_train),
        Cmd::Dqn(a) => exec(&a, "dqn", cmd_dqn),
        Cmd::Beam(a) => exec(&a, "beam", cmd_beam),
        Cmd::SolveBatch(a) => exec(&a, "solve-batch", cmd_solve_batch),
        Cmd::LongestWord(a) => exec(&a, "longest-word", cmd_longest_word),
        Cmd::Construct(a) => exec(&a, "construct", cmd_construct),
        Cmd::Bounds(a) => exec(&a, "bounds", cmd_bounds),
        Cmd::Growth(a) => exec(&a, "growth", cmd_growth),
        Cmd::Gumbel(a) => exec(&a, "gumbel", cmd_gumbel),
        Cmd::Fit(a) => exec(&a, "fit", cmd_fit),
        Cmd::Spectrum(a) => exec(&a, "spectrum", cmd_spectrum),
        Cmd::Sortnet(a) => exec(&a, "sortnet", cmd_sortnet),
    }
}

trait HasCommon {
    fn common(&self) -> &Common;
}

macro_rules! common_access {
    ($($t:ty),+ $(,)?) => {$(
        impl HasCommon for $t {
            fn common(&self) -> &Common { &self.common }
        }
    )+};
}

common_access!(
    BfsArgs,
    NArgs,
    DpArgs,
    TropicalArgs,
    WalksArgs,
    DdArgs,
    MixingArgs,
    TrainArgs,
    DqnArgs,
    BeamArgs,
    BatchArgs,
    ConstructArgs,
    GrowthArgs,
    FitArgs,
    SpectrumArgs,
);

/// Shared wrapper: thread pool, output directory, timing, manifest.
fn exec<A: Serialize + HasCommon>(
    args: &A,
    name: &str,
    body: impl FnOnce(&A) -> Result<Option<u64>>,
) -> Result<()> {
    let common = args.common();
    if common.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(common.threads)
            .build_global()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    }
    fs::create_dir_all(&common.out)?;
    let clock = Instant::now();
    let peak_mem_bytes = body(args)?;
    let manifest = json!({
        "subcommand": name,
        "config": serde_json::to_value(args)?,
        "versions": {
            "lrx-cli": env!("CARGO_PKG_VERSION"),
            "lrx-core": lrx_core::VERSION,
        },
        "seconds": clock.elapsed().as_secs_f64(),
        "peak_mem_bytes": peak_mem_bytes,
    });
    write_json(&common.out.join("run.json"), &manifest)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn kind_spec(kind: KindArg, n: usize) -> Result<GraphSpec> {
    match kind {
        KindArg::Full => GraphSpec::full(n),
        KindArg::Coset => GraphSpec::coset(n),
    }
}

fn walk_kind(x_trick: bool, history_depth: usize) -> Result<WalkKind> {
    match (x_trick, history_depth) {
        (false, 0) => Ok(WalkKind::Plain),
        (false, d) => Ok(WalkKind::NonBacktracking { depth: d }),
        (true, 0) => Ok(WalkKind::XTrick),
        (true, _) => Err(Error::InvalidConfig(
            "pick either --x-trick or --history-depth, not both".into(),
        )),
    }
}

fn default_kmax(n: usize, factor: u64, power: u32) -> Result<u32> {
    let k = factor * (n as u64).pow(power);
    u32::try_from(k)
        .map_err(|_| Error::InvalidConfig(format!("default k_max {k} overflows; pass --kmax")))
}

fn layers_csv(profile: &LayerProfile) -> String {
    let mut out = String::from("distance,layer_size\n");
    for (d, c) in profile.layer_sizes.iter().enumerate() {
        let _ = writeln!(out, "{d},{c}");
    }
    out
}

fn parse_state(s: &str, n: usize) -> Result<Permutation> {
    let p: Permutation = s.parse()?;
    if p.n() != n {
        return Err(Error::InvalidInput(format!(
            "state has {} entries, expected {n}",
            p.n()
        )));
    }
    Ok(p)
}

fn load_heuristic(
    h: HeuristicArg,
    n: usize,
    checkpoint: Option<&Path>,
    budget: Option<u64>,
) -> Result<(Option<DistanceEstimator>, Option<DistanceTable>)> {
    match h {
        HeuristicArg::Hamming => Ok((None, None)),
        HeuristicArg::Model => {
            let path = checkpoint.ok_or_else(|| {
                Error::InvalidConfig("--heuristic model needs --checkpoint".into())
            })?;
            Ok((Some(DistanceEstimator::load_json(path)?), None))
        }
        HeuristicArg::Oracle => {
            let (_, table) = bfs(&GraphSpec::full(n)?, budget)?;
            Ok((None, Some(table)))
        }
    }
}

fn pick_heuristic<'a>(
    model: &'a Option<DistanceEstimator>,
    oracle: &'a Option<DistanceTable>,
) -> BeamHeuristic<'a> {
    match (model, oracle) {
        (Some(m), _) => BeamHeuristic::Model(m),
        (_, Some(t)) => BeamHeuristic::Oracle(t),
        _ => BeamHeuristic::Hamming,
    }
}

fn cmd_bfs(a: &BfsArgs, kind: KindArg) -> Result<Option<u64>> {
    let spec = kind_spec(kind, a.common.n)?;
    let (profile, table) = bfs(&spec, a.common.mem_budget_bytes)?;
    write_text(&a.common.out.join("layers.csv"), &layers_csv(&profile))?;
    let mut farthest = table.farthest_labels().join("\n");
    farthest.push('\n');
    write_text(&a.common.out.join("farthest.txt"), &farthest)?;
    write_json(
        &a.common.out.join("bfs.json"),
        &json!({
            "kind": spec.kind,
            "n": spec.n,
            "states": profile.total(),
            "diameter": profile.diameter(),
            "farthest": profile.layer_sizes[profile.diameter()],
        }),
    )?;
    Ok(None)
}

fn cmd_dp(a: &DpArgs) -> Result<Option<u64>> {
    let spec = kind_spec(a.kind, a.common.n)?;
    let (_, oracle) = bfs(&spec, a.common.mem_budget_bytes)?;
    let cfg = DpConfig {
        alpha: a.alpha,
        tolerance: a.tolerance,
        max_iters: a.max_iters,
        seed: a.common.seed,
        ..DpConfig::default()
    };
    let r = dp_solve(&spec, &cfg, &oracle)?;
    let mut trace = String::from("iteration,pearson,max_abs_err\n");
    for s in &r.trace {
        let pearson = s.pearson.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(trace, "{},{},{}", s.iteration, pearson, s.max_abs_err);
    }
    write_text(&a.common.out.join("dp_trace.csv"), &trace)?;
    write_json(
        &a.common.out.join("dp.json"),
        &json!({
            "kind": spec.kind,
            "n": spec.n,
            "converged": r.converged,
            "iterations": r.iterations,
            "max_abs_err": r.trace.last().map(|s| s.max_abs_err),
        }),
    )?;
    Ok(None)
}

fn cmd_tropical(a: &TropicalArgs) -> Result<Option<u64>> {
    let spec = kind_spec(a.kind, a.common.n)?;
    let adj = TropicalMatrix::from_graph(&spec, a.common.mem_budget_bytes)?;
    let power = (adj.size() - 1) as u64;
    let dist = tropical_power(&adj, power);
    let mut csv = String::from("i,j,distance\n");
    let mut max_seen = 0u64;
    for i in 0..dist.size() {
        for j in 0..dist.size() {
            let d = dist.get(i, j);
            if d.is_finite() {
                let d = d as u64;
                max_seen = max_seen.max(d);
                let _ = writeln!(csv, "{i},{j},{d}");
            } else {
                let _ = writeln!(csv, "{i},{j},inf");
            }
        }
    }
    write_text(&a.common.out.join("tropical.csv"), &csv)?;
    write_json(
        &a.common.out.join("tropical.json"),
        &json!({
            "kind": spec.kind,
            "n": spec.n,
            "size": dist.size(),
            "power": power,
            "max_distance": max_seen,
        }),
    )?;
    Ok(None)
}

fn cmd_walks(a: &WalksArgs) -> Result<Option<u64>> {
    let spec = GraphSpec::full(a.common.n)?;
    let cfg = WalkConfig {
        kind: walk_kind(a.x_trick, a.history_depth)?,
        k_max: a.kmax,
        n_walks: a.walks,
        seed: a.common.seed,
    };
    let ts = generate_walks(&spec, &cfg)?;
    let mut csv = String::from("step,state\n");
    for (p, k) in &ts.pairs {
        let _ = writeln!(csv, "{k},\"{p}\"");
    }
    write_text(&a.common.out.join("walks.csv"), &csv)?;
    write_json(
        &a.common.out.join("walks.json"),
        &json!({
            "n": spec.n,
            "config": cfg,
            "pairs": ts.pairs.len(),
        }),
    )?;
    Ok(None)
}

fn cmd_dd_exact(a: &DdArgs) -> Result<Option<u64>> {
    let spec = GraphSpec::full(a.common.n)?;
    let dx = exact_diffusion(&spec, a.kmax, a.common.mem_budget_bytes)?;
    let (_, table) = bfs(&spec, a.common.mem_budget_bytes)?;
    let means = layer_mean_dd(&table, &dx)?;
    let mut csv = String::from("rank,dd\n");
    for (r, v) in dx.dd.iter().enumerate() {
        let _ = writeln!(csv, "{r},{v}");
    }
    write_text(&a.common.out.join("dd.csv"), &csv)?;
    let mut csv = String::from("distance,mean_dd\n");
    for (d, v) in means.iter().enumerate() {
        let _ = writeln!(csv, "{d},{v}");
    }
    write_text(&a.common.out.join("layer_means.csv"), &csv)?;
    write_json(
        &a.common.out.join("dd.json"),
        &json!({
            "n": spec.n,
            "k_max": a.kmax,
            "states": dx.dd.len(),
        }),
    )?;
    Ok(None)
}

fn cmd_mixing(a: &MixingArgs) -> Result<Option<u64>> {
    let n = a.common.n;
    let cfg = WalkConfig {
        kind: walk_kind(a.x_trick, a.history_depth)?,
        k_max: match a.kmax {
            Some(k) => k,
            None => default_kmax(n, 10, 3)?,
        },
        n_walks: a.walks,
        seed: a.common.seed,
    };
    let points = mixing_curve(n, &cfg)?;
    let mut csv = String::from("step,trials,mean,stderr\n");
    for p in &points {
        let _ = writeln!(csv, "{},{},{},{}", p.step, p.trials, p.mean, p.stderr);
    }
    write_text(&a.common.out.join("mixing.csv"), &csv)?;
    write_json(
        &a.common.out.join("mixing.json"),
        &json!({
            "n": n,
            "config": cfg,
            "plateau": (n * (n - 1)) as f64 / 4.0,
        }),
    )?;
    Ok(None)
}

fn cmd_train(a: &TrainArgs) -> Result<Option<u64>> {
    let n = a.common.n;
    let spec = GraphSpec::full(n)?;
    let wcfg = WalkConfig {
        kind: walk_kind(a.x_trick, a.history_depth)?,
        k_max: match a.kmax {
            Some(k) => k,
            None => default_kmax(n, 4, 2)?,
        },
        n_walks: a.walks,
        seed: a.common.seed,
    };
    let ts = generate_walks(&spec, &wcfg)?;
    let mcfg = ModelConfig {
        hidden_width: a.hidden,
        warmup_epochs: a.epochs_warmup,
        dqn_epochs: 0,
        batch_size: a.batch_size,
        learning_rate: a.lr,
        optimizer: Optimizer::Adam,
        seed: a.common.seed,
    };
    let (est, report) = train_warmup(&ts, &mcfg)?;
    let checkpoint = a
        .checkpoint
        .clone()
        .unwrap_or_else(|| a.common.out.join("model.json"));
    if let Some(dir) = checkpoint.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    est.save_json(&checkpoint)?;
    let mut csv = String::from("epoch,loss\n");
    let _ = writeln!(csv, "0,{}", report.initial_loss);
    for (i, loss) in report.epoch_loss.iter().enumerate() {
        let _ = writeln!(csv, "{},{}", i + 1, loss);
    }
    write_text(&a.common.out.join("train_report.csv"), &csv)?;
    write_json(
        &a.common.out.join("train.json"),
        &json!({
            "n": n,
            "samples": ts.pairs.len(),
            "initial_loss": report.initial_loss,
            "final_loss": report.epoch_loss.last(),
            "checkpoint": checkpoint,
        }),
    )?;
    Ok(None)
}

fn cmd_dqn(a: &DqnArgs) -> Result<Option<u64>> {
    let n = a.common.n;
    let spec = GraphSpec::full(n)?;
    let start = DistanceEstimator::load_json(&a.checkpoint)?;
    let wcfg = WalkConfig {
        kind: walk_kind(a.x_trick, a.history_depth)?,
        k_max: match a.kmax {
            Some(k) => k,
            None => default_kmax(n, 4, 2)?,
        },
        n_walks: a.walks,
        seed: a.common.seed,
    };
    let mcfg = ModelConfig {
        hidden_width: start.hidden_width(),
        warmup_epochs: 0,
        dqn_epochs: a.epochs_dqn,
        batch_size: a.batch_size,
        learning_rate: a.lr,
        optimizer: Optimizer::Adam,
        seed: a.common.seed,
    };
    let (est, report) = train_dqn(&spec, &start, &mcfg, &wcfg)?;
    let model_path = a.common.out.join("model.json");
    est.save_json(&model_path)?;
    let mut csv = String::from("epoch,loss\n");
    for (i, loss) in report.epoch_loss.iter().enumerate() {
        let _ = writeln!(csv, "{},{}", i + 1, loss);
    }
    write_text(&a.common.out.join("dqn_report.csv"), &csv)?;
    write_json(
        &a.common.out.join("dqn.json"),
        &json!({
            "n": n,
            "epochs": a.epochs_dqn,
            "final_loss": report.epoch_loss.last(),
            "model": model_path,
        }),
    )?;
    Ok(None)
}

fn beam_stats_csv(stats: &[lrx_core::beam::StepStats]) -> String {
    let mut csv = String::from("step,expanded,banned,deduped,kept,best_score\n");
    for s in stats {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            s.step, s.expanded, s.banned, s.deduped, s.kept, s.best_score
        );
    }
    csv
}

fn cmd_beam(a: &BeamArgs) -> Result<Option<u64>> {
    let n = a.common.n;
    let spec = GraphSpec::full(n)?;
    let start = match &a.start {
        Some(s) => parse_state(s, n)?,
        None => longest_element(n)?,
    };
    let (model, oracle) = load_heuristic(
        a.heuristic,
        n,
        a.checkpoint.as_deref(),
        a.common.mem_budget_bytes,
    )?;
    let cfg = BeamConfig {
        width: a.width,
        step_limit: a.step_limit.unwrap_or(2 * n * (n - 1)),
        history_depth: a.history_depth,
        x_trick: a.x_trick,
        seed: a.common.seed,
        heuristic: pick_heuristic(&model, &oracle),
        mem_budget_bytes: a.common.mem_budget_bytes,
    };
    let r = beam_search(&spec, &start, &cfg)?;
    write_text(&a.common.out.join("beam_stats.csv"), &beam_stats_csv(&r.stats))?;
    write_json(
        &a.common.out.join("result.json"),
        &json!({
            "n": n,
            "start": start.to_string(),
            "seed": a.common.seed,
            "found": r.found,
            "steps": r.steps,
            "length": r.word.as_ref().map(|w| w.len()),
            "word": r.word.as_ref().map(|w| w.to_string()),
            "peak_beam": r.peak_beam,
        }),
    )?;
    Ok(Some(r.peak_mem_bytes))
}

fn cmd_solve_batch(a: &BatchArgs) -> Result<Option<u64>> {
    let n = a.common.n;
    let spec = GraphSpec::full(n)?;
    let starts = match a.starts {
        StartsArg::Longest => vec![longest_element(n)?],
        StartsArg::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
            (0..a.count)
                .map(|_| Permutation::random(n, &mut rng))
                .collect()
        }
    };
    let (model, oracle) = load_heuristic(
        a.heuristic,
        n,
        a.checkpoint.as_deref(),
        a.common.mem_budget_bytes,
    )?;
    let cfg = BeamConfig {
        width: a.width,
        step_limit: a.step_limit.unwrap_or(2 * n * (n - 1)),
        history_depth: a.history_depth,
        x_trick: a.x_trick,
        seed: a.common.seed,
        heuristic: pick_heuristic(&model, &oracle),
        mem_budget_bytes: a.common.mem_budget_bytes,
    };
    let report = solve_batch(&spec, &starts, &cfg, a.repeats)?;
    write_text(&a.common.out.join("batch.csv"), &report.to_csv())?;
    write_json(
        &a.common.out.join("solve_batch.json"),
        &json!({
            "n": n,
            "runs": report.runs.len(),
            "success_rate": report.success_rate,
            "min_length": report.min_length,
            "median_length": report.median_length,
        }),
    )?;
    Ok(report.runs.iter().map(|r| r.peak_mem_bytes).max())
}

fn cmd_longest_word(a: &NArgs) -> Result<Option<u64>> {
    let n = a.common.n;
    let word = longest_word(n)?;
    if !longest_element(n)?.apply_word(&word).is_identity() {
        return Err(Error::InvalidInput("explicit word failed replay".into()));
    }
    write_json(
        &a.common.out.join("longest_word.json"),
        &json!({
            "n": n,
            "length": word.len(),
            "word": word.to_string(),
        }),
    )?;
    Ok(None)
}

fn cmd_construct(a: &ConstructArgs) -> Result<Option<u64>> {
    let n = a.common.n;
    GraphSpec::full(n)?;
    let state = match &a.state {
        Some(s) => parse_state(s, n)?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
            Permutation::random(n, &mut rng)
        }
    };
    let word = constructive_solve(&state);
    if !state.apply_word(&word).is_identity() {
        return Err(Error::InvalidInput("constructed word failed replay".into()));
    }
    let bound = solve_length_bound(n);
    write_json(
        &a.common.out.join("construct.json"),
        &json!({
            "n": n,
            "state": state.to_string(),
            "length": word.len(),
            "bound": bound,
            "within_bound": word.len() as u64 <= bound,
            "word": word.to_string(),
        }),
    )?;
    Ok(None)
}

fn cmd_bounds(a: &NArgs) -> Result<Option<u64>> {
    let n = a.common.n;
    GraphSpec::full(n)?;
    write_json(
        &a.common.out.join("bounds.json"),
        &json!({
            "n": n,
            "longest_word_length": (n * (n - 1) / 2) as u64,
            "axial_lower_bound": axial_lower_bound(n)?,
            "solver_length_bound": solve_length_bound(n),
        }),
    )?;
    Ok(None)
}

fn cmd_growth(a: &GrowthArgs) -> Result<Option<u64>> {
    let spec = kind_spec(a.kind, a.common.n)?;
    let (profile, _) = bfs(&spec, a.common.mem_budget_bytes)?;
    let stats = growth_stats(&profile.layer_sizes)?;
    write_text(&a.common.out.join("layers.csv"), &layers_csv(&profile))?;
    write_json(
        &a.common.out.join("growth.json"),
        &json!({
            "kind": spec.kind,
            "n": spec.n,
            "diameter": profile.diameter(),
            "stats": stats,
        }),
    )?;
    Ok(None)
}

fn cmd_gumbel(a: &GrowthArgs) -> Result<Option<u64>> {
    let spec = kind_spec(a.kind, a.common.n)?;
    let (profile, _) = bfs(&spec, a.common.mem_budget_bytes)?;
    let fit = gumbel_fit(&profile.layer_sizes)?;
    write_text(&a.common.out.join("layers.csv"), &layers_csv(&profile))?;
    write_json(
        &a.common.out.join("gumbel.json"),
        &json!({
            "kind": spec.kind,
            "n": spec.n,
            "fit": fit,
        }),
    )?;
    Ok(None)
}

fn cmd_fit(a: &FitArgs) -> Result<Option<u64>> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let sizes: Vec<usize> = match a.kind {
        KindArg::Full => (4..=a.common.n).collect(),
        KindArg::Coset => (6..=a.common.n).filter(|m| m % 2 == 0).collect(),
    };
    for &m in &sizes {
        let spec = kind_spec(a.kind, m)?;
        let (profile, _) = bfs(&spec, a.common.mem_budget_bytes)?;
        xs.push(m as f64);
        ys.push(profile.diameter() as f64);
    }
    let coefficients = poly_fit(&xs, &ys, a.degree)?;
    write_json(
        &a.common.out.join("fit.json"),
        &json!({
            "kind": a.kind,
            "degree": a.degree,
            "sizes": sizes,
            "diameters": ys,
            "coefficients": coefficients,
        }),
    )?;
    Ok(None)
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<Option<u64>> {
    let n = a.common.n;
    let eigs = spectrum(&GraphSpec::full(n)?)?;
    let mut csv = String::from("index,eigenvalue\n");
    for (i, v) in eigs.iter().enumerate() {
        let _ = writeln!(csv, "{i},{v}");
    }
    write_text(&a.common.out.join("spectrum.csv"), &csv)?;
    let mut csv = String::from("center,count\n");
    for (center, count) in histogram(&eigs, a.bins)? {
        let _ = writeln!(csv, "{center},{count}");
    }
    write_text(&a.common.out.join("spectrum_hist.csv"), &csv)?;
    write_json(
        &a.common.out.join("spectrum.json"),
        &json!({
            "n": n,
            "states": eigs.len(),
            "min": eigs.first(),
            "max": eigs.last(),
            "bins": a.bins,
        }),
    )?;
    Ok(None)
}

fn cmd_sortnet(a: &NArgs) -> Result<Option<u64>> {
    let n = a.common.n;
    let source = longest_element(n)?;
    let target = Permutation::identity(n);
    let ens = geodesic_ensemble(n, &source, &target, a.common.mem_budget_bytes)?;
    let mut csv = String::from("step");
    for v in 0..n {
        let _ = write!(csv, ",v{v}");
    }
    csv.push('\n');
    for (t, row) in ens.expected_positions.iter().enumerate() {
        let _ = write!(csv, "{t}");
        for v in row {
            let _ = write!(csv, ",{v}");
        }
        csv.push('\n');
    }
    write_text(&a.common.out.join("trajectories.csv"), &csv)?;
    write_json(
        &a.common.out.join("sortnet.json"),
        &json!({
            "n": n,
            "distance": ens.distance,
            "total_geodesics": ens.total_geodesics.to_string(),
        }),
    )?;
    Ok(None)
}
