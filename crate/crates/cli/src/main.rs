use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gaptour::io::{board_svg, parse_dimacs, parse_tour, parse_tsplib, rank_profile_svg, tour_svg, RunReport};
use gaptour::sat::{self, format_bits, ListId, SatOutcome};
use gaptour::tsp::{self, find_crossing, StopReason};
use gaptour::{
    brute_force_optimum_limited, edge_rank_profile, min_polygon_tour, one_based_labels, solve_ktp, star_tour,
    two_color_raster, Board, EulerScheme, GapInstance, GreedyConfig, Metric, PolygonSpec, RasterVerdict, StepPolicy,
    Tour, DEFAULT_BRUTE_FORCE_LIMIT,
};

const SEED_ENV: &str = "GAPTOUR_SEED";

#[derive(Parser)]
#[command(name = "gaptour", version, about = "Tour optimisation and binary-number SAT")]
struct Cli {
    /// Print the report as JSON instead of `key: value` lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Euclidean TSP from a TSPLIB file.
    #[command(subcommand)]
    Tsp(TspCmd),
    /// Closed knight's tours.
    #[command(subcommand)]
    Ktp(KtpCmd),
    /// Regular polygon tours.
    #[command(subcommand)]
    Polygon(PolygonCmd),
    /// SAT from a DIMACS CNF file.
    #[command(subcommand)]
    Sat(SatCmd),
    /// Diagnostics.
    #[command(subcommand)]
    Diag(DiagCmd),
}

#[derive(Args)]
struct SeedArg {
    /// Random seed (defaults to $GAPTOUR_SEED, then 0).
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum TspCmd {
    /// Greedy restarts and crossing removal until the tour is a simple curve.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = tsp::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value = "greedy")]
        policy: StepPolicy,
        /// Probability of a greedy step under the mixed policy.
        #[arg(long, default_value_t = 0.5)]
        mixed_probability: f64,
        /// Defaults to 10 rounds per city.
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Integer `nint` costs, as TSPLIB defines EUC_2D.
        #[arg(long)]
        tsplib_rounding: bool,
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Two-colour raster check of the final tour, written as PPM.
        #[arg(long)]
        raster: Option<PathBuf>,
        /// Raster pixels per coordinate unit [default: chosen from the tour's geometry].
        #[arg(long)]
        resolution: Option<u32>,
    },
    /// Exact optimum by enumeration (small instances only).
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
        limit: usize,
        #[arg(long)]
        maximize: bool,
        #[arg(long)]
        tsplib_rounding: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Uniform,
    Quadrant,
    QuadrantDisplacement,
}

#[derive(Subcommand)]
enum KtpCmd {
    Solve {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, value_enum, default_value = "uniform")]
        scheme: SchemeArg,
        /// Knight-move constant for the uniform scheme.
        #[arg(long)]
        c1: Option<f64>,
        #[command(flatten)]
        seed: SeedArg,
        /// Total restarts before giving up.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, default_value_t = tsp::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PolygonCmd {
    /// Maximum euclidean tour of a regular polygon with odd n.
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Minimum tour: the polygon itself.
    Min {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value = "euclidean")]
        metric: Metric,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Det,
    Prob,
    Knowledge,
}

#[derive(Subcommand)]
enum SatCmd {
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "det")]
        algorithm: Algorithm,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Subcommand)]
enum DiagCmd {
    /// Sorted-cost-row rank of every tour edge.
    Ranks {
        file: PathBuf,
        tour: PathBuf,
        #[arg(long)]
        tsplib_rounding: bool,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

/// An input problem; reported on stderr with exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<(RunReport, bool), InputError>;

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), InputError> {
    fs::write(path, bytes).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path, rounding: bool) -> Result<GapInstance, InputError> {
    Ok(parse_tsplib(&read(path)?, rounding)?)
}

fn ids(order: &[usize]) -> String {
    order.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn stop_name(stop: StopReason) -> &'static str {
    match stop {
        StopReason::JordanCurve => "jordan_curve",
        StopReason::MaxRounds => "max_rounds",
        StopReason::DegenerateCrossings => "degenerate_crossings",
    }
}

fn run_tsp(cmd: TspCmd) -> Outcome {
    match cmd {
        TspCmd::Solve {
            file,
            seed,
            restarts,
            policy,
            mixed_probability,
            max_rounds,
            tsplib_rounding,
            plot,
            raster,
            resolution,
        } => {
            let inst = load_instance(&file, tsplib_rounding)?;
            let config =
                GreedyConfig { restarts, step_policy: policy, mixed_greedy_probability: mixed_probability, seed: seed.seed };
            let run = gaptour::solve_tsp(&inst, &config, max_rounds.unwrap_or(tsp::default_max_rounds(inst.n())))?;
            let simple = find_crossing(&run.tour, &inst)?.is_none();
            let mut report = RunReport::new("tsp solve", stop_name(run.stop));
            report.seed = Some(seed.seed);
            report
                .detail("n", inst.n())
                .detail("restarts", restarts)
                .detail("policy", policy)
                .detail("rounds", run.rounds.len())
                .detail("crossing_free", simple);
            if let Some(first) = run.rounds.first() {
                report.detail("first_greedy_cost", format!("{:.6}", first.greedy_cost));
            }
            report.detail("tour", ids(run.tour.order()));
            report.round_costs = run.rounds.iter().map(|r| r.cost).collect();
            report.final_cost = Some(run.tour.cost());
            if let Some(path) = plot {
                write(&path, tour_svg(&run.tour, inst.planar_coords()?)?.as_bytes())?;
            }
            if let Some(path) = raster {
                let k = match resolution {
                    Some(k) => k,
                    None => tsp::adequate_resolution(&run.tour, &inst)?,
                };
                let check = two_color_raster(&run.tour, &inst, k)?;
                let verdict = match &check.verdict {
                    RasterVerdict::Simple => "simple".to_string(),
                    RasterVerdict::Crossed { marked } => format!("crossed ({} vertices marked)", marked.len()),
                };
                report.detail("raster", verdict).detail("raster_resolution", k).detail("raster_interior_pixels", check.interior_pixels);
                write(&path, &check.image.to_ppm())?;
            }
            Ok((report, run.stop == StopReason::JordanCurve))
        }
        TspCmd::Oracle { file, limit, maximize, tsplib_rounding } => {
            let inst = load_instance(&file, tsplib_rounding)?;
            let best = brute_force_optimum_limited(&inst, maximize, limit)?;
            let mut report = RunReport::new("tsp oracle", if maximize { "maximum" } else { "minimum" });
            report.detail("n", inst.n()).detail("tour", ids(best.order()));
            report.final_cost = Some(best.cost());
            Ok((report, true))
        }
    }
}

fn run_ktp(cmd: KtpCmd) -> Outcome {
    let KtpCmd::Solve { rows, cols, scheme, c1, seed, budget, restarts, plot } = cmd;
    let board = Board::new(rows, cols)?;
    let scheme = match (scheme, c1) {
        (SchemeArg::Uniform, Some(c1)) => EulerScheme::Uniform { c1 },
        (SchemeArg::Uniform, None) => EulerScheme::uniform(),
        (_, Some(_)) => return Err(InputError("--c1 applies to the uniform scheme only".into())),
        (SchemeArg::Quadrant, None) => EulerScheme::quadrant(),
        (SchemeArg::QuadrantDisplacement, None) => EulerScheme::quadrant_with(gaptour::QuadrantPolicy::Displacement),
    };
    let config = GreedyConfig { restarts, ..GreedyConfig::with_seed(seed.seed) };
    let run = solve_ktp(&board, &scheme, &config, budget)?;
    let status = if run.proven {
        "closed_knight_tour"
    } else if !run.parity_feasible {
        "no_closed_tour_parity"
    } else {
        "budget_exhausted"
    };
    let mut report = RunReport::new("ktp solve", status);
    report.seed = Some(seed.seed);
    report.detail("board", board).detail("restarts_used", run.restarts_used);
    if !run.parity_feasible {
        report.detail(
            "parity",
            format!("{} squares is odd; a closed knight's tour alternates colours, so none exists", board.area()),
        );
    }
    let squares: Vec<String> = run.tour.order().iter().map(|&v| board.square(v).to_string()).collect();
    report
        .detail("knight_edges", run.report.knight_edge_count)
        .detail("non_knight_edges", run.report.non_knight_edges.len())
        .detail(
            "flagged",
            run.report.non_knight_edges.iter().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(" "),
        )
        .detail("crossings", run.report.crossing_count)
        .detail("tour", squares.join(" "));
    report.final_cost = Some(run.tour.cost());
    if let Some(path) = plot {
        write(&path, board_svg(&run.tour, &board)?.as_bytes())?;
    }
    Ok((report, run.proven))
}

fn run_polygon(cmd: PolygonCmd) -> Outcome {
    let (name, tour): (&str, Tour) = match cmd {
        PolygonCmd::Star { n, radius } => ("polygon star", star_tour(&PolygonSpec::new(n, radius)?, Metric::Euclidean)?),
        PolygonCmd::Min { n, radius, metric } => ("polygon min", min_polygon_tour(&PolygonSpec::new(n, radius)?, metric)),
    };
    let labels: Vec<String> = one_based_labels(tour.order()).iter().map(|l| l.to_string()).collect();
    let mut report = RunReport::new(name, "ok");
    report.detail("n", tour.len()).detail("sequence", labels.join(" "));
    report.final_cost = Some(tour.cost());
    Ok((report, true))
}

fn run_sat(cmd: SatCmd) -> Outcome {
    let SatCmd::Solve { file, algorithm, seed } = cmd;
    let parsed = parse_dimacs(&read(&file)?)?;
    let inst = parsed.instance;
    let n = inst.n();
    let mut report = RunReport::new("sat solve", "");
    report.detail("variables", n).detail("clauses", inst.m()).detail("tautologies_dropped", parsed.tautologies_dropped);
    let witness = if !inst.is_simple() {
        report.detail("algorithm", "exhaustive");
        sat::exhaustive_solve(&inst)?.map(|y| (y, "solution"))
    } else {
        match algorithm {
            Algorithm::Det | Algorithm::Prob => {
                let run = match algorithm {
                    Algorithm::Det => sat::solve_deterministic(&inst)?,
                    _ => {
                        report.seed = Some(seed.seed);
                        sat::solve_probabilistic(&inst, seed.seed)?
                    }
                };
                report
                    .detail("algorithm", if matches!(algorithm, Algorithm::Det) { "det" } else { "prob" })
                    .detail("evaluations", run.evaluations)
                    .detail("marked", run.marked);
                match run.outcome {
                    SatOutcome::Solution(y) => Some((y, "solution")),
                    SatOutcome::Augmented(y) => Some((y, "augmented")),
                    SatOutcome::Unsatisfiable => None,
                }
            }
            Algorithm::Knowledge => {
                let k = sat::build_knowledge(&inst)?;
                report
                    .detail("algorithm", "knowledge")
                    .detail("solutions", k.solutions().len())
                    .detail("free", k.len(ListId::Free))
                    .detail("blocked", k.len(ListId::Blocked));
                let first_free = k.forward(ListId::Free).first().copied();
                k.solutions().first().map(|&y| (y, "solution")).or(first_free.map(|y| (y, "free")))
            }
        }
    };
    report.status = if witness.is_some() { "satisfiable" } else { "unsatisfiable" }.to_string();
    if let Some((y, kind)) = witness {
        report.detail("witness", format_bits(y, n)).detail("witness_kind", kind);
    }
    Ok((report, witness.is_some()))
}

fn run_diag(cmd: DiagCmd) -> Outcome {
    let DiagCmd::Ranks { file, tour, tsplib_rounding, plot } = cmd;
    let inst = load_instance(&file, tsplib_rounding)?;
    let tour = Tour::new(parse_tour(&read(&tour)?)?, &inst)?;
    let profile = edge_rank_profile(&tour, &inst)?;
    let ranks: Vec<usize> = profile.iter().flatten().copied().collect();
    let max = ranks.iter().copied().max().unwrap_or(0);
    let nearest = ranks.iter().filter(|&&r| r <= 2).count();
    let mut report = RunReport::new("diag ranks", "ok");
    report
        .detail("n", inst.n())
        .detail("max_rank", max)
        .detail("edge_ends_within_rank_2", format!("{nearest}/{}", ranks.len()))
        .detail("ranks", profile.iter().map(|[p, s]| format!("{p},{s}")).collect::<Vec<_>>().join(" "));
    report.final_cost = Some(tour.cost());
    if let Some(path) = plot {
        write(&path, rank_profile_svg(&profile)?.as_bytes())?;
    }
    Ok((report, true))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let outcome = match cli.command {
        Command::Tsp(c) => run_tsp(c),
        Command::Ktp(c) => run_ktp(c),
        Command::Polygon(c) => run_polygon(c),
        Command::Sat(c) => run_sat(c),
        Command::Diag(c) => run_diag(c),
    };
    match outcome {
        Ok((mut report, positive)) => {
            report.wall_time_ms = start.elapsed().as_secs_f64() * 1000.0;
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(if positive { 0 } else { 1 })
        }
        Err(InputError(msg)) => {
            log::debug!("input error: {msg}");
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
