//! `tsp2opt`: generate, solve, verify, certify, and benchmark metric-TSP
//! instances around the 2-opt heuristic and its sqrt(n/2) ratio bound.
//!
//! Exit codes: 0 when the command (and any checks it ran) succeeded, 1 when
//! a verification or certification check failed, 2 on usage or I/O errors.

mod bench;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tsp2opt::certificate::{candidate_diamonds, certify, diamond_area, estimate_diamond_area};
use tsp2opt::exact::{brute_force_opt, held_karp_opt, SolverLimits};
use tsp2opt::families::{
    lower_bound_family, random_euclidean, random_metric_closure, random_tour, RandomFamily,
    RandomFamilySpec,
};
use tsp2opt::instance::Instance;
use tsp2opt::io::{parse_instance, parse_tour, write_instance, write_tour};
use tsp2opt::tour::Tour;
use tsp2opt::two_opt::{improving_witness, run_two_opt, ScanPolicy, ScanStrategy};
use tsp2opt::weight::Weight;
use tsp2opt::AnyInstance;

#[derive(Parser)]
#[command(
    name = "tsp2opt",
    about = "Metric-TSP toolkit: 2-opt local search, exact baselines, worst-case families, and packing certificates for the sqrt(n/2) ratio bound",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instance (and tour) files.
    Gen(GenArgs),
    /// Compute a tour with 2-opt or an exact solver.
    Solve(SolveArgs),
    /// Check a tour: permutation, metricity, 2-optimality.
    Verify(VerifyArgs),
    /// Run the sqrt(n/2) packing certificate for a candidate tour.
    Certify(CertifyArgs),
    /// Batch-run 2-opt against exact optima and emit a CSV.
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Worst-case family on n = 2k^2 vertices with a 2-optimal tour of
    /// ratio exactly k = sqrt(n/2).
    PaperLb,
    /// Uniform points in the unit square (float mode).
    RandomEuclidean,
    /// Metric closure of a uniform symmetric matrix (exact mode).
    RandomMetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    #[value(name = "2opt")]
    TwoOpt,
    #[value(name = "heldkarp")]
    HeldKarp,
    #[value(name = "brute")]
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScanArg {
    First,
    Best,
}

impl ScanArg {
    fn strategy(self) -> ScanStrategy {
        match self {
            ScanArg::First => ScanStrategy::FirstImprovement,
            ScanArg::Best => ScanStrategy::BestImprovement,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Size parameter for paper-lb (n = 2k^2); must be at least 2.
    #[arg(long)]
    k: Option<usize>,
    /// Vertex count for the random families.
    #[arg(long)]
    n: Option<usize>,
    /// How many instances to generate (random families).
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "2opt")]
    algo: AlgoArg,
    /// Start tour for 2opt: `identity`, `random`, or `file:PATH`.
    #[arg(long, default_value = "identity")]
    init: String,
    /// Seed for `--init random`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "first")]
    scan: ScanArg,
    /// Minimum improving gain, in the instance's weight syntax
    /// (default: 0 exact, 1e-12 float).
    #[arg(long)]
    epsilon: Option<String>,
    /// Where to write the tour (default: instance path with `.ALGO.tour`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    tour: PathBuf,
    /// Minimum gain that counts as an improvement (syntax as in the
    /// instance's mode).
    #[arg(long)]
    epsilon: Option<String>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    instance: PathBuf,
    /// The optimal reference tour.
    #[arg(long)]
    opt_tour: PathBuf,
    /// The candidate tour to certify.
    #[arg(long)]
    tour: PathBuf,
    /// First embedding base vertex (default: first vertex of the reference).
    #[arg(long)]
    p: Option<usize>,
    /// Second embedding base vertex (default: same as p).
    #[arg(long)]
    q: Option<usize>,
    /// Cross-check diamond areas on a grid of this resolution.
    #[arg(long, value_name = "RESOLUTION")]
    grid_check: Option<usize>,
    /// Emit machine-readable key=value lines instead of the text report.
    #[arg(long)]
    kv: bool,
}

/// Runs `body` with the concrete `Instance<W>` inside an [`AnyInstance`].
macro_rules! with_any_instance {
    ($any:expr, |$inst:ident| $body:expr) => {
        match $any {
            AnyInstance::Exact($inst) => $body,
            AnyInstance::Float($inst) => $body,
        }
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(true)` = success, `Ok(false)` = a check failed (exit 1),
/// `Err` = usage or I/O problem (exit 2).
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Certify(args) => cmd_certify(&args),
        Command::Bench(args) => bench::cmd_bench(&args),
    }
}

fn read_instance(path: &Path) -> Result<AnyInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read_tour(path: &Path) -> Result<Tour> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_tour(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<bool> {
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating directory {}", args.out.display()))?;
    match args.family {
        FamilyArg::PaperLb => {
            let k = args
                .k
                .ok_or_else(|| anyhow!("--family paper-lb requires --k"))?;
            let fam = lower_bound_family(k)?;
            let stem = format!("paper-lb-k{k}");
            let mut inst_text = write_instance(&fam.instance);
            inst_text.push_str(&fam.label_map_comments());
            write_file(&args.out.join(format!("{stem}.inst")), &inst_text)?;
            write_file(
                &args.out.join(format!("{stem}-optimal.tour")),
                &write_tour(&fam.optimal_tour),
            )?;
            write_file(
                &args.out.join(format!("{stem}-two-optimal.tour")),
                &write_tour(&fam.two_optimal_tour),
            )?;
            println!(
                "paper-lb k={k}: n={}, optimal length {}, 2-optimal length {} (ratio {k})",
                fam.n(),
                fam.optimal_length(),
                fam.two_optimal_length()
            );
        }
        FamilyArg::RandomEuclidean | FamilyArg::RandomMetric => {
            let n = args
                .n
                .ok_or_else(|| anyhow!("random families require --n"))?;
            let spec = RandomFamilySpec {
                family: match args.family {
                    FamilyArg::RandomEuclidean => RandomFamily::EuclideanUnitSquare,
                    _ => RandomFamily::MetricClosure,
                },
                n,
                seed: args.seed,
                count: args.count,
            };
            match spec.family {
                RandomFamily::EuclideanUnitSquare => {
                    for inst in random_euclidean(&spec)? {
                        let path = args.out.join(format!("{}.inst", inst.name()));
                        write_file(&path, &write_instance(&inst))?;
                    }
                }
                RandomFamily::MetricClosure => {
                    for inst in random_metric_closure(&spec)? {
                        let path = args.out.join(format!("{}.inst", inst.name()));
                        write_file(&path, &write_instance(&inst))?;
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Parses `--epsilon` in the instance's weight syntax; validates sign.
fn parse_epsilon<W: Weight>(arg: &Option<String>) -> Result<W> {
    match arg {
        None => Ok(W::default_gain_epsilon()),
        Some(text) => {
            let eps = W::parse_entry(text).map_err(|e| anyhow!("--epsilon: {e}"))?;
            if eps.is_negative() {
                bail!("--epsilon must be nonnegative");
            }
            Ok(eps)
        }
    }
}

fn start_tour(n: usize, init: &str, seed: u64) -> Result<Tour> {
    match init {
        "identity" => Ok(Tour::identity(n)),
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(random_tour(n, &mut rng))
        }
        other => match other.strip_prefix("file:") {
            Some(path) => read_tour(Path::new(path)),
            None => bail!("--init must be `identity`, `random`, or `file:PATH`"),
        },
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<bool> {
    let any = read_instance(&args.instance)?;
    with_any_instance!(any, |inst| solve_typed(&inst, args))
}

fn solve_typed<W: Weight>(inst: &Instance<W>, args: &SolveArgs) -> Result<bool> {
    let limits = SolverLimits::default();
    let started = Instant::now();
    let (tour, suffix) = match args.algo {
        AlgoArg::TwoOpt => {
            let start = start_tour(inst.n(), &args.init, args.seed)?;
            let policy = ScanPolicy {
                strategy: args.scan.strategy(),
                epsilon: parse_epsilon::<W>(&args.epsilon)?,
            };
            let run = run_two_opt(inst, &start, &policy)?;
            println!("algo=2opt");
            println!("n={}", inst.n());
            println!("initial_length={}", run.initial_length);
            println!("length={}", run.final_length());
            println!("moves={}", run.moves());
            (run.tour, "2opt")
        }
        AlgoArg::HeldKarp => {
            let tour = held_karp_opt(inst, &limits)?;
            println!("algo=heldkarp");
            println!("n={}", inst.n());
            println!("length={}", inst.tour_length(&tour)?);
            (tour, "heldkarp")
        }
        AlgoArg::Brute => {
            let tour = brute_force_opt(inst, &limits)?;
            println!("algo=brute");
            println!("n={}", inst.n());
            println!("length={}", inst.tour_length(&tour)?);
            (tour, "brute")
        }
    };
    println!("time_ms={}", started.elapsed().as_millis());
    let out_path = match &args.out {
        Some(path) => path.clone(),
        None => args.instance.with_extension(format!("{suffix}.tour")),
    };
    write_file(&out_path, &write_tour(&tour))?;
    Ok(true)
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let any = read_instance(&args.instance)?;
    let tour = read_tour(&args.tour)?;
    with_any_instance!(any, |inst| verify_typed(&inst, &tour, args))
}

fn verify_typed<W: Weight>(inst: &Instance<W>, tour: &Tour, args: &VerifyArgs) -> Result<bool> {
    println!("instance={} n={} mode={}", inst.name(), inst.n(), inst.mode());
    if tour.n() != inst.n() {
        println!(
            "tour: INVALID (lists {} vertices, instance has {})",
            tour.n(),
            inst.n()
        );
        return Ok(false);
    }
    println!("tour: valid permutation of {} vertices", tour.n());
    println!("length={}", inst.tour_length(tour)?);

    // The parser guarantees symmetric nonnegative weights; metricity is the
    // remaining semantic check. Float mode tolerates rounding-level gaps.
    let slack = W::certificate_tolerance();
    let metric_report = inst.check_metric();
    let metric_ok = metric_report.is_metric_within(&slack);
    match metric_report.worst_gap() {
        None => println!("metric: yes"),
        Some(gap) if metric_ok => {
            println!("metric: yes (worst triangle gap {gap} within tolerance)")
        }
        Some(gap) => {
            let v = &metric_report.violations()[0];
            println!(
                "metric: NO ({} violations; e.g. c({}, {}) > c({}, {}) + c({}, {}), worst gap {gap})",
                metric_report.violations().len(),
                v.i, v.k, v.i, v.j, v.j, v.k
            );
        }
    }

    let epsilon = parse_epsilon::<W>(&args.epsilon)?;
    let two_opt_ok = match improving_witness(inst, tour, &epsilon)? {
        None => {
            println!("two_optimal: yes");
            true
        }
        Some(change) => {
            println!(
                "two_optimal: NO (improving 2-change at positions ({}, {}) with gain {})",
                change.pos_i, change.pos_j, change.gain
            );
            false
        }
    };
    Ok(metric_ok && two_opt_ok)
}

fn cmd_certify(args: &CertifyArgs) -> Result<bool> {
    let any = read_instance(&args.instance)?;
    let reference = read_tour(&args.opt_tour)?;
    let candidate = read_tour(&args.tour)?;
    with_any_instance!(any, |inst| certify_typed(&inst, &reference, &candidate, args))
}

fn certify_typed<W: Weight>(
    inst: &Instance<W>,
    reference: &Tour,
    candidate: &Tour,
    args: &CertifyArgs,
) -> Result<bool> {
    // The certificate's geometry is only meaningful on metric instances;
    // treat non-metric input as a usage error, not a failed check.
    let metric_report = inst.check_metric();
    if !metric_report.is_metric_within(&W::certificate_tolerance()) {
        let v = &metric_report.violations()[0];
        bail!(
            "instance is not metric: c({}, {}) > c({}, {}) + c({}, {}) by {}",
            v.i,
            v.k,
            v.i,
            v.j,
            v.j,
            v.k,
            v.gap()
        );
    }
    let p = args.p.unwrap_or_else(|| reference.order()[0]);
    let q = args.q.unwrap_or(p);
    let report = certify(inst, reference, candidate, p, q)?;
    if args.kv {
        print!("{}", report.to_kv());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(resolution) = args.grid_check {
        let diamonds = candidate_diamonds(inst, reference, candidate, p, q)?;
        let mut max_rel_dev: f64 = 0.0;
        let mut checked = 0usize;
        for d in &diamonds {
            if d.radius.is_zero() {
                continue;
            }
            let exact = diamond_area(d)?.approx_f64();
            let estimate = estimate_diamond_area(d, resolution)?;
            max_rel_dev = max_rel_dev.max((estimate - exact).abs() / exact);
            checked += 1;
        }
        if args.kv {
            println!("grid_resolution={resolution}");
            println!("grid_checked={checked}");
            println!("grid_max_rel_dev={max_rel_dev}");
        } else {
            println!(
                "  grid check at resolution {resolution}: {checked} diamonds, max relative deviation {max_rel_dev:.2e}"
            );
        }
    }
    Ok(report.all_ok())
}
