use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pac_teach::generators::{gen_circles_with_geometry, gen_multiples, gen_random, ErrorModel, GammaSource};
use pac_teach::heuristics::{greedy_teaching_set, ranking, scores, Criterion, StopRule, DEFAULT_ALPHA};
use pac_teach::io::{read_instance, report_items, round_sig, score_rows, serialize_instance, similarity_csv, ResultReport, SolveInputs};
use pac_teach::learner::{simulate, LearnerKind, SimulationConfig, TieRule};
use pac_teach::optimize::{
    approx_optimize_with, probable_optimize_with, size_optimize_with, Budget, Objective, SolveOptions,
};
use pac_teach::{good_partition, success_probability, Error, Instance, SimilarityMode, TeachingSet};

const EXIT_FORMAT: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "pac-teach", version, about = "PAC teaching sets for learners with fallible consistency checks")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    format: Format,

    /// Worker threads for search and simulation.
    #[arg(long, global = true, env = "PAC_TEACH_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Id,
    Em,
}

impl From<ModeArg> for SimilarityMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Id => SimilarityMode::Identification,
            ModeArg::Em => SimilarityMode::Employment,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ObjectiveArg {
    Probable,
    Approx,
    Size,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum CriterionArg {
    Uniqueness,
    Homogeneity,
    Combined,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum LearnerArg {
    Naive,
    Prudent,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum TieArg {
    Worst,
    Uniform,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Family {
    Multiples,
    Circles,
    Random,
}

#[derive(clap::Args, Debug)]
struct InstanceArgs {
    /// Instance JSON file.
    #[arg(long)]
    instance: PathBuf,
    /// Override the target concept by id.
    #[arg(long)]
    target: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact success probability of a teaching set.
    Evaluate {
        #[command(flatten)]
        input: InstanceArgs,
        /// Comma-separated example ids.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        #[arg(long)]
        q: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Id)]
        mode: ModeArg,
    },
    /// Optimal teaching set by exhaustive search.
    Solve {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        /// Decimal digits of the q grid (approx objective).
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, value_enum, default_value_t = ModeArg::Id)]
        mode: ModeArg,
        /// Approx objective: search the distinct similarity values instead of the grid.
        #[arg(long)]
        exact_q: bool,
        #[arg(long)]
        max_subsets: Option<u64>,
        /// Soft wall-time limit in seconds.
        #[arg(long)]
        max_time: Option<f64>,
    },
    /// Greedy heuristic teaching set.
    Heuristic {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        /// `size:K` or `prob:P@Q`.
        #[arg(long)]
        stop: String,
        /// Similarity used by a `prob:` stop rule.
        #[arg(long, value_enum, default_value_t = ModeArg::Id)]
        mode: ModeArg,
    },
    /// Monte-Carlo learner simulation.
    Simulate {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = LearnerArg::Prudent)]
        learner: LearnerArg,
        #[arg(long, value_enum, default_value_t = TieArg::Worst)]
        tie: TieArg,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Id)]
        mode: ModeArg,
    },
    /// Generate a synthetic instance file.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Target concept id.
        #[arg(long)]
        target: Option<String>,
        /// multiples: comma-separated divisors.
        #[arg(long, value_delimiter = ',')]
        ks: Vec<u64>,
        /// multiples: largest example.
        #[arg(long)]
        x_max: Option<u64>,
        /// multiples: `zero`, `const:G`, `uniform:MAX@SEED` or `file:PATH`.
        #[arg(long, default_value = "zero")]
        gamma: String,
        /// circles/random: number of concepts.
        #[arg(long)]
        concepts: Option<usize>,
        /// circles/random: number of examples.
        #[arg(long)]
        examples: Option<usize>,
        /// circles: `zero`, `band:WIDTH@GAMMA` or `dist:SCALE`.
        #[arg(long, default_value = "zero")]
        error: String,
        /// circles: also write point coordinates and scores as CSV.
        #[arg(long)]
        points_csv: Option<PathBuf>,
        /// random: upper bound of the error probabilities.
        #[arg(long, default_value_t = 0.3)]
        gamma_max: f64,
        /// random: probability of a positive label.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Concept-by-concept similarity matrix as CSV.
    Simmatrix {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Id)]
        mode: ModeArg,
    },
}

enum Failure {
    Usage(String),
    Format(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            Error::Io(_) => Failure::Format(e.to_string()),
            _ => Failure::Format(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => Cli::command().error(ErrorKind::InvalidValue, msg).exit(),
        Err(Failure::Format(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FORMAT)
        }
        Err(Failure::Budget(out)) => {
            print!("{out}");
            eprintln!("error: resource budget exhausted");
            ExitCode::from(EXIT_BUDGET)
        }
    }
}

fn conflict(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ArgumentConflict, msg).exit()
}

fn missing(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::MissingRequiredArgument, msg).exit()
}

fn load(input: &InstanceArgs) -> Result<Instance, Failure> {
    let inst = read_instance(&input.instance)
        .map_err(|e| Failure::Format(format!("{}: {e}", input.instance.display())))?;
    retarget(inst, input.target.as_deref())
}

fn retarget(inst: Instance, target: Option<&str>) -> Result<Instance, Failure> {
    match target {
        None => Ok(inst),
        Some(id) => {
            let idx = inst
                .concept_index(id)
                .ok_or_else(|| Failure::Usage(format!("unknown target `{id}`")))?;
            Ok(inst.with_target(idx)?)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = cli.format;
    let threads = cli.threads;
    match cli.command {
        Command::Evaluate { input, set, q, mode } => {
            let inst = load(&input)?;
            let set = TeachingSet::from_ids(&inst, &set)?;
            let partition = good_partition(&inst, q, mode.into())?;
            let p = success_probability(&inst, &set, &partition)?;
            match format {
                Format::Table => println!("{}", round_sig(p)),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "teaching_set": report_items(&inst, &set),
                        "q": round_sig(q),
                        "mode": SimilarityMode::from(mode),
                        "success_probability": round_sig(p),
                    }))
                    .expect("serializes")
                ),
            }
            Ok(())
        }
        Command::Solve { input, objective, q, p, k, d, mode, exact_q, max_subsets, max_time } => {
            let objective = match objective {
                ObjectiveArg::Probable => Objective::Probable,
                ObjectiveArg::Approx => Objective::Approx,
                ObjectiveArg::Size => Objective::Size,
            };
            check_solve_flags(objective, q, p, k, d, exact_q);
            let inst = load(&input)?;
            let options = SolveOptions {
                threads,
                budget: Budget {
                    max_subsets,
                    max_time: max_time.map(Duration::from_secs_f64),
                },
                exact_q,
            };
            let mode = mode.into();
            let result = match objective {
                Objective::Probable => probable_optimize_with(&inst, q.unwrap(), k.unwrap(), mode, &options)?,
                Objective::Approx => approx_optimize_with(&inst, p.unwrap(), k.unwrap(), d.unwrap_or(2), mode, &options)?,
                Objective::Size => size_optimize_with(&inst, q.unwrap(), p.unwrap(), mode, &options)?,
            };
            let report = ResultReport::new(&inst, &result, SolveInputs { q, p, k, d: d.or((objective == Objective::Approx).then_some(2)) });
            let out = match format {
                Format::Json => report.to_json() + "\n",
                Format::Table => report.to_table(),
            };
            if result.budget_exhausted {
                return Err(Failure::Budget(out));
            }
            print!("{out}");
            Ok(())
        }
        Command::Heuristic { input, criterion, alpha, stop, mode } => {
            let inst = load(&input)?;
            let criterion = match criterion {
                CriterionArg::Uniqueness => Criterion::Uniqueness,
                CriterionArg::Homogeneity => Criterion::Homogeneity,
                CriterionArg::Combined => Criterion::Combined,
            };
            let stop = parse_stop(&stop, mode.into()).map_err(Failure::Usage)?;
            let table = scores(&inst, alpha)?;
            let result = greedy_teaching_set(&inst, criterion, alpha, stop)?;
            let order = ranking(&table, criterion);
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "criterion": criterion,
                        "alpha": round_sig(alpha),
                        "scores": score_rows(&inst, &table),
                        "teaching_set": report_items(&inst, &result.teaching_set),
                        "order": result.order.iter().map(|&x| &inst.examples()[x]).collect::<Vec<_>>(),
                        "satisfied": result.satisfied,
                        "achieved_p": result.achieved_p.map(round_sig),
                    }))
                    .expect("serializes")
                ),
                Format::Table => {
                    let mut out = format!("{:<12} {:>14} {:>14} {:>14}\n", "example", "uniqueness", "homogeneity", "combined");
                    for row in order.iter().map(|&x| &table[x]) {
                        let _ = writeln!(
                            out,
                            "{:<12} {:>14} {:>14} {:>14}",
                            inst.examples()[row.example],
                            round_sig(row.uniqueness),
                            round_sig(row.homogeneity),
                            round_sig(row.combined)
                        );
                    }
                    let chosen: Vec<String> = report_items(&inst, &result.teaching_set)
                        .into_iter()
                        .map(|it| format!("({}, {})", it.example, it.label))
                        .collect();
                    let _ = writeln!(out, "chosen set   {{{}}}", chosen.join(", "));
                    let _ = writeln!(out, "satisfied    {}", result.satisfied);
                    if let Some(p) = result.achieved_p {
                        let _ = writeln!(out, "achieved p   {}", round_sig(p));
                    }
                    print!("{out}");
                }
            }
            Ok(())
        }
        Command::Simulate { input, set, trials, seed, learner, tie, q, mode } => {
            let inst = load(&input)?;
            let set = TeachingSet::from_ids(&inst, &set)?;
            let partition = good_partition(&inst, q, mode.into())?;
            let config = SimulationConfig {
                learner: match learner {
                    LearnerArg::Naive => LearnerKind::Naive,
                    LearnerArg::Prudent => LearnerKind::Prudent,
                },
                tie: match tie {
                    TieArg::Worst => TieRule::Worst,
                    TieArg::Uniform => TieRule::Uniform,
                },
                trials,
                seed,
            };
            let est = match threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t.max(1))
                    .build()
                    .map_err(|e| Failure::Usage(e.to_string()))?
                    .install(|| simulate(&inst, &set, &partition, &config))?,
                None => simulate(&inst, &set, &partition, &config)?,
            };
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "learner": config.learner,
                        "tie": config.tie,
                        "trials": est.trials,
                        "seed": seed,
                        "successes": est.successes,
                        "estimate": round_sig(est.estimate),
                        "std_error": round_sig(est.std_error),
                    }))
                    .expect("serializes")
                ),
                Format::Table => println!("{} ± {}", round_sig(est.estimate), round_sig(est.std_error)),
            }
            Ok(())
        }
        Command::Gen {
            family,
            out,
            target,
            ks,
            x_max,
            gamma,
            concepts,
            examples,
            error,
            points_csv,
            gamma_max,
            density,
            seed,
        } => {
            if points_csv.is_some() && !matches!(family, Family::Circles) {
                conflict("--points-csv only applies to --family circles");
            }
            let inst = match family {
                Family::Multiples => {
                    if ks.is_empty() {
                        missing("--family multiples requires --ks");
                    }
                    let x_max = x_max.unwrap_or_else(|| missing("--family multiples requires --x-max"));
                    let source = parse_gamma_source(&gamma)?;
                    gen_multiples(&ks, x_max, source)?
                }
                Family::Circles => {
                    let (n, m) = dims(concepts, examples);
                    let model = parse_error_model(&error).map_err(Failure::Usage)?;
                    let (inst, geo) = gen_circles_with_geometry(n, m, model, seed)?;
                    if let Some(path) = &points_csv {
                        std::fs::write(path, points_table(&inst, &geo)).map_err(|e| Failure::Format(e.to_string()))?;
                    }
                    inst
                }
                Family::Random => {
                    let (n, m) = dims(concepts, examples);
                    gen_random(n, m, gamma_max, density, seed)?
                }
            };
            let inst = retarget(inst, target.as_deref())?;
            let text = serialize_instance(&inst);
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| Failure::Format(e.to_string()))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Simmatrix { input, mode } => {
            let inst = load(&input)?;
            print!("{}", similarity_csv(&inst, mode.into()));
            Ok(())
        }
    }
}

/// Flag name and whether it was given.
type Flags<'a> = &'a [(&'a str, bool)];

fn check_solve_flags(objective: Objective, q: Option<f64>, p: Option<f64>, k: Option<usize>, d: Option<u32>, exact_q: bool) {
    let (needs, forbids): (Flags, Flags) = match objective {
        Objective::Probable => (
            &[("--q", q.is_some()), ("--k", k.is_some())],
            &[("--p", p.is_some()), ("--d", d.is_some()), ("--exact-q", exact_q)],
        ),
        Objective::Approx => (
            &[("--p", p.is_some()), ("--k", k.is_some())],
            &[("--q", q.is_some())],
        ),
        Objective::Size => (
            &[("--q", q.is_some()), ("--p", p.is_some())],
            &[("--k", k.is_some()), ("--d", d.is_some()), ("--exact-q", exact_q)],
        ),
    };
    if let Some((flag, _)) = needs.iter().find(|(_, set)| !set) {
        missing(format!("--objective {objective} requires {flag}"));
    }
    if let Some((flag, _)) = forbids.iter().find(|(_, set)| *set) {
        conflict(format!("{flag} cannot be used with --objective {objective}"));
    }
}

fn dims(concepts: Option<usize>, examples: Option<usize>) -> (usize, usize) {
    let n = concepts.unwrap_or_else(|| missing("this family requires --concepts"));
    let m = examples.unwrap_or_else(|| missing("this family requires --examples"));
    (n, m)
}

fn parse_stop(arg: &str, mode: SimilarityMode) -> Result<StopRule, String> {
    if let Some(k) = arg.strip_prefix("size:") {
        let k = k.parse().map_err(|_| format!("bad stop size `{k}`"))?;
        return Ok(StopRule::Size(k));
    }
    if let Some(rest) = arg.strip_prefix("prob:") {
        let (p, q) = rest
            .split_once('@')
            .ok_or_else(|| format!("stop rule `{arg}` must look like prob:P@Q"))?;
        let p = p.parse().map_err(|_| format!("bad probability `{p}`"))?;
        let q = q.parse().map_err(|_| format!("bad threshold `{q}`"))?;
        return Ok(StopRule::Probability { p, q, mode });
    }
    Err(format!("stop rule `{arg}` must be size:K or prob:P@Q"))
}

fn parse_gamma_source(arg: &str) -> Result<GammaSource, Failure> {
    let usage = |msg: String| Failure::Usage(msg);
    if arg == "zero" {
        return Ok(GammaSource::Zero);
    }
    if let Some(g) = arg.strip_prefix("const:") {
        return g.parse().map(GammaSource::Constant).map_err(|_| usage(format!("bad constant `{g}`")));
    }
    if let Some(rest) = arg.strip_prefix("uniform:") {
        let (max, seed) = rest
            .split_once('@')
            .ok_or_else(|| usage(format!("`{arg}` must look like uniform:MAX@SEED")))?;
        let max = max.parse().map_err(|_| usage(format!("bad bound `{max}`")))?;
        let seed = seed.parse().map_err(|_| usage(format!("bad seed `{seed}`")))?;
        return Ok(GammaSource::Uniform { max, seed });
    }
    if let Some(path) = arg.strip_prefix("file:") {
        let bytes = std::fs::read(path).map_err(|e| Failure::Format(format!("{path}: {e}")))?;
        let rows: Vec<Vec<f64>> =
            serde_json::from_slice(&bytes).map_err(|e| Failure::Format(format!("{path}: {e}")))?;
        return Ok(GammaSource::Matrix(rows));
    }
    Err(usage(format!("unknown gamma source `{arg}`")))
}

fn parse_error_model(arg: &str) -> Result<ErrorModel, String> {
    if arg == "zero" {
        return Ok(ErrorModel::Zero);
    }
    if let Some(rest) = arg.strip_prefix("band:") {
        let (w, g) = rest
            .split_once('@')
            .ok_or_else(|| format!("`{arg}` must look like band:WIDTH@GAMMA"))?;
        return Ok(ErrorModel::BoundaryBand {
            width: w.parse().map_err(|_| format!("bad width `{w}`"))?,
            gamma0: g.parse().map_err(|_| format!("bad error `{g}`"))?,
        });
    }
    if let Some(s) = arg.strip_prefix("dist:") {
        return Ok(ErrorModel::DistanceProportional {
            scale: s.parse().map_err(|_| format!("bad scale `{s}`"))?,
        });
    }
    Err(format!("unknown error model `{arg}`"))
}

/// Per-point CSV: coordinates, target label, and for every non-target circle
/// the probability of it being judged consistent with the target-labelled
/// point.
fn points_table(inst: &Instance, geo: &pac_teach::generators::CirclesGeometry) -> String {
    let target = inst.target();
    let others: Vec<usize> = (0..inst.num_concepts()).filter(|&c| c != target).collect();
    let mut out = String::from("example,x,y,target_label");
    for &c in &others {
        let _ = write!(out, ",keep_{}", inst.concepts()[c]);
    }
    out.push('\n');
    for (x, &(px, py)) in geo.points.iter().enumerate() {
        let _ = write!(out, "{},{},{},{}", inst.examples()[x], round_sig(px), round_sig(py), u8::from(inst.target_label(x)));
        for &c in &others {
            let item = pac_teach::LabelledExample { example: x, label: inst.target_label(x) };
            let _ = write!(out, ",{}", round_sig(pac_teach::keep_probability(inst, c, item)));
        }
        out.push('\n');
    }
    out
}
