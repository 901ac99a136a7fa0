//! Argument definitions and subcommand implementations.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use kemeny_core::diverse::{DiverseOutcome, FailedConstraint};
use kemeny_core::instances::{
    fifty_fifty_profile, five_type_profile, generate_bucket_order, generate_profile,
    random_partial_profile, rng, BucketSpec,
};
use kemeny_core::oracle::{oracle_diverse_with, oracle_optimum_with, OracleLimits};
use kemeny_core::pco::{solve_pco_with, PcoAnswer, PcoInstance};
use kemeny_core::width::{
    cocomparability_graph, consistent_path_decomposition_with, exact_pathwidth, PathDecomposition,
    WidthStrategy, DEFAULT_EXACT_CAP,
};
use kemeny_core::{
    reduce_to_co, solve_diverse_with, solve_single_with, CandidateSet, CostInstance, DiverseQuery,
    Profile, SolveOptions,
};

use crate::document::{Decision, InstanceSummary, ResultDocument, Section};
use crate::error::CliError;
use crate::votefile::{parse_votes, serialize_votes};

/// Environment variable overriding the brute-force element cap.
pub const ORACLE_CAP_ENV: &str = "KEMENY_ORACLE_CAP";

#[derive(Parser, Debug)]
#[command(
    name = "kemeny",
    version,
    about = "Exact Kemeny rank aggregation over partial votes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the result document as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Add wall-clock timing to the result document.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Give up after this many seconds (exit code 3).
    #[arg(long, global = true, value_name = "SECONDS")]
    pub timeout: Option<f64>,
    /// How to build the path decomposition.
    #[arg(long, global = true, value_enum, default_value_t = Strategy::Auto)]
    pub strategy: Strategy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    /// Exact up to 12 candidates, heuristic beyond.
    Auto,
    Exact,
    Heuristic,
}

impl From<Strategy> for WidthStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Auto => WidthStrategy::Auto,
            Strategy::Exact => WidthStrategy::Exact,
            Strategy::Heuristic => WidthStrategy::Heuristic,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find an optimal ranking.
    Solve { file: PathBuf },
    /// Find r rankings within delta of optimal, pairwise at least s apart
    /// and with total pairwise distance at least d.
    Diverse {
        file: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        delta: u64,
        #[arg(long, default_value_t = 0)]
        d: u64,
        #[arg(long, default_value_t = 0, conflicts_with = "no_scatter")]
        s: u64,
        /// Only require the rankings to be different (s = 1).
        #[arg(long)]
        no_scatter: bool,
    },
    /// Find r different optimal rankings.
    Optima {
        file: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Largest total pairwise distance of r different rankings within
    /// delta of optimal.
    Maxdiv {
        file: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        delta: u64,
    },
    /// Is there a ranking of score at most k? Every pair some votes leave
    /// unordered must be ordered both ways by some votes.
    Pco {
        file: PathBuf,
        #[arg(long)]
        k: u64,
    },
    /// Brute-force answers for small profiles.
    Oracle {
        file: PathBuf,
        /// Answer a diverse query instead of listing all optima.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        delta: u64,
        #[arg(long, default_value_t = 0)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        s: u64,
        /// Report the largest diversity instead of deciding.
        #[arg(long)]
        maximize: bool,
    },
    /// Write a vote file to standard output.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Check a path decomposition of the unanimity order's
    /// incomparability graph, or build and check one.
    ValidateDecomposition {
        file: PathBuf,
        /// One bag per line, names separated by spaces.
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
    /// Solve a generated corpus, several instances at a time.
    Bench {
        #[arg(long, value_enum, default_value_t = Corpus::Random)]
        corpus: Corpus,
        #[arg(long, default_value_t = 20)]
        count: u64,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        votes: usize,
        /// Largest bucket size for the bucket corpus.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        noise: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// Noisy rankings around a random bucket order.
    Buckets {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        votes: usize,
        #[arg(long, default_value_t = 0)]
        noise: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random partial votes.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        votes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The five-type election with weak votes.
    FiveType,
    /// Two rankings with fifty voters each.
    FiftyFifty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Corpus {
    Random,
    Buckets,
}

pub enum Output {
    Document(Box<ResultDocument>),
    Text(String),
}

/// What a finished invocation prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Invocation {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Invocation {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Invocation {
    let start = Instant::now();
    match execute(cli) {
        Ok(Output::Text(stdout)) => Invocation {
            stdout,
            stderr: String::new(),
            code: 0,
        },
        Ok(Output::Document(doc)) => {
            let mut doc = *doc;
            if cli.timing {
                doc.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            let code = doc.decision.exit_code();
            let stdout = if cli.json {
                doc.to_json()
            } else {
                doc.to_text()
            };
            Invocation {
                stdout,
                stderr: String::new(),
                code,
            }
        }
        Err(e) => Invocation {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn options(cli: &Cli) -> Result<SolveOptions, CliError> {
    let deadline = match cli.timeout {
        None => None,
        Some(t) if t.is_finite() && t >= 0.0 => Some(Instant::now() + Duration::from_secs_f64(t)),
        Some(t) => return Err(CliError::Usage(format!("invalid timeout {t}"))),
    };
    Ok(SolveOptions {
        strategy: cli.strategy.into(),
        deadline,
    })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

pub fn load_profile(path: &Path) -> Result<Profile, CliError> {
    parse_votes(&read_text(path)?).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn summarize(
    profile: &Profile,
    inst: &CostInstance,
    opts: &SolveOptions,
) -> Result<InstanceSummary, CliError> {
    let cpd = consistent_path_decomposition_with(inst.base(), opts.strategy)?;
    Ok(InstanceSummary {
        candidates: profile.n(),
        voters: profile.m(),
        distinct_votes: profile.votes().len(),
        unanimity_pairs: inst.base().strict_pair_count(),
        incomparable_pairs: cpd.graph.edge_count(),
        width: cpd.width(),
    })
}

fn describe_failure(f: &FailedConstraint) -> String {
    match f {
        FailedConstraint::TooFewSolutions { required } => {
            format!("fewer than {required} different rankings are within budget")
        }
        FailedConstraint::Scatteredness { best, required } => {
            format!("best minimum pairwise distance is {best}, required {required}")
        }
        FailedConstraint::Diversity { best, required } => {
            format!("best total pairwise distance is {best}, required {required}")
        }
    }
}

fn diverse_document(
    command: &str,
    profile: &Profile,
    summary: InstanceSummary,
    out: &DiverseOutcome,
    doc: ResultDocument,
) -> Result<ResultDocument, CliError> {
    let mut doc = doc;
    doc.decision = if out.found {
        Decision::Yes
    } else {
        Decision::No
    };
    doc.command = command.to_string();
    doc.instance = Some(summary);
    doc.optimum = Some(out.optimum);
    if out.found {
        doc.set_witnesses(profile, &out.witnesses)?;
        doc.diversity = Some(out.diversity);
    }
    doc.reason = out.failure.as_ref().map(describe_failure);
    doc.detail("positions", out.stats.positions);
    doc.detail("max-tuples", out.stats.max_tuples);
    Ok(doc)
}

fn oracle_limits() -> Result<OracleLimits, CliError> {
    let mut limits = OracleLimits::default();
    if let Ok(v) = std::env::var(ORACLE_CAP_ENV) {
        limits.max_n = v.trim().parse().map_err(|_| {
            CliError::Usage(format!("{ORACLE_CAP_ENV} must be a number, got `{v}`"))
        })?;
    }
    Ok(limits)
}

fn bag_line(names: &CandidateSet, d: &PathDecomposition, p: usize) -> String {
    let bag = d.bag(p);
    if bag.is_empty() {
        "(empty)".to_string()
    } else {
        bag.iter()
            .map(|v| names.name(v))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let opts = options(cli)?;
    let doc = match &cli.command {
        Command::Solve { file } => {
            let profile = load_profile(file)?;
            let inst = reduce_to_co(&profile);
            let summary = summarize(&profile, &inst, &opts)?;
            let sol = solve_single_with(&inst, &opts)?;
            let mut doc = ResultDocument::new("solve", Decision::Solved);
            doc.instance = Some(summary);
            doc.optimum = Some(sol.cost);
            doc.set_witnesses(&profile, std::slice::from_ref(&sol.ranking))?;
            doc.detail("positions", sol.stats.positions);
            doc.detail("max-triples", sol.stats.max_triples);
            (doc, Some(profile))
        }
        Command::Diverse {
            file,
            r,
            delta,
            d,
            s,
            no_scatter,
        } => {
            let profile = load_profile(file)?;
            let inst = reduce_to_co(&profile);
            let summary = summarize(&profile, &inst, &opts)?;
            let s = if *no_scatter { 1 } else { *s };
            let out = solve_diverse_with(&inst, DiverseQuery::decide(*r, *delta, *d, s), &opts)?;
            let base = ResultDocument::new("diverse", Decision::No)
                .param("r", r)
                .param("delta", delta)
                .param("d", d)
                .param("s", s);
            (
                diverse_document("diverse", &profile, summary, &out, base)?,
                Some(profile),
            )
        }
        Command::Optima { file, r } => {
            let profile = load_profile(file)?;
            let inst = reduce_to_co(&profile);
            let summary = summarize(&profile, &inst, &opts)?;
            let out = solve_diverse_with(&inst, DiverseQuery::distinct_optima(*r), &opts)?;
            let base = ResultDocument::new("optima", Decision::No).param("r", r);
            (
                diverse_document("optima", &profile, summary, &out, base)?,
                Some(profile),
            )
        }
        Command::Maxdiv { file, r, delta } => {
            let profile = load_profile(file)?;
            let inst = reduce_to_co(&profile);
            let summary = summarize(&profile, &inst, &opts)?;
            let out = solve_diverse_with(&inst, DiverseQuery::maximize(*r, *delta), &opts)?;
            let base = ResultDocument::new("maxdiv", Decision::No)
                .param("r", r)
                .param("delta", delta);
            (
                diverse_document("maxdiv", &profile, summary, &out, base)?,
                Some(profile),
            )
        }
        Command::Pco { file, k } => {
            let profile = load_profile(file)?;
            let inst = reduce_to_co(&profile);
            let summary = summarize(&profile, &inst, &opts)?;
            let pco = PcoInstance::new(inst)?;
            let mut doc = ResultDocument::new("pco", Decision::No).param("k", k);
            doc.instance = Some(summary);
            match solve_pco_with(&pco, *k, &opts)? {
                PcoAnswer::Yes { ranking, .. } => {
                    doc.decision = Decision::Yes;
                    doc.set_witnesses(&profile, std::slice::from_ref(&ranking))?;
                }
                PcoAnswer::RejectedByEdges { edges } => {
                    doc.reason = Some(format!(
                        "{edges} unordered pairs each cost at least 1, budget {k}"
                    ));
                }
                PcoAnswer::AboveBudget { optimum } => {
                    doc.optimum = Some(optimum);
                    doc.reason = Some(format!("optimum {optimum} exceeds budget {k}"));
                }
            }
            (doc, Some(profile))
        }
        Command::Oracle {
            file,
            r,
            delta,
            d,
            s,
            maximize,
        } => {
            let profile = load_profile(file)?;
            let inst = reduce_to_co(&profile);
            let limits = oracle_limits()?;
            match r {
                None => {
                    let o = oracle_optimum_with(&inst, &limits)?;
                    let mut doc = ResultDocument::new("oracle", Decision::Solved);
                    doc.optimum = Some(o.cost);
                    doc.detail("optima", o.optima.len());
                    let c = profile.candidates();
                    doc.sections.push(Section {
                        title: "optima".into(),
                        lines: o.optima.iter().map(|t| c.format_ranking(t)).collect(),
                    });
                    (doc, Some(profile))
                }
                Some(r) => {
                    let query = if *maximize {
                        DiverseQuery {
                            s: *s,
                            ..DiverseQuery::maximize(*r, *delta)
                        }
                    } else {
                        DiverseQuery::decide(*r, *delta, *d, *s)
                    };
                    let o = oracle_diverse_with(&inst, &query, &limits)?;
                    let decision = if o.found { Decision::Yes } else { Decision::No };
                    let mut doc = ResultDocument::new("oracle", decision)
                        .param("r", r)
                        .param("delta", delta)
                        .param("s", s);
                    if !*maximize {
                        doc = doc.param("d", d);
                    }
                    doc.optimum = Some(o.optimum);
                    doc.detail("within-budget", o.candidates);
                    if let Some(b) = o.best_diversity {
                        doc.detail("best-diversity", b);
                    }
                    if let Some(b) = o.best_scatter {
                        doc.detail("best-min-distance", b);
                    }
                    (doc, Some(profile))
                }
            }
        }
        Command::Gen { kind } => {
            let profile = match kind {
                GenKind::Buckets {
                    sizes,
                    votes,
                    noise,
                    seed,
                } => {
                    let base = generate_bucket_order(&BucketSpec {
                        sizes: sizes.clone(),
                        seed: *seed,
                    })?;
                    generate_profile(&base, *votes, *noise, *seed)?
                }
                GenKind::Random { n, votes, seed } => random_partial_profile(*n, *votes, *seed)?,
                GenKind::FiveType => five_type_profile(),
                GenKind::FiftyFifty => fifty_fifty_profile(),
            };
            return Ok(Output::Text(serialize_votes(&profile)));
        }
        Command::ValidateDecomposition {
            file,
            decomposition,
        } => {
            let profile = load_profile(file)?;
            let inst = reduce_to_co(&profile);
            let rho = inst.base();
            let names = profile.candidates();
            let g = cocomparability_graph(rho);
            let mut doc = ResultDocument::new("validate-decomposition", Decision::Valid);
            let (d, result) = match decomposition {
                Some(path) => {
                    let d = PathDecomposition::parse_text(&read_text(path)?, names)?;
                    let result = d.validate(&g).and_then(|_| d.check_consistent(rho));
                    (d, result)
                }
                None => {
                    let cpd = consistent_path_decomposition_with(rho, opts.strategy)?;
                    doc.detail("strategy", format!("{:?}", cpd.strategy).to_lowercase());
                    let result = cpd.validate();
                    (cpd.decomposition, result)
                }
            };
            if let Err(e) = result {
                doc.decision = Decision::Invalid;
                doc.reason = Some(e.to_string());
            }
            doc.detail("bags", d.len());
            doc.detail("width", d.width());
            doc.detail("nice", d.is_nice());
            doc.detail("incomparable-pairs", g.edge_count());
            if g.n() <= DEFAULT_EXACT_CAP {
                doc.detail("exact-pathwidth", exact_pathwidth(&g)?);
            }
            doc.sections.push(Section {
                title: "bags".into(),
                lines: (0..d.len()).map(|p| bag_line(names, &d, p)).collect(),
            });
            (doc, None)
        }
        Command::Bench {
            corpus,
            count,
            n,
            votes,
            k,
            noise,
            seed,
            threads,
        } => (
            bench(
                cli, &opts, *corpus, *count, *n, *votes, *k, *noise, *seed, *threads,
            )?,
            None,
        ),
    };
    let (doc, profile) = doc;
    if let Some(p) = profile {
        doc.verify(&p)?;
    }
    Ok(Output::Document(Box::new(doc)))
}

fn bucket_sizes(n: usize, k: usize, seed: u64) -> Vec<usize> {
    use rand::Rng;
    let mut r = rng(seed);
    let mut left = n;
    let mut sizes = Vec::new();
    while left > 0 {
        let s = r.random_range(1..=k.max(1).min(left));
        sizes.push(s);
        left -= s;
    }
    sizes
}

#[allow(clippy::too_many_arguments)]
fn bench(
    cli: &Cli,
    opts: &SolveOptions,
    corpus: Corpus,
    count: u64,
    n: usize,
    votes: usize,
    k: usize,
    noise: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<ResultDocument, CliError> {
    let one = |i: u64| -> String {
        let s = seed + i;
        let started = Instant::now();
        let built = match corpus {
            Corpus::Random => random_partial_profile(n, votes, s),
            Corpus::Buckets => generate_bucket_order(&BucketSpec {
                sizes: bucket_sizes(n, k, s),
                seed: s,
            })
            .and_then(|base| generate_profile(&base, votes, noise, s)),
        };
        let row = built.and_then(|profile| {
            let inst = reduce_to_co(&profile);
            let sol = solve_single_with(&inst, opts)?;
            let edges = cocomparability_graph(inst.base()).edge_count();
            Ok(format!(
                "seed={s} n={n} edges={edges} width={} optimum={}",
                sol.stats.width, sol.cost
            ))
        });
        let mut line = row.unwrap_or_else(|e| format!("seed={s} n={n} error: {e}"));
        if cli.timing {
            line.push_str(&format!(" ms={:.3}", started.elapsed().as_secs_f64() * 1e3));
        }
        line
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    let lines: Vec<String> = pool.install(|| (0..count).into_par_iter().map(one).collect());
    let failed = lines.iter().filter(|l| l.contains("error:")).count();
    let mut doc = ResultDocument::new("bench", Decision::Solved)
        .param("corpus", format!("{corpus:?}").to_lowercase())
        .param("count", count)
        .param("n", n)
        .param("votes", votes)
        .param("seed", seed);
    if corpus == Corpus::Buckets {
        doc = doc.param("k", k).param("noise", noise);
    }
    doc.detail("failed", failed);
    doc.sections.push(Section {
        title: "results".into(),
        lines,
    });
    Ok(doc)
}
