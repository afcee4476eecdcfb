//! Command-line front end: generate trees, run bound algorithms with
//! certification, validate sequences, solve exactly, and batch-bench corpora.
//!
//! Exit codes: 0 success/valid, 1 verdict failure, 2 usage or I/O error,
//! 3 search budget exceeded.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pyro::bounds::{
    burn_complete, burn_fbtnp_height, burn_fbtnp_improved, burn_fbtnp_sqrt_n, burn_general_tree,
    burn_perfect, closed_form, general_comparison_bounds, ComparisonBounds,
};
use pyro::burn::{is_valid_burning, is_valid_cover, simulate, BurnVerdict};
use pyro::exact::burning_number_exact;
use pyro::gen::{generate, GenSpec};
use pyro::io::{parse_edge_list, parse_sequence, to_dot, write_edge_list, write_sequence};
use pyro::tree::classify;
use pyro::{BoundResult, Budget, BurningSequence, Classification, Error, RootedView, Tree};

const EXIT_VERDICT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Seed used when a generator flag leaves it unset: `PYRO_SEED` or 0.
fn default_seed() -> u64 {
    std::env::var("PYRO_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

/// Smallest `s` with `s * s >= x`.
fn csqrt(x: usize) -> usize {
    let s = x.isqrt();
    if s * s < x {
        s + 1
    } else {
        s
    }
}

#[derive(Parser)]
#[command(
    name = "pyro",
    version,
    about = "Tree burning: generators, certified bounds, validation, exact solving"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a tree from a named family and write its edge list
    Gen(GenCmd),
    /// Run a bound algorithm on a tree and certify the result
    Bound(BoundCmd),
    /// Validate a burning sequence against a tree
    Verify(VerifyCmd),
    /// Compute the exact burning number by branch and bound
    Solve(SolveCmd),
    /// Batch-run algorithms over a corpus of generator specs
    Bench(BenchCmd),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Algo {
    Perfect,
    Complete,
    Height,
    Sqrt,
    Improved,
    General,
    Auto,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Perfect => "perfect",
            Algo::Complete => "complete",
            Algo::Height => "height",
            Algo::Sqrt => "sqrt",
            Algo::Improved => "improved",
            Algo::General => "general",
            Algo::Auto => "auto",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Default)]
enum ReportFormat {
    #[default]
    Json,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Gen(c) => cmd_gen(c),
        Cmd::Bound(c) => cmd_bound(c),
        Cmd::Verify(c) => cmd_verify(c),
        Cmd::Solve(c) => cmd_solve(c),
        Cmd::Bench(c) => cmd_bench(c),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("pyro: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn read_to_string(path: &Path) -> anyhow::Result<String> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(text)
}

fn load_tree(path: &Path) -> anyhow::Result<Tree> {
    parse_edge_list(&read_to_string(path)?)
        .with_context(|| format!("parsing {}", path.display()))
}

fn print_report<T: Serialize>(format: ReportFormat, report: &T, text: impl FnOnce() -> String) {
    match format {
        ReportFormat::Json => {
            println!("{}", serde_json::to_string_pretty(report).expect("serializable report"))
        }
        ReportFormat::Text => print!("{}", text()),
    }
}

// ---------------------------------------------------------------- gen ----

#[derive(Args)]
struct GenCmd {
    #[command(subcommand)]
    family: FamilyCmd,
    /// Edge-list output file
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write a Graphviz DOT rendering here
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t, global = true)]
    format: ReportFormat,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Perfect binary tree of height h
    Perfect {
        #[arg(long)]
        h: usize,
    },
    /// Complete binary tree: full to height h-1, `leaves` on the last level
    Complete {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        leaves: usize,
    },
    /// Random full binary tree (odd n)
    FullRandom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Random full binary tree that is not perfect (odd n >= 5)
    FbtnpRandom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Random tree whose internal vertices have 2..=k children
    ThreeKAryRandom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Path on n vertices
    Path {
        #[arg(long)]
        n: usize,
    },
    /// Extremal chain burning in exactly k steps, with its witness
    Prop1 {
        #[arg(long)]
        k: usize,
    },
    /// Uniform random labeled tree
    RandomTree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

impl FamilyCmd {
    fn spec(&self) -> GenSpec {
        let seed = |s: &Option<u64>| s.unwrap_or_else(default_seed);
        match self {
            FamilyCmd::Perfect { h } => GenSpec::Perfect { h: *h },
            FamilyCmd::Complete { h, leaves } => GenSpec::Complete {
                h: *h,
                leaves: *leaves,
            },
            FamilyCmd::FullRandom { n, seed: s } => GenSpec::FullRandom {
                n: *n,
                seed: seed(s),
            },
            FamilyCmd::FbtnpRandom { n, seed: s } => GenSpec::FbtnpRandom {
                n: *n,
                seed: seed(s),
            },
            FamilyCmd::ThreeKAryRandom { n, k, seed: s } => GenSpec::ThreeKAryRandom {
                n: *n,
                k: *k,
                seed: seed(s),
            },
            FamilyCmd::Path { n } => GenSpec::Path { n: *n },
            FamilyCmd::Prop1 { k } => GenSpec::Prop1Maximal { k: *k },
            FamilyCmd::RandomTree { n, seed: s } => GenSpec::RandomTree {
                n: *n,
                seed: seed(s),
            },
        }
    }
}

#[derive(Serialize)]
struct GenReport {
    input: GenSpec,
    n: usize,
    root: usize,
    classification: Classification,
    edge_list: Option<String>,
    dot: Option<String>,
    witness: Option<String>,
}

fn cmd_gen(cmd: GenCmd) -> anyhow::Result<u8> {
    let spec = cmd.family.spec();
    let output = generate(&spec)?;
    let rv = &output.rooted;
    let t = rv.tree();
    let classification = classify(t, rv.root())?;
    let edge_text = write_edge_list(t);

    let mut witness_path = None;
    if let Some(out) = &cmd.out {
        std::fs::write(out, &edge_text).with_context(|| format!("writing {}", out.display()))?;
        if let Some(w) = &output.witness {
            let path = PathBuf::from(format!("{}.seq", out.display()));
            std::fs::write(&path, write_sequence(w.sources()))
                .with_context(|| format!("writing {}", path.display()))?;
            witness_path = Some(path);
        }
    }
    if let Some(dot_path) = &cmd.dot {
        std::fs::write(dot_path, to_dot(t))
            .with_context(|| format!("writing {}", dot_path.display()))?;
    }

    let report = GenReport {
        input: spec,
        n: t.n(),
        root: rv.root(),
        classification: classification.clone(),
        edge_list: cmd.out.as_ref().map(|p| p.display().to_string()),
        dot: cmd.dot.as_ref().map(|p| p.display().to_string()),
        witness: witness_path.as_ref().map(|p| p.display().to_string()),
    };
    if cmd.out.is_none() {
        // No file target: the edge list itself is the product.
        print!("{edge_text}");
        if let Some(w) = &output.witness {
            eprint!("{}", write_sequence(w.sources()));
        }
        return Ok(0);
    }
    print_report(cmd.format, &report, || {
        format!(
            "n {}\nheight {}\nroot {}\nbinary {}\nfull {}\nperfect {}\ncomplete {}\nfbtnp {}\nn2 {}\n",
            report.n,
            classification.height,
            report.root,
            classification.is_binary,
            classification.is_full,
            classification.is_perfect,
            classification.is_complete,
            classification.is_fbtnp,
            classification.n2,
        )
    });
    Ok(0)
}

// -------------------------------------------------------------- bound ----

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Check {
    /// Strict process validation (on unless `none` is given)
    Validate,
    /// Cross-check against the exact solver (small inputs)
    Oracle,
    /// Disable the default validation
    None,
}

#[derive(Args)]
struct BoundCmd {
    /// Edge-list file
    tree: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    algo: Algo,
    /// Root vertex for the rooted algorithms
    #[arg(long, default_value_t = 0)]
    root: usize,
    /// Checks to run; repeatable
    #[arg(long = "check", value_enum)]
    checks: Vec<Check>,
    #[arg(long, value_enum, default_value_t)]
    format: ReportFormat,
    /// Include wall-clock timings (output is no longer byte-deterministic)
    #[arg(long)]
    timings: bool,
    /// Oracle node budget
    #[arg(long, default_value_t = 10_000_000)]
    max_nodes: u64,
    /// Oracle time budget in milliseconds
    #[arg(long, default_value_t = 60_000)]
    max_millis: u64,
}

fn run_algo(algo: Algo, t: &Tree, root: usize) -> pyro::Result<(&'static str, BoundResult)> {
    let rooted = || RootedView::new(t.clone(), root);
    match algo {
        Algo::Perfect => Ok(("perfect", burn_perfect(&rooted()?)?)),
        Algo::Complete => Ok(("complete", burn_complete(&rooted()?)?)),
        Algo::Height => Ok(("height", burn_fbtnp_height(&rooted()?)?)),
        Algo::Sqrt => Ok(("sqrt", burn_fbtnp_sqrt_n(&rooted()?)?)),
        Algo::Improved => Ok(("improved", burn_fbtnp_improved(&rooted()?)?)),
        Algo::General => Ok(("general", burn_general_tree(t, root)?)),
        Algo::Auto => {
            let c = classify(t, root)?;
            let pick = if c.is_perfect {
                Algo::Perfect
            } else if c.is_complete {
                Algo::Complete
            } else if c.is_fbtnp || c.min_internal_children.is_some_and(|m| m >= 2) {
                Algo::Improved
            } else {
                Algo::General
            };
            run_algo(pick, t, root)
        }
    }
}

#[derive(Serialize)]
struct OracleCheck {
    b: usize,
    /// The bound may not undercut the optimum.
    at_least_optimal: bool,
    nodes_explored: u64,
}

#[derive(Serialize)]
struct RunReport {
    input: String,
    algo: &'static str,
    n: usize,
    n2: usize,
    result: BoundResult,
    closed_form: Option<(usize, &'static str)>,
    comparison: ComparisonBounds,
    valid: Option<bool>,
    within_claim: bool,
    oracle: Option<OracleCheck>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_clock_ms: Option<u128>,
}

fn cmd_bound(cmd: BoundCmd) -> anyhow::Result<u8> {
    let t = load_tree(&cmd.tree)?;
    let started = Instant::now();
    let (algo_name, result) = match run_algo(cmd.algo, &t, cmd.root) {
        Ok(r) => r,
        Err(e @ Error::BudgetExceeded { .. }) => {
            eprintln!("pyro: {e}");
            return Ok(EXIT_BUDGET);
        }
        Err(e) => return Err(e.into()),
    };

    let do_validate = !cmd.checks.contains(&Check::None);
    let do_oracle = cmd.checks.contains(&Check::Oracle);
    let valid = if do_validate {
        Some(is_valid_burning(&t, &result.sequence)?.valid())
    } else {
        None
    };
    let within_claim = result.steps_used <= result.claimed_bound;
    let oracle = if do_oracle {
        let budget = Budget {
            max_nodes: cmd.max_nodes,
            max_millis: cmd.max_millis,
        };
        match burning_number_exact(&t, &budget) {
            Ok(res) => Some(OracleCheck {
                b: res.b,
                at_least_optimal: result.steps_used >= res.b,
                nodes_explored: res.nodes_explored,
            }),
            Err(e @ Error::BudgetExceeded { .. }) => {
                eprintln!("pyro: {e}");
                return Ok(EXIT_BUDGET);
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };

    let pass = valid.unwrap_or(true)
        && within_claim
        && oracle.as_ref().is_none_or(|o| o.at_least_optimal);
    let n = t.n();
    let rv = RootedView::new(t.clone(), cmd.root)?;
    let report = RunReport {
        input: cmd.tree.display().to_string(),
        algo: algo_name,
        n,
        n2: (0..n).filter(|&v| t.degree(v) == 2).count(),
        closed_form: closed_form(&rv),
        comparison: general_comparison_bounds(&t),
        result,
        valid,
        within_claim,
        oracle,
        verdict: if pass { "pass" } else { "fail" },
        wall_clock_ms: cmd.timings.then(|| started.elapsed().as_millis()),
    };
    print_report(cmd.format, &report, || {
        let mut s = format!(
            "algo {}\nn {}\nbound {}\nsteps {}\nsources {:?}\n",
            report.algo,
            report.n,
            report.result.claimed_bound,
            report.result.steps_used,
            report.result.sequence.sources(),
        );
        if let Some(v) = report.valid {
            s.push_str(&format!("valid {v}\n"));
        }
        if let Some(o) = &report.oracle {
            s.push_str(&format!("oracle_b {}\n", o.b));
        }
        s.push_str(&format!("verdict {}\n", report.verdict));
        s
    });
    Ok(if pass { 0 } else { EXIT_VERDICT })
}

// ------------------------------------------------------------- verify ----

#[derive(Args)]
struct VerifyCmd {
    /// Edge-list file
    tree: PathBuf,
    /// Sequence file, one vertex id per line
    sequence: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: ReportFormat,
}

#[derive(Serialize)]
struct VerifyReport {
    sources: Vec<usize>,
    strict: BurnVerdict,
    cover: bool,
    steps: usize,
    burned: usize,
    n: usize,
    fully_burned_at: Option<usize>,
}

fn cmd_verify(cmd: VerifyCmd) -> anyhow::Result<u8> {
    let t = load_tree(&cmd.tree)?;
    let ids = parse_sequence(&read_to_string(&cmd.sequence)?)
        .with_context(|| format!("parsing {}", cmd.sequence.display()))?;
    let seq = match BurningSequence::new(ids.clone()) {
        Ok(seq) => seq,
        Err(Error::BadParam(msg)) => {
            // A repeated id is a semantic verdict, not a usage error.
            println!("invalid: {msg}");
            return Ok(EXIT_VERDICT);
        }
        Err(e) => return Err(e.into()),
    };
    let strict = is_valid_burning(&t, &seq)?;
    let cover = is_valid_cover(&t, &seq)?;
    let trace = simulate(&t, &seq)?;
    let report = VerifyReport {
        sources: ids,
        strict: strict.clone(),
        cover,
        steps: seq.len(),
        burned: trace.burned_after.last().map_or(0, |b| b.len()),
        n: t.n(),
        fully_burned_at: trace.fully_burned_at,
    };
    print_report(cmd.format, &report, || {
        format!(
            "sources {:?}\nstrict {}\ncover {}\nburned {}/{}\nfully_burned_at {:?}\n",
            report.sources,
            if strict.valid() { "valid" } else { "invalid" },
            report.cover,
            report.burned,
            report.n,
            report.fully_burned_at,
        )
    });
    Ok(if strict.valid() { 0 } else { EXIT_VERDICT })
}

// -------------------------------------------------------------- solve ----

#[derive(Args)]
struct SolveCmd {
    /// Edge-list file
    tree: PathBuf,
    /// Node budget for the search
    #[arg(long, default_value_t = 10_000_000)]
    max_nodes: u64,
    /// Time budget in milliseconds
    #[arg(long, default_value_t = 60_000)]
    max_millis: u64,
    #[arg(long, value_enum, default_value_t)]
    format: ReportFormat,
    /// Include wall-clock timings (output is no longer byte-deterministic)
    #[arg(long)]
    timings: bool,
}

#[derive(Serialize)]
struct SolveReport {
    input: String,
    b: usize,
    witness: Vec<usize>,
    nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_clock_ms: Option<u128>,
}

#[derive(Serialize)]
struct BudgetReport {
    error: &'static str,
    nodes_explored: u64,
    best_upper: Option<usize>,
}

fn cmd_solve(cmd: SolveCmd) -> anyhow::Result<u8> {
    let t = load_tree(&cmd.tree)?;
    let budget = Budget {
        max_nodes: cmd.max_nodes,
        max_millis: cmd.max_millis,
    };
    let started = Instant::now();
    match burning_number_exact(&t, &budget) {
        Ok(res) => {
            let report = SolveReport {
                input: cmd.tree.display().to_string(),
                b: res.b,
                witness: res.witness.sources().to_vec(),
                nodes_explored: res.nodes_explored,
                wall_clock_ms: cmd.timings.then(|| started.elapsed().as_millis()),
            };
            print_report(cmd.format, &report, || {
                format!(
                    "b {}\nwitness {:?}\nnodes {}\n",
                    report.b, report.witness, report.nodes_explored
                )
            });
            Ok(0)
        }
        Err(Error::BudgetExceeded {
            nodes_explored,
            best_upper,
        }) => {
            let report = BudgetReport {
                error: "budget-exceeded",
                nodes_explored,
                best_upper,
            };
            print_report(cmd.format, &report, || {
                format!(
                    "budget exceeded after {nodes_explored} nodes; best upper bound {best_upper:?}\n"
                )
            });
            Ok(EXIT_BUDGET)
        }
        Err(e) => Err(e.into()),
    }
}

// -------------------------------------------------------------- bench ----

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Default)]
enum BenchFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Args)]
struct BenchCmd {
    /// Corpus file: one generator-spec JSON object per line
    corpus: PathBuf,
    /// Algorithms to run on every instance
    #[arg(long, value_enum, value_delimiter = ',', default_value = "general")]
    algos: Vec<Algo>,
    /// Also compute the exact burning number on small instances
    #[arg(long)]
    oracle: bool,
    /// Largest order the oracle is attempted on
    #[arg(long, default_value_t = 16)]
    oracle_max_n: usize,
    #[arg(long, value_enum, default_value_t)]
    format: BenchFormat,
    /// Write the table here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Serialize, Clone)]
struct AlgoCell {
    steps_used: Option<usize>,
    bound: Option<usize>,
    valid: Option<bool>,
    /// Set when the algorithm does not apply to this instance.
    skipped: Option<String>,
}

#[derive(Serialize, Clone)]
struct BenchRow {
    index: usize,
    spec: GenSpec,
    n: usize,
    n2: usize,
    height: usize,
    algos: Vec<AlgoCell>,
    oracle_b: Option<usize>,
}

#[derive(Serialize)]
struct AlgoAggregate {
    algo: &'static str,
    /// max over instances of steps_used / ceil(sqrt(n)), in thousandths.
    max_ratio_milli: Option<u64>,
    violations: usize,
    skipped: usize,
}

#[derive(Serialize)]
struct BenchReport {
    rows: Vec<BenchRow>,
    aggregates: Vec<AlgoAggregate>,
}

fn bench_row(index: usize, spec: &GenSpec, cmd: &BenchCmd) -> anyhow::Result<BenchRow> {
    let out = generate(spec).with_context(|| format!("corpus line {}", index + 1))?;
    let rv = out.rooted;
    let t = rv.tree();
    let n = t.n();
    let root = rv.root();
    let c = classify(t, root)?;
    let mut cells = Vec::with_capacity(cmd.algos.len());
    for &algo in &cmd.algos {
        match run_algo(algo, t, root) {
            Ok((_, r)) => {
                let valid = is_valid_burning(t, &r.sequence)?.valid();
                cells.push(AlgoCell {
                    steps_used: Some(r.steps_used),
                    bound: Some(r.claimed_bound),
                    valid: Some(valid),
                    skipped: None,
                });
            }
            Err(
                e @ (Error::NotEligible(_)
                | Error::NotPerfect
                | Error::NotComplete
                | Error::IsPerfect
                | Error::NotFbtnp),
            ) => cells.push(AlgoCell {
                steps_used: None,
                bound: None,
                valid: None,
                skipped: Some(e.to_string()),
            }),
            Err(e) => return Err(e.into()),
        }
    }
    let oracle_b = if cmd.oracle && n <= cmd.oracle_max_n {
        Some(burning_number_exact(t, &Budget::default())?.b)
    } else {
        None
    };
    Ok(BenchRow {
        index,
        spec: spec.clone(),
        n,
        n2: c.n2,
        height: c.height,
        algos: cells,
        oracle_b,
    })
}

fn cmd_bench(cmd: BenchCmd) -> anyhow::Result<u8> {
    let text = read_to_string(&cmd.corpus)?;
    let specs: Vec<GenSpec> = text
        .lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty() && !line.trim_start().starts_with('#'))
        .map(|(i, line)| {
            GenSpec::from_json(line).map_err(|e| anyhow!("corpus line {}: {e}", i + 1))
        })
        .collect::<anyhow::Result<_>>()?;
    if specs.is_empty() {
        return Err(anyhow!("corpus {} holds no specs", cmd.corpus.display()));
    }

    let jobs = cmd
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
        .clamp(1, specs.len());
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<anyhow::Result<BenchRow>>>> =
        Mutex::new((0..specs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= specs.len() {
                    break;
                }
                let row = bench_row(i, &specs[i], &cmd);
                slots.lock().expect("bench worker panicked")[i] = Some(row);
            });
        }
    });
    let rows: Vec<BenchRow> = slots
        .into_inner()
        .expect("bench worker panicked")
        .into_iter()
        .map(|slot| slot.expect("every index visited"))
        .collect::<anyhow::Result<_>>()?;

    // Aggregates per algorithm, in input order.
    let mut aggregates = Vec::with_capacity(cmd.algos.len());
    for (ai, &algo) in cmd.algos.iter().enumerate() {
        let mut max_ratio_milli = None;
        let mut violations = 0;
        let mut skipped = 0;
        for row in &rows {
            let cell = &row.algos[ai];
            match (cell.steps_used, cell.bound, cell.valid) {
                (Some(steps), Some(bound), Some(valid)) => {
                    if !valid || steps > bound {
                        violations += 1;
                    }
                    let ratio = (steps * 1000 / csqrt(row.n).max(1)) as u64;
                    max_ratio_milli = Some(max_ratio_milli.map_or(ratio, |m: u64| m.max(ratio)));
                }
                _ => skipped += 1,
            }
            if let (Some(steps), Some(b)) = (cell.steps_used, row.oracle_b) {
                if steps < b {
                    violations += 1;
                }
            }
        }
        aggregates.push(AlgoAggregate {
            algo: algo.name(),
            max_ratio_milli,
            violations,
            skipped,
        });
    }
    let total_violations: usize = aggregates.iter().map(|a| a.violations).sum();

    let rendered = match cmd.format {
        BenchFormat::Json => {
            let report = BenchReport { rows, aggregates };
            format!(
                "{}\n",
                serde_json::to_string_pretty(&report).expect("serializable report")
            )
        }
        BenchFormat::Csv => {
            let mut s = String::from("index,n,n2,height");
            for &algo in &cmd.algos {
                let name = algo.name();
                s.push_str(&format!(",{name}_steps,{name}_bound,{name}_valid"));
            }
            s.push_str(",oracle_b\n");
            for row in &rows {
                s.push_str(&format!("{},{},{},{}", row.index, row.n, row.n2, row.height));
                for cell in &row.algos {
                    let show = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
                    s.push_str(&format!(
                        ",{},{},{}",
                        show(cell.steps_used),
                        show(cell.bound),
                        cell.valid.map_or(String::new(), |v| v.to_string()),
                    ));
                }
                s.push_str(&format!(
                    ",{}\n",
                    row.oracle_b.map_or(String::new(), |b| b.to_string())
                ));
            }
            for a in &aggregates {
                s.push_str(&format!(
                    "# {}: max_ratio_milli={:?} violations={} skipped={}\n",
                    a.algo, a.max_ratio_milli, a.violations, a.skipped
                ));
            }
            s
        }
    };
    match &cmd.out {
        Some(path) => {
            std::fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{rendered}"),
    }
    Ok(if total_violations == 0 { 0 } else { EXIT_VERDICT })
}
