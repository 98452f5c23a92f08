use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fptsum::backward::RadixMode;
use fptsum::experiment::{catalog, find_reduction, run_equivalence_experiment, ChainOptions, ExperimentConfig, ReproBundle};
use fptsum::forward::{subsetsum_to_edgeweight, AlphaDomain};
use fptsum::generate::{
    gen_random_graph, gen_random_ksum, gen_random_lindep, gen_random_targetsum, gen_random_vectorsum, Bias,
    GraphSpec, WeightKind,
};
use fptsum::instances::{parse_instance, serialize_instance, Instance, InstanceKind, ReducedCollection};
use fptsum::solvers::{solve_named, SolverReport};
use fptsum::{Error, Result};
use serde_json::{json, Value};

const EXIT_UNSOLVABLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "fptsum", version, about = "Reductions between k-SUM and k-Clique variants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Clone)]
struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exponent f with numbers bounded by n^f (and ε = 1/f in subsetsum-mode).
    #[arg(long = "f-exponent", global = true, default_value_t = 2)]
    f_exponent: u32,
    /// Directory for output files; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Keep wall-clock readings in solver reports.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenType {
    Ksum,
    Vectorsum,
    Clique,
    Nodeweight,
    Edgeweight,
    Targetsum,
    Lindep,
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    Full,
    Realized,
}

#[derive(Clone, Copy, ValueEnum)]
enum Radix {
    Uniform,
    Mixed,
}

#[derive(Args)]
struct ReduceOpts {
    #[arg(long, value_enum, default_value = "realized")]
    domain: Domain,
    #[arg(long, value_enum, default_value = "uniform")]
    radix: Radix,
    /// Confidence parameter of the random-prime reduction.
    #[arg(long, default_value_t = 100)]
    confidence: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance.
    Gen {
        #[arg(value_enum)]
        kind: GenType,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Magnitude bound M (or the modulus q for field types).
        #[arg(long, default_value_t = 100)]
        m: u64,
        #[arg(long, default_value_t = 0.5)]
        edge_prob: f64,
        /// Plant a solution.
        #[arg(long)]
        plant: bool,
        /// Vector dimension (vectorsum, lindep).
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Apply one registered reduction; writes a JSONL collection.
    Reduce {
        input: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Reduction name, required when several connect the two types.
        #[arg(long)]
        via: Option<String>,
        #[command(flatten)]
        opts: ReduceOpts,
    },
    /// Solve an instance, or every item of a collection (first hit wins).
    Solve {
        input: PathBuf,
        #[arg(long, default_value = "brute")]
        solver: String,
    },
    /// Check a witness; with --source, lift it from a collection item first.
    Verify {
        input: PathBuf,
        /// Comma-separated indices or vertices.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        witness: Vec<usize>,
        /// Item of a collection input.
        #[arg(long, default_value_t = 0)]
        item: usize,
        /// Source instance of the collection.
        #[arg(long)]
        source: Option<PathBuf>,
    },
    /// Run a seeded equivalence experiment, or replay a repro bundle.
    Experiment {
        #[arg(long, required_unless_present = "replay")]
        config: Option<PathBuf>,
        #[arg(long, conflicts_with = "config")]
        replay: Option<PathBuf>,
    },
    /// Reduce Subset Sum on the numbers of a k-SUM file to exact edge-weight
    /// clique instances, for every k in 1..=n.
    SubsetsumMode {
        input: PathBuf,
        /// Also solve every instance by brute force.
        #[arg(long)]
        solve: bool,
    },
    /// List registered reductions.
    Reductions,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

/// Writes `name` under `--out`, or prints to stdout.
fn emit(g: &Global, name: &str, text: &str) -> Result<()> {
    match &g.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn report_json(g: &Global, report: SolverReport) -> Value {
    let report = if g.timings { report } else { report.without_timing() };
    serde_json::to_value(report).expect("report serializes")
}

fn kind(name: &str) -> Result<InstanceKind> {
    InstanceKind::from_name(name).ok_or_else(|| Error::Parameter(format!("unknown instance type {name}")))
}

/// Parses a single instance, falling back to a JSONL collection.
fn load(text: &str) -> Result<Loaded> {
    match parse_instance(text) {
        Ok(inst) => Ok(Loaded::Single(inst)),
        Err(single) => ReducedCollection::parse_jsonl(text)
            .map(Loaded::Collection)
            .map_err(|_| single),
    }
}

/// A malformed witness is an invalid one, not a usage error.
fn checked(r: Result<bool>) -> Result<bool> {
    match r {
        Err(Error::MalformedWitness(_)) => Ok(false),
        other => other,
    }
}

enum Loaded {
    Single(Instance),
    Collection(ReducedCollection<Instance>),
}

fn run(cli: Cli) -> Result<u8> {
    let g = cli.global;
    match cli.command {
        Command::Gen {
            kind,
            n,
            k,
            m,
            edge_prob,
            plant,
            dim,
        } => {
            let bias = if plant { Bias::Plant } else { Bias::None };
            let graph = |weights| GraphSpec {
                n,
                edge_prob,
                k,
                plant_clique: plant,
                weights,
                max_weight: m,
            };
            let inst: Instance = match kind {
                GenType::Ksum => gen_random_ksum(n, k, m, bias, g.seed)?.into(),
                GenType::Vectorsum => gen_random_vectorsum(n, k, dim, m, bias, g.seed)?.into(),
                GenType::Clique => gen_random_graph(&graph(WeightKind::None), g.seed)?,
                GenType::Nodeweight => gen_random_graph(&graph(WeightKind::Node), g.seed)?,
                GenType::Edgeweight => gen_random_graph(&graph(WeightKind::Edge), g.seed)?,
                GenType::Targetsum => gen_random_targetsum(m, n, k, bias, g.seed)?.into(),
                GenType::Lindep => gen_random_lindep(m, n, dim, k, bias, g.seed)?.into(),
            };
            let mut text = serialize_instance(&inst);
            if !text.ends_with('\n') {
                text.push('\n');
            }
            emit(&g, "instance.txt", &text)?;
            Ok(0)
        }
        Command::Reduce {
            input,
            from,
            to,
            via,
            opts,
        } => {
            let (from, to) = (kind(&from)?, kind(&to)?);
            let red = match via {
                Some(name) => find_reduction(&name)?,
                None => {
                    let hits: Vec<_> = catalog().iter().filter(|r| r.from == from && r.to == to).collect();
                    match hits.as_slice() {
                        [one] => *one,
                        [] => return Err(Error::Parameter(format!("no registered reduction from {from} to {to}"))),
                        many => {
                            let names: Vec<_> = many.iter().map(|r| r.name).collect();
                            return Err(Error::Parameter(format!(
                                "several reductions from {from} to {to}: {}; pick one with --via",
                                names.join(", ")
                            )));
                        }
                    }
                }
            };
            if red.from != from || red.to != to {
                return Err(Error::Parameter(format!(
                    "{} maps {} to {}, not {from} to {to}",
                    red.name, red.from, red.to
                )));
            }
            let inst = parse_instance(&read_input(&input)?)?;
            let chain_opts = ChainOptions {
                f_exponent: g.f_exponent,
                domain: match opts.domain {
                    Domain::Full => AlphaDomain::Full,
                    Domain::Realized => AlphaDomain::Realized,
                },
                radix: match opts.radix {
                    Radix::Uniform => RadixMode::Uniform,
                    Radix::Mixed => RadixMode::Mixed,
                },
                confidence: opts.confidence,
                ..Default::default()
            };
            let coll = red.apply(&inst, &chain_opts, g.seed)?;
            emit(&g, "reduced.jsonl", &coll.to_jsonl())?;
            Ok(0)
        }
        Command::Solve { input, solver } => {
            let (solvable, out) = match load(&read_input(&input)?)? {
                Loaded::Single(inst) => {
                    let r = solve_named(&solver, &inst)?;
                    (r.solvable, report_json(&g, r))
                }
                Loaded::Collection(coll) => {
                    let mut out = json!({ "solvable": false, "witness": null, "items": coll.len() });
                    for (i, inst) in coll.instances().enumerate() {
                        let r = solve_named(&solver, inst)?;
                        if r.solvable {
                            out = report_json(&g, r);
                            out["item"] = json!(i);
                            out["items"] = json!(coll.len());
                            break;
                        }
                    }
                    (out["solvable"] == json!(true), out)
                }
            };
            emit(&g, "solution.json", &format!("{out}\n"))?;
            Ok(if solvable { 0 } else { EXIT_UNSOLVABLE })
        }
        Command::Verify {
            input,
            witness,
            item,
            source,
        } => {
            let (ok, lifted) = match (load(&read_input(&input)?)?, source) {
                (Loaded::Single(inst), None) => (checked(inst.verify_witness(&witness))?, None),
                (Loaded::Single(_), Some(_)) => {
                    return Err(Error::Parameter("--source needs a collection input".into()));
                }
                (Loaded::Collection(coll), None) => {
                    let inst = coll
                        .items
                        .get(item)
                        .ok_or_else(|| Error::Parameter(format!("no item {item}")))?;
                    (checked(inst.0.verify_witness(&witness))?, None)
                }
                (Loaded::Collection(coll), Some(src)) => {
                    let src = parse_instance(&read_input(&src)?)?;
                    let red = find_reduction(&coll.reduction)?;
                    match red.lift(&src, &coll, item, &witness) {
                        Ok(w) => (true, Some(w)),
                        Err(Error::Lift(_) | Error::MalformedWitness(_)) => (false, None),
                        Err(e) => return Err(e),
                    }
                }
            };
            let out = match lifted {
                Some(w) => json!({ "valid": ok, "lifted": w }),
                None => json!({ "valid": ok }),
            };
            emit(&g, "verify.json", &format!("{out}\n"))?;
            Ok(if ok { 0 } else { EXIT_UNSOLVABLE })
        }
        Command::Experiment { config, replay } => {
            if let Some(path) = replay {
                let bundle = ReproBundle::from_json(&read_input(&path)?)?;
                let outcome = bundle.replay()?;
                let text = serde_json::to_string_pretty(&outcome).expect("outcome serializes");
                emit(&g, "replay.json", &format!("{text}\n"))?;
                return Ok(if outcome.pass { 0 } else { EXIT_MISMATCH });
            }
            let path = config.expect("clap requires --config");
            let mut cfg = ExperimentConfig::from_json(&read_input(&path)?)?;
            if let Some(dir) = &g.out {
                fs::create_dir_all(dir)?;
                cfg.report.get_or_insert_with(|| dir.join("report.json"));
            }
            let report = run_equivalence_experiment(&cfg)?;
            if cfg.report.is_none() {
                println!("{}", report.to_json());
            }
            for b in &report.failed {
                let text = serde_json::to_string_pretty(b).expect("bundle serializes");
                match &g.out {
                    Some(dir) => fs::write(dir.join(format!("repro-{}.json", b.trial)), text)?,
                    None => eprintln!("{text}"),
                }
                eprintln!("trial {} (seed {}) failed: {}", b.trial, b.trial_seed, b.failure);
            }
            eprintln!("{} / {} trials passed", report.passes, report.trials);
            Ok(if report.passed() { 0 } else { EXIT_MISMATCH })
        }
        Command::SubsetsumMode { input, solve } => {
            let Instance::KSum(src) = parse_instance(&read_input(&input)?)? else {
                return Err(Error::Parameter("subsetsum-mode reads a ksum file (k is ignored)".into()));
            };
            let layers = subsetsum_to_edgeweight(src.numbers(), src.target(), g.f_exponent)?;
            let mut summary = Vec::with_capacity(layers.len());
            let mut any = false;
            for layer in &layers {
                let mut row = json!({
                    "k": layer.k,
                    "d": layer.d,
                    "p": layer.p,
                    "instances": layer.instances.len(),
                });
                if let Some(bound) = layer.instances.params.get("weight_bound") {
                    row["weight_bound"] = bound.clone();
                }
                if solve {
                    let hit = layer
                        .instances
                        .instances()
                        .map(|w| solve_named("brute", &w.clone().into()).map(|r| r.solvable))
                        .find(|r| !matches!(r, Ok(false)))
                        .transpose()?
                        .is_some();
                    any |= hit;
                    row["solvable"] = json!(hit);
                }
                if g.out.is_some() {
                    emit(&g, &format!("k{}.jsonl", layer.k), &layer.instances.to_jsonl())?;
                }
                summary.push(row);
            }
            let mut out = json!({
                "n": src.n(),
                "epsilon": format!("1/{}", g.f_exponent.max(1)),
                "total_instances": layers.iter().map(|l| l.instances.len()).sum::<usize>(),
                "layers": summary,
            });
            if solve {
                out["solvable"] = json!(any);
            }
            let text = serde_json::to_string_pretty(&out).expect("summary serializes");
            emit(&g, "summary.json", &format!("{text}\n"))?;
            Ok(if !solve || any { 0 } else { EXIT_UNSOLVABLE })
        }
        Command::Reductions => {
            let mut text = String::new();
            for r in catalog() {
                text.push_str(&format!("{}\t{} -> {}\n", r.name, r.from, r.to));
            }
            emit(&g, "reductions.txt", &text)?;
            Ok(0)
        }
    }
}
