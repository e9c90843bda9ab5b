use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use shatter_core::bounds::{self, BoundKind, BoundParams};
use shatter_core::compression::compress_traced;
use shatter_core::randgen::{self, ExperimentConfig, ExperimentReport};
use shatter_core::span::DEFAULT_NODE_LIMIT;
use shatter_core::verify::{self, Tier, VerifyConfig};
use shatter_core::{complex, dtree, search, setsystem, Error, Rational};

#[derive(Parser)]
#[command(name = "shatter", version, about = "Shatter functions, compression, d-trees and random complexes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Master seed for every random construction.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Largest C(n, m) for which shatter values are computed exactly.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    limit_subsets: u128,
    /// Node budget of each exact search.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_LIMIT)]
    node_limit: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Shatter profile and VC dimension of a set system file.
    Shatter {
        #[arg(long = "in")]
        input: PathBuf,
        /// Report only f(m).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Down-shift a set system into a complex.
    Compress {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Queries on complex files.
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// Rooted d-trees.
    #[command(subcommand)]
    Dtree(DtreeCommand),
    /// Sample one level-wise random complex.
    Sample {
        #[arg(long)]
        n: usize,
        /// Top face dimension (defaults to ⌊log₂ s⌋ when --s is given).
        #[arg(long)]
        t: Option<usize>,
        /// Face probability (defaults to n^(-1/(s-1)) when --s is given).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        s: Option<String>,
        /// Also prune bad m-sets with z = (s-1)(m+1).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth of pruned random complexes across n.
    Growth {
        #[arg(long)]
        s: String,
        #[arg(long)]
        m: usize,
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Random constructions against the conjectured g_k threshold.
    BhProbe {
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// s exceeds 2^{k+1}-k-1 by this rational amount.
        #[arg(long, default_value = "1")]
        eps: String,
        #[arg(long, default_value_t = 13)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_value = "256,512,1024,2048,4096")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Premises are exact up to this n and sampled above it.
        #[arg(long, default_value_t = 256)]
        exact_n: usize,
    },
    /// Closed-form bounds.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Extremal families under a shatter budget.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Run the verification suites.
    VerifyPaper {
        #[arg(long, default_value = "quick")]
        tier: String,
        /// Comma-separated suite numbers (default: all).
        #[arg(long, value_delimiter = ',')]
        suites: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ComplexCommand {
    /// Dimension, face counts and δ_d.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum DtreeCommand {
    /// Build T_r(d, Q) as JSON.
    Build {
        #[arg(long)]
        d: usize,
        #[arg(long = "Q", alias = "q")]
        q: usize,
        #[arg(long, default_value_t = 0)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check formula, block and brute-force minimum densities on a grid.
    Verify {
        #[arg(long, default_value_t = 3)]
        d_max: usize,
        #[arg(long = "Q-max", alias = "q-max", default_value_t = 5)]
        q_max: usize,
        /// Defaults to 2Q+1 for each Q.
        #[arg(long)]
        r_max: Option<usize>,
    },
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Evaluate one bound, or a column of bounds with --sweep.
    Eval {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value = "")]
        params: String,
        /// Vary one integer parameter, e.g. `m=1..100`.
        #[arg(long)]
        sweep: Option<String>,
    },
}

#[derive(Subcommand)]
enum SearchCommand {
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        b: u64,
        /// Use the exhaustive method.
        #[arg(long)]
        oracle: bool,
    },
}

/// A failed command: library errors keep their own exit code.
enum Failure {
    Core(Error),
    Io(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::ResourceLimit(_)) => 3,
            Failure::Core(_) | Failure::Io(_) => 2,
            Failure::Verification(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(s) | Failure::Verification(s) => f.write_str(s),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Canonical JSON: object keys sorted.
fn canonical(value: &impl Serialize) -> String {
    let v = serde_json::to_value(value).expect("plain data serializes");
    serde_json::to_string(&v).expect("values serialize")
}

fn parse_s(text: &str) -> Result<Rational, Failure> {
    Ok(bounds::parse_rational(text)?)
}

fn experiment_config(g: &Global) -> ExperimentConfig {
    ExperimentConfig { node_limit: g.node_limit, exact_limit: g.limit_subsets, ..ExperimentConfig::default() }
}

fn report_rows(reports: &[ExperimentReport]) -> String {
    let mut out = format!("{}\n", ExperimentReport::CSV_HEADER);
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Shatter { input, m } => {
            let (s, dups) = setsystem::parse_any(&read(input)?)?;
            if dups > 0 {
                eprintln!("dropped {dups} duplicate members");
            }
            let n = s.ground_size() as u64;
            let subsets = match m {
                Some(m) => shatter_core::bits::binomial(n, *m as u64),
                None => 1u128 << n,
            };
            if subsets > g.limit_subsets {
                return Err(Failure::Core(Error::ResourceLimit(format!(
                    "{subsets} subsets to enumerate exceed --limit-subsets {}",
                    g.limit_subsets
                ))));
            }
            let profile: Vec<(usize, u64)> = match m {
                Some(m) => vec![(*m, s.shatter_value(*m)?)],
                None => s.shatter_profile().values.iter().copied().enumerate().collect(),
            };
            let vc = s.vc_dimension().ok();
            match g.format {
                Format::Csv => {
                    println!("m,f_m");
                    for (m, f) in &profile {
                        println!("{m},{f}");
                    }
                }
                Format::Json => println!(
                    "{}",
                    canonical(&json!({ "n": s.ground_size(), "members": s.len(), "profile": profile, "vc_dimension": vc }))
                ),
            }
        }
        Command::Compress { input, out } => {
            let (s, _) = setsystem::parse_any(&read(input)?)?;
            let c = compress_traced(&s);
            let text = match g.format {
                Format::Csv => setsystem::to_text(&c.system),
                Format::Json => format!("{}\n", setsystem::to_json(&c.system)),
            };
            write_or_print(out.as_ref(), &text)?;
            eprintln!("passes={} moves={}", c.passes, c.moves);
        }
        Command::Complex(ComplexCommand::Stats { input }) => {
            let c = complex::parse_json(&read(input)?)?;
            let f = c.f_vector();
            let deltas: Vec<Option<usize>> = (1..f.len()).map(|d| c.delta(d).ok()).collect();
            match g.format {
                Format::Csv => {
                    println!("dimension,faces,delta");
                    for (i, count) in f.iter().enumerate() {
                        let delta = if i == 0 { String::new() } else { deltas[i - 1].map_or(String::new(), |x| x.to_string()) };
                        println!("{i},{count},{delta}");
                    }
                }
                Format::Json => println!(
                    "{}",
                    canonical(&json!({ "n": c.vertex_count(), "dimension": c.dimension(), "f_vector": f, "delta": deltas }))
                ),
            }
        }
        Command::Dtree(DtreeCommand::Build { d, q, r, out }) => {
            let tree = dtree::build_tr(*d, *q, *r)?;
            write_or_print(out.as_ref(), &format!("{}\n", dtree::to_json(&tree)))?;
        }
        Command::Dtree(DtreeCommand::Verify { d_max, q_max, r_max }) => {
            let mut rows = Vec::new();
            let mut bad = 0;
            for d in 1..=*d_max {
                for q in 1..=*q_max {
                    for r in 0..=r_max.unwrap_or(2 * q + 1) {
                        let tree = dtree::build_tr(d, q, r)?;
                        let formula = dtree::min_density_formula(d, q, r);
                        let (block, _, _) = dtree::contiguous_min_density(&tree)?;
                        let (brute, _) = dtree::min_density_bruteforce(&tree, dtree::DEFAULT_BRUTE_FORCE_CAP)?;
                        let balanced = dtree::is_balanced(&tree, dtree::DEFAULT_BRUTE_FORCE_CAP)?;
                        if !(formula == block && block == brute && balanced) {
                            bad += 1;
                        }
                        rows.push(json!({
                            "d": d, "Q": q, "r": r, "formula": formula.to_string(), "blockmin": block.to_string(),
                            "brutemin": brute.to_string(), "balanced": balanced, "facets": tree.facet_count(),
                        }));
                    }
                }
            }
            match g.format {
                Format::Csv => {
                    println!("d,Q,r,formula,blockmin,brutemin,balanced,facets");
                    for r in &rows {
                        println!(
                            "{},{},{},{},{},{},{},{}",
                            r["d"], r["Q"], r["r"], r["formula"].as_str().unwrap(), r["blockmin"].as_str().unwrap(),
                            r["brutemin"].as_str().unwrap(), r["balanced"], r["facets"]
                        );
                    }
                }
                Format::Json => println!("{}", canonical(&rows)),
            }
            if bad > 0 {
                return Err(Failure::Verification(format!("{bad} cells disagree")));
            }
        }
        Command::Sample { n, t, p, s, m, out } => {
            let s = s.as_deref().map(parse_s).transpose()?;
            let (t, p) = match s {
                Some(s) => {
                    let (t0, _) = randgen::construction_parameters(s, m.unwrap_or(1))?;
                    (t.unwrap_or(t0), p.unwrap_or(randgen::construction_probability(s, *n)))
                }
                None => (
                    t.ok_or(Failure::Core(Error::InvalidArgument("--t is required without --s".into())))?,
                    p.ok_or(Failure::Core(Error::InvalidArgument("--p is required without --s".into())))?,
                ),
            };
            let mut c = randgen::sample_complex(*n, t, p, g.seed)?;
            let mut removed = 0;
            if let (Some(m), Some(s)) = (m, s) {
                let (_, z) = randgen::construction_parameters(s, *m)?;
                let pruned = randgen::prune_bad_msets(&c, *m, z, g.node_limit)?;
                removed = pruned.removed_vertices.len();
                c = pruned.complex;
            }
            if let Some(path) = out {
                write_or_print(Some(path), &format!("{}\n", complex::to_json(&c)))?;
            }
            let summary = json!({
                "generator": randgen::GENERATOR, "seed": g.seed, "n": n, "t": t, "p": p,
                "f_vector": c.f_vector(), "faces_total": c.face_count(), "removed_vertices": removed,
                "expected_top_faces": randgen::expected_top_faces(*n, t, p),
            });
            match g.format {
                Format::Csv => {
                    println!("generator,seed,n,t,p,faces_total,removed_vertices");
                    println!("{},{},{n},{t},{p},{},{removed}", randgen::GENERATOR, g.seed, c.face_count());
                }
                Format::Json => println!("{}", canonical(&summary)),
            }
        }
        Command::Growth { s, m, n, trials } => {
            let report = randgen::growth_experiment(parse_s(s)?, *m, n, *trials, g.seed, &experiment_config(g))?;
            match g.format {
                Format::Csv => {
                    print!("{}", report_rows(&report.trials));
                    eprintln!("# generator={} slope={:?} target={}", report.generator, report.slope, report.target_exponent);
                }
                Format::Json => println!("{}", canonical(&report)),
            }
        }
        Command::BhProbe { k, eps, m, n, trials, exact_n } => {
            let report = randgen::bondy_hajnal_probe(*k, parse_s(eps)?, *m, n, *trials, g.seed, *exact_n, &experiment_config(g))?;
            match g.format {
                Format::Csv => {
                    print!("{}", report_rows(&report.growth.trials));
                    eprintln!(
                        "# generator={} slope={:?} unpruned_slope={:?} target={} premise_holds={} exceeds_k={}",
                        report.growth.generator,
                        report.growth.slope,
                        report.growth.unpruned_slope,
                        report.growth.target_exponent,
                        report.premise_holds,
                        report.exceeds_k
                    );
                }
                Format::Json => println!("{}", canonical(&report)),
            }
        }
        Command::Bounds(BoundsCommand::Eval { kind, params, sweep }) => {
            let kind: BoundKind = kind.parse()?;
            let base = BoundParams::parse(params)?;
            let mut rows: Vec<Vec<(String, String)>> = Vec::new();
            match sweep {
                None => rows.push(bounds::evaluate(kind, &base)?),
                Some(sweep_text) => {
                    let (key, range) = sweep_text
                        .split_once('=')
                        .ok_or(Failure::Core(Error::InvalidArgument(format!("bad sweep {sweep_text:?}"))))?;
                    let (lo, hi) = range
                        .split_once("..")
                        .and_then(|(a, b)| Some((a.trim().parse::<u64>().ok()?, b.trim().parse::<u64>().ok()?)))
                        .ok_or(Failure::Core(Error::InvalidArgument(format!("bad sweep range {range:?}"))))?;
                    for v in lo..=hi {
                        let mut p = base.clone();
                        let mut extra = BoundParams::parse(&format!("{key}={v}"))?;
                        p.k = extra.k.take().or(p.k);
                        p.m = extra.m.take().or(p.m);
                        p.n = extra.n.take().or(p.n);
                        p.d = extra.d.take().or(p.d);
                        let mut row = vec![(key.to_string(), v.to_string())];
                        row.extend(bounds::evaluate(kind, &p)?);
                        rows.push(row);
                    }
                }
            }
            match g.format {
                Format::Csv => {
                    let header: Vec<&str> = rows[0].iter().map(|(k, _)| k.as_str()).collect();
                    println!("{}", header.join(","));
                    for r in &rows {
                        let vals: Vec<&str> = r.iter().map(|(_, v)| v.as_str()).collect();
                        println!("{}", vals.join(","));
                    }
                }
                Format::Json => {
                    let objs: Vec<Value> = rows
                        .iter()
                        .map(|r| Value::Object(r.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect()))
                        .collect();
                    println!("{}", canonical(&objs));
                }
            }
        }
        Command::Search(SearchCommand::Extremal { n, m, b, oracle }) => {
            let r = if *oracle {
                search::extremal_exhaustive(*n, *m, *b, g.node_limit)?
            } else {
                search::extremal_max_sets(*n, *m, *b, g.node_limit)?
            };
            match g.format {
                Format::Csv => {
                    println!("n,m,b,max_size,method,nodes");
                    println!("{},{},{},{},{},{}", r.n, r.m, r.b, r.max_size, canonical(&r.method).trim_matches('"'), r.nodes);
                }
                Format::Json => println!("{}", canonical(&r)),
            }
        }
        Command::VerifyPaper { tier, suites, out } => {
            let tier: Tier = tier.parse()?;
            let mut config = VerifyConfig::new(tier, g.seed);
            config.experiment = experiment_config(g);
            if !suites.is_empty() {
                config.suites = suites.clone();
            }
            let report = verify::verify(&config);
            let text = match g.format {
                Format::Csv => report.to_csv(),
                Format::Json => format!("{}\n", report.to_json()),
            };
            write_or_print(out.as_ref(), &text)?;
            for s in &report.suites {
                eprintln!("suite {:>2} {:<24} {}", s.id, s.name, s.status);
            }
            if !report.all_pass {
                return Err(Failure::Verification("some suites did not pass".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
