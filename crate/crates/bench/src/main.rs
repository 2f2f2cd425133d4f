use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use refine_bench::cnf::generate_satisfiable;
use refine_bench::dimacs::{parse_dimacs, CnfInstance};
use refine_bench::experiment::{
    run_experiment, write_records, write_summaries, ExperimentConfig, ExperimentError, Method,
};
use refine_core::dfl::{dfl_grad, fd_check, valuations, DflError};
use refine_core::formula::{FormulaError, KnowledgeBase, LogicConfig};
use refine_core::ops::{nonvanishing_fraction_mc, Aggregator};

#[derive(Parser)]
#[command(name = "refine", version, about = "Fuzzy logic refinement experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Refine random initial truth values of CNF instances towards satisfaction.
    Sat(SatArgs),
    /// Loss and atom gradients of a weighted knowledge base.
    Dfl(DflArgs),
    /// Numerical analyses of operators.
    Analyze {
        #[command(subcommand)]
        what: Analyze,
    },
    /// Write a satisfiable uniform random 3-SAT instance in DIMACS format.
    GenCnf(GenArgs),
}

#[derive(Args)]
struct SatArgs {
    /// A DIMACS file or a directory of `.cnf` files.
    #[arg(long)]
    cnf: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "lukasiewicz")]
    logic: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "ilr")]
    method: Vec<Method>,
    /// ILR scheduling parameter(s).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    alpha: Vec<f64>,
    /// ADAM regularization weight(s).
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    beta: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    #[arg(long, default_value_t = 1.0)]
    target: f64,
    /// Use only the first N clauses of each instance.
    #[arg(long)]
    clauses: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    /// Per-iteration CSV; a `<stem>_summary.csv` is written next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DflArgs {
    #[arg(long)]
    kb: PathBuf,
    #[arg(long, default_value = "product")]
    config: String,
    /// Compare the gradients against central finite differences.
    #[arg(long)]
    fd_check: bool,
    #[arg(long, default_value_t = 1e-5)]
    fd_step: f64,
}

#[derive(Subcommand)]
enum Analyze {
    /// Monte Carlo estimate of the share of the unit cube where an aggregator is positive.
    Fraction {
        #[arg(long)]
        aggregator: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 20)]
    vars: usize,
    #[arg(long, default_value_t = 91)]
    clauses: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Io(String),
    Parse(String),
    Unsupported(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Io(m) => (1, m),
            Failure::Parse(m) => (2, m),
            Failure::Unsupported(m) => (3, m),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn formula_failure(e: FormulaError) -> Failure {
    match e {
        FormulaError::UnsupportedConfig(_) => Failure::Unsupported(e.to_string()),
        _ => Failure::Parse(e.to_string()),
    }
}

fn load_instances(path: &Path) -> Result<Vec<(String, CnfInstance)>, Failure> {
    let mut files = Vec::new();
    if path.is_dir() {
        for entry in
            fs::read_dir(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
        {
            let p = entry.map_err(|e| Failure::Io(e.to_string()))?.path();
            if p.extension().is_some_and(|x| x == "cnf") {
                files.push(p);
            }
        }
        files.sort();
    } else {
        files.push(path.to_path_buf());
    }
    files
        .iter()
        .map(|f| {
            let inst = parse_dimacs(&read(f)?)
                .map_err(|e| Failure::Parse(format!("{}: {e}", f.display())))?;
            let name = f
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((name, inst))
        })
        .collect()
}

fn summary_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "results".into());
    out.with_file_name(format!("{stem}_summary.csv"))
}

fn sat(args: SatArgs) -> Result<(), Failure> {
    let instances = load_instances(&args.cnf)?;
    let cfg = ExperimentConfig {
        methods: args.method,
        logics: args.logic,
        alphas: args.alpha,
        betas: args.beta,
        lr: args.lr,
        target: args.target,
        max_clauses: args.clauses,
        max_iters: args.max_iters,
        seeds: args.seeds,
    };
    let experiment_failure = |e: ExperimentError| match e {
        e if e.is_unsupported() => Failure::Unsupported(e.to_string()),
        ExperimentError::Io(_) | ExperimentError::Csv(_) => Failure::Io(e.to_string()),
        e => Failure::Parse(e.to_string()),
    };
    let (records, summaries) = run_experiment(&instances, &cfg).map_err(experiment_failure)?;
    let create =
        |p: &Path| fs::File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())));
    write_records(create(&args.out)?, &records).map_err(experiment_failure)?;
    write_summaries(create(&summary_path(&args.out))?, &summaries).map_err(experiment_failure)?;
    println!("instance,method,logic,param,seed,iterations,satisfaction,l1_norm");
    for s in &summaries {
        println!(
            "{},{},{},{},{},{},{:.9},{:.6}",
            s.instance,
            s.method,
            s.logic,
            s.param,
            s.seed,
            s.iterations_used,
            s.satisfaction,
            s.l1_norm
        );
    }
    Ok(())
}

fn dfl(args: DflArgs) -> Result<(), Failure> {
    let kb = KnowledgeBase::from_json(&read(&args.kb)?).map_err(formula_failure)?;
    let config = LogicConfig::from_name(&args.config).map_err(formula_failure)?;
    let grounded = kb.grounded().map_err(formula_failure)?;
    let dfl_failure = |e: DflError| match e {
        DflError::Formula(f) => formula_failure(f),
        other => Failure::Parse(other.to_string()),
    };
    let interp = &kb.interpretation;
    let grads = dfl_grad(&config, &grounded, interp).map_err(dfl_failure)?;
    println!("# loss: {}", grads.loss);
    for (i, v) in valuations(&config, &grounded, interp)
        .map_err(dfl_failure)?
        .iter()
        .enumerate()
    {
        println!("# valuation[{i}]: {v}");
    }
    let mut rows: Vec<(usize, f64)> = grads.iter().collect();
    rows.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()).then(a.0.cmp(&b.0)));
    println!("atom,grad,flagged");
    for (atom, g) in rows {
        println!("{},{g},{}", interp.atom(atom), grads.is_flagged(atom));
    }
    if args.fd_check {
        let r = fd_check(&config, &grounded, interp, args.fd_step).map_err(dfl_failure)?;
        println!(
            "# fd max_abs_err: {:e} (checked {}, excluded {})",
            r.max_abs_err,
            r.checked,
            r.excluded.len()
        );
    }
    Ok(())
}

fn parse_aggregator(name: &str) -> Result<Aggregator, Failure> {
    let bad = || Failure::Unsupported(format!("unknown aggregator '{name}'"));
    let (base, p) = match name.split_once(':') {
        Some((b, p)) => (b, Some(p.parse::<f64>().map_err(|_| bad())?)),
        None => (name, None),
    };
    let agg = match (base.to_ascii_lowercase().as_str(), p) {
        ("min", None) => Aggregator::Min,
        ("max", None) => Aggregator::Max,
        ("product", None) => Aggregator::Product,
        ("probsum", None) => Aggregator::ProbSum,
        ("lukasiewicz" | "luk", None) => Aggregator::LukasiewiczA,
        ("lukasiewicz-e", None) => Aggregator::LukasiewiczE,
        ("nilpotent", None) => Aggregator::NilpotentA,
        ("yager", Some(p)) => Aggregator::YagerA(p),
        ("gme", Some(p)) => Aggregator::Gme(p),
        ("gm", Some(p)) => Aggregator::Gm(p),
        _ => return Err(bad()),
    };
    agg.validate()
        .map_err(|e| Failure::Unsupported(e.to_string()))?;
    Ok(agg)
}

fn analyze(what: Analyze) -> Result<(), Failure> {
    match what {
        Analyze::Fraction {
            aggregator,
            n,
            samples,
            seed,
        } => {
            let agg = parse_aggregator(&aggregator)?;
            let f = nonvanishing_fraction_mc(agg, n, samples, seed)
                .map_err(|e| Failure::Parse(e.to_string()))?;
            println!("{f}");
        }
    }
    Ok(())
}

fn gen_cnf(args: GenArgs) -> Result<(), Failure> {
    if args.vars < 3 || args.vars > 26 {
        return Err(Failure::Parse(format!(
            "--vars must be in 3..=26, got {}",
            args.vars
        )));
    }
    let inst = generate_satisfiable(args.vars, args.clauses, args.seed);
    let comment = format!(
        "uniform random 3-SAT, {} vars, {} clauses, seed {}, satisfiable",
        args.vars, args.clauses, args.seed
    );
    fs::write(&args.out, inst.to_dimacs(&[&comment]))
        .map_err(|e| Failure::Io(format!("{}: {e}", args.out.display())))
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Sat(a) => sat(a),
        Command::Dfl(a) => dfl(a),
        Command::Analyze { what } => analyze(what),
        Command::GenCnf(a) => gen_cnf(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
