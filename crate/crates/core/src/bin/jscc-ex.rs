use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use expurgated_jscc::config::{ConfigError, ProblemConfig};
use expurgated_jscc::error::Error;
use expurgated_jscc::optimizer::{exponent_report, ExponentReport};
use expurgated_jscc::partition::{
    es_bar_class, es_class_exact, Class, PartitionSpec, DEFAULT_TYPE_BUDGET,
};
use expurgated_jscc::report::{sig, summary};
use expurgated_jscc::svg::render_svg;
use expurgated_jscc::sweep::sweep;
use expurgated_jscc::verify::{self, Suite, VerifyOptions};

#[derive(Parser)]
#[command(name = "jscc-ex", version, about = "Expurgated JSCC exponents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// Upper end of the ρ grid.
    #[arg(long, global = true)]
    rho_max: Option<f64>,
    /// Number of ρ grid points.
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Absolute value tolerance of the simplex solver.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Compute the random-coding baseline.
    #[arg(long, global = true, overrides_with = "no_baseline")]
    baseline: bool,
    #[arg(long, global = true, overrides_with = "baseline")]
    no_baseline: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Single-class and two-class exponents of one problem.
    Exponent {
        config: PathBuf,
        /// Machine-readable report (default: `<config stem>_report.toml`).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also evaluate the class source exponents at this block length.
        #[arg(long)]
        block_length: Option<usize>,
        /// Maximum number of type classes to enumerate.
        #[arg(long, default_value_t = DEFAULT_TYPE_BUDGET)]
        type_budget: u128,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Per-ρ curves of the fixed pair as CSV, optionally plotted.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Randomized property checks.
    Verify {
        /// hull, theorem3, binary, lemma3, limits or all.
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where the first counterexample is written on failure.
        #[arg(long, default_value = "counterexample.toml")]
        counterexample: PathBuf,
    },
    /// Searches for the best pair, ignoring any pair in the config.
    Optimize {
        config: PathBuf,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
}

enum Failure {
    Config(PathBuf, ConfigError),
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn report(&self) -> ExitCode {
        match self {
            Failure::Config(path, e) => {
                eprintln!("error: {}: {e}", path.display());
                ExitCode::from(1)
            }
            Failure::Lib(e @ Error::EnumerationBudgetExceeded { .. }) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
            Failure::Lib(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
            Failure::Io(path, e) => {
                eprintln!("error: {}: {e}", path.display());
                ExitCode::from(1)
            }
            Failure::Verify(msg) => {
                eprintln!("{msg}");
                ExitCode::from(3)
            }
        }
    }
}

fn load(path: &Path, o: &Overrides) -> Result<ProblemConfig, Failure> {
    let mut c = ProblemConfig::load(path).map_err(|e| Failure::Config(path.to_path_buf(), e))?;
    if let Some(r) = o.rho_max {
        c.grid = c.grid.with_rho_max(r)?;
    }
    if let Some(n) = o.grid_points {
        c.grid = c.grid.with_points(n)?;
    }
    if let Some(t) = o.tol {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!("--tol must be positive, got {t}")).into());
        }
        c.solver.value_tol = t;
    }
    if o.baseline {
        c.baseline = true;
    }
    if o.no_baseline {
        c.baseline = false;
    }
    Ok(c)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn default_report_path(config: &Path) -> PathBuf {
    let stem = config.file_stem().map_or("problem".into(), |s| s.to_string_lossy());
    PathBuf::from(format!("{stem}_report.toml"))
}

fn emit(r: &ExponentReport, path: &Path) -> Result<(), Failure> {
    print!("{}", summary(r));
    write(path, &r.to_toml())?;
    println!("report written to {}", path.display());
    Ok(())
}

fn block_length_table(r: &ExponentReport, c: &ProblemConfig, k: usize, budget: u128) -> Result<(), Failure> {
    let split = &r.gamma_split;
    let source = c.problem.source();
    let partition = PartitionSpec::new(split.gamma, k)?;
    println!("block length k = {k}, gamma = {}", sig(split.gamma, 6));
    for (class, rho) in [(Class::Low, split.rho1), (Class::High, split.rho2)] {
        let exact = es_class_exact(class, rho, &partition, source, budget)? / k as f64;
        let bound = es_bar_class(class, rho, r.two_class_rho, split.gamma_prime, source);
        println!(
            "  class {} at rho = {}: (1/k) E_s = {}  bound {}",
            class.id(),
            sig(rho, 6),
            sig(exact, 6),
            sig(bound, 6)
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Exponent {
            config,
            report,
            block_length,
            type_budget,
            overrides,
        } => {
            let c = load(&config, &overrides)?;
            let r = exponent_report(&c.problem, c.pair.as_ref(), &c.grid, &c.solver, c.baseline)?;
            if let Some(k) = block_length {
                block_length_table(&r, &c, k, type_budget)?;
            }
            emit(&r, &report.unwrap_or_else(|| default_report_path(&config)))
        }
        Command::Optimize {
            config,
            starts,
            report,
            overrides,
        } => {
            let mut c = load(&config, &overrides)?;
            if let Some(s) = starts {
                c.solver.starts = s;
            }
            let r = exponent_report(&c.problem, None, &c.grid, &c.solver, c.baseline)?;
            emit(&r, &report.unwrap_or_else(|| default_report_path(&config)))
        }
        Command::Sweep {
            config,
            out,
            svg,
            overrides,
        } => {
            let c = load(&config, &overrides)?;
            let pair = c.pair.as_ref().ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "{}: sweep needs a fixed `distributions` pair",
                    config.display()
                ))
            })?;
            let s = sweep(&c.problem, pair, &c.grid, &c.solver, c.baseline)?;
            let file = fs::File::create(&out).map_err(|e| Failure::Io(out.clone(), e))?;
            s.write_csv(BufWriter::new(file))
                .map_err(|e| Failure::Io(out.clone(), e))?;
            println!("{} rows written to {}", s.rho.len(), out.display());
            for l in &s.levels {
                println!("  {:<14} {}", l.name, sig(l.value, 6));
            }
            if let Some(path) = svg {
                write(&path, &render_svg(&s, c.title.as_deref()))?;
                println!("plot written to {}", path.display());
            }
            Ok(())
        }
        Command::Verify {
            suite,
            seed,
            counterexample,
        } => {
            let r = verify::run(suite, seed, &VerifyOptions::default())?;
            print!("{}", r.summary());
            match r.first_counterexample() {
                None if r.all_passed() => Ok(()),
                None => Err(Failure::Verify("verification failed".into())),
                Some((p, text)) => {
                    write(&counterexample, text)?;
                    Err(Failure::Verify(format!(
                        "verification failed: {}; counterexample written to {}",
                        p.name,
                        counterexample.display()
                    )))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit with 1; code 2 is reserved for the enumeration budget.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
