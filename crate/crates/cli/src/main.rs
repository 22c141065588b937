use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ildl_cli::{
    defaults_json, exit, generate, run_batch, run_pipeline, summary, verify_factors, CliError, Equil, GenSpec, Pivot,
    Reorder, Rhs, RunConfig, Solver, Source,
};

#[derive(Parser)]
#[command(name = "ildl", version, about = "Incomplete LDL^T preconditioning for symmetric and skew-symmetric systems")]
struct Cli {
    /// Print the default value of every run flag as JSON and exit.
    #[arg(long)]
    print_defaults: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Factor, precondition and solve; writes report.json.
    Run(RunArgs),
    /// Complete factorization and reconstruction check.
    Verify(RunArgs),
    /// Write a model problem as a Matrix Market file.
    Gen(GenArgs),
    /// Run a JSON array of configurations.
    Batch(BatchArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Matrix Market file.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    input: Option<PathBuf>,
    /// Built-in problem, e.g. helmholtz:m=80,c=0.3 or convdiff:m=20,beta=20,gamma=2,delta=1.
    #[arg(long)]
    gen: Option<GenSpec>,
    #[arg(long, value_enum, default_value_t)]
    pivot: Pivot,
    /// auto = bunch for symmetric input, none for skew.
    #[arg(long, value_enum, default_value_t)]
    equil: Equil,
    #[arg(long, value_enum, default_value_t)]
    reorder: Reorder,
    #[arg(long, default_value_t = RunConfig::default().drop_tol)]
    drop_tol: f64,
    /// Per-column cap on L relative to the average column of A; `inf` disables it.
    #[arg(long, default_value_t = RunConfig::default().fill_factor)]
    fill_factor: f64,
    #[arg(long, value_enum, default_value_t)]
    solver: Solver,
    #[arg(long, default_value_t = RunConfig::default().rtol)]
    rtol: f64,
    #[arg(long, default_value_t = RunConfig::default().max_iter)]
    max_iter: usize,
    /// `ones-solution` or a file of n numbers.
    #[arg(long, default_value = "ones-solution")]
    rhs: Rhs,
    /// Directory for report.json, x.vec and exported factors.
    #[arg(long, default_value = ".")]
    output: PathBuf,
    /// Also write L.mtx, D.mtx, P.vec and S.vec.
    #[arg(long)]
    export_factors: bool,
    /// Seed for random generators.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl From<RunArgs> for RunConfig {
    fn from(a: RunArgs) -> Self {
        let source = match (a.input, a.gen) {
            (Some(p), _) => Some(Source::File(p)),
            (None, Some(g)) => Some(Source::Gen(g)),
            (None, None) => None,
        };
        RunConfig {
            source,
            pivot: a.pivot,
            equil: a.equil,
            reorder: a.reorder,
            drop_tol: a.drop_tol,
            fill_factor: a.fill_factor,
            solver: a.solver,
            rtol: a.rtol,
            max_iter: a.max_iter,
            rhs: a.rhs,
            output: a.output,
            export_factors: a.export_factors,
            seed: a.seed,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Problem, e.g. helmholtz:m=80,c=0.3.
    spec: GenSpec,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BatchArgs {
    /// JSON file holding an array of run configurations.
    configs: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("ildl: {e}");
    code(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return code(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    if cli.print_defaults {
        println!("{}", defaults_json());
        return code(exit::OK);
    }
    let Some(command) = cli.command else {
        eprintln!("ildl: no command given; see --help");
        return code(exit::USAGE);
    };
    match command {
        Command::Run(args) => match run_pipeline(&args.into()) {
            Ok(r) => {
                println!("{}", summary(&r));
                code(r.exit_code())
            }
            Err(e) => fail(e),
        },
        Command::Verify(args) => match verify_factors(&args.into()) {
            Ok(v) => {
                println!(
                    "relative residual {:.3e} (tolerance {:.0e}): {}",
                    v.residual,
                    v.tolerance,
                    if v.pass { "ok" } else { "FAILED" }
                );
                code(if v.pass { exit::OK } else { exit::VERIFY_FAILED })
            }
            Err(e) => fail(e),
        },
        Command::Gen(args) => {
            let a = match generate(&args.spec, args.seed) {
                Ok(a) => a,
                Err(e) => return fail(e.into()),
            };
            let written = match &args.out {
                Some(p) => std::fs::File::create(p)
                    .map_err(|source| CliError::File { path: p.clone(), source })
                    .and_then(|f| Ok(ildl::write_matrix_market(&a, std::io::BufWriter::new(f))?)),
                None => ildl::write_matrix_market(&a, std::io::stdout().lock()).map_err(CliError::from),
            };
            match written {
                Ok(()) => code(exit::OK),
                Err(e) => fail(e),
            }
        }
        Command::Batch(args) => {
            let configs: Vec<RunConfig> = match std::fs::read_to_string(&args.configs)
                .map_err(|source| CliError::File { path: args.configs.clone(), source })
                .and_then(|t| {
                    serde_json::from_str(&t).map_err(|e| CliError::Invalid {
                        path: args.configs.clone(),
                        message: e.to_string(),
                    })
                }) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            match run_batch(&configs, args.jobs) {
                Ok(results) => {
                    for r in &results {
                        println!("[{}] {} exit {}: {}", r.index, r.output.display(), r.exit_code, r.message);
                    }
                    code(results.iter().map(|r| r.exit_code).max().unwrap_or(exit::OK))
                }
                Err(e) => fail(e),
            }
        }
    }
}
