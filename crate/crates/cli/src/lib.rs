//! Library half of the `ildl` command: configuration, the
//! load → equilibrate → reorder → factor → solve pipeline, factor
//! verification and batch runs.

mod config;

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use ildl::preprocess::{rcm_order, RUIZ_DEFAULT_EPSILON, RUIZ_DEFAULT_MAX_SWEEPS};
use ildl::problems::{convdiff_skew_matrix, helmholtz_matrix, random_sparse, Peclet};
use ildl::solvers::{solve, Preconditioner};
use ildl::storage::{read_matrix_market_file, write_lower_general, write_permutation};
use ildl::{
    amd_order, apply_scaling, bunch_equilibrate, fill_of, ildl_factor, ildl_factor_in_place, ruiz_equilibrate,
    spd_transform, write_matrix_market, Factorization, IldlError, LdlPreconditioner, Permutation, ScalingDiag,
    SolveStatus, SolverKind, SolverParams, SparseSymStore, SpdPreconditioner, SymmetryKind,
};

pub use config::{Equil, GenSpec, Pivot, Reorder, Rhs, RunConfig, Solver, Source};

pub const REPORT_SCHEMA: u32 = 1;
/// `verify` passes when the relative reconstruction residual is at most this.
pub const VERIFY_TOL: f64 = 1e-10;

pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 1;
    pub const MAX_ITER: i32 = 2;
    pub const BREAKDOWN: i32 = 3;
    pub const USAGE: i32 = 4;
    pub const VERIFY_FAILED: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Ildl(#[from] IldlError),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Ildl(IldlError::InvalidParameter(_)) => exit::USAGE,
            _ => exit::INPUT,
        }
    }
}

fn file_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::File {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixInfo {
    pub n: usize,
    pub kind: String,
    /// Nonzeros of the full matrix, both triangles.
    pub nnz: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorInfo {
    pub equilibration: String,
    pub ruiz_sweeps: Option<usize>,
    pub reorder: Reorder,
    pub nnz_l: usize,
    pub nnz_d: usize,
    pub fill: f64,
    pub blocks_1x1: usize,
    pub blocks_2x2: usize,
    pub static_pivots: usize,
    pub dropped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveInfo {
    pub method: String,
    pub status: SolveStatus,
    pub iterations: usize,
    pub relres: f64,
    pub relres_history: Vec<f64>,
    /// `max |x_i - 1|` when the right-hand side is `ones-solution`.
    pub max_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub precond_seconds: f64,
    pub solve_seconds: f64,
}

/// Contents of `report.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub config: RunConfig,
    pub matrix: MatrixInfo,
    pub factor: FactorInfo,
    pub solve: Option<SolveInfo>,
    pub timings: Timings,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.solve.as_ref().map(|s| s.status) {
            None | Some(SolveStatus::Converged) => exit::OK,
            Some(SolveStatus::MaxIter) => exit::MAX_ITER,
            Some(SolveStatus::Breakdown) => exit::BREAKDOWN,
        }
    }
}

pub fn load_source(cfg: &RunConfig) -> Result<SparseSymStore, CliError> {
    match cfg.source.as_ref() {
        None => Err(CliError::Usage("no input: give --input FILE or --gen SPEC".into())),
        Some(Source::File(path)) => read_matrix_market_file(path).map_err(|e| match e {
            IldlError::Io(source) => CliError::File {
                path: path.clone(),
                source,
            },
            other => CliError::Invalid {
                path: path.clone(),
                message: other.to_string(),
            },
        }),
        Some(Source::Gen(spec)) => Ok(generate(spec, cfg.seed)?),
    }
}

pub fn generate(spec: &GenSpec, seed: u64) -> Result<SparseSymStore, IldlError> {
    match *spec {
        GenSpec::Helmholtz { m, c } => helmholtz_matrix(m, c),
        GenSpec::Convdiff { m, beta, gamma, delta } => convdiff_skew_matrix(m, Peclet::new(beta, gamma, delta)),
        GenSpec::Random { n, density, skew } => {
            if !(density > 0.0 && density <= 1.0) {
                return Err(IldlError::InvalidParameter(format!("density must be in (0, 1], got {density}")));
            }
            let kind = if skew { SymmetryKind::Skew } else { SymmetryKind::Symmetric };
            Ok(random_sparse(n, density, kind, seed))
        }
    }
}

/// The scaled and reordered matrix handed to the factorization.
struct Prepared {
    scaled_permuted: SparseSymStore,
    scaling: ScalingDiag,
    order: Permutation,
    equilibration: &'static str,
    ruiz_sweeps: Option<usize>,
}

fn prepare(a: &SparseSymStore, cfg: &RunConfig) -> Result<Prepared, CliError> {
    let equil = match (cfg.equil, a.kind()) {
        (Equil::Auto, SymmetryKind::Symmetric) => Equil::Bunch,
        (Equil::Auto, SymmetryKind::Skew) => Equil::None,
        (e, _) => e,
    };
    let (scaling, equilibration, ruiz_sweeps) = match equil {
        Equil::Bunch => (bunch_equilibrate(a), "bunch", None),
        Equil::Ruiz => {
            let out = ruiz_equilibrate(a, RUIZ_DEFAULT_EPSILON, RUIZ_DEFAULT_MAX_SWEEPS)?;
            (out.scaling, "ruiz", Some(out.sweeps))
        }
        Equil::None | Equil::Auto => (ScalingDiag::identity(a.n()), "none", None),
    };
    let mut s = a.clone();
    apply_scaling(&mut s, &scaling);
    let order = match cfg.reorder {
        Reorder::Amd => amd_order(&s),
        Reorder::Rcm => rcm_order(&s),
        Reorder::None => Permutation::identity(a.n()),
    };
    Ok(Prepared {
        scaled_permuted: s.permuted(&order),
        scaling,
        order,
        equilibration,
        ruiz_sweeps,
    })
}

fn read_rhs(path: &Path, n: usize) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(file_err(path))?;
    let b = text
        .split_whitespace()
        .map(|t| t.parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Invalid {
            path: path.to_path_buf(),
            message: format!("bad number: {e}"),
        })?;
    if b.len() != n {
        return Err(CliError::Invalid {
            path: path.to_path_buf(),
            message: format!("expected {n} values, found {}", b.len()),
        });
    }
    Ok(b)
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> Result<(), IldlError>) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(file_err(path))?;
    let mut w = BufWriter::new(file);
    f(&mut w).map_err(|e| match e {
        IldlError::Io(source) => CliError::File {
            path: path.to_path_buf(),
            source,
        },
        other => CliError::Ildl(other),
    })?;
    w.flush().map_err(file_err(path))
}

fn export_factors(dir: &Path, f: &Factorization, perm: &Permutation, scaling: &ScalingDiag) -> Result<(), CliError> {
    let n = f.n();
    write_file(&dir.join("L.mtx"), |w| write_lower_general(n, &f.l.triplets_with_diagonal(), w))?;
    write_file(&dir.join("D.mtx"), |w| write_matrix_market(&f.d.to_store(), w))?;
    write_file(&dir.join("P.vec"), |w| write_permutation(perm, w))?;
    write_file(&dir.join("S.vec"), |w| {
        for v in scaling.values() {
            writeln!(w, "{v:?}")?;
        }
        Ok(())
    })
}

/// Runs the whole pipeline and writes `report.json` (plus `x.vec` after a
/// solve and the factors when requested) into `cfg.output`.
pub fn run_pipeline(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let a = load_source(cfg)?;
    fs::create_dir_all(&cfg.output).map_err(file_err(&cfg.output))?;

    let start = Instant::now();
    let prep = prepare(&a, cfg)?;
    let f = ildl_factor_in_place(prep.scaled_permuted, &cfg.factor_params())?;
    let perm = prep.order.then(&f.perm);
    let fill = fill_of(&f.l, &f.d, &a);
    let factor = FactorInfo {
        equilibration: prep.equilibration.into(),
        ruiz_sweeps: prep.ruiz_sweeps,
        reorder: cfg.reorder,
        nnz_l: f.l.nnz(),
        nnz_d: f.d.structural_nnz(),
        fill,
        blocks_1x1: f.stats.blocks_1x1,
        blocks_2x2: f.stats.blocks_2x2,
        static_pivots: f.stats.static_pivots,
        dropped: f.stats.dropped,
    };
    if cfg.export_factors {
        export_factors(&cfg.output, &f, &perm, &prep.scaling)?;
    }
    let precond: Option<Box<dyn Preconditioner>> = match cfg.solver {
        Solver::None => None,
        Solver::Sqmr => Some(Box::new(LdlPreconditioner::new(&f.l, f.d.clone(), perm, prep.scaling)?)),
        Solver::Minres => {
            let spd = spd_transform(&f.l, &f.d)?;
            Some(Box::new(SpdPreconditioner::new(spd, perm, prep.scaling)?))
        }
    };
    drop(f);
    let precond_seconds = start.elapsed().as_secs_f64();

    let mut solve_seconds = 0.0;
    let solve_info = match precond {
        None => None,
        Some(m) => {
            let b = match &cfg.rhs {
                Rhs::OnesSolution => ildl::problems::ones_rhs(&a),
                Rhs::File(p) => read_rhs(p, a.n())?,
            };
            let params = SolverParams {
                rtol: cfg.rtol,
                max_iter: cfg.max_iter,
                kind: if cfg.solver == Solver::Minres { SolverKind::Minres } else { SolverKind::Sqmr },
            };
            let (x, r) = solve(&a, m.as_ref(), &b, &params)?;
            solve_seconds = r.solve_seconds;
            write_file(&cfg.output.join("x.vec"), |w| {
                for v in &x {
                    writeln!(w, "{v:?}")?;
                }
                Ok(())
            })?;
            let max_error = (cfg.rhs == Rhs::OnesSolution)
                .then(|| x.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max));
            Some(SolveInfo {
                method: r.method,
                status: r.status,
                iterations: r.iterations,
                relres: r.relres,
                relres_history: r.relres_history,
                max_error,
            })
        }
    };

    let report = Report {
        schema: REPORT_SCHEMA,
        config: cfg.clone(),
        matrix: MatrixInfo {
            n: a.n(),
            kind: kind_name(a.kind()).into(),
            nnz: a.nnz_full(),
        },
        factor,
        solve: solve_info,
        timings: Timings {
            precond_seconds,
            solve_seconds,
        },
    };
    let path = cfg.output.join("report.json");
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    fs::write(&path, text + "\n").map_err(file_err(&path))?;
    Ok(report)
}

fn kind_name(k: SymmetryKind) -> &'static str {
    match k {
        SymmetryKind::Symmetric => "symmetric",
        SymmetryKind::Skew => "skew-symmetric",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: usize,
    pub kind: String,
    /// `||P S A S P^T - L D L^T||_F / ||S A S||_F`.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Complete factorization of the prepared matrix and its reconstruction
/// residual. Refuses configurations that drop entries.
pub fn verify_factors(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    cfg.validate()?;
    if cfg.drop_tol != 0.0 || cfg.fill_factor != f64::INFINITY {
        return Err(CliError::Usage(format!(
            "verify needs a complete factorization: --drop-tol 0 --fill-factor inf (got {} and {})",
            cfg.drop_tol, cfg.fill_factor
        )));
    }
    let a = load_source(cfg)?;
    let prep = prepare(&a, cfg)?;
    let f = ildl_factor(&prep.scaled_permuted, &cfg.factor_params())?;
    // The factors are of the scaled, reordered matrix; compare against it
    // in the factorization's own pivot order.
    let mut scaled = a.clone();
    apply_scaling(&mut scaled, &prep.scaling);
    let reordered = scaled.permuted(&prep.order);
    let residual = f.reconstruction_residual(&reordered);
    Ok(VerifyReport {
        n: a.n(),
        kind: kind_name(a.kind()).into(),
        residual,
        tolerance: VERIFY_TOL,
        pass: residual <= VERIFY_TOL,
    })
}

/// Outcome of one batch entry: the exit code it would have had on its own.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchResult {
    pub index: usize,
    pub output: PathBuf,
    pub exit_code: i32,
    pub message: String,
}

/// Runs independent configurations on up to `jobs` threads. Results come
/// back in input order.
pub fn run_batch(configs: &[RunConfig], jobs: usize) -> Result<Vec<BatchResult>, CliError> {
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let mut outputs: Vec<&Path> = configs.iter().map(|c| c.output.as_path()).collect();
    outputs.sort();
    if let Some(w) = outputs.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Usage(format!("two batch entries share the output directory {}", w[0].display())));
    }
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(configs.len()));
    std::thread::scope(|s| {
        for _ in 0..jobs.min(configs.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cfg) = configs.get(i) else { break };
                let (exit_code, message) = match run_pipeline(cfg) {
                    Ok(r) => (r.exit_code(), summary(&r)),
                    Err(e) => (e.exit_code(), e.to_string()),
                };
                let r = BatchResult {
                    index: i,
                    output: cfg.output.clone(),
                    exit_code,
                    message,
                };
                results.lock().expect("no worker panics while holding the lock").push(r);
            });
        }
    });
    let mut results = results.into_inner().expect("workers finished");
    results.sort_by_key(|r| r.index);
    Ok(results)
}

/// One-line human summary of a report.
pub fn summary(r: &Report) -> String {
    let head = format!("n {} nnz {} fill {:.3}", r.matrix.n, r.matrix.nnz, r.factor.fill);
    match &r.solve {
        None => format!("{head}, no solve"),
        Some(s) => format!(
            "{head}, {} {} after {} iterations, relres {:.3e}",
            s.method,
            s.status.as_str(),
            s.iterations,
            s.relres
        ),
    }
}

/// Defaults of every flag, as JSON.
pub fn defaults_json() -> String {
    let mut v = serde_json::to_value(RunConfig::default()).expect("config serializes");
    if let Some(obj) = v.as_object_mut() {
        obj.remove("source");
    }
    serde_json::to_string_pretty(&v).expect("value serializes")
}
