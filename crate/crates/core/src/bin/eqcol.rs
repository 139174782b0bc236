use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eqcol::bounds::Stage2Backend;
use eqcol::lp_format::export_lp;
use eqcol::model::{build_m1, build_m1p, build_m2, build_m2p, CardinalityEncoding};
use eqcol::oracle::oracle_chi_eq;
use eqcol::report::{render_report, Format, RunRecord};
use eqcol::run::{load_instance, run_batch, Job, RunConfig, Stage1Choice, DEFAULT_BUDGET_S};
use eqcol::{bounds, EngineError};

#[derive(Parser)]
#[command(name = "eqcol", version, about = "Lower bounds for the equitable chromatic number")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stage 1 then stage 2 on every instance.
    Bounds(BatchArgs),
    /// Bound the largest equitable class and derive a lower bound.
    Stage1(BatchArgs),
    /// Prove equitable p-colorings infeasible from lb upwards.
    Stage2(BatchArgs),
    /// Stage 1 with M1 and with M2 on every instance, side by side.
    Bench(BatchArgs),
    /// Write one model as an LP file.
    ExportLp(ExportArgs),
    /// Exact answers by backtracking (graphs with at most 12 vertices).
    Oracle(OracleArgs),
}

#[derive(Args)]
struct BatchArgs {
    /// DIMACS instance files.
    #[arg(required = true)]
    instances: Vec<PathBuf>,
    /// Stage-1 model (m1, m2, both) or stage-2 model (m2p, m2).
    #[arg(long)]
    model: Option<String>,
    /// Stage-2 model when running both stages.
    #[arg(long, value_enum, default_value = "m2p")]
    stage2_model: Backend,
    #[arg(long)]
    lb: Option<usize>,
    #[arg(long)]
    ub: Option<usize>,
    #[arg(long)]
    big_m: Option<usize>,
    /// Seconds per solve.
    #[arg(long, default_value_t = DEFAULT_BUDGET_S)]
    budget: f64,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the stage-1 models as LP files into this directory instead of solving.
    #[arg(long)]
    export_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    M2p,
    M2,
}

impl From<Backend> for Stage2Backend {
    fn from(b: Backend) -> Self {
        match b {
            Backend::M2p => Stage2Backend::M2P,
            Backend::M2 => Stage2Backend::M2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportModel {
    M1,
    M1p,
    M2,
    M2p,
}

#[derive(Clone, Copy, ValueEnum)]
enum Encoding {
    BigMFree,
    Indicator,
}

#[derive(Args)]
struct ExportArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    model: ExportModel,
    /// Number of colors p for M1P/M2P (default: the lower bound).
    #[arg(long)]
    lb: Option<usize>,
    /// Number of colors k for M1/M2 (default: max degree + 1).
    #[arg(long)]
    ub: Option<usize>,
    /// Big-M for M1/M2 (default: ceil(n / lb)).
    #[arg(long)]
    big_m: Option<usize>,
    #[arg(long, value_enum, default_value = "big-m-free")]
    encoding: Encoding,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Bounds(a) => batch(a, Job::Bounds),
        Command::Stage1(a) => batch(a, Job::Stage1),
        Command::Stage2(a) => batch(a, Job::Stage2),
        Command::Bench(a) => batch(a, Job::Bench),
        Command::ExportLp(a) => export(a),
        Command::Oracle(a) => oracle(a),
    }
}

fn batch(a: BatchArgs, job: Job) -> Result<ExitCode, String> {
    let mut cfg = RunConfig {
        instances: a.instances,
        stage2_backend: a.stage2_model.into(),
        lb: a.lb,
        ub: a.ub,
        big_m: a.big_m,
        budget_s: a.budget,
        workers: a.workers,
        export_dir: a.export_dir,
        ..RunConfig::default()
    };
    if let Some(model) = a.model.as_deref() {
        match (job, model.to_ascii_lowercase().as_str()) {
            (Job::Stage2, "m2p") => cfg.stage2_backend = Stage2Backend::M2P,
            (Job::Stage2, "m2") => cfg.stage2_backend = Stage2Backend::M2,
            (Job::Stage2, other) => return Err(format!("stage 2 runs m2p or m2, not `{other}`")),
            (_, "m1") => cfg.stage1_model = Stage1Choice::M1,
            (_, "m2") => cfg.stage1_model = Stage1Choice::M2,
            (_, "both") => cfg.stage1_model = Stage1Choice::Both,
            (_, other) => return Err(format!("stage 1 runs m1, m2 or both, not `{other}`")),
        }
    }
    if let Some(dir) = &cfg.export_dir {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    let records = run_batch(&cfg, job).map_err(|e| e.to_string())?;
    emit(&render_report(&records, a.format), a.out.as_ref())?;
    let failed = records.iter().any(|r| matches!(r, RunRecord::Failed { .. }));
    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn export(a: ExportArgs) -> Result<ExitCode, String> {
    let g = load_instance(&a.instance)?;
    let start = bounds::default_bounds(&g).map_err(|e| e.to_string())?;
    let lb = a.lb.unwrap_or(start.lb);
    let ub = a.ub.unwrap_or(start.ub);
    let model = (|| -> Result<_, EngineError> {
        let big_m = match a.big_m {
            Some(m) => m,
            None => bounds::big_m_value(g.n(), lb)?,
        };
        Ok(match a.model {
            ExportModel::M1 => build_m1(&g, ub, big_m)?,
            ExportModel::M2 => build_m2(&g, ub, big_m)?,
            ExportModel::M2p => build_m2p(&g, lb)?,
            ExportModel::M1p => {
                let encoding = match a.encoding {
                    Encoding::BigMFree => CardinalityEncoding::BigMFree,
                    Encoding::Indicator => CardinalityEncoding::Indicator,
                };
                build_m1p(&g, lb, encoding)?
            }
        })
    })()
    .map_err(|e| e.to_string())?;
    export_lp(&model, &a.out).map_err(|e| format!("{}: {e}", a.out.display()))?;
    eprintln!(
        "wrote {} ({} variables, {} constraints)",
        a.out.display(),
        model.variables().len(),
        model.constraints().len()
    );
    Ok(ExitCode::SUCCESS)
}

fn oracle(a: OracleArgs) -> Result<ExitCode, String> {
    let g = load_instance(&a.instance)?;
    let result = oracle_chi_eq(&g).map_err(|e| e.to_string())?;
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&result).map_err(|e| e.to_string())? + "\n",
        Format::Csv => {
            let mut s = String::from("k,equitable_k_coloring,max_class_at_most_k\n");
            for k in 1..=g.n() {
                let best = result.max_class_by_k[k - 1].map_or("-".to_string(), |b| b.to_string());
                s += &format!("{k},{},{best}\n", result.per_p_feasible[k - 1]);
            }
            s
        }
        Format::Table => {
            let mut s = format!("{}: n={} m={} chi_eq={}\n", g.name(), g.n(), g.m(), result.chi_eq);
            s += "   k  feasible  max class\n";
            for k in 1..=g.n() {
                let best = result.max_class_by_k[k - 1].map_or("-".to_string(), |b| b.to_string());
                let yes = if result.per_p_feasible[k - 1] { "yes" } else { "no" };
                s += &format!("{k:>4}  {yes:>8}  {best:>9}\n");
            }
            s
        }
    };
    emit(&text, a.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}
