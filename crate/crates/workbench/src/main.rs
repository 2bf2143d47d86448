use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use workbench::export::export_corpus;
use workbench::job::{DEFAULT_SAMPLES, DEFAULT_TOL};
use workbench::{run, Job, JobSpec, Task, Verdict};

/// Harmonic analysis of induced representations of finite groups.
#[derive(Debug, Parser)]
#[command(name = "indrep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decompose Ind_K^G θ and verify Frobenius, isotypic and commutant identities.
    Decompose(JobArgs),
    /// Build the Hecke algebra H(G,K,ψ) and verify its identities.
    HeckeReport(JobArgs),
    /// Build the Gelfand-Tsetlin basis along --chain and verify it.
    GtReport(JobArgs),
    /// Everything above plus the Schur layer and the oracle suite.
    VerifyAll(JobArgs),
    /// Write the bundled corpus as input files plus a jobs.txt listing.
    ExportCorpus {
        #[arg(long, short = 'o')]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Args)]
struct JobArgs {
    /// Group file: {"order", "cayley", "labels"?}.
    #[arg(long)]
    group: PathBuf,
    /// Generators of K as indices or labels, comma separated; empty for {e}.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    subgroup: String,
    /// θ as a representation of K (matrices over K's members in ascending order).
    #[arg(long)]
    theta: PathBuf,
    /// Irreps of G: one file per representation or {"irreps": [...]} lists.
    #[arg(long, num_args = 1.., required = true)]
    irreps: Vec<PathBuf>,
    /// Irreps of K, used to complete adapted bases.
    #[arg(long, num_args = 1..)]
    k_irreps: Vec<PathBuf>,
    /// Subgroup chain file for gt-report / verify-all.
    #[arg(long)]
    chain: Option<PathBuf>,
    /// Standard basis vector of V defining ψ.
    #[arg(long, default_value_t = 0)]
    v_index: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random probes per sampled property.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Output report path.
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
}

impl JobArgs {
    fn spec(&self) -> JobSpec {
        JobSpec {
            group: self.group.clone(),
            subgroup: self.subgroup.clone(),
            theta: self.theta.clone(),
            irreps: self.irreps.clone(),
            k_irreps: self.k_irreps.clone(),
            chain: self.chain.clone(),
            v_index: self.v_index,
            tol: self.tol,
            seed: self.seed,
            samples: self.samples,
        }
    }
}

fn run_job(task: Task, args: &JobArgs) -> Result<Verdict, workbench::WbError> {
    let job = Job::load(&args.spec())?;
    let report = run(&job, task)?;
    std::fs::write(&args.out, report.to_json()).map_err(|e| workbench::WbError::Io { path: args.out.clone(), message: e.to_string() })?;
    for c in report.residuals.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {} max {} at {}", c.class, c.max_residual, c.at);
    }
    eprintln!("{}: {:?}, max residual {} (tol {})", task.name(), report.verdict, report.max_residual, report.tol);
    Ok(report.verdict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Decompose(a) => run_job(Task::Decompose, a),
        Command::HeckeReport(a) => run_job(Task::HeckeReport, a),
        Command::GtReport(a) => run_job(Task::GtReport, a),
        Command::VerifyAll(a) => run_job(Task::VerifyAll, a),
        Command::ExportCorpus { out_dir } => export_corpus(out_dir).map(|jobs| {
            for j in &jobs {
                println!("{}\t{}", j.name, j.args.join(" "));
            }
            Verdict::Pass
        }),
    };
    match outcome {
        Ok(v) => ExitCode::from(v.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
