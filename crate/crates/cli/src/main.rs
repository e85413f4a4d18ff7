//! `sturmint` command-line driver.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sturmint::eri::EriRoute;

#[derive(Debug, Parser)]
#[command(name = "sturmint", version, about = "Integrals, SCF and NMR dipolar terms over Slater-type orbitals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One-center Coulomb, atomic exchange and two-center exchange tables.
    Integrals {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Divide one-center Coulomb cells by their unit-exponent value.
        #[arg(long)]
        table1_convention: bool,
    },
    /// Closed-shell Hartree–Fock.
    Scf {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Treat the input as a dimer of this monomer and report the interaction energy.
        #[arg(long, value_name = "FILE")]
        dimer_of: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
    },
    /// Time the ERI routes over the 2-center and 3-/4-center sets.
    Benchmark {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Fallback integrals to time before extrapolating; 0 runs them all.
        #[arg(long, default_value_t = 12)]
        sample: usize,
        /// Trace the term-by-term convergence of one integral (1-based i,j,k,l).
        #[arg(long, value_name = "I,J,K,L")]
        quartet: Option<String>,
    },
    /// Nuclear dipolar one-electron integrals.
    Nmr {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Label of the nucleus center.
        #[arg(long)]
        nucleus: String,
        /// Basis pair (1-based); repeatable. Defaults to every diagonal pair.
        #[arg(long = "pair", value_name = "I,J")]
        pairs: Vec<String>,
        /// Rigidly rotate the geometry first: axis x,y,z and angle in degrees.
        #[arg(long, value_name = "X,Y,Z,DEG", allow_hyphen_values = true)]
        rotate: Option<String>,
        #[arg(long, default_value_t = 80)]
        radial: usize,
        #[arg(long, default_value_t = 24)]
        theta: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Closed forms, numerical fallback for 3-/4-center integrals.
    Poisson,
    /// Resolution for every integral.
    Resolution,
    /// Closed forms up to two centers, resolution beyond.
    Hybrid,
}

impl Route {
    pub fn eri_route(self) -> EriRoute {
        match self {
            Route::Poisson => EriRoute::PoissonFallback,
            Route::Resolution => EriRoute::ResolutionOnly,
            Route::Hybrid => EriRoute::PoissonPreferred,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Target absolute accuracy of resolution and fallback integrals.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = Route::Hybrid)]
    route: Route,
    /// Highest Laguerre index of the resolution.
    #[arg(long, default_value_t = 25)]
    n_max: u32,
    /// Highest angular momentum of the resolution.
    #[arg(long, default_value_t = 4)]
    l_max: u32,
    /// Cap on worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// Human-readable tables instead of JSON.
    #[arg(long)]
    pretty: bool,
}

impl Common {
    /// Flags that affect results, in a fixed textual form for the digest.
    fn canonical(&self) -> String {
        format!("eps={:e};route={:?};n_max={};l_max={}", self.eps, self.route, self.n_max, self.l_max)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Integrals { common, .. }
        | Command::Scf { common, .. }
        | Command::Benchmark { common, .. }
        | Command::Nmr { common, .. } => common.clone(),
    };
    if let Some(n) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(4);
        }
    }
    let outcome = match cli.command {
        Command::Integrals { input, common, table1_convention } => commands::integrals(&input, &common, table1_convention),
        Command::Scf { input, common, dimer_of, max_iter } => commands::scf(&input, &common, dimer_of.as_deref(), max_iter),
        Command::Benchmark { input, common, sample, quartet } => {
            commands::benchmark(&input, &common, sample, quartet.as_deref())
        }
        Command::Nmr { input, common, nucleus, pairs, rotate, radial, theta } => {
            commands::nmr(&input, &common, &nucleus, &pairs, rotate.as_deref(), radial, theta)
        }
    };
    let (report, status) = match outcome {
        Ok(r) => (r, ExitCode::SUCCESS),
        Err(commands::CliError::NotConverged(r)) => {
            eprintln!("error: SCF did not converge");
            (*r, ExitCode::from(3))
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let text = if common.pretty {
        report.render_pretty()
    } else {
        match serde_json::to_string_pretty(&report.to_json()) {
            Ok(s) => s + "\n",
            Err(e) => {
                eprintln!("error: cannot serialize report: {e}");
                return ExitCode::from(4);
            }
        }
    };
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        // a closed pipe (e.g. `| head`) is not a failure of the run
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("error: cannot write report: {e}");
            ExitCode::from(4)
        }
        _ => status,
    }
}
