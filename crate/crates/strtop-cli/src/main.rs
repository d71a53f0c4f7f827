//! Command-line front end: fixture loading, command dispatch and
//! reports.
//!
//! Exit codes: 0 = all checks passed, 1 = a verification failed (the
//! report carries a witness), 2 = malformed input or usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use strtop::error::AlgebraError;
use strtop::io;
use strtop::report::Report;

mod commands;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "strtop",
    about = "Exact A-infinity module calculus, twisted Morse complexes and \
             string-topology coproducts for spherical space forms",
    version
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Seed recorded in reports and used by randomized sweeps
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chain complexes: verification, homology, retract onto homology
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// A-infinity modules and morphisms
    #[command(subcommand)]
    Ainfty(AinftyCmd),
    /// Path modules over a pair (A, P)
    #[command(subcommand)]
    Pathmod(PathmodCmd),
    /// Twisted Morse complexes and spectral sequences
    #[command(subcommand)]
    Morse(MorseCmd),
    /// Cubical sets, boundaries and the Serre diagonal
    #[command(subcommand)]
    Cubical(CubicalCmd),
    /// String topology of spherical space forms
    #[command(subcommand)]
    Sng(SngCmd),
}

#[derive(Debug, Subcommand)]
pub enum ComplexCmd {
    /// Check d^2 = 0
    Verify { file: PathBuf },
    /// Homology dimensions and representatives
    Homology { file: PathBuf },
    /// Retract onto homology, with all identities checked
    Retract { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum AinftyCmd {
    /// Verify a DGA, strict module, A-infinity module or morphism
    /// (file kind is auto-detected)
    Verify {
        file: PathBuf,
        /// Cap the number of equations checked
        #[arg(long)]
        max_arity: Option<usize>,
    },
    /// Compose two morphisms (outer first)
    Compose {
        outer: PathBuf,
        inner: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Invert an infinity-isomorphism and check the roundtrip
    Invert {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Homotopy-transfer a strict module onto its homology
    Transfer {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        max_arity: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PathmodCmd {
    /// Verify a path module or path morphism (auto-detected)
    Verify { file: PathBuf },
    /// Compose two path morphisms (outer first)
    Compose {
        outer: PathBuf,
        inner: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Invert a path-module isomorphism and check the roundtrip
    Invert {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Homotopy-transfer a strict path module onto homology
    Transfer {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct FiberArg {
    /// Fiber module: `regular`, `trivial`, `conj:<n>:<max_k>` (the
    /// conjugation module on loop slices; group-algebra cocycles only),
    /// or a module JSON file
    #[arg(long, default_value = "regular")]
    pub fiber: String,
}

#[derive(Debug, Subcommand)]
pub enum MorseCmd {
    /// Verify the twisting cocycle identity
    Verify { file: PathBuf },
    /// Build the enriched complex and report its homology
    Build {
        file: PathBuf,
        #[command(flatten)]
        fiber: FiberArg,
    },
    /// Induce a chain map on enriched complexes from a morphism of the
    /// coefficients
    Induce { morphism: PathBuf, cocycle: PathBuf },
    /// Spectral sequence of the critical-index filtration
    Specseq {
        file: PathBuf,
        #[command(flatten)]
        fiber: FiberArg,
        /// Highest page to display
        #[arg(long, default_value_t = 2)]
        page: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CubicalCmd {
    /// Check the cubical identities and d^2 = 0
    Verify { file: PathBuf },
    /// Serre diagonal of the cubes in one dimension
    Diagonal {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        /// Restrict to one cube label
        #[arg(long)]
        cube: Option<String>,
    },
    /// Boundary of the cubes in one dimension
    Boundary {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        cube: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SngCmd {
    /// Betti numbers of the free loop space of S^n/G
    Betti {
        /// Group: `C<m>`/`Z<m>` (cyclic), `Q<4m>` (quaternion), or a
        /// group JSON file
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        /// Relative mode: drop the two constant-loop classes
        #[arg(long)]
        relative: bool,
    },
    /// Lifted coproduct of one basis class, e.g. --class "x,[g],1"
    Coproduct {
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        class: String,
    },
    /// Property suite: degree law, equivariance, coassociativity,
    /// cocommutativity, and the spectral-sequence cross-check
    Check {
        /// Run the whole built-in battery
        #[arg(long)]
        all: bool,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
    },
}

pub fn read_file(path: &PathBuf) -> Result<String, AlgebraError> {
    std::fs::read_to_string(path)
        .map_err(|e| AlgebraError::BadInput(format!("cannot read {}: {e}", path.display())))
}

pub fn write_file(path: &PathBuf, text: &str) -> Result<(), AlgebraError> {
    std::fs::write(path, text)
        .map_err(|e| AlgebraError::BadInput(format!("cannot write {}: {e}", path.display())))
}

fn configure_workers() {
    if let Ok(v) = std::env::var("STRTOP_WORKERS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_workers();
    let start = Instant::now();
    let result: Result<Report, AlgebraError> = match &cli.command {
        Command::Complex(cmd) => commands::complex::run(cmd, cli.seed),
        Command::Ainfty(cmd) => commands::ainfty::run(cmd, cli.seed),
        Command::Pathmod(cmd) => commands::pathmod::run(cmd, cli.seed),
        Command::Morse(cmd) => commands::morse::run(cmd, cli.seed),
        Command::Cubical(cmd) => commands::cubical::run(cmd, cli.seed),
        Command::Sng(cmd) => commands::sng::run(cmd, cli.seed),
    };
    match result {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text(Some(start.elapsed()))),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

pub(crate) fn load_group(spec: &str) -> Result<strtop::sng::FiniteGroup, AlgebraError> {
    let upper = spec.to_uppercase();
    if let Some(m) = upper
        .strip_prefix('C')
        .or_else(|| upper.strip_prefix('Z'))
        .and_then(|s| s.parse::<usize>().ok())
    {
        if m >= 1 {
            return Ok(strtop::sng::FiniteGroup::cyclic(m));
        }
    }
    if let Some(order) = upper.strip_prefix('Q').and_then(|s| s.parse::<usize>().ok()) {
        if order >= 8 && order % 4 == 0 {
            return Ok(strtop::sng::FiniteGroup::quaternion(order / 4));
        }
        return Err(AlgebraError::BadInput(format!(
            "quaternion group order must be a multiple of 4 at least 8, got {order}"
        )));
    }
    let path = PathBuf::from(spec);
    let text = read_file(&path)?;
    io::parse_doc::<io::GroupDoc>(&text)?.decode()
}

pub(crate) fn module_from_fiber_arg(
    fiber: &str,
    algebra: &Arc<strtop::ainfty::DGAlgebra>,
    group_hint: Option<&strtop::sng::FiniteGroup>,
) -> Result<strtop::ainfty::StrictModule, AlgebraError> {
    match fiber {
        "regular" => Ok(strtop::fixtures::regular_module(algebra)),
        "trivial" => Ok(strtop::morse::trivial_group_module(algebra)),
        other if other.starts_with("conj:") => {
            let parts: Vec<&str> = other.split(':').collect();
            if parts.len() != 3 {
                return Err(AlgebraError::BadInput(
                    "conjugation fiber needs the form conj:<n>:<max_k>".into(),
                ));
            }
            let n: usize = parts[1]
                .parse()
                .map_err(|_| AlgebraError::BadInput("bad n in conj fiber".into()))?;
            let max_k: usize = parts[2]
                .parse()
                .map_err(|_| AlgebraError::BadInput("bad max_k in conj fiber".into()))?;
            let group = group_hint.ok_or_else(|| {
                AlgebraError::BadInput("conjugation fiber needs a group-algebra cocycle".into())
            })?;
            Ok(strtop::morse::conjugation_slices_module(
                algebra, group, n, max_k,
            ))
        }
        path => {
            let text = read_file(&PathBuf::from(path))?;
            io::parse_doc::<io::ModuleDoc>(&text)?.decode()
        }
    }
}
