//! `cayminor` command-line tool.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "cayminor",
    version,
    about = "Cayley-graph balls, clique minors and KPR covers"
)]
pub struct Cli {
    /// Seed for every randomized step; recorded in the output header.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a Cayley ball and write it as a graph file.
    Ball(BallArgs),
    /// Build, search, verify or project clique minors.
    #[command(subcommand)]
    Minor(MinorCommand),
    /// Collapse a graph along a partition into connected classes.
    Collapse(CollapseArgs),
    /// Build the KPR partitions and cover and measure them.
    Kpr(KprArgs),
    /// Build a clique minor from disjoint rays.
    Rays(RaysArgs),
    /// Bounds for a virtually free group given a free subgroup and coset representatives.
    VfreeBound(VfreeArgs),
}

#[derive(Debug, Subcommand)]
pub enum MinorCommand {
    /// Search a host for a K_m minor.
    Find(FindArgs),
    /// Check a decomposition file against its host.
    Verify(VerifyArgs),
    /// The explicit K_m in Cay(Z^2, {±(1,0), ±(2,0), ±(0,1)}).
    #[command(name = "construct-z2s2")]
    ConstructZ2S2(ConstructZ2S2Args),
    /// The explicit K_m in an abelian group containing Z^2 and a third generator.
    #[command(name = "construct-z2xc")]
    ConstructZ2xc(ConstructZ2xcArgs),
    /// Carry a minor of a free-product ball into one factor.
    Project(ProjectArgs),
}

/// A host graph, read from a file or built as a Cayley ball.
#[derive(Debug, Args, Serialize)]
pub struct HostArgs {
    /// Graph JSON file (the output of `ball` works).
    #[arg(long, conflicts_with_all = ["spec", "radius"])]
    pub host: Option<PathBuf>,
    /// Group spec, e.g. `Z^2 | gens=(1,0),(0,1),sym`.
    #[arg(long, requires = "radius")]
    pub spec: Option<String>,
    #[arg(long, requires = "spec")]
    pub radius: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct BallArgs {
    pub spec: String,
    #[arg(long)]
    pub radius: usize,
    /// Add the edges of S ∪ SS ∪ SSS, keeping the vertices of the S-ball.
    #[arg(long)]
    pub enlarged: bool,
    #[arg(long, default_value_t = cayminor::groups::DEFAULT_BALL_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct FindArgs {
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub host: HostArgs,
    /// Maximum number of search-node expansions.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Decomposition file; `-` reads stdin.
    #[arg(default_value = "-")]
    pub input: String,
    /// Host graph file; by default the host named in the decomposition is rebuilt.
    #[arg(long)]
    pub host: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructZ2S2Args {
    #[arg(long)]
    pub m: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructZ2xcArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value = "Z^2 x C2 | gens=(1,0,0),(0,1,0),(0,0,1),sym")]
    pub spec: String,
    #[arg(long, default_value = "(1,0,0)")]
    pub s1: String,
    #[arg(long, default_value = "(0,1,0)")]
    pub s2: String,
    #[arg(long, default_value = "(0,0,1)")]
    pub s3: String,
}

#[derive(Debug, Args, Serialize)]
pub struct ProjectArgs {
    /// Decomposition file on a free-product ball; `-` reads stdin.
    #[arg(default_value = "-")]
    pub input: String,
    /// Free-product spec, when the file does not name its host.
    #[arg(long, requires = "radius")]
    pub spec: Option<String>,
    #[arg(long, requires = "spec")]
    pub radius: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct CollapseArgs {
    #[command(flatten)]
    pub host: HostArgs,
    /// JSON array giving a class key for every vertex.
    #[arg(long)]
    pub classes: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct KprArgs {
    #[command(flatten)]
    pub host: HostArgs,
    #[arg(long)]
    pub m: usize,
    /// Scales, comma separated.
    #[arg(long = "s", value_delimiter = ',', default_value = "1")]
    pub s_list: Vec<usize>,
    /// Start the annuli at j = 1 instead of j = 0.
    #[arg(long)]
    pub j_from_one: bool,
    /// Largest m accepted (the construction builds 4^m partitions).
    #[arg(long, default_value_t = cayminor::kpr::DEFAULT_PARTITION_CAP)]
    pub partition_cap: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct RaysArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub radius: usize,
    /// One ray per line as comma-separated elements.
    #[arg(long, conflicts_with = "menger")]
    pub ray_file: Option<PathBuf>,
    /// Take rays from disjoint paths leaving the sphere of this radius.
    #[arg(long, value_name = "R_CORE")]
    pub menger: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct VfreeArgs {
    #[arg(long)]
    pub spec: String,
    /// Free basis of the finite-index subgroup, `;` separated.
    #[arg(long, value_delimiter = ';', required = true)]
    pub basis: Vec<String>,
    /// Coset representatives, identity first, `;` separated.
    #[arg(long, value_delimiter = ';', required = true)]
    pub reps: Vec<String>,
    #[arg(long, default_value_t = 6)]
    pub probe_radius: usize,
    /// Also search this ball radius for a K_m and audit it across tree edges.
    #[arg(long, requires = "audit_radius")]
    pub audit_m: Option<usize>,
    #[arg(long, requires = "audit_m")]
    pub audit_radius: Option<usize>,
    /// Tree edges up to this length are audited.
    #[arg(long, default_value_t = 3)]
    pub tree_radius: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let result = commands::dispatch(cli)?;
    result.emit(cli)
}
