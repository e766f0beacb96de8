use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use drinfeld::bounds::ExpBase;
use drinfeld::factor::DEFAULT_SEED;
use drinfeld::modfile::{parse_module_file, ModuleSpec};
use drinfeld::ErrorKind;

mod commands;
mod output;

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Heights, explicit bounds and Galois probes for Drinfeld modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Seed for randomized root finding.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Omit the timestamp so that identical inputs give identical bytes.
    #[arg(long, global = true)]
    pub reproducible: bool,

    /// log_q of the unspecified constant c_2.
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub log_c2: f64,

    #[arg(long, global = true, value_enum, default_value_t = ExpBaseArg::D)]
    pub exp_base: ExpBaseArg,

    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Naive and graded heights with per-place contributions.
    Heights(ModuleArgs),
    /// N_d, Omega, the Lambert-W threshold C and per-degree case verdicts.
    Bound(BoundArgs),
    /// Frobenius characteristic polynomials on mod-l torsion and the irreducibility verdict.
    Probe(ProbeArgs),
    /// Print phi_a.
    PhiAt(PhiAtArgs),
    /// Check or construct an isogeny from a twisted polynomial.
    CheckIsogeny(IsogenyArgs),
}

#[derive(Args, Debug)]
pub struct ModuleArgs {
    #[arg(long, value_name = "FILE")]
    pub module: PathBuf,

    /// Valuation table `place, deg, n_nu, v(g1), ..., v(gr)`, required when d > 1.
    #[arg(long, value_name = "FILE")]
    pub height_table: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub module: ModuleArgs,

    /// Degrees of l to test, e.g. `100,2000` or `10..20`.
    #[arg(long, value_name = "LIST")]
    pub deg_ell: Option<String>,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[arg(long, value_name = "FILE")]
    pub module: PathBuf,

    /// A monic irreducible l.
    #[arg(long, value_name = "POLY", conflicts_with = "ell_deg_max", required_unless_present = "ell_deg_max")]
    pub ell: Option<String>,

    /// Probe every monic irreducible l of degree at most N.
    #[arg(long, value_name = "N")]
    pub ell_deg_max: Option<usize>,

    /// Comma-separated places, e.g. `T, T^2 + 1`.
    #[arg(long, value_name = "LIST", conflicts_with = "place_deg_max", required_unless_present = "place_deg_max")]
    pub places: Option<String>,

    /// Use every finite place of degree at most N.
    #[arg(long, value_name = "N")]
    pub place_deg_max: Option<usize>,

    /// Largest splitting-field degree over F_q that will be built.
    #[arg(long, value_name = "N", default_value_t = 256)]
    pub max_tower_degree: usize,
}

#[derive(Args, Debug)]
pub struct PhiAtArgs {
    #[arg(long, value_name = "FILE")]
    pub module: PathBuf,

    #[arg(long, value_name = "POLY")]
    pub a: String,
}

#[derive(Args, Debug)]
pub struct IsogenyArgs {
    #[arg(long, value_name = "FILE")]
    pub module: PathBuf,

    /// The twisted polynomial u, e.g. `T + t`.
    #[arg(long, value_name = "EXPR")]
    pub isogeny: String,

    /// Target module; when absent the quotient of the source by ker u is computed.
    #[arg(long, value_name = "FILE")]
    pub target: Option<PathBuf>,

    /// Also build the dual with respect to this a.
    #[arg(long, value_name = "POLY")]
    pub a: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpBaseArg {
    D,
    R,
}

impl From<ExpBaseArg> for ExpBase {
    fn from(e: ExpBaseArg) -> Self {
        match e {
            ExpBaseArg::D => ExpBase::D,
            ExpBaseArg::R => ExpBase::R,
        }
    }
}

pub fn load_module(path: &Path) -> anyhow::Result<ModuleSpec> {
    let src = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_module_file(&src).with_context(|| format!("in module file {}", path.display()))
}

/// `100,2000` or `10..20` or a mix.
pub fn parse_degree_list(s: &str) -> anyhow::Result<Vec<u64>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(|_| anyhow!("bad degree `{lo}`"))?;
            let hi: u64 = hi.trim().parse().map_err(|_| anyhow!("bad degree `{hi}`"))?;
            if hi < lo || hi - lo > 1_000_000 {
                bail!("bad degree range `{item}`");
            }
            out.extend(lo..=hi);
        } else {
            out.push(item.parse().map_err(|_| anyhow!("bad degree `{item}`"))?);
        }
    }
    Ok(out)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<drinfeld::Error>().map(|e| e.kind()) {
        Some(ErrorKind::Precondition) => 3,
        Some(ErrorKind::Internal) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
