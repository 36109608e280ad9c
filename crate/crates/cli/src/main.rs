use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use slcoset::harness::{self, HarnessError, Report, RunConfig, Selector};
use slcoset::Rat;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "slcoset",
    version,
    about = "Exact checks of the sl(n) level-2 coset branching identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check closed forms against brute-force sums and the polynomial identity on a grid.
    Verify(GridArgs),
    /// Group the K-graphs of (2Λ0, Λk) by parent and compare each sector with its Gaussian law.
    Census(GridArgs),
    /// Render K-graphs as text.
    Dump(DumpArgs),
    /// Compare the truncated q-series identity for L → ∞.
    Corollary(GridArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Ranks, comma separated. Defaults to 2,3,4.
    #[arg(long = "n", value_delimiter = ',')]
    n: Vec<usize>,
    /// Maximal length, one value for all ranks or one per rank.
    #[arg(long, value_delimiter = ',')]
    lmax: Vec<usize>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Truncation order for q-series, e.g. 8 or 17/2.
    #[arg(long, value_parser = parse_rat)]
    order: Option<Rat>,
    /// Largest L tried while waiting for stabilization.
    #[arg(long, default_value_t = 64)]
    ceiling: usize,
    /// JSON report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Suppress the table on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(long = "n")]
    n: usize,
    /// Path length L.
    #[arg(long = "lmax", visible_alias = "length")]
    length: usize,
    #[arg(long, default_value_t = 0)]
    i: usize,
    #[arg(long, default_value_t = 0)]
    j: usize,
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Graph of the path with this step sequence, e.g. 0,0,1,1,2,3,2.
    #[arg(long, value_delimiter = ',', group = "select")]
    iota: Option<Vec<usize>>,
    /// Parent graph with this label (m_1,...,m_{n-1}).
    #[arg(long, value_delimiter = ',', group = "select")]
    parent: Option<Vec<usize>>,
    /// The ground-state path.
    #[arg(long, group = "select")]
    ground: bool,
    /// Every graph of the class.
    #[arg(long, group = "select")]
    all: bool,
    /// Text destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| format!("not a rational number: {e}"))
}

fn default_lmax(n: usize) -> usize {
    if n <= 3 {
        10
    } else {
        6
    }
}

impl GridArgs {
    fn config(&self) -> Result<RunConfig, HarnessError> {
        let ranks = if self.n.is_empty() {
            RunConfig::default().ranks
        } else {
            let lmax: Vec<usize> = match self.lmax.len() {
                0 => self.n.iter().map(|&n| default_lmax(n)).collect(),
                1 => vec![self.lmax[0]; self.n.len()],
                l if l == self.n.len() => self.lmax.clone(),
                l => {
                    return Err(HarnessError::Config(format!(
                        "{l} values for --lmax but {} ranks",
                        self.n.len()
                    )))
                }
            };
            self.n.iter().copied().zip(lmax).collect()
        };
        let cfg = RunConfig {
            ranks,
            i: self.i,
            j: self.j,
            k: self.k,
            order: self.order,
            ceiling: self.ceiling,
            jobs: self.jobs,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(report: &Report, args: &GridArgs) -> Result<ExitCode, HarnessError> {
    if !args.quiet {
        eprint!("{}", report.table());
    }
    report.write_json(args.out.as_deref())?;
    Ok(if report.is_success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    })
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Verify(args) => emit(&harness::cmd_verify(&args.config()?)?, &args),
        Command::Census(args) => emit(&harness::cmd_census(&args.config()?)?, &args),
        Command::Corollary(args) => emit(&harness::cmd_corollary(&args.config()?)?, &args),
        Command::Dump(args) => {
            let selector = match (args.iota, args.parent) {
                (Some(iota), _) => Selector::Iota(iota),
                (_, Some(m)) => Selector::Parent(m),
                _ if args.all => Selector::All,
                _ => Selector::Ground,
            };
            let text = harness::cmd_dump(args.n, args.length, (args.i, args.j, args.k), &selector)?;
            match args.out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                HarnessError::Config(_) => EXIT_USAGE,
                HarnessError::Io(_) => EXIT_IO,
                _ => EXIT_FAILURE,
            })
        }
    }
}
