use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latgrow::cache::CountTable;
use latgrow::meanfield::FoldOptions;
use latgrow::report::{
    cmd_asymptotics, cmd_counts, cmd_verify, parse_target, AsymptoticsRequest, Identity,
    RunConfig, RunReport,
};
use latgrow::{EnumOptions, Error, Kind, LatticeSpec, Precision};

/// Exact counts and identity checks for lattice trees and animals.
#[derive(Parser)]
#[command(name = "latgrow", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    /// Significant digits for real-valued output.
    #[arg(long, global = true, default_value_t = Precision::DEFAULT_DIGITS)]
    digits: u32,
    /// Worker threads for enumeration; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Count cache file.
    #[arg(long, global = true, env = "LATGROW_CACHE", default_value = "latgrow-cache.csv")]
    cache: PathBuf,
    /// Search-node budget per enumeration.
    #[arg(long, global = true, default_value_t = EnumOptions::DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// t_n or a_n for n = 0..=N with growth estimators.
    Counts {
        #[arg(value_parser = parse_spec)]
        spec: LatticeSpec,
        #[arg(default_value = "tree", value_parser = parse_kind)]
        kind: Kind,
        #[arg(default_value_t = 6)]
        n_max: usize,
    },
    /// Exhaustive check of one identity for n = 0..=N.
    Verify {
        #[arg(value_parser = parse_spec)]
        spec: LatticeSpec,
        #[arg(value_parser = parse_identity)]
        identity: Identity,
        n_max: usize,
    },
    /// z0, Penrose bounds, series truncations and finite-n diagnostics.
    Asymptotics {
        /// A lattice spec, or `d=<n>` for the nearest-neighbour lattice.
        #[arg(value_parser = parse_target_arg)]
        target: LatticeSpec,
        #[arg(long)]
        penrose: bool,
        #[arg(long)]
        series: bool,
        #[arg(long, default_value_t = 5)]
        order: usize,
        /// Finite-n one-point diagnostic at this N.
        #[arg(long, value_name = "N")]
        g1: Option<usize>,
        /// Counts used by the diagnostic.
        #[arg(long, default_value = "tree", value_parser = parse_kind)]
        kind: Kind,
    },
}

fn parse_spec(s: &str) -> Result<LatticeSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_target_arg(s: &str) -> Result<LatticeSpec, String> {
    parse_target(s).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_identity(s: &str) -> Result<Identity, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::InvalidSpec(_)
        | Error::InvalidInput(_)
        | Error::OrderUnavailable(_)
        | Error::DimensionMismatch { .. }
        | Error::InvalidCutTree(_) => 2,
        Error::CacheConflict { .. } | Error::CacheFormat { .. } | Error::Io(_) => 1,
    }
}

fn run(cli: Cli) -> Result<RunReport, Error> {
    let g = &cli.global;
    let cfg = RunConfig {
        precision: Precision::digits(g.digits),
        enumeration: EnumOptions {
            node_budget: g.budget,
            jobs: g.jobs,
        },
        folding: FoldOptions::default(),
    };
    let mut table = CountTable::open(&g.cache)?;
    match cli.command {
        Command::Counts { spec, kind, n_max } => cmd_counts(&mut table, &spec, kind, n_max, &cfg),
        Command::Verify {
            spec,
            identity,
            n_max,
        } => cmd_verify(&mut table, &spec, identity, n_max, &cfg),
        Command::Asymptotics {
            target,
            penrose,
            series,
            order,
            g1,
            kind,
        } => {
            let req = AsymptoticsRequest {
                penrose,
                series,
                order,
                g1: g1.map(|n| (kind, n)),
            };
            cmd_asymptotics(&mut table, &target, &req, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let csv = cli.global.csv;
    match run(cli) {
        Ok(report) => {
            if csv {
                print!("{}", report.to_csv());
            } else {
                print!("{}", report.to_json());
            }
            ExitCode::from(report.outcome().exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
