//! Command-line driver: resolves inputs, runs the selected criteria, and
//! maps outcomes to exit codes (0 pass, 1 fail, 2 inconclusive, 3 bad input).

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use fusionring_cli::{
    axioms_failure_reports, catalog_list, exit_code, load_ring, oracle_s3_report, parse_s_values,
    render_reports, run_check, spectra_text, spectra_value, Loaded, RunConfig, Selection,
    DEFAULT_NMAX, DEFAULT_S_LIST, DEFAULT_TOL_EXP,
};

#[derive(Parser)]
#[command(
    name = "fusionring",
    version,
    about = "Categorification obstructions for fusion rings: coefficient inequalities, positivity scans, and integrality criteria, each with machine-checkable witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run criteria against a ring file or catalog:<name>
    Check(CheckArgs),
    /// Print dimensions, characters, and codegrees
    Spectra(SpectraArgs),
    /// List bundled rings or show one in file format
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Cross-check spectral invariants against exact group counts
    Oracle {
        #[command(subcommand)]
        target: OracleTarget,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Working precision in bits (>= 64); FUSIONRING_PRECISION sets the default
    #[arg(long)]
    precision: Option<u32>,
    /// Tolerance exponent k for threshold 10^k (k <= -16)
    #[arg(long = "tol", default_value_t = DEFAULT_TOL_EXP, allow_hyphen_values = true)]
    tol: i64,
    /// Seed for the randomized spectral routines
    #[arg(long)]
    seed: Option<u64>,
    /// Output format
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,
}

#[derive(Args)]
struct CheckArgs {
    /// Ring source: a .fring file path or catalog:<name>
    source: String,
    /// Which criterion to run
    #[arg(
        long,
        default_value = "all",
        value_parser = ["axioms", "schur", "lpw", "lpw-general", "isaacs", "strong-isaacs", "all"]
    )]
    criterion: String,
    /// Largest invariant order n (3..=6); positivity scans cover 3..=n
    #[arg(long, default_value_t = DEFAULT_NMAX)]
    n: usize,
    /// Comma-separated list of nonnegative rationals for the integrality exponent
    #[arg(long, default_value = DEFAULT_S_LIST)]
    s: String,
    /// Cap on the degree of the integer-relation search (default depends on rank and s)
    #[arg(long)]
    maxdeg: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SpectraArgs {
    /// Ring source: a .fring file path or catalog:<name>
    source: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List bundled ring names with short descriptions
    List,
    /// Print a bundled ring in the text file format
    Show { name: String },
}

#[derive(Subcommand)]
enum OracleTarget {
    /// Compare exact tuple counts in S3 with the rep_s3 spectral invariants
    S3 {
        /// Largest tuple length (3..=6)
        #[arg(long, default_value_t = DEFAULT_NMAX)]
        n: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() {
    std::process::exit(real_main());
}

fn usage_error(message: &str) -> i32 {
    eprintln!("error: {message}");
    3
}

fn resolve_precision(flag: Option<u32>) -> Result<u32, String> {
    if let Some(p) = flag {
        return Ok(p);
    }
    match std::env::var("FUSIONRING_PRECISION") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("FUSIONRING_PRECISION is not a valid bit count: `{v}`")),
        Err(_) => Ok(fusionring_cli::DEFAULT_PRECISION),
    }
}

fn build_config(args: &CheckArgs) -> Result<RunConfig, String> {
    let cfg = RunConfig {
        precision: resolve_precision(args.common.precision)?,
        tol_exp: args.common.tol,
        nmax: args.n,
        s_values: parse_s_values(&args.s)?,
        selection: Selection::parse(&args.criterion)?,
        seed: args.common.seed,
        maxdeg: args.maxdeg,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn common_config(common: &CommonArgs) -> Result<RunConfig, String> {
    let cfg = RunConfig {
        precision: resolve_precision(common.precision)?,
        tol_exp: common.tol,
        seed: common.seed,
        ..RunConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprint!("{e}");
            return 3;
        }
    };

    match cli.command {
        Command::Check(args) => {
            let cfg = match build_config(&args) {
                Ok(c) => c,
                Err(m) => return usage_error(&m),
            };
            let json = args.common.format == "json";
            let reports = match load_ring(&args.source) {
                Ok(Loaded::Ready(ring)) => run_check(&ring, &cfg),
                Ok(Loaded::AxiomsViolated { name, violations }) => {
                    axioms_failure_reports(&name, &violations, &cfg)
                }
                Err(m) => return usage_error(&m),
            };
            print!("{}", render_reports(&reports, json));
            exit_code(&reports)
        }
        Command::Spectra(args) => {
            let cfg = match common_config(&args.common) {
                Ok(c) => c,
                Err(m) => return usage_error(&m),
            };
            let ring = match load_ring(&args.source) {
                Ok(Loaded::Ready(ring)) => ring,
                Ok(Loaded::AxiomsViolated { name, .. }) => {
                    return usage_error(&format!(
                        "ring `{name}` violates the fusion axioms; run `check {}` for the witness list",
                        args.source
                    ));
                }
                Err(m) => return usage_error(&m),
            };
            let ctx = cfg.context();
            let rendered = if args.common.format == "json" {
                spectra_value(&ring, &ctx).map(|v| {
                    let mut s = serde_json::to_string_pretty(&v).expect("spectra serialize");
                    s.push('\n');
                    s
                })
            } else {
                spectra_text(&ring, &ctx)
            };
            match rendered {
                Ok(text) => {
                    print!("{text}");
                    0
                }
                Err(m) => {
                    eprintln!("error: spectral computation stalled: {m}");
                    2
                }
            }
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                print!("{}", catalog_list());
                0
            }
            CatalogAction::Show { name } => match fusionring::catalog::catalog_ring(&name) {
                Some(ring) => {
                    print!("{}", fusionring::io::serialize(&ring));
                    0
                }
                None => usage_error(&format!("unknown catalog ring `{name}`")),
            },
        },
        Command::Oracle { target } => match target {
            OracleTarget::S3 { n, common } => {
                let cfg = match common_config(&common) {
                    Ok(mut c) => {
                        c.nmax = n;
                        match c.validate() {
                            Ok(()) => c,
                            Err(m) => return usage_error(&m),
                        }
                    }
                    Err(m) => return usage_error(&m),
                };
                match oracle_s3_report(cfg.nmax, &cfg.context()) {
                    Ok((text, ok)) => {
                        print!("{text}");
                        if ok {
                            0
                        } else {
                            1
                        }
                    }
                    Err(m) => {
                        eprintln!("error: {m}");
                        2
                    }
                }
            }
        },
    }
}
