mod commands;
mod config;
mod maps;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{OutputFormat, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "iet",
    version,
    about = "Exact interval exchange transformations, their periodic spectra, and the odometer behind T_N"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Plain `key = value` file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    depth_cap: Option<usize>,
    #[arg(long, global = true)]
    iteration_cap: Option<u64>,
    #[arg(long, global = true)]
    piece_cap: Option<usize>,
    #[arg(long, global = true)]
    oracle_cap: Option<u64>,
}

/// Maps are given as `TN:<N>`, `R:<m>,<n>` or `file:<path.json>`;
/// rationals as `p/q`; intervals as `lo,hi`.
#[derive(Subcommand, Debug)]
enum Command {
    /// Forward orbit of a point.
    Orbit {
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 100)]
        steps: u64,
    },
    /// Least period of a point by direct iteration.
    Period {
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Least-period spectrum of a finite exchange.
    Decompose {
        #[arg(long)]
        map: String,
        /// Also run a brute-force oracle and compare.
        #[arg(long)]
        oracle: Option<Oracle>,
        /// Check this many sampled points per component by iteration.
        #[arg(long)]
        cross_validate: Option<usize>,
        /// Compare each period with lcm(n..m); `R:` maps only.
        #[arg(long)]
        divisibility: bool,
    },
    /// First-return map to a subinterval.
    ReturnMap {
        #[arg(long)]
        map: String,
        #[arg(long)]
        target: String,
        /// Only follow points starting here (a subinterval of the target).
        #[arg(long)]
        source: Option<String>,
    },
    /// An iterate restricted to a subinterval.
    Compose {
        #[arg(long)]
        map: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        require_invariant: bool,
    },
    /// Address of a point in the Cantor construction of T_N.
    Address {
        #[arg(long = "N")]
        n: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Periodic or undecided, from the address.
    Classify {
        #[arg(long = "N")]
        n: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// The word intervals of the first levels.
    Cantor {
        #[arg(long = "N")]
        n: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Upper bound on the content of the level-k cover.
    Content {
        #[arg(long = "N")]
        n: String,
        #[arg(long)]
        d: String,
        #[arg(long)]
        k: usize,
        /// Report whether the bound is certified below this value.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Run a verification suite; exits 1 if any case fails.
    Verify {
        #[arg(long)]
        suite: Suite,
        /// Comma-separated values of N.
        #[arg(long = "N", value_delimiter = ',')]
        n: Vec<u64>,
        /// Pieces compared per N (return-lemma).
        #[arg(long, default_value_t = 50)]
        pieces: usize,
        /// Longest word (key-lemma, conjugacy).
        #[arg(long)]
        max_len: Option<usize>,
        /// Number of sampled words (conjugacy, vdc).
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Write an SVG drawing.
    Render {
        #[arg(long)]
        what: Drawing,
        #[arg(long = "N", default_value = "1")]
        n: String,
        /// Pieces drawn for fig1.
        #[arg(long, default_value_t = 12)]
        pieces: usize,
        /// Levels drawn for cantor.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Output file; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the effective configuration.
    ShowConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Oracle {
    Lattice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    ReturnLemma,
    KeyLemma,
    Conjugacy,
    Vdc,
    RemarkIdentities,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Drawing {
    Fig1,
    Cantor,
}

fn load_config(g: &GlobalArgs) -> Result<RunConfig, String> {
    let base = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            RunConfig::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => RunConfig::default(),
    };
    base.apply(&Overrides {
        depth_cap: g.depth_cap,
        iteration_cap: g.iteration_cap,
        piece_cap: g.piece_cap,
        oracle_cap: g.oracle_cap,
        seed: g.seed,
        output_format: g.format,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli.command, &cfg) {
        Ok(out) => {
            let text = out.render(cfg.output_format);
            if let Command::Render {
                out: Some(path), ..
            } = &cli.command
            {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
                eprintln!("wrote {}", path.display());
            } else {
                print!("{text}");
            }
            if out.status != output::Status::Ok {
                eprintln!("{}", commands::status_note(out.status));
            }
            ExitCode::from(out.status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::error_code(&e))
        }
    }
}
