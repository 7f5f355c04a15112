//! `corank`: run the corank experiments and emit JSON or CSV reports.

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use corank::experiments::{ModePolicy, MixtureFamily, Target, DEFAULT_BUDGET};
use corank::rules::RuleId;

const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "corank", version, about = "Corank statistics of structured random F2 matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads for sharded experiments (output does not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Enumeration budget in step sequences [env: CORANK_BUDGET, default 2^26].
    #[arg(long, global = true)]
    pub budget: Option<u64>,

    /// Timestamp string to record in the envelope (omitted by default so
    /// reruns are byte-identical).
    #[arg(long, global = true)]
    pub timestamp: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stationary law pi(0..=J) and the mass beyond J.
    Pi {
        #[arg(long)]
        max_j: usize,
        #[arg(long, default_value_t = 1e-15)]
        precision: f64,
    },
    /// Entries of the kernel truncated at N.
    Qcl {
        #[arg(long)]
        n: usize,
    },
    /// One-step residual of pi under the kernel truncated at N.
    Stationarity {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-15)]
        precision: f64,
    },
    /// Drift ratios (Q V)(x) / V(x) for V(x) = 2^x.
    Drift {
        #[arg(long)]
        xmax: u64,
    },
    /// Exact corank law of a rule or mixture.
    Exact {
        #[arg(long)]
        rule: Target,
        #[arg(long)]
        r: usize,
    },
    /// Monte Carlo corank law of a rule or mixture.
    Mc {
        #[arg(long)]
        rule: Target,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Binomial mixture over kappa: exact, or sampled when --samples is given.
    Mixture {
        #[arg(long)]
        family: MixtureFamily,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exceptional-event probabilities and transition deviations per step.
    Audit {
        #[arg(long)]
        rule: RuleId,
        #[arg(long)]
        r: usize,
        /// Sample instead of enumerating.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact check of the generic/exceptional decomposition.
    Decomp {
        #[arg(long)]
        rule: RuleId,
        #[arg(long)]
        rmax: usize,
    },
    /// Distances to pi across sizes and a geometric rate fit.
    Converge {
        #[arg(long)]
        family: Target,
        /// Comma-separated increasing sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        rs: Vec<usize>,
        #[arg(long, default_value = "auto")]
        mode: ModePolicy,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact binomial tail against the Hoeffding bound.
    Hoeffding {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        eps: f64,
    },
    /// Raw Pell space against its rule, shifted by one.
    Pellcheck {
        #[arg(long)]
        j: u8,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        kappa: usize,
        #[arg(long, default_value_t = 0)]
        a: u8,
        #[arg(long, default_value_t = 0)]
        b: u8,
    },
    /// Rédei matrix of d, and its Pell space when l is given.
    Redei {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: Option<i64>,
    },
    /// Bulk scan over squarefree 1 < |d| <= M.
    Scan {
        #[arg(long)]
        dmax: i64,
    },
}

fn budget(cli: &Cli) -> Result<u64, String> {
    if let Some(b) = cli.budget {
        return Ok(b);
    }
    match std::env::var("CORANK_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("CORANK_BUDGET is not an integer: {s:?}")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn exit_code(e: &corank::Error) -> u8 {
    use corank::Error::*;
    match e {
        BudgetExceeded { .. } => EXIT_BUDGET,
        InvalidArgument(_) | InvalidRule(_) | NotSquarefree(_) | TooFewPoints { .. } => EXIT_USAGE,
        _ => EXIT_INVARIANT,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let budget = match budget(&cli) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let run = || commands::run(&cli.command, budget);
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                eprintln!("error: cannot start {t} threads: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        },
        None => run(),
    };
    let out = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = match cli.format {
        Format::Csv => output::csv(&out),
        Format::Json => {
            let env = output::envelope(
                commands::name(&cli.command),
                &argv[1..],
                commands::seed(&cli.command),
                cli.timestamp.clone(),
                out.payload.clone(),
            );
            let mut s = serde_json::to_string_pretty(&env).expect("values serialize");
            s.push('\n');
            s
        }
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(EXIT_INVARIANT);
    }
    if out.invariant_failed {
        eprintln!("error: invariant check failed");
        return ExitCode::from(EXIT_INVARIANT);
    }
    ExitCode::SUCCESS
}
