//! `pfh-twist-lab`: CSV-emitting front end for the twist-map PFH lab.

use clap::{Parser, Subcommand};
use std::process::ExitCode;

mod commands;

#[derive(Parser)]
#[command(name = "pfh-twist-lab", version, about = "Lattice-path PFH lab for monotone twist maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a profile and print its headline numbers.
    Profile {
        #[command(subcommand)]
        action: ProfileAction,
    },
    /// Print the index report of a path.
    Index {
        /// Path in text form, e.g. "0; (1,1)x1:H".
        #[arg(allow_hyphen_values = true)]
        path: String,
    },
    /// Print the action of a path with its per-edge breakdown.
    Action {
        #[arg(allow_hyphen_values = true)]
        path: String,
        #[arg(long, default_value = "quadratic")]
        profile: String,
    },
    /// Chain-complex checks for one degree.
    Complex {
        #[command(subcommand)]
        action: ComplexAction,
    },
    /// Homology rank table (CSV d,k,rank,minmax).
    Homology {
        #[arg(long)]
        d: i64,
        #[arg(long, default_value = "quadratic")]
        profile: String,
        /// Grading window half-width; defaults to 3d+3.
        #[arg(long)]
        span: Option<i64>,
    },
    /// Filtration min-max at one grading.
    Minmax {
        #[arg(long)]
        d: i64,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, default_value = "quadratic")]
        profile: String,
    },
    /// Spectral invariants (CSV d,k,value,lo,hi,method).
    Spectral {
        #[arg(long)]
        d: i64,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
        #[arg(long, conflicts_with = "k")]
        all: bool,
        #[arg(long, default_value = "quadratic")]
        profile: String,
        #[arg(long, default_value = "brute")]
        method: String,
    },
    /// Calabi convergence table (CSV d,k,estimate,err,lo,hi).
    Converge {
        #[arg(long, default_value = "quadratic")]
        profile: String,
        #[arg(long)]
        dmax: i64,
        #[arg(long, default_value = "k=-d")]
        rule: String,
        #[arg(long, default_value_t = 10)]
        cap: i64,
    },
    /// Isoperimetric identity report.
    Isoperimetric {
        #[arg(long, default_value = "quadratic")]
        profile: String,
        #[arg(long, default_value_t = 100)]
        paths: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Order-d action spectrum in a window.
    Spectrum {
        #[arg(long)]
        d: i64,
        #[arg(long, default_value = "quadratic")]
        profile: String,
        /// Window "a,b".
        #[arg(long)]
        window: String,
    },
    /// Infinite-twist growth dichotomy (CSV i,cal,d,slope,lo,hi).
    InfiniteTwist {
        /// Disc twist spec: "r^-4" or "2(1-r)".
        #[arg(long)]
        f: String,
        /// Truncation indices, comma separated (0 = untruncated).
        #[arg(long, value_delimiter = ',')]
        i: Vec<u32>,
        #[arg(long)]
        dmax: i64,
    },
    /// Run the built-in invariant suite; exit nonzero on any failure.
    Selftest {
        #[arg(long, default_value = "quadratic")]
        profile: String,
    },
}

#[derive(Subcommand)]
enum ProfileAction {
    Check { file: String },
}

#[derive(Subcommand)]
enum ComplexAction {
    Verify {
        #[arg(long)]
        d: i64,
        #[arg(long, default_value = "quadratic")]
        profile: String,
    },
}

fn init_threads() {
    if let Ok(n) = std::env::var("PFH_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Profile {
            action: ProfileAction::Check { file },
        } => commands::profile_check(&file),
        Command::Index { path } => commands::index_report(&path),
        Command::Action { path, profile } => commands::action_report(&path, &profile),
        Command::Complex {
            action: ComplexAction::Verify { d, profile },
        } => commands::complex_verify(d, &profile),
        Command::Homology { d, profile, span } => commands::homology(d, &profile, span),
        Command::Minmax { d, k, profile } => commands::minmax(d, k, &profile),
        Command::Spectral {
            d,
            k,
            all,
            profile,
            method,
        } => commands::spectral(d, k, all, &profile, &method),
        Command::Converge {
            profile,
            dmax,
            rule,
            cap,
        } => commands::converge(&profile, dmax, &rule, cap),
        Command::Isoperimetric {
            profile,
            paths,
            seed,
        } => commands::isoperimetric(&profile, paths, seed),
        Command::Spectrum { d, profile, window } => commands::spectrum(d, &profile, &window),
        Command::InfiniteTwist { f, i, dmax } => commands::infinite_twist(&f, &i, dmax),
        Command::Selftest { profile } => commands::selftest(&profile),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::CmdError::Violation(msg)) => {
            eprintln!("violation: {}", msg);
            ExitCode::from(1)
        }
        Err(commands::CmdError::Usage(msg)) => {
            eprintln!("usage error: {}", msg);
            ExitCode::from(2)
        }
    }
}
