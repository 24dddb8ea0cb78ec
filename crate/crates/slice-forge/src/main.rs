use clap::{Parser, Subcommand};
use std::path::PathBuf;

use slice_forge::cli::{self, RunConfig};

#[derive(Parser)]
#[command(
    name = "sliceforge",
    version,
    about = "Slice regular functions on parameterized quaternionic domains: classification, extension and verification"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonOpts {
    /// Built-in domain name, ball(c,R), or a JSON domain file.
    #[arg(long)]
    domain: Option<String>,
    /// Function spec: inline JSON, a JSON file, or the shorthand x^N.
    #[arg(long = "fn")]
    function: Option<String>,
    /// Cell size override, within [1/64, 1/4].
    #[arg(long)]
    h: Option<f64>,
    /// Latitude sample count override, odd within [33, 513].
    #[arg(long = "n-lat")]
    n_lat: Option<usize>,
    /// Tolerance override for extension consistency.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed of randomized suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonOpts {
    fn config(&self) -> RunConfig {
        RunConfig {
            domain: self.domain.clone(),
            function: self.function.clone(),
            h: self.h,
            n_lat: self.n_lat,
            tol: self.tol,
            seed: self.seed,
            out: self.out.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a domain (speared, slice, spear-simple, S-connected, main sail, hinged).
    Classify {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Classify the eight built-ins and compare against the embedded table.
    Table1 {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run a verification suite: rep, stem, spherical, dbar or differential.
    Verify {
        suite: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Evaluate the global extension at a point [w,x,y,z] of the completion.
    Extend {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Emit a chain certificate between two points [w,x,y,z].
    Chain {
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// List the built-in domain names.
    DomainsList,
}

fn parse_point(s: &str) -> Result<[f64; 4], i32> {
    serde_json::from_str::<[f64; 4]>(s).map_err(|e| {
        eprintln!("cannot parse point `{s}`: {e}");
        2
    })
}

fn main() {
    cli::init_threads();
    let args = Args::parse();
    let code = match args.command {
        Command::Classify { opts } => cli::cmd_classify(&opts.config()),
        Command::Table1 { opts } => cli::cmd_table1(&opts.config()),
        Command::Verify { suite, opts } => cli::cmd_verify(&opts.config(), &suite),
        Command::Extend { point, opts } => match parse_point(&point) {
            Ok(p) => cli::cmd_extend(&opts.config(), p),
            Err(code) => code,
        },
        Command::Chain { from, to, opts } => {
            match (parse_point(&from), parse_point(&to)) {
                (Ok(f), Ok(t)) => cli::cmd_chain(&opts.config(), f, t),
                (Err(code), _) | (_, Err(code)) => code,
            }
        }
        Command::DomainsList => cli::cmd_domains_list(),
    };
    std::process::exit(code);
}
