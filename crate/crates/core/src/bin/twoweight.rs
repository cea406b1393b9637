use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twoweight::io::parse_numbers;
use twoweight::pipeline::{
    cmd_build, cmd_certify, cmd_experiment, ConstructionChoice, CorrespondenceSource, Outcome, RunConfig,
    DEFAULT_MAX_BIJECTIONS, DEFAULT_OUT_DIR, DEFAULT_VERTEX_CAP, OUT_DIR_ENV,
};
use twoweight::Result;

/// Two-weight sets in PG(3n-1, q): construct, certify, export.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the selected set(s) and write point files.
    Build(Opts),
    /// Certify the hyperplane spectrum and export the code and graph.
    Certify(Opts),
    /// Run the cone construction over many bijections.
    Experiment(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    Geometric,
    Algebraic,
    Both,
    Lambda,
}

#[derive(Args)]
struct Opts {
    /// Characteristic.
    #[arg(short = 'p')]
    p: u32,
    /// q = p^e.
    #[arg(short = 'e', default_value_t = 1)]
    e: u32,
    #[arg(short = 'n')]
    n: u32,
    /// Primitive modulus of degree 2ne over GF(p), coefficients from the
    /// constant term up, comma separated.
    #[arg(long)]
    modulus: Option<String>,
    #[arg(long, value_enum, default_value = "algebraic")]
    construction: ConstructionArg,
    /// alpha | exhaustive | random:<count>[:<seed>] | <permutation file>
    #[arg(long, default_value = "alpha")]
    correspondence: String,
    /// Certify a point file instead of constructing.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, env = OUT_DIR_ENV, default_value = DEFAULT_OUT_DIR)]
    out: PathBuf,
    /// Worker threads, 0 for all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Largest q^{3n} for which the Cayley graph is built.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    vertex_cap: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_BIJECTIONS)]
    max_bijections: u64,
    /// Largest q^{2n} accepted for field tables.
    #[arg(long, default_value_t = twoweight::field::DEFAULT_TABLE_CAP)]
    table_cap: u64,
}

impl Opts {
    fn config(&self) -> Result<RunConfig> {
        let mut c = RunConfig::new(self.p, self.e, self.n);
        c.modulus = self.modulus.as_deref().map(parse_numbers).transpose()?;
        c.construction = match self.construction {
            ConstructionArg::Geometric => ConstructionChoice::Geometric,
            ConstructionArg::Algebraic => ConstructionChoice::Algebraic,
            ConstructionArg::Both => ConstructionChoice::Both,
            ConstructionArg::Lambda => ConstructionChoice::Lambda,
        };
        c.correspondence = self.correspondence.parse::<CorrespondenceSource>()?;
        c.input = self.input.clone();
        c.out_dir = self.out.clone();
        c.threads = self.threads;
        c.vertex_cap = self.vertex_cap;
        c.max_bijections = self.max_bijections;
        c.table_cap = self.table_cap;
        Ok(c)
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Build(o) => {
            let (report, outcome) = cmd_build(&o.config()?)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(outcome)
        }
        Command::Certify(o) => {
            let cfg = o.config()?;
            let (cert, outcome) = cmd_certify(&cfg)?;
            println!(
                "verdict: {} histogram: {} expected: {:?}",
                serde_json::to_string(&cert.verdict)?.trim_matches('"'),
                serde_json::to_string(&cert.histogram)?,
                cert.expected
            );
            println!("certificate: {}", cfg.out_dir.join("certificate.json").display());
            Ok(outcome)
        }
        Command::Experiment(o) => {
            let (report, outcome) = cmd_experiment(&o.config()?)?;
            println!(
                "bijections: {} two-weight: {} anti-isomorphic: {} (two-weight among them: {})",
                report.bijections, report.two_weight, report.anti_isomorphic, report.anti_isomorphic_two_weight
            );
            for (spectrum, count) in &report.spectra {
                println!("  {count:>6}  {{{spectrum}}}");
            }
            Ok(outcome)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
