use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use veeverify::{error_record, exit_code, parse_rat, render_human, run, CheckName, RunPlan, EXIT_INVALID};
use veeverify_core::families::{Family, FamilySpec};
use veeverify_core::json::{config_from_json, config_to_json};
use veeverify_core::numeric::{DEFAULT_PRECISION, DEFAULT_SAMPLES, DEFAULT_TOL};
use veeverify_core::{Configuration, Error, NumericOptions, Rat};

#[derive(Parser)]
#[command(name = "veeverify", version, about = "Verify the CMS Main Identity and generalised WDVV equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a built-in configuration as canonical JSON
    Generate {
        #[command(flatten)]
        family: FamilyArgs,

        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run checks on a configuration
    Check(CheckArgs),
    /// Print the version
    Version,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// A, B, C, D, BC, G2, A_deformed or C_deformed
    #[arg(long)]
    family: Option<String>,

    #[arg(long)]
    rank: Option<usize>,

    /// Deformation parameter m (A_deformed, C_deformed)
    #[arg(long, value_parser = parse_rat)]
    m: Option<Rat>,

    /// Deformation parameter l (C_deformed)
    #[arg(long, value_parser = parse_rat)]
    l: Option<Rat>,

    /// Orbit multiplicity, e.g. `short=1` or `long=1/2` (repeatable)
    #[arg(long = "mult", value_parser = parse_orbit)]
    mults: Vec<(String, Rat)>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct CheckArgs {
    /// Configuration JSON file, or `-` for stdin
    input: Option<String>,

    #[command(flatten)]
    family: FamilyArgs,

    /// Comma-separated checks to run
    #[arg(long, value_delimiter = ',', conflicts_with = "all")]
    checks: Vec<CheckName>,

    /// Run every check
    #[arg(long)]
    all: bool,

    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,

    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Working precision in bits; 53 uses hardware doubles
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: usize,

    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Include the matrices behind failing or worst-case witnesses
    #[arg(long)]
    emit_witness_matrices: bool,

    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_orbit(s: &str) -> Result<(String, Rat), String> {
    let (orbit, value) = s.split_once('=').ok_or_else(|| format!("expected orbit=rational, got {s:?}"))?;
    Ok((orbit.trim().to_string(), parse_rat(value)?))
}

impl FamilyArgs {
    fn spec(&self) -> Result<Option<FamilySpec>, Error> {
        let Some(name) = &self.family else {
            return Ok(None);
        };
        let family: Family = name.parse()?;
        let rank = self.rank.ok_or_else(|| Error::InvalidParameter("--rank is required with --family".into()))?;
        let mut spec = FamilySpec::new(family, rank);
        match family {
            Family::ADeformed | Family::CDeformed => {
                for (key, value) in [("m", &self.m), ("l", &self.l)] {
                    if let Some(v) = value {
                        spec = spec.with(key, v.clone());
                    }
                }
                if !self.mults.is_empty() {
                    return Err(Error::WrongParameterCount {
                        family: family.name().into(),
                        expected: family.orbits().join(", "),
                    });
                }
            }
            _ => {
                if self.m.is_some() || self.l.is_some() {
                    return Err(Error::WrongParameterCount {
                        family: family.name().into(),
                        expected: family.orbits().join(", "),
                    });
                }
                let mults: BTreeMap<String, Rat> = if self.mults.is_empty() {
                    family.orbits().iter().map(|o| (o.to_string(), Rat::from_integer(1.into()))).collect()
                } else {
                    self.mults.iter().cloned().collect()
                };
                spec.params = mults;
            }
        }
        Ok(Some(spec))
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(args: &CheckArgs) -> Result<Configuration, Error> {
    match (&args.input, args.family.spec()?) {
        (Some(_), Some(_)) => Err(Error::InvalidParameter("give either an input file or --family, not both".into())),
        (None, Some(spec)) => spec.build(),
        (None, None) => Err(Error::InvalidParameter("no input: give a JSON file, `-`, or --family".into())),
        (Some(path), None) => {
            let text = if path == "-" {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Error::InvalidJson(format!("cannot read stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(path).map_err(|e| Error::InvalidJson(format!("cannot read {path}: {e}")))?
            };
            config_from_json(&text)
        }
    }
}

fn check(args: CheckArgs) -> Result<i32, Error> {
    let config = load(&args)?;
    let checks = if args.all { CheckName::ALL.to_vec() } else { args.checks.clone() };
    let options = NumericOptions::default()
        .with_samples(args.samples)
        .with_tol(args.tol)
        .with_seed(args.seed)
        .with_precision(args.precision);
    let plan = RunPlan::new(checks, options)?.with_matrices(args.emit_witness_matrices);
    let report = run(&config, &plan)?;
    let text = match args.format {
        Format::Human => render_human(&report),
        Format::Json => report.to_json() + "\n",
    };
    write_output(&args.out, &text)?;
    Ok(exit_code(&report))
}

fn configure_threads() {
    if let Some(n) = std::env::var("VEEVERIFY_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            // only fails if a pool already exists, which cannot happen this early
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Version => {
            println!("veeverify {}", env!("CARGO_PKG_VERSION"));
            Ok(0)
        }
        Command::Generate { family, out } => family
            .spec()
            .and_then(|s| s.ok_or_else(|| Error::InvalidParameter("--family is required".into())))
            .and_then(|s| s.build())
            .and_then(|c| write_output(&out, &(config_to_json(&c) + "\n")))
            .map(|_| 0),
        Command::Check(args) => check(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", error_record(&e));
            ExitCode::from(EXIT_INVALID as u8)
        }
    }
}
