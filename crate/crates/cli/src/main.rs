use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rough_core::document::{parse_space_document, SpaceDocument};
use rough_core::verify::{run_suite, SuiteConfig};
use rough_core::{ApproximationSpace, CdfMode, Error, Event};

mod render;

const EXIT_INPUT: u8 = 2;
const EXIT_UNKNOWN_NAME: u8 = 3;
const EXIT_IDENTITY: u8 = 4;
const EXIT_COUNTEREXAMPLE: u8 = 5;

#[derive(Parser)]
#[command(name = "rough", version, about = "Exact lower/upper probability on finite approximation spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower and upper inverse of an event, exactness, and its rough probability.
    Approx {
        file: PathBuf,
        /// A named event from the document, or a comma-separated label list.
        #[arg(long, allow_hyphen_values = true)]
        event: String,
        /// Also print the conditional lower/upper probability given this event.
        #[arg(long)]
        given: Option<String>,
    },
    /// Singleton table, distribution function, expectation and variance of a variable.
    Report {
        file: PathBuf,
        #[arg(long)]
        variable: String,
        #[arg(long, default_value = "singleton-sum")]
        cdf_mode: CdfMode,
    },
    /// Check every law on all set-valued maps of small universes.
    Verify {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        /// Seeds for the extra random measures, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        seeds: Vec<u64>,
        /// Random integer variables per space besides the identity.
        #[arg(long, default_value_t = 2)]
        variables: usize,
        /// Count the cover reading of the lower total-probability law as a law.
        #[arg(long)]
        include_cover_variant: bool,
        /// Allow universes of four elements (50625 maps).
        #[arg(long)]
        allow_large: bool,
        /// Run on one thread.
        #[arg(long)]
        serial: bool,
        /// Print the full report as JSON instead of the summary table.
        #[arg(long)]
        json: bool,
        /// Append per-law timings to the summary (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Approx { file, event, given } => approx(&file, &event, given.as_deref()),
        Command::Report { file, variable, cdf_mode } => report(&file, &variable, cdf_mode),
        Command::Verify { n_max, seeds, variables, include_cover_variant, allow_large, serial, json, timing } => {
            let config = SuiteConfig {
                n_max,
                seeds,
                variables_per_space: variables,
                include_cover_variant,
                allow_large,
                parallel: !serial,
                ..SuiteConfig::default()
            };
            verify(&config, json, timing)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn load(file: &Path) -> Result<(SpaceDocument, ApproximationSpace), Failure> {
    let text =
        std::fs::read(file).map_err(|e| Failure::new(EXIT_INPUT, format!("cannot read {}: {e}", file.display())))?;
    let doc = parse_space_document(&text).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", file.display())))?;
    let space = doc.space().map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?;
    Ok((doc, space))
}

fn resolve_event(doc: &SpaceDocument, space: &ApproximationSpace, name: &str) -> Result<Event, Failure> {
    if let Some(event) = doc.event(space, name).map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))? {
        return Ok(event);
    }
    space.parse_event(name).map_err(|e| match e {
        Error::UnknownLabel(label) => {
            Failure::new(EXIT_UNKNOWN_NAME, format!("`{label}` is neither a named event nor an element"))
        }
        other => Failure::new(EXIT_INPUT, other.to_string()),
    })
}

fn approx(file: &Path, event: &str, given: Option<&str>) -> Result<(), Failure> {
    let (doc, space) = load(file)?;
    let event = resolve_event(&doc, &space, event)?;
    let given = given.map(|g| resolve_event(&doc, &space, g)).transpose()?;
    print!("{}", render::approx(&space, &event, given.as_ref()));
    Ok(())
}

fn report(file: &Path, name: &str, mode: CdfMode) -> Result<(), Failure> {
    let (doc, space) = load(file)?;
    let variable = doc
        .variable(&space, name)
        .map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?
        .ok_or_else(|| Failure::new(EXIT_UNKNOWN_NAME, format!("no variable named `{name}`")))?;
    let direct = variable.variance_direct();
    let formula = variable.variance_formula();
    if direct != formula {
        return Err(Failure::new(
            EXIT_IDENTITY,
            format!("variance identity violated: direct {direct}, closed form {formula}"),
        ));
    }
    print!("{}", render::variable_report(name, &variable, mode));
    Ok(())
}

fn verify(config: &SuiteConfig, json: bool, timing: bool) -> Result<(), Failure> {
    let report = run_suite(config).map_err(|e| match e {
        Error::DomainTooLarge(..) => {
            Failure::new(EXIT_INPUT, format!("{e}; pass --allow-large to sweep four-element universes"))
        }
        other => Failure::new(EXIT_INPUT, other.to_string()),
    })?;
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text(timing));
    }

    let missed: Vec<_> = report.missed_controls().map(|r| r.law.code()).collect();
    if !missed.is_empty() {
        return Err(Failure::new(
            EXIT_IDENTITY,
            format!("negative controls found no counterexample: {}", missed.join(", ")),
        ));
    }
    let violated: Vec<_> = report.violations().collect();
    if violated.is_empty() {
        return Ok(());
    }
    if !json {
        println!();
        println!("counterexamples:");
        for r in &violated {
            println!("{}", render::counterexamples_json(r));
        }
    }
    let codes: Vec<_> = violated.iter().map(|r| r.law.code()).collect();
    Err(Failure::new(EXIT_COUNTEREXAMPLE, format!("laws with counterexamples: {}", codes.join(", "))))
}
