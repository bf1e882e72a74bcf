//! `toralmap`: homomorphism classes, mapping-space components and nerve
//! checks for finite groups mapping into 1-truncated compact Lie groups.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use toralmap::group::FiniteGroup;
use toralmap::mapping::HomClassifier;
use toralmap::nerve::{nerve_check, retract_check, NerveCheckOptions};
use toralmap::random::{DEFAULT_MAX_DENOMINATOR, DEFAULT_SAMPLES, DEFAULT_SEED};
use toralmap::report::{checks_text, cohomology, fixed_points, hom_report, oracle_map_report, to_json};
use toralmap::toral::ToralGroup;
use toralmap::{defs, Error, Limits, Result};

#[derive(Parser)]
#[command(name = "toralmap", version, about = "Maps from finite groups into toral Lie groups, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Finite source group: `catalog:NAME` or a JSON/TOML definition file.
    #[arg(long)]
    source: Option<String>,
    /// Target group: `catalog:NAME` or a JSON/TOML definition file.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Denominator bound for sampling and for the oracle grid.
    #[arg(long)]
    max_denominator: Option<u32>,
    /// Overrides the group-size limits.
    #[arg(long)]
    size_cap: Option<usize>,
    /// Highest simplicial level or cohomological degree.
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check the crossed-module axioms of the target.
    Validate(Common),
    /// Conjugacy classes of homomorphisms with their centralizers.
    Hom(Common),
    /// Components and homotopy groups of the based and unbased mapping spaces.
    MapSpace(Common),
    /// One mapping-space report per subgroup class, with restriction checks.
    FixedPoints(Common),
    /// Cohomology of the source with coefficients pulled back from the target.
    Cohomology(Common),
    /// Matching maps, coordinates and simplicial identities of the nerve.
    NerveCheck(Common),
    /// Deformation retraction of random cocycle pairs.
    RetractDemo(Common),
    /// Brute-force classification over a torsion grid.
    Oracle(Common),
}

struct Output {
    json: String,
    text: String,
    passed: bool,
}

fn output<T: Serialize>(value: &T, text: String, passed: bool) -> Result<Output> {
    Ok(Output { json: to_json(value)?, text, passed })
}

impl Common {
    fn limits(&self) -> Limits {
        match self.size_cap {
            Some(cap) => Limits::default().with_size_cap(cap),
            None => Limits::default(),
        }
    }

    fn source(&self, limits: &Limits) -> Result<Arc<FiniteGroup>> {
        let s = self.source.as_deref().ok_or_else(|| Error::InvalidOption("--source is required".into()))?;
        Ok(Arc::new(defs::load_finite(s, limits)?))
    }

    fn source_or(&self, default: &str, limits: &Limits) -> Result<Arc<FiniteGroup>> {
        Ok(Arc::new(defs::load_finite(self.source.as_deref().unwrap_or(default), limits)?))
    }

    fn target(&self, limits: &Limits) -> Result<Arc<ToralGroup>> {
        let t = self.target.as_deref().ok_or_else(|| Error::InvalidOption("--target is required".into()))?;
        Ok(Arc::new(defs::load_toral(t, limits)?))
    }

    fn source_name(&self) -> Option<&str> {
        self.source.as_deref().map(|s| s.strip_prefix("catalog:").unwrap_or(s))
    }
}

fn run(command: &Command) -> Result<(Output, Format)> {
    let (c, out) = match command {
        Command::Validate(c) => {
            let limits = c.limits();
            if c.source.is_some() {
                c.source(&limits)?;
            }
            let h = c.target(&limits)?;
            let r = h.check_crossed_module(c.max_denominator.unwrap_or(4));
            (c, output(&r, checks_text("crossed-module axioms", r.passed, &r.checks), r.passed)?)
        }
        Command::Hom(c) | Command::MapSpace(c) => {
            let limits = c.limits();
            let r = hom_report(&c.source(&limits)?, &c.target(&limits)?, c.source_name(), &limits)?;
            (c, output(&r, r.to_string(), true)?)
        }
        Command::FixedPoints(c) => {
            let limits = c.limits();
            let r = fixed_points(&c.source(&limits)?, &c.target(&limits)?, &limits)?;
            let ok = r.restriction.failures.is_empty();
            (c, output(&r, r.to_string(), ok)?)
        }
        Command::Cohomology(c) => {
            let limits = c.limits();
            let h = match &c.target {
                Some(_) => c.target(&limits)?,
                None => Arc::new(ToralGroup::torus(1)),
            };
            let r = cohomology(&c.source(&limits)?, &h, c.levels.unwrap_or(3), &limits)?;
            (c, output(&r, r.to_string(), true)?)
        }
        Command::NerveCheck(c) => {
            let limits = c.limits();
            let opts = NerveCheckOptions {
                levels: c.levels.unwrap_or(5),
                samples: c.samples,
                seed: c.seed,
                max_denominator: c.max_denominator.unwrap_or(DEFAULT_MAX_DENOMINATOR),
            };
            let r = nerve_check(&c.target(&limits)?, &*c.source_or("S3", &limits)?, &opts)?;
            (c, output(&r, checks_text("nerve checks", r.passed, &r.checks), r.passed)?)
        }
        Command::RetractDemo(c) => {
            let limits = c.limits();
            let (g, h) = (c.source(&limits)?, c.target(&limits)?);
            let homs = HomClassifier::new(g, h, &limits)?.class_representatives()?;
            let den = c.max_denominator.unwrap_or(DEFAULT_MAX_DENOMINATOR);
            let r = retract_check(&homs, c.samples, c.seed, den)?;
            (c, output(&r, checks_text("deformation retraction", r.passed, &r.checks), r.passed)?)
        }
        Command::Oracle(c) => {
            let limits = c.limits();
            let n = u64::from(c.max_denominator.unwrap_or(16));
            let r = oracle_map_report(&c.source(&limits)?, &c.target(&limits)?, n, c.source_name(), &limits)?;
            (c, output(&r, r.to_string(), true)?)
        }
    };
    Ok((out, c.format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok((out, format)) => {
            match format {
                Format::Json => println!("{}", out.json),
                Format::Text => println!("{}", out.text),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
