//! `asctool`: command-line access to the finite algebra engine and the
//! structural-completeness procedures.

mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use asc_core::variety::{Caps, Mode, VarietySpec};
use asc_core::{catalog, io, Error};

pub use output::Outcome;

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Parser, Debug)]
#[command(
    name = "asctool",
    version,
    about = "Finite algebras, free algebras and structural completeness"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    /// Re-check the certificates of a saved JSON verdict.
    #[arg(long, value_name = "VERDICT")]
    pub verify: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Global {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print the mathematical facts a verdict relies on.
    #[arg(long, global = true)]
    pub cite: bool,
    /// Largest free-algebra rank explored.
    #[arg(long, global = true, env = "ASCTOOL_RANK_MAX", value_parser = positive::<usize>)]
    pub rank_max: Option<usize>,
    /// Largest free algebra constructed, in elements.
    #[arg(long, global = true, env = "ASCTOOL_SIZE_MAX", value_parser = positive::<usize>)]
    pub size_max: Option<usize>,
    /// Wall-clock budget per procedure, in seconds.
    #[arg(long, global = true, env = "ASCTOOL_TIME_BUDGET", value_parser = positive::<u64>)]
    pub time_budget: Option<u64>,
}

fn positive<T: std::str::FromStr + PartialEq + Default>(s: &str) -> Result<T, String> {
    match s.parse::<T>() {
        Ok(v) if v != T::default() => Ok(v),
        Ok(_) => Err("must be positive".into()),
        Err(_) => Err(format!("`{s}` is not a number")),
    }
}

impl Global {
    fn apply(&self, mut caps: Caps) -> Caps {
        if let Some(r) = self.rank_max {
            caps.rank_max = r;
        }
        if let Some(s) = self.size_max {
            caps.size_max = s;
        }
        if let Some(t) = self.time_budget {
            caps.time_budget = t;
        }
        caps
    }

    pub(crate) fn caps(&self) -> Result<Caps, Failure> {
        let caps = self.apply(Caps::default());
        caps.validate()?;
        Ok(caps)
    }

    /// Loads a spec file, or `catalog:<name>[,<name>...]` for catalog
    /// generators in variety mode. Command-line caps override the file's.
    pub(crate) fn spec(&self, src: &str) -> Result<VarietySpec, Failure> {
        let mut spec = match src.strip_prefix("catalog:") {
            Some(names) => {
                let gens = names
                    .split(',')
                    .map(|n| catalog_algebra(n.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                VarietySpec::new(gens, Mode::Variety)?
            }
            None => io::read_spec(&PathBuf::from(src))?,
        };
        spec.caps = self.apply(spec.caps);
        spec.caps.validate()?;
        Ok(spec)
    }
}

pub(crate) fn catalog_algebra(name: &str) -> Result<asc_core::finalg::FiniteAlgebra, Failure> {
    catalog::by_name(name).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown catalog algebra `{name}`; known: {}",
            catalog::NAMES.join(", ")
        ))
    })
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Single algebras: validation, laws, homomorphisms, constructions.
    #[command(subcommand)]
    Alg(commands::alg::AlgCommand),
    /// Congruences.
    #[command(subcommand)]
    Cong(commands::cong::CongCommand),
    /// Varieties and quasivarieties given by a spec file.
    #[command(subcommand)]
    Var(commands::var::VarCommand),
    /// Built-in algebras and poset constructions.
    #[command(subcommand)]
    Catalog(commands::catalog::CatalogCommand),
    /// Structural completeness procedures.
    #[command(subcommand)]
    Asc(commands::asc::AscCommand),
}

/// Why a command did not produce an outcome.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Core(e) if e.is_cap() => 2,
            Failure::Core(_) => EXIT_DATA,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Core(e) if e.is_cap() => format!("INCONCLUSIVE: {e}"),
            Failure::Core(e) => e.to_string(),
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its report. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match (&cli.verify, cli.command) {
        (Some(path), None) => commands::asc::verify_file(path),
        (None, Some(cmd)) => dispatch(cmd, &cli.global),
        (Some(_), Some(_)) => Err(Failure::Usage("--verify takes no subcommand".into())),
        (None, None) => Err(Failure::Usage("missing command; see --help".into())),
    };
    match result {
        Ok(outcome) => {
            let _ = outcome.write(out, &cli.global);
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(err, "asctool: {}", f.message());
            f.exit_code()
        }
    }
}

fn dispatch(cmd: Command, g: &Global) -> Result<Outcome, Failure> {
    match cmd {
        Command::Alg(c) => commands::alg::run(c, g),
        Command::Cong(c) => commands::cong::run(c, g),
        Command::Var(c) => commands::var::run(c, g),
        Command::Catalog(c) => commands::catalog::run(c, g),
        Command::Asc(c) => commands::asc::run(c, g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_caps() {
        assert_eq!(positive::<usize>("3"), Ok(3));
        assert!(positive::<usize>("0").is_err());
        assert!(positive::<u64>("x").is_err());
    }

    #[test]
    fn flags_override_spec_caps() {
        let g = Global {
            rank_max: Some(1),
            ..Global::default()
        };
        let s = g.spec("catalog:s2,four").unwrap();
        assert_eq!(s.generators().len(), 2);
        assert_eq!(s.caps.rank_max, 1);
        assert_eq!(s.caps.size_max, Caps::default().size_max);
        assert!(matches!(g.spec("catalog:zzz"), Err(Failure::Usage(_))));
    }

    #[test]
    fn failure_codes() {
        assert_eq!(Failure::Usage("x".into()).exit_code(), EXIT_USAGE);
        assert_eq!(
            Failure::Core(asc_core::Error::Parse("x".into())).exit_code(),
            EXIT_DATA
        );
        let cap = Failure::Core(asc_core::Error::CapExceeded {
            resource: "rank".into(),
            limit: 1,
            explored: 2,
        });
        assert_eq!(cap.exit_code(), 2);
        assert!(cap.message().starts_with("INCONCLUSIVE"));
    }
}
