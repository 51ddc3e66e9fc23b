use std::path::{Path, PathBuf};

use clap::Subcommand;
use serde_json::json;

use asc_core::decision::{
    asc_check, ascc_membership, classify_qi, free_decomposition_check, mckinsey_splitting,
    non_embedding_suite, sc_check, verify, Verdict, SUITE_CASES,
};
use asc_core::finalg::QuasiIdentity;
use asc_core::Error;

use super::load_algebra;
use crate::{Failure, Global, Outcome};

#[derive(Subcommand, Debug)]
pub enum AscCommand {
    /// Almost structural completeness.
    Check {
        #[arg(long)]
        spec: String,
    },
    /// Structural completeness.
    ScCheck {
        #[arg(long)]
        spec: String,
    },
    /// Classify a quasi-identity as valid, passive, active or not admissible.
    Classify {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        qi: String,
    },
    /// Membership of an algebra in the ASC core.
    Ascc {
        #[arg(long)]
        spec: String,
        algebra: String,
    },
    /// The McKinsey identity against the presence of S_2.
    Splitting {
        #[arg(long)]
        spec: String,
        /// Also run the ASC and SC checks and compare SC with McKinsey.
        #[arg(long)]
        with_asc: bool,
    },
    /// F_V(k) against F_U(k) × G_W(k).
    FreeDecomp {
        /// Generators of the McKinsey part U.
        #[arg(long, num_args = 1.., required = true)]
        mckinsey: Vec<String>,
        /// Generators of the monadic part W.
        #[arg(long, num_args = 1.., required = true)]
        monadic: Vec<String>,
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    /// Bounded search for embeddings that should not exist.
    NonEmbed {
        #[arg(value_parser = suite_names())]
        case: String,
    },
    /// Re-check the certificates of a saved JSON verdict.
    Verify { verdict: PathBuf },
}

fn suite_names() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(SUITE_CASES.iter().map(|(n, _)| *n))
}

pub fn run(cmd: AscCommand, g: &Global) -> Result<Outcome, Failure> {
    let verdict = match cmd {
        AscCommand::Check { spec } => asc_check(&g.spec(&spec)?)?,
        AscCommand::ScCheck { spec } => sc_check(&g.spec(&spec)?)?,
        AscCommand::Classify { spec, qi } => {
            classify_qi(&QuasiIdentity::parse(&qi)?, &g.spec(&spec)?)?
        }
        AscCommand::Ascc { spec, algebra } => {
            ascc_membership(&load_algebra(&algebra)?, &g.spec(&spec)?)?
        }
        AscCommand::Splitting { spec, with_asc } => mckinsey_splitting(&g.spec(&spec)?, with_asc)?,
        AscCommand::FreeDecomp {
            mckinsey,
            monadic,
            rank,
        } => {
            let load = |v: &[String]| {
                v.iter()
                    .map(|s| load_algebra(s))
                    .collect::<Result<Vec<_>, _>>()
            };
            free_decomposition_check(load(&mckinsey)?, load(&monadic)?, rank, g.caps()?)?
        }
        AscCommand::NonEmbed { case } => non_embedding_suite(&case, g.caps()?)?,
        AscCommand::Verify { verdict } => return verify_file(&verdict),
    };
    Ok(Outcome::verdict(&verdict))
}

pub fn verify_file(path: &Path) -> Result<Outcome, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let verdict: Verdict =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("verdict file: {e}")))?;
    let checks = verify(&verdict)?;
    let ok = checks.iter().all(|c| c.ok);
    let mut human = vec![format!(
        "{} {} verdict {}: {} certificate(s) {}",
        if ok { "VERIFIED" } else { "REJECTED" },
        verdict.procedure,
        verdict.status.as_str(),
        checks.len(),
        if ok { "re-checked" } else { "with failures" }
    )];
    human.extend(checks.iter().map(|c| {
        format!(
            "  {} {}: {}",
            if c.ok { "ok" } else { "FAILED" },
            c.kind,
            c.note
        )
    }));
    Ok(Outcome::new(
        if ok { 0 } else { 1 },
        human,
        json!({ "verified": ok, "status": verdict.status, "checks": checks }),
    ))
}
