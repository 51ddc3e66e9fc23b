use std::path::PathBuf;

use clap::Subcommand;
use serde::Serialize;
use serde_json::json;

use asc_core::finalg::Algebra;
use asc_core::io::AlgebraFile;
use asc_core::variety::{
    finitely_presented, free_algebra, in_qf, in_quasivariety, in_variety, si_members, unifiable,
    Answer, FinitePresentation, Mode,
};

use super::load_algebra;
use crate::{Failure, Global, Outcome};

/// Largest free algebra written out as a table.
const WRITE_LIMIT: usize = 4096;

#[derive(Subcommand, Debug)]
pub enum VarCommand {
    /// Build the free algebra of rank k.
    Free {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        rank: usize,
        /// Write the tabulated algebra, with its generators, to this file.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Membership in the variety (or quasivariety, per the spec's mode).
    Member {
        #[arg(long)]
        spec: String,
        algebra: String,
    },
    /// Subdirectly irreducible members up to isomorphism.
    SiList {
        #[arg(long)]
        spec: String,
        /// Largest SI member reported; defaults to the largest generator.
        #[arg(long)]
        size_cap: Option<usize>,
    },
    /// The algebra presented by relations over k generators.
    Present {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        rank: usize,
        /// A relation such as `(= (join v0 (neg v0)) one)`; repeatable.
        #[arg(long = "rel", required = true)]
        relations: Vec<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Whether there is a homomorphism from the algebra into the free algebra.
    Unify {
        #[arg(long)]
        spec: String,
        algebra: String,
    },
    /// Membership in the quasivariety generated by the free algebra.
    InQf {
        #[arg(long)]
        spec: String,
        algebra: String,
        /// Highest free-algebra rank searched; defaults to rank_max.
        #[arg(long)]
        rank_cap: Option<usize>,
    },
}

fn answer<Y: Serialize, N: Serialize>(what: &str, a: Answer<Y, N>) -> Outcome {
    let (code, line) = match &a {
        Answer::Yes(_) => (0, format!("{what}: yes")),
        Answer::No(_) => (1, format!("{what}: no")),
        Answer::Inconclusive { reason } => (2, format!("{what}: INCONCLUSIVE ({reason})")),
    };
    Outcome::new(code, vec![line], a)
}

pub fn run(cmd: VarCommand, g: &Global) -> Result<Outcome, Failure> {
    match cmd {
        VarCommand::Free { spec, rank, out } => {
            let spec = g.spec(&spec)?;
            let f = free_algebra(&spec, rank)?;
            let coords: Vec<_> = f
                .coordinates()
                .iter()
                .map(|c| json!({ "generator": c.generator, "assignment": c.assignment, "size": c.algebra.size() }))
                .collect();
            let human = vec![format!(
                "F({rank}) of {} has {} elements over {} coordinate(s); generators {:?}",
                spec.label(),
                f.size(),
                coords.len(),
                f.generators()
            )];
            let summary = json!({
                "rank": rank,
                "size": f.size(),
                "generators": f.generators(),
                "coordinates": coords,
            });
            match out {
                Some(p) => {
                    let file = AlgebraFile::from_algebra(&f.to_finite(WRITE_LIMIT)?)
                        .with_generators(f.generators().to_vec());
                    let mut o = Outcome::algebra_file(file, Some(&p))?;
                    o.human.splice(0..0, human);
                    o.json = summary;
                    Ok(o)
                }
                None => Ok(Outcome::new(0, human, summary)),
            }
        }
        VarCommand::Member { spec, algebra } => {
            let spec = g.spec(&spec)?;
            let a = load_algebra(&algebra)?;
            Ok(match spec.mode {
                Mode::Variety => answer("in V(K)", in_variety(&a, &spec)?),
                Mode::Quasivariety => answer("in Q(K)", in_quasivariety(&a, &spec)?),
            })
        }
        VarCommand::SiList { spec, size_cap } => {
            let spec = g.spec(&spec)?;
            let cap = size_cap.unwrap_or_else(|| {
                spec.generators()
                    .iter()
                    .map(|a| a.size())
                    .max()
                    .unwrap_or(1)
            });
            let members = si_members(&spec, cap)?;
            let human = members
                .iter()
                .map(|m| {
                    format!(
                        "{} ({} elements, from generator {})",
                        m.name, m.size, m.generator
                    )
                })
                .collect();
            Ok(Outcome::new(0, human, json!({ "members": members })))
        }
        VarCommand::Present {
            spec,
            rank,
            relations,
            out,
        } => {
            let spec = g.spec(&spec)?;
            let rels: Vec<&str> = relations.iter().map(String::as_str).collect();
            let pres = FinitePresentation::parse(rank, &rels)?;
            let p = finitely_presented(&spec, &pres)?;
            let file = AlgebraFile::from_algebra(&p.algebra).with_generators(p.generators.clone());
            let mut o = Outcome::algebra_file(file, out.as_deref())?;
            if out.is_some() {
                o.human.insert(
                    0,
                    format!(
                        "presented algebra has {} elements (free algebra {})",
                        p.algebra.size(),
                        p.free_size
                    ),
                );
            }
            Ok(o)
        }
        VarCommand::Unify { spec, algebra } => {
            let spec = g.spec(&spec)?;
            let a = load_algebra(&algebra)?;
            Ok(answer("unifiable", unifiable(&a, &spec)?))
        }
        VarCommand::InQf {
            spec,
            algebra,
            rank_cap,
        } => {
            let spec = g.spec(&spec)?;
            let a = load_algebra(&algebra)?;
            let cap = rank_cap.unwrap_or(spec.caps.rank_max);
            Ok(answer("in Q(F)", in_qf(&a, &spec, cap)?))
        }
    }
}
