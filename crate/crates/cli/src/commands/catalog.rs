use std::path::{Path, PathBuf};

use clap::Subcommand;
use serde_json::json;

use asc_core::catalog::{self, classify, lev_poset, Poset};
use asc_core::finalg::Algebra;
use asc_core::io;

use super::load_algebra;
use crate::{catalog_algebra, Failure, Global, Outcome};

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    /// Names of the built-in algebras.
    List,
    /// The poset of proper subsets of an n-set, ordered by inclusion.
    PosetLev {
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Heyting algebra of up-sets of a poset file.
    Upset {
        poset: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Complex closure algebra of a poset file.
    Complex {
        poset: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Heyting algebra of open elements of a closure algebra.
    Open {
        algebra: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// The monadic algebra S_l with l atoms.
    S {
        l: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Which laws an algebra satisfies, with witnesses.
    Classify { algebra: String },
    /// `catalog <name> [-o FILE]` emits a built-in algebra.
    #[command(external_subcommand)]
    Named(Vec<String>),
}

fn poset_outcome(p: &Poset, out: Option<&Path>) -> Result<Outcome, Failure> {
    let text = io::to_json(p);
    match out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n")).map_err(|e| {
                Failure::Core(asc_core::Error::Io(format!("{}: {e}", path.display())))
            })?;
            Ok(Outcome::new(
                0,
                vec![format!("wrote {} ({} points)", path.display(), p.size())],
                json!({ "written": path.display().to_string(), "size": p.size() }),
            ))
        }
        None => Ok(Outcome::new(0, vec![text], p)),
    }
}

pub fn run(cmd: CatalogCommand, _g: &Global) -> Result<Outcome, Failure> {
    match cmd {
        CatalogCommand::List => {
            let human = catalog::NAMES
                .iter()
                .map(|n| {
                    let a = catalog::by_name(n).expect("catalog names resolve");
                    format!("{n}: {} ({} elements)", a.name().unwrap_or(n), a.size())
                })
                .collect();
            Ok(Outcome::new(0, human, json!({ "names": catalog::NAMES })))
        }
        CatalogCommand::PosetLev { n, out } => poset_outcome(&lev_poset(n)?, out.as_deref()),
        CatalogCommand::Upset { poset, out } => Outcome::algebra(
            &catalog::upset_heyting(&io::read_poset(&poset)?)?,
            out.as_deref(),
        ),
        CatalogCommand::Complex { poset, out } => Outcome::algebra(
            &catalog::complex_closure(&io::read_poset(&poset)?)?,
            out.as_deref(),
        ),
        CatalogCommand::Open { algebra, out } => Outcome::algebra(
            &catalog::open_heyting(&load_algebra(&algebra)?)?,
            out.as_deref(),
        ),
        CatalogCommand::S { l, out } => Outcome::algebra(&catalog::s_l(l)?, out.as_deref()),
        CatalogCommand::Classify { algebra } => {
            let a = load_algebra(&algebra)?;
            let r = classify(&a)?;
            let mut human = Vec::new();
            for (law, c) in [
                ("bounded lattice", &r.bounded_lattice),
                ("distributive", &r.distributive),
                ("Heyting", &r.heyting),
                ("modal", &r.modal),
                ("closure", &r.closure),
                ("monadic", &r.monadic),
                ("McKinsey", &r.mckinsey),
            ] {
                human.push(format!("{law}: {}", c.describe()));
            }
            if let Some(u) = &r.four_subalgebra {
                human.push(format!("subalgebra isomorphic to 4 on {u:?}"));
            }
            if let Some(h) = &r.s2_embedding {
                human.push(format!("S_2 embeds via {:?}", h.map));
            }
            Ok(Outcome::new(0, human, &r))
        }
        CatalogCommand::Named(args) => {
            let (name, rest) = args
                .split_first()
                .ok_or_else(|| Failure::Usage("missing name".into()))?;
            let out = match rest {
                [] => None,
                [flag, path] if flag == "-o" || flag == "--out" => Some(PathBuf::from(path)),
                _ => return Err(Failure::Usage(format!("usage: catalog {name} [-o FILE]"))),
            };
            Outcome::algebra(&catalog_algebra(name)?, out.as_deref())
        }
    }
}
