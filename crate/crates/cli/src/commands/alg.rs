use std::path::PathBuf;

use clap::Subcommand;
use serde_json::json;

use asc_core::catalog::classify;
use asc_core::congruence::congruence_generated;
use asc_core::finalg::{
    check_quasi_identity, direct_decomposition, is_isomorphic, product, quotient, Algebra, Elem,
    HomSearch, QuasiIdentity,
};
use asc_core::io::AlgebraFile;

use super::{load_algebra, yes_no};
use crate::{Failure, Global, Outcome};

#[derive(Subcommand, Debug)]
pub enum AlgCommand {
    /// Parse and validate an algebra file; report which laws it satisfies.
    Validate { algebra: String },
    /// Check an identity, e.g. `(= (meet v0 v1) (meet v1 v0))`.
    CheckId { algebra: String, identity: String },
    /// Check a quasi-identity, e.g. `(qi (vars 1) (prem (= v0 zero)) (concl (= v0 one)))`.
    CheckQi { algebra: String, qi: String },
    /// Search for a homomorphism.
    Hom {
        source: String,
        target: String,
        /// List every homomorphism.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        injective: bool,
        #[arg(long)]
        surjective: bool,
    },
    /// Search for an embedding.
    Embed { source: String, target: String },
    /// Decide isomorphism.
    Iso { left: String, right: String },
    /// Direct product of the given algebras.
    Product {
        #[arg(required = true)]
        factors: Vec<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Quotient by the congruence generated by `--pair a,b` arguments.
    Quotient {
        algebra: String,
        #[arg(long = "pair", value_parser = parse_pair)]
        pairs: Vec<(Elem, Elem)>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Split into directly indecomposable factors.
    Decompose { algebra: String },
}

fn parse_pair(s: &str) -> Result<(Elem, Elem), String> {
    let (a, b) = s.split_once(',').ok_or("expected a,b")?;
    let p = |x: &str| x.trim().parse::<Elem>().map_err(|e| e.to_string());
    Ok((p(a)?, p(b)?))
}

pub fn run(cmd: AlgCommand, _g: &Global) -> Result<Outcome, Failure> {
    match cmd {
        AlgCommand::Validate { algebra } => {
            let a = load_algebra(&algebra)?;
            let mut human = vec![format!(
                "valid: {} with {} elements, signature {}",
                a.name().unwrap_or("algebra"),
                a.size(),
                a.signature()
            )];
            let report = classify(&a).ok();
            if let Some(r) = &report {
                for (law, c) in [
                    ("bounded lattice", &r.bounded_lattice),
                    ("distributive", &r.distributive),
                    ("Heyting", &r.heyting),
                    ("modal", &r.modal),
                    ("closure", &r.closure),
                    ("monadic", &r.monadic),
                    ("McKinsey", &r.mckinsey),
                ] {
                    human.push(format!("  {law}: {}", c.describe()));
                }
            }
            Ok(Outcome::new(
                0,
                human,
                json!({ "valid": true, "size": a.size(), "name": a.name(), "kinds": report }),
            ))
        }
        AlgCommand::CheckId { algebra, identity } => {
            let q = QuasiIdentity::parse(&identity)?;
            if !q.is_identity() {
                return Err(Failure::Usage(
                    "check-id expects an identity; use check-qi".into(),
                ));
            }
            check(&algebra, &q)
        }
        AlgCommand::CheckQi { algebra, qi } => check(&algebra, &QuasiIdentity::parse(&qi)?),
        AlgCommand::Hom {
            source,
            target,
            all,
            injective,
            surjective,
        } => {
            let (a, b) = (load_algebra(&source)?, load_algebra(&target)?);
            let mut search = HomSearch::new(&a, &b);
            if injective {
                search = search.injective();
            }
            if surjective {
                search = search.surjective();
            }
            let found = if all {
                search.all()?
            } else {
                search.first()?.into_iter().collect()
            };
            let human = if found.is_empty() {
                vec!["no homomorphism".to_string()]
            } else {
                found.iter().map(|h| format!("{:?}", h.map)).collect()
            };
            let maps: Vec<&Vec<Elem>> = found.iter().map(|h| &h.map).collect();
            Ok(Outcome::new(
                yes_no(!found.is_empty()),
                human,
                json!({ "homomorphisms": maps }),
            ))
        }
        AlgCommand::Embed { source, target } => {
            let (a, b) = (load_algebra(&source)?, load_algebra(&target)?);
            let h = HomSearch::new(&a, &b).injective().first()?;
            let human = vec![match &h {
                Some(h) => format!("embedding {:?}", h.map),
                None => "no embedding".to_string(),
            }];
            Ok(Outcome::new(
                yes_no(h.is_some()),
                human,
                json!({ "embedding": h.map(|h| h.map) }),
            ))
        }
        AlgCommand::Iso { left, right } => {
            let (a, b) = (load_algebra(&left)?, load_algebra(&right)?);
            let h = is_isomorphic(&a, &b)?;
            let human = vec![match &h {
                Some(h) => format!("isomorphic via {:?}", h.map),
                None => "not isomorphic".to_string(),
            }];
            Ok(Outcome::new(
                yes_no(h.is_some()),
                human,
                json!({ "isomorphism": h.map(|h| h.map) }),
            ))
        }
        AlgCommand::Product { factors, out } => {
            let algs = factors
                .iter()
                .map(|f| load_algebra(f))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<_> = algs.iter().collect();
            let p = product(algs[0].signature(), &refs)?;
            Outcome::algebra(&p.algebra, out.as_deref())
        }
        AlgCommand::Quotient {
            algebra,
            pairs,
            out,
        } => {
            let a = load_algebra(&algebra)?;
            for &(x, y) in &pairs {
                a.check_elem(x)?;
                a.check_elem(y)?;
            }
            let theta = congruence_generated(&a, &pairs)?;
            Outcome::algebra(&quotient(&a, &theta)?.algebra, out.as_deref())
        }
        AlgCommand::Decompose { algebra } => {
            let a = load_algebra(&algebra)?;
            let d = direct_decomposition(&a)?;
            let sizes: Vec<usize> = d.factors.iter().map(|f| f.size()).collect();
            let human = vec![if d.is_indecomposable() {
                format!("directly indecomposable ({} elements)", a.size())
            } else {
                format!(
                    "{} factors of sizes {}",
                    sizes.len(),
                    sizes
                        .iter()
                        .map(|s| s.to_string())
                        .collect::<Vec<_>>()
                        .join(" × ")
                )
            }];
            let files: Vec<AlgebraFile> = d.factors.iter().map(AlgebraFile::from_algebra).collect();
            Ok(Outcome::new(
                0,
                human,
                json!({ "factor_sizes": sizes, "factors": files, "iso": d.iso.map }),
            ))
        }
    }
}

fn check(algebra: &str, q: &QuasiIdentity) -> Result<Outcome, Failure> {
    let a = load_algebra(algebra)?;
    let cex = check_quasi_identity(&a, q)?;
    let human = vec![match &cex {
        None => format!("holds: {q}"),
        Some(asg) => format!("fails: {q} at {asg:?}"),
    }];
    Ok(Outcome::new(
        yes_no(cex.is_none()),
        human,
        json!({ "holds": cex.is_none(), "counterexample": cex }),
    ))
}
