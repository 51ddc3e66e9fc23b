use clap::Subcommand;
use serde_json::json;

use asc_core::congruence::{
    all_congruences, is_simple, principal_congruence, subdirect_irreducibility, SiReport,
    DEFAULT_CONGRUENCE_CAP,
};
use asc_core::finalg::{Algebra, Elem};

use super::{load_algebra, yes_no};
use crate::{Failure, Global, Outcome};

#[derive(Subcommand, Debug)]
pub enum CongCommand {
    /// All congruences, as block labels.
    List {
        algebra: String,
        /// Stop after this many congruences.
        #[arg(long, default_value_t = DEFAULT_CONGRUENCE_CAP)]
        cap: usize,
    },
    /// Subdirect irreducibility, with the monolith or two meeting congruences.
    Si { algebra: String },
    /// Whether the only congruences are the trivial ones.
    Simple { algebra: String },
    /// The principal congruence θ(a, b).
    Principal { algebra: String, a: Elem, b: Elem },
}

pub fn run(cmd: CongCommand, _g: &Global) -> Result<Outcome, Failure> {
    match cmd {
        CongCommand::List { algebra, cap } => {
            let a = load_algebra(&algebra)?;
            let lat = all_congruences(&a, cap)?;
            let mut human = vec![format!("{} congruences", lat.len())];
            human.extend(
                lat.congruences
                    .iter()
                    .map(|c| format!("  {:?}", c.blocks())),
            );
            Ok(Outcome::new(
                0,
                human,
                json!({ "count": lat.len(), "congruences": lat.congruences }),
            ))
        }
        CongCommand::Si { algebra } => {
            let a = load_algebra(&algebra)?;
            let r = subdirect_irreducibility(&a)?;
            let (human, value) = match &r {
                SiReport::Irreducible { monolith } => (
                    format!("subdirectly irreducible; monolith {:?}", monolith.blocks()),
                    json!({ "si": true, "monolith": monolith }),
                ),
                SiReport::Reducible { witness } => (
                    format!(
                        "not subdirectly irreducible; {:?} and {:?} meet in the identity",
                        witness.0.blocks(),
                        witness.1.blocks()
                    ),
                    json!({ "si": false, "witness": [&witness.0, &witness.1] }),
                ),
            };
            Ok(Outcome::new(yes_no(r.is_si()), vec![human], value))
        }
        CongCommand::Simple { algebra } => {
            let a = load_algebra(&algebra)?;
            let s = is_simple(&a)?;
            Ok(Outcome::new(
                yes_no(s),
                vec![if s { "simple" } else { "not simple" }.to_string()],
                json!({ "simple": s }),
            ))
        }
        CongCommand::Principal {
            algebra,
            a: x,
            b: y,
        } => {
            let a = load_algebra(&algebra)?;
            a.check_elem(x)?;
            a.check_elem(y)?;
            let c = principal_congruence(&a, x, y)?;
            Ok(Outcome::new(
                0,
                vec![format!(
                    "θ({x}, {y}) = {:?} ({} blocks)",
                    c.blocks(),
                    c.num_blocks()
                )],
                json!({ "congruence": c, "blocks": c.num_blocks(), "size": a.size() }),
            ))
        }
    }
}
