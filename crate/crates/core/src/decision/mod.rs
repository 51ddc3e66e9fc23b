//! Decision procedures for (almost) structural completeness and related
//! properties of finitely generated varieties, each returning a verdict with
//! certificates that can be re-checked later.

mod asc;
mod certificate;
mod qi;
mod splitting;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Result;
use crate::io::AlgebraFile;
use crate::variety::{Caps, FreeTower, Mode, VarietySpec};

pub use asc::{asc_check, ascc_membership, sc_check};
pub use certificate::{verify, Certificate, Check};
pub use qi::{classify_qi, QiClass};
pub use splitting::{
    free_decomposition_check, mckinsey_splitting, non_embedding_suite, SUITE_CASES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "HOLDS",
            Status::Fails => "FAILS",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// A variety spec in self-contained form, so certificates can be re-checked
/// without the original files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarietyRecord {
    pub label: String,
    pub generators: Vec<AlgebraFile>,
    pub mode: Mode,
    pub caps: Caps,
}

impl VarietyRecord {
    pub fn of(spec: &VarietySpec) -> Self {
        VarietyRecord {
            label: spec.label(),
            generators: spec
                .generators()
                .iter()
                .map(AlgebraFile::from_algebra)
                .collect(),
            mode: spec.mode,
            caps: spec.caps,
        }
    }

    pub fn to_spec(&self) -> Result<VarietySpec> {
        let gens = self
            .generators
            .iter()
            .map(AlgebraFile::to_algebra)
            .collect::<Result<Vec<_>>>()?;
        Ok(VarietySpec::new(gens, self.mode)?.with_caps(self.caps))
    }
}

/// Ranks and free-algebra sizes reached by a procedure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Explored {
    /// Highest rank whose free algebra was built.
    pub rank: Option<usize>,
    /// Size of `F(k)` by rank; `null` where it was not built.
    pub free_sizes: Vec<Option<usize>>,
}

impl Explored {
    pub(crate) fn of(tower: &FreeTower<'_>) -> Self {
        let free_sizes = tower.sizes();
        let rank = free_sizes.iter().rposition(Option::is_some);
        Explored { rank, free_sizes }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub procedure: String,
    pub status: Status,
    pub summary: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<QiClass>,
    /// Procedure-specific findings, e.g. which side of a biconditional held.
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub facts: Map<String, Value>,
    /// Varieties referenced by index from the certificates.
    pub varieties: Vec<VarietyRecord>,
    pub certificates: Vec<Certificate>,
    pub explored: Explored,
    pub citations: Vec<String>,
}

impl Verdict {
    pub(crate) fn new(procedure: &str, status: Status, summary: impl Into<String>) -> Self {
        Verdict {
            procedure: procedure.to_string(),
            status,
            summary: summary.into(),
            classification: None,
            facts: Map::new(),
            varieties: Vec::new(),
            certificates: Vec::new(),
            explored: Explored::default(),
            citations: Vec::new(),
        }
    }

    pub(crate) fn fact(&mut self, key: &str, value: impl Into<Value>) {
        self.facts.insert(key.to_string(), value.into());
    }

    pub(crate) fn cite(&mut self, c: &str) {
        if !self.citations.iter().any(|x| x == c) {
            self.citations.push(c.to_string());
        }
    }

    /// One-line human rendering: status, procedure and summary.
    pub fn headline(&self) -> String {
        format!(
            "{} {}: {}",
            self.status.as_str(),
            self.procedure,
            self.summary
        )
    }
}

pub(crate) mod cite {
    pub const ASC_CRITERION: &str =
        "finite criterion: under FMP and EDPRC, Q is ASC iff every finite SI S in Q satisfies S ≤ F or S×C ≤ F for a finite simple C ≤ F";
    pub const SC_CRITERION: &str =
        "SC criterion: Q is SC iff every finite SI member of Q is a subalgebra of F";
    pub const SFMP: &str = "FMP together with EDPRC yields the strong finite model property";
    pub const RETRACT: &str =
        "F(0) is a retract of every F(k), so no homomorphism into F(0) means none into F";
    pub const JOIN_IRREDUCIBLE: &str =
        "in a nontrivial variety of bounded lattices, 1 is join-irreducible in F and in its ultrapowers";
    pub const LATTICE_EQUIVALENCE: &str =
        "for bounded lattices: V is SC iff V is ASC iff V satisfies the distributive law";
    pub const ASCC: &str = "ASC core: ASCC(Q) = {A ∈ Q : A×C ∈ Q(F)}";
    pub const ACTIVE_PASSIVE: &str =
        "q is passive when q* = ∀x̄ ¬φ(x̄) holds in F, and active otherwise; passive rules are admissible";
    pub const ADMISSIBLE: &str =
        "a quasi-identity is admissible iff it holds in the free algebra F";
    pub const MCKINSEY: &str = "S_2 ∉ U iff U satisfies the McKinsey identity □◇x → ◇□x ≐ 1";
    pub const SC_MCKINSEY: &str =
        "an ASC variety of closure algebras is SC iff it satisfies the McKinsey identity";
    pub const FREE_DECOMPOSITION: &str =
        "for V = U ∨ W with U McKinsey and W monadic, F_V(k) ≅ F_U(k) × G_W(k), where F_W(k) = 2^d × G_W(k)";
    pub const HEYTING_2SQ: &str = "2² does not embed into the free algebra of V(2²⊕1)";
    pub const CLOSURE_4SQ: &str = "4² does not embed into the free algebra of V(B(2²⊕1), S_2)";
}
