use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finalg::{Algebra, FiniteAlgebra, Signature};

/// Whether the generators are read as generating a variety or a quasivariety.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Variety,
    Quasivariety,
}

/// Resource limits for the searches behind a procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    /// Largest free-algebra rank explored.
    pub rank_max: usize,
    /// Largest free algebra (in elements) constructed.
    pub size_max: usize,
    /// Wall-clock budget in seconds for one procedure.
    pub time_budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            rank_max: 2,
            size_max: 50_000,
            time_budget: 300,
        }
    }
}

impl Caps {
    pub fn validate(&self) -> Result<()> {
        if self.rank_max == 0 || self.size_max == 0 || self.time_budget == 0 {
            return Err(Error::InvalidData("caps must be positive".into()));
        }
        Ok(())
    }

    /// Deadline for a procedure started now.
    pub fn deadline(&self) -> Instant {
        Instant::now() + Duration::from_secs(self.time_budget)
    }
}

/// A finite list of finite algebras of one signature, read as generating a
/// variety or a quasivariety.
#[derive(Clone, Debug)]
pub struct VarietySpec {
    generators: Vec<FiniteAlgebra>,
    pub mode: Mode,
    pub caps: Caps,
    congruence_distributive: bool,
}

impl VarietySpec {
    /// Validates that `generators` is nonempty with a common signature. The
    /// congruence-distributivity flag is set automatically when the
    /// signature has binary `meet` and `join`.
    pub fn new(generators: Vec<FiniteAlgebra>, mode: Mode) -> Result<Self> {
        let first = generators.first().ok_or_else(|| {
            Error::InvalidData("a variety spec needs at least one generator".into())
        })?;
        let sig = first.signature().clone();
        for g in &generators[1..] {
            if g.signature() != &sig {
                return Err(Error::SignatureMismatch(format!(
                    "generator {} has signature {}, expected {}",
                    g.name().unwrap_or("?"),
                    g.signature(),
                    sig
                )));
            }
        }
        let cd = sig.has("meet", 2) && sig.has("join", 2);
        Ok(VarietySpec {
            generators,
            mode,
            caps: Caps::default(),
            congruence_distributive: cd,
        })
    }

    pub fn variety(generators: Vec<FiniteAlgebra>) -> Result<Self> {
        VarietySpec::new(generators, Mode::Variety)
    }

    pub fn quasivariety(generators: Vec<FiniteAlgebra>) -> Result<Self> {
        VarietySpec::new(generators, Mode::Quasivariety)
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// Asserts (or retracts) congruence distributivity of the generated variety.
    pub fn assert_congruence_distributive(mut self, cd: bool) -> Self {
        self.congruence_distributive = cd;
        self
    }

    pub fn is_congruence_distributive(&self) -> bool {
        self.congruence_distributive
    }

    pub fn generators(&self) -> &[FiniteAlgebra] {
        &self.generators
    }

    pub fn signature(&self) -> &Signature {
        self.generators[0].signature()
    }

    pub fn has_constants(&self) -> bool {
        self.signature().constants().next().is_some()
    }

    /// Whether some generator has more than one element.
    pub fn is_nontrivial(&self) -> bool {
        self.generators.iter().any(|g| g.size() > 1)
    }

    pub fn label(&self) -> String {
        let names: Vec<&str> = self
            .generators
            .iter()
            .map(|g| g.name().unwrap_or("?"))
            .collect();
        format!("{{{}}}", names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn rejects_mixed_signatures() {
        assert!(VarietySpec::variety(vec![catalog::two(), catalog::m3b()]).is_err());
        assert!(VarietySpec::variety(vec![]).is_err());
    }

    #[test]
    fn cd_flag_is_automatic_for_lattice_signatures() {
        assert!(VarietySpec::variety(vec![catalog::m3b()])
            .unwrap()
            .is_congruence_distributive());
        let sig = Signature::from_pairs(&[("f", 1)]);
        let a = FiniteAlgebra::from_fn(None, sig, 2, |_, x| x[0]).unwrap();
        assert!(!VarietySpec::variety(vec![a])
            .unwrap()
            .is_congruence_distributive());
    }

    #[test]
    fn caps_parse_with_defaults() {
        let c: Caps = serde_json::from_str(r#"{"rank_max": 1}"#).unwrap();
        assert_eq!(c.rank_max, 1);
        assert_eq!(c.size_max, Caps::default().size_max);
        assert!(Caps {
            rank_max: 0,
            ..Caps::default()
        }
        .validate()
        .is_err());
    }
}
