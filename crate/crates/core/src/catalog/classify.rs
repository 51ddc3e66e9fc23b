use serde::Serialize;

use crate::error::{Error, Result};
use crate::finalg::{
    embedding, Algebra, CompiledQi, Elem, FiniteAlgebra, Homomorphism, QuasiIdentity, Term,
};

use super::s_l;

/// Outcome of checking a family of laws: the first failing law and a
/// counter-assignment, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_law: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Elem>>,
}

impl LawCheck {
    fn ok() -> Self {
        LawCheck {
            holds: true,
            failed_law: None,
            witness: None,
        }
    }

    fn fail(law: impl Into<String>, witness: Option<Vec<Elem>>) -> Self {
        LawCheck {
            holds: false,
            failed_law: Some(law.into()),
            witness,
        }
    }

    pub fn describe(&self) -> String {
        match (&self.failed_law, &self.witness) {
            (None, _) => "holds".to_string(),
            (Some(l), Some(w)) => format!("fails {l} at {w:?}"),
            (Some(l), None) => format!("fails {l}"),
        }
    }

    fn and_then(self, f: impl FnOnce() -> LawCheck) -> LawCheck {
        if self.holds {
            f()
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraKindReport {
    pub bounded_lattice: LawCheck,
    pub distributive: LawCheck,
    pub heyting: LawCheck,
    pub modal: LawCheck,
    pub closure: LawCheck,
    pub monadic: LawCheck,
    pub mckinsey: LawCheck,
    /// Universe `{0, d, ¬d, 1}` of a subalgebra isomorphic to 4, found from
    /// an open `d` with `d < ◇d = 1`.
    pub four_subalgebra: Option<Vec<Elem>>,
    /// An embedding of `S_2`.
    pub s2_embedding: Option<Homomorphism>,
}

const LATTICE_LAWS: &[&str] = &[
    "(= (meet v0 v1) (meet v1 v0))",
    "(= (join v0 v1) (join v1 v0))",
    "(= (meet v0 (meet v1 v2)) (meet (meet v0 v1) v2))",
    "(= (join v0 (join v1 v2)) (join (join v0 v1) v2))",
    "(= (meet v0 (join v0 v1)) v0)",
    "(= (join v0 (meet v0 v1)) v0)",
    "(= (meet v0 zero) zero)",
    "(= (join v0 one) one)",
];
const DISTRIBUTIVE: &[&str] = &["(= (meet v0 (join v1 v2)) (join (meet v0 v1) (meet v0 v2)))"];
const BOOLEAN_MODAL: &[&str] = &[
    "(= (meet v0 (neg v0)) zero)",
    "(= (join v0 (neg v0)) one)",
    "(= (dia zero) zero)",
    "(= (dia (join v0 v1)) (join (dia v0) (dia v1)))",
];
const CLOSURE: &[&str] = &[
    "(= (join v0 (dia v0)) (dia v0))",
    "(= (dia (dia v0)) (dia v0))",
];
const MONADIC: &[&str] = &["(= (dia (box v0)) (box v0))"];
const MCKINSEY: &[&str] = &["(= (mu v0) one)"];

fn check_laws(alg: &FiniteAlgebra, laws: &[&str]) -> LawCheck {
    for src in laws {
        let q = QuasiIdentity::parse(src).expect("built-in law parses");
        match q.compile(alg.signature()) {
            Err(e) => return LawCheck::fail(format!("{src} ({e})"), None),
            Ok(c) => {
                if let Some(w) = CompiledQi::counterexample(&c, alg) {
                    return LawCheck::fail(*src, Some(w));
                }
            }
        }
    }
    LawCheck::ok()
}

/// `a∧c ≤ b ⇔ c ≤ a⇒b` for all `a, b, c`; witness `[a, b, c]`.
fn residuation(alg: &FiniteAlgebra) -> LawCheck {
    let law = "a∧c ≤ b ⇔ c ≤ a⇒b";
    let imp = match Term::parse("(imp v0 v1)").and_then(|t| t.compile(alg.signature())) {
        Ok(t) => t,
        Err(e) => return LawCheck::fail(format!("{law} ({e})"), None),
    };
    let meet = alg
        .signature()
        .lookup("meet")
        .expect("lattice checked first");
    let le = |x: Elem, y: Elem| alg.apply(meet, &[x, y]) == x;
    let mut stack = Vec::new();
    for a in alg.universe() {
        for b in alg.universe() {
            let ab = imp.eval_unchecked(alg, &[a, b], &mut stack);
            for c in alg.universe() {
                if le(alg.apply(meet, &[a, c]), b) != le(c, ab) {
                    return LawCheck::fail(law, Some(vec![a, b, c]));
                }
            }
        }
    }
    LawCheck::ok()
}

fn four_subalgebra(alg: &FiniteAlgebra) -> Option<Vec<Elem>> {
    let sig = alg.signature();
    let (neg, dia) = (sig.lookup("neg")?, sig.lookup("dia")?);
    let one = alg.constant(sig.lookup("one")?);
    let zero = alg.constant(sig.lookup("zero")?);
    let bx = |x: Elem| alg.apply(neg, &[alg.apply(dia, &[alg.apply(neg, &[x])])]);
    let d = alg
        .universe()
        .find(|&d| d != one && bx(d) == d && alg.apply(dia, &[d]) == one)?;
    let mut u = vec![zero, d, alg.apply(neg, &[d]), one];
    u.sort_unstable();
    Some(u)
}

/// Checks which of the lattice, Heyting and modal kinds `alg` belongs to.
/// Requires at least the bounded-lattice symbols `meet join zero one`.
pub fn classify(alg: &FiniteAlgebra) -> Result<AlgebraKindReport> {
    let sig = alg.signature();
    for (s, a) in [("meet", 2), ("join", 2), ("zero", 0), ("one", 0)] {
        if !sig.has(s, a) {
            return Err(Error::SignatureMismatch(format!(
                "classification needs a bounded-lattice reduct; missing {s}/{a}"
            )));
        }
    }
    let bounded_lattice = check_laws(alg, LATTICE_LAWS);
    let distributive = bounded_lattice
        .clone()
        .and_then(|| check_laws(alg, DISTRIBUTIVE));
    let heyting = bounded_lattice.clone().and_then(|| residuation(alg));
    let modal = distributive
        .clone()
        .and_then(|| check_laws(alg, BOOLEAN_MODAL));
    let closure = modal.clone().and_then(|| check_laws(alg, CLOSURE));
    let monadic = closure.clone().and_then(|| check_laws(alg, MONADIC));
    let mckinsey = closure.clone().and_then(|| check_laws(alg, MCKINSEY));
    let (four_subalgebra, s2_embedding) = if closure.holds {
        let s2 = s_l(2)?;
        let emb = if s2.signature() == sig {
            embedding(&s2, alg)?
        } else {
            None
        };
        (four_subalgebra(alg), emb)
    } else {
        (None, None)
    };
    Ok(AlgebraKindReport {
        bounded_lattice,
        distributive,
        heyting,
        modal,
        closure,
        monadic,
        mckinsey,
        four_subalgebra,
        s2_embedding,
    })
}
