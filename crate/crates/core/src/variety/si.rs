use serde::Serialize;

use crate::congruence::{
    all_congruences, is_relative_si, is_subdirectly_irreducible, DEFAULT_CONGRUENCE_CAP,
};
use crate::error::{Error, Result};
use crate::finalg::{
    all_subuniverses, fingerprint, is_isomorphic, quotient, restrict, Algebra, FiniteAlgebra,
};

use super::spec::{Mode, VarietySpec};

const SUBUNIVERSE_CAP: usize = 4096;

/// A subdirectly irreducible member together with where it was found.
#[derive(Clone, Debug, Serialize)]
pub struct SiMember {
    #[serde(skip)]
    pub algebra: FiniteAlgebra,
    pub name: String,
    pub size: usize,
    /// Index of the generator it was obtained from.
    pub generator: usize,
    /// Whether it is isomorphic to that generator.
    pub is_generator: bool,
}

fn push_unique(
    found: &mut Vec<(FiniteAlgebra, usize)>,
    alg: FiniteAlgebra,
    from: usize,
) -> Result<()> {
    let fp = fingerprint(&alg);
    for (other, _) in found.iter() {
        if fingerprint(other) == fp && is_isomorphic(other, &alg)?.is_some() {
            return Ok(());
        }
    }
    found.push((alg, from));
    Ok(())
}

/// Subdirectly irreducible members up to isomorphism with at most `size_cap`
/// elements. In variety mode these are the SI algebras in `HS(K)`, which by
/// Jónsson's lemma are all of them when the variety is congruence
/// distributive; the procedure refuses without that assertion. In
/// quasivariety mode these are the relatively SI subalgebras of members.
/// Sorted by size, then table contents.
pub fn si_members(spec: &VarietySpec, size_cap: usize) -> Result<Vec<SiMember>> {
    if spec.mode == Mode::Variety && !spec.is_congruence_distributive() {
        return Err(Error::Precondition(
            "SI enumeration over HS(K) needs a congruence-distributive variety; assert it explicitly".into(),
        ));
    }
    let mut found: Vec<(FiniteAlgebra, usize)> = Vec::new();
    for (j, b) in spec.generators().iter().enumerate() {
        for u in all_subuniverses(b, SUBUNIVERSE_CAP)? {
            let sub = restrict(b, u, None)?.algebra;
            if sub.size() <= 1 {
                continue;
            }
            match spec.mode {
                Mode::Variety => {
                    for theta in all_congruences(&sub, DEFAULT_CONGRUENCE_CAP)?.congruences {
                        let m = theta.num_blocks();
                        if m <= 1 || m > size_cap {
                            continue;
                        }
                        let q = quotient(&sub, &theta)?.algebra;
                        if is_subdirectly_irreducible(&q)?.is_some() {
                            push_unique(&mut found, q, j)?;
                        }
                    }
                }
                Mode::Quasivariety => {
                    if sub.size() <= size_cap
                        && is_relative_si(&sub, spec.generators())?.irreducible
                    {
                        push_unique(&mut found, sub, j)?;
                    }
                }
            }
        }
    }
    found.sort_by_key(|(a, _)| (a.size(), a.table_bytes()));
    let mut out = Vec::with_capacity(found.len());
    for (i, (alg, j)) in found.into_iter().enumerate() {
        let gen = &spec.generators()[j];
        let is_generator = gen.size() == alg.size() && is_isomorphic(gen, &alg)?.is_some();
        let name = if is_generator {
            gen.name().unwrap_or("?").to_string()
        } else if alg.size() == 2 {
            "2".to_string()
        } else {
            format!("SI{i}[{}]", alg.size())
        };
        out.push(SiMember {
            algebra: alg.clone().with_name(name.clone()),
            name,
            size: alg.size(),
            generator: j,
            is_generator,
        });
    }
    Ok(out)
}
