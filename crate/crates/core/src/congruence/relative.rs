//! Relative congruences: kernels of homomorphisms into members of a finite
//! class `K` and their intersections. An intersection of kernels into members
//! realizes every quotient lying in `SP(K)`, so products need not be searched.

use std::collections::BTreeSet;

use crate::congruence::{congruence_generated, Congruence};
use crate::error::{Error, Result};
use crate::finalg::{Algebra, Elem, FiniteAlgebra, HomSearch, Homomorphism};

/// Every homomorphism from `alg` into a member of `class`, tagged by member index.
pub fn kernels_into<A: Algebra + ?Sized>(
    alg: &A,
    class: &[FiniteAlgebra],
) -> Result<Vec<(usize, Homomorphism)>> {
    let mut out = Vec::new();
    for (i, b) in class.iter().enumerate() {
        for h in HomSearch::new(alg, b).all()? {
            out.push((i, h));
        }
    }
    Ok(out)
}

/// `θ_K(H)`: intersection of the kernels of all homomorphisms into members of
/// `class` whose kernel contains `pairs`. The empty intersection is the total
/// relation.
pub fn relative_principal<A: Algebra + ?Sized>(
    alg: &A,
    class: &[FiniteAlgebra],
    pairs: &[(Elem, Elem)],
) -> Result<Congruence> {
    for &(a, b) in pairs {
        for e in [a, b] {
            if e as usize >= alg.size() {
                return Err(Error::ElementOutOfRange {
                    elem: e as u64,
                    size: alg.size(),
                });
            }
        }
    }
    let mut acc = Congruence::total(alg.size());
    for (_, h) in kernels_into(alg, class)? {
        if pairs.iter().all(|&(a, b)| h.image(a) == h.image(b)) {
            acc = acc.meet(&Congruence::kernel(&h));
        }
    }
    debug_assert!(congruence_generated(alg, pairs)
        .map(|c| c.le(&acc))
        .unwrap_or(true));
    Ok(acc)
}

/// Result of the relative subdirect irreducibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeSi {
    pub irreducible: bool,
    /// Least non-identity relative congruence, when irreducible.
    pub monolith: Option<Congruence>,
}

/// Relative congruences are the intersections of kernels into members, so the
/// meet of all non-identity relative congruences equals the meet of all
/// non-identity kernels; the algebra is relatively SI iff that meet is not the
/// identity. Requires `alg` to be nontrivial and in `SP(class)`.
pub fn is_relative_si<A: Algebra + ?Sized>(alg: &A, class: &[FiniteAlgebra]) -> Result<RelativeSi> {
    if alg.size() <= 1 {
        return Err(Error::TrivialAlgebra);
    }
    let kernels: BTreeSet<Congruence> = kernels_into(alg, class)?
        .into_iter()
        .map(|(_, h)| Congruence::kernel(&h))
        .collect();
    let separated = kernels
        .iter()
        .fold(Congruence::total(alg.size()), |acc, k| acc.meet(k));
    if !separated.is_identity() {
        return Err(Error::Precondition(
            "algebra is not in the quasivariety generated by the class".into(),
        ));
    }
    let meet = kernels
        .iter()
        .filter(|k| !k.is_identity())
        .fold(Congruence::total(alg.size()), |acc, k| acc.meet(k));
    if meet.is_identity() {
        Ok(RelativeSi {
            irreducible: false,
            monolith: None,
        })
    } else {
        Ok(RelativeSi {
            irreducible: true,
            monolith: Some(meet),
        })
    }
}
