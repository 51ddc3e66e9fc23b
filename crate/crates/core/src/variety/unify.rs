use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finalg::{Algebra, Elem, FiniteAlgebra, HomSearch, Homomorphism};

use super::free::FreeTower;
use super::membership::{Answer, Separator};
use super::spec::VarietySpec;

/// A homomorphism from a finite algebra into `F(rank)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Unifier {
    pub rank: usize,
    pub map: Homomorphism,
}

/// Why no homomorphism into the free algebra exists: there is none into
/// `F(0)`, and `F(0)` is a retract of every `F(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoHomToRetract {
    pub f0_size: usize,
}

/// Unifiability of a finite algebra `P`: a homomorphism `P -> F`. With
/// constants, `F(0)` is a retract of `F`, so this is decided by a search
/// into `F(0)`; otherwise ranks `1..=rank_max` are searched.
pub fn unifiable(p: &FiniteAlgebra, spec: &VarietySpec) -> Result<Answer<Unifier, NoHomToRetract>> {
    let mut tower = FreeTower::new(spec, Some(spec.caps.deadline()));
    unifiable_in(p, &mut tower)
}

pub fn unifiable_in(
    p: &FiniteAlgebra,
    tower: &mut FreeTower<'_>,
) -> Result<Answer<Unifier, NoHomToRetract>> {
    let spec = tower.spec().clone();
    if p.signature() != spec.signature() {
        return Err(Error::SignatureMismatch(
            "algebra and spec differ in signature".into(),
        ));
    }
    let deadline = tower.deadline();
    if spec.has_constants() {
        let f0 = match tower.get(0) {
            Ok(f) => f,
            Err(e) => return Answer::from_cap(e),
        };
        return Ok(match hom_into(p, f0, deadline) {
            Ok(Some(map)) => Answer::Yes(Unifier { rank: 0, map }),
            Ok(None) => Answer::No(NoHomToRetract { f0_size: f0.size() }),
            Err(e) => return Answer::from_cap(e),
        });
    }
    let mut last = String::from("no rank explored");
    for k in 1..=spec.caps.rank_max {
        let f = match tower.get(k) {
            Ok(f) => f,
            Err(e) if e.is_cap() => {
                last = e.to_string();
                break;
            }
            Err(e) => return Err(e),
        };
        match hom_into(p, f, deadline) {
            Ok(Some(map)) => return Ok(Answer::Yes(Unifier { rank: k, map })),
            Ok(None) => last = format!("no homomorphism into F(k) for k ≤ {k}"),
            Err(e) if e.is_cap() => {
                last = e.to_string();
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Answer::Inconclusive { reason: last })
}

fn hom_into<T: Algebra + ?Sized>(
    p: &FiniteAlgebra,
    f: &T,
    deadline: Option<Instant>,
) -> Result<Option<Homomorphism>> {
    HomSearch::new(p, f).deadline(deadline).first()
}

/// Evidence that `A ∈ Q(F)`: homomorphisms into free algebras that separate
/// all elements (a single embedding when one exists).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QfWitness {
    /// `(rank, map)` pairs.
    pub homs: Vec<(usize, Homomorphism)>,
}

/// Largest number of homomorphisms enumerated per rank when looking for a
/// separating family.
const ENUMERATION_LIMIT: usize = 200_000;

/// `A ∈ Q(F)` up to rank `rank_cap`: YES with a separating family of
/// homomorphisms into `F(k)`, NO when no homomorphism into `F(0)` exists,
/// INCONCLUSIVE otherwise.
pub fn in_qf(
    a: &FiniteAlgebra,
    spec: &VarietySpec,
    rank_cap: usize,
) -> Result<Answer<QfWitness, NoHomToRetract>> {
    let mut tower = FreeTower::new(spec, Some(spec.caps.deadline()));
    in_qf_in(a, &mut tower, rank_cap)
}

pub fn in_qf_in(
    a: &FiniteAlgebra,
    tower: &mut FreeTower<'_>,
    rank_cap: usize,
) -> Result<Answer<QfWitness, NoHomToRetract>> {
    let spec = tower.spec().clone();
    if a.signature() != spec.signature() {
        return Err(Error::SignatureMismatch(
            "algebra and spec differ in signature".into(),
        ));
    }
    if a.size() <= 1 {
        return Ok(Answer::Yes(QfWitness { homs: Vec::new() }));
    }
    let deadline = tower.deadline();
    if spec.has_constants() {
        match unifiable_in(a, tower)? {
            Answer::No(cert) => return Ok(Answer::No(cert)),
            Answer::Inconclusive { reason } => return Ok(Answer::Inconclusive { reason }),
            Answer::Yes(_) => {}
        }
    }
    let mut reason = String::from("no separating family found");
    for k in 1..=rank_cap.min(spec.caps.rank_max) {
        let f = match tower.get(k) {
            Ok(f) => f,
            Err(e) if e.is_cap() => {
                reason = e.to_string();
                break;
            }
            Err(e) => return Err(e),
        };
        match separate(a, f, k, deadline) {
            Ok(Some(w)) => return Ok(Answer::Yes(w)),
            Ok(None) => {
                reason = format!("homomorphisms into F(k), k ≤ {k}, do not separate all pairs")
            }
            Err(e) if e.is_cap() => {
                reason = e.to_string();
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Answer::Inconclusive { reason })
}

/// An embedding into `f`, or else a separating family of homomorphisms.
fn separate<T: Algebra + ?Sized>(
    a: &FiniteAlgebra,
    f: &T,
    k: usize,
    deadline: Option<Instant>,
) -> Result<Option<QfWitness>> {
    if let Some(h) = HomSearch::new(a, f)
        .injective()
        .deadline(deadline)
        .first()?
    {
        return Ok(Some(QfWitness { homs: vec![(k, h)] }));
    }
    let mut sep = Separator::new(a.size());
    let mut homs = Vec::new();
    let mut seen = 0usize;
    let mut truncated = false;
    HomSearch::new(a, f).deadline(deadline).for_each(|h| {
        seen += 1;
        if sep.offer(h) {
            homs.push((k, h.clone()));
        }
        if seen >= ENUMERATION_LIMIT {
            truncated = true;
        }
        !sep.done() && !truncated
    })?;
    if sep.done() {
        Ok(Some(QfWitness { homs }))
    } else if truncated {
        Err(Error::cap(
            "homomorphisms enumerated",
            ENUMERATION_LIMIT as u64,
            seen as u64,
        ))
    } else {
        Ok(None)
    }
}

/// The pair `(a, b)` with `a < b` that no homomorphism in `homs` separates.
pub fn unseparated_pair(n: usize, homs: &[Homomorphism]) -> Option<(Elem, Elem)> {
    let mut sep = Separator::new(n);
    for h in homs {
        sep.offer(h);
    }
    sep.unseparated()
}
