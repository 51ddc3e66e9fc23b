use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finalg::{generating_set, Algebra, Elem, FiniteAlgebra, HomSearch, Homomorphism};

use super::free::free_algebra_until;
use super::spec::VarietySpec;

/// A three-valued answer. `Inconclusive` names the cap that stopped the search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", content = "witness", rename_all = "lowercase")]
pub enum Answer<Y, N> {
    Yes(Y),
    No(N),
    Inconclusive { reason: String },
}

impl<Y, N> Answer<Y, N> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Answer::No(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Answer::Inconclusive { .. })
    }

    pub(crate) fn from_cap(e: Error) -> Result<Self> {
        if e.is_cap() {
            Ok(Answer::Inconclusive {
                reason: e.to_string(),
            })
        } else {
            Err(e)
        }
    }
}

/// Homomorphisms into members of `K`, one per listed generator index, that
/// jointly separate all elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatingFamily {
    pub homs: Vec<(usize, Homomorphism)>,
}

/// Collects homomorphisms from `a` (visited in order) that separate pairs not
/// yet separated; true once every pair is separated.
pub(crate) struct Separator {
    n: usize,
    together: Vec<bool>,
    remaining: usize,
}

impl Separator {
    pub(crate) fn new(n: usize) -> Self {
        Separator {
            n,
            together: vec![true; n * n],
            remaining: n * n.saturating_sub(1) / 2,
        }
    }

    /// Records `h`; returns whether it separated a new pair.
    pub(crate) fn offer(&mut self, h: &Homomorphism) -> bool {
        let mut useful = false;
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.together[a * self.n + b] && h.image(a as Elem) != h.image(b as Elem) {
                    self.together[a * self.n + b] = false;
                    self.remaining -= 1;
                    useful = true;
                }
            }
        }
        useful
    }

    pub(crate) fn done(&self) -> bool {
        self.remaining == 0
    }

    /// First pair no offered homomorphism separated.
    pub(crate) fn unseparated(&self) -> Option<(Elem, Elem)> {
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.together[a * self.n + b] {
                    return Some((a as Elem, b as Elem));
                }
            }
        }
        None
    }
}

/// `A ∈ SP(K)`: every pair of distinct elements is separated by a
/// homomorphism into a generator. Finite members of `Q(K)` are exactly these,
/// since ultraproducts of finitely many finite algebras are isomorphic to
/// members.
pub fn in_quasivariety(
    a: &FiniteAlgebra,
    spec: &VarietySpec,
) -> Result<Answer<SeparatingFamily, (Elem, Elem)>> {
    if a.signature() != spec.signature() {
        return Err(Error::SignatureMismatch(
            "algebra and spec differ in signature".into(),
        ));
    }
    let mut sep = Separator::new(a.size());
    let mut homs = Vec::new();
    for (j, b) in spec.generators().iter().enumerate() {
        if sep.done() {
            break;
        }
        HomSearch::new(a, b).for_each(|h| {
            if sep.offer(h) {
                homs.push((j, h.clone()));
            }
            !sep.done()
        })?;
    }
    Ok(match sep.unseparated() {
        None => Answer::Yes(SeparatingFamily { homs }),
        Some(pair) => Answer::No(pair),
    })
}

/// Surjection from a free algebra onto `A`, proving `A ∈ HSP(K)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Surjection {
    pub rank: usize,
    /// Images of the free generators, a generating set of `A`.
    pub generator_images: Vec<Elem>,
    pub map: Homomorphism,
}

/// `A ∈ V(K)` iff the free generators of `F(m)` map onto a generating set of
/// `A` of size `m` by a homomorphism. `No` carries the generating tuple whose
/// assignment does not extend.
pub fn in_variety(a: &FiniteAlgebra, spec: &VarietySpec) -> Result<Answer<Surjection, Vec<Elem>>> {
    in_variety_until(a, spec, Some(spec.caps.deadline()))
}

pub fn in_variety_until(
    a: &FiniteAlgebra,
    spec: &VarietySpec,
    deadline: Option<Instant>,
) -> Result<Answer<Surjection, Vec<Elem>>> {
    if a.signature() != spec.signature() {
        return Err(Error::SignatureMismatch(
            "algebra and spec differ in signature".into(),
        ));
    }
    let gens = generating_set(a);
    let free = match free_algebra_until(spec, gens.len(), deadline) {
        Ok(f) => f,
        Err(e) => return Answer::from_cap(e),
    };
    let ext = HomSearch::new(&free, a)
        .generators(free.generators().to_vec())
        .deadline(deadline);
    let ext = free
        .generators()
        .iter()
        .zip(&gens)
        .fold(ext, |s, (&g, &b)| s.fix(g, b));
    match ext.first() {
        Ok(Some(h)) => Ok(Answer::Yes(Surjection {
            rank: gens.len(),
            generator_images: gens,
            map: h,
        })),
        Ok(None) => Ok(Answer::No(gens)),
        Err(e) => Answer::from_cap(e),
    }
}
