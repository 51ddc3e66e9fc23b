use std::time::Instant;

use serde::Serialize;

use crate::congruence::{congruence_generated, Congruence};
use crate::error::{Error, Result};
use crate::finalg::{quotient, subuniverse, Algebra, Elem, Equation, FiniteAlgebra, Term};

use super::free::{free_algebra_until, FreeAlgebra};
use super::spec::{Mode, VarietySpec};

/// Generators `v0 … v(k-1)` subject to a list of equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePresentation {
    pub rank: usize,
    pub relations: Vec<Equation>,
}

impl FinitePresentation {
    pub fn new(rank: usize, relations: Vec<Equation>) -> Result<Self> {
        for r in &relations {
            if r.nvars() > rank {
                return Err(Error::InvalidData(format!(
                    "relation {r} uses variables beyond v{}",
                    rank.saturating_sub(1)
                )));
            }
        }
        Ok(FinitePresentation { rank, relations })
    }

    /// Parses relations written as `(= s t)`.
    pub fn parse(rank: usize, relations: &[&str]) -> Result<Self> {
        let rels = relations
            .iter()
            .map(|src| {
                let q = crate::finalg::QuasiIdentity::parse(src)?;
                if !q.is_identity() {
                    return Err(Error::Parse(format!("relation must be an equation: {src}")));
                }
                Ok(q.conclusion)
            })
            .collect::<Result<Vec<_>>>()?;
        FinitePresentation::new(rank, rels)
    }
}

/// A finitely presented algebra `P = F(k)/θ` with the images of `v0 … v(k-1)`.
#[derive(Clone, Debug, Serialize)]
pub struct Presented {
    #[serde(skip)]
    pub algebra: FiniteAlgebra,
    pub generators: Vec<Elem>,
    pub congruence: Congruence,
    pub free_size: usize,
}

/// The pairs `(s(ḡ), t(ḡ))` of the relations evaluated at the free generators.
pub fn relation_pairs(free: &FreeAlgebra, relations: &[Equation]) -> Result<Vec<(Elem, Elem)>> {
    let g = free.generators();
    relations
        .iter()
        .map(|r| Ok((eval(free, &r.lhs, g)?, eval(free, &r.rhs, g)?)))
        .collect()
}

fn eval(free: &FreeAlgebra, t: &Term, asg: &[Elem]) -> Result<Elem> {
    t.compile(free.signature())?.eval(free, asg)
}

/// Least congruence of `free` containing `pairs`: the ordinary congruence in
/// variety mode, and in quasivariety mode the intersection of the kernels of
/// the homomorphisms into generators that identify every pair.
pub fn presentation_congruence(
    free: &FreeAlgebra,
    mode: Mode,
    pairs: &[(Elem, Elem)],
) -> Result<Congruence> {
    match mode {
        Mode::Variety => congruence_generated(free, pairs),
        Mode::Quasivariety => {
            let mut acc = Congruence::total(free.size());
            for (_, _, h) in free.evaluations() {
                if pairs.iter().all(|&(a, b)| h.image(a) == h.image(b)) {
                    acc = acc.meet(&Congruence::kernel(&h));
                }
            }
            Ok(acc)
        }
    }
}

pub fn finitely_presented(spec: &VarietySpec, pres: &FinitePresentation) -> Result<Presented> {
    finitely_presented_until(spec, pres, Some(spec.caps.deadline()))
}

pub fn finitely_presented_until(
    spec: &VarietySpec,
    pres: &FinitePresentation,
    deadline: Option<Instant>,
) -> Result<Presented> {
    let free = free_algebra_until(spec, pres.rank, deadline)?;
    present_in(&free, spec.mode, &pres.relations)
}

/// Presents `relations` over an already built free algebra.
pub fn present_in(free: &FreeAlgebra, mode: Mode, relations: &[Equation]) -> Result<Presented> {
    let pairs = relation_pairs(free, relations)?;
    let theta = presentation_congruence(free, mode, &pairs)?;
    let q = quotient(free, &theta)?;
    let generators: Vec<Elem> = free
        .generators()
        .iter()
        .map(|&g| q.natural.image(g))
        .collect();
    debug_assert_eq!(
        subuniverse(&q.algebra, &generators).map(|u| u.len()).ok(),
        Some(q.algebra.size())
    );
    Ok(Presented {
        algebra: q.algebra.with_name(format!(
            "P[{}]",
            relations
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )),
        generators,
        congruence: theta,
        free_size: free.size(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::finalg::{is_isomorphic, power};

    #[test]
    fn trivial_relation_gives_free_algebra() {
        let spec = VarietySpec::variety(vec![catalog::s_l(2).unwrap()]).unwrap();
        let p = finitely_presented(
            &spec,
            &FinitePresentation::parse(1, &["(= v0 v0)"]).unwrap(),
        )
        .unwrap();
        assert_eq!(p.algebra.size(), 16);
    }

    #[test]
    fn heyting_two_squared() {
        let h = catalog::upset_heyting(&catalog::lev_poset(2).unwrap()).unwrap();
        let spec = VarietySpec::variety(vec![h]).unwrap();
        let pres = FinitePresentation::parse(1, &["(= (join v0 (neg v0)) one)"]).unwrap();
        let p = finitely_presented(&spec, &pres).unwrap();
        let sq = catalog::upset_heyting(&catalog::Poset::antichain(2)).unwrap();
        assert!(is_isomorphic(&p.algebra, &sq).unwrap().is_some());
    }

    #[test]
    fn four_squared_from_appendix_relations() {
        let spec = VarietySpec::variety(vec![catalog::four()]).unwrap();
        let pres = FinitePresentation::parse(
            1,
            &[
                "(= (box (dia (box v0))) (dia (box v0)))",
                "(= (meet (dia (box v0)) v0) (box v0))",
                "(= (join (dia (box v0)) v0) (dia v0))",
            ],
        )
        .unwrap();
        let p = finitely_presented(&spec, &pres).unwrap();
        let sq = power(&catalog::four(), 2).unwrap().algebra;
        assert!(is_isomorphic(&p.algebra, &sq).unwrap().is_some());
    }

    #[test]
    fn relations_hold_at_generators() {
        let spec = VarietySpec::quasivariety(vec![catalog::s_l(2).unwrap()]).unwrap();
        let pres = FinitePresentation::parse(1, &["(= (dia v0) (dia (neg v0)))"]).unwrap();
        let p = finitely_presented(&spec, &pres).unwrap();
        for r in &pres.relations {
            let l = crate::finalg::eval_term(&p.algebra, &r.lhs, &p.generators).unwrap();
            let rr = crate::finalg::eval_term(&p.algebra, &r.rhs, &p.generators).unwrap();
            assert_eq!(l, rr);
        }
    }

    #[test]
    fn rejects_out_of_range_variables() {
        assert!(FinitePresentation::parse(1, &["(= v1 v0)"]).is_err());
    }
}
