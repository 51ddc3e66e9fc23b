//! Isomorphism testing with cheap signature-generic invariants.

use std::collections::HashMap;

use crate::error::Result;
use crate::finalg::algebra::{for_each_tuple, Algebra, Elem, Homomorphism};
use crate::finalg::hom::HomSearch;

/// Whole-algebra fingerprint: size, fixed-point count of each unary
/// operation, the coincidence pattern of the constants, and the sorted
/// in-degree multiset of each operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub size: usize,
    pub fixed_points: Vec<usize>,
    pub constant_pattern: Vec<usize>,
    pub in_degrees: Vec<Vec<u64>>,
}

/// Per-element invariants, preserved by every isomorphism.
fn element_profiles<A: Algebra + ?Sized>(alg: &A) -> Vec<Vec<u64>> {
    let sig = alg.signature();
    let n = alg.size();
    let mut prof: Vec<Vec<u64>> = vec![Vec::new(); n];
    for op in 0..sig.len() {
        let arity = sig.arity(op);
        let mut indeg = vec![0u64; n];
        for_each_tuple(n, arity, |args| indeg[alg.apply(op, args) as usize] += 1);
        for (e, p) in prof.iter_mut().enumerate() {
            p.push(indeg[e]);
            if arity == 1 {
                p.push((alg.apply(op, &[e as Elem]) == e as Elem) as u64);
            }
            if arity == 2 {
                p.push((alg.apply(op, &[e as Elem, e as Elem]) == e as Elem) as u64);
            }
        }
    }
    prof
}

pub fn fingerprint<A: Algebra + ?Sized>(alg: &A) -> Fingerprint {
    let sig = alg.signature();
    let n = alg.size();
    let mut fixed_points = Vec::new();
    let mut in_degrees = Vec::new();
    for op in 0..sig.len() {
        let arity = sig.arity(op);
        if arity == 1 {
            fixed_points.push((0..n as Elem).filter(|&e| alg.apply(op, &[e]) == e).count());
        }
        let mut indeg = vec![0u64; n];
        for_each_tuple(n, arity, |args| indeg[alg.apply(op, args) as usize] += 1);
        indeg.sort_unstable();
        in_degrees.push(indeg);
    }
    let consts: Vec<Elem> = sig.constants().map(|c| alg.constant(c)).collect();
    let constant_pattern = consts
        .iter()
        .map(|c| consts.iter().position(|d| d == c).unwrap())
        .collect();
    Fingerprint {
        size: n,
        fixed_points,
        constant_pattern,
        in_degrees,
    }
}

/// Finds an isomorphism `a -> b`, or proves there is none by exhausting the
/// (invariant-pruned) search.
pub fn is_isomorphic<S: Algebra + ?Sized, T: Algebra + ?Sized>(
    a: &S,
    b: &T,
) -> Result<Option<Homomorphism>> {
    if a.signature() != b.signature() || a.size() != b.size() {
        return Ok(None);
    }
    if fingerprint(a) != fingerprint(b) {
        return Ok(None);
    }
    let (pa, pb) = (element_profiles(a), element_profiles(b));
    let mut ids: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut class = |p: Vec<u64>| {
        let next = ids.len() as u64;
        *ids.entry(p).or_insert(next)
    };
    let ca: Vec<u64> = pa.into_iter().map(&mut class).collect();
    let cb: Vec<u64> = pb.into_iter().map(&mut class).collect();
    HomSearch::new(a, b).injective().classes(ca, cb).first()
}
