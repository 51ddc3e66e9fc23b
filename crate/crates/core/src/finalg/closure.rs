//! Subuniverse generation and generating sets.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::finalg::algebra::{Algebra, Elem, FiniteAlgebra, Homomorphism};

/// Calls `f` with every index tuple over `0..=p` of length `arity` in which `p`
/// occurs at least once. Each such tuple is produced exactly once: the first
/// occurrence of `p` fixes the position, earlier positions range over `0..p`.
pub(crate) fn for_each_new_tuple<F: FnMut(&[usize])>(p: usize, arity: usize, mut f: F) {
    let mut idx = vec![0usize; arity];
    for first in 0..arity {
        if first > 0 && p == 0 {
            // positions before `first` would need an index below 0
            break;
        }
        for (j, slot) in idx.iter_mut().enumerate() {
            *slot = if j == first { p } else { 0 };
        }
        loop {
            f(&idx);
            // advance the odometer, skipping the fixed position
            let mut j = arity;
            let mut carried_out = true;
            while j > 0 {
                j -= 1;
                if j == first {
                    continue;
                }
                let bound = if j < first { p } else { p + 1 };
                idx[j] += 1;
                if idx[j] < bound {
                    carried_out = false;
                    break;
                }
                idx[j] = 0;
            }
            if carried_out {
                break;
            }
        }
    }
}

/// Least subuniverse containing `gens` and all constants, in order of
/// discovery. Operation results are fed back until a fixed point is reached.
pub fn closure_order<A: Algebra + ?Sized>(alg: &A, gens: &[Elem]) -> Result<Vec<Elem>> {
    let n = alg.size();
    for &g in gens {
        if g as usize >= n {
            return Err(Error::ElementOutOfRange {
                elem: g as u64,
                size: n,
            });
        }
    }
    let sig = alg.signature();
    let mut seen = vec![false; n];
    let mut members: Vec<Elem> = Vec::new();
    let mut push = |e: Elem, members: &mut Vec<Elem>| {
        if !seen[e as usize] {
            seen[e as usize] = true;
            members.push(e);
        }
    };
    for c in sig.constants() {
        push(alg.constant(c), &mut members);
    }
    for &g in gens {
        push(g, &mut members);
    }
    let ops: Vec<(usize, usize)> = (0..sig.len())
        .map(|op| (op, sig.arity(op)))
        .filter(|&(_, a)| a > 0)
        .collect();
    let mut args = Vec::with_capacity(sig.max_arity());
    let mut p = 0;
    while p < members.len() {
        for &(op, arity) in &ops {
            let mut fresh = Vec::new();
            for_each_new_tuple(p, arity, |idx| {
                args.clear();
                args.extend(idx.iter().map(|&i| members[i]));
                fresh.push(alg.apply(op, &args));
            });
            for e in fresh {
                push(e, &mut members);
            }
        }
        p += 1;
    }
    if members.is_empty() {
        return Err(Error::EmptyGenerated);
    }
    Ok(members)
}

/// Sorted subuniverse generated by `gens`.
pub fn subuniverse<A: Algebra + ?Sized>(alg: &A, gens: &[Elem]) -> Result<Vec<Elem>> {
    let mut u = closure_order(alg, gens)?;
    u.sort_unstable();
    Ok(u)
}

/// A subalgebra re-indexed to `0..m` in ascending order of the parent's elements.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub universe: Vec<Elem>,
    pub algebra: FiniteAlgebra,
    pub inclusion: Homomorphism,
}

/// Restricts `alg` to a subuniverse, which must be closed under all operations.
pub fn restrict<A: Algebra + ?Sized>(
    alg: &A,
    universe: Vec<Elem>,
    name: Option<String>,
) -> Result<Subalgebra> {
    let mut index = vec![u32::MAX; alg.size()];
    for (i, &e) in universe.iter().enumerate() {
        index[e as usize] = i as Elem;
    }
    let mut buf = Vec::new();
    let mut closed = true;
    let algebra =
        FiniteAlgebra::from_fn(name, alg.signature().clone(), universe.len(), |op, args| {
            buf.clear();
            buf.extend(args.iter().map(|&a| universe[a as usize]));
            let v = index[alg.apply(op, &buf) as usize];
            if v == u32::MAX {
                closed = false;
                0
            } else {
                v
            }
        })?;
    if !closed {
        return Err(Error::InvalidData(
            "subset is not closed under the operations".into(),
        ));
    }
    let inclusion = Homomorphism::new(universe.clone());
    Ok(Subalgebra {
        universe,
        algebra,
        inclusion,
    })
}

/// Subalgebra generated by `gens`, with its inclusion homomorphism.
pub fn subalgebra_generated<A: Algebra + ?Sized>(alg: &A, gens: &[Elem]) -> Result<Subalgebra> {
    let u = subuniverse(alg, gens)?;
    let name = alg.label().map(|l| format!("Sg({l})"));
    restrict(alg, u, name)
}

/// Greedy small generating set: start from the constants' closure and
/// repeatedly add the element whose addition grows the closure most (ties go
/// to the smaller element). Large algebras fall back to the least missing
/// element at each step.
pub fn generating_set<A: Algebra + ?Sized>(alg: &A) -> Vec<Elem> {
    const GREEDY_LIMIT: usize = 256;
    let n = alg.size();
    let mut gens: Vec<Elem> = Vec::new();
    let mut covered = vec![false; n];
    if alg.signature().constants().next().is_some() {
        for e in closure_order(alg, &[]).expect("constants generate a nonempty set") {
            covered[e as usize] = true;
        }
    }
    while let Some(first_missing) = covered.iter().position(|&c| !c) {
        let pick = if n <= GREEDY_LIMIT {
            let mut best = (0usize, first_missing as Elem);
            let mut trial = gens.clone();
            for cand in 0..n as Elem {
                if covered[cand as usize] {
                    continue;
                }
                trial.push(cand);
                let size = closure_order(alg, &trial).map(|u| u.len()).unwrap_or(0);
                trial.pop();
                if size > best.0 {
                    best = (size, cand);
                }
            }
            best.1
        } else {
            first_missing as Elem
        };
        gens.push(pick);
        for e in closure_order(alg, &gens).expect("nonempty generators") {
            covered[e as usize] = true;
        }
    }
    gens
}

/// Every nonempty subuniverse of `alg`, sorted by (size, elements).
pub fn all_subuniverses<A: Algebra + ?Sized>(alg: &A, limit: usize) -> Result<Vec<Vec<Elem>>> {
    let n = alg.size();
    let mut found: BTreeSet<(usize, Vec<Elem>)> = BTreeSet::new();
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut queue: Vec<Vec<Elem>> = Vec::new();
    let start: Vec<Vec<Elem>> = if alg.signature().constants().next().is_some() {
        vec![subuniverse(alg, &[])?]
    } else {
        (0..n as Elem)
            .map(|e| subuniverse(alg, &[e]))
            .collect::<Result<_>>()?
    };
    for u in start {
        if seen.insert(u.clone()) {
            queue.push(u);
        }
    }
    while let Some(u) = queue.pop() {
        found.insert((u.len(), u.clone()));
        if found.len() > limit {
            return Err(Error::cap(
                "subuniverse count",
                limit as u64,
                found.len() as u64,
            ));
        }
        let mut member = vec![false; n];
        for &e in &u {
            member[e as usize] = true;
        }
        for e in 0..n as Elem {
            if member[e as usize] {
                continue;
            }
            let mut gens = u.clone();
            gens.push(e);
            let v = subuniverse(alg, &gens)?;
            if seen.insert(v.clone()) {
                queue.push(v);
            }
        }
    }
    Ok(found.into_iter().map(|(_, u)| u).collect())
}
