//! Congruences, congruence lattices, subdirect irreducibility and relative
//! congruences with respect to a finite class of algebras.

mod lattice;
mod relative;
mod union_find;

pub use lattice::{all_congruences, CongruenceLattice, DEFAULT_CONGRUENCE_CAP};
pub use relative::{is_relative_si, kernels_into, relative_principal, RelativeSi};
pub use union_find::UnionFind;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finalg::{for_each_tuple, Algebra, Elem, Homomorphism};

/// An equivalence relation on `0..n`, stored as canonical block labels: the
/// block of an element is numbered by first appearance, so two relations are
/// equal iff their label arrays are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Congruence {
    blocks: Vec<u32>,
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Congruence {
            blocks: (0..n as u32).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Congruence { blocks: vec![0; n] }
    }

    /// Canonicalizes an arbitrary labeling.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let blocks = labels
            .iter()
            .map(|l| {
                let next = seen.len() as u32;
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        Congruence { blocks }
    }

    pub fn from_union_find(uf: &mut UnionFind) -> Self {
        let roots: Vec<usize> = (0..uf.len()).map(|i| uf.find(i)).collect();
        Congruence::from_labels(&roots)
    }

    /// Validates a block array read from a file.
    pub fn from_blocks(blocks: Vec<u32>) -> Result<Self> {
        let c = Congruence::from_labels(&blocks);
        if c.blocks != blocks {
            return Err(Error::InvalidData(
                "block array is not in canonical first-appearance form".into(),
            ));
        }
        Ok(c)
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.iter().map(|&b| b + 1).max().unwrap_or(0) as usize
    }

    #[inline]
    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.blocks[a as usize] == self.blocks[b as usize]
    }

    #[inline]
    pub fn block_of(&self, a: Elem) -> u32 {
        self.blocks[a as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.size()
    }

    pub fn is_total(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// The classes as sorted element lists, in block order.
    pub fn classes(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (e, &b) in self.blocks.iter().enumerate() {
            out[b as usize].push(e as Elem);
        }
        out
    }

    /// First element of each block.
    pub fn representatives(&self) -> Vec<Elem> {
        let mut reps = vec![Elem::MAX; self.num_blocks()];
        for (e, &b) in self.blocks.iter().enumerate() {
            if reps[b as usize] == Elem::MAX {
                reps[b as usize] = e as Elem;
            }
        }
        reps
    }

    /// `self ⊆ other` as sets of pairs.
    pub fn le(&self, other: &Congruence) -> bool {
        let mut image = vec![u32::MAX; self.num_blocks()];
        for (e, &b) in self.blocks.iter().enumerate() {
            let o = other.blocks[e];
            let slot = &mut image[b as usize];
            if *slot == u32::MAX {
                *slot = o;
            } else if *slot != o {
                return false;
            }
        }
        true
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let pairs: Vec<(u32, u32)> = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(&a, &b)| (a, b))
            .collect();
        Congruence::from_labels(&pairs)
    }

    /// Transitive closure of the union.
    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.size());
        for rel in [self, other] {
            let reps = rel.representatives();
            for (e, &b) in rel.blocks.iter().enumerate() {
                uf.union(e, reps[b as usize] as usize);
            }
        }
        Congruence::from_union_find(&mut uf)
    }

    /// Checks compatibility with every operation of `alg` in one pass: each
    /// argument tuple must land in the same block as the tuple of its block
    /// representatives. Returns a violated instance as a message.
    pub fn check_compatible<A: Algebra + ?Sized>(&self, alg: &A) -> Result<()> {
        if self.size() != alg.size() {
            return Err(Error::NotCongruence(format!(
                "relation on {} elements, algebra has {}",
                self.size(),
                alg.size()
            )));
        }
        let reps = self.representatives();
        let sig = alg.signature();
        let mut rargs = Vec::new();
        for op in 0..sig.len() {
            let mut bad = None;
            for_each_tuple(alg.size(), sig.arity(op), |args| {
                if bad.is_some() {
                    return;
                }
                rargs.clear();
                rargs.extend(args.iter().map(|&a| reps[self.block_of(a) as usize]));
                if !self.related(alg.apply(op, args), alg.apply(op, &rargs)) {
                    bad = Some(args.to_vec());
                }
            });
            if let Some(args) = bad {
                return Err(Error::NotCongruence(format!(
                    "`{}` at {:?} is not compatible",
                    sig.symbol(op).name,
                    args
                )));
            }
        }
        Ok(())
    }

    pub fn kernel(h: &Homomorphism) -> Congruence {
        Congruence::from_labels(&h.map)
    }
}

/// Least congruence containing `pairs`.
///
/// Union-then-propagate: every pair that merges two classes is queued, and for
/// each queued pair `(a, b)` every basic translation `x -> f(.., x, ..)` is
/// applied to both sides and the results are merged. Translations of the
/// merging pairs suffice because they generate the equivalence.
pub fn congruence_generated<A: Algebra + ?Sized>(
    alg: &A,
    pairs: &[(Elem, Elem)],
) -> Result<Congruence> {
    let n = alg.size();
    for &(a, b) in pairs {
        for e in [a, b] {
            if e as usize >= n {
                return Err(Error::ElementOutOfRange {
                    elem: e as u64,
                    size: n,
                });
            }
        }
    }
    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(Elem, Elem)> = Vec::new();
    for &(a, b) in pairs {
        if uf.union(a as usize, b as usize) {
            queue.push((a, b));
        }
    }
    let sig = alg.signature();
    let ops: Vec<(usize, usize)> = (0..sig.len())
        .map(|op| (op, sig.arity(op)))
        .filter(|&(_, ar)| ar > 0)
        .collect();
    let mut xa = Vec::new();
    let mut xb = Vec::new();
    while let Some((a, b)) = queue.pop() {
        for &(op, arity) in &ops {
            for pos in 0..arity {
                for_each_tuple(n, arity - 1, |ctx| {
                    xa.clear();
                    xa.extend_from_slice(&ctx[..pos]);
                    xa.push(a);
                    xa.extend_from_slice(&ctx[pos..]);
                    xb.clear();
                    xb.extend_from_slice(&xa);
                    xb[pos] = b;
                    let fa = alg.apply(op, &xa);
                    let fb = alg.apply(op, &xb);
                    if uf.union(fa as usize, fb as usize) {
                        queue.push((fa, fb));
                    }
                });
            }
        }
    }
    Ok(Congruence::from_union_find(&mut uf))
}

/// `θ(a, b)`: least congruence identifying `a` and `b`.
pub fn principal_congruence<A: Algebra + ?Sized>(alg: &A, a: Elem, b: Elem) -> Result<Congruence> {
    congruence_generated(alg, &[(a, b)])
}

/// Outcome of a subdirect irreducibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SiReport {
    /// The least non-identity congruence.
    Irreducible { monolith: Congruence },
    /// Two non-identity congruences whose meet is the identity.
    Reducible { witness: (Congruence, Congruence) },
}

impl SiReport {
    pub fn is_si(&self) -> bool {
        matches!(self, SiReport::Irreducible { .. })
    }

    pub fn monolith(&self) -> Option<&Congruence> {
        match self {
            SiReport::Irreducible { monolith } => Some(monolith),
            SiReport::Reducible { .. } => None,
        }
    }
}

/// Distinct principal congruences `θ(a, b)` with `a < b`, sorted.
pub fn principal_congruences<A: Algebra + ?Sized>(alg: &A) -> Result<Vec<Congruence>> {
    let n = alg.size() as Elem;
    let mut set = std::collections::BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            set.insert(principal_congruence(alg, a, b)?);
        }
    }
    Ok(set.into_iter().collect())
}

/// Minimal non-identity congruences are principal, so the algebra is SI iff
/// there is exactly one minimal principal congruence; with two or more, any
/// two of them meet in the identity.
pub fn subdirect_irreducibility<A: Algebra + ?Sized>(alg: &A) -> Result<SiReport> {
    if alg.size() <= 1 {
        return Err(Error::TrivialAlgebra);
    }
    let principals = principal_congruences(alg)?;
    let minimal: Vec<&Congruence> = principals
        .iter()
        .filter(|c| !principals.iter().any(|d| d != *c && d.le(c)))
        .collect();
    if minimal.len() == 1 {
        Ok(SiReport::Irreducible {
            monolith: minimal[0].clone(),
        })
    } else {
        Ok(SiReport::Reducible {
            witness: (minimal[0].clone(), minimal[1].clone()),
        })
    }
}

/// The monolith if the algebra is subdirectly irreducible.
pub fn is_subdirectly_irreducible<A: Algebra + ?Sized>(alg: &A) -> Result<Option<Congruence>> {
    Ok(subdirect_irreducibility(alg)?.monolith().cloned())
}

/// True iff the only congruences are the identity and the total relation.
pub fn is_simple<A: Algebra + ?Sized>(alg: &A) -> Result<bool> {
    if alg.size() <= 1 {
        return Err(Error::TrivialAlgebra);
    }
    let n = alg.size() as Elem;
    for a in 0..n {
        for b in a + 1..n {
            if !principal_congruence(alg, a, b)?.is_total() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::finalg::product::power;

    #[test]
    fn canonical_labels() {
        let c = Congruence::from_labels(&[5, 5, 2, 5, 9]);
        assert_eq!(c.blocks(), &[0, 0, 1, 0, 2]);
        assert_eq!(c.num_blocks(), 3);
        assert!(Congruence::from_blocks(vec![1, 0]).is_err());
    }

    #[test]
    fn lattice_ops_on_partitions() {
        let a = Congruence::from_labels(&[0, 0, 1, 1]);
        let b = Congruence::from_labels(&[0, 1, 1, 2]);
        assert!(a.meet(&b).is_identity());
        assert!(a.join(&b).is_total());
        assert!(Congruence::identity(4).le(&a));
        assert!(!a.le(&b));
    }

    #[test]
    fn principal_on_equal_pair_is_identity() {
        let four = catalog::four();
        assert!(principal_congruence(&four, 2, 2).unwrap().is_identity());
    }

    #[test]
    fn principal_in_four() {
        // a = 1, not-a = 2: identifying a with 1 also identifies 0 with not-a
        let four = catalog::four();
        let t = principal_congruence(&four, 1, 3).unwrap();
        assert_eq!(t.classes(), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn m3b_is_simple() {
        let m3 = catalog::m3b();
        for a in 0..5 {
            for b in a + 1..5 {
                assert!(principal_congruence(&m3, a, b).unwrap().is_total());
            }
        }
        assert!(is_simple(&m3).unwrap());
        assert!(is_subdirectly_irreducible(&m3).unwrap().is_some());
    }

    #[test]
    fn bottom_top_pair_collapses_bounded_lattice() {
        let n5 = catalog::n5b();
        assert!(congruence_generated(&n5, &[(0, 4)]).unwrap().is_total());
        assert!(congruence_generated(&n5, &[]).unwrap().is_identity());
    }

    #[test]
    fn si_examples() {
        let s2 = catalog::s_l(2).unwrap();
        assert!(is_subdirectly_irreducible(&s2).unwrap().is_some());
        assert!(is_simple(&s2).unwrap());
        let two = catalog::two();
        let sq = power(&two, 2).unwrap().algebra;
        match subdirect_irreducibility(&sq).unwrap() {
            SiReport::Reducible { witness: (x, y) } => {
                assert!(!x.is_identity() && !y.is_identity());
                assert!(x.meet(&y).is_identity());
            }
            other => panic!("2x2 reported {other:?}"),
        }
        assert!(!is_simple(&catalog::four()).unwrap());
        assert!(is_simple(&two).unwrap());
    }

    #[test]
    fn trivial_input_is_an_error() {
        let t = crate::finalg::FiniteAlgebra::trivial(catalog::closure_signature());
        assert_eq!(is_simple(&t), Err(Error::TrivialAlgebra));
        assert_eq!(subdirect_irreducibility(&t), Err(Error::TrivialAlgebra));
    }

    #[test]
    fn compatibility_check() {
        let four = catalog::four();
        assert!(Congruence::from_labels(&[0, 1, 0, 1])
            .check_compatible(&four)
            .is_ok());
        assert!(Congruence::from_labels(&[0, 0, 1, 1])
            .check_compatible(&four)
            .is_err());
    }
}
