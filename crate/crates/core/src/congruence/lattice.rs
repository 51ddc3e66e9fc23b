use std::collections::BTreeSet;
use std::collections::HashMap;

use serde::Serialize;

use crate::congruence::{principal_congruences, Congruence};
use crate::error::{Error, Result};
use crate::finalg::Algebra;

/// Default bound on the algebra size accepted by [`all_congruences`].
pub const DEFAULT_CONGRUENCE_CAP: usize = 4096;

/// All congruences of an algebra with their meet and join tables.
///
/// Congruences are sorted by decreasing number of blocks, then by block
/// array, so index 0 is the identity and the last index is the total relation.
#[derive(Clone, Debug, Serialize)]
pub struct CongruenceLattice {
    pub congruences: Vec<Congruence>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
}

impl CongruenceLattice {
    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.len() - 1
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.meet[i][j] == i
    }

    pub fn index_of(&self, c: &Congruence) -> Option<usize> {
        self.congruences.iter().position(|d| d == c)
    }

    /// Cover relation as adjacency lists: `covers[i]` lists the `j` with
    /// `i < j` and nothing strictly between.
    pub fn covers(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| {
                        i != j
                            && self.leq(i, j)
                            && !(0..n).any(|k| k != i && k != j && self.leq(i, k) && self.leq(k, j))
                    })
                    .collect()
            })
            .collect()
    }

    /// Atoms of the lattice (covers of the identity).
    pub fn atoms(&self) -> Vec<usize> {
        if self.len() <= 1 {
            return Vec::new();
        }
        self.covers()[0].clone()
    }
}

/// Every congruence, as the join-closure of the principal congruences.
pub fn all_congruences<A: Algebra + ?Sized>(alg: &A, cap: usize) -> Result<CongruenceLattice> {
    if alg.size() > cap {
        return Err(Error::cap(
            "algebra size for congruence lattice",
            cap as u64,
            alg.size() as u64,
        ));
    }
    let n = alg.size();
    let principals = principal_congruences(alg)?;
    let mut found: BTreeSet<Congruence> = BTreeSet::new();
    found.insert(Congruence::identity(n));
    let mut queue: Vec<Congruence> = vec![Congruence::identity(n)];
    while let Some(c) = queue.pop() {
        for p in &principals {
            let j = c.join(p);
            if found.insert(j.clone()) {
                queue.push(j);
            }
        }
    }
    let mut congruences: Vec<Congruence> = found.into_iter().collect();
    congruences.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b)));
    let index: HashMap<&Congruence, usize> = congruences
        .iter()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let m = congruences.len();
    let mut meet = vec![vec![0; m]; m];
    let mut join = vec![vec![0; m]; m];
    for i in 0..m {
        for j in i..m {
            let mt = index[&congruences[i].meet(&congruences[j])];
            let jn = index[&congruences[i].join(&congruences[j])];
            meet[i][j] = mt;
            meet[j][i] = mt;
            join[i][j] = jn;
            join[j][i] = jn;
        }
    }
    Ok(CongruenceLattice {
        congruences,
        meet,
        join,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::congruence::principal_congruence;
    use crate::finalg::product::power;
    use crate::finalg::FiniteAlgebra;

    fn is_chain(l: &CongruenceLattice) -> bool {
        (0..l.len()).all(|i| (0..l.len()).all(|j| l.leq(i, j) || l.leq(j, i)))
    }

    #[test]
    fn four_has_three_element_chain() {
        let l = all_congruences(&catalog::four(), 64).unwrap();
        assert_eq!(l.len(), 3);
        assert!(is_chain(&l));
    }

    #[test]
    fn trivial_algebra_has_one_congruence() {
        let t = FiniteAlgebra::trivial(catalog::closure_signature());
        assert_eq!(all_congruences(&t, 64).unwrap().len(), 1);
    }

    #[test]
    fn four_squared_grid() {
        let sq = power(&catalog::four(), 2).unwrap().algebra;
        let l = all_congruences(&sq, 64).unwrap();
        assert_eq!(l.len(), 9);
        assert_eq!(l.atoms().len(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let sq = power(&catalog::four(), 2).unwrap().algebra;
        assert!(all_congruences(&sq, 8).unwrap_err().is_cap());
    }

    #[test]
    fn lattice_laws_hold_on_corpus() {
        for alg in catalog::corpus().into_iter().filter(|a| a.size() <= 16) {
            let l = all_congruences(&alg, 64).unwrap();
            let m = l.len();
            for a in 0..m {
                assert_eq!(l.meet[a][a], a);
                for b in 0..m {
                    assert_eq!(l.meet[a][b], l.meet[b][a]);
                    assert_eq!(l.join[a][l.meet[a][b]], a, "absorption");
                    assert_eq!(l.meet[a][l.join[a][b]], a, "absorption");
                    for c in 0..m {
                        assert_eq!(l.meet[l.meet[a][b]][c], l.meet[a][l.meet[b][c]]);
                        assert_eq!(l.join[l.join[a][b]][c], l.join[a][l.join[b][c]]);
                    }
                }
            }
            assert!(l.congruences[0].is_identity());
            assert!(l.congruences[l.top()].is_total());
        }
    }

    #[test]
    fn principal_is_least_containing_pair() {
        for alg in catalog::corpus().into_iter().filter(|a| a.size() <= 6) {
            let l = all_congruences(&alg, 64).unwrap();
            let n = alg.size() as u32;
            for a in 0..n {
                for b in 0..n {
                    let p = principal_congruence(&alg, a, b).unwrap();
                    assert!(l.index_of(&p).is_some());
                    for c in &l.congruences {
                        if c.related(a, b) {
                            assert!(p.le(c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn every_listed_relation_is_compatible() {
        for alg in catalog::corpus().into_iter().filter(|a| a.size() <= 16) {
            for c in all_congruences(&alg, 64).unwrap().congruences {
                c.check_compatible(&alg).unwrap();
            }
        }
    }
}
