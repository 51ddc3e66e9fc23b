//! The concrete algebras used throughout: small closure algebras, bounded
//! lattices, Heyting algebras of up-sets and complex algebras of posets.

mod classify;
mod poset;

pub use classify::{classify, AlgebraKindReport, LawCheck};
pub use poset::{lev_poset, Poset, MAX_POINTS};

use crate::error::{Error, Result};
use crate::finalg::{Algebra, Elem, FiniteAlgebra, Signature};

/// Boolean algebras with a closure operator: `meet join neg dia zero one`.
pub fn closure_signature() -> Signature {
    Signature::from_pairs(&[
        ("meet", 2),
        ("join", 2),
        ("neg", 1),
        ("dia", 1),
        ("zero", 0),
        ("one", 0),
    ])
}

pub fn lattice_signature() -> Signature {
    Signature::from_pairs(&[("meet", 2), ("join", 2), ("zero", 0), ("one", 0)])
}

pub fn heyting_signature() -> Signature {
    Signature::from_pairs(&[
        ("meet", 2),
        ("join", 2),
        ("imp", 2),
        ("zero", 0),
        ("one", 0),
    ])
}

/// Largest number of atoms for a tabulated powerset algebra.
const MAX_ATOMS: usize = 10;

/// Powerset closure algebra on `atoms` atoms with subsets as bitmasks.
fn powerset_closure(name: &str, atoms: usize, dia: impl Fn(u32) -> u32) -> Result<FiniteAlgebra> {
    if atoms > MAX_ATOMS {
        return Err(Error::cap("powerset atoms", MAX_ATOMS as u64, atoms as u64));
    }
    let top = (1u32 << atoms) - 1;
    FiniteAlgebra::from_fn(
        Some(name.to_string()),
        closure_signature(),
        1 << atoms,
        |op, x| match op {
            0 => x[0] & x[1],
            1 => x[0] | x[1],
            2 => top & !x[0],
            3 => dia(x[0]),
            4 => 0,
            _ => top,
        },
    )
}

/// The two-element closure algebra.
pub fn two() -> FiniteAlgebra {
    powerset_closure("2", 1, |x| x).expect("small")
}

/// `S_l`: the Boolean algebra with `l` atoms where only 0 and 1 are closed.
pub fn s_l(l: usize) -> Result<FiniteAlgebra> {
    if l == 0 {
        return Err(Error::Precondition("S_l needs l ≥ 1".into()));
    }
    if l > 6 {
        return Err(Error::cap("S_l atoms", 6, l as u64));
    }
    let top = (1u32 << l) - 1;
    powerset_closure(&format!("S_{l}"), l, |x| if x == 0 { 0 } else { top })
}

/// The four-element closure algebra with one open atom `a` (element 1) and
/// its closed complement `¬a` (element 2).
pub fn four() -> FiniteAlgebra {
    powerset_closure("4", 2, |x| match x {
        0 => 0,
        2 => 2,
        _ => 3,
    })
    .expect("small")
}

/// Eight-element closure algebra whose open elements form the chain
/// `0 < c < 1`; atoms `a`, `b`, `c` are 1, 2, 4 and `a∨b` is closed.
pub fn m_closure() -> FiniteAlgebra {
    const DIA: [u32; 8] = [0, 3, 3, 3, 7, 7, 7, 7];
    powerset_closure("M", 3, |x| DIA[x as usize]).expect("small")
}

/// Bounded lattice from a partial order `le` on `0..n` with least element 0
/// and greatest element `n-1`.
fn lattice_from_order(name: &str, n: usize, le: impl Fn(usize, usize) -> bool) -> FiniteAlgebra {
    let lub = |a: usize, b: usize| {
        let ub: Vec<usize> = (0..n).filter(|&u| le(a, u) && le(b, u)).collect();
        *ub.iter()
            .find(|&&u| ub.iter().all(|&v| le(u, v)))
            .expect("lattice order")
    };
    let glb = |a: usize, b: usize| {
        let lb: Vec<usize> = (0..n).filter(|&u| le(u, a) && le(u, b)).collect();
        *lb.iter()
            .find(|&&u| lb.iter().all(|&v| le(v, u)))
            .expect("lattice order")
    };
    FiniteAlgebra::from_fn(Some(name.to_string()), lattice_signature(), n, |op, x| {
        let (a, b) = (
            x.first().copied().unwrap_or(0) as usize,
            x.get(1).copied().unwrap_or(0) as usize,
        );
        (match op {
            0 => glb(a, b),
            1 => lub(a, b),
            2 => 0,
            _ => n - 1,
        }) as Elem
    })
    .expect("valid lattice tables")
}

/// The two-element bounded lattice.
pub fn two_lattice() -> FiniteAlgebra {
    lattice_from_order("2", 2, |a, b| a <= b)
}

/// `M_3` with new bounds: 0, three pairwise incomparable middles 1..3, top 4.
pub fn m3b() -> FiniteAlgebra {
    lattice_from_order("M3^b", 5, |a, b| a == b || a == 0 || b == 4)
}

/// `N_5` with new bounds: 0 < a < c < 1 with b incomparable to a and c;
/// encoded 0, a=1, b=2, c=3, 1=4.
pub fn n5b() -> FiniteAlgebra {
    lattice_from_order("N5^b", 5, |x, y| {
        x == y || x == 0 || y == 4 || (x == 1 && y == 3)
    })
}

/// The two-element Heyting algebra.
pub fn two_heyting() -> FiniteAlgebra {
    upset_heyting(&Poset::chain(1))
        .expect("small")
        .with_name("2")
}

/// Up-sets of `bits`-point poset `p`, as ascending bitmasks.
fn up_sets(p: &Poset) -> Result<Vec<u32>> {
    p.check_points()?;
    Ok((0..1u32 << p.size()).filter(|&s| p.is_up_set(s)).collect())
}

/// Heyting algebra of the up-sets of `p`, in ascending bitmask order.
pub fn upset_heyting(p: &Poset) -> Result<FiniteAlgebra> {
    let sets = up_sets(p)?;
    if sets.len() > 4096 {
        return Err(Error::cap("up-set count", 4096, sets.len() as u64));
    }
    let index = |s: u32| sets.binary_search(&s).expect("closed under the operations") as Elem;
    let all = (1u32 << p.size()) - 1;
    let ups: Vec<u32> = (0..p.size()).map(|i| p.up_mask(i)).collect();
    // largest up-set U with U ∩ a ⊆ b: points all of whose successors in a lie in b
    let imp = |a: u32, b: u32| {
        (0..p.size())
            .filter(|&i| ups[i] & a & !b == 0)
            .fold(0u32, |m, i| m | 1 << i)
    };
    FiniteAlgebra::from_fn(None, heyting_signature(), sets.len(), |op, x| {
        let s = |i: usize| sets[x[i] as usize];
        index(match op {
            0 => s(0) & s(1),
            1 => s(0) | s(1),
            2 => imp(s(0), s(1)),
            3 => 0,
            _ => all,
        })
    })
}

/// Complex algebra of `p`: all subsets as bitmasks, with `dia` the down-closure,
/// so that the open elements are exactly the up-sets.
pub fn complex_closure(p: &Poset) -> Result<FiniteAlgebra> {
    p.check_points()?;
    let downs: Vec<u32> = (0..p.size()).map(|i| p.down_mask(i)).collect();
    powerset_closure("complex", p.size(), |x| {
        (0..p.size())
            .filter(|&i| x >> i & 1 == 1)
            .fold(0, |m, i| m | downs[i])
    })
}

/// Elements fixed by `box`, ascending.
pub fn open_elements(m: &FiniteAlgebra) -> Result<Vec<Elem>> {
    let (neg, dia) = (m.op("neg")?, m.op("dia")?);
    Ok(m.universe()
        .filter(|&x| {
            let bx = m.apply(neg, &[m.apply(dia, &[m.apply(neg, &[x])])]);
            bx == x
        })
        .collect())
}

/// Heyting algebra of the open elements of a closure algebra, with
/// `a ⇒ b = box(¬a ∨ b)`.
pub fn open_heyting(m: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let report = classify(m)?;
    if !report.closure.holds {
        return Err(Error::Precondition(format!(
            "not a closure algebra: {}",
            report.closure.describe()
        )));
    }
    let (meet, join, neg, dia) = (m.op("meet")?, m.op("join")?, m.op("neg")?, m.op("dia")?);
    let opens = open_elements(m)?;
    let index = |x: Elem| {
        opens
            .binary_search(&x)
            .expect("open elements form a sublattice") as Elem
    };
    let bx = |x: Elem| m.apply(neg, &[m.apply(dia, &[m.apply(neg, &[x])])]);
    let zero = m.constant(m.op("zero")?);
    let one = m.constant(m.op("one")?);
    FiniteAlgebra::from_fn(
        m.name().map(|n| format!("O({n})")),
        heyting_signature(),
        opens.len(),
        |op, x| {
            let e = |i: usize| opens[x[i] as usize];
            index(match op {
                0 => m.apply(meet, &[e(0), e(1)]),
                1 => m.apply(join, &[e(0), e(1)]),
                2 => bx(m.apply(join, &[m.apply(neg, &[e(0)]), e(1)])),
                3 => zero,
                _ => one,
            })
        },
    )
}

/// Catalog entries addressable by name.
pub const NAMES: &[&str] = &[
    "two",
    "two-lattice",
    "two-heyting",
    "s1",
    "s2",
    "s3",
    "four",
    "m3b",
    "n5b",
    "m-closure",
    "b-lev2",
    "heyting-lev2",
    "two-sq-heyting",
];

/// Looks up a catalog algebra by name.
pub fn by_name(name: &str) -> Option<FiniteAlgebra> {
    let lev2 = || lev_poset(2).expect("n = 2");
    Some(match name {
        "two" => two(),
        "two-lattice" => two_lattice(),
        "two-heyting" => two_heyting(),
        "s1" => s_l(1).ok()?,
        "s2" => s_l(2).ok()?,
        "s3" => s_l(3).ok()?,
        "four" => four(),
        "m3b" => m3b(),
        "n5b" => n5b(),
        "m-closure" => m_closure(),
        "b-lev2" => complex_closure(&lev2()).ok()?.with_name("B(2²⊕1)"),
        "heyting-lev2" => upset_heyting(&lev2()).ok()?.with_name("2²⊕1"),
        "two-sq-heyting" => upset_heyting(&Poset::antichain(2)).ok()?.with_name("2²"),
        _ => return None,
    })
}

/// Every named catalog algebra, in `NAMES` order.
pub fn corpus() -> Vec<FiniteAlgebra> {
    NAMES
        .iter()
        .map(|n| by_name(n).expect("catalog names resolve"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::{all_congruences, is_simple};
    use crate::finalg::{is_isomorphic, QuasiIdentity};

    fn distributivity() -> QuasiIdentity {
        QuasiIdentity::parse("(= (meet v0 (join v1 v2)) (join (meet v0 v1) (meet v0 v2)))").unwrap()
    }

    fn closed(m: &FiniteAlgebra) -> Vec<Elem> {
        let dia = m.op("dia").unwrap();
        m.universe().filter(|&x| m.apply(dia, &[x]) == x).collect()
    }

    #[test]
    fn s_l_shapes() {
        let s2 = s_l(2).unwrap();
        assert_eq!(s2.size(), 4);
        assert_eq!(s2.eval_op("dia", &[1]).unwrap(), 3);
        assert!(s_l(0).is_err());
        assert!(is_isomorphic(&s_l(1).unwrap(), &two()).unwrap().is_some());
        for l in 1..=4 {
            let s = s_l(l).unwrap();
            assert!(is_simple(&s).unwrap());
            assert_eq!(closed(&s), vec![0, s.size() as Elem - 1]);
        }
    }

    #[test]
    fn four_has_open_atom() {
        let f = four();
        assert_eq!(open_elements(&f).unwrap(), vec![0, 1, 3]);
        assert_eq!(closed(&f), vec![0, 2, 3]);
    }

    #[test]
    fn m3_middles_are_incomparable() {
        let m = m3b();
        for a in 1..4 {
            for b in 1..4 {
                if a != b {
                    assert_eq!(m.eval_op("meet", &[a, b]).unwrap(), 0);
                    assert_eq!(m.eval_op("join", &[a, b]).unwrap(), 4);
                }
            }
        }
    }

    #[test]
    fn distributivity_witnesses() {
        let d = distributivity();
        assert!(crate::finalg::check_identity(&two_lattice(), &d)
            .unwrap()
            .is_none());
        assert!(crate::finalg::check_identity(&m3b(), &d).unwrap().is_some());
        assert!(crate::finalg::check_identity(&n5b(), &d).unwrap().is_some());
    }

    #[test]
    fn heyting_of_lev2_is_five_element() {
        let h = upset_heyting(&lev_poset(2).unwrap()).unwrap();
        assert_eq!(h.size(), 5);
        assert_eq!(upset_heyting(&Poset::chain(1)).unwrap().size(), 2);
        assert_eq!(upset_heyting(&Poset::antichain(2)).unwrap().size(), 4);
    }

    #[test]
    fn complex_algebras() {
        let b = complex_closure(&lev_poset(2).unwrap()).unwrap();
        assert_eq!(b.size(), 8);
        assert_eq!(open_elements(&b).unwrap().len(), 5);
        let single = complex_closure(&Poset::chain(1)).unwrap();
        assert!(is_isomorphic(&single, &two()).unwrap().is_some());
        let anti = complex_closure(&Poset::antichain(2)).unwrap();
        assert!(anti
            .universe()
            .all(|x| anti.eval_op("dia", &[x]).unwrap() == x));
        // only 0 and 1 clopen
        let clopen: Vec<Elem> = open_elements(&b)
            .unwrap()
            .into_iter()
            .filter(|x| closed(&b).contains(x))
            .collect();
        assert_eq!(clopen, vec![0, 7]);
    }

    #[test]
    fn open_heyting_small_cases() {
        assert_eq!(open_heyting(&two()).unwrap().size(), 2);
        assert_eq!(open_heyting(&s_l(2).unwrap()).unwrap().size(), 2);
        assert!(open_heyting(&m3b()).is_err());
    }

    #[test]
    fn con_four_is_a_chain() {
        assert_eq!(all_congruences(&four(), 100).unwrap().len(), 3);
    }

    #[test]
    fn corpus_names_resolve() {
        assert_eq!(corpus().len(), NAMES.len());
        assert!(by_name("nope").is_none());
    }

    /// Every strict order on `0..n` contained in the natural order; each poset
    /// appears up to relabelling since it has a linear extension.
    fn all_posets(n: usize) -> Vec<Poset> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        (0u32..1 << pairs.len())
            .filter_map(|mask| {
                Poset::from_fn(n, |i, j| {
                    pairs
                        .iter()
                        .position(|&p| p == (i, j))
                        .map(|k| mask >> k & 1 == 1)
                        .unwrap_or(false)
                })
                .ok()
            })
            .collect()
    }

    #[test]
    fn open_of_complex_is_upsets_on_small_posets() {
        for n in 1..=4 {
            for p in all_posets(n) {
                let o = open_heyting(&complex_closure(&p).unwrap()).unwrap();
                let h = upset_heyting(&p).unwrap();
                // the encodings agree literally: both list up-sets in ascending order
                assert_eq!(o.tables(), h.tables());
            }
        }
    }

    #[test]
    fn complex_algebras_are_closure_algebras() {
        for n in 1..=3 {
            for p in all_posets(n) {
                let c = complex_closure(&p).unwrap();
                let r = classify(&c).unwrap();
                assert!(r.closure.holds, "{:?}", r.closure);
            }
        }
    }

    #[test]
    fn heyting_residuation() {
        for n in 1..=3 {
            for p in all_posets(n) {
                let h = upset_heyting(&p).unwrap();
                let r = classify(&h).unwrap();
                assert!(r.heyting.holds, "{:?}", r.heyting);
            }
        }
    }
}
