//! Suite bodies shared by the property tests and the acceptance run.

use std::collections::{BTreeSet, HashMap};

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use asc_core::catalog;
use asc_core::congruence::{all_congruences, is_simple, subdirect_irreducibility};
use asc_core::decision::{
    asc_check, ascc_membership, classify_qi, free_decomposition_check, mckinsey_splitting,
    non_embedding_suite, sc_check, Certificate, Verdict,
};
use asc_core::finalg::{
    check_identity, eval_term, extend, product, Algebra, Elem, FiniteAlgebra, HomSearch,
    QuasiIdentity,
};
use asc_core::variety::{free_algebra, Caps, VarietySpec};

use super::*;

pub const TERMS_PER_SPEC: usize = 200;

pub fn same_signature(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    a.signature() == b.signature()
}

pub fn spec(names: &[&str]) -> VarietySpec {
    VarietySpec::variety(names.iter().map(|n| catalog::by_name(n).unwrap()).collect()).unwrap()
}

pub fn rank1(names: &[&str]) -> VarietySpec {
    spec(names).with_caps(Caps {
        rank_max: 1,
        ..Caps::default()
    })
}

pub fn qi(src: &str) -> QuasiIdentity {
    QuasiIdentity::parse(src).unwrap()
}

/// One verdict per procedure and a spread of inputs.
pub fn verdicts() -> Vec<Verdict> {
    let mut v = Vec::new();
    for names in [&["s2"][..], &["two"], &["two-lattice"], &["m3b"], &["n5b"]] {
        v.push(asc_check(&spec(names)).unwrap());
        v.push(sc_check(&spec(names)).unwrap());
    }
    let s2 = rank1(&["s2"]);
    v.push(
        classify_qi(
            &qi("(qi (vars 1) (prem (= (meet (dia v0) (dia (neg v0))) one)) (concl (= zero one)))"),
            &s2,
        )
        .unwrap(),
    );
    v.push(
        classify_qi(
            &qi("(qi (vars 1) (prem (= (dia v0) v0)) (concl (= (box v0) v0)))"),
            &s2,
        )
        .unwrap(),
    );
    v.push(classify_qi(&qi("(= (meet v0 v1) (meet v1 v0))"), &s2).unwrap());
    let m3 = spec(&["m3b"]).with_caps(Caps {
        rank_max: 3,
        ..Caps::default()
    });
    v.push(
        classify_qi(
            &qi("(qi (vars 3) (prem (= (join v0 v1) one) (= (meet v0 v1) zero)) (concl (= (join (meet v0 v2) (meet v1 v2)) v2)))"),
            &m3,
        )
        .unwrap(),
    );
    v.push(classify_qi(&qi("(qi (vars 2) (prem (= (join v0 v1) one) (= (meet v0 v1) zero)) (concl (= v0 zero)))"), &spec(&["two-lattice"])).unwrap());
    v.push(ascc_membership(&catalog::s_l(2).unwrap(), &spec(&["s2"])).unwrap());
    v.push(ascc_membership(&catalog::two(), &spec(&["s2"])).unwrap());
    v.push(ascc_membership(&catalog::m3b(), &spec(&["m3b"])).unwrap());
    for names in [&["s2"][..], &["four"], &["b-lev2"], &["m-closure"]] {
        v.push(mckinsey_splitting(&spec(names), false).unwrap());
    }
    let caps = Caps::default();
    v.push(
        free_decomposition_check(
            vec![catalog::four()],
            vec![catalog::s_l(2).unwrap()],
            1,
            caps,
        )
        .unwrap(),
    );
    v.push(
        free_decomposition_check(
            vec![catalog::two()],
            vec![catalog::s_l(2).unwrap()],
            1,
            caps,
        )
        .unwrap(),
    );
    let one = Caps {
        rank_max: 1,
        ..Caps::default()
    };
    for case in ["heyting-2sq", "closure-4sq", "sanity-boolean-2sq"] {
        v.push(non_embedding_suite(case, one).unwrap());
    }
    v
}

/// (generators, ranks) pairs whose free algebras stay small.
pub fn specs() -> Vec<(Vec<&'static str>, Vec<usize>)> {
    vec![
        (vec!["two"], vec![1, 2]),
        (vec!["two-lattice"], vec![1, 2]),
        (vec!["two-heyting"], vec![1, 2]),
        (vec!["two-sq-heyting"], vec![1, 2]),
        (vec!["m3b"], vec![1, 2]),
        (vec!["n5b"], vec![1, 2]),
        (vec!["s1"], vec![1, 2]),
        (vec!["s2"], vec![1]),
        (vec!["s3"], vec![1]),
        (vec!["four"], vec![1]),
        (vec!["four", "s2"], vec![1]),
        (vec!["heyting-lev2"], vec![1]),
        (vec!["b-lev2"], vec![1]),
        (vec!["m-closure"], vec![1]),
    ]
}

/// Two terms agree on every generator under every assignment exactly when
/// they name the same element of the free algebra.
pub fn birkhoff_identity_agreement() {
    for (names, ranks) in specs() {
        let s = spec(&names);
        for k in ranks {
            let f = free_algebra(&s, k).unwrap();
            let gens: Vec<Elem> = f.generators().to_vec();
            let strategy = vec(term_strategy(s.signature(), k), TERMS_PER_SPEC);
            let mut runner = TestRunner::new(Config {
                cases: 1,
                failure_persistence: None,
                ..Config::default()
            });
            runner
                .run(&strategy, |terms| {
                    let mut by_vector: HashMap<Vec<Elem>, Elem> = HashMap::new();
                    let mut by_elem: HashMap<Elem, Vec<Elem>> = HashMap::new();
                    for t in &terms {
                        let v = value_vector(s.generators(), t, k);
                        let e = eval(&f, t, &gens);
                        prop_assert_eq!(eval_term(&f, t, &gens).unwrap(), e);
                        prop_assert_eq!(
                            *by_vector.entry(v.clone()).or_insert(e),
                            e,
                            "{} in {:?}",
                            t,
                            names
                        );
                        prop_assert_eq!(
                            by_elem.entry(e).or_insert(v.clone()).clone(),
                            v,
                            "{} in {:?}",
                            t,
                            names
                        );
                    }
                    for w in terms.windows(2) {
                        let id = QuasiIdentity::identity(w[0].clone(), w[1].clone());
                        let holds = s
                            .generators()
                            .iter()
                            .all(|g| check_identity(g, &id).unwrap().is_none());
                        prop_assert_eq!(holds, eval(&f, &w[0], &gens) == eval(&f, &w[1], &gens));
                    }
                    Ok(())
                })
                .unwrap_or_else(|e| panic!("{names:?} at rank {k}: {e}"));
        }
    }
}

/// Every assignment of the generators into a generating algebra extends to
/// exactly one homomorphism.
pub fn universal_mapping_property() {
    for (names, ranks) in specs() {
        let s = spec(&names);
        for k in ranks {
            let f = free_algebra(&s, k).unwrap();
            let gens = f.generators().to_vec();
            for a in s.generators().iter().filter(|a| a.size() <= 8) {
                tuples(a.size(), k, |images| {
                    let h = extend(&f, &gens, a, images).unwrap().unwrap_or_else(|| {
                        panic!("{names:?} rank {k}: {images:?} does not extend")
                    });
                    assert!(is_hom(&h.map, &f, a));
                    let all = HomSearch::new(&f, a).generators(gens.clone());
                    let all = gens
                        .iter()
                        .zip(images)
                        .fold(all, |s, (&g, &b)| s.fix(g, b))
                        .all()
                        .unwrap();
                    assert_eq!(all.len(), 1);
                });
            }
        }
    }
}

/// Small corpus algebras plus a few products, all of size at most 4.
pub fn hom_corpus() -> Vec<FiniteAlgebra> {
    let mut v = small_corpus(4);
    let two = catalog::two();
    v.push(product(two.signature(), &[&two, &two]).unwrap().algebra);
    let l = catalog::two_lattice();
    v.push(product(l.signature(), &[&l, &l]).unwrap().algebra);
    v
}

pub fn homomorphisms_match_exhaustive_maps() {
    let algs = hom_corpus();
    let mut pairs = 0;
    for a in &algs {
        for b in &algs {
            if !same_signature(a, b) {
                continue;
            }
            pairs += 1;
            let expect: BTreeSet<Vec<u32>> = brute_homs(a, b).into_iter().collect();
            let got: BTreeSet<Vec<u32>> = HomSearch::new(a, b)
                .all()
                .unwrap()
                .into_iter()
                .map(|h| h.map)
                .collect();
            assert_eq!(got, expect, "{:?} -> {:?}", a.name(), b.name());

            let inj = HomSearch::new(a, b).injective().first().unwrap();
            assert_eq!(
                inj.is_some(),
                expect
                    .iter()
                    .any(|m| m.iter().collect::<BTreeSet<_>>().len() == m.len())
            );
            let sur = HomSearch::new(a, b).surjective().first().unwrap();
            assert_eq!(
                sur.is_some(),
                expect
                    .iter()
                    .any(|m| m.iter().collect::<BTreeSet<_>>().len() == b.size())
            );
            if let Some(h) = inj.or(sur) {
                assert!(is_hom(&h.map, a, b));
            }
        }
    }
    assert!(pairs > 20);
}

pub fn congruences_match_partition_filter() {
    for a in small_corpus(5).iter().chain(hom_corpus().iter()) {
        let expect: BTreeSet<Vec<u32>> = brute_congruences(a).into_iter().collect();
        let got: BTreeSet<Vec<u32>> = all_congruences(a, 10_000)
            .unwrap()
            .congruences
            .iter()
            .map(|c| canonical(c.blocks()))
            .collect();
        assert_eq!(got, expect, "{:?}", a.name());
        assert_eq!(
            subdirect_irreducibility(a).unwrap().is_si(),
            brute_si(a),
            "{:?}",
            a.name()
        );
        assert_eq!(is_simple(a).unwrap(), expect.len() == 2, "{:?}", a.name());
    }
}

/// Map witnesses, checked against the free algebras with the brute-force
/// homomorphism test instead of the library verifier.
pub fn witnesses_are_homomorphisms(verdicts: &[Verdict]) {
    let mut checked = 0;
    for v in verdicts {
        let specs: Vec<VarietySpec> = v.varieties.iter().map(|r| r.to_spec().unwrap()).collect();
        for c in &v.certificates {
            match c {
                Certificate::Embedding {
                    variety,
                    subject,
                    rank,
                    map,
                    ..
                } => {
                    let f = free_algebra(&specs[*variety], *rank).unwrap();
                    let s = subject.to_algebra().unwrap();
                    assert!(is_hom(map, &s, &f));
                    assert_eq!(map.iter().collect::<BTreeSet<_>>().len(), s.size());
                    checked += 1;
                }
                Certificate::Separating {
                    variety,
                    subject,
                    homs,
                    ..
                } => {
                    let s = subject.to_algebra().unwrap();
                    let mut images: Vec<Vec<Elem>> = vec![Vec::new(); s.size()];
                    for (rank, map) in homs {
                        let f = free_algebra(&specs[*variety], *rank).unwrap();
                        assert!(is_hom(map, &s, &f));
                        for (x, &y) in map.iter().enumerate() {
                            images[x].push(y);
                        }
                    }
                    assert_eq!(images.iter().collect::<BTreeSet<_>>().len(), s.size());
                    checked += 1;
                }
                Certificate::Unifier {
                    variety,
                    subject,
                    rank,
                    map,
                    ..
                } => {
                    let f = free_algebra(&specs[*variety], *rank).unwrap();
                    assert!(is_hom(map, &subject.to_algebra().unwrap(), &f));
                    checked += 1;
                }
                Certificate::SubalgebraPresent {
                    variety,
                    generator,
                    universe,
                    target,
                    map,
                    ..
                } => {
                    let g = &specs[*variety].generators()[*generator];
                    assert!(brute_subuniverses(g).contains(universe));
                    let t = target.to_algebra().unwrap();
                    let sub = FiniteAlgebra::from_fn(
                        None,
                        g.signature().clone(),
                        universe.len(),
                        |op, args| {
                            let vals: Vec<Elem> =
                                args.iter().map(|&i| universe[i as usize]).collect();
                            universe
                                .iter()
                                .position(|&u| u == g.apply(op, &vals))
                                .unwrap() as Elem
                        },
                    )
                    .unwrap();
                    assert!(is_hom(map, &sub, &t));
                    assert_eq!(map.iter().collect::<BTreeSet<_>>().len(), t.size());
                    checked += 1;
                }
                _ => {}
            }
        }
    }
    assert!(checked >= 15, "only {checked} witnesses");
}
