//! Acceptance run: one PASS/FAIL line per criterion, each against its time limit.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use asc_core::catalog::{
    self, complex_closure, lev_poset, open_elements, open_heyting, upset_heyting, Poset,
};
use asc_core::congruence::all_congruences;
use asc_core::decision::{
    asc_check, classify_qi, free_decomposition_check, mckinsey_splitting, non_embedding_suite,
    sc_check, verify, Certificate, QiClass, Status, Verdict,
};
use asc_core::finalg::{check_identity, is_isomorphic, power, Algebra, QuasiIdentity};
use asc_core::variety::{finitely_presented, Caps, FinitePresentation, VarietySpec};

use common::suites;

fn spec(gens: Vec<asc_core::finalg::FiniteAlgebra>) -> VarietySpec {
    VarietySpec::variety(gens).unwrap()
}

fn certified(v: &Verdict) {
    for c in verify(v).unwrap() {
        assert!(c.ok, "{} certificate rejected: {}", c.kind, c.note);
    }
}

fn has<F: Fn(&Certificate) -> bool>(v: &Verdict, f: F) -> bool {
    v.certificates.iter().any(f)
}

/// The congruences form a 3×3 grid: some bijection onto pairs (i, j) with
/// i, j < 3 turns inclusion into the componentwise order.
fn is_three_by_three_grid(leq: &dyn Fn(usize, usize) -> bool, n: usize) -> bool {
    fn place(
        i: usize,
        n: usize,
        slot: &mut Vec<(usize, usize)>,
        used: &mut [bool; 9],
        leq: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if i == n {
            return true;
        }
        for s in 0..9 {
            if used[s] {
                continue;
            }
            let p = (s / 3, s % 3);
            let ok = (0..i).all(|j| {
                let q = slot[j];
                leq(j, i) == (q.0 <= p.0 && q.1 <= p.1) && leq(i, j) == (p.0 <= q.0 && p.1 <= q.1)
            });
            if ok {
                used[s] = true;
                slot.push(p);
                if place(i + 1, n, slot, used, leq) {
                    return true;
                }
                slot.pop();
                used[s] = false;
            }
        }
        false
    }
    n == 9 && place(0, n, &mut Vec::new(), &mut [false; 9], leq)
}

fn c1() {
    let sq = power(&catalog::four(), 2).unwrap().algebra;
    let lat = all_congruences(&sq, 1000).unwrap();
    assert_eq!(lat.len(), 9);
    assert!(is_three_by_three_grid(&|i, j| lat.leq(i, j), lat.len()));
}

fn c2() {
    let pres = FinitePresentation::parse(
        1,
        &[
            "(= (box (dia (box v0))) (dia (box v0)))",
            "(= (meet (dia (box v0)) v0) (box v0))",
            "(= (join (dia (box v0)) v0) (dia v0))",
        ],
    )
    .unwrap();
    let p = finitely_presented(&spec(vec![catalog::four()]), &pres).unwrap();
    let sq = power(&catalog::four(), 2).unwrap().algebra;
    assert!(is_isomorphic(&p.algebra, &sq).unwrap().is_some());
}

fn c3() {
    let h = upset_heyting(&lev_poset(2).unwrap()).unwrap();
    let pres = FinitePresentation::parse(1, &["(= (join v0 (neg v0)) one)"]).unwrap();
    let p = finitely_presented(&spec(vec![h]), &pres).unwrap();
    let sq = upset_heyting(&Poset::antichain(2)).unwrap();
    assert!(is_isomorphic(&p.algebra, &sq).unwrap().is_some());
}

fn c4() {
    let v = asc_check(&spec(vec![catalog::s_l(2).unwrap()])).unwrap();
    assert_eq!(v.status, Status::Holds);
    assert!(has(
        &v,
        |c| matches!(c, Certificate::Embedding { label, rank: 1, .. } if label == "2")
    ));
    assert!(has(
        &v,
        |c| matches!(c, Certificate::Embedding { label, rank, .. } if label.starts_with("S_2×") && *rank <= 2)
    ));
    certified(&v);
}

fn c5() {
    let v = sc_check(&spec(vec![catalog::s_l(2).unwrap()])).unwrap();
    assert_eq!(v.status, Status::Fails);
    assert!(has(
        &v,
        |c| matches!(c, Certificate::NoHomToRetract { label, f0_size: 2, .. } if label == "S_2")
    ));
    certified(&v);
}

fn c6() {
    let m3 = asc_check(&spec(vec![catalog::m3b()])).unwrap();
    assert_eq!(m3.status, Status::Fails);
    assert!(has(&m3, |c| matches!(
        c,
        Certificate::JoinIrreducibleTop { .. }
    )));
    certified(&m3);
    let two = sc_check(&spec(vec![catalog::two_lattice()])).unwrap();
    assert_eq!(two.status, Status::Holds);
    certified(&two);
    let dist = QuasiIdentity::parse("(= (meet v0 (join v1 v2)) (join (meet v0 v1) (meet v0 v2)))")
        .unwrap();
    for g in [catalog::two_lattice(), catalog::m3b(), catalog::n5b()] {
        let distributive = check_identity(&g, &dist).unwrap().is_none();
        let s = spec(vec![g]);
        let sc = sc_check(&s).unwrap().status;
        let asc = asc_check(&s).unwrap().status;
        let expect = if distributive {
            Status::Holds
        } else {
            Status::Fails
        };
        assert_eq!((sc, asc), (expect, expect));
    }
}

fn c7() {
    let q = QuasiIdentity::parse(
        "(qi (vars 1) (prem (= (meet (dia v0) (dia (neg v0))) one)) (concl (= zero one)))",
    )
    .unwrap();
    let v = classify_qi(&q, &spec(vec![catalog::s_l(2).unwrap()])).unwrap();
    assert_eq!(v.classification, Some(QiClass::Passive));
    assert!(has(&v, |c| matches!(
        c,
        Certificate::NoHomToRetract { qi: Some(_), .. }
    )));
    certified(&v);
}

fn c8() {
    for n in 1..=3 {
        let p = lev_poset(n).unwrap();
        let ob = open_heyting(&complex_closure(&p).unwrap()).unwrap();
        assert!(
            is_isomorphic(&ob, &upset_heyting(&p).unwrap())
                .unwrap()
                .is_some(),
            "n = {n}"
        );
    }
    let b = complex_closure(&lev_poset(2).unwrap()).unwrap();
    assert_eq!(b.size(), 8);
    assert_eq!(open_elements(&b).unwrap().len(), 5);
}

fn c9() {
    let fact = |v: &Verdict, k: &str| v.facts[k].as_bool().unwrap();
    let s2 = mckinsey_splitting(&spec(vec![catalog::s_l(2).unwrap()]), false).unwrap();
    assert!(!fact(&s2, "mckinsey_holds") && fact(&s2, "s2_present"));
    certified(&s2);
    let b = complex_closure(&lev_poset(2).unwrap()).unwrap();
    for g in [catalog::four(), b] {
        let v = mckinsey_splitting(&spec(vec![g]), false).unwrap();
        assert!(fact(&v, "mckinsey_holds") && !fact(&v, "s2_present"));
        assert_eq!(v.status, Status::Holds);
        certified(&v);
    }
}

fn c10() {
    let v = free_decomposition_check(
        vec![catalog::four()],
        vec![catalog::s_l(2).unwrap()],
        1,
        Caps::default(),
    )
    .unwrap();
    assert_eq!(v.status, Status::Holds);
    certified(&v);
}

fn c11() {
    let caps = Caps {
        rank_max: 1,
        time_budget: 110,
        ..Caps::default()
    };
    let h = non_embedding_suite("heyting-2sq", caps).unwrap();
    assert_eq!(h.status, Status::Holds);
    assert!(has(&h, |c| matches!(
        c,
        Certificate::NoEmbedding { rank: 1, .. }
    )));
    certified(&h);
    let c = non_embedding_suite("closure-4sq", caps).unwrap();
    match c.status {
        Status::Holds => assert!(has(&c, |x| matches!(
            x,
            Certificate::NoEmbedding { rank: 1, .. }
        ))),
        Status::Inconclusive => {
            let explored = c.facts["explored_elements"].as_u64().unwrap();
            assert!(explored >= 10_000, "only {explored} elements explored");
        }
        Status::Fails => panic!("closure-4sq: embedding found"),
    }
    certified(&c);
}

fn c12() {
    let verdicts = suites::verdicts();
    for v in &verdicts {
        certified(v);
    }
    suites::witnesses_are_homomorphisms(&verdicts);
    suites::universal_mapping_property();
    suites::birkhoff_identity_agreement();
    suites::homomorphisms_match_exhaustive_maps();
    suites::congruences_match_partition_filter();
}

type Criterion = (u32, &'static str, u64, fn());

const CRITERIA: &[Criterion] = &[
    (1, "congruences of 4² form a 3×3 grid", 1, c1),
    (2, "appendix presentation over {4} is 4²", 30, c2),
    (3, "appendix presentation over {2²⊕1} is 2²", 30, c3),
    (
        4,
        "asc_check({S_2}) holds with embedding witnesses",
        120,
        c4,
    ),
    (5, "sc_check({S_2}) fails with no-hom-to-retract", 60, c5),
    (
        6,
        "SC, ASC and distributivity agree on 2, M3^b, N5^b",
        120,
        c6,
    ),
    (7, "passive rule over S_2", 30, c7),
    (
        8,
        "open elements of complex algebras and up-set duality",
        10,
        c8,
    ),
    (9, "McKinsey identity against S_2", 60, c9),
    (
        10,
        "free decomposition for K_U={4}, K_W={S_2}, k=1",
        300,
        c10,
    ),
    (11, "non-embedding evidence for 2² and 4²", 120, c11),
    (12, "property suites", 600, c12),
];

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for &(n, what, limit, run) in CRITERIA {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(limit);
        let line = format!(
            "[{n:>2}] {what} ({:.2}s, limit {limit}s)",
            took.as_secs_f64()
        );
        match result {
            Ok(()) if in_time => println!("PASS {line}"),
            Ok(()) => {
                failed += 1;
                println!("FAIL {line}: over time limit");
            }
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {line}: {msg}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
