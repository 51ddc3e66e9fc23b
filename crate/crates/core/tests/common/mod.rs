//! Brute-force reference implementations shared by the integration suites.
//! Nothing here calls into the search kernels being tested.
#![allow(dead_code)]

pub mod suites;

use std::path::PathBuf;

use proptest::prelude::*;

use asc_core::catalog;
use asc_core::finalg::{Algebra, Elem, FiniteAlgebra, Signature, Term};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Catalog algebras with at most `max` elements.
pub fn small_corpus(max: usize) -> Vec<FiniteAlgebra> {
    catalog::corpus()
        .into_iter()
        .filter(|a| a.size() <= max)
        .collect()
}

/// Calls `f` on every tuple in `size^arity`, lexicographically.
pub fn tuples(size: usize, arity: usize, mut f: impl FnMut(&[Elem])) {
    if size == 0 && arity > 0 {
        return;
    }
    let mut t = vec![0 as Elem; arity];
    loop {
        f(&t);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if (t[i] as usize) < size {
                break;
            }
            t[i] = 0;
        }
    }
}

pub fn is_hom<S: Algebra + ?Sized, T: Algebra + ?Sized>(map: &[Elem], a: &S, b: &T) -> bool {
    if map.len() != a.size() || map.iter().any(|&x| x as usize >= b.size()) {
        return false;
    }
    let sig = a.signature();
    let mut ok = true;
    for op in 0..sig.len() {
        let arity = sig.arity(op);
        let bop = match b.signature().lookup(&sig.symbol(op).name) {
            Some(o) => o,
            None => return false,
        };
        tuples(a.size(), arity, |t| {
            if !ok {
                return;
            }
            let img: Vec<Elem> = t.iter().map(|&x| map[x as usize]).collect();
            ok = map[a.apply(op, t) as usize] == b.apply(bop, &img);
        });
    }
    ok
}

/// Every homomorphism, by trying all `|B|^|A|` maps.
pub fn brute_homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    tuples(b.size(), a.size(), |m| {
        if is_hom(m, a, b) {
            out.push(m.to_vec());
        }
    });
    out
}

/// Canonical block labels: the first element of each block gets the next label.
pub fn canonical(labels: &[u32]) -> Vec<u32> {
    let mut seen: Vec<u32> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(i) => i as u32,
            None => {
                seen.push(*l);
                (seen.len() - 1) as u32
            }
        })
        .collect()
}

fn partitions(n: usize) -> Vec<Vec<u32>> {
    fn go(i: usize, n: usize, cur: &mut Vec<u32>, max: u32, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max + 1 {
            cur.push(l);
            go(i + 1, n, cur, max.max(l), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut cur = vec![0];
    go(1, n, &mut cur, 0, &mut out);
    out
}

pub fn is_compatible(a: &FiniteAlgebra, labels: &[u32]) -> bool {
    let sig = a.signature();
    for op in 0..sig.len() {
        let arity = sig.arity(op);
        let mut ok = true;
        tuples(a.size(), arity, |s| {
            if !ok {
                return;
            }
            tuples(a.size(), arity, |t| {
                if ok
                    && s.iter()
                        .zip(t)
                        .all(|(&x, &y)| labels[x as usize] == labels[y as usize])
                {
                    ok = labels[a.apply(op, s) as usize] == labels[a.apply(op, t) as usize];
                }
            });
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Every congruence as canonical labels, by filtering all set partitions.
pub fn brute_congruences(a: &FiniteAlgebra) -> Vec<Vec<u32>> {
    partitions(a.size())
        .into_iter()
        .filter(|p| is_compatible(a, p))
        .collect()
}

fn refines(x: &[u32], y: &[u32]) -> bool {
    (0..x.len()).all(|i| (0..x.len()).all(|j| x[i] != x[j] || y[i] == y[j]))
}

/// Subdirect irreducibility straight from the definition: the nonidentity
/// congruences have a least element.
pub fn brute_si(a: &FiniteAlgebra) -> bool {
    let cs = brute_congruences(a);
    let non_id: Vec<&Vec<u32>> = cs
        .iter()
        .filter(|c| c.iter().collect::<std::collections::HashSet<_>>().len() < c.len())
        .collect();
    if a.size() < 2 {
        return false;
    }
    non_id.iter().any(|m| non_id.iter().all(|c| refines(m, c)))
}

/// Closed subsets, by checking all `2^n` subsets.
pub fn brute_subuniverses(a: &FiniteAlgebra) -> Vec<Vec<Elem>> {
    let n = a.size();
    let sig = a.signature();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let set: Vec<Elem> = (0..n as Elem).filter(|&x| mask >> x & 1 == 1).collect();
        let mut closed = true;
        for op in 0..sig.len() {
            let arity = sig.arity(op);
            tuples(set.len(), arity, |idx| {
                if closed {
                    let args: Vec<Elem> = idx.iter().map(|&i| set[i as usize]).collect();
                    closed = mask >> a.apply(op, &args) & 1 == 1;
                }
            });
        }
        if closed {
            out.push(set);
        }
    }
    out
}

/// Evaluates a term over basic operations by structural recursion.
pub fn eval<A: Algebra + ?Sized>(a: &A, t: &Term, asg: &[Elem]) -> Elem {
    match t {
        Term::Var(i) => asg[*i],
        Term::App(name, args) => {
            let op = a.signature().lookup(name).expect("basic operation");
            let vals: Vec<Elem> = args.iter().map(|s| eval(a, s, asg)).collect();
            a.apply(op, &vals)
        }
    }
}

/// Value of `t` under every assignment of `nvars` variables in every generator.
pub fn value_vector(gens: &[FiniteAlgebra], t: &Term, nvars: usize) -> Vec<Elem> {
    let mut v = Vec::new();
    for g in gens {
        tuples(g.size(), nvars, |asg| v.push(eval(g, t, asg)));
    }
    v
}

/// Random terms over the basic operations of `sig` in `nvars` variables.
pub fn term_strategy(sig: &Signature, nvars: usize) -> BoxedStrategy<Term> {
    let ops: Vec<(String, usize)> = sig
        .symbols()
        .iter()
        .map(|s| (s.name.clone(), s.arity))
        .collect();
    let consts: Vec<String> = ops
        .iter()
        .filter(|o| o.1 == 0)
        .map(|o| o.0.clone())
        .collect();
    let vars = (0..nvars).map(Term::var).collect::<Vec<_>>();
    let mut leaves: Vec<Term> = vars;
    leaves.extend(consts.iter().map(|c| Term::constant(c)));
    let leaf = proptest::sample::select(leaves);
    let unary: Vec<String> = ops
        .iter()
        .filter(|o| o.1 == 1)
        .map(|o| o.0.clone())
        .collect();
    let binary: Vec<String> = ops
        .iter()
        .filter(|o| o.1 == 2)
        .map(|o| o.0.clone())
        .collect();
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let mut choices: Vec<BoxedStrategy<Term>> = Vec::new();
        if !unary.is_empty() {
            choices.push(
                (proptest::sample::select(unary.clone()), inner.clone())
                    .prop_map(|(f, t)| Term::unary(&f, t))
                    .boxed(),
            );
        }
        if !binary.is_empty() {
            choices.push(
                (
                    proptest::sample::select(binary.clone()),
                    inner.clone(),
                    inner.clone(),
                )
                    .prop_map(|(f, s, t)| Term::binary(&f, s, t))
                    .boxed(),
            );
        }
        proptest::strategy::Union::new(choices)
    })
    .boxed()
}

/// Small random algebras with one binary and one unary operation.
pub fn random_algebra(max: usize) -> impl Strategy<Value = FiniteAlgebra> {
    (1..=max).prop_flat_map(|n| {
        (
            proptest::collection::vec(0..n as Elem, n * n),
            proptest::collection::vec(0..n as Elem, n),
        )
            .prop_map(move |(f, g)| {
                let sig = Signature::from_pairs(&[("f", 2), ("g", 1)]);
                FiniteAlgebra::from_fn(None, sig, n, |op, args| {
                    if op == 0 {
                        f[args[0] as usize * n + args[1] as usize]
                    } else {
                        g[args[0] as usize]
                    }
                })
                .expect("tables in range")
            })
    })
}
