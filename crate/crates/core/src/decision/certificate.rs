use serde::{Deserialize, Serialize};

use crate::congruence::{all_congruences, Congruence, DEFAULT_CONGRUENCE_CAP};
use crate::error::{Error, Result};
use crate::finalg::{
    for_each_tuple, product, quotient, restrict, Algebra, Elem, FiniteAlgebra, HomSearch,
    Homomorphism, QuasiIdentity,
};
use crate::io::AlgebraFile;
use crate::variety::{free_algebra_until, FreeAlgebra, FreeTower, VarietySpec};

use super::splitting::decomposition_sides;
use super::Verdict;

/// Evidence attached to a verdict. Variety fields index `Verdict::varieties`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `map` embeds `subject` into `F(rank)`.
    Embedding {
        variety: usize,
        label: String,
        subject: AlgebraFile,
        rank: usize,
        map: Vec<Elem>,
    },
    /// No homomorphism `subject -> F(0)`, hence none into any `F(k)`. When
    /// `qi` is set, the subject presents its premise and the premise has no
    /// solution in `F(0)`.
    NoHomToRetract {
        variety: usize,
        label: String,
        subject: AlgebraFile,
        f0_size: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        qi: Option<String>,
    },
    /// `witness.0 ∨ witness.1 = 1` with neither equal to 1, while 1 is
    /// join-irreducible in `F(k)` for every checked rank.
    JoinIrreducibleTop {
        variety: usize,
        label: String,
        subject: AlgebraFile,
        witness: (Elem, Elem),
        checked_ranks: Vec<usize>,
    },
    /// Every congruence of `subject` with a nontrivial quotient whose top is
    /// join-irreducible identifies `unseparated`, so `subject` is not a
    /// subdirect product of such quotients.
    KernelFilter {
        variety: usize,
        label: String,
        subject: AlgebraFile,
        admissible: Vec<Vec<u32>>,
        unseparated: (Elem, Elem),
        checked_ranks: Vec<usize>,
    },
    /// Homomorphisms `subject -> F(rank)` that jointly separate all elements.
    Separating {
        variety: usize,
        label: String,
        subject: AlgebraFile,
        homs: Vec<(usize, Vec<Elem>)>,
    },
    /// A homomorphism from the premise-presented algebra into `F(rank)`; the
    /// generator images solve the premise of `qi`.
    Unifier {
        variety: usize,
        qi: String,
        subject: AlgebraFile,
        generators: Vec<Elem>,
        rank: usize,
        map: Vec<Elem>,
    },
    /// The premise of `qi` holds and the conclusion fails at `assignment` in `F(rank)`.
    QiCounterexample {
        variety: usize,
        qi: String,
        rank: usize,
        assignment: Vec<Elem>,
    },
    /// `qi` holds in the class: on every generator (`rank` absent, quasivariety
    /// mode) or in the algebra presented by its premise over `F(rank)`.
    QiValid {
        variety: usize,
        qi: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rank: Option<usize>,
    },
    IdentityFailure {
        variety: usize,
        generator: usize,
        law: String,
        assignment: Vec<Elem>,
    },
    /// `law` holds in every generator.
    IdentityHolds { variety: usize, law: String },
    /// `map` is a surjective homomorphism from the subalgebra of generator
    /// `generator` on `universe` onto `target`.
    SubalgebraPresent {
        variety: usize,
        label: String,
        generator: usize,
        universe: Vec<Elem>,
        target: AlgebraFile,
        map: Vec<Elem>,
    },
    /// Compares `F_V(rank)` with `F_U(rank) × G_W(rank)`; `map` is an
    /// isomorphism when present, otherwise none exists.
    FreeDecomposition {
        union: usize,
        mckinsey: usize,
        monadic: usize,
        rank: usize,
        g_factor_sizes: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        map: Option<Vec<Elem>>,
    },
    /// Exhaustive search found no embedding of `subject` into `F(rank)`.
    NoEmbedding {
        variety: usize,
        label: String,
        subject: AlgebraFile,
        rank: usize,
        free_size: usize,
    },
    /// A hypothesis asserted by the user, not checked.
    Flag { name: String, note: String },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Embedding { .. } => "embedding",
            Certificate::NoHomToRetract { .. } => "no_hom_to_retract",
            Certificate::JoinIrreducibleTop { .. } => "join_irreducible_top",
            Certificate::KernelFilter { .. } => "kernel_filter",
            Certificate::Separating { .. } => "separating",
            Certificate::Unifier { .. } => "unifier",
            Certificate::QiCounterexample { .. } => "qi_counterexample",
            Certificate::QiValid { .. } => "qi_valid",
            Certificate::IdentityFailure { .. } => "identity_failure",
            Certificate::IdentityHolds { .. } => "identity_holds",
            Certificate::SubalgebraPresent { .. } => "subalgebra_present",
            Certificate::FreeDecomposition { .. } => "free_decomposition",
            Certificate::NoEmbedding { .. } => "no_embedding",
            Certificate::Flag { .. } => "flag",
        }
    }

    /// Short human description.
    pub fn describe(&self) -> String {
        match self {
            Certificate::Embedding { label, rank, .. } => format!("{label} embeds into F({rank})"),
            Certificate::NoHomToRetract { label, f0_size, .. } => {
                format!("no homomorphism from {label} into F(0) (size {f0_size})")
            }
            Certificate::JoinIrreducibleTop {
                label,
                witness,
                checked_ranks,
                ..
            } => format!(
                "top of {label} is the join of {} and {}, while the top of F is join-irreducible (checked at ranks {checked_ranks:?})",
                witness.0, witness.1
            ),
            Certificate::KernelFilter {
                label, unseparated, ..
            } => format!(
                "every quotient of {label} with a join-irreducible top identifies {} and {}",
                unseparated.0, unseparated.1
            ),
            Certificate::Separating { label, homs, .. } => {
                format!("{} homomorphism(s) from {label} into F separate all elements", homs.len())
            }
            Certificate::Unifier { rank, .. } => format!("premise is unified in F({rank})"),
            Certificate::QiCounterexample { rank, assignment, .. } => {
                format!("counterexample in F({rank}) at {assignment:?}")
            }
            Certificate::QiValid { rank: None, .. } => "holds in every generator".into(),
            Certificate::QiValid { rank: Some(r), .. } => {
                format!("conclusion holds in the algebra presented by the premise over F({r})")
            }
            Certificate::IdentityFailure {
                generator,
                law,
                assignment,
                ..
            } => format!("{law} fails in generator {generator} at {assignment:?}"),
            Certificate::IdentityHolds { law, .. } => format!("{law} holds in every generator"),
            Certificate::SubalgebraPresent { label, generator, .. } => {
                format!("{label} is a homomorphic image of a subalgebra of generator {generator}")
            }
            Certificate::FreeDecomposition { rank, map, .. } => match map {
                Some(_) => format!("F_V({rank}) ≅ F_U({rank}) × G_W({rank})"),
                None => format!("F_V({rank}) is not isomorphic to F_U({rank}) × G_W({rank})"),
            },
            Certificate::NoEmbedding {
                label, rank, free_size, ..
            } => format!("no embedding of {label} into F({rank}) of size {free_size}"),
            Certificate::Flag { name, note } => format!("assumed {name}: {note}"),
        }
    }
}

/// Outcome of re-checking one certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub kind: String,
    pub ok: bool,
    pub note: String,
}

/// Re-checks every certificate of a verdict against its recorded varieties.
/// Free algebras are rebuilt; searches are only re-run for exhaustive
/// negative evidence.
pub fn verify(verdict: &Verdict) -> Result<Vec<Check>> {
    let specs = verdict
        .varieties
        .iter()
        .map(|v| v.to_spec())
        .collect::<Result<Vec<_>>>()?;
    Ok(verdict
        .certificates
        .iter()
        .map(|c| {
            let (ok, note) = match check_one(c, &specs) {
                Ok(()) => (true, c.describe()),
                Err(e) => (false, e.to_string()),
            };
            Check {
                kind: c.kind().to_string(),
                ok,
                note,
            }
        })
        .collect())
}

fn spec_at(specs: &[VarietySpec], i: usize) -> Result<&VarietySpec> {
    specs
        .get(i)
        .ok_or_else(|| Error::InvalidData(format!("certificate refers to missing variety {i}")))
}

fn free(spec: &VarietySpec, k: usize) -> Result<FreeAlgebra> {
    free_algebra_until(spec, k, None)
}

fn fail(msg: impl Into<String>) -> Result<()> {
    Err(Error::InvalidData(msg.into()))
}

fn check_hom<S: Algebra + ?Sized, T: Algebra + ?Sized>(
    map: &[Elem],
    s: &S,
    t: &T,
) -> Result<Homomorphism> {
    let h = Homomorphism::new(map.to_vec());
    if !h.verify(s, t) {
        return Err(Error::InvalidData("map is not a homomorphism".into()));
    }
    Ok(h)
}

fn check_one(c: &Certificate, specs: &[VarietySpec]) -> Result<()> {
    match c {
        Certificate::Embedding {
            variety,
            subject,
            rank,
            map,
            ..
        } => {
            let s = subject.to_algebra()?;
            let f = free(spec_at(specs, *variety)?, *rank)?;
            if !check_hom(map, &s, &f)?.is_injective() {
                return fail("map is not injective");
            }
            Ok(())
        }
        Certificate::NoHomToRetract {
            variety,
            subject,
            f0_size,
            qi,
            ..
        } => {
            let spec = spec_at(specs, *variety)?;
            if !spec.has_constants() {
                return fail("retract argument needs constants");
            }
            let s = subject.to_algebra()?;
            let f0 = free(spec, 0)?;
            if f0.size() != *f0_size {
                return fail(format!(
                    "F(0) has {} elements, certificate says {f0_size}",
                    f0.size()
                ));
            }
            if HomSearch::new(&s, &f0).exists()? {
                return fail("a homomorphism into F(0) exists");
            }
            if s.size() <= 6 && any_hom_by_enumeration(&s, &f0) {
                return fail("exhaustive enumeration found a homomorphism into F(0)");
            }
            if let Some(src) = qi {
                let parsed = QuasiIdentity::parse(src)?;
                let q = parsed.compile(spec.signature())?;
                let mut stack = Vec::new();
                let mut solved = false;
                for_each_tuple(f0.size(), parsed.nvars, |asg| {
                    solved = solved || q.premise_holds(&f0, asg, &mut stack);
                });
                if solved {
                    return fail("the premise has a solution in F(0)");
                }
            }
            Ok(())
        }
        Certificate::JoinIrreducibleTop {
            variety,
            subject,
            witness,
            checked_ranks,
            ..
        } => {
            let spec = spec_at(specs, *variety)?;
            let s = subject.to_algebra()?;
            if !is_bounded_lattice_signature(&s) {
                return fail("certificate applies to bounded-lattice signatures only");
            }
            let (join, one) = lattice_ops(&s)?;
            let (a, b) = *witness;
            if a as usize >= s.size() || b as usize >= s.size() {
                return fail("witness out of range");
            }
            let top = s.constant(one);
            if a == top || b == top || s.apply(join, &[a, b]) != top {
                return fail("witness does not split the top");
            }
            for &k in checked_ranks {
                if top_join_witness(&free(spec, k)?).is_some() {
                    return fail(format!("1 is join-reducible in F({k})"));
                }
            }
            Ok(())
        }
        Certificate::KernelFilter {
            variety,
            subject,
            admissible,
            unseparated,
            checked_ranks,
            ..
        } => {
            let spec = spec_at(specs, *variety)?;
            let s = subject.to_algebra()?;
            let recomputed = admissible_kernels(&s)?;
            let listed: Vec<&[u32]> = admissible.iter().map(Vec::as_slice).collect();
            let actual: Vec<&[u32]> = recomputed.iter().map(Congruence::blocks).collect();
            if listed != actual {
                return fail("listed kernels differ from the recomputed ones");
            }
            let (a, b) = *unseparated;
            if a == b || !recomputed.iter().all(|t| t.related(a, b)) {
                return fail("the pair is separated by some admissible kernel");
            }
            for &k in checked_ranks {
                if top_join_witness(&free(spec, k)?).is_some() {
                    return fail(format!("1 is join-reducible in F({k})"));
                }
            }
            Ok(())
        }
        Certificate::Separating {
            variety,
            subject,
            homs,
            ..
        } => {
            let spec = spec_at(specs, *variety)?;
            let s = subject.to_algebra()?;
            let mut tower = FreeTower::new(spec, None);
            let mut checked = Vec::new();
            for (k, map) in homs {
                checked.push(check_hom(map, &s, tower.get(*k)?)?);
            }
            if let Some((a, b)) = crate::variety::unseparated_pair(s.size(), &checked) {
                return fail(format!("elements {a} and {b} are not separated"));
            }
            Ok(())
        }
        Certificate::Unifier {
            variety,
            qi,
            subject,
            generators,
            rank,
            map,
        } => {
            let spec = spec_at(specs, *variety)?;
            let s = subject.to_algebra()?;
            let f = free(spec, *rank)?;
            let h = check_hom(map, &s, &f)?;
            let q = QuasiIdentity::parse(qi)?.compile(spec.signature())?;
            let asg: Vec<Elem> = generators.iter().map(|&g| h.image(g)).collect();
            if asg.len() != q_nvars(qi)? || !q.premise_holds(&f, &asg, &mut Vec::new()) {
                return fail("generator images do not solve the premise");
            }
            Ok(())
        }
        Certificate::QiCounterexample {
            variety,
            qi,
            rank,
            assignment,
        } => {
            let spec = spec_at(specs, *variety)?;
            let f = free(spec, *rank)?;
            let q = QuasiIdentity::parse(qi)?.compile(spec.signature())?;
            if assignment.len() != q_nvars(qi)?
                || assignment.iter().any(|&a| a as usize >= f.size())
            {
                return fail("assignment has the wrong shape");
            }
            let mut st = Vec::new();
            if !q.premise_holds(&f, assignment, &mut st)
                || q.conclusion_holds(&f, assignment, &mut st)
            {
                return fail("assignment is not a counterexample");
            }
            Ok(())
        }
        Certificate::QiValid { variety, qi, rank } => {
            let spec = spec_at(specs, *variety)?;
            let q = QuasiIdentity::parse(qi)?;
            match rank {
                None => {
                    for g in spec.generators() {
                        if crate::finalg::check_quasi_identity(g, &q)?.is_some() {
                            return fail("a generator refutes the quasi-identity");
                        }
                    }
                    Ok(())
                }
                Some(k) => {
                    let f = free(spec, *k)?;
                    if !super::qi::premise_forces_conclusion(&f, spec.mode, &q)? {
                        return fail("the presented algebra refutes the conclusion");
                    }
                    Ok(())
                }
            }
        }
        Certificate::IdentityFailure {
            variety,
            generator,
            law,
            assignment,
        } => {
            let spec = spec_at(specs, *variety)?;
            let g = spec
                .generators()
                .get(*generator)
                .ok_or_else(|| Error::InvalidData("no such generator".into()))?;
            let q = QuasiIdentity::parse(law)?;
            let c = q.compile(g.signature())?;
            if assignment.len() != q.nvars || assignment.iter().any(|&a| a as usize >= g.size()) {
                return fail("assignment has the wrong shape");
            }
            let mut st = Vec::new();
            if !c.premise_holds(g, assignment, &mut st)
                || c.conclusion_holds(g, assignment, &mut st)
            {
                return fail("the law holds at the assignment");
            }
            Ok(())
        }
        Certificate::IdentityHolds { variety, law } => {
            let spec = spec_at(specs, *variety)?;
            let q = QuasiIdentity::parse(law)?;
            for g in spec.generators() {
                if crate::finalg::check_quasi_identity(g, &q)?.is_some() {
                    return fail("a generator refutes the law");
                }
            }
            Ok(())
        }
        Certificate::SubalgebraPresent {
            variety,
            generator,
            universe,
            target,
            map,
            ..
        } => {
            let spec = spec_at(specs, *variety)?;
            let g = spec
                .generators()
                .get(*generator)
                .ok_or_else(|| Error::InvalidData("no such generator".into()))?;
            if universe.iter().any(|&e| e as usize >= g.size())
                || universe.windows(2).any(|w| w[0] >= w[1])
            {
                return fail("universe is not a sorted subset of the generator");
            }
            let sub = restrict(g, universe.clone(), None)?;
            let t = target.to_algebra()?;
            if !check_hom(map, &sub.algebra, &t)?.is_surjective(t.size()) {
                return fail("map is not onto the target");
            }
            Ok(())
        }
        Certificate::FreeDecomposition {
            union,
            mckinsey,
            monadic,
            rank,
            g_factor_sizes,
            map,
        } => {
            let v = spec_at(specs, *union)?;
            let u = spec_at(specs, *mckinsey)?;
            let w = spec_at(specs, *monadic)?;
            let sides = decomposition_sides(v, u, w, *rank, None)?;
            if &sides.g_factor_sizes != g_factor_sizes {
                return fail("G_W factors differ from the recorded ones");
            }
            match map {
                Some(m) => {
                    let h = check_hom(m, &sides.free_union, &sides.product)?;
                    if !(h.is_injective() && sides.free_union.size() == sides.product.size()) {
                        return fail("map is not a bijection");
                    }
                }
                None => {
                    if crate::finalg::is_isomorphic(&sides.free_union, &sides.product)?.is_some() {
                        return fail("the two sides are isomorphic");
                    }
                }
            }
            Ok(())
        }
        Certificate::NoEmbedding {
            variety,
            subject,
            rank,
            free_size,
            ..
        } => {
            let spec = spec_at(specs, *variety)?;
            let s = subject.to_algebra()?;
            let f = free(spec, *rank)?;
            if f.size() != *free_size {
                return fail(format!(
                    "F({rank}) has {} elements, certificate says {free_size}",
                    f.size()
                ));
            }
            if HomSearch::new(&s, &f).injective().exists()? {
                return fail("an embedding exists");
            }
            Ok(())
        }
        Certificate::Flag { .. } => Ok(()),
    }
}

fn q_nvars(src: &str) -> Result<usize> {
    Ok(QuasiIdentity::parse(src)?.nvars)
}

/// Brute force over all maps; for tiny sources only.
fn any_hom_by_enumeration<S: Algebra + ?Sized, T: Algebra + ?Sized>(s: &S, t: &T) -> bool {
    let mut found = false;
    for_each_tuple(t.size(), s.size(), |m| {
        found = found || Homomorphism::new(m.to_vec()).verify(s, t);
    });
    found
}

/// True when the signature is exactly `meet, join, zero, one` in some order.
pub(crate) fn is_bounded_lattice_signature<A: Algebra + ?Sized>(alg: &A) -> bool {
    let sig = alg.signature();
    sig.len() == 4
        && sig.has("meet", 2)
        && sig.has("join", 2)
        && sig.has("zero", 0)
        && sig.has("one", 0)
}

fn lattice_ops<A: Algebra + ?Sized>(alg: &A) -> Result<(usize, usize)> {
    let sig = alg.signature();
    match (sig.lookup("join"), sig.lookup("one")) {
        (Some(j), Some(o)) => Ok((j, o)),
        _ => Err(Error::SignatureMismatch("needs join and one".into())),
    }
}

/// The least pair `a ≤ b` (as integers) of non-top elements joining to the top.
pub(crate) fn top_join_witness<A: Algebra + ?Sized>(alg: &A) -> Option<(Elem, Elem)> {
    let (join, one) = lattice_ops(alg).ok()?;
    let top = alg.constant(one);
    let n = alg.size() as Elem;
    for a in 0..n {
        if a == top {
            continue;
        }
        for b in a..n {
            if b != top && alg.apply(join, &[a, b]) == top {
                return Some((a, b));
            }
        }
    }
    None
}

/// Checks that 1 is join-irreducible in `F(k)` for `k ≤ min(2, rank_max)`.
/// Returns the checked ranks, or `None` when the signature is not a bounded
/// lattice, some rank is join-reducible, or a cap intervened.
pub(crate) fn free_top_irreducible(tower: &mut FreeTower<'_>) -> Result<Option<Vec<usize>>> {
    let spec = tower.spec().clone();
    if spec.generators().is_empty() || !is_bounded_lattice_signature(&spec.generators()[0]) {
        return Ok(None);
    }
    let mut ranks = Vec::new();
    for k in 0..=spec.caps.rank_max.min(2) {
        match tower.get(k) {
            Ok(f) => {
                if top_join_witness(f).is_some() {
                    return Ok(None);
                }
            }
            Err(e) if e.is_cap() => return Ok(None),
            Err(e) => return Err(e),
        }
        ranks.push(k);
    }
    Ok(Some(ranks))
}

/// Congruences with a nontrivial quotient whose top is join-irreducible.
pub(crate) fn admissible_kernels(alg: &FiniteAlgebra) -> Result<Vec<Congruence>> {
    let mut out = Vec::new();
    for theta in all_congruences(alg, DEFAULT_CONGRUENCE_CAP)?.congruences {
        if theta.num_blocks() <= 1 {
            continue;
        }
        if top_join_witness(&quotient(alg, &theta)?.algebra).is_none() {
            out.push(theta);
        }
    }
    Ok(out)
}

/// `A × C` with a readable name.
pub(crate) fn with_c(a: &FiniteAlgebra, c: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let name = format!("{}×{}", a.name().unwrap_or("A"), c.name().unwrap_or("C"));
    Ok(product(a.signature(), &[a, c])?.algebra.with_name(name))
}
