use std::time::Instant;

use crate::catalog::{self, classify, Poset};
use crate::error::{Error, Result};
use crate::finalg::{
    all_subuniverses, check_quasi_identity, direct_decomposition, is_isomorphic, power, product,
    restrict, Algebra, FiniteAlgebra, HomSearch, QuasiIdentity,
};
use crate::io::AlgebraFile;
use crate::variety::{free_algebra_until, Caps, FreeTower, Mode, VarietySpec};

use super::{asc_check, cite, sc_check, Certificate, Explored, Status, VarietyRecord, Verdict};

const MCKINSEY_LAW: &str = "(= (mu v0) one)";
const TABULATE_LIMIT: usize = 1 << 16;
const SUBUNIVERSE_CAP: usize = 4096;

fn require_closure(gens: &[FiniteAlgebra], what: &str) -> Result<()> {
    for g in gens {
        let r = classify(g)?;
        if !r.closure.holds {
            return Err(Error::Precondition(format!(
                "{what} generator {} is not a closure algebra: {}",
                g.name().unwrap_or("?"),
                r.closure.describe()
            )));
        }
    }
    Ok(())
}

/// `S_2 ∈ HS(K)`: a surjection from a subalgebra of some generator onto `S_2`.
fn s2_witness(spec: &VarietySpec, deadline: Option<Instant>) -> Result<Option<Certificate>> {
    let s2 = catalog::s_l(2)?;
    for (j, g) in spec.generators().iter().enumerate() {
        for u in all_subuniverses(g, SUBUNIVERSE_CAP)? {
            if u.len() < s2.size() {
                continue;
            }
            let sub = restrict(g, u.clone(), None)?;
            if let Some(h) = HomSearch::new(&sub.algebra, &s2)
                .surjective()
                .deadline(deadline)
                .first()?
            {
                return Ok(Some(Certificate::SubalgebraPresent {
                    variety: 0,
                    label: "S_2".into(),
                    generator: j,
                    universe: u,
                    target: AlgebraFile::from_algebra(&s2),
                    map: h.map,
                }));
            }
        }
    }
    Ok(None)
}

/// Checks the splitting equivalence `S_2 ∉ V(K)` iff `V(K)` satisfies the
/// McKinsey identity. With `with_asc`, also runs the ASC and SC checks and,
/// when ASC holds, compares SC with the McKinsey identity.
pub fn mckinsey_splitting(spec: &VarietySpec, with_asc: bool) -> Result<Verdict> {
    require_closure(spec.generators(), "every")?;
    let spec = spec.clone().with_mode(Mode::Variety);
    let deadline = Some(spec.caps.deadline());
    let law = QuasiIdentity::parse(MCKINSEY_LAW)?;
    let mut certs = Vec::new();
    let mut mckinsey = true;
    for (j, g) in spec.generators().iter().enumerate() {
        if let Some(asg) = check_quasi_identity(g, &law)? {
            certs.push(Certificate::IdentityFailure {
                variety: 0,
                generator: j,
                law: MCKINSEY_LAW.into(),
                assignment: asg,
            });
            mckinsey = false;
            break;
        }
    }
    if mckinsey {
        certs.push(Certificate::IdentityHolds {
            variety: 0,
            law: MCKINSEY_LAW.into(),
        });
    }
    let witness = s2_witness(&spec, deadline)?;
    let s2_present = witness.is_some();
    certs.extend(witness);

    let mut consistent = mckinsey != s2_present;
    let mut summary = format!(
        "McKinsey identity {}, S_2 {}",
        if mckinsey { "holds" } else { "fails" },
        if s2_present { "present" } else { "absent" }
    );
    let mut v = Verdict::new("mckinsey_splitting", Status::Holds, "");
    v.fact("mckinsey_holds", mckinsey);
    v.fact("s2_present", s2_present);
    v.cite(cite::MCKINSEY);
    if with_asc {
        let asc = asc_check(&spec)?;
        let sc = sc_check(&spec)?;
        v.fact("asc", asc.status.as_str());
        v.fact("sc", sc.status.as_str());
        if asc.status == Status::Holds && sc.status != Status::Inconclusive {
            let agree = (sc.status == Status::Holds) == mckinsey;
            v.fact("sc_iff_mckinsey", agree);
            summary.push_str(&format!("; ASC holds and SC {}", sc.status.as_str()));
            consistent &= agree;
            v.cite(cite::SC_MCKINSEY);
        }
    }
    v.status = if consistent {
        Status::Holds
    } else {
        Status::Fails
    };
    v.summary = summary;
    v.varieties.push(VarietyRecord::of(&spec));
    v.certificates = certs;
    Ok(v)
}

pub(crate) struct DecompositionSides {
    pub free_union: FiniteAlgebra,
    pub product: FiniteAlgebra,
    pub free_mckinsey_size: usize,
    pub free_monadic_size: usize,
    pub g_factor_sizes: Vec<usize>,
}

/// `F_V(k)` and `F_U(k) × G_W(k)`, where `G_W(k)` collects the directly
/// indecomposable factors of `F_W(k)` other than 2.
pub(crate) fn decomposition_sides(
    v: &VarietySpec,
    u: &VarietySpec,
    w: &VarietySpec,
    k: usize,
    deadline: Option<Instant>,
) -> Result<DecompositionSides> {
    let build = |s: &VarietySpec| free_algebra_until(s, k, deadline)?.to_finite(TABULATE_LIMIT);
    let fv = build(v)?;
    let fu = build(u)?;
    let fw = build(w)?;
    let dec = direct_decomposition(&fw)?;
    let g: Vec<&FiniteAlgebra> = dec.factors.iter().filter(|f| f.size() != 2).collect();
    let sig = fv.signature().clone();
    let gw = product(&sig, &g)?.algebra;
    let prod = product(&sig, &[&fu, &gw])?.algebra;
    Ok(DecompositionSides {
        free_union: fv,
        product: prod,
        free_mckinsey_size: fu.size(),
        free_monadic_size: fw.size(),
        g_factor_sizes: g.iter().map(|f| f.size()).collect(),
    })
}

/// Verifies `F_V(k) ≅ F_U(k) × G_W(k)` for `V = V(K_U ∪ K_W)`, with `K_U`
/// McKinsey and `K_W` monadic.
pub fn free_decomposition_check(
    k_u: Vec<FiniteAlgebra>,
    k_w: Vec<FiniteAlgebra>,
    k: usize,
    caps: Caps,
) -> Result<Verdict> {
    const PROCEDURE: &str = "free_decomposition_check";
    require_closure(&k_u, "McKinsey")?;
    require_closure(&k_w, "monadic")?;
    for g in &k_u {
        if !classify(g)?.mckinsey.holds {
            return Err(Error::Precondition(format!(
                "{} is not McKinsey",
                g.name().unwrap_or("?")
            )));
        }
    }
    for g in &k_w {
        if !classify(g)?.monadic.holds {
            return Err(Error::Precondition(format!(
                "{} is not monadic",
                g.name().unwrap_or("?")
            )));
        }
    }
    if k > caps.rank_max {
        return Err(Error::Precondition(format!(
            "rank {k} exceeds rank_max {}",
            caps.rank_max
        )));
    }
    let union: Vec<FiniteAlgebra> = k_u.iter().chain(&k_w).cloned().collect();
    let v = VarietySpec::variety(union)?.with_caps(caps);
    let u = VarietySpec::variety(k_u)?.with_caps(caps);
    let w = VarietySpec::variety(k_w)?.with_caps(caps);
    let records = vec![
        VarietyRecord::of(&v),
        VarietyRecord::of(&u),
        VarietyRecord::of(&w),
    ];

    let sides = match decomposition_sides(&v, &u, &w, k, Some(caps.deadline())) {
        Ok(s) => s,
        Err(e) if e.is_cap() => {
            let mut verdict = Verdict::new(PROCEDURE, Status::Inconclusive, e.to_string());
            verdict.varieties = records;
            verdict.cite(cite::FREE_DECOMPOSITION);
            return Ok(verdict);
        }
        Err(e) => return Err(e),
    };
    let iso = is_isomorphic(&sides.free_union, &sides.product)?;
    let (status, summary) = match &iso {
        Some(_) => (
            Status::Holds,
            format!(
                "F_V({k}) ≅ F_U({k}) × G_W({k}) with {} = {} × {}",
                sides.free_union.size(),
                sides.free_mckinsey_size,
                sides.g_factor_sizes.iter().product::<usize>()
            ),
        ),
        None => (
            Status::Fails,
            format!(
                "F_V({k}) ({} elements) is not isomorphic to F_U({k}) × G_W({k}) ({} elements)",
                sides.free_union.size(),
                sides.product.size()
            ),
        ),
    };
    let mut verdict = Verdict::new(PROCEDURE, status, summary);
    verdict.fact("free_union_size", sides.free_union.size());
    verdict.fact("free_mckinsey_size", sides.free_mckinsey_size);
    verdict.fact("free_monadic_size", sides.free_monadic_size);
    verdict.varieties = records;
    verdict.certificates.push(Certificate::FreeDecomposition {
        union: 0,
        mckinsey: 1,
        monadic: 2,
        rank: k,
        g_factor_sizes: sides.g_factor_sizes,
        map: iso.map(|h| h.map),
    });
    let mut free_sizes = vec![None; k + 1];
    free_sizes[k] = Some(sides.free_union.size());
    verdict.explored = Explored {
        rank: Some(k),
        free_sizes,
    };
    verdict.cite(cite::FREE_DECOMPOSITION);
    Ok(verdict)
}

/// Named non-embedding cases with a short description.
pub const SUITE_CASES: &[(&str, &str)] = &[
    ("heyting-2sq", "2² into the free algebra of V(2²⊕1)"),
    ("closure-4sq", "4² into the free algebra of V(B(2²⊕1), S_2)"),
    (
        "sanity-boolean-2sq",
        "the 4-element Boolean closure algebra into the free Boolean algebra (embeds)",
    ),
];

fn suite_case(name: &str) -> Result<(Vec<FiniteAlgebra>, FiniteAlgebra, Option<&'static str>)> {
    let get = |n: &str| {
        catalog::by_name(n).ok_or_else(|| Error::InvalidData(format!("missing catalog entry {n}")))
    };
    Ok(match name {
        "heyting-2sq" => (
            vec![get("heyting-lev2")?],
            get("two-sq-heyting")?,
            Some(cite::HEYTING_2SQ),
        ),
        "closure-4sq" => (
            vec![get("b-lev2")?, catalog::s_l(2)?],
            power(&catalog::four(), 2)?.algebra.with_name("4²"),
            Some(cite::CLOSURE_4SQ),
        ),
        "sanity-boolean-2sq" => (
            vec![catalog::two()],
            catalog::complex_closure(&Poset::antichain(2))?.with_name("2²"),
            None,
        ),
        _ => {
            let known: Vec<&str> = SUITE_CASES.iter().map(|(n, _)| *n).collect();
            return Err(Error::Precondition(format!(
                "unknown case `{name}`; expected one of {}",
                known.join(", ")
            )));
        }
    })
}

/// Exhaustive embedding search of a fixed subject into `F(k)`, `k ≤ rank_max`.
/// No embedding is bounded evidence only; the verdict says up to which rank.
pub fn non_embedding_suite(name: &str, caps: Caps) -> Result<Verdict> {
    const PROCEDURE: &str = "non_embedding_suite";
    let (gens, subject, citation) = suite_case(name)?;
    let spec = VarietySpec::variety(gens)?.with_caps(caps);
    let mut tower = FreeTower::new(&spec, Some(caps.deadline()));
    let deadline = tower.deadline();
    let label = subject.name().unwrap_or("subject").to_string();
    let mut certs = Vec::new();
    let mut outcome: Option<(Status, String)> = None;
    let mut partial = None;
    for k in 1..=caps.rank_max {
        let f = match tower.get(k) {
            Ok(f) => f,
            Err(e) if e.is_cap() => {
                partial = e.explored();
                outcome = Some((Status::Inconclusive, format!("F({k}) not completed: {e}")));
                break;
            }
            Err(e) => return Err(e),
        };
        match HomSearch::new(&subject, f)
            .injective()
            .deadline(deadline)
            .first()
        {
            Ok(Some(h)) => {
                certs.push(Certificate::Embedding {
                    variety: 0,
                    label: label.clone(),
                    subject: AlgebraFile::from_algebra(&subject),
                    rank: k,
                    map: h.map,
                });
                outcome = Some((Status::Fails, format!("{label} embeds into F({k})")));
                break;
            }
            Ok(None) => certs.push(Certificate::NoEmbedding {
                variety: 0,
                label: label.clone(),
                subject: AlgebraFile::from_algebra(&subject),
                rank: k,
                free_size: f.size(),
            }),
            Err(e) if e.is_cap() => {
                outcome = Some((
                    Status::Inconclusive,
                    format!("embedding search into F({k}) stopped: {e}"),
                ));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let (status, summary) = outcome.unwrap_or_else(|| {
        (
            Status::Holds,
            format!(
                "no embedding of {label} into F(k) for k ≤ {} (bounded evidence, up to rank {})",
                caps.rank_max, caps.rank_max
            ),
        )
    });
    let mut v = Verdict::new(PROCEDURE, status, summary);
    v.fact("case", name);
    if let Some(p) = partial {
        v.fact("explored_elements", p);
    }
    if let Some(c) = citation {
        v.cite(c);
    }
    v.varieties.push(VarietyRecord::of(&spec));
    v.certificates = certs;
    v.explored = Explored::of(&tower);
    Ok(v)
}
