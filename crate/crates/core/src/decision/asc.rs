use std::time::Instant;

use crate::congruence::{is_simple, Congruence};
use crate::error::{Error, Result};
use crate::finalg::{Algebra, Elem, FiniteAlgebra, HomSearch, Homomorphism};
use crate::io::AlgebraFile;
use crate::variety::{
    in_qf_in, in_quasivariety, in_variety_until, si_members, Answer, FreeTower, Mode, VarietySpec,
};

use super::certificate::{admissible_kernels, free_top_irreducible, top_join_witness, with_c};
use super::{cite, Certificate, Explored, Status, VarietyRecord, Verdict};

const TABULATE_C: usize = 1 << 12;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Property {
    Asc,
    Sc,
}

/// Almost structural completeness of the class: every finite SI member `S`
/// satisfies `S ≤ F(k)` or `S×C ≤ F(k)` for some `k ≤ rank_max`, with
/// `C = F(0)`.
pub fn asc_check(spec: &VarietySpec) -> Result<Verdict> {
    check(spec, Property::Asc)
}

/// Structural completeness: every finite SI member embeds into some `F(k)`.
pub fn sc_check(spec: &VarietySpec) -> Result<Verdict> {
    check(spec, Property::Sc)
}

fn cap_reason(e: Error) -> Result<String> {
    if e.is_cap() {
        Ok(e.to_string())
    } else {
        Err(e)
    }
}

/// `C = F(0)` as a finite algebra, checked simple. `Ok(Err(reason))` when a
/// cap stopped the construction.
fn retract_c(tower: &mut FreeTower<'_>) -> Result<Result<FiniteAlgebra, String>> {
    if !tower.spec().has_constants() {
        return Err(Error::Precondition(
            "the criterion needs constants so that F(0) is a retract of F".into(),
        ));
    }
    let c = match tower.get(0).and_then(|f| f.to_finite(TABULATE_C)) {
        Ok(c) => c.with_name("C"),
        Err(e) => return Ok(Err(cap_reason(e)?)),
    };
    if c.size() <= 1 {
        return Err(Error::Precondition("F(0) is trivial".into()));
    }
    if !is_simple(&c)? {
        return Err(Error::Precondition(format!(
            "F(0) with {} elements is not simple",
            c.size()
        )));
    }
    Ok(Ok(c))
}

fn embed<T: Algebra + ?Sized>(
    s: &FiniteAlgebra,
    f: &T,
    deadline: Option<Instant>,
) -> Result<Option<Homomorphism>> {
    HomSearch::new(s, f).injective().deadline(deadline).first()
}

fn check(spec: &VarietySpec, prop: Property) -> Result<Verdict> {
    let procedure = match prop {
        Property::Asc => "asc_check",
        Property::Sc => "sc_check",
    };
    let mut tower = FreeTower::new(spec, Some(spec.caps.deadline()));
    let deadline = tower.deadline();
    let c = match retract_c(&mut tower)? {
        Ok(c) => c,
        Err(reason) => {
            let mut v = Verdict::new(
                procedure,
                Status::Inconclusive,
                format!("F(0) not built: {reason}"),
            );
            v.varieties.push(VarietyRecord::of(spec));
            v.explored = Explored::of(&tower);
            return Ok(v);
        }
    };
    let size_cap = spec
        .generators()
        .iter()
        .map(Algebra::size)
        .max()
        .unwrap_or(1);
    let sis = si_members(spec, size_cap)?;
    let lattice_ranks = free_top_irreducible(&mut tower)?;

    let mut certs = Vec::new();
    let mut refuted = Vec::new();
    let mut unresolved = Vec::new();
    let mut citations = vec![match prop {
        Property::Asc => cite::ASC_CRITERION,
        Property::Sc => cite::SC_CRITERION,
    }];

    for m in &sis {
        let s = &m.algebra;
        if let (Some(ranks), Some(w)) = (&lattice_ranks, top_join_witness(s)) {
            certs.push(Certificate::JoinIrreducibleTop {
                variety: 0,
                label: m.name.clone(),
                subject: AlgebraFile::from_algebra(s),
                witness: w,
                checked_ranks: ranks.clone(),
            });
            citations.push(cite::JOIN_IRREDUCIBLE);
            refuted.push(m.name.clone());
            continue;
        }
        let maps_to_c = {
            let f0 = tower.get(0)?;
            match HomSearch::new(s, f0).deadline(deadline).exists() {
                Ok(b) => b,
                Err(e) => {
                    unresolved.push(format!("{}: {}", m.name, cap_reason(e)?));
                    continue;
                }
            }
        };
        if !maps_to_c && prop == Property::Sc {
            certs.push(Certificate::NoHomToRetract {
                variety: 0,
                label: m.name.clone(),
                subject: AlgebraFile::from_algebra(s),
                f0_size: c.size(),
                qi: None,
            });
            citations.push(cite::RETRACT);
            refuted.push(m.name.clone());
            continue;
        }
        let sxc = match prop {
            Property::Asc => Some(with_c(s, &c)?.with_name(format!("{}×C", m.name))),
            Property::Sc => None,
        };
        let mut found = None;
        let mut reason = format!("no embedding into F(k) for k ≤ {}", spec.caps.rank_max);
        'ranks: for k in 1..=spec.caps.rank_max {
            let f = match tower.get(k) {
                Ok(f) => f,
                Err(e) => {
                    reason = cap_reason(e)?;
                    break;
                }
            };
            let candidates = [maps_to_c.then_some(s), sxc.as_ref()];
            for subject in candidates.into_iter().flatten() {
                match embed(subject, f, deadline) {
                    Ok(Some(h)) => {
                        found = Some((subject.clone(), k, h));
                        break 'ranks;
                    }
                    Ok(None) => {}
                    Err(e) => {
                        reason = cap_reason(e)?;
                        break 'ranks;
                    }
                }
            }
        }
        match found {
            Some((subject, rank, h)) => certs.push(Certificate::Embedding {
                variety: 0,
                label: subject.name().unwrap_or("?").to_string(),
                subject: AlgebraFile::from_algebra(&subject),
                rank,
                map: h.map,
            }),
            None => unresolved.push(format!("{}: {reason}", m.name)),
        }
    }

    let names: Vec<&str> = sis.iter().map(|m| m.name.as_str()).collect();
    let (status, summary) = if !refuted.is_empty() {
        (
            Status::Fails,
            format!("refuted by SI member(s) {}", refuted.join(", ")),
        )
    } else if unresolved.is_empty() {
        let how = match prop {
            Property::Asc => "S ≤ F or S×C ≤ F",
            Property::Sc => "S ≤ F",
        };
        (
            Status::Holds,
            format!("{how} for every finite SI member ({})", names.join(", ")),
        )
    } else {
        (
            Status::Inconclusive,
            format!("unresolved: {}", unresolved.join("; ")),
        )
    };
    let mut v = Verdict::new(procedure, status, summary);
    if prop == Property::Asc {
        certs.push(Certificate::Flag {
            name: "FMP".into(),
            note: "finite model property of the quasivariety, user-asserted".into(),
        });
        certs.push(Certificate::Flag {
            name: "EDPRC".into(),
            note: "equationally definable principal relative congruences, user-asserted".into(),
        });
        citations.push(cite::SFMP);
    }
    if lattice_ranks.is_some() && spec.mode == Mode::Variety {
        citations.push(cite::LATTICE_EQUIVALENCE);
    }
    for c in citations {
        v.cite(c);
    }
    v.fact("si_members", names);
    v.fact("c_size", c.size());
    v.varieties.push(VarietyRecord::of(spec));
    v.certificates = certs;
    v.explored = Explored::of(&tower);
    Ok(v)
}

/// Membership of `A` in the ASC core: `A × C ∈ Q(F)`.
pub fn ascc_membership(a: &FiniteAlgebra, spec: &VarietySpec) -> Result<Verdict> {
    const PROCEDURE: &str = "ascc_membership";
    if a.signature() != spec.signature() {
        return Err(Error::SignatureMismatch(
            "algebra and spec differ in signature".into(),
        ));
    }
    let mut tower = FreeTower::new(spec, Some(spec.caps.deadline()));
    let deadline = tower.deadline();
    let inconclusive = |reason: String, tower: &FreeTower<'_>| {
        let mut v = Verdict::new(PROCEDURE, Status::Inconclusive, reason);
        v.varieties.push(VarietyRecord::of(spec));
        v.explored = Explored::of(tower);
        v.cite(cite::ASCC);
        v
    };
    // Q(K) ⊆ V(K), and separating homomorphisms into K are far cheaper to
    // find than a surjection from a free algebra
    let member = match in_quasivariety(a, spec)? {
        Answer::Yes(_) => None,
        Answer::No(_) if spec.mode == Mode::Quasivariety => Some(false),
        Answer::Inconclusive { reason } if spec.mode == Mode::Quasivariety => {
            return Ok(inconclusive(reason, &tower))
        }
        _ => match in_variety_until(a, spec, deadline)? {
            Answer::Yes(_) => None,
            Answer::No(_) => Some(false),
            Answer::Inconclusive { reason } => return Ok(inconclusive(reason, &tower)),
        },
    };
    if member == Some(false) {
        return Err(Error::Precondition(format!(
            "{} is not in the class generated by {}",
            a.name().unwrap_or("A"),
            spec.label()
        )));
    }
    let c = match retract_c(&mut tower)? {
        Ok(c) => c,
        Err(reason) => return Ok(inconclusive(reason, &tower)),
    };
    let p = with_c(a, &c)?;
    let label = p.name().unwrap_or("A×C").to_string();

    if let Some(ranks) = free_top_irreducible(&mut tower)? {
        let kernels = admissible_kernels(&p)?;
        let meet = kernels
            .iter()
            .fold(Congruence::total(p.size()), |acc, k| acc.meet(k));
        if let Some(pair) = first_related_pair(&meet) {
            let mut v = Verdict::new(
                PROCEDURE,
                Status::Fails,
                format!(
                    "{label} is not a subdirect product of algebras with a join-irreducible top"
                ),
            );
            v.varieties.push(VarietyRecord::of(spec));
            v.certificates.push(Certificate::KernelFilter {
                variety: 0,
                label,
                subject: AlgebraFile::from_algebra(&p),
                admissible: kernels.iter().map(|k| k.blocks().to_vec()).collect(),
                unseparated: pair,
                checked_ranks: ranks,
            });
            v.explored = Explored::of(&tower);
            v.cite(cite::ASCC);
            v.cite(cite::JOIN_IRREDUCIBLE);
            return Ok(v);
        }
    }

    let answer = in_qf_in(&p, &mut tower, spec.caps.rank_max)?;
    let mut v = match answer {
        Answer::Yes(w) => {
            let mut v = Verdict::new(PROCEDURE, Status::Holds, format!("{label} ∈ Q(F)"));
            v.certificates.push(Certificate::Separating {
                variety: 0,
                label,
                subject: AlgebraFile::from_algebra(&p),
                homs: w.homs.into_iter().map(|(k, h)| (k, h.map)).collect(),
            });
            v
        }
        Answer::No(n) => {
            let mut v = Verdict::new(
                PROCEDURE,
                Status::Fails,
                format!("{label} has no homomorphism into F"),
            );
            v.certificates.push(Certificate::NoHomToRetract {
                variety: 0,
                label,
                subject: AlgebraFile::from_algebra(&p),
                f0_size: n.f0_size,
                qi: None,
            });
            v.cite(cite::RETRACT);
            v
        }
        Answer::Inconclusive { reason } => Verdict::new(
            PROCEDURE,
            Status::Inconclusive,
            format!("{label}: {reason}"),
        ),
    };
    v.varieties.push(VarietyRecord::of(spec));
    v.explored = Explored::of(&tower);
    v.cite(cite::ASCC);
    Ok(v)
}

fn first_related_pair(theta: &Congruence) -> Option<(Elem, Elem)> {
    let n = theta.size() as Elem;
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| theta.related(a, b))
}
