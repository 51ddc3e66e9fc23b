use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::finalg::{Algebra, Elem, HomSearch, QuasiIdentity};
use crate::io::AlgebraFile;
use crate::variety::{present_in, FreeAlgebra, FreeTower, Mode, Presented, VarietySpec};

use super::{cite, Certificate, Explored, Status, VarietyRecord, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QiClass {
    /// Holds in the whole class.
    Valid,
    /// Holds in `F` as far as explored, and its premise is unifiable.
    Active,
    /// The premise has no solution in `F`.
    Passive,
    /// Fails in some `F(k)`.
    NotAdmissible,
}

/// Homomorphisms enumerated per rank when looking for a counterexample.
const ENUMERATION_LIMIT: u64 = 1_000_000;

/// Whether the conclusion holds at the generators of the algebra presented by
/// the premise over `free`, which must have rank `q.nvars`.
pub(crate) fn premise_forces_conclusion(
    free: &FreeAlgebra,
    mode: Mode,
    q: &QuasiIdentity,
) -> Result<bool> {
    let p = present_in(free, mode, &q.premise)?;
    conclusion_at_generators(&p, q)
}

fn conclusion_at_generators(p: &Presented, q: &QuasiIdentity) -> Result<bool> {
    let c = q.compile(p.algebra.signature())?;
    Ok(c.conclusion_holds(&p.algebra, &p.generators, &mut Vec::new()))
}

enum Scan {
    Counterexample(Vec<Elem>),
    Holds { unifier: Option<Vec<Elem>> },
}

/// Walks the homomorphisms `P -> F(k)`; their generator images are exactly the
/// premise solutions in `F(k)`.
fn scan_rank(
    p: &Presented,
    q: &QuasiIdentity,
    f: &FreeAlgebra,
    spec: &VarietySpec,
    deadline: Option<std::time::Instant>,
) -> Result<Scan> {
    let c = q.compile(spec.signature())?;
    let mut stack = Vec::new();
    let mut first: Option<Vec<Elem>> = None;
    let mut bad: Option<Vec<Elem>> = None;
    let mut seen = 0u64;
    HomSearch::new(&p.algebra, f)
        .generators(p.generators.clone())
        .deadline(deadline)
        .for_each(|h| {
            seen += 1;
            if first.is_none() {
                first = Some(h.map.clone());
            }
            let asg: Vec<Elem> = p.generators.iter().map(|&g| h.image(g)).collect();
            if !c.conclusion_holds(f, &asg, &mut stack) {
                bad = Some(asg);
            }
            bad.is_none() && seen < ENUMERATION_LIMIT
        })?;
    if let Some(asg) = bad {
        return Ok(Scan::Counterexample(asg));
    }
    if seen >= ENUMERATION_LIMIT {
        return Err(crate::error::Error::CapExceeded {
            resource: "premise solutions enumerated".into(),
            limit: ENUMERATION_LIMIT,
            explored: seen,
        });
    }
    Ok(Scan::Holds { unifier: first })
}

/// Classifies a quasi-identity as valid, passive, active or not admissible
/// relative to the class of `spec`.
pub fn classify_qi(q: &QuasiIdentity, spec: &VarietySpec) -> Result<Verdict> {
    const PROCEDURE: &str = "classify_qi";
    let compiled = q.compile(spec.signature())?;
    let qs = q.to_string();
    let mut tower = FreeTower::new(spec, Some(spec.caps.deadline()));
    let deadline = tower.deadline();
    let finish = |mut v: Verdict, class: Option<QiClass>, tower: &FreeTower<'_>| {
        v.classification = class;
        v.varieties.push(VarietyRecord::of(spec));
        v.explored = Explored::of(tower);
        v.fact("qi", qs.clone());
        v.cite(cite::ACTIVE_PASSIVE);
        v.cite(cite::ADMISSIBLE);
        v
    };

    let generator_failure = spec
        .generators()
        .iter()
        .enumerate()
        .find_map(|(j, g)| compiled.counterexample(g).map(|a| (j, a)));
    if generator_failure.is_none() && (spec.mode == Mode::Quasivariety || q.is_identity()) {
        let mut v = Verdict::new(
            PROCEDURE,
            Status::Holds,
            "holds in every generator, hence in the class",
        );
        v.certificates.push(Certificate::QiValid {
            variety: 0,
            qi: qs.clone(),
            rank: None,
        });
        return Ok(finish(v, Some(QiClass::Valid), &tower));
    }

    let n = q.nvars;
    let p = match tower.get(n) {
        Ok(f) => present_in(f, spec.mode, &q.premise)?,
        Err(e) if e.is_cap() => {
            let v = Verdict::new(
                PROCEDURE,
                Status::Inconclusive,
                format!("F({n}) not built: {e}"),
            );
            return Ok(finish(v, None, &tower));
        }
        Err(e) => return Err(e),
    };
    if generator_failure.is_none() && conclusion_at_generators(&p, q)? {
        let mut v = Verdict::new(
            PROCEDURE,
            Status::Holds,
            "the conclusion holds in the algebra presented by the premise",
        );
        v.certificates.push(Certificate::QiValid {
            variety: 0,
            qi: qs.clone(),
            rank: Some(n),
        });
        return Ok(finish(v, Some(QiClass::Valid), &tower));
    }
    let subject = AlgebraFile::from_algebra(&p.algebra);

    let mut unifier: Option<(usize, Vec<Elem>)> = None;
    if spec.has_constants() {
        let f0 = tower.get(0)?;
        match HomSearch::new(&p.algebra, f0)
            .generators(p.generators.clone())
            .deadline(deadline)
            .first()
        {
            Ok(None) => {
                let f0_size = f0.size();
                let mut v = Verdict::new(
                    PROCEDURE,
                    Status::Holds,
                    "the premise has no solution in F(0), hence none in F: passive and admissible",
                );
                v.certificates.push(Certificate::NoHomToRetract {
                    variety: 0,
                    label: "P".into(),
                    subject,
                    f0_size,
                    qi: Some(qs.clone()),
                });
                v.cite(cite::RETRACT);
                return Ok(finish(v, Some(QiClass::Passive), &tower));
            }
            Ok(Some(h)) => unifier = Some((0, h.map)),
            Err(e) if e.is_cap() => {
                let v = Verdict::new(
                    PROCEDURE,
                    Status::Inconclusive,
                    format!("unifiability search stopped: {e}"),
                );
                return Ok(finish(v, None, &tower));
            }
            Err(e) => return Err(e),
        }
    }

    let mut ranks: Vec<usize> = (1..=spec.caps.rank_max).collect();
    if n > spec.caps.rank_max {
        ranks.push(n);
    }
    let mut reached = None;
    let mut stopped = None;
    for &k in &ranks {
        let f = match tower.get(k) {
            Ok(f) => f,
            Err(e) if e.is_cap() => {
                stopped = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        };
        match scan_rank(&p, q, f, spec, deadline) {
            Ok(Scan::Counterexample(assignment)) => {
                let mut v = Verdict::new(
                    PROCEDURE,
                    Status::Fails,
                    format!("fails in F({k}), so it is not admissible"),
                );
                v.certificates.push(Certificate::QiCounterexample {
                    variety: 0,
                    qi: qs.clone(),
                    rank: k,
                    assignment,
                });
                return Ok(finish(v, Some(QiClass::NotAdmissible), &tower));
            }
            Ok(Scan::Holds { unifier: u }) => {
                if unifier.is_none() {
                    unifier = u.map(|m| (k, m));
                }
                reached = Some(k);
            }
            Err(e) if e.is_cap() => {
                stopped = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let Some((urank, map)) = unifier else {
        let why = stopped
            .unwrap_or_else(|| "without constants F(0) gives no passivity certificate".into());
        let v = Verdict::new(
            PROCEDURE,
            Status::Inconclusive,
            format!("the premise has no solution up to the explored rank: {why}"),
        );
        return Ok(finish(v, None, &tower));
    };
    let upto = match reached {
        Some(r) => format!("holds in F(k) for 1 ≤ k ≤ {r}"),
        None => "no rank ≥ 1 explored".to_string(),
    };
    let (status, summary) = match &stopped {
        None => (
            Status::Holds,
            format!(
                "active: {upto} (up to rank {}), premise unified in F({urank})",
                reached.unwrap_or(0)
            ),
        ),
        Some(why) => (
            Status::Inconclusive,
            format!("active: {upto}; stopped: {why}"),
        ),
    };
    let mut v = Verdict::new(PROCEDURE, status, summary);
    v.certificates.push(Certificate::Unifier {
        variety: 0,
        qi: qs.clone(),
        subject,
        generators: p.generators.clone(),
        rank: urank,
        map,
    });
    Ok(finish(v, Some(QiClass::Active), &tower))
}
