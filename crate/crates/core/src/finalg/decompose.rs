//! Direct decomposition into directly indecomposable factors.

use crate::congruence::{all_congruences, principal_congruence, Congruence};
use crate::error::{Error, Result};
use crate::finalg::algebra::{Algebra, Elem, FiniteAlgebra, Homomorphism};
use crate::finalg::product::{product, Product};
use crate::finalg::quotient::quotient;

/// Factors together with an isomorphism from the algebra onto their product.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub factors: Vec<FiniteAlgebra>,
    pub product: Product,
    /// Isomorphism `A -> product(factors)`.
    pub iso: Homomorphism,
}

impl Decomposition {
    pub fn is_indecomposable(&self) -> bool {
        self.factors.len() <= 1
    }
}

const CONGRUENCE_SEARCH_LIMIT: usize = 256;

/// Splits `alg` into directly indecomposable factors.
///
/// Boolean algebras with an operator split along the clopen atoms (elements
/// fixed by the operator whose complement is fixed too); other signatures
/// search complementary permuting factor congruences.
pub fn direct_decomposition(alg: &FiniteAlgebra) -> Result<Decomposition> {
    let factor_maps = match clopen_factors(alg)? {
        Some(f) => f,
        None => generic_factors(alg)?,
    };
    assemble(alg, factor_maps)
}

fn assemble(
    alg: &FiniteAlgebra,
    factor_maps: Vec<(FiniteAlgebra, Vec<Elem>)>,
) -> Result<Decomposition> {
    let factors: Vec<FiniteAlgebra> = factor_maps.iter().map(|(f, _)| f.clone()).collect();
    let refs: Vec<&FiniteAlgebra> = factors.iter().collect();
    let prod = product(alg.signature(), &refs)?;
    let iso = Homomorphism::new(
        (0..alg.size())
            .map(|e| {
                let coords: Vec<Elem> = factor_maps.iter().map(|(_, m)| m[e]).collect();
                prod.encode(&coords)
            })
            .collect(),
    );
    if !(iso.is_injective() && prod.algebra.size() == alg.size() && iso.verify(alg, &prod.algebra))
    {
        return Err(Error::InvalidData("decomposition failed to verify".into()));
    }
    Ok(Decomposition {
        factors,
        product: prod,
        iso,
    })
}

/// A factor together with the projection onto it.
type Factor = (FiniteAlgebra, Vec<Elem>);

fn clopen_factors(alg: &FiniteAlgebra) -> Result<Option<Vec<Factor>>> {
    let sig = alg.signature();
    let (Some(meet), Some(neg), Some(dia), Some(one), Some(zero)) = (
        sig.lookup("meet"),
        sig.lookup("neg"),
        sig.lookup("dia"),
        sig.lookup("one"),
        sig.lookup("zero"),
    ) else {
        return Ok(None);
    };
    if sig.arity(meet) != 2 || sig.arity(neg) != 1 || sig.arity(dia) != 1 {
        return Ok(None);
    }
    let (one, zero) = (alg.constant(one), alg.constant(zero));
    let le = |x: Elem, y: Elem| alg.apply(meet, &[x, y]) == x;
    let clopen: Vec<Elem> = alg
        .universe()
        .filter(|&c| {
            alg.apply(dia, &[c]) == c && {
                let nc = alg.apply(neg, &[c]);
                alg.apply(dia, &[nc]) == nc
            }
        })
        .collect();
    let atoms: Vec<Elem> = clopen
        .iter()
        .copied()
        .filter(|&c| c != zero && !clopen.iter().any(|&d| d != zero && d != c && le(d, c)))
        .collect();
    if atoms.len() <= 1 {
        return Ok(Some(vec![(alg.clone(), (0..alg.size() as Elem).collect())]));
    }
    let mut out = Vec::new();
    for &c in &atoms {
        let theta = principal_congruence(alg, c, one)?;
        let q = quotient(alg, &theta)?;
        out.push((q.algebra, theta.blocks().to_vec()));
    }
    // fall back to the generic route if the operator is not normal enough for
    // the clopen split to be a product decomposition
    let total: usize = out.iter().map(|(f, _)| f.size()).product();
    if total != alg.size() {
        return Ok(None);
    }
    Ok(Some(out))
}

fn is_factor_pair(a: &Congruence, b: &Congruence) -> bool {
    a.meet(b).is_identity() && a.num_blocks() * b.num_blocks() == a.size()
}

fn generic_factors(alg: &FiniteAlgebra) -> Result<Vec<(FiniteAlgebra, Vec<Elem>)>> {
    if alg.size() > CONGRUENCE_SEARCH_LIMIT {
        return Err(Error::cap(
            "algebra size for factor-congruence search",
            CONGRUENCE_SEARCH_LIMIT as u64,
            alg.size() as u64,
        ));
    }
    let lat = all_congruences(alg, CONGRUENCE_SEARCH_LIMIT)?;
    let inner: Vec<&Congruence> = lat
        .congruences
        .iter()
        .filter(|c| !c.is_identity() && !c.is_total())
        .collect();
    for (i, a) in inner.iter().enumerate() {
        for b in &inner[i + 1..] {
            if is_factor_pair(a, b) {
                let mut out = Vec::new();
                for theta in [*a, *b] {
                    let q = quotient(alg, theta)?;
                    for (f, m) in generic_factors(&q.algebra)? {
                        let composed = theta.blocks().iter().map(|&blk| m[blk as usize]).collect();
                        out.push((f, composed));
                    }
                }
                return Ok(out);
            }
        }
    }
    Ok(vec![(alg.clone(), (0..alg.size() as Elem).collect())])
}
