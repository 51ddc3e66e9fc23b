use crate::error::{Error, Result};
use crate::finalg::algebra::{Algebra, Elem, FiniteAlgebra, Homomorphism, Signature};

/// A direct product with its coordinate metadata. Elements are encoded in
/// mixed radix with the first factor most significant, so element order is
/// lexicographic in the coordinates.
#[derive(Clone, Debug)]
pub struct Product {
    pub algebra: FiniteAlgebra,
    pub factor_sizes: Vec<usize>,
}

impl Product {
    pub fn encode(&self, coords: &[Elem]) -> Elem {
        encode(&self.factor_sizes, coords)
    }

    pub fn decode(&self, e: Elem) -> Vec<Elem> {
        decode(&self.factor_sizes, e)
    }

    /// Projection onto factor `i`.
    pub fn projection(&self, i: usize) -> Homomorphism {
        Homomorphism::new(
            (0..self.algebra.size() as Elem)
                .map(|e| self.decode(e)[i])
                .collect(),
        )
    }
}

pub(crate) fn encode(sizes: &[usize], coords: &[Elem]) -> Elem {
    let mut e = 0usize;
    for (&s, &c) in sizes.iter().zip(coords) {
        e = e * s + c as usize;
    }
    e as Elem
}

pub(crate) fn decode(sizes: &[usize], mut e: Elem) -> Vec<Elem> {
    let mut out = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        out[i] = e % sizes[i] as Elem;
        e /= sizes[i] as Elem;
    }
    out
}

/// Upper bound on the size of a tabulated product.
pub const PRODUCT_SIZE_LIMIT: usize = 1 << 16;

/// Direct product of `factors` over `sig`. The empty product is the trivial algebra.
pub fn product(sig: &Signature, factors: &[&FiniteAlgebra]) -> Result<Product> {
    for f in factors {
        if f.signature() != sig {
            return Err(Error::SignatureMismatch(format!(
                "factor {} has signature {}, expected {}",
                f.name().unwrap_or("?"),
                f.signature(),
                sig
            )));
        }
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let total = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .filter(|&t| t <= PRODUCT_SIZE_LIMIT)
        .ok_or_else(|| {
            Error::cap(
                "product size",
                PRODUCT_SIZE_LIMIT as u64,
                sizes.iter().map(|&s| s as u64).product(),
            )
        })?;
    let name = if factors.is_empty() {
        Some("trivial".to_string())
    } else {
        Some(
            factors
                .iter()
                .map(|f| f.name().unwrap_or("?").to_string())
                .collect::<Vec<_>>()
                .join("×"),
        )
    };
    let coords: Vec<Vec<Elem>> = (0..total as Elem).map(|e| decode(&sizes, e)).collect();
    let mut out = vec![0 as Elem; factors.len()];
    let mut fargs = Vec::new();
    let algebra = FiniteAlgebra::from_fn(name, sig.clone(), total, |op, args| {
        for (i, f) in factors.iter().enumerate() {
            fargs.clear();
            fargs.extend(args.iter().map(|&a| coords[a as usize][i]));
            out[i] = f.apply(op, &fargs);
        }
        encode(&sizes, &out)
    })?;
    Ok(Product {
        algebra,
        factor_sizes: sizes,
    })
}

pub fn power(alg: &FiniteAlgebra, k: usize) -> Result<Product> {
    let factors = vec![alg; k];
    product(alg.signature(), &factors)
}
