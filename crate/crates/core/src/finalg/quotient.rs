use crate::congruence::Congruence;
use crate::error::Result;
use crate::finalg::algebra::{Algebra, FiniteAlgebra, Homomorphism};

/// A quotient algebra with its natural map. Block `i` of the congruence is element `i`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: FiniteAlgebra,
    pub natural: Homomorphism,
}

/// `A/θ`. Fails when `θ` is not compatible with some operation.
pub fn quotient<A: Algebra + ?Sized>(alg: &A, theta: &Congruence) -> Result<Quotient> {
    theta.check_compatible(alg)?;
    let reps = theta.representatives();
    let mut buf = Vec::new();
    let name = alg.label().map(|l| format!("{l}/θ"));
    let algebra = FiniteAlgebra::from_fn(name, alg.signature().clone(), reps.len(), |op, args| {
        buf.clear();
        buf.extend(args.iter().map(|&b| reps[b as usize]));
        theta.block_of(alg.apply(op, &buf))
    })?;
    let natural = Homomorphism::new(theta.blocks().to_vec());
    Ok(Quotient { algebra, natural })
}
