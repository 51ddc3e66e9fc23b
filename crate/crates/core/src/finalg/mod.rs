//! Finite algebras and their search kernels: term evaluation, products,
//! subalgebras, quotients, homomorphism and isomorphism search, and direct
//! decomposition.

mod algebra;
pub mod closure;
pub mod decompose;
pub mod hom;
pub mod iso;
pub mod product;
pub mod quotient;
pub mod term;

pub use algebra::{
    for_each_tuple, Algebra, Elem, FiniteAlgebra, Homomorphism, OpSymbol, Signature,
};

pub use closure::{
    all_subuniverses, generating_set, restrict, subalgebra_generated, subuniverse, Subalgebra,
};
pub use decompose::{direct_decomposition, Decomposition};
pub use hom::{embedding, extend, homs, HomMode, HomSearch};
pub use iso::{fingerprint, is_isomorphic, Fingerprint};
pub use product::{power, product, Product};
pub use quotient::{quotient, Quotient};
pub use term::{
    check_identity, check_quasi_identity, eval_term, CompiledQi, CompiledTerm, Equation,
    QuasiIdentity, Term,
};
