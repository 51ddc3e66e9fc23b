//! Finitely generated varieties and quasivarieties: free algebras, membership,
//! subdirectly irreducible members, finitely presented algebras and
//! unifiability.

mod free;
mod membership;
mod present;
mod si;
mod spec;
mod unify;

pub use free::{free_algebra, free_algebra_until, Coordinate, FreeAlgebra, FreeTower};
pub use membership::{
    in_quasivariety, in_variety, in_variety_until, Answer, SeparatingFamily, Surjection,
};
pub use present::{
    finitely_presented, finitely_presented_until, present_in, presentation_congruence,
    relation_pairs, FinitePresentation, Presented,
};
pub use si::{si_members, SiMember};
pub use spec::{Caps, Mode, VarietySpec};
pub use unify::{
    in_qf, in_qf_in, unifiable, unifiable_in, unseparated_pair, NoHomToRetract, QfWitness, Unifier,
};
