//! Free decomposition spaces over the inert part of the simplex category.
//!
//! The library is organised bottom-up:
//!
//! * [`simplex`] — arithmetic in the simplex category: monotone maps between
//!   finite nonempty ordinals, the active/inert factorisation system, the
//!   correspondence between active maps and compositions of naturals, and the
//!   active-inert pushout squares that generate the decomposition-space axiom.
//! * [`cat`] — a minimal finite-category container used by the comparison
//!   routines (hom-sets, identities, a composition table).
//! * [`sset`] — truncated simplicial sets with finite levels, evaluation of
//!   arbitrary ordinal maps through the face/degeneracy tables, the nerve of
//!   `(N,+)`, and edgewise subdivision.
//! * [`checks`] — the checkers: simplicial identities, pullback squares,
//!   decomposition-space and Segal conditions, and CULF-ness of a map.
//! * [`compare`] — category-of-elements and twisted-arrow comparisons.
//! * [`presheaf`] — presheaves on the inert part of the simplex category, the
//!   free simplicial set they generate, the projection to the nerve of
//!   `(N,+)`, recovery of the presheaf from a space over that nerve, and the
//!   sheaf condition that characterises the Segal outputs.
//! * [`coalgebra`] — the incidence coalgebra of a decomposition space over
//!   exact rationals, with length filtration and Mobius inversion.
//! * [`zoo`] — the example catalogue: quiver paths, words, quasisymmetric
//!   and word quasisymmetric flavours, permutations, parking functions,
//!   noncrossing partitions, Dyck paths, layered linear orders, and the
//!   nondegenerate-simplex construction.
//! * [`registry`] — named examples with default budgets, shared by the test
//!   suite and the command line tool.

pub mod cat;
pub mod checks;
pub mod coalgebra;
pub mod compare;
pub mod presheaf;
pub mod registry;
pub mod simplex;
pub mod sset;
pub mod zoo;
