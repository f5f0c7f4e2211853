//! Finite groups given by generators: elements, subgroups, cores, quotients
//! and homomorphisms.

mod core;
mod cosets;
pub mod element;
mod group;
mod hom;
mod invariants;
mod iso;
mod linear;
mod quotient;
mod stabchain;

pub use self::core::core;
pub use cosets::{coset_space, CosetSpace};
pub use element::{Element, ElementKind, Matrix, Perm};
pub use group::{close_subgroup, ElementSet, Group, Structure, Subgroup, DEFAULT_MAX_ELEMENTS};
pub use hom::{hom_kernel_image, Homomorphism};
pub use invariants::{coarse_invariants, CoarseInvariants};
pub use iso::{find_isomorphism, for_each_homomorphism, Enumeration, ISO_ORDER_LIMIT};
pub use linear::{factorize, family_subgroup, is_prime, sl_group, sl_order, FamilyVariant};
pub use quotient::quotient;

pub(crate) use linear::family_group;
