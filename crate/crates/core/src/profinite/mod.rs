//! Products of finite groups standing in for a profinite group, closed
//! subgroups of product form, and the `SL_3` family built from them.

mod adjoint;
mod family;
mod lenstra;
mod spec;

pub use adjoint::{adjoint_kernels, wild_certificate, AdjointKernel, WildCertificate, WildWitness};
pub use family::{
    family_discriminants, family_stability_report, family_to_chain, family_to_chain_with, FactorDescriptor, FamilyDiscriminant,
};
pub use lenstra::{
    lenstra_chain, rational_core_check, CoreCheckMode, LenstraChainResult, LenstraLevel,
    LenstraSummary, RecoveryCheck,
};
pub use spec::{
    sl3_family_base, ClosedSubgroupSpec, CoreAttestation, Density, FamilySpec, Mode,
    ProductProfiniteSpec, Truncation,
};
