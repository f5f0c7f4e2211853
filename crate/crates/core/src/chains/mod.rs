//! Descending chains of finite-index subgroups and their core and
//! discriminant towers.

mod action;
mod chain;
mod tower;

pub use action::{coset_tower, ellis_level, CosetTower, EllisLevel, EllisSummary};
pub use chain::{
    conjugate_chain, kernel_membership, validate_chain, ChainMode, GroupChain, KernelDepth,
};
pub use tower::{
    core_tower, core_tower_with, discriminant_tower, discriminant_tower_with, psi_map,
    psi_map_with, stability_report, verdict_from_kernels, ChainAnalysis, CoreTower,
    DiscriminantLevel, DiscriminantTower, LevelRecord, StabilityReport, Verdict,
};
