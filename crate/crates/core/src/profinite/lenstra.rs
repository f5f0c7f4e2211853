use serde::Serialize;

use super::spec::{ClosedSubgroupSpec, Density, ProductProfiniteSpec, Truncation};
use crate::error::{Error, Result};
use crate::groups::{core, Element, Group};
use crate::numbers::ser_u128;

/// Above this many elements `q_ℓ(H_ℓ) = D^ℓ` is checked on generators.
const ELEMENTWISE_LIMIT: u128 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecoveryCheck {
    Elementwise,
    Generators,
}

/// One level `ℓ` of the chain `H_ℓ = H ∩ Ŵ_ℓ`, computed inside the deepest
/// truncation `L`.
#[derive(Clone, Debug)]
pub struct LenstraLevel {
    pub level: usize,
    /// `H_ℓ` in `Ĥ^(L)`.
    pub h_level: Group,
    /// `C_ℓ = core_{H}(H_ℓ)` in `Ĥ^(L)`.
    pub core: Group,
    /// `H ∩ Û_ℓ` in `Ĥ^(L)`.
    pub u_part: Group,
    /// `D^ℓ = q_ℓ(D)`.
    pub discriminant: Group,
    pub core_identity: bool,
    pub recovery: bool,
    pub recovery_check: RecoveryCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LenstraSummary {
    pub level: usize,
    #[serde(serialize_with = "ser_u128")]
    pub h_level_order: u128,
    #[serde(serialize_with = "ser_u128")]
    pub core_order: u128,
    #[serde(serialize_with = "ser_u128")]
    pub discriminant_order: u128,
    pub core_identity: bool,
    pub recovery: bool,
    pub recovery_check: RecoveryCheck,
}

#[derive(Clone, Debug)]
pub struct LenstraChainResult {
    pub depth: usize,
    pub truncation: Truncation,
    /// Levels `1..=depth`; level 0 is `H` itself.
    pub levels: Vec<LenstraLevel>,
    pub notes: Vec<String>,
}

impl LenstraChainResult {
    pub fn summaries(&self) -> Result<Vec<LenstraSummary>> {
        self.levels
            .iter()
            .map(|l| {
                Ok(LenstraSummary {
                    level: l.level,
                    h_level_order: l.h_level.order()?,
                    core_order: l.core.order()?,
                    discriminant_order: l.discriminant.order()?,
                    core_identity: l.core_identity,
                    recovery: l.recovery,
                    recovery_check: l.recovery_check,
                })
            })
            .collect()
    }

    pub fn level(&self, l: usize) -> Option<&LenstraLevel> {
        self.levels.iter().find(|x| x.level == l)
    }
}

fn trivial_like(factor: &Group) -> Group {
    Group::trivial(factor.identity().clone())
}

/// `∏_{i<ℓ} first_i × ∏_{ℓ≤i<L} H_i`.
fn split_product(spec: &ProductProfiniteSpec, first: &[Group], l: usize, depth: usize) -> Group {
    let mut factors: Vec<Group> = first[..l].to_vec();
    factors.extend(spec.factors()[l..depth].iter().cloned());
    Group::direct_product(factors)
}

fn truncate_tuple(x: &Element, l: usize) -> Element {
    Element::Tuple(x.components().expect("tuple element")[..l].to_vec())
}

/// Builds `H_ℓ`, its core and the recovered `D^ℓ` for `1 ≤ ℓ ≤ depth`,
/// checking `C_ℓ = H ∩ Û_ℓ` and `q_ℓ(H_ℓ) = D^ℓ` at each level.
pub fn lenstra_chain(
    spec: &ProductProfiniteSpec,
    d: &ClosedSubgroupSpec,
    depth: usize,
) -> Result<LenstraChainResult> {
    if depth == 0 || depth > spec.len() {
        return Err(Error::Precondition(format!(
            "depth must be between 1 and {}, got {depth}",
            spec.len()
        )));
    }
    let truncation = spec.truncate(depth)?;
    let ambient = truncation.h_or_product().clone();
    let trivials: Vec<Group> = spec.factors().iter().map(trivial_like).collect();
    let mut levels = Vec::new();
    for l in 1..=depth {
        let w = split_product(spec, d.subgroups(), l, depth);
        let u = split_product(spec, &trivials, l, depth);
        let (h_level, u_part) = match truncation.density {
            Density::FullClosure => (w, u),
            Density::PerFactor => (ambient.intersection(&w)?, ambient.intersection(&u)?),
        };
        let c = core(&ambient, &h_level)?.into_group();
        let core_identity = c.equals(&u_part)?;

        let discriminant = d.truncate(l);
        let (recovery, recovery_check) = if h_level.order()? <= ELEMENTWISE_LIMIT {
            let image: std::collections::HashSet<Element> = h_level
                .elements()?
                .iter()
                .map(|x| truncate_tuple(x, l))
                .collect();
            let target = discriminant.elements()?;
            let same = image.len() == target.len() && image.iter().all(|x| target.contains(x));
            (same, RecoveryCheck::Elementwise)
        } else {
            // the projection is a homomorphism, so the image is generated by
            // the projected generators
            let gens = h_level.generators().iter().map(|x| truncate_tuple(x, l)).collect();
            let image = Group::generated(discriminant.identity().clone(), gens)?;
            (image.equals(&discriminant)?, RecoveryCheck::Generators)
        };
        levels.push(LenstraLevel {
            level: l,
            h_level,
            core: c,
            u_part,
            discriminant,
            core_identity,
            recovery,
            recovery_check,
        });
    }
    let notes = vec![truncation.density.note(depth)];
    Ok(LenstraChainResult {
        depth,
        truncation,
        levels,
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoreCheckMode {
    /// `core_{H^(ℓ)}(D^ℓ)` in the truncated product.
    Explicit,
    /// `core_{H_i}(A_i)` for each `i < ℓ`.
    Factorwise,
}

/// Whether `D^ℓ` has trivial core in `H^(ℓ)`.
pub fn rational_core_check(
    spec: &ProductProfiniteSpec,
    d: &ClosedSubgroupSpec,
    l: usize,
    mode: CoreCheckMode,
) -> Result<bool> {
    if l > spec.len() {
        return Err(Error::Precondition(format!(
            "level {l} exceeds the {} factors",
            spec.len()
        )));
    }
    match mode {
        CoreCheckMode::Factorwise => {
            for (a, h) in d.subgroups()[..l].iter().zip(spec.factors()) {
                if core(h, a)?.order()? != 1 {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        CoreCheckMode::Explicit => {
            let truncation = spec.truncate(l)?;
            let c = core(truncation.h_or_product(), &d.truncate(l))?;
            Ok(c.order()? == 1)
        }
    }
}
