use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Element, Group};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainMode {
    /// The chain lives inside a finite base group.
    Explicit,
    /// Level `ℓ` is computed inside the finite truncation `∏_{i<ℓ} H_i`.
    TruncatedProfinite,
}

/// A descending chain `G_0 ⊃ G_1 ⊃ … ⊃ G_L`.
///
/// In truncated-profinite mode each level `ℓ` has its own ambient group and
/// `view(ℓ, k)` is the image of `G_k` there; consecutive truncations are
/// related by dropping trailing tuple coordinates.
#[derive(Clone, Debug)]
pub struct GroupChain {
    mode: ChainMode,
    /// `views[ℓ][k]` for `k ≤ ℓ` (truncated mode) or `views[0]` = all levels.
    views: Vec<Vec<Group>>,
    indices: Vec<u128>,
    notes: Vec<String>,
}

fn check_descent(levels: &[Group], level_offset: usize) -> Result<Vec<u128>> {
    let base_order = levels[0].order()?;
    let mut indices = vec![1];
    for k in 1..levels.len() {
        let level = k + level_offset;
        if !levels[k].is_subgroup_of(&levels[k - 1])? {
            let bad = levels[k]
                .generators()
                .iter()
                .find(|g| !levels[k - 1].contains(g).unwrap_or(false))
                .map(|g| format!(" (generator {g})"))
                .unwrap_or_default();
            return Err(Error::ChainValidation {
                level,
                reason: format!("G_{level} is not contained in G_{}{bad}", level - 1),
            });
        }
        let (upper, lower) = (levels[k - 1].order()?, levels[k].order()?);
        if upper == lower {
            return Err(Error::ChainValidation {
                level,
                reason: format!("G_{level} equals G_{} (no strict descent)", level - 1),
            });
        }
        indices.push(base_order / lower);
    }
    Ok(indices)
}

impl GroupChain {
    /// Validated chain `base ⊃ levels[0] ⊃ levels[1] ⊃ …`.
    pub fn explicit(base: Group, levels: Vec<Group>) -> Result<GroupChain> {
        let mut all = vec![base];
        all.extend(levels);
        let indices = check_descent(&all, 0)?;
        Ok(GroupChain {
            mode: ChainMode::Explicit,
            views: vec![all],
            indices,
            notes: Vec::new(),
        })
    }

    /// Truncated-profinite chain from its per-level views. `views[ℓ]` must
    /// hold the images of `G_0, …, G_ℓ` in the level-`ℓ` truncation.
    pub fn truncated(views: Vec<Vec<Group>>, notes: Vec<String>) -> Result<GroupChain> {
        if views.is_empty() {
            return Err(Error::Spec("a truncated chain needs at least level 0".into()));
        }
        for (l, v) in views.iter().enumerate() {
            if v.len() != l + 1 {
                return Err(Error::Invariant(format!(
                    "truncation {l} holds {} groups, expected {}",
                    v.len(),
                    l + 1
                )));
            }
        }
        let deepest = views.last().unwrap();
        let indices = check_descent(deepest, 0)?;
        Ok(GroupChain {
            mode: ChainMode::TruncatedProfinite,
            views,
            indices,
            notes,
        })
    }

    pub fn mode(&self) -> ChainMode {
        self.mode
    }

    pub fn depth(&self) -> usize {
        match self.mode {
            ChainMode::Explicit => self.views[0].len() - 1,
            ChainMode::TruncatedProfinite => self.views.len() - 1,
        }
    }

    pub fn base(&self) -> &Group {
        self.view(self.depth(), 0)
    }

    /// `G_k` at the deepest truncation.
    pub fn level(&self, k: usize) -> &Group {
        self.view(self.depth(), k)
    }

    /// Image of `G_k` in the truncation used for level `ℓ` (`k ≤ ℓ`).
    pub fn view(&self, l: usize, k: usize) -> &Group {
        match self.mode {
            ChainMode::Explicit => &self.views[0][k],
            ChainMode::TruncatedProfinite => &self.views[l][k],
        }
    }

    /// `[G_0 : G_ℓ]` for every level.
    pub fn indices(&self) -> &[u128] {
        &self.indices
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Image of an element of truncation `from` in truncation `to ≤ from`.
    pub fn project(&self, x: &Element, from: usize, to: usize) -> Element {
        match self.mode {
            ChainMode::Explicit => x.clone(),
            ChainMode::TruncatedProfinite => {
                debug_assert!(to <= from);
                match x {
                    Element::Tuple(parts) => Element::Tuple(parts[..to].to_vec()),
                    other => other.clone(),
                }
            }
        }
    }
}

/// Checks containment and strict descent of `base ⊃ levels…`.
pub fn validate_chain(base: Group, levels: Vec<Group>) -> Result<GroupChain> {
    GroupChain::explicit(base, levels)
}

/// Deepest level of the chain containing an element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelDepth {
    pub deepest: usize,
    /// `g` lies in every level of the (finite) chain.
    pub all_levels: bool,
}

/// The largest `ℓ` with `g ∈ G_ℓ`, a finite-depth stand-in for membership in
/// the kernel `∩ G_ℓ`.
pub fn kernel_membership(chain: &GroupChain, g: &Element) -> Result<KernelDepth> {
    if !chain.base().contains(g)? {
        return Err(Error::Domain(format!("{g} is not in the base group")));
    }
    let mut deepest = 0;
    for k in 1..=chain.depth() {
        if chain.level(k).contains(g)? {
            deepest = k;
        } else {
            break;
        }
    }
    Ok(KernelDepth {
        deepest,
        all_levels: deepest == chain.depth(),
    })
}

/// The chain `g G_ℓ g⁻¹`.
pub fn conjugate_chain(chain: &GroupChain, g: &Element) -> Result<GroupChain> {
    if !chain.base().contains(g)? {
        return Err(Error::Domain(format!("{g} is not in the base group")));
    }
    let depth = chain.depth();
    match chain.mode {
        ChainMode::Explicit => {
            let levels = (1..=depth).map(|k| chain.level(k).conjugate(g)).collect();
            GroupChain::explicit(chain.base().clone(), levels)
        }
        ChainMode::TruncatedProfinite => {
            let views = (0..=depth)
                .map(|l| {
                    let gl = chain.project(g, depth, l);
                    (0..=l).map(|k| chain.view(l, k).conjugate(&gl)).collect()
                })
                .collect();
            GroupChain::truncated(views, chain.notes.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{close_subgroup, Perm};

    fn perm(cycles: &[&[usize]]) -> Element {
        Element::Perm(Perm::from_cycles(4, cycles).unwrap())
    }

    fn s4_chain() -> GroupChain {
        let s4 = Group::symmetric(4).unwrap();
        let a4 = close_subgroup(&s4, vec![perm(&[&[0, 1, 2]]), perm(&[&[1, 2, 3]])]).unwrap();
        let v4 = close_subgroup(&s4, vec![perm(&[&[0, 1], &[2, 3]]), perm(&[&[0, 2], &[1, 3]])]).unwrap();
        let e = Group::trivial(s4.identity().clone());
        validate_chain(s4, vec![a4.into_group(), v4.into_group(), e]).unwrap()
    }

    #[test]
    fn indices_of_s4_chain() {
        assert_eq!(s4_chain().indices(), &[1, 2, 6, 24]);
    }

    #[test]
    fn equal_levels_are_rejected() {
        let s4 = Group::symmetric(4).unwrap();
        let err = validate_chain(s4.clone(), vec![s4]).unwrap_err();
        assert!(matches!(err, Error::ChainValidation { level: 1, .. }));
    }

    #[test]
    fn non_nested_levels_are_rejected() {
        let s4 = Group::symmetric(4).unwrap();
        let a = close_subgroup(&s4, vec![perm(&[&[0, 1, 2]])]).unwrap().into_group();
        let b = close_subgroup(&s4, vec![perm(&[&[0, 1]])]).unwrap().into_group();
        let err = validate_chain(s4, vec![a, b]).unwrap_err();
        assert!(matches!(err, Error::ChainValidation { level: 2, .. }));
    }

    #[test]
    fn kernel_depths() {
        let chain = s4_chain();
        assert_eq!(kernel_membership(&chain, &perm(&[&[0, 1]])).unwrap().deepest, 0);
        assert_eq!(kernel_membership(&chain, &perm(&[&[0, 1], &[2, 3]])).unwrap().deepest, 2);
        let id = kernel_membership(&chain, &Element::Perm(Perm::identity(4))).unwrap();
        assert!(id.all_levels);
    }
}
