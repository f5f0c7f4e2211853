use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{family_group, Element, Group, Homomorphism};
use crate::numbers::ser_u128_vec;
use crate::profinite::FamilySpec;

/// Prime -> rank of an elementary abelian factor, for groups known only up
/// to a product of elementary abelian pieces.
pub type Ranks = BTreeMap<u64, u32>;

pub fn ranks_order(r: &Ranks) -> u128 {
    r.iter().map(|(&p, &k)| (p as u128).pow(k)).product()
}

/// `r` has every rank at most the one in `s`.
pub(crate) fn ranks_le(r: &Ranks, s: &Ranks) -> bool {
    r.iter().all(|(p, &k)| k == 0 || s.get(p).is_some_and(|&m| k <= m))
}

/// A finite stretch `A_0 → A_1 → … → A_{k-1}` of surjective homomorphisms.
#[derive(Clone, Debug)]
pub enum HomSequence {
    Explicit {
        groups: Vec<Group>,
        /// `maps[i]: groups[i] → groups[i+1]`
        maps: Vec<Homomorphism>,
    },
    /// Groups described by orders alone, or by elementary abelian ranks.
    /// With ranks, the maps are taken to be coordinate projections.
    Structural {
        orders: Vec<u128>,
        kernel_orders: Vec<u128>,
        ranks: Option<Vec<Ranks>>,
    },
}

impl HomSequence {
    pub fn explicit(groups: Vec<Group>, maps: Vec<Homomorphism>) -> Self {
        HomSequence::Explicit { groups, maps }
    }

    pub fn from_orders(orders: Vec<u128>, kernel_orders: Vec<u128>) -> Self {
        HomSequence::Structural {
            orders,
            kernel_orders,
            ranks: None,
        }
    }

    pub fn from_ranks(ranks: Vec<Ranks>) -> Self {
        let orders: Vec<u128> = ranks.iter().map(ranks_order).collect();
        let kernel_orders = orders.windows(2).map(|w| w[0] / w[1].max(1)).collect();
        HomSequence::Structural {
            orders,
            kernel_orders,
            ranks: Some(ranks),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            HomSequence::Explicit { groups, .. } => groups.len(),
            HomSequence::Structural { orders, .. } => orders.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, HomSequence::Explicit { .. })
    }

    pub fn order(&self, i: usize) -> Result<u128> {
        match self {
            HomSequence::Explicit { groups, .. } => groups[i].order(),
            HomSequence::Structural { orders, .. } => Ok(orders[i]),
        }
    }

    /// `|ker φ_i|` for every map.
    pub fn kernel_orders(&self) -> Result<Vec<u128>> {
        match self {
            HomSequence::Explicit { groups, .. } => groups
                .windows(2)
                .map(|w| Ok(w[0].order()? / w[1].order()?))
                .collect(),
            HomSequence::Structural { kernel_orders, .. } => Ok(kernel_orders.clone()),
        }
    }

    /// The first `window` groups.
    pub fn truncated(&self, window: usize) -> Self {
        let k = window.min(self.len());
        match self {
            HomSequence::Explicit { groups, maps } => HomSequence::Explicit {
                groups: groups[..k].to_vec(),
                maps: maps[..k.saturating_sub(1)].to_vec(),
            },
            HomSequence::Structural {
                orders,
                kernel_orders,
                ranks,
            } => HomSequence::Structural {
                orders: orders[..k].to_vec(),
                kernel_orders: kernel_orders[..k.saturating_sub(1)].to_vec(),
                ranks: ranks.as_ref().map(|r| r[..k].to_vec()),
            },
        }
    }

    /// `φ_{to-1} ∘ … ∘ φ_from` applied to `x`.
    pub(crate) fn carry(&self, x: &Element, from: usize, to: usize) -> Result<Element> {
        let HomSequence::Explicit { maps, .. } = self else {
            return Err(Error::Precondition("structural sequences carry no elements".into()));
        };
        let mut y = x.clone();
        for m in &maps[from..to] {
            y = m.apply(&y)?;
        }
        Ok(y)
    }
}

fn invalid(index: usize, reason: String) -> Error {
    Error::SequenceValidation { index, reason }
}

/// Checks lengths, that consecutive maps chain up, and that every map is
/// surjective.
pub fn check_sequence(seq: &HomSequence) -> Result<HomSequence> {
    match seq {
        HomSequence::Explicit { groups, maps } => {
            if groups.is_empty() {
                return Err(invalid(0, "no groups".into()));
            }
            if maps.len() + 1 != groups.len() {
                return Err(invalid(
                    maps.len().min(groups.len()),
                    format!("{} groups need {} maps, got {}", groups.len(), groups.len() - 1, maps.len()),
                ));
            }
            for (i, m) in maps.iter().enumerate() {
                if !m.domain().equals(&groups[i])? || !m.codomain().equals(&groups[i + 1])? {
                    return Err(invalid(i, format!("map {i} does not go from group {i} to group {}", i + 1)));
                }
                m.verify().map_err(|e| invalid(i, e.to_string()))?;
                let img = m.image()?.order()?;
                let cod = groups[i + 1].order()?;
                if img != cod {
                    return Err(invalid(i, format!("map {i} has image of order {img}, codomain order {cod}")));
                }
            }
        }
        HomSequence::Structural {
            orders,
            kernel_orders,
            ranks,
        } => {
            if orders.is_empty() {
                return Err(invalid(0, "no groups".into()));
            }
            if kernel_orders.len() + 1 != orders.len() {
                return Err(invalid(
                    kernel_orders.len().min(orders.len()),
                    format!("{} orders need {} kernel orders", orders.len(), orders.len() - 1),
                ));
            }
            if let Some(i) = orders.iter().position(|&o| o == 0) {
                return Err(invalid(i, "order 0".into()));
            }
            for i in 0..kernel_orders.len() {
                if orders[i + 1] * kernel_orders[i] != orders[i] {
                    return Err(invalid(
                        i,
                        format!(
                            "order {} is not the kernel order {} times the next order {}",
                            orders[i], kernel_orders[i], orders[i + 1]
                        ),
                    ));
                }
            }
            if let Some(ranks) = ranks {
                if ranks.len() != orders.len() {
                    return Err(invalid(ranks.len().min(orders.len()), "ranks and orders differ in length".into()));
                }
                for (i, r) in ranks.iter().enumerate() {
                    if ranks_order(r) != orders[i] {
                        return Err(invalid(i, format!("ranks give order {}, not {}", ranks_order(r), orders[i])));
                    }
                }
                for i in 0..ranks.len() - 1 {
                    if !ranks_le(&ranks[i + 1], &ranks[i]) {
                        return Err(invalid(i, format!("no surjection onto group {} exists", i + 1)));
                    }
                }
            }
        }
    }
    Ok(seq.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Constancy {
    /// Every kernel from `i0` to the end of the window is trivial.
    ConstantFrom {
        i0: usize,
        #[serde(serialize_with = "ser_u128_vec")]
        kernel_orders: Vec<u128>,
    },
    /// The last kernel in the window is non-trivial; says nothing beyond it.
    NotConstantInWindow {
        last_nontrivial: usize,
        #[serde(serialize_with = "ser_u128_vec")]
        kernel_orders: Vec<u128>,
    },
}

/// Looks at the kernels of the first `window` maps.
pub fn asymptotically_constant(seq: &HomSequence, window: usize) -> Result<Constancy> {
    let mut kernels = seq.kernel_orders()?;
    kernels.truncate(window);
    Ok(match kernels.iter().rposition(|&k| k > 1) {
        Some(i) if i + 1 == kernels.len() => Constancy::NotConstantInWindow {
            last_nontrivial: i,
            kernel_orders: kernels,
        },
        Some(i) => Constancy::ConstantFrom {
            i0: i + 1,
            kernel_orders: kernels,
        },
        None => Constancy::ConstantFrom {
            i0: 0,
            kernel_orders: kernels,
        },
    })
}

/// The discriminants `D_0 → D_1 → … → D_{W-1}` of a family as ranks, where
/// `D_n = ∏_{n≤i<W} A^{s_i}_{p_i}` and each map drops the factor at `n`.
pub fn family_sequence_structural(fam: &FamilySpec, window: usize) -> Result<HomSequence> {
    fam.validate()?;
    let w = window.min(fam.primes.len());
    let ranks = (0..w)
        .map(|n| {
            (n..w)
                .map(|i| (fam.primes[i] as u64, fam.bits[i] as u32))
                .collect::<Ranks>()
        })
        .collect();
    Ok(HomSequence::from_ranks(ranks))
}

/// The same sequence with explicit groups: `D_n` is a product over all `W`
/// coordinates with the first `n` trivial, and `D_n → D_{n+1}` clears
/// coordinate `n`.
pub fn family_sequence_explicit(fam: &FamilySpec, window: usize) -> Result<HomSequence> {
    fam.validate()?;
    let w = window.min(fam.primes.len());
    let a: Vec<Group> = (0..w).map(|i| family_group(fam.primes[i], fam.variant(i))).collect();
    let groups: Vec<Group> = (0..w)
        .map(|n| {
            let factors = (0..w)
                .map(|i| {
                    if i < n {
                        Group::trivial(a[i].identity().clone())
                    } else {
                        a[i].clone()
                    }
                })
                .collect();
            Group::direct_product(factors)
        })
        .collect();
    let maps = (0..w.saturating_sub(1))
        .map(|n| {
            let images = groups[n]
                .generators()
                .iter()
                .map(|g| {
                    let mut parts = g.components().expect("tuple").to_vec();
                    parts[n] = a[n].identity().clone();
                    Element::Tuple(parts)
                })
                .collect();
            Homomorphism::from_images(&groups[n], &groups[n + 1], images)
        })
        .collect::<Result<_>>()?;
    Ok(HomSequence::explicit(groups, maps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_must_factor() {
        assert!(check_sequence(&HomSequence::from_orders(vec![6, 3, 3], vec![2, 1])).is_ok());
        let err = check_sequence(&HomSequence::from_orders(vec![6, 4], vec![2])).unwrap_err();
        assert!(matches!(err, Error::SequenceValidation { index: 0, .. }));
    }

    #[test]
    fn constancy_patterns() {
        let s = HomSequence::from_orders(vec![4, 2, 2, 2], vec![2, 1, 1]);
        assert!(matches!(asymptotically_constant(&s, 10).unwrap(), Constancy::ConstantFrom { i0: 1, .. }));
        let s = HomSequence::from_orders(vec![2, 2, 1], vec![1, 2]);
        assert!(matches!(
            asymptotically_constant(&s, 10).unwrap(),
            Constancy::NotConstantInWindow { last_nontrivial: 1, .. }
        ));
    }

    #[test]
    fn explicit_family_sequence_is_valid() {
        let fam = FamilySpec::new(vec![2, 3, 5], vec![2, 1, 1]).unwrap();
        let seq = check_sequence(&family_sequence_explicit(&fam, 3).unwrap()).unwrap();
        assert_eq!(seq.kernel_orders().unwrap(), vec![4, 3]);
        let st = check_sequence(&family_sequence_structural(&fam, 3).unwrap()).unwrap();
        assert_eq!(st.kernel_orders().unwrap(), vec![4, 3]);
    }
}
