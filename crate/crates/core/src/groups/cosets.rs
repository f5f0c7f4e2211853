use std::collections::HashMap;
use std::sync::Arc;

use super::element::{Element, Perm};
use super::group::{ElementSet, Group, Structure};
use super::hom::Homomorphism;
use crate::error::{Error, Result};

/// Canonical representatives for left cosets `yH`.
enum Keyer {
    Whole,
    Trivial,
    /// The least element of `yH` in the element order.
    Enumerated(Group, Arc<ElementSet>),
    /// `H` is a full direct product: key each coordinate separately.
    Product(Vec<Keyer>),
}

impl Keyer {
    fn new(ambient: Option<&Group>, h: &Group) -> Result<Keyer> {
        if h.is_trivial() {
            return Ok(Keyer::Trivial);
        }
        if let Some(g) = ambient {
            if let (Some(a), Some(b)) = (g.cheap_order(), h.cheap_order()) {
                if a == b {
                    return Ok(Keyer::Whole);
                }
            }
        }
        if let Structure::DirectProduct(parts) = h.structure() {
            return Ok(Keyer::Product(
                parts.iter().map(|p| Keyer::new(None, p)).collect::<Result<_>>()?,
            ));
        }
        Ok(Keyer::Enumerated(h.clone(), h.elements()?))
    }

    fn key(&self, y: &Element) -> Result<Element> {
        match self {
            Keyer::Whole => Ok(y.identity_like()),
            Keyer::Trivial => Ok(y.clone()),
            Keyer::Enumerated(h, set) => {
                if h.contains(y)? {
                    return Ok(y.identity_like());
                }
                Ok(set.iter().map(|x| y.mul(x)).min().expect("groups are non-empty"))
            }
            Keyer::Product(parts) => {
                let comps = y
                    .components()
                    .ok_or_else(|| Error::Domain(format!("{y} is not a tuple")))?;
                Ok(Element::Tuple(
                    parts.iter().zip(comps).map(|(k, c)| k.key(c)).collect::<Result<_>>()?,
                ))
            }
        }
    }
}

/// The left cosets `G/H` with the left action of `G`.
pub struct CosetSpace {
    group: Group,
    subgroup: Group,
    keyer: Keyer,
    reps: Vec<Element>,
    index: HashMap<Element, usize>,
    /// `tables[i][c]` is the coset `s_i · c` for the i-th generator `s_i` of `G`.
    tables: Vec<Vec<u32>>,
}

impl CosetSpace {
    pub fn new(group: &Group, subgroup: &Group) -> Result<CosetSpace> {
        if !subgroup.is_subgroup_of(group)? {
            return Err(Error::Domain("subgroup is not contained in the group".into()));
        }
        let keyer = Keyer::new(Some(group), subgroup)?;
        let limit = group.max_elements();
        let e = group.identity().clone();
        let mut reps = vec![e.clone()];
        let mut index = HashMap::new();
        index.insert(keyer.key(&e)?, 0usize);
        let gens = group.generators();
        let mut tables: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
        let mut head = 0;
        while head < reps.len() {
            let r = reps[head].clone();
            for (i, s) in gens.iter().enumerate() {
                let y = s.mul(&r);
                let k = keyer.key(&y)?;
                let next = match index.get(&k) {
                    Some(&j) => j,
                    None => {
                        let j = reps.len();
                        index.insert(k, j);
                        reps.push(y);
                        if reps.len() > limit {
                            return Err(Error::resource(
                                "enumerating cosets",
                                format!("more than {limit}"),
                                limit,
                            ));
                        }
                        j
                    }
                };
                tables[i].push(next as u32);
            }
            head += 1;
        }
        Ok(CosetSpace {
            group: group.clone(),
            subgroup: subgroup.clone(),
            keyer,
            reps,
            index,
            tables,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn subgroup(&self) -> &Group {
        &self.subgroup
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representatives(&self) -> &[Element] {
        &self.reps
    }

    /// Index of the coset `xH`.
    pub fn locate(&self, x: &Element) -> Result<usize> {
        self.index
            .get(&self.keyer.key(x)?)
            .copied()
            .ok_or_else(|| Error::Domain(format!("{x} does not lie in any coset of the group")))
    }

    /// The coset `x · c`.
    pub fn act(&self, x: &Element, coset: usize) -> Result<usize> {
        self.locate(&x.mul(&self.reps[coset]))
    }

    pub fn generator_action(&self, i: usize) -> &[u32] {
        &self.tables[i]
    }

    /// Permutations of the cosets induced by the generators of `G`.
    pub fn generator_perms(&self) -> Vec<Perm> {
        self.tables
            .iter()
            .map(|t| Perm::from_images_unchecked(t.clone()))
            .collect()
    }

    /// Permutation of the cosets induced by an arbitrary element.
    pub fn perm_of(&self, x: &Element) -> Result<Perm> {
        let images = (0..self.len())
            .map(|c| self.act(x, c).map(|j| j as u32))
            .collect::<Result<Vec<_>>>()?;
        Ok(Perm::from_images_unchecked(images))
    }

    /// The permutation group induced on the cosets.
    pub fn action_group(&self) -> Group {
        let gens = self.generator_perms().into_iter().map(Element::Perm).collect();
        Group::generated(Element::Perm(Perm::identity(self.len())), gens)
            .expect("coset permutations share a degree")
            .with_max_elements(self.group.max_elements())
    }

    /// The action homomorphism `G → Sym(G/H)`.
    pub fn action_hom(self: &Arc<Self>) -> Homomorphism {
        let target = self.action_group();
        let me = self.clone();
        Homomorphism::from_rule(&self.group, &target, move |x| {
            Element::Perm(me.perm_of(x).expect("element of the acting group"))
        })
    }
}

/// `G/H` with its left `G`-action.
pub fn coset_space(group: &Group, subgroup: &Group) -> Result<CosetSpace> {
    CosetSpace::new(group, subgroup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::element::Perm;
    use crate::groups::group::close_subgroup;

    #[test]
    fn s4_over_a4_has_two_cosets() {
        let s4 = Group::symmetric(4).unwrap();
        let a4 = close_subgroup(
            &s4,
            vec![
                Element::Perm(Perm::from_cycles(4, &[&[0, 1, 2]]).unwrap()),
                Element::Perm(Perm::from_cycles(4, &[&[1, 2, 3]]).unwrap()),
            ],
        )
        .unwrap();
        let space = coset_space(&s4, &a4).unwrap();
        assert_eq!(space.len(), 2);
        let t = Element::Perm(Perm::from_cycles(4, &[&[0, 1]]).unwrap());
        assert_eq!(space.act(&t, 0).unwrap(), 1);
        assert_eq!(space.act(&t, 1).unwrap(), 0);
    }

    #[test]
    fn whole_group_is_one_point() {
        let s3 = Group::symmetric(3).unwrap();
        let space = coset_space(&s3, &s3).unwrap();
        assert_eq!(space.len(), 1);
        assert!(space.generator_perms().iter().all(Perm::is_identity));
    }
}
