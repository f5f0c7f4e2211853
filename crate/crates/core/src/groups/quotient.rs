use std::collections::HashMap;
use std::sync::Arc;

use super::cosets::CosetSpace;
use super::element::{Element, Perm};
use super::group::Group;
use super::hom::Homomorphism;
use crate::error::{Error, Result};

/// Above this many cosets the projection acts on every coset per evaluation
/// instead of keeping a table of the quotient's elements.
const TABLE_LIMIT: usize = 4096;

/// `G/N` as the regular permutation action on the cosets of `N`, together
/// with the projection. The projection sends the i-th generator of `G` to
/// the i-th generator of the quotient.
pub fn quotient(group: &Group, normal: &Group) -> Result<(Group, Homomorphism)> {
    if !normal.is_subgroup_of(group)? {
        return Err(Error::Domain("normal subgroup is not contained in the group".into()));
    }
    if let Some((h, g)) = normal.normality_violation(group)? {
        return Err(Error::Precondition(format!(
            "subgroup is not normal: conjugate {} of {h} by {g} lies outside it",
            h.conjugate_by(&g)
        )));
    }
    if normal.is_trivial() {
        return Ok((group.clone(), Homomorphism::identity(group)));
    }
    if normal.order()? == group.order()? {
        let trivial = Group::trivial(Element::Perm(Perm::identity(1)));
        let target = trivial.clone();
        let hom = Homomorphism::from_rule(group, &trivial, move |_| target.identity().clone());
        return Ok((trivial, hom));
    }
    let space = Arc::new(CosetSpace::new(group, normal)?);
    let q = space
        .action_group()
        .rebuild(|p| p.known_order = Some(space.len() as u128));
    let hom = if space.len() <= TABLE_LIMIT {
        // regular action: an element is determined by where it sends the base coset
        let mut by_image: HashMap<usize, Element> = HashMap::new();
        for x in q.elements()?.iter() {
            if let Element::Perm(p) = x {
                by_image.insert(p.apply(0), x.clone());
            }
        }
        let sp = space.clone();
        Homomorphism::from_rule(group, &q, move |x| {
            by_image[&sp.locate(x).expect("element of the group")].clone()
        })
    } else {
        let sp = space.clone();
        Homomorphism::from_rule(group, &q, move |x| {
            Element::Perm(sp.perm_of(x).expect("element of the group"))
        })
    };
    Ok((q, hom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::group::close_subgroup;

    fn perm(d: usize, cycles: &[&[usize]]) -> Element {
        Element::Perm(Perm::from_cycles(d, cycles).unwrap())
    }

    #[test]
    fn s4_mod_klein_has_order_six() {
        let s4 = Group::symmetric(4).unwrap();
        let v4 = close_subgroup(&s4, vec![perm(4, &[&[0, 1], &[2, 3]]), perm(4, &[&[0, 2], &[1, 3]])])
            .unwrap();
        let (q, pi) = quotient(&s4, &v4).unwrap();
        assert_eq!(q.order().unwrap(), 6);
        pi.verify().unwrap();
        assert_eq!(pi.kernel().unwrap().order().unwrap(), 4);
    }

    #[test]
    fn non_normal_is_rejected() {
        let s3 = Group::symmetric(3).unwrap();
        let h = close_subgroup(&s3, vec![perm(3, &[&[0, 1]])]).unwrap();
        let err = quotient(&s3, &h).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("conjugate")));
    }
}
