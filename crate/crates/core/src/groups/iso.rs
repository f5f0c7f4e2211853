//! Brute-force homomorphism enumeration for small groups.

use std::collections::HashMap;

use super::element::Element;
use super::group::Group;
use super::hom::Homomorphism;
use super::invariants::coarse_invariants;
use crate::error::{Error, Result};

/// Largest order for which exact isomorphism is decided.
pub const ISO_ORDER_LIMIT: u128 = 512;

/// Outcome of a bounded enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    /// The visitor asked to stop.
    Stopped,
    /// Every assignment was tried.
    Complete,
    /// The candidate budget ran out first.
    OutOfBudget,
}

/// Tries assignments of images to the (irredundant) generators of `domain`
/// in lexicographic order of the codomain's element list, calling `visit` on
/// every assignment that extends to a homomorphism. `visit` returns `true` to
/// stop. At most `budget` assignments are examined.
pub fn for_each_homomorphism(
    domain: &Group,
    codomain: &Group,
    surjective_only: bool,
    budget: usize,
    mut visit: impl FnMut(Homomorphism) -> Result<bool>,
) -> Result<Enumeration> {
    let gens = domain.irredundant_generators()?;
    let dom = Group::generated(domain.identity().clone(), gens.clone())?
        .with_max_elements(domain.max_elements());
    let dom_elems = dom.elements()?;
    let targets = codomain.elements()?;
    let target_order = targets.len() as u128;
    let candidates: Vec<Vec<&Element>> = gens
        .iter()
        .map(|s| {
            let o = s.order();
            targets.iter().filter(|y| o % y.order() == 0).collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(Enumeration::Complete);
    }
    let mut choice = vec![0usize; gens.len()];
    let mut tried = 0usize;
    loop {
        if tried >= budget {
            return Ok(Enumeration::OutOfBudget);
        }
        tried += 1;
        let images: Vec<Element> = choice
            .iter()
            .zip(&candidates)
            .map(|(&c, cands)| cands[c].clone())
            .collect();
        if let Some(table) = extend(&dom, dom_elems.len(), &images) {
            let ok = !surjective_only || {
                let mut seen: HashMap<&Element, ()> = HashMap::new();
                for y in table.values() {
                    seen.insert(y, ());
                }
                seen.len() as u128 == target_order
            };
            if ok {
                // express the map on the caller's generators
                let on_domain = domain
                    .generators()
                    .iter()
                    .map(|s| table[s].clone())
                    .collect();
                let hom = Homomorphism::from_images(domain, codomain, on_domain)?;
                if visit(hom)? {
                    return Ok(Enumeration::Stopped);
                }
            }
        }
        // next assignment
        let mut k = gens.len();
        loop {
            if k == 0 {
                return Ok(Enumeration::Complete);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Walks the Cayley graph; `None` if the assignment is not a homomorphism.
fn extend(dom: &Group, size: usize, images: &[Element]) -> Option<HashMap<Element, Element>> {
    let id = dom.identity().clone();
    let mut table = HashMap::with_capacity(size);
    table.insert(id.clone(), images.first()?.identity_like());
    let mut queue = vec![id];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head].clone();
        let y = table[&x].clone();
        for (s, t) in dom.generators().iter().zip(images) {
            let xs = x.mul(s);
            let yt = y.mul(t);
            match table.get(&xs) {
                Some(prev) if *prev != yt => return None,
                Some(_) => {}
                None => {
                    table.insert(xs.clone(), yt);
                    queue.push(xs);
                }
            }
        }
        head += 1;
    }
    Some(table)
}

/// An isomorphism `a → b`, or `None` if there is none. Coarse invariants are
/// compared first; the exhaustive search only runs for orders up to
/// [`ISO_ORDER_LIMIT`].
pub fn find_isomorphism(a: &Group, b: &Group) -> Result<Option<Homomorphism>> {
    let (ia, ib) = (coarse_invariants(a)?, coarse_invariants(b)?);
    if ia != ib {
        return Ok(None);
    }
    if ia.order == 1 {
        let target = b.identity().clone();
        return Ok(Some(Homomorphism::from_rule(a, b, move |_| target.clone())));
    }
    if ia.order > ISO_ORDER_LIMIT {
        return Err(Error::resource(
            "exact isomorphism test",
            ia.order,
            ISO_ORDER_LIMIT as usize,
        ));
    }
    let mut found = None;
    for_each_homomorphism(a, b, true, usize::MAX, |h| {
        found = Some(h);
        Ok(true)
    })?;
    Ok(found)
}
