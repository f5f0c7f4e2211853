//! Coordinate stabilizer chains for subgroups of direct products.
//!
//! For a subgroup `H` of `F_0 × … × F_{k-1}` generated by tuples, level `j`
//! holds `H^(j) = {h ∈ H : h_0 = … = h_{j-1} = e}` through its projection to
//! coordinate `j` together with a transversal. `|H|` is the product of the
//! projection sizes and membership is decided by sifting, so neither needs the
//! whole of `H` to be listed. The construction is the deterministic
//! incremental Schreier–Sims procedure with coordinates in place of base points.

use std::collections::HashMap;

use super::element::Element;
use crate::error::{Error, Result};

struct Level {
    /// Strong generators whose first non-trivial coordinate is this level.
    own: Vec<Element>,
    orbit: Vec<Element>,
    transversal: HashMap<Element, (Element, Element)>,
}

pub(crate) struct CoordinateChain {
    identity: Element,
    levels: Vec<Level>,
}

fn first_nontrivial(x: &Element) -> Option<usize> {
    x.components()?.iter().position(|c| !c.is_identity())
}

impl CoordinateChain {
    pub(crate) fn build(identity: &Element, gens: &[Element], limit: usize) -> Result<Self> {
        let width = identity
            .components()
            .map(<[Element]>::len)
            .ok_or_else(|| Error::Invariant("coordinate chain needs tuple elements".into()))?;
        let mut chain = CoordinateChain {
            identity: identity.clone(),
            levels: (0..width)
                .map(|_| Level {
                    own: Vec::new(),
                    orbit: Vec::new(),
                    transversal: HashMap::new(),
                })
                .collect(),
        };
        for g in gens {
            if let Some(j) = first_nontrivial(g) {
                if !chain.levels[j].own.contains(g) {
                    chain.levels[j].own.push(g.clone());
                }
            }
        }
        if width == 0 {
            return Ok(chain);
        }

        let mut i = width as isize - 1;
        while i >= 0 {
            let level = i as usize;
            chain.rebuild_orbit(level, limit)?;
            match chain.find_residue(level)? {
                Some((residue, target)) => {
                    chain.levels[target].own.push(residue);
                    i = target as isize;
                }
                None => i -= 1,
            }
        }
        Ok(chain)
    }

    fn strong_generators(&self, level: usize) -> Vec<Element> {
        self.levels[level..]
            .iter()
            .flat_map(|l| l.own.iter().cloned())
            .collect()
    }

    fn rebuild_orbit(&mut self, level: usize, limit: usize) -> Result<()> {
        let gens = self.strong_generators(level);
        let start = self.identity.component(level).unwrap().clone();
        let mut orbit = vec![start.clone()];
        let mut transversal = HashMap::new();
        transversal.insert(start, (self.identity.clone(), self.identity.clone()));
        let mut head = 0;
        while head < orbit.len() {
            let point = orbit[head].clone();
            let rep = transversal[&point].0.clone();
            for s in &gens {
                let image = point.mul(s.component(level).unwrap());
                if !transversal.contains_key(&image) {
                    let t = rep.mul(s);
                    let t_inv = t.inverse();
                    transversal.insert(image.clone(), (t, t_inv));
                    orbit.push(image);
                    if orbit.len() > limit {
                        return Err(Error::resource(
                            format!("projection to coordinate {level}"),
                            format!("more than {limit}"),
                            limit,
                        ));
                    }
                }
            }
            head += 1;
        }
        let l = &mut self.levels[level];
        l.orbit = orbit;
        l.transversal = transversal;
        Ok(())
    }

    /// Checks every Schreier generator of `level` against the levels below it.
    fn find_residue(&self, level: usize) -> Result<Option<(Element, usize)>> {
        let gens = self.strong_generators(level);
        let l = &self.levels[level];
        for point in &l.orbit {
            let t = &l.transversal[point].0;
            for s in &gens {
                let image = point.mul(s.component(level).unwrap());
                let t_image_inv = &l.transversal[&image].1;
                let schreier = t.mul(s).mul(t_image_inv);
                if let Some(residue) = self.sift_from(schreier, level + 1) {
                    let target = first_nontrivial(&residue).ok_or_else(|| {
                        Error::Invariant("sift residue is the identity".into())
                    })?;
                    return Ok(Some((residue, target)));
                }
            }
        }
        Ok(None)
    }

    /// Returns the non-trivial residue, or `None` when `x` sifts to the identity.
    fn sift_from(&self, mut x: Element, from: usize) -> Option<Element> {
        for j in from..self.levels.len() {
            let c = x.component(j).unwrap();
            if c.is_identity() {
                continue;
            }
            match self.levels[j].transversal.get(c) {
                Some((_, t_inv)) => x = t_inv.mul(&x),
                None => return Some(x),
            }
        }
        if x.is_identity() {
            None
        } else {
            Some(x)
        }
    }

    pub(crate) fn contains(&self, x: &Element) -> bool {
        self.sift_from(x.clone(), 0).is_none()
    }

    pub(crate) fn order(&self) -> Option<u128> {
        self.levels
            .iter()
            .try_fold(1u128, |acc, l| acc.checked_mul(l.orbit.len().max(1) as u128))
    }

    pub(crate) fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }
}
