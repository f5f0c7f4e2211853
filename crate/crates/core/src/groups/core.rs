use std::collections::HashMap;

use super::element::Element;
use super::group::{Group, Subgroup};
use crate::error::{Error, Result};

/// The normal core `∩_{g∈G} gHg⁻¹`.
///
/// `G` is never enumerated. Each element of `H` is followed around its
/// conjugacy class under the generators of `G`; the class either stays inside
/// `H` (and the whole class survives) or leaves it, at which point every
/// element visited so far is discarded too, since they share the class.
pub fn core(group: &Group, h: &Group) -> Result<Subgroup> {
    if !h.is_subgroup_of(group)? {
        return Err(Error::Domain("subgroup is not contained in the group".into()));
    }
    if h.is_trivial() || h.is_normal_in(group)? {
        return Ok(Subgroup::new_unchecked(group, h.clone()));
    }
    let elements = h.elements()?;
    let gens = group.generators();
    let gen_invs: Vec<Element> = gens.iter().map(Element::inverse).collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Unknown,
        Survives,
        Dies,
    }
    let mut marks = vec![Mark::Unknown; elements.len()];
    for start in 0..elements.len() {
        if marks[start] != Mark::Unknown {
            continue;
        }
        let mut orbit = vec![start];
        let mut seen: HashMap<usize, ()> = HashMap::new();
        seen.insert(start, ());
        let mut head = 0;
        let mut dies = false;
        'bfs: while head < orbit.len() {
            let x = elements.get(orbit[head]);
            for (g, g_inv) in gens.iter().zip(&gen_invs) {
                let y = g.mul(x).mul(g_inv);
                match elements.index_of(&y) {
                    None => {
                        dies = true;
                        break 'bfs;
                    }
                    Some(j) => {
                        if marks[j] == Mark::Dies {
                            dies = true;
                            break 'bfs;
                        }
                        if seen.insert(j, ()).is_none() {
                            orbit.push(j);
                        }
                    }
                }
            }
            head += 1;
        }
        let mark = if dies { Mark::Dies } else { Mark::Survives };
        for i in orbit {
            marks[i] = mark;
        }
    }
    let survivors: Vec<Element> = elements
        .iter()
        .zip(&marks)
        .filter(|(_, m)| **m == Mark::Survives)
        .map(|(x, _)| x.clone())
        .collect();
    let core = Group::from_closed_set(group.identity(), &survivors, h.max_elements())?;
    Ok(Subgroup::new_unchecked(group, core))
}
