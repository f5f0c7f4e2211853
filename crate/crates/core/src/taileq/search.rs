use std::collections::{HashMap, HashSet};

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use serde_json::{json, Value};

use super::sequence::{ranks_le, HomSequence, Ranks};
use crate::error::{Error, Result};
use crate::groups::{coarse_invariants, find_isomorphism, for_each_homomorphism, Element, Homomorphism, ISO_ORDER_LIMIT};
use crate::numbers::ser_u128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Node {
    pub side: Side,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub enum WitnessMap {
    Explicit(Homomorphism),
    /// Coordinate projection between elementary abelian products.
    Structural { from: Ranks, to: Ranks },
}

/// A finite interleaving `X_{i_1} → Y_{j_1} → X_{i_2} → Y_{j_2} → …` whose
/// two-step composites are the sequence maps. The intermediate groups are the
/// input groups themselves, so every identification with them is the identity.
#[derive(Clone, Debug)]
pub struct InterleavingWitness {
    pub leader: Side,
    pub a_indices: Vec<usize>,
    pub b_indices: Vec<usize>,
    pub path: Vec<Node>,
    pub maps: Vec<WitnessMap>,
}

impl Serialize for InterleavingWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let maps: Vec<Value> = self
            .maps
            .iter()
            .zip(self.path.windows(2))
            .map(|(m, w)| match m {
                WitnessMap::Explicit(h) => json!({
                    "from": w[0],
                    "to": w[1],
                    "generator_images": h.generator_images().iter().map(Element::to_descriptor).collect::<Vec<_>>(),
                }),
                WitnessMap::Structural { from, to } => json!({
                    "from": w[0],
                    "to": w[1],
                    "from_ranks": from,
                    "to_ranks": to,
                }),
            })
            .collect();
        let mut st = s.serialize_struct("InterleavingWitness", 6)?;
        st.serialize_field("leader", &self.leader)?;
        st.serialize_field("a_indices", &self.a_indices)?;
        st.serialize_field("b_indices", &self.b_indices)?;
        st.serialize_field("path", &self.path)?;
        st.serialize_field("identifications", "identity")?;
        st.serialize_field("maps", &maps)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub a_index: usize,
    pub b_index: usize,
    #[serde(serialize_with = "ser_u128")]
    pub a_order: u128,
    #[serde(serialize_with = "ser_u128")]
    pub b_order: u128,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Witness { witness: InterleavingWitness },
    /// No interleaving can end in an isomorphism of the final groups.
    Obstructed { trace: Vec<Obstruction> },
    /// Nothing found; `complete` means the whole window was searched before
    /// the bound ran out.
    Exhausted {
        bound: usize,
        complete: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&InterleavingWitness> {
        match self {
            SearchOutcome::Witness { witness } => Some(witness),
            _ => None,
        }
    }
}

struct OutOfBudget;

struct Search<'a> {
    a: &'a HomSequence,
    b: &'a HomSequence,
    bound: usize,
    used: usize,
    /// Structural continuations depend only on the last two nodes.
    dead: HashSet<(Node, Node)>,
}

type Step<T> = std::result::Result<T, OutOfBudget>;

impl<'a> Search<'a> {
    fn seq(&self, side: Side) -> &'a HomSequence {
        match side {
            Side::A => self.a,
            Side::B => self.b,
        }
    }

    fn last(&self, side: Side) -> Node {
        Node {
            side,
            index: self.seq(side).len() - 1,
        }
    }

    fn tick(&mut self) -> Step<()> {
        self.used += 1;
        if self.used > self.bound {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    fn ranks(&self, n: Node) -> &'a Ranks {
        match self.seq(n.side) {
            HomSequence::Structural { ranks: Some(r), .. } => &r[n.index],
            _ => unreachable!("ranks requested from a sequence without them"),
        }
    }

    fn is_final(&self, x: Node, y: Node) -> bool {
        let (fa, fb) = (self.last(Side::A), self.last(Side::B));
        (x == fa && y == fb) || (x == fb && y == fa)
    }

    fn is_iso(&self, m: &WitnessMap) -> Result<bool> {
        Ok(match m {
            WitnessMap::Structural { from, to } => from == to,
            WitnessMap::Explicit(h) => h.domain().order()? == h.codomain().order()?,
        })
    }

    /// The map `g: Y → X'` with `g ∘ τ` equal to the sequence map `X → X'`,
    /// if it exists.
    fn extend(&self, tau: &WitnessMap, x: Node, x2: Node) -> Result<Option<WitnessMap>> {
        match tau {
            WitnessMap::Structural { to, .. } => {
                let target = self.ranks(x2);
                Ok(ranks_le(target, to).then(|| WitnessMap::Structural {
                    from: to.clone(),
                    to: target.clone(),
                }))
            }
            WitnessMap::Explicit(tau) => {
                let xs = self.seq(x.side);
                let HomSequence::Explicit { groups, .. } = xs else { unreachable!() };
                let y_group = tau.codomain();
                let wanted: HashSet<&Element> = y_group.generators().iter().collect();
                let mut pre: HashMap<Element, Element> = HashMap::new();
                for e in tau.domain().elements()?.iter() {
                    let t = tau.apply(e)?;
                    if wanted.contains(&t) && !pre.contains_key(&t) {
                        pre.insert(t, e.clone());
                        if pre.len() == wanted.len() {
                            break;
                        }
                    }
                }
                let images = y_group
                    .generators()
                    .iter()
                    .map(|s| xs.carry(&pre[s], x.index, x2.index))
                    .collect::<Result<Vec<_>>>()?;
                let g = Homomorphism::from_images(y_group, &groups[x2.index], images)?;
                match g.verify() {
                    Ok(()) => {}
                    Err(Error::InvalidHomomorphism(_)) => return Ok(None),
                    Err(e) => return Err(e),
                }
                for s in tau.domain().generators() {
                    if g.apply(&tau.apply(s)?)? != xs.carry(s, x.index, x2.index)? {
                        return Ok(None);
                    }
                }
                Ok(Some(WitnessMap::Explicit(g)))
            }
        }
    }

    /// Continues a path whose last map is `maps.last()`.
    fn dfs(&mut self, path: &mut Vec<Node>, maps: &mut Vec<WitnessMap>) -> Result<Step<bool>> {
        let (x, y) = (path[path.len() - 2], path[path.len() - 1]);
        if self.is_final(x, y) && self.is_iso(maps.last().unwrap())? {
            return Ok(Ok(true));
        }
        let structural = matches!(maps.last(), Some(WitnessMap::Structural { .. }));
        if structural && self.dead.contains(&(x, y)) {
            return Ok(Ok(false));
        }
        for i2 in x.index + 1..self.seq(x.side).len() {
            if let Err(e) = self.tick() {
                return Ok(Err(e));
            }
            let x2 = Node { side: x.side, index: i2 };
            let Some(g) = self.extend(maps.last().unwrap(), x, x2)? else {
                continue;
            };
            path.push(x2);
            maps.push(g);
            match self.dfs(path, maps)? {
                Ok(true) => return Ok(Ok(true)),
                Ok(false) => {}
                Err(e) => return Ok(Err(e)),
            }
            path.pop();
            maps.pop();
        }
        if structural {
            self.dead.insert((x, y));
        }
        Ok(Ok(false))
    }

    fn witness(&self, path: Vec<Node>, maps: Vec<WitnessMap>) -> InterleavingWitness {
        let pick = |side| path.iter().filter(|n| n.side == side).map(|n| n.index).collect();
        InterleavingWitness {
            leader: path[0].side,
            a_indices: pick(Side::A),
            b_indices: pick(Side::B),
            path,
            maps,
        }
    }

    /// Surjections `X_i → Y_j` to start from: the coordinate projection first,
    /// then every surjective homomorphism in enumeration order.
    fn start_from(&mut self, x: Node, y: Node) -> Result<Step<Option<InterleavingWitness>>> {
        if let Err(e) = self.tick() {
            return Ok(Err(e));
        }
        let (xs, ys) = (self.seq(x.side), self.seq(y.side));
        if xs.order(x.index)? % ys.order(y.index)? != 0 {
            return Ok(Ok(None));
        }
        if let (HomSequence::Structural { .. }, HomSequence::Structural { .. }) = (xs, ys) {
            let (rx, ry) = (self.ranks(x), self.ranks(y));
            if !ranks_le(ry, rx) {
                return Ok(Ok(None));
            }
            let mut path = vec![x, y];
            let mut maps = vec![WitnessMap::Structural {
                from: rx.clone(),
                to: ry.clone(),
            }];
            return Ok(match self.dfs(&mut path, &mut maps)? {
                Ok(true) => Ok(Some(self.witness(path, maps))),
                Ok(false) => Ok(None),
                Err(e) => Err(e),
            });
        }
        let (HomSequence::Explicit { groups: gx, .. }, HomSequence::Explicit { groups: gy, .. }) = (xs, ys)
        else {
            unreachable!()
        };
        let (gx, gy) = (&gx[x.index], &gy[y.index]);
        let mut tried: Vec<Homomorphism> = Vec::new();
        if let Some(h) = coordinate_projection(gx, gy)? {
            match self.try_start(x, y, h, &mut tried)? {
                Some(Ok(None)) | None => {}
                Some(done) => return Ok(done),
            }
        }
        let remaining = self.bound.saturating_sub(self.used);
        let mut found: Option<Step<Option<InterleavingWitness>>> = None;
        let enumeration = for_each_homomorphism(gx, gy, true, remaining, |h| {
            match self.try_start(x, y, h, &mut tried)? {
                Some(Ok(Some(w))) => {
                    found = Some(Ok(Some(w)));
                    Ok(true)
                }
                Some(Err(e)) => {
                    found = Some(Err(e));
                    Ok(true)
                }
                _ => Ok(false),
            }
        })?;
        if let Some(f) = found {
            return Ok(f);
        }
        if enumeration == crate::groups::Enumeration::OutOfBudget {
            self.used = self.bound + 1;
            return Ok(Err(OutOfBudget));
        }
        Ok(Ok(None))
    }

    /// Runs the continuation from one first map, skipping maps already tried.
    fn try_start(
        &mut self,
        x: Node,
        y: Node,
        h: Homomorphism,
        tried: &mut Vec<Homomorphism>,
    ) -> Result<Option<Step<Option<InterleavingWitness>>>> {
        for t in tried.iter() {
            if t.generator_images() == h.generator_images() && t.domain().generators() == h.domain().generators() {
                return Ok(None);
            }
        }
        if let Err(e) = self.tick() {
            return Ok(Some(Err(e)));
        }
        tried.push(h.clone());
        let mut path = vec![x, y];
        let mut maps = vec![WitnessMap::Explicit(h)];
        Ok(Some(match self.dfs(&mut path, &mut maps)? {
            Ok(true) => Ok(Some(self.witness(path, maps))),
            Ok(false) => Ok(None),
            Err(e) => Err(e),
        }))
    }
}

/// Keeps each coordinate of a tuple whose single-coordinate element lies in
/// the codomain and clears the others.
fn coordinate_projection(
    from: &crate::groups::Group,
    to: &crate::groups::Group,
) -> Result<Option<Homomorphism>> {
    let (Some(fi), Some(ti)) = (from.identity().components(), to.identity().components()) else {
        return Ok(None);
    };
    if fi.len() != ti.len() {
        return Ok(None);
    }
    let mut images = Vec::new();
    for g in from.generators() {
        let parts = g.components().unwrap();
        let mut out = ti.to_vec();
        for (k, c) in parts.iter().enumerate() {
            let mut single = ti.to_vec();
            single[k] = c.clone();
            if to.contains(&Element::Tuple(single))? {
                out[k] = c.clone();
            }
        }
        images.push(Element::Tuple(out));
    }
    let h = Homomorphism::from_images(from, to, images)?;
    match h.verify() {
        Ok(()) => {}
        Err(Error::InvalidHomomorphism(_)) => return Ok(None),
        Err(e) => return Err(e),
    }
    Ok(h.is_surjective()?.then_some(h))
}

fn final_obstruction(a: &HomSequence, b: &HomSequence) -> Result<Option<Obstruction>> {
    let (ia, ib) = (a.len() - 1, b.len() - 1);
    let (oa, ob) = (a.order(ia)?, b.order(ib)?);
    let obstruction = |reason: String| Obstruction {
        a_index: ia,
        b_index: ib,
        a_order: oa,
        b_order: ob,
        reason,
    };
    if oa != ob {
        return Ok(Some(obstruction(format!("final orders differ: {oa} vs {ob}"))));
    }
    match (a, b) {
        (
            HomSequence::Structural { ranks: Some(ra), .. },
            HomSequence::Structural { ranks: Some(rb), .. },
        ) => {
            if ra[ia] != rb[ib] {
                return Ok(Some(obstruction("final elementary abelian ranks differ".into())));
            }
        }
        (HomSequence::Explicit { groups: ga, .. }, HomSequence::Explicit { groups: gb, .. }) => {
            let (x, y) = (&ga[ia], &gb[ib]);
            if coarse_invariants(x)? != coarse_invariants(y)? {
                return Ok(Some(obstruction("final groups have different invariants".into())));
            }
            if oa <= ISO_ORDER_LIMIT && find_isomorphism(x, y)?.is_none() {
                return Ok(Some(obstruction("final groups are not isomorphic".into())));
            }
        }
        _ => {}
    }
    Ok(None)
}

/// Bounded search for an interleaving of `a` and `b` that ends with an
/// isomorphism between their final groups. Start pairs are tried in
/// lexicographic order `(i, j)`, with `a` leading before `b`.
pub fn interleaving_search(a: &HomSequence, b: &HomSequence, bound: usize) -> Result<SearchOutcome> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("both sequences need at least one group".into()));
    }
    if a.is_explicit() != b.is_explicit() {
        return Err(Error::Precondition(
            "cannot interleave an explicit sequence with a structural one".into(),
        ));
    }
    if let Some(o) = final_obstruction(a, b)? {
        return Ok(SearchOutcome::Obstructed { trace: vec![o] });
    }
    let orders_only = |s: &HomSequence| matches!(s, HomSequence::Structural { ranks: None, .. });
    if orders_only(a) || orders_only(b) {
        return Ok(SearchOutcome::Exhausted {
            bound,
            complete: false,
            note: Some("sequences given by orders alone carry no maps to interleave".into()),
        });
    }
    let mut search = Search {
        a,
        b,
        bound,
        used: 0,
        dead: HashSet::new(),
    };
    for i in 0..a.len() {
        for j in 0..b.len() {
            let na = Node { side: Side::A, index: i };
            let nb = Node { side: Side::B, index: j };
            for (x, y) in [(na, nb), (nb, na)] {
                match search.start_from(x, y)? {
                    Ok(Some(witness)) => return Ok(SearchOutcome::Witness { witness }),
                    Ok(None) => {}
                    Err(OutOfBudget) => {
                        return Ok(SearchOutcome::Exhausted {
                            bound,
                            complete: false,
                            note: None,
                        })
                    }
                }
            }
        }
    }
    Ok(SearchOutcome::Exhausted {
        bound,
        complete: true,
        note: None,
    })
}

/// Re-checks a witness against the two sequences: alternation, increasing
/// indices, the two-step composites, and the final isomorphism.
pub fn verify_witness(a: &HomSequence, b: &HomSequence, w: &InterleavingWitness) -> Result<bool> {
    let seq = |side| match side {
        Side::A => a,
        Side::B => b,
    };
    let path = &w.path;
    if path.len() < 2 || w.maps.len() + 1 != path.len() || path[0].side != w.leader {
        return Ok(false);
    }
    for (k, n) in path.iter().enumerate() {
        if n.side != if k % 2 == 0 { w.leader } else { w.leader.other() } || n.index >= seq(n.side).len() {
            return Ok(false);
        }
        if k >= 2 && path[k - 2].index >= n.index {
            return Ok(false);
        }
    }
    let pick = |side| -> Vec<usize> { path.iter().filter(|n| n.side == side).map(|n| n.index).collect() };
    if pick(Side::A) != w.a_indices || pick(Side::B) != w.b_indices {
        return Ok(false);
    }
    for (k, m) in w.maps.iter().enumerate() {
        let (from, to) = (path[k], path[k + 1]);
        match m {
            WitnessMap::Structural { from: rf, to: rt } => {
                let ranks_of = |n: Node| match seq(n.side) {
                    HomSequence::Structural { ranks: Some(r), .. } => Some(&r[n.index]),
                    _ => None,
                };
                if ranks_of(from) != Some(rf) || ranks_of(to) != Some(rt) || !ranks_le(rt, rf) {
                    return Ok(false);
                }
            }
            WitnessMap::Explicit(h) => {
                let group = |n: Node| match seq(n.side) {
                    HomSequence::Explicit { groups, .. } => Some(&groups[n.index]),
                    _ => None,
                };
                let (Some(gf), Some(gt)) = (group(from), group(to)) else {
                    return Ok(false);
                };
                if !h.domain().equals(gf)? || !h.codomain().equals(gt)? {
                    return Ok(false);
                }
                if h.verify().is_err() || !h.is_surjective()? {
                    return Ok(false);
                }
                if k >= 1 {
                    let WitnessMap::Explicit(prev) = &w.maps[k - 1] else {
                        return Ok(false);
                    };
                    let start = path[k - 1];
                    for s in prev.domain().generators() {
                        let lhs = h.apply(&prev.apply(s)?)?;
                        if lhs != seq(start.side).carry(s, start.index, to.index)? {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    let (x, y) = (path[path.len() - 2], path[path.len() - 1]);
    let last_a = Node { side: Side::A, index: a.len() - 1 };
    let last_b = Node { side: Side::B, index: b.len() - 1 };
    if !((x == last_a && y == last_b) || (x == last_b && y == last_a)) {
        return Ok(false);
    }
    Ok(seq(x.side).order(x.index)? == seq(y.side).order(y.index)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profinite::FamilySpec;
    use crate::taileq::{family_sequence_explicit, family_sequence_structural};

    fn fam(bits: &[u8]) -> FamilySpec {
        FamilySpec::new(vec![2, 3, 5], bits.to_vec()).unwrap()
    }

    #[test]
    fn sequence_interleaves_with_itself() {
        let s = family_sequence_explicit(&fam(&[2, 1, 2]), 3).unwrap();
        let out = interleaving_search(&s, &s, 10_000).unwrap();
        let w = out.witness().expect("witness");
        assert!(verify_witness(&s, &s, w).unwrap());
    }

    #[test]
    fn explicit_tail_agreement_is_found() {
        let a = family_sequence_explicit(&fam(&[1, 1, 2]), 3).unwrap();
        let b = family_sequence_explicit(&fam(&[2, 2, 2]), 3).unwrap();
        let out = interleaving_search(&a, &b, 100_000).unwrap();
        let w = out.witness().expect("witness");
        assert!(verify_witness(&a, &b, w).unwrap());
    }

    #[test]
    fn different_final_bits_are_obstructed() {
        let a = family_sequence_structural(&fam(&[1, 1, 1]), 3).unwrap();
        let b = family_sequence_structural(&fam(&[2, 2, 2]), 3).unwrap();
        assert!(matches!(interleaving_search(&a, &b, 1000).unwrap(), SearchOutcome::Obstructed { .. }));
    }

    #[test]
    fn orders_only_sequences_are_not_searched() {
        let a = HomSequence::from_orders(vec![4, 2], vec![2]);
        let out = interleaving_search(&a, &a, 1000).unwrap();
        assert!(matches!(out, SearchOutcome::Exhausted { complete: false, note: Some(_), .. }));
    }
}
