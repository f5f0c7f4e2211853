use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::{Arc, OnceLock};

use super::element::{Element, ElementKind};
use super::linear::{self, FamilyVariant};
use super::stabchain::CoordinateChain;
use crate::error::{Error, Result};

/// Default cap on the number of elements any single enumeration may produce.
pub const DEFAULT_MAX_ELEMENTS: usize = 10_000_000;

/// How membership and order are decided for a group.
#[derive(Clone)]
pub enum Structure {
    /// Only the generators are known; membership needs enumeration or sifting.
    Generic,
    Symmetric { degree: usize },
    /// `SL_n(Z/mZ)`: membership is `det ≡ 1`.
    SpecialLinear { dim: usize, modulus: u32 },
    /// The upper unitriangular families `A¹_p`, `A²_p` inside `SL_3(Z/pZ)`.
    Unitriangular { p: u32, variant: FamilyVariant },
    /// Full direct product of the listed groups, acting on tuples.
    DirectProduct(Vec<Group>),
    /// `by · base · by⁻¹`
    Conjugate { base: Group, by: Element },
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Generic => write!(f, "Generic"),
            Structure::Symmetric { degree } => write!(f, "Symmetric({degree})"),
            Structure::SpecialLinear { dim, modulus } => write!(f, "SL({dim}, Z/{modulus})"),
            Structure::Unitriangular { p, variant } => write!(f, "A{}_{p}", variant.rank()),
            Structure::DirectProduct(parts) => write!(f, "DirectProduct[{}]", parts.len()),
            Structure::Conjugate { by, .. } => write!(f, "Conjugate(by {by})"),
        }
    }
}

/// The elements of a finite group in a fixed enumeration order.
#[derive(Debug)]
pub struct ElementSet {
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

impl ElementSet {
    fn from_vec(elements: Vec<Element>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        ElementSet { elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.index.contains_key(x)
    }

    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn get(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[Element] {
        &self.elements
    }
}

/// Closure of `gens` under multiplication, in breadth-first order from the
/// identity. Generators already in the closure are skipped. Returns the
/// elements and the generators that were actually needed.
pub(crate) fn closure(
    identity: &Element,
    gens: &[Element],
    limit: usize,
    what: &str,
) -> Result<(Vec<Element>, Vec<Element>)> {
    let mut list = vec![identity.clone()];
    let mut seen: HashMap<Element, ()> = HashMap::new();
    seen.insert(identity.clone(), ());
    let mut kept: Vec<Element> = Vec::new();
    for g in gens {
        if seen.contains_key(g) {
            continue;
        }
        kept.push(g.clone());
        let old_len = list.len();
        let mut i = 0;
        while i < list.len() {
            let range = if i < old_len { kept.len() - 1..kept.len() } else { 0..kept.len() };
            for s in &kept[range] {
                let y = list[i].mul(s);
                if !seen.contains_key(&y) {
                    seen.insert(y.clone(), ());
                    list.push(y);
                    if list.len() > limit {
                        return Err(Error::resource(what, format!("more than {limit}"), limit));
                    }
                }
            }
            i += 1;
        }
    }
    Ok((list, kept))
}

struct Inner {
    identity: Element,
    generators: Vec<Element>,
    structure: Structure,
    max_elements: usize,
    known_order: Option<u128>,
    label: Option<String>,
    order: OnceLock<u128>,
    elements: OnceLock<Arc<ElementSet>>,
    chain: OnceLock<Arc<CoordinateChain>>,
}

/// A finite group given by generators. Cheap to clone; immutable.
#[derive(Clone)]
pub struct Group {
    inner: Arc<Inner>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("label", &self.inner.label)
            .field("structure", &self.inner.structure)
            .field("generators", &self.inner.generators)
            .finish()
    }
}

impl Group {
    pub(crate) fn build(
        identity: Element,
        generators: Vec<Element>,
        structure: Structure,
        known_order: Option<u128>,
        max_elements: usize,
    ) -> Group {
        Group {
            inner: Arc::new(Inner {
                identity,
                generators,
                structure,
                max_elements,
                known_order,
                label: None,
                order: OnceLock::new(),
                elements: OnceLock::new(),
                chain: OnceLock::new(),
            }),
        }
    }

    /// The group generated by `generators`, all of which must share the
    /// identity's kind.
    pub fn generated(identity: Element, generators: Vec<Element>) -> Result<Group> {
        let kind = identity.kind();
        if let Some(bad) = generators.iter().find(|g| g.kind() != kind) {
            return Err(Error::Domain(format!(
                "generator {bad} does not have the shape of identity {identity}"
            )));
        }
        if !identity.is_identity() {
            return Err(Error::Domain(format!("{identity} is not an identity element")));
        }
        Ok(Group::build(
            identity,
            generators,
            Structure::Generic,
            None,
            DEFAULT_MAX_ELEMENTS,
        ))
    }

    pub fn trivial(identity: Element) -> Group {
        let identity = identity.identity_like();
        Group::build(identity, Vec::new(), Structure::Generic, Some(1), DEFAULT_MAX_ELEMENTS)
    }

    /// The full symmetric group on `degree` points, generated by a transposition
    /// and an n-cycle.
    pub fn symmetric(degree: usize) -> Result<Group> {
        use super::element::Perm;
        if degree == 0 {
            return Err(Error::Spec("symmetric group needs degree at least 1".into()));
        }
        let identity = Element::Perm(Perm::identity(degree));
        let mut gens = Vec::new();
        if degree > 1 {
            gens.push(Element::Perm(Perm::from_cycles(degree, &[&[0, 1]])?));
            let cycle: Vec<usize> = (0..degree).collect();
            gens.push(Element::Perm(Perm::from_cycles(degree, &[&cycle])?));
        }
        let order = (1..=degree as u128).try_fold(1u128, |a, b| a.checked_mul(b));
        Ok(Group::build(
            identity,
            gens,
            Structure::Symmetric { degree },
            order,
            DEFAULT_MAX_ELEMENTS,
        ))
    }

    /// Direct product of `factors`, acting componentwise on tuples.
    pub fn direct_product(factors: Vec<Group>) -> Group {
        let identity = Element::Tuple(factors.iter().map(|f| f.identity().clone()).collect());
        let mut gens = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            for g in f.generators() {
                let mut parts: Vec<Element> = factors.iter().map(|f| f.identity().clone()).collect();
                parts[i] = g.clone();
                gens.push(Element::Tuple(parts));
            }
        }
        let known = factors
            .iter()
            .map(|f| f.inner.known_order)
            .try_fold(1u128, |acc, o| o.and_then(|o| acc.checked_mul(o)));
        let limit = factors
            .iter()
            .map(|f| f.max_elements())
            .min()
            .unwrap_or(DEFAULT_MAX_ELEMENTS);
        Group::build(identity, gens, Structure::DirectProduct(factors), known, limit)
    }

    pub(crate) fn rebuild(&self, f: impl FnOnce(&mut RebuildParts)) -> Group {
        let mut parts = RebuildParts {
            generators: self.inner.generators.clone(),
            structure: self.inner.structure.clone(),
            known_order: self.inner.known_order,
            max_elements: self.inner.max_elements,
            label: self.inner.label.clone(),
        };
        f(&mut parts);
        let mut g = Group::build(
            self.inner.identity.clone(),
            parts.generators,
            parts.structure,
            parts.known_order,
            parts.max_elements,
        );
        Arc::get_mut(&mut g.inner).unwrap().label = parts.label;
        g
    }

    /// Same group with a different enumeration bound (caches are not shared).
    pub fn with_max_elements(&self, max_elements: usize) -> Group {
        self.rebuild(|p| p.max_elements = max_elements)
    }

    pub fn with_label(&self, label: impl Into<String>) -> Group {
        let label = label.into();
        let g = self.rebuild(|p| p.label = Some(label));
        // keep already computed data
        if let Some(set) = self.inner.elements.get() {
            let _ = g.inner.elements.set(set.clone());
        }
        if let Some(&o) = self.inner.order.get() {
            let _ = g.inner.order.set(o);
        }
        g
    }

    pub fn label(&self) -> Option<&str> {
        self.inner.label.as_deref()
    }

    pub fn identity(&self) -> &Element {
        &self.inner.identity
    }

    pub fn kind(&self) -> ElementKind {
        self.inner.identity.kind()
    }

    pub fn generators(&self) -> &[Element] {
        &self.inner.generators
    }

    pub fn structure(&self) -> &Structure {
        &self.inner.structure
    }

    pub fn max_elements(&self) -> usize {
        self.inner.max_elements
    }

    pub fn same_group_object(&self, other: &Group) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn is_trivial(&self) -> bool {
        self.inner.generators.iter().all(Element::is_identity)
    }

    /// The order when it is available without enumerating elements.
    pub fn cheap_order(&self) -> Option<u128> {
        if let Some(o) = self.inner.known_order {
            return Some(o);
        }
        if let Some(&o) = self.inner.order.get() {
            return Some(o);
        }
        if self.is_trivial() {
            return Some(1);
        }
        match &self.inner.structure {
            Structure::DirectProduct(parts) => parts
                .iter()
                .try_fold(1u128, |acc, p| p.cheap_order().and_then(|o| acc.checked_mul(o))),
            Structure::Conjugate { base, .. } => base.cheap_order(),
            _ => None,
        }
    }

    pub fn order(&self) -> Result<u128> {
        if let Some(o) = self.cheap_order() {
            return Ok(o);
        }
        let o = match &self.inner.structure {
            Structure::DirectProduct(parts) => {
                let mut acc = 1u128;
                for p in parts {
                    acc = acc.checked_mul(p.order()?).ok_or_else(|| {
                        Error::resource("direct product order", "more than 2^128", usize::MAX)
                    })?;
                }
                acc
            }
            Structure::Conjugate { base, .. } => base.order()?,
            _ => {
                if let Some(set) = self.inner.elements.get() {
                    set.len() as u128
                } else if matches!(self.inner.identity, Element::Tuple(_)) {
                    self.coordinate_chain()?
                        .order()
                        .ok_or_else(|| Error::resource("group order", "more than 2^128", usize::MAX))?
                } else {
                    self.elements()?.len() as u128
                }
            }
        };
        let _ = self.inner.order.set(o);
        Ok(o)
    }

    fn coordinate_chain(&self) -> Result<Arc<CoordinateChain>> {
        if let Some(c) = self.inner.chain.get() {
            return Ok(c.clone());
        }
        let chain = Arc::new(CoordinateChain::build(
            &self.inner.identity,
            &self.inner.generators,
            self.inner.max_elements,
        )?);
        let _ = self.inner.chain.set(chain.clone());
        Ok(chain)
    }

    /// Sizes of the coordinate projections used for tuple groups.
    pub fn coordinate_orbit_sizes(&self) -> Result<Vec<usize>> {
        Ok(self.coordinate_chain()?.orbit_sizes())
    }

    /// All elements, enumerated by breadth-first closure and cached.
    pub fn elements(&self) -> Result<Arc<ElementSet>> {
        if let Some(set) = self.inner.elements.get() {
            return Ok(set.clone());
        }
        let limit = self.inner.max_elements;
        let what = match &self.inner.label {
            Some(l) => format!("enumerating {l}"),
            None => "enumerating group elements".to_string(),
        };
        if let Some(o) = self.cheap_order() {
            if o > limit as u128 {
                return Err(Error::resource(what, o, limit));
            }
        }
        let (list, _) = closure(&self.inner.identity, &self.inner.generators, limit, &what)?;
        let set = Arc::new(ElementSet::from_vec(list));
        let _ = self.inner.elements.set(set.clone());
        let _ = self.inner.order.set(set.len() as u128);
        Ok(set)
    }

    pub fn contains(&self, x: &Element) -> Result<bool> {
        if x.kind() != self.kind() {
            return Ok(false);
        }
        match &self.inner.structure {
            Structure::Symmetric { .. } => Ok(true),
            Structure::SpecialLinear { .. } => match x {
                Element::Mat(m) => Ok(m.determinant() == 1),
                _ => Ok(false),
            },
            Structure::Unitriangular { p, variant } => Ok(linear::in_family(x, *p, *variant)),
            Structure::DirectProduct(parts) => {
                let comps = x.components().unwrap_or(&[]);
                for (part, c) in parts.iter().zip(comps) {
                    if !part.contains(c)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Structure::Conjugate { base, by } => base.contains(&x.conjugate_by(&by.inverse())),
            Structure::Generic => {
                if x.is_identity() {
                    return Ok(true);
                }
                if let Some(set) = self.inner.elements.get() {
                    return Ok(set.contains(x));
                }
                if self.is_trivial() {
                    return Ok(false);
                }
                if matches!(self.inner.identity, Element::Tuple(_)) {
                    return Ok(self.coordinate_chain()?.contains(x));
                }
                Ok(self.elements()?.contains(x))
            }
        }
    }

    /// True when every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &Group) -> Result<bool> {
        if self.kind() != other.kind() {
            return Ok(false);
        }
        for g in self.generators() {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same element set, decided by mutual containment of generators.
    pub fn equals(&self, other: &Group) -> Result<bool> {
        Ok(self.is_subgroup_of(other)? && other.is_subgroup_of(self)?)
    }

    /// A pair `(h, g)` of generators with `g h g⁻¹ ∉ self`, if any.
    pub fn normality_violation(&self, ambient: &Group) -> Result<Option<(Element, Element)>> {
        for h in self.generators() {
            for g in ambient.generators() {
                if !self.contains(&h.conjugate_by(g))? {
                    return Ok(Some((h.clone(), g.clone())));
                }
            }
        }
        Ok(None)
    }

    pub fn is_normal_in(&self, ambient: &Group) -> Result<bool> {
        Ok(self.normality_violation(ambient)?.is_none())
    }

    /// `g · self · g⁻¹`
    pub fn conjugate(&self, g: &Element) -> Group {
        let gens = self.generators().iter().map(|x| x.conjugate_by(g)).collect();
        Group::build(
            self.identity().clone(),
            gens,
            Structure::Conjugate {
                base: self.clone(),
                by: g.clone(),
            },
            self.cheap_order(),
            self.max_elements(),
        )
    }

    /// Group whose element set is exactly `elements`, which must be closed
    /// under multiplication. A generating set is chosen greedily.
    pub(crate) fn from_closed_set(
        identity: &Element,
        elements: &[Element],
        max_elements: usize,
    ) -> Result<Group> {
        let (list, kept) = closure(identity, elements, max_elements, "closing element set")?;
        if list.len() != elements.len().max(1) {
            return Err(Error::Invariant(format!(
                "element set of size {} is not closed (closure has {})",
                elements.len(),
                list.len()
            )));
        }
        let g = Group::build(
            identity.clone(),
            kept,
            Structure::Generic,
            Some(list.len() as u128),
            max_elements,
        );
        let _ = g.inner.elements.set(Arc::new(ElementSet::from_vec(list)));
        Ok(g)
    }

    /// A subset of the generators that still generates, chosen greedily.
    pub fn irredundant_generators(&self) -> Result<Vec<Element>> {
        let (_, kept) = closure(
            self.identity(),
            self.generators(),
            self.max_elements(),
            "choosing generators",
        )?;
        Ok(kept)
    }

    /// `self ∩ other`, by enumerating whichever is smaller and testing
    /// membership in the other.
    pub fn intersection(&self, other: &Group) -> Result<Group> {
        let (small, large) = match (self.cheap_order(), other.cheap_order()) {
            (Some(a), Some(b)) if b < a => (other, self),
            (None, Some(_)) => (other, self),
            _ => (self, other),
        };
        let mut keep = Vec::new();
        for x in small.elements()?.iter() {
            if large.contains(x)? {
                keep.push(x.clone());
            }
        }
        Group::from_closed_set(self.identity(), &keep, self.max_elements())
    }
}

pub(crate) struct RebuildParts {
    pub generators: Vec<Element>,
    pub structure: Structure,
    pub known_order: Option<u128>,
    pub max_elements: usize,
    pub label: Option<String>,
}

/// A group together with the group it was built inside.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Group,
    group: Group,
}

impl Subgroup {
    /// Wraps `group` as a subgroup of `parent` after checking its generators.
    pub fn new(parent: &Group, group: Group) -> Result<Subgroup> {
        for g in group.generators() {
            if !parent.contains(g)? {
                return Err(Error::Domain(format!("element {g} is not in the parent group")));
            }
        }
        Ok(Subgroup {
            parent: parent.clone(),
            group,
        })
    }

    pub(crate) fn new_unchecked(parent: &Group, group: Group) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            group,
        }
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn into_group(self) -> Group {
        self.group
    }

    /// `[parent : self]`
    pub fn index(&self) -> Result<u128> {
        Ok(self.parent.order()? / self.group.order()?)
    }
}

impl Deref for Subgroup {
    type Target = Group;

    fn deref(&self) -> &Group {
        &self.group
    }
}

/// The subgroup of `parent` generated by `gens`.
pub fn close_subgroup(parent: &Group, gens: Vec<Element>) -> Result<Subgroup> {
    let kind = parent.kind();
    for g in &gens {
        if g.kind() != kind || !parent.contains(g)? {
            return Err(Error::Domain(format!("element {g} is not in the parent group")));
        }
    }
    let group = Group::build(
        parent.identity().clone(),
        gens,
        Structure::Generic,
        None,
        parent.max_elements(),
    );
    group.order()?;
    Ok(Subgroup::new_unchecked(parent, group))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::element::Perm;

    fn perm(d: usize, cycles: &[&[usize]]) -> Element {
        Element::Perm(Perm::from_cycles(d, cycles).unwrap())
    }

    #[test]
    fn s4_closure_from_transposition_and_four_cycle() {
        let s4 = Group::symmetric(4).unwrap();
        let h = close_subgroup(&s4, vec![perm(4, &[&[0, 1]]), perm(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert_eq!(h.order().unwrap(), 24);
        assert_eq!(h.index().unwrap(), 1);
    }

    #[test]
    fn identity_generates_trivial_subgroup() {
        let s4 = Group::symmetric(4).unwrap();
        let h = close_subgroup(&s4, vec![Element::Perm(Perm::identity(4))]).unwrap();
        assert_eq!(h.order().unwrap(), 1);
    }

    #[test]
    fn close_subgroup_rejects_foreign_element() {
        let s3 = Group::symmetric(3).unwrap();
        let err = close_subgroup(&s3, vec![perm(4, &[&[0, 1]])]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        let s6 = Group::symmetric(6).unwrap().with_max_elements(100);
        let err = s6.elements().unwrap_err();
        assert!(matches!(err, Error::Resource { bound: 100, .. }));
        let generic = Group::generated(
            Element::Perm(Perm::identity(6)),
            s6.generators().to_vec(),
        )
        .unwrap()
        .with_max_elements(100);
        assert!(matches!(generic.order(), Err(Error::Resource { .. })));
    }

    #[test]
    fn tuple_group_order_without_enumeration() {
        let s3 = Group::symmetric(3).unwrap();
        let s4 = Group::symmetric(4).unwrap();
        // diagonal-ish generators: both factors surject, product order 144
        let gens = vec![
            Element::Tuple(vec![perm(3, &[&[0, 1]]), perm(4, &[&[0, 1]])]),
            Element::Tuple(vec![perm(3, &[&[0, 1, 2]]), perm(4, &[&[0, 1, 2, 3]])]),
        ];
        let identity = Element::Tuple(vec![s3.identity().clone(), s4.identity().clone()]);
        let h = Group::generated(identity, gens).unwrap().with_max_elements(50);
        // closure of the product would exceed the bound; the chain does not
        let brute = Group::generated(h.identity().clone(), h.generators().to_vec()).unwrap();
        let expect = brute.elements().unwrap().len() as u128;
        assert_eq!(h.order().unwrap(), expect);
        for x in brute.elements().unwrap().iter() {
            assert!(h.contains(x).unwrap());
        }
        let outside = Element::Tuple(vec![perm(3, &[&[0, 1]]), Element::Perm(Perm::identity(4))]);
        assert_eq!(h.contains(&outside).unwrap(), brute.elements().unwrap().contains(&outside));
    }

    #[test]
    fn conjugate_membership_is_structural() {
        let s4 = Group::symmetric(4).unwrap();
        let h = close_subgroup(&s4, vec![perm(4, &[&[0, 1]])]).unwrap().into_group();
        let g = perm(4, &[&[1, 2]]);
        let c = h.conjugate(&g);
        assert!(c.contains(&perm(4, &[&[0, 2]])).unwrap());
        assert!(!c.contains(&perm(4, &[&[0, 1]])).unwrap());
        assert_eq!(c.order().unwrap(), 2);
    }
}
