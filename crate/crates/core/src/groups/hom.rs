use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::element::Element;
use super::group::{close_subgroup, Group, Structure, Subgroup};
use crate::error::{Error, Result};

type Rule = Arc<dyn Fn(&Element) -> Element + Send + Sync>;

/// A homomorphism given by the images of the domain generators, optionally
/// backed by a closed-form rule for evaluating arbitrary elements.
#[derive(Clone)]
pub struct Homomorphism {
    domain: Group,
    codomain: Group,
    images: Vec<Element>,
    rule: Option<Rule>,
    table: Arc<OnceLock<Arc<HashMap<Element, Element>>>>,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Homomorphism")
            .field("domain", &self.domain.label())
            .field("codomain", &self.codomain.label())
            .field("images", &self.images)
            .field("rule", &self.rule.is_some())
            .finish()
    }
}

impl Homomorphism {
    /// Map sending the i-th generator of `domain` to `images[i]`. Each image
    /// must lie in `codomain`; consistency is checked lazily by [`verify`].
    ///
    /// [`verify`]: Homomorphism::verify
    pub fn from_images(domain: &Group, codomain: &Group, images: Vec<Element>) -> Result<Self> {
        if images.len() != domain.generators().len() {
            return Err(Error::InvalidHomomorphism(format!(
                "{} generator images given for {} generators",
                images.len(),
                domain.generators().len()
            )));
        }
        for y in &images {
            if !codomain.contains(y)? {
                return Err(Error::InvalidHomomorphism(format!(
                    "image {y} is not in the codomain"
                )));
            }
        }
        Ok(Homomorphism {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
            rule: None,
            table: Arc::new(OnceLock::new()),
        })
    }

    /// Map evaluated by `rule`, which the caller asserts is a homomorphism.
    pub fn from_rule(
        domain: &Group,
        codomain: &Group,
        rule: impl Fn(&Element) -> Element + Send + Sync + 'static,
    ) -> Self {
        let images = domain.generators().iter().map(&rule).collect();
        Homomorphism {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
            rule: Some(Arc::new(rule)),
            table: Arc::new(OnceLock::new()),
        }
    }

    pub fn identity(group: &Group) -> Self {
        Homomorphism::from_rule(group, group, Element::clone)
    }

    pub fn domain(&self) -> &Group {
        &self.domain
    }

    pub fn codomain(&self) -> &Group {
        &self.codomain
    }

    pub fn generator_images(&self) -> &[Element] {
        &self.images
    }

    pub fn has_rule(&self) -> bool {
        self.rule.is_some()
    }

    /// Element-to-image table built by walking the Cayley graph of the domain.
    /// Fails if two words for the same element get different images.
    fn table(&self) -> Result<Arc<HashMap<Element, Element>>> {
        if let Some(t) = self.table.get() {
            return Ok(t.clone());
        }
        let limit = self.domain.max_elements();
        let mut table = HashMap::new();
        let mut queue = vec![self.domain.identity().clone()];
        table.insert(self.domain.identity().clone(), self.codomain.identity().clone());
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            let y = table[&x].clone();
            for (s, t) in self.domain.generators().iter().zip(&self.images) {
                let xs = x.mul(s);
                let yt = y.mul(t);
                match table.get(&xs) {
                    Some(prev) if *prev != yt => {
                        return Err(Error::InvalidHomomorphism(format!(
                            "element {xs} would map to both {prev} and {yt}"
                        )));
                    }
                    Some(_) => {}
                    None => {
                        table.insert(xs.clone(), yt);
                        queue.push(xs);
                        if queue.len() > limit {
                            return Err(Error::resource(
                                "tabulating homomorphism",
                                format!("more than {limit}"),
                                limit,
                            ));
                        }
                    }
                }
            }
            head += 1;
        }
        let table = Arc::new(table);
        let _ = self.table.set(table.clone());
        Ok(table)
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if let Some(rule) = &self.rule {
            return Ok(rule(x));
        }
        self.table()?
            .get(x)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("{x} is not in the domain")))
    }

    /// Checks well-definedness. Maps given by images are checked on the whole
    /// Cayley graph of the domain; rule-based maps are spot-checked on all
    /// words of length at most three in the generators, and image orders must
    /// divide generator orders.
    pub fn verify(&self) -> Result<()> {
        let Some(rule) = &self.rule else {
            self.table()?;
            return Ok(());
        };
        let gens = self.domain.generators();
        for (s, t) in gens.iter().zip(&self.images) {
            if !self.codomain.contains(t)? {
                return Err(Error::InvalidHomomorphism(format!("image {t} is not in the codomain")));
            }
            if s.order() % t.order() != 0 {
                return Err(Error::InvalidHomomorphism(format!(
                    "generator {s} of order {} maps to {t} of order {}",
                    s.order(),
                    t.order()
                )));
            }
        }
        let mut words: Vec<(Element, Element)> = vec![(
            self.domain.identity().clone(),
            self.codomain.identity().clone(),
        )];
        for _ in 0..3 {
            let mut next = Vec::new();
            for (w, img) in &words {
                for (s, t) in gens.iter().zip(&self.images) {
                    next.push((w.mul(s), img.mul(t)));
                }
            }
            for (w, img) in &next {
                if rule(w) != *img {
                    return Err(Error::InvalidHomomorphism(format!(
                        "rule sends {w} to {} but the generator images give {img}",
                        rule(w)
                    )));
                }
            }
            words = next;
            if words.len() > 4096 {
                break;
            }
        }
        Ok(())
    }

    /// The image as a subgroup of the codomain.
    pub fn image(&self) -> Result<Subgroup> {
        close_subgroup(&self.codomain, self.images.clone())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.image()?.order()? == self.codomain.order()?)
    }

    /// The kernel, generated by Schreier generators over a transversal of the
    /// image. The domain itself is never enumerated.
    pub fn kernel(&self) -> Result<Subgroup> {
        if self.rule.is_none() {
            self.table()?;
        }
        let limit = self.domain.max_elements();
        let gens = self.domain.generators();
        let mut reps: HashMap<Element, Element> = HashMap::new();
        let mut queue = vec![self.codomain.identity().clone()];
        reps.insert(self.codomain.identity().clone(), self.domain.identity().clone());
        let mut kernel_gens: Vec<Element> = Vec::new();
        let mut head = 0;
        while head < queue.len() {
            let y = queue[head].clone();
            let r = reps[&y].clone();
            for (s, t) in gens.iter().zip(&self.images) {
                let yt = y.mul(t);
                let rs = r.mul(s);
                match reps.get(&yt) {
                    Some(rep) => {
                        let k = rs.mul(&rep.inverse());
                        if !k.is_identity() && !kernel_gens.contains(&k) {
                            kernel_gens.push(k);
                        }
                    }
                    None => {
                        reps.insert(yt.clone(), rs);
                        queue.push(yt);
                        if queue.len() > limit {
                            return Err(Error::resource(
                                "image transversal",
                                format!("more than {limit}"),
                                limit,
                            ));
                        }
                    }
                }
            }
            head += 1;
        }
        let image_order = queue.len() as u128;
        let known = match self.domain.order() {
            Ok(o) => {
                if o % image_order != 0 {
                    return Err(Error::InvalidHomomorphism(format!(
                        "image order {image_order} does not divide domain order {o}"
                    )));
                }
                Some(o / image_order)
            }
            Err(Error::Resource { .. }) => None,
            Err(e) => return Err(e),
        };
        let group = Group::build(
            self.domain.identity().clone(),
            kernel_gens,
            Structure::Generic,
            known,
            limit,
        );
        Ok(Subgroup::new_unchecked(&self.domain, group))
    }

    pub fn kernel_image(&self) -> Result<(Subgroup, Subgroup)> {
        self.verify()?;
        Ok((self.kernel()?, self.image()?))
    }

    /// `other ∘ self`
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism> {
        let images = self
            .images
            .iter()
            .map(|y| other.apply(y))
            .collect::<Result<Vec<_>>>()?;
        match (&self.rule, &other.rule) {
            (Some(f), Some(g)) => {
                let (f, g) = (f.clone(), g.clone());
                Ok(Homomorphism::from_rule(&self.domain, &other.codomain, move |x| g(&f(x))))
            }
            _ => Homomorphism::from_images(&self.domain, &other.codomain, images),
        }
    }

    /// True when both maps agree on every generator of the domain.
    pub fn agrees_with(&self, other: &Homomorphism) -> Result<bool> {
        for x in self.domain.generators() {
            if self.apply(x)? != other.apply(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Kernel and image of `hom`, after checking it is well defined.
pub fn hom_kernel_image(hom: &Homomorphism) -> Result<(Subgroup, Subgroup)> {
    hom.kernel_image()
}
