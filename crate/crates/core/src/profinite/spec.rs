use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{
    close_subgroup, core, family_group, is_prime, sl_group, Element, FamilyVariant, Group, Matrix,
};

/// Factors above this order are not closed under the full product when
/// certifying density.
const FULL_CLOSURE_FACTOR_LIMIT: u128 = 1_000_000;

/// A finite stand-in for `Ĥ = ∏ H_i` with a subgroup `H` generated by tuples.
#[derive(Clone, Debug)]
pub struct ProductProfiniteSpec {
    factors: Vec<Group>,
    dense_generators: Vec<Element>,
}

impl ProductProfiniteSpec {
    /// Checks that every component lies in its factor and that `H` projects
    /// onto every factor.
    pub fn new(factors: Vec<Group>, dense_generators: Vec<Element>) -> Result<Self> {
        for g in &dense_generators {
            let comps = g
                .components()
                .filter(|c| c.len() == factors.len())
                .ok_or_else(|| {
                    Error::Spec(format!("{g} is not a tuple with {} components", factors.len()))
                })?;
            for (i, (c, f)) in comps.iter().zip(&factors).enumerate() {
                if !f.contains(c)? {
                    return Err(Error::Domain(format!("component {i} of {g} is not in factor {i}")));
                }
            }
        }
        let spec = ProductProfiniteSpec {
            factors,
            dense_generators,
        };
        for i in 0..spec.factors.len() {
            if !spec.projects_onto(i)? {
                return Err(Error::Invariant(format!(
                    "density witness fails: the generators project onto a proper subgroup of factor {i}"
                )));
            }
        }
        Ok(spec)
    }

    fn projects_onto(&self, i: usize) -> Result<bool> {
        let factor = &self.factors[i];
        let comps: Vec<Element> = self
            .dense_generators
            .iter()
            .map(|g| g.component(i).unwrap().clone())
            .collect();
        // the factor's own generators among the components settle it at once
        if factor.generators().iter().all(|s| comps.contains(s)) {
            return Ok(true);
        }
        let image = close_subgroup(factor, comps)?;
        Ok(image.order()? == factor.order()?)
    }

    pub fn factors(&self) -> &[Group] {
        &self.factors
    }

    pub fn dense_generators(&self) -> &[Element] {
        &self.dense_generators
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `Ĥ^(ℓ) = ∏_{i<ℓ} H_i` and the image `H^(ℓ)` of `H` in it.
    pub fn truncate(&self, l: usize) -> Result<Truncation> {
        if l > self.factors.len() {
            return Err(Error::Precondition(format!(
                "truncation {l} exceeds the {} factors",
                self.factors.len()
            )));
        }
        let product = Group::direct_product(self.factors[..l].to_vec());
        let gens = self
            .dense_generators
            .iter()
            .map(|g| Element::Tuple(g.components().unwrap()[..l].to_vec()))
            .collect();
        let h = Group::generated(product.identity().clone(), gens)?
            .with_max_elements(product.max_elements());
        let small = self.factors[..l]
            .iter()
            .all(|f| f.cheap_order().is_some_and(|o| o <= FULL_CLOSURE_FACTOR_LIMIT));
        let density = if l <= 2 && small {
            let full = h.order()? == product.order()?;
            if !full {
                return Err(Error::Invariant(format!(
                    "H^({l}) has order {} but the product has order {}",
                    h.order()?,
                    product.order()?
                )));
            }
            Density::FullClosure
        } else {
            Density::PerFactor
        };
        Ok(Truncation {
            level: l,
            product,
            h,
            density,
        })
    }
}

/// How the density of `H` in the truncated product was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Density {
    /// `|H^(ℓ)|` equals the product order.
    FullClosure,
    /// Only the projection to each single factor was checked.
    PerFactor,
}

impl Density {
    pub fn note(self, l: usize) -> String {
        match self {
            Density::FullClosure => {
                format!("density of H in the level-{l} truncation certified by full closure")
            }
            Density::PerFactor => format!(
                "density of H in the level-{l} truncation checked per factor only; \
                 the full product is assumed"
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Truncation {
    pub level: usize,
    pub product: Group,
    pub h: Group,
    pub density: Density,
}

impl Truncation {
    /// `H^(ℓ)` when it is certified to be the whole product, which has
    /// structural membership; otherwise the generated subgroup.
    pub fn h_or_product(&self) -> &Group {
        match self.density {
            Density::FullClosure => &self.product,
            Density::PerFactor => &self.h,
        }
    }
}

/// `∏ SL_3(Z/p_iZ)` with `H` generated by the six tuples whose components are
/// the same elementary transvection in every factor.
pub fn sl3_family_base(primes: &[u32]) -> Result<ProductProfiniteSpec> {
    let factors = primes
        .iter()
        .map(|&p| sl_group(3, p))
        .collect::<Result<Vec<_>>>()?;
    let mut gens = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            if r != c {
                gens.push(Element::Tuple(
                    primes
                        .iter()
                        .map(|&p| Element::Mat(Matrix::transvection(3, p, r, c, 1)))
                        .collect(),
                ));
            }
        }
    }
    ProductProfiniteSpec::new(factors, gens)
}

/// Per-factor subgroups `A_i ⊆ H_i` defining `D = ∏ A_i`.
#[derive(Clone, Debug)]
pub struct ClosedSubgroupSpec {
    subgroups: Vec<Group>,
}

impl ClosedSubgroupSpec {
    pub fn new(spec: &ProductProfiniteSpec, subgroups: Vec<Group>) -> Result<Self> {
        if subgroups.len() != spec.len() {
            return Err(Error::Spec(format!(
                "{} subgroups given for {} factors",
                subgroups.len(),
                spec.len()
            )));
        }
        for (i, (a, h)) in subgroups.iter().zip(spec.factors()).enumerate() {
            if !a.is_subgroup_of(h)? {
                return Err(Error::Domain(format!("subgroup {i} is not contained in factor {i}")));
            }
        }
        Ok(ClosedSubgroupSpec { subgroups })
    }

    pub fn subgroups(&self) -> &[Group] {
        &self.subgroups
    }

    /// `q_ℓ(D) = ∏_{i<ℓ} A_i`.
    pub fn truncate(&self, l: usize) -> Group {
        Group::direct_product(self.subgroups[..l].to_vec())
    }

    /// The conditions the wild family relies on: every `A_i`, `i < depth`,
    /// proper, non-trivial and with trivial core in `H_i`.
    pub fn check_trivial_cores(
        &self,
        spec: &ProductProfiniteSpec,
        depth: usize,
    ) -> Result<Vec<CoreAttestation>> {
        self.subgroups[..depth.min(self.subgroups.len())]
            .iter()
            .zip(spec.factors())
            .enumerate()
            .map(|(i, (a, h))| {
                let proper = a.order()? < h.order()?;
                let nontrivial = !a.is_trivial();
                let core_trivial = core(h, a)?.order()? == 1;
                Ok(CoreAttestation {
                    factor: i,
                    ok: proper && nontrivial && core_trivial,
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreAttestation {
    pub factor: usize,
    pub ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Structural,
    Explicit,
    Both,
}

impl Mode {
    pub fn explicit(self) -> bool {
        matches!(self, Mode::Explicit | Mode::Both)
    }

    pub fn structural(self) -> bool {
        matches!(self, Mode::Structural | Mode::Both)
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structural" => Ok(Mode::Structural),
            "explicit" => Ok(Mode::Explicit),
            "both" => Ok(Mode::Both),
            other => Err(Error::Spec(format!(
                "mode must be structural, explicit or both, got {other:?}"
            ))),
        }
    }
}

/// Primes `p_0 < p_1 < …` and bits `s_i ∈ {1, 2}` choosing `A^{s_i}_{p_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub primes: Vec<u32>,
    pub bits: Vec<u8>,
    #[serde(default)]
    pub depth: Option<usize>,
    #[serde(default)]
    pub mode: Mode,
}

impl FamilySpec {
    pub fn new(primes: Vec<u32>, bits: Vec<u8>) -> Result<Self> {
        let f = FamilySpec {
            primes,
            bits,
            depth: None,
            mode: Mode::Structural,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.primes.len() != self.bits.len() {
            return Err(Error::Spec(format!(
                "family has {} primes but {} bits",
                self.primes.len(),
                self.bits.len()
            )));
        }
        for w in self.primes.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Spec(format!(
                    "primes must be strictly increasing, found {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(p) = self.primes.iter().find(|&&p| !is_prime(p as u64)) {
            return Err(Error::Spec(format!("{p} is not prime")));
        }
        if let Some(b) = self.bits.iter().find(|&&b| b != 1 && b != 2) {
            return Err(Error::Spec(format!("bits must be 1 or 2, found {b}")));
        }
        if let Some(d) = self.depth {
            if d > self.primes.len() {
                return Err(Error::Spec(format!(
                    "depth {d} exceeds the {} primes given",
                    self.primes.len()
                )));
            }
        }
        Ok(())
    }

    /// The number of factors used, `L`.
    pub fn depth(&self) -> usize {
        self.depth.unwrap_or(self.primes.len())
    }

    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        let f = FamilySpec {
            depth: Some(depth),
            ..self.clone()
        };
        f.validate()?;
        Ok(f)
    }

    pub fn variant(&self, i: usize) -> FamilyVariant {
        FamilyVariant::from_bit(self.bits[i]).expect("validated bits")
    }

    /// `|A^{s_i}_{p_i}| = p_i^{s_i}`.
    pub fn factor_order(&self, i: usize) -> u128 {
        (self.primes[i] as u128).pow(self.bits[i] as u32)
    }

    /// `∏ SL_3(Z/p_iZ)` over the first `L` primes with the transvection tuples.
    pub fn base(&self) -> Result<ProductProfiniteSpec> {
        sl3_family_base(&self.primes[..self.depth()])
    }

    /// `D = ∏ A^{s_i}_{p_i}` over the first `L` primes.
    pub fn closed_subgroup(&self, spec: &ProductProfiniteSpec) -> Result<ClosedSubgroupSpec> {
        let subgroups = (0..spec.len())
            .map(|i| family_group(self.primes[i], self.variant(i)))
            .collect();
        ClosedSubgroupSpec::new(spec, subgroups)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Perm;

    #[test]
    fn single_factor_truncation_is_the_factor() {
        let spec = sl3_family_base(&[2]).unwrap();
        let t = spec.truncate(1).unwrap();
        assert_eq!(t.h.order().unwrap(), 168);
        assert_eq!(t.density, Density::FullClosure);
    }

    #[test]
    fn non_surjective_generators_are_flagged() {
        let s3 = Group::symmetric(3).unwrap();
        let t = Element::Perm(Perm::from_cycles(3, &[&[0, 1]]).unwrap());
        let err = ProductProfiniteSpec::new(vec![s3], vec![Element::Tuple(vec![t])]).unwrap_err();
        assert!(matches!(err, Error::Invariant(ref m) if m.contains("factor 0")));
    }

    #[test]
    fn family_spec_validation() {
        assert!(FamilySpec::new(vec![2, 3], vec![1]).is_err());
        assert!(FamilySpec::new(vec![3, 2], vec![1, 1]).is_err());
        assert!(FamilySpec::new(vec![2, 4], vec![1, 1]).is_err());
        assert!(FamilySpec::new(vec![2, 3], vec![1, 3]).is_err());
        assert!(FamilySpec::new(vec![2, 3], vec![2, 1]).is_ok());
    }
}
