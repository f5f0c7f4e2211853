use serde::Serialize;
use serde_json::Value;

use super::spec::{ClosedSubgroupSpec, CoreAttestation, Mode, ProductProfiniteSpec};
use crate::error::{Error, Result};
use crate::groups::{CosetSpace, Element, Group};
use crate::numbers::{ser_opt_u128, ser_u128};

/// Coset spaces `H_n/A_n` up to this size are built to spot-check a witness.
const SPOT_CHECK_LIMIT: u128 = 20_000;

/// `𝒦_n`: the elements of `D` acting trivially by conjugation on `Ŵ_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjointKernel {
    pub n: usize,
    /// `∏_{i<n} |A_i|`.
    #[serde(serialize_with = "ser_u128")]
    pub structural_order: u128,
    /// Product over factors of the centraliser in `A_i` of the factor-`i`
    /// generators of `Ŵ_n`.
    #[serde(serialize_with = "ser_opt_u128")]
    pub explicit_order: Option<u128>,
}

impl AdjointKernel {
    pub fn order(&self) -> u128 {
        self.explicit_order.unwrap_or(self.structural_order)
    }
}

/// `{a ∈ A : a commutes with every generator in gens}`.
fn centralizer_in(a: &Group, gens: &[Element]) -> Result<u128> {
    let elements = a.elements()?;
    Ok(elements
        .iter()
        .filter(|x| gens.iter().all(|s| x.commutes_with(s)))
        .count() as u128)
}

/// The factor-`i` generators of `Ŵ_n`: those of `A_i` for `i < n`, of `H_i`
/// otherwise.
fn w_generators<'a>(spec: &'a ProductProfiniteSpec, d: &'a ClosedSubgroupSpec, n: usize, i: usize) -> &'a [Element] {
    if i < n {
        d.subgroups()[i].generators()
    } else {
        spec.factors()[i].generators()
    }
}

/// `𝒦_0 ⊆ 𝒦_1 ⊆ … ⊆ 𝒦_depth` inside `D^(depth)`.
pub fn adjoint_kernels(
    spec: &ProductProfiniteSpec,
    d: &ClosedSubgroupSpec,
    depth: usize,
    mode: Mode,
) -> Result<Vec<AdjointKernel>> {
    if depth > spec.len() {
        return Err(Error::Precondition(format!(
            "depth {depth} exceeds the {} factors",
            spec.len()
        )));
    }
    let mut kernels: Vec<AdjointKernel> = Vec::new();
    for n in 0..=depth {
        let mut structural_order = 1u128;
        for a in &d.subgroups()[..n] {
            structural_order *= a.order()?;
        }
        let explicit_order = if mode.explicit() {
            // the centraliser of a product of generating sets splits by factor
            let mut order = 1u128;
            for (i, a) in d.subgroups()[..depth].iter().enumerate() {
                order *= centralizer_in(a, w_generators(spec, d, n, i))?;
            }
            Some(order)
        } else {
            None
        };
        if let (Some(e), true) = (explicit_order, mode.structural()) {
            if e != structural_order {
                return Err(Error::Invariant(format!(
                    "K_{n}: explicit order {e} disagrees with the product form {structural_order}"
                )));
            }
        }
        let k = AdjointKernel {
            n,
            structural_order,
            explicit_order,
        };
        if let Some(prev) = kernels.last() {
            if k.order() % prev.order() != 0 {
                return Err(Error::Invariant(format!("K_{} is not contained in K_{n}", n - 1)));
            }
        }
        kernels.push(k);
    }
    Ok(kernels)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WildWitness {
    /// The witness lies in `𝒦_level` but not in `𝒦_{level-1}`.
    pub level: usize,
    pub element: Value,
    /// Commutes with every generator of `Ŵ_level`.
    pub trivial_on_deeper: bool,
    /// Some conjugate by an element of `Ŵ_{level-1}` leaves `D`.
    pub moves_on_shallower: bool,
    /// Result of the explicit coset-action check, when the coset space is small.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spot_check: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WildCertificate {
    pub witnesses: Vec<WildWitness>,
    pub core_attestations: Vec<CoreAttestation>,
    /// `"wild"` or `"refused"`.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl WildCertificate {
    pub fn is_wild(&self) -> bool {
        self.verdict == "wild"
    }

    fn refuse(
        witnesses: Vec<WildWitness>,
        core_attestations: Vec<CoreAttestation>,
        reason: String,
    ) -> Self {
        WildCertificate {
            witnesses,
            core_attestations,
            verdict: "refused".into(),
            reason: Some(reason),
        }
    }
}

/// Searches the conjugation orbit of `x` under `gens` for a point outside `a`.
fn conjugate_outside(x: &Element, gens: &[Element], a: &Group, limit: usize) -> Result<bool> {
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![x.clone()];
    seen.insert(x.clone());
    while let Some(y) = stack.pop() {
        if !a.contains(&y)? {
            return Ok(true);
        }
        for s in gens {
            let z = y.conjugate_by(s);
            if seen.len() < limit && seen.insert(z.clone()) {
                stack.push(z);
            }
        }
    }
    Ok(false)
}

/// Certifies strict growth `𝒦_n ⊊ 𝒦_{n+1}` for every `n < depth` by an
/// explicit element of `𝒦_{n+1} \ 𝒦_n`, after attesting that every `A_i`
/// has trivial core in `H_i`.
pub fn wild_certificate(
    spec: &ProductProfiniteSpec,
    d: &ClosedSubgroupSpec,
    depth: usize,
) -> Result<WildCertificate> {
    if depth == 0 || depth > spec.len() {
        return Err(Error::Precondition(format!(
            "depth must be between 1 and {}, got {depth}",
            spec.len()
        )));
    }
    let attestations = d.check_trivial_cores(spec, depth)?;
    if let Some(bad) = attestations.iter().find(|a| !a.ok) {
        let reason = format!(
            "subgroup {} is trivial, the whole factor, or has non-trivial core",
            bad.factor
        );
        return Ok(WildCertificate::refuse(Vec::new(), attestations, reason));
    }

    let identities: Vec<Element> = spec.factors()[..depth]
        .iter()
        .map(|f| f.identity().clone())
        .collect();
    let embed = |i: usize, x: &Element| {
        let mut parts = identities.clone();
        parts[i] = x.clone();
        Element::Tuple(parts)
    };
    let mut witnesses = Vec::new();
    for n in 0..depth {
        let a = &d.subgroups()[n];
        let Some(g) = a.generators().iter().find(|g| !g.is_identity()) else {
            let reason = format!("K_{} equals K_{n}", n + 1);
            return Ok(WildCertificate::refuse(witnesses, attestations, reason));
        };
        let witness = embed(n, g);
        let gens_of = |m: usize| -> Vec<Element> {
            (0..depth)
                .flat_map(|i| w_generators(spec, d, m, i).iter().map(move |s| (i, s)))
                .map(|(i, s)| embed(i, s))
                .collect()
        };
        let trivial_on_deeper = gens_of(n + 1).iter().all(|s| witness.commutes_with(s));
        let h_n = &spec.factors()[n];
        let moves_on_shallower = gens_of(n).iter().any(|s| !witness.commutes_with(s))
            && conjugate_outside(g, h_n.generators(), a, h_n.max_elements())?;
        let spot_check = match (h_n.cheap_order(), a.cheap_order()) {
            (Some(h), Some(o)) if h / o <= SPOT_CHECK_LIMIT => {
                let space = CosetSpace::new(h_n, a)?;
                Some(!space.perm_of(g)?.is_identity())
            }
            _ => None,
        };
        let ok = trivial_on_deeper && moves_on_shallower && spot_check != Some(false);
        witnesses.push(WildWitness {
            level: n + 1,
            element: witness.to_descriptor(),
            trivial_on_deeper,
            moves_on_shallower,
            spot_check,
        });
        if !ok {
            let reason = format!("witness for K_{} failed verification", n + 1);
            return Ok(WildCertificate::refuse(witnesses, attestations, reason));
        }
    }
    Ok(WildCertificate {
        witnesses,
        core_attestations: attestations,
        verdict: "wild".into(),
        reason: None,
    })
}
