use serde::Serialize;

use super::spec::FamilySpec;
use crate::chains::{verdict_from_kernels, ChainMode, GroupChain, LevelRecord, StabilityReport};
use crate::error::{Error, Result};
use crate::groups::{family_group, sl_group, Group, DEFAULT_MAX_ELEMENTS};
use crate::numbers::ser_u128;

/// One factor `A^{s}_{p}` of a product, as a prime and an exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorDescriptor {
    pub index: usize,
    pub prime: u32,
    /// `s`, so that the factor is elementary abelian of order `p^s`.
    pub rank: u32,
    #[serde(serialize_with = "ser_u128")]
    pub order: u128,
}

/// `D_n = ∏_{n≤i<L} A^{s_i}_{p_i}` and `ker ψ_{n,n+1} = A^{s_n}_{p_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyDiscriminant {
    pub n: usize,
    pub depth: usize,
    pub factors: Vec<FactorDescriptor>,
    #[serde(serialize_with = "ser_u128")]
    pub order: u128,
    pub psi_kernel: FactorDescriptor,
}

fn descriptor(fam: &FamilySpec, i: usize) -> FactorDescriptor {
    FactorDescriptor {
        index: i,
        prime: fam.primes[i],
        rank: fam.bits[i] as u32,
        order: fam.factor_order(i),
    }
}

pub fn family_discriminants(fam: &FamilySpec, n: usize) -> Result<FamilyDiscriminant> {
    fam.validate()?;
    let depth = fam.depth();
    if n >= depth {
        return Err(Error::Precondition(format!("need n < depth, got n={n}, depth={depth}")));
    }
    let factors: Vec<FactorDescriptor> = (n..depth).map(|i| descriptor(fam, i)).collect();
    Ok(FamilyDiscriminant {
        n,
        depth,
        order: factors.iter().map(|f| f.order).product(),
        psi_kernel: descriptor(fam, n),
        factors,
    })
}

/// The family as a truncated-profinite chain with `max_elements` as the
/// enumeration bound.
pub fn family_to_chain(fam: &FamilySpec) -> Result<GroupChain> {
    family_to_chain_with(fam, DEFAULT_MAX_ELEMENTS)
}

/// Level `ℓ` lives in `∏_{i<ℓ} SL_3(Z/p_i)` and `G_k` there is
/// `∏_{i<k} A_i × ∏_{k≤i<ℓ} SL_3(Z/p_i)`.
pub fn family_to_chain_with(fam: &FamilySpec, max_elements: usize) -> Result<GroupChain> {
    fam.validate()?;
    let depth = fam.depth();
    if depth == 0 {
        return Err(Error::Spec("a family chain needs at least one prime".into()));
    }
    let d_order: u128 = (0..depth).map(|i| fam.factor_order(i)).product();
    if d_order > max_elements as u128 {
        return Err(Error::resource(
            "family subgroup D in explicit mode (use structural mode instead)",
            d_order,
            max_elements,
        ));
    }
    let base = fam.base()?;
    let density = base.truncate(depth.min(2))?.density;
    let a: Vec<Group> = (0..depth)
        .map(|i| family_group(fam.primes[i], fam.variant(i)).with_max_elements(max_elements))
        .collect();
    let sl: Vec<Group> = fam.primes[..depth]
        .iter()
        .map(|&p| Ok(sl_group(3, p)?.with_max_elements(max_elements)))
        .collect::<Result<_>>()?;
    let views = (0..=depth)
        .map(|l| {
            (0..=l)
                .map(|k| {
                    let mut factors = a[..k].to_vec();
                    factors.extend(sl[k..l].iter().cloned());
                    Group::direct_product(factors).with_max_elements(max_elements)
                })
                .collect()
        })
        .collect();
    let mut notes = vec![density.note(depth.min(2))];
    if depth > 2 {
        notes.push(format!(
            "truncations beyond level 2 use the full product; density checked per factor up to level {depth}"
        ));
    }
    GroupChain::truncated(views, notes)
}

/// The stability report of the family chain from the product form alone:
/// `|G_ℓ| = ∏_{i<ℓ} |A_i|`, `|C_{n,ℓ}| = ∏_{i<n} |A_i|` and
/// `|ker ψ_{n,n+1}^(ℓ)| = |A_n|`.
pub fn family_stability_report(fam: &FamilySpec) -> Result<StabilityReport> {
    fam.validate()?;
    let depth = fam.depth();
    if depth == 0 {
        return Err(Error::Spec("a family chain needs at least one prime".into()));
    }
    let prefix = |k: usize| -> u128 { (0..k).map(|i| fam.factor_order(i)).product() };
    let mut records = Vec::new();
    let mut matrix = vec![Vec::new(); depth];
    for n in 0..=depth {
        for l in n..=depth {
            let psi = (n < l).then(|| fam.factor_order(n));
            if let Some(k) = psi {
                matrix[n].push(k);
            }
            records.push(LevelRecord {
                n,
                level: l,
                level_order: prefix(l),
                core_order: prefix(n),
                disc_order: prefix(l) / prefix(n),
                psi_kernel_order: psi,
            });
        }
    }
    let deepest: Vec<u128> = matrix.iter().map(|row| *row.last().unwrap()).collect();
    Ok(StabilityReport {
        mode: ChainMode::TruncatedProfinite,
        depth,
        records,
        deepest_kernels: deepest.clone(),
        psi_kernel_orders: matrix,
        verdict: verdict_from_kernels(&deepest),
        notes: vec!["orders computed from the product form of the family".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_orders() {
        let fam = FamilySpec::new(vec![2, 3, 5], vec![1, 1, 1]).unwrap();
        let d = family_discriminants(&fam, 1).unwrap();
        assert_eq!(d.order, 15);
        assert_eq!(d.psi_kernel.order, 3);
        assert!(family_discriminants(&fam, 3).is_err());
    }

    #[test]
    fn structural_report_matches_explicit_chain() {
        let fam = FamilySpec::new(vec![2, 3], vec![2, 1]).unwrap();
        let structural = family_stability_report(&fam).unwrap();
        let explicit = crate::chains::stability_report(&family_to_chain(&fam).unwrap()).unwrap();
        assert_eq!(structural.records, explicit.records);
        assert_eq!(structural.verdict, explicit.verdict);
    }

    #[test]
    fn single_prime_chain() {
        let fam = FamilySpec::new(vec![2], vec![1]).unwrap();
        let chain = family_to_chain(&fam).unwrap();
        assert_eq!(chain.depth(), 1);
        assert_eq!(chain.base().order().unwrap(), 168);
        assert_eq!(chain.level(1).order().unwrap(), 2);
    }

    #[test]
    fn oversized_family_is_a_resource_error() {
        let fam = FamilySpec::new(vec![2, 3, 5], vec![2, 2, 2]).unwrap();
        let err = family_to_chain_with(&fam, 100).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
