use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use super::chain::GroupChain;
use crate::numbers::{ser_u128, ser_opt_u128, ser_u128_matrix, ser_u128_vec};
use crate::error::{Error, Result};
use crate::groups::{core, quotient, Group, Homomorphism, Subgroup};

/// Memoised cores `C_{n,ℓ}` and quotients `D_n^(ℓ)` of one chain.
pub struct ChainAnalysis<'a> {
    chain: &'a GroupChain,
    cores: Mutex<HashMap<(usize, usize), Group>>,
    quotients: Mutex<HashMap<(usize, usize), (Group, Homomorphism)>>,
}

impl<'a> ChainAnalysis<'a> {
    pub fn new(chain: &'a GroupChain) -> Self {
        ChainAnalysis {
            chain,
            cores: Mutex::new(HashMap::new()),
            quotients: Mutex::new(HashMap::new()),
        }
    }

    pub fn chain(&self) -> &GroupChain {
        self.chain
    }

    fn check(&self, n: usize, l: usize) -> Result<()> {
        if n > l || l > self.chain.depth() {
            return Err(Error::Precondition(format!(
                "need n <= l <= depth, got n={n}, l={l}, depth={}",
                self.chain.depth()
            )));
        }
        Ok(())
    }

    /// `C_{n,ℓ} = core_{G_n}(G_ℓ)` in the level-`ℓ` truncation.
    pub fn core(&self, n: usize, l: usize) -> Result<Group> {
        self.check(n, l)?;
        if let Some(c) = self.cores.lock().unwrap().get(&(n, l)) {
            return Ok(c.clone());
        }
        let c = core(self.chain.view(l, n), self.chain.view(l, l))?.into_group();
        self.cores.lock().unwrap().insert((n, l), c.clone());
        Ok(c)
    }

    pub fn core_order(&self, n: usize, l: usize) -> Result<u128> {
        self.core(n, l)?.order()
    }

    /// `|D_n^(ℓ)| = |G_ℓ| / |C_{n,ℓ}|`, without building the quotient.
    pub fn discriminant_order(&self, n: usize, l: usize) -> Result<u128> {
        Ok(self.chain.view(l, l).order()? / self.core_order(n, l)?)
    }

    /// `D_n^(ℓ) = G_ℓ / C_{n,ℓ}` with its projection from `G_ℓ`.
    pub fn discriminant(&self, n: usize, l: usize) -> Result<(Group, Homomorphism)> {
        if let Some(q) = self.quotients.lock().unwrap().get(&(n, l)) {
            return Ok(q.clone());
        }
        let c = self.core(n, l)?;
        let q = quotient(self.chain.view(l, l), &c)?;
        self.quotients.lock().unwrap().insert((n, l), q.clone());
        Ok(q)
    }

    /// `|ker ψ_{n,m}^(ℓ)| = |C_{m,ℓ}| / |C_{n,ℓ}|`.
    pub fn psi_kernel_order(&self, n: usize, m: usize, l: usize) -> Result<u128> {
        self.check(m, l)?;
        self.check(n, m)?;
        Ok(self.core_order(m, l)? / self.core_order(n, l)?)
    }
}

/// The cores `C_{n,ℓ}` for `n ≤ ℓ ≤ L`.
#[derive(Clone, Debug)]
pub struct CoreTower {
    pub n: usize,
    /// `cores[i]` is `C_{n, n+i}` as a subgroup of (the image of) `G_n`.
    pub cores: Vec<Subgroup>,
}

pub fn core_tower(chain: &GroupChain, n: usize) -> Result<CoreTower> {
    let analysis = ChainAnalysis::new(chain);
    core_tower_with(&analysis, n)
}

pub fn core_tower_with(analysis: &ChainAnalysis<'_>, n: usize) -> Result<CoreTower> {
    let chain = analysis.chain();
    analysis.check(n, chain.depth())?;
    let cores = (n..=chain.depth())
        .map(|l| {
            let c = analysis.core(n, l)?;
            Ok(Subgroup::new_unchecked(chain.view(l, n), c))
        })
        .collect::<Result<_>>()?;
    Ok(CoreTower { n, cores })
}

#[derive(Clone, Debug)]
pub struct DiscriminantLevel {
    pub level: usize,
    pub group: Group,
    /// `G_ℓ → D_n^(ℓ)`
    pub projection: Homomorphism,
}

/// The finite levels `D_n^(ℓ)` and the maps `δ: D_n^(ℓ+1) → D_n^(ℓ)` induced
/// by `G_{ℓ+1} ⊆ G_ℓ`.
#[derive(Clone, Debug)]
pub struct DiscriminantTower {
    pub n: usize,
    pub levels: Vec<DiscriminantLevel>,
    pub bonding: Vec<Homomorphism>,
}

impl DiscriminantTower {
    pub fn orders(&self) -> Result<Vec<u128>> {
        self.levels.iter().map(|l| l.group.order()).collect()
    }
}

pub fn discriminant_tower(chain: &GroupChain, n: usize) -> Result<DiscriminantTower> {
    let analysis = ChainAnalysis::new(chain);
    discriminant_tower_with(&analysis, n)
}

pub fn discriminant_tower_with(analysis: &ChainAnalysis<'_>, n: usize) -> Result<DiscriminantTower> {
    let chain = analysis.chain();
    analysis.check(n, chain.depth())?;
    let mut levels = Vec::new();
    for l in n..=chain.depth() {
        let (group, projection) = analysis.discriminant(n, l)?;
        levels.push(DiscriminantLevel {
            level: l,
            group,
            projection,
        });
    }
    let mut bonding = Vec::new();
    for w in levels.windows(2) {
        let (lower, upper) = (&w[0], &w[1]);
        // D^(ℓ+1) has generators aligned with G_{ℓ+1}, unless it is trivial
        let source = chain.view(upper.level, upper.level);
        let images = if upper.group.generators().len() == source.generators().len() {
            source
                .generators()
                .iter()
                .map(|s| lower.projection.apply(&chain.project(s, upper.level, lower.level)))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        bonding.push(Homomorphism::from_images(&upper.group, &lower.group, images)?);
    }
    Ok(DiscriminantTower { n, levels, bonding })
}

/// `ψ_{n,m}^(ℓ): D_n^(ℓ) → D_m^(ℓ)`, induced by `C_{n,ℓ} ⊆ C_{m,ℓ}`; checked
/// to be surjective.
pub fn psi_map(chain: &GroupChain, n: usize, m: usize, l: usize) -> Result<Homomorphism> {
    psi_map_with(&ChainAnalysis::new(chain), n, m, l)
}

pub fn psi_map_with(analysis: &ChainAnalysis<'_>, n: usize, m: usize, l: usize) -> Result<Homomorphism> {
    analysis.check(n, m)?;
    analysis.check(m, l)?;
    let (dn, _) = analysis.discriminant(n, l)?;
    if n == m {
        return Ok(Homomorphism::identity(&dn));
    }
    let (dm, pm) = analysis.discriminant(m, l)?;
    let source = analysis.chain().view(l, l);
    let images = if dn.generators().len() == source.generators().len() {
        source
            .generators()
            .iter()
            .map(|s| pm.apply(s))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let psi = Homomorphism::from_images(&dn, &dm, images)?;
    if !psi.is_surjective()? {
        return Err(Error::Invariant(format!("psi_({n},{m}) at level {l} is not surjective")));
    }
    Ok(psi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    /// Every examined kernel from `n0` on is trivial.
    StableSoFar { n0: usize },
    /// Every examined kernel is non-trivial.
    WildEvidence { levels: Vec<usize> },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRecord {
    pub n: usize,
    pub level: usize,
    #[serde(serialize_with = "ser_u128")]
    pub level_order: u128,
    #[serde(serialize_with = "ser_u128")]
    pub core_order: u128,
    #[serde(serialize_with = "ser_u128")]
    pub disc_order: u128,
    /// `|ker ψ_{n,n+1}^(ℓ)|`, defined for `n < ℓ`.
    #[serde(serialize_with = "ser_opt_u128")]
    pub psi_kernel_order: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub mode: super::ChainMode,
    pub depth: usize,
    pub records: Vec<LevelRecord>,
    /// `psi_kernel_orders[n][ℓ - n - 1]` is `|ker ψ_{n,n+1}^(ℓ)|`.
    #[serde(serialize_with = "ser_u128_matrix")]
    pub psi_kernel_orders: Vec<Vec<u128>>,
    /// `|ker ψ_{n,n+1}^(L)|` for `n < L`: the row the verdict is read from.
    #[serde(serialize_with = "ser_u128_vec")]
    pub deepest_kernels: Vec<u128>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Reads the verdict off the kernels `|ker ψ_{n,n+1}^(L)|`, `n < L`.
pub fn verdict_from_kernels(kernels: &[u128]) -> Verdict {
    if kernels.len() < 2 {
        return Verdict::Inconclusive {
            reason: format!("depth {} gives fewer than two kernels", kernels.len()),
        };
    }
    if kernels.iter().all(|&k| k > 1) {
        return Verdict::WildEvidence {
            levels: (0..kernels.len()).collect(),
        };
    }
    if *kernels.last().unwrap() == 1 {
        let n0 = kernels
            .iter()
            .rposition(|&k| k > 1)
            .map_or(0, |i| i + 1);
        return Verdict::StableSoFar { n0 };
    }
    Verdict::Inconclusive {
        reason: "some kernels are trivial but the deepest one is not".into(),
    }
}

pub fn stability_report(chain: &GroupChain) -> Result<StabilityReport> {
    let analysis = ChainAnalysis::new(chain);
    let depth = chain.depth();
    let mut records = Vec::new();
    let mut matrix = vec![Vec::new(); depth];
    for n in 0..=depth {
        for l in n..=depth {
            let level_order = chain.view(l, l).order()?;
            let core_order = analysis.core_order(n, l)?;
            let psi = if n < l {
                let k = analysis.psi_kernel_order(n, n + 1, l)?;
                matrix[n].push(k);
                Some(k)
            } else {
                None
            };
            records.push(LevelRecord {
                n,
                level: l,
                level_order,
                core_order,
                disc_order: level_order / core_order,
                psi_kernel_order: psi,
            });
        }
    }
    let deepest: Vec<u128> = matrix.iter().map(|row| *row.last().unwrap()).collect();
    Ok(StabilityReport {
        mode: chain.mode(),
        depth,
        records,
        deepest_kernels: deepest.clone(),
        psi_kernel_orders: matrix,
        verdict: verdict_from_kernels(&deepest),
        notes: chain.notes().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert_eq!(verdict_from_kernels(&[1, 1, 1, 1]), Verdict::StableSoFar { n0: 0 });
        assert_eq!(verdict_from_kernels(&[2, 3, 1, 1]), Verdict::StableSoFar { n0: 2 });
        assert_eq!(
            verdict_from_kernels(&[2, 9, 5, 49]),
            Verdict::WildEvidence { levels: vec![0, 1, 2, 3] }
        );
        assert!(matches!(verdict_from_kernels(&[2]), Verdict::Inconclusive { .. }));
        assert!(matches!(verdict_from_kernels(&[1, 2]), Verdict::Inconclusive { .. }));
    }
}
