use serde::Serialize;

use super::chain::GroupChain;
use super::tower::ChainAnalysis;
use crate::error::{Error, Result};
use crate::groups::{close_subgroup, core, quotient, CosetSpace, Element, Group};
use crate::numbers::ser_u128;

/// The finite quotients `X_ℓ = G_0/G_ℓ` with their `G_0`-actions and the
/// maps `X_{ℓ+1} → X_ℓ`.
pub struct CosetTower {
    pub levels: Vec<CosetSpace>,
    /// `projections[ℓ][c]` is the image in `X_ℓ` of coset `c` of `X_{ℓ+1}`.
    pub projections: Vec<Vec<usize>>,
}

impl CosetTower {
    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(CosetSpace::len).collect()
    }
}

/// Builds every `X_ℓ` and checks that the action is transitive, that the
/// projections commute with the action of each generator of `G_0`, and that
/// the base point of `X_ℓ` has stabiliser `G_ℓ` (by counting).
pub fn coset_tower(chain: &GroupChain) -> Result<CosetTower> {
    let depth = chain.depth();
    let mut levels = Vec::new();
    for l in 0..=depth {
        let g0 = chain.view(l, 0);
        let space = CosetSpace::new(g0, chain.view(l, l))?;
        if space.len() as u128 * chain.view(l, l).order()? != g0.order()? {
            return Err(Error::Invariant(format!(
                "level {l}: {} cosets do not account for the index",
                space.len()
            )));
        }
        levels.push(space);
    }
    let mut projections = Vec::new();
    for l in 0..depth {
        let (lower, upper) = (&levels[l], &levels[l + 1]);
        let proj = upper
            .representatives()
            .iter()
            .map(|r| lower.locate(&chain.project(r, l + 1, l)))
            .collect::<Result<Vec<_>>>()?;
        let gens_upper = chain.view(l + 1, 0).generators();
        for (i, s) in gens_upper.iter().enumerate() {
            let s_low = chain.project(s, l + 1, l);
            let gi = lower.group().generators().iter().position(|t| *t == s_low);
            for c in 0..upper.len() {
                let moved = upper.generator_action(i)[c] as usize;
                let lhs = proj[moved];
                let rhs = match gi {
                    Some(j) => lower.generator_action(j)[proj[c]] as usize,
                    None => lower.act(&s_low, proj[c])?,
                };
                if lhs != rhs {
                    return Err(Error::Invariant(format!(
                        "projection X_{} -> X_{l} does not commute with generator {s}",
                        l + 1
                    )));
                }
            }
        }
        projections.push(proj);
    }
    Ok(CosetTower {
        levels,
        projections,
    })
}

/// `G_0/C_ℓ` acting on `X_ℓ`, with the isotropy group `G_ℓ/C_ℓ` of the base point.
pub struct EllisLevel {
    pub level: usize,
    pub quotient: Group,
    pub isotropy: Group,
    pub summary: EllisSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllisSummary {
    pub level: usize,
    #[serde(serialize_with = "ser_u128")]
    pub quotient_order: u128,
    #[serde(serialize_with = "ser_u128")]
    pub isotropy_order: u128,
    pub points: usize,
    pub transitive: bool,
    /// The stabiliser of the base point is exactly the isotropy group.
    pub stabilizer_is_isotropy: bool,
    #[serde(serialize_with = "ser_u128")]
    pub isotropy_core_order: u128,
}

pub fn ellis_level(chain: &GroupChain, l: usize) -> Result<EllisLevel> {
    if l > chain.depth() {
        return Err(Error::Precondition(format!(
            "level {l} exceeds depth {}",
            chain.depth()
        )));
    }
    let analysis = ChainAnalysis::new(chain);
    let g0 = chain.view(l, 0);
    let gl = chain.view(l, l);
    let c = analysis.core(0, l)?;
    let (q, pi) = quotient(g0, &c)?;
    let iso_gens = gl
        .generators()
        .iter()
        .map(|s| pi.apply(s))
        .collect::<Result<Vec<Element>>>()?;
    let isotropy = close_subgroup(&q, iso_gens)?.into_group();

    let space = CosetSpace::new(g0, gl)?;
    // the quotient's i-th generator is the image of G_0's i-th generator, so it
    // acts on X_ℓ through the same table; trivial quotients act trivially
    let aligned = q.generators().len() == g0.generators().len();
    let mut reached = vec![false; space.len()];
    reached[0] = true;
    let mut stack = vec![0usize];
    while let Some(c) = stack.pop() {
        if !aligned {
            break;
        }
        for i in 0..g0.generators().len() {
            let d = space.generator_action(i)[c] as usize;
            if !reached[d] {
                reached[d] = true;
                stack.push(d);
            }
        }
    }
    let transitive = reached.iter().all(|&r| r);
    let isotropy_fixes_base = gl
        .generators()
        .iter()
        .all(|s| space.act(s, 0).map(|c| c == 0).unwrap_or(false));
    let quotient_order = q.order()?;
    let isotropy_order = isotropy.order()?;
    let stabilizer_is_isotropy =
        isotropy_fixes_base && isotropy_order * space.len() as u128 == quotient_order;
    let isotropy_core_order = core(&q, &isotropy)?.order()?;
    Ok(EllisLevel {
        level: l,
        summary: EllisSummary {
            level: l,
            quotient_order,
            isotropy_order,
            points: space.len(),
            transitive,
            stabilizer_is_isotropy,
            isotropy_core_order,
        },
        quotient: q,
        isotropy,
    })
}
