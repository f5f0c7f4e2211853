use serde::Serialize;

use crate::error::{Error, Result};
use crate::profinite::FamilySpec;

/// Tail equivalence of two families holds exactly when their bits agree from
/// some index on. Only the first `window` indices are ever looked at.
pub const TAIL_CRITERION: &str =
    "two families over the same primes are tail equivalent iff s_i = t_i for all i >= n, for some n";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderObstruction {
    pub index: usize,
    pub prime: u32,
    /// `p^s` and `p^t`: the kernels of `ψ_{i,i+1}` in the two families.
    pub left_order: u64,
    pub right_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailVerdict {
    /// Bits agree on `n..window`.
    EquivalentOnWindow {
        n: usize,
        window: usize,
        criterion: String,
    },
    /// Bits differ at the last index examined; every disagreement is listed.
    DistinctEvidence {
        window: usize,
        obstructions: Vec<OrderObstruction>,
        criterion: String,
    },
}

impl TailVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, TailVerdict::EquivalentOnWindow { .. })
    }
}

/// Compares the bits of two families over their common window (or `window`
/// if smaller).
pub fn family_tail_decide(f1: &FamilySpec, f2: &FamilySpec, window: Option<usize>) -> Result<TailVerdict> {
    f1.validate()?;
    f2.validate()?;
    if f1.primes != f2.primes {
        return Err(Error::Domain(format!(
            "families use different primes: {:?} vs {:?}",
            f1.primes, f2.primes
        )));
    }
    let mut w = f1.depth().min(f2.depth());
    if let Some(win) = window {
        w = w.min(win);
    }
    if w == 0 {
        return Err(Error::Precondition("window must include at least one index".into()));
    }
    let agree = |i: usize| f1.bits[i] == f2.bits[i];
    let criterion = TAIL_CRITERION.to_string();
    if agree(w - 1) {
        let n = (0..w).rev().find(|&i| !agree(i)).map_or(0, |i| i + 1);
        return Ok(TailVerdict::EquivalentOnWindow { n, window: w, criterion });
    }
    let obstructions = (0..w)
        .filter(|&i| !agree(i))
        .map(|i| {
            let p = f1.primes[i] as u64;
            OrderObstruction {
                index: i,
                prime: f1.primes[i],
                left_order: p.pow(f1.bits[i] as u32),
                right_order: p.pow(f2.bits[i] as u32),
            }
        })
        .collect();
    Ok(TailVerdict::DistinctEvidence {
        window: w,
        obstructions,
        criterion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(bits: &[u8]) -> FamilySpec {
        FamilySpec::new(vec![2, 3, 5, 7], bits.to_vec()).unwrap()
    }

    #[test]
    fn agreement_from_index_one() {
        let v = family_tail_decide(&fam(&[1, 2, 1, 2]), &fam(&[2, 2, 1, 2]), None).unwrap();
        assert!(matches!(v, TailVerdict::EquivalentOnWindow { n: 1, .. }));
    }

    #[test]
    fn alternating_bits_disagree_everywhere() {
        let v = family_tail_decide(&fam(&[1, 2, 1, 2]), &fam(&[2, 1, 2, 1]), None).unwrap();
        let TailVerdict::DistinctEvidence { obstructions, .. } = v else { panic!() };
        assert_eq!(obstructions.len(), 4);
        assert_eq!((obstructions[0].left_order, obstructions[0].right_order), (2, 4));
    }

    #[test]
    fn different_primes_are_rejected() {
        let other = FamilySpec::new(vec![2, 3, 5, 11], vec![1, 1, 1, 1]).unwrap();
        assert!(family_tail_decide(&fam(&[1, 1, 1, 1]), &other, None).is_err());
    }
}
