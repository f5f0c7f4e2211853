use std::collections::BTreeMap;

use serde::Serialize;

use super::group::Group;
use super::linear::factorize;
use crate::error::Result;

/// Isomorphism invariants that are cheap once the elements are listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoarseInvariants {
    pub order: u128,
    pub exponent: u64,
    pub abelian: bool,
    /// Elementary divisors (prime powers, ascending) when abelian.
    pub abelian_invariants: Option<Vec<u64>>,
    /// Element order -> number of elements of that order.
    pub order_histogram: BTreeMap<u64, u64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn coarse_invariants(group: &Group) -> Result<CoarseInvariants> {
    let elements = group.elements()?;
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    for x in elements.iter() {
        *histogram.entry(x.order()).or_default() += 1;
    }
    let exponent = histogram.keys().fold(1u64, |acc, &o| acc / gcd(acc, o) * o);
    let gens = group.generators();
    let abelian = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.commutes_with(b)));
    let order = elements.len() as u128;
    let abelian_invariants = abelian.then(|| abelian_invariants(order as u64, &histogram));
    Ok(CoarseInvariants {
        order,
        exponent,
        abelian,
        abelian_invariants,
        order_histogram: histogram,
    })
}

/// For an abelian group, the number of elements killed by `p^k` is
/// `p^(Σ_i min(k, e_i))`, which recovers the exponents `e_i` of the cyclic
/// `p`-factors.
fn abelian_invariants(order: u64, histogram: &BTreeMap<u64, u64>) -> Vec<u64> {
    let mut out = Vec::new();
    for (p, _) in factorize(order) {
        let killed = |pk: u64| -> u64 {
            histogram
                .iter()
                .filter(|(o, _)| pk % **o == 0)
                .map(|(_, c)| c)
                .sum()
        };
        let log_p = |mut n: u64| {
            let mut k = 0u32;
            while n > 1 {
                n /= p;
                k += 1;
            }
            k
        };
        let mut prev = 0u32;
        let mut counts = Vec::new(); // counts[k-1] = #factors with exponent >= k
        let mut pk = p;
        loop {
            let c = log_p(killed(pk));
            if c == prev {
                break;
            }
            counts.push(c - prev);
            prev = c;
            pk *= p;
        }
        for (k, &at_least) in counts.iter().enumerate() {
            let at_least_next = counts.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(at_least - at_least_next) {
                out.push(p.pow(k as u32 + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::element::{Element, Perm};

    #[test]
    fn cyclic_times_klein() {
        // <(0 1 2 3)> x <(4 5), (6 7)> = Z4 x Z2 x Z2
        let gens = vec![
            Element::Perm(Perm::from_cycles(8, &[&[0, 1, 2, 3]]).unwrap()),
            Element::Perm(Perm::from_cycles(8, &[&[4, 5]]).unwrap()),
            Element::Perm(Perm::from_cycles(8, &[&[6, 7]]).unwrap()),
        ];
        let g = Group::generated(Element::Perm(Perm::identity(8)), gens).unwrap();
        let inv = coarse_invariants(&g).unwrap();
        assert_eq!(inv.order, 16);
        assert_eq!(inv.exponent, 4);
        assert_eq!(inv.abelian_invariants, Some(vec![2, 2, 4]));
    }

    #[test]
    fn s3_is_not_abelian() {
        let inv = coarse_invariants(&Group::symmetric(3).unwrap()).unwrap();
        assert!(!inv.abelian);
        assert_eq!(inv.exponent, 6);
        assert_eq!(inv.order_histogram.get(&2), Some(&3));
    }
}
