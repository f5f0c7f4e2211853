//! Special linear groups over `Z/mZ` and the unitriangular subgroups `A¹_p`, `A²_p`.

use super::element::{Element, Matrix};
use super::group::{Group, Structure, Subgroup, DEFAULT_MAX_ELEMENTS};
use crate::error::{Error, Result};

/// Which unitriangular subgroup of `SL_3(Z/pZ)` to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyVariant {
    /// Matrices `I + a·E_{1,2}`, order `p`.
    One,
    /// Matrices `I + a·E_{1,2} + b·E_{0,2}`, order `p²`.
    Two,
}

impl FamilyVariant {
    pub fn from_bit(bit: u8) -> Result<FamilyVariant> {
        match bit {
            1 => Ok(FamilyVariant::One),
            2 => Ok(FamilyVariant::Two),
            other => Err(Error::Spec(format!("family variant must be 1 or 2, got {other}"))),
        }
    }

    pub fn rank(self) -> u32 {
        match self {
            FamilyVariant::One => 1,
            FamilyVariant::Two => 2,
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation as `(p, k)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut k = 0;
        while n % d == 0 {
            n /= d;
            k += 1;
        }
        if k > 0 {
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `|SL_n(Z/mZ)|`, or `None` on overflow.
pub fn sl_order(n: usize, m: u32) -> Option<u128> {
    let mut total = 1u128;
    for (p, k) in factorize(m as u64) {
        let p = p as u128;
        let lift = p.checked_pow((k - 1) * (n * n - 1) as u32)?;
        let mut field = p.checked_pow((n * (n - 1) / 2) as u32)?;
        for i in 2..=n as u32 {
            field = field.checked_mul(p.checked_pow(i)? - 1)?;
        }
        total = total.checked_mul(lift)?.checked_mul(field)?;
    }
    Some(total)
}

/// `SL_n(Z/mZ)` generated by the elementary transvections `I + E_{ij}`.
pub fn sl_group(n: usize, m: u32) -> Result<Group> {
    if n < 2 || m < 2 {
        return Err(Error::Spec(format!("SL_n(Z/m) needs n >= 2 and m >= 2, got n={n}, m={m}")));
    }
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gens.push(Element::Mat(Matrix::transvection(n, m, i, j, 1)));
            }
        }
    }
    let g = Group::build(
        Element::Mat(Matrix::identity(n, m)),
        gens,
        Structure::SpecialLinear { dim: n, modulus: m },
        sl_order(n, m),
        DEFAULT_MAX_ELEMENTS,
    );
    Ok(g.with_label(format!("SL({n}, Z/{m})")))
}

/// `A¹_p` or `A²_p` as a subgroup of `SL_3(Z/pZ)`.
pub fn family_subgroup(p: u32, variant: FamilyVariant) -> Result<Subgroup> {
    if !is_prime(p as u64) {
        return Err(Error::Spec(format!("{p} is not prime")));
    }
    let parent = sl_group(3, p)?;
    Ok(Subgroup::new_unchecked(&parent, family_group(p, variant)))
}

pub(crate) fn family_group(p: u32, variant: FamilyVariant) -> Group {
    let mut gens = vec![Element::Mat(Matrix::transvection(3, p, 1, 2, 1))];
    if variant == FamilyVariant::Two {
        gens.push(Element::Mat(Matrix::transvection(3, p, 0, 2, 1)));
    }
    let order = (p as u128).pow(variant.rank());
    Group::build(
        Element::Mat(Matrix::identity(3, p)),
        gens,
        Structure::Unitriangular { p, variant },
        Some(order),
        DEFAULT_MAX_ELEMENTS,
    )
    .with_label(format!("A{}_{p}", variant.rank()))
}

pub(crate) fn in_family(x: &Element, p: u32, variant: FamilyVariant) -> bool {
    let Element::Mat(m) = x else { return false };
    if m.dim() != 3 || m.modulus() != p {
        return false;
    }
    for r in 0..3 {
        for c in 0..3 {
            let free = (r, c) == (1, 2) || (variant == FamilyVariant::Two && (r, c) == (0, 2));
            if free {
                continue;
            }
            let want = u32::from(r == c);
            if m.entry(r, c) != want {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_formula_small_cases() {
        assert_eq!(sl_order(3, 2), Some(168));
        assert_eq!(sl_order(3, 3), Some(5616));
        assert_eq!(sl_order(2, 2), Some(6));
        assert_eq!(sl_order(2, 4), Some(48));
        assert_eq!(sl_order(2, 6), Some(6 * 24));
    }

    #[test]
    fn sl_membership_is_by_determinant() {
        let g = sl_group(3, 5).unwrap();
        let m = Matrix::from_entries(3, 5, &[2, 0, 0, 0, 3, 0, 0, 0, 1]).unwrap();
        assert!(g.contains(&Element::Mat(m)).unwrap());
        let m = Matrix::from_entries(3, 5, &[2, 0, 0, 0, 1, 0, 0, 0, 1]).unwrap();
        assert!(!g.contains(&Element::Mat(m)).unwrap());
    }

    #[test]
    fn family_membership() {
        let a2 = family_subgroup(5, FamilyVariant::Two).unwrap();
        let x = Matrix::from_entries(3, 5, &[1, 0, 3, 0, 1, 4, 0, 0, 1]).unwrap();
        assert!(a2.contains(&Element::Mat(x.clone())).unwrap());
        let a1 = family_subgroup(5, FamilyVariant::One).unwrap();
        assert!(!a1.contains(&Element::Mat(x)).unwrap());
        assert!(family_subgroup(6, FamilyVariant::One).is_err());
    }

    #[test]
    fn factorize_composites() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
    }
}
