use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A permutation of `{0, …, d-1}` stored by its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image array, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &i in &images {
            if i >= degree || seen[i] {
                return Err(Error::Spec(format!(
                    "image array {images:?} is not a permutation of 0..{degree}"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm {
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1, 2, 3]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Perm> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (k, &point) in cycle.iter().enumerate() {
                if point >= degree {
                    return Err(Error::Spec(format!("cycle point {point} exceeds degree {degree}")));
                }
                images[point] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::from_images(images)
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Perm {
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&i| i as usize)
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "permutation degrees differ");
        Perm {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.apply(start);
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.apply(next);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let parts: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// A square matrix with entries in `Z/mZ`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    dim: u32,
    modulus: u32,
    entries: Vec<u32>,
}

impl Matrix {
    pub fn identity(dim: usize, modulus: u32) -> Matrix {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1 % modulus;
        }
        Matrix {
            dim: dim as u32,
            modulus,
            entries,
        }
    }

    /// Row-major entries, reduced into `0..modulus`.
    pub fn from_entries(dim: usize, modulus: u32, entries: &[i64]) -> Result<Matrix> {
        if modulus < 2 {
            return Err(Error::Spec(format!("modulus {modulus} must be at least 2")));
        }
        if entries.len() != dim * dim {
            return Err(Error::Spec(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let m = modulus as i64;
        Ok(Matrix {
            dim: dim as u32,
            modulus,
            entries: entries.iter().map(|&e| e.rem_euclid(m) as u32).collect(),
        })
    }

    /// The elementary transvection `I + a·E_{row,col}`.
    pub fn transvection(dim: usize, modulus: u32, row: usize, col: usize, a: u32) -> Matrix {
        assert_ne!(row, col);
        let mut m = Matrix::identity(dim, modulus);
        m.entries[row * dim + col] = a % modulus;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn entry(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert!(
            self.dim == other.dim && self.modulus == other.modulus,
            "matrix shapes differ"
        );
        let n = self.dim();
        let m = self.modulus as u64;
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc += self.entries[i * n + k] as u64 * other.entries[k * n + j] as u64;
                }
                entries[i * n + j] = (acc % m) as u32;
            }
        }
        Matrix {
            dim: self.dim,
            modulus: self.modulus,
            entries,
        }
    }

    pub fn determinant(&self) -> u32 {
        let n = self.dim();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j) as i64).collect())
            .collect();
        det_mod(&rows, self.modulus as i64) as u32
    }

    /// Inverse via the adjugate; `None` when the determinant is not a unit.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.dim();
        let m = self.modulus as i64;
        let det = self.determinant() as i64;
        let det_inv = mod_inverse(det, m)?;
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<i64>> = (0..n)
                    .filter(|&r| r != j)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != i)
                            .map(|c| self.entry(r, c) as i64)
                            .collect()
                    })
                    .collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                let cof = (sign * det_mod(&minor, m)).rem_euclid(m);
                entries[i * n + j] = ((cof * det_inv).rem_euclid(m)) as u32;
            }
        }
        Some(Matrix {
            dim: self.dim,
            modulus: self.modulus,
            entries,
        })
    }

    /// Reduces entries modulo a divisor of the modulus.
    pub fn reduce(&self, modulus: u32) -> Matrix {
        assert!(
            modulus >= 2 && self.modulus % modulus == 0,
            "reduction modulus must divide the matrix modulus"
        );
        Matrix {
            dim: self.dim,
            modulus,
            entries: self.entries.iter().map(|&e| e % modulus).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim();
        self.entries
            .iter()
            .enumerate()
            .all(|(k, &e)| e == if k / n == k % n { 1 % self.modulus } else { 0 })
    }
}

fn det_mod(rows: &[Vec<i64>], m: i64) -> i64 {
    let n = rows.len();
    match n {
        0 => 1 % m,
        1 => rows[0][0].rem_euclid(m),
        2 => (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]).rem_euclid(m),
        _ => {
            let mut acc = 0i64;
            for col in 0..n {
                if rows[0][col] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i64>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != col)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let term = rows[0][col] * det_mod(&minor, m) % m;
                acc = if col % 2 == 0 { acc + term } else { acc - term }.rem_euclid(m);
            }
            acc
        }
    }
}

pub(crate) fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1 || (m == 1)).then(|| old_s.rem_euclid(m))
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let rows: Vec<String> = (0..n)
            .map(|i| {
                let row: Vec<String> = (0..n).map(|j| self.entry(i, j).to_string()).collect();
                row.join(" ")
            })
            .collect();
        write!(f, "[{}] mod {}", rows.join("; "), self.modulus)
    }
}

/// Group elements: permutations, matrices mod m, or tuples in a direct product.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Perm(Perm),
    Mat(Matrix),
    Tuple(Vec<Element>),
}

/// The shape of an element; two elements can be multiplied iff their kinds agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Perm { degree: usize },
    Mat { dim: usize, modulus: u32 },
    Tuple(Vec<ElementKind>),
}

impl Element {
    pub fn kind(&self) -> ElementKind {
        match self {
            Element::Perm(p) => ElementKind::Perm { degree: p.degree() },
            Element::Mat(m) => ElementKind::Mat {
                dim: m.dim(),
                modulus: m.modulus(),
            },
            Element::Tuple(parts) => ElementKind::Tuple(parts.iter().map(Element::kind).collect()),
        }
    }

    pub fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Perm(a), Element::Perm(b)) => Element::Perm(a.compose(b)),
            (Element::Mat(a), Element::Mat(b)) => Element::Mat(a.mul(b)),
            (Element::Tuple(a), Element::Tuple(b)) => {
                assert_eq!(a.len(), b.len(), "tuple lengths differ");
                Element::Tuple(a.iter().zip(b).map(|(x, y)| x.mul(y)).collect())
            }
            _ => panic!("cannot multiply elements of different kinds"),
        }
    }

    pub fn inverse(&self) -> Element {
        match self {
            Element::Perm(p) => Element::Perm(p.inverse()),
            Element::Mat(m) => Element::Mat(
                m.inverse()
                    .expect("group matrices have unit determinant"),
            ),
            Element::Tuple(parts) => Element::Tuple(parts.iter().map(Element::inverse).collect()),
        }
    }

    pub fn identity_like(&self) -> Element {
        match self {
            Element::Perm(p) => Element::Perm(Perm::identity(p.degree())),
            Element::Mat(m) => Element::Mat(Matrix::identity(m.dim(), m.modulus())),
            Element::Tuple(parts) => {
                Element::Tuple(parts.iter().map(Element::identity_like).collect())
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Perm(p) => p.is_identity(),
            Element::Mat(m) => m.is_identity(),
            Element::Tuple(parts) => parts.iter().all(Element::is_identity),
        }
    }

    /// `g · self · g⁻¹`
    pub fn conjugate_by(&self, g: &Element) -> Element {
        g.mul(self).mul(&g.inverse())
    }

    pub fn commutes_with(&self, other: &Element) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn pow(&self, mut exp: u64) -> Element {
        let mut base = self.clone();
        let mut acc = self.identity_like();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut x = self.clone();
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    pub fn component(&self, index: usize) -> Option<&Element> {
        match self {
            Element::Tuple(parts) => parts.get(index),
            _ => None,
        }
    }

    pub fn components(&self) -> Option<&[Element]> {
        match self {
            Element::Tuple(parts) => Some(parts),
            _ => None,
        }
    }

    /// JSON descriptor: image array, row-major entry array, or array of components.
    pub fn to_descriptor(&self) -> Value {
        match self {
            Element::Perm(p) => json!(p.images().collect::<Vec<_>>()),
            Element::Mat(m) => json!(m.entries()),
            Element::Tuple(parts) => Value::Array(parts.iter().map(Element::to_descriptor).collect()),
        }
    }
}

impl ElementKind {
    pub fn identity(&self) -> Element {
        match self {
            ElementKind::Perm { degree } => Element::Perm(Perm::identity(*degree)),
            ElementKind::Mat { dim, modulus } => Element::Mat(Matrix::identity(*dim, *modulus)),
            ElementKind::Tuple(kinds) => Element::Tuple(kinds.iter().map(|k| k.identity()).collect()),
        }
    }

    /// Parses an element descriptor of this kind.
    pub fn parse(&self, value: &Value) -> Result<Element> {
        let bad = |what: &str| Error::Spec(format!("expected {what}, found {value}"));
        match self {
            ElementKind::Perm { degree } => {
                let arr = value.as_array().ok_or_else(|| bad("an image array"))?;
                let images = arr
                    .iter()
                    .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(|| bad("integer images")))
                    .collect::<Result<Vec<_>>>()?;
                if images.len() != *degree {
                    return Err(Error::Spec(format!(
                        "permutation {value} has {} images, expected degree {degree}",
                        images.len()
                    )));
                }
                Ok(Element::Perm(Perm::from_images(images)?))
            }
            ElementKind::Mat { dim, modulus } => {
                let arr = value.as_array().ok_or_else(|| bad("a row-major entry array"))?;
                let entries = arr
                    .iter()
                    .map(|v| v.as_i64().ok_or_else(|| bad("integer entries")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Element::Mat(Matrix::from_entries(*dim, *modulus, &entries)?))
            }
            ElementKind::Tuple(kinds) => {
                let arr = value.as_array().ok_or_else(|| bad("an array of components"))?;
                if arr.len() != kinds.len() {
                    return Err(Error::Spec(format!(
                        "tuple {value} has {} components, expected {}",
                        arr.len(),
                        kinds.len()
                    )));
                }
                Ok(Element::Tuple(
                    kinds.iter().zip(arr).map(|(k, v)| k.parse(v)).collect::<Result<_>>()?,
                ))
            }
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Perm(p) => write!(f, "{p}"),
            Element::Mat(m) => write!(f, "{m}"),
            Element::Tuple(parts) => {
                let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "<{}>", parts.join(", "))
            }
        }
    }
}

impl From<Perm> for Element {
    fn from(p: Perm) -> Self {
        Element::Perm(p)
    }
}

impl From<Matrix> for Element {
    fn from(m: Matrix) -> Self {
        Element::Mat(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_factor_first() {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        // (0 1)(1 2) sends 1 -> 2 -> 2, 2 -> 1 -> 0
        let ab = a.compose(&b);
        assert_eq!(ab.apply(1), 2);
        assert_eq!(ab.apply(2), 0);
        assert!(ab.compose(&ab.inverse()).is_identity());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn matrix_inverse_and_determinant() {
        let m = Matrix::from_entries(3, 6, &[1, 2, 0, 0, 1, 5, 3, 0, 1]).unwrap();
        let det = m.determinant();
        // 1*(1-0) - 2*(0-15) + 0 = 31 = 1 mod 6
        assert_eq!(det, 1);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = Matrix::from_entries(2, 4, &[2, 0, 0, 1]).unwrap();
        assert!(m.inverse().is_none());
    }

    #[test]
    fn element_order_and_pow() {
        let c = Element::Perm(Perm::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap());
        assert_eq!(c.order(), 6);
        assert!(c.pow(6).is_identity());
        assert!(!c.pow(3).is_identity());
        let t = Element::Mat(Matrix::transvection(3, 7, 0, 2, 1));
        assert_eq!(t.order(), 7);
    }

    #[test]
    fn descriptor_parse_roundtrip() {
        let kind = ElementKind::Tuple(vec![
            ElementKind::Perm { degree: 3 },
            ElementKind::Mat { dim: 2, modulus: 5 },
        ]);
        let e = Element::Tuple(vec![
            Element::Perm(Perm::from_cycles(3, &[&[0, 2]]).unwrap()),
            Element::Mat(Matrix::from_entries(2, 5, &[1, 4, 0, 1]).unwrap()),
        ]);
        assert_eq!(kind.parse(&e.to_descriptor()).unwrap(), e);
    }
}
