//! Serialising group orders, which are kept as `u128`.
//!
//! Values that fit in a `u64` are written as JSON numbers, larger ones as
//! decimal strings.

use serde::{Serialize, Serializer};

pub(crate) struct Count(pub u128);

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(self.0) {
            Ok(x) => s.serialize_u64(x),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub(crate) fn ser_u128<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
    Count(*v).serialize(s)
}

pub(crate) fn ser_opt_u128<S: Serializer>(v: &Option<u128>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => ser_u128(x, s),
        None => s.serialize_none(),
    }
}

pub(crate) fn ser_u128_vec<S: Serializer>(v: &[u128], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|&x| Count(x)))
}

pub(crate) fn ser_u128_matrix<S: Serializer>(v: &[Vec<u128>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|row| row.iter().map(|&x| Count(x)).collect::<Vec<_>>()))
}
