//! JSON descriptors for groups, chains, families and sequences.

use std::path::Path;

use serde_json::Value;

use crate::chains::GroupChain;
use crate::error::{Error, Result};
use crate::groups::{close_subgroup, family_group, sl_group, Element, FamilyVariant, Group, Perm};
use crate::profinite::{family_to_chain_with, FamilySpec};
use crate::taileq::{HomSequence, Ranks};
use crate::groups::Homomorphism;

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Spec(format!("{path}: missing field \"{key}\"")))
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::Spec(format!("{path}: expected a non-negative integer, found {v}")))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Spec(format!("{path}: expected an array, found {v}")))
}

/// Orders may be written as numbers or, past `u64`, as decimal strings.
fn as_u128(v: &Value, path: &str) -> Result<u128> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(u128::from)
            .ok_or_else(|| Error::Spec(format!("{path}: expected a non-negative integer, found {v}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::Spec(format!("{path}: {s:?} is not an integer"))),
        _ => Err(Error::Spec(format!("{path}: expected an integer, found {v}"))),
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    serde_json::from_str(&text).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))
}

/// Group descriptors:
/// `{"kind":"permutation","degree":d,"generators":[[images…],…]}`,
/// `{"kind":"symmetric","degree":d}`, `{"kind":"sl","n":N,"mod":m}`,
/// `{"kind":"family_subgroup","p":p,"variant":1|2}` and
/// `{"kind":"product","factors":[descriptor,…]}`.
pub fn parse_group(v: &Value, path: &str) -> Result<Group> {
    let kind = field(v, "kind", path)?
        .as_str()
        .ok_or_else(|| Error::Spec(format!("{path}.kind: expected a string")))?;
    match kind {
        "permutation" => {
            let degree = as_u64(field(v, "degree", path)?, &format!("{path}.degree"))? as usize;
            if degree == 0 {
                return Err(Error::Spec(format!("{path}.degree: must be positive")));
            }
            let gens_path = format!("{path}.generators");
            let gens = as_array(field(v, "generators", path)?, &gens_path)?
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let p = format!("{gens_path}[{i}]");
                    let images = as_array(g, &p)?
                        .iter()
                        .map(|x| as_u64(x, &p).map(|x| x as usize))
                        .collect::<Result<Vec<_>>>()?;
                    if images.len() != degree {
                        return Err(Error::Spec(format!(
                            "{p}: {} images for degree {degree}",
                            images.len()
                        )));
                    }
                    Perm::from_images(images)
                        .map(Element::Perm)
                        .map_err(|e| Error::Spec(format!("{p}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Group::generated(Element::Perm(Perm::identity(degree)), gens)
        }
        "symmetric" => {
            let degree = as_u64(field(v, "degree", path)?, &format!("{path}.degree"))? as usize;
            Group::symmetric(degree)
        }
        "sl" => {
            let n = as_u64(field(v, "n", path)?, &format!("{path}.n"))? as usize;
            let m = as_u64(field(v, "mod", path)?, &format!("{path}.mod"))? as u32;
            sl_group(n, m).map_err(|e| Error::Spec(format!("{path}: {e}")))
        }
        "family_subgroup" => {
            let p = as_u64(field(v, "p", path)?, &format!("{path}.p"))? as u32;
            let variant = as_u64(field(v, "variant", path)?, &format!("{path}.variant"))?;
            let variant = FamilyVariant::from_bit(variant as u8)
                .map_err(|e| Error::Spec(format!("{path}.variant: {e}")))?;
            if !crate::groups::is_prime(p as u64) {
                return Err(Error::Spec(format!("{path}.p: {p} is not prime")));
            }
            Ok(family_group(p, variant))
        }
        "product" => {
            let fp = format!("{path}.factors");
            let factors = as_array(field(v, "factors", path)?, &fp)?
                .iter()
                .enumerate()
                .map(|(i, f)| parse_group(f, &format!("{fp}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Group::direct_product(factors))
        }
        other => Err(Error::Spec(format!("{path}.kind: unknown group kind {other:?}"))),
    }
}

/// A subgroup of `parent`: either `{"generators":[element…]}` or a group
/// descriptor, which must lie inside `parent`.
pub fn parse_subgroup(parent: &Group, v: &Value, path: &str) -> Result<Group> {
    if v.get("kind").is_some() {
        let g = parse_group(v, path)?;
        if g.kind() != parent.kind() {
            return Err(Error::Spec(format!("{path}: element kind differs from the parent group")));
        }
        if !g.is_subgroup_of(parent)? {
            return Err(Error::Domain(format!("{path}: not contained in the parent group")));
        }
        return Ok(g.with_max_elements(parent.max_elements()));
    }
    let gens_path = format!("{path}.generators");
    let kind = parent.kind();
    let gens = as_array(field(v, "generators", path)?, &gens_path)?
        .iter()
        .enumerate()
        .map(|(i, g)| {
            kind.parse(g)
                .map_err(|e| Error::Spec(format!("{gens_path}[{i}]: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, g) in gens.iter().enumerate() {
        if !parent.contains(g)? {
            return Err(Error::Domain(format!("{gens_path}[{i}]: {g} is not in the parent group")));
        }
    }
    Ok(close_subgroup(parent, gens)?.into_group())
}

pub fn parse_family(v: &Value, path: &str) -> Result<FamilySpec> {
    let fam: FamilySpec =
        serde_json::from_value(v.clone()).map_err(|e| Error::Spec(format!("{path}: {e}")))?;
    fam.validate().map_err(|e| Error::Spec(format!("{path}: {e}")))?;
    Ok(fam)
}

pub enum ChainSpec {
    Explicit(GroupChain),
    Family(FamilySpec),
}

/// `{"mode":"explicit","base":G,"levels":[H…]}` or
/// `{"mode":"profinite","family":F}`.
pub fn parse_chain_spec(v: &Value, max_elements: usize) -> Result<ChainSpec> {
    let mode = field(v, "mode", "chain")?
        .as_str()
        .ok_or_else(|| Error::Spec("chain.mode: expected a string".into()))?;
    match mode {
        "explicit" => {
            let base = parse_group(field(v, "base", "chain")?, "chain.base")?.with_max_elements(max_elements);
            let levels = as_array(field(v, "levels", "chain")?, "chain.levels")?
                .iter()
                .enumerate()
                .map(|(i, l)| parse_subgroup(&base, l, &format!("chain.levels[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(ChainSpec::Explicit(GroupChain::explicit(base, levels)?))
        }
        "profinite" => Ok(ChainSpec::Family(parse_family(field(v, "family", "chain")?, "chain.family")?)),
        other => Err(Error::Spec(format!("chain.mode: expected \"explicit\" or \"profinite\", found {other:?}"))),
    }
}

impl ChainSpec {
    pub fn to_chain(&self, max_elements: usize) -> Result<GroupChain> {
        match self {
            ChainSpec::Explicit(c) => Ok(c.clone()),
            ChainSpec::Family(f) => family_to_chain_with(f, max_elements),
        }
    }
}

fn parse_ranks(v: &Value, path: &str) -> Result<Ranks> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Spec(format!("{path}: expected an object of prime -> rank")))?;
    obj.iter()
        .map(|(k, r)| {
            let p: u64 = k
                .parse()
                .map_err(|_| Error::Spec(format!("{path}: key {k:?} is not a prime")))?;
            if !crate::groups::is_prime(p) {
                return Err(Error::Spec(format!("{path}: {p} is not prime")));
            }
            Ok((p, as_u64(r, &format!("{path}.{k}"))? as u32))
        })
        .collect()
}

/// `{"groups":[G…],"maps":[{"generator_images":[…]}…]}` or
/// `{"structural":{"orders":[…],"kernel_orders":[…]}}` (optionally with
/// `"ranks":[{"p":rank,…}…]` in place of the orders).
pub fn parse_sequence(v: &Value) -> Result<HomSequence> {
    if let Some(s) = v.get("structural") {
        if let Some(r) = s.get("ranks") {
            let ranks = as_array(r, "structural.ranks")?
                .iter()
                .enumerate()
                .map(|(i, x)| parse_ranks(x, &format!("structural.ranks[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            return Ok(HomSequence::from_ranks(ranks));
        }
        let list = |key: &str| -> Result<Vec<u128>> {
            let p = format!("structural.{key}");
            as_array(field(s, key, "structural")?, &p)?
                .iter()
                .enumerate()
                .map(|(i, x)| as_u128(x, &format!("{p}[{i}]")))
                .collect()
        };
        return Ok(HomSequence::from_orders(list("orders")?, list("kernel_orders")?));
    }
    let groups = as_array(field(v, "groups", "sequence")?, "sequence.groups")?
        .iter()
        .enumerate()
        .map(|(i, g)| parse_group(g, &format!("sequence.groups[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let maps = as_array(field(v, "maps", "sequence")?, "sequence.maps")?
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let path = format!("sequence.maps[{i}]");
            let (Some(dom), Some(cod)) = (groups.get(i), groups.get(i + 1)) else {
                return Err(Error::Spec(format!("{path}: no groups for this map")));
            };
            let ip = format!("{path}.generator_images");
            let images = as_array(field(m, "generator_images", &path)?, &ip)?
                .iter()
                .enumerate()
                .map(|(k, x)| cod.kind().parse(x).map_err(|e| Error::Spec(format!("{ip}[{k}]: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if images.len() != dom.generators().len() {
                return Err(Error::Spec(format!(
                    "{ip}: {} images for {} generators",
                    images.len(),
                    dom.generators().len()
                )));
            }
            Homomorphism::from_images(dom, cod, images)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomSequence::explicit(groups, maps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn explicit_chain_from_json() {
        let v = json!({
            "mode": "explicit",
            "base": {"kind": "symmetric", "degree": 4},
            "levels": [
                {"generators": [[1, 2, 0, 3], [0, 2, 3, 1]]},
                {"generators": [[1, 0, 3, 2], [2, 3, 0, 1]]}
            ]
        });
        let ChainSpec::Explicit(c) = parse_chain_spec(&v, 1000).unwrap() else { panic!() };
        assert_eq!(c.indices(), &[1, 2, 6]);
    }

    #[test]
    fn missing_field_is_named() {
        let v = json!({"mode": "explicit", "base": {"kind": "sl", "n": 3}});
        let err = parse_chain_spec(&v, 1000).err().unwrap();
        assert!(err.to_string().contains("chain.base: missing field \"mod\""), "{err}");
    }

    #[test]
    fn structural_sequence_with_large_orders() {
        let v = json!({"structural": {"orders": ["340282366920938463463374607431768211455", 1], "kernel_orders": [1]}});
        let HomSequence::Structural { orders, .. } = parse_sequence(&v).unwrap() else { panic!() };
        assert_eq!(orders[0], u128::MAX);
    }
}
