//! Small groups, chains and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use chainforge::chains::GroupChain;
use chainforge::groups::{Element, Group, Matrix, Perm};

pub fn perm(images: &[usize]) -> Element {
    Element::from(Perm::from_images(images.to_vec()).unwrap())
}

pub fn cycles(degree: usize, cs: &[&[usize]]) -> Element {
    Element::from(Perm::from_cycles(degree, cs).unwrap())
}

pub fn group(degree: usize, gens: Vec<Element>) -> Group {
    Group::generated(Element::from(Perm::identity(degree)), gens).unwrap()
}

pub fn s3() -> Group {
    Group::symmetric(3).unwrap()
}

pub fn s4() -> Group {
    Group::symmetric(4).unwrap()
}

pub fn d8() -> Group {
    group(4, vec![cycles(4, &[&[0, 1, 2, 3]]), cycles(4, &[&[0, 2]])])
}

/// Q8 in its regular representation: 0..8 stand for 1, i, j, k, -1, -i, -j, -k.
pub fn q8() -> Group {
    let units = ["1", "i", "j", "k"];
    let mul = |a: usize, b: usize| -> usize {
        let (sa, ua) = (a / 4, units[a % 4]);
        let (sb, ub) = (b / 4, units[b % 4]);
        let (s, u) = match (ua, ub) {
            ("1", x) | (x, "1") => (0, x),
            (x, y) if x == y => (1, "1"),
            ("i", "j") => (0, "k"),
            ("j", "k") => (0, "i"),
            ("k", "i") => (0, "j"),
            ("j", "i") => (1, "k"),
            ("k", "j") => (1, "i"),
            ("i", "k") => (1, "j"),
            _ => unreachable!(),
        };
        let sign = (sa + sb + s) % 2;
        sign * 4 + units.iter().position(|&v| v == u).unwrap()
    };
    let left = |x: usize| perm(&(0..8).map(|y| mul(x, y)).collect::<Vec<_>>());
    group(8, vec![left(1), left(2)])
}

pub fn a5() -> Group {
    group(5, vec![cycles(5, &[&[0, 1, 2]]), cycles(5, &[&[0, 1, 2, 3, 4]])])
}

pub fn corpus() -> Vec<(&'static str, Group)> {
    vec![("S3", s3()), ("S4", s4()), ("D8", d8()), ("Q8", q8()), ("A5", a5())]
}

pub fn elements(g: &Group) -> Vec<Element> {
    g.elements().unwrap().iter().cloned().collect()
}

/// Closure of a set of elements under multiplication, by breadth-first search.
pub fn closure(identity: &Element, gens: &[Element]) -> BTreeSet<String> {
    let mut seen: HashSet<Element> = HashSet::from([identity.clone()]);
    let mut queue = vec![identity.clone()];
    while let Some(x) = queue.pop() {
        for s in gens {
            let y = x.mul(s);
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen.iter().map(|x| x.to_string()).collect()
}

/// Every subgroup, as the closures of all pairs of elements. This finds every
/// subgroup of a group whose subgroups are all 2-generated, which holds for
/// the corpus.
pub fn all_subgroups(g: &Group) -> Vec<Group> {
    let els = elements(g);
    let mut keys = BTreeSet::new();
    let mut out = Vec::new();
    for (i, x) in els.iter().enumerate() {
        for y in &els[i..] {
            let key = closure(g.identity(), &[x.clone(), y.clone()]);
            if keys.insert(key) {
                let gens: Vec<Element> = [x, y].into_iter().filter(|e| !e.is_identity()).cloned().collect();
                out.push(Group::generated(g.identity().clone(), gens).unwrap());
            }
        }
    }
    out
}

pub fn as_set(g: &Group) -> BTreeSet<String> {
    g.elements().unwrap().iter().map(|x| x.to_string()).collect()
}

/// `∩_{g∈G} gHg⁻¹` by conjugating the whole subgroup by every element.
pub fn brute_core(g: &Group, h: &Group) -> BTreeSet<String> {
    let hs = elements(h);
    let mut core = as_set(h);
    for x in elements(g) {
        let conj: BTreeSet<String> = hs.iter().map(|y| y.conjugate_by(&x).to_string()).collect();
        core = core.intersection(&conj).cloned().collect();
    }
    core
}

/// Every matrix of determinant 1 over `Z/p`, by running through all `p^9`
/// entry tuples.
pub fn sl3_by_enumeration(p: u32) -> usize {
    let mut count = 0;
    let total = (p as u64).pow(9);
    for code in 0..total {
        let mut c = code;
        let entries: Vec<i64> = (0..9)
            .map(|_| {
                let e = (c % p as u64) as i64;
                c /= p as u64;
                e
            })
            .collect();
        if Matrix::from_entries(3, p, &entries).unwrap().determinant() == 1 {
            count += 1;
        }
    }
    count
}

fn sub(g: &Group, gens: Vec<Element>) -> Group {
    Group::generated(g.identity().clone(), gens).unwrap()
}

/// Descending chains in the corpus groups, base first.
pub fn corpus_chains() -> Vec<(&'static str, GroupChain)> {
    let s4 = s4();
    let v4 = sub(&s4, vec![cycles(4, &[&[0, 1], &[2, 3]]), cycles(4, &[&[0, 2], &[1, 3]])]);
    let d8_in_s4 = sub(&s4, vec![cycles(4, &[&[0, 1, 2, 3]]), cycles(4, &[&[0, 2]])]);
    let c2 = sub(&s4, vec![cycles(4, &[&[0, 1], &[2, 3]])]);
    let s3_in_s4 = sub(&s4, vec![cycles(4, &[&[0, 1]]), cycles(4, &[&[0, 1, 2]])]);
    let t01 = sub(&s4, vec![cycles(4, &[&[0, 1]])]);
    let triv4 = Group::trivial(s4.identity().clone());

    let a5 = a5();
    let a4 = sub(&a5, vec![cycles(5, &[&[0, 1, 2]]), cycles(5, &[&[1, 2, 3]])]);
    let v4_5 = sub(&a5, vec![cycles(5, &[&[0, 1], &[2, 3]]), cycles(5, &[&[0, 2], &[1, 3]])]);
    let c2_5 = sub(&a5, vec![cycles(5, &[&[0, 1], &[2, 3]])]);

    let s3 = s3();
    let t3 = sub(&s3, vec![cycles(3, &[&[0, 1]])]);
    let d8 = d8();
    let refl = sub(&d8, vec![cycles(4, &[&[0, 2]])]);
    let q8 = q8();
    let i = q8.generators()[0].clone();
    let c4 = sub(&q8, vec![i.clone()]);
    let minus = sub(&q8, vec![i.pow(2)]);

    let chain = |base: &Group, levels: Vec<Group>| GroupChain::explicit(base.clone(), levels).unwrap();
    vec![
        ("S4>D8>V4>C2>1", chain(&s4, vec![d8_in_s4, v4.clone(), c2.clone(), triv4.clone()])),
        ("S4>S3>C2>1", chain(&s4, vec![s3_in_s4, t01, triv4.clone()])),
        ("S4>V4>C2", chain(&s4, vec![v4, c2])),
        ("A5>A4>V4>C2>1", chain(&a5, vec![a4, v4_5, c2_5, Group::trivial(a5.identity().clone())])),
        ("S3>C2>1", chain(&s3, vec![t3, Group::trivial(s3.identity().clone())])),
        ("D8>C2>1", chain(&d8, vec![refl, Group::trivial(d8.identity().clone())])),
        ("Q8>C4>C2>1", chain(&q8, vec![c4, minus, Group::trivial(q8.identity().clone())])),
    ]
}
