mod common;

use std::sync::OnceLock;

use chainforge::chains::{conjugate_chain, stability_report, GroupChain};
use chainforge::groups::{core, quotient, Group};
use chainforge::profinite::FamilySpec;
use chainforge::taileq::{
    family_sequence_explicit, family_sequence_structural, family_tail_decide, interleaving_search, verify_witness,
};
use common::*;
use proptest::prelude::*;

struct Corpus {
    groups: Vec<(&'static str, Group, Vec<Group>)>,
    chains: Vec<(&'static str, GroupChain)>,
}

fn corpus_data() -> &'static Corpus {
    static C: OnceLock<Corpus> = OnceLock::new();
    C.get_or_init(|| Corpus {
        groups: corpus()
            .into_iter()
            .map(|(n, g)| {
                let subs = all_subgroups(&g);
                (n, g, subs)
            })
            .collect(),
        chains: corpus_chains(),
    })
}

const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn bits(len: usize) -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(1u8..=2, len)
}

fn family(bits: Vec<u8>) -> FamilySpec {
    FamilySpec::new(PRIMES[..bits.len()].to_vec(), bits).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn core_matches_oracle_and_is_largest_normal(gi in 0usize..5, hi in 0usize..1000) {
        let (_, g, subs) = &corpus_data().groups[gi];
        let h = &subs[hi % subs.len()];
        let c = core(g, h).unwrap();
        prop_assert_eq!(as_set(&c), brute_core(g, h));
        prop_assert!(c.is_normal_in(g).unwrap());
        prop_assert!(c.is_subgroup_of(h).unwrap());
        for n in subs.iter().filter(|n| n.is_normal_in(g).unwrap() && n.is_subgroup_of(h).unwrap()) {
            prop_assert!(n.is_subgroup_of(&c).unwrap());
        }
    }

    #[test]
    fn subgroup_orders_divide(gi in 0usize..5, hi in 0usize..1000) {
        let (_, g, subs) = &corpus_data().groups[gi];
        let h = &subs[hi % subs.len()];
        prop_assert_eq!(g.order().unwrap() % h.order().unwrap(), 0);
        prop_assert_eq!(h.order().unwrap() as usize, as_set(h).len());
    }

    #[test]
    fn quotient_by_core_has_the_right_order(gi in 0usize..5, hi in 0usize..1000) {
        let (_, g, subs) = &corpus_data().groups[gi];
        let c = core(g, &subs[hi % subs.len()]).unwrap().into_group();
        let (q, pi) = quotient(g, &c).unwrap();
        prop_assert_eq!(q.order().unwrap() * c.order().unwrap(), g.order().unwrap());
        prop_assert_eq!(pi.kernel().unwrap().order().unwrap(), c.order().unwrap());
    }

    #[test]
    fn conjugation_preserves_reports(ci in 0usize..100, gi in 0usize..1000) {
        let (_, chain) = &corpus_data().chains[ci % corpus_data().chains.len()];
        let els = elements(chain.base());
        let conj = conjugate_chain(chain, &els[gi % els.len()]).unwrap();
        let (a, b) = (stability_report(chain).unwrap(), stability_report(&conj).unwrap());
        prop_assert_eq!(a.records, b.records);
        prop_assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn family_sequence_orders(b in bits(8)) {
        let seq = family_sequence_structural(&family(b.clone()), 8).unwrap();
        let kernels = seq.kernel_orders().unwrap();
        for i in 0..7 {
            prop_assert_eq!(seq.order(i).unwrap() % seq.order(i + 1).unwrap(), 0);
            prop_assert_eq!(kernels[i], (PRIMES[i] as u128).pow(b[i] as u32));
        }
        prop_assert_eq!(seq.order(0).unwrap(), kernels.iter().product::<u128>() * seq.order(7).unwrap());
    }

    #[test]
    fn decision_is_symmetric_and_matches_search(l in bits(8), r in bits(8), from in 0usize..8, share in any::<bool>()) {
        let mut r = r;
        if share {
            r[from..].copy_from_slice(&l[from..]);
        }
        let (f1, f2) = (family(l.clone()), family(r.clone()));
        let v12 = family_tail_decide(&f1, &f2, None).unwrap();
        let v21 = family_tail_decide(&f2, &f1, None).unwrap();
        prop_assert_eq!(v12.is_equivalent(), v21.is_equivalent());
        prop_assert_eq!(v12.is_equivalent(), l[7] == r[7]);

        let (a, b) = (family_sequence_structural(&f1, 8).unwrap(), family_sequence_structural(&f2, 8).unwrap());
        let ab = interleaving_search(&a, &b, 100_000).unwrap();
        let ba = interleaving_search(&b, &a, 100_000).unwrap();
        prop_assert_eq!(ab.witness().is_some(), v12.is_equivalent());
        prop_assert_eq!(ba.witness().is_some(), v12.is_equivalent());
        if let Some(w) = ab.witness() {
            prop_assert!(verify_witness(&a, &b, w).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn explicit_and_structural_sequences_agree(l in bits(3), r in bits(3)) {
        let (f1, f2) = (family(l.clone()), family(r.clone()));
        let (ea, eb) = (family_sequence_explicit(&f1, 3).unwrap(), family_sequence_explicit(&f2, 3).unwrap());
        let sa = family_sequence_structural(&f1, 3).unwrap();
        prop_assert_eq!(ea.kernel_orders().unwrap(), sa.kernel_orders().unwrap());
        let out = interleaving_search(&ea, &eb, 100_000).unwrap();
        prop_assert_eq!(out.witness().is_some(), l[2] == r[2]);
        if let Some(w) = out.witness() {
            prop_assert!(verify_witness(&ea, &eb, w).unwrap());
        }
    }
}
