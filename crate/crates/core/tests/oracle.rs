mod common;

use common::{bijection, Oracle};
use proptest::prelude::*;
use solvgroups::catalog::Catalog;
use solvgroups::pcgroup::examples::{cyclic, dihedral8, elementary_abelian, quaternion8};
use solvgroups::Budget;

#[test]
fn oracle_counts_small_orders() {
    let mut o = Oracle::default();
    let totals = [(1u64, 1usize), (4, 2), (6, 2), (8, 5), (12, 5), (16, 14), (18, 5), (24, 15)];
    for (n, t) in totals {
        assert_eq!(o.groups(n).len(), t, "order {n}");
    }
}

#[test]
fn oracle_contains_known_groups() {
    let mut o = Oracle::default();
    let eight = o.groups(8);
    let c4c2 = cyclic(4).direct_product(&cyclic(2));
    let known = [cyclic(8), c4c2, elementary_abelian(2, 3), dihedral8(), quaternion8()];
    assert!(bijection(&known, &eight));
}

#[test]
fn catalog_matches_oracle_up_to_24() {
    let mut oracle = Oracle::default();
    let mut cat = Catalog::new(Budget::default());
    for n in 2..=24u64 {
        let ours: Vec<_> = cat.non_nilpotent(n).unwrap().iter().map(|g| g.pres.clone()).collect();
        assert!(bijection(&ours, &oracle.non_nilpotent(n)), "order {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn catalog_entries_reverify(n in prop::sample::select(vec![6u64, 10, 12, 14, 18, 20, 21, 22])) {
        let mut cat = Catalog::new(Budget::default());
        for e in cat.entries(n).unwrap() {
            prop_assert!(e.verify().is_ok());
        }
    }
}
