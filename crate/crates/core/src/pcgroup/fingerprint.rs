use super::series::{derived_series, f_series, Quotient};
use super::table::GroupTable;
use super::{factorize, PcPresentation, PcSubgroup};
use serde::{Deserialize, Serialize};

/// Largest order for which element-order statistics are included.
pub const FINGERPRINT_TABLE_CAP: u64 = 2000;

/// Isomorphism invariants of a pc group. Equal fingerprints are necessary, not sufficient,
/// for isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: u64,
    /// Abelian invariants of the commutator factor group, as prime powers in increasing order.
    pub abelian_invariants: Vec<u64>,
    pub derived_length: usize,
    pub f_class: usize,
    pub f_rank: u64,
    pub center_order: Option<u64>,
    /// (element order, count) pairs.
    pub element_orders: Option<Vec<(u64, usize)>>,
    pub class_count: Option<usize>,
}

/// Abelian invariants of an abelian group given by an element table, from counts of
/// elements of each p-power order.
fn abelian_invariants_of_table(t: &GroupTable) -> Vec<u64> {
    let orders = t.element_orders();
    let mut out = Vec::new();
    for (p, _) in factorize(t.order() as u64) {
        // c[k] = number of elements with x^{p^k} = 1
        let mut c = vec![1usize];
        let mut pk = 1u64;
        loop {
            pk *= p;
            let n = orders.iter().filter(|&&o| pk % o == 0).count();
            if n == *c.last().unwrap() {
                break;
            }
            c.push(n);
        }
        // number of cyclic factors of order at least p^k is log_p(c[k]/c[k-1])
        let log = |x: usize| {
            let mut x = x as u64;
            let mut r = 0;
            while x > 1 {
                x /= p;
                r += 1;
            }
            r
        };
        let at_least: Vec<usize> = (1..c.len()).map(|k| log(c[k] / c[k - 1])).collect();
        for k in 0..at_least.len() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..at_least[k] - next {
                out.push(p.pow(k as u32 + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn abelian_invariants(g: &PcPresentation) -> Vec<u64> {
    let whole = PcSubgroup::whole(g);
    let d = PcSubgroup::commutator(g, &whole, &whole);
    let q = Quotient::new(g, &d);
    abelian_invariants_of_table(&GroupTable::new(&q.pres).expect("abelian quotient small enough"))
}

pub fn fingerprint(g: &PcPresentation) -> Fingerprint {
    let fs = f_series(g);
    let mut fp = Fingerprint {
        order: g.order(),
        abelian_invariants: abelian_invariants(g),
        derived_length: derived_series(g).len() - 1,
        f_class: fs.f_class,
        f_rank: fs.f_rank,
        center_order: None,
        element_orders: None,
        class_count: None,
    };
    if g.order() <= FINGERPRINT_TABLE_CAP {
        let t = GroupTable::new(g).expect("small group");
        let mut counts: std::collections::BTreeMap<u64, usize> = Default::default();
        for o in t.element_orders() {
            *counts.entry(o).or_default() += 1;
        }
        fp.element_orders = Some(counts.into_iter().collect());
        fp.class_count = Some(t.conjugacy_classes().len());
        fp.center_order = Some(t.center().len() as u64);
    }
    fp
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    #[test]
    fn distinguishes_small_groups() {
        assert_ne!(fingerprint(&dihedral8()), fingerprint(&quaternion8()));
        let a = cyclic(4).direct_product(&cyclic(2));
        assert_eq!(abelian_invariants(&a), vec![2, 4]);
        assert_eq!(abelian_invariants(&elementary_abelian(2, 3)), vec![2, 2, 2]);
        assert_ne!(fingerprint(&a), fingerprint(&elementary_abelian(2, 3)));
        assert_eq!(abelian_invariants(&symmetric4()), vec![2]);
        assert_eq!(abelian_invariants(&cyclic(12)), vec![3, 4]);
        assert_eq!(fingerprint(&symmetric4()).derived_length, 3);
    }
}
