use super::{PcElement, PcPresentation};
use crate::{Error, Result};

/// A subgroup given by its canonical induced generating sequence: one generator per
/// depth in the subgroup, leading exponent 1, zero exponents at the other depths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PcSubgroup {
    gens: Vec<PcElement>,
}

/// Sifting table indexed by depth.
struct Table<'a> {
    g: &'a PcPresentation,
    rows: Vec<Option<PcElement>>,
}

impl<'a> Table<'a> {
    fn new(g: &'a PcPresentation) -> Self {
        Table { g, rows: vec![None; g.len()] }
    }

    fn from_subgroup(g: &'a PcPresentation, s: &PcSubgroup) -> Self {
        let mut t = Table::new(g);
        for h in &s.gens {
            let d = g.depth(h);
            t.rows[d] = Some(h.clone());
        }
        t
    }

    /// Reduces x; returns the remainder (identity iff x is in the span).
    fn sift(&self, x: &[u32]) -> PcElement {
        let mut x = x.to_vec();
        loop {
            let d = self.g.depth(&x);
            if d == self.g.len() {
                return x;
            }
            match &self.rows[d] {
                Some(h) => {
                    let k = self.g.rel_orders()[d] - x[d];
                    for _ in 0..k {
                        x = self.g.mul(&x, h);
                    }
                }
                None => return x,
            }
        }
    }

    /// Inserts the sifted remainder if nontrivial, normalized to leading exponent 1.
    /// Returns the new row and, when normalizing changed it, the raw remainder, whose
    /// deeper part may not lie in the span of the new row.
    fn insert(&mut self, x: &[u32]) -> Option<(PcElement, Option<PcElement>)> {
        let r = self.sift(x);
        let d = self.g.depth(&r);
        if d == self.g.len() {
            return None;
        }
        let p = self.g.rel_orders()[d];
        let k = crate::linalg::inv_mod(r[d], p);
        let y = self.g.pow(&r, k as u64);
        debug_assert_eq!(y[d], 1);
        self.rows[d] = Some(y.clone());
        Some((y, (k != 1).then_some(r)))
    }

    /// Closes under relative-order powers and commutators; with `conj_gens`, also
    /// under conjugation by those elements.
    fn close(&mut self, mut queue: Vec<PcElement>, conj_gens: &[PcElement]) {
        while let Some(x) = queue.pop() {
            let Some((y, raw)) = self.insert(&x) else { continue };
            queue.extend(raw);
            let d = self.g.depth(&y);
            queue.push(self.g.pow(&y, self.g.rel_orders()[d] as u64));
            for z in self.rows.iter().flatten() {
                if *z != y {
                    queue.push(self.g.comm(&y, z));
                }
            }
            for c in conj_gens {
                queue.push(self.g.comm(&y, c));
            }
        }
    }

    fn into_subgroup(self) -> PcSubgroup {
        let g = self.g;
        let mut gens: Vec<PcElement> = self.rows.into_iter().flatten().collect();
        let depths: Vec<usize> = gens.iter().map(|h| g.depth(h)).collect();
        for i in (0..gens.len()).rev() {
            let mut y = gens[i].clone();
            for j in i + 1..gens.len() {
                let d = depths[j];
                if y[d] != 0 {
                    let k = g.rel_orders()[d] - y[d];
                    for _ in 0..k {
                        y = g.mul(&y, &gens[j]);
                    }
                }
            }
            gens[i] = y;
        }
        PcSubgroup { gens }
    }
}

impl PcSubgroup {
    pub fn trivial() -> Self {
        PcSubgroup { gens: Vec::new() }
    }

    pub fn whole(g: &PcPresentation) -> Self {
        PcSubgroup { gens: (0..g.len()).map(|i| g.gen(i)).collect() }
    }

    pub fn from_generators(g: &PcPresentation, gens: &[PcElement]) -> Self {
        let mut t = Table::new(g);
        t.close(gens.to_vec(), &[]);
        t.into_subgroup()
    }

    /// Smallest normal subgroup of `g` containing `gens`.
    pub fn normal_closure(g: &PcPresentation, gens: &[PcElement]) -> Self {
        let pcgens: Vec<PcElement> = (0..g.len()).map(|i| g.gen(i)).collect();
        let mut t = Table::new(g);
        t.close(gens.to_vec(), &pcgens);
        t.into_subgroup()
    }

    /// Normal closure of `gens` under conjugation by `by`.
    pub fn normal_closure_under(g: &PcPresentation, gens: &[PcElement], by: &[PcElement]) -> Self {
        let mut t = Table::new(g);
        t.close(gens.to_vec(), by);
        t.into_subgroup()
    }

    /// Subgroup generated by `self` and extra elements.
    pub fn join(&self, g: &PcPresentation, extra: &[PcElement]) -> Self {
        let mut t = Table::from_subgroup(g, self);
        t.close(extra.to_vec(), &[]);
        t.into_subgroup()
    }

    /// Normal subgroup generated by `self` and extra elements (assumes `self` normal).
    pub fn normal_join(&self, g: &PcPresentation, extra: &[PcElement]) -> Self {
        let pcgens: Vec<PcElement> = (0..g.len()).map(|i| g.gen(i)).collect();
        let mut t = Table::from_subgroup(g, self);
        t.close(extra.to_vec(), &pcgens);
        t.into_subgroup()
    }

    pub fn gens(&self) -> &[PcElement] {
        &self.gens
    }

    pub fn depths(&self, g: &PcPresentation) -> Vec<usize> {
        self.gens.iter().map(|h| g.depth(h)).collect()
    }

    pub fn order(&self, g: &PcPresentation) -> u64 {
        self.depths(g).iter().map(|&d| g.rel_orders()[d] as u64).product()
    }

    pub fn order_u128(&self, g: &PcPresentation) -> u128 {
        self.depths(g).iter().map(|&d| g.rel_orders()[d] as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, g: &PcPresentation, x: &[u32]) -> bool {
        PcPresentation::is_identity(&Table::from_subgroup(g, self).sift(x))
    }

    pub fn contains_subgroup(&self, g: &PcPresentation, other: &PcSubgroup) -> bool {
        let t = Table::from_subgroup(g, self);
        other.gens.iter().all(|h| PcPresentation::is_identity(&t.sift(h)))
    }

    pub fn is_normal(&self, g: &PcPresentation) -> bool {
        let t = Table::from_subgroup(g, self);
        self.gens.iter().all(|h| (0..g.len()).all(|i| PcPresentation::is_identity(&t.sift(&g.conj(h, &g.gen(i))))))
    }

    /// Is `self` normalized by every element of `by`?
    pub fn is_normalized_by(&self, g: &PcPresentation, by: &[PcElement]) -> bool {
        let t = Table::from_subgroup(g, self);
        self.gens.iter().all(|h| by.iter().all(|c| PcPresentation::is_identity(&t.sift(&g.conj(h, c)))))
    }

    /// `[A, B]` for subgroups normal in `g`.
    pub fn commutator(g: &PcPresentation, a: &PcSubgroup, b: &PcSubgroup) -> Self {
        let mut cs = Vec::new();
        for x in &a.gens {
            for y in &b.gens {
                cs.push(g.comm(x, y));
            }
        }
        Self::normal_closure(g, &cs)
    }

    /// Subgroup generated by all k-th powers of elements of `self`, computed by enumeration.
    pub fn agemo(&self, g: &PcPresentation, k: u64) -> Self {
        let pw: Vec<PcElement> = self.elements(g).iter().map(|x| g.pow(x, k)).collect();
        Self::from_generators(g, &pw)
    }

    /// All elements, enumerated as normal words in the induced sequence.
    pub fn elements(&self, g: &PcPresentation) -> Vec<PcElement> {
        let mut out = vec![g.identity()];
        for h in self.gens.iter().rev() {
            let d = g.depth(h);
            let p = g.rel_orders()[d];
            let mut next = Vec::with_capacity(out.len() * p as usize);
            let mut hp = g.identity();
            for _ in 0..p {
                for x in &out {
                    next.push(g.mul(&hp, x));
                }
                hp = g.mul(&hp, h);
            }
            out = next;
        }
        out
    }

    /// Intersection with the segment of generators at depth `>= k`, which is a subgroup
    /// whenever the segment is.
    pub fn intersect_tail(&self, g: &PcPresentation, k: usize) -> Self {
        PcSubgroup { gens: self.gens.iter().filter(|h| g.depth(h) >= k).cloned().collect() }
    }

    /// Exponents of x relative to the induced sequence, if x lies in the subgroup.
    pub fn exponents(&self, g: &PcPresentation, x: &[u32]) -> Option<Vec<u32>> {
        let mut x = x.to_vec();
        let mut exps = vec![0; self.gens.len()];
        // x = h_1^{e_1} ... h_k^{e_k}: peel off from the left
        for (i, h) in self.gens.iter().enumerate() {
            let d = g.depth(h);
            if g.depth(&x) < d {
                return None;
            }
            let e = x[d];
            exps[i] = e;
            if e != 0 {
                let hinv = g.inverse(&g.pow(h, e as u64));
                x = g.mul(&hinv, &x);
            }
        }
        if PcPresentation::is_identity(&x) {
            Some(exps)
        } else {
            None
        }
    }

    /// Errors with `NotNormal` unless normal in `g`.
    pub fn require_normal(&self, g: &PcPresentation) -> Result<()> {
        if self.is_normal(g) {
            Ok(())
        } else {
            Err(Error::NotNormal)
        }
    }

    /// Canonical representative of the coset `xN`: zero exponents at the depths of N.
    pub fn reduce_mod(&self, g: &PcPresentation, x: &[u32]) -> PcElement {
        let mut y = x.to_vec();
        for h in &self.gens {
            let d = g.depth(h);
            if y[d] != 0 {
                let k = g.rel_orders()[d] - y[d];
                for _ in 0..k {
                    y = g.mul(&y, h);
                }
            }
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    #[test]
    fn cyclic_subgroups_have_element_order() {
        let c3c4 = cyclic(3).direct_product(&cyclic(4));
        let groups = [cyclic(12), cyclic(36), c3c4.direct_product(&symmetric3()), quaternion8().direct_product(&cyclic(3)), dihedral(12)];
        for g in &groups {
            for x in PcSubgroup::whole(g).elements(g) {
                let s = PcSubgroup::from_generators(g, &[x.clone()]);
                assert_eq!(s.order(g), g.element_order(&x), "{x:?}");
            }
        }
    }

    #[test]
    fn closure_orders() {
        let g = symmetric4();
        assert_eq!(PcSubgroup::whole(&g).order(&g), 24);
        for x in PcSubgroup::whole(&g).elements(&g) {
            let s = PcSubgroup::from_generators(&g, &[x.clone()]);
            assert_eq!(s.order(&g), g.element_order(&x));
        }
        let derived = PcSubgroup::commutator(&g, &PcSubgroup::whole(&g), &PcSubgroup::whole(&g));
        assert_eq!(derived.order(&g), 12);
        let d2 = PcSubgroup::commutator(&g, &derived, &derived);
        assert_eq!(d2.order(&g), 4);
        assert!(d2.is_normal(&g));
    }

    #[test]
    fn canonical_form_is_unique() {
        let g = symmetric4();
        let els = PcSubgroup::whole(&g).elements(&g);
        // the same subgroup from different generating sets
        let a = PcSubgroup::from_generators(&g, &[els[3].clone(), els[7].clone()]);
        let more: Vec<PcElement> = a.elements(&g).into_iter().rev().collect();
        let b = PcSubgroup::from_generators(&g, &more);
        assert_eq!(a, b);
    }

    #[test]
    fn exponents_roundtrip() {
        let g = dihedral(6);
        let s = PcSubgroup::whole(&g);
        for x in s.elements(&g) {
            let e = s.exponents(&g, &x).unwrap();
            let mut y = g.identity();
            for (h, k) in s.gens().iter().zip(&e) {
                y = g.mul(&y, &g.pow(h, *k as u64));
            }
            assert_eq!(y, x);
        }
    }
}
