use super::{PcElement, PcPresentation, PcSubgroup};
use crate::{Error, Result};

/// Elements of a small pc group indexed by mixed radix on exponent vectors, with
/// right-multiplication tables for the pc generators. Index 0 is the identity.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pres: PcPresentation,
    order: usize,
    strides: Vec<usize>,
    rmul: Vec<Vec<u32>>,
    inv: Vec<u32>,
    /// Full multiplication table for small orders.
    mt: Option<Vec<u32>>,
}

/// A subset of a table's elements, as a membership bitmap plus the element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemSubset {
    pub mask: Vec<bool>,
    pub elems: Vec<u32>,
}

impl ElemSubset {
    pub fn len(&self) -> usize {
        self.elems.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
    pub fn contains(&self, x: u32) -> bool {
        self.mask[x as usize]
    }
    pub fn intersect(&self, other: &ElemSubset) -> ElemSubset {
        let elems: Vec<u32> = self.elems.iter().copied().filter(|&x| other.contains(x)).collect();
        let mut mask = vec![false; self.mask.len()];
        for &x in &elems {
            mask[x as usize] = true;
        }
        ElemSubset { mask, elems }
    }
}

pub const TABLE_LIMIT: usize = 1 << 18;
const FULL_TABLE_LIMIT: usize = 1024;

impl GroupTable {
    pub fn new(pres: &PcPresentation) -> Result<Self> {
        let order = pres.order();
        if order as usize > TABLE_LIMIT {
            return Err(Error::CapExceeded(format!("group of order {order} too large for element tables")));
        }
        let order = order as usize;
        let n = pres.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * pres.rel_orders()[i + 1] as usize;
        }
        let mut t = GroupTable { pres: pres.clone(), order, strides, rmul: Vec::new(), inv: Vec::new(), mt: None };
        let elems: Vec<PcElement> = (0..order).map(|x| t.elem(x as u32)).collect();
        t.rmul = (0..n)
            .map(|i| {
                elems
                    .iter()
                    .map(|x| {
                        let mut y = x.clone();
                        pres.mul_gen_into(&mut y, i, 1);
                        t.index(&y)
                    })
                    .collect()
            })
            .collect();
        t.inv = elems.iter().map(|x| t.index(&pres.inverse(x))).collect();
        if order <= FULL_TABLE_LIMIT {
            let mut mt = vec![0u32; order * order];
            for x in 0..order {
                for y in 0..order {
                    mt[x * order + y] = t.mul_slow(x as u32, y as u32);
                }
            }
            t.mt = Some(mt);
        }
        Ok(t)
    }

    pub fn pres(&self) -> &PcPresentation {
        &self.pres
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn index(&self, x: &[u32]) -> u32 {
        x.iter().zip(&self.strides).map(|(&e, &s)| e as usize * s).sum::<usize>() as u32
    }

    pub fn elem(&self, mut idx: u32) -> PcElement {
        let mut v = vec![0u32; self.strides.len()];
        for (i, &s) in self.strides.iter().enumerate() {
            v[i] = (idx as usize / s) as u32;
            idx = (idx as usize % s) as u32;
        }
        v
    }

    fn mul_slow(&self, x: u32, y: u32) -> u32 {
        let mut z = x;
        let mut rest = y as usize;
        for (i, &s) in self.strides.iter().enumerate() {
            let e = rest / s;
            rest %= s;
            for _ in 0..e {
                z = self.rmul[i][z as usize];
            }
        }
        z
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        match &self.mt {
            Some(mt) => mt[x as usize * self.order + y as usize],
            None => self.mul_slow(x, y),
        }
    }

    pub fn rmul_gen(&self, x: u32, i: usize) -> u32 {
        self.rmul[i][x as usize]
    }

    pub fn inv(&self, x: u32) -> u32 {
        self.inv[x as usize]
    }

    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn comm(&self, x: u32, y: u32) -> u32 {
        self.mul(self.inv(self.mul(y, x)), self.mul(x, y))
    }

    pub fn pow(&self, x: u32, k: u64) -> u32 {
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, x);
        }
        r
    }

    pub fn gens(&self) -> Vec<u32> {
        (0..self.pres.len()).map(|i| self.index(&self.pres.gen(i))).collect()
    }

    pub fn element_order(&self, x: u32) -> u64 {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<u64> {
        (0..self.order as u32).map(|x| self.element_order(x)).collect()
    }

    fn subset_from(&self, elems: Vec<u32>) -> ElemSubset {
        let mut mask = vec![false; self.order];
        for &x in &elems {
            mask[x as usize] = true;
        }
        ElemSubset { mask, elems }
    }

    pub fn whole(&self) -> ElemSubset {
        self.subset_from((0..self.order as u32).collect())
    }

    pub fn trivial(&self) -> ElemSubset {
        self.subset_from(vec![0])
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> ElemSubset {
        let gens: Vec<u32> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut elems = vec![0u32];
        let mut i = 0;
        while i < elems.len() {
            for &g in &gens {
                let y = self.mul(elems[i], g);
                if !mask[y as usize] {
                    mask[y as usize] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        ElemSubset { mask, elems }
    }

    /// Closure of a known subgroup together with extra generators.
    pub fn extend(&self, base: &ElemSubset, gens: &[u32]) -> ElemSubset {
        let mut all: Vec<u32> = gens.to_vec();
        all.extend(self.generators_of(base));
        self.closure(&all)
    }

    /// Order of the subgroup generated by `gens`, stopping early once it exceeds `stop`.
    pub fn closure_size_capped(&self, gens: &[u32], stop: usize) -> usize {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut elems = vec![0u32];
        let mut i = 0;
        while i < elems.len() {
            for &g in gens {
                let y = self.mul(elems[i], g);
                if !mask[y as usize] {
                    mask[y as usize] = true;
                    elems.push(y);
                    if elems.len() > stop {
                        return elems.len();
                    }
                }
            }
            i += 1;
        }
        elems.len()
    }

    /// Smallest normal subgroup containing `xs`.
    pub fn normal_closure(&self, xs: &[u32]) -> ElemSubset {
        let pcg = self.gens();
        let mut gens: Vec<u32> = Vec::new();
        let mut cur = self.trivial();
        let mut queue: Vec<u32> = xs.to_vec();
        while let Some(x) = queue.pop() {
            if cur.contains(x) {
                continue;
            }
            gens.push(x);
            cur = self.closure(&gens);
            for &g in &gens {
                for &c in &pcg {
                    let y = self.conj(g, c);
                    if !cur.contains(y) {
                        queue.push(y);
                    }
                }
            }
        }
        cur
    }

    /// A small generating set of a subgroup (greedy).
    pub fn generators_of(&self, s: &ElemSubset) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut cur = self.trivial();
        let mut cands = s.elems.clone();
        cands.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        for x in cands {
            if cur.len() == s.len() {
                break;
            }
            if !cur.contains(x) {
                gens.push(x);
                cur = self.closure(&gens);
            }
        }
        gens
    }

    pub fn to_pc_subgroup(&self, s: &ElemSubset) -> PcSubgroup {
        let gens: Vec<PcElement> = self.generators_of(s).iter().map(|&x| self.elem(x)).collect();
        PcSubgroup::from_generators(&self.pres, &gens)
    }

    pub fn from_pc_subgroup(&self, s: &PcSubgroup) -> ElemSubset {
        let gens: Vec<u32> = s.gens().iter().map(|x| self.index(x)).collect();
        self.closure(&gens)
    }

    pub fn is_normal(&self, s: &ElemSubset) -> bool {
        let pcg = self.gens();
        self.generators_of(s).iter().all(|&x| pcg.iter().all(|&c| s.contains(self.conj(x, c))))
    }

    /// Conjugacy classes, each sorted, ordered by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let pcg = self.gens();
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order as u32 {
            if seen[x as usize] {
                continue;
            }
            let mut cls = vec![x];
            seen[x as usize] = true;
            let mut i = 0;
            while i < cls.len() {
                for &c in &pcg {
                    let y = self.conj(cls[i], c);
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        cls.push(y);
                    }
                }
                i += 1;
            }
            cls.sort_unstable();
            classes.push(cls);
        }
        classes
    }

    pub fn centralizer(&self, xs: &[u32]) -> ElemSubset {
        let elems: Vec<u32> =
            (0..self.order as u32).filter(|&g| xs.iter().all(|&x| self.mul(x, g) == self.mul(g, x))).collect();
        self.subset_from(elems)
    }

    pub fn center(&self) -> ElemSubset {
        self.centralizer(&self.gens())
    }

    pub fn normalizer(&self, s: &ElemSubset) -> ElemSubset {
        let sg = self.generators_of(s);
        let elems: Vec<u32> =
            (0..self.order as u32).filter(|&g| sg.iter().all(|&x| s.contains(self.conj(x, g)))).collect();
        self.subset_from(elems)
    }

    pub fn derived_subgroup(&self, s: &ElemSubset) -> ElemSubset {
        let g = self.generators_of(s);
        let mut comms = Vec::new();
        for &a in &g {
            for &b in &g {
                comms.push(self.comm(a, b));
            }
        }
        // normal closure inside s
        let mut gens: Vec<u32> = Vec::new();
        let mut cur = self.trivial();
        let mut queue = comms;
        while let Some(x) = queue.pop() {
            if cur.contains(x) {
                continue;
            }
            gens.push(x);
            cur = self.closure(&gens);
            for &y in &gens {
                for &c in &g {
                    let z = self.conj(y, c);
                    if !cur.contains(z) {
                        queue.push(z);
                    }
                }
            }
        }
        cur
    }

    fn is_p_power(n: usize, p: u64) -> bool {
        let mut n = n as u64;
        while n % p == 0 {
            n /= p;
        }
        n == 1
    }

    /// Largest normal p-subgroup.
    pub fn o_p(&self, p: u64) -> ElemSubset {
        let mut cur = self.trivial();
        for cls in self.conjugacy_classes() {
            let x = cls[0];
            if x == 0 || cur.contains(x) || !Self::is_p_power(self.element_order(x) as usize, p) {
                continue;
            }
            let mut gens = self.generators_of(&cur);
            gens.push(x);
            let cand = self.normal_closure(&gens);
            if Self::is_p_power(cand.len(), p) {
                cur = cand;
            }
        }
        cur
    }

    pub fn fitting(&self) -> ElemSubset {
        let mut gens = Vec::new();
        for (p, _) in super::factorize(self.order as u64) {
            gens.extend(self.generators_of(&self.o_p(p)));
        }
        self.closure(&gens)
    }

    /// A Sylow p-subgroup, grown one prime step at a time inside normalizers.
    pub fn sylow(&self, p: u64) -> ElemSubset {
        let mut target = 1usize;
        let mut n = self.order;
        while n as u64 % p == 0 {
            n /= p as usize;
            target *= p as usize;
        }
        let mut cur = self.trivial();
        while cur.len() < target {
            let nrm = self.normalizer(&cur);
            let x = nrm
                .elems
                .iter()
                .copied()
                .filter(|&x| !cur.contains(x) && Self::is_p_power(self.element_order(x) as usize, p))
                .min()
                .expect("p-element in the normalizer");
            // take a power of order p modulo cur
            let mut y = x;
            while !cur.contains(self.pow(y, p)) {
                y = self.pow(y, p);
            }
            cur = self.extend(&cur, &[y]);
        }
        cur
    }

    /// Chief series from the top: `G = C_0 > C_1 > ... > C_t = 1`.
    pub fn chief_series(&self) -> Vec<ElemSubset> {
        let mut bottom_up = vec![self.trivial()];
        loop {
            let n = bottom_up.last().unwrap();
            if n.len() == self.order {
                break;
            }
            let ngens = self.generators_of(n);
            let mut best: Option<ElemSubset> = None;
            for cls in self.conjugacy_classes() {
                let x = cls[0];
                if n.contains(x) {
                    continue;
                }
                let mut gs = ngens.clone();
                gs.push(x);
                let k = self.normal_closure(&gs);
                if best.as_ref().is_none_or(|b| k.len() < b.len()) {
                    best = Some(k);
                }
            }
            bottom_up.push(best.unwrap());
        }
        bottom_up.reverse();
        bottom_up
    }

    /// Intersection of all maximal subgroups. Every maximal subgroup of a solvable group
    /// complements exactly one chief factor of a fixed chief series, so it suffices to
    /// intersect the complements of each chief factor.
    pub fn frattini(&self) -> ElemSubset {
        if self.order == 1 {
            return self.trivial();
        }
        let series = self.chief_series();
        let ys = self.generators_of(&self.whole());
        let mut inter = self.whole();
        for i in 0..series.len() - 1 {
            let (upper, lower) = (&series[i], &series[i + 1]);
            let target = self.order / (upper.len() / lower.len());
            let lgens = self.generators_of(lower);
            // coset representatives of lower in upper
            let mut reps = Vec::new();
            let mut seen = vec![false; self.order];
            for &c in &upper.elems {
                if seen[c as usize] {
                    continue;
                }
                reps.push(c);
                for &l in &lower.elems {
                    seen[self.mul(c, l) as usize] = true;
                }
            }
            let mut choice = vec![0usize; ys.len()];
            loop {
                let mut gens = lgens.clone();
                gens.extend(ys.iter().zip(&choice).map(|(&y, &c)| self.mul(y, reps[c])));
                if self.closure_size_capped(&gens, target) == target {
                    let h = self.closure(&gens);
                    inter = inter.intersect(&h);
                }
                let mut k = ys.len();
                let mut done = true;
                while k > 0 {
                    k -= 1;
                    choice[k] += 1;
                    if choice[k] < reps.len() {
                        done = false;
                        break;
                    }
                    choice[k] = 0;
                }
                if done {
                    break;
                }
            }
        }
        inter
    }

    /// Elementary abelian quotient rank of G/G'G^p.
    pub fn frattini_rank(&self, p: u64) -> usize {
        let whole = self.whole();
        let d = self.derived_subgroup(&whole);
        let mut gens = self.generators_of(&d);
        gens.extend((0..self.order as u32).map(|x| self.pow(x, p)));
        let n = self.normal_closure(&gens);
        let mut idx = self.order / n.len();
        let mut r = 0;
        while idx > 1 {
            idx /= p as usize;
            r += 1;
        }
        r
    }

    /// Searches for a generating set of size `k` (first element over class representatives).
    pub fn find_generating_tuple(&self, k: usize) -> Option<Vec<u32>> {
        if self.order == 1 {
            return Some(vec![]);
        }
        if k == 0 {
            return None;
        }
        let whole = self.whole();
        let der = self.derived_subgroup(&whole);
        // coset ids modulo the derived subgroup
        let mut coset = vec![u32::MAX; self.order];
        let mut reps: Vec<u32> = Vec::new();
        for x in 0..self.order as u32 {
            if coset[x as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for &d in &der.elems {
                coset[self.mul(x, d) as usize] = id;
            }
        }
        let nc = reps.len();
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); nc];
        for x in 0..self.order as u32 {
            members[coset[x as usize] as usize].push(x);
        }
        let class_rep: Vec<bool> = {
            let mut v = vec![false; self.order];
            for c in self.conjugacy_classes() {
                v[c[0] as usize] = true;
            }
            v
        };
        // abelian quotient multiplication on coset ids
        let qmul = |a: u32, b: u32| coset[self.mul(reps[a as usize], reps[b as usize]) as usize];
        let gens_quotient = |cs: &[u32]| -> bool {
            let mut seen = vec![false; nc];
            seen[coset[0] as usize] = true;
            let mut list = vec![coset[0]];
            let mut i = 0;
            while i < list.len() {
                for &c in cs {
                    let y = qmul(list[i], c);
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        list.push(y);
                    }
                }
                i += 1;
            }
            list.len() == nc
        };
        // multisets of coset ids
        let mut cs = vec![0u32; k];
        loop {
            if gens_quotient(&cs) {
                if let Some(t) = self.lift_tuple(&cs, &members, &class_rep) {
                    return Some(t);
                }
            }
            // next nondecreasing tuple
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if (cs[i] as usize) + 1 < nc {
                    cs[i] += 1;
                    for j in i + 1..k {
                        cs[j] = cs[i];
                    }
                    break;
                }
            }
        }
    }

    fn lift_tuple(&self, cs: &[u32], members: &[Vec<u32>], class_rep: &[bool]) -> Option<Vec<u32>> {
        let k = cs.len();
        let firsts: Vec<u32> = members[cs[0] as usize].iter().copied().filter(|&x| class_rep[x as usize]).collect();
        let mut idx = vec![0usize; k];
        let lens: Vec<usize> =
            (0..k).map(|j| if j == 0 { firsts.len() } else { members[cs[j] as usize].len() }).collect();
        loop {
            let t: Vec<u32> =
                (0..k).map(|j| if j == 0 { firsts[idx[0]] } else { members[cs[j] as usize][idx[j]] }).collect();
            if self.closure_size_capped(&t, self.order - 1) == self.order {
                return Some(t);
            }
            let mut j = k;
            loop {
                if j == 0 {
                    return None;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < lens[j] {
                    break;
                }
                idx[j] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    #[test]
    fn fitting_and_sylow() {
        let t = GroupTable::new(&symmetric4()).unwrap();
        assert_eq!(t.fitting().len(), 4);
        assert_eq!(t.sylow(2).len(), 8);
        assert_eq!(t.sylow(3).len(), 3);
        assert_eq!(t.o_p(3).len(), 1);
        assert_eq!(t.conjugacy_classes().len(), 5);
        assert_eq!(t.chief_series().iter().map(|s| s.len()).collect::<Vec<_>>(), vec![24, 12, 4, 1]);
        let t = GroupTable::new(&symmetric3()).unwrap();
        assert_eq!(t.fitting().len(), 3);
    }

    #[test]
    fn frattini_examples() {
        assert_eq!(GroupTable::new(&symmetric4()).unwrap().frattini().len(), 1);
        assert_eq!(GroupTable::new(&cyclic(4)).unwrap().frattini().len(), 2);
        assert_eq!(GroupTable::new(&elementary_abelian(2, 3)).unwrap().frattini().len(), 1);
        assert_eq!(GroupTable::new(&dihedral8()).unwrap().frattini().len(), 2);
        assert_eq!(GroupTable::new(&quaternion8()).unwrap().frattini().len(), 2);
        assert_eq!(GroupTable::new(&cyclic(12)).unwrap().frattini().len(), 2);
    }

    #[test]
    fn generating_tuples() {
        let t = GroupTable::new(&symmetric4()).unwrap();
        assert!(t.find_generating_tuple(1).is_none());
        assert!(t.find_generating_tuple(2).is_some());
        let t = GroupTable::new(&elementary_abelian(2, 3)).unwrap();
        assert!(t.find_generating_tuple(2).is_none());
        assert!(t.find_generating_tuple(3).is_some());
        assert_eq!(t.frattini_rank(2), 3);
    }
}
