//! Small concrete groups given by elements (permutations, matrices), and the
//! conversion of a solvable one into a polycyclic presentation.

use crate::pcgroup::{PcElement, PcPresentation};
use crate::{Error, Result};
use rustc_hash::{FxHashMap, FxHashSet};
use std::fmt::Debug;
use std::hash::Hash;

pub trait GroupElem: Clone + Eq + Hash + Ord + Debug {
    fn op(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn is_one(&self) -> bool;
    fn one_like(&self) -> Self;

    fn pow(&self, k: u64) -> Self {
        let mut r = self.one_like();
        for _ in 0..k {
            r = r.op(self);
        }
        r
    }

    fn order(&self) -> u64 {
        let mut k = 1;
        let mut x = self.clone();
        while !x.is_one() {
            x = x.op(self);
            k += 1;
        }
        k
    }

    fn conj_by(&self, g: &Self) -> Self {
        g.inv().op(self).op(g)
    }

    fn comm(&self, other: &Self) -> Self {
        self.inv().op(&other.inv()).op(self).op(other)
    }
}

/// Permutation of `0..n`, composed left to right: `(x·y)(i) = y(x(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(pub Vec<u16>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u16).collect())
    }

    /// From disjoint cycles on points `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[u16]]) -> Self {
        let mut v: Vec<u16> = (0..n as u16).collect();
        for c in cycles {
            for k in 0..c.len() {
                v[c[k] as usize] = c[(k + 1) % c.len()];
            }
        }
        Perm(v)
    }
}

impl GroupElem for Perm {
    fn op(&self, other: &Self) -> Self {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }
    fn inv(&self) -> Self {
        let mut v = vec![0u16; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            v[j as usize] = i as u16;
        }
        Perm(v)
    }
    fn is_one(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }
    fn one_like(&self) -> Self {
        Perm::identity(self.0.len())
    }
}

impl GroupElem for crate::linalg::FpMatrix {
    fn op(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn inv(&self) -> Self {
        self.inverse().expect("matrix group element is invertible")
    }
    fn is_one(&self) -> bool {
        self.is_identity()
    }
    fn one_like(&self) -> Self {
        crate::linalg::FpMatrix::identity(self.p(), self.rows())
    }
}

/// All elements of the group generated by `gens`, in BFS order from the identity.
pub fn closure<T: GroupElem>(one: &T, gens: &[T], budget: usize) -> Result<Vec<T>> {
    let mut seen: FxHashSet<T> = FxHashSet::default();
    let mut out = vec![one.clone()];
    seen.insert(one.clone());
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let y = out[i].op(g);
            if !seen.contains(&y) {
                if out.len() >= budget {
                    return Err(Error::CapExceeded(format!("group closure exceeds {budget} elements")));
                }
                seen.insert(y.clone());
                out.push(y);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Elements of the subgroup generated by `gens` together with a hash set for membership.
#[derive(Clone, Debug)]
pub struct ElemSet<T: GroupElem> {
    pub elems: Vec<T>,
    pub set: FxHashSet<T>,
}

impl<T: GroupElem> ElemSet<T> {
    pub fn generated(one: &T, gens: &[T], budget: usize) -> Result<Self> {
        let elems = closure(one, gens, budget)?;
        let set = elems.iter().cloned().collect();
        Ok(ElemSet { elems, set })
    }

    pub fn from_elems(elems: Vec<T>) -> Self {
        let set = elems.iter().cloned().collect();
        ElemSet { elems, set }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.set.contains(x)
    }

    /// Sorted element list, a canonical key for the subgroup.
    pub fn key(&self) -> Vec<T> {
        let mut v = self.elems.clone();
        v.sort();
        v
    }
}

/// Normal closure of `xs` under conjugation by `gens`, as an element set.
pub fn normal_closure<T: GroupElem>(one: &T, xs: &[T], gens: &[T], budget: usize) -> Result<ElemSet<T>> {
    let mut ngens: Vec<T> = Vec::new();
    let mut queue: Vec<T> = xs.iter().filter(|x| !x.is_one()).cloned().collect();
    let mut cur = ElemSet::generated(one, &ngens, budget)?;
    while let Some(x) = queue.pop() {
        if cur.contains(&x) {
            continue;
        }
        ngens.push(x.clone());
        cur = ElemSet::generated(one, &ngens, budget)?;
        for g in gens {
            queue.push(x.conj_by(g));
        }
    }
    // close again under conjugates of the final generators
    loop {
        let mut grew = false;
        for x in ngens.clone() {
            for g in gens {
                let y = x.conj_by(g);
                if !cur.contains(&y) {
                    ngens.push(y);
                    cur = ElemSet::generated(one, &ngens, budget)?;
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(cur);
        }
    }
}

/// Derived subgroup of the group generated by `gens`.
pub fn derived_subgroup<T: GroupElem>(one: &T, gens: &[T], budget: usize) -> Result<(Vec<T>, ElemSet<T>)> {
    let mut comms = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            comms.push(a.comm(b));
        }
    }
    let set = normal_closure(one, &comms, gens, budget)?;
    let dgens = small_generating_set(one, &set.elems, budget)?;
    Ok((dgens, set))
}

/// A generating set for a subgroup given by its elements, built greedily.
pub fn small_generating_set<T: GroupElem>(one: &T, elems: &[T], budget: usize) -> Result<Vec<T>> {
    let mut gens: Vec<T> = Vec::new();
    let mut cur = ElemSet::generated(one, &gens, budget)?;
    let mut sorted: Vec<&T> = elems.iter().collect();
    // prefer elements of large order so fewer generators are needed
    sorted.sort_by_key(|x| (std::cmp::Reverse(x.order()), (*x).clone()));
    for x in sorted {
        if cur.len() == elems.len() {
            break;
        }
        if !cur.contains(x) {
            gens.push(x.clone());
            cur = ElemSet::generated(one, &gens, budget)?;
        }
    }
    Ok(gens)
}

/// A solvable group of concrete elements together with a polycyclic presentation.
#[derive(Clone, Debug)]
pub struct PcModel<T: GroupElem> {
    pub pres: PcPresentation,
    /// The concrete elements corresponding to the pc generators.
    pub pcgs: Vec<T>,
    /// `series[i]` = subgroup generated by `pcgs[i..]`.
    series: Vec<FxHashSet<T>>,
    one: T,
}

impl<T: GroupElem> PcModel<T> {
    /// Builds a pc presentation refining the derived series into prime steps.
    /// Fails with `Invalid` if the group is not solvable.
    pub fn new(one: &T, gens: &[T], budget: usize) -> Result<Self> {
        let gens: Vec<T> = gens.iter().filter(|g| !g.is_one()).cloned().collect();
        let mut layers: Vec<(Vec<T>, ElemSet<T>)> = vec![(gens.clone(), ElemSet::generated(one, &gens, budget)?)];
        loop {
            let (g, s) = layers.last().unwrap();
            if s.len() == 1 {
                break;
            }
            let (dg, ds) = derived_subgroup(one, g, budget)?;
            if ds.len() == s.len() {
                return Err(Error::Invalid("group is not solvable".into()));
            }
            layers.push((dg, ds));
        }
        // bottom-up: for each abelian layer D_k / D_{k+1}, add prime-order steps
        let mut pcgs_rev: Vec<T> = Vec::new();
        let mut series_rev: Vec<FxHashSet<T>> = vec![[one.clone()].into_iter().collect()];
        for k in (0..layers.len() - 1).rev() {
            let top = &layers[k].1;
            let mut kgens: Vec<T> = layers[k + 1].0.clone();
            let mut cur = layers[k + 1].1.clone();
            let mut cands = top.elems.clone();
            cands.sort();
            while cur.len() < top.len() {
                let y = cands.iter().find(|y| !cur.contains(y)).unwrap().clone();
                // order of y modulo cur
                let mut t = 1u64;
                let mut z = y.clone();
                while !cur.contains(&z) {
                    z = z.op(&y);
                    t += 1;
                }
                let q = crate::pcgroup::factorize(t)[0].0;
                let y = y.pow(t / q);
                kgens.push(y.clone());
                cur = ElemSet::generated(one, &kgens, budget)?;
                pcgs_rev.push(y);
                series_rev.push(cur.set.clone());
            }
        }
        let pcgs: Vec<T> = pcgs_rev.into_iter().rev().collect();
        let series: Vec<FxHashSet<T>> = series_rev.into_iter().rev().collect();
        let n = pcgs.len();
        let rel: Vec<u32> = (0..n).map(|i| (series[i].len() / series[i + 1].len()) as u32).collect();
        let mut model = PcModel {
            pres: PcPresentation::trivial(),
            pcgs,
            series,
            one: one.clone(),
        };
        model.pres = PcPresentation::new_unchecked(rel.clone(), vec![vec![0; n]; n], (0..n).map(|j| vec![vec![0; n]; j]).collect())?;
        let powers: Vec<PcElement> = (0..n).map(|i| model.sift_raw(&model.pcgs[i].pow(rel[i] as u64), &rel)).collect();
        let conj: Vec<Vec<PcElement>> = (0..n)
            .map(|j| (0..j).map(|i| model.sift_raw(&model.pcgs[j].conj_by(&model.pcgs[i]), &rel)).collect())
            .collect();
        model.pres = PcPresentation::new(rel, powers, conj)?;
        Ok(model)
    }

    fn sift_raw(&self, x: &T, rel: &[u32]) -> PcElement {
        let n = self.pcgs.len();
        let mut exps = vec![0u32; n];
        let mut x = x.clone();
        for i in 0..n {
            if self.series[i + 1].contains(&x) {
                continue;
            }
            let ginv = self.pcgs[i].inv();
            let mut e = 0;
            while !self.series[i + 1].contains(&x) {
                x = ginv.op(&x);
                e += 1;
                assert!(e < rel[i], "element outside the group");
            }
            exps[i] = e;
        }
        exps
    }

    /// Exponent vector of a group element; `None` if it lies outside the group.
    pub fn sift(&self, x: &T) -> Option<PcElement> {
        if !self.series[0].contains(x) {
            return None;
        }
        Some(self.sift_raw(x, self.pres.rel_orders()))
    }

    /// The concrete element with the given exponent vector.
    pub fn element(&self, e: &[u32]) -> T {
        let mut r = self.one.clone();
        for (g, &k) in self.pcgs.iter().zip(e) {
            for _ in 0..k {
                r = r.op(g);
            }
        }
        r
    }

    pub fn contains(&self, x: &T) -> bool {
        self.series[0].contains(x)
    }

    pub fn order(&self) -> usize {
        self.series[0].len()
    }

    pub fn elements(&self) -> Vec<T> {
        let mut v: Vec<T> = self.series[0].iter().cloned().collect();
        v.sort();
        v
    }
}

/// Orbit of `point` under the group generated by `gens`, with Schreier generators of the stabilizer.
///
/// `act(x, g)` must be a right action: `act(act(x, g), h) = act(x, g·h)`.
pub fn orbit_stabilizer<T, P, A>(one: &T, gens: &[T], point: P, act: A, budget: usize) -> Result<(Vec<P>, Vec<T>)>
where
    T: GroupElem,
    P: Clone + Eq + Hash,
    A: Fn(&P, &T) -> P,
{
    let mut index: FxHashMap<P, usize> = FxHashMap::default();
    let mut orbit = vec![point.clone()];
    let mut transversal = vec![one.clone()];
    index.insert(point, 0);
    let mut i = 0;
    while i < orbit.len() {
        for g in gens {
            let y = act(&orbit[i], g);
            if !index.contains_key(&y) {
                if orbit.len() >= budget {
                    return Err(Error::OrbitBudgetExceeded(orbit.len()));
                }
                index.insert(y.clone(), orbit.len());
                orbit.push(y);
                transversal.push(transversal[i].op(g));
            }
        }
        i += 1;
    }
    let mut stab: Vec<T> = Vec::new();
    let mut seen: FxHashSet<T> = FxHashSet::default();
    for (i, x) in orbit.iter().enumerate() {
        for g in gens {
            let y = act(x, g);
            let j = index[&y];
            let s = transversal[i].op(g).op(&transversal[j].inv());
            if !s.is_one() && seen.insert(s.clone()) {
                stab.push(s);
            }
        }
    }
    Ok((orbit, stab))
}

/// Like [`orbit_stabilizer`], for a group of known order: Schreier generators are kept only
/// while they enlarge the stabilizer, until it reaches `group_order / |orbit|`. If that order
/// exceeds `stab_limit`, all distinct Schreier generators are returned instead.
pub fn orbit_stabilizer_sized<T, P, A>(
    one: &T,
    gens: &[T],
    point: P,
    act: A,
    group_order: u128,
    budget: usize,
    stab_limit: usize,
) -> Result<(Vec<P>, Vec<T>)>
where
    T: GroupElem,
    P: Clone + Eq + Hash,
    A: Fn(&P, &T) -> P,
{
    let mut index: FxHashMap<P, usize> = FxHashMap::default();
    let mut orbit = vec![point.clone()];
    let mut transversal = vec![one.clone()];
    index.insert(point, 0);
    let mut i = 0;
    while i < orbit.len() {
        for g in gens {
            let y = act(&orbit[i], g);
            if !index.contains_key(&y) {
                if orbit.len() >= budget {
                    return Err(Error::OrbitBudgetExceeded(orbit.len()));
                }
                index.insert(y.clone(), orbit.len());
                orbit.push(y);
                transversal.push(transversal[i].op(g));
            }
        }
        i += 1;
    }
    let target = group_order / orbit.len() as u128;
    let bounded = target <= stab_limit as u128;
    let mut stab: Vec<T> = Vec::new();
    let mut seen: FxHashSet<T> = FxHashSet::default();
    let mut cur = ElemSet::from_elems(vec![one.clone()]);
    'outer: for (i, x) in orbit.iter().enumerate() {
        for g in gens {
            if bounded && cur.len() as u128 >= target {
                break 'outer;
            }
            let j = index[&act(x, g)];
            let s = transversal[i].op(g).op(&transversal[j].inv());
            if s.is_one() {
                continue;
            }
            if bounded {
                if !cur.contains(&s) {
                    stab.push(s);
                    cur = ElemSet::generated(one, &stab, stab_limit)?;
                }
            } else if seen.insert(s.clone()) {
                stab.push(s);
            }
        }
    }
    Ok((orbit, stab))
}

/// Greedily drops redundant generators until the generated group reaches `target` elements.
/// Falls back to the full list if the target is not reached within the budget.
pub fn reduce_generators<T: GroupElem>(one: &T, gens: &[T], target: usize, budget: usize) -> Vec<T> {
    if target > budget {
        return gens.to_vec();
    }
    let mut kept: Vec<T> = Vec::new();
    let mut cur = ElemSet::from_elems(vec![one.clone()]);
    for g in gens {
        if cur.len() >= target {
            break;
        }
        if !cur.contains(g) {
            kept.push(g.clone());
            match ElemSet::generated(one, &kept, budget) {
                Ok(s) => cur = s,
                Err(_) => return gens.to_vec(),
            }
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4_gens() -> Vec<Perm> {
        vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]]), Perm::from_cycles(4, &[&[0, 1]])]
    }

    #[test]
    fn pc_model_of_s4() {
        let one = Perm::identity(4);
        let m = PcModel::new(&one, &s4_gens(), 1000).unwrap();
        assert_eq!(m.pres.order(), 24);
        let mut ro = m.pres.rel_orders().to_vec();
        ro.sort();
        assert_eq!(ro, vec![2, 2, 2, 3]);
        for x in m.elements() {
            let e = m.sift(&x).unwrap();
            assert_eq!(m.element(&e), x);
        }
        // multiplication agrees
        let els = m.elements();
        for a in els.iter().step_by(5) {
            for b in els.iter().step_by(7) {
                let ea = m.sift(a).unwrap();
                let eb = m.sift(b).unwrap();
                assert_eq!(m.sift(&a.op(b)).unwrap(), m.pres.mul(&ea, &eb));
            }
        }
    }

    #[test]
    fn a5_is_rejected() {
        let one = Perm::identity(5);
        let gens = vec![Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]), Perm::from_cycles(5, &[&[0, 1, 2]])];
        assert!(matches!(PcModel::new(&one, &gens, 1000), Err(Error::Invalid(_))));
    }

    #[test]
    fn orbit_stabilizer_counts() {
        let one = Perm::identity(4);
        let (orb, stab) = orbit_stabilizer(&one, &s4_gens(), 0u16, |&x, g: &Perm| g.0[x as usize], 100).unwrap();
        assert_eq!(orb.len(), 4);
        let s = ElemSet::generated(&one, &stab, 100).unwrap();
        assert_eq!(s.len(), 6);
        let red = reduce_generators(&one, &stab, 6, 100);
        assert!(red.len() <= 2);
        assert_eq!(ElemSet::generated(&one, &red, 100).unwrap().len(), 6);
        let (orb, stab) = orbit_stabilizer(&one, &[], 3u16, |&x, g: &Perm| g.0[x as usize], 100).unwrap();
        assert_eq!(orb, vec![3]);
        assert!(stab.is_empty());
    }
}
