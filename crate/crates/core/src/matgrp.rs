//! Matrix groups inside `GL(d_1,p_1) × ⋯ × GL(d_r,p_r)`: conjugacy classes of solvable
//! subgroups with their normalizers, maximal normal p-subgroups, and subdirect products.

use crate::finite::{closure, normal_closure, small_generating_set, ElemSet, GroupElem};
use crate::linalg::{mul_mod, pow_mod, sub_mod, FpMatrix};
use crate::pcgroup::{divisors, factorize};
use crate::{Error, Result};
use rustc_hash::{FxHashMap, FxHashSet};
use std::collections::BTreeMap;

pub use crate::finite::orbit_stabilizer;

/// Default cap on enumerated group elements.
pub const ELEMENT_BUDGET: usize = 1_000_000;

/// An element of a direct product of matrix groups, one block per factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MatTuple(pub Vec<FpMatrix>);

impl GroupElem for MatTuple {
    fn op(&self, other: &Self) -> Self {
        MatTuple(self.0.iter().zip(&other.0).map(|(a, b)| a.mul(b)).collect())
    }
    fn inv(&self) -> Self {
        MatTuple(self.0.iter().map(|a| a.inverse().expect("invertible block")).collect())
    }
    fn is_one(&self) -> bool {
        self.0.iter().all(|a| a.is_identity())
    }
    fn one_like(&self) -> Self {
        MatTuple(self.0.iter().map(|a| FpMatrix::identity(a.p(), a.rows())).collect())
    }
}

impl MatTuple {
    pub fn identity(factors: &[(usize, u32)]) -> Self {
        MatTuple(factors.iter().map(|&(d, p)| FpMatrix::identity(p, d)).collect())
    }

    /// The element with block `m` in position `i` and identities elsewhere.
    pub fn embed(factors: &[(usize, u32)], i: usize, m: FpMatrix) -> Self {
        let mut t = Self::identity(factors);
        t.0[i] = m;
        t
    }

    /// Is every block other than `i` the identity?
    pub fn supported_on(&self, i: usize) -> bool {
        self.0.iter().enumerate().all(|(k, a)| k == i || a.is_identity())
    }
}

/// Smallest generator of the multiplicative group of GF(p).
pub fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let fs = factorize(p as u64 - 1);
    (2..p).find(|&w| fs.iter().all(|&(q, _)| pow_mod(w, (p as u64 - 1) / q, p) != 1)).unwrap()
}

/// Generators of GL(d, p): a primitive scalar in one entry, a transvection, a transposition
/// and a cyclic permutation matrix.
pub fn gl_generators(d: usize, p: u32) -> Vec<FpMatrix> {
    if d == 0 {
        return Vec::new();
    }
    let mut gens = Vec::new();
    let w = primitive_root(p);
    if w != 1 {
        let mut a = FpMatrix::identity(p, d);
        a.set(0, 0, w);
        gens.push(a);
    }
    if d >= 2 {
        let mut t = FpMatrix::identity(p, d);
        t.set(0, 1, 1);
        gens.push(t);
        let mut s = FpMatrix::zero(p, d, d);
        for i in 0..d {
            let j = match i {
                0 => 1,
                1 => 0,
                _ => i,
            };
            s.set(i, j, 1);
        }
        gens.push(s);
        if d >= 3 {
            let mut c = FpMatrix::zero(p, d, d);
            for i in 0..d {
                c.set(i, (i + 1) % d, 1);
            }
            gens.push(c);
        }
    }
    gens
}

pub fn gl_order(d: usize, p: u32) -> u128 {
    let q = p as u128;
    (0..d as u32).map(|i| q.pow(d as u32) - q.pow(i)).product()
}

/// The group `Aut(A) = GL(d_1,p_1) × ⋯ × GL(d_r,p_r)` with block generators.
#[derive(Clone, Debug)]
pub struct AutAGroup {
    pub factors: Vec<(usize, u32)>,
    pub gens: Vec<MatTuple>,
}

impl AutAGroup {
    pub fn new(factors: Vec<(usize, u32)>) -> Self {
        let mut gens = Vec::new();
        for (i, &(d, p)) in factors.iter().enumerate() {
            for g in gl_generators(d, p) {
                gens.push(MatTuple::embed(&factors, i, g));
            }
        }
        AutAGroup { factors, gens }
    }

    /// Factors for the elementary abelian decomposition of an abelian group of order ℓ
    /// with exponent the core of ℓ.
    pub fn for_rank(l: u64) -> Self {
        Self::new(factorize(l).iter().map(|&(p, e)| (e as usize, p as u32)).collect())
    }

    pub fn one(&self) -> MatTuple {
        MatTuple::identity(&self.factors)
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&(d, p)| gl_order(d, p)).product()
    }
}

/// A subgroup given by generators and its sorted element list, together with generators
/// and order of its normalizer in the ambient group.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub gens: Vec<MatTuple>,
    pub elems: Vec<MatTuple>,
    pub normalizer: Vec<MatTuple>,
    pub normalizer_order: u128,
}

impl SubgroupClass {
    pub fn order(&self) -> usize {
        self.elems.len()
    }
    pub fn contains(&self, x: &MatTuple) -> bool {
        self.elems.binary_search(x).is_ok()
    }
    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }
    pub fn one(&self) -> MatTuple {
        self.elems[0].one_like()
    }
    /// Is `x` in the normalizer? Checked on generators.
    pub fn normalized_by(&self, x: &MatTuple) -> bool {
        self.gens.iter().all(|g| self.contains(&g.conj_by(x)))
    }
}

pub type Key = Vec<MatTuple>;

fn sorted(mut v: Vec<MatTuple>) -> Key {
    v.sort();
    v
}

fn conj_key(key: &Key, g: &MatTuple) -> Key {
    let gi = g.inv();
    sorted(key.iter().map(|x| gi.op(x).op(g)).collect())
}

/// Orbit of a subgroup under conjugation and generators of its stabilizer. The stabilizer
/// is built from Schreier generators until it reaches `group_order / |orbit|`.
pub fn conjugation_orbit(
    gens: &[MatTuple],
    one: &MatTuple,
    key: &Key,
    group_order: u128,
    budget: usize,
) -> Result<(FxHashSet<Key>, Vec<MatTuple>, u128)> {
    let mut index: FxHashMap<Key, usize> = FxHashMap::default();
    let mut orbit: Vec<Key> = vec![key.clone()];
    let mut trans: Vec<MatTuple> = vec![one.clone()];
    index.insert(key.clone(), 0);
    let mut i = 0;
    while i < orbit.len() {
        for g in gens {
            let y = conj_key(&orbit[i], g);
            if !index.contains_key(&y) {
                if orbit.len() >= budget {
                    return Err(Error::OrbitBudgetExceeded(orbit.len()));
                }
                index.insert(y.clone(), orbit.len());
                orbit.push(y);
                trans.push(trans[i].op(g));
            }
        }
        i += 1;
    }
    let stab_order = group_order / orbit.len() as u128;
    if stab_order > budget as u128 {
        return Err(Error::StabilizerBudgetExceeded(stab_order as usize));
    }
    let mut stab_gens: Vec<MatTuple> = Vec::new();
    let mut stab = ElemSet::from_elems(vec![one.clone()]);
    'outer: for (i, x) in orbit.iter().enumerate() {
        for g in gens {
            if stab.len() as u128 == stab_order {
                break 'outer;
            }
            let j = index[&conj_key(x, g)];
            let s = trans[i].op(g).op(&trans[j].inv());
            if !stab.contains(&s) {
                stab_gens.push(s);
                stab = ElemSet::generated(one, &stab_gens, budget)?;
            }
        }
    }
    debug_assert_eq!(stab.len() as u128, stab_order);
    let set = orbit.into_iter().collect();
    Ok((set, stab_gens, stab_order))
}

/// Polynomials over GF(p), coefficients from low to high degree.
mod poly {
    use super::*;

    pub fn trim(mut f: Vec<u32>) -> Vec<u32> {
        while f.len() > 1 && *f.last().unwrap() == 0 {
            f.pop();
        }
        f
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let dm = m.len() - 1;
        while a.len() > dm && a.len() > 1 {
            let c = *a.last().unwrap();
            let shift = a.len() - 1 - dm;
            if c != 0 {
                for (k, &mk) in m.iter().enumerate() {
                    a[shift + k] = sub_mod(a[shift + k], mul_mod(c, mk, p), p);
                }
            }
            a.pop();
        }
        trim(if a.is_empty() { vec![0] } else { a })
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(r)
    }

    /// All monic polynomials of degree `k`.
    pub fn monic(k: usize, p: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut c = vec![0u32; k];
        loop {
            let mut f = c.clone();
            f.push(1);
            out.push(f);
            if !crate::linalg::increment(&mut c, p) {
                break;
            }
        }
        out
    }

    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        (1..=n / 2).all(|k| monic(k, p).iter().all(|g| rem(f, g, p) != vec![0]))
    }

    /// Does `f` divide `x^q - 1`?
    pub fn divides_xq_minus_1(f: &[u32], q: u64, p: u32) -> bool {
        // x^q mod f by repeated squaring
        let mut r = vec![1u32];
        let mut base = rem(&[0, 1], f, p);
        let mut e = q;
        while e > 0 {
            if e & 1 == 1 {
                r = rem(&mul(&r, &base, p), f, p);
            }
            base = rem(&mul(&base, &base, p), f, p);
            e >>= 1;
        }
        r == rem(&[1], f, p)
    }

    pub fn companion(f: &[u32], p: u32) -> FpMatrix {
        let k = f.len() - 1;
        let mut c = FpMatrix::zero(p, k, k);
        for i in 0..k - 1 {
            c.set(i, i + 1, 1);
        }
        for j in 0..k {
            c.set(k - 1, j, (p - f[j]) % p);
        }
        c
    }
}

/// Representatives of the conjugacy classes of elements of prime order `q` in GL(d, p).
pub fn prime_order_class_reps(d: usize, p: u32, q: u64) -> Vec<FpMatrix> {
    let mut out = Vec::new();
    if q == p as u64 {
        // unipotent: Jordan block partitions of d with parts at most p, not all 1
        fn parts(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rem == 0 {
                out.push(cur.clone());
                return;
            }
            for k in (1..=max.min(rem)).rev() {
                cur.push(k);
                parts(rem - k, k, cur, out);
                cur.pop();
            }
        }
        let mut ps = Vec::new();
        parts(d, p as usize, &mut Vec::new(), &mut ps);
        for part in ps.into_iter().filter(|pt| pt.iter().any(|&k| k > 1)) {
            let blocks: Vec<FpMatrix> = part
                .iter()
                .map(|&k| {
                    let mut j = FpMatrix::identity(p, k);
                    for i in 0..k - 1 {
                        j.set(i, i + 1, 1);
                    }
                    j
                })
                .collect();
            out.push(FpMatrix::block_diag(p, &blocks));
        }
        return out;
    }
    // semisimple: multisets of irreducible factors of x^q - 1 with total degree d
    let mut irr: Vec<Vec<u32>> = Vec::new();
    for k in 1..=d {
        for f in poly::monic(k, p) {
            if f[0] != 0 && poly::is_irreducible(&f, p) && poly::divides_xq_minus_1(&f, q, p) {
                irr.push(f);
            }
        }
    }
    let one = vec![p - 1, 1];
    fn choose(
        irr: &[Vec<u32>],
        start: usize,
        rem: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..irr.len() {
            let k = irr[i].len() - 1;
            if k <= rem {
                cur.push(i);
                choose(irr, i, rem - k, cur, out);
                cur.pop();
            }
        }
    }
    let mut combos = Vec::new();
    choose(&irr, 0, d, &mut Vec::new(), &mut combos);
    for c in combos {
        if c.iter().all(|&i| irr[i] == one) {
            continue;
        }
        let blocks: Vec<FpMatrix> = c.iter().map(|&i| poly::companion(&irr[i], p)).collect();
        out.push(FpMatrix::block_diag(p, &blocks));
    }
    out
}

/// Conjugacy classes of solvable subgroups of GL(d, p), computed by cyclic extension and
/// cached by order.
pub struct GlSubgroups {
    pub d: usize,
    pub p: u32,
    factors: Vec<(usize, u32)>,
    gens: Vec<MatTuple>,
    order: u128,
    budget: usize,
    classes: BTreeMap<usize, Vec<(SubgroupClass, FxHashSet<Key>)>>,
}

impl GlSubgroups {
    pub fn new(d: usize, p: u32, budget: usize) -> Self {
        let factors = vec![(d, p)];
        let gens = gl_generators(d, p).into_iter().map(|g| MatTuple(vec![g])).collect();
        GlSubgroups { d, p, factors, gens, order: gl_order(d, p), budget, classes: BTreeMap::new() }
    }

    fn one(&self) -> MatTuple {
        MatTuple::identity(&self.factors)
    }

    fn trivial_class(&self) -> SubgroupClass {
        SubgroupClass {
            gens: vec![],
            elems: vec![self.one()],
            normalizer: self.gens.clone(),
            normalizer_order: self.order,
        }
    }

    /// Classes of solvable subgroups of order exactly `m`.
    pub fn classes_of_order(&mut self, m: usize) -> Result<Vec<SubgroupClass>> {
        self.ensure(m)?;
        Ok(self.classes[&m].iter().map(|(c, _)| c.clone()).collect())
    }

    fn ensure(&mut self, m: usize) -> Result<()> {
        if self.classes.contains_key(&m) {
            return Ok(());
        }
        if m == 1 {
            let t = self.trivial_class();
            let orbit: FxHashSet<Key> = [t.elems.clone()].into_iter().collect();
            self.classes.insert(1, vec![(t, orbit)]);
            return Ok(());
        }
        if self.order % m as u128 != 0 {
            self.classes.insert(m, Vec::new());
            return Ok(());
        }
        let mut found: Vec<(SubgroupClass, FxHashSet<Key>)> = Vec::new();
        for (q, _) in factorize(m as u64) {
            let k = m / q as usize;
            self.ensure(k)?;
            let lower: Vec<SubgroupClass> = self.classes[&k].iter().map(|(c, _)| c.clone()).collect();
            for h in lower {
                for cand in self.extensions(&h, q)? {
                    if found.iter().any(|(_, orb)| orb.contains(&cand)) {
                        continue;
                    }
                    let (orbit, ngens, norder) =
                        conjugation_orbit(&self.gens, &self.one(), &cand, self.order, self.budget)?;
                    let gens = small_generating_set(&self.one(), &cand, self.budget)?;
                    found.push((SubgroupClass { gens, elems: cand, normalizer: ngens, normalizer_order: norder }, orbit));
                }
            }
        }
        found.sort_by(|a, b| a.0.elems.cmp(&b.0.elems));
        self.classes.insert(m, found);
        Ok(())
    }

    /// Subgroups `⟨H, x⟩` of order `q·|H|` with x normalizing H, one per distinct subgroup.
    fn extensions(&self, h: &SubgroupClass, q: u64) -> Result<Vec<Key>> {
        let mut seen: FxHashSet<Key> = FxHashSet::default();
        let mut out = Vec::new();
        let xs: Vec<MatTuple> = if h.is_trivial() {
            prime_order_class_reps(self.d, self.p, q).into_iter().map(|m| MatTuple(vec![m])).collect()
        } else {
            closure(&self.one(), &h.normalizer, self.budget)?
        };
        for x in xs {
            if h.contains(&x) || !h.contains(&x.pow(q)) {
                continue;
            }
            let mut elems = Vec::with_capacity(h.order() * q as usize);
            let mut xp = self.one();
            for _ in 0..q {
                for a in &h.elems {
                    elems.push(a.op(&xp));
                }
                xp = xp.op(&x);
            }
            let key = sorted(elems);
            if seen.insert(key.clone()) {
                out.push(key);
            }
        }
        Ok(out)
    }
}

/// Convenience wrapper: classes of solvable subgroups of GL(d, p) of order m.
pub fn solvable_subgroups_of_order(d: usize, p: u32, m: usize) -> Result<Vec<SubgroupClass>> {
    GlSubgroups::new(d, p, ELEMENT_BUDGET).classes_of_order(m)
}

/// Largest normal p-subgroup of the group with the given elements and generators.
pub fn max_normal_p_part<T: GroupElem>(one: &T, elems: &[T], gens: &[T], p: u64) -> Vec<T> {
    let is_p_power = |mut n: u64| {
        while n % p == 0 {
            n /= p;
        }
        n == 1
    };
    let mut cur = ElemSet::from_elems(vec![one.clone()]);
    let mut sorted_elems = elems.to_vec();
    sorted_elems.sort();
    for x in sorted_elems {
        if cur.contains(&x) || !is_p_power(x.order()) {
            continue;
        }
        let mut xs = cur.elems.clone();
        xs.push(x);
        let cand = normal_closure(one, &xs, gens, usize::MAX).expect("unbounded");
        if is_p_power(cand.len() as u64) {
            cur = cand;
        }
    }
    cur.elems
}

/// `O(U) = O_{p_1}(σ_1(U)) × ⋯ × O_{p_r}(σ_r(U))`, where `σ_i(U)` is the intersection of U
/// with the i-th factor. Returned as an element list.
pub fn compute_ou(u: &SubgroupClass, factors: &[(usize, u32)]) -> Vec<MatTuple> {
    let one = u.one();
    let mut parts: Vec<Vec<MatTuple>> = Vec::new();
    for (i, &(_, p)) in factors.iter().enumerate() {
        let sigma: Vec<MatTuple> = u.elems.iter().filter(|x| x.supported_on(i)).cloned().collect();
        let gens = small_generating_set(&one, &sigma, usize::MAX).expect("unbounded");
        // σ_i is normal in U, so conjugation by U's generators preserves O_p(σ_i); closing
        // under σ_i's own generators computes it.
        parts.push(max_normal_p_part(&one, &sigma, &gens, p as u64));
    }
    let mut out = vec![one];
    for part in parts {
        let mut next = Vec::new();
        for a in &out {
            for b in &part {
                next.push(a.op(b));
            }
        }
        out = next;
    }
    out.sort();
    out
}

pub fn is_f_relevant(u: &SubgroupClass, factors: &[(usize, u32)]) -> bool {
    compute_ou(u, factors).len() == 1
}

/// Normal subgroups of a small group, as sorted element lists.
pub fn normal_subgroups<T: GroupElem>(one: &T, elems: &[T], gens: &[T]) -> Vec<Vec<T>> {
    let mut subs: Vec<ElemSet<T>> = Vec::new();
    let mut keys: FxHashSet<Vec<T>> = FxHashSet::default();
    let mut push = |s: ElemSet<T>, subs: &mut Vec<ElemSet<T>>| {
        let k = s.key();
        if keys.insert(k) {
            subs.push(s);
        }
    };
    push(ElemSet::from_elems(vec![one.clone()]), &mut subs);
    for x in elems {
        let s = normal_closure(one, &[x.clone()], gens, usize::MAX).expect("unbounded");
        push(s, &mut subs);
    }
    let mut i = 0;
    while i < subs.len() {
        for j in 0..i {
            let mut xs = small_generating_set(one, &subs[i].elems, usize::MAX).expect("unbounded");
            xs.extend(small_generating_set(one, &subs[j].elems, usize::MAX).expect("unbounded"));
            let s = ElemSet::generated(one, &xs, usize::MAX).expect("unbounded");
            push(s, &mut subs);
        }
        i += 1;
    }
    let mut out: Vec<Vec<T>> = subs.into_iter().map(|s| s.key()).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Coset structure of `P/N`: coset id per element and multiplication of ids.
struct CosetQuotient {
    id: FxHashMap<MatTuple, usize>,
    reps: Vec<MatTuple>,
    members: Vec<Vec<MatTuple>>,
}

impl CosetQuotient {
    fn new(elems: &[MatTuple], n: &[MatTuple]) -> Self {
        let mut id = FxHashMap::default();
        let mut reps = Vec::new();
        let mut members = Vec::new();
        for x in elems {
            if id.contains_key(x) {
                continue;
            }
            let c = reps.len();
            reps.push(x.clone());
            let mem: Vec<MatTuple> = n.iter().map(|k| x.op(k)).collect();
            for y in &mem {
                id.insert(y.clone(), c);
            }
            members.push(mem);
        }
        CosetQuotient { id, reps, members }
    }
    fn len(&self) -> usize {
        self.reps.len()
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.id[&self.reps[a].op(&self.reps[b])]
    }
    fn order(&self, a: usize) -> usize {
        let e = self.id[&self.reps[0].one_like()];
        let mut k = 1;
        let mut x = a;
        while x != e {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// All isomorphisms between two small quotient groups, as maps on coset ids.
fn quotient_isomorphisms(q1: &CosetQuotient, gens1: &[usize], q2: &CosetQuotient) -> Vec<Vec<usize>> {
    let n = q1.len();
    let e1 = q1.id[&q1.reps[0].one_like()];
    let e2 = q2.id[&q2.reps[0].one_like()];
    let cands: Vec<Vec<usize>> =
        gens1.iter().map(|&g| (0..q2.len()).filter(|&y| q2.order(y) == q1.order(g)).collect()).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; gens1.len()];
    if cands.iter().any(|c| c.is_empty()) {
        return out;
    }
    loop {
        let images: Vec<usize> = idx.iter().zip(&cands).map(|(&i, c)| c[i]).collect();
        // extend along a breadth-first spanning tree and check consistency
        let mut map = vec![usize::MAX; n];
        map[e1] = e2;
        let mut queue = vec![e1];
        let mut ok = true;
        let mut i = 0;
        while i < queue.len() && ok {
            let x = queue[i];
            for (g, &im) in gens1.iter().zip(&images) {
                let y = q1.mul(x, *g);
                let v = q2.mul(map[x], im);
                if map[y] == usize::MAX {
                    map[y] = v;
                    queue.push(y);
                } else if map[y] != v {
                    ok = false;
                    break;
                }
            }
            i += 1;
        }
        if ok {
            let mut hit = vec![false; q2.len()];
            for &v in &map {
                hit[v] = true;
            }
            if hit.iter().all(|&h| h) {
                out.push(map);
            }
        }
        let mut k = idx.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < cands[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Classes of subdirect products `U ≤ P_1 × P_2` under conjugation by
/// `R = N(P_1) × N(P_2)`, with normalizers in R. The factors must have disjoint block
/// support. With `order`, only subgroups of that order are produced.
pub fn subdirect_products(
    p1: &SubgroupClass,
    p2: &SubgroupClass,
    order: Option<usize>,
    budget: usize,
) -> Result<Vec<SubgroupClass>> {
    let one = p1.one();
    let mut rgens = p1.normalizer.clone();
    rgens.extend(p2.normalizer.iter().cloned());
    let r_order = p1.normalizer_order * p2.normalizer_order;
    let full = p1.order() * p2.order();
    let product = |a: &[MatTuple], b: &[MatTuple]| -> Key {
        sorted(a.iter().flat_map(|x| b.iter().map(move |y| x.op(y))).collect())
    };
    if p1.is_trivial() || p2.is_trivial() {
        if order.is_some_and(|o| o != full) {
            return Ok(Vec::new());
        }
        let mut gens = p1.gens.clone();
        gens.extend(p2.gens.iter().cloned());
        return Ok(vec![SubgroupClass {
            gens,
            elems: product(&p1.elems, &p2.elems),
            normalizer: rgens,
            normalizer_order: r_order,
        }]);
    }
    let n1s = normal_subgroups(&one, &p1.elems, &p1.gens);
    let n2s = normal_subgroups(&one, &p2.elems, &p2.gens);
    let mut found: Vec<(SubgroupClass, FxHashSet<Key>)> = Vec::new();
    for n1 in &n1s {
        for n2 in &n2s {
            if p1.order() / n1.len() != p2.order() / n2.len() {
                continue;
            }
            let size = p1.order() * n2.len();
            if order.is_some_and(|o| o != size) {
                continue;
            }
            let q1 = CosetQuotient::new(&p1.elems, n1);
            let q2 = CosetQuotient::new(&p2.elems, n2);
            let gens1: Vec<usize> = {
                let mut v: Vec<usize> = p1.gens.iter().map(|g| q1.id[g]).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            for theta in quotient_isomorphisms(&q1, &gens1, &q2) {
                let mut elems = Vec::with_capacity(size);
                for (c, mem) in q1.members.iter().enumerate() {
                    for a in mem {
                        for b in &q2.members[theta[c]] {
                            elems.push(a.op(b));
                        }
                    }
                }
                let key = sorted(elems);
                if found.iter().any(|(_, orb)| orb.contains(&key)) {
                    continue;
                }
                let (orbit, ngens, norder) = conjugation_orbit(&rgens, &one, &key, r_order, budget)?;
                let gens = small_generating_set(&one, &key, budget)?;
                found.push((SubgroupClass { gens, elems: key, normalizer: ngens, normalizer_order: norder }, orbit));
            }
        }
    }
    let mut out: Vec<SubgroupClass> = found.into_iter().map(|(c, _)| c).collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then(a.elems.cmp(&b.elems)));
    Ok(out)
}

/// Embeds a class of GL(d_i, p_i) as a class of the product group.
pub fn embed_class(c: &SubgroupClass, factors: &[(usize, u32)], i: usize) -> SubgroupClass {
    let e = |x: &MatTuple| MatTuple::embed(factors, i, x.0[0].clone());
    SubgroupClass {
        gens: c.gens.iter().map(e).collect(),
        elems: sorted(c.elems.iter().map(e).collect()),
        normalizer: c.normalizer.iter().map(e).collect(),
        normalizer_order: c.normalizer_order,
    }
}

/// Classes of solvable subgroups of order `m` in `Aut(A)`, assembled as iterated
/// subdirect products of classes in the factors; with `relevant_only`, those with
/// `O(U) = 1`.
pub fn solvable_subgroups_of_product(
    factors: &[(usize, u32)],
    m: usize,
    cache: &mut [GlSubgroups],
    relevant_only: bool,
    budget: usize,
) -> Result<Vec<SubgroupClass>> {
    let r = factors.len();
    let divs: Vec<usize> = divisors(m as u64).into_iter().map(|d| d as usize).collect();
    let factor_classes = |i: usize, cache: &mut [GlSubgroups]| -> Result<Vec<SubgroupClass>> {
        let mut v = Vec::new();
        for &k in &divs {
            for c in cache[i].classes_of_order(k)? {
                v.push(embed_class(&c, factors, i));
            }
        }
        Ok(v)
    };
    let mut partial = factor_classes(0, cache)?;
    for i in 1..r {
        let next_factor = factor_classes(i, cache)?;
        let mut next = Vec::new();
        for x in &partial {
            for y in &next_factor {
                if i + 1 == r {
                    next.extend(subdirect_products(x, y, Some(m), budget)?);
                } else {
                    for u in subdirect_products(x, y, None, budget)? {
                        if m % u.order() == 0 {
                            next.push(u);
                        }
                    }
                }
            }
        }
        partial = next;
    }
    let mut out: Vec<SubgroupClass> = partial.into_iter().filter(|u| u.order() == m).collect();
    if relevant_only {
        out.retain(|u| is_f_relevant(u, factors));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::orbit_stabilizer;

    fn m(p: u32, rows: &[&[u32]]) -> FpMatrix {
        let v: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
        FpMatrix::from_rows(p, v[0].len(), &v)
    }

    #[test]
    fn gl_generators_generate() {
        for (d, p) in [(1, 3), (1, 5), (2, 2), (2, 3), (3, 2)] {
            let g = gl_generators(d, p);
            let els = closure(&FpMatrix::identity(p, d), &g, 100_000).unwrap();
            assert_eq!(els.len() as u128, gl_order(d, p));
        }
    }

    #[test]
    fn orbit_stabilizer_examples() {
        let gens = gl_generators(2, 2);
        let one = FpMatrix::identity(2, 2);
        let (orbit, stab) =
            orbit_stabilizer(&one, &gens, vec![1u32, 0], |v: &Vec<u32>, g: &FpMatrix| g.vec_mul(v), 100).unwrap();
        assert_eq!(orbit.len(), 3);
        assert_eq!(closure(&one, &stab, 100).unwrap().len(), 2);
        let minus = vec![m(5, &[&[4]])];
        let (orbit, stab) =
            orbit_stabilizer(&FpMatrix::identity(5, 1), &minus, 1u32, |x: &u32, g: &FpMatrix| g.vec_mul(&[*x])[0], 10)
                .unwrap();
        assert_eq!(orbit.len(), 2);
        assert!(stab.is_empty());
        let (orbit, stab) = orbit_stabilizer(&one, &[], 7u32, |x: &u32, _: &FpMatrix| *x, 10).unwrap();
        assert_eq!((orbit.len(), stab.len()), (1, 0));
    }

    #[test]
    fn prime_order_classes() {
        // GL(2,2) ≅ S3: one class of involutions, one class of elements of order 3
        assert_eq!(prime_order_class_reps(2, 2, 2).len(), 1);
        assert_eq!(prime_order_class_reps(2, 2, 3).len(), 1);
        // GL(4,2) ≅ A8: involution classes (2^2 1^4), (2^4) in A8 correspond to Jordan types 2+1+1, 2+2
        assert_eq!(prime_order_class_reps(4, 2, 2).len(), 2);
        for x in prime_order_class_reps(4, 2, 3) {
            assert_eq!(x.order(), 3);
        }
    }

    #[test]
    fn subgroup_classes_small() {
        // GL(2,3) has order 48; classes of subgroups of order 2: central -I and a reflection
        assert_eq!(solvable_subgroups_of_order(2, 3, 2).unwrap().len(), 2);
        // S3 = GL(2,2): one class each of order 1, 2, 3, 6
        for (k, c) in [(1, 1), (2, 1), (3, 1), (6, 1)] {
            assert_eq!(solvable_subgroups_of_order(2, 2, k).unwrap().len(), c);
        }
        // GL(3,2) of order 168: Sylow 2-subgroups form one class
        assert_eq!(solvable_subgroups_of_order(3, 2, 8).unwrap().len(), 1);
        // GL(3,2): two classes of Klein four-groups and one of cyclic groups of order 4
        assert_eq!(solvable_subgroups_of_order(3, 2, 4).unwrap().len(), 3);
    }

    #[test]
    fn normalizers_normalize() {
        for c in solvable_subgroups_of_order(3, 2, 6).unwrap() {
            assert!(c.normalizer.iter().all(|g| c.normalized_by(g)));
            let n = closure(&c.one(), &c.normalizer, 1000).unwrap();
            assert_eq!(n.len() as u128, c.normalizer_order);
            // nothing outside the normalizer normalizes
            let all = closure(&c.one(), &GlSubgroups::new(3, 2, 1000).gens, 1000).unwrap();
            let count = all.iter().filter(|g| c.normalized_by(g)).count();
            assert_eq!(count as u128, c.normalizer_order);
        }
    }

    #[test]
    fn o_p_of_s3() {
        let gens: Vec<FpMatrix> = gl_generators(2, 2);
        let one = FpMatrix::identity(2, 2);
        let els = closure(&one, &gens, 100).unwrap();
        assert_eq!(max_normal_p_part(&one, &els, &gens, 2).len(), 1);
        assert_eq!(max_normal_p_part(&one, &els, &gens, 3).len(), 3);
    }

    #[test]
    fn subdirect_of_two_c2() {
        let factors = vec![(1, 3), (1, 5)];
        let a = MatTuple::embed(&factors, 0, m(3, &[&[2]]));
        let b = MatTuple::embed(&factors, 1, m(5, &[&[4]]));
        let one = MatTuple::identity(&factors);
        let g = AutAGroup::new(factors.clone());
        let mk = |x: &MatTuple, i: usize| SubgroupClass {
            gens: vec![x.clone()],
            elems: sorted(vec![one.clone(), x.clone()]),
            normalizer: g.gens.iter().filter(|h| h.supported_on(i)).cloned().collect(),
            normalizer_order: [2u128, 4][i],
        };
        let s = subdirect_products(&mk(&a, 0), &mk(&b, 1), None, 1000).unwrap();
        assert_eq!(s.iter().map(|c| c.order()).collect::<Vec<_>>(), vec![2, 4]);
        let triv = SubgroupClass { gens: vec![], elems: vec![one.clone()], normalizer: vec![], normalizer_order: 1 };
        assert_eq!(subdirect_products(&triv, &triv, None, 10).unwrap().len(), 1);
    }
}

#[cfg(test)]
mod larger_tests {
    use super::*;

    #[test]
    fn gl42_and_gl52_counts() {
        let mut g = GlSubgroups::new(4, 2, ELEMENT_BUDGET);
        let six = g.classes_of_order(6).unwrap();
        // three classes of S3 and two of C6; only the S3 classes have O_2(U) = 1
        let relevant: Vec<_> = six.iter().filter(|c| is_f_relevant(c, &[(4, 2)])).collect();
        assert_eq!(relevant.len(), 3);
        for c in relevant {
            assert!(c.elems.iter().all(|x| x.order() != 6));
        }
        assert_eq!(six.len(), 5);
        assert_eq!(g.classes_of_order(2).unwrap().len(), 2);
        assert_eq!(solvable_subgroups_of_order(5, 2, 3).unwrap().len(), 2);
    }
}
