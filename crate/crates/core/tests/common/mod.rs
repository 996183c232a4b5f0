//! Independent construction of all solvable groups of small order: every solvable group is an
//! extension of a smaller one by an irreducible module (a minimal normal subgroup). Uses only
//! pc collection and linear algebra, never the engine's cohomology, cover or orbit code.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use solvgroups::linalg::{FpMatrix, Subspace};
use solvgroups::pcgroup::fingerprint::{fingerprint, Fingerprint};
use solvgroups::pcgroup::series::is_nilpotent;
use solvgroups::pcgroup::{brute_force_isomorphic, factorize, PcElement, PcPresentation};

fn all_invertible(d: usize, p: u32) -> Vec<FpMatrix> {
    let mut out = Vec::new();
    let mut c = vec![0u32; d * d];
    loop {
        let m = FpMatrix::from_flat(p, d, d, c.clone());
        if m.rank() == d {
            out.push(m);
        }
        if !solvgroups::linalg::increment(&mut c, p) {
            return out;
        }
    }
}

fn eval(mats: &[Option<FpMatrix>], w: &[u32], p: u32, d: usize) -> FpMatrix {
    let mut r = FpMatrix::identity(p, d);
    for (k, &e) in w.iter().enumerate() {
        if e > 0 {
            r = r.mul(&mats[k].as_ref().expect("assigned").pow(e as u64));
        }
    }
    r
}

/// All tuples of matrices satisfying the relations of `q`, assigned from the last generator.
fn representations(q: &PcPresentation, d: usize, p: u32, gl: &[FpMatrix]) -> Vec<Vec<FpMatrix>> {
    let n = q.len();
    let mut out = Vec::new();
    let mut cur: Vec<Option<FpMatrix>> = vec![None; n];
    fn rec(q: &PcPresentation, i: usize, d: usize, p: u32, gl: &[FpMatrix], cur: &mut Vec<Option<FpMatrix>>, out: &mut Vec<Vec<FpMatrix>>) {
        if i == 0 {
            out.push(cur.iter().map(|m| m.clone().unwrap()).collect());
            return;
        }
        let i = i - 1;
        let pw = eval(cur, q.power(i), p, d);
        let conj: Vec<FpMatrix> = (i + 1..q.len()).map(|j| eval(cur, q.conjugate(j, i), p, d)).collect();
        for a in gl {
            if a.pow(q.rel_orders()[i] as u64) != pw {
                continue;
            }
            let ai = a.inverse().unwrap();
            if (i + 1..q.len()).zip(&conj).all(|(j, c)| ai.mul(cur[j].as_ref().unwrap()).mul(a) == *c) {
                cur[i] = Some(a.clone());
                rec(q, i, d, p, gl, cur, out);
                cur[i] = None;
            }
        }
    }
    rec(q, n, d, p, gl, &mut cur, &mut out);
    out
}

fn irreducible(mats: &[FpMatrix], d: usize, p: u32) -> bool {
    let mut v = vec![0u32; d];
    loop {
        solvgroups::linalg::increment(&mut v, p);
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        let mut span = Subspace::from_vectors(p, d, &[v.clone()]);
        loop {
            let mut vecs = span.basis_vecs();
            for b in span.basis_vecs() {
                for a in mats {
                    vecs.push(a.vec_mul(&b));
                }
            }
            let next = Subspace::from_vectors(p, d, &vecs);
            if next.dim() == span.dim() {
                break;
            }
            span = next;
        }
        if span.dim() < d {
            return false;
        }
    }
}

fn relation_list(n: usize) -> Vec<(usize, usize)> {
    let mut r: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            r.push((j, i));
        }
    }
    r
}

/// The extension of `q` by the module with the given tails, one chunk of `d` per relation.
fn build(q: &PcPresentation, mats: &[FpMatrix], d: usize, p: u32, tails: &[u32]) -> PcPresentation {
    let n = q.len();
    let total = n + d;
    let rels = relation_list(n);
    let idx: HashMap<(usize, usize), usize> = rels.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let word = |w: &[u32], r: usize| -> PcElement {
        let mut v = w.to_vec();
        v.extend_from_slice(&tails[r * d..(r + 1) * d]);
        v
    };
    let mut rel_orders = q.rel_orders().to_vec();
    rel_orders.extend(std::iter::repeat(p).take(d));
    let mut powers: Vec<PcElement> = (0..n).map(|i| word(q.power(i), idx[&(i, i)])).collect();
    powers.extend((0..d).map(|_| vec![0u32; total]));
    let mut conjugates: Vec<Vec<PcElement>> = (0..n).map(|j| (0..j).map(|i| word(q.conjugate(j, i), idx[&(j, i)])).collect()).collect();
    for s in 0..d {
        let mut row: Vec<PcElement> = (0..n)
            .map(|i| {
                let mut v = vec![0u32; n];
                v.extend(mats[i].row(s).iter().copied());
                v
            })
            .collect();
        let mut unit = vec![0u32; total];
        unit[n + s] = 1;
        row.extend(std::iter::repeat(unit).take(s));
        conjugates.push(row);
    }
    PcPresentation::new_unchecked(rel_orders, powers, conjugates).expect("well-formed")
}

/// Tail changes caused by replacing each lift `g_i` by `g_i·m_i`, computed in the split
/// extension; their span is the coboundary space.
fn coboundary_span(q: &PcPresentation, mats: &[FpMatrix], d: usize, p: u32) -> Subspace {
    let n = q.len();
    let rels = relation_list(n);
    let e0 = build(q, mats, d, p, &vec![0u32; rels.len() * d]);
    let mut vecs = Vec::new();
    for k in 0..n * d {
        let h: Vec<PcElement> = (0..n)
            .map(|i| {
                let mut v = vec![0u32; n + d];
                v[i] = 1;
                if k / d == i {
                    v[n + k % d] = 1;
                }
                v
            })
            .collect();
        let eval_h = |w: &[u32]| -> PcElement {
            let mut r = e0.identity();
            for (j, &e) in w.iter().enumerate() {
                if e > 0 {
                    r = e0.mul(&r, &e0.pow(&h[j], e as u64));
                }
            }
            r
        };
        let mut t = Vec::new();
        for &(j, i) in &rels {
            let (lhs, w) = if i == j {
                (e0.pow(&h[i], q.rel_orders()[i] as u64), q.power(i))
            } else {
                (e0.conj(&h[j], &h[i]), q.conjugate(j, i))
            };
            let diff = e0.mul(&e0.inverse(&eval_h(w)), &lhs);
            assert!(diff[..n].iter().all(|&x| x == 0));
            t.extend_from_slice(&diff[n..]);
        }
        vecs.push(t);
    }
    Subspace::from_vectors(p, rels.len() * d, &vecs)
}

/// All extensions of `q` by irreducible modules of dimension `d` over `F_p`, one per
/// cohomology class.
fn extensions(q: &PcPresentation, d: usize, p: u32, gl: &[FpMatrix]) -> Vec<PcPresentation> {
    let n = q.len();
    let r = relation_list(n).len();
    let mut out = Vec::new();
    for mats in representations(q, d, p, gl) {
        if !irreducible(&mats, d, p) {
            continue;
        }
        if q.order() % p as u64 != 0 {
            // coprime action: every extension splits
            out.push(build(q, &mats, d, p, &vec![0u32; r * d]));
            continue;
        }
        let b2 = coboundary_span(q, &mats, d, p);
        let comp = b2.complement_basis();
        let mut c = vec![0u32; comp.len()];
        loop {
            let mut t = vec![0u32; r * d];
            for (&x, v) in c.iter().zip(&comp) {
                for (a, &b) in t.iter_mut().zip(v) {
                    *a = (*a + x * b) % p;
                }
            }
            let e = build(q, &mats, d, p, &t);
            if e.check_consistency().is_ok() {
                out.push(e);
            }
            if !solvgroups::linalg::increment(&mut c, p) {
                break;
            }
        }
    }
    out
}

/// Isomorphism types of solvable groups by order, built bottom-up.
#[derive(Default)]
pub struct Oracle {
    groups: BTreeMap<u64, Vec<PcPresentation>>,
    gl: HashMap<(usize, u32), Vec<FpMatrix>>,
}

impl Oracle {
    pub fn groups(&mut self, o: u64) -> Vec<PcPresentation> {
        if let Some(g) = self.groups.get(&o) {
            return g.clone();
        }
        let result = if o == 1 {
            vec![PcPresentation::trivial()]
        } else {
            let mut buckets: HashMap<Fingerprint, Vec<PcPresentation>> = HashMap::new();
            let mut order: Vec<PcPresentation> = Vec::new();
            for (p, e) in factorize(o) {
                for d in 1..=e as usize {
                    let qo = o / (p as u64).pow(d as u32);
                    let qs = self.groups(qo);
                    let gl = self.gl.entry((d, p as u32)).or_insert_with(|| all_invertible(d, p as u32)).clone();
                    for q in &qs {
                        for h in extensions(q, d, p as u32, &gl) {
                            let fp = fingerprint(&h);
                            let bucket = buckets.entry(fp).or_default();
                            if bucket.iter().all(|x| brute_force_isomorphic(x, &h).unwrap().is_none()) {
                                bucket.push(h.clone());
                                order.push(h);
                            }
                        }
                    }
                }
            }
            order
        };
        self.groups.insert(o, result.clone());
        result
    }

    pub fn non_nilpotent(&mut self, o: u64) -> Vec<PcPresentation> {
        self.groups(o).into_iter().filter(|g| !is_nilpotent(g)).collect()
    }
}

/// Pairs each group of `a` with the groups of `b` isomorphic to it; a bijection gives one
/// match each way.
pub fn bijection(a: &[PcPresentation], b: &[PcPresentation]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let fb: Vec<Fingerprint> = b.iter().map(fingerprint).collect();
    let mut used = vec![false; b.len()];
    for x in a {
        let fx = fingerprint(x);
        let hits: Vec<usize> = (0..b.len())
            .filter(|&j| fb[j] == fx && brute_force_isomorphic(x, &b[j]).unwrap().is_some())
            .collect();
        if hits.len() != 1 || used[hits[0]] {
            return false;
        }
        used[hits[0]] = true;
    }
    true
}
