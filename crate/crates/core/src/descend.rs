//! Descendants of a finite solvable group: quotients `G*/U` of the covering group by
//! allowable subgroups `U`, one per orbit of the automorphisms of `G*` stabilizing `M`.
//!
//! Allowable subgroups are handled through their annihilators `S = U^⊥` in the dual of each
//! `M_p`; an automorphism acting on `M_p` by `m ↦ m·c` sends `S` to `S·(c^{-1})^T`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::algebra::unit_group;
use crate::cohom::{coboundaries, extension_multi, lift_automorphism, GModule};
use crate::cover::{covering_group, CoverRecord, PrimeBlock};
use crate::fclass1::{ConstructedGroup, Provenance};
use crate::finite::{ElemSet, GroupElem};
use crate::linalg::{
    enumerate_subspaces, invariant_subspace_closure, nullspace, solve_left, FpMatrix, QuotientMap, Subspace,
};
use crate::matgrp::MatTuple;
use crate::pcgroup::series::{fitting_subgroup, is_nilpotent, o_p, sylow_subgroup};
use crate::pcgroup::{factorize, PcAut, PcElement, PcPresentation, PcSubgroup};
use crate::{Budget, Error, Result};

/// A basis of the algebra of matrices commuting with every action matrix of `m`.
pub fn centralizer_algebra(m: &GModule) -> Vec<FpMatrix> {
    let d = m.dim;
    let p = m.p;
    if d == 0 {
        return Vec::new();
    }
    let unit = |a: usize, b: usize| {
        let mut e = FpMatrix::zero(p, d, d);
        e.set(a, b, 1);
        e
    };
    let rows: Vec<Vec<u32>> = (0..d * d)
        .map(|ab| {
            let e = unit(ab / d, ab % d);
            m.mats.iter().flat_map(|x| e.mul(x).sub(&x.mul(&e)).data().to_vec()).collect()
        })
        .collect();
    let cols = m.mats.len() * d * d;
    if cols == 0 {
        return (0..d * d).map(|ab| unit(ab / d, ab % d)).collect();
    }
    let dm = FpMatrix::from_rows(p, cols, &rows);
    nullspace(&dm.transpose()).basis_vecs().into_iter().map(|v| FpMatrix::from_flat(p, d, d, v)).collect()
}

fn combine(p: u32, d: usize, basis: &[FpMatrix], coeffs: &[u32]) -> FpMatrix {
    let mut m = FpMatrix::zero(p, d, d);
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            m = m.add(&b.scale(c));
        }
    }
    m
}

/// The subspace of `basis`-coordinates of elements `x` for which every vector in `rows(x)`
/// vanishes, where `rows` is linear in `x`.
fn linear_kernel(p: u32, basis: &[FpMatrix], image: impl Fn(&FpMatrix) -> Vec<u32>, extra: &[Vec<u32>]) -> Subspace {
    let k = basis.len();
    let mut rows: Vec<Vec<u32>> = basis.iter().map(&image).collect();
    rows.extend(extra.iter().cloned());
    let width = rows.first().map_or(0, |r| r.len());
    if width == 0 {
        return Subspace::full(p, k);
    }
    let ns = nullspace(&FpMatrix::from_rows(p, width, &rows).transpose());
    let vecs: Vec<Vec<u32>> = ns.basis_vecs().iter().map(|v| v[..k].to_vec()).collect();
    Subspace::from_vectors(p, k, &vecs)
}

/// Tails of `G*_p` acted on by `x`, block by block.
fn act_on_tails(t: &[u32], x: &FpMatrix) -> Vec<u32> {
    let d = x.rows();
    t.chunks(d).flat_map(|c| x.vec_mul(c)).collect()
}

/// Coordinates (relative to `algebra`) of the `x` with `t·x ∈ B²`: the elements `c = 1 + x`
/// are exactly the module automorphisms fixing the extension class.
fn class_fixing_ideal(block: &PrimeBlock, algebra: &[FpMatrix]) -> Subspace {
    let (_, b2, _) = coboundaries(&block.module);
    linear_kernel(block.p, algebra, |x| act_on_tails(&block.tails, x), &b2.basis_vecs())
}

/// The sections `(T_p ∩ M_{p,i}, M_{p,i+1})` for the series `M_{p,i+1} = [M_{p,i}, S_p]`,
/// where `S_p` is a Sylow p-subgroup of `G*_p` and `T_p = S_p′S_p^p`.
pub fn reduce_by_trivact(cover: &CoverRecord, b: usize) -> Result<Vec<(Subspace, Subspace)>> {
    let block = &cover.blocks[b];
    let base = &cover.base;
    let (p, d, n) = (block.p, block.dim(), base.len());
    let gp = extension_multi(base, &[&block.module], &[&block.tails])?;
    let sylow = sylow_subgroup(base, p as u64);
    let pad = |x: &[u32]| {
        let mut v = gp.identity();
        v[..n].copy_from_slice(x);
        v
    };
    let mut sgens: Vec<PcElement> = sylow.gens().iter().map(|x| pad(x)).collect();
    sgens.extend((n..n + d).map(|i| gp.gen(i)));
    let s = PcSubgroup::from_generators(&gp, &sgens);
    let mut tgens = PcSubgroup::commutator(&gp, &s, &s).gens().to_vec();
    tgens.extend(s.agemo(&gp, p as u64).gens().iter().cloned());
    let t = PcSubgroup::from_generators(&gp, &tgens).intersect_tail(&gp, n);
    let tm = Subspace::from_vectors(p, d, &t.gens().iter().map(|x| x[n..].to_vec()).collect::<Vec<_>>());
    let acts: Vec<FpMatrix> = sylow.gens().iter().map(|x| block.module.eval(x)).collect();
    let id = &FpMatrix::identity(p, d);
    let mut cur = Subspace::full(p, d);
    let mut out = Vec::new();
    while cur.dim() > 0 {
        let vecs: Vec<Vec<u32>> = cur
            .basis_vecs()
            .iter()
            .flat_map(|m| acts.iter().map(move |a| a.sub(id).vec_mul(m)))
            .collect();
        let next = invariant_subspace_closure(&Subspace::from_vectors(p, d, &vecs), &acts);
        out.push((tm.intersection(&cur), next.clone()));
        cur = next;
    }
    Ok(out)
}

/// Coordinates of the `x` mapping the top section `T_{p,1}` into `M_{p,2}`.
fn trivact_ideal(block: &PrimeBlock, algebra: &[FpMatrix], sections: &[(Subspace, Subspace)]) -> Subspace {
    let p = block.p;
    let d = block.dim();
    let Some((t, next)) = sections.first() else {
        return Subspace::full(p, algebra.len());
    };
    if t.dim() == 0 {
        return Subspace::full(p, algebra.len());
    }
    let unit_rows: Vec<Vec<u32>> = FpMatrix::identity(p, d).row_vecs();
    let q = QuotientMap::new(p, d, &next.basis_vecs(), &unit_rows);
    let tb = t.basis_vecs();
    linear_kernel(p, algebra, |x| tb.iter().flat_map(|v| q.project(&x.vec_mul(v))).collect(), &[])
}

/// `W_p = Stab_{C_p}([ε_p])`, with `C_p` the unit group of the centralizer algebra.
#[derive(Clone, Debug)]
pub struct PrimeStabilizer {
    pub p: u32,
    pub dim: usize,
    /// Basis of `End_G(M_p)`.
    pub algebra: Vec<FpMatrix>,
    /// `|C_p|`.
    pub centralizer_order: u128,
    /// Basis of the right ideal `X` with `W_p = C_p ∩ (1 + X)`.
    pub ideal: Vec<FpMatrix>,
    /// Basis of the smaller ideal actually used after the trivact reduction.
    pub reduced_ideal: Vec<FpMatrix>,
    pub gens: Vec<FpMatrix>,
    pub order: u128,
}

impl PrimeStabilizer {
    /// Does `c` lie in `W_p`?
    pub fn contains(&self, module: &GModule, c: &FpMatrix) -> bool {
        if c.rank() != self.dim || module.mats.iter().any(|a| a.mul(c) != c.mul(a)) {
            return false;
        }
        let flat: Vec<Vec<u32>> = self.ideal.iter().map(|x| x.data().to_vec()).collect();
        let x = c.sub(&FpMatrix::identity(self.p, self.dim));
        Subspace::from_vectors(self.p, self.dim * self.dim, &flat).contains(x.data())
    }
}

/// Units of `GF(p)·1 + ideal` with scalar part 1, for a right ideal not containing 1;
/// the whole unit group when it does. Optionally restricted to the stabilizer of `sub`.
fn units_one_plus(p: u32, d: usize, ideal: &[FpMatrix], sub: Option<&Subspace>) -> (Vec<FpMatrix>, u128) {
    let id = FpMatrix::identity(p, d);
    let iflat: Vec<Vec<u32>> = ideal.iter().map(|x| x.data().to_vec()).collect();
    let mut span: Vec<Vec<u32>> = vec![id.data().to_vec()];
    span.extend(iflat.iter().cloned());
    let contains_one = Subspace::from_vectors(p, d * d, &iflat).contains(id.data());
    let mut basis: Vec<FpMatrix> = Subspace::from_vectors(p, d * d, &span)
        .basis_vecs()
        .into_iter()
        .map(|v| FpMatrix::from_flat(p, d, d, v))
        .collect();
    if let Some(u) = sub {
        let unit_rows = FpMatrix::identity(p, d).row_vecs();
        let q = QuotientMap::new(p, d, &u.basis_vecs(), &unit_rows);
        let ub = u.basis_vecs();
        let keep = linear_kernel(p, &basis, |x| ub.iter().flat_map(|v| q.project(&x.vec_mul(v))).collect(), &[]);
        basis = keep.basis_vecs().iter().map(|c| combine(p, d, &basis, c)).collect();
    }
    let ug = unit_group(p, d, &basis);
    if contains_one {
        return (ug.gens.into_iter().filter(|g| !g.is_identity()).collect(), ug.order);
    }
    let q = QuotientMap::new(p, d * d, &iflat, &span);
    let gens = ug
        .gens
        .into_iter()
        .map(|g| {
            let lam = q.project(g.data())[0];
            g.scale(crate::linalg::inv_mod(lam, p))
        })
        .filter(|g| !g.is_identity())
        .collect();
    (gens, ug.order / (p as u128 - 1))
}

/// `W_p` for block `b`, with or without the trivact reduction.
pub fn prime_stabilizer(cover: &CoverRecord, b: usize, reduce: bool) -> Result<PrimeStabilizer> {
    let block = &cover.blocks[b];
    let (p, d) = (block.p, block.dim());
    let algebra = centralizer_algebra(&block.module);
    let centralizer_order = unit_group(p, d, &algebra).order;
    let x = class_fixing_ideal(block, &algebra);
    let z = if reduce {
        let sections = reduce_by_trivact(cover, b)?;
        x.intersection(&trivact_ideal(block, &algebra, &sections))
    } else {
        x.clone()
    };
    let to_mats = |s: &Subspace| -> Vec<FpMatrix> { s.basis_vecs().iter().map(|c| combine(p, d, &algebra, c)).collect() };
    let ideal = to_mats(&x);
    let reduced_ideal = to_mats(&z);
    let (gens, order) = units_one_plus(p, d, &reduced_ideal, None);
    Ok(PrimeStabilizer { p, dim: d, algebra, centralizer_order, ideal, reduced_ideal, gens, order })
}

/// An element of `Aut_M(G*)` modulo the derivations `V`: the induced automorphism of `G` and
/// the restriction to `M`, one block per prime.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sig {
    pub beta: PcAut,
    pub gamma: MatTuple,
}

impl GroupElem for Sig {
    fn op(&self, other: &Self) -> Self {
        Sig { beta: self.beta.then(&other.beta), gamma: self.gamma.op(&other.gamma) }
    }
    fn inv(&self) -> Self {
        Sig { beta: self.beta.inverse(), gamma: self.gamma.inv() }
    }
    fn is_one(&self) -> bool {
        self.beta.is_one() && self.gamma.is_one()
    }
    fn one_like(&self) -> Self {
        Sig { beta: self.beta.one_like(), gamma: self.gamma.one_like() }
    }
}

/// Generators of `Aut_M(G*)`: lifts of `Aut(G)` generators, lifts of `W_p` generators and
/// the derivations `V ≅ Z¹(G, M)`.
#[derive(Clone, Debug)]
pub struct AutMCover {
    pub lifts: Vec<Vec<PcElement>>,
    pub lift_sigs: Vec<Sig>,
    pub w: Vec<PrimeStabilizer>,
    pub v: Vec<Vec<PcElement>>,
    base: Arc<PcPresentation>,
}

/// The restriction to `M` of an automorphism of `G*` given by generator images.
pub fn eta_m(cover: &CoverRecord, images: &[PcElement]) -> MatTuple {
    MatTuple(
        cover
            .blocks
            .iter()
            .enumerate()
            .map(|(b, bl)| {
                let rows: Vec<Vec<u32>> = (0..bl.dim()).map(|s| cover.block_coords(&images[bl.offset + s], b)).collect();
                FpMatrix::from_rows(bl.p, bl.dim(), &rows)
            })
            .collect(),
    )
}

/// The automorphism of `G` induced by an automorphism of `G*`.
pub fn eta_g(cover: &CoverRecord, base: &Arc<PcPresentation>, images: &[PcElement]) -> PcAut {
    PcAut { pres: base.clone(), images: (0..cover.n_top()).map(|k| cover.project(&images[k])).collect() }
}

/// An automorphism of `G*` with the given signature.
pub fn lift_sig(cover: &CoverRecord, sig: &Sig) -> Result<Vec<PcElement>> {
    let len = cover.cover.len();
    let top: Vec<PcElement> = sig
        .beta
        .images
        .iter()
        .map(|x| {
            let mut v = vec![0u32; len];
            v[..x.len()].copy_from_slice(x);
            v
        })
        .collect();
    let mut bottom = Vec::new();
    for (b, c) in sig.gamma.0.iter().enumerate() {
        for s in 0..c.rows() {
            bottom.push(cover.block_element(b, c.row(s)));
        }
    }
    lift_automorphism(&cover.cover, cover.n_top(), &top, &bottom)
        .ok_or_else(|| Error::Inconsistent("signature does not lift to the covering group".into()))
}

impl AutMCover {
    pub fn identity_sig(&self, cover: &CoverRecord) -> Sig {
        let factors: Vec<(usize, u32)> = cover.blocks.iter().map(|b| (b.dim(), b.p)).collect();
        Sig { beta: PcAut::identity(self.base.clone()), gamma: MatTuple::identity(&factors) }
    }

    /// Signatures of the `W` generators.
    pub fn w_sigs(&self, cover: &CoverRecord) -> Vec<Sig> {
        let factors: Vec<(usize, u32)> = cover.blocks.iter().map(|b| (b.dim(), b.p)).collect();
        let one = self.identity_sig(cover);
        let mut out = Vec::new();
        for (b, w) in self.w.iter().enumerate() {
            for c in &w.gens {
                out.push(Sig { beta: one.beta.clone(), gamma: MatTuple::embed(&factors, b, c.clone()) });
            }
        }
        out
    }

    /// Every generator as an automorphism of `G*`.
    pub fn all_generators(&self, cover: &CoverRecord) -> Result<Vec<Vec<PcElement>>> {
        let mut out = self.lifts.clone();
        for s in self.w_sigs(cover) {
            out.push(lift_sig(cover, &s)?);
        }
        out.extend(self.v.iter().cloned());
        Ok(out)
    }
}

/// The derivations `g_k ↦ g_k·z_k` for a basis of `Z¹(G, M_p)`, all primes.
fn derivations(cover: &CoverRecord) -> Vec<Vec<PcElement>> {
    let g = &cover.cover;
    let n = cover.n_top();
    let mut out = Vec::new();
    for (b, block) in cover.blocks.iter().enumerate() {
        let d = block.dim();
        let (_, _, z1) = coboundaries(&block.module);
        for z in z1.basis_vecs() {
            let mut im: Vec<PcElement> = (0..n).map(|k| g.mul(&g.gen(k), &cover.block_element(b, &z[k * d..(k + 1) * d]))).collect();
            im.extend((n..g.len()).map(|i| g.gen(i)));
            out.push(im);
        }
    }
    out
}

pub fn aut_m_cover(group: &ConstructedGroup, cover: &CoverRecord) -> Result<AutMCover> {
    let base = Arc::new(cover.base.clone());
    let mut lifts = Vec::new();
    let mut lift_sigs = Vec::new();
    for images in &group.aut_gens {
        let l = cover.lift_automorphism(images)?;
        lift_sigs.push(Sig { beta: PcAut { pres: base.clone(), images: images.clone() }, gamma: eta_m(cover, &l) });
        lifts.push(l);
    }
    let w = (0..cover.blocks.len()).map(|b| prime_stabilizer(cover, b, true)).collect::<Result<Vec<_>>>()?;
    Ok(AutMCover { lifts, lift_sigs, w, v: derivations(cover), base })
}

/// Annihilators `S` of the allowable parts `U_p` of one prime: invariant subspaces of the
/// dual meeting `N_p^⊥` trivially, of the requested dimensions.
pub fn allowable_duals(block: &PrimeBlock, nucleus: &Subspace, dims: &[usize], budget: &Budget) -> Result<Vec<FpMatrix>> {
    let (p, d) = (block.p, block.dim());
    let r = nucleus.dim();
    let nperp = nucleus.annihilator();
    let mut prows = nperp.complement_basis();
    prows.extend(nperp.basis_vecs());
    let pm = FpMatrix::from_rows(p, d, &prows);
    let pinv = pm.inverse().expect("complement and annihilator span the dual");
    let sub = |m: &FpMatrix, r0: usize, r1: usize, c0: usize, c1: usize| {
        let rows: Vec<Vec<u32>> = (r0..r1).map(|i| m.row(i)[c0..c1].to_vec()).collect();
        FpMatrix::from_rows(p, c1 - c0, &rows)
    };
    let blocks: Vec<(FpMatrix, FpMatrix, FpMatrix)> = block
        .module
        .mats
        .iter()
        .map(|a| {
            let ap = pm.mul(&a.transpose()).mul(&pinv);
            debug_assert!(sub(&ap, r, d, 0, r).is_zero());
            (sub(&ap, 0, r, 0, r), sub(&ap, 0, r, r, d), sub(&ap, r, d, r, d))
        })
        .collect();
    let cmat = sub(&pm, 0, r, 0, d);
    let nmat = sub(&pm, r, d, 0, d);
    let e = d - r;
    let mut out = Vec::new();
    for &k in dims {
        if k > r {
            continue;
        }
        if k == 0 {
            out.push(FpMatrix::zero(p, 0, d));
            continue;
        }
        for x in enumerate_subspaces(r, p, Some(&[k]), budget.subspaces)? {
            let xe = x.echelon();
            if blocks.iter().any(|(a11, _, _)| x.basis_vecs().iter().any(|v| !xe.contains(&a11.vec_mul(v)))) {
                continue;
            }
            let xq = QuotientMap::new(p, r, &[], &x.basis_vecs());
            let xi = x.basis_vecs();
            // unknowns F[l][c], l < k, c < e; equations β_i F − F_i a22 = ξ_i a12
            let nunk = k * e;
            let mut eqs: Vec<Vec<u32>> = Vec::new();
            let mut rhs: Vec<u32> = Vec::new();
            for (a11, a12, a22) in &blocks {
                for (i, v) in xi.iter().enumerate() {
                    let beta = xq.project(&a11.vec_mul(v));
                    let target = a12.vec_mul(v);
                    for c in 0..e {
                        let mut row = vec![0u32; nunk];
                        for l in 0..k {
                            row[l * e + c] = (row[l * e + c] + beta[l]) % p;
                        }
                        for j in 0..e {
                            row[i * e + j] = (row[i * e + j] + p - a22.get(j, c)) % p;
                        }
                        eqs.push(row);
                        rhs.push(target[c]);
                    }
                }
            }
            let (particular, kernel) = if nunk == 0 {
                (Vec::new(), Vec::new())
            } else if eqs.is_empty() {
                (vec![0u32; nunk], FpMatrix::identity(p, nunk).row_vecs())
            } else {
                let em = FpMatrix::from_rows(p, nunk, &eqs);
                match solve_left(&em.transpose(), &rhs) {
                    Some(f) => (f, nullspace(&em).basis_vecs()),
                    None => continue,
                }
            };
            let count = (p as u128).checked_pow(kernel.len() as u32).unwrap_or(u128::MAX);
            if count + out.len() as u128 > budget.subspaces as u128 {
                return Err(Error::CapExceeded(format!("more than {} allowable subspaces", budget.subspaces)));
            }
            let mut coef = vec![0u32; kernel.len()];
            loop {
                let mut f = particular.clone();
                for (&c, kv) in coef.iter().zip(&kernel) {
                    crate::linalg::axpy(&mut f, c, kv, p);
                }
                let rows: Vec<Vec<u32>> = (0..k)
                    .map(|i| {
                        let mut v = cmat.vec_mul(&xi[i]);
                        if e > 0 {
                            let w = nmat.vec_mul(&f[i * e..(i + 1) * e]);
                            crate::linalg::axpy(&mut v, 1, &w, p);
                        }
                        v
                    })
                    .collect();
                out.push(Subspace::from_vectors(p, d, &rows).basis().clone());
                if !crate::linalg::increment(&mut coef, p) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// An allowable subgroup of `G*`, given by its parts `U_p ≤ M_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllowableSubgroup {
    pub parts: Vec<Subspace>,
    pub stepsize: u64,
}

fn dual_to_part(s: &FpMatrix, p: u32, d: usize) -> Subspace {
    Subspace::from_vectors(p, d, &s.row_vecs()).annihilator()
}

/// Dimensions of `S_p` compatible with the stepsize filter, per prime.
fn wanted_dims(cover: &CoverRecord, filter: Option<&[u64]>) -> Vec<Vec<usize>> {
    cover
        .blocks
        .iter()
        .zip(&cover.nucleus_parts)
        .map(|(b, n)| {
            let r = n.dim();
            match filter {
                None => (0..=r).collect(),
                Some(ss) => {
                    let mut v: Vec<usize> = ss
                        .iter()
                        .filter(|&&s| {
                            factorize(s).iter().all(|&(q, _)| cover.blocks.iter().any(|bb| bb.p as u64 == q))
                        })
                        .map(|&s| {
                            let mut s = s;
                            let mut k = 0;
                            while s % b.p as u64 == 0 {
                                s /= b.p as u64;
                                k += 1;
                            }
                            k
                        })
                        .filter(|&k| k <= r)
                        .collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                }
            }
        })
        .collect()
}

fn stepsize_ok(cover: &CoverRecord, dims: &[usize], filter: Option<&[u64]>) -> bool {
    if dims.iter().all(|&k| k == 0) {
        return false;
    }
    let s: u64 = cover.blocks.iter().zip(dims).map(|(b, &k)| (b.p as u64).pow(k as u32)).product();
    filter.is_none_or(|f| f.contains(&s))
}

/// All allowable subgroups, optionally restricted to the given stepsizes.
pub fn allowable_subgroups(cover: &CoverRecord, filter: Option<&[u64]>, budget: &Budget) -> Result<Vec<AllowableSubgroup>> {
    let dims = wanted_dims(cover, filter);
    let per: Vec<Vec<FpMatrix>> = cover
        .blocks
        .iter()
        .zip(&cover.nucleus_parts)
        .zip(&dims)
        .map(|((b, n), ds)| allowable_duals(b, n, ds, budget))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut idx = vec![0usize; per.len()];
    if per.iter().any(|v| v.is_empty()) {
        return Ok(out);
    }
    loop {
        let ks: Vec<usize> = idx.iter().zip(&per).map(|(&i, v)| v[i].rows()).collect();
        if stepsize_ok(cover, &ks, filter) {
            let parts = idx.iter().zip(&per).zip(&cover.blocks).map(|((&i, v), b)| dual_to_part(&v[i], b.p, b.dim())).collect();
            let stepsize = cover.blocks.iter().zip(&ks).map(|(b, &k)| (b.p as u64).pow(k as u32)).product();
            out.push(AllowableSubgroup { parts, stepsize });
            if out.len() > budget.subspaces {
                return Err(Error::CapExceeded(format!("more than {} allowable subgroups", budget.subspaces)));
            }
        }
        let mut j = 0;
        loop {
            if j == idx.len() {
                return Ok(out);
            }
            idx[j] += 1;
            if idx[j] < per[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// The allowable parts of one prime with their `W_p`-orbits.
struct PrimePoints {
    p: u32,
    d: usize,
    points: Vec<FpMatrix>,
    index: FxHashMap<FpMatrix, usize>,
    orbit: Vec<usize>,
    reps: Vec<usize>,
    /// BFS tree inside each orbit: parent point and generator index.
    parent: Vec<Option<(usize, usize)>>,
    w_gens: Vec<FpMatrix>,
}

fn dual_action(c: &FpMatrix) -> FpMatrix {
    c.inverse().expect("invertible module automorphism").transpose()
}

fn act_dual(s: &FpMatrix, dual: &FpMatrix, p: u32, d: usize) -> FpMatrix {
    let rows: Vec<Vec<u32>> = (0..s.rows()).map(|i| dual.vec_mul(s.row(i))).collect();
    Subspace::from_vectors(p, d, &rows).basis().clone()
}

impl PrimePoints {
    fn new(p: u32, d: usize, points: Vec<FpMatrix>, w_gens: &[FpMatrix]) -> Result<Self> {
        let index: FxHashMap<FpMatrix, usize> = points.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let duals: Vec<FpMatrix> = w_gens.iter().map(dual_action).collect();
        let n = points.len();
        let mut orbit = vec![usize::MAX; n];
        let mut parent = vec![None; n];
        let mut reps = Vec::new();
        for start in 0..n {
            if orbit[start] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(start);
            orbit[start] = id;
            let mut queue = vec![start];
            let mut qi = 0;
            while qi < queue.len() {
                let x = queue[qi];
                qi += 1;
                for (gi, dm) in duals.iter().enumerate() {
                    let y = act_dual(&points[x], dm, p, d);
                    let j = *index.get(&y).ok_or_else(|| Error::Inconsistent("allowable set not W-invariant".into()))?;
                    if orbit[j] == usize::MAX {
                        orbit[j] = id;
                        parent[j] = Some((x, gi));
                        queue.push(j);
                    }
                }
            }
        }
        Ok(PrimePoints { p, d, points, index, orbit, reps, parent, w_gens: w_gens.to_vec() })
    }

    fn image(&self, i: usize, dual: &FpMatrix) -> Result<usize> {
        let y = act_dual(&self.points[i], dual, self.p, self.d);
        self.index.get(&y).copied().ok_or_else(|| Error::Inconsistent("allowable set not invariant".into()))
    }

    /// `w ∈ W_p` carrying the orbit representative of `i` to `i`.
    fn transversal(&self, i: usize) -> FpMatrix {
        let mut gens = Vec::new();
        let mut x = i;
        while let Some((par, g)) = self.parent[x] {
            gens.push(g);
            x = par;
        }
        let mut w = FpMatrix::identity(self.p, self.d);
        for &g in gens.iter().rev() {
            w = w.mul(&self.w_gens[g]);
        }
        w
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Product classes of per-prime orbit ids, in mixed radix.
struct ProductClasses {
    radix: Vec<usize>,
}

impl ProductClasses {
    fn count(&self) -> usize {
        self.radix.iter().product()
    }
    fn encode(&self, t: &[usize]) -> usize {
        t.iter().zip(&self.radix).rev().fold(0, |acc, (&x, &r)| acc * r + x)
    }
    fn decode(&self, mut c: usize) -> Vec<usize> {
        self.radix
            .iter()
            .map(|&r| {
                let x = c % r;
                c /= r;
                x
            })
            .collect()
    }
}

/// Options for [`descendants`].
#[derive(Clone, Debug)]
pub struct DescendOptions {
    /// Compute automorphism generators of every descendant.
    pub automorphisms: bool,
    /// Also count orbits under `Δ = Π Γ_p` (needs `Aut(G)` enumerated).
    pub delta: bool,
    pub budget: Budget,
}

impl Default for DescendOptions {
    fn default() -> Self {
        DescendOptions { automorphisms: true, delta: false, budget: Budget::default() }
    }
}

/// The descendants of a group with orbit statistics.
#[derive(Clone, Debug, Default)]
pub struct Descendants {
    pub groups: Vec<ConstructedGroup>,
    /// Number of allowable subgroups considered.
    pub allowable: usize,
    /// Γ-orbit counts by stepsize.
    pub gamma_counts: BTreeMap<u64, usize>,
    /// Δ-orbit counts by stepsize, and the Γ-orbit counts obtained by fusing them.
    pub delta_counts: Option<BTreeMap<u64, usize>>,
    pub fused_counts: Option<BTreeMap<u64, usize>>,
}

/// The quotient `G*/U` with the map from `G*`.
struct QuotientCover {
    pres: PcPresentation,
    maps: Vec<Option<QuotientMap>>,
}

impl QuotientCover {
    fn new(cover: &CoverRecord, parts: &[Subspace]) -> Result<Self> {
        let mut modules = Vec::new();
        let mut tails = Vec::new();
        let mut maps = Vec::new();
        for (b, u) in cover.blocks.iter().zip(parts) {
            let (p, d) = (b.p, b.dim());
            if u.dim() == d {
                maps.push(None);
                continue;
            }
            let q = QuotientMap::new(p, d, &u.basis_vecs(), &FpMatrix::identity(p, d).row_vecs());
            let k = q.dim();
            let mats = b
                .module
                .mats
                .iter()
                .map(|a| FpMatrix::from_rows(p, k, &q.complement.iter().map(|v| q.project(&a.vec_mul(v))).collect::<Vec<_>>()))
                .collect();
            modules.push(GModule::new(cover.base.clone(), p, k, mats)?);
            tails.push(b.tails.chunks(d).flat_map(|c| q.project(c)).collect::<Vec<u32>>());
            maps.push(Some(q));
        }
        let mrefs: Vec<&GModule> = modules.iter().collect();
        let trefs: Vec<&[u32]> = tails.iter().map(|t| t.as_slice()).collect();
        let pres = extension_multi(&cover.base, &mrefs, &trefs)?;
        Ok(QuotientCover { pres, maps })
    }

    fn map(&self, cover: &CoverRecord, x: &[u32]) -> PcElement {
        let mut v = cover.project(x);
        for (b, q) in self.maps.iter().enumerate() {
            if let Some(q) = q {
                v.extend(q.project(&cover.block_coords(x, b)));
            }
        }
        v
    }

    /// Generators of `G*` mapping onto the module generators of the quotient.
    fn module_preimages(&self, cover: &CoverRecord) -> Vec<PcElement> {
        let mut out = Vec::new();
        for (b, q) in self.maps.iter().enumerate() {
            if let Some(q) = q {
                out.extend(q.complement.iter().map(|v| cover.block_element(b, v)));
            }
        }
        out
    }

    fn induced(&self, cover: &CoverRecord, images: &[PcElement]) -> Vec<PcElement> {
        let g = &cover.cover;
        let mut out: Vec<PcElement> = (0..cover.n_top()).map(|k| self.map(cover, &images[k])).collect();
        for y in self.module_preimages(cover) {
            out.push(self.map(cover, &g.eval_exps(images, &y)));
        }
        out
    }
}

/// Per-prime points, classes and orbit bookkeeping shared by the orbit and stabilizer passes.
struct OrbitData {
    primes: Vec<PrimePoints>,
    classes: ProductClasses,
    /// `(Sig, per-block dual action)` for the lifted Aut(G) generators.
    lift_duals: Vec<Vec<FpMatrix>>,
}

impl OrbitData {
    fn class_of(&self, points: &[usize]) -> usize {
        let t: Vec<usize> = points.iter().zip(&self.primes).map(|(&i, pp)| pp.orbit[i]).collect();
        self.classes.encode(&t)
    }
    fn rep_points(&self, class: usize) -> Vec<usize> {
        self.classes.decode(class).iter().zip(&self.primes).map(|(&o, pp)| pp.reps[o]).collect()
    }
    fn dims(&self, class: usize) -> Vec<usize> {
        self.rep_points(class).iter().zip(&self.primes).map(|(&i, pp)| pp.points[i].rows()).collect()
    }
    fn apply(&self, points: &[usize], duals: &[FpMatrix]) -> Result<Vec<usize>> {
        points.iter().zip(&self.primes).zip(duals).map(|((&i, pp), dm)| pp.image(i, dm)).collect()
    }
}

fn sig_duals(sig: &Sig) -> Vec<FpMatrix> {
    sig.gamma.0.iter().map(dual_action).collect()
}

/// `Aut(G)` enumerated from the lifted generators, each with one signature.
fn enumerate_aut(gens: &[Sig], one: &Sig, budget: usize) -> Result<Vec<Sig>> {
    let mut seen: FxHashMap<PcAut, usize> = FxHashMap::default();
    let mut out = vec![one.clone()];
    seen.insert(one.beta.clone(), 0);
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let y = out[i].op(g);
            if !seen.contains_key(&y.beta) {
                if out.len() >= budget {
                    return Err(Error::OrbitBudgetExceeded(out.len()));
                }
                seen.insert(y.beta.clone(), out.len());
                out.push(y);
            }
        }
        i += 1;
    }
    Ok(out)
}

fn count_by_stepsize(cover: &CoverRecord, od: &OrbitData, reps: impl Iterator<Item = usize>) -> BTreeMap<u64, usize> {
    let mut m = BTreeMap::new();
    for c in reps {
        let s: u64 = cover.blocks.iter().zip(od.dims(c)).map(|(b, k)| (b.p as u64).pow(k as u32)).product();
        *m.entry(s).or_insert(0) += 1;
    }
    m
}

/// Fuses product classes under the lifted generators; returns class representatives of the
/// fused orbits among the classes passing `keep`.
fn fuse(od: &OrbitData, keep: &[bool], radix_classes: &ProductClasses, class_of: impl Fn(&[usize]) -> usize, rep_points: impl Fn(usize) -> Vec<usize>) -> Result<Vec<usize>> {
    let n = radix_classes.count();
    let mut uf = UnionFind::new(n);
    for c in (0..n).filter(|&c| keep[c]) {
        let pts = rep_points(c);
        for duals in &od.lift_duals {
            let img = od.apply(&pts, duals)?;
            uf.union(c, class_of(&img));
        }
    }
    Ok((0..n).filter(|&c| keep[c] && uf.find(c) == c).collect())
}

/// Generators of the stabilizer in `Aut_M(G*)/V` of the allowable subgroup given by the
/// representative points of `class`.
fn stabilizer_sigs(cover: &CoverRecord, aut: &AutMCover, od: &OrbitData, class: usize, budget: &Budget) -> Result<Vec<Sig>> {
    let factors: Vec<(usize, u32)> = cover.blocks.iter().map(|b| (b.dim(), b.p)).collect();
    let one = aut.identity_sig(cover);
    let rep = od.rep_points(class);
    let mut trans: FxHashMap<usize, Sig> = FxHashMap::default();
    trans.insert(class, one.clone());
    let mut queue = vec![class];
    let mut qi = 0;
    let mut schreier = Vec::new();
    while qi < queue.len() {
        let c = queue[qi];
        qi += 1;
        let pts = od.rep_points(c);
        for (g, duals) in aut.lift_sigs.iter().zip(&od.lift_duals) {
            let c2 = od.class_of(&od.apply(&pts, duals)?);
            let tg = trans[&c].op(g);
            match trans.get(&c2) {
                None => {
                    if trans.len() >= budget.orbit {
                        return Err(Error::OrbitBudgetExceeded(trans.len()));
                    }
                    trans.insert(c2, tg);
                    queue.push(c2);
                }
                Some(t2) => schreier.push(tg.op(&t2.inv())),
            }
        }
    }
    let mut out: Vec<Sig> = Vec::new();
    let mut betas: Vec<PcAut> = Vec::new();
    let mut closure = ElemSet::from_elems(vec![one.beta.clone()]);
    let mut capped = false;
    for s in schreier {
        if !capped && closure.contains(&s.beta) {
            continue;
        }
        // correct by W so that the representative itself is fixed
        let img = od.apply(&rep, &sig_duals(&s))?;
        let mut gamma = s.gamma.clone();
        for (b, (&i, pp)) in img.iter().zip(&od.primes).enumerate() {
            gamma.0[b] = gamma.0[b].mul(&pp.transversal(i).inverse().expect("unit"));
        }
        let fixed = Sig { beta: s.beta.clone(), gamma };
        debug_assert_eq!(od.apply(&rep, &sig_duals(&fixed))?, rep);
        if !capped {
            betas.push(fixed.beta.clone());
            match ElemSet::generated(&one.beta, &betas, budget.elements) {
                Ok(set) => closure = set,
                Err(_) => capped = true,
            }
        }
        out.push(fixed);
    }
    // Stab_W(U), prime by prime
    for (b, (w, (&i, pp))) in aut.w.iter().zip(rep.iter().zip(&od.primes)).enumerate() {
        let u = dual_to_part(&pp.points[i], pp.p, pp.d);
        let (gens, _) = units_one_plus(pp.p, pp.d, &w.reduced_ideal, Some(&u));
        for c in gens {
            out.push(Sig { beta: one.beta.clone(), gamma: MatTuple::embed(&factors, b, c) });
        }
    }
    Ok(out)
}

/// Necessary condition for a group of order `2^a·3` to have descendants of order `2^a·9`:
/// `F(G) ≅ C_2^{a-1} × C_3` and `G/O_2(G) ≅ S_3`.
pub fn prune_2a3(g: &PcPresentation) -> Result<bool> {
    let o = g.order();
    let mut m = o;
    while m % 2 == 0 {
        m /= 2;
    }
    if m != 3 || o < 6 {
        return Err(Error::WrongOrderShape(o));
    }
    let fit = fitting_subgroup(g);
    if fit.order(g) != o / 2 {
        return Ok(false);
    }
    let elems = fit.elements(g);
    let abelian = fit.gens().iter().all(|x| fit.gens().iter().all(|y| g.comm(x, y).iter().all(|&e| e == 0)));
    let exp6 = elems.iter().all(|x| g.pow(x, 6).iter().all(|&e| e == 0));
    if !abelian || !exp6 {
        return Ok(false);
    }
    let o2 = o_p(g, 2);
    if o / o2.order(g) != 6 {
        return Ok(false);
    }
    // G/O_2(G) of order 6 is S_3 iff it is non-abelian, i.e. G' ⊄ O_2(G)
    let whole = PcSubgroup::whole(g);
    let derived = PcSubgroup::commutator(g, &whole, &whole);
    Ok(!o2.contains_subgroup(g, &derived))
}

/// The descendants of a non-nilpotent `group` (one per orbit of allowable subgroups),
/// optionally only those with stepsize in `filter`.
pub fn descendants(group: &ConstructedGroup, filter: Option<&[u64]>, opts: &DescendOptions) -> Result<Descendants> {
    let cover = covering_group(&group.pres)?;
    descendants_of_cover(group, &cover, filter, opts)
}

pub fn descendants_of_cover(
    group: &ConstructedGroup,
    cover: &CoverRecord,
    filter: Option<&[u64]>,
    opts: &DescendOptions,
) -> Result<Descendants> {
    if is_nilpotent(&group.pres) {
        return Err(Error::Invalid("descendants are defined for non-nilpotent groups".into()));
    }
    let budget = &opts.budget;
    let mut result = Descendants::default();
    if cover.nucleus.is_trivial() {
        return Ok(result);
    }
    let dims = wanted_dims(cover, filter);
    let per: Vec<Vec<FpMatrix>> = cover
        .blocks
        .iter()
        .zip(&cover.nucleus_parts)
        .zip(&dims)
        .map(|((b, n), ds)| allowable_duals(b, n, ds, budget))
        .collect::<Result<_>>()?;
    // |L| for the requested stepsizes
    let mut by_dims: Vec<BTreeMap<usize, usize>> = Vec::new();
    for v in &per {
        let mut m = BTreeMap::new();
        for s in v {
            *m.entry(s.rows()).or_insert(0usize) += 1;
        }
        by_dims.push(m);
    }
    let mut total = 0usize;
    let mut combos: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 1)];
    for m in &by_dims {
        combos = combos
            .into_iter()
            .flat_map(|(ks, c)| {
                m.iter().map(move |(&k, &n)| {
                    let mut ks = ks.clone();
                    ks.push(k);
                    (ks, c.saturating_mul(n))
                })
            })
            .collect();
    }
    for (ks, c) in &combos {
        if stepsize_ok(cover, ks, filter) {
            total = total.saturating_add(*c);
        }
    }
    result.allowable = total;
    if total == 0 {
        return Ok(result);
    }
    let needs_aut = total > 1 || opts.automorphisms;
    if !needs_aut {
        // a single allowable subgroup: one descendant, no automorphism data requested
        let subs = allowable_subgroups(cover, filter, budget)?;
        let u = &subs[0];
        let q = QuotientCover::new(cover, &u.parts)?;
        result.gamma_counts.insert(u.stepsize, 1);
        result.groups.push(descendant_group(group, q.pres, Vec::new(), u.stepsize, 0));
        return Ok(result);
    }

    let aut = aut_m_cover(group, cover)?;
    let primes: Vec<PrimePoints> = per
        .into_iter()
        .zip(&cover.blocks)
        .zip(&aut.w)
        .map(|((pts, b), w)| PrimePoints::new(b.p, b.dim(), pts, &w.gens))
        .collect::<Result<_>>()?;
    let classes = ProductClasses { radix: primes.iter().map(|pp| pp.reps.len()).collect() };
    let lift_duals: Vec<Vec<FpMatrix>> = aut.lift_sigs.iter().map(sig_duals).collect();
    let od = OrbitData { primes, classes, lift_duals };
    let n = od.classes.count();
    let keep: Vec<bool> = (0..n).map(|c| stepsize_ok(cover, &od.dims(c), filter)).collect();
    let reps = fuse(&od, &keep, &od.classes, |pts| od.class_of(pts), |c| od.rep_points(c))?;
    result.gamma_counts = count_by_stepsize(cover, &od, reps.iter().copied());

    if opts.delta {
        if let Some((delta, fused)) = delta_counts(cover, &aut, &od, &keep, budget)? {
            result.delta_counts = Some(delta);
            result.fused_counts = Some(fused);
        }
    }

    let mut ordered: Vec<(u64, usize)> = reps
        .iter()
        .map(|&c| {
            let s: u64 = cover.blocks.iter().zip(od.dims(c)).map(|(b, k)| (b.p as u64).pow(k as u32)).product();
            (s, c)
        })
        .collect();
    ordered.sort();
    let v_gens = &aut.v;
    for (idx, &(stepsize, c)) in ordered.iter().enumerate() {
        let rep = od.rep_points(c);
        let parts: Vec<Subspace> =
            rep.iter().zip(&od.primes).map(|(&i, pp)| dual_to_part(&pp.points[i], pp.p, pp.d)).collect();
        let q = QuotientCover::new(cover, &parts)?;
        let mut auts = Vec::new();
        if opts.automorphisms {
            let sigs = stabilizer_sigs(cover, &aut, &od, c, budget)?;
            let mut seen = rustc_hash::FxHashSet::default();
            for s in &sigs {
                let im = q.induced(cover, &lift_sig(cover, s)?);
                if seen.insert(im.clone()) {
                    auts.push(im);
                }
            }
            for v in v_gens {
                let im = q.induced(cover, v);
                if seen.insert(im.clone()) {
                    auts.push(im);
                }
            }
            let ident: Vec<PcElement> = (0..q.pres.len()).map(|i| q.pres.gen(i)).collect();
            auts.retain(|a| *a != ident);
        }
        result.groups.push(descendant_group(group, q.pres, auts, stepsize, idx));
    }
    Ok(result)
}

fn descendant_group(parent: &ConstructedGroup, pres: PcPresentation, aut_gens: Vec<Vec<PcElement>>, stepsize: u64, orbit_index: usize) -> ConstructedGroup {
    ConstructedGroup {
        pres,
        f_class: parent.f_class + 1,
        f_rank: parent.f_rank,
        aut_gens,
        provenance: Provenance::Descendant { parent: None, stepsize, orbit_index },
    }
}

/// Orbit counts under `Δ = Π Γ_p`, and the Γ-orbit counts obtained by fusing Δ-orbits.
/// `None` when `Aut(G)` is too large to enumerate.
fn delta_counts(
    cover: &CoverRecord,
    aut: &AutMCover,
    od: &OrbitData,
    keep: &[bool],
    budget: &Budget,
) -> Result<Option<(BTreeMap<u64, usize>, BTreeMap<u64, usize>)>> {
    let one = aut.identity_sig(cover);
    let all = match enumerate_aut(&aut.lift_sigs, &one, budget.elements) {
        Ok(a) => a,
        Err(e) if e.is_budget() => return Ok(None),
        Err(e) => return Err(e),
    };
    let r = cover.blocks.len();
    // Γ_p-orbits on the allowable parts of each prime
    let mut gamma_p_orbit: Vec<Vec<usize>> = Vec::new();
    let mut gamma_p_reps: Vec<Vec<usize>> = Vec::new();
    for p in 0..r {
        let pp = &od.primes[p];
        let mut extra: Vec<FpMatrix> = Vec::new();
        for s in &all {
            let inside = (0..r).filter(|&q| q != p).all(|q| aut.w[q].contains(&cover.blocks[q].module, &s.gamma.0[q]));
            if inside && !extra.contains(&s.gamma.0[p]) {
                extra.push(s.gamma.0[p].clone());
            }
        }
        let npts = pp.points.len();
        let mut uf = UnionFind::new(pp.reps.len());
        for c in &extra {
            let dm = dual_action(c);
            for i in 0..npts {
                uf.union(pp.orbit[i], pp.orbit[pp.image(i, &dm)?]);
            }
        }
        let ids: Vec<usize> = (0..pp.reps.len()).map(|o| uf.find(o)).collect();
        let mut roots: Vec<usize> = ids.clone();
        roots.sort_unstable();
        roots.dedup();
        gamma_p_orbit.push(ids.iter().map(|x| roots.binary_search(x).unwrap()).collect());
        gamma_p_reps.push(roots.iter().map(|&o| pp.reps[o]).collect());
    }
    let dclasses = ProductClasses { radix: gamma_p_reps.iter().map(|v| v.len()).collect() };
    let d_class_of = |pts: &[usize]| -> usize {
        let t: Vec<usize> = pts.iter().enumerate().map(|(p, &i)| gamma_p_orbit[p][od.primes[p].orbit[i]]).collect();
        dclasses.encode(&t)
    };
    let d_rep = |c: usize| -> Vec<usize> { dclasses.decode(c).iter().enumerate().map(|(p, &o)| gamma_p_reps[p][o]).collect() };
    let dn = dclasses.count();
    let dkeep: Vec<bool> = (0..dn).map(|c| keep[od.class_of(&d_rep(c))]).collect();
    let mut delta = BTreeMap::new();
    for c in (0..dn).filter(|&c| dkeep[c]) {
        let s: u64 = d_rep(c).iter().zip(&od.primes).zip(&cover.blocks).map(|((&i, pp), b)| (b.p as u64).pow(pp.points[i].rows() as u32)).product();
        *delta.entry(s).or_insert(0) += 1;
    }
    let fused_reps = fuse(od, &dkeep, &dclasses, d_class_of, d_rep)?;
    let mut fused = BTreeMap::new();
    for c in fused_reps {
        let s: u64 = d_rep(c).iter().zip(&od.primes).zip(&cover.blocks).map(|((&i, pp), b)| (b.p as u64).pow(pp.points[i].rows() as u32)).product();
        *fused.entry(s).or_insert(0) += 1;
    }
    Ok(Some((delta, fused)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fclass1::solvable_groups_fclass1_all_ranks;
    use crate::pcgroup::brute_force_isomorphic;
    use crate::pcgroup::examples::{cyclic, symmetric3, symmetric4};
    use crate::pcgroup::series::{f_series, quotient};

    fn find(order: u64, target: &PcPresentation) -> ConstructedGroup {
        solvable_groups_fclass1_all_ranks(order, &Budget::default())
            .unwrap()
            .into_iter()
            .find(|g| brute_force_isomorphic(&g.pres, target).unwrap().is_some())
            .unwrap()
    }

    fn check_descendants(g: &ConstructedGroup, ds: &Descendants, max_order: u64) {
        for h in &ds.groups {
            assert_eq!(h.f_class, g.f_class + 1);
            assert_eq!(h.f_rank, g.f_rank);
            if h.order() > max_order {
                continue;
            }
            h.verify().unwrap();
            let fs = f_series(&h.pres);
            let (q, _) = quotient(&h.pres, fs.nu(g.f_class)).unwrap();
            assert!(brute_force_isomorphic(&q, &g.pres).unwrap().is_some());
        }
        for (i, a) in ds.groups.iter().enumerate() {
            for b in &ds.groups[i + 1..] {
                if a.order() == b.order() && a.order() <= max_order {
                    assert!(brute_force_isomorphic(&a.pres, &b.pres).unwrap().is_none());
                }
            }
        }
    }

    /// Allowable subgroups by testing every subspace of every `M_p`.
    fn brute_allowable(cover: &CoverRecord) -> BTreeMap<u64, usize> {
        let per: Vec<Vec<(Subspace, u64)>> = cover
            .blocks
            .iter()
            .zip(&cover.nucleus_parts)
            .map(|(b, n)| {
                let d = b.dim();
                enumerate_subspaces(d, b.p, None, 1 << 20)
                    .unwrap()
                    .into_iter()
                    .filter(|u| {
                        let ue = u.basis_vecs();
                        b.module.mats.iter().all(|a| ue.iter().all(|v| u.contains(&a.vec_mul(v))))
                            && u.sum(n).dim() == d
                    })
                    .map(|u| (u.clone(), (b.p as u64).pow((d - u.dim()) as u32)))
                    .collect()
            })
            .collect();
        let mut counts = BTreeMap::new();
        let mut acc: Vec<u64> = vec![1];
        for v in &per {
            acc = acc.iter().flat_map(|&s| v.iter().map(move |(_, t)| s * t)).collect();
        }
        for s in acc.into_iter().filter(|&s| s > 1) {
            *counts.entry(s).or_insert(0) += 1;
        }
        counts
    }

    #[test]
    fn centralizer_of_trivial_module_is_full() {
        let m = GModule::new(cyclic(3), 2, 2, vec![FpMatrix::identity(2, 2)]).unwrap();
        assert_eq!(centralizer_algebra(&m).len(), 4);
    }

    #[test]
    fn s4_descendants() {
        let g = find(24, &symmetric4());
        let cover = covering_group(&g.pres).unwrap();
        assert_eq!(cover.multiplicator_order(), 256);
        assert_eq!(cover.nucleus_order(), 8);
        let ds = descendants_of_cover(&g, &cover, None, &DescendOptions::default()).unwrap();
        let mut orders: Vec<u64> = ds.groups.iter().map(|h| h.order()).collect();
        orders.sort();
        assert_eq!(orders, vec![48, 48, 96, 192, 192]);
        check_descendants(&g, &ds, 200);
    }

    #[test]
    fn stepsize_filter() {
        let g = find(24, &symmetric4());
        let ds = descendants(&g, Some(&[8]), &DescendOptions::default()).unwrap();
        assert_eq!(ds.groups.len(), 2);
        assert!(ds.groups.iter().all(|h| h.order() == 192));
        let ds = descendants(&g, Some(&[3]), &DescendOptions::default()).unwrap();
        assert!(ds.groups.is_empty());
    }

    #[test]
    fn allowable_counts_match_brute_force() {
        for order in [6u64, 12, 18, 24] {
            for g in solvable_groups_fclass1_all_ranks(order, &Budget::default()).unwrap() {
                let cover = covering_group(&g.pres).unwrap();
                if cover.multiplicator_order() > 1 << 10 {
                    continue;
                }
                let mut counts = BTreeMap::new();
                for u in allowable_subgroups(&cover, None, &Budget::default()).unwrap() {
                    let m: u64 = u.parts.iter().zip(&cover.blocks).map(|(x, b)| (b.p as u64).pow((b.dim() - x.dim()) as u32)).product();
                    assert_eq!(m, u.stepsize);
                    *counts.entry(u.stepsize).or_insert(0) += 1;
                }
                assert_eq!(counts, brute_allowable(&cover), "order {order} rank {}", g.f_rank);
            }
        }
    }

    #[test]
    fn class_stabilizer_matches_brute_force() {
        for order in [12u64, 18, 24] {
            for g in solvable_groups_fclass1_all_ranks(order, &Budget::default()).unwrap() {
                let cover = covering_group(&g.pres).unwrap();
                for b in 0..cover.blocks.len() {
                    let w = prime_stabilizer(&cover, b, false).unwrap();
                    let block = &cover.blocks[b];
                    if (block.p as u64).pow(w.algebra.len() as u32) > 1 << 16 {
                        continue;
                    }
                    let (_, b2, _) = coboundaries(&block.module);
                    let mut count = 0u128;
                    let mut c = vec![0u32; w.algebra.len()];
                    loop {
                        let x = combine(block.p, block.dim(), &w.algebra, &c);
                        if x.rank() == block.dim() {
                            let t = act_on_tails(&block.tails, &x);
                            let diff: Vec<u32> = t.iter().zip(&block.tails).map(|(&a, &s)| (a + block.p - s) % block.p).collect();
                            if b2.contains(&diff) {
                                count += 1;
                                assert!(w.contains(&block.module, &x));
                            }
                        }
                        if !crate::linalg::increment(&mut c, block.p) {
                            break;
                        }
                    }
                    assert_eq!(count, w.order);
                    let gen = ElemSet::generated(&FpMatrix::identity(block.p, block.dim()), &w.gens, 1 << 20).unwrap();
                    assert_eq!(gen.len() as u128, w.order);
                    let r = prime_stabilizer(&cover, b, true).unwrap();
                    assert_eq!(w.order % r.order, 0);
                }
            }
        }
    }

    #[test]
    fn delta_fusion_agrees_with_gamma() {
        for order in [12u64, 18, 36] {
            for g in solvable_groups_fclass1_all_ranks(order, &Budget::default()).unwrap() {
                let cover = covering_group(&g.pres).unwrap();
                if is_nilpotent(&g.pres) || cover.multiplicator_order() > 1 << 12 {
                    continue;
                }
                let opts = DescendOptions { automorphisms: false, delta: true, budget: Budget::default() };
                let ds = descendants_of_cover(&g, &cover, None, &opts).unwrap();
                if let Some(f) = &ds.fused_counts {
                    assert_eq!(f, &ds.gamma_counts);
                    let d = ds.delta_counts.as_ref().unwrap();
                    for (s, &n) in &ds.gamma_counts {
                        assert!(d[s] >= n);
                    }
                }
            }
        }
    }

    #[test]
    fn small_descendants_are_sound_and_irredundant() {
        for order in [6u64, 12] {
            for g in solvable_groups_fclass1_all_ranks(order, &Budget::default()).unwrap() {
                if is_nilpotent(&g.pres) {
                    assert!(descendants(&g, None, &DescendOptions::default()).is_err());
                    continue;
                }
                let ds = descendants(&g, None, &DescendOptions::default()).unwrap();
                check_descendants(&g, &ds, 96);
            }
        }
    }

    #[test]
    fn s3_second_step() {
        let g = find(6, &symmetric3());
        let ds = descendants(&g, None, &DescendOptions::default()).unwrap();
        for h in ds.groups.iter().filter(|h| h.order() <= 24) {
            let dd = descendants(h, Some(&[2, 3]), &DescendOptions::default()).unwrap();
            check_descendants(h, &dd, 72);
        }
    }

    #[test]
    fn prune_lemma() {
        // C2 × S3: F = C6, G/O2 ≅ S3
        let c2s3 = cyclic(2).direct_product(&symmetric3());
        assert!(prune_2a3(&c2s3).unwrap());
        assert!(!prune_2a3(&symmetric4()).unwrap());
        assert!(!prune_2a3(&cyclic(12)).unwrap());
        assert!(matches!(prune_2a3(&cyclic(10)), Err(Error::WrongOrderShape(10))));
    }
}
