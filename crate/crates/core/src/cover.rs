//! Covering groups `G* = F/[R,L]R^k` of finite solvable groups, where `F/R ≅ G` is a free
//! presentation on a minimal generating set, `L` is the preimage of `F(G)` and `k` is the
//! core of the F-rank. The multiplicator `M = R/[R,L]R^k` splits into its Sylow parts `M_p`.
//!
//! The relation module is realized through the Magnus embedding of `F/R'R^p` into
//! `G ⋉ GF(p)[G]^n`: the free generator `f_j` maps to `(x_j, e_j)` and `R/R'R^p` becomes the
//! span `K` of the Schreier vectors. Conjugation by `(g, ·)` acts on `K` by right
//! multiplication with `g`, so `[R,L]R^p/R'R^p` is spanned by the vectors `k·l - k`.

use crate::cohom::{extension_multi, GModule};
use crate::linalg::{FpMatrix, QuotientMap, Subspace};
use crate::pcgroup::{f_series, f_series_with_fitting, fitting_subgroup, series::core_of, GroupTable};
use crate::pcgroup::{factorize, minimal_generating_set, PcElement, PcPresentation, PcSubgroup};
use crate::{Error, Result};

/// Largest base group order accepted for the relation-module construction.
pub const RELATION_MODULE_LIMIT: usize = 2000;

/// One Sylow part `M_p` of the multiplicator as a module for the base group.
#[derive(Clone, Debug)]
pub struct PrimeBlock {
    pub p: u32,
    /// Position of the first generator of `M_p` in the cover presentation.
    pub offset: usize,
    /// The conjugation action of the base group on `M_p`.
    pub module: GModule,
    /// Tails of the extension `M_p ↪ G*_p ↠ G`, one block per relation of the base group.
    pub tails: Vec<u32>,
}

impl PrimeBlock {
    pub fn dim(&self) -> usize {
        self.module.dim
    }
}

/// Elements `(g, v)` of `G ⋉ GF(p)[G]^n` with `g` a table index. The product is
/// `(g, v)(h, w) = (gh, v·h + w)`, where `h` permutes the group coordinates of each
/// of the n components by right multiplication.
struct Magnus<'a> {
    t: &'a GroupTable,
    p: u32,
    n: usize,
    order: usize,
    gens: Vec<u32>,
    /// Transversal vectors: `(g, d[g])` is the image of a word for `g`.
    d: Vec<Vec<u32>>,
}

type HElem = (u32, Vec<u32>);

impl<'a> Magnus<'a> {
    fn new(t: &'a GroupTable, gens: &[u32], p: u32) -> Self {
        let order = t.order();
        let n = gens.len();
        let mut m = Magnus { t, p, n, order, gens: gens.to_vec(), d: vec![Vec::new(); order] };
        m.d[0] = vec![0; n * order];
        let mut queue = std::collections::VecDeque::from([0u32]);
        let mut seen = vec![false; order];
        seen[0] = true;
        while let Some(g) = queue.pop_front() {
            for j in 0..n {
                let gx = t.mul(g, m.gens[j]);
                if !seen[gx as usize] {
                    seen[gx as usize] = true;
                    let mut v = m.act(&m.d[g as usize], m.gens[j]);
                    v[j * order] = (v[j * order] + 1) % p;
                    m.d[gx as usize] = v;
                    queue.push_back(gx);
                }
            }
        }
        debug_assert!(seen.iter().all(|&s| s), "generating set does not generate");
        m
    }

    fn dim(&self) -> usize {
        self.n * self.order
    }

    /// `v·h`.
    fn act(&self, v: &[u32], h: u32) -> Vec<u32> {
        let mut out = vec![0u32; v.len()];
        for x in 0..self.order {
            let y = self.t.mul(x as u32, h) as usize;
            for j in 0..self.n {
                out[j * self.order + y] = v[j * self.order + x];
            }
        }
        out
    }

    fn add(&self, a: &mut [u32], b: &[u32]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = (*x + y) % self.p;
        }
    }

    fn mul(&self, a: &HElem, b: &HElem) -> HElem {
        let mut v = self.act(&a.1, b.0);
        self.add(&mut v, &b.1);
        (self.t.mul(a.0, b.0), v)
    }

    fn inv(&self, a: &HElem) -> HElem {
        let gi = self.t.inv(a.0);
        let v = self.act(&a.1, gi).iter().map(|&x| (self.p - x) % self.p).collect();
        (gi, v)
    }

    fn one(&self) -> HElem {
        (0, vec![0; self.dim()])
    }

    fn pow(&self, a: &HElem, k: u64) -> HElem {
        let mut r = self.one();
        for _ in 0..k {
            r = self.mul(&r, a);
        }
        r
    }

    /// The lift `(g, d[g])` of a group element.
    fn tau(&self, g: u32) -> HElem {
        (g, self.d[g as usize].clone())
    }

    /// Spanning vectors of `R/R'R^p`: `τ_g y_j τ_{g x_j}^{-1}` for all cosets and generators.
    fn schreier_vectors(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for g in 0..self.order as u32 {
            for j in 0..self.n {
                let gx = self.t.mul(g, self.gens[j]);
                let mut w = self.act(&self.d[g as usize], self.gens[j]);
                w[j * self.order] = (w[j * self.order] + 1) % self.p;
                for (a, &b) in w.iter_mut().zip(&self.d[gx as usize]) {
                    *a = (*a + self.p - b) % self.p;
                }
                let s = self.act(&w, self.t.inv(gx));
                if s.iter().any(|&x| x != 0) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// Image of a pc word `Π τ_{g_k}^{e_k}`.
    fn word(&self, lifts: &[HElem], e: &[u32]) -> HElem {
        let mut r = self.one();
        for (k, &x) in e.iter().enumerate() {
            for _ in 0..x {
                r = self.mul(&r, &lifts[k]);
            }
        }
        r
    }
}

/// Per-prime data kept for lifting automorphisms and rewriting elements into the cover.
#[derive(Clone, Debug)]
struct PrimeData {
    p: u32,
    quotient: QuotientMap,
    d: Vec<Vec<u32>>,
}

/// A covering group with its multiplicator, nucleus and epimorphism data.
#[derive(Clone, Debug)]
pub struct CoverRecord {
    pub base: PcPresentation,
    /// The minimal generating set of the base group used for the free presentation.
    pub gens: Vec<PcElement>,
    /// Pc presentation of `G*`: the generators of the base group followed by the blocks.
    pub cover: PcPresentation,
    pub blocks: Vec<PrimeBlock>,
    /// `N = ν_c(G*)`, with `c` the F-class of the base group.
    pub nucleus: PcSubgroup,
    /// `N_p` in the coordinates of each block.
    pub nucleus_parts: Vec<Subspace>,
    pub f_class: usize,
    table: GroupTable,
    data: Vec<PrimeData>,
}

/// The rank of `R/R'R^p` for the free presentation of `g` on `gens`, computed from the
/// Schreier vectors.
pub fn relation_module_rank(g: &PcPresentation, gens: &[PcElement], p: u32) -> Result<usize> {
    let t = table_for(g)?;
    let gi: Vec<u32> = gens.iter().map(|x| t.index(x)).collect();
    let m = Magnus::new(&t, &gi, p);
    let sv = m.schreier_vectors();
    Ok(Subspace::from_vectors(p, m.dim(), &sv).dim())
}

fn table_for(g: &PcPresentation) -> Result<GroupTable> {
    if g.order() as usize > RELATION_MODULE_LIMIT {
        return Err(Error::CapExceeded(format!("relation module of a group of order {} exceeds the cap", g.order())));
    }
    GroupTable::new(g)
}

fn check_generates(t: &GroupTable, gens: &[u32]) -> Result<()> {
    if t.closure(gens).len() != t.order() {
        return Err(Error::Invalid("elements do not generate the group".into()));
    }
    Ok(())
}

fn prime_data(t: &GroupTable, gens: &[u32], fit_gens: &[u32], p: u32) -> Result<PrimeData> {
    let m = Magnus::new(t, gens, p);
    let order = t.order();
    let n = gens.len();
    let k_rows = m.schreier_vectors();
    let k = Subspace::from_vectors(p, m.dim(), &k_rows);
    let expected = (n - 1) * order + 1;
    if k.dim() != expected {
        return Err(Error::Inconsistent(format!("relation module has rank {} instead of {expected}", k.dim())));
    }
    let kb = k.basis_vecs();
    let mut kil = Vec::with_capacity(kb.len() * fit_gens.len());
    for b in &kb {
        for &l in fit_gens {
            let mut v = m.act(b, l);
            for (x, &y) in v.iter_mut().zip(b) {
                *x = (*x + p - y) % p;
            }
            kil.push(v);
        }
    }
    let quotient = QuotientMap::new(p, m.dim(), &kil, &kb);
    Ok(PrimeData { p, quotient, d: m.d })
}

/// The module `M_p` and the tails of `G*_p` over the base group.
fn block_of(t: &GroupTable, gens: &[u32], pd: &PrimeData, offset: usize) -> Result<PrimeBlock> {
    let g = t.pres();
    let m = magnus_from(t, gens, pd);
    let lifts: Vec<HElem> = (0..g.len()).map(|k| m.tau(t.index(&g.gen(k)))).collect();
    let dim = pd.quotient.dim();
    let p = pd.p;
    let mats = lifts
        .iter()
        .map(|h| {
            let rows: Vec<Vec<u32>> = pd.quotient.complement.iter().map(|b| pd.quotient.project(&m.act(b, h.0))).collect();
            FpMatrix::from_rows(p, dim, &rows)
        })
        .collect();
    let module = GModule::new(g.clone(), p, dim, mats)?;
    let mut tails = Vec::new();
    for (i, j) in crate::cohom::relations(g.len()) {
        let (lhs, w) = if i == j {
            (m.pow(&lifts[i], g.rel_orders()[i] as u64), g.power(i))
        } else {
            (m.mul(&m.mul(&m.inv(&lifts[i]), &lifts[j]), &lifts[i]), g.conjugate(j, i))
        };
        let rhs = m.word(&lifts, w);
        let u = m.mul(&m.inv(&rhs), &lhs);
        debug_assert_eq!(u.0, 0);
        tails.extend(pd.quotient.project(&u.1));
    }
    Ok(PrimeBlock { p, offset, module, tails })
}

fn magnus_from<'a>(t: &'a GroupTable, gens: &[u32], pd: &PrimeData) -> Magnus<'a> {
    Magnus { t, p: pd.p, n: gens.len(), order: t.order(), gens: gens.to_vec(), d: pd.d.clone() }
}

fn fitting_gens(t: &GroupTable, g: &PcPresentation) -> Vec<u32> {
    fitting_subgroup(g).gens().iter().map(|x| t.index(x)).collect()
}

/// The p-covering group `G*_p = F/[R,L]R^p` on the given generating set, as an extension
/// of `g` by `M_p`.
pub fn p_covering_group(g: &PcPresentation, p: u32, gens: &[PcElement]) -> Result<(PcPresentation, PrimeBlock)> {
    let t = table_for(g)?;
    let gi: Vec<u32> = gens.iter().map(|x| t.index(x)).collect();
    check_generates(&t, &gi)?;
    let pd = prime_data(&t, &gi, &fitting_gens(&t, g), p)?;
    let block = block_of(&t, &gi, &pd, g.len())?;
    let e = extension_multi(g, &[&block.module], &[&block.tails])?;
    Ok((e, block))
}

/// The covering group on a minimal generating set.
pub fn covering_group(g: &PcPresentation) -> Result<CoverRecord> {
    covering_group_on(g, &minimal_generating_set(g))
}

/// The covering group on a given generating set.
pub fn covering_group_on(g: &PcPresentation, gens: &[PcElement]) -> Result<CoverRecord> {
    let fs = f_series(g);
    if fs.f_class < 1 {
        return Err(Error::Invalid("the covering group needs F-class at least 1".into()));
    }
    let t = table_for(g)?;
    let gi: Vec<u32> = gens.iter().map(|x| t.index(x)).collect();
    check_generates(&t, &gi)?;
    let fit: Vec<u32> = fs.fitting().gens().iter().map(|x| t.index(x)).collect();
    let primes: Vec<u32> = factorize(core_of(fs.f_rank)).iter().map(|&(p, _)| p as u32).collect();
    let mut data = Vec::new();
    let mut blocks = Vec::new();
    let mut offset = g.len();
    for &p in &primes {
        let pd = prime_data(&t, &gi, &fit, p)?;
        let b = block_of(&t, &gi, &pd, offset)?;
        offset += b.dim();
        blocks.push(b);
        data.push(pd);
    }
    let modules: Vec<&GModule> = blocks.iter().map(|b| &b.module).collect();
    let tails: Vec<&[u32]> = blocks.iter().map(|b| b.tails.as_slice()).collect();
    let cover = extension_multi(g, &modules, &tails)?;
    // F(G*) is the full preimage of F(G): M is central in it modulo nothing else
    let mut fit_star: Vec<PcElement> = fs.fitting().gens().iter().map(|x| pad(x, cover.len())).collect();
    fit_star.extend((g.len()..cover.len()).map(|i| cover.gen(i)));
    let fit_star = PcSubgroup::from_generators(&cover, &fit_star);
    let series = f_series_with_fitting(&cover, &fit_star);
    let c = fs.f_class;
    let nucleus = if series.terms.len() > c + 1 { series.nu(c).clone() } else { PcSubgroup::trivial() };
    let nucleus_parts = blocks
        .iter()
        .map(|b| {
            let vecs: Vec<Vec<u32>> =
                nucleus.gens().iter().map(|x| x[b.offset..b.offset + b.dim()].to_vec()).collect();
            Subspace::from_vectors(b.p, b.dim(), &vecs)
        })
        .collect();
    Ok(CoverRecord { base: g.clone(), gens: gens.to_vec(), cover, blocks, nucleus, nucleus_parts, f_class: c, table: t, data })
}

fn pad(x: &[u32], len: usize) -> PcElement {
    let mut v = vec![0u32; len];
    v[..x.len()].copy_from_slice(x);
    v
}

impl CoverRecord {
    /// Number of generators of the free presentation.
    pub fn n(&self) -> usize {
        self.gens.len()
    }

    /// Number of pc generators of the base group.
    pub fn n_top(&self) -> usize {
        self.base.len()
    }

    pub fn multiplicator_order(&self) -> u128 {
        self.blocks.iter().map(|b| (b.p as u128).pow(b.dim() as u32)).product()
    }

    pub fn nucleus_order(&self) -> u128 {
        self.nucleus_parts.iter().map(|s| (s.p() as u128).pow(s.dim() as u32)).product()
    }

    pub fn multiplicator(&self) -> PcSubgroup {
        let gens: Vec<PcElement> = (self.n_top()..self.cover.len()).map(|i| self.cover.gen(i)).collect();
        PcSubgroup::from_generators(&self.cover, &gens)
    }

    /// The natural epimorphism `G* → G`.
    pub fn project(&self, x: &[u32]) -> PcElement {
        x[..self.n_top()].to_vec()
    }

    /// Block coordinates of an element of M.
    pub fn block_coords(&self, x: &[u32], b: usize) -> Vec<u32> {
        let bl = &self.blocks[b];
        x[bl.offset..bl.offset + bl.dim()].to_vec()
    }

    /// The element of M with the given coordinates in block `b`.
    pub fn block_element(&self, b: usize, coords: &[u32]) -> PcElement {
        let bl = &self.blocks[b];
        let mut v = self.cover.identity();
        v[bl.offset..bl.offset + bl.dim()].copy_from_slice(coords);
        v
    }

    /// A lift to `G*` of an automorphism of the base group given by the images of its pc
    /// generators. The free generator `f_j` is sent to the transversal lift of `β(x_j)`
    /// times a correction `c_j ∈ M`; this induces an endomorphism of `G*`, and the
    /// corrections are searched (sparsest first) until it is bijective on `M`.
    pub fn lift_automorphism(&self, images: &[PcElement]) -> Result<Vec<PcElement>> {
        let g = &self.base;
        let t = &self.table;
        let order = t.order();
        let beta: Vec<u32> = (0..order as u32).map(|x| t.index(&g.eval_exps(images, &t.elem(x)))).collect();
        let gi: Vec<u32> = self.gens.iter().map(|x| t.index(x)).collect();
        let n_top = self.n_top();
        let mut top: Vec<PcElement> =
            (0..n_top).map(|k| pad(&t.elem(beta[t.index(&g.gen(k)) as usize]), self.cover.len())).collect();
        let mut bottom: Vec<PcElement> = Vec::new();
        for (b, pd) in self.blocks.iter().zip(&self.data) {
            let m = magnus_from(t, &gi, pd);
            let p = pd.p;
            let dim = b.dim();
            let n = m.n;
            // v ↦ Σ_{j,h} v_{j,h} · w_j·β(h)
            let apply = |v: &[u32], w: &[Vec<u32>]| -> Vec<u32> {
                let mut out = vec![0u32; m.dim()];
                for j in 0..n {
                    for h in 0..order {
                        let c = v[j * order + h];
                        if c != 0 {
                            let y = m.act(&w[j], beta[h]);
                            for (o, &x) in out.iter_mut().zip(&y) {
                                *o = (*o + c * x) % p;
                            }
                        }
                    }
                }
                out
            };
            let d0: Vec<Vec<u32>> = gi.iter().map(|&x| pd.d[beta[x as usize] as usize].clone()).collect();
            let comp = &pd.quotient.complement;
            let a0 = FpMatrix::from_rows(p, dim, &comp.iter().map(|v| pd.quotient.project(&apply(v, &d0))).collect::<Vec<_>>());
            // contribution of the correction c_j = e_s to the restriction to M
            let mut parts = Vec::with_capacity(n * dim);
            for j in 0..n {
                for s in 0..dim {
                    let mut w = vec![vec![0u32; m.dim()]; n];
                    w[j] = comp[s].clone();
                    let rows: Vec<Vec<u32>> = comp.iter().map(|v| pd.quotient.project(&apply(v, &w))).collect();
                    parts.push(FpMatrix::from_rows(p, dim, &rows));
                }
            }
            let c = search_correction(p, &a0, &parts).ok_or_else(|| {
                Error::Inconsistent("no correction makes the lifted endomorphism bijective".into())
            })?;
            let dj: Vec<Vec<u32>> = (0..n)
                .map(|j| {
                    let mut v = d0[j].clone();
                    let corr = pd.quotient.lift(&c[j * dim..(j + 1) * dim]);
                    for (x, &y) in v.iter_mut().zip(&corr) {
                        *x = (*x + y) % p;
                    }
                    v
                })
                .collect();
            let lifts: Vec<HElem> = (0..n_top).map(|k| m.tau(t.index(&g.gen(k)))).collect();
            for k in 0..n_top {
                // Φ(τ_{g_k}) = (β(g_k), φ(d_{g_k})), divided by the lift of β(g_k)
                let img: HElem = (beta[lifts[k].0 as usize], apply(&lifts[k].1, &dj));
                let word = m.word(&lifts, &t.elem(img.0));
                let u = m.mul(&m.inv(&word), &img);
                debug_assert_eq!(u.0, 0);
                top[k][b.offset..b.offset + dim].copy_from_slice(&pd.quotient.project(&u.1));
            }
            for basis in comp {
                let mut v = self.cover.identity();
                v[b.offset..b.offset + dim].copy_from_slice(&pd.quotient.project(&apply(basis, &dj)));
                bottom.push(v);
            }
        }
        top.extend(bottom);
        if !crate::pcgroup::aut::respects_relations(&self.cover, &self.cover, &top) {
            return Err(Error::Inconsistent("lifted automorphism violates a cover relation".into()));
        }
        Ok(top)
    }
}

/// Most correction vectors tried before giving up.
const CORRECTION_TRIES: usize = 1 << 20;

/// A vector `c` with `a0 + Σ c_i parts[i]` invertible, trying supports of increasing size.
fn search_correction(p: u32, a0: &FpMatrix, parts: &[FpMatrix]) -> Option<Vec<u32>> {
    let k = parts.len();
    let full = a0.rows();
    let eval = |c: &[u32]| -> bool {
        let mut a = a0.clone();
        for (ci, m) in c.iter().zip(parts) {
            if *ci != 0 {
                a = a.add(&m.scale(*ci));
            }
        }
        a.rank() == full
    };
    let mut tries = 0usize;
    for w in 0..=k {
        for support in crate::linalg::combinations(k, w) {
            let mut vals = vec![1u32; w];
            loop {
                let mut c = vec![0u32; k];
                for (&i, &v) in support.iter().zip(&vals) {
                    c[i] = v;
                }
                if eval(&c) {
                    return Some(c);
                }
                tries += 1;
                if tries > CORRECTION_TRIES {
                    return None;
                }
                // next assignment of nonzero values
                let mut i = 0;
                loop {
                    if i == w {
                        break;
                    }
                    vals[i] += 1;
                    if vals[i] < p {
                        break;
                    }
                    vals[i] = 1;
                    i += 1;
                }
                if i == w {
                    break;
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::examples::*;
    use crate::pcgroup::{brute_force_isomorphic, series::Quotient};

    #[test]
    fn cyclic_two_covers_to_cyclic_four() {
        let g = cyclic(2);
        let gens = vec![g.gen(0)];
        assert_eq!(relation_module_rank(&g, &gens, 2).unwrap(), 1);
        let (e, b) = p_covering_group(&g, 2, &gens).unwrap();
        assert_eq!(b.dim(), 1);
        assert!(brute_force_isomorphic(&e, &cyclic(4)).unwrap().is_some());
    }

    #[test]
    fn symmetric4_cover() {
        let g = symmetric4();
        let c = covering_group(&g).unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.multiplicator_order(), 1 << 8);
        assert_eq!(c.nucleus_order(), 1 << 3);
        assert!(c.cover.check_consistency().is_ok());
        // G*/M ≅ G
        let q = Quotient::new(&c.cover, &c.multiplicator());
        assert!(brute_force_isomorphic(&q.pres, &g).unwrap().is_some());
    }

    #[test]
    fn schreier_rank_identity() {
        for g in [symmetric3(), alternating4(), dihedral8(), quaternion8(), symmetric4()] {
            let gens = minimal_generating_set(&g);
            for p in [2u32, 3, 5] {
                let r = relation_module_rank(&g, &gens, p).unwrap();
                assert_eq!(r, 1 + (gens.len() - 1) * g.order() as usize);
            }
        }
    }

    #[test]
    fn multiplicator_central_in_fitting_preimage() {
        for g in [symmetric3(), alternating4(), symmetric4()] {
            let c = covering_group(&g).unwrap();
            let fit = fitting_subgroup(&g);
            for x in fit.gens() {
                let xs = pad(x, c.cover.len());
                for i in c.n_top()..c.cover.len() {
                    let m = c.cover.gen(i);
                    assert_eq!(c.cover.comm(&xs, &m), c.cover.identity());
                }
            }
        }
    }

    #[test]
    fn automorphisms_lift() {
        let g = symmetric4();
        let c = covering_group(&g).unwrap();
        let auts = crate::pcgroup::automorphism_group_brute_force(&g).unwrap();
        for a in auts.iter().take(24) {
            let im = c.lift_automorphism(&a.images).unwrap();
            let pres = std::sync::Arc::new(c.cover.clone());
            let l = crate::pcgroup::PcAut { pres, images: im };
            assert!(l.is_automorphism());
            for k in 0..g.len() {
                assert_eq!(c.project(&l.images[k]), a.images[k]);
            }
        }
    }

    #[test]
    fn independent_of_generating_set() {
        let g = symmetric3();
        let t = GroupTable::new(&g).unwrap();
        let mut covers = Vec::new();
        for pair in [(1u32, 2u32), (1, 4), (3, 5), (2, 3)] {
            let gens = vec![t.elem(pair.0), t.elem(pair.1)];
            if t.closure(&[pair.0, pair.1]).len() != 6 {
                continue;
            }
            covers.push(covering_group_on(&g, &gens).unwrap().cover);
        }
        assert!(covers.len() >= 2);
        for w in covers.windows(2) {
            assert!(brute_force_isomorphic(&w[0], &w[1]).unwrap().is_some());
        }
    }
}
