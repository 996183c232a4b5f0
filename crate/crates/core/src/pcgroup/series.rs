use super::table::GroupTable;
use super::{factorize, GroupHom, PcElement, PcPresentation, PcSubgroup};
use crate::linalg::FpMatrix;
use crate::{Error, Result};
use std::sync::Arc;

/// Product of the distinct primes dividing `n`.
pub fn core_of(n: u64) -> u64 {
    factorize(n).iter().map(|&(p, _)| p).product()
}

/// The F-central series `G ≥ ν₀ ≥ ν₁ ≥ … ≥ ν_c = 1` with `terms[0] = G` and `terms[i+1] = ν_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSeries {
    pub terms: Vec<PcSubgroup>,
    pub f_class: usize,
    /// `|ν₀/ν₁|`, or 0 for the trivial group.
    pub f_rank: u64,
}

impl FSeries {
    pub fn nu(&self, i: usize) -> &PcSubgroup {
        &self.terms[i + 1]
    }
    pub fn fitting(&self) -> &PcSubgroup {
        &self.terms[1]
    }
}

pub fn fitting_subgroup(g: &PcPresentation) -> PcSubgroup {
    let t = GroupTable::new(g).expect("group small enough for element tables");
    t.to_pc_subgroup(&t.fitting())
}

pub fn f_series(g: &PcPresentation) -> FSeries {
    let fit = fitting_subgroup(g);
    f_series_with_fitting(g, &fit)
}

/// The F-central series computed from a known Fitting subgroup.
pub fn f_series_with_fitting(g: &PcPresentation, fit: &PcSubgroup) -> FSeries {
    let whole = PcSubgroup::whole(g);
    if g.is_empty() {
        return FSeries { terms: vec![whole.clone(), whole], f_class: 0, f_rank: 0 };
    }
    let k = core_of(fit.order(g));
    let mut terms = vec![whole, fit.clone()];
    while !terms.last().unwrap().is_trivial() {
        let nu = terms.last().unwrap();
        terms.push(next_nu(g, fit, nu, k));
    }
    let f_class = terms.len() - 2;
    let f_rank = terms[1].order(g) / terms[2].order(g);
    FSeries { terms, f_class, f_rank }
}

/// `[F, ν]·ν^k`; modulo `[F, ν]` the group ν is abelian, so powers of generators suffice.
pub fn next_nu(g: &PcPresentation, fit: &PcSubgroup, nu: &PcSubgroup, k: u64) -> PcSubgroup {
    let c = PcSubgroup::commutator(g, fit, nu);
    let pw: Vec<PcElement> = nu.gens().iter().map(|h| g.pow(h, k)).collect();
    c.normal_join(g, &pw)
}

pub fn frattini_subgroup(g: &PcPresentation) -> PcSubgroup {
    let t = GroupTable::new(g).expect("group small enough for element tables");
    t.to_pc_subgroup(&t.frattini())
}

pub fn is_nilpotent(g: &PcPresentation) -> bool {
    let whole = PcSubgroup::whole(g);
    let mut cur = whole.clone();
    loop {
        let next = PcSubgroup::commutator(g, &cur, &whole);
        if next.is_trivial() {
            return true;
        }
        if next == cur {
            return false;
        }
        cur = next;
    }
}

pub fn derived_series(g: &PcPresentation) -> Vec<PcSubgroup> {
    let mut s = vec![PcSubgroup::whole(g)];
    while !s.last().unwrap().is_trivial() {
        let d = s.last().unwrap();
        s.push(PcSubgroup::commutator(g, d, d));
    }
    s
}

pub fn centralizer_in(g: &PcPresentation, s: &PcSubgroup) -> PcSubgroup {
    let t = GroupTable::new(g).expect("group small enough for element tables");
    let xs: Vec<u32> = s.gens().iter().map(|x| t.index(x)).collect();
    t.to_pc_subgroup(&t.centralizer(&xs))
}

pub fn sylow_subgroup(g: &PcPresentation, p: u64) -> PcSubgroup {
    let t = GroupTable::new(g).expect("group small enough for element tables");
    t.to_pc_subgroup(&t.sylow(p))
}

/// Largest normal p-subgroup.
pub fn o_p(g: &PcPresentation, p: u64) -> PcSubgroup {
    let t = GroupTable::new(g).expect("group small enough for element tables");
    t.to_pc_subgroup(&t.o_p(p))
}

/// The quotient `G/N` with its natural epimorphism.
pub fn quotient(g: &PcPresentation, n: &PcSubgroup) -> Result<(PcPresentation, GroupHom)> {
    n.require_normal(g)?;
    let q = Quotient::new(g, n);
    let images = (0..g.len()).map(|i| q.project(&g.gen(i))).collect();
    let hom = GroupHom { source: Arc::new(g.clone()), target: Arc::new(q.pres.clone()), images };
    Ok((q.pres, hom))
}

/// Presentation of `G/N` on the pc generators at depths outside N, with the projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub pres: PcPresentation,
    pub n: PcSubgroup,
    /// Depths of G that survive, in order.
    pub keep: Vec<usize>,
    source: PcPresentation,
}

impl Quotient {
    /// Assumes N normal.
    pub fn new(g: &PcPresentation, n: &PcSubgroup) -> Self {
        let nd = n.depths(g);
        let keep: Vec<usize> = (0..g.len()).filter(|d| !nd.contains(d)).collect();
        let mut pos = vec![usize::MAX; g.len()];
        for (k, &d) in keep.iter().enumerate() {
            pos[d] = k;
        }
        let m = keep.len();
        let map = |x: &PcElement| -> PcElement {
            let y = n.reduce_mod(g, x);
            keep.iter().map(|&d| y[d]).collect()
        };
        let rel: Vec<u32> = keep.iter().map(|&d| g.rel_orders()[d]).collect();
        let mut powers = Vec::with_capacity(m);
        let mut conj = Vec::with_capacity(m);
        for (a, &i) in keep.iter().enumerate() {
            powers.push(map(&g.pow(&g.gen(i), g.rel_orders()[i] as u64)));
            let row = keep[..a].iter().map(|&k| map(&g.conj(&g.gen(i), &g.gen(k)))).collect();
            conj.push(row);
        }
        let pres = PcPresentation::new_unchecked(rel, powers, conj).expect("quotient relations are normal words");
        debug_assert!(pres.check_consistency().is_ok());
        Quotient { pres, n: n.clone(), keep, source: g.clone() }
    }

    pub fn project(&self, x: &[u32]) -> PcElement {
        let y = self.n.reduce_mod(&self.source, x);
        self.keep.iter().map(|&d| y[d]).collect()
    }

    /// The canonical preimage with zero exponents at the depths of N.
    pub fn lift(&self, x: &[u32]) -> PcElement {
        let mut y = self.source.identity();
        for (k, &d) in self.keep.iter().enumerate() {
            y[d] = x[k];
        }
        y
    }

    /// Image of a subgroup of G.
    pub fn project_subgroup(&self, s: &PcSubgroup) -> PcSubgroup {
        let gens: Vec<PcElement> = s.gens().iter().map(|x| self.project(x)).collect();
        PcSubgroup::from_generators(&self.pres, &gens)
    }
}

/// A generating set of minimal size. The search runs in `G/ν₁(G)`, which has the same
/// minimal number of generators because ν₁ lies in the Frattini subgroup.
pub fn minimal_generating_set(g: &PcPresentation) -> Vec<PcElement> {
    if g.is_empty() {
        return Vec::new();
    }
    let fs = f_series(g);
    let q = Quotient::new(g, fs.nu(1));
    let t = GroupTable::new(&q.pres).expect("Frattini-free quotient small enough for element tables");
    let lower = factorize(t.order() as u64).iter().map(|&(p, _)| t.frattini_rank(p)).max().unwrap_or(0).max(1);
    for k in lower.. {
        if let Some(tuple) = t.find_generating_tuple(k) {
            return tuple.iter().map(|&x| q.lift(&t.elem(x))).collect();
        }
    }
    unreachable!()
}

/// An elementary abelian section `U/L` of G with both terms normal, with coordinates
/// relative to a fixed basis.
#[derive(Clone, Debug)]
pub struct Section {
    pub p: u32,
    pub upper: PcSubgroup,
    pub lower: PcSubgroup,
    /// Basis elements of U at the depths outside L.
    pub basis: Vec<PcElement>,
    basis_depths: Vec<usize>,
    lower_rows: Vec<Option<PcElement>>,
    upper_rows: Vec<Option<usize>>,
}

impl Section {
    pub fn new(g: &PcPresentation, upper: &PcSubgroup, lower: &PcSubgroup) -> Result<Self> {
        if !upper.contains_subgroup(g, lower) {
            return Err(Error::Invalid("lower term not contained in upper".into()));
        }
        let ld = lower.depths(g);
        let mut basis = Vec::new();
        let mut basis_depths = Vec::new();
        let mut upper_rows = vec![None; g.len()];
        for h in upper.gens() {
            let d = g.depth(h);
            if !ld.contains(&d) {
                upper_rows[d] = Some(basis.len());
                basis.push(h.clone());
                basis_depths.push(d);
            }
        }
        let mut lower_rows = vec![None; g.len()];
        for h in lower.gens() {
            lower_rows[g.depth(h)] = Some(h.clone());
        }
        let ps: Vec<u32> = basis_depths.iter().map(|&d| g.rel_orders()[d]).collect();
        let p = ps.first().copied().unwrap_or(2);
        if ps.iter().any(|&q| q != p) {
            return Err(Error::Invalid("section is not a p-group".into()));
        }
        let s = Section { p, upper: upper.clone(), lower: lower.clone(), basis, basis_depths, lower_rows, upper_rows };
        for a in &s.basis {
            if s.coords(g, &g.pow(a, p as u64)).iter().any(|&e| e != 0) {
                return Err(Error::Invalid("section is not elementary abelian".into()));
            }
            for b in &s.basis {
                if s.coords(g, &g.comm(a, b)).iter().any(|&e| e != 0) {
                    return Err(Error::Invalid("section is not abelian".into()));
                }
            }
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_depths(&self) -> &[usize] {
        &self.basis_depths
    }

    /// Coordinates of `x ∈ U` modulo L. Panics if x lies outside U.
    pub fn coords(&self, g: &PcPresentation, x: &[u32]) -> Vec<u32> {
        let mut v = vec![0u32; self.dim()];
        let mut y = x.to_vec();
        loop {
            let d = g.depth(&y);
            if d == g.len() {
                return v;
            }
            let (h, record) = if let Some(k) = self.upper_rows[d] {
                (&self.basis[k], Some(k))
            } else if let Some(h) = &self.lower_rows[d] {
                (h, None)
            } else {
                panic!("element outside the section's upper term");
            };
            let e = y[d];
            if let Some(k) = record {
                v[k] = e;
            }
            let k = g.rel_orders()[d] - e;
            for _ in 0..k {
                y = g.mul(&y, h);
            }
        }
    }

    pub fn element(&self, g: &PcPresentation, v: &[u32]) -> PcElement {
        let mut x = g.identity();
        for (b, &e) in self.basis.iter().zip(v) {
            if e != 0 {
                x = g.mul(&x, &g.pow(b, e as u64));
            }
        }
        x
    }

    /// Matrix of conjugation by `c` on the section: row k is the image of basis vector k.
    pub fn action_of(&self, g: &PcPresentation, c: &[u32]) -> FpMatrix {
        let rows: Vec<Vec<u32>> = self.basis.iter().map(|b| self.coords(g, &g.conj(b, c))).collect();
        FpMatrix::from_rows(self.p, self.dim(), &rows)
    }
}

/// Conjugation action of the pc generators of G on an elementary abelian normal section,
/// one matrix per generator acting on row vectors from the right.
pub fn conjugation_action_on_module(
    g: &PcPresentation,
    upper: &PcSubgroup,
    lower: &PcSubgroup,
) -> Result<(Section, Vec<FpMatrix>)> {
    upper.require_normal(g)?;
    lower.require_normal(g)?;
    let s = Section::new(g, upper, lower)?;
    let mats = (0..g.len()).map(|i| s.action_of(g, &g.gen(i))).collect();
    Ok((s, mats))
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::super::brute_force_isomorphic;
    use super::*;

    #[test]
    fn core_examples() {
        assert_eq!(core_of(12), 6);
        assert_eq!(core_of(1), 1);
        assert_eq!(core_of(2304), 6);
    }

    #[test]
    fn fitting_examples() {
        let s4 = symmetric4();
        assert_eq!(fitting_subgroup(&s4).order(&s4), 4);
        let s3 = symmetric3();
        assert_eq!(fitting_subgroup(&s3).order(&s3), 3);
        let d8 = dihedral8();
        assert_eq!(fitting_subgroup(&d8).order(&d8), 8);
    }

    #[test]
    fn f_series_examples() {
        let s = f_series(&symmetric4());
        assert_eq!((s.f_class, s.f_rank), (1, 4));
        let s = f_series(&dihedral8());
        assert_eq!((s.f_class, s.f_rank), (2, 4));
        let s = f_series(&cyclic(6));
        assert_eq!((s.f_class, s.f_rank), (1, 6));
        let s = f_series(&PcPresentation::trivial());
        assert_eq!((s.f_class, s.f_rank), (0, 0));
    }

    #[test]
    fn frattini_examples() {
        let g = elementary_abelian(3, 2);
        assert!(frattini_subgroup(&g).is_trivial());
        let g = cyclic(4);
        assert_eq!(frattini_subgroup(&g).order(&g), 2);
        let g = symmetric4();
        assert!(frattini_subgroup(&g).is_trivial());
    }

    #[test]
    fn quotient_examples() {
        let s4 = symmetric4();
        let v4 = fitting_subgroup(&s4);
        let (q, hom) = quotient(&s4, &v4).unwrap();
        assert_eq!(q.order(), 6);
        assert!(hom.respects_relations());
        assert_eq!(hom.kernel(), v4);
        assert!(brute_force_isomorphic(&q, &symmetric3()).unwrap().is_some());
        let (q, _) = quotient(&s4, &PcSubgroup::whole(&s4)).unwrap();
        assert_eq!(q.order(), 1);
        let (q, _) = quotient(&s4, &PcSubgroup::trivial()).unwrap();
        assert_eq!(q, s4);
        let sub = PcSubgroup::from_generators(&s4, &[s4.gen(0)]);
        assert!(matches!(quotient(&s4, &sub), Err(Error::NotNormal)));
    }

    #[test]
    fn minimal_generating_sets() {
        assert_eq!(minimal_generating_set(&elementary_abelian(2, 2)).len(), 2);
        assert_eq!(minimal_generating_set(&symmetric4()).len(), 2);
        assert_eq!(minimal_generating_set(&cyclic(6)).len(), 1);
        let g = elementary_abelian(2, 3).direct_product(&symmetric3());
        let m = minimal_generating_set(&g);
        assert_eq!(m.len(), 4);
        assert_eq!(PcSubgroup::from_generators(&g, &m).order(&g), g.order());
    }

    #[test]
    fn module_action_of_s4_on_v4() {
        let s4 = symmetric4();
        let v4 = fitting_subgroup(&s4);
        let (sec, mats) = conjugation_action_on_module(&s4, &v4, &PcSubgroup::trivial()).unwrap();
        assert_eq!(sec.dim(), 2);
        for x in v4.elements(&s4) {
            assert_eq!(sec.element(&s4, &sec.coords(&s4, &x)), x);
        }
        // the action is faithful modulo V4, through S3
        let nontrivial = mats.iter().filter(|m| !m.is_identity()).count();
        assert_eq!(nontrivial, 2);
    }

    #[test]
    fn nilpotency() {
        assert!(is_nilpotent(&dihedral8()));
        assert!(is_nilpotent(&cyclic(12)));
        assert!(!is_nilpotent(&symmetric3()));
    }
}
