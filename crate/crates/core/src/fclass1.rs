//! Solvable groups of F-class 1: extensions of an elementary abelian product `A` by the
//! F-relevant solvable subgroups `U ≤ Aut(A)`, one per `N(U)`-orbit on `H²(U, A)`.

use crate::cohom::{cohomology, extension_multi, lift_automorphism, normalizer_action_on_h2, CohomologySpace, GModule};
use crate::finite::{orbit_stabilizer_sized, GroupElem, PcModel};
use crate::linalg::FpMatrix;
use crate::matgrp::{solvable_subgroups_of_product, AutAGroup, GlSubgroups, MatTuple, SubgroupClass};
use crate::pcgroup::{f_series, factorize, PcElement, PcPresentation};
use crate::{Budget, Error, Result};
use serde::{Deserialize, Serialize};

/// Stabilizers up to this order are generated minimally; larger ones keep all Schreier
/// generators.
pub const STAB_CLOSURE_LIMIT: usize = 20_000;

/// Where a constructed group came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// F-class 1: rank ℓ, index of the U-class, H² orbit representative per prime.
    FClass1 { rank: u64, class_index: usize, h2_rep: Vec<Vec<u32>> },
    /// A descendant of a parent group with the given stepsize and orbit index.
    Descendant { parent: Option<(u64, usize)>, stepsize: u64, orbit_index: usize },
}

/// A group produced by the engine with its automorphism generators.
#[derive(Clone, Debug)]
pub struct ConstructedGroup {
    pub pres: PcPresentation,
    pub f_class: usize,
    pub f_rank: u64,
    /// Automorphism generators as images of the pc generators.
    pub aut_gens: Vec<Vec<PcElement>>,
    pub provenance: Provenance,
}

impl ConstructedGroup {
    pub fn order(&self) -> u64 {
        self.pres.order()
    }

    /// Checks the stored F-series data and every automorphism generator.
    pub fn verify(&self) -> Result<()> {
        self.pres.check_consistency()?;
        let fs = f_series(&self.pres);
        if (fs.f_class, fs.f_rank) != (self.f_class, self.f_rank) {
            return Err(Error::Inconsistent(format!(
                "stored F-class/rank ({}, {}) but computed ({}, {})",
                self.f_class, self.f_rank, fs.f_class, fs.f_rank
            )));
        }
        for a in &self.aut_gens {
            if !crate::pcgroup::aut::respects_relations(&self.pres, &self.pres, a) {
                return Err(Error::Inconsistent("automorphism generator violates a relation".into()));
            }
            let pres = std::sync::Arc::new(self.pres.clone());
            if !crate::pcgroup::aut::GroupHom::new(pres.clone(), pres, a.clone())?.is_injective() {
                return Err(Error::Inconsistent("automorphism generator is not bijective".into()));
            }
        }
        Ok(())
    }
}

/// The elementary abelian factors `(d_i, p_i)` of an abelian group of order ℓ with
/// square-free exponent.
pub fn factors_of_rank(l: u64) -> Vec<(usize, u32)> {
    factorize(l).iter().map(|&(p, e)| (e as usize, p as u32)).collect()
}

/// Conjugacy classes in `Aut(A)`, `|A| = ℓ`, of solvable F-relevant subgroups of order `m`,
/// each with its normalizer.
pub fn relevant_solvable_subgroups(l: u64, m: usize, budget: &Budget) -> Result<Vec<SubgroupClass>> {
    if l < 2 {
        return Err(Error::Invalid("F-rank must be at least 2".into()));
    }
    let factors = factors_of_rank(l);
    let mut cache: Vec<GlSubgroups> = factors.iter().map(|&(d, p)| GlSubgroups::new(d, p, budget.elements)).collect();
    solvable_subgroups_of_product(&factors, m, &mut cache, true, budget.elements)
}

/// U as a pc group together with the modules `A_i` it acts on.
struct RealizedClass {
    model: PcModel<MatTuple>,
    modules: Vec<GModule>,
}

fn realize(cls: &SubgroupClass, factors: &[(usize, u32)], budget: &Budget) -> Result<RealizedClass> {
    let one = MatTuple::identity(factors);
    let model = PcModel::new(&one, &cls.gens, budget.elements)?;
    let modules = factors
        .iter()
        .enumerate()
        .map(|(i, &(d, p))| {
            let mats = model.pcgs.iter().map(|g| g.0[i].clone()).collect();
            GModule::new(model.pres.clone(), p, d, mats)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RealizedClass { model, modules })
}

/// Exponent vectors of `x^{-1} u_i x` (for `inverse = false`) or `x u_i x^{-1}` for the pc
/// generators `u_i` of U.
fn conjugated_pcgs(model: &PcModel<MatTuple>, x: &MatTuple, inverse: bool) -> Result<Vec<PcElement>> {
    let (a, b) = if inverse { (x.clone(), x.inv()) } else { (x.inv(), x.clone()) };
    model.pcgs.iter().map(|u| model.sift(&a.op(u).op(&b)).ok_or(Error::NotNormalizing)).collect()
}

/// H² action matrices of a normalizing element, one per prime with nonzero H².
fn h2_action(rc: &RealizedClass, spaces: &[CohomologySpace], g: &MatTuple) -> Result<Vec<FpMatrix>> {
    let alpha_inv = conjugated_pcgs(&rc.model, g, true)?;
    Ok(spaces
        .iter()
        .enumerate()
        .filter(|(_, cs)| cs.h2_dim() > 0)
        .map(|(i, cs)| normalizer_action_on_h2(cs, &alpha_inv, &g.0[i]))
        .collect())
}

fn increment_blocks(v: &mut [Vec<u32>], primes: &[u32]) -> bool {
    for (b, &p) in v.iter_mut().zip(primes) {
        if crate::linalg::increment(b, p) {
            return true;
        }
    }
    false
}

/// One extension per `N(U)`-orbit on `H²(U, A)` with automorphism generators: lifts of the
/// orbit stabilizer and the Z¹ translations.
pub fn relevant_extensions(
    cls: &SubgroupClass,
    l: u64,
    class_index: usize,
    budget: &Budget,
) -> Result<Vec<ConstructedGroup>> {
    let factors = factors_of_rank(l);
    let rc = realize(cls, &factors, budget)?;
    let spaces: Vec<CohomologySpace> = rc.modules.iter().map(cohomology).collect();
    let active: Vec<usize> = (0..spaces.len()).filter(|&i| spaces[i].h2_dim() > 0).collect();
    let primes: Vec<u32> = active.iter().map(|&i| factors[i].1).collect();
    // normalizer generators paired with their H² action blocks
    let combined: Vec<MatTuple> = cls
        .normalizer
        .iter()
        .map(|g| {
            let mut blocks = g.0.clone();
            blocks.extend(h2_action(&rc, &spaces, g)?);
            Ok(MatTuple(blocks))
        })
        .collect::<Result<_>>()?;
    let mut one_blocks = MatTuple::identity(&factors).0;
    for &i in &active {
        one_blocks.push(FpMatrix::identity(factors[i].1, spaces[i].h2_dim()));
    }
    let one = MatTuple(one_blocks);
    let r = factors.len();
    let act = |pt: &Vec<Vec<u32>>, g: &MatTuple| -> Vec<Vec<u32>> {
        pt.iter().enumerate().map(|(k, v)| g.0[r + k].vec_mul(v)).collect()
    };
    let total: u128 = active.iter().map(|&i| (factors[i].1 as u128).pow(spaces[i].h2_dim() as u32)).product();
    if total > budget.orbit as u128 {
        return Err(Error::OrbitBudgetExceeded(total.min(usize::MAX as u128) as usize));
    }
    let mut seen: rustc_hash::FxHashSet<Vec<Vec<u32>>> = Default::default();
    let mut point: Vec<Vec<u32>> = active.iter().map(|&i| vec![0u32; spaces[i].h2_dim()]).collect();
    let mut out = Vec::new();
    loop {
        if !seen.contains(&point) {
            let (orbit, stab) =
                orbit_stabilizer_sized(&one, &combined, point.clone(), act, cls.normalizer_order, budget.orbit, STAB_CLOSURE_LIMIT)?;
            seen.extend(orbit);
            out.push(build_group(&rc, &spaces, &active, &point, &stab, l, class_index)?);
        }
        if !increment_blocks(&mut point, &primes) {
            break;
        }
    }
    Ok(out)
}

fn build_group(
    rc: &RealizedClass,
    spaces: &[CohomologySpace],
    active: &[usize],
    point: &[Vec<u32>],
    stab: &[MatTuple],
    l: u64,
    class_index: usize,
) -> Result<ConstructedGroup> {
    let u = &rc.model.pres;
    let n = u.len();
    let deltas: Vec<Vec<u32>> = spaces
        .iter()
        .enumerate()
        .map(|(i, cs)| match active.iter().position(|&a| a == i) {
            Some(k) => cs.lift(&point[k]),
            None => vec![0; cs.tail_len],
        })
        .collect();
    let mods: Vec<&GModule> = rc.modules.iter().collect();
    let drefs: Vec<&[u32]> = deltas.iter().map(|d| &d[..]).collect();
    let e = extension_multi(u, &mods, &drefs)?;
    let total = e.len();
    let embed = |x: &[u32], off: usize| {
        let mut v = vec![0u32; total];
        v[off..off + x.len()].copy_from_slice(x);
        v
    };
    let offsets: Vec<usize> = rc
        .modules
        .iter()
        .scan(n, |off, m| {
            let o = *off;
            *off += m.dim;
            Some(o)
        })
        .collect();
    let mut aut_gens: Vec<Vec<PcElement>> = Vec::new();
    for s in stab {
        let g = MatTuple(s.0[..rc.modules.len()].to_vec());
        let top: Vec<PcElement> = conjugated_pcgs(&rc.model, &g, false)?.iter().map(|x| embed(x, 0)).collect();
        let mut bottom = Vec::new();
        for (k, m) in rc.modules.iter().enumerate() {
            for row in 0..m.dim {
                bottom.push(embed(g.0[k].row(row), offsets[k]));
            }
        }
        let im = lift_automorphism(&e, n, &top, &bottom)
            .ok_or_else(|| Error::Inconsistent("stabilizer element does not lift".into()))?;
        if !aut_gens.contains(&im) && !is_identity_map(&e, &im) {
            aut_gens.push(im);
        }
    }
    for (k, cs) in spaces.iter().enumerate() {
        let d = cs.module.dim;
        for z in cs.z1.basis_vecs() {
            let mut im: Vec<PcElement> = (0..total).map(|i| e.gen(i)).collect();
            for i in 0..n {
                let a = embed(&z[i * d..(i + 1) * d], offsets[k]);
                im[i] = e.mul(&e.gen(i), &a);
            }
            aut_gens.push(im);
        }
    }
    let fs = f_series(&e);
    let g = ConstructedGroup {
        pres: e,
        f_class: fs.f_class,
        f_rank: fs.f_rank,
        aut_gens,
        provenance: Provenance::FClass1 { rank: l, class_index, h2_rep: point.to_vec() },
    };
    if g.f_class != 1 || g.f_rank != l {
        return Err(Error::Inconsistent(format!(
            "extension has F-class {} and F-rank {}, expected 1 and {l}",
            g.f_class, g.f_rank
        )));
    }
    Ok(g)
}

fn is_identity_map(e: &PcPresentation, im: &[PcElement]) -> bool {
    im.iter().enumerate().all(|(i, x)| *x == e.gen(i))
}

/// All solvable groups of F-class 1, F-rank ℓ and the given order, up to isomorphism.
pub fn solvable_groups_fclass1(l: u64, order: u64, budget: &Budget) -> Result<Vec<ConstructedGroup>> {
    if l < 2 || order % l != 0 {
        return Err(Error::Invalid(format!("rank {l} does not divide order {order}")));
    }
    let m = (order / l) as usize;
    let mut out = Vec::new();
    for (k, cls) in relevant_solvable_subgroups(l, m, budget)?.iter().enumerate() {
        out.extend(relevant_extensions(cls, l, k, budget)?);
    }
    Ok(out)
}

/// Every F-rank ℓ ≥ 2 dividing `order` that can occur: ℓ must have square-free exponent
/// decomposition consistent with `|Aut(A)|` being divisible by `order/ℓ`.
pub fn candidate_ranks(order: u64) -> Vec<u64> {
    crate::pcgroup::divisors(order)
        .into_iter()
        .filter(|&l| l >= 2)
        .filter(|&l| AutAGroup::for_rank(l).order() % (order / l) as u128 == 0)
        .collect()
}

/// All solvable groups of F-class 1 of the given order, over all ranks.
pub fn solvable_groups_fclass1_all_ranks(order: u64, budget: &Budget) -> Result<Vec<ConstructedGroup>> {
    let mut out = Vec::new();
    for l in candidate_ranks(order) {
        out.extend(solvable_groups_fclass1(l, order, budget)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::brute_force_isomorphic;
    use crate::pcgroup::examples::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn order_six() {
        let gs = solvable_groups_fclass1(3, 6, &b()).unwrap();
        assert_eq!(gs.len(), 1);
        assert!(brute_force_isomorphic(&gs[0].pres, &symmetric3()).unwrap().is_some());
        gs[0].verify().unwrap();
        // C6 has F-rank 6
        let gs = solvable_groups_fclass1(6, 6, &b()).unwrap();
        assert_eq!(gs.len(), 1);
        assert!(brute_force_isomorphic(&gs[0].pres, &cyclic(6)).unwrap().is_some());
    }

    #[test]
    fn prime_rank_classes() {
        for m in [1, 2, 3, 6] {
            assert_eq!(relevant_solvable_subgroups(7, m, &b()).unwrap().len(), 1);
        }
    }

    #[test]
    fn rank_equals_order() {
        let gs = solvable_groups_fclass1(6, 6, &b()).unwrap();
        assert_eq!(gs.len(), 1);
        let gs = solvable_groups_fclass1(4, 4, &b()).unwrap();
        assert_eq!(gs.len(), 1);
        assert!(brute_force_isomorphic(&gs[0].pres, &elementary_abelian(2, 2)).unwrap().is_some());
    }

    #[test]
    fn s4_and_a4() {
        // rank 4: U = C3 gives A4, U = S3 gives S4
        let a4 = solvable_groups_fclass1(4, 12, &b()).unwrap();
        assert_eq!(a4.len(), 1);
        assert!(brute_force_isomorphic(&a4[0].pres, &alternating4()).unwrap().is_some());
        let s4 = solvable_groups_fclass1(4, 24, &b()).unwrap();
        assert_eq!(s4.len(), 1);
        assert!(brute_force_isomorphic(&s4[0].pres, &symmetric4()).unwrap().is_some());
        for g in a4.iter().chain(&s4) {
            g.verify().unwrap();
        }
    }

    #[test]
    fn automorphism_generators_generate_aut() {
        use crate::finite::closure;
        use crate::pcgroup::{automorphism_group_brute_force, PcAut};
        use std::sync::Arc;
        for (l, o) in [(4u64, 24u64), (4, 12), (3, 6), (9, 18), (6, 12)] {
            for g in solvable_groups_fclass1(l, o, &b()).unwrap() {
                g.verify().unwrap();
                let pres = Arc::new(g.pres.clone());
                let id = PcAut::identity(pres.clone());
                let gens: Vec<PcAut> =
                    g.aut_gens.iter().map(|im| PcAut { pres: pres.clone(), images: im.clone() }).collect();
                let ours = closure(&id, &gens, 100_000).unwrap().len();
                let full = closure(&id, &automorphism_group_brute_force(&g.pres).unwrap(), 100_000).unwrap().len();
                assert_eq!(ours, full, "rank {l} order {o}");
            }
        }
    }
}
