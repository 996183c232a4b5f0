use super::table::GroupTable;
use super::{minimal_generating_set, GroupHom, PcAut, PcElement, PcPresentation};
use crate::finite::{closure, GroupElem};
use crate::{Error, Result};
use std::sync::Arc;

/// Largest order accepted by the exhaustive isomorphism search.
pub const ORACLE_CAP: u64 = 200;

/// Largest order accepted by the exhaustive automorphism search.
pub const AUT_CAP: u64 = 1000;

/// Words in the generating tuple for every pc generator, found by breadth-first search
/// in the element table. A word is a list of tuple indices.
fn pc_gen_words(t: &GroupTable, tuple: &[u32]) -> Vec<Vec<usize>> {
    let n = t.order();
    let mut parent: Vec<Option<(u32, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = vec![0u32];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for (k, &g) in tuple.iter().enumerate() {
            let y = t.mul(x, g);
            if !seen[y as usize] {
                seen[y as usize] = true;
                parent[y as usize] = Some((x, k));
                queue.push(y);
            }
        }
        i += 1;
    }
    t.gens()
        .iter()
        .map(|&g| {
            let mut w = Vec::new();
            let mut x = g;
            while let Some((px, k)) = parent[x as usize] {
                w.push(k);
                x = px;
            }
            w.reverse();
            w
        })
        .collect()
}

/// Exhaustive search over images of a minimal generating set, pruned by element orders of
/// the generators and their pairwise products. Calls `found` on every isomorphism (as
/// images of the pc generators); stops when it returns false.
fn search(g: &PcPresentation, h: &PcPresentation, first_up_to_conjugacy: bool, found: &mut dyn FnMut(Vec<PcElement>) -> bool) {
    let tg = GroupTable::new(g).expect("small group");
    let th = GroupTable::new(h).expect("small group");
    let gens: Vec<u32> = minimal_generating_set(g).iter().map(|x| tg.index(x)).collect();
    let words = pc_gen_words(&tg, &gens);
    let og = tg.element_orders();
    let oh = th.element_orders();
    let class_reps: Vec<bool> = {
        let mut v = vec![false; th.order()];
        for c in th.conjugacy_classes() {
            v[c[0] as usize] = true;
        }
        v
    };
    let k = gens.len();
    let cands: Vec<Vec<u32>> = (0..k)
        .map(|i| {
            (0..th.order() as u32)
                .filter(|&y| oh[y as usize] == og[gens[i] as usize])
                .filter(|&y| i > 0 || !first_up_to_conjugacy || class_reps[y as usize])
                .collect()
        })
        .collect();
    let mut chosen: Vec<u32> = Vec::with_capacity(k);
    fn rec(
        j: usize,
        chosen: &mut Vec<u32>,
        cands: &[Vec<u32>],
        ctx: &(&GroupTable, &GroupTable, &[u32], &[u64], &[u64], &[Vec<usize>], &PcPresentation, &PcPresentation),
        found: &mut dyn FnMut(Vec<PcElement>) -> bool,
    ) -> bool {
        let (tg, th, gens, og, oh, words, g, h) = *ctx;
        if j == cands.len() {
            let images: Vec<PcElement> = words
                .iter()
                .map(|w| th.elem(w.iter().fold(0u32, |acc, &k| th.mul(acc, chosen[k]))))
                .collect();
            if super::aut::respects_relations(g, h, &images)
                && th.closure_size_capped(&images.iter().map(|x| th.index(x)).collect::<Vec<_>>(), th.order())
                    == th.order()
            {
                return found(images);
            }
            return true;
        }
        for &y in &cands[j] {
            let ok = (0..j).all(|a| {
                oh[th.mul(chosen[a], y) as usize] == og[tg.mul(gens[a], gens[j]) as usize]
                    && oh[th.mul(chosen[a], th.inv(y)) as usize] == og[tg.mul(gens[a], tg.inv(gens[j])) as usize]
            });
            if !ok {
                continue;
            }
            chosen.push(y);
            let cont = rec(j + 1, chosen, cands, ctx, found);
            chosen.pop();
            if !cont {
                return false;
            }
        }
        true
    }
    let ctx = (&tg, &th, &gens[..], &og[..], &oh[..], &words[..], g, h);
    rec(0, &mut chosen, &cands, &ctx, found);
}

fn sorted_orders(t: &GroupTable) -> Vec<u64> {
    let mut v = t.element_orders();
    v.sort_unstable();
    v
}

/// An explicit isomorphism `G → H`, or `None` if the groups are not isomorphic.
pub fn brute_force_isomorphic(g: &PcPresentation, h: &PcPresentation) -> Result<Option<GroupHom>> {
    if g.order() != h.order() {
        return Ok(None);
    }
    if g.order() > ORACLE_CAP {
        return Err(Error::CapExceeded(format!("isomorphism oracle limited to order {ORACLE_CAP}")));
    }
    if g.is_empty() {
        return Ok(Some(GroupHom { source: Arc::new(g.clone()), target: Arc::new(h.clone()), images: vec![] }));
    }
    if sorted_orders(&GroupTable::new(g)?) != sorted_orders(&GroupTable::new(h)?) {
        return Ok(None);
    }
    let mut result = None;
    search(g, h, true, &mut |images| {
        result = Some(images);
        false
    });
    Ok(result.map(|images| GroupHom { source: Arc::new(g.clone()), target: Arc::new(h.clone()), images }))
}

/// Generators of Aut(G) by exhaustive search, reduced greedily.
pub fn automorphism_group_brute_force(g: &PcPresentation) -> Result<Vec<PcAut>> {
    if g.order() > AUT_CAP {
        return Err(Error::CapExceeded(format!("automorphism search limited to order {AUT_CAP}")));
    }
    let pres = Arc::new(g.clone());
    let id = PcAut::identity(pres.clone());
    if g.is_empty() {
        return Ok(vec![]);
    }
    // inner automorphisms first, then one representative per new coset found in the search
    let mut gens: Vec<PcAut> = Vec::new();
    let mut group = vec![id.clone()];
    let mut member: std::collections::HashSet<PcAut> = group.iter().cloned().collect();
    let mut add = |a: PcAut, gens: &mut Vec<PcAut>, group: &mut Vec<PcAut>| {
        if member.contains(&a) {
            return;
        }
        gens.push(a);
        *group = closure(&id, gens, usize::MAX).expect("automorphism group closure");
        member = group.iter().cloned().collect();
    };
    for i in 0..g.len() {
        add(PcAut::inner(pres.clone(), &g.gen(i)), &mut gens, &mut group);
    }
    search(g, g, false, &mut |images| {
        add(PcAut { pres: pres.clone(), images }, &mut gens, &mut group);
        true
    });
    let order = group.len();
    Ok(crate::finite::reduce_generators(&PcAut::identity(pres), &gens, order, usize::MAX)
        .into_iter()
        .filter(|a| !a.is_one())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    #[test]
    fn small_isomorphisms() {
        let d8 = dihedral8();
        let h = brute_force_isomorphic(&d8, &d8).unwrap().unwrap();
        assert!(h.respects_relations());
        assert!(brute_force_isomorphic(&cyclic(4), &elementary_abelian(2, 2)).unwrap().is_none());
        assert!(brute_force_isomorphic(&dihedral8(), &quaternion8()).unwrap().is_none());
        assert!(brute_force_isomorphic(&dihedral(6), &symmetric3().direct_product(&cyclic(2))).unwrap().is_some());
        assert!(brute_force_isomorphic(&cyclic(6), &cyclic(2).direct_product(&cyclic(3))).unwrap().is_some());
    }

    #[test]
    fn automorphism_orders() {
        let count = |g: &PcPresentation| {
            let a = automorphism_group_brute_force(g).unwrap();
            let id = PcAut::identity(Arc::new(g.clone()));
            closure(&id, &a, usize::MAX).unwrap().len()
        };
        assert_eq!(count(&symmetric4()), 24);
        assert_eq!(count(&elementary_abelian(2, 2)), 6);
        assert_eq!(count(&dihedral8()), 8);
        assert_eq!(count(&quaternion8()), 24);
        assert_eq!(count(&cyclic(12)), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let g = cyclic(256);
        assert!(matches!(brute_force_isomorphic(&g, &g), Err(Error::CapExceeded(_))));
    }
}
