use super::{PcElement, PcPresentation, PcSubgroup};
use crate::finite::GroupElem;
use crate::{Error, Result};
use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A homomorphism between pc groups, given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: Arc<PcPresentation>,
    pub target: Arc<PcPresentation>,
    pub images: Vec<PcElement>,
}

impl GroupHom {
    /// Checks every defining relation of the source against the images.
    pub fn new(source: Arc<PcPresentation>, target: Arc<PcPresentation>, images: Vec<PcElement>) -> Result<Self> {
        let h = GroupHom { source, target, images };
        if !h.respects_relations() {
            return Err(Error::Invalid("images do not respect the source relations".into()));
        }
        Ok(h)
    }

    pub fn apply(&self, x: &[u32]) -> PcElement {
        self.target.eval_exps(&self.images, x)
    }

    pub fn respects_relations(&self) -> bool {
        respects_relations(&self.source, &self.target, &self.images)
    }

    pub fn image(&self) -> PcSubgroup {
        PcSubgroup::from_generators(&self.target, &self.images)
    }

    pub fn kernel(&self) -> PcSubgroup {
        HomTable::new(&self.source, &self.target, &self.images).kernel
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }
}

/// Do the images satisfy every power and conjugate relation of `src`, evaluated in `tgt`?
pub fn respects_relations(src: &PcPresentation, tgt: &PcPresentation, images: &[PcElement]) -> bool {
    let n = src.len();
    for i in 0..n {
        let p = src.rel_orders()[i] as u64;
        if tgt.pow(&images[i], p) != tgt.eval_exps(images, src.power(i)) {
            return false;
        }
        for j in i + 1..n {
            if tgt.conj(&images[j], &images[i]) != tgt.eval_exps(images, src.conjugate(j, i)) {
                return false;
            }
        }
    }
    true
}

/// Sifting table of pairs `(φ(x), x)` for a homomorphism φ from `src` to `tgt`, giving
/// preimages of elements of the image and generators of the kernel.
pub struct HomTable<'a> {
    src: &'a PcPresentation,
    tgt: &'a PcPresentation,
    rows: Vec<Option<(PcElement, PcElement)>>,
    pub kernel: PcSubgroup,
}

impl<'a> HomTable<'a> {
    pub fn new(src: &'a PcPresentation, tgt: &'a PcPresentation, images: &[PcElement]) -> Self {
        let mut t = HomTable { src, tgt, rows: vec![None; tgt.len()], kernel: PcSubgroup::trivial() };
        let mut kernel_gens = Vec::new();
        let mut queue: Vec<(PcElement, PcElement)> =
            images.iter().enumerate().map(|(i, im)| (im.clone(), src.gen(i))).collect();
        while let Some(pair) = queue.pop() {
            let (u, w) = t.sift_pair(pair);
            let d = tgt.depth(&u);
            if d == tgt.len() {
                if !PcPresentation::is_identity(&w) {
                    kernel_gens.push(w);
                }
                continue;
            }
            let p = tgt.rel_orders()[d];
            let k = crate::linalg::inv_mod(u[d], p) as u64;
            let (u, w) = (tgt.pow(&u, k), src.pow(&w, k));
            queue.push((tgt.pow(&u, p as u64), src.pow(&w, p as u64)));
            for (a, b) in t.rows.iter().flatten() {
                queue.push((tgt.comm(&u, a), src.comm(&w, b)));
            }
            t.rows[d] = Some((u, w));
        }
        // the kernel is normal in the source
        t.kernel = PcSubgroup::normal_closure(src, &kernel_gens);
        t
    }

    fn sift_pair(&self, (mut u, mut w): (PcElement, PcElement)) -> (PcElement, PcElement) {
        loop {
            let d = self.tgt.depth(&u);
            if d == self.tgt.len() {
                return (u, w);
            }
            let Some((a, b)) = &self.rows[d] else { return (u, w) };
            let k = self.tgt.rel_orders()[d] - u[d];
            for _ in 0..k {
                u = self.tgt.mul(&u, a);
                w = self.src.mul(&w, b);
            }
        }
    }

    /// Some preimage of `x`, if `x` lies in the image.
    pub fn preimage(&self, x: &[u32]) -> Option<PcElement> {
        let (u, w) = self.sift_pair((x.to_vec(), self.src.identity()));
        if !PcPresentation::is_identity(&u) {
            return None;
        }
        // x · φ(w) = 1
        Some(self.src.inverse(&w))
    }
}

/// An automorphism of a pc group, stored as the images of the pc generators.
/// Composition is left to right: `(a·b)(x) = b(a(x))`.
#[derive(Clone, Debug)]
pub struct PcAut {
    pub pres: Arc<PcPresentation>,
    pub images: Vec<PcElement>,
}

impl PartialEq for PcAut {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}
impl Eq for PcAut {}
impl Hash for PcAut {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.images.hash(state)
    }
}
impl PartialOrd for PcAut {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for PcAut {
    fn cmp(&self, other: &Self) -> Ordering {
        self.images.cmp(&other.images)
    }
}

impl PcAut {
    pub fn identity(pres: Arc<PcPresentation>) -> Self {
        let images = (0..pres.len()).map(|i| pres.gen(i)).collect();
        PcAut { pres, images }
    }

    /// Validates relations and bijectivity.
    pub fn new(pres: Arc<PcPresentation>, images: Vec<PcElement>) -> Result<Self> {
        let a = PcAut { pres, images };
        if !a.is_automorphism() {
            return Err(Error::Invalid("images do not define an automorphism".into()));
        }
        Ok(a)
    }

    pub fn is_automorphism(&self) -> bool {
        respects_relations(&self.pres, &self.pres, &self.images)
            && PcSubgroup::from_generators(&self.pres, &self.images).order_u128(&self.pres) == self.pres.order_u128()
    }

    pub fn apply(&self, x: &[u32]) -> PcElement {
        self.pres.eval_exps(&self.images, x)
    }

    /// Conjugation by `g`: x ↦ g^{-1} x g.
    pub fn inner(pres: Arc<PcPresentation>, g: &[u32]) -> Self {
        let images = (0..pres.len()).map(|i| pres.conj(&pres.gen(i), g)).collect();
        PcAut { pres, images }
    }

    pub fn then(&self, other: &PcAut) -> PcAut {
        let images = self.images.iter().map(|x| other.apply(x)).collect();
        PcAut { pres: self.pres.clone(), images }
    }

    pub fn inverse(&self) -> PcAut {
        let t = HomTable::new(&self.pres, &self.pres, &self.images);
        let images = (0..self.pres.len())
            .map(|i| t.preimage(&self.pres.gen(i)).expect("automorphism is surjective"))
            .collect();
        PcAut { pres: self.pres.clone(), images }
    }

    pub fn maps_subgroup_onto(&self, s: &PcSubgroup, t: &PcSubgroup) -> bool {
        let im: Vec<PcElement> = s.gens().iter().map(|x| self.apply(x)).collect();
        PcSubgroup::from_generators(&self.pres, &im) == *t
    }
}

impl GroupElem for PcAut {
    fn op(&self, other: &Self) -> Self {
        self.then(other)
    }
    fn inv(&self) -> Self {
        self.inverse()
    }
    fn is_one(&self) -> bool {
        self.images.iter().enumerate().all(|(i, x)| x.iter().enumerate().all(|(k, &e)| e == (k == i) as u32))
    }
    fn one_like(&self) -> Self {
        PcAut::identity(self.pres.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    #[test]
    fn inner_automorphisms_invert() {
        let g = Arc::new(symmetric4());
        for x in PcSubgroup::whole(&g).elements(&g).iter().step_by(3) {
            let a = PcAut::inner(g.clone(), x);
            assert!(a.is_automorphism());
            let b = a.inverse();
            assert!(a.then(&b).is_one());
            assert_eq!(b, PcAut::inner(g.clone(), &g.inverse(x)));
        }
    }

    #[test]
    fn kernel_of_projection() {
        let g = Arc::new(symmetric4());
        let s3 = Arc::new(symmetric3());
        // find a surjection by searching images of the pc generators
        let els = PcSubgroup::whole(&s3).elements(&s3);
        let n = g.len();
        let mut found = None;
        let mut idx = vec![0usize; n];
        'outer: loop {
            let images: Vec<PcElement> = idx.iter().map(|&i| els[i].clone()).collect();
            if let Ok(h) = GroupHom::new(g.clone(), s3.clone(), images) {
                if h.image().order(&s3) == 6 {
                    found = Some(h);
                    break 'outer;
                }
            }
            let mut k = n;
            loop {
                if k == 0 {
                    break 'outer;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < els.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
        let h = found.expect("S4 maps onto S3");
        assert_eq!(h.kernel().order(&g), 4);
    }
}
