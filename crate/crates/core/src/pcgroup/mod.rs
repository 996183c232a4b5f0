//! Polycyclic presentations with prime relative orders, collection, and the
//! subgroup and series machinery built on top of them.

pub mod aut;
pub mod examples;
pub mod fingerprint;
pub mod iso;
pub mod series;
mod subgroup;
pub mod table;
pub mod text;

pub use aut::{GroupHom, PcAut};
pub use fingerprint::{fingerprint, Fingerprint};
pub use iso::{automorphism_group_brute_force, brute_force_isomorphic};
pub use series::{
    centralizer_in, derived_series, f_series_with_fitting, next_nu, o_p, sylow_subgroup, Quotient, Section,
    conjugation_action_on_module, core_of, f_series, fitting_subgroup, frattini_subgroup, is_nilpotent,
    minimal_generating_set, quotient, FSeries,
};
pub use subgroup::PcSubgroup;
pub use table::{ElemSubset, GroupTable};
pub use text::{format_presentation, parse_presentation};

use crate::{Error, Result};

/// Exponent vector of a collected word.
pub type PcElement = Vec<u32>;

/// A word as a sequence of (generator, positive exponent) letters.
pub type Word = Vec<(usize, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PcPresentation {
    rel_orders: Vec<u32>,
    powers: Vec<PcElement>,
    /// `conjugates[j][i]` is `g_j^{g_i}` for `i < j`.
    conjugates: Vec<Vec<PcElement>>,
    power_words: Vec<Word>,
    conj_words: Vec<Vec<Word>>,
    conj_trivial: Vec<Vec<bool>>,
}

/// Letters of a normal form, in increasing depth.
pub fn word_of(x: &[u32]) -> Word {
    x.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| (i, e)).collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=n).filter(|d| d * d <= n && n % d == 0).flat_map(|d| [d, n / d]).collect();
    d.sort_unstable();
    d.dedup();
    d
}

impl PcPresentation {
    /// Builds and validates a presentation; relation values are normal forms.
    pub fn new(rel_orders: Vec<u32>, powers: Vec<PcElement>, conjugates: Vec<Vec<PcElement>>) -> Result<Self> {
        let pres = Self::new_unchecked(rel_orders, powers, conjugates)?;
        pres.check_consistency()?;
        Ok(pres)
    }

    /// Builds a presentation, validating shapes but not the overlap conditions.
    pub fn new_unchecked(
        rel_orders: Vec<u32>,
        powers: Vec<PcElement>,
        conjugates: Vec<Vec<PcElement>>,
    ) -> Result<Self> {
        let n = rel_orders.len();
        if powers.len() != n || conjugates.len() != n {
            return Err(Error::Invalid("relation table size mismatch".into()));
        }
        for (i, &p) in rel_orders.iter().enumerate() {
            if !is_prime(p as u64) {
                return Err(Error::Invalid(format!("relative order {p} of generator {} is not prime", i + 1)));
            }
        }
        let check = |w: &PcElement, i: usize| -> Result<()> {
            if w.len() != n || w.iter().zip(&rel_orders).any(|(&e, &p)| e >= p) || w[..=i].iter().any(|&e| e != 0) {
                return Err(Error::Invalid(format!("relation word {w:?} for generator {} out of range", i + 1)));
            }
            Ok(())
        };
        for i in 0..n {
            check(&powers[i], i)?;
            if conjugates[i].len() != i {
                return Err(Error::Invalid("conjugate table shape".into()));
            }
            for k in 0..i {
                check(&conjugates[i][k], k)?;
            }
        }
        let power_words = powers.iter().map(|w| word_of(w)).collect();
        let conj_words = conjugates.iter().map(|row| row.iter().map(|w| word_of(w)).collect()).collect();
        let conj_trivial = conjugates
            .iter()
            .enumerate()
            .map(|(j, row)| row.iter().map(|w| w.iter().enumerate().all(|(k, &e)| e == (k == j) as u32)).collect())
            .collect();
        Ok(PcPresentation { rel_orders, powers, conjugates, power_words, conj_words, conj_trivial })
    }

    pub fn trivial() -> Self {
        Self::new_unchecked(vec![], vec![], vec![]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.rel_orders.len()
    }
    pub fn is_empty(&self) -> bool {
        self.rel_orders.is_empty()
    }
    pub fn rel_orders(&self) -> &[u32] {
        &self.rel_orders
    }
    pub fn power(&self, i: usize) -> &PcElement {
        &self.powers[i]
    }
    /// `g_j^{g_i}` for `i < j`.
    pub fn conjugate(&self, j: usize, i: usize) -> &PcElement {
        &self.conjugates[j][i]
    }

    pub fn order(&self) -> u64 {
        self.rel_orders.iter().map(|&p| p as u64).product()
    }

    /// Order as u128, for covers whose size overflows u64 arithmetic in products.
    pub fn order_u128(&self) -> u128 {
        self.rel_orders.iter().map(|&p| p as u128).product()
    }

    pub fn identity(&self) -> PcElement {
        vec![0; self.len()]
    }

    pub fn gen(&self, i: usize) -> PcElement {
        let mut v = self.identity();
        v[i] = 1;
        v
    }

    pub fn is_identity(x: &[u32]) -> bool {
        x.iter().all(|&e| e == 0)
    }

    /// Multiplies `x` in place by the letters on `stack` (top of stack first).
    fn collect_stack(&self, x: &mut [u32], stack: &mut Vec<(usize, u32)>) {
        let n = self.len();
        while let Some((i, e)) = stack.pop() {
            if e > 1 {
                stack.push((i, e - 1));
            }
            let conj_needed = (i + 1..n).any(|j| x[j] != 0 && !self.conj_trivial[j][i]);
            if !conj_needed {
                x[i] += 1;
                if x[i] == self.rel_orders[i] {
                    x[i] = 0;
                    if !self.power_words[i].is_empty() {
                        for j in (i + 1..n).rev() {
                            if x[j] != 0 {
                                stack.push((j, x[j]));
                                x[j] = 0;
                            }
                        }
                        stack.extend(self.power_words[i].iter().rev());
                    }
                }
                continue;
            }
            for j in (i + 1..n).rev() {
                let t = x[j];
                if t == 0 {
                    continue;
                }
                x[j] = 0;
                if self.conj_trivial[j][i] {
                    stack.push((j, t));
                } else {
                    for _ in 0..t {
                        stack.extend(self.conj_words[j][i].iter().rev());
                    }
                }
            }
            x[i] += 1;
            if x[i] == self.rel_orders[i] {
                x[i] = 0;
                stack.extend(self.power_words[i].iter().rev());
            }
        }
    }

    /// Normal form of a word with arbitrary integer exponents.
    pub fn collect(&self, word: &[(usize, i64)]) -> PcElement {
        let mut x = self.identity();
        for &(i, e) in word {
            assert!(i < self.len(), "generator index out of range");
            if e >= 0 {
                self.mul_gen_into(&mut x, i, e as u32);
            } else {
                let g = self.inverse(&self.gen(i));
                for _ in 0..(-e) {
                    x = self.mul(&x, &g);
                }
            }
        }
        x
    }

    pub fn mul_gen_into(&self, x: &mut [u32], i: usize, e: u32) {
        if e == 0 {
            return;
        }
        let mut stack = vec![(i, e)];
        self.collect_stack(x, &mut stack);
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> PcElement {
        let mut z = x.to_vec();
        let mut stack: Vec<(usize, u32)> = word_of(y).into_iter().rev().collect();
        self.collect_stack(&mut z, &mut stack);
        z
    }

    /// `x · w` where w is a word of letters.
    pub fn mul_word(&self, x: &[u32], w: &[(usize, u32)]) -> PcElement {
        let mut z = x.to_vec();
        let mut stack: Vec<(usize, u32)> = w.iter().rev().copied().collect();
        self.collect_stack(&mut z, &mut stack);
        z
    }

    pub fn inverse(&self, x: &[u32]) -> PcElement {
        let mut z = x.to_vec();
        let mut y = self.identity();
        let mut stack = Vec::new();
        for i in 0..self.len() {
            if z[i] != 0 {
                let e = self.rel_orders[i] - z[i];
                y[i] = e;
                stack.push((i, e));
                self.collect_stack(&mut z, &mut stack);
            }
        }
        debug_assert!(Self::is_identity(&z));
        y
    }

    pub fn pow(&self, x: &[u32], mut k: u64) -> PcElement {
        let mut base = x.to_vec();
        let mut r = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(&r, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        r
    }

    /// `y^{-1} x y`.
    pub fn conj(&self, x: &[u32], y: &[u32]) -> PcElement {
        self.mul(&self.inverse(y), &self.mul(x, y))
    }

    /// `x^{-1} y^{-1} x y`.
    pub fn comm(&self, x: &[u32], y: &[u32]) -> PcElement {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(&self.inverse(&yx), &xy)
    }

    pub fn element_order(&self, x: &[u32]) -> u64 {
        let mut ord = 1u64;
        let mut y = x.to_vec();
        // walk down the series: the leading generator's relative order divides the order
        loop {
            let Some(d) = y.iter().position(|&e| e != 0) else { return ord };
            let p = self.rel_orders[d] as u64;
            y = self.pow(&y, p);
            ord *= p;
        }
    }

    /// Depth: index of the first nonzero exponent, or `len()` for the identity.
    pub fn depth(&self, x: &[u32]) -> usize {
        x.iter().position(|&e| e != 0).unwrap_or(self.len())
    }

    /// Evaluates a word in the images of the generators using this presentation's multiplication.
    pub fn eval_exps(&self, images: &[PcElement], x: &[u32]) -> PcElement {
        let mut r = self.identity();
        for (i, &e) in x.iter().enumerate() {
            for _ in 0..e {
                r = self.mul(&r, &images[i]);
            }
        }
        r
    }

    /// Checks the overlap conditions that make collection confluent.
    pub fn check_consistency(&self) -> Result<()> {
        let n = self.len();
        let g = |i: usize| self.gen(i);
        let fail = |what: String| Err(Error::Inconsistent(what));
        for k in 0..n {
            for j in k + 1..n {
                for i in j + 1..n {
                    // (g_i g_j) g_k = g_i (g_j g_k)
                    let lhs = self.mul(&self.mul(&g(i), &g(j)), &g(k));
                    let rhs = self.mul(&g(i), &self.mul(&g(j), &g(k)));
                    if lhs != rhs {
                        return fail(format!("overlap {} {} {}", i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        for i in 0..n {
            let p = self.rel_orders[i] as u64;
            let pw = &self.powers[i];
            // g_i^p g_i = g_i g_i^p
            let a = self.mul(pw, &g(i));
            let b = self.mul(&g(i), pw);
            if a != b {
                return fail(format!("power overlap {}", i + 1));
            }
            for j in i + 1..n {
                let pj = self.rel_orders[j] as u64;
                // g_j^{p_j} g_i = g_j^{p_j - 1} (g_j g_i)
                let lhs = self.mul(&self.powers[j], &g(i));
                let gjgi = self.mul(&g(j), &g(i));
                let rhs = self.mul(&self.pow_naive(&g(j), pj - 1), &gjgi);
                if lhs != rhs {
                    return fail(format!("power-conjugate overlap {} {}", j + 1, i + 1));
                }
                // g_j g_i^{p_i} = (g_j g_i) g_i^{p_i - 1}
                let lhs = self.mul(&g(j), pw);
                let rhs = self.mul(&gjgi, &self.pow_naive(&g(i), p - 1));
                if lhs != rhs {
                    return fail(format!("conjugate-power overlap {} {}", j + 1, i + 1));
                }
            }
        }
        Ok(())
    }

    fn pow_naive(&self, x: &[u32], k: u64) -> PcElement {
        let mut r = self.identity();
        for _ in 0..k {
            r = self.mul(&r, x);
        }
        r
    }

    /// Direct product, with `self` on top.
    pub fn direct_product(&self, other: &PcPresentation) -> PcPresentation {
        let n1 = self.len();
        let n = n1 + other.len();
        let embed = |w: &PcElement, off: usize| {
            let mut v = vec![0; n];
            v[off..off + w.len()].copy_from_slice(w);
            v
        };
        let mut rel = self.rel_orders.clone();
        rel.extend(&other.rel_orders);
        let mut powers: Vec<PcElement> = self.powers.iter().map(|w| embed(w, 0)).collect();
        powers.extend(other.powers.iter().map(|w| embed(w, n1)));
        let mut conj = Vec::with_capacity(n);
        for j in 0..n {
            let row = (0..j)
                .map(|i| {
                    if j < n1 {
                        embed(&self.conjugates[j][i], 0)
                    } else if i >= n1 {
                        embed(&other.conjugates[j - n1][i - n1], n1)
                    } else {
                        let mut v = vec![0; n];
                        v[j] = 1;
                        v
                    }
                })
                .collect();
            conj.push(row);
        }
        PcPresentation::new_unchecked(rel, powers, conj).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn collect_examples() {
        let v = elementary_abelian(2, 2);
        assert_eq!(v.collect(&[]), vec![0, 0]);
        assert_eq!(v.collect(&[(1, 1), (0, 1)]), vec![1, 1]);
        let s3 = symmetric3();
        assert_eq!(s3.collect(&[(0, 1), (1, 1), (0, 1)]), vec![0, 2]);
    }

    #[test]
    fn negative_exponents() {
        let g = symmetric4();
        for i in 0..g.len() {
            let x = g.collect(&[(i, -1)]);
            assert_eq!(g.mul(&x, &g.gen(i)), g.identity());
        }
    }

    #[test]
    fn orders_of_fixtures() {
        assert_eq!(symmetric3().order(), 6);
        assert_eq!(symmetric4().order(), 24);
        assert_eq!(dihedral8().order(), 8);
        assert_eq!(quaternion8().order(), 8);
        assert_eq!(cyclic(12).order(), 12);
        for g in [symmetric3(), symmetric4(), dihedral8(), quaternion8(), cyclic(12), cyclic(8)] {
            g.check_consistency().unwrap();
        }
    }

    #[test]
    fn inconsistent_presentation_rejected() {
        // C2 x C2 with g1^2 = g2 but g2 of order 2 and g2^{g1} = g2: that is C4, which is consistent.
        // Break it: g1^2 = g2 and g2^{g1} = g2 over p = 3 generator orders mismatch.
        let r = PcPresentation::new(vec![3, 2], vec![vec![0, 1], vec![0, 0]], vec![vec![], vec![vec![0, 1]]]);
        // g1^3 = g2, and g1 commutes with g2: fine, C6. Now conj g2^{g1} = g2 is forced.
        assert!(r.is_ok());
        let bad = PcPresentation::new(vec![2, 3], vec![vec![0, 1], vec![0, 0]], vec![vec![], vec![vec![0, 2]]]);
        // g1^2 = g2 but g1 inverts g2: then g2 = g2^{g1} = g2^2, contradiction.
        assert!(matches!(bad, Err(Error::Inconsistent(_))));
    }

    fn random_group(idx: usize) -> PcPresentation {
        let gs = [symmetric4(), dihedral8(), quaternion8(), cyclic(12), symmetric3().direct_product(&cyclic(4))];
        gs[idx % gs.len()].clone()
    }

    proptest! {
        #[test]
        fn collection_is_associative(idx in 0usize..5, seed in prop::collection::vec(0u32..4, 18)) {
            let g = random_group(idx);
            let n = g.len();
            let mk = |o: usize| -> PcElement { (0..n).map(|i| seed[(o + i) % seed.len()] % g.rel_orders()[i]).collect() };
            let (x, y, z) = (mk(0), mk(5), mk(11));
            prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
            prop_assert_eq!(g.mul(&x, &g.inverse(&x)), g.identity());
            prop_assert_eq!(g.mul(&g.inverse(&x), &x), g.identity());
        }
    }
}
