//! Unit groups of matrix algebras over GF(p): the Jacobson radical, a complete set of
//! orthogonal primitive idempotents of the semisimple quotient, and generators of the units.

use crate::linalg::{add_mod, inv_mod, mul_mod, nullspace, sub_mod, Echelon, FpMatrix, QuotientMap};
use crate::matgrp::gl_order;
use crate::pcgroup::factorize;

/// Polynomials over GF(p), coefficients from low to high degree, no trailing zeros.
pub mod poly {
    use super::*;

    pub fn trim(mut f: Vec<u32>) -> Vec<u32> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn deg(f: &[u32]) -> isize {
        f.len() as isize - 1
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let r = (0..n)
            .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
            .collect();
        trim(r)
    }

    pub fn add(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let r = (0..n)
            .map(|i| add_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
            .collect();
        trim(r)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = add_mod(r[i + j], mul_mod(x, y, p), p);
            }
        }
        trim(r)
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0u32; r.len() - db];
        while r.len() >= b.len() {
            let c = mul_mod(*r.last().unwrap(), lead_inv, p);
            let shift = r.len() - b.len();
            q[shift] = c;
            for (k, &bk) in b.iter().enumerate() {
                r[shift + k] = sub_mod(r[shift + k], mul_mod(c, bk, p), p);
            }
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        divrem(a, b, p).1
    }

    pub fn monic(f: &[u32], p: u32) -> Vec<u32> {
        match f.last() {
            None => Vec::new(),
            Some(&c) => {
                let ci = inv_mod(c, p);
                f.iter().map(|&x| mul_mod(x, ci, p)).collect()
            }
        }
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        monic(&a, p)
    }

    /// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)` monic.
    pub fn xgcd(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
        let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
        let (mut s0, mut s1) = (vec![1u32], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u32]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            let t2 = sub(&t0, &mul(&q, &t1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let c = inv_mod(*r0.last().unwrap(), p);
        let sc = |f: &[u32]| trim(f.iter().map(|&x| mul_mod(x, c, p)).collect());
        (sc(&r0), sc(&s0), sc(&t0))
    }

    /// `a^e mod m`.
    pub fn powmod(a: &[u32], mut e: u128, m: &[u32], p: u32) -> Vec<u32> {
        let mut r = rem(&[1], m, p);
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = rem(&mul(&r, &base, p), m, p);
            }
            base = rem(&mul(&base, &base, p), m, p);
            e >>= 1;
        }
        r
    }

    /// A proper divisor of `f` coprime to its cofactor, as `(u, v)` with `u·v = f`, or `None`
    /// if `f` is a power of a single irreducible polynomial.
    pub fn coprime_split(f: &[u32], p: u32) -> Option<(Vec<u32>, Vec<u32>)> {
        let n = f.len() - 1;
        let x = vec![0u32, 1];
        let mut h = x.clone();
        for k in 1..=n {
            h = powmod(&h, p as u128, f, p);
            let g = gcd(f, &sub(&h, &x, p), p);
            if g.len() <= 1 {
                continue;
            }
            let g = if deg(&g) as usize > k { equal_degree_factor(&g, k, p) } else { g };
            // full power of the factors of g dividing f
            let mut u = vec![1u32];
            let mut rest = f.to_vec();
            loop {
                let c = gcd(&rest, &g, p);
                if c.len() <= 1 {
                    break;
                }
                u = mul(&u, &c, p);
                rest = divrem(&rest, &c, p).0;
            }
            return if rest.len() > 1 { Some((u, rest)) } else { None };
        }
        None
    }

    /// A proper factor of a squarefree product of distinct irreducibles of degree `k`.
    fn equal_degree_factor(g: &[u32], k: usize, p: u32) -> Vec<u32> {
        let q = (p as u128).pow(k as u32);
        let mut r = vec![0u32, 1];
        loop {
            let t = if p == 2 {
                let mut acc = Vec::new();
                let mut s = rem(&r, g, p);
                for _ in 0..k {
                    acc = add(&acc, &s, p);
                    s = rem(&mul(&s, &s, p), g, p);
                }
                acc
            } else {
                sub(&powmod(&r, (q - 1) / 2, g, p), &[1], p)
            };
            let c = gcd(g, &t, p);
            if c.len() > 1 && c.len() < g.len() {
                return c;
            }
            // next trial polynomial in a fixed enumeration
            let mut i = 0;
            loop {
                if i == r.len() {
                    r.push(1);
                    break;
                }
                r[i] = (r[i] + 1) % p;
                if r[i] != 0 {
                    break;
                }
                i += 1;
            }
            r = trim(r);
        }
    }
}

fn flat(m: &FpMatrix) -> Vec<u32> {
    m.data().to_vec()
}

/// `Tr(â^{p^i}) / p^i mod p` for the integer lift `â` of `a`.
fn frobenius_trace(a: &FpMatrix, i: u32) -> u32 {
    let p = a.p() as u64;
    let d = a.rows();
    let n = p.pow(i + 1);
    let mulz = |x: &[u64], y: &[u64]| {
        let mut r = vec![0u64; d * d];
        for r0 in 0..d {
            for k in 0..d {
                let c = x[r0 * d + k];
                if c == 0 {
                    continue;
                }
                for c0 in 0..d {
                    r[r0 * d + c0] = (r[r0 * d + c0] + c * y[k * d + c0]) % n;
                }
            }
        }
        r
    };
    let mut x: Vec<u64> = a.data().iter().map(|&v| v as u64).collect();
    for _ in 0..i {
        let mut y = x.clone();
        for _ in 1..p {
            y = mulz(&y, &x);
        }
        x = y;
    }
    let t = (0..d).map(|k| x[k * d + k]).sum::<u64>() % n;
    ((t / p.pow(i)) % p) as u32
}

/// The Jacobson radical of the algebra spanned by `basis`, which must contain the identity.
pub fn radical(p: u32, d: usize, basis: &[FpMatrix]) -> Vec<FpMatrix> {
    let mut ideal: Vec<FpMatrix> = basis.to_vec();
    let mut i = 0u32;
    while (p as usize).pow(i) <= d && !ideal.is_empty() {
        let rows: Vec<Vec<u32>> = ideal
            .iter()
            .map(|x| basis.iter().map(|b| frobenius_trace(&x.mul(b), i)).collect())
            .collect();
        let g = FpMatrix::from_rows(p, basis.len(), &rows);
        let ns = nullspace(&g.transpose());
        ideal = ns
            .basis_vecs()
            .iter()
            .map(|c| {
                let mut m = FpMatrix::zero(p, d, d);
                for (x, &k) in ideal.iter().zip(c) {
                    if k != 0 {
                        m = m.add(&x.scale(k));
                    }
                }
                m
            })
            .collect();
        i += 1;
    }
    ideal
}

/// A basis of `J` adapted to the powers `J ⊇ J² ⊇ ⋯`; the elements `1 + b` generate `1 + J`.
fn radical_filtration_basis(p: u32, d: usize, rad: &[FpMatrix]) -> Vec<FpMatrix> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<u32>> = rad.iter().map(flat).collect();
    while !level.is_empty() {
        let mut ech = Echelon::new(p, d * d);
        let mut next = Vec::new();
        for x in &level {
            let xm = FpMatrix::from_flat(p, d, d, x.clone());
            for y in rad {
                let v = flat(&xm.mul(y));
                if ech.insert(&v) {
                    next.push(v);
                }
            }
        }
        let q = QuotientMap::new(p, d * d, &next, &level);
        out.extend(q.complement.iter().map(|v| FpMatrix::from_flat(p, d, d, v.clone())));
        level = next;
    }
    out
}

/// The unit group of a matrix algebra, with its generators and order.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    pub gens: Vec<FpMatrix>,
    pub order: u128,
    pub radical_dim: usize,
    /// `(m, q)` for each simple component `M_m(GF(q))` of the semisimple quotient.
    pub components: Vec<(usize, u64)>,
}

/// Arithmetic in the semisimple quotient `A/J`, on coordinates relative to a complement of `J`.
struct Quotient {
    p: u32,
    d: usize,
    q: QuotientMap,
}

impl Quotient {
    fn dim(&self) -> usize {
        self.q.dim()
    }
    fn lift(&self, x: &[u32]) -> FpMatrix {
        FpMatrix::from_flat(self.p, self.d, self.d, self.q.lift(x))
    }
    fn proj(&self, m: &FpMatrix) -> Vec<u32> {
        self.q.project(&flat(m))
    }
    fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        self.proj(&self.lift(x).mul(&self.lift(y)))
    }
    fn sub(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter().zip(y).map(|(&a, &b)| sub_mod(a, b, self.p)).collect()
    }
    fn scale(&self, x: &[u32], c: u32) -> Vec<u32> {
        x.iter().map(|&a| mul_mod(a, c, self.p)).collect()
    }
    fn is_zero(x: &[u32]) -> bool {
        x.iter().all(|&v| v == 0)
    }
    fn basis(&self) -> Vec<Vec<u32>> {
        (0..self.dim())
            .map(|k| {
                let mut v = vec![0u32; self.dim()];
                v[k] = 1;
                v
            })
            .collect()
    }
    /// A basis of `e·S·f`.
    fn corner(&self, e: &[u32], f: &[u32]) -> Vec<Vec<u32>> {
        let mut ech = Echelon::new(self.p, self.dim());
        let mut out = Vec::new();
        for b in self.basis() {
            let v = self.mul(&self.mul(e, &b), f);
            if ech.insert(&v) {
                out.push(v);
            }
        }
        out
    }
    fn eval(&self, f: &[u32], x: &[u32], one: &[u32]) -> Vec<u32> {
        let mut r = vec![0u32; self.dim()];
        for &c in f.iter().rev() {
            r = self.mul(&r, x);
            r = r.iter().zip(one).map(|(&a, &b)| add_mod(a, mul_mod(c, b, self.p), self.p)).collect();
        }
        r
    }
    fn pow(&self, x: &[u32], mut e: u128, one: &[u32]) -> Vec<u32> {
        let mut r = one.to_vec();
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }
    /// Minimal polynomial of `x` in the corner algebra with identity `one`.
    fn min_poly(&self, x: &[u32], one: &[u32]) -> Vec<u32> {
        let mut powers = vec![one.to_vec()];
        let mut ech = Echelon::new(self.p, self.dim());
        ech.insert(one);
        loop {
            let next = self.mul(powers.last().unwrap(), x);
            if !ech.insert(&next) {
                let qm = QuotientMap::new(self.p, self.dim(), &[], &powers);
                let c = qm.project(&next);
                let mut f: Vec<u32> = c.iter().map(|&v| (self.p - v) % self.p).collect();
                f.push(1);
                return f;
            }
            powers.push(next);
        }
    }
    /// A nontrivial idempotent `e1` of the corner with identity `e`, split off by `x`.
    fn split_by(&self, x: &[u32], e: &[u32]) -> Option<Vec<u32>> {
        let mu = self.min_poly(x, e);
        let (u, v) = poly::coprime_split(&mu, self.p)?;
        let (_, _, t) = poly::xgcd(&u, &v, self.p);
        // t·v ≡ 1 mod u and ≡ 0 mod v
        let ev = poly::rem(&poly::mul(&t, &v, self.p), &mu, self.p);
        Some(self.eval(&ev, x, e))
    }
}

/// Splits `e` into orthogonal primitive idempotents of the simple algebra `e·S·e`
/// whose centre has dimension `f`.
fn primitive_split(s: &Quotient, e: Vec<u32>, f: usize, out: &mut Vec<Vec<u32>>) {
    let corner = s.corner(&e, &e);
    if corner.len() == f {
        out.push(e);
        return;
    }
    let mut candidates: Vec<Vec<u32>> = corner.clone();
    for i in 0..corner.len() {
        for j in i + 1..corner.len() {
            candidates.push(corner[i].iter().zip(&corner[j]).map(|(&a, &b)| add_mod(a, b, s.p)).collect());
        }
    }
    let mut k = 0usize;
    loop {
        let x = if k < candidates.len() {
            candidates[k].clone()
        } else {
            // deterministic pseudo-random combinations
            let mut state = (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let mut v = vec![0u32; s.dim()];
            for b in &corner {
                state ^= state >> 29;
                state = state.wrapping_mul(0xBF58_476D_1CE4_E5B9);
                let c = (state % s.p as u64) as u32;
                for (a, &bb) in v.iter_mut().zip(b) {
                    *a = add_mod(*a, mul_mod(c, bb, s.p), s.p);
                }
            }
            v
        };
        k += 1;
        if let Some(e1) = s.split_by(&x, &e) {
            let e2 = s.sub(&e, &e1);
            primitive_split(s, e1, f, out);
            primitive_split(s, e2, f, out);
            return;
        }
        assert!(k < 100_000, "no splitting element found in a non-division corner");
    }
}

/// Idempotent lifting through the nilpotent ideal: `x ↦ 3x² − 2x³` until idempotent.
fn lift_idempotent(x: FpMatrix) -> FpMatrix {
    let p = x.p();
    let mut x = x;
    loop {
        let x2 = x.mul(&x);
        if x2 == x {
            return x;
        }
        let x3 = x2.mul(&x);
        x = x2.scale(3 % p).sub(&x3.scale(2 % p));
    }
}

/// Generators and order of the unit group of the algebra spanned by `basis`
/// (which must contain the identity of `GF(p)^{d×d}`).
pub fn unit_group(p: u32, d: usize, basis: &[FpMatrix]) -> UnitGroup {
    let id = FpMatrix::identity(p, d);
    let rad = radical(p, d, basis);
    let rflat: Vec<Vec<u32>> = rad.iter().map(flat).collect();
    let aflat: Vec<Vec<u32>> = basis.iter().map(flat).collect();
    let s = Quotient { p, d, q: QuotientMap::new(p, d * d, &rflat, &aflat) };
    let mut gens: Vec<FpMatrix> = radical_filtration_basis(p, d, &rad).iter().map(|b| id.add(b)).collect();
    let mut order = (p as u128).pow(rad.len() as u32);
    let one_s = s.proj(&id);
    let sb = s.basis();

    // centre of S and its Frobenius-fixed subalgebra
    let zrows: Vec<Vec<u32>> = sb
        .iter()
        .map(|x| sb.iter().flat_map(|y| s.sub(&s.mul(x, y), &s.mul(y, x))).collect())
        .collect();
    let zcols = s.dim() * s.dim();
    let centre: Vec<Vec<u32>> = if zcols == 0 {
        Vec::new()
    } else {
        nullspace(&FpMatrix::from_rows(p, zcols, &zrows).transpose()).basis_vecs()
    };
    let zq = QuotientMap::new(p, s.dim(), &[], &centre);
    let frows: Vec<Vec<u32>> = centre
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let mut r = zq.project(&s.pow(z, p as u128, &one_s));
            r[k] = sub_mod(r[k], 1, p);
            r
        })
        .collect();
    let fixed: Vec<Vec<u32>> = if centre.is_empty() {
        Vec::new()
    } else {
        nullspace(&FpMatrix::from_rows(p, centre.len(), &frows).transpose())
            .basis_vecs()
            .iter()
            .map(|c| zq.lift(c))
            .collect()
    };
    // central primitive idempotents
    let mut central = vec![one_s.clone()];
    for z in &fixed {
        let mut next = Vec::new();
        for e in &central {
            for lam in 0..p {
                let mut v = e.clone();
                for mu in (0..p).filter(|&m| m != lam) {
                    let c = inv_mod(sub_mod(lam, mu, p), p);
                    let zm = s.sub(z, &s.scale(&one_s, mu));
                    v = s.scale(&s.mul(&v, &zm), c);
                }
                if !Quotient::is_zero(&v) {
                    next.push(v);
                }
            }
        }
        central = next;
    }
    let mut prims: Vec<Vec<u32>> = Vec::new();
    let mut components = Vec::new();
    for c in central {
        let f = centre.iter().fold(Echelon::new(p, s.dim()), |mut ech, z| {
            ech.insert(&s.mul(&c, z));
            ech
        });
        let f = f.dim();
        let dim_c = s.corner(&c, &c).len();
        let m = ((dim_c / f) as f64).sqrt().round() as usize;
        assert_eq!(m * m * f, dim_c, "simple component has dimension m²f");
        let q = (p as u64).pow(f as u32);
        components.push((m, q));
        order *= gl_order(m, q as u32);
        let start = prims.len();
        primitive_split(&s, c, f, &mut prims);
        debug_assert_eq!(prims.len() - start, m);
    }

    // lift to orthogonal idempotents of A
    let mut rest = id.clone();
    let mut lifted: Vec<FpMatrix> = Vec::new();
    for (k, e) in prims.iter().enumerate() {
        let x = if k + 1 == prims.len() { rest.clone() } else { lift_idempotent(rest.mul(&s.lift(e)).mul(&rest)) };
        rest = rest.sub(&x);
        lifted.push(x);
    }

    for (k, (e, el)) in prims.iter().zip(&lifted).enumerate() {
        // generator of the multiplicative group of the field e·S·e
        let field = s.corner(e, e);
        let qf = (p as u128).pow(field.len() as u32);
        let primes: Vec<u128> = factorize((qf - 1) as u64).iter().map(|&(r, _)| r as u128).collect();
        if qf > 2 {
            let mut c = vec![0u32; field.len()];
            let gen = loop {
                crate::linalg::increment(&mut c, p);
                let mut y = vec![0u32; s.dim()];
                for (&k, b) in c.iter().zip(&field) {
                    y = y.iter().zip(b).map(|(&a, &bb)| add_mod(a, mul_mod(k, bb, p), p)).collect();
                }
                if primes.iter().all(|&r| s.pow(&y, (qf - 1) / r, e) != *e) {
                    break y;
                }
            };
            let y = el.mul(&s.lift(&gen)).mul(el);
            gens.push(y.add(&id.sub(el)));
        }
        for (j, ej) in lifted.iter().enumerate() {
            if j == k {
                continue;
            }
            let mut ech = Echelon::new(p, d * d);
            for b in basis {
                let y = el.mul(b).mul(ej);
                if ech.insert(&flat(&y)) {
                    gens.push(id.add(&y));
                }
            }
        }
    }
    UnitGroup { gens, order, radical_dim: rad.len(), components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::ElemSet;

    fn all_elements(p: u32, basis: &[FpMatrix]) -> Vec<FpMatrix> {
        let d = basis[0].rows();
        let mut c = vec![0u32; basis.len()];
        let mut out = Vec::new();
        loop {
            let mut m = FpMatrix::zero(p, d, d);
            for (&k, b) in c.iter().zip(basis) {
                m = m.add(&b.scale(k));
            }
            out.push(m);
            if !crate::linalg::increment(&mut c, p) {
                return out;
            }
        }
    }

    fn is_nilpotent(m: &FpMatrix) -> bool {
        m.pow(m.rows() as u64).is_zero()
    }

    /// Radical by brute force: `x` with `x·y` nilpotent for every `y`.
    fn brute_radical_dim(p: u32, basis: &[FpMatrix]) -> usize {
        let all = all_elements(p, basis);
        let rad: Vec<&FpMatrix> = all.iter().filter(|x| all.iter().all(|y| is_nilpotent(&x.mul(y)))).collect();
        (rad.len() as f64).log(p as f64).round() as usize
    }

    fn check(p: u32, basis: &[FpMatrix]) {
        let d = basis[0].rows();
        let all = all_elements(p, basis);
        let units: Vec<FpMatrix> = all.into_iter().filter(|m| m.rank() == d).collect();
        let ug = unit_group(p, d, basis);
        assert_eq!(ug.radical_dim, brute_radical_dim(p, basis));
        assert_eq!(ug.order, units.len() as u128);
        for g in &ug.gens {
            assert!(units.contains(g));
        }
        let gen = ElemSet::generated(&FpMatrix::identity(p, d), &ug.gens, 1 << 20).unwrap();
        assert_eq!(gen.len(), units.len());
    }

    fn unit(p: u32, d: usize, a: usize, b: usize) -> FpMatrix {
        let mut e = FpMatrix::zero(p, d, d);
        e.set(a, b, 1);
        e
    }

    fn span_closure(p: u32, gens: &[FpMatrix]) -> Vec<FpMatrix> {
        let d = gens[0].rows();
        let mut ech = Echelon::new(p, d * d);
        let mut out: Vec<FpMatrix> = Vec::new();
        let mut queue = vec![FpMatrix::identity(p, d)];
        queue.extend(gens.iter().cloned());
        while let Some(x) = queue.pop() {
            if ech.insert(x.data()) {
                for g in gens {
                    queue.push(x.mul(g));
                }
                out.push(x);
            }
        }
        out
    }

    #[test]
    fn polynomial_split() {
        // (x+1)^2 (x^2+x+1) over GF(2)
        let f = poly::mul(&[1, 0, 1], &[1, 1, 1], 2);
        let (u, v) = poly::coprime_split(&f, 2).unwrap();
        assert_eq!(poly::mul(&u, &v, 2), f);
        assert_eq!(poly::gcd(&u, &v, 2), vec![1]);
        assert!(poly::coprime_split(&[1, 0, 1], 2).is_none());
        // (x^2+1)(x^2+x+2) over GF(3): two distinct quadratics
        let g = poly::mul(&[1, 0, 1], &[2, 1, 1], 3);
        let (u, v) = poly::coprime_split(&g, 3).unwrap();
        assert_eq!(poly::deg(&u), 2);
        assert_eq!(poly::deg(&v), 2);
    }

    #[test]
    fn full_matrix_algebra() {
        for &(p, d) in &[(2u32, 2usize), (3, 2), (2, 3)] {
            let basis: Vec<FpMatrix> = (0..d * d).map(|k| unit(p, d, k / d, k % d)).collect();
            check(p, &basis);
        }
    }

    #[test]
    fn upper_triangular() {
        let p = 2;
        let basis: Vec<FpMatrix> =
            (0..3).flat_map(|a| (a..3).map(move |b| (a, b))).map(|(a, b)| unit(p, 3, a, b)).collect();
        check(p, &basis);
    }

    #[test]
    fn block_with_multiplicity_two() {
        // M_2(GF(2)) acting diagonally on two copies of a 2-dimensional space: trace form vanishes
        let p = 2;
        let blocks: Vec<FpMatrix> = (0..4)
            .map(|k| {
                let e = unit(p, 2, k / 2, k % 2);
                FpMatrix::block_diag(p, &[e.clone(), e])
            })
            .collect();
        check(p, &blocks);
    }

    #[test]
    fn field_extension_and_group_algebras() {
        // GF(4) inside M_2(GF(2)), and GF(2)[S3] via its regular representation
        let c = FpMatrix::from_rows(2, 2, &[vec![0, 1], vec![1, 1]]);
        check(2, &span_closure(2, &[c]));
        let perm = |img: &[usize]| {
            let mut m = FpMatrix::zero(2, 3, 3);
            for (i, &j) in img.iter().enumerate() {
                m.set(i, j, 1);
            }
            m
        };
        // permutation module of S3 on three points over GF(2) and GF(3)
        for p in [2u32, 3] {
            let to_p = |m: FpMatrix| FpMatrix::from_flat(p, 3, 3, m.data().to_vec());
            let a = to_p(perm(&[1, 0, 2]));
            let b = to_p(perm(&[1, 2, 0]));
            check(p, &span_closure(p, &[a, b]));
        }
        // GF(3)[C3] regular: local algebra
        let r = FpMatrix::from_rows(3, 3, &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        check(3, &span_closure(3, &[r]));
    }

    #[test]
    fn centralizer_of_a_module() {
        // C3 acting on GF(2)^4 as two copies of the 2-dimensional irreducible: End ≅ M_2(GF(4))
        let c = FpMatrix::from_rows(2, 2, &[vec![0, 1], vec![1, 1]]);
        let m = FpMatrix::block_diag(2, &[c.clone(), c]);
        let module = crate::cohom::GModule::new(crate::pcgroup::examples::cyclic(3), 2, 4, vec![m]).unwrap();
        let basis = crate::descend::centralizer_algebra(&module);
        assert_eq!(basis.len(), 8);
        let ug = unit_group(2, 4, &basis);
        assert_eq!(ug.order, gl_order(2, 4));
        check(2, &basis);
    }
}
