//! Dense linear algebra over prime fields GF(p).

use crate::{Error, Result};
use std::fmt;

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64) % p as u64) as u32
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow_mod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(a % p != 0, "zero has no inverse");
    pow_mod(a, p as u64 - 2, p)
}

/// `dst += c * src` over GF(p).
#[inline]
pub fn axpy(dst: &mut [u32], c: u32, src: &[u32], p: u32) {
    if c == 0 {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if *s != 0 {
            *d = ((*d as u64 + c as u64 * *s as u64) % p as u64) as u32;
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, ", self.p)?;
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()?;
        write!(f, ")")
    }
}

impl FpMatrix {
    pub fn zero(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from row vectors; entries are reduced mod p.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r.iter().map(|x| x % p));
        }
        FpMatrix { p, rows: rows.len(), cols, data }
    }

    pub fn from_flat(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let data = data.into_iter().map(|x| x % p).collect();
        FpMatrix { p, rows, cols, data }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as u32))
    }

    pub fn push_row(&mut self, r: &[u32]) {
        assert_eq!(r.len(), self.cols);
        self.data.extend(r.iter().map(|x| x % self.p));
        self.rows += 1;
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.p, other.p, "prime mismatch");
        let p = self.p as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let o = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let r = other.row(k);
                for (x, &b) in o.iter_mut().zip(r) {
                    *x += a * b as u64;
                }
            }
            for x in o.iter_mut() {
                *x %= p;
            }
        }
        FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|x| x as u32).collect(),
        }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0u32; self.cols];
        for (k, &a) in v.iter().enumerate() {
            axpy(&mut out, a, self.row(k), self.p);
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                (s % self.p as u64) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, b, self.p)).collect();
        FpMatrix { data, ..self.clone() }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| sub_mod(a, b, self.p)).collect();
        FpMatrix { data, ..self.clone() }
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let data = self.data.iter().map(|&a| mul_mod(a, c, self.p)).collect();
        FpMatrix { data, ..self.clone() }
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = FpMatrix::zero(self.p, n, 2 * n);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1 % self.p;
        }
        let (r, rank, piv) = rref(&aug);
        if rank < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FpMatrix::zero(self.p, n, n);
        for i in 0..n {
            inv.row_mut(i).copy_from_slice(&r.row(i)[n..]);
        }
        Some(inv)
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        let mut base = self.clone();
        let mut r = FpMatrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        r
    }

    /// Block diagonal matrix with the given square blocks.
    pub fn block_diag(p: u32, blocks: &[FpMatrix]) -> FpMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = FpMatrix::zero(p, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.data[(off + i) * n + off + j] = b.get(i, j);
                }
            }
            off += b.rows;
        }
        m
    }

    /// Is the matrix in reduced row echelon form with no zero rows?
    pub fn is_rref(&self) -> bool {
        let mut last: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..self.rows {
            let r = self.row(i);
            match r.iter().position(|&x| x != 0) {
                None => seen_zero = true,
                Some(c) => {
                    if seen_zero || r[c] != 1 || last.is_some_and(|l| c <= l) {
                        return false;
                    }
                    for k in 0..self.rows {
                        if k != i && self.get(k, c) != 0 {
                            return false;
                        }
                    }
                    last = Some(c);
                }
            }
        }
        true
    }
}

/// Reduced row echelon form. Zero rows are kept at the bottom so the shape is preserved.
pub fn rref(m: &FpMatrix) -> (FpMatrix, usize, Vec<usize>) {
    let p = m.p;
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(pr) = (r..a.rows).find(|&i| a.get(i, c) != 0) else { continue };
        if pr != r {
            for j in 0..a.cols {
                a.data.swap(pr * a.cols + j, r * a.cols + j);
            }
        }
        let iv = inv_mod(a.get(r, c), p);
        for x in a.row_mut(r) {
            *x = mul_mod(*x, iv, p);
        }
        let pivot_row = a.row(r).to_vec();
        for i in 0..a.rows {
            if i != r {
                let f = a.get(i, c);
                if f != 0 {
                    axpy(a.row_mut(i), p - f, &pivot_row, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, r, pivots)
}

/// Right nullspace `{v : m v = 0}`.
pub fn nullspace(m: &FpMatrix) -> Subspace {
    let p = m.p;
    let (r, rank, piv) = rref(m);
    let n = m.cols;
    let mut is_piv = vec![false; n];
    for &c in &piv {
        is_piv[c] = true;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|&c| !is_piv[c]) {
        let mut v = vec![0u32; n];
        v[f] = 1 % p;
        for (i, &c) in piv.iter().enumerate().take(rank) {
            let x = r.get(i, f);
            v[c] = (p - x) % p;
        }
        basis.push(v);
    }
    Subspace::from_vectors(p, n, &basis)
}

/// Incrementally built echelon basis, used for spinning and membership tests.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    n: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u32, n: usize) -> Self {
        Echelon { p, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Reduces `v` in place against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &mut [u32]) {
        for (r, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            if f != 0 {
                axpy(v, self.p - f, r, self.p);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns true if the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(c) = w.iter().position(|&x| x != 0) else { return false };
        let iv = inv_mod(w[c], self.p);
        for x in w.iter_mut() {
            *x = mul_mod(*x, iv, self.p);
        }
        for r in self.rows.iter_mut() {
            let f = r[c];
            if f != 0 {
                axpy(r, self.p - f, &w, self.p);
            }
        }
        self.rows.push(w);
        self.pivots.push(c);
        true
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace::from_vectors(self.p, self.n, &self.rows)
    }
}

/// A subspace of GF(p)^d stored by its canonical rref basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    basis: FpMatrix,
}

impl Subspace {
    pub fn from_vectors(p: u32, d: usize, vecs: &[Vec<u32>]) -> Self {
        let m = FpMatrix::from_rows(p, d, vecs);
        let (r, rank, _) = rref(&m);
        let mut basis = FpMatrix::zero(p, 0, d);
        for i in 0..rank {
            basis.push_row(r.row(i));
        }
        Subspace { basis }
    }

    pub fn zero(p: u32, d: usize) -> Self {
        Subspace { basis: FpMatrix::zero(p, 0, d) }
    }

    pub fn full(p: u32, d: usize) -> Self {
        Subspace { basis: FpMatrix::identity(p, d) }
    }

    pub fn p(&self) -> u32 {
        self.basis.p
    }
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }
    pub fn dim(&self) -> usize {
        self.basis.rows
    }
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }
    pub fn basis_vecs(&self) -> Vec<Vec<u32>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim()).map(|i| self.basis.row(i).iter().position(|&x| x != 0).unwrap()).collect()
    }

    pub fn echelon(&self) -> Echelon {
        Echelon { p: self.p(), n: self.ambient_dim(), rows: self.basis_vecs(), pivots: self.pivots() }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let e = self.echelon();
        other.basis_vecs().iter().all(|v| e.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis_vecs();
        v.extend(other.basis_vecs());
        Subspace::from_vectors(self.p(), self.ambient_dim(), &v)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // annihilator of the sum of annihilators
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// `{w : <v, w> = 0 for all v in self}` under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.p(), self.ambient_dim());
        }
        nullspace(&self.basis)
    }

    /// Image of the subspace under right multiplication by `m` (rows times m).
    pub fn image(&self, m: &FpMatrix) -> Subspace {
        let vecs: Vec<Vec<u32>> = (0..self.dim()).map(|i| m.vec_mul(self.basis.row(i))).collect();
        Subspace::from_vectors(self.p(), m.cols(), &vecs)
    }

    /// Basis vectors of a complement: unit vectors on the non-pivot columns.
    pub fn complement_basis(&self) -> Vec<Vec<u32>> {
        let d = self.ambient_dim();
        let piv = self.pivots();
        (0..d)
            .filter(|c| !piv.contains(c))
            .map(|c| {
                let mut v = vec![0; d];
                v[c] = 1;
                v
            })
            .collect()
    }
}

/// Coordinates on a quotient space `V / S`, where `S ⊆ V ⊆ GF(p)^n`.
///
/// `complement` extends a basis of `S` to one of `V`; `project` returns the
/// coefficients of `v + S` on the complement.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    sub: Echelon,
    comp_pivots: Vec<usize>,
    change_inv: FpMatrix,
    pub complement: Vec<Vec<u32>>,
}

impl QuotientMap {
    /// `sub` spans S, `space` spans V (must contain S).
    pub fn new(p: u32, n: usize, sub: &[Vec<u32>], space: &[Vec<u32>]) -> Self {
        let mut se = Echelon::new(p, n);
        for v in sub {
            se.insert(v);
        }
        let mut full = se.clone();
        let mut complement = Vec::new();
        for v in space {
            if full.insert(v) {
                complement.push(v.clone());
            }
        }
        let mut ce = Echelon::new(p, n);
        for v in &complement {
            let mut w = v.clone();
            se.reduce(&mut w);
            ce.insert(&w);
        }
        let k = complement.len();
        let mut q = QuotientMap { sub: se, comp_pivots: ce.pivots, change_inv: FpMatrix::identity(p, k), complement };
        let mut change = FpMatrix::zero(p, k, k);
        for i in 0..k {
            let rc = q.raw_coords(&q.complement[i]);
            change.row_mut(i).copy_from_slice(&rc);
        }
        q.change_inv = change.inverse().expect("complement basis is independent");
        q
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    fn raw_coords(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.sub.reduce(&mut w);
        self.comp_pivots.iter().map(|&c| w[c]).collect()
    }

    /// Coordinates of `v + S` relative to `complement`. `v` must lie in V.
    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        let r = self.raw_coords(v);
        if r.is_empty() {
            return r;
        }
        self.change_inv.vec_mul(&r)
    }

    /// A representative of the class with the given coordinates.
    pub fn lift(&self, coords: &[u32]) -> Vec<u32> {
        let p = self.sub.p;
        let mut v = vec![0u32; self.sub.n];
        for (c, b) in coords.iter().zip(&self.complement) {
            axpy(&mut v, *c, b, p);
        }
        v
    }
}

/// Gaussian binomial coefficient, saturating at u128::MAX.
pub fn gaussian_binomial(d: usize, k: usize, p: u32) -> u128 {
    if k > d {
        return 0;
    }
    let p = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(p.saturating_pow((d - i) as u32).saturating_sub(1));
        den = den.saturating_mul(p.saturating_pow((i + 1) as u32) - 1);
    }
    num / den
}

/// All subspaces of GF(p)^d with dimension in `dim_filter` (all dimensions if `None`),
/// in canonical-basis lexicographic order within each dimension.
pub fn enumerate_subspaces(d: usize, p: u32, dim_filter: Option<&[usize]>, budget: usize) -> Result<Vec<Subspace>> {
    let dims: Vec<usize> = match dim_filter {
        Some(f) => {
            let mut f: Vec<usize> = f.iter().copied().filter(|&k| k <= d).collect();
            f.sort_unstable();
            f.dedup();
            f
        }
        None => (0..=d).collect(),
    };
    let total: u128 = dims.iter().map(|&k| gaussian_binomial(d, k, p)).fold(0, |a, b| a.saturating_add(b));
    if total > budget as u128 {
        return Err(Error::CapExceeded(format!("{total} subspaces of GF({p})^{d} exceed budget {budget}")));
    }
    let mut out = Vec::with_capacity(total as usize);
    for &k in &dims {
        let mut level = Vec::new();
        for pivots in combinations(d, k) {
            // free positions: (row r, column c) with c > pivot_r and c not a pivot
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| ((pc + 1)..d).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let mut vals = vec![0u32; free.len()];
            loop {
                let mut m = FpMatrix::zero(p, k, d);
                for (r, &pc) in pivots.iter().enumerate() {
                    m.set(r, pc, 1);
                }
                for (&(r, c), &v) in free.iter().zip(&vals) {
                    m.set(r, c, v);
                }
                level.push(Subspace { basis: m });
                if !increment(&mut vals, p) {
                    break;
                }
            }
        }
        level.sort();
        out.extend(level);
    }
    Ok(out)
}

/// Odometer increment over digits in [0, p); false on wrap-around.
pub fn increment(v: &mut [u32], p: u32) -> bool {
    for x in v.iter_mut().rev() {
        *x += 1;
        if *x < p {
            return true;
        }
        *x = 0;
    }
    false
}

/// All k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Smallest subspace containing `seed` that is closed under right multiplication by every
/// matrix in `action`.
pub fn invariant_subspace_closure(seed: &Subspace, action: &[FpMatrix]) -> Subspace {
    let mut e = seed.echelon();
    let mut queue = seed.basis_vecs();
    while let Some(v) = queue.pop() {
        for a in action {
            let w = a.vec_mul(&v);
            if e.insert(&w) {
                queue.push(w);
            }
        }
    }
    e.into_subspace()
}

/// Solves `x · a = b` for a row vector `x`, if a solution exists.
pub fn solve_left(a: &FpMatrix, b: &[u32]) -> Option<Vec<u32>> {
    solve_right(&a.transpose(), b)
}

/// Solves `a · x = b` for a column vector `x`, if a solution exists.
pub fn solve_right(a: &FpMatrix, b: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(a.rows, b.len());
    let p = a.p;
    let mut aug = FpMatrix::zero(p, a.rows, a.cols + 1);
    for i in 0..a.rows {
        aug.row_mut(i)[..a.cols].copy_from_slice(a.row(i));
        aug.data[i * (a.cols + 1) + a.cols] = b[i] % p;
    }
    let (r, rank, piv) = rref(&aug);
    if rank > 0 && piv[rank - 1] == a.cols {
        return None;
    }
    let mut x = vec![0u32; a.cols];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = r.get(i, a.cols);
    }
    Some(x)
}
