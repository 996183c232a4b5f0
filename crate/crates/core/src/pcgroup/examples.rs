//! Standard small groups used as fixtures.

use super::{factorize, PcPresentation};
use crate::finite::{GroupElem, PcModel, Perm};
use crate::linalg::FpMatrix;

/// Cyclic group of order n, generators `x^{n/(p_1...p_i)}` down a chain of prime steps.
pub fn cyclic(n: u64) -> PcPresentation {
    let mut primes = Vec::new();
    for (p, e) in factorize(n) {
        for _ in 0..e {
            primes.push(p as u32);
        }
    }
    let k = primes.len();
    let powers = (0..k)
        .map(|i| {
            let mut v = vec![0; k];
            if i + 1 < k {
                v[i + 1] = 1;
            }
            v
        })
        .collect();
    let conj = (0..k)
        .map(|j| {
            (0..j)
                .map(|_| {
                    let mut v = vec![0; k];
                    v[j] = 1;
                    v
                })
                .collect()
        })
        .collect();
    PcPresentation::new_unchecked(primes, powers, conj).unwrap()
}

pub fn elementary_abelian(p: u32, d: usize) -> PcPresentation {
    let mut g = PcPresentation::trivial();
    for _ in 0..d {
        g = g.direct_product(&cyclic(p as u64));
    }
    g
}

pub fn from_perms(n: usize, gens: &[Perm]) -> PcPresentation {
    PcModel::new(&Perm::identity(n), gens, 1 << 20).expect("solvable permutation group").pres
}

/// S3 = <a, b | a^2, b^3, b^a = b^2>.
pub fn symmetric3() -> PcPresentation {
    PcPresentation::new(vec![2, 3], vec![vec![0, 0], vec![0, 0]], vec![vec![], vec![vec![0, 2]]]).unwrap()
}

pub fn symmetric4() -> PcPresentation {
    from_perms(4, &[Perm::from_cycles(4, &[&[0, 1, 2, 3]]), Perm::from_cycles(4, &[&[0, 1]])])
}

pub fn alternating4() -> PcPresentation {
    from_perms(4, &[Perm::from_cycles(4, &[&[0, 1, 2]]), Perm::from_cycles(4, &[&[0, 1], &[2, 3]])])
}

pub fn dihedral(n: u16) -> PcPresentation {
    let rot: Vec<u16> = (0..n).collect();
    let refl: Vec<u16> = (0..n).map(|i| (n - i) % n).collect();
    from_perms(n as usize, &[Perm::from_cycles(n as usize, &[&rot]), Perm(refl)])
}

pub fn dihedral8() -> PcPresentation {
    dihedral(4)
}

pub fn quaternion8() -> PcPresentation {
    let i = FpMatrix::from_rows(3, 2, &[vec![0, 1], vec![2, 0]]);
    let j = FpMatrix::from_rows(3, 2, &[vec![1, 1], vec![1, 2]]);
    let one = i.one_like();
    PcModel::new(&one, &[i, j], 100).unwrap().pres
}
