//! Oracles and seeded generators shared by the integration suites.
//!
//! Nothing here calls into the library's normal-form code: determinants are
//! computed by rational Gaussian elimination, invariant factors from gcds
//! of minors, and endomorphism properties by enumerating group elements.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use algdyn::equivariant::EndoOnFinitelyGenerated;
use algdyn::group_ring::{is_lopsided, LaurentPoly};
use algdyn::zlattice::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Determinant by Gaussian elimination over Q.
pub fn det_oracle(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().cloned().map(BigRational::from).collect()).collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return BigInt::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for i in col + 1..n {
            let factor = &a[i][col] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let v = &a[col][j] * &factor;
                a[i][j] -= v;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

pub fn matrix_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `gcd` of all `k × k` minors (0 when all vanish; 1 for `k = 0`).
pub fn minor_gcd(rows: &[Vec<BigInt>], k: usize) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    let (m, n) = (rows.len(), rows.first().map_or(0, Vec::len));
    let mut g = BigInt::zero();
    for rs in subsets(m, k) {
        for cs in subsets(n, k) {
            let minor: Vec<Vec<BigInt>> =
                rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect()).collect();
            g = g.gcd(&det_oracle(&minor));
        }
    }
    g
}

/// Invariant factors `d_k = D_k / D_{k−1}` with `D_k` the gcd of `k`-minors;
/// zeros once `D_k` vanishes. Length `min(m, n)`.
pub fn invariant_factors_oracle(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let (m, n) = (rows.len(), rows.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.min(n) {
        let d = minor_gcd(rows, k);
        if d.is_zero() {
            out.push(BigInt::zero());
            prev = BigInt::zero();
            continue;
        }
        assert!(!prev.is_zero());
        out.push(&d / &prev);
        prev = d;
    }
    out
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> IntMatrix {
    let r = rng.random_range(1..=max_dim);
    let c = rng.random_range(1..=max_dim);
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.random_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_rows(&rows).unwrap()
}

/// Lopsided polynomial over `Z^dim` with support in `[−1, 1]^dim`: up to
/// four off-center terms with coefficients in `[−2, 2]`, and a dominant
/// term whose modulus is at least `3S/2 + 1` for off-center mass `S`.
pub fn random_lopsided(rng: &mut ChaCha8Rng, dim: usize) -> LaurentPoly {
    loop {
        let mut terms: Vec<(Vec<i64>, i64)> = Vec::new();
        for _ in 0..rng.random_range(0..=4) {
            let e: Vec<i64> = (0..dim).map(|_| rng.random_range(-1..=1)).collect();
            terms.push((e, rng.random_range(-2..=2)));
        }
        let rest = LaurentPoly::from_terms(dim, terms).unwrap();
        let center: Vec<i64> = (0..dim).map(|_| rng.random_range(-1..=1)).collect();
        let mass: i64 =
            rest.terms().iter().filter(|(e, _)| **e != center).map(|(_, c)| c.abs().to_i64().unwrap()).sum();
        let lo = 3 * mass / 2 + 1;
        let mut c = rng.random_range(lo..=2 * mass + 2);
        if rng.random_bool(0.5) {
            c = -c;
        }
        let c_old = rest.coefficient(&center);
        let f = &rest + &LaurentPoly::monomial(center.clone(), BigInt::from(c) - c_old);
        if is_lopsided(&f) == Some(center) {
            return f;
        }
    }
}

/// Random polynomial with support in `[−r, r]^dim`, coefficients in `[−c, c]`.
pub fn random_poly(rng: &mut ChaCha8Rng, dim: usize, r: i64, c: i64, max_terms: usize) -> LaurentPoly {
    let n = rng.random_range(0..=max_terms);
    let terms: Vec<(Vec<i64>, i64)> =
        (0..n).map(|_| ((0..dim).map(|_| rng.random_range(-r..=r)).collect(), rng.random_range(-c..=c))).collect();
    LaurentPoly::from_terms(dim, terms).unwrap()
}

/// Invariant-factor chain with product at most `max_order`.
pub fn random_torsion(rng: &mut ChaCha8Rng, max_order: u64) -> Vec<u64> {
    let count = rng.random_range(0..=3);
    let mut factors: Vec<u64> = Vec::new();
    let mut order = 1u64;
    for _ in 0..count {
        let base = factors.last().copied().unwrap_or(1);
        let options: Vec<u64> = (1..=12u64).map(|k| base * k).filter(|&m| m >= 2 && order * m <= max_order).collect();
        if options.is_empty() {
            break;
        }
        let m = options[rng.random_range(0..options.len())];
        factors.push(m);
        order *= m;
    }
    factors
}

/// Random well-defined endomorphism of `⊕ Z/mᵢ ⊕ Z^free`.
pub fn random_endo(rng: &mut ChaCha8Rng, torsion: &[u64], free: usize, bound: i64) -> EndoOnFinitelyGenerated {
    let mut group: Vec<BigInt> = torsion.iter().map(|&m| BigInt::from(m)).collect();
    group.extend(std::iter::repeat_n(BigInt::zero(), free));
    let n = group.len();
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let x = BigInt::from(rng.random_range(-bound..=bound));
            let (mi, mj) = (&group[i], &group[j]);
            rows[i][j] = match (mi.is_zero(), mj.is_zero()) {
                // torsion cannot map to a free summand
                (true, false) => BigInt::zero(),
                (_, true) => x,
                (false, false) => {
                    // need mᵢ | x·mⱼ
                    let step = mi / mi.gcd(mj);
                    x * step
                }
            };
        }
    }
    EndoOnFinitelyGenerated::new(group, IntMatrix::from_rows(&rows).unwrap()).expect("generator builds valid maps")
}

/// Kernel and image sizes of an endomorphism of a finite group, by listing
/// every element.
pub fn kernel_and_image_sizes(e: &EndoOnFinitelyGenerated) -> (u64, u64) {
    let moduli: Vec<u64> = e.group().iter().map(|m| m.to_u64().unwrap()).collect();
    let order: u64 = moduli.iter().product();
    let rows: Vec<Vec<i64>> =
        (0..e.group().len()).map(|i| e.matrix().row(i).iter().map(|x| x.to_i64().unwrap()).collect()).collect();
    let mut images = HashSet::new();
    let mut kernel = 0u64;
    let mut element = vec![0u64; moduli.len()];
    for _ in 0..order {
        let image: Vec<u64> = rows
            .iter()
            .zip(&moduli)
            .map(|(row, &m)| {
                let s: i128 = row.iter().zip(&element).map(|(&a, &x)| a as i128 * x as i128).sum();
                s.rem_euclid(m as i128) as u64
            })
            .collect();
        if image.iter().all(|&x| x == 0) {
            kernel += 1;
        }
        images.insert(image);
        for (x, &m) in element.iter_mut().zip(&moduli).rev() {
            *x += 1;
            if *x < m {
                break;
            }
            *x = 0;
        }
    }
    (kernel, images.len() as u64)
}

/// Random window inside `[0, n)^d` with symbols in `0..alphabet`.
pub fn random_window(rng: &mut ChaCha8Rng, n: i64, d: usize, alphabet: u8) -> BTreeMap<Vec<i64>, u8> {
    let cells = rng.random_range(1..=(n as usize).pow(d as u32));
    (0..cells).map(|_| ((0..d).map(|_| rng.random_range(0..n)).collect(), rng.random_range(0..alphabet))).collect()
}
