//! Finite, checkable shadows of the standard counterexamples: the
//! one-chain subshift Σ with an injective non-surjective map, the shift
//! embedding of `T^N`, multiplication by `p` on the p-adic integers, and the
//! periodic tiling that makes periodic points dense in a full shift.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::equivariant::PresentedHom;
use crate::parallel::{self, Execution};
use crate::zlattice::{FiniteAbelianGroup, IntMatrix, Lattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CounterexampleError {
    #[error("window is empty")]
    EmptyWindow,
    #[error("window has more than one chain of 1s")]
    NotInSigma,
    #[error("width {0} outside the supported range")]
    InvalidWidth(usize),
    #[error("a preimage of {0} exists")]
    PreimageFound(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("truncation level must be positive")]
    InvalidLevel,
    #[error("window cell {0:?} lies outside the fundamental cube")]
    WindowTooLarge(Vec<i64>),
    #[error("period must be positive")]
    InvalidPeriod,
}

/// Bits on the integer interval `[lo, lo + len − 1]`, read as 0 outside.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryWindow {
    lo: i64,
    cells: Vec<bool>,
}

impl BinaryWindow {
    pub fn new(lo: i64, cells: Vec<bool>) -> Result<Self, CounterexampleError> {
        if cells.is_empty() {
            return Err(CounterexampleError::EmptyWindow);
        }
        Ok(BinaryWindow { lo, cells })
    }

    /// From a string of `0`/`1`.
    pub fn from_bits(lo: i64, bits: &str) -> Result<Self, CounterexampleError> {
        Self::new(lo, bits.chars().map(|c| c == '1').collect())
    }

    pub fn zeros(lo: i64, width: usize) -> Self {
        BinaryWindow { lo, cells: vec![false; width.max(1)] }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.cells.len() as i64 - 1
    }

    pub fn width(&self) -> usize {
        self.cells.len()
    }

    pub fn get(&self, n: i64) -> bool {
        if n < self.lo || n > self.hi() {
            return false;
        }
        self.cells[(n - self.lo) as usize]
    }

    pub fn ones(&self) -> Vec<i64> {
        (self.lo..=self.hi()).filter(|&n| self.get(n)).collect()
    }
}

/// `bits@lo`, e.g. `0010@-1`.
impl fmt::Display for BinaryWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.cells {
            f.write_str(if c { "1" } else { "0" })?;
        }
        write!(f, "@{}", self.lo)
    }
}

impl fmt::Debug for BinaryWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWindow({self})")
    }
}

/// At most one contiguous run of 1s.
pub fn sigma_member(w: &BinaryWindow) -> bool {
    let runs = w.cells.iter().zip(std::iter::once(&false).chain(&w.cells)).filter(|(&c, &prev)| c && !prev).count();
    runs <= 1
}

/// `τ(x)(n) = 1` if `(x(n), x(n+1)) = (0, 1)`, else `x(n)`, on `[lo − 1, hi]`.
pub fn sigma_tau(w: &BinaryWindow) -> Result<BinaryWindow, CounterexampleError> {
    if !sigma_member(w) {
        return Err(CounterexampleError::NotInSigma);
    }
    Ok(tau_on(w, w.lo - 1, w.hi()))
}

fn tau_on(x: &BinaryWindow, lo: i64, hi: i64) -> BinaryWindow {
    let cells = (lo..=hi)
        .map(|n| {
            let (a, b) = (x.get(n), x.get(n + 1));
            if !a && b {
                true
            } else {
                a
            }
        })
        .collect();
    BinaryWindow { lo, cells }
}

pub const MAX_SIGMA_WIDTH: usize = 16;

pub fn sigma_injectivity_exhaustive(width: usize) -> Result<bool, CounterexampleError> {
    sigma_injectivity_exhaustive_with(width, Execution::default())
}

/// Applies τ to every member of Σ among the `2^width` windows on
/// `[0, width − 1]` and reports whether all images are distinct.
pub fn sigma_injectivity_exhaustive_with(width: usize, exec: Execution) -> Result<bool, CounterexampleError> {
    if width == 0 || width > MAX_SIGMA_WIDTH {
        return Err(CounterexampleError::InvalidWidth(width));
    }
    let images: Vec<Option<BinaryWindow>> = parallel::map_range(exec, 1usize << width, |bits| {
        let w = BinaryWindow { lo: 0, cells: (0..width).map(|i| bits >> i & 1 == 1).collect() };
        sigma_tau(&w).ok()
    });
    let members: Vec<BinaryWindow> = images.into_iter().flatten().collect();
    let distinct: HashSet<&BinaryWindow> = members.iter().collect();
    Ok(distinct.len() == members.len())
}

/// Every restriction of a point of Σ to `[lo, hi]`: all-zero or one run.
fn sigma_restrictions(lo: i64, hi: i64) -> impl Iterator<Item = BinaryWindow> {
    let width = (hi - lo + 1) as usize;
    let runs = (0..width).flat_map(move |i| (i..width).map(move |j| (i, j)));
    std::iter::once(None).chain(runs.map(Some)).map(move |run| {
        let cells = (0..width).map(|k| run.is_some_and(|(i, j)| i <= k && k <= j)).collect();
        BinaryWindow { lo, cells }
    })
}

/// Whether some `x ∈ Σ` has `τ(x)` equal to `target` (zero outside its
/// window). The comparison runs over `[lo − 1, hi + 1]`, which depends on
/// `x` over `[lo − 1, hi + 2]`; every restriction of Σ to that interval is
/// tried, so no match rules out a bi-infinite preimage.
pub fn has_sigma_preimage(target: &BinaryWindow) -> bool {
    let (lo, hi) = (target.lo - 1, target.hi() + 1);
    let wanted = BinaryWindow { lo, cells: (lo..=hi).map(|n| target.get(n)).collect() };
    sigma_restrictions(lo, hi + 1).any(|x| tau_on(&x, lo, hi) == wanted)
}

/// A single-1 window of the given width with no τ-preimage, verified by
/// [`has_sigma_preimage`].
pub fn sigma_nonsurjectivity_witness(width: usize) -> Result<BinaryWindow, CounterexampleError> {
    if width < 2 {
        return Err(CounterexampleError::InvalidWidth(width));
    }
    let mut cells = vec![false; width];
    cells[width / 2] = true;
    let w = BinaryWindow { lo: 0, cells };
    if has_sigma_preimage(&w) {
        return Err(CounterexampleError::PreimageFound(w.to_string()));
    }
    Ok(w)
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// `a(x)(0) = 0`, `a(x)(n) = x(n − 1)` on a length-`m` truncation of `T^N`.
pub fn shift_embed(x: &[BigRational]) -> Vec<BigRational> {
    std::iter::once(BigRational::zero()).chain(x.iter().map(frac)).collect()
}

/// Preimage under [`shift_embed`], if any.
pub fn shift_embed_preimage(y: &[BigRational]) -> Option<Vec<BigRational>> {
    let (head, tail) = y.split_first()?;
    frac(head).is_zero().then(|| tail.iter().map(frac).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftEmbedReport {
    pub level: usize,
    pub samples_checked: usize,
    /// All sampled images distinct and recovered by the left inverse.
    pub injective_on_samples: bool,
    pub excluded_target: Vec<BigRational>,
    pub excluded_has_preimage: bool,
}

/// Checks the shift embedding on the `3^m` (capped) vectors with
/// coordinates in `{0, 1/3, 2/3}` and exhibits `(1/2, 0, …, 0)` outside
/// the image.
pub fn shift_embed_demo(m: usize) -> Result<ShiftEmbedReport, CounterexampleError> {
    if m == 0 {
        return Err(CounterexampleError::InvalidLevel);
    }
    let count = 3usize.checked_pow(m as u32).map_or(4096, |c| c.min(4096));
    let third = |k: usize| BigRational::new(BigInt::from(k), BigInt::from(3));
    let mut seen = HashSet::new();
    let mut injective = true;
    for idx in 0..count {
        let mut rest = idx;
        let x: Vec<BigRational> = (0..m)
            .map(|_| {
                let d = rest % 3;
                rest /= 3;
                third(d)
            })
            .collect();
        let y = shift_embed(&x);
        injective &= shift_embed_preimage(&y).as_ref() == Some(&x);
        injective &= seen.insert(y);
    }
    let mut excluded = vec![BigRational::zero(); m + 1];
    excluded[0] = BigRational::new(BigInt::one(), BigInt::from(2));
    let excluded_has_preimage = shift_embed_preimage(&excluded).is_some();
    Ok(ShiftEmbedReport {
        level: m,
        samples_checked: count,
        injective_on_samples: injective,
        excluded_target: excluded,
        excluded_has_preimage,
    })
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Base-`p` digits of `x mod p^m`, least significant first.
pub fn to_digits(x: &BigInt, p: u64, m: usize) -> Vec<u64> {
    let modulus = BigInt::from(p).pow(m as u32);
    let mut r = ((x % &modulus) + &modulus) % &modulus;
    (0..m)
        .map(|_| {
            let d = (&r % p).try_into().expect("digit below p");
            r /= p;
            d
        })
        .collect()
}

pub fn from_digits(digits: &[u64], p: u64) -> BigInt {
    digits.iter().rev().fold(BigInt::zero(), |acc, &d| acc * p + d)
}

/// Multiplication by `p` from level `m` to level `m + 1`: a digit shift.
pub fn times_p_digits(digits: &[u64]) -> Vec<u64> {
    std::iter::once(0).chain(digits.iter().copied()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicReport {
    pub p: u64,
    pub level: usize,
    /// `×p : Z/p^m → Z/p^{m+1}` is injective.
    pub injective: bool,
    /// Cokernel of `×p` inside `Z/p^{m+1}`.
    pub cokernel: FiniteAbelianGroup,
}

impl PadicReport {
    pub fn image_index(&self) -> BigInt {
        self.cokernel.order()
    }
}

pub fn padic_times_p_demo(p: u64, m: usize) -> Result<PadicReport, CounterexampleError> {
    if !is_prime(p) {
        return Err(CounterexampleError::NotPrime(p));
    }
    if m == 0 {
        return Err(CounterexampleError::InvalidLevel);
    }
    let pb = BigInt::from(p);
    let hom = PresentedHom::new(
        vec![pb.pow(m as u32)],
        vec![pb.pow(m as u32 + 1)],
        IntMatrix::from_rows(&[vec![pb.clone()]]).expect("1x1"),
    )
    .expect("×p is a homomorphism between these levels");
    let (free, cokernel) = hom.cokernel();
    debug_assert_eq!(free, 0);
    Ok(PadicReport { p, level: m, injective: hom.is_injective(), cokernel })
}

/// A Λ-periodic configuration on `Z^d`, stored on coset representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicConfiguration<S> {
    pub lattice: Lattice,
    pub values: Vec<S>,
}

impl<S> PeriodicConfiguration<S> {
    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn at(&self, gamma: &[i64]) -> &S {
        &self.values[self.lattice.coset_index(gamma)]
    }
}

/// Tiles the window over `(N·Z)^d`: `y(λ + r) = x(r)` for `r` in the cube
/// `[0, N)^d`; cube cells outside the window take `default`.
pub fn periodic_densify<S: Clone>(
    window: &BTreeMap<Vec<i64>, S>,
    n: i64,
    dim: usize,
    default: S,
) -> Result<PeriodicConfiguration<S>, CounterexampleError> {
    if n <= 0 || dim == 0 {
        return Err(CounterexampleError::InvalidPeriod);
    }
    if let Some(bad) = window.keys().find(|k| k.len() != dim || k.iter().any(|&x| x < 0 || x >= n)) {
        return Err(CounterexampleError::WindowTooLarge(bad.clone()));
    }
    let lattice = Lattice::scaled(n, dim).map_err(|_| CounterexampleError::InvalidPeriod)?;
    let values =
        lattice.coset_reps().iter().map(|r| window.get(r).cloned().unwrap_or_else(|| default.clone())).collect();
    Ok(PeriodicConfiguration { lattice, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(lo: i64, bits: &str) -> BinaryWindow {
        BinaryWindow::from_bits(lo, bits).unwrap()
    }

    #[test]
    fn membership() {
        assert!(sigma_member(&w(0, "00000")));
        assert!(sigma_member(&w(0, "01110")));
        assert!(!sigma_member(&w(0, "101")));
        assert!(sigma_member(&w(-3, "1111")));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(sigma_tau(&w(0, "000")).unwrap().ones(), Vec::<i64>::new());
        assert_eq!(sigma_tau(&w(0, "1")).unwrap().ones(), vec![-1, 0]);
        assert_eq!(sigma_tau(&w(0, "0011")).unwrap().ones(), vec![1, 2, 3]);
        assert_eq!(sigma_tau(&w(0, "101")), Err(CounterexampleError::NotInSigma));
        let out = sigma_tau(&w(0, "0011")).unwrap();
        assert_eq!((out.lo(), out.hi()), (-1, 3));
    }

    #[test]
    fn exhaustive_injectivity_small_widths() {
        for width in [1, 3, 10] {
            assert_eq!(sigma_injectivity_exhaustive(width), Ok(true));
        }
        assert_eq!(sigma_injectivity_exhaustive(0), Err(CounterexampleError::InvalidWidth(0)));
        assert_eq!(sigma_injectivity_exhaustive(17), Err(CounterexampleError::InvalidWidth(17)));
    }

    #[test]
    fn width_three_has_seven_members() {
        let members = (0..8u32)
            .filter(|bits| sigma_member(&BinaryWindow::new(0, (0..3).map(|i| bits >> i & 1 == 1).collect()).unwrap()))
            .count();
        assert_eq!(members, 7);
    }

    #[test]
    fn single_one_has_no_preimage() {
        for width in [2, 5, 12] {
            let witness = sigma_nonsurjectivity_witness(width).unwrap();
            assert_eq!(witness.ones().len(), 1);
            assert_eq!(witness.width(), width);
        }
        assert_eq!(sigma_nonsurjectivity_witness(1), Err(CounterexampleError::InvalidWidth(1)));
    }

    #[test]
    fn images_do_have_preimages() {
        assert!(has_sigma_preimage(&w(0, "0110")));
        assert!(has_sigma_preimage(&w(0, "0000")));
        assert!(!has_sigma_preimage(&w(0, "0100")));
    }

    #[test]
    fn window_display() {
        assert_eq!(w(-1, "0110").to_string(), "0110@-1");
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn shift_embedding() {
        assert_eq!(shift_embed(&[r(1, 3)]), vec![r(0, 1), r(1, 3)]);
        assert_eq!(shift_embed_preimage(&[r(1, 2), r(0, 1), r(0, 1), r(0, 1)]), None);
        let report = shift_embed_demo(3).unwrap();
        assert!(report.injective_on_samples);
        assert_eq!(report.samples_checked, 27);
        assert_eq!(report.excluded_target, vec![r(1, 2), r(0, 1), r(0, 1), r(0, 1)]);
        assert!(!report.excluded_has_preimage);
    }

    #[test]
    fn padic_levels() {
        let rep = padic_times_p_demo(2, 3).unwrap();
        assert!(rep.injective);
        assert_eq!(rep.image_index(), BigInt::from(2));
        let rep = padic_times_p_demo(5, 1).unwrap();
        assert!(rep.injective);
        assert_eq!(rep.cokernel, FiniteAbelianGroup::cyclic(5).unwrap());
        assert_eq!(padic_times_p_demo(4, 2), Err(CounterexampleError::NotPrime(4)));
        assert_eq!(times_p_digits(&to_digits(&BigInt::zero(), 3, 2)), vec![0, 0, 0]);
    }

    #[test]
    fn padic_digit_shift_matches_multiplication() {
        for x in 0..27 {
            let x = BigInt::from(x);
            let shifted = times_p_digits(&to_digits(&x, 3, 3));
            assert_eq!(from_digits(&shifted, 3), (&x * 3) % 81);
        }
    }

    #[test]
    fn densify_examples() {
        let one: BTreeMap<Vec<i64>, char> = [(vec![0], 's')].into_iter().collect();
        let y = periodic_densify(&one, 1, 1, '_').unwrap();
        assert!((-5..5).all(|g| *y.at(&[g]) == 's'));

        let ab: BTreeMap<Vec<i64>, char> = [(vec![0], 'a'), (vec![1], 'b')].into_iter().collect();
        let y = periodic_densify(&ab, 2, 1, '_').unwrap();
        let s: String = (-2..4).map(|g| *y.at(&[g])).collect();
        assert_eq!(s, "ababab");

        let block: BTreeMap<Vec<i64>, u8> =
            [(vec![0, 0], 1), (vec![0, 1], 2), (vec![1, 0], 3), (vec![1, 1], 4)].into_iter().collect();
        let y = periodic_densify(&block, 3, 2, 0).unwrap();
        assert_eq!(*y.at(&[4, 3]), 3);
        assert_eq!(*y.at(&[2, 2]), 0);
        assert_eq!(*y.at(&[-3, -2]), 2);
    }

    #[test]
    fn densify_rejects_oversized_windows() {
        let bad: BTreeMap<Vec<i64>, u8> = [(vec![0, 3], 1)].into_iter().collect();
        assert_eq!(periodic_densify(&bad, 3, 2, 0), Err(CounterexampleError::WindowTooLarge(vec![0, 3])));
        assert_eq!(
            periodic_densify(&BTreeMap::<Vec<i64>, u8>::new(), 0, 1, 0),
            Err(CounterexampleError::InvalidPeriod)
        );
    }
}
