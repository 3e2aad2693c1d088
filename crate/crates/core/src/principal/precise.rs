//! Fixed-point complex arithmetic on `BigInt` mantissas, enough to evaluate
//! products of cyclotomic sums well past `f64` precision.

use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `(re + i·im) / 2^FRACTION_BITS`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Fixed {
    pub re: BigInt,
    pub im: BigInt,
}

pub(crate) const FRACTION_BITS: u32 = 320;

fn unit() -> BigInt {
    BigInt::one() << FRACTION_BITS
}

impl Fixed {
    pub fn zero() -> Self {
        Fixed { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn one() -> Self {
        Fixed { re: unit(), im: BigInt::zero() }
    }

    pub fn from_int(c: &BigInt) -> Self {
        Fixed { re: c << FRACTION_BITS, im: BigInt::zero() }
    }

    /// `|z|²` in the same scale.
    pub fn norm_sqr(&self) -> BigInt {
        (&self.re * &self.re + &self.im * &self.im) >> FRACTION_BITS
    }
}

impl Add for &Fixed {
    type Output = Fixed;

    fn add(self, rhs: &Fixed) -> Fixed {
        Fixed { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Mul for &Fixed {
    type Output = Fixed;

    fn mul(self, rhs: &Fixed) -> Fixed {
        let re = (&self.re * &rhs.re - &self.im * &rhs.im) >> FRACTION_BITS;
        let im = (&self.re * &rhs.im + &self.im * &rhs.re) >> FRACTION_BITS;
        Fixed { re, im }
    }
}

/// `atan(1/x)` scaled by `2^FRACTION_BITS`.
fn atan_inv(x: u32) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut term = unit() / x;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !term.is_zero() {
        let t = &term / (2 * k + 1);
        if k.is_even() {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &x2;
        k += 1;
    }
    sum
}

/// π by Machin's formula.
pub(crate) fn pi() -> BigInt {
    (atan_inv(5) * 4 - atan_inv(239)) * 4
}

/// `e^{2πi·phase}`.
pub(crate) fn cis(phase: &BigRational, pi: &BigInt) -> Fixed {
    // reduce to (−1/2, 1/2] so that |θ| ≤ π
    let mut q = phase - phase.floor();
    if q > BigRational::new(BigInt::one(), BigInt::from(2)) {
        q -= BigRational::one();
    }
    let theta = (pi * 2 * q.numer()) / q.denom();
    let scale = unit();
    let mut term = scale.clone();
    let (mut cos, mut sin) = (BigInt::zero(), BigInt::zero());
    let mut k = 0u32;
    while !term.is_zero() {
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        k += 1;
        term = (&term * &theta / &scale) / k;
    }
    Fixed { re: cos, im: sin }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, ToPrimitive};

    fn to_f64(x: &BigInt) -> f64 {
        (x >> (FRACTION_BITS - 60)).to_f64().unwrap() / 2f64.powi(60)
    }

    #[test]
    fn pi_digits() {
        assert!((to_f64(&pi()) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn roots_of_unity() {
        let pi = pi();
        let z = cis(&BigRational::new(1.into(), 4.into()), &pi);
        assert!(to_f64(&z.re).abs() < 1e-15);
        assert!((to_f64(&z.im) - 1.0).abs() < 1e-15);
        // ω³ = 1 for ω = e^{2πi/3}, to far beyond f64 precision
        let w = cis(&BigRational::new(1.into(), 3.into()), &pi);
        let cube = &(&w * &w) * &w;
        let err = (&cube.re - unit()).abs() + cube.im.abs();
        assert!(err < (BigInt::one() << (FRACTION_BITS - 300)));
    }
}
