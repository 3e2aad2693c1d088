use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::GroupRingError;

/// Exponent vector of a monomial `u^γ = u₁^γ₁ ⋯ u_d^γ_d`.
pub type Exponent = Vec<i64>;

/// Element of the integral group ring `Z[Z^d]`, i.e. a Laurent polynomial
/// in `u₁, …, u_d` with integer coefficients.
///
/// Terms are kept in a lexicographically ordered map and never store a zero
/// coefficient, so structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        LaurentPoly { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, 1)
    }

    pub fn constant(dim: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    /// `c·u^exponent`.
    pub fn monomial(exponent: Exponent, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c.into());
        p
    }

    /// The variable `u_{i+1}` (zero-based `i`).
    pub fn variable(dim: usize, i: usize) -> Self {
        assert!(i < dim, "variable index out of range");
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    /// Sums the given terms; repeated exponents are combined.
    pub fn from_terms<C: Into<BigInt>>(
        dim: usize,
        terms: impl IntoIterator<Item = (Exponent, C)>,
    ) -> Result<Self, GroupRingError> {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(GroupRingError::DimensionMismatch { left: dim, right: e.len() });
            }
            p.add_term(e, c.into());
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[i64]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Σ |f(γ)|`.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(Signed::abs).sum()
    }

    /// Coefficient sum, i.e. the value at `u = (1, …, 1)`.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: BigInt) {
        debug_assert_eq!(e.len(), self.dim);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `u^shift · self`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        assert_eq!(shift.len(), self.dim, "shift dimension mismatch");
        let terms =
            self.terms.iter().map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone())).collect();
        LaurentPoly { dim: self.dim, terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        LaurentPoly { dim: self.dim, terms }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.same_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.checked_add(&-other)
    }

    /// Convolution product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, GroupRingError> {
        mul(self, other)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn same_dim(&self, other: &Self) -> Result<(), GroupRingError> {
        if self.dim != other.dim {
            return Err(GroupRingError::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }
}

/// `(fg)(γ) = Σ_{γ₁+γ₂=γ} f(γ₁)·g(γ₂)`.
pub fn mul(f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly, GroupRingError> {
    f.same_dim(g)?;
    let mut out = LaurentPoly::zero(f.dim);
    for (e1, c1) in &f.terms {
        for (e2, c2) in &g.terms {
            let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
            out.add_term(e, c1 * c2);
        }
    }
    Ok(out)
}

/// Exponent `γ₀` with `|f(γ₀)| > Σ_{γ≠γ₀} |f(γ)|`, if one exists.
pub fn is_lopsided(f: &LaurentPoly) -> Option<Exponent> {
    let total = f.l1_norm();
    let (e, c) = f.terms.iter().max_by_key(|(_, c)| c.abs())?;
    let dominant = c.abs();
    // |c| > total − |c|
    (&dominant + &dominant > total).then(|| e.clone())
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("dimension mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("dimension mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        mul(self, rhs).expect("dimension mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        LaurentPoly { dim: self.dim, terms }
    }
}

/// Canonical form: terms in lexicographic exponent order joined by
/// ` + ` / ` - `, unit coefficients elided in front of monomials, e.g.
/// `-2 + u1` or `u1^-1*u2 - 3*u1^2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| if x == 1 { format!("u{}", i + 1) } else { format!("u{}^{}", i + 1, x) })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[d={}]({})", self.dim, self)
    }
}
