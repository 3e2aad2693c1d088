use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{is_lopsided, Exponent, GroupRingError, LaurentPoly};

/// Finitely supported rational approximation `g` of `f⁻¹ ∈ ℓ¹(Z^d)`.
///
/// `tail_bound` bounds both the residual `‖f·g − δ₀‖₁` and the distance
/// `‖g − f⁻¹‖₁` to the true inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1InverseApprox {
    pub dim: usize,
    pub poly: BTreeMap<Exponent, BigRational>,
    pub tail_bound: BigRational,
    /// Number of Neumann terms kept beyond the constant one.
    pub order: u32,
}

impl L1InverseApprox {
    pub fn coefficient(&self, e: &[i64]) -> BigRational {
        self.poly.get(e).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Truncated Neumann series around the dominant term.
///
/// Writing `f = c·u^γ₀·(1 − r)` with `ρ = ‖r‖₁ < 1`, the truncation
/// `g = c⁻¹·u^{−γ₀}·Σ_{k≤K} r^k` satisfies `f·g − δ₀ = −r^{K+1}`, so the
/// residual is at most `ρ^{K+1}`, and `‖g − f⁻¹‖₁ ≤ ρ^{K+1}/((1−ρ)|c|)`.
/// `K` is the least order for which both bounds are `≤ eps`.
pub fn l1_inverse_approx(f: &LaurentPoly, eps: &BigRational) -> Result<L1InverseApprox, GroupRingError> {
    if !eps.is_positive() {
        return Err(GroupRingError::NonPositiveTolerance);
    }
    let g0 = is_lopsided(f).ok_or(GroupRingError::NotLopsided)?;
    let dim = f.dim();
    let c = f.coefficient(&g0);
    let neg_g0: Vec<i64> = g0.iter().map(|x| -x).collect();

    // c·r = −(f − c·u^γ₀)·u^{−γ₀}, kept integral
    let mut rest = f.clone();
    rest.add_term(g0.clone(), -c.clone());
    let r_scaled = (-&rest).shift(&neg_g0);
    let rho = BigRational::new(r_scaled.l1_norm(), c.abs());

    let one = BigRational::one();
    let inverse_scale = &one / ((&one - &rho) * BigRational::from(c.abs()));
    let bound_at = |k: u32| {
        let tail = pow(&rho, k + 1);
        let dist = &tail * &inverse_scale;
        if tail > dist {
            tail
        } else {
            dist
        }
    };
    let mut order = 0u32;
    while bound_at(order) > *eps {
        order += 1;
    }
    let tail_bound = if rho.is_zero() { BigRational::zero() } else { bound_at(order) };

    // Σ_{k≤K} (c r)^k / c^{k+1}
    let mut poly: BTreeMap<Exponent, BigRational> = BTreeMap::new();
    let mut power = LaurentPoly::one(dim);
    let mut denom = c.clone();
    for k in 0..=order {
        for (e, x) in power.terms() {
            let term = BigRational::new(x.clone(), denom.clone());
            let slot =
                poly.entry(e.iter().zip(&neg_g0).map(|(a, b)| a + b).collect()).or_insert_with(BigRational::zero);
            *slot += term;
        }
        if k < order {
            power = &power * &r_scaled;
            denom *= &c;
            if power.is_zero() {
                break;
            }
        }
    }
    poly.retain(|_, v| !v.is_zero());
    Ok(L1InverseApprox { dim, poly, tail_bound, order })
}

/// Exact `‖f·g − δ₀‖₁` for a rational `g`.
pub fn l1_residual(f: &LaurentPoly, g: &L1InverseApprox) -> BigRational {
    let mut product: BTreeMap<Exponent, BigRational> = BTreeMap::new();
    for (e1, c1) in f.terms() {
        let c1 = BigRational::from(c1.clone());
        for (e2, c2) in &g.poly {
            let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
            *product.entry(e).or_insert_with(BigRational::zero) += &c1 * c2;
        }
    }
    *product.entry(vec![0; f.dim()]).or_insert_with(BigRational::zero) -= BigRational::one();
    product.values().map(Signed::abs).fold(BigRational::zero(), |a, b| a + b)
}

fn pow(x: &BigRational, k: u32) -> BigRational {
    BigRational::new(x.numer().pow(k), x.denom().pow(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_ring::parse_poly;
    use num_bigint::BigInt;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn geometric_series_for_3_minus_u() {
        let f = parse_poly("3 - u1", None).unwrap();
        let g = l1_inverse_approx(&f, &ratio(1, 1000)).unwrap();
        assert_eq!(g.coefficient(&[0]), ratio(1, 3));
        assert_eq!(g.coefficient(&[1]), ratio(1, 9));
        assert!(g.tail_bound <= ratio(1, 1000));
        assert!(l1_residual(&f, &g) <= g.tail_bound);
    }

    #[test]
    fn constant_inverse_is_exact() {
        let f = LaurentPoly::constant(1, 2);
        let g = l1_inverse_approx(&f, &ratio(1, 10)).unwrap();
        assert_eq!(g.poly.len(), 1);
        assert_eq!(g.coefficient(&[0]), ratio(1, 2));
        assert!(g.tail_bound.is_zero());
        assert!(l1_residual(&f, &g).is_zero());
    }

    #[test]
    fn two_variable_residual_checked_by_convolution() {
        let f = parse_poly("4 + u1 + u2", None).unwrap();
        let g = l1_inverse_approx(&f, &ratio(1, 100)).unwrap();
        assert!(l1_residual(&f, &g) <= ratio(1, 100));
    }

    #[test]
    fn off_center_dominant_term() {
        let f = parse_poly("u1^-2 + 5*u1^3 - u1^4*u2", None).unwrap();
        let g = l1_inverse_approx(&f, &ratio(1, 10_000)).unwrap();
        assert_eq!(g.coefficient(&[-3, 0]), ratio(1, 5));
        assert!(l1_residual(&f, &g) <= ratio(1, 10_000));
    }

    #[test]
    fn rejects_non_lopsided() {
        let f = parse_poly("1 + u1 + u2", None).unwrap();
        assert_eq!(l1_inverse_approx(&f, &ratio(1, 10)).unwrap_err(), GroupRingError::NotLopsided);
        assert_eq!(
            l1_inverse_approx(&LaurentPoly::one(1), &ratio(0, 1)).unwrap_err(),
            GroupRingError::NonPositiveTolerance
        );
    }
}
