use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::LatticeError;

/// Finite abelian group `Z/m₁ × … × Z/m_r` in invariant-factor form:
/// every `mᵢ ≥ 2` and `mᵢ | mᵢ₊₁`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn cyclic(n: impl Into<BigInt>) -> Result<Self, LatticeError> {
        let n = n.into();
        if n.is_one() {
            return Ok(Self::trivial());
        }
        Self::from_factors(vec![n])
    }

    pub fn from_factors(invariant_factors: Vec<BigInt>) -> Result<Self, LatticeError> {
        if invariant_factors.iter().any(|m| *m < BigInt::from(2)) {
            return Err(LatticeError::InvalidInvariantFactors(invariant_factors));
        }
        if invariant_factors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(LatticeError::InvalidInvariantFactors(invariant_factors));
        }
        Ok(FiniteAbelianGroup { invariant_factors })
    }

    /// Normalizes an arbitrary list of positive cyclic orders
    /// (`Z/n₁ × … × Z/n_k`) into invariant-factor form.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Result<Self, LatticeError> {
        if orders.iter().any(|n| *n < BigInt::one()) {
            return Err(LatticeError::InvalidInvariantFactors(orders.to_vec()));
        }
        let snf = super::smith_normal_form(&super::IntMatrix::diagonal(orders));
        Self::from_factors(snf.diagonal().into_iter().filter(|d| !d.is_one()).collect())
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// All elements as residue vectors, in lexicographic order. Only
    /// sensible for small groups.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![Vec::new()];
        for m in &self.invariant_factors {
            let m = m.to_u64().expect("group too large to enumerate");
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..m).map(move |x| {
                        let mut v = prefix.clone();
                        v.push(BigInt::from(x));
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// All characters; there are exactly `order()` of them.
    pub fn characters(&self) -> Vec<Character> {
        self.elements().into_iter().map(|weights| Character { group: self.clone(), weights }).collect()
    }

    pub fn contains(&self, g: &[BigInt]) -> bool {
        g.len() == self.rank() && g.iter().zip(&self.invariant_factors).all(|(x, m)| *x >= BigInt::zero() && x < m)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, m) in self.invariant_factors.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAbelianGroup{self}")
    }
}

/// Finite groups are self-dual: `Ĝ ≅ G`.
pub fn dual_group(group: &FiniteAbelianGroup) -> FiniteAbelianGroup {
    group.clone()
}

/// An exact point `e^{2πi·p/q}` of the unit circle, stored as the phase
/// `p/q ∈ [0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Phase(BigRational);

impl Phase {
    pub fn new(value: BigRational) -> Self {
        let frac = &value - value.floor();
        Phase(frac)
    }

    pub fn zero() -> Self {
        Phase(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Phase) -> Phase {
        Phase::new(&self.0 + &other.0)
    }

    /// `(p, q)` in lowest terms.
    pub fn as_fraction(&self) -> (BigInt, BigInt) {
        (self.0.numer().clone(), self.0.denom().clone())
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A character `χ(g) = e^{2πi Σ wᵢgᵢ/mᵢ}` of a finite abelian group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Character {
    pub group: FiniteAbelianGroup,
    pub weights: Vec<BigInt>,
}

impl Character {
    pub fn new(group: FiniteAbelianGroup, weights: Vec<BigInt>) -> Result<Self, LatticeError> {
        if !group.contains(&weights) {
            return Err(LatticeError::InvalidElement);
        }
        Ok(Character { group, weights })
    }

    pub fn trivial(group: FiniteAbelianGroup) -> Self {
        let weights = vec![BigInt::zero(); group.rank()];
        Character { group, weights }
    }

    pub fn is_trivial(&self) -> bool {
        self.weights.iter().all(Zero::is_zero)
    }
}

/// Exact phase of `χ(g)`.
pub fn character_value(chi: &Character, g: &[BigInt]) -> Result<Phase, LatticeError> {
    if g.len() != chi.group.rank() {
        return Err(LatticeError::InvalidElement);
    }
    let sum = chi
        .weights
        .iter()
        .zip(g)
        .zip(chi.group.invariant_factors())
        .map(|((w, x), m)| BigRational::new(w * x, m.clone()))
        .fold(BigRational::zero(), |a, b| a + b);
    Ok(Phase::new(sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn trivial_character_has_zero_phase() {
        let g = FiniteAbelianGroup::from_factors(vec![int(2), int(4)]).unwrap();
        let chi = Character::trivial(g.clone());
        assert!(g.elements().iter().all(|x| character_value(&chi, x).unwrap().is_zero()));
    }

    #[test]
    fn z4_weight_one_at_two() {
        let g = FiniteAbelianGroup::cyclic(4).unwrap();
        let chi = Character::new(g, vec![int(1)]).unwrap();
        let phase = character_value(&chi, &[int(2)]).unwrap();
        assert_eq!(phase.as_fraction(), (int(1), int(2)));
    }

    #[test]
    fn z3_cube_roots_cancel() {
        // phases {0, 1/3, 2/3}: the full set of cube roots of unity
        let g = FiniteAbelianGroup::cyclic(3).unwrap();
        let chi = Character::new(g.clone(), vec![int(1)]).unwrap();
        let mut phases: Vec<Phase> = g.elements().iter().map(|x| character_value(&chi, x).unwrap()).collect();
        phases.sort();
        let expected: Vec<Phase> = (0..3).map(|k| Phase::new(BigRational::new(int(k), int(3)))).collect();
        assert_eq!(phases, expected);
    }

    #[test]
    fn self_duality() {
        for f in [vec![], vec![int(2), int(4)], vec![int(6)]] {
            let g = FiniteAbelianGroup::from_factors(f).unwrap();
            assert_eq!(dual_group(&g), g);
            assert_eq!(g.characters().len(), g.elements().len());
        }
    }

    #[test]
    fn invalid_factor_lists() {
        assert!(FiniteAbelianGroup::from_factors(vec![int(4), int(2)]).is_err());
        assert!(FiniteAbelianGroup::from_factors(vec![int(1)]).is_err());
        let g = FiniteAbelianGroup::from_cyclic_orders(&[int(2), int(3), int(1)]).unwrap();
        assert_eq!(g.invariant_factors(), &[int(6)]);
    }
}
