//! Principal algebraic actions `X_f` and their fixed-point strata.
//!
//! For a finite-index `Λ ⊂ Z^d` with `G = Z^d/Λ`, the points of `X_f` fixed
//! by `Λ` form a compact group whose dual is `Z[G]/f·Z[G]`, the cokernel of
//! multiplication by `f` on `Z[G] ≅ Z^{|G|}`. The Smith form of that
//! integer matrix gives `X_f(Λ) ≅ T^k × F` directly.

mod precise;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::group_ring::{is_lopsided, Exponent, LaurentPoly};
use crate::parallel::{self, Execution};
use crate::zlattice::{smith_normal_form, FiniteAbelianGroup, IntMatrix, Lattice, SmithDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrincipalError {
    #[error("dimension mismatch: polynomial has {poly}, lattice has {lattice}")]
    DimensionMismatch { poly: usize, lattice: usize },
    #[error("a character value vanishes: the stratum has a torus factor")]
    VanishingCharacterValue,
    #[error("character product {value} is not within tolerance of an integer")]
    OracleRounding { value: String },
}

/// The principal system `X_f = {x ∈ T^{Z^d} : Σ_γ f(γ)·x(γ' + γ) = 0 ∀γ'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalSystem {
    pub f: LaurentPoly,
}

impl PrincipalSystem {
    pub fn new(f: LaurentPoly) -> Self {
        PrincipalSystem { f }
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }
}

/// `X_f(Λ) ≅ T^torus_rank × torsion`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointStructure {
    pub torus_rank: usize,
    pub torsion: FiniteAbelianGroup,
    /// Smith form of the action matrix.
    pub presentation: SmithDecomposition,
}

impl FixedPointStructure {
    pub fn is_finite(&self) -> bool {
        self.torus_rank == 0
    }

    /// Number of fixed points when the stratum is finite.
    pub fn count(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.order())
    }
}

fn check_dims(f: &LaurentPoly, lattice: &Lattice) -> Result<(), PrincipalError> {
    if f.dim() != lattice.dim() {
        return Err(PrincipalError::DimensionMismatch { poly: f.dim(), lattice: lattice.dim() });
    }
    Ok(())
}

/// Matrix of multiplication by `f` on `Z[Z^d/Λ]` in the coset-representative
/// basis: entry `(r, s)` sums `f(γ)` over `γ` with `s + γ ≡ r (mod Λ)`.
pub fn action_matrix(f: &LaurentPoly, lattice: &Lattice) -> Result<IntMatrix, PrincipalError> {
    check_dims(f, lattice)?;
    let reps = lattice.coset_reps();
    let n = reps.len();
    let mut m = IntMatrix::zeros(n, n);
    for (s, rep) in reps.iter().enumerate() {
        for (gamma, c) in f.terms() {
            let target: Vec<i64> = rep.iter().zip(gamma).map(|(a, b)| a + b).collect();
            m[(lattice.coset_index(&target), s)] += c;
        }
    }
    Ok(m)
}

pub fn fixed_point_structure(sys: &PrincipalSystem, lattice: &Lattice) -> Result<FixedPointStructure, PrincipalError> {
    let m = action_matrix(&sys.f, lattice)?;
    let presentation = smith_normal_form(&m);
    let diag = presentation.diagonal();
    let torus_rank = diag.iter().filter(|d| d.is_zero()).count();
    let torsion = FiniteAbelianGroup::from_factors(diag.into_iter().filter(|d| *d > BigInt::one()).collect())
        .expect("SNF diagonal forms a divisibility chain");
    Ok(FixedPointStructure { torus_rank, torsion, presentation })
}

/// [`fixed_point_structure`] over many lattices; results in input order.
pub fn fixed_point_sweep(
    sys: &PrincipalSystem,
    lattices: &[Lattice],
    exec: Execution,
) -> Result<Vec<FixedPointStructure>, PrincipalError> {
    parallel::map(exec, lattices, |l| fixed_point_structure(sys, l)).into_iter().collect()
}

/// `M_f = Z[Z^d]/(f)` is torsion iff `f ≠ 0` (the group ring is a domain).
pub fn is_torsion_module(f: &LaurentPoly) -> bool {
    !f.is_zero()
}

/// Characters of `Z^d/Λ` as rational frequency vectors `θ` with
/// `χ(γ) = e^{2πi⟨θ,γ⟩}`: `θ = B^{-T}·m` for `m` over `Z^d / BᵀZ^d`.
fn character_frequencies(lattice: &Lattice) -> Vec<Vec<BigRational>> {
    let bt = lattice.basis().transpose();
    let dual = Lattice::new(bt.clone()).expect("transpose of a nonsingular basis");
    dual.coset_reps().iter().map(|m| solve_rational(&bt, m)).collect()
}

/// Solves `a·x = b` over Q for nonsingular square `a`.
fn solve_rational(a: &IntMatrix, b: &[i64]) -> Vec<BigRational> {
    let n = a.rows();
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = a.row(i).iter().cloned().map(BigRational::from).collect();
            row.push(BigRational::from(BigInt::from(b[i])));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !rows[i][col].is_zero()).expect("nonsingular");
        rows.swap(col, p);
        let pivot = rows[col][col].clone();
        for x in rows[col].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i != col && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in col..=n {
                    let v = &rows[col][j] * &factor;
                    rows[i][j] -= v;
                }
            }
        }
    }
    rows.into_iter().map(|r| r[n].clone()).collect()
}

/// Independent count of `|X_f(Λ)|` as `|∏_χ f̂(χ)|` over the characters of
/// `G = Z^d/Λ`, evaluated in 320-bit fixed point.
///
/// Fails with [`PrincipalError::VanishingCharacterValue`] when some `f̂(χ)`
/// is zero (then the stratum has a torus factor), and with
/// [`PrincipalError::OracleRounding`] unless the product lies within `1e-6`
/// of an integer with imaginary part below `1e-6`.
pub fn torsion_count_oracle(f: &LaurentPoly, lattice: &Lattice) -> Result<BigInt, PrincipalError> {
    check_dims(f, lattice)?;
    let pi = precise::pi();
    let bits = precise::FRACTION_BITS;
    // |value| < 2^-64 counts as vanishing
    let vanish = BigInt::one() << (bits - 128);
    let mut product = precise::Fixed::one();
    for theta in character_frequencies(lattice) {
        let mut value = precise::Fixed::zero();
        for (gamma, c) in f.terms() {
            let phase = theta
                .iter()
                .zip(gamma)
                .fold(BigRational::zero(), |acc, (t, g)| acc + t * BigRational::from(BigInt::from(*g)));
            let term = &precise::cis(&phase, &pi) * &precise::Fixed::from_int(c);
            value = &value + &term;
        }
        if value.norm_sqr() < vanish {
            return Err(PrincipalError::VanishingCharacterValue);
        }
        product = &product * &value;
    }
    let unit = BigInt::one() << bits;
    let half = &unit >> 1u32;
    let rounded: BigInt = (&product.re + &half) >> bits;
    let residual = (&product.re - (&rounded << bits)).abs();
    // 10⁻⁶ in the fixed-point scale
    let tolerance = &unit / BigInt::from(1_000_000);
    if residual >= tolerance || product.im.abs() >= tolerance {
        let value = format!("{}", (&product.re >> (bits - 30)).to_f64().unwrap_or(f64::NAN) / 2f64.powi(30));
        return Err(PrincipalError::OracleRounding { value });
    }
    Ok(rounded.abs())
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExpansivityWitness {
    /// `f` is lopsided at this exponent, hence invertible in `ℓ¹`.
    Lopsided(Exponent),
    /// `|f| > threshold` at every grid point of spacing `2^{-grid_exponent}`,
    /// and `threshold` bounds the variation of `f` between grid points.
    GridNonvanishing { grid_exponent: u32, min_value: f64, threshold: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expansivity {
    Expansive(ExpansivityWitness),
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixingVerdict {
    Mixing,
    Unknown,
}

/// Grid points beyond `2^MAX_GRID_BITS` are not attempted.
pub const MAX_GRID_BITS: u32 = 26;

pub fn expansivity_certificate(f: &LaurentPoly, grid_exponent: u32) -> Expansivity {
    expansivity_certificate_with(f, grid_exponent, Execution::default())
}

/// Positive expansivity certificate for `X_f`; never refutes.
///
/// The lopsided test is tried first. Otherwise, for `d ≤ 2`, `|f̂|` is
/// evaluated on the torus grid of spacing `h = 2^{-grid_exponent}` and
/// nonvanishing is certified when the grid minimum exceeds `K·h·√d/2`
/// with `K = 2π·Σ|f(γ)|·‖γ‖₁`.
pub fn expansivity_certificate_with(f: &LaurentPoly, grid_exponent: u32, exec: Execution) -> Expansivity {
    if let Some(g0) = is_lopsided(f) {
        return Expansivity::Expansive(ExpansivityWitness::Lopsided(g0));
    }
    let d = f.dim();
    if f.is_zero() || d > 2 || grid_exponent == 0 || grid_exponent * d as u32 > MAX_GRID_BITS {
        return Expansivity::Unknown;
    }
    let terms: Vec<(Vec<i64>, f64)> =
        f.terms().iter().map(|(e, c)| (e.clone(), c.to_f64().expect("coefficient fits f64"))).collect();
    let lipschitz: f64 = 2.0
        * std::f64::consts::PI
        * terms.iter().map(|(e, c)| c.abs() * e.iter().map(|x| x.unsigned_abs() as f64).sum::<f64>()).sum::<f64>();
    let side = 1usize << grid_exponent;
    let h = 1.0 / side as f64;
    let threshold = lipschitz * h * (d as f64).sqrt() / 2.0;

    let table: Vec<(f64, f64)> = (0..side)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 * h;
            (a.cos(), a.sin())
        })
        .collect();
    let mask = side as i64 - 1;
    let points = side.pow(d as u32);
    let min_value = parallel::min_over_range(exec, points, |idx| {
        let mut coords = [0i64; 2];
        let mut rest = idx;
        for c in coords.iter_mut().take(d) {
            *c = (rest % side) as i64;
            rest /= side;
        }
        let (mut re, mut im) = (0.0, 0.0);
        for (e, c) in &terms {
            let k = e.iter().zip(&coords).fold(0i64, |acc, (x, t)| acc + x * t) & mask;
            let (cos, sin) = table[k as usize];
            re += c * cos;
            im += c * sin;
        }
        re.hypot(im)
    })
    .unwrap_or(0.0);
    // floating error in the evaluation
    let slack = 1e-9 * (1.0 + f.l1_norm().to_f64().unwrap_or(f64::INFINITY));
    if min_value - slack > threshold {
        Expansivity::Expansive(ExpansivityWitness::GridNonvanishing { grid_exponent, min_value, threshold })
    } else {
        Expansivity::Unknown
    }
}

/// Mixing follows from `ℓ¹`-invertibility, certified here by lopsidedness.
pub fn mixing_certificate(f: &LaurentPoly) -> MixingVerdict {
    if is_lopsided(f).is_some() {
        MixingVerdict::Mixing
    } else {
        MixingVerdict::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_ring::parse_poly;

    fn poly(s: &str, dim: usize) -> LaurentPoly {
        parse_poly(s, Some(dim)).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn zero_polynomial_gives_zero_matrix() {
        let l = Lattice::scaled(3, 2).unwrap();
        let m = action_matrix(&LaurentPoly::zero(2), &l).unwrap();
        assert!(m.is_zero());
        assert_eq!(m.rows(), 9);
    }

    #[test]
    fn u_minus_two_on_3z() {
        let m = action_matrix(&poly("u1 - 2", 1), &Lattice::scaled(3, 1).unwrap()).unwrap();
        // e_s ↦ e_{s+1} − 2e_s: the 1s sit at (s+1 mod 3, s)
        let expected = IntMatrix::from_rows(&[vec![-2, 0, 1], vec![1, -2, 0], vec![0, 1, -2]]).unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn ledrappier_on_2z2() {
        let m = action_matrix(&poly("1 + u1 + u2", 2), &Lattice::scaled(2, 2).unwrap()).unwrap();
        // reps (0,0),(0,1),(1,0),(1,1); P₁ flips the first bit, P₂ the second
        let expected =
            IntMatrix::from_rows(&[vec![1, 1, 1, 0], vec![1, 1, 0, 1], vec![1, 0, 1, 1], vec![0, 1, 1, 1]]).unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn structure_examples() {
        let full = fixed_point_structure(&PrincipalSystem::new(LaurentPoly::zero(2)), &Lattice::scaled(3, 2).unwrap())
            .unwrap();
        assert_eq!(full.torus_rank, 9);
        assert!(full.torsion.is_trivial());

        let sol =
            fixed_point_structure(&PrincipalSystem::new(poly("u1 - 2", 1)), &Lattice::scaled(5, 1).unwrap()).unwrap();
        assert_eq!(sol.torus_rank, 0);
        assert_eq!(sol.torsion.invariant_factors(), ints(&[31]).as_slice());

        let led = fixed_point_structure(&PrincipalSystem::new(poly("1 + u1 + u2", 2)), &Lattice::scaled(2, 2).unwrap())
            .unwrap();
        assert_eq!(led.torus_rank, 0);
        assert_eq!(led.torsion.invariant_factors(), ints(&[3]).as_slice());
        assert_eq!(led.count(), Some(BigInt::from(3)));
    }

    #[test]
    fn dimension_mismatch() {
        let err = action_matrix(&poly("u1", 1), &Lattice::scaled(2, 2).unwrap()).unwrap_err();
        assert_eq!(err, PrincipalError::DimensionMismatch { poly: 1, lattice: 2 });
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(torsion_count_oracle(&poly("u1 - 2", 1), &Lattice::scaled(4, 1).unwrap()), Ok(BigInt::from(15)));
        assert_eq!(torsion_count_oracle(&poly("1 + u1 + u2", 2), &Lattice::scaled(2, 2).unwrap()), Ok(BigInt::from(3)));
        for n in 1..6 {
            assert_eq!(
                torsion_count_oracle(&poly("u1 - 1", 1), &Lattice::scaled(n, 1).unwrap()),
                Err(PrincipalError::VanishingCharacterValue)
            );
        }
    }

    #[test]
    fn oracle_on_skew_lattice() {
        let l = Lattice::parse("2,1;0,3").unwrap();
        let f = poly("3 - u1 + u2^-1", 2);
        let s = fixed_point_structure(&PrincipalSystem::new(f.clone()), &l).unwrap();
        assert_eq!(s.count(), Some(torsion_count_oracle(&f, &l).unwrap()));
    }

    #[test]
    fn torsion_module() {
        assert!(is_torsion_module(&poly("1 + u1 + u2", 2)));
        assert!(!is_torsion_module(&LaurentPoly::zero(2)));
        assert!(is_torsion_module(&LaurentPoly::constant(1, 2)));
    }

    #[test]
    fn certificates() {
        assert_eq!(
            expansivity_certificate(&poly("3 - u1 - u2", 2), 6),
            Expansivity::Expansive(ExpansivityWitness::Lopsided(vec![0, 0]))
        );
        for g in [4, 6, 8, 10] {
            assert_eq!(expansivity_certificate(&poly("1 + u1 + u2", 2), g), Expansivity::Unknown);
        }
        assert_eq!(
            expansivity_certificate(&LaurentPoly::constant(1, 2), 4),
            Expansivity::Expansive(ExpansivityWitness::Lopsided(vec![0]))
        );
        assert_eq!(mixing_certificate(&poly("3 - u1 - u2", 2)), MixingVerdict::Mixing);
        assert_eq!(mixing_certificate(&poly("1 + u1 + u2", 2)), MixingVerdict::Unknown);
        assert_eq!(mixing_certificate(&poly("5*u1", 1)), MixingVerdict::Mixing);
    }

    #[test]
    fn grid_certifies_non_lopsided_nonvanishing() {
        // roots of z² + z + 2 have modulus √2, so no zeros on the circle
        let f = poly("2 + u1 + u1^2", 1);
        assert!(is_lopsided(&f).is_none());
        assert!(matches!(
            expansivity_certificate(&f, 10),
            Expansivity::Expansive(ExpansivityWitness::GridNonvanishing { .. })
        ));
        // too coarse a grid stays silent
        assert_eq!(expansivity_certificate(&f, 1), Expansivity::Unknown);
        let seq = expansivity_certificate_with(&f, 10, Execution::Sequential);
        assert_eq!(seq, expansivity_certificate_with(&f, 10, Execution::Parallel));
    }
}
