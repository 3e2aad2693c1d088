//! Equivariant affine maps on principal systems, analyzed on the dual side.
//!
//! A compact-side endomorphism is injective (surjective) exactly when its
//! dual on the discrete, finitely generated side is surjective (injective).
//! Every question below is answered on that discrete side with Hermite and
//! Smith forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::group_ring::LaurentPoly;
use crate::parallel::{self, Execution};
use crate::principal::{action_matrix, PrincipalError};
use crate::zlattice::{hermite_normal_form, lattice_basis, smith_normal_form, FiniteAbelianGroup, IntMatrix, Lattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivariantError {
    #[error(transparent)]
    Principal(#[from] PrincipalError),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix does not preserve the relation lattice")]
    IllDefined,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("translation is not an equivariant fixed point: {0}")]
    EquivarianceViolation(String),
}

/// Finitely generated abelian group `⊕ Z/mᵢ` (with `mᵢ = 0` meaning a free
/// summand `Z`) together with an endomorphism given by an integer matrix
/// acting on column vectors of residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoOnFinitelyGenerated {
    group: Vec<BigInt>,
    matrix: IntMatrix,
}

/// A homomorphism `⊕ Z/nⱼ → ⊕ Z/mᵢ` of presented groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedHom {
    pub source: Vec<BigInt>,
    pub target: Vec<BigInt>,
    pub matrix: IntMatrix,
}

fn relations(factors: &[BigInt]) -> IntMatrix {
    IntMatrix::diagonal(factors)
}

/// `x ≡ 0` in `⊕ Z/mᵢ`.
fn is_zero_residue(factors: &[BigInt], x: &[BigInt]) -> bool {
    x.iter().zip(factors).all(|(v, m)| if m.is_zero() { v.is_zero() } else { v.is_multiple_of(m) })
}

impl PresentedHom {
    pub fn new(source: Vec<BigInt>, target: Vec<BigInt>, matrix: IntMatrix) -> Result<Self, EquivariantError> {
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(EquivariantError::DimensionMismatch { left: matrix.rows(), right: target.len() });
        }
        if source.iter().chain(&target).any(Signed::is_negative) {
            return Err(EquivariantError::IllDefined);
        }
        let hom = PresentedHom { source, target, matrix };
        // A·(nⱼ eⱼ) must vanish in the target
        for j in 0..hom.source.len() {
            let image: Vec<BigInt> = hom.matrix.column(j).iter().map(|x| x * &hom.source[j]).collect();
            if !is_zero_residue(&hom.target, &image) {
                return Err(EquivariantError::IllDefined);
            }
        }
        Ok(hom)
    }

    /// Generators (columns) of `{x ∈ Z^n : A·x ∈ relations of the target}`.
    pub fn kernel_preimage(&self) -> IntMatrix {
        let stacked = self.matrix.hconcat(&relations(&self.target).scale(&BigInt::from(-1)));
        let ker = hermite_normal_form(&stacked).kernel();
        let rows: Vec<usize> = (0..self.source.len()).collect();
        let cols: Vec<usize> = (0..ker.cols()).collect();
        ker.select(&rows, &cols)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_preimage().columns().all(|x| is_zero_residue(&self.source, &x))
    }

    pub fn is_surjective(&self) -> bool {
        let m = self.target.len();
        let stacked = self.matrix.hconcat(&relations(&self.target));
        let snf = smith_normal_form(&stacked);
        let diag = snf.diagonal();
        diag.len() == m && diag.iter().all(One::is_one)
    }

    /// Invariant factors and free rank of the cokernel.
    pub fn cokernel(&self) -> (usize, FiniteAbelianGroup) {
        let stacked = self.matrix.hconcat(&relations(&self.target));
        structure_of_quotient(&stacked)
    }
}

/// `Z^rows / span(columns)` as `(free rank, torsion)`.
fn structure_of_quotient(generators: &IntMatrix) -> (usize, FiniteAbelianGroup) {
    let snf = smith_normal_form(generators);
    let factors = snf.cokernel_factors();
    let free = factors.iter().filter(|d| d.is_zero()).count();
    let torsion = FiniteAbelianGroup::from_factors(factors.into_iter().filter(|d| *d > BigInt::one()).collect())
        .expect("SNF divisibility chain");
    (free, torsion)
}

impl EndoOnFinitelyGenerated {
    /// Checks that `matrix` maps the relation lattice into itself.
    pub fn new(group: Vec<BigInt>, matrix: IntMatrix) -> Result<Self, EquivariantError> {
        if !matrix.is_square() {
            return Err(EquivariantError::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        let hom = PresentedHom::new(group.clone(), group, matrix)?;
        Ok(EndoOnFinitelyGenerated { group: hom.source, matrix: reduce_rows(&hom.target, hom.matrix) })
    }

    pub fn identity(group: Vec<BigInt>) -> Self {
        let n = group.len();
        Self::new(group, IntMatrix::identity(n)).expect("identity is well defined")
    }

    /// Multiplication by `k` on the group.
    pub fn scalar(group: Vec<BigInt>, k: impl Into<BigInt>) -> Self {
        let n = group.len();
        Self::new(group, IntMatrix::identity(n).scale(&k.into())).expect("scalars are well defined")
    }

    pub fn group(&self) -> &[BigInt] {
        &self.group
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn free_rank(&self) -> usize {
        self.group.iter().filter(|m| m.is_zero()).count()
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        self.group.iter().filter(|m| !m.is_zero()).product()
    }

    /// Whether the endomorphism is zero on the group.
    pub fn is_zero(&self) -> bool {
        self.matrix.columns().all(|c| is_zero_residue(&self.group, &c))
    }

    fn as_hom(&self) -> PresentedHom {
        PresentedHom { source: self.group.clone(), target: self.group.clone(), matrix: self.matrix.clone() }
    }

    /// `self ∘ self ∘ …` (`k` times), entries reduced.
    pub fn power(&self, k: u32) -> Self {
        let mut acc = IntMatrix::identity(self.group.len());
        for _ in 0..k {
            acc = reduce_rows(&self.group, &self.matrix * &acc);
        }
        EndoOnFinitelyGenerated { group: self.group.clone(), matrix: acc }
    }

    /// Image of a residue vector.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.matrix.mul_vec(x);
        y.into_iter().zip(&self.group).map(|(v, m)| if m.is_zero() { v } else { v.mod_floor(m) }).collect()
    }
}

/// Reduces row `i` modulo `mᵢ`, which does not change the induced map.
fn reduce_rows(group: &[BigInt], mut matrix: IntMatrix) -> IntMatrix {
    for (i, m) in group.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        for j in 0..matrix.cols() {
            let v = matrix[(i, j)].mod_floor(m);
            matrix[(i, j)] = v;
        }
    }
    matrix
}

/// Dual of the linear part `a` on the stratum `X_f(Λ)`: multiplication by
/// `a` on `Z[G]/f·Z[G]`, written in the Smith coordinates of the cokernel
/// with trivial summands dropped.
pub fn stratum_endomorphism(
    a: &LaurentPoly,
    f: &LaurentPoly,
    lattice: &Lattice,
) -> Result<EndoOnFinitelyGenerated, EquivariantError> {
    if a.dim() != f.dim() {
        return Err(EquivariantError::DimensionMismatch { left: a.dim(), right: f.dim() });
    }
    let rel = action_matrix(f, lattice)?;
    let mult = action_matrix(a, lattice)?;
    let snf = smith_normal_form(&rel);
    let factors = snf.cokernel_factors();
    let conj = &(&snf.u * &mult) * &snf.u_inv;
    let keep: Vec<usize> = (0..factors.len()).filter(|&i| !factors[i].is_one()).collect();
    let group: Vec<BigInt> = keep.iter().map(|&i| factors[i].clone()).collect();
    EndoOnFinitelyGenerated::new(group, conj.select(&keep, &keep))
}

/// Whether the compact-side map is surjective: the dual is injective.
pub fn dual_injective(e: &EndoOnFinitelyGenerated) -> bool {
    e.as_hom().is_injective()
}

/// Whether the compact-side map is injective: the dual is surjective.
pub fn dual_surjective(e: &EndoOnFinitelyGenerated) -> bool {
    e.as_hom().is_surjective()
}

/// Result of iterating an endomorphism until its kernel chain stops growing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStabilization {
    /// Least `k` with `ker e^k = ker e^{k+1}`; on the compact side, least `k`
    /// with `τ^k(X) = τ^{k+1}(X)`.
    pub steps: u32,
    /// HNF basis of `{x : e^k(x) = 0}` lifted to `Z^n` (relations included).
    pub stable_kernel: IntMatrix,
    /// The stable compact image `τ^k(X)` is dual to `G / ker e^k`; this is the
    /// free rank and torsion of that quotient.
    pub stable_image_rank: usize,
    pub stable_image_torsion: FiniteAbelianGroup,
}

/// Iterates `e` until `ker e^k = ker e^{k+1}`. The chain is ascending in a
/// Noetherian module, so this terminates.
pub fn image_chain_stabilization(e: &EndoOnFinitelyGenerated) -> ChainStabilization {
    let kernel_at = |k: u32| lattice_basis(&e.power(k).as_hom().kernel_preimage());
    let mut k = 0;
    let mut current = kernel_at(0);
    loop {
        let next = kernel_at(k + 1);
        if next == current {
            break;
        }
        current = next;
        k += 1;
    }
    let (stable_image_rank, stable_image_torsion) = structure_of_quotient(&current);
    ChainStabilization { steps: k, stable_kernel: current, stable_image_rank, stable_image_torsion }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RationalRankVerdict {
    /// `â_Q` is invertible: an injective compact-side endomorphism is onto.
    InjectiveImpliesSurjective,
    /// `det â = 0`: the dual is not surjective over Q.
    DualNotSurjective,
}

/// For a dual acting on a finite-rank torsion-free group inside `Q^n`:
/// injectivity on the compact side makes `â_Q` surjective, hence injective,
/// hence the compact map surjective, as long as `det ≠ 0`.
pub fn rational_rank_check(dual_matrix: &IntMatrix) -> Result<RationalRankVerdict, EquivariantError> {
    if !dual_matrix.is_square() {
        return Err(EquivariantError::NotSquare { rows: dual_matrix.rows(), cols: dual_matrix.cols() });
    }
    Ok(if dual_matrix.determinant().is_zero() {
        RationalRankVerdict::DualNotSurjective
    } else {
        RationalRankVerdict::InjectiveImpliesSurjective
    })
}

/// Λ-periodic torus point: one value in `[0, 1)` per coset representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicTorusPoint {
    pub lattice: Lattice,
    pub values: Vec<BigRational>,
}

impl PeriodicTorusPoint {
    pub fn new(lattice: Lattice, values: Vec<BigRational>) -> Result<Self, EquivariantError> {
        if values.len() != lattice.index() {
            return Err(EquivariantError::DimensionMismatch { left: values.len(), right: lattice.index() });
        }
        let values = values.into_iter().map(|v| &v - v.floor()).collect();
        Ok(PeriodicTorusPoint { lattice, values })
    }

    /// The constant configuration `c` (fixed by all of `Z^d`).
    pub fn constant(dim: usize, c: BigRational) -> Self {
        let lattice = Lattice::scaled(1, dim).expect("Z^d");
        Self::new(lattice, vec![c]).expect("one coset")
    }

    pub fn at(&self, gamma: &[i64]) -> &BigRational {
        &self.values[self.lattice.coset_index(gamma)]
    }
}

/// `τ(x) = a·x + b` with linear part `a` acting through the group ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMapSpec {
    pub a: LaurentPoly,
    pub b: PeriodicTorusPoint,
}

impl AffineMapSpec {
    pub fn linear(a: LaurentPoly) -> Self {
        let b = PeriodicTorusPoint::constant(a.dim(), BigRational::zero());
        AffineMapSpec { a, b }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumVerdict {
    pub lattice: Lattice,
    pub injective: bool,
    pub surjective: bool,
}

impl StratumVerdict {
    pub fn is_counterexample(&self) -> bool {
        self.injective && !self.surjective
    }
}

impl fmt::Display for StratumVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stratum lattice={} injective={} surjective={}", self.lattice, self.injective, self.surjective)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OverallVerdict {
    Consistent,
    /// Indices into the stratum list that are injective but not surjective.
    CounterexampleFound(Vec<usize>),
}

impl fmt::Display for OverallVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OverallVerdict::Consistent => f.write_str("verdict=Consistent"),
            OverallVerdict::CounterexampleFound(_) => f.write_str("verdict=Counterexample"),
        }
    }
}

/// Per-stratum injectivity/surjectivity of an affine map's linear part.
///
/// Only affine maps are tested. Every injective equivariant map of these
/// systems is affine, but that reduction is not checked here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjunctivityReport {
    pub strata: Vec<StratumVerdict>,
    pub overall: OverallVerdict,
}

impl SurjunctivityReport {
    pub fn lattices_tested(&self) -> impl Iterator<Item = &Lattice> {
        self.strata.iter().map(|s| &s.lattice)
    }
}

/// Checks that `b` is fixed by `Z^d`, fixed by each tested `Λ`, and lies in
/// `X_f`.
fn check_translation(b: &PeriodicTorusPoint, f: &LaurentPoly, lattices: &[Lattice]) -> Result<(), EquivariantError> {
    let dim = f.dim();
    if b.lattice.dim() != dim {
        return Err(EquivariantError::DimensionMismatch { left: b.lattice.dim(), right: dim });
    }
    let reps = b.lattice.coset_reps();
    for r in &reps {
        for j in 0..dim {
            let mut s = r.clone();
            s[j] += 1;
            if b.at(&s) != b.at(r) {
                return Err(violation("translation is not fixed by the shift".into()));
            }
        }
        for l in lattices {
            for g in l.generators() {
                let s: Vec<i64> = r.iter().zip(&g).map(|(x, y)| x + y).collect();
                if b.at(&s) != b.at(r) {
                    return Err(violation(format!("translation is not fixed by lattice {l}")));
                }
            }
        }
        let sum = f
            .terms()
            .iter()
            .map(|(gamma, c)| {
                let s: Vec<i64> = r.iter().zip(gamma).map(|(x, y)| x + y).collect();
                b.at(&s) * BigRational::from(c.clone())
            })
            .fold(BigRational::zero(), |acc, v| acc + v);
        if !sum.is_integer() {
            return Err(violation("translation does not satisfy the defining relations".into()));
        }
    }
    Ok(())
}

fn violation(reason: String) -> EquivariantError {
    EquivariantError::EquivarianceViolation(reason)
}

pub fn surjunctivity_experiment(
    tau: &AffineMapSpec,
    f: &LaurentPoly,
    lattices: &[Lattice],
) -> Result<SurjunctivityReport, EquivariantError> {
    surjunctivity_experiment_with(tau, f, lattices, Execution::default())
}

/// Runs the stratum analysis over `lattices`; strata are independent and may
/// be processed concurrently, the report keeps input order.
pub fn surjunctivity_experiment_with(
    tau: &AffineMapSpec,
    f: &LaurentPoly,
    lattices: &[Lattice],
    exec: Execution,
) -> Result<SurjunctivityReport, EquivariantError> {
    if tau.a.dim() != f.dim() {
        return Err(EquivariantError::DimensionMismatch { left: tau.a.dim(), right: f.dim() });
    }
    check_translation(&tau.b, f, lattices)?;
    let strata = parallel::map(exec, lattices, |l| {
        let e = stratum_endomorphism(&tau.a, f, l)?;
        Ok(StratumVerdict { lattice: l.clone(), injective: dual_surjective(&e), surjective: dual_injective(&e) })
    })
    .into_iter()
    .collect::<Result<Vec<_>, EquivariantError>>()?;
    let bad: Vec<usize> = strata.iter().enumerate().filter(|(_, s)| s.is_counterexample()).map(|(i, _)| i).collect();
    let overall = if bad.is_empty() { OverallVerdict::Consistent } else { OverallVerdict::CounterexampleFound(bad) };
    Ok(SurjunctivityReport { strata, overall })
}
