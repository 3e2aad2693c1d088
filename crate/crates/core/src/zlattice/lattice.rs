use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::normal_form::{hermite_normal_form, smith_normal_form};
use super::{FiniteAbelianGroup, IntMatrix, LatticeError};

/// A finite-index subgroup Λ ⊂ Z^d, generated by the columns of a
/// nonsingular `d × d` basis.
///
/// The column-style Hermite normal form of the basis is lower triangular
/// with positive diagonal `h₀, …, h_{d−1}`; the box `∏ [0, hᵢ)` is the
/// fundamental domain used for coset representatives.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    basis: IntMatrix,
    // lower-triangular HNF, row-major
    hnf: Vec<Vec<i64>>,
    index: usize,
}

impl Lattice {
    pub fn new(basis: IntMatrix) -> Result<Self, LatticeError> {
        if !basis.is_square() || basis.rows() == 0 {
            return Err(LatticeError::NotSquare { rows: basis.rows(), cols: basis.cols() });
        }
        let det = basis.determinant();
        if det.is_zero() {
            return Err(LatticeError::Singular);
        }
        let index = det.abs().to_usize().ok_or(LatticeError::IndexTooLarge)?;
        let h = hermite_normal_form(&basis).h;
        let d = basis.rows();
        let mut hnf = vec![vec![0i64; d]; d];
        for (i, row) in hnf.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = h[(i, j)].to_i64().ok_or(LatticeError::IndexTooLarge)?;
            }
        }
        Ok(Lattice { basis, hnf, index })
    }

    /// `N·Z^d`.
    pub fn scaled(n: i64, dim: usize) -> Result<Self, LatticeError> {
        Self::new(IntMatrix::diagonal(&vec![n; dim]))
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self, LatticeError> {
        Self::new(IntMatrix::diagonal(entries))
    }

    pub fn parse(text: &str) -> Result<Self, LatticeError> {
        Self::new(super::parse_matrix(text)?)
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// `[Z^d : Λ] = |det basis|`.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn hnf_diagonal(&self) -> Vec<i64> {
        (0..self.dim()).map(|i| self.hnf[i][i]).collect()
    }

    /// Reduces `v` into the HNF fundamental domain.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.dim(), "vector dimension mismatch");
        let mut r = v.to_vec();
        for i in 0..self.dim() {
            let q = r[i].div_euclid(self.hnf[i][i]);
            if q != 0 {
                for (k, e) in r.iter_mut().enumerate().skip(i) {
                    *e -= q * self.hnf[k][i];
                }
            }
        }
        r
    }

    /// Position of the coset of `v` in [`Lattice::coset_reps`].
    pub fn coset_index(&self, v: &[i64]) -> usize {
        let r = self.reduce(v);
        r.iter().zip(self.hnf_diagonal()).fold(0usize, |acc, (&x, h)| acc * h as usize + x as usize)
    }

    pub fn congruent(&self, a: &[i64], b: &[i64]) -> bool {
        self.reduce(a) == self.reduce(b)
    }

    /// One representative per coset, in lexicographic order of the
    /// fundamental box.
    pub fn coset_reps(&self) -> Vec<Vec<i64>> {
        let radices = self.hnf_diagonal();
        let mut reps = Vec::with_capacity(self.index);
        let mut current = vec![0i64; self.dim()];
        for _ in 0..self.index {
            reps.push(current.clone());
            for i in (0..self.dim()).rev() {
                current[i] += 1;
                if current[i] < radices[i] {
                    break;
                }
                current[i] = 0;
            }
        }
        reps
    }

    /// Generators of Λ as exponent vectors (the basis columns).
    pub fn generators(&self) -> Vec<Vec<i64>> {
        (0..self.dim())
            .map(|j| (0..self.dim()).map(|i| self.basis[(i, j)].to_i64().expect("entry fits i64")).collect())
            .collect()
    }

    /// Whether every generator of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.generators().iter().all(|g| self.reduce(g).iter().all(|&x| x == 0))
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.basis.fmt(f)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice({})", self.basis)
    }
}

/// Invariant factors of `Z^d / Λ`, factors equal to 1 dropped.
pub fn quotient_group(lattice: &Lattice) -> FiniteAbelianGroup {
    let snf = smith_normal_form(lattice.basis());
    FiniteAbelianGroup::from_factors(snf.diagonal().into_iter().filter(|d| *d > BigInt::from(1)).collect())
        .expect("SNF diagonal forms a divisibility chain")
}

/// Coset representatives of `lattice`.
pub fn coset_reps(lattice: &Lattice) -> Vec<Vec<i64>> {
    lattice.coset_reps()
}
