//! Smith and Hermite normal forms over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `U·A·V = S` with `U`, `V` unimodular and `S` diagonal,
/// `d₁ | d₂ | … | d_r` followed by zeros.
///
/// `u_inv` is kept alongside `u` so that endomorphisms can be transported
/// into the diagonal coordinates without inverting `U` afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub s: IntMatrix,
}

impl SmithDecomposition {
    /// The diagonal of `S`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Presentation factors of the cokernel `Z^rows / A·Z^cols`: one entry per
    /// row of `S`, zero for every free summand (including rows past the
    /// diagonal).
    pub fn cokernel_factors(&self) -> Vec<BigInt> {
        let mut d = self.diagonal();
        d.resize(self.s.rows(), BigInt::zero());
        d
    }
}

/// Smith normal form by row/column reduction with the minimal nonzero
/// absolute value as pivot.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    // row[dst] += c * row[src], mirrored into U and U⁻¹
    let row_op = |s: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, dst, src, c: &BigInt| {
        s.add_row_multiple(dst, src, c);
        u.add_row_multiple(dst, src, c);
        u_inv.add_col_multiple(src, dst, &-c);
    };

    for t in 0..m.min(n) {
        'pivot: while let Some((pi, pj)) = min_abs_position(&s, t) {
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                row_op(&mut s, &mut u, &mut u_inv, i, t, &-q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &-&q);
                v.add_col_multiple(j, t, &-q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold a bad row into the pivot row and retry
            for i in t + 1..m {
                for j in t + 1..n {
                    if !s[(i, j)].is_multiple_of(&s[(t, t)]) {
                        row_op(&mut s, &mut u, &mut u_inv, t, i, &BigInt::one());
                        continue 'pivot;
                    }
                }
            }
            break;
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    SmithDecomposition { u, u_inv, v, s }
}

fn min_abs_position(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let e = &s[(i, j)];
            if e.is_zero() {
                continue;
            }
            let abs = e.abs();
            if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                best = Some((i, j, abs));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Column-style Hermite normal form `H = A·W`.
///
/// `H` is in column echelon form: each pivot is positive, entries above a
/// pivot vanish, entries left of a pivot lie in `[0, pivot)`, and the last
/// `cols − rank` columns are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteDecomposition {
    pub h: IntMatrix,
    pub w: IntMatrix,
    /// Pivot row of each nonzero column of `h`.
    pub pivot_rows: Vec<usize>,
}

impl HermiteDecomposition {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// Basis of the column lattice: the nonzero columns of `h`.
    pub fn basis(&self) -> IntMatrix {
        let cols: Vec<usize> = (0..self.rank()).collect();
        let rows: Vec<usize> = (0..self.h.rows()).collect();
        self.h.select(&rows, &cols)
    }

    /// Basis of the integer kernel `{x : A·x = 0}` as columns.
    pub fn kernel(&self) -> IntMatrix {
        let rows: Vec<usize> = (0..self.w.rows()).collect();
        let cols: Vec<usize> = (self.rank()..self.w.cols()).collect();
        self.w.select(&rows, &cols)
    }
}

pub fn hermite_normal_form(a: &IntMatrix) -> HermiteDecomposition {
    let (m, k) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut w = IntMatrix::identity(k);
    let mut pivot_rows = Vec::new();
    let mut p = 0;
    for i in 0..m {
        if p == k {
            break;
        }
        loop {
            let pivot = (p..k).filter(|&j| !h[(i, j)].is_zero()).min_by(|&x, &y| h[(i, x)].abs().cmp(&h[(i, y)].abs()));
            let Some(j) = pivot else { break };
            h.swap_cols(p, j);
            w.swap_cols(p, j);
            let mut done = true;
            for j in p + 1..k {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = h[(i, j)].div_floor(&h[(i, p)]);
                h.add_col_multiple(j, p, &-&q);
                w.add_col_multiple(j, p, &-q);
                done &= h[(i, j)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(i, p)].is_zero() {
            continue;
        }
        if h[(i, p)].is_negative() {
            h.negate_col(p);
            w.negate_col(p);
        }
        for l in 0..p {
            let q = h[(i, l)].div_floor(&h[(i, p)]);
            h.add_col_multiple(l, p, &-&q);
            w.add_col_multiple(l, p, &-q);
        }
        pivot_rows.push(i);
        p += 1;
    }
    HermiteDecomposition { h, w, pivot_rows }
}

/// Canonical basis of the lattice spanned by the columns of `a`.
pub fn lattice_basis(a: &IntMatrix) -> IntMatrix {
    hermite_normal_form(a).basis()
}

/// Whether `v` lies in the column lattice of the HNF basis `h` (as returned
/// by [`HermiteDecomposition::basis`]).
pub fn in_column_lattice(basis: &IntMatrix, pivot_rows: &[usize], v: &[BigInt]) -> bool {
    let mut r = v.to_vec();
    for (j, &i) in pivot_rows.iter().enumerate() {
        // entries above the pivot row are already settled
        if !r[i].is_multiple_of(&basis[(i, j)]) {
            return false;
        }
        let q = &r[i] / &basis[(i, j)];
        for (row, entry) in r.iter_mut().enumerate().skip(i) {
            *entry -= &q * &basis[(row, j)];
        }
    }
    r.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let snf = smith_normal_form(a);
        assert_eq!(&(&snf.u * a) * &snf.v, snf.s);
        assert_eq!(&snf.u * &snf.u_inv, IntMatrix::identity(a.rows()));
        assert!(snf.u.determinant().abs().is_one());
        assert!(snf.v.determinant().abs().is_one());
        snf
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_identity() {
        assert_eq!(check(&IntMatrix::identity(3)).diagonal(), ints(&[1, 1, 1]));
    }

    #[test]
    fn snf_diag_2_3() {
        assert_eq!(check(&IntMatrix::diagonal(&[2, 3])).diagonal(), ints(&[1, 6]));
    }

    #[test]
    fn snf_2468() {
        assert_eq!(check(&m(&[vec![2, 4], vec![6, 8]])).diagonal(), ints(&[2, 4]));
    }

    #[test]
    fn snf_rectangular_and_singular() {
        let snf = check(&m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(snf.diagonal(), ints(&[2, 6, 12]));
        let snf = check(&m(&[vec![1, 2], vec![2, 4], vec![3, 6]]));
        assert_eq!(snf.diagonal(), ints(&[1, 0]));
        assert_eq!(snf.cokernel_factors(), ints(&[1, 0, 0]));
        assert_eq!(check(&IntMatrix::zeros(2, 3)).diagonal(), ints(&[0, 0]));
    }

    #[test]
    fn hnf_of_lattice_basis() {
        let hnf = hermite_normal_form(&m(&[vec![2, 1], vec![0, 3]]));
        assert_eq!(hnf.h, m(&[vec![1, 0], vec![3, 6]]));
        assert_eq!(&m(&[vec![2, 1], vec![0, 3]]) * &hnf.w, hnf.h);
        assert_eq!(hnf.pivot_rows, vec![0, 1]);
    }

    #[test]
    fn hnf_kernel() {
        let a = m(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let hnf = hermite_normal_form(&a);
        assert_eq!(hnf.rank(), 1);
        let ker = hnf.kernel();
        assert_eq!(ker.cols(), 2);
        assert!((&a * &ker).is_zero());
        assert_eq!(hnf.w.determinant().abs(), BigInt::one());
    }

    #[test]
    fn hnf_is_canonical() {
        let a = m(&[vec![2, 0], vec![0, 2]]);
        let b = m(&[vec![2, 2], vec![0, 2]]);
        assert_eq!(lattice_basis(&a), lattice_basis(&b));
        let hnf = hermite_normal_form(&a);
        assert!(in_column_lattice(&hnf.basis(), &hnf.pivot_rows, &ints(&[4, -2])));
        assert!(!in_column_lattice(&hnf.basis(), &hnf.pivot_rows, &ints(&[1, 0])));
    }
}
