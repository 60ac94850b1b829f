//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers or rationals.
//! Rank uses fraction-free (Bareiss) elimination with a fixed pivot rule so
//! results do not depend on platform or run.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MathError {
    #[error("matrix of shape {rows}x{cols} needs {expected} entries, got {got}")]
    EntryCount { rows: usize, cols: usize, expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system has no unique solution")]
    Underdetermined,
    #[error("matrix is singular")]
    Singular,
    #[error("fraction-free step produced a non-integral quotient at pivot {0}")]
    InexactDivision(usize),
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
}

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self, MathError> {
        if entries.len() != rows * cols {
            return Err(MathError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, entries }
    }

    /// Builds a matrix from integer rows. All rows must have equal length.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, MathError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(MathError::Dimension(format!(
                "ragged rows: expected length {cols}, found {}",
                bad.len()
            )));
        }
        Ok(Self::from_fn(rows.len(), cols, |i, j| int(rows[i][j])))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigRational::one() } else { BigRational::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        Self::from_fn(perm.len(), self.cols, |i, j| self.get(perm[i], j).clone())
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.rows, perm.len(), |i, j| self.get(i, perm[j]).clone())
    }

    pub fn block_diagonal(blocks: &[ExactMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.entries[(r0 + i) * cols + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix, MathError> {
        if self.cols != other.rows {
            return Err(MathError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(BigRational::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        }))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Clears denominators row by row. Scaling a row by a nonzero integer
    /// keeps the rank.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }
}

/// Rank over the rationals.
pub fn rank(m: &ExactMatrix) -> usize {
    let rows = m.integer_rows();
    bareiss(rows, m.cols).map(|t| t.rank).expect("Bareiss quotients of integer rows are exact")
}

/// Rank of an integer matrix given as rows.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let big = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    bareiss(big, cols).map(|t| t.rank).expect("Bareiss quotients of integer rows are exact")
}

/// Outcome of fraction-free elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BareissTrace {
    pub rank: usize,
    /// Pivot columns in elimination order.
    pub pivot_cols: Vec<usize>,
    /// Successive pivots; the last one is the leading principal minor of
    /// the echelon form, up to sign.
    pub pivots: Vec<BigInt>,
}

/// Fraction-free elimination. The pivot for each column is the first
/// remaining row with a nonzero entry there; columns without one are
/// skipped. Every division is checked to be exact.
pub fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> Result<BareissTrace, MathError> {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        let piv = &prow[c];
        for row in tail.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let mut v = piv * &row[j];
                if !f.is_zero() && !prow[j].is_zero() {
                    v -= &f * &prow[j];
                }
                if prev.is_one() || v.is_zero() {
                    row[j] = v;
                } else {
                    let (q, rem) = v.div_rem(&prev);
                    if !rem.is_zero() {
                        return Err(MathError::InexactDivision(r));
                    }
                    row[j] = q;
                }
            }
        }
        prev = piv.clone();
        pivot_cols.push(c);
        pivots.push(prev.clone());
        r += 1;
        // Rows that became zero are moved past the active block lazily: the
        // pivot search above simply never picks them.
    }
    Ok(BareissTrace { rank: r, pivot_cols, pivots })
}

/// Σ coeffs[k]·n^k, evaluated by Horner's rule.
pub fn polynomial_eval(coeffs: &[BigRational], n: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * n + c)
}

/// Solves `m·x = rhs` when the solution exists and is unique. Tall systems
/// are accepted if consistent.
pub fn solve(m: &ExactMatrix, rhs: &[BigRational]) -> Result<Vec<BigRational>, MathError> {
    if rhs.len() != m.rows {
        return Err(MathError::Dimension(format!(
            "right-hand side has {} entries for {} rows",
            rhs.len(),
            m.rows
        )));
    }
    let cols = m.cols;
    let mut a: Vec<Vec<BigRational>> = (0..m.rows)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            return Err(MathError::Underdetermined);
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return Err(MathError::Inconsistent);
    }
    Ok(a[..cols].iter().map(|row| row[cols].clone()).collect())
}

/// Inverse of a square matrix.
pub fn inverse(m: &ExactMatrix) -> Result<ExactMatrix, MathError> {
    if m.rows != m.cols {
        return Err(MathError::Dimension("inverse of a non-square matrix".into()));
    }
    let n = m.rows;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<BigRational> =
            (0..n).map(|i| if i == j { BigRational::one() } else { BigRational::zero() }).collect();
        cols.push(solve(m, &e).map_err(|_| MathError::Singular)?);
    }
    Ok(ExactMatrix::from_fn(n, n, |i, j| cols[j][i].clone()))
}

/// Determinant of a small integer matrix, by fraction-free elimination.
pub fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut prev: i128 = 1;
    let mut sign = 1;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Divides out the content. The zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0, |acc, &x| acc.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Basis of the integer kernel `{x ∈ Zⁿ : A x = 0}`.
///
/// Column operations reduce `A` to echelon form while tracking a unimodular
/// matrix; the columns of that matrix beyond the rank span the kernel, and
/// because the tracking matrix is unimodular the result is saturated.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let col_op = |m: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, dst: usize, src: usize, f: i64| {
        for row in m.iter_mut() {
            row[dst] -= f * row[src];
        }
        for row in u.iter_mut() {
            row[dst] -= f * row[src];
        }
    };
    let swap = |m: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, x: usize, y: usize| {
        for row in m.iter_mut() {
            row.swap(x, y);
        }
        for row in u.iter_mut() {
            row.swap(x, y);
        }
    };
    let mut rank = 0;
    for i in 0..m.len() {
        if rank == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (rank..n).filter(|&j| m[i][j] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&j| m[i][j].abs()).unwrap();
            swap(&mut m, &mut u, rank, best);
            let mut done = true;
            for j in rank + 1..n {
                if m[i][j] != 0 {
                    let f = m[i][j] / m[i][rank];
                    col_op(&mut m, &mut u, j, rank, f);
                    if m[i][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                rank += 1;
                break;
            }
        }
    }
    (rank..n).map(|j| u.iter().map(|row| row[j]).collect()).collect()
}

/// A unimodular integer matrix `U` with `U·v = e₁`, for primitive `v`.
pub fn unimodular_to_e1(v: &[i64]) -> Result<Vec<Vec<i64>>, MathError> {
    let n = v.len();
    let mut w = v.to_vec();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    // Row operations applied simultaneously to w and u keep u·v = w.
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| w[i] != 0).collect();
        if nz.is_empty() {
            return Err(MathError::NotPrimitive(v.to_vec()));
        }
        if nz.len() == 1 {
            let i = nz[0];
            if w[i].abs() != 1 {
                return Err(MathError::NotPrimitive(v.to_vec()));
            }
            w.swap(0, i);
            u.swap(0, i);
            if w[0] == -1 {
                w[0] = 1;
                for x in u[0].iter_mut() {
                    *x = -*x;
                }
            }
            return Ok(u);
        }
        let p = *nz.iter().min_by_key(|&&i| w[i].abs()).unwrap();
        for &i in &nz {
            if i != p {
                let f = w[i] / w[p];
                w[i] -= f * w[p];
                let (src, dst) = (u[p].clone(), &mut u[i]);
                for (x, y) in dst.iter_mut().zip(src) {
                    *x -= f * y;
                }
            }
        }
    }
}

pub fn mat_vec_i64(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// True when the two rationals have the same sign (zero counts as its own sign).
pub fn same_sign(a: &BigRational, b: &BigRational) -> bool {
    a.signum() == b.signum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&m(&[&[-3]])), 1);
        assert_eq!(rank(&m(&[&[0, -1, -1], &[-1, 0, -1], &[-1, -1, 0]])), 3);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&ExactMatrix::zeros(0, 0)), 0);
        assert_eq!(rank(&ExactMatrix::zeros(3, 5)), 0);
    }

    #[test]
    fn cofactor_determinant_of_triangle_block() {
        // Independent oracle: cofactor expansion along the first row.
        let a = [[0i64, -1, -1], [-1, 0, -1], [-1, -1, 0]];
        let minor = |r: usize, c: usize| {
            let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
            let cs: Vec<usize> = (0..3).filter(|&j| j != c).collect();
            a[rs[0]][cs[0]] * a[rs[1]][cs[1]] - a[rs[0]][cs[1]] * a[rs[1]][cs[0]]
        };
        let cof = a[0][0] * minor(0, 0) - a[0][1] * minor(0, 1) + a[0][2] * minor(0, 2);
        assert_eq!(cof, -2);
        assert_eq!(det_i64(&a.iter().map(|r| r.to_vec()).collect::<Vec<_>>()), -2);
    }

    #[test]
    fn rational_rows_are_cleared() {
        let a = ExactMatrix::new(2, 2, vec![rat(1, 2), rat(1, 3), rat(3, 2), int(1)]).unwrap();
        assert_eq!(rank(&a), 1);
        let b = ExactMatrix::new(2, 2, vec![rat(1, 2), rat(1, 3), rat(3, 2), int(2)]).unwrap();
        assert_eq!(rank(&b), 2);
    }

    #[test]
    fn entry_count_is_checked() {
        assert!(matches!(ExactMatrix::new(2, 2, vec![int(1)]), Err(MathError::EntryCount { .. })));
    }

    #[test]
    fn hilbert_quartic_values() {
        let c = [int(1), rat(9, 4), rat(27, 8), rat(9, 4), rat(9, 8)];
        assert_eq!(polynomial_eval(&c, &int(0)), int(1));
        assert_eq!(polynomial_eval(&c, &int(1)), int(10));
        assert_eq!(polynomial_eval(&c, &int(2)), int(55));
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[18, 2], &[-30, -20]]);
        let x = solve(&a, &[int(0), int(24)]).unwrap();
        assert_eq!(x, vec![rat(4, 25), rat(-36, 25)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), ExactMatrix::identity(2));
        assert_eq!(solve(&m(&[&[1, 1], &[2, 2]]), &[int(1), int(2)]), Err(MathError::Underdetermined));
        assert_eq!(solve(&m(&[&[1], &[1]]), &[int(1), int(2)]), Err(MathError::Inconsistent));
    }

    #[test]
    fn kernel_is_saturated() {
        // x2 = x3 = x4 inside Z^4 written in a non-standard basis.
        let k = integer_kernel(&[vec![0, 1, -1, 0], vec![0, 0, 1, -1]], 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[1], v[2]);
            assert_eq!(v[2], v[3]);
        }
        let minors = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
            .iter()
            .map(|&(i, j)| k[0][i] * k[1][j] - k[0][j] * k[1][i])
            .fold(0, gcd_i64);
        assert_eq!(minors, 1);
    }

    #[test]
    fn unimodular_completion() {
        for v in [vec![1, 0, 1, 0], vec![3, 5, -7, 2], vec![0, 0, -1], vec![2, 3]] {
            let u = unimodular_to_e1(&v).unwrap();
            let mut e1 = vec![0; v.len()];
            e1[0] = 1;
            assert_eq!(mat_vec_i64(&u, &v), e1);
            assert_eq!(det_i64(&u).abs(), 1);
        }
        assert!(unimodular_to_e1(&[2, 4]).is_err());
    }

    fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> Vec<Vec<i64>> {
        use rand::Rng;
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..rank).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let b: Vec<Vec<i64>> = (0..rank).map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        (0..rows)
            .map(|i| (0..cols).map(|j| (0..rank).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn rank_invariant_under_shuffles_and_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let (r, c) = (3 + trial % 7, 2 + trial % 9);
            let a = ExactMatrix::from_i64_rows(&random_int_matrix(&mut rng, r, c, 1 + trial % 4)).unwrap();
            let base = rank(&a);
            assert_eq!(base, rank(&a.transpose()));
            let mut rp: Vec<usize> = (0..r).collect();
            let mut cp: Vec<usize> = (0..c).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            assert_eq!(base, rank(&a.permute_rows(&rp).permute_cols(&cp)));
        }
    }

    #[test]
    fn block_rank_is_additive() {
        let b1 = m(&[&[0, -1, -1], &[-1, 0, -1], &[-1, -1, 0]]);
        let b2 = m(&[&[1, 2], &[2, 4]]);
        let b3 = m(&[&[-3]]);
        let bd = ExactMatrix::block_diagonal(&[b1.clone(), b2.clone(), b3.clone()]);
        assert_eq!(rank(&bd), rank(&b1) + rank(&b2) + rank(&b3));
    }

    proptest! {
        #[test]
        fn bareiss_divisions_are_exact(rows in proptest::collection::vec(proptest::collection::vec(-9i64..=9, 6), 1..8)) {
            let big = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let t = bareiss(big, 6);
            prop_assert!(t.is_ok());
            let t = t.unwrap();
            let tr = ExactMatrix::from_i64_rows(&rows).unwrap().transpose();
            prop_assert_eq!(t.rank, rank(&tr));
        }

        #[test]
        fn square_rank_matches_determinant(rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 4), 4)) {
            let full = det_i64(&rows) != 0;
            prop_assert_eq!(int_rank(&rows) == 4, full);
        }
    }
}
