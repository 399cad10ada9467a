//! Dense matrices over `Q(sqrt(D))`.
//!
//! `Q(sqrt(D))` is a field, so plain Gaussian elimination with exact division
//! gives determinants, ranks, inverses and solutions with no numerical
//! caveats. Sizes here are tiny (n = d + m <= a handful), so no pivoting
//! strategy beyond "first nonzero" is needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

use super::{IntMatrix, QuadExt};

/// Dense row-major matrix over `Q(sqrt(D))`.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<QuadExt>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = QuadExt;
    fn index(&self, (i, j): (usize, usize)) -> &QuadExt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut QuadExt {
        &mut self.data[i * self.cols + j]
    }
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![QuadExt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = QuadExt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<QuadExt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_matrix(m: &IntMatrix) -> Self {
        let mut q = Self::zero(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                q[(i, j)] = QuadExt::from_bigint(m[(i, j)].clone());
            }
        }
        q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<QuadExt> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<QuadExt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Vertically stacks `self` on top of `other`.
    pub fn stack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in stack");
        let mut out = QMatrix::zero(self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                out[(self.rows + i, j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = QMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &t;
                }
            }
        }
        out
    }

    pub fn mul_int(&self, rhs: &IntMatrix) -> QMatrix {
        self.mul(&QMatrix::from_int_matrix(rhs))
    }

    pub fn mul_vec(&self, v: &[QuadExt]) -> Vec<QuadExt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = QuadExt::zero();
                for j in 0..self.cols {
                    acc = &acc + &(&self[(i, j)] * &v[j]);
                }
                acc
            })
            .collect()
    }

    /// Applies the matrix to an integer vector.
    pub fn mul_int_vec(&self, v: &[BigInt]) -> Vec<QuadExt> {
        let qv: Vec<QuadExt> = v.iter().map(|z| QuadExt::from_bigint(z.clone())).collect();
        self.mul_vec(&qv)
    }

    /// Row echelon elimination used by `det`, `rank`, `inverse`, `solve`.
    /// Returns (reduced copy or augmented reduction, pivot columns, det of the
    /// square part if tracked).
    fn eliminate(&self, augment: Option<&QMatrix>) -> (QMatrix, Vec<usize>, QuadExt) {
        let mut m = match augment {
            None => self.clone(),
            Some(aug) => {
                assert_eq!(aug.rows, self.rows);
                let mut w = QMatrix::zero(self.rows, self.cols + aug.cols);
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        w[(i, j)] = self[(i, j)].clone();
                    }
                    for j in 0..aug.cols {
                        w[(i, self.cols + j)] = aug[(i, j)].clone();
                    }
                }
                w
            }
        };
        let width = self.cols; // eliminate only over the original columns
        let mut det = QuadExt::one();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..width {
            let Some(p) = (r..self.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let x = m[(r, j)].clone();
                    let y = m[(p, j)].clone();
                    m[(r, j)] = y;
                    m[(p, j)] = x;
                }
                det = -det;
            }
            let piv = m[(r, c)].clone();
            det = &det * &piv;
            let inv = piv.inverse().expect("pivot is nonzero");
            for j in 0..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..self.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        let t = &f * &m[(r, j)];
                        m[(i, j)] = &m[(i, j)] - &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        (m, pivots, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate(None).1.len()
    }

    pub fn det(&self) -> QuadExt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let (_, pivots, det) = self.eliminate(None);
        if pivots.len() < self.rows {
            QuadExt::zero()
        } else {
            det
        }
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let (m, pivots, _) = self.eliminate(Some(&QMatrix::identity(self.rows)));
        if pivots.len() < self.rows {
            return None;
        }
        let mut inv = QMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                inv[(i, j)] = m[(i, self.cols + j)].clone();
            }
        }
        Some(inv)
    }

    /// Solves `self * x = rhs` when the solution is unique; `None` when the
    /// system is inconsistent or underdetermined.
    pub fn solve_unique(&self, rhs: &[QuadExt]) -> Option<Vec<QuadExt>> {
        assert_eq!(self.rows, rhs.len(), "right-hand side length mismatch");
        let aug = QMatrix::from_rows(rhs.iter().map(|x| vec![x.clone()]).collect());
        let (m, pivots, _) = self.eliminate(Some(&aug));
        if pivots.len() < self.cols {
            return None; // underdetermined
        }
        // Consistency: rows beyond the pivot count must have zero rhs.
        for i in pivots.len()..self.rows {
            if !m[(i, self.cols)].is_zero() {
                return None;
            }
        }
        Some((0..self.cols).map(|i| m[(i, self.cols)].clone()).collect())
    }
}

/// Splits a `Q(sqrt(D))` matrix into its rational and surd coordinate
/// matrices over `Q` (as `QuadExt` values with zero surd part), stacked
/// rationally: the returned matrix is `[rational part; surd part]`.
///
/// A vector `z` of rationals satisfies `M z = w` iff it satisfies both
/// coordinate systems; this is how physical coordinates are resolved exactly.
pub fn rational_coordinate_stack(m: &QMatrix) -> QMatrix {
    let mut out = QMatrix::zero(m.rows() * 2, m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out[(i, j)] = QuadExt::from_rational(m[(i, j)].rational_part().clone());
            out[(m.rows() + i, j)] = QuadExt::from_rational(m[(i, j)].surd_part().clone());
        }
    }
    out
}

/// Same split for a vector.
pub fn rational_coordinate_stack_vec(v: &[QuadExt]) -> Vec<QuadExt> {
    let mut out = Vec::with_capacity(v.len() * 2);
    for x in v {
        out.push(QuadExt::from_rational(x.rational_part().clone()));
    }
    for x in v {
        out.push(QuadExt::from_rational(x.surd_part().clone()));
    }
    out
}

/// Clears denominators from a rational matrix (all entries must have zero
/// surd part), returning the integer matrix and the per-row scale factors.
pub fn clear_denominators(m: &QMatrix) -> (IntMatrix, Vec<BigInt>) {
    use num_integer::Integer;
    use num_traits::One;
    let mut out = IntMatrix::zero(m.rows(), m.cols());
    let mut scales = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut lcm = BigInt::one();
        for j in 0..m.cols() {
            let e = &m[(i, j)];
            assert!(e.is_rational(), "clear_denominators expects rational entries");
            lcm = lcm.lcm(e.rational_part().denom());
        }
        for j in 0..m.cols() {
            let scaled = m[(i, j)].rational_part() * BigRational::from_integer(lcm.clone());
            debug_assert!(scaled.is_integer());
            out[(i, j)] = scaled.to_integer();
        }
        scales.push(lcm);
    }
    (out, scales)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> QuadExt {
        QuadExt::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            5,
        )
        .unwrap()
    }

    fn fib_stack() -> QMatrix {
        // [A; B] for the golden-ratio scheme: rows (1, phi) and (1, phibar).
        QMatrix::from_rows(vec![
            vec![QuadExt::one(), phi()],
            vec![QuadExt::one(), phi().conjugate()],
        ])
    }

    #[test]
    fn det_inverse_roundtrip() {
        let m = fib_stack();
        // det = phibar - phi = -sqrt(5).
        let det = m.det();
        assert_eq!(det, -QuadExt::sqrt_disc(5).unwrap());
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv) == QMatrix::identity(2));
        assert!(inv.mul(&m) == QMatrix::identity(2));
    }

    #[test]
    fn singular_matrix_detected() {
        let m = QMatrix::from_rows(vec![
            vec![QuadExt::one(), phi()],
            vec![QuadExt::from_int(2), &phi() * &QuadExt::from_int(2)],
        ]);
        assert!(m.det().is_zero());
        assert!(m.inverse().is_none());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_unique_system() {
        let m = fib_stack();
        // Solve for z with A z = phi + 2, B z = phibar + 2 (i.e. z = (2, 1)).
        let rhs = vec![&phi() + &QuadExt::from_int(2), &phi().conjugate() + &QuadExt::from_int(2)];
        let z = m.solve_unique(&rhs).unwrap();
        assert_eq!(z, vec![QuadExt::from_int(2), QuadExt::one()]);
    }

    #[test]
    fn coordinate_stack_gives_full_rank_for_irrational_embedding() {
        // A = [1, phi] has Q-rank 2 once split into rational coordinates.
        let a = QMatrix::from_rows(vec![vec![QuadExt::one(), phi()]]);
        let stacked = rational_coordinate_stack(&a);
        assert_eq!(stacked.rows(), 2);
        assert_eq!(stacked.rank(), 2);
        // Whereas a rational row stays rank 1 (its surd row is zero).
        let r = QMatrix::from_rows(vec![vec![QuadExt::one(), QuadExt::from_frac(1, 2)]]);
        assert_eq!(rational_coordinate_stack(&r).rank(), 1);
    }

    #[test]
    fn denominator_clearing() {
        let m = QMatrix::from_rows(vec![vec![QuadExt::from_frac(1, 2), QuadExt::from_frac(1, 3)]]);
        let (im, scales) = clear_denominators(&m);
        assert_eq!(scales, vec![BigInt::from(6)]);
        assert_eq!(im[(0, 0)], BigInt::from(3));
        assert_eq!(im[(0, 1)], BigInt::from(2));
    }
}
