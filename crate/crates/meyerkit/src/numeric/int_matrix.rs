//! Integer matrices and lattice normal forms.
//!
//! Sublattices of `Z^n` enter the pipeline in two places: the structure-group
//! shrinking step (column span of the support's coordinate vectors) and the
//! finite-group quotients (relation lattices). Both reduce to the column
//! Hermite normal form and the Smith normal form computed here with exact
//! `BigInt` arithmetic and full transform tracking.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use super::NumericError;

/// Dense row-major matrix over `Z`.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds from nested rows; all rows must share a length.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, NumericError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(NumericError::RaggedMatrix);
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("ragged literal matrix")
    }

    /// Builds from a list of column vectors.
    pub fn from_cols(cols: Vec<Vec<BigInt>>) -> Result<Self, NumericError> {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        if cols.iter().any(|col| col.len() != r) {
            return Err(NumericError::RaggedMatrix);
        }
        let mut m = Self::zero(r, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    /// Signed determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                // Find a pivot row below and swap.
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            let a = m[(k, j)].clone();
                            let b = m[(i, j)].clone();
                            m[(k, j)] = b;
                            m[(i, j)] = a;
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    // Exact division is a Bareiss invariant.
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero());
                    m[(i, j)] = q;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

/// Result of the column Hermite reduction of `M`: `hnf = M * trans` with
/// `trans` unimodular; the first `rank` columns of `hnf` are the canonical
/// staircase basis of the column lattice and the remaining columns are zero.
#[derive(Clone, Debug)]
pub struct LatticeNormalForm {
    pub hnf: IntMatrix,
    pub trans: IntMatrix,
    pub rank: usize,
    /// Invariant factors of `M` (Smith diagonal up to the rank, ascending
    /// divisibility chain, all positive).
    pub invariant_factors: Vec<BigInt>,
}

impl LatticeNormalForm {
    /// The nonzero staircase columns as an `n x rank` matrix.
    pub fn basis(&self) -> IntMatrix {
        let mut b = IntMatrix::zero(self.hnf.rows(), self.rank);
        for i in 0..self.hnf.rows() {
            for j in 0..self.rank {
                b[(i, j)] = self.hnf[(i, j)].clone();
            }
        }
        b
    }
}

/// Row Hermite normal form `h = u * m` with `u` unimodular.
///
/// `h` is in row staircase form: pivots positive, entries above each pivot
/// reduced into `[0, pivot)`, zero rows last. Deterministic.
pub fn row_hermite_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0; // next pivot row
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid on rows r.. in column c until at most one nonzero remains.
        loop {
            // Find row with smallest nonzero |h[i][c]|, i >= r.
            let mut pivot: Option<usize> = None;
            for i in r..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                pivot = match pivot {
                    None => Some(i),
                    Some(p) if h[(i, c)].abs() < h[(p, c)].abs() => Some(i),
                    keep => keep,
                };
            }
            let p = match pivot {
                None => break,
                Some(p) => p,
            };
            if p != r {
                swap_rows(&mut h, r, p);
                swap_rows(&mut u, r, p);
            }
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = div_floor_big(&h[(i, c)], &h[(r, c)]);
                row_sub_mul(&mut h, i, r, &q);
                row_sub_mul(&mut u, i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        // Reduce the entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = div_floor_big(&h[(i, c)], &h[(r, c)]);
            if !q.is_zero() {
                row_sub_mul(&mut h, i, r, &q);
                row_sub_mul(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u, r)
}

/// Column Hermite normal form with transform and Smith invariant factors.
pub fn lattice_normal_form(m: &IntMatrix) -> LatticeNormalForm {
    let (h_t, u_t, rank) = row_hermite_with_transform(&m.transpose());
    let hnf = h_t.transpose();
    let trans = u_t.transpose();
    debug_assert_eq!(m.mul(&trans), hnf);
    let smith = smith_with_transforms(m);
    LatticeNormalForm { hnf, trans, rank, invariant_factors: smith.factors() }
}

/// Canonical basis of the column lattice of `m`, without transform tracking
/// (cheaper for wide matrices). Columns form the Hermite staircase.
pub fn column_lattice_basis(m: &IntMatrix) -> IntMatrix {
    // Row-reduce the transpose without carrying a transform.
    let (h_t, _, rank) = row_hermite_with_transform(&m.transpose());
    let h = h_t.transpose();
    let mut b = IntMatrix::zero(m.rows(), rank);
    for i in 0..m.rows() {
        for j in 0..rank {
            b[(i, j)] = h[(i, j)].clone();
        }
    }
    b
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let x = m[(a, j)].clone();
        let y = m[(b, j)].clone();
        m[(a, j)] = y;
        m[(b, j)] = x;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols() {
        let v = -m[(r, j)].clone();
        m[(r, j)] = v;
    }
}

fn row_sub_mul(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let t = q * &m[(src, j)];
        m[(dst, j)] -= t;
    }
}

fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Smith decomposition `s = u * m * v` with `u`, `v` unimodular (inverses
/// tracked), `s` diagonal with nonnegative entries in an ascending
/// divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Positive invariant factors (diagonal entries up to the rank).
    pub fn factors(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n)
            .map(|i| self.s[(i, i)].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.factors().len()
    }
}

/// Computes the Smith normal form with all four transforms.
pub fn smith_with_transforms(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Elementary operations, applied to s and mirrored on the transforms.
    // Row op on s = row op on u, inverse column op on u_inv.
    let mut t = 0usize;
    loop {
        // Find the nonzero entry of smallest magnitude in s[t.., t..].
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s[(i, j)].is_zero() {
                    continue;
                }
                pivot = match pivot {
                    None => Some((i, j)),
                    Some((pi, pj)) if s[(i, j)].abs() < s[(pi, pj)].abs() => Some((i, j)),
                    keep => keep,
                };
            }
        }
        let (pi, pj) = match pivot {
            None => break,
            Some(p) => p,
        };
        // Move the pivot to (t, t).
        if pi != t {
            swap_rows(&mut s, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut u_inv, t, pi);
        }
        if pj != t {
            swap_cols(&mut s, t, pj);
            swap_cols(&mut v, t, pj);
            swap_rows(&mut v_inv, t, pj);
        }
        // Clear row and column t.
        let mut dirty = false;
        for i in t + 1..rows {
            if s[(i, t)].is_zero() {
                continue;
            }
            let q = div_floor_big(&s[(i, t)], &s[(t, t)]);
            row_sub_mul(&mut s, i, t, &q);
            row_sub_mul(&mut u, i, t, &q);
            col_add_mul(&mut u_inv, t, i, &q);
            if !s[(i, t)].is_zero() {
                dirty = true;
            }
        }
        for j in t + 1..cols {
            if s[(t, j)].is_zero() {
                continue;
            }
            let q = div_floor_big(&s[(t, j)], &s[(t, t)]);
            col_sub_mul(&mut s, j, t, &q);
            col_sub_mul(&mut v, j, t, &q);
            row_add_mul(&mut v_inv, t, j, &q);
            if !s[(t, j)].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue; // remainders left; re-pick the pivot
        }
        // Enforce divisibility of the remaining block by s[t][t].
        let mut fixed = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if (&s[(i, j)] % &s[(t, t)]).is_zero() {
                    continue;
                }
                // Fold row i into row t and restart the pivot step.
                let one = BigInt::from(-1);
                row_sub_mul(&mut s, t, i, &one);
                row_sub_mul(&mut u, t, i, &one);
                col_add_mul(&mut u_inv, i, t, &one);
                fixed = false;
                break 'scan;
            }
        }
        if !fixed {
            continue;
        }
        if s[(t, t)].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
            negate_col(&mut u_inv, t);
        }
        t += 1;
        if t == rows || t == cols {
            break;
        }
    }
    debug_assert_eq!(u.mul(m).mul(&v), s);
    debug_assert!(u.mul(&u_inv).is_identity());
    debug_assert!(v.mul(&v_inv).is_identity());
    SmithDecomposition { s, u, u_inv, v, v_inv }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let x = m[(i, a)].clone();
        let y = m[(i, b)].clone();
        m[(i, a)] = y;
        m[(i, b)] = x;
    }
}

fn negate_col(m: &mut IntMatrix, c: usize) {
    for i in 0..m.rows() {
        let v = -m[(i, c)].clone();
        m[(i, c)] = v;
    }
}

fn col_sub_mul(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let t = q * &m[(i, src)];
        m[(i, dst)] -= t;
    }
}

fn col_add_mul(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let t = q * &m[(i, src)];
        m[(i, dst)] += t;
    }
}

fn row_add_mul(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let t = q * &m[(src, j)];
        m[(dst, j)] += t;
    }
}

/// Full integer solution set of `m * z = rhs`.
#[derive(Clone, Debug)]
pub struct IntSolution {
    /// One integer solution.
    pub particular: Vec<BigInt>,
    /// Basis of the integer kernel lattice (saturated: these columns span
    /// `ker(m) /cap Z^n` exactly). Empty when the kernel is trivial.
    pub kernel: Vec<Vec<BigInt>>,
}

/// Solves `m * z = rhs` over the integers via the Smith decomposition.
/// Returns `None` when no integer solution exists.
pub fn solve_integer(m: &IntMatrix, rhs: &[BigInt]) -> Option<IntSolution> {
    assert_eq!(m.rows(), rhs.len(), "right-hand side length mismatch");
    let sd = smith_with_transforms(m);
    let rank = sd.rank();
    let c = sd.u.mul_vec(rhs);
    let n = m.cols();
    let mut y = vec![BigInt::zero(); n];
    for i in 0..m.rows() {
        if i < rank {
            let d = &sd.s[(i, i)];
            let (q, r) = c[i].div_rem(d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return None;
        }
    }
    let particular = sd.v.mul_vec(&y);
    let kernel = (rank..n).map(|j| sd.v.col(j)).collect();
    Some(IntSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn hermite_of_identity() {
        let id = IntMatrix::identity(2);
        let nf = lattice_normal_form(&id);
        assert_eq!(nf.rank, 2);
        assert!(nf.hnf.is_identity());
        assert_eq!(nf.invariant_factors, vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn smith_of_skew_pair() {
        // Columns (1,1) and (1,-1) span an index-2 sublattice of Z^2.
        let a = m(&[&[1, 1], &[1, -1]]);
        let nf = lattice_normal_form(&a);
        assert_eq!(nf.rank, 2);
        assert_eq!(nf.invariant_factors, vec![BigInt::from(1), BigInt::from(2)]);
        // Index = |det| = product of invariant factors.
        assert_eq!(a.det().abs(), BigInt::from(2));
        // The transform really is unimodular and reproduces hnf.
        assert_eq!(nf.trans.det().abs(), BigInt::from(1));
        assert_eq!(a.mul(&nf.trans), nf.hnf);
    }

    #[test]
    fn hermite_drops_dependent_columns() {
        // Third column is the sum of the first two.
        let a = m(&[&[2, 0, 2], &[0, 3, 3]]);
        let nf = lattice_normal_form(&a);
        assert_eq!(nf.rank, 2);
        let b = nf.basis();
        assert_eq!(b.cols(), 2);
        // Zero column is last.
        assert!(nf.hnf.col(2).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn smith_divisibility_chain() {
        let a = m(&[&[4, 0, 2], &[0, 2, 0]]);
        let sd = smith_with_transforms(&a);
        let f = sd.factors();
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(sd.u.mul(&a).mul(&sd.v), sd.s);
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(m(&[&[1, 1], &[1, -1]]).det(), BigInt::from(-2));
        assert_eq!(m(&[&[2, 0], &[0, 3]]).det(), BigInt::from(6));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), BigInt::from(0));
        assert_eq!(
            m(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]).det(),
            BigInt::from(3 * (25 - 54) - 1 * (5 - 18) + 4 * (6 - 10)),
        );
    }

    #[test]
    fn index_by_coset_counting() {
        // For a batch of small full-rank 2x2 lattices, |det| must equal the
        // number of distinct cosets of the column lattice in Z^2, counted by
        // brute-force reduction over a box.
        let cases: Vec<IntMatrix> = vec![
            m(&[&[1, 0], &[0, 1]]),
            m(&[&[2, 0], &[0, 1]]),
            m(&[&[2, 1], &[0, 2]]),
            m(&[&[1, 1], &[1, -1]]),
            m(&[&[3, 1], &[1, 3]]),
            m(&[&[2, 2], &[0, 4]]),
            m(&[&[5, 3], &[1, 2]]),
        ];
        for lat in cases {
            let det = lat.det().abs();
            let index: i64 = det.to_string().parse().unwrap();
            assert!(index >= 1 && index <= 16, "test intended for small indices");
            // Count cosets: reduce every vector in a box to a canonical
            // representative by subtracting lattice columns greedily; two
            // vectors collide iff their difference is in the lattice, which
            // we decide by integer solve.
            let mut reps: Vec<Vec<BigInt>> = Vec::new();
            for x in -4i64..=4 {
                'next: for y in -4i64..=4 {
                    let v = vec![BigInt::from(x), BigInt::from(y)];
                    for r in &reps {
                        let diff = vec![&v[0] - &r[0], &v[1] - &r[1]];
                        if solve_integer(&lat, &diff).is_some() {
                            continue 'next;
                        }
                    }
                    reps.push(v);
                }
            }
            assert_eq!(
                reps.len() as i64,
                index,
                "coset count disagrees with |det| for {lat:?}"
            );
        }
    }

    #[test]
    fn integer_solver_consistency() {
        // 1x2 system: z1 + 2 z2 = 5 has solutions; kernel is (2, -1)-spanned.
        let a = m(&[&[1, 2]]);
        let sol = solve_integer(&a, &[BigInt::from(5)]).unwrap();
        assert_eq!(a.mul_vec(&sol.particular), vec![BigInt::from(5)]);
        assert_eq!(sol.kernel.len(), 1);
        let k = &sol.kernel[0];
        assert_eq!(a.mul_vec(k), vec![BigInt::zero()]);
        // Kernel is saturated: entries coprime.
        assert_eq!(k[0].gcd(&k[1]), BigInt::one());

        // Inconsistent system.
        let b = m(&[&[2, 4]]);
        assert!(solve_integer(&b, &[BigInt::from(3)]).is_none());

        // Square invertible system.
        let c = m(&[&[1, 1], &[1, -1]]);
        let sol = solve_integer(&c, &[BigInt::from(2), BigInt::from(0)]).unwrap();
        assert_eq!(sol.particular, vec![BigInt::from(1), BigInt::from(1)]);
        assert!(sol.kernel.is_empty());
        assert!(solve_integer(&c, &[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn seeded_random_smith_roundtrip() {
        // Deterministic pseudo-random small matrices: U m V = S must hold
        // and the factors must divide in order.
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 13) as i64 - 6
        };
        for _ in 0..60 {
            let rows = 2 + (next().unsigned_abs() as usize % 2);
            let cols = 2 + (next().unsigned_abs() as usize % 2);
            let mut a = IntMatrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a[(i, j)] = BigInt::from(next());
                }
            }
            let sd = smith_with_transforms(&a);
            assert_eq!(sd.u.mul(&a).mul(&sd.v), sd.s);
            assert!(sd.u.mul(&sd.u_inv).is_identity());
            assert!(sd.v.mul(&sd.v_inv).is_identity());
            let f = sd.factors();
            for w in f.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {f:?}");
            }
        }
    }
}
