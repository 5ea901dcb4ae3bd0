//! Dense exact matrices: fraction-free determinants and minors, rational
//! inverses, and Smith normal form with retained row transforms.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Q, Z};

/// Square or rectangular integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Z>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Z::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Z::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = Z::from(*x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Z] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Principal submatrix on the given index set (in the given order).
    pub fn principal(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Z]) -> Vec<Z> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_qvec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Q::zero(), |acc, (a, b)| acc + b * a)
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += factor * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, factor: &Z) {
        for j in 0..self.cols {
            let t = &self[(src, j)] * factor;
            self[(dst, j)] += t;
        }
    }

    /// `col[dst] += factor * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, factor: &Z) {
        for i in 0..self.rows {
            let t = &self[(i, src)] * factor;
            self[(i, dst)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let t = -&self[(i, j)];
            self[(i, j)] = t;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let t = -&self[(i, j)];
            self[(i, j)] = t;
        }
    }

    /// Leading principal minors `M_1, ..., M_n` by Bareiss elimination without
    /// pivoting. Elimination stops at the first vanishing minor; the returned
    /// vector then ends with that zero.
    pub fn leading_minors(&self) -> Vec<Z> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut prev = Z::one();
        let mut minors = Vec::with_capacity(n);
        for k in 0..n {
            let pivot = a[(k, k)].clone();
            minors.push(pivot.clone());
            if pivot.is_zero() {
                break;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &pivot - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = pivot;
        }
        minors
    }

    /// Exact determinant by Bareiss elimination with row pivoting.
    pub fn determinant(&self) -> Z {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Z::one();
        }
        let mut a = self.clone();
        let mut prev = Z::one();
        let mut sign = Z::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Z::zero(),
                }
            }
            let pivot = a[(k, k)].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &pivot - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = pivot;
        }
        sign * &a[(n - 1, n - 1)]
    }

    /// Exact inverse over `Q`, or `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        RatMatrix::from_int(self).inverse()
    }

    /// Smith normal form `U * A * V = diag(d_1, ..., d_r, 0, ...)` with
    /// `d_1 | d_2 | ...`, all `d_i >= 0`. Only the row transform `U` and its
    /// inverse are retained.
    pub fn smith(&self) -> SmithForm {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut u = Self::identity(r);
        let mut u_inv = Self::identity(r);
        let steps = r.min(c);
        for k in 0..steps {
            // pivot: smallest nonzero magnitude in the trailing block
            let Some((pi, pj)) = min_nonzero(&a, k, k) else { break };
            a.swap_rows(k, pi);
            u.swap_rows(k, pi);
            u_inv.swap_cols(k, pi);
            a.swap_cols(k, pj);
            loop {
                let mut clean = true;
                for i in k + 1..r {
                    if a[(i, k)].is_zero() {
                        continue;
                    }
                    let q = a[(i, k)].div_floor(&a[(k, k)]);
                    let neg = -&q;
                    a.add_row(i, k, &neg);
                    u.add_row(i, k, &neg);
                    u_inv.add_col(k, i, &q);
                    if !a[(i, k)].is_zero() {
                        clean = false;
                    }
                }
                for j in k + 1..c {
                    if a[(k, j)].is_zero() {
                        continue;
                    }
                    let q = a[(k, j)].div_floor(&a[(k, k)]);
                    a.add_col(j, k, &-q);
                    if !a[(k, j)].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    // divisibility of the trailing block by the pivot
                    let bad = (k + 1..r).find(|&i| {
                        (k + 1..c).any(|j| !(&a[(i, j)] % &a[(k, k)]).is_zero())
                    });
                    match bad {
                        None => break,
                        Some(i) => {
                            let one = Z::one();
                            a.add_row(k, i, &one);
                            u.add_row(k, i, &one);
                            u_inv.add_col(i, k, &-one);
                            continue;
                        }
                    }
                }
                // move the smallest entry of row k / column k onto the pivot
                let mut best = (k, k);
                for i in k + 1..r {
                    if !a[(i, k)].is_zero() && a[(i, k)].abs() < a[best].abs() {
                        best = (i, k);
                    }
                }
                for j in k + 1..c {
                    if !a[(k, j)].is_zero() && a[(k, j)].abs() < a[best].abs() {
                        best = (k, j);
                    }
                }
                if best.0 != k {
                    a.swap_rows(k, best.0);
                    u.swap_rows(k, best.0);
                    u_inv.swap_cols(k, best.0);
                } else if best.1 != k {
                    a.swap_cols(k, best.1);
                }
            }
            if a[(k, k)].is_negative() {
                a.negate_row(k);
                u.negate_row(k);
                u_inv.negate_col(k);
            }
        }
        let diag = (0..steps).map(|i| a[(i, i)].clone()).collect();
        SmithForm { diag, left: u, left_inv: u_inv }
    }
}

fn min_nonzero(a: &IntMatrix, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in r0..a.rows {
        for j in c0..a.cols {
            if a[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|b| a[(i, j)].abs() < a[b].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Z;
    fn index(&self, (i, j): (usize, usize)) -> &Z {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Z {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of [`IntMatrix::smith`].
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal entries, nonnegative, each dividing the next nonzero one.
    pub diag: Vec<Z>,
    /// Unimodular row transform `U`.
    pub left: IntMatrix,
    /// `U^{-1}`.
    pub left_inv: IntMatrix,
}

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        Self {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().cloned().map(Q::from_integer).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn neg(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::zeros(n, n);
        for i in 0..n {
            inv[(i, i)] = Q::one();
        }
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero())?;
            if p != k {
                for j in 0..n {
                    a.data.swap(p * n + j, k * n + j);
                    inv.data.swap(p * n + j, k * n + j);
                }
            }
            let pivot = a[(k, k)].clone();
            for j in 0..n {
                a[(k, j)] = &a[(k, j)] / &pivot;
                inv[(k, j)] = &inv[(k, j)] / &pivot;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let t = &f * &a[(k, j)];
                    a[(i, j)] -= t;
                    let t = &f * &inv[(k, j)];
                    inv[(i, j)] -= t;
                }
            }
        }
        Some(inv)
    }

    /// Rank by exact elimination. Pivot choice prefers the entry with the
    /// smallest combined numerator/denominator bit size.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<Q>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        rank_of_rows(&mut rows, self.cols)
    }
}

fn bit_size(x: &Q) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Rank of the row set, destroying it in the process.
pub fn rank_of_rows(rows: &mut [Vec<Q>], cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let pivot = (rank..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| bit_size(&rows[i][col]));
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &prow[col];
            for j in col..cols {
                if !prow[j].is_zero() {
                    let t = &f * &prow[j];
                    row[j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form of an augmented system `M x = b` over `Q`.
/// Returns `None` if inconsistent, otherwise `(pivot columns, reduced rows)`
/// where each reduced row is `coeffs ++ [rhs]`.
pub fn solve_affine(m: &RatMatrix, b: &[Q]) -> Option<(Vec<usize>, Vec<Vec<Q>>)> {
    let cols = m.cols;
    let mut rows: Vec<Vec<Q>> = (0..m.rows)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pv = rows[rank][col].clone();
        for x in rows[rank].iter_mut() {
            *x = &*x / &pv;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    rows.truncate(rank);
    Some((pivots, rows))
}
