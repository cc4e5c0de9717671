//! Smith normal form of integer matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a `rows.len() x cols` matrix; `cols` is needed when there are
    /// no rows.
    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(row);
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
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

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let sum: i128 = (0..self.cols).map(|k| self[(i, k)] as i128 * other[(k, j)] as i128).sum();
                out[(i, j)] = narrow(sum);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| narrow(self.row(i).iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum()))
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m: Vec<Vec<i128>> =
            (0..n).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&i| m[i][k] != 0) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        if n == 0 {
            1
        } else {
            sign * m[n - 1][n - 1]
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, each nonzero
/// diagonal entry dividing the next. The inverses are tracked alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        (0..self.d.rows.min(self.d.cols)).take_while(|&i| self.d[(i, i)] != 0).count()
    }

    /// The nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.rank()).map(|i| self.d[(i, i)]).collect()
    }

    /// A Z-basis of `{ x : m * x = 0 }`: the columns of `v` past the rank.
    pub fn kernel_basis(&self) -> Vec<Vec<i64>> {
        (self.rank()..self.v.cols).map(|j| self.v.column(j)).collect()
    }
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).unwrap_or_else(|_| panic!("integer entry {x} does not fit in i64"))
}

/// Working matrix with wide entries; every update is overflow-checked.
#[derive(Clone)]
struct Wide {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl Wide {
    fn zeros(rows: usize, cols: usize) -> Self {
        Wide { rows, cols, data: vec![0; rows * cols] }
    }

    fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    fn from_int(m: &IntMatrix) -> Self {
        Wide { rows: m.rows, cols: m.cols, data: m.data.iter().map(|&x| x.into()).collect() }
    }

    fn to_int(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| narrow(x)).collect() }
    }

    fn at(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, x: i128) {
        self.data[i * self.cols + j] = x;
    }

    fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j));
            }
        }
        t
    }

    fn mul(&self, other: &Wide) -> Wide {
        assert_eq!(self.cols, other.rows);
        let mut out = Wide::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0i128;
                for k in 0..self.cols {
                    acc = checked(self.at(i, k).checked_mul(other.at(k, j)).and_then(|x| acc.checked_add(x)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// `diag(self, I)` of size `n`.
    fn extend(&self, n: usize) -> Wide {
        let mut out = Wide::identity(n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j));
            }
        }
        out
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

    fn axpy(&mut self, dst: usize, src: usize, k: i128) {
        let (x, y) = (self.data[src], self.data[dst]);
        self.data[dst] = checked(k.checked_mul(x).and_then(|kx| y.checked_add(kx)));
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i128) {
        for j in 0..self.cols {
            self.axpy(dst * self.cols + j, src * self.cols + j, k);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i128) {
        for i in 0..self.rows {
            self.axpy(i * self.cols + dst, i * self.cols + src, k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = -*x;
        }
    }
}

fn checked(x: Option<i128>) -> i128 {
    x.expect("integer overflow in Smith normal form")
}

/// Row Hermite normal form in place, with the same row operations applied
/// to `t`. Pivots are positive and the entries above each pivot lie in
/// `[0, pivot)`. Returns the pivot columns.
fn row_hermite(a: &mut Wide, t: &mut Wide) -> Vec<usize> {
    let op = |a: &mut Wide, t: &mut Wide, dst: usize, src: usize, k: i128| {
        a.add_row(dst, src, k);
        t.add_row(dst, src, k);
    };
    let mut pivots = Vec::new();
    for c in 0..a.cols {
        let p = pivots.len();
        if p == a.rows {
            break;
        }
        while let Some(b) = (p..a.rows).filter(|&i| a.at(i, c) != 0).min_by_key(|&i| a.at(i, c).abs()) {
            a.swap_rows(p, b);
            t.swap_rows(p, b);
            let mut done = true;
            for i in p + 1..a.rows {
                let q = a.at(i, c).div_euclid(a.at(p, c));
                if q != 0 {
                    op(a, t, i, p, -q);
                }
                done &= a.at(i, c) == 0;
            }
            if done {
                break;
            }
        }
        if a.at(p, c) == 0 {
            continue;
        }
        if a.at(p, c) < 0 {
            a.negate_row(p);
            t.negate_row(p);
        }
        for i in 0..p {
            let q = a.at(i, c).div_euclid(a.at(p, c));
            if q != 0 {
                op(a, t, i, p, -q);
            }
        }
        pivots.push(c);
    }
    pivots
}

/// Brings the rows of `t` from `rank` on into Hermite form and reduces the
/// rows above against them. When `t * a` vanishes on those rows this leaves
/// the product unchanged.
fn reduce_kernel_rows(t: &mut Wide, rank: usize) -> Vec<usize> {
    let mut k = Wide::zeros(t.rows - rank, t.cols);
    k.data.copy_from_slice(&t.data[rank * t.cols..]);
    let mut scratch = Wide::zeros(k.rows, 0);
    let pivots = row_hermite(&mut k, &mut scratch);
    t.data[rank * t.cols..].copy_from_slice(&k.data);
    reduce_against_kernel_rows(t, rank, &pivots);
    pivots
}

/// Reduces the rows above `rank` against the Hermite-form rows below it.
fn reduce_against_kernel_rows(t: &mut Wide, rank: usize, pivots: &[usize]) {
    for (r, &c) in pivots.iter().enumerate() {
        for i in 0..rank {
            let q = t.at(i, c).div_euclid(t.at(rank + r, c));
            if q != 0 {
                t.add_row(i, rank + r, -q);
            }
        }
    }
}

/// Exact inverse of a unimodular matrix: its Hermite form is the identity
/// and the accumulated transform is the inverse.
fn unimodular_inverse(m: &Wide) -> Wide {
    let mut a = m.clone();
    let mut t = Wide::identity(m.rows);
    row_hermite(&mut a, &mut t);
    assert!(a.data == Wide::identity(m.rows).data, "matrix is not unimodular");
    t
}

/// Diagonalizes a square nonsingular block by elimination with the smallest
/// nonzero pivot, returning `(d, u, v)` with `u * a * v = d`.
fn diagonalize(mut d: Wide) -> (Wide, Wide, Wide) {
    let n = d.rows;
    let (mut u, mut v) = (Wide::identity(n), Wide::identity(n));
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize, i128)> = None;
            for i in t..n {
                for j in t..n {
                    let x = d.at(i, j).abs();
                    if x != 0 && best.is_none_or(|(_, _, b)| x < b) {
                        best = Some((i, j, x));
                    }
                }
            }
            let (pi, pj, _) = best.expect("block is nonsingular");
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = d.at(t, t);
            let mut clean = true;
            for i in t + 1..n {
                let q = d.at(i, t).div_euclid(p);
                if q != 0 {
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                clean &= d.at(i, t) == 0;
            }
            for j in t + 1..n {
                let q = d.at(t, j).div_euclid(p);
                if q != 0 {
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                clean &= d.at(t, j) == 0;
            }
            if !clean {
                continue;
            }
            match (t + 1..n).find(|&i| (t + 1..n).any(|j| d.at(i, j) % p != 0)) {
                Some(i) => {
                    d.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if d.at(t, t) < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    (d, u, v)
}

/// Smith normal form. The column Hermite form `m * w = [h | 0]` splits off
/// the kernel, the row Hermite form `g * h = [h2; 0]` splits off the left
/// kernel, and the square triangular block `h2` is diagonalized last. Both
/// kernel blocks are kept in Hermite form, so the kernel basis is canonical.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut ht = Wide::from_int(m).transpose();
    let mut wt = Wide::identity(cols);
    let rank = row_hermite(&mut ht, &mut wt).len();
    let kernel_pivots = reduce_kernel_rows(&mut wt, rank);

    let h = ht.transpose();
    let mut h1 = Wide::zeros(rows, rank);
    for i in 0..rows {
        for j in 0..rank {
            h1.set(i, j, h.at(i, j));
        }
    }
    let mut g = Wide::identity(rows);
    row_hermite(&mut h1, &mut g);
    let left_pivots = reduce_kernel_rows(&mut g, rank);

    let mut h2 = Wide::zeros(rank, rank);
    h2.data.copy_from_slice(&h1.data[..rank * rank]);
    let (d2, u2, v2) = diagonalize(h2);

    let mut u = u2.extend(rows).mul(&g);
    reduce_against_kernel_rows(&mut u, rank, &left_pivots);
    let mut vt = v2.extend(cols).transpose().mul(&wt);
    reduce_against_kernel_rows(&mut vt, rank, &kernel_pivots);
    let v = vt.transpose();
    let mut d = Wide::zeros(rows, cols);
    for i in 0..rank {
        d.set(i, i, d2.at(i, i));
    }
    debug_assert!(u.mul(&Wide::from_int(m)).mul(&v).data == d.data);
    SnfResult {
        d: d.to_int(),
        u_inv: unimodular_inverse(&u).to_int(),
        v_inv: unimodular_inverse(&v).to_int(),
        u: u.to_int(),
        v: v.to_int(),
    }
}
