//! Dense exact linear algebra: rank, kernels and row reduction over `Q` or `F_p`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::field::{Field, FieldElem};

/// Row-major dense matrix over a single [`Field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<FieldElem>,
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have `cols` entries.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<FieldElem>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        ExactMatrix {
            rows: n,
            cols,
            field,
            data,
        }
    }

    pub fn from_i64(field: Field, rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        ExactMatrix {
            rows,
            cols,
            field,
            data: vals.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    /// Builds a matrix from column vectors of length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<FieldElem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
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

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        debug_assert!(self.field.contains(&v));
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElem::is_zero)
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &FieldElem) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        ExactMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            field: self.field,
            data,
        }
    }

    fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank over the matrix's field.
///
/// Over `Q` each row is scaled to integers and reduced with single-step Bareiss elimination,
/// so every intermediate entry is a minor of the input. Over `F_p` plain elimination is used.
pub fn rank(m: &ExactMatrix) -> usize {
    match m.field {
        Field::Rational => bareiss_rank(integer_rows(m)),
        Field::Prime(_) => echelon(&mut m.to_rows()).len(),
    }
}

/// Clears denominators row by row. Row scaling preserves rank.
fn integer_rows(m: &ExactMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let lcm = row.iter().fold(BigInt::one(), |acc, e| {
                let d = e.as_rational().expect("rational matrix").denom();
                acc.lcm(d)
            });
            row.iter()
                .map(|e| {
                    let q = e.as_rational().unwrap();
                    q.numer() * (&lcm / q.denom())
                })
                .collect()
        })
        .collect()
}

fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

/// In-place reduced row echelon form. Returns the pivot column of each nonzero row.
///
/// Pivots are the first nonzero entry in column order; no numerical pivoting.
pub fn rref_rows(rows: &mut Vec<Vec<FieldElem>>) -> Vec<usize> {
    if rows.first().is_some_and(|r| r.first().is_some_and(|e| e.field() == Field::Rational)) {
        return rational_rref(rows);
    }
    let pivots = echelon(rows);
    for (i, &c) in pivots.iter().enumerate().rev() {
        for k in 0..i {
            if rows[k][c].is_zero() {
                continue;
            }
            let f = rows[k][c].clone();
            let (upper, lower) = rows.split_at_mut(i);
            let src = &lower[0];
            for j in c..src.len() {
                if !src[j].is_zero() {
                    upper[k][j] = &upper[k][j] - &(&f * &src[j]);
                }
            }
        }
    }
    pivots
}

/// Rational reduced row echelon form through fraction-free Gauss-Jordan elimination on
/// integer rows. Every intermediate entry is a minor of the input, so the divisions are
/// exact, and at the end each pivot equals the last pivot `D`; one division by `D` per
/// entry gives the reduced form.
fn rational_rref(rows: &mut Vec<Vec<FieldElem>>) -> Vec<usize> {
    let ncols = rows[0].len();
    let m = ExactMatrix::from_rows(Field::Rational, ncols, std::mem::take(rows));
    let mut a = integer_rows(&m);
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    for c in 0..ncols {
        let r = pivots.len();
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        let pivot = &pivot_row[c];
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let lead = std::mem::take(&mut row[c]);
            for j in 0..ncols {
                if j == c {
                    continue;
                }
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot.clone();
        pivots.push(c);
    }
    a.truncate(pivots.len());
    *rows = a
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| FieldElem::Rat(BigRational::new(e, prev.clone())))
                .collect()
        })
        .collect();
    pivots
}

/// Row echelon form with unit pivots; zero rows are dropped.
fn echelon(rows: &mut Vec<Vec<FieldElem>>) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for j in c..ncols {
            if !rows[r][j].is_zero() {
                rows[r][j] = &rows[r][j] * &inv;
            }
        }
        let (top, rest) = rows.split_at_mut(r + 1);
        let src = &top[r];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..ncols {
                if !src[j].is_zero() {
                    row[j] = &row[j] - &(&f * &src[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{v : m v = 0}` as the columns of the returned matrix.
///
/// The basis is in reduced column echelon form: the first nonzero entry of each column
/// is 1, the rows holding those leading entries are as small as possible, and every other
/// column vanishes there.
pub fn right_kernel(m: &ExactMatrix) -> ExactMatrix {
    let field = m.field;
    let n = m.cols;
    let mut rows = m.to_rows();
    let pivots = rref_rows(&mut rows);
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis: Vec<Vec<FieldElem>> = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); n];
        v[free] = field.one();
        for (i, &pc) in pivots.iter().enumerate() {
            if !rows[i][free].is_zero() {
                v[pc] = -&rows[i][free];
            }
        }
        basis.push(v);
    }
    // Reducing the basis vectors as rows puts them in canonical form.
    rref_rows(&mut basis);
    ExactMatrix::from_columns(field, n, &basis)
}

/// Basis of `{w : w^T m = 0}`, as columns; same normalization as [`right_kernel`].
pub fn left_kernel(m: &ExactMatrix) -> ExactMatrix {
    right_kernel(&m.transpose())
}

/// Reduced row echelon basis of the row space.
pub fn row_space(m: &ExactMatrix) -> ExactMatrix {
    let mut rows = m.to_rows();
    rref_rows(&mut rows);
    ExactMatrix::from_rows(m.field, m.cols, rows)
}
