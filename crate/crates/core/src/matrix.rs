//! Dense matrices over GF(q) and the rank metric on them.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// An `rows x cols` matrix stored row-major. Carries no field; callers pass
/// the field to every arithmetic operation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Builds a matrix from small integers, reduced into the prime field.
    pub fn from_ints(rows: usize, cols: usize, data: &[u32]) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data: data.iter().map(|&v| Elem(v)).collect() }
    }

    /// The unit matrix with a single one at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        m.set(i, j, Elem::ONE);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Row-major entries.
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn check_field(&self, f: &Field) -> Result<()> {
        if self.data.iter().all(|&e| f.contains(e)) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    /// Entrywise sum. Panics on shape mismatch.
    pub fn add(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix shapes differ");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise difference. Panics on shape mismatch.
    pub fn sub(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix shapes differ");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub(crate) fn add_assign(&mut self, f: &Field, other: &Matrix) {
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, b);
        }
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Matrix {
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn map(&self, g: impl Fn(Elem) -> Elem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| g(a)).collect() }
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Rows `range` as a new matrix.
    pub fn row_slice(&self, range: std::ops::Range<usize>) -> Matrix {
        let data = self.data[range.start * self.cols..range.end * self.cols].to_vec();
        Matrix { rows: range.len(), cols: self.cols, data }
    }

    /// Appends `extra` zero rows below.
    pub fn pad_rows(&self, extra: usize) -> Matrix {
        let mut data = self.data.clone();
        data.resize((self.rows + extra) * self.cols, Elem::ZERO);
        Matrix { rows: self.rows + extra, cols: self.cols, data }
    }

    /// Adds row `i` to row `j`.
    pub fn add_row_to(&self, f: &Field, i: usize, j: usize) -> Matrix {
        let mut out = self.clone();
        for c in 0..self.cols {
            let v = f.add(self.get(j, c), self.get(i, c));
            out.set(j, c, v);
        }
        out
    }

    pub fn rank(&self, f: &Field) -> usize {
        let mut data = self.data.clone();
        rref_in_place(f, &mut data, self.rows, self.cols).len()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &Field) -> (Matrix, Vec<usize>) {
        let mut data = self.data.clone();
        let pivots = rref_in_place(f, &mut data, self.rows, self.cols);
        (Matrix { rows: self.rows, cols: self.cols, data }, pivots)
    }

    /// Basis of `{v : v * self = 0}`, in reduced echelon form.
    pub fn left_kernel(&self, f: &Field) -> Vec<Vec<Elem>> {
        self.transpose().right_kernel(f)
    }

    /// Basis of `{x : self * x = 0}`, in reduced echelon form.
    pub fn right_kernel(&self, f: &Field) -> Vec<Vec<Elem>> {
        let (r, pivots) = self.rref(f);
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis: Vec<Vec<Elem>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![Elem::ZERO; n];
                v[fc] = Elem::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, fc));
                }
                v
            })
            .collect();
        let rows = basis.len();
        let mut flat = basis.concat();
        let piv = rref_in_place(f, &mut flat, rows, n);
        basis = flat.chunks(n.max(1)).take(piv.len()).map(<[Elem]>::to_vec).collect();
        basis
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Vec::with_capacity(n * 2 * n);
        for i in 0..n {
            aug.extend_from_slice(self.row(i));
            aug.extend((0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
        }
        let pivots = rref_in_place(f, &mut aug, n, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug[i * 2 * n + n + j]);
            }
        }
        Some(out)
    }

    /// One line of space-separated entries, row-major.
    pub fn to_line(&self, f: &Field) -> String {
        let mut s = String::new();
        for (k, &e) in self.data.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{}", f.format_elem(e));
        }
        s
    }

    pub fn parse_line(f: &Field, rows: usize, cols: usize, line: &str) -> Result<Matrix> {
        let data = line.split_whitespace().map(|tok| f.parse_elem(tok)).collect::<Result<Vec<_>>>()?;
        if data.len() != rows * cols {
            return Err(Error::Parse(format!("expected {} entries, found {}", rows * cols, data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }
}

/// Gauss-Jordan elimination of a row-major block. Returns pivot columns; the
/// first `pivots.len()` rows hold the reduced basis, the rest are zero.
pub(crate) fn rref_in_place(f: &Field, data: &mut [Elem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(data[r * cols + c]).expect("pivot is nonzero");
        if inv != Elem::ONE {
            for j in c..cols {
                data[r * cols + j] = f.mul(data[r * cols + j], inv);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * cols + c];
            if factor.is_zero() {
                continue;
            }
            let nf = f.neg(factor);
            for j in c..cols {
                let v = f.add(data[i * cols + j], f.mul(nf, data[r * cols + j]));
                data[i * cols + j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn mat_rank(f: &Field, x: &Matrix) -> usize {
    x.rank(f)
}

/// `rank(Y - X)`.
pub fn rank_distance(f: &Field, x: &Matrix, y: &Matrix) -> Result<usize> {
    x.same_shape(y)?;
    x.check_field(f)?;
    y.check_field(f)?;
    Ok(y.sub(f, x).rank(f))
}

/// Vertical concatenation `[top; bottom]`.
pub fn stack(top: &Matrix, bottom: &Matrix) -> Result<Matrix> {
    if top.cols != bottom.cols {
        return Err(Error::ShapeMismatch(format!("column counts {} and {}", top.cols, bottom.cols)));
    }
    let mut data = top.data.clone();
    data.extend_from_slice(&bottom.data);
    Ok(Matrix { rows: top.rows + bottom.rows, cols: top.cols, data })
}

/// Every `rows x cols` matrix over `f`, in increasing row-major order.
pub fn all_matrices(f: &Field, rows: usize, cols: usize) -> Vec<Matrix> {
    let q = f.order() as usize;
    let len = rows * cols;
    let total = q.pow(len as u32);
    (0..total)
        .map(|mut idx| {
            let mut data = vec![Elem::ZERO; len];
            for k in (0..len).rev() {
                data[k] = Elem((idx % q) as u32);
                idx /= q;
            }
            Matrix { rows, cols, data }
        })
        .collect()
}
