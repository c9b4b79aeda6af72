//! Maximum-diameter sets (anticodes) of the bilinear forms graph and the
//! definition-level MRD check built on them.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;
use crate::subspace::{enumerate_subspaces, for_each_tuple, gaussian_binomial, Subspace};

/// Default cap on anticode membership checks.
pub const ANTICODE_CAP: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AnticodeKind {
    /// `{X0 + Y K}`: rows of `X - X0` lie in the row space of `K`.
    Column,
    /// `{X0 + L Y}`: columns of `X - X0` lie in the column space of `L`.
    Row,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Anticode {
    pub kind: AnticodeKind,
    /// Canonical coset representative: reduced against the generating space.
    pub offset: Matrix,
    /// `n' x n` in reduced echelon form for column kind, `m x n'` with
    /// reduced echelon transpose for row kind.
    pub generator: Matrix,
    pub diameter: usize,
}

fn space_of(f: &Field, kind: AnticodeKind, generator: &Matrix) -> Subspace {
    let g = match kind {
        AnticodeKind::Column => generator.clone(),
        AnticodeKind::Row => generator.transpose(),
    };
    let rows: Vec<Vec<Elem>> = (0..g.rows()).map(|i| g.row(i).to_vec()).collect();
    Subspace::span(f, g.cols(), &rows).expect("generator shape")
}

/// Reduces every row (column kind) or column (row kind) of `x` modulo `s`.
fn label(kind: AnticodeKind, s: &Subspace, x: &Matrix) -> Matrix {
    match kind {
        AnticodeKind::Column => {
            let rows: Vec<Vec<Elem>> = (0..x.rows()).map(|i| s.reduce(x.row(i))).collect();
            Matrix::from_rows(&rows).expect("same shape")
        }
        AnticodeKind::Row => label(AnticodeKind::Column, s, &x.transpose()).transpose(),
    }
}

impl Anticode {
    pub fn new(f: &Field, kind: AnticodeKind, offset: &Matrix, generator: &Matrix) -> Result<Anticode> {
        let s = space_of(f, kind, generator);
        let (lines, width) = match kind {
            AnticodeKind::Column => (generator.rows(), offset.cols()),
            AnticodeKind::Row => (generator.cols(), offset.rows()),
        };
        if s.dim() != lines || s.ambient() != width {
            return Err(Error::NotABasis);
        }
        if kind == AnticodeKind::Row && offset.rows() != offset.cols() {
            return Err(Error::ShapeMismatch("row-kind anticodes need square matrices".into()));
        }
        let gen = match kind {
            AnticodeKind::Column => s.basis_matrix(),
            AnticodeKind::Row => s.basis_matrix().transpose(),
        };
        Ok(Anticode { kind, offset: label(kind, &s, offset), generator: gen, diameter: s.dim() })
    }

    pub fn contains(&self, f: &Field, x: &Matrix) -> bool {
        x.shape() == self.offset.shape() && label(self.kind, &space_of(f, self.kind, &self.generator), x) == self.offset
    }

    pub fn cardinality(&self, q: u32) -> u128 {
        let side = match self.kind {
            AnticodeKind::Column => self.offset.rows(),
            AnticodeKind::Row => self.offset.cols(),
        };
        (q as u128).pow((side * self.diameter) as u32)
    }

    pub fn members(&self, f: &Field) -> Vec<Matrix> {
        let (m, n) = self.offset.shape();
        let k = self.diameter;
        let mut out = Vec::new();
        match self.kind {
            AnticodeKind::Column => for_each_tuple(f, m * k, |y| {
                let y = Matrix::from_vec(m, k, y.to_vec()).expect("shape");
                out.push(self.offset.add(f, &y.mul(f, &self.generator).expect("shape")));
            }),
            AnticodeKind::Row => for_each_tuple(f, k * n, |y| {
                let y = Matrix::from_vec(k, n, y.to_vec()).expect("shape");
                out.push(self.offset.add(f, &self.generator.mul(f, &y).expect("shape")));
            }),
        }
        out.sort_unstable();
        out
    }
}

/// Number of anticodes of diameter `n'` in `B_q(m,n)` and the total number
/// of membership checks needed to enumerate them.
pub fn anticode_count(q: u32, m: usize, n: usize, diam: usize) -> (u128, u128) {
    let spaces = gaussian_binomial(q as u64, n, diam);
    let cosets = (q as u128).checked_pow((m * (n - diam)) as u32).unwrap_or(u128::MAX);
    let mut count = spaces.saturating_mul(cosets);
    if m == n && diam > 0 {
        count = count.saturating_mul(2);
    }
    let size = (q as u128).checked_pow((m * diam) as u32).unwrap_or(u128::MAX);
    (count, count.saturating_mul(size))
}

fn check_diameter(m: usize, n: usize, diam: usize) -> Result<()> {
    if diam >= n || n > m {
        return Err(Error::InvalidParams(format!("need n' < n <= m, got n'={diam} n={n} m={m}")));
    }
    Ok(())
}

/// Offsets of the anticodes with generating space `s`, in increasing order.
fn offsets(f: &Field, kind: AnticodeKind, s: &Subspace, m: usize, n: usize) -> Vec<Matrix> {
    let free: Vec<usize> = (0..s.ambient()).filter(|c| !s.pivots().contains(c)).collect();
    let (lines, width) = match kind {
        AnticodeKind::Column => (m, n),
        AnticodeKind::Row => (n, m),
    };
    let positions: Vec<(usize, usize)> = (0..lines).flat_map(|i| free.iter().map(move |&c| (i, c))).collect();
    let mut out = Vec::new();
    for_each_tuple(f, positions.len(), |vals| {
        let mut x = Matrix::zeros(lines, width);
        for (&(i, c), &v) in positions.iter().zip(vals) {
            x.set(i, c, v);
        }
        out.push(match kind {
            AnticodeKind::Column => x,
            AnticodeKind::Row => x.transpose(),
        });
    });
    out.sort_unstable();
    out
}

/// All anticodes of diameter `n'` in `B_q(m,n)`, `n <= m`: column kind, then
/// (for `m = n`) row kind.
pub fn enumerate_anticodes(f: &Field, m: usize, n: usize, diam: usize, cap: u128) -> Result<Vec<Anticode>> {
    check_diameter(m, n, diam)?;
    let (_, needed) = anticode_count(f.order(), m, n, diam);
    if needed > cap {
        return Err(Error::TooLarge { what: "anticode membership checks", needed, cap });
    }
    let mut kinds = vec![AnticodeKind::Column];
    if m == n && diam > 0 {
        kinds.push(AnticodeKind::Row);
    }
    let mut out = Vec::new();
    for kind in kinds {
        for s in enumerate_subspaces(f, n, diam) {
            let generator = match kind {
                AnticodeKind::Column => s.basis_matrix(),
                AnticodeKind::Row => s.basis_matrix().transpose(),
            };
            for offset in offsets(f, kind, &s, m, n) {
                out.push(Anticode { kind, offset, generator: generator.clone(), diameter: diam });
            }
        }
    }
    Ok(out)
}

/// Intersects `b` with the matrices supported on the first `rows` rows,
/// returned as an anticode of `B_q(rows, n)`.
pub fn anticode_restrict(f: &Field, b: &Anticode, rows: usize) -> Result<Option<Anticode>> {
    let (m, n) = b.offset.shape();
    if rows < n || rows > m {
        return Err(Error::BadRowCount { rows, lo: n, hi: m });
    }
    match b.kind {
        AnticodeKind::Column => {
            let s = space_of(f, b.kind, &b.generator);
            let x0 = label(b.kind, &s, &b.offset);
            if !x0.row_slice(rows..m).is_zero() {
                return Ok(None);
            }
            Ok(Some(Anticode {
                kind: AnticodeKind::Column,
                offset: x0.row_slice(0..rows),
                generator: b.generator.clone(),
                diameter: b.diameter,
            }))
        }
        // Row kind exists only for m = n, so rows = m and nothing is cut.
        AnticodeKind::Row => Ok(Some(b.clone())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnticodeVerdict {
    pub mrd: bool,
    pub anticodes_checked: u128,
}

/// The definition of MRD: every `(d-1)`-anticode meets `C` in exactly one
/// codeword. Codes with `m < n` are checked in transposed form.
pub fn verify_mrd_by_anticodes(c: &RankCode, cap: u128) -> Result<AnticodeVerdict> {
    let p = c.params();
    let f = c.field();
    let transpose = p.m < p.n;
    let (m, n) = if transpose { (p.n, p.m) } else { (p.m, p.n) };
    let diam = p.d - 1;
    let (count, needed) = anticode_count(p.q, m, n, diam);
    if needed > cap {
        return Err(Error::TooLarge { what: "anticode membership checks", needed, cap });
    }
    let words: Vec<Matrix> = c.members()?.into_iter().map(|x| if transpose { x.transpose() } else { x }).collect();
    let mut kinds = vec![AnticodeKind::Column];
    if m == n && diam > 0 {
        kinds.push(AnticodeKind::Row);
    }
    let spaces = enumerate_subspaces(f, n, diam);
    let tasks: Vec<(AnticodeKind, &Subspace)> =
        kinds.iter().flat_map(|&k| spaces.iter().map(move |s| (k, s))).collect();
    let per_coset = (p.q as u128).pow((m * (n - diam)) as u32);
    // Each generating space partitions the matrices into anticodes labelled
    // by their reduced offset; C is MRD iff every label is hit exactly once.
    let ok = tasks.par_iter().all(|&(kind, s)| {
        if words.len() as u128 != per_coset {
            return false;
        }
        let mut hits: HashMap<Matrix, u32> = HashMap::with_capacity(words.len());
        for x in &words {
            let e = hits.entry(label(kind, s, x)).or_insert(0);
            *e += 1;
            if *e > 1 {
                return false;
            }
        }
        hits.len() as u128 == per_coset
    });
    Ok(AnticodeVerdict { mrd: ok, anticodes_checked: count })
}
