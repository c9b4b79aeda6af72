//! Subspaces of GF(q)^N kept in canonical reduced echelon form.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{rref_in_place, Matrix};

pub type Vector = Vec<Elem>;

/// A subspace of `GF(q)^ambient`. Basis rows are the nonzero rows of the
/// reduced echelon form, so two subspaces are equal iff their bases are.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis == other.basis
    }
}

impl Eq for Subspace {}

pub fn add_vec(f: &Field, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn sub_vec(f: &Field, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn scale_vec(f: &Field, c: Elem, a: &[Elem]) -> Vector {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

/// `sum_i coeffs[i] * vectors[i]`.
pub fn combine(f: &Field, coeffs: &[Elem], vectors: &[Vector], len: usize) -> Vector {
    let mut out = vec![Elem::ZERO; len];
    for (&c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(v) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

/// Calls `visit` with every coefficient tuple of length `k` over `f`, in
/// lexicographic order (first coordinate most significant).
pub fn for_each_tuple(f: &Field, k: usize, mut visit: impl FnMut(&[Elem])) {
    let q = f.order();
    let mut t = vec![Elem::ZERO; k];
    loop {
        visit(&t);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if t[i].0 + 1 < q {
                t[i] = Elem(t[i].0 + 1);
                break;
            }
            t[i] = Elem::ZERO;
        }
    }
}

impl Subspace {
    pub fn zero(field: &Field, ambient: usize) -> Subspace {
        Subspace { field: field.clone(), ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &Field, ambient: usize) -> Subspace {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![Elem::ZERO; ambient];
                v[i] = Elem::ONE;
                v
            })
            .collect();
        Subspace { field: field.clone(), ambient, basis, pivots: (0..ambient).collect() }
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn span(field: &Field, ambient: usize, vectors: &[Vector]) -> Result<Subspace> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        let rows = vectors.len();
        let mut flat = vectors.concat();
        let pivots = rref_in_place(field, &mut flat, rows, ambient);
        let basis = (0..pivots.len()).map(|i| flat[i * ambient..(i + 1) * ambient].to_vec()).collect();
        Ok(Subspace { field: field.clone(), ambient, basis, pivots })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_vec(self.dim(), self.ambient, self.basis.concat()).expect("consistent shape")
    }

    /// Canonical representative of `v + self`: zero at every pivot column.
    pub fn reduce(&self, v: &[Elem]) -> Vector {
        let f = &self.field;
        let mut out = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = out[pc];
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for (o, &x) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(nc, x));
            }
        }
        out
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        v.len() == self.ambient && self.reduce(v).iter().all(|e| e.is_zero())
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the space.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(&self.field, self.ambient, &vs)
    }

    /// Intersection through the kernel of the stacked system `[U; V]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(&self.field, self.ambient));
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        let stacked = Matrix::from_rows(&rows)?;
        let relations = stacked.left_kernel(&self.field);
        let vectors: Vec<Vector> =
            relations.iter().map(|rel| combine(&self.field, &rel[..self.dim()], &self.basis, self.ambient)).collect();
        Subspace::span(&self.field, self.ambient, &vectors)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!("ambient dimensions {} and {}", self.ambient, other.ambient)));
        }
        Ok(())
    }

    /// Standard basis vectors, scanned in index order, that extend `self` to a
    /// space of dimension `target` inside `within` (or the whole ambient space).
    pub fn extend_to_dim(&self, target: usize, within: Option<&Subspace>) -> Result<Vec<Vector>> {
        let bound = within.map_or(self.ambient, Subspace::dim);
        if target < self.dim() || target > bound {
            return Err(Error::DimensionMismatch(format!("cannot extend dimension {} to {target}", self.dim())));
        }
        if let Some(w) = within {
            self.check_ambient(w)?;
            if !self.is_subspace_of(w) {
                return Err(Error::NotASubspace);
            }
        }
        let mut current = self.clone();
        let mut extra = Vec::new();
        // Candidates: unit vectors when extending in the ambient space,
        // otherwise the echelon basis of `within`.
        let candidates: Vec<Vector> = match within {
            None => Subspace::full(&self.field, self.ambient).basis,
            Some(w) => w.basis.clone(),
        };
        for c in candidates {
            if current.dim() == target {
                break;
            }
            if !current.contains(&c) {
                let mut vs = current.basis.clone();
                vs.push(c.clone());
                current = Subspace::span(&self.field, self.ambient, &vs)?;
                extra.push(c);
            }
        }
        Ok(extra)
    }

    /// Vectors completing a basis of `self` to a basis of `v` (requires self ⊆ v).
    pub fn complete_basis(&self, v: &Subspace) -> Result<Vec<Vector>> {
        self.extend_to_dim(v.dim(), Some(v))
    }

    /// Representatives of `v / self`, one per coset, in lexicographic order of
    /// their coefficients over the completion vectors.
    pub fn coset_reps(&self, v: &Subspace) -> Result<Vec<Vector>> {
        let comp = self.complete_basis(v)?;
        let mut reps = Vec::new();
        for_each_tuple(&self.field, comp.len(), |c| {
            reps.push(combine(&self.field, c, &comp, self.ambient));
        });
        Ok(reps)
    }

    /// All `q^dim` vectors of the space.
    pub fn members(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        for_each_tuple(&self.field, self.dim(), |c| {
            out.push(combine(&self.field, c, &self.basis, self.ambient));
        });
        out
    }
}

/// Coordinates with respect to an arbitrary (not echelon) basis.
#[derive(Clone, Debug)]
pub struct BasisCoords {
    field: Field,
    span: Subspace,
    /// `transform * basis = echelon basis`, `dim x dim`.
    transform: Vec<Vector>,
}

impl BasisCoords {
    /// Fails with `NotABasis` when the vectors are dependent.
    pub fn new(field: &Field, ambient: usize, basis: &[Vector]) -> Result<BasisCoords> {
        let k = basis.len();
        if basis.iter().any(|b| b.len() != ambient) {
            return Err(Error::DimensionMismatch("basis vector length".into()));
        }
        let w = ambient + k;
        let mut flat = Vec::with_capacity(k * w);
        for (i, b) in basis.iter().enumerate() {
            flat.extend_from_slice(b);
            flat.extend((0..k).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
        }
        let pivots = rref_in_place(field, &mut flat, k, w);
        if pivots.iter().filter(|&&p| p < ambient).count() < k {
            return Err(Error::NotABasis);
        }
        let echelon: Vec<Vector> = (0..k).map(|i| flat[i * w..i * w + ambient].to_vec()).collect();
        let transform = (0..k).map(|i| flat[i * w + ambient..(i + 1) * w].to_vec()).collect();
        let span =
            Subspace { field: field.clone(), ambient, basis: echelon, pivots: pivots.into_iter().take(k).collect() };
        Ok(BasisCoords { field: field.clone(), span, transform })
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    /// `c` with `sum_j c[j] * basis[j] = v`, if `v` is in the span.
    pub fn coords(&self, v: &[Elem]) -> Option<Vector> {
        let echelon = self.span.coordinates(v)?;
        let k = self.transform.len();
        Some(combine(&self.field, &echelon, &self.transform, k))
    }
}

/// Gaussian binomial coefficient: number of k-dimensional subspaces of GF(q)^n.
pub fn gaussian_binomial(q: u64, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Every k-dimensional subspace of `GF(q)^n`, ordered by pivot set
/// (lexicographic) and then by the free entries.
pub fn enumerate_subspaces(f: &Field, n: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // Free positions: row r, columns after its pivot that are not pivots.
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pv = pivots.clone();
                (pivots[r] + 1..n).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        for_each_tuple(f, free.len(), |vals| {
            let mut basis = vec![vec![Elem::ZERO; n]; k];
            for (r, &pc) in pivots.iter().enumerate() {
                basis[r][pc] = Elem::ONE;
            }
            for (&(r, c), &v) in free.iter().zip(vals) {
                basis[r][c] = v;
            }
            out.push(Subspace { field: f.clone(), ambient: n, basis, pivots: pivots.clone() });
        });
        // Next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}
