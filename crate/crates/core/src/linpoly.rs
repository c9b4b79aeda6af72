//! Linearized polynomials `L(x) = sum c_i x^(q^i)` over GF(q^m), kept reduced
//! modulo `x^(q^m) - x` so that equality of maps is equality of coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::matrix::Matrix;
use crate::subspace::{BasisCoords, Subspace, Vector};
use crate::tower::Extension;

#[derive(Clone, PartialEq, Eq)]
pub struct LinPoly {
    ext: Extension,
    /// Exactly `m` coefficients; index i is the coefficient of `x^(q^i)`.
    coeffs: Vec<Elem>,
}

impl fmt::Debug for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl LinPoly {
    /// Folds exponents modulo m: coefficient `i` lands at `i mod m`.
    pub fn new(ext: &Extension, coeffs: &[Elem]) -> LinPoly {
        let big = ext.big();
        let m = ext.m();
        let mut folded = vec![Elem::ZERO; m];
        for (i, &c) in coeffs.iter().enumerate() {
            folded[i % m] = big.add(folded[i % m], c);
        }
        LinPoly { ext: ext.clone(), coeffs: folded }
    }

    pub fn zero(ext: &Extension) -> LinPoly {
        LinPoly { ext: ext.clone(), coeffs: vec![Elem::ZERO; ext.m()] }
    }

    /// The identity map `x`.
    pub fn identity(ext: &Extension) -> LinPoly {
        Self::monomial(ext, Elem::ONE, 0)
    }

    /// `c * x^(q^i)`.
    pub fn monomial(ext: &Extension, c: Elem, i: usize) -> LinPoly {
        let mut p = Self::zero(ext);
        p.coeffs[i % ext.m()] = c;
        p
    }

    pub fn ext(&self) -> &Extension {
        &self.ext
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs[i % self.coeffs.len()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Highest i with a nonzero coefficient; `None` for the zero polynomial.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let big = self.ext.big();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Elem::ZERO, |acc, (i, &c)| big.add(acc, big.mul(c, self.ext.frobenius(x, i as i64))))
    }

    pub fn eval_checked(&self, x: Elem) -> Result<Elem> {
        if !self.ext.big().contains(x) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.eval(x))
    }

    fn same_ext(&self, other: &LinPoly) -> Result<()> {
        if self.ext != other.ext {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &LinPoly) -> Result<LinPoly> {
        self.same_ext(other)?;
        let big = self.ext.big();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| big.add(a, b)).collect();
        Ok(LinPoly { ext: self.ext.clone(), coeffs })
    }

    pub fn sub(&self, other: &LinPoly) -> Result<LinPoly> {
        self.same_ext(other)?;
        let big = self.ext.big();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| big.sub(a, b)).collect();
        Ok(LinPoly { ext: self.ext.clone(), coeffs })
    }

    /// `c * L(x)`.
    pub fn scale(&self, c: Elem) -> LinPoly {
        let big = self.ext.big();
        LinPoly { ext: self.ext.clone(), coeffs: self.coeffs.iter().map(|&a| big.mul(c, a)).collect() }
    }

    /// `self ∘ inner`, using `(c x^(q^i)) ∘ (c' x^(q^j)) = c c'^(q^i) x^(q^(i+j))`.
    pub fn compose(&self, inner: &LinPoly) -> Result<LinPoly> {
        self.same_ext(inner)?;
        let big = self.ext.big();
        let m = self.ext.m();
        let mut out = vec![Elem::ZERO; m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in inner.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let term = big.mul(a, self.ext.frobenius(b, i as i64));
                out[(i + j) % m] = big.add(out[(i + j) % m], term);
            }
        }
        Ok(LinPoly { ext: self.ext.clone(), coeffs: out })
    }

    /// Monic subspace polynomial of `w` (a GF(q)-subspace in coordinates),
    /// built one basis vector at a time:
    /// `A_{V+<u>} = A_V^q - A_V(u)^(q-1) A_V`.
    /// The whole space yields the zero map.
    pub fn annihilator(ext: &Extension, w: &Subspace) -> Result<LinPoly> {
        if w.ambient() != ext.m() {
            return Err(Error::DimensionMismatch(format!(
                "subspace of dimension-{} space inside GF(q^{})",
                w.ambient(),
                ext.m()
            )));
        }
        let big = ext.big();
        let frob = Self::monomial(ext, Elem::ONE, 1);
        let mut a = Self::identity(ext);
        for u in ext.elems_of(w) {
            let au = a.eval(u);
            let factor = big.pow(au, (ext.q() - 1) as u64);
            a = frob.compose(&a)?.sub(&a.scale(factor))?;
        }
        Ok(a)
    }

    /// Matrix whose row i holds the GF(q)-coordinates of `L(b_i)` for the
    /// canonical basis `b`.
    fn coordinate_matrix(&self) -> Matrix {
        let rows: Vec<Vector> = self.ext.basis().iter().map(|&b| self.ext.coords(self.eval(b))).collect();
        Matrix::from_rows(&rows).expect("rows have length m")
    }

    /// `{x : L(x) = 0}` as a GF(q)-subspace of coordinate vectors.
    pub fn kernel(&self) -> Subspace {
        let k = self.coordinate_matrix().left_kernel(self.ext.base());
        Subspace::span(self.ext.base(), self.ext.m(), &k).expect("length m")
    }

    pub fn image(&self) -> Subspace {
        let rows = self.ext.basis().iter().map(|&b| self.ext.coords(self.eval(b))).collect::<Vec<_>>();
        Subspace::span(self.ext.base(), self.ext.m(), &rows).expect("length m")
    }

    /// Reduced echelon basis of the image, as field elements.
    pub fn image_basis(&self) -> Vec<Elem> {
        self.ext.elems_of(&self.image())
    }

    /// Rank of the evaluation map over GF(q).
    pub fn rank(&self) -> usize {
        self.ext.m() - self.kernel().dim()
    }

    /// Matrix `M` with `L(domain[i]) = sum_j M[i][j] image_basis[j]`, for any
    /// list of domain points.
    pub fn evaluation_matrix(&self, domain: &[Elem], image_basis: &[Elem]) -> Result<Matrix> {
        let base = self.ext.base();
        let fvecs: Vec<Vector> = image_basis.iter().map(|&f| self.ext.coords(f)).collect();
        let solver = BasisCoords::new(base, self.ext.m(), &fvecs)?;
        let mut data = Vec::with_capacity(domain.len() * image_basis.len());
        for &e in domain {
            let c = solver.coords(&self.ext.coords(self.eval(e))).ok_or(Error::ImageNotContained)?;
            data.extend(c);
        }
        Matrix::from_vec(domain.len(), image_basis.len(), data)
    }

    /// The m x n matrix of `L` with respect to a domain basis of GF(q^m) and a
    /// basis of a subspace containing the image.
    pub fn to_matrix(&self, domain_basis: &[Elem], image_basis: &[Elem]) -> Result<Matrix> {
        let dvecs: Vec<Vector> = domain_basis.iter().map(|&e| self.ext.coords(e)).collect();
        if domain_basis.len() != self.ext.m() {
            return Err(Error::NotABasis);
        }
        BasisCoords::new(self.ext.base(), self.ext.m(), &dvecs)?;
        self.evaluation_matrix(domain_basis, image_basis)
    }

    /// `B` with `B ∘ divisor = self`, by cancelling leading terms from the left.
    pub fn right_divide(&self, divisor: &LinPoly) -> Result<LinPoly> {
        self.same_ext(divisor)?;
        let big = self.ext.big();
        let k1 = divisor.q_degree().ok_or(Error::NotDivisible)?;
        let lead = divisor.coeffs[k1];
        let mut rem = self.clone();
        let mut quotient = Self::zero(&self.ext);
        while let Some(k) = rem.q_degree() {
            if k < k1 {
                return Err(Error::NotDivisible);
            }
            let shift = k - k1;
            let c = big.div(rem.coeffs[k], self.ext.frobenius(lead, shift as i64))?;
            let term = Self::monomial(&self.ext, c, shift);
            quotient = quotient.add(&term)?;
            rem = rem.sub(&term.compose(divisor)?)?;
        }
        if quotient.compose(divisor)? != *self {
            return Err(Error::NotDivisible);
        }
        Ok(quotient)
    }

    /// `Tr_{q^m/q^s}` as `x + x^(q^s) + ... + x^(q^(m-s))`.
    pub fn trace_poly(ext: &Extension, s: usize) -> Result<LinPoly> {
        if s == 0 || !ext.m().is_multiple_of(s) {
            return Err(Error::NotASubfield { sub: s, ext: ext.m() });
        }
        let mut coeffs = vec![Elem::ZERO; ext.m()];
        for i in (0..ext.m()).step_by(s) {
            coeffs[i] = Elem::ONE;
        }
        Ok(LinPoly { ext: ext.clone(), coeffs })
    }

    /// `q-poly: c0;c1;...;ck` up to the q-degree.
    pub fn to_text(&self) -> String {
        let top = self.q_degree().unwrap_or(0);
        let parts: Vec<String> = self.coeffs[..=top].iter().map(|&c| self.ext.big().format_elem(c)).collect();
        format!("q-poly: {}", parts.join(";"))
    }

    pub fn parse_text(ext: &Extension, s: &str) -> Result<LinPoly> {
        let body = s
            .trim()
            .strip_prefix("q-poly:")
            .ok_or_else(|| Error::Parse(format!("missing `q-poly:` prefix in `{s}`")))?;
        let coeffs = body.split(';').map(|c| ext.big().parse_elem(c)).collect::<Result<Vec<_>>>()?;
        if coeffs.len() > ext.m() {
            return Err(Error::Parse(format!("q-degree {} not reduced", coeffs.len() - 1)));
        }
        Ok(LinPoly::new(ext, &coeffs))
    }
}
