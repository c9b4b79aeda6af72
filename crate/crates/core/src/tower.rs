//! GF(q^m) viewed as an m-dimensional space over GF(q), with relative
//! Frobenius, trace and norm maps and its intermediate subfields.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{prime_power, Elem, Field};
use crate::matrix::Matrix;
use crate::subspace::{Subspace, Vector};

/// A ring embedding GF(p^s) -> GF(p^t), s | t, given by a root of the source
/// modulus in the target (the smallest such root in packed order).
#[derive(Clone)]
pub struct TowerEmbedding {
    source: Field,
    target: Field,
    /// Images of the source polynomial basis `1, t, ..., t^(s-1)`.
    images: Vec<Elem>,
    section: Arc<HashMap<Elem, Elem>>,
}

impl fmt::Debug for TowerEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TowerEmbedding")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("images", &self.images)
            .finish()
    }
}

fn eval_prime_poly(f: &Field, coeffs: &[u32], x: Elem) -> Elem {
    coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), Elem(c)))
}

impl TowerEmbedding {
    pub fn new(source: &Field, target: &Field) -> Result<TowerEmbedding> {
        let (s, t) = (source.degree() as usize, target.degree() as usize);
        if source.characteristic() != target.characteristic() || t % s != 0 {
            return Err(Error::NotASubfield { sub: s, ext: t });
        }
        let root = target
            .elements()
            .find(|&y| eval_prime_poly(target, source.modulus(), y).is_zero())
            .ok_or(Error::NotASubfield { sub: s, ext: t })?;
        let mut images = Vec::with_capacity(s);
        let mut pw = Elem::ONE;
        for _ in 0..s {
            images.push(pw);
            pw = target.mul(pw, root);
        }
        let mut emb = TowerEmbedding {
            source: source.clone(),
            target: target.clone(),
            images,
            section: Arc::new(HashMap::new()),
        };
        let section: HashMap<Elem, Elem> = source.elements().map(|x| (emb.embed(x), x)).collect();
        emb.section = Arc::new(section);
        Ok(emb)
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn embed(&self, x: Elem) -> Elem {
        let t = &self.target;
        self.source
            .coords(x)
            .iter()
            .zip(&self.images)
            .fold(Elem::ZERO, |acc, (&c, &img)| t.add(acc, t.mul(Elem(c), img)))
    }

    /// Inverse of [`TowerEmbedding::embed`] on its image.
    pub fn section(&self, y: Elem) -> Result<Elem> {
        self.section.get(&y).copied().ok_or(Error::NotInImage)
    }

    /// The embedded copy of the source field, sorted.
    pub fn image(&self) -> Vec<Elem> {
        let mut v: Vec<Elem> = self.section.keys().copied().collect();
        v.sort();
        v
    }
}

struct ExtensionInner {
    base: Field,
    big: Field,
    m: usize,
    q: u32,
    base_embedding: TowerEmbedding,
    /// GF(q)-basis `1, t, ..., t^(m-1)` of the big field.
    basis: Vec<Elem>,
    /// Inverse of the GF(p) change of basis from packed coordinates to
    /// (basis index, base coordinate) pairs, row-major `E x E`.
    to_relative: Vec<u32>,
}

/// GF(q^m) as a vector space over GF(q).
#[derive(Clone)]
pub struct Extension(Arc<ExtensionInner>);

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) over {:?}", self.q(), self.m(), self.base())
    }
}

impl PartialEq for Extension {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.big == other.0.big && self.0.base == other.0.base)
    }
}

impl Eq for Extension {}

fn invert_mod_p(a: &[u32], n: usize, p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut aug = vec![0u32; n * 2 * n];
    for i in 0..n {
        for j in 0..n {
            aug[i * 2 * n + j] = a[i * n + j];
        }
        aug[i * 2 * n + n + i] = 1;
    }
    let w = 2 * n;
    for c in 0..n {
        let pr = (c..n).find(|&r| aug[r * w + c] != 0).expect("change of basis is invertible");
        for j in 0..w {
            aug.swap(pr * w + j, c * w + j);
        }
        let inv = {
            let (mut b, mut e, mut acc) = (aug[c * w + c] as u64, p64 - 2, 1u64);
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b % p64;
                }
                b = b * b % p64;
                e >>= 1;
            }
            acc
        };
        for j in 0..w {
            aug[c * w + j] = (aug[c * w + j] as u64 * inv % p64) as u32;
        }
        for r in 0..n {
            if r == c || aug[r * w + c] == 0 {
                continue;
            }
            let factor = aug[r * w + c] as u64;
            for j in 0..w {
                let v = (aug[r * w + j] as u64 + (p64 - factor) * aug[c * w + j] as u64) % p64;
                aug[r * w + j] = v as u32;
            }
        }
    }
    (0..n).flat_map(|i| aug[i * w + n..(i + 1) * w].to_vec()).collect()
}

impl Extension {
    /// GF(q^m) over GF(q), both with default moduli.
    pub fn new(q: u32, m: usize) -> Result<Extension> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrime(q))?;
        let base = Field::new(p, e, None)?;
        let big = Field::new(p, e * m as u32, None)?;
        Extension::from_fields(&base, &big)
    }

    pub fn from_fields(base: &Field, big: &Field) -> Result<Extension> {
        let e = base.degree() as usize;
        let total = big.degree() as usize;
        let emb = TowerEmbedding::new(base, big)?;
        let m = total / e;
        let t = big.t();
        let mut basis = Vec::with_capacity(m);
        let mut pw = Elem::ONE;
        for _ in 0..m {
            basis.push(pw);
            pw = big.mul(pw, t);
        }
        // Column (i * e + j) holds the packed coordinates of embed(s^j) * t^i.
        let p = big.characteristic();
        let mut fwd = vec![0u32; total * total];
        for (i, &b) in basis.iter().enumerate() {
            for (j, &img) in emb.images.iter().enumerate() {
                let col = i * e + j;
                for (row, c) in big.coords(big.mul(img, b)).into_iter().enumerate() {
                    fwd[row * total + col] = c;
                }
            }
        }
        let to_relative = invert_mod_p(&fwd, total, p);
        Ok(Extension(Arc::new(ExtensionInner {
            base: base.clone(),
            big: big.clone(),
            m,
            q: base.order(),
            base_embedding: emb,
            basis,
            to_relative,
        })))
    }

    pub fn base(&self) -> &Field {
        &self.0.base
    }

    pub fn big(&self) -> &Field {
        &self.0.big
    }

    pub fn m(&self) -> usize {
        self.0.m
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn base_embedding(&self) -> &TowerEmbedding {
        &self.0.base_embedding
    }

    /// The canonical GF(q)-basis `1, t, ..., t^(m-1)`.
    pub fn basis(&self) -> &[Elem] {
        &self.0.basis
    }

    /// GF(q)-coordinates of `x` in the canonical basis.
    pub fn coords(&self, x: Elem) -> Vector {
        let inner = &*self.0;
        let total = inner.big.degree() as usize;
        let e = inner.base.degree() as usize;
        let p = inner.big.characteristic() as u64;
        let digits = inner.big.coords(x);
        let rel: Vec<u32> = (0..total)
            .map(|r| {
                let row = &inner.to_relative[r * total..(r + 1) * total];
                (row.iter().zip(&digits).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p) as u32
            })
            .collect();
        rel.chunks(e).map(|c| inner.base.from_coords(c)).collect()
    }

    pub fn from_coords(&self, c: &[Elem]) -> Elem {
        let big = &self.0.big;
        let emb = &self.0.base_embedding;
        c.iter().zip(&self.0.basis).fold(Elem::ZERO, |acc, (&ci, &b)| big.add(acc, big.mul(emb.embed(ci), b)))
    }

    /// Embeds a base-field scalar.
    pub fn scalar(&self, c: Elem) -> Elem {
        self.0.base_embedding.embed(c)
    }

    /// `q^i mod (|GF(q^m)| - 1)`, the exponent of the i-th Frobenius power.
    fn frob_exponent(&self, i: i64) -> u64 {
        let m = self.m() as i64;
        let i = i.rem_euclid(m.max(1)) as u64;
        let n = (self.big().order() - 1) as u64;
        if n == 0 {
            return 1;
        }
        let (mut b, mut e, mut acc) = (self.q() as u64 % n, i, 1u64 % n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % n;
            }
            b = b * b % n;
            e >>= 1;
        }
        // Exponent 0 mod n means x^(q^i) = x on nonzero elements.
        if acc == 0 {
            n
        } else {
            acc
        }
    }

    /// `x^(q^i)`, i reduced mod m.
    pub fn frobenius(&self, x: Elem, i: i64) -> Elem {
        self.big().pow(x, self.frob_exponent(i))
    }

    fn check_divisor(&self, s: usize) -> Result<()> {
        if s == 0 || !self.m().is_multiple_of(s) {
            return Err(Error::NotASubfield { sub: s, ext: self.m() });
        }
        Ok(())
    }

    /// Relative trace GF(q^m) -> GF(q^s).
    pub fn trace(&self, x: Elem, s: usize) -> Result<Elem> {
        self.check_divisor(s)?;
        let big = self.big();
        Ok((0..self.m() / s).fold(Elem::ZERO, |acc, i| big.add(acc, self.frobenius(x, (s * i) as i64))))
    }

    /// Relative norm GF(q^m) -> GF(q^s).
    pub fn norm(&self, x: Elem, s: usize) -> Result<Elem> {
        self.check_divisor(s)?;
        let big = self.big();
        Ok((0..self.m() / s).fold(Elem::ONE, |acc, i| big.mul(acc, self.frobenius(x, (s * i) as i64))))
    }

    /// `Tr_{q^m/q}`.
    pub fn abs_trace(&self, x: Elem) -> Elem {
        self.trace(x, 1).expect("1 divides m")
    }

    /// `Norm_{q^m/q}`.
    pub fn abs_norm(&self, x: Elem) -> Elem {
        self.norm(x, 1).expect("1 divides m")
    }

    pub fn in_subfield(&self, x: Elem, s: usize) -> bool {
        self.frobenius(x, s as i64) == x
    }

    /// GF(q^s) inside GF(q^m) as the fixed set of `x -> x^(q^s)`, sorted.
    pub fn subfield_elements(&self, s: usize) -> Result<Vec<Elem>> {
        self.check_divisor(s)?;
        Ok(self.big().elements().filter(|&x| self.in_subfield(x, s)).collect())
    }

    /// Span of big-field elements as a GF(q)-subspace of coordinate vectors.
    pub fn span(&self, elems: &[Elem]) -> Subspace {
        let vs: Vec<Vector> = elems.iter().map(|&x| self.coords(x)).collect();
        Subspace::span(self.base(), self.m(), &vs).expect("coordinate vectors have length m")
    }

    pub fn elems_of(&self, s: &Subspace) -> Vec<Elem> {
        s.basis().iter().map(|v| self.from_coords(v)).collect()
    }

    /// Reduced echelon GF(q)-basis of the embedded GF(q^s).
    pub fn subfield_basis(&self, s: usize) -> Result<Vec<Elem>> {
        let elems = self.subfield_elements(s)?;
        Ok(self.elems_of(&self.span(&elems)))
    }

    /// Reduced echelon GF(q)-basis of `ker Tr_{q^m/q^s}`, rows ordered by pivot.
    pub fn trace_kernel_basis(&self, s: usize) -> Result<Vec<Elem>> {
        Ok(self.elems_of(&self.trace_kernel(s)?))
    }

    pub fn trace_kernel(&self, s: usize) -> Result<Subspace> {
        self.check_divisor(s)?;
        let rows: Vec<Vector> =
            self.basis().iter().map(|&b| self.trace(b, s).map(|t| self.coords(t))).collect::<Result<_>>()?;
        let map = Matrix::from_rows(&rows)?;
        let kernel = map.left_kernel(self.base());
        Subspace::span(self.base(), self.m(), &kernel)
    }

    /// Standard GF(q)-basis vector `i` as an element: `t^i`.
    pub fn unit(&self, i: usize) -> Elem {
        self.0.basis[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_over_gf2() {
        let ext = Extension::new(2, 2).unwrap();
        let t = ext.big().t();
        let t1 = ext.big().add(t, Elem::ONE);
        assert_eq!(ext.frobenius(t, 1), t1);
        assert_eq!(ext.frobenius(t, 2), t);
        assert_eq!(ext.frobenius(t, -1), t1);
        assert_eq!(ext.trace(t, 1).unwrap(), Elem::ONE);
        assert_eq!(ext.norm(t, 1).unwrap(), Elem::ONE);
        assert_eq!(ext.trace_kernel_basis(2).unwrap(), Vec::<Elem>::new());
        assert!(matches!(ext.trace(t, 3), Err(Error::NotASubfield { .. })));
    }

    #[test]
    fn trace_16_to_4_is_balanced() {
        let ext = Extension::new(2, 4).unwrap();
        let mut counts: HashMap<Elem, usize> = HashMap::new();
        for x in ext.big().elements() {
            let tr = ext.trace(x, 2).unwrap();
            assert!(ext.in_subfield(tr, 2));
            *counts.entry(tr).or_default() += 1;
        }
        assert_eq!(counts.len(), 4);
        assert!(counts.values().all(|&c| c == 4));
        let kb = ext.trace_kernel_basis(2).unwrap();
        assert_eq!(kb.len(), 2);
        for w in kb {
            assert_eq!(ext.trace(w, 2).unwrap(), Elem::ZERO);
        }
    }

    #[test]
    fn embedding_gf4_into_gf16() {
        let gf4 = Field::new(2, 2, None).unwrap();
        let gf16 = Field::new(2, 4, None).unwrap();
        let emb = TowerEmbedding::new(&gf4, &gf16).unwrap();
        assert_eq!(emb.embed(Elem::ZERO), Elem::ZERO);
        assert_eq!(emb.embed(Elem::ONE), Elem::ONE);
        let ext = Extension::from_fields(&Field::prime(2).unwrap(), &gf16).unwrap();
        let mut fixed = ext.subfield_elements(2).unwrap();
        fixed.sort();
        assert_eq!(emb.image(), fixed);
        for a in gf4.elements() {
            assert_eq!(emb.section(emb.embed(a)).unwrap(), a);
            for b in gf4.elements() {
                assert_eq!(emb.embed(gf4.mul(a, b)), gf16.mul(emb.embed(a), emb.embed(b)));
                assert_eq!(emb.embed(gf4.add(a, b)), gf16.add(emb.embed(a), emb.embed(b)));
            }
        }
        let outside = gf16.elements().find(|x| !fixed.contains(x)).unwrap();
        assert_eq!(emb.section(outside), Err(Error::NotInImage));
        let gf8 = Field::new(2, 3, None).unwrap();
        assert!(TowerEmbedding::new(&gf8, &gf16).is_err());
    }

    #[test]
    fn relative_coordinates_over_gf4() {
        let ext = Extension::new(4, 3).unwrap();
        assert_eq!(ext.m(), 3);
        for x in ext.big().elements() {
            let c = ext.coords(x);
            assert_eq!(c.len(), 3);
            assert_eq!(ext.from_coords(&c), x);
        }
        for c in ext.base().elements() {
            let s = ext.scalar(c);
            assert_eq!(ext.coords(s), vec![c, Elem::ZERO, Elem::ZERO]);
        }
    }
}
