//! Rank-metric codes: linear (basis) and explicit (codeword list) bodies.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{rank_distance, Matrix};
use crate::subspace::{Subspace, Vector};

/// Default cap on explicit member enumeration.
pub const MEMBER_CAP: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CodeParams {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub d: usize,
}

impl CodeParams {
    pub fn new(q: u32, m: usize, n: usize, d: usize) -> Result<CodeParams> {
        if crate::field::prime_power(q).is_none() {
            return Err(Error::InvalidParams(format!("q = {q} is not a prime power")));
        }
        if m == 0 || n == 0 || d == 0 || d > m.min(n) {
            return Err(Error::InvalidParams(format!("need 1 <= d <= min(m, n), got m={m} n={n} d={d}")));
        }
        Ok(CodeParams { q, m, n, d })
    }

    /// log_q of the MRD cardinality, `max(m,n) * (min(m,n) - d + 1)`.
    pub fn mrd_dimension(&self) -> usize {
        self.m.max(self.n) * (self.m.min(self.n) + 1 - self.d)
    }

    pub fn transposed(&self) -> CodeParams {
        CodeParams { m: self.n, n: self.m, ..*self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CodeBody {
    /// GF(q)-basis, kept in reduced echelon form over the row-major entries.
    Linear(Vec<Matrix>),
    /// Strictly increasing codewords.
    Explicit(Vec<Matrix>),
}

#[derive(Clone, Debug)]
pub struct RankCode {
    field: Field,
    params: CodeParams,
    body: CodeBody,
}

impl PartialEq for RankCode {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.params == other.params && self.body == other.body
    }
}

impl Eq for RankCode {}

fn check_shapes(field: &Field, params: &CodeParams, ms: &[Matrix]) -> Result<()> {
    if field.order() != params.q {
        return Err(Error::FieldMismatch);
    }
    for x in ms {
        if x.shape() != (params.m, params.n) {
            return Err(Error::ShapeMismatch(format!(
                "expected {}x{}, found {}x{}",
                params.m,
                params.n,
                x.rows(),
                x.cols()
            )));
        }
        x.check_field(field)?;
    }
    Ok(())
}

fn q_pow(q: u32, k: usize) -> u128 {
    (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
}

impl RankCode {
    pub fn new(field: &Field, params: CodeParams, body: CodeBody) -> Result<RankCode> {
        match body {
            CodeBody::Linear(b) => RankCode::linear(field, params, b),
            CodeBody::Explicit(w) => RankCode::explicit(field, params, w),
        }
    }

    pub fn linear(field: &Field, params: CodeParams, basis: Vec<Matrix>) -> Result<RankCode> {
        check_shapes(field, &params, &basis)?;
        let vecs: Vec<Vector> = basis.iter().map(|x| x.data().to_vec()).collect();
        let span = Subspace::span(field, params.m * params.n, &vecs)?;
        if span.dim() != basis.len() {
            return Err(Error::DependentBasis);
        }
        Ok(RankCode::from_subspace(field, params, &span))
    }

    /// Builds a linear code from a subspace of the vectorized matrix space.
    pub fn from_subspace(field: &Field, params: CodeParams, s: &Subspace) -> RankCode {
        let basis = s
            .basis()
            .iter()
            .map(|v| Matrix::from_vec(params.m, params.n, v.clone()).expect("vectorized shape"))
            .collect();
        RankCode { field: field.clone(), params, body: CodeBody::Linear(basis) }
    }

    pub fn explicit(field: &Field, params: CodeParams, mut words: Vec<Matrix>) -> Result<RankCode> {
        check_shapes(field, &params, &words)?;
        words.sort_unstable();
        if words.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCodeword);
        }
        Ok(RankCode { field: field.clone(), params, body: CodeBody::Explicit(words) })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn body(&self) -> &CodeBody {
        &self.body
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.body, CodeBody::Linear(_))
    }

    /// GF(q)-dimension for linear bodies.
    pub fn dim(&self) -> Option<usize> {
        match &self.body {
            CodeBody::Linear(b) => Some(b.len()),
            CodeBody::Explicit(_) => None,
        }
    }

    pub fn basis(&self) -> Option<&[Matrix]> {
        match &self.body {
            CodeBody::Linear(b) => Some(b),
            CodeBody::Explicit(_) => None,
        }
    }

    /// Number of codewords, saturating at `u128::MAX`.
    pub fn cardinality(&self) -> u128 {
        match &self.body {
            CodeBody::Linear(b) => q_pow(self.params.q, b.len()),
            CodeBody::Explicit(w) => w.len() as u128,
        }
    }

    /// The linear span over the vectorized entries, for linear bodies.
    pub fn subspace(&self) -> Option<Subspace> {
        let b = self.basis()?;
        let vecs: Vec<Vector> = b.iter().map(|x| x.data().to_vec()).collect();
        Some(Subspace::span(&self.field, self.params.m * self.params.n, &vecs).expect("valid basis"))
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        if x.shape() != (self.params.m, self.params.n) {
            return false;
        }
        match &self.body {
            CodeBody::Linear(_) => self.subspace().expect("linear").contains(x.data()),
            CodeBody::Explicit(w) => w.binary_search(x).is_ok(),
        }
    }

    /// All codewords in increasing order.
    pub fn members(&self) -> Result<Vec<Matrix>> {
        self.members_capped(MEMBER_CAP)
    }

    pub fn members_capped(&self, cap: u128) -> Result<Vec<Matrix>> {
        match &self.body {
            CodeBody::Explicit(w) => Ok(w.clone()),
            CodeBody::Linear(b) => {
                let needed = self.cardinality();
                if needed > cap {
                    return Err(Error::TooLarge { what: "code members", needed, cap });
                }
                let mut out = Vec::with_capacity(needed as usize);
                walk_span(&self.field, b, &Matrix::zeros(self.params.m, self.params.n), |x| out.push(x.clone()));
                out.sort_unstable();
                Ok(out)
            }
        }
    }

    /// The same code with an explicit body.
    pub fn to_explicit(&self) -> Result<RankCode> {
        let words = self.members()?;
        Ok(RankCode { field: self.field.clone(), params: self.params, body: CodeBody::Explicit(words) })
    }

    /// Same codeword set, regardless of body kind.
    pub fn same_members(&self, other: &RankCode) -> Result<bool> {
        if self.params != other.params || self.field != other.field {
            return Ok(false);
        }
        if let (Some(a), Some(b)) = (self.subspace(), other.subspace()) {
            return Ok(a == b);
        }
        Ok(self.members()? == other.members()?)
    }

    pub fn with_params(&self, params: CodeParams) -> Result<RankCode> {
        if (params.m, params.n, params.q) != (self.params.m, self.params.n, self.params.q) {
            return Err(Error::ParamMismatch("shape or q differs".into()));
        }
        Ok(RankCode { params, ..self.clone() })
    }

    /// Minimum rank distance. Linear bodies scan nonzero codewords, explicit
    /// bodies scan all pairs.
    pub fn min_rank_distance(&self) -> Result<usize> {
        if self.cardinality() < 2 {
            return Err(Error::TooSmall);
        }
        let f = &self.field;
        match &self.body {
            CodeBody::Linear(b) => Ok(par_min_rank(f, b, self.params.m.min(self.params.n))),
            CodeBody::Explicit(w) => {
                let floor = 1;
                let best = (0..w.len())
                    .into_par_iter()
                    .map(|i| {
                        let mut best = usize::MAX;
                        for y in &w[i + 1..] {
                            let r = w[i].sub(f, y).rank(f);
                            best = best.min(r);
                            if best == floor {
                                break;
                            }
                        }
                        best
                    })
                    .min()
                    .unwrap_or(usize::MAX);
                Ok(best)
            }
        }
    }

    /// The cardinality criterion: distance at least `d` and exactly
    /// `q^{max(m,n)(min(m,n)-d+1)}` codewords.
    pub fn is_mrd(&self) -> bool {
        if self.cardinality() != q_pow(self.params.q, self.params.mrd_dimension()) {
            return false;
        }
        matches!(self.min_rank_distance(), Ok(dist) if dist >= self.params.d)
    }

    /// Codeword counts by rank for linear bodies; for explicit bodies the
    /// pairwise difference distribution divided by `|C|`.
    pub fn rank_weight_distribution(&self) -> Result<RankDistribution> {
        let f = &self.field;
        let top = self.params.m.min(self.params.n);
        match &self.body {
            CodeBody::Linear(b) => {
                let needed = self.cardinality();
                if needed > MEMBER_CAP {
                    return Err(Error::TooLarge { what: "code members", needed, cap: MEMBER_CAP });
                }
                let mut counts = vec![0u64; top + 1];
                walk_span(f, b, &Matrix::zeros(self.params.m, self.params.n), |x| counts[x.rank(f)] += 1);
                Ok(RankDistribution::from_counts(counts, 1))
            }
            CodeBody::Explicit(w) => {
                let needed = (w.len() as u128).pow(2);
                if needed > PAIR_CAP {
                    return Err(Error::TooLarge { what: "codeword pairs", needed, cap: PAIR_CAP });
                }
                let counts = (0..w.len())
                    .into_par_iter()
                    .map(|i| {
                        let mut c = vec![0u64; top + 1];
                        for y in w {
                            c[w[i].sub(f, y).rank(f)] += 1;
                        }
                        c
                    })
                    .reduce(
                        || vec![0u64; top + 1],
                        |mut a, b| {
                            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                            a
                        },
                    );
                Ok(RankDistribution::from_counts(counts, w.len() as u64))
            }
        }
    }

    /// Translate every codeword by `t`.
    pub fn translate(&self, t: &Matrix) -> Result<RankCode> {
        let words = self.members()?.into_iter().map(|x| x.add(&self.field, t)).collect();
        RankCode::explicit(&self.field, self.params, words)
    }
}

/// Cap on explicit `O(|C|^2)` scans.
pub const PAIR_CAP: u128 = 1 << 26;

/// A rank-weight distribution, normalized by a divisor.
#[derive(Clone, Debug, PartialEq)]
pub struct RankDistribution {
    pub counts: Vec<u64>,
    pub divisor: u64,
}

impl RankDistribution {
    fn from_counts(counts: Vec<u64>, divisor: u64) -> RankDistribution {
        RankDistribution { counts, divisor }
    }

    pub fn values(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.divisor as f64).collect()
    }
}

impl Serialize for RankDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.counts.len()))?;
        for &c in &self.counts {
            if c % self.divisor == 0 {
                seq.serialize_element(&(c / self.divisor))?;
            } else {
                seq.serialize_element(&(c as f64 / self.divisor as f64))?;
            }
        }
        seq.end()
    }
}

/// Visits `offset + span(basis)`, adding one basis matrix per odometer step.
/// The prime-field basis `{t^j b}` spanning the same set as `basis`.
fn prime_basis(f: &Field, basis: &[Matrix]) -> Vec<Matrix> {
    let p = f.characteristic();
    let mut out = Vec::with_capacity(basis.len() * f.degree() as usize);
    for b in basis {
        for j in 0..f.degree() {
            out.push(b.scale(f, Elem(p.pow(j))));
        }
    }
    out
}

/// Visits `offset + span(basis)` once per element, one addition per step.
pub(crate) fn walk_span(f: &Field, basis: &[Matrix], offset: &Matrix, visit: impl FnMut(&Matrix)) {
    walk_prime_span(f, &prime_basis(f, basis), offset, visit)
}

fn walk_prime_span(f: &Field, basis: &[Matrix], offset: &Matrix, mut visit: impl FnMut(&Matrix)) {
    let p = f.characteristic();
    let k = basis.len();
    let mut digits = vec![0u32; k];
    let mut cur = offset.clone();
    loop {
        visit(&cur);
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            cur.add_assign(f, &basis[i]);
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn par_min_rank(f: &Field, basis: &[Matrix], top: usize) -> usize {
    let basis = prime_basis(f, basis);
    let p = f.characteristic() as u128;
    let k = basis.len();
    // Split on the leading coefficients so each task walks the rest.
    let mut split = 0;
    while split < k && p.pow(split as u32) < 256 && k - split > 4 {
        split += 1;
    }
    let (lead, rest) = basis.split_at(split);
    let shape = basis[0].shape();
    let mut offsets = Vec::new();
    walk_prime_span(f, lead, &Matrix::zeros(shape.0, shape.1), |x| offsets.push(x.clone()));
    offsets
        .par_iter()
        .map(|off| {
            let mut best = top + 1;
            walk_prime_span(f, rest, off, |x| {
                if best > 1 && !x.is_zero() {
                    best = best.min(x.rank(f));
                }
            });
            best
        })
        .min()
        .unwrap_or(top + 1)
}

/// Minimum distance over all pairs, computed without linearity. Slow.
pub fn pairwise_min_distance(f: &Field, words: &[Matrix]) -> Result<usize> {
    let mut best = usize::MAX;
    for (i, x) in words.iter().enumerate() {
        for y in &words[i + 1..] {
            best = best.min(rank_distance(f, x, y)?);
        }
    }
    if best == usize::MAX {
        Err(Error::TooSmall)
    } else {
        Ok(best)
    }
}

/// A coset of `C ∩ S` inside a linear code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    /// Smallest member.
    pub representative: Matrix,
    pub members: Vec<Matrix>,
}

#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    pub rows: usize,
    /// `C ∩ S` as matrices of the full shape.
    pub subcode: RankCode,
    /// `C ∩ S` with the zero rows below `rows` dropped.
    pub restricted: RankCode,
    /// Sorted by representative.
    pub cosets: Vec<Coset>,
}

/// Splits a linear code into cosets of its subcode supported on the first
/// `rows` rows.
pub fn coset_decomposition(c: &RankCode, rows: usize) -> Result<CosetDecomposition> {
    let p = c.params();
    if rows < p.n || rows > p.m {
        return Err(Error::BadRowCount { rows, lo: p.n, hi: p.m });
    }
    let space = c.subspace().ok_or(Error::NotLinear)?;
    let f = c.field();
    let total = p.m * p.n;
    let support: Vec<Vector> = (0..rows * p.n)
        .map(|i| {
            let mut v = vec![Elem::ZERO; total];
            v[i] = Elem::ONE;
            v
        })
        .collect();
    let s = Subspace::span(f, total, &support)?;
    let inter = space.intersect(&s)?;
    let subcode = RankCode::from_subspace(f, p, &inter);
    if c.cardinality() > MEMBER_CAP {
        return Err(Error::TooLarge { what: "code members", needed: c.cardinality(), cap: MEMBER_CAP });
    }
    let sub_members = subcode.members()?;
    let reps = inter.coset_reps(&space)?;
    let mut cosets: Vec<Coset> = reps
        .iter()
        .map(|r| {
            let r = Matrix::from_vec(p.m, p.n, r.clone()).expect("shape");
            let mut members: Vec<Matrix> = sub_members.iter().map(|x| x.add(f, &r)).collect();
            members.sort_unstable();
            Coset { representative: members[0].clone(), members }
        })
        .collect();
    cosets.sort_by(|a, b| a.representative.cmp(&b.representative));
    let restricted_basis: Vec<Matrix> = subcode.basis().expect("linear").iter().map(|x| x.row_slice(0..rows)).collect();
    let restricted = RankCode::linear(f, CodeParams { m: rows, ..p }, restricted_basis)?;
    Ok(CosetDecomposition { rows, subcode, restricted, cosets })
}

/// Every `rows x cols` matrix, for brute-force oracles.
pub fn whole_space(f: &Field, rows: usize, cols: usize) -> Result<RankCode> {
    let basis = (0..rows * cols).map(|k| Matrix::unit(rows, cols, k / cols, k % cols)).collect();
    RankCode::linear(f, CodeParams::new(f.order(), rows, cols, 1)?, basis)
}

/// Distinct bodies among `codes`, compared as codeword sets.
pub fn distinct_members(codes: &[RankCode]) -> Result<usize> {
    let mut seen = BTreeSet::new();
    for c in codes {
        seen.insert(c.members()?);
    }
    Ok(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn span_over_extension_field_is_complete() {
        let f = Field::of_order(4).unwrap();
        let b = vec![Matrix::identity(2)];
        let c = RankCode::linear(&f, CodeParams::new(4, 2, 2, 2).unwrap(), b).unwrap();
        let w = c.members().unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(c.min_rank_distance().unwrap(), 2);
    }

    #[test]
    fn empty_basis_is_zero_code() {
        let f = gf2();
        let c = RankCode::linear(&f, CodeParams::new(2, 2, 2, 2).unwrap(), vec![]).unwrap();
        assert_eq!(c.cardinality(), 1);
        assert_eq!(c.members().unwrap(), vec![Matrix::zeros(2, 2)]);
        assert!(!c.is_mrd());
        assert!(matches!(c.min_rank_distance(), Err(Error::TooSmall)));
        assert_eq!(c.rank_weight_distribution().unwrap().counts, vec![1, 0, 0]);
    }

    #[test]
    fn single_unit_matrix() {
        let f = gf2();
        let c = RankCode::linear(&f, CodeParams::new(2, 2, 2, 1).unwrap(), vec![Matrix::unit(2, 2, 0, 0)]).unwrap();
        assert_eq!(c.members().unwrap().len(), 2);
        assert_eq!(c.min_rank_distance().unwrap(), 1);
    }

    #[test]
    fn whole_space_is_distance_one_mrd() {
        let f = gf2();
        let c = whole_space(&f, 2, 2).unwrap();
        assert_eq!(c.min_rank_distance().unwrap(), 1);
        assert!(c.is_mrd());
        let m = c.members().unwrap();
        assert_eq!(m.len(), 16);
        assert!(m.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn dependent_and_duplicate_rejected() {
        let f = gf2();
        let p = CodeParams::new(2, 2, 2, 1).unwrap();
        let e = Matrix::unit(2, 2, 0, 1);
        assert!(matches!(RankCode::linear(&f, p, vec![e.clone(), e.clone()]), Err(Error::DependentBasis)));
        assert!(matches!(RankCode::explicit(&f, p, vec![e.clone(), e]), Err(Error::DuplicateCodeword)));
        assert!(matches!(RankCode::explicit(&f, p, vec![Matrix::zeros(3, 2)]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn linear_and_explicit_distance_agree() {
        let f = gf2();
        let p = CodeParams::new(2, 3, 2, 1).unwrap();
        let basis = vec![Matrix::from_ints(3, 2, &[1, 0, 0, 1, 1, 1]), Matrix::from_ints(3, 2, &[0, 1, 1, 1, 0, 0])];
        let c = RankCode::linear(&f, p, basis).unwrap();
        let e = c.to_explicit().unwrap();
        assert_eq!(c.min_rank_distance().unwrap(), e.min_rank_distance().unwrap());
        assert_eq!(c.min_rank_distance().unwrap(), pairwise_min_distance(&f, &c.members().unwrap()).unwrap());
        assert_eq!(
            c.rank_weight_distribution().unwrap(),
            RankDistribution {
                counts: e.rank_weight_distribution().unwrap().counts.iter().map(|x| x / 4).collect(),
                divisor: 1
            }
        );
        assert!(c.same_members(&e).unwrap());
    }

    #[test]
    fn transposed_orientation_cardinality() {
        // 2x4, distance 2: q^{4(2-2+1)} = 16 codewords.
        assert_eq!(CodeParams::new(2, 2, 4, 2).unwrap().mrd_dimension(), 4);
        assert_eq!(CodeParams::new(2, 4, 2, 2).unwrap().mrd_dimension(), 4);
    }

    #[test]
    fn explicit_distribution_serializes_as_integers_when_exact() {
        let f = gf2();
        let c = whole_space(&f, 1, 1).unwrap().to_explicit().unwrap();
        let d = c.rank_weight_distribution().unwrap();
        assert_eq!(serde_json::to_string(&d).unwrap(), "[1,1]");
    }
}
