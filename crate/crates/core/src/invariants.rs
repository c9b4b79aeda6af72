//! Non-linearity invariants, isometries of `B_q(m,n)`, code signatures and
//! counting formulas.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::code::{CodeBody, CodeParams, RankCode, RankDistribution, MEMBER_CAP, PAIR_CAP};
use crate::error::{Error, Result};
use crate::field::{prime_power, Field};
use crate::matrix::Matrix;
use crate::subspace::{enumerate_subspaces, gaussian_binomial, Subspace, Vector};

/// Cap on the number of candidate subspaces in the row-support search.
pub const SUBSPACE_CAP: u128 = 1 << 16;

fn differences(c: &RankCode) -> Result<(Vec<Matrix>, Matrix)> {
    let words = c.members()?;
    let c0 = words.first().cloned().ok_or(Error::Empty)?;
    let f = c.field();
    Ok((words.iter().map(|x| x.sub(f, &c0)).collect(), c0))
}

/// Span of `{c - c0}` as a subspace of the vectorized matrix space.
pub fn difference_span(c: &RankCode) -> Result<Subspace> {
    if let Some(s) = c.subspace() {
        return Ok(s);
    }
    let p = c.params();
    let f = c.field();
    let (diffs, _) = differences(c)?;
    let mut span = Subspace::zero(f, p.m * p.n);
    for x in diffs {
        if !span.contains(x.data()) {
            let mut vs: Vec<Vector> = span.basis().to_vec();
            vs.push(x.data().to_vec());
            span = Subspace::span(f, p.m * p.n, &vs)?;
        }
    }
    Ok(span)
}

/// Dimension of the affine span.
pub fn affine_rank(c: &RankCode) -> Result<usize> {
    if c.cardinality() == 0 {
        return Err(Error::Empty);
    }
    Ok(difference_span(c)?.dim())
}

/// The linear code `C - c0` when `C` is a coset of one.
pub fn linear_part(c: &RankCode) -> Result<Option<RankCode>> {
    if c.is_linear() {
        return Ok(Some(c.clone()));
    }
    let span = difference_span(c)?;
    let size = (c.params().q as u128).checked_pow(span.dim() as u32);
    if size != Some(c.cardinality()) {
        return Ok(None);
    }
    Ok(Some(RankCode::from_subspace(c.field(), c.params(), &span)))
}

/// Periods `{x : C + x = C}`. Every period is a difference `c - c0`, since
/// `c0 + x` must be a codeword, so only those candidates are tested.
pub fn kernel(c: &RankCode) -> Result<Subspace> {
    if let Some(s) = c.subspace() {
        return Ok(s);
    }
    let p = c.params();
    let f = c.field();
    let words = c.members()?;
    if words.is_empty() {
        return Err(Error::Empty);
    }
    let needed = (words.len() as u128).pow(2);
    if needed > PAIR_CAP {
        return Err(Error::TooLarge { what: "kernel candidate checks", needed, cap: PAIR_CAP });
    }
    let (diffs, _) = differences(c)?;
    let periods: Vec<Vector> = diffs
        .par_iter()
        .filter(|x| words.iter().all(|w| words.binary_search(&w.add(f, x)).is_ok()))
        .map(|x| x.data().to_vec())
        .collect();
    Subspace::span(f, p.m * p.n, &periods)
}

pub fn is_aperiodic(c: &RankCode) -> Result<bool> {
    Ok(kernel(c)?.dim() == 0)
}

/// `X -> A phi(X) B + T`, with `X` transposed first when flagged (`m = n`
/// only). `phi` is the absolute Frobenius `x -> x^p` applied `frobenius` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub a: Matrix,
    pub b: Matrix,
    pub t: Matrix,
    pub frobenius: u32,
    pub transpose: bool,
}

impl Isometry {
    pub fn identity(m: usize, n: usize) -> Isometry {
        Isometry {
            a: Matrix::identity(m),
            b: Matrix::identity(n),
            t: Matrix::zeros(m, n),
            frobenius: 0,
            transpose: false,
        }
    }

    /// Adds row `i` to row `j`.
    pub fn row_addition(f: &Field, m: usize, n: usize, i: usize, j: usize) -> Isometry {
        let mut a = Matrix::identity(m);
        a.set(j, i, f.add(a.get(j, i), crate::field::Elem::ONE));
        Isometry { a, ..Isometry::identity(m, n) }
    }

    fn check(&self, f: &Field, m: usize, n: usize) -> Result<()> {
        if self.a.shape() != (m, m) || self.b.shape() != (n, n) || self.t.shape() != (m, n) {
            return Err(Error::ShapeMismatch("isometry does not match the code shape".into()));
        }
        if self.transpose && m != n {
            return Err(Error::ShapeMismatch("transposition needs m = n".into()));
        }
        if self.a.inverse(f).is_none() {
            return Err(Error::SingularA);
        }
        if self.b.inverse(f).is_none() {
            return Err(Error::SingularB);
        }
        Ok(())
    }

    fn linear_part(&self, f: &Field, x: &Matrix) -> Matrix {
        let x = if self.transpose { x.transpose() } else { x.clone() };
        let x = x.map(|e| f.frobenius_abs(e, self.frobenius));
        self.a.mul(f, &x).and_then(|ax| ax.mul(f, &self.b)).expect("checked shapes")
    }

    pub fn apply(&self, f: &Field, x: &Matrix) -> Matrix {
        self.linear_part(f, x).add(f, &self.t)
    }
}

/// Image of a code under an isometry. Linear codes stay linear when the
/// translation is zero.
pub fn apply_isometry(c: &RankCode, g: &Isometry) -> Result<RankCode> {
    let p = c.params();
    let f = c.field();
    g.check(f, p.m, p.n)?;
    match c.body() {
        CodeBody::Linear(b) if g.t.is_zero() => RankCode::linear(f, p, b.iter().map(|x| g.linear_part(f, x)).collect()),
        _ => RankCode::explicit(f, p, c.members()?.iter().map(|x| g.apply(f, x)).collect()),
    }
}

/// A row-supported MRD subcode exposed by a change of domain basis.
#[derive(Clone, Debug)]
pub struct RowSupportWitness {
    /// `W1`, the span of the last `m - m1` new basis vectors.
    pub w1: Subspace,
    /// Rows: a pivot-greedy complement of `W1`, then the basis of `W1`.
    pub change_of_basis: Matrix,
    /// The subcode in `B_q(m1, n)`.
    pub subcode: RankCode,
}

/// Searches every `(m - m1)`-dimensional `W1` of `GF(q)^m` for one whose
/// annihilated codewords `{X : W1 X = 0}` form an MRD code of `B_q(m1, n)`
/// after the change of basis.
pub fn find_row_supported_mrd_subcode(c: &RankCode, m1: usize) -> Result<Option<RowSupportWitness>> {
    let p = c.params();
    let f = c.field();
    let basis = c.basis().ok_or(Error::NotLinear)?;
    if m1 == 0 || m1 > p.m {
        return Err(Error::BadRowCount { rows: m1, lo: 1, hi: p.m });
    }
    let Ok(sub_params) = CodeParams::new(p.q, m1, p.n, p.d) else {
        return Ok(None);
    };
    let needed = gaussian_binomial(p.q as u64, p.m, p.m - m1);
    if needed > SUBSPACE_CAP {
        return Err(Error::TooLarge { what: "candidate subspaces", needed, cap: SUBSPACE_CAP });
    }
    let want = sub_params.mrd_dimension();
    for w1 in enumerate_subspaces(f, p.m, p.m - m1) {
        let wm = w1.basis_matrix();
        // Coefficient vectors y with sum y_i (W1 B_i) = 0.
        let rows: Vec<Vector> = basis
            .iter()
            .map(|b| if wm.rows() == 0 { Vec::new() } else { wm.mul(f, b).expect("shapes").data().to_vec() })
            .collect();
        let coeffs = if rows.is_empty() || rows[0].is_empty() {
            Subspace::full(f, basis.len()).basis().to_vec()
        } else {
            Matrix::from_rows(&rows)?.left_kernel(f)
        };
        if coeffs.len() != want {
            continue;
        }
        let comp = w1.extend_to_dim(p.m, None)?;
        let mut change: Vec<Vector> = comp.clone();
        change.extend(w1.basis().iter().cloned());
        let pm = Matrix::from_rows(&change)?;
        let cm = Matrix::from_rows(&comp)?;
        let sub_basis: Vec<Matrix> = coeffs
            .iter()
            .map(|y| {
                let mut x = Matrix::zeros(p.m, p.n);
                for (&yi, b) in y.iter().zip(basis) {
                    x = x.add(f, &b.scale(f, yi));
                }
                cm.mul(f, &x).expect("shapes")
            })
            .collect();
        let sub = RankCode::linear(f, sub_params, sub_basis)?;
        if sub.is_mrd() {
            return Ok(Some(RowSupportWitness { w1, change_of_basis: pm, subcode: sub }));
        }
    }
    Ok(None)
}

/// Isometry-invariant fingerprint, fields in comparison order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Signature {
    #[serde(serialize_with = "as_string")]
    pub card: u128,
    pub mindist: Option<usize>,
    pub rankdist: RankDistribution,
    pub kernel_dim: usize,
    pub affine_rank: usize,
    /// Per `m'` in `n..m`: whether a row-supported MRD subcode exists. Only
    /// computed for cosets of linear codes within the search cap.
    pub subcode_profile: Option<BTreeMap<usize, bool>>,
}

fn as_string<S: Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    if let Some(small) = v.to_u64() {
        s.serialize_u64(small)
    } else {
        s.serialize_str(&v.to_string())
    }
}

pub const SIGNATURE_FIELDS: [&str; 6] = ["card", "mindist", "rankdist", "kernel_dim", "affine_rank", "subcode_profile"];

impl Signature {
    /// Name of the first field that differs.
    pub fn first_difference(&self, other: &Signature) -> Option<&'static str> {
        let same = [
            self.card == other.card,
            self.mindist == other.mindist,
            self.rankdist.values() == other.rankdist.values(),
            self.kernel_dim == other.kernel_dim,
            self.affine_rank == other.affine_rank,
            self.subcode_profile == other.subcode_profile,
        ];
        same.iter().position(|s| !s).map(|i| SIGNATURE_FIELDS[i])
    }
}

pub fn signature(c: &RankCode) -> Result<Signature> {
    let card = c.cardinality();
    if card > MEMBER_CAP {
        return Err(Error::TooLarge { what: "code members", needed: card, cap: MEMBER_CAP });
    }
    let mindist = if card >= 2 { Some(c.min_rank_distance()?) } else { None };
    let rankdist = c.rank_weight_distribution()?;
    let kernel_dim = kernel(c)?.dim();
    let affine_rank = affine_rank(c)?;
    let p = c.params();
    let subcode_profile = match linear_part(c)? {
        Some(lin) => {
            let mut profile = BTreeMap::new();
            let mut within_cap = true;
            for rows in p.n..p.m {
                match find_row_supported_mrd_subcode(&lin, rows) {
                    Ok(w) => {
                        profile.insert(rows, w.is_some());
                    }
                    Err(Error::TooLarge { .. }) => within_cap = false,
                    Err(e) => return Err(e),
                }
            }
            within_cap.then_some(profile)
        }
        None => None,
    };
    Ok(Signature { card, mindist, rankdist, kernel_dim, affine_rank, subcode_profile })
}

/// Number of pairwise distinct codeword sets.
pub fn distinct_count(codes: &[RankCode]) -> Result<usize> {
    crate::code::distinct_members(codes)
}

/// The first signature field separating two codes; such a difference proves
/// they are not equivalent under the invariances of the signature.
pub fn inequivalence_certificate(a: &RankCode, b: &RankCode) -> Result<Option<&'static str>> {
    Ok(signature(a)?.first_difference(&signature(b)?))
}

fn q_factorial(q: &BigUint, k: usize) -> BigUint {
    let mut out = BigUint::one();
    for i in 0..k {
        let mut s = BigUint::zero();
        for t in 0..=i {
            s += q.pow(t as u32);
        }
        out *= s;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutOrder {
    /// `[m]_q! [n]_q! (q-1)^{n+m-1} q^{C(m,2)+C(n,2)+mn} log_p q`.
    #[serde(serialize_with = "big_as_string")]
    pub formula: BigUint,
    /// For `m = n`: the formula value doubled for transposition.
    #[serde(serialize_with = "opt_big_as_string")]
    pub with_transpose: Option<BigUint>,
}

fn big_as_string<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn opt_big_as_string<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub fn aut_order(q: u32, m: usize, n: usize) -> Result<AutOrder> {
    let (_, e) = prime_power(q).ok_or_else(|| Error::InvalidParams(format!("q = {q} is not a prime power")))?;
    let qb = BigUint::from(q);
    let exp = m * (m.saturating_sub(1)) / 2 + n * (n.saturating_sub(1)) / 2 + m * n;
    let formula = q_factorial(&qb, m)
        * q_factorial(&qb, n)
        * BigUint::from(q - 1).pow((n + m - 1) as u32)
        * qb.pow(exp as u32)
        * BigUint::from(e);
    let with_transpose = (m == n).then(|| &formula * 2u32);
    Ok(AutOrder { formula, with_transpose })
}

/// `base^exponent`, kept symbolic when large.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Power {
    pub base: u32,
    pub exponent: BigUint,
}

/// Largest bit length evaluated exactly.
pub const EXACT_BITS: u64 = 1024;

impl Power {
    pub fn value(&self) -> Option<BigUint> {
        let bits_per = 32 - self.base.leading_zeros() as u64;
        let e = self.exponent.to_u64()?;
        if e.checked_mul(bits_per)? > EXACT_BITS + bits_per {
            return None;
        }
        let v = BigUint::from(self.base).pow(e as u32);
        (v.bits() <= EXACT_BITS).then_some(v)
    }
}

impl Serialize for Power {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Power", 3)?;
        st.serialize_field("base", &self.base)?;
        st.serialize_field("exponent", &self.exponent.to_string())?;
        st.serialize_field("value", &self.value().map(|v| v.to_string()))?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountBounds {
    /// `2^{q^{(n-d+1)(m-m')}}` distinct codes from independent coset switches.
    pub lower: Power,
    /// `(q^{(d-1)m})^{q^{(n-d+1)m}}` from one codeword per anticode.
    pub upper: Power,
    /// `|GL(m)| |GL(n)| q^{mn} log_p q`, doubled when `m = n`.
    #[serde(serialize_with = "big_as_string")]
    pub isometry_bound: BigUint,
    /// `ceil(lower / isometry_bound)` when `lower` is exact.
    #[serde(serialize_with = "opt_big_as_string")]
    pub inequivalent_lower: Option<BigUint>,
}

fn gl_order(q: &BigUint, k: usize) -> BigUint {
    let qk = q.pow(k as u32);
    (0..k).fold(BigUint::one(), |acc, i| acc * (&qk - q.pow(i as u32)))
}

pub fn count_bounds(q: u32, m: usize, n: usize, d: usize, rows: usize) -> Result<CountBounds> {
    let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidParams(format!("q = {q} is not a prime power")))?;
    CodeParams::new(q, m, n, d)?;
    if rows < n || rows > m {
        return Err(Error::BadRowCount { rows, lo: n, hi: m });
    }
    let qb = BigUint::from(q);
    let k = n + 1 - d;
    let lower = Power { base: 2, exponent: qb.pow((k * (m - rows)) as u32) };
    let upper = Power { base: p, exponent: BigUint::from(e as usize * (d - 1) * m) * qb.pow((k * m) as u32) };
    let mut isometry_bound = gl_order(&qb, m) * gl_order(&qb, n) * qb.pow((m * n) as u32) * BigUint::from(e);
    if m == n {
        isometry_bound *= 2u32;
    }
    let inequivalent_lower = lower.value().map(|v| (&v + &isometry_bound - BigUint::one()) / &isometry_bound);
    Ok(CountBounds { lower, upper, isometry_bound, inequivalent_lower })
}
