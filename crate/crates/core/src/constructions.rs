//! Gabidulin codes, the twisted constructions with row-supported MRD
//! subcodes, and product codes.

use std::collections::BTreeMap;

use crate::code::{CodeBody, CodeParams, RankCode};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linpoly::LinPoly;
use crate::matrix::{stack, Matrix};
use crate::subspace::{Subspace, Vector};
use crate::tower::Extension;

/// A code together with its row-supported MRD subcode and the data that
/// produced both.
#[derive(Clone, Debug)]
pub struct SubcodePair {
    pub code: RankCode,
    /// The subcode with its zero rows dropped.
    pub subcode: RankCode,
    pub annihilator: LinPoly,
    /// `(e_1..e_m)`; the last `m - m1` entries span `W1`.
    pub domain_basis: Vec<Elem>,
    /// `(f_1..f_n)`, an echelon basis of the image of the annihilator.
    pub image_basis: Vec<Elem>,
    pub eta: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormCondition {
    /// `N(a0) != (-1)^{m(m-d+1)} N_{q^m1/q}(eta)^{m/m1}`.
    Tower,
    /// `N(a0) != (-1)^{m(m-d+1)} N(eta)`.
    General,
    /// `N(eta) not in {(-1)^m, (-1)^m N(a0)}`.
    Square,
}

fn minus_one_pow(ext: &Extension, k: usize) -> Elem {
    let big = ext.big();
    if k.is_multiple_of(2) {
        Elem::ONE
    } else {
        big.neg(Elem::ONE)
    }
}

/// Evaluates the norm inequality for `eta` against the x-coefficient `alpha0`
/// of the annihilator. Signs live in the prime field.
pub fn eta_admissible(ext: &Extension, m1: usize, d: usize, alpha0: Elem, eta: Elem, cond: NormCondition) -> bool {
    let big = ext.big();
    let m = ext.m();
    let n_alpha = ext.abs_norm(alpha0);
    match cond {
        NormCondition::Tower => {
            let q = ext.q() as u64;
            let sub_norm = big.pow(eta, (q.pow(m1 as u32) - 1) / (q - 1));
            let rhs = big.mul(minus_one_pow(ext, m * (m + 1 - d)), big.pow(sub_norm, (m / m1) as u64));
            n_alpha != rhs
        }
        NormCondition::General => n_alpha != big.mul(minus_one_pow(ext, m * (m + 1 - d)), ext.abs_norm(eta)),
        NormCondition::Square => {
            let sign = minus_one_pow(ext, m);
            let n_eta = ext.abs_norm(eta);
            n_eta != sign && n_eta != big.mul(sign, n_alpha)
        }
    }
}

/// Gabidulin code in `B_q(m,n)`: maps `x -> sum_{i<k} a_i x^(q^i)`, with
/// column `j` holding the coordinates of the image of `g_j`. Default
/// generators are `1, t, ..., t^(n-1)`.
pub fn gabidulin(ext: &Extension, n: usize, k: usize, generators: Option<&[Elem]>) -> Result<RankCode> {
    let m = ext.m();
    if k == 0 || k > n || n > m {
        return Err(Error::InvalidParams(format!("need 1 <= k <= n <= m, got k={k} n={n} m={m}")));
    }
    let gens: Vec<Elem> = match generators {
        Some(g) => g.to_vec(),
        None => ext.basis()[..n].to_vec(),
    };
    if gens.len() != n || ext.span(&gens).dim() != n {
        return Err(Error::DependentGenerators);
    }
    let params = CodeParams::new(ext.q(), m, n, n - k + 1)?;
    let mut basis = Vec::with_capacity(m * k);
    for i in 0..k {
        for &beta in ext.basis() {
            let l = LinPoly::monomial(ext, beta, i);
            basis.push(l.evaluation_matrix(&gens, ext.basis())?.transpose());
        }
    }
    RankCode::linear(ext.base(), params, basis)
}

/// `sum a_i x^(q^i)`, plus `eta a_0 x^(q^len)` when twisted.
fn inner_poly(ext: &Extension, tuple: &[Elem], eta: Option<Elem>) -> LinPoly {
    let mut coeffs = tuple.to_vec();
    if let Some(eta) = eta {
        coeffs.push(ext.big().mul(eta, tuple[0]));
    }
    LinPoly::new(ext, &coeffs)
}

fn unit_tuples(len: usize, scalars: &[Elem]) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    for j in 0..len {
        for &b in scalars {
            let mut t = vec![Elem::ZERO; len];
            t[j] = b;
            out.push(t);
        }
    }
    out
}

/// Shared core: the code of `A ∘ inner(a)` over all coefficient tuples and
/// the subcode over the tuples in `s_basis`.
fn build_pair(
    ext: &Extension,
    params: CodeParams,
    m1: usize,
    w: &Subspace,
    w1: &Subspace,
    s_basis: &[Vec<Elem>],
    eta: Option<Elem>,
) -> Result<SubcodePair> {
    let m = ext.m();
    let len = params.n + 1 - params.d;
    let a = LinPoly::annihilator(ext, w)?;
    let image_basis = a.image_basis();
    let mut domain: Vec<Elem> = w1.extend_to_dim(m, None)?.iter().map(|v| ext.from_coords(v)).collect();
    domain.extend(ext.elems_of(w1));
    let matrix_of = |tuple: &[Elem]| -> Result<Matrix> {
        a.compose(&inner_poly(ext, tuple, eta))?.evaluation_matrix(&domain, &image_basis)
    };
    let basis = unit_tuples(len, ext.basis()).iter().map(|t| matrix_of(t)).collect::<Result<Vec<_>>>()?;
    let code = RankCode::linear(ext.base(), params, basis)?;
    let mut sub_basis = Vec::with_capacity(s_basis.len());
    for t in s_basis {
        let x = matrix_of(t)?;
        if !x.row_slice(m1..m).is_zero() {
            return Err(Error::P2Violated);
        }
        sub_basis.push(x.row_slice(0..m1));
    }
    let sub_params = CodeParams::new(ext.q(), m1, params.n, params.d)?;
    let subcode = RankCode::linear(ext.base(), sub_params, sub_basis)?;
    Ok(SubcodePair { code, subcode, annihilator: a, domain_basis: domain, image_basis, eta: eta.unwrap_or(Elem::ZERO) })
}

fn check_twisted_range(m: usize, m1: usize, n: usize, d: usize) -> Result<()> {
    if !(2 <= d && d <= n && n <= m1 && m1 < m) {
        return Err(Error::InvalidParams(format!("need 2 <= d <= n <= m1 < m, got d={d} n={n} m1={m1} m={m}")));
    }
    Ok(())
}

/// The default `W`: `W1` extended by standard basis vectors to dimension `m - n`.
pub fn default_w(w1: &Subspace, dim: usize) -> Result<Subspace> {
    let mut vs: Vec<Vector> = w1.basis().to_vec();
    vs.extend(w1.extend_to_dim(dim, None)?);
    Subspace::span(w1.field(), w1.ambient(), &vs)
}

/// Twisted code over `W ⊇ ker Tr_{q^m/q^m1}` with its subcode from
/// coefficients in GF(q^m1). `eta` defaults to the first admissible element
/// of GF(q^m1).
pub fn construction1(
    ext: &Extension,
    m1: usize,
    n: usize,
    d: usize,
    w: Option<&Subspace>,
    eta: Option<Elem>,
) -> Result<SubcodePair> {
    let m = ext.m();
    check_twisted_range(m, m1, n, d)?;
    if !m.is_multiple_of(m1) {
        return Err(Error::BadTower { m, m1 });
    }
    let w1 = ext.trace_kernel(m1)?;
    let w = match w {
        Some(w) => {
            if w.ambient() != m || w.dim() != m - n {
                return Err(Error::DimensionMismatch(format!("W must have dimension {}", m - n)));
            }
            if !w1.is_subspace_of(w) {
                return Err(Error::BadSubspaceChain);
            }
            w.clone()
        }
        None => default_w(&w1, m - n)?,
    };
    let alpha0 = LinPoly::annihilator(ext, &w)?.coeff(0);
    let eta = match eta {
        Some(e) => {
            if !ext.big().contains(e) || !ext.in_subfield(e, m1) {
                return Err(Error::InvalidParams("eta must lie in GF(q^m1)".into()));
            }
            if !eta_admissible(ext, m1, d, alpha0, e, NormCondition::Tower) {
                return Err(Error::EtaConditionViolated);
            }
            e
        }
        None => ext
            .subfield_elements(m1)?
            .into_iter()
            .find(|&e| eta_admissible(ext, m1, d, alpha0, e, NormCondition::Tower))
            .ok_or(Error::EtaConditionViolated)?,
    };
    let s_basis = unit_tuples(n + 1 - d, &ext.subfield_basis(m1)?);
    build_pair(ext, CodeParams::new(ext.q(), m, n, d)?, m1, &w, &w1, &s_basis, Some(eta))
}

/// The general twisted construction: explicit `W`, `W1`, and a GF(q)-basis of
/// the coefficient set `S`, checked against the dimension, containment and
/// norm conditions before building.
#[allow(clippy::too_many_arguments)]
pub fn construction2(
    ext: &Extension,
    m1: usize,
    n: usize,
    d: usize,
    w: &Subspace,
    w1: &Subspace,
    s_basis: &[Vec<Elem>],
    eta: Elem,
) -> Result<SubcodePair> {
    let m = ext.m();
    check_twisted_range(m, m1, n, d)?;
    let len = n + 1 - d;
    if w.ambient() != m || w.dim() != m - n {
        return Err(Error::P1Violated(format!("dim W = {}, expected {}", w.dim(), m - n)));
    }
    if w1.ambient() != m || w1.dim() != m - m1 {
        return Err(Error::P1Violated(format!("dim W1 = {}, expected {}", w1.dim(), m - m1)));
    }
    if s_basis.iter().any(|t| t.len() != len) {
        return Err(Error::P1Violated(format!("S tuples must have length {len}")));
    }
    let flat: Vec<Vector> = s_basis.iter().map(|t| t.iter().flat_map(|&a| ext.coords(a)).collect()).collect();
    let s_dim = Subspace::span(ext.base(), m * len, &flat)?.dim();
    if s_dim != m1 * len || s_basis.len() != s_dim {
        return Err(Error::P1Violated(format!("dim S = {s_dim}, expected {}", m1 * len)));
    }
    for t in s_basis {
        let inner = inner_poly(ext, t, Some(eta));
        for w1v in ext.elems_of(w1) {
            if !w.contains(&ext.coords(inner.eval(w1v))) {
                return Err(Error::P2Violated);
            }
        }
    }
    let alpha0 = LinPoly::annihilator(ext, w)?.coeff(0);
    if !eta_admissible(ext, m1, d, alpha0, eta, NormCondition::General) {
        return Err(Error::EtaConditionViolated);
    }
    build_pair(ext, CodeParams::new(ext.q(), m, n, d)?, m1, w, w1, s_basis, Some(eta))
}

/// The coefficient tuple `(a_0, .., a_{mu(l-2)})` with `a_{j mu} = sum_{t<=j} a_0^(q^(t mu))`
/// and zeros elsewhere.
pub fn subtract_many_tuple(ext: &Extension, mu: usize, ell: usize, a0: Elem) -> Vec<Elem> {
    let big = ext.big();
    let mut t = vec![Elem::ZERO; mu * (ell - 2) + 1];
    let mut acc = Elem::ZERO;
    for j in 0..ell - 1 {
        acc = big.add(acc, ext.frobenius(a0, (j * mu) as i64));
        t[j * mu] = acc;
    }
    t
}

/// Both sides of `(x^(q^mu) - x) ∘ inner = -a_0 (x + x^(q^mu) + ... + x^(q^((l-1)mu)))`.
pub fn subtract_many_identity(ext: &Extension, mu: usize, ell: usize, a0: Elem) -> Result<(LinPoly, LinPoly)> {
    let big = ext.big();
    let outer = LinPoly::monomial(ext, Elem::ONE, mu).sub(&LinPoly::identity(ext))?;
    let lhs = outer.compose(&LinPoly::new(ext, &subtract_many_tuple(ext, mu, ell, a0)))?;
    let rhs = LinPoly::trace_poly(ext, mu)?.scale(big.neg(a0));
    Ok((lhs, rhs))
}

/// MRD code of distance `mu` in `B_q(mu l, mu(l-1))` whose subcode on the
/// first `mu` rows is MRD in the wide orientation `B_q(mu, mu(l-1))`.
pub fn subtract_many(q: u32, mu: usize, ell: usize) -> Result<SubcodePair> {
    if mu < 1 || ell < 2 {
        return Err(Error::InvalidParams(format!("need mu >= 1 and l >= 2, got mu={mu} l={ell}")));
    }
    let m = mu * ell;
    let n = mu * (ell - 1);
    let ext = Extension::new(q, m)?;
    let w = ext.span(&ext.subfield_elements(mu)?);
    let w1 = ext.trace_kernel(mu)?;
    let s_basis: Vec<Vec<Elem>> =
        ext.elems_of(&w1).into_iter().map(|a0| subtract_many_tuple(&ext, mu, ell, a0)).collect();
    build_pair(&ext, CodeParams::new(q, m, n, mu)?, mu, &w, &w1, &s_basis, None)
}

/// `{A ∘ (a_0 x + eta a_0 x^q)}` for `n = m1 = d` not dividing `m`, over the
/// standard domain basis. `W` defaults to the span of the first `m - n`
/// standard basis vectors.
pub fn wedderburn_code(ext: &Extension, n: usize, eta: Elem, w: Option<&Subspace>) -> Result<RankCode> {
    let m = ext.m();
    if n < 2 || n >= m {
        return Err(Error::InvalidParams(format!("need 2 <= n < m, got n={n} m={m}")));
    }
    if m.is_multiple_of(n) {
        return Err(Error::BadParameters(format!("{n} divides {m}; use the tower construction")));
    }
    let w = match w {
        Some(w) if w.ambient() == m && w.dim() == m - n => w.clone(),
        Some(_) => return Err(Error::DimensionMismatch(format!("W must have dimension {}", m - n))),
        None => default_w(&Subspace::zero(ext.base(), m), m - n)?,
    };
    let a = LinPoly::annihilator(ext, &w)?;
    if !ext.big().contains(eta) || !eta_admissible(ext, n, n, a.coeff(0), eta, NormCondition::Square) {
        return Err(Error::EtaConditionViolated);
    }
    let image_basis = a.image_basis();
    let basis = ext
        .basis()
        .iter()
        .map(|&b| a.compose(&inner_poly(ext, &[b], Some(eta)))?.evaluation_matrix(ext.basis(), &image_basis))
        .collect::<Result<Vec<_>>>()?;
    RankCode::linear(ext.base(), CodeParams::new(ext.q(), m, n, n)?, basis)
}

/// Admissible twists for [`wedderburn_code`], in element order.
pub fn wedderburn_etas(ext: &Extension, n: usize) -> Result<Vec<Elem>> {
    let m = ext.m();
    let w = default_w(&Subspace::zero(ext.base(), m), m - n)?;
    let alpha0 = LinPoly::annihilator(ext, &w)?.coeff(0);
    Ok(ext.big().elements().filter(|&e| eta_admissible(ext, n, n, alpha0, e, NormCondition::Square)).collect())
}

fn check_stackable(top: &CodeParams, bottom: &CodeParams) -> Result<()> {
    if top.q != bottom.q || top.n != bottom.n || top.d != bottom.d {
        return Err(Error::ParamMismatch(format!(
            "(q,n,d) = ({},{},{}) vs ({},{},{})",
            top.q, top.n, top.d, bottom.q, bottom.n, bottom.d
        )));
    }
    if top.n > top.m || bottom.n > bottom.m {
        return Err(Error::ParamMismatch("both factors need n <= m".into()));
    }
    Ok(())
}

/// `{[X'; X''] : X' in C', X'' in C''}`; linear when both factors are.
pub fn product(top: &RankCode, bottom: &RankCode) -> Result<RankCode> {
    let (pt, pb) = (top.params(), bottom.params());
    check_stackable(&pt, &pb)?;
    if top.field() != bottom.field() {
        return Err(Error::FieldMismatch);
    }
    if !top.is_mrd() || !bottom.is_mrd() {
        return Err(Error::NotMrdInput);
    }
    let f = top.field();
    let params = CodeParams::new(pt.q, pt.m + pb.m, pt.n, pt.d)?;
    match (top.body(), bottom.body()) {
        (CodeBody::Linear(a), CodeBody::Linear(b)) => {
            let mut basis = Vec::with_capacity(a.len() + b.len());
            for x in a {
                basis.push(stack(x, &Matrix::zeros(pb.m, pb.n))?);
            }
            for y in b {
                basis.push(stack(&Matrix::zeros(pt.m, pt.n), y)?);
            }
            RankCode::linear(f, params, basis)
        }
        _ => {
            let tops = top.members()?;
            let mut words = Vec::new();
            for y in bottom.members()? {
                for x in &tops {
                    words.push(stack(x, &y)?);
                }
            }
            RankCode::explicit(f, params, words)
        }
    }
}

/// `{[X'; X''] : X'' in C'', X' in C'_{X''}}` for a family indexed by `C''`.
pub fn product_switched(bottom: &RankCode, family: &BTreeMap<Matrix, RankCode>) -> Result<RankCode> {
    let pb = bottom.params();
    let f = bottom.field();
    let mut top_params: Option<CodeParams> = None;
    let mut words = Vec::new();
    for y in bottom.members()? {
        let c = family.get(&y).ok_or(Error::FamilyIncomplete)?;
        let pt = c.params();
        if top_params.is_some_and(|p| p != pt) {
            return Err(Error::ParamMismatch("family members have different parameters".into()));
        }
        check_stackable(&pt, &pb)?;
        top_params = Some(pt);
        for x in c.members()? {
            words.push(stack(&x, &y)?);
        }
    }
    let pt = top_params.ok_or(Error::FamilyIncomplete)?;
    RankCode::explicit(f, CodeParams::new(pt.q, pt.m + pb.m, pt.n, pt.d)?, words)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_gabidulin() {
        let ext = Extension::new(2, 2).unwrap();
        let c = gabidulin(&ext, 2, 1, None).unwrap();
        assert_eq!(c.cardinality(), 4);
        assert_eq!(c.min_rank_distance().unwrap(), 2);
        assert!(c.is_mrd());
        assert_eq!(c.rank_weight_distribution().unwrap().counts, vec![1, 0, 3]);
        let full = gabidulin(&ext, 2, 2, None).unwrap();
        assert_eq!(full.cardinality(), 16);
        assert_eq!(full.min_rank_distance().unwrap(), 1);
        let g = gabidulin(&Extension::new(2, 4).unwrap(), 2, 1, None).unwrap();
        assert_eq!(g.cardinality(), 16);
        assert!(g.is_mrd());
    }

    #[test]
    fn dependent_generators() {
        let ext = Extension::new(2, 3).unwrap();
        let one = ext.unit(0);
        assert!(matches!(gabidulin(&ext, 2, 1, Some(&[one, one])), Err(Error::DependentGenerators)));
    }

    #[test]
    fn construction1_small() {
        let ext = Extension::new(2, 4).unwrap();
        let pair = construction1(&ext, 2, 2, 2, None, None).unwrap();
        assert_eq!(pair.eta, Elem::ZERO);
        assert_eq!(pair.code.dim(), Some(4));
        assert!(pair.code.is_mrd());
        assert_eq!(pair.subcode.dim(), Some(2));
        assert_eq!(pair.subcode.params().m, 2);
        assert!(pair.subcode.is_mrd());
        // Every nonzero norm in GF(16) over GF(2) is 1, so a nonzero twist
        // collides with N(alpha0) = 1.
        let t = ext.subfield_elements(2).unwrap()[2];
        assert!(matches!(construction1(&ext, 2, 2, 2, None, Some(t)), Err(Error::EtaConditionViolated)));
        let ext6 = Extension::new(2, 6).unwrap();
        assert!(matches!(construction1(&ext6, 4, 2, 2, None, None), Err(Error::BadTower { .. })));
    }

    #[test]
    fn twists_in_odd_characteristic() {
        let mut nonzero_twists = 0;
        for (m, m1) in [(4, 2), (6, 2), (6, 3)] {
            let ext = Extension::new(3, m).unwrap();
            let a0 = construction1(&ext, m1, 2, 2, None, None).unwrap().annihilator.coeff(0);
            for e in ext.subfield_elements(m1).unwrap() {
                let res = construction1(&ext, m1, 2, 2, None, Some(e));
                if eta_admissible(&ext, m1, 2, a0, e, NormCondition::Tower) {
                    let pair = res.unwrap();
                    assert!(pair.code.is_mrd());
                    assert!(pair.subcode.is_mrd());
                    nonzero_twists += usize::from(!e.is_zero());
                } else {
                    assert!(matches!(res, Err(Error::EtaConditionViolated)));
                }
            }
        }
        assert!(nonzero_twists > 0);
    }

    #[test]
    fn sign_term_in_odd_characteristic() {
        let ext = Extension::new(3, 3).unwrap();
        // m(m-d+1) = 3*2 even; m = 3 odd for the square condition.
        let big = ext.big();
        let one = Elem::ONE;
        assert!(!eta_admissible(&ext, 1, 2, one, one, NormCondition::General));
        let minus = big.neg(one);
        assert_eq!(ext.abs_norm(minus), minus);
        // (-1)^3 = -1 = N(-1), so eta = -1 is excluded by the square condition.
        assert!(!eta_admissible(&ext, 2, 2, one, minus, NormCondition::Square));
        assert!(eta_admissible(&ext, 2, 2, one, Elem::ZERO, NormCondition::Square));
    }

    #[test]
    fn construction2_lifts_construction1() {
        let ext = Extension::new(2, 4).unwrap();
        let c1 = construction1(&ext, 2, 2, 2, None, None).unwrap();
        let w1 = ext.trace_kernel(2).unwrap();
        let w = default_w(&w1, 2).unwrap();
        let s = unit_tuples(1, &ext.subfield_basis(2).unwrap());
        let c2 = construction2(&ext, 2, 2, 2, &w, &w1, &s, Elem::ZERO).unwrap();
        assert_eq!(c1.code, c2.code);
        assert_eq!(c1.subcode, c2.subcode);
        let mut broken = s.clone();
        broken[0][0] = ext.unit(1);
        broken[1][0] = ext.unit(2);
        assert!(construction2(&ext, 2, 2, 2, &w, &w1, &broken, Elem::ZERO).is_err());
    }

    #[test]
    fn subtract_many_small() {
        let pair = subtract_many(2, 2, 2).unwrap();
        assert_eq!(pair.code.cardinality(), 16);
        assert!(pair.code.is_mrd());
        assert_eq!(pair.subcode.cardinality(), 4);
        assert!(pair.subcode.is_mrd());
    }

    #[test]
    fn wedderburn_small() {
        let ext = Extension::new(2, 3).unwrap();
        let etas = wedderburn_etas(&ext, 2).unwrap();
        assert_eq!(etas, vec![Elem::ZERO]);
        let c = wedderburn_code(&ext, 2, Elem::ZERO, None).unwrap();
        assert_eq!(c.cardinality(), 8);
        assert!(c.is_mrd());
        assert!(matches!(wedderburn_code(&ext, 2, Elem::ONE, None), Err(Error::EtaConditionViolated)));
        let ext4 = Extension::new(2, 4).unwrap();
        assert!(matches!(wedderburn_code(&ext4, 2, Elem::ZERO, None), Err(Error::BadParameters(_))));
    }

    #[test]
    fn products() {
        let g = gabidulin(&Extension::new(2, 2).unwrap(), 2, 1, None).unwrap();
        let p = product(&g, &g).unwrap();
        assert!(p.is_linear());
        assert_eq!(p.cardinality(), 16);
        assert!(p.is_mrd());
        let family: BTreeMap<Matrix, RankCode> = g.members().unwrap().into_iter().map(|y| (y, g.clone())).collect();
        let ps = product_switched(&g, &family).unwrap();
        assert!(ps.same_members(&p).unwrap());
        let mut short = family.clone();
        short.pop_first();
        assert!(matches!(product_switched(&g, &short), Err(Error::FamilyIncomplete)));
    }
}
