//! Replacing row-supported MRD subcodes (and their cosets) by other MRD codes.

use crate::code::{coset_decomposition, CodeParams, CosetDecomposition, RankCode, PAIR_CAP};
use crate::constructions::{gabidulin, product};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::subspace::Subspace;
use crate::tower::Extension;

/// What happens to one coset `x + (C ∩ S)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Directive {
    Keep,
    /// `x + (C ∩ S) + y` for `y` in `B_q(m',n)`.
    Translate(Matrix),
    /// `x + R` for an MRD code `R` in `B_q(m',n)`.
    Replace(RankCode),
}

/// One directive per coset, bound by index to the sorted canonical
/// representatives of the coset decomposition at `rows`.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchPlan {
    pub rows: usize,
    pub directives: Vec<Directive>,
}

impl SwitchPlan {
    pub fn keep_all(rows: usize, cosets: usize) -> SwitchPlan {
        SwitchPlan { rows, directives: vec![Directive::Keep; cosets] }
    }
}

fn check_replacement(r: &RankCode, want: CodeParams, c: &RankCode) -> Result<()> {
    if r.params() != want || r.field() != c.field() {
        return Err(Error::ParamMismatch(format!(
            "replacement must live in B_{}({},{}) with d = {}",
            want.q, want.m, want.n, want.d
        )));
    }
    if !r.is_mrd() {
        return Err(Error::NotMrdInput);
    }
    Ok(())
}

fn subcode_params(c: &RankCode, rows: usize) -> Result<CodeParams> {
    let p = c.params();
    if rows < p.n || rows > p.m {
        return Err(Error::BadRowCount { rows, lo: p.n, hi: p.m });
    }
    Ok(CodeParams { m: rows, ..p })
}

/// `C - (C ∩ S) + R`, where `S` is the set of matrices vanishing below row
/// `rows`. Returns `C` itself when `R` is `C ∩ S`.
pub fn switch_subcode(c: &RankCode, rows: usize, r: &RankCode) -> Result<RankCode> {
    let want = subcode_params(c, rows)?;
    check_replacement(r, want, c)?;
    let p = c.params();
    let members = c.members()?;
    let (inside, outside): (Vec<Matrix>, Vec<Matrix>) =
        members.into_iter().partition(|x| x.row_slice(rows..p.m).is_zero());
    let sub: Vec<Matrix> = inside.iter().map(|x| x.row_slice(0..rows)).collect();
    let sub = RankCode::explicit(c.field(), want, sub)?;
    if !sub.is_mrd() {
        return Err(Error::SubcodeNotMrd);
    }
    if sub.same_members(r)? {
        return Ok(c.clone());
    }
    let mut words = outside;
    words.extend(r.members()?.into_iter().map(|x| x.pad_rows(p.m - rows)));
    RankCode::explicit(c.field(), p, words)
}

/// Applies a plan to a linear code. An all-keep plan (or one whose
/// replacements coincide with the subcode) returns the input unchanged.
pub fn apply_switch_plan(c: &RankCode, plan: &SwitchPlan) -> Result<RankCode> {
    let dec = coset_decomposition(c, plan.rows)?;
    apply_with_decomposition(c, &dec, plan)
}

pub fn apply_with_decomposition(c: &RankCode, dec: &CosetDecomposition, plan: &SwitchPlan) -> Result<RankCode> {
    let p = c.params();
    let rows = plan.rows;
    let want = subcode_params(c, rows)?;
    if dec.rows != rows {
        return Err(Error::ParamMismatch("plan and decomposition use different row counts".into()));
    }
    if plan.directives.len() != dec.cosets.len() {
        return Err(Error::ParamMismatch(format!(
            "plan has {} directives for {} cosets",
            plan.directives.len(),
            dec.cosets.len()
        )));
    }
    if !dec.restricted.is_mrd() {
        return Err(Error::SubcodeNotMrd);
    }
    let f = c.field();
    let mut changed = false;
    let mut words = Vec::with_capacity(c.cardinality() as usize);
    for (coset, dir) in dec.cosets.iter().zip(&plan.directives) {
        let x = &coset.representative;
        match dir {
            Directive::Keep => words.extend(coset.members.iter().cloned()),
            Directive::Translate(y) => {
                if y.shape() != (rows, p.n) {
                    return Err(Error::ShapeMismatch(format!("translation must be {rows}x{}", p.n)));
                }
                y.check_field(f)?;
                let y = y.pad_rows(p.m - rows);
                changed |= !dec.subcode.contains(&y);
                words.extend(coset.members.iter().map(|w| w.add(f, &y)));
            }
            Directive::Replace(r) => {
                check_replacement(r, want, c)?;
                changed |= !dec.restricted.same_members(r)?;
                words.extend(r.members()?.into_iter().map(|w| w.pad_rows(p.m - rows).add(f, x)));
            }
        }
    }
    if !changed {
        return Ok(c.clone());
    }
    let out = RankCode::explicit(f, p, words)?;
    if out.cardinality().pow(2) <= PAIR_CAP && !out.is_mrd() {
        return Err(Error::SwitchedNotMrd);
    }
    Ok(out)
}

/// Every plan that replaces each coset by one of `replacements`, in
/// lexicographic order of the choice indices (last coset fastest).
pub struct SwitchCensus<'a> {
    code: &'a RankCode,
    dec: CosetDecomposition,
    replacements: Vec<RankCode>,
    next: Option<Vec<usize>>,
}

impl<'a> SwitchCensus<'a> {
    pub fn total(&self) -> u128 {
        (self.replacements.len() as u128).checked_pow(self.dec.cosets.len() as u32).unwrap_or(u128::MAX)
    }

    pub fn decomposition(&self) -> &CosetDecomposition {
        &self.dec
    }

    pub fn plan_for(&self, choice: &[usize]) -> SwitchPlan {
        SwitchPlan {
            rows: self.dec.rows,
            directives: choice.iter().map(|&i| Directive::Replace(self.replacements[i].clone())).collect(),
        }
    }
}

impl Iterator for SwitchCensus<'_> {
    type Item = Result<(Vec<usize>, RankCode)>;

    fn next(&mut self) -> Option<Self::Item> {
        let choice = self.next.take()?;
        let mut succ = choice.clone();
        let k = self.replacements.len();
        let mut i = succ.len();
        self.next = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < k {
                break Some(succ);
            }
            succ[i] = 0;
        };
        let plan = self.plan_for(&choice);
        Some(apply_with_decomposition(self.code, &self.dec, &plan).map(|c| (choice, c)))
    }
}

pub fn enumerate_switched<'a>(c: &'a RankCode, rows: usize, replacements: Vec<RankCode>) -> Result<SwitchCensus<'a>> {
    let dec = coset_decomposition(c, rows)?;
    let want = subcode_params(c, rows)?;
    for r in &replacements {
        check_replacement(r, want, c)?;
    }
    let next = if replacements.is_empty() { None } else { Some(vec![0; dec.cosets.len()]) };
    Ok(SwitchCensus { code: c, dec, replacements, next })
}

/// Returns `M` if `x` is not a codeword; otherwise the image of `M` under
/// adding row `i` to row `j`, where `i` is the first nonzero row of `x` and
/// `j` the smallest other row index.
pub fn avoid_vector_code(code: &RankCode, x: &Matrix) -> Result<RankCode> {
    let p = code.params();
    let basis = code.basis().ok_or(Error::NotLinear)?;
    if p.d < 2 {
        return Err(Error::InvalidParams("needs distance at least 2".into()));
    }
    if code.cardinality() < 2 {
        return Err(Error::TooSmall);
    }
    if x.is_zero() {
        return Err(Error::InvalidParams("the avoided matrix must be nonzero".into()));
    }
    if !code.contains(x) {
        return Ok(code.clone());
    }
    if p.m < 2 {
        return Err(Error::NoAlternativeRow);
    }
    let i = (0..p.m).find(|&i| x.row(i).iter().any(|e| !e.is_zero())).expect("x is nonzero");
    let j = if i == 0 { 1 } else { 0 };
    let f = code.field();
    RankCode::linear(f, p, basis.iter().map(|b| b.add_row_to(f, i, j)).collect())
}

/// `[M_0 = M, M_1, .., M_k]` with `dim(M_0 ∩ .. ∩ M_k) <= dim M - k`; each
/// step avoids the first basis vector of the running intersection.
pub fn shrink_intersection_family(code: &RankCode, k: usize) -> Result<Vec<RankCode>> {
    let p = code.params();
    let dim = code.dim().ok_or(Error::NotLinear)?;
    if k > dim {
        return Err(Error::InvalidParams(format!("k = {k} exceeds dim M = {dim}")));
    }
    let mut family = vec![code.clone()];
    let mut common = code.subspace().expect("linear");
    for _ in 0..k {
        if common.dim() == 0 {
            family.push(code.clone());
            continue;
        }
        let x = Matrix::from_vec(p.m, p.n, common.basis()[0].clone())?;
        let next = avoid_vector_code(code, &x)?;
        common = common.intersect(&next.subspace().expect("linear"))?;
        family.push(next);
    }
    Ok(family)
}

fn check_switchable_range(m: usize, n: usize, d: usize) -> Result<()> {
    if !(1 < d && d <= n && 2 * n <= m) {
        return Err(Error::ParamOutOfRange(format!("need 1 < d <= n <= m/2, got m={m} n={n} d={d}")));
    }
    Ok(())
}

fn rho_at(q: u32, m: usize, n: usize, d: usize, rows: usize) -> u128 {
    let k = (n + 1 - d) as u128;
    let reps = (q as u128).checked_pow(((m - rows) * (n + 1 - d)) as u32).unwrap_or(u128::MAX);
    let free = reps.saturating_sub((m - rows) as u128 * k + 1);
    ((rows * (d - 1)) as u128).min(free)
}

/// `(rho, m')` with `m'` the smallest maximizer over `n..=m-n`.
pub fn affine_rank_gain(q: u32, m: usize, n: usize, d: usize) -> Result<(usize, usize)> {
    check_switchable_range(m, n, d)?;
    let mut best = (0u128, n);
    for rows in n..=m - n {
        let r = rho_at(q, m, n, d, rows);
        if r > best.0 {
            best = (r, rows);
        }
    }
    Ok((best.0 as usize, best.1))
}

/// A Gabidulin product `C = ⋃ (M + x)` in `B_q(m,n)` with `M` on the first
/// `rows` rows.
pub fn gabidulin_product(q: u32, m: usize, n: usize, d: usize, rows: usize) -> Result<RankCode> {
    let k = n + 1 - d;
    let top = gabidulin(&Extension::new(q, rows)?, n, k, None)?;
    let bottom = gabidulin(&Extension::new(q, m - rows)?, n, k, None)?;
    product(&top, &bottom)
}

/// MRD code of affine rank exactly `target` obtained by translating cosets
/// of a Gabidulin product code.
pub fn build_affine_rank_code(q: u32, m: usize, n: usize, d: usize, target: usize) -> Result<RankCode> {
    let (rho, rows) = affine_rank_gain(q, m, n, d)?;
    let base = m * (n + 1 - d);
    if target < base || target > base + rho {
        return Err(Error::TargetOutOfRange { target, lo: base, hi: base + rho });
    }
    let c = gabidulin_product(q, m, n, d, rows)?;
    let k = target - base;
    if k == 0 {
        return Ok(c);
    }
    let dec = coset_decomposition(&c, rows)?;
    let f = c.field();
    let p = c.params();

    // P': representatives that enlarge <M, P'> until it is all of C.
    let mut span = dec.subcode.subspace().expect("linear");
    let full = c.dim().expect("linear");
    let mut in_p_prime = vec![false; dec.cosets.len()];
    for (idx, coset) in dec.cosets.iter().enumerate() {
        if span.dim() == full {
            break;
        }
        let v = coset.representative.data();
        if !span.contains(v) {
            let mut vs = span.basis().to_vec();
            vs.push(v.to_vec());
            span = Subspace::span(f, p.m * p.n, &vs)?;
            in_p_prime[idx] = true;
        }
    }

    // Z: unit matrices completing <M> to all of B_q(rows, n).
    let z = dec.restricted.subspace().expect("linear").extend_to_dim(rows * n, None)?;

    let mut plan = SwitchPlan::keep_all(rows, dec.cosets.len());
    let mut used = 0;
    for (idx, coset) in dec.cosets.iter().enumerate() {
        if used == k {
            break;
        }
        if in_p_prime[idx] || coset.representative.is_zero() {
            continue;
        }
        plan.directives[idx] = Directive::Translate(Matrix::from_vec(rows, n, z[used].clone())?);
        used += 1;
    }
    apply_with_decomposition(&c, &dec, &plan)
}

/// Aperiodic MRD code: the first `r + 1` cosets of `M = Gab(q, n, n, n-d+1)`
/// in a product code are replaced by a shrinking family `M_0..M_r`, where
/// `r = dim M = n(n-d+1)`.
pub fn build_aperiodic_code(q: u32, m: usize, n: usize, d: usize) -> Result<RankCode> {
    check_switchable_range(m, n, d)?;
    let c = gabidulin_product(q, m, n, d, n)?;
    let dec = coset_decomposition(&c, n)?;
    let r = dec.restricted.dim().expect("linear");
    if dec.cosets.len() <= r {
        return Err(Error::NotEnoughCosets { have: dec.cosets.len(), need: r + 1 });
    }
    let family = shrink_intersection_family(&dec.restricted, r)?;
    let mut plan = SwitchPlan::keep_all(n, dec.cosets.len());
    for (i, mi) in family.into_iter().enumerate().skip(1) {
        plan.directives[i] = Directive::Replace(mi);
    }
    apply_with_decomposition(&c, &dec, &plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gab22() -> RankCode {
        gabidulin(&Extension::new(2, 2).unwrap(), 2, 1, None).unwrap()
    }

    #[test]
    fn identity_switch_returns_input() {
        let c = gabidulin_product(2, 4, 2, 2, 2).unwrap();
        let dec = coset_decomposition(&c, 2).unwrap();
        assert_eq!(dec.cosets.len(), 4);
        assert_eq!(switch_subcode(&c, 2, &dec.restricted).unwrap(), c);
        assert_eq!(apply_switch_plan(&c, &SwitchPlan::keep_all(2, 4)).unwrap(), c);
    }

    #[test]
    fn product_cosets_are_indexed_by_the_bottom_factor() {
        let g = gab22();
        let c = product(&g, &g).unwrap();
        let dec = coset_decomposition(&c, 2).unwrap();
        let bottoms: Vec<Matrix> = dec.cosets.iter().map(|k| k.representative.row_slice(2..4)).collect();
        let mut expect = g.members().unwrap();
        expect.sort();
        assert_eq!(bottoms, expect);
        for k in &dec.cosets {
            assert!(k.representative.row_slice(0..2).is_zero());
        }
    }

    #[test]
    fn translating_one_coset() {
        let c = gabidulin_product(2, 4, 2, 2, 2).unwrap();
        let mut plan = SwitchPlan::keep_all(2, 4);
        plan.directives[1] = Directive::Translate(Matrix::unit(2, 2, 0, 0));
        let out = apply_switch_plan(&c, &plan).unwrap();
        assert!(out.is_mrd());
        assert!(!out.same_members(&c).unwrap());
    }

    #[test]
    fn switch_back_restores() {
        let c = gabidulin_product(2, 4, 2, 2, 2).unwrap();
        let sub = coset_decomposition(&c, 2).unwrap().restricted;
        let moved = sub.translate(&Matrix::unit(2, 2, 1, 1)).unwrap();
        let switched = switch_subcode(&c, 2, &moved).unwrap();
        assert!(switched.is_mrd());
        let back = switch_subcode(&switched, 2, &sub).unwrap();
        assert!(back.same_members(&c).unwrap());
    }

    #[test]
    fn non_mrd_subcode_is_reported() {
        // Gab(2,4,2,1) has no MRD subcode on its first two rows.
        let c = gabidulin(&Extension::new(2, 4).unwrap(), 2, 1, None).unwrap();
        let r = gab22();
        let res = switch_subcode(&c, 2, &r);
        assert!(matches!(res, Err(Error::SubcodeNotMrd)), "{res:?}");
    }

    #[test]
    fn avoid_vector() {
        let g = gab22();
        let f = g.field().clone();
        let x = g.basis().unwrap()[0].clone();
        let d = avoid_vector_code(&g, &x).unwrap();
        assert!(!d.contains(&x));
        assert!(d.is_mrd());
        let i = (0..2).find(|&i| x.row(i).iter().any(|e| !e.is_zero())).unwrap();
        assert_eq!(x.sub(&f, &x.add_row_to(&f, i, 1 - i)).rank(&f), 1);
        let outside = Matrix::unit(2, 2, 0, 0);
        if !g.contains(&outside) {
            assert_eq!(avoid_vector_code(&g, &outside).unwrap(), g);
        }
    }

    #[test]
    fn shrinking_family() {
        let g = gab22();
        assert_eq!(shrink_intersection_family(&g, 0).unwrap(), vec![g.clone()]);
        let fam = shrink_intersection_family(&g, 2).unwrap();
        assert_eq!(fam.len(), 3);
        let mut common = g.subspace().unwrap();
        for c in &fam {
            common = common.intersect(&c.subspace().unwrap()).unwrap();
            assert!(c.is_mrd());
        }
        assert_eq!(common.dim(), 0);
        assert!(fam[1] != fam[0] && fam[1] != fam[2]);
    }

    #[test]
    fn rho_values() {
        assert_eq!(affine_rank_gain(2, 4, 2, 2).unwrap(), (1, 2));
        assert_eq!(affine_rank_gain(2, 6, 2, 2).unwrap(), (3, 3));
        assert!(matches!(build_affine_rank_code(2, 4, 2, 2, 6), Err(Error::TargetOutOfRange { .. })));
        assert!(matches!(build_aperiodic_code(2, 3, 2, 2), Err(Error::ParamOutOfRange(_))));
    }

    #[test]
    fn census_order_and_count() {
        let c = gabidulin_product(2, 4, 2, 2, 2).unwrap();
        let sub = coset_decomposition(&c, 2).unwrap().restricted;
        let other = sub.translate(&Matrix::unit(2, 2, 0, 0)).unwrap();
        let census = enumerate_switched(&c, 2, vec![sub, other]).unwrap();
        assert_eq!(census.total(), 16);
        let all: Vec<(Vec<usize>, RankCode)> = census.map(|r| r.unwrap()).collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].0, vec![0, 0, 0, 0]);
        assert_eq!(all[0].1, c);
        assert_eq!(all[1].0, vec![0, 0, 0, 1]);
    }
}
