//! Constructive solvers: primitives, logarithmic primitives and closed-form
//! bases, all by exact linear algebra over GF(p).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formscalc::forms::DiffForm;
use crate::formscalc::ring::{Mono, RingRef, TruncPoly, VarKind};
use crate::linalg::SparseSystem;
use crate::scalars::Gf;

pub type PolyKey = (Mono, usize);
pub type FormKey = (Vec<usize>, Mono, usize);

pub fn poly_to_map(f: &TruncPoly) -> BTreeMap<PolyKey, Gf> {
    f.flat_terms().into_iter().map(|(m, k, c)| ((m, k), c)).collect()
}

pub fn form_to_map(a: &DiffForm) -> BTreeMap<FormKey, Gf> {
    let mut out = BTreeMap::new();
    for (idx, c) in a.components() {
        for (m, k, v) in c.flat_terms() {
            out.insert((idx.clone(), m, k), v);
        }
    }
    out
}

fn require_closed_of_degree(form: &DiffForm, degree: usize) -> Result<()> {
    if form.degree() != degree {
        return Err(Error::DegreeOutOfRange(format!("expected a {degree}-form, got degree {}", form.degree())));
    }
    if !form.is_closed() {
        return Err(Error::NotClosed(format!("d({form}) = {}", form.d())));
    }
    Ok(())
}

/// A function `f` with `df = α`, or `None` when α is not exact. The
/// unknowns are the monomials whose derivatives can reach the support of
/// α, so the search is exact with no window.
pub fn solve_primitive(form: &DiffForm) -> Result<Option<TruncPoly>> {
    require_closed_of_degree(form, 1)?;
    let ring = form.ring();
    let order = form.order();
    let mut candidates = std::collections::BTreeSet::new();
    for (idx, c) in form.components() {
        let i = idx[0];
        for m in c.terms().keys() {
            let mut m2 = m.clone();
            m2[i] += 1;
            if ring.admits(&m2) {
                candidates.insert(m2);
            }
        }
    }
    let mut sys = SparseSystem::new(ring.prime());
    let mut unknowns = Vec::new();
    for m in &candidates {
        for k in 0..order {
            let t = TruncPoly::term(ring, m, k, ring.prime().one()).truncate(order);
            sys.push_column(form_to_map(&DiffForm::function(&t).d()));
            unknowns.push((m.clone(), k));
        }
    }
    let Some(x) = sys.solve(&form_to_map(form)) else {
        return Ok(None);
    };
    let mut f = TruncPoly::zero_with_order(ring, order);
    for ((m, k), c) in unknowns.iter().zip(x) {
        f = f.add(&TruncPoly::term(ring, m, *k, c).truncate(order));
    }
    debug_assert_eq!(DiffForm::function(&f).d(), *form);
    Ok(Some(f))
}

/// A unit `g` with `dg = g α`, or `None`. Unknown coefficients range over
/// the solver window of the ring.
pub fn solve_dlog(form: &DiffForm) -> Result<Option<TruncPoly>> {
    require_closed_of_degree(form, 1)?;
    let ring = form.ring();
    let p = ring.prime();
    let order = form.order();
    let monos = ring.window_monomials(0);
    let mut sys = SparseSystem::new(p);
    let mut unknowns = Vec::new();
    for m in &monos {
        for k in 0..order {
            let t = TruncPoly::term(ring, m, k, p.one()).truncate(order);
            let col = DiffForm::function(&t).d().sub(&form.mul_fn(&t));
            sys.push_column(form_to_map(&col));
            unknowns.push((m.clone(), k));
        }
    }
    let kernel = sys.nullspace();
    if kernel.is_empty() {
        return Ok(None);
    }
    let combine = |coeffs: &[Gf]| -> TruncPoly {
        let mut g = TruncPoly::zero_with_order(ring, order);
        for (v, c) in kernel.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for ((m, k), a) in unknowns.iter().zip(v) {
                if !a.is_zero() {
                    g = g.add(&TruncPoly::term(ring, m, *k, *a * *c).truncate(order));
                }
            }
        }
        g
    };
    // A unit has exactly one reduced monomial at h^0, and it involves only
    // Laurent variables.
    let is_reduced = |m: &Mono| m.iter().zip(ring.vars()).all(|(&e, v)| v.kind != VarKind::Truncated || e == 0);
    let reduced: Vec<usize> = unknowns.iter().enumerate().filter(|(_, (m, k))| *k == 0 && is_reduced(m)).map(|(i, _)| i).collect();
    let leads = reduced
        .iter()
        .copied()
        .filter(|&i| unknowns[i].0.iter().zip(ring.vars()).all(|(&e, v)| v.kind == VarKind::Laurent || e == 0));
    for lead in leads {
        let mut pick = SparseSystem::new(p);
        for v in &kernel {
            let col: BTreeMap<usize, Gf> = reduced.iter().map(|&i| (i, v[i])).filter(|(_, c)| !c.is_zero()).collect();
            pick.push_column(col);
        }
        let mut rhs = BTreeMap::new();
        rhs.insert(lead, p.one());
        if let Some(c) = pick.solve(&rhs) {
            let g = combine(&c);
            debug_assert!(g.is_unit());
            debug_assert_eq!(DiffForm::function(&g).d(), form.mul_fn(&g));
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// A GF(p)-basis of the forms of the given degree whose coefficients lie in
/// the solver window (upper end widened by `margin`), for all h-powers.
pub fn window_forms(ring: &RingRef, degree: usize, margin: i32) -> Vec<DiffForm> {
    let monos = ring.window_monomials(margin);
    let n = ring.nvars();
    let mut idxs: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..degree {
        let mut next = Vec::new();
        for idx in &idxs {
            let start = idx.last().map_or(0, |&l| l + 1);
            for j in start..n {
                let mut i2 = idx.clone();
                i2.push(j);
                next.push(i2);
            }
        }
        idxs = next;
    }
    let mut out = Vec::new();
    for idx in &idxs {
        for m in &monos {
            for k in 0..ring.order() {
                let mut f = DiffForm::zero(ring, degree);
                f.add_component(idx.clone(), TruncPoly::term(ring, m, k, ring.prime().one()));
                out.push(f);
            }
        }
    }
    out
}

/// A basis of the closed forms inside the window.
pub fn closed_forms_basis(ring: &RingRef, degree: usize, margin: i32) -> Vec<DiffForm> {
    let all = window_forms(ring, degree, margin);
    let mut sys = SparseSystem::new(ring.prime());
    for f in &all {
        sys.push_column(form_to_map(&f.d()));
    }
    sys.nullspace().iter().map(|v| combine_forms(ring, degree, &all, v)).collect()
}

pub fn combine_forms(ring: &RingRef, degree: usize, basis: &[DiffForm], coeffs: &[Gf]) -> DiffForm {
    let mut out = DiffForm::zero(ring, degree);
    for (f, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.add(&f.scale(*c));
        }
    }
    out
}

/// A 1-form `a` with `da = β` for a closed 2-form β, searching 1-forms in
/// the window widened by one degree.
pub fn solve_primitive_2form(beta: &DiffForm) -> Result<Option<DiffForm>> {
    require_closed_of_degree(beta, 2)?;
    let ring = beta.ring();
    let basis = window_forms(ring, 1, 1);
    let mut sys = SparseSystem::new(ring.prime());
    for f in &basis {
        sys.push_column(form_to_map(&f.d()));
    }
    let Some(x) = sys.solve(&form_to_map(beta)) else {
        return Ok(None);
    };
    let a = combine_forms(ring, 1, &basis, &x).truncate(beta.order());
    if a.d() != *beta {
        return Ok(None);
    }
    Ok(Some(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formscalc::cartier::dlog;
    use crate::formscalc::ring::PolyRing;
    use crate::scalars::Prime;

    fn b(p: u64, n: usize) -> RingRef {
        PolyRing::truncated(Prime::new(p).unwrap(), "x", n, 1).unwrap()
    }

    #[test]
    fn primitive_examples() {
        let r = b(3, 2);
        let x1 = TruncPoly::var(&r, 0);
        let x2 = TruncPoly::var(&r, 1);
        assert_eq!(solve_primitive(&DiffForm::dx(&r, 0)).unwrap(), Some(x1.clone()));
        let a = DiffForm::one_form(&r, &[x2.clone(), x1.clone()]).unwrap();
        assert_eq!(solve_primitive(&a).unwrap(), Some(x1.mul(&x2)));
        let r1 = b(3, 1);
        let top = DiffForm::dx(&r1, 0).mul_fn(&TruncPoly::var(&r1, 0).pow(2));
        assert_eq!(solve_primitive(&top).unwrap(), None);
    }

    #[test]
    fn dlog_examples() {
        let r = b(3, 1);
        let one = TruncPoly::one(&r);
        assert_eq!(solve_dlog(&DiffForm::zero(&r, 1)).unwrap(), Some(one.clone()));
        let g = one.add(&TruncPoly::var(&r, 0));
        let a = dlog(&g).unwrap();
        let found = solve_dlog(&a).unwrap().unwrap();
        assert_eq!(found, g);
        assert_eq!(solve_dlog(&DiffForm::dx(&r, 0)).unwrap(), None);
    }

    #[test]
    fn closed_basis_dimension() {
        // closed 1-forms on k[x]/(x^3): all of them, 3-dimensional
        assert_eq!(closed_forms_basis(&b(3, 1), 1, 0).len(), 3);
    }

    #[test]
    fn two_form_primitive() {
        let r = b(3, 2);
        let beta = DiffForm::dx(&r, 0).wedge(&DiffForm::dx(&r, 1));
        let a = solve_primitive_2form(&beta).unwrap().unwrap();
        assert_eq!(a.d(), beta);
    }
}
