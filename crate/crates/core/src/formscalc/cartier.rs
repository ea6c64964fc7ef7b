//! The Cartier operator on closed 1-forms and the logarithmic defect.

use crate::error::{Error, Result};
use crate::formscalc::forms::DiffForm;
use crate::formscalc::ring::{RingRef, TruncPoly};

fn require_closed(form: &DiffForm) -> Result<()> {
    if form.degree() != 1 {
        return Err(Error::DegreeOutOfRange(format!("expected a 1-form, got degree {}", form.degree())));
    }
    if !form.is_closed() {
        return Err(Error::NotClosed(format!("d({form}) = {}", form.d())));
    }
    Ok(())
}

/// `C(α)` over the twisted ring: its components `c_i` satisfy
/// `c_i(x^p) = −∂_i^{p−1} f_i`.
pub fn cartier(form: &DiffForm, twisted: &RingRef) -> Result<DiffForm> {
    require_closed(form)?;
    let p = form.ring().prime().get() as usize;
    let comps = form
        .one_form_components()
        .iter()
        .enumerate()
        .map(|(i, f)| f.nth_derivative(i, p - 1).neg().pth_root(twisted))
        .collect::<Result<Vec<_>>>()?;
    DiffForm::one_form(twisted, &comps)
}

/// Cartier operator on functions: p-th root extraction.
pub fn cartier_function(f: &TruncPoly, twisted: &RingRef) -> Result<TruncPoly> {
    f.pth_root(twisted)
}

/// `α' − C(α)`, the differential of the two-term complex.
pub fn twist_minus_cartier(form: &DiffForm, twisted: &RingRef) -> Result<DiffForm> {
    Ok(form.twist(twisted)?.sub(&cartier(form, twisted)?))
}

/// The components `α_i^p + ∂_i^{p−1} α_i`; all zero exactly when the
/// connection `h d + h α` has vanishing p-curvature along coordinate fields.
pub fn log_defect(form: &DiffForm) -> Result<Vec<TruncPoly>> {
    require_closed(form)?;
    let p = form.ring().prime().get() as usize;
    Ok(form
        .one_form_components()
        .iter()
        .enumerate()
        .map(|(i, f)| f.pow(p as u64).add(&f.nth_derivative(i, p - 1)))
        .collect())
}

/// `dg/g` for a unit `g`.
pub fn dlog(g: &TruncPoly) -> Result<DiffForm> {
    let inv = g.inverse()?;
    Ok(DiffForm::function(g).d().mul_fn(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formscalc::ring::{PolyRing, Variable};
    use crate::scalars::Prime;

    #[test]
    fn cartier_examples() {
        let p = Prime::new(3).unwrap();
        let b = PolyRing::truncated(p, "x", 1, 1).unwrap();
        let t = b.twisted();
        let x = TruncPoly::var(&b, 0);
        let a = DiffForm::dx(&b, 0).mul_fn(&x.pow(2));
        assert_eq!(cartier(&a, &t).unwrap(), DiffForm::dx(&t, 0));
        assert!(cartier(&DiffForm::dx(&b, 0), &t).unwrap().is_zero());

        let l = PolyRing::new(p, vec![Variable::laurent("x", 2, 2)], 1).unwrap();
        let lt = l.twisted();
        let xl = TruncPoly::var(&l, 0);
        let c = cartier(&dlog(&xl).unwrap(), &lt).unwrap();
        assert_eq!(c, dlog(&TruncPoly::var(&lt, 0)).unwrap());
    }

    #[test]
    fn cartier_rejects_non_closed() {
        let p = Prime::new(3).unwrap();
        let b = PolyRing::truncated(p, "x", 2, 1).unwrap();
        let a = DiffForm::dx(&b, 0).mul_fn(&TruncPoly::var(&b, 1));
        assert_eq!(cartier(&a, &b.twisted()).unwrap_err().name(), "NotClosed");
    }

    #[test]
    fn log_defect_examples() {
        let p = Prime::new(3).unwrap();
        let b = PolyRing::truncated(p, "x", 1, 1).unwrap();
        let x = TruncPoly::var(&b, 0);
        let one = TruncPoly::one(&b);
        let g = one.add(&x);
        assert_eq!(log_defect(&dlog(&g).unwrap()).unwrap(), vec![TruncPoly::zero(&b)]);
        assert_eq!(log_defect(&DiffForm::dx(&b, 0)).unwrap(), vec![one.clone()]);
        let a = DiffForm::dx(&b, 0).mul_fn(&x.pow(2));
        assert_eq!(log_defect(&a).unwrap(), vec![one.neg()]);
    }
}
