//! Rank-one h-connections `∇ = h d + h α`, their p-curvature and p-support,
//! and the classification of local quantizations.

use std::fmt;

use crate::error::{Error, Result};
use crate::formscalc::{log_defect, solve_dlog, DiffForm, PolyRing, RingRef, TruncPoly, VarKind, Variable, VectorField};

#[derive(Clone, Debug)]
pub struct HConnection {
    base: RingRef,
    alpha: DiffForm,
}

impl HConnection {
    pub fn new(alpha: DiffForm) -> Result<Self> {
        if alpha.degree() != 1 {
            return Err(Error::DegreeOutOfRange("connection form must have degree 1".into()));
        }
        if !alpha.is_closed() {
            return Err(Error::NotClosed(format!("d({alpha}) = {}", alpha.d())));
        }
        Ok(HConnection { base: alpha.ring().clone(), alpha })
    }

    pub fn trivial(base: &RingRef) -> Self {
        HConnection { base: base.clone(), alpha: DiffForm::zero(base, 1) }
    }

    pub fn base(&self) -> &RingRef {
        &self.base
    }

    pub fn alpha(&self) -> &DiffForm {
        &self.alpha
    }

    pub fn order(&self) -> usize {
        self.alpha.order()
    }

    /// `∇_v(s) = h v(s) + h α(v) s`.
    pub fn covariant(&self, v: &VectorField, s: &TruncPoly) -> TruncPoly {
        let a = self.alpha.contract(v).expect("degree 1").as_function();
        v.apply(s).add(&a.mul(s)).shift_h(1).truncate(self.order())
    }

    /// `h^p (a^p + v^{p−1}(a) − α(v^{[p]}))` with `a = α(v)`.
    pub fn p_curvature_formula(&self, v: &VectorField, v_p: &VectorField) -> TruncPoly {
        let p = self.base.prime().get() as usize;
        let a = self.alpha.contract(v).expect("degree 1").as_function();
        let ap = self.alpha.contract(v_p).expect("degree 1").as_function();
        a.pow(p as u64).add(&v.apply_n(&a, p - 1)).sub(&ap).shift_h(p).truncate(self.order())
    }

    /// `∇_v^p(s) − h^{p−1} ∇_{v^{[p]}}(s)` by literal composition.
    pub fn p_curvature_composed(&self, v: &VectorField, v_p: &VectorField, s: &TruncPoly) -> TruncPoly {
        let p = self.base.prime().get() as usize;
        let mut t = s.truncate(self.order());
        for _ in 0..p {
            t = self.covariant(v, &t);
        }
        t.sub(&self.covariant(v_p, s).shift_h(p - 1))
    }

    /// The p-curvature along `v`, as the multiplication operator it is.
    /// Both routes are evaluated on `1` and on every coordinate function and
    /// must agree.
    pub fn p_curvature(&self, v: &VectorField, v_p: Option<&VectorField>) -> Result<TruncPoly> {
        let computed;
        let v_p = match v_p {
            Some(w) => w,
            None => {
                computed = v.p_power();
                &computed
            }
        };
        let psi = self.p_curvature_formula(v, v_p);
        let mut sections = vec![TruncPoly::one(&self.base)];
        sections.extend((0..self.base.nvars()).map(|i| TruncPoly::var(&self.base, i)));
        for s in &sections {
            let lhs = self.p_curvature_composed(v, v_p, s);
            let rhs = psi.mul(s).truncate(self.order());
            if lhs != rhs {
                return Err(Error::IntegrabilityViolated(format!("p-curvature routes disagree on section {s}: {lhs} vs {rhs}")));
            }
        }
        Ok(psi)
    }

    /// p-curvature along the coordinate field `∂_i`.
    pub fn p_curvature_coordinate(&self, i: usize) -> Result<TruncPoly> {
        self.p_curvature(&VectorField::coordinate(&self.base, i), Some(&VectorField::zero(&self.base)))
    }
}

/// Twisted coordinates `x_i'` on the base and the cotangent ring
/// `k[x', ξ']` (ξ' polynomial) carrying the p-support.
fn cotangent_ring(base: &RingRef) -> Result<(RingRef, RingRef)> {
    let twisted = base.twisted();
    let mut vars: Vec<Variable> = twisted.vars().to_vec();
    let hi = (base.prime().get() as i32) * 2;
    for (i, v) in base.vars().iter().enumerate() {
        let name = if v.name.starts_with('x') { format!("ξ{}'", &v.name[1..]) } else { format!("ξ{}'", i + 1) };
        vars.push(Variable { name, kind: VarKind::Polynomial, window: (0, hi) });
    }
    Ok((twisted, PolyRing::new(base.prime(), vars, base.order())?))
}

#[derive(Clone, Debug)]
pub struct PSupportIdeal {
    pub p: crate::scalars::Prime,
    /// `k[x']`
    pub twisted: RingRef,
    /// `k[x', ξ']`
    pub ring: RingRef,
    /// `κ_i(x')` with generators `ξ_i' − h^p κ_i`
    pub kappas: Vec<TruncPoly>,
    pub generators: Vec<TruncPoly>,
    pub trivial_mod_hp: bool,
}

pub fn p_support(conn: &HConnection) -> Result<PSupportIdeal> {
    let base = conn.base();
    let p = base.prime();
    let pp = p.get() as usize;
    if conn.order() < pp + 1 {
        return Err(Error::TruncationTooSmall { needed: pp + 1, got: conn.order() });
    }
    let (twisted, ring) = cotangent_ring(base)?;
    let n = base.nvars();
    let mut kappas = Vec::new();
    let mut generators = Vec::new();
    for i in 0..n {
        let curv = conn.p_curvature_coordinate(i)?;
        // every deformation term of the support is divisible by h^p
        let reduced = curv.divide_h(pp)?;
        let kappa = reduced.pth_root(&twisted)?;
        let lifted = kappa.twist(&twisted)?;
        let mut m = vec![0; 2 * n];
        m[n + i] = 1;
        let xi = TruncPoly::monomial(&ring, &m);
        let mut k_amb = TruncPoly::zero(&ring);
        for (mono, k, c) in lifted.flat_terms() {
            let mut m2 = mono.clone();
            m2.extend(std::iter::repeat(0).take(n));
            k_amb = k_amb.add(&TruncPoly::term(&ring, &m2, k, c));
        }
        generators.push(xi.sub(&k_amb.shift_h(pp)));
        kappas.push(kappa);
    }
    Ok(PSupportIdeal { p, twisted, ring, kappas, generators, trivial_mod_hp: true })
}

impl fmt::Display for PSupportIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.kappas.len();
        let parts: Vec<String> = (0..n)
            .map(|i| {
                let xi = &self.ring.var(n + i).name;
                if self.kappas[i].is_zero() {
                    xi.clone()
                } else {
                    format!("{xi} - h^{}*({})", self.p.get(), self.kappas[i])
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The normal field as a 1-form on the twisted base: `Σ κ_i dx_i'`, read
/// at order `h^p` of the generators.
pub fn extract_theta(psup: &PSupportIdeal) -> Result<DiffForm> {
    if !psup.trivial_mod_hp {
        return Err(Error::InvalidInput("p-support is not trivial modulo h^p".into()));
    }
    let reduced: Vec<TruncPoly> = psup.kappas.iter().map(|k| k.mod_h().in_ring(&psup.twisted.with_order(1))).collect::<Result<_>>()?;
    DiffForm::one_form(&psup.twisted.with_order(1), &reduced)
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub logarithmic: bool,
    pub defect: Vec<TruncPoly>,
    /// a unit `g` with `dg/g = α`
    pub witness: Option<TruncPoly>,
    /// `g^{-1}`: the image of the generator under the isomorphism to the
    /// standard module
    pub isomorphism_to_standard: Option<TruncPoly>,
}

pub fn classify_quantization(conn: &HConnection) -> Result<Classification> {
    let defect = log_defect(conn.alpha())?;
    let logarithmic = defect.iter().all(|d| d.is_zero());
    let witness = solve_dlog(conn.alpha())?;
    if logarithmic && witness.is_none() && conn.base().vars().iter().all(|v| v.kind == VarKind::Truncated) {
        return Err(Error::IntegrabilityViolated("vanishing defect but no logarithmic primitive".into()));
    }
    if !logarithmic && witness.is_some() {
        return Err(Error::IntegrabilityViolated("logarithmic primitive found despite nonzero defect".into()));
    }
    let isomorphism_to_standard = witness.as_ref().map(|g| g.inverse()).transpose()?;
    Ok(Classification { logarithmic: witness.is_some(), defect, witness, isomorphism_to_standard })
}

/// A unit `g` with `dg/g = β − α` when the two connections are isomorphic.
pub fn isomorphism(a: &HConnection, b: &HConnection) -> Result<Option<TruncPoly>> {
    solve_dlog(&b.alpha().sub(a.alpha()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formscalc::dlog;
    use crate::scalars::Prime;

    fn poly_base(p: u64, n: usize, order: usize) -> RingRef {
        PolyRing::polynomial(Prime::new(p).unwrap(), "x", n, 12, order).unwrap()
    }

    fn example_alpha(r: &RingRef) -> DiffForm {
        let x1 = TruncPoly::var(r, 0);
        let x2 = TruncPoly::var(r, 1);
        DiffForm::dx(r, 1).mul_fn(&x1.pow(3).mul(&x2.pow(2)))
    }

    #[test]
    fn curvature_of_example() {
        let r = poly_base(3, 2, 5);
        let conn = HConnection::new(example_alpha(&r)).unwrap();
        let c = conn.p_curvature_coordinate(1).unwrap();
        assert_eq!(c.to_string(), "h^3*x1^9*x2^6 - h^3*x1^3");
        assert!(conn.p_curvature_coordinate(0).unwrap().is_zero());
        assert!(HConnection::trivial(&r).p_curvature_coordinate(0).unwrap().is_zero());
    }

    #[test]
    fn support_of_example() {
        let r = poly_base(3, 2, 5);
        let ps = p_support(&HConnection::new(example_alpha(&r)).unwrap()).unwrap();
        assert_eq!(ps.to_string(), "(ξ1', ξ2' - h^3*((x1')^3*(x2')^2 - x1'))");
        assert!(ps.trivial_mod_hp);
        let theta = extract_theta(&ps).unwrap();
        assert_eq!(theta.to_string(), "(x1')^3*(x2')^2*dx2' - x1'*dx2'");
        let zero = p_support(&HConnection::trivial(&r)).unwrap();
        assert_eq!(zero.to_string(), "(ξ1', ξ2')");
        assert!(extract_theta(&zero).unwrap().is_zero());
    }

    #[test]
    fn dlog_connection_is_flat_in_p() {
        let p = Prime::new(3).unwrap();
        let b = PolyRing::truncated(p, "x", 1, 5).unwrap();
        let g = TruncPoly::one(&b).add(&TruncPoly::var(&b, 0));
        let conn = HConnection::new(dlog(&g).unwrap()).unwrap();
        assert!(conn.p_curvature_coordinate(0).unwrap().is_zero());
        let cls = classify_quantization(&conn).unwrap();
        assert!(cls.logarithmic);
        assert_eq!(cls.witness.unwrap(), g);
    }

    #[test]
    fn classification_examples() {
        let p = Prime::new(3).unwrap();
        let b = PolyRing::truncated(p, "x", 1, 1).unwrap();
        let cls = classify_quantization(&HConnection::trivial(&b)).unwrap();
        assert!(cls.logarithmic);
        assert_eq!(cls.witness.unwrap(), TruncPoly::one(&b));
        let cls = classify_quantization(&HConnection::new(DiffForm::dx(&b, 0)).unwrap()).unwrap();
        assert!(!cls.logarithmic);
        assert_eq!(cls.defect, vec![TruncPoly::one(&b)]);
    }

    #[test]
    fn h_weighted_form() {
        let r = poly_base(3, 1, 8);
        let a = DiffForm::dx(&r, 0).shift_h(1);
        let ps = p_support(&HConnection::new(a).unwrap()).unwrap();
        assert_eq!(ps.to_string(), "(ξ1' - h^3*(h^3))");
    }
}
