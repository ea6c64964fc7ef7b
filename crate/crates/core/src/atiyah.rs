//! Čech classes of restricted Atiyah algebras in the two-term complex
//! `Ω¹_cl → Ω¹'`, `α ↦ α' − C(α)`, on finite covers by coordinate
//! localizations.
//!
//! Transition convention: sections satisfy `s_j = g_ij s_i`, so a line
//! bundle contributes `α_ij = dlog g_ij`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::formscalc::cartier::{cartier, dlog};
use crate::formscalc::forms::DiffForm;
use crate::formscalc::ring::{PolyRing, RingRef, TruncPoly, VarKind, Variable};
use crate::formscalc::solve::{closed_forms_basis, combine_forms, form_to_map, solve_primitive_2form, window_forms, FormKey};
use crate::formscalc::VectorField;
use crate::linalg::SparseSystem;
use crate::scalars::{Gf, Prime};

/// Label of a coordinate in the cochain target: `α_ij` or `γ_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Alpha(usize, usize),
    Gamma(usize),
}

pub type CochainKey = (Slot, FormKey);

pub struct CechCover {
    p: Prime,
    base: Vec<Variable>,
    pole: i32,
    opens: Vec<Vec<usize>>,
    coboundary: OnceLock<CoboundaryOperator>,
}

impl fmt::Debug for CechCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CechCover(p={}, opens={:?})", self.p, self.opens)
    }
}

impl CechCover {
    /// `opens[i]` lists the coordinates inverted on the i-th open; inverted
    /// coordinates get exponents down to `-pole`.
    pub fn new(p: Prime, base: Vec<Variable>, pole: i32, opens: Vec<Vec<usize>>) -> Result<Self> {
        if opens.is_empty() {
            return Err(Error::InvalidInput("a cover needs at least one open".into()));
        }
        for o in &opens {
            for &i in o {
                let v = base.get(i).ok_or_else(|| Error::InvalidInput(format!("no coordinate {i}")))?;
                if v.kind != VarKind::Polynomial {
                    return Err(Error::InvalidInput(format!("cannot invert {}: only polynomial coordinates localize", v.name)));
                }
            }
        }
        if base.iter().any(|v| v.kind == VarKind::Laurent) {
            return Err(Error::InvalidInput("base coordinates must be truncated or polynomial".into()));
        }
        PolyRing::new(p, base.clone(), 1)?;
        Ok(CechCover { p, base, pole, opens, coboundary: OnceLock::new() })
    }

    /// A single open with the given ring (already localized as desired).
    pub fn single(ring: &RingRef) -> Result<Self> {
        let mut base = Vec::new();
        let mut inverted = Vec::new();
        let mut pole = 0;
        for (i, v) in ring.vars().iter().enumerate() {
            if v.kind == VarKind::Laurent {
                inverted.push(i);
                pole = pole.max(-v.window.0);
                base.push(Variable { name: v.name.clone(), kind: VarKind::Polynomial, window: (0, v.window.1) });
            } else {
                base.push(v.clone());
            }
        }
        CechCover::new(ring.prime(), base, pole, vec![inverted])
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    /// The ring of the intersection of the given opens.
    pub fn ring(&self, which: &[usize]) -> RingRef {
        let inv: BTreeSet<usize> = which.iter().flat_map(|&i| self.opens[i].iter().copied()).collect();
        let vars = self
            .base
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if inv.contains(&i) {
                    Variable::laurent(v.name.clone(), self.pole, v.window.1)
                } else {
                    v.clone()
                }
            })
            .collect();
        PolyRing::new(self.p, vars, 1).expect("validated at construction")
    }

    pub fn twisted(&self, which: &[usize]) -> RingRef {
        self.ring(which).twisted()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.opens.len();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }

    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.opens.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    out.push((i, j, k));
                }
            }
        }
        out
    }

    fn operator(&self) -> &CoboundaryOperator {
        self.coboundary.get_or_init(|| CoboundaryOperator::build(self))
    }

    /// Dimension over GF(p) of the 0-cochains `{β_i}` (closed forms in the
    /// windows).
    pub fn cochain_dimension(&self) -> usize {
        self.operator().columns.len()
    }

    /// Bases of the closed 1-forms in the window on each open.
    pub fn closed_bases(&self) -> Vec<Vec<DiffForm>> {
        (0..self.len()).map(|i| closed_forms_basis(&self.ring(&[i]), 1, 0)).collect()
    }
}

#[derive(Clone, PartialEq)]
pub struct CechClass {
    /// `α_ij` for `i < j`, on `U_i ∩ U_j`
    pub alpha: BTreeMap<(usize, usize), DiffForm>,
    /// `γ_i` on `U_i'`
    pub gamma: Vec<DiffForm>,
}

impl fmt::Debug for CechClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CechClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for ((i, j), a) in &self.alpha {
            parts.push(format!("alpha[{}{}] = {a}", i + 1, j + 1));
        }
        for (i, g) in self.gamma.iter().enumerate() {
            parts.push(format!("gamma[{}] = {g}", i + 1));
        }
        write!(f, "{{{}}}", parts.join("; "))
    }
}

impl CechClass {
    pub fn zero(cover: &CechCover) -> Self {
        let alpha = cover.pairs().into_iter().map(|(i, j)| ((i, j), DiffForm::zero(&cover.ring(&[i, j]), 1))).collect();
        let gamma = (0..cover.len()).map(|i| DiffForm::zero(&cover.twisted(&[i]), 1)).collect();
        CechClass { alpha, gamma }
    }

    /// The class `{0, θ}`, θ a 1-form on the twisted base restricted to
    /// every open.
    pub fn from_gamma(cover: &CechCover, theta: &DiffForm) -> Result<Self> {
        let mut out = Self::zero(cover);
        for i in 0..cover.len() {
            out.gamma[i] = theta.reembed(&cover.twisted(&[i]))?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.values().all(|a| a.is_zero()) && self.gamma.iter().all(|g| g.is_zero())
    }

    fn zip(&self, o: &Self, f: impl Fn(&DiffForm, &DiffForm) -> DiffForm) -> Self {
        CechClass {
            alpha: self.alpha.iter().map(|(k, a)| (*k, f(a, &o.alpha[k]))).collect(),
            gamma: self.gamma.iter().zip(&o.gamma).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.scale(-(self.p().one()))
    }

    pub fn scale(&self, c: Gf) -> Self {
        CechClass {
            alpha: self.alpha.iter().map(|(k, a)| (*k, a.scale(c))).collect(),
            gamma: self.gamma.iter().map(|g| g.scale(c)).collect(),
        }
    }

    fn p(&self) -> Prime {
        self.gamma[0].ring().prime()
    }

    /// Flattened coordinates, used for linear algebra and hashing.
    pub fn to_map(&self) -> BTreeMap<CochainKey, Gf> {
        let mut out = BTreeMap::new();
        for ((i, j), a) in &self.alpha {
            for (k, v) in form_to_map(a) {
                out.insert((Slot::Alpha(*i, *j), k), v);
            }
        }
        for (i, g) in self.gamma.iter().enumerate() {
            for (k, v) in form_to_map(g) {
                out.insert((Slot::Gamma(i), k), v);
            }
        }
        out
    }
}

/// Checks `α_ij` closed, `α_ij + α_jk = α_ik` and `γ_i − γ_j = α_ij' − C(α_ij)`.
pub fn check_cocycle(cls: &CechClass, cover: &CechCover) -> Result<()> {
    if cls.gamma.len() != cover.len() || cls.alpha.len() != cover.pairs().len() {
        return Err(Error::NotCocycle("class does not match the cover".into()));
    }
    for ((i, j), a) in &cls.alpha {
        if !a.is_closed() {
            return Err(Error::NotCocycle(format!("alpha[{}{}] is not closed", i + 1, j + 1)));
        }
        let tw = cover.twisted(&[*i, *j]);
        let lhs = cls.gamma[*i].reembed(&tw)?.sub(&cls.gamma[*j].reembed(&tw)?);
        let rhs = a.twist(&tw)?.sub(&cartier(a, &tw)?);
        if lhs != rhs {
            return Err(Error::NotCocycle(format!("gamma[{}] - gamma[{}] != alpha' - C(alpha) on U{}{}", i + 1, j + 1, i + 1, j + 1)));
        }
    }
    for (i, j, k) in cover.triples() {
        let r = cover.ring(&[i, j, k]);
        let s = cls.alpha[&(i, j)].reembed(&r)?.add(&cls.alpha[&(j, k)].reembed(&r)?);
        if s != cls.alpha[&(i, k)].reembed(&r)? {
            return Err(Error::NotCocycle(format!("alpha[{0}{1}] + alpha[{1}{2}] != alpha[{0}{2}]", i + 1, j + 1, k + 1)));
        }
    }
    Ok(())
}

/// The Čech differential of a 0-cochain `{β_i}`.
pub fn coboundary_of(betas: &[DiffForm], cover: &CechCover) -> Result<CechClass> {
    let mut out = CechClass::zero(cover);
    for (i, j) in cover.pairs() {
        let r = cover.ring(&[i, j]);
        out.alpha.insert((i, j), betas[i].reembed(&r)?.sub(&betas[j].reembed(&r)?));
    }
    for (i, b) in betas.iter().enumerate() {
        let tw = cover.twisted(&[i]);
        out.gamma[i] = b.twist(&tw)?.sub(&cartier(b, &tw)?);
    }
    Ok(out)
}

struct CoboundaryOperator {
    /// `(open, basis form)` per column
    columns: Vec<(usize, DiffForm)>,
    images: Vec<BTreeMap<CochainKey, Gf>>,
}

impl CoboundaryOperator {
    fn build(cover: &CechCover) -> Self {
        let mut columns = Vec::new();
        let mut images = Vec::new();
        for (i, basis) in cover.closed_bases().into_iter().enumerate() {
            for b in basis {
                let mut betas: Vec<DiffForm> = (0..cover.len()).map(|k| DiffForm::zero(&cover.ring(&[k]), 1)).collect();
                betas[i] = b.clone();
                let img = coboundary_of(&betas, cover).expect("restrictions of window forms exist");
                images.push(img.to_map());
                columns.push((i, b));
            }
        }
        CoboundaryOperator { columns, images }
    }
}

/// A 0-cochain `{β_i}` with `δβ = cls`, or `None`.
pub fn is_coboundary(cls: &CechClass, cover: &CechCover) -> Result<Option<Vec<DiffForm>>> {
    check_cocycle(cls, cover)?;
    let op = cover.operator();
    let mut sys = SparseSystem::new(cover.p);
    for img in &op.images {
        sys.push_column(img.clone());
    }
    let Some(x) = sys.solve(&cls.to_map()) else {
        return Ok(None);
    };
    let mut betas: Vec<DiffForm> = (0..cover.len()).map(|k| DiffForm::zero(&cover.ring(&[k]), 1)).collect();
    for ((i, b), c) in op.columns.iter().zip(x) {
        if !c.is_zero() {
            betas[*i] = betas[*i].add(&b.scale(c));
        }
    }
    if coboundary_of(&betas, cover)? != *cls {
        return Err(Error::NotCocycle("coboundary witness does not re-verify".into()));
    }
    Ok(Some(betas))
}

/// Transition functions `g_ij` (i < j) on overlaps.
pub type Transitions = BTreeMap<(usize, usize), TruncPoly>;

pub fn trivial_transitions(cover: &CechCover) -> Transitions {
    cover.pairs().into_iter().map(|(i, j)| ((i, j), TruncPoly::one(&cover.ring(&[i, j])))).collect()
}

fn check_transitions(g: &Transitions, cover: &CechCover) -> Result<()> {
    for (i, j) in cover.pairs() {
        let gij = g.get(&(i, j)).ok_or_else(|| Error::InvalidInput(format!("missing transition g{}{}", i + 1, j + 1)))?;
        if !gij.is_unit() {
            return Err(Error::NotAUnit(format!("g{}{} = {gij}", i + 1, j + 1)));
        }
    }
    for (i, j, k) in cover.triples() {
        let r = cover.ring(&[i, j, k]);
        let lhs = g[&(i, j)].reembed(&r)?.mul(&g[&(j, k)].reembed(&r)?);
        if lhs != g[&(i, k)].reembed(&r)? {
            return Err(Error::NotCocycle(format!("g{0}{1} g{1}{2} != g{0}{2}", i + 1, j + 1, k + 1)));
        }
    }
    Ok(())
}

/// `c_r(L) = {dlog g_ij, 0}`.
pub fn restricted_chern(g: &Transitions, cover: &CechCover) -> Result<CechClass> {
    check_transitions(g, cover)?;
    let mut out = CechClass::zero(cover);
    for (k, gij) in g {
        out.alpha.insert(*k, dlog(gij)?.reembed(&cover.ring(&[k.0, k.1]))?);
    }
    check_cocycle(&out, cover)?;
    Ok(out)
}

pub fn tensor_transitions(a: &Transitions, b: &Transitions) -> Transitions {
    a.iter().map(|(k, g)| (*k, g.mul(&b[k]))).collect()
}

pub fn inverse_transitions(a: &Transitions) -> Result<Transitions> {
    a.iter().map(|(k, g)| Ok((*k, g.inverse()?))).collect()
}

/// `c_r(K) − cls`, the class of the opposite algebra.
pub fn dual_class(cls: &CechClass, canonical: &CechClass) -> CechClass {
    canonical.sub(cls)
}

/// Transitions of the canonical bundle of a cover of affine space: the
/// Jacobians of the (identical) coordinate systems, all equal to 1.
pub fn canonical_transitions(cover: &CechCover) -> Transitions {
    trivial_transitions(cover)
}

/// Per-open data of an Atiyah algebra of a line bundle: flat splittings
/// `σ_i = ∂ + A_i(∂)` and transitions `g_ij`.
#[derive(Clone, Debug)]
pub struct AtiyahLocalData {
    pub splittings: Vec<DiffForm>,
    pub transitions: Transitions,
}

/// `γ_i` from the p-defect `σ(∂_k)^p − σ(∂_k^{[p]}) = a_k^p + ∂_k^{p−1} a_k`,
/// read through the p-th-root embedding.
fn gamma_from_defect(a: &DiffForm, twisted: &RingRef) -> Result<DiffForm> {
    let p = a.ring().prime().get() as usize;
    let comps = a
        .one_form_components()
        .iter()
        .enumerate()
        .map(|(k, ak)| {
            let defect = ak.pow(p as u64).add(&ak.nth_derivative(k, p - 1));
            defect.pth_root(twisted)
        })
        .collect::<Result<Vec<_>>>()?;
    DiffForm::one_form(twisted, &comps)
}

/// `{α_ij = A_i − A_j + dlog g_ij, γ_i}`, verified to be a cocycle.
pub fn cech_class(local: &AtiyahLocalData, cover: &CechCover) -> Result<CechClass> {
    if local.splittings.len() != cover.len() {
        return Err(Error::InvalidInput("one splitting per open required".into()));
    }
    check_transitions(&local.transitions, cover)?;
    let mut out = CechClass::zero(cover);
    for (i, a) in local.splittings.iter().enumerate() {
        if !a.is_closed() {
            return Err(Error::NotClosed(format!("splitting on U{} is not flat", i + 1)));
        }
        out.gamma[i] = gamma_from_defect(a, &cover.twisted(&[i]))?;
    }
    for (i, j) in cover.pairs() {
        let r = cover.ring(&[i, j]);
        let a = local.splittings[i].reembed(&r)?.sub(&local.splittings[j].reembed(&r)?);
        out.alpha.insert((i, j), a.add(&dlog(&local.transitions[&(i, j)])?.reembed(&r)?));
    }
    check_cocycle(&out, cover)?;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LieSplitting {
    /// `a` with `da = −β`
    pub correction: DiffForm,
    /// `C(i^{[p]}_{∂_k} β)` for each coordinate, all zero
    pub cartier_checks: Vec<DiffForm>,
}

/// Corrects a splitting with curvature β to a flat one.
pub fn split_lie(beta: &DiffForm) -> Result<LieSplitting> {
    if beta.degree() != 2 || !beta.is_closed() {
        return Err(Error::NotClosed("curvature must be a closed 2-form".into()));
    }
    let ring = beta.ring();
    let tw = ring.twisted();
    let zero = VectorField::zero(ring);
    let mut checks = Vec::new();
    for k in 0..ring.nvars() {
        let d = VectorField::coordinate(ring, k);
        let rc = beta.restricted_contract(&d, &zero)?;
        let c = cartier(&rc, &tw)?;
        if !c.is_zero() {
            return Err(Error::NotLocallyExact(format!("C(i^[p]_∂{} β) = {c}", k + 1)));
        }
        checks.push(c);
    }
    let correction = solve_primitive_2form(&beta.neg())?.ok_or_else(|| Error::NotLocallyExact(format!("no primitive for {beta} in the window")))?;
    Ok(LieSplitting { correction, cartier_checks: checks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaSign {
    Plus,
    Minus,
}

impl ThetaSign {
    pub fn value(self, p: Prime) -> Gf {
        match self {
            ThetaSign::Plus => p.one(),
            ThetaSign::Minus => -p.one(),
        }
    }
}

/// Whether `c_r(L) − ρ − ½ c_r(K) − sign·{0, θ}` is a coboundary.
pub fn chern_condition(cl: &CechClass, rho: &CechClass, ck: &CechClass, theta: &DiffForm, sign: ThetaSign, cover: &CechCover) -> Result<bool> {
    let p = cover.prime();
    let half = p.elem(2).inv().expect("p is odd");
    let th = CechClass::from_gamma(cover, theta)?;
    let total = cl.sub(rho).sub(&ck.scale(half)).sub(&th.scale(sign.value(p)));
    Ok(is_coboundary(&total, cover)?.is_some())
}

/// A basis of the cocycles whose `α_ij` are closed window forms on the
/// overlaps and whose `γ_i` are window forms on the twisted opens.
pub fn cocycle_basis(cover: &CechCover) -> Vec<CechClass> {
    let mut slots: Vec<(Slot, DiffForm)> = Vec::new();
    for (i, j) in cover.pairs() {
        for f in closed_forms_basis(&cover.ring(&[i, j]), 1, 0) {
            slots.push((Slot::Alpha(i, j), f));
        }
    }
    for i in 0..cover.len() {
        for f in window_forms(&cover.twisted(&[i]), 1, 0) {
            slots.push((Slot::Gamma(i), f));
        }
    }
    let single = |slot: &Slot, f: &DiffForm| -> CechClass {
        let mut c = CechClass::zero(cover);
        match slot {
            Slot::Alpha(i, j) => {
                c.alpha.insert((*i, *j), f.clone());
            }
            Slot::Gamma(i) => c.gamma[*i] = f.clone(),
        }
        c
    };
    // law residuals, linear in the class
    let residual = |c: &CechClass| -> BTreeMap<(u8, usize, usize, usize, FormKey), Gf> {
        let mut out = BTreeMap::new();
        for ((i, j), a) in &c.alpha {
            let tw = cover.twisted(&[*i, *j]);
            let lhs = c.gamma[*i].reembed(&tw).unwrap().sub(&c.gamma[*j].reembed(&tw).unwrap());
            let rhs = a.twist(&tw).unwrap().sub(&cartier(a, &tw).unwrap());
            for (k, v) in form_to_map(&lhs.sub(&rhs)) {
                out.insert((0, *i, *j, 0, k), v);
            }
        }
        for (i, j, k) in cover.triples() {
            let r = cover.ring(&[i, j, k]);
            let s = c.alpha[&(i, j)].reembed(&r).unwrap().add(&c.alpha[&(j, k)].reembed(&r).unwrap()).sub(&c.alpha[&(i, k)].reembed(&r).unwrap());
            for (key, v) in form_to_map(&s) {
                out.insert((1, i, j, k, key), v);
            }
        }
        out
    };
    let mut sys = SparseSystem::new(cover.p);
    for (slot, f) in &slots {
        sys.push_column(residual(&single(slot, f)));
    }
    sys.nullspace()
        .iter()
        .map(|v| {
            let mut c = CechClass::zero(cover);
            for ((slot, f), x) in slots.iter().zip(v) {
                if !x.is_zero() {
                    c = c.add(&single(slot, &f.scale(*x)));
                }
            }
            c
        })
        .collect()
}

/// GF(p)-linear combination of classes.
pub fn combine_classes(cover: &CechCover, basis: &[CechClass], coeffs: &[Gf]) -> CechClass {
    let mut out = CechClass::zero(cover);
    for (c, x) in basis.iter().zip(coeffs) {
        if !x.is_zero() {
            out = out.add(&c.scale(*x));
        }
    }
    out
}

pub fn combine_betas(ring: &RingRef, basis: &[DiffForm], coeffs: &[Gf]) -> DiffForm {
    combine_forms(ring, 1, basis, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    /// `U_1 = k[x]`, `U_2 = k[x, 1/x]`.
    fn line_cover() -> CechCover {
        CechCover::new(p3(), vec![Variable::polynomial("x", 1)], 1, vec![vec![], vec![0]]).unwrap()
    }

    fn laurent_cover() -> CechCover {
        CechCover::new(p3(), vec![Variable::polynomial("x1", 1)], 1, vec![vec![0]]).unwrap()
    }

    #[test]
    fn zero_class_is_coboundary() {
        let c = line_cover();
        let w = is_coboundary(&CechClass::zero(&c), &c).unwrap().unwrap();
        assert!(w.iter().all(|b| b.is_zero()));
    }

    #[test]
    fn chern_of_coordinate() {
        let c = line_cover();
        let mut g = trivial_transitions(&c);
        let r = c.ring(&[0, 1]);
        g.insert((0, 1), TruncPoly::var(&r, 0));
        let cl = restricted_chern(&g, &c).unwrap();
        assert_eq!(cl.alpha[&(0, 1)].to_string(), "x^-1*dx");
        assert!(cl.gamma.iter().all(|x| x.is_zero()));
        let doubled = restricted_chern(&tensor_transitions(&g, &g), &c).unwrap();
        assert_eq!(doubled, cl.add(&cl));
        let inv = restricted_chern(&inverse_transitions(&g).unwrap(), &c).unwrap();
        let ck = restricted_chern(&canonical_transitions(&c), &c).unwrap();
        assert!(ck.is_zero());
        assert_eq!(dual_class(&cl, &ck), inv);
        assert_eq!(dual_class(&dual_class(&cl, &ck), &ck), cl);
    }

    #[test]
    fn perturbation_breaks_cocycle() {
        let c = line_cover();
        let mut cls = CechClass::zero(&c);
        cls.gamma[0] = DiffForm::dx(&c.twisted(&[0]), 0);
        assert_eq!(check_cocycle(&cls, &c).unwrap_err().name(), "NotCocycle");
    }

    #[test]
    fn theta_sign_flip() {
        let c = laurent_cover();
        let tw = c.twisted(&[0]);
        let theta = dlog(&TruncPoly::var(&tw, 0)).unwrap();
        let cl = CechClass::from_gamma(&c, &theta).unwrap();
        let zero = CechClass::zero(&c);
        assert!(chern_condition(&cl, &zero, &zero, &theta, ThetaSign::Plus, &c).unwrap());
        assert!(!chern_condition(&cl, &zero, &zero, &theta, ThetaSign::Minus, &c).unwrap());
        assert!(chern_condition(&zero, &zero, &zero, &DiffForm::zero(&tw, 1), ThetaSign::Minus, &c).unwrap());
    }

    #[test]
    fn gamma_constant_on_truncated_base() {
        let b = PolyRing::truncated(p3(), "x", 1, 1).unwrap();
        let c = CechCover::single(&b).unwrap();
        let cls = CechClass::from_gamma(&c, &DiffForm::dx(&b.twisted(), 0)).unwrap();
        let w = is_coboundary(&cls, &c).unwrap().unwrap();
        assert_eq!(w[0], DiffForm::dx(&b, 0));
    }

    #[test]
    fn split_lie_examples() {
        let b = PolyRing::truncated(p3(), "x", 2, 1).unwrap();
        let zero = DiffForm::zero(&b, 2);
        assert!(split_lie(&zero).unwrap().correction.is_zero());
        let x2dx1 = DiffForm::dx(&b, 0).mul_fn(&TruncPoly::var(&b, 1));
        let beta = x2dx1.d();
        let s = split_lie(&beta).unwrap();
        assert_eq!(s.correction.d(), beta.neg());
        let beta = DiffForm::dx(&b, 0).wedge(&DiffForm::dx(&b, 1));
        let s = split_lie(&beta).unwrap();
        assert_eq!(s.correction.d(), beta.neg());
        // x1^2 x2^2 dx1 dx2 has nonzero Cartier image
        let top = beta.mul_fn(&TruncPoly::var(&b, 0).pow(2).mul(&TruncPoly::var(&b, 1).pow(2)));
        assert_eq!(split_lie(&top).unwrap_err().name(), "NotLocallyExact");
    }

    #[test]
    fn cech_class_of_line_bundle() {
        let c = line_cover();
        let mut g = trivial_transitions(&c);
        g.insert((0, 1), TruncPoly::var(&c.ring(&[0, 1]), 0));
        let local = AtiyahLocalData { splittings: vec![DiffForm::zero(&c.ring(&[0]), 1), DiffForm::zero(&c.ring(&[1]), 1)], transitions: g.clone() };
        let cls = cech_class(&local, &c).unwrap();
        assert_eq!(cls, restricted_chern(&g, &c).unwrap());
    }
}
