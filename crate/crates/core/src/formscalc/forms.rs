//! Derivations and differential forms over a [`PolyRing`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::formscalc::ring::{grlex_cmp, PolyRing, RingRef, TruncPoly};
use crate::scalars::{Gf, HSeries};

/// A derivation `Σ v_i ∂_i`.
#[derive(Clone, PartialEq)]
pub struct VectorField {
    ring: RingRef,
    comps: Vec<TruncPoly>,
}

impl VectorField {
    pub fn zero(ring: &RingRef) -> Self {
        VectorField { ring: ring.clone(), comps: vec![TruncPoly::zero(ring); ring.nvars()] }
    }

    pub fn coordinate(ring: &RingRef, i: usize) -> Self {
        let mut v = Self::zero(ring);
        v.comps[i] = TruncPoly::one(ring);
        v
    }

    pub fn from_components(ring: &RingRef, comps: Vec<TruncPoly>) -> Result<Self> {
        if comps.len() != ring.nvars() {
            return Err(Error::InvalidInput(format!("expected {} components, got {}", ring.nvars(), comps.len())));
        }
        for c in &comps {
            ring.check_same(c.ring())?;
        }
        Ok(VectorField { ring: ring.clone(), comps })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn components(&self) -> &[TruncPoly] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &TruncPoly {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn apply(&self, f: &TruncPoly) -> TruncPoly {
        let mut out = TruncPoly::zero_with_order(&self.ring, f.order());
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&c.mul(&f.derivative(i)));
            }
        }
        out
    }

    /// `D^k(f)`.
    pub fn apply_n(&self, f: &TruncPoly, k: usize) -> TruncPoly {
        let mut out = f.clone();
        for _ in 0..k {
            out = self.apply(&out);
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        VectorField { ring: self.ring.clone(), comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        VectorField { ring: self.ring.clone(), comps: self.comps.iter().map(|a| a.neg()).collect() }
    }

    pub fn mul_fn(&self, f: &TruncPoly) -> Self {
        VectorField { ring: self.ring.clone(), comps: self.comps.iter().map(|a| a.mul(f)).collect() }
    }

    /// Commutator `[u, v]`.
    pub fn bracket(&self, o: &Self) -> Self {
        let comps = (0..self.comps.len()).map(|i| self.apply(&o.comps[i]).sub(&o.apply(&self.comps[i]))).collect();
        VectorField { ring: self.ring.clone(), comps }
    }

    /// The restricted power `D^{[p]}`: the p-fold composite, which is again
    /// a derivation in characteristic p.
    pub fn p_power(&self) -> Self {
        let p = self.ring.prime().get() as usize;
        let comps = (0..self.comps.len())
            .map(|i| self.apply_n(&TruncPoly::var(&self.ring, i), p))
            .collect();
        VectorField { ring: self.ring.clone(), comps }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("({c})*d/d{}", self.ring.var(i).name));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Sign of sorting `idx`, or `None` if it has a repeated entry.
fn sort_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            } else if idx[j] == idx[j + 1] {
                return None;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

/// A differential form; components are keyed by strictly increasing index
/// tuples.
#[derive(Clone)]
pub struct DiffForm {
    ring: RingRef,
    degree: usize,
    order: usize,
    comps: BTreeMap<Vec<usize>, TruncPoly>,
}

impl PartialEq for DiffForm {
    fn eq(&self, o: &Self) -> bool {
        self.degree == o.degree && self.ring.vars() == o.ring.vars() && self.order == o.order && self.comps == o.comps
    }
}

impl DiffForm {
    pub fn zero(ring: &RingRef, degree: usize) -> Self {
        DiffForm { ring: ring.clone(), degree, order: ring.order(), comps: BTreeMap::new() }
    }

    fn zero_with_order(ring: &RingRef, degree: usize, order: usize) -> Self {
        DiffForm { ring: ring.clone(), degree, order, comps: BTreeMap::new() }
    }

    /// A function viewed as a 0-form.
    pub fn function(f: &TruncPoly) -> Self {
        let mut out = Self::zero_with_order(f.ring(), 0, f.order());
        out.add_component(vec![], f.clone());
        out
    }

    pub fn dx(ring: &RingRef, i: usize) -> Self {
        let mut out = Self::zero(ring, 1);
        out.add_component(vec![i], TruncPoly::one(ring));
        out
    }

    /// `Σ f_i dx_i`.
    pub fn one_form(ring: &RingRef, comps: &[TruncPoly]) -> Result<Self> {
        if comps.len() != ring.nvars() {
            return Err(Error::InvalidInput(format!("expected {} components, got {}", ring.nvars(), comps.len())));
        }
        let order = comps.iter().map(|c| c.order()).min().unwrap_or(ring.order());
        let mut out = Self::zero_with_order(ring, 1, order);
        for (i, c) in comps.iter().enumerate() {
            ring.check_same(c.ring())?;
            out.add_component(vec![i], c.clone());
        }
        Ok(out)
    }

    /// Adds `f dx_{idx}` with `idx` in any order (sign adjusted).
    pub fn add_component(&mut self, mut idx: Vec<usize>, f: TruncPoly) {
        assert_eq!(idx.len(), self.degree, "component degree mismatch");
        let Some(sign) = sort_sign(&mut idx) else {
            return;
        };
        let f = if sign < 0 { f.neg() } else { f };
        if f.order() < self.order {
            self.order = f.order();
            for c in self.comps.values_mut() {
                *c = c.truncate(self.order);
            }
        }
        let f = f.truncate(self.order);
        let sum = match self.comps.remove(&idx) {
            Some(old) => old.add(&f),
            None => f,
        };
        if !sum.is_zero() {
            self.comps.insert(idx, sum);
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, TruncPoly> {
        &self.comps
    }

    pub fn component(&self, idx: &[usize]) -> TruncPoly {
        let mut sorted = idx.to_vec();
        match sort_sign(&mut sorted) {
            None => TruncPoly::zero_with_order(&self.ring, self.order),
            Some(s) => {
                let c = self.comps.get(&sorted).cloned().unwrap_or_else(|| TruncPoly::zero_with_order(&self.ring, self.order));
                if s < 0 {
                    c.neg()
                } else {
                    c
                }
            }
        }
    }

    /// Coefficients `f_i` of a 1-form.
    pub fn one_form_components(&self) -> Vec<TruncPoly> {
        assert_eq!(self.degree, 1);
        (0..self.ring.nvars()).map(|i| self.component(&[i])).collect()
    }

    /// The function underlying a 0-form.
    pub fn as_function(&self) -> TruncPoly {
        assert_eq!(self.degree, 0);
        self.component(&[])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn map(&self, f: impl Fn(&TruncPoly) -> TruncPoly) -> Self {
        let mut out = Self::zero_with_order(&self.ring, self.degree, self.order);
        for (idx, c) in &self.comps {
            out.add_component(idx.clone(), f(c));
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (idx, c) in &o.comps {
            out.add_component(idx.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, c: Gf) -> Self {
        self.map(|f| f.scale(c))
    }

    pub fn mul_fn(&self, f: &TruncPoly) -> Self {
        self.map(|c| c.mul(f))
    }

    pub fn mul_series(&self, s: &HSeries) -> Self {
        self.map(|c| c.mul_series(s))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut out = Self::zero_with_order(&self.ring, self.degree, order.min(self.order));
        for (idx, c) in &self.comps {
            out.add_component(idx.clone(), c.truncate(order));
        }
        out
    }

    pub fn shift_h(&self, k: usize) -> Self {
        self.map(|c| c.shift_h(k))
    }

    pub fn divide_h(&self, k: usize) -> Result<Self> {
        let mut out = Self::zero_with_order(&self.ring, self.degree, self.order.saturating_sub(k));
        for (idx, c) in &self.comps {
            out.add_component(idx.clone(), c.divide_h(k)?);
        }
        Ok(out)
    }

    pub fn mod_h(&self) -> Self {
        self.truncate(1)
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut out = Self::zero_with_order(&self.ring, self.degree + o.degree, order);
        for (i, a) in &self.comps {
            for (j, b) in &o.comps {
                let mut idx = i.clone();
                idx.extend(j);
                out.add_component(idx, a.mul(b));
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = Self::zero_with_order(&self.ring, self.degree + 1, self.order);
        for (idx, c) in &self.comps {
            for j in 0..self.ring.nvars() {
                if idx.contains(&j) {
                    continue;
                }
                let dc = c.derivative(j);
                if dc.is_zero() {
                    continue;
                }
                let mut full = vec![j];
                full.extend(idx);
                out.add_component(full, dc);
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// Interior product `i_v`.
    pub fn contract(&self, v: &VectorField) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeOutOfRange("cannot contract a 0-form".into()));
        }
        let mut out = Self::zero_with_order(&self.ring, self.degree - 1, self.order);
        for (idx, c) in &self.comps {
            for (pos, &i) in idx.iter().enumerate() {
                let vi = v.component(i);
                if vi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let t = vi.mul(c);
                out.add_component(rest, if pos % 2 == 1 { t.neg() } else { t });
            }
        }
        Ok(out)
    }

    /// `L_v = i_v d + d i_v`.
    pub fn lie_derivative(&self, v: &VectorField) -> Self {
        let a = self.d().contract(v).expect("d raises degree");
        if self.degree == 0 {
            return a;
        }
        a.add(&self.contract(v).expect("degree checked").d())
    }

    pub fn lie_derivative_n(&self, v: &VectorField, k: usize) -> Self {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.lie_derivative(v);
        }
        out
    }

    /// `i^{[p]}_v α = i_{v^{[p]}} α − L_v^{p−1} i_v α`, with `v^{[p]}` supplied.
    pub fn restricted_contract(&self, v: &VectorField, v_p: &VectorField) -> Result<Self> {
        let p = self.ring.prime().get() as usize;
        let first = self.contract(v_p)?;
        let second = self.contract(v)?.lie_derivative_n(v, p - 1);
        Ok(first.sub(&second))
    }

    /// Moves the coefficients into another ring with the same variable
    /// count: used for `x -> x'` twists.
    pub fn twist(&self, twisted: &RingRef) -> Result<Self> {
        let mut out = Self::zero_with_order(twisted, self.degree, self.order.min(twisted.order()));
        for (idx, c) in &self.comps {
            out.add_component(idx.clone(), c.twist(twisted)?);
        }
        Ok(out)
    }

    pub fn in_ring(&self, ring: &RingRef) -> Result<Self> {
        let mut out = Self::zero_with_order(ring, self.degree, self.order.min(ring.order()));
        for (idx, c) in &self.comps {
            out.add_component(idx.clone(), c.in_ring(ring)?);
        }
        Ok(out)
    }

    /// Re-embeds into a ring with the same variable count (restriction to a
    /// localization).
    pub fn reembed(&self, ring: &RingRef) -> Result<Self> {
        let mut out = Self::zero_with_order(ring, self.degree, self.order.min(ring.order()));
        for (idx, c) in &self.comps {
            out.add_component(idx.clone(), c.reembed(ring)?);
        }
        Ok(out)
    }

    /// Pullback along `x_i -> images[i]` into `target`.
    pub fn pullback(&self, target: &RingRef, images: &[TruncPoly]) -> Result<Self> {
        let dimg: Vec<DiffForm> = images.iter().map(|g| DiffForm::function(g).d()).collect();
        let mut out = Self::zero_with_order(target, self.degree, self.order.min(target.order()));
        for (idx, c) in &self.comps {
            let mut term = DiffForm::function(&c.substitute(target, images)?);
            for &i in idx {
                term = term.wedge(&dimg[i]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn check_ring(&self, ring: &PolyRing) -> Result<()> {
        self.ring.check_same(ring)
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items = Vec::new();
        for (idx, c) in &self.comps {
            for (m, k, v) in c.flat_terms() {
                items.push((idx.clone(), m, k, v));
            }
        }
        if items.is_empty() {
            return write!(f, "0");
        }
        items.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| grlex_cmp(&b.1, b.2, &a.1, a.2)));
        for (n, (idx, m, k, v)) in items.iter().enumerate() {
            let single = TruncPoly::term(&self.ring, m, *k, v.abs_like()).to_string();
            let mut factors = Vec::new();
            if single != "1" || idx.is_empty() {
                factors.push(single);
            }
            for &i in idx {
                factors.push(format!("d{}", self.ring.var(i).name));
            }
            let body = factors.join("*");
            let neg = v.signed() < 0;
            match (n, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffForm[{}]({self})", self.degree)
    }
}

trait AbsLike {
    fn abs_like(self) -> Gf;
}

impl AbsLike for Gf {
    fn abs_like(self) -> Gf {
        if self.signed() < 0 {
            -self
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Prime;

    fn ring(p: u64, n: usize) -> RingRef {
        PolyRing::truncated(Prime::new(p).unwrap(), "x", n, 1).unwrap()
    }

    #[test]
    fn d_of_product() {
        let r = ring(3, 2);
        let f = TruncPoly::var(&r, 0).mul(&TruncPoly::var(&r, 1));
        assert_eq!(DiffForm::function(&f).d().to_string(), "x2*dx1 + x1*dx2");
    }

    #[test]
    fn d_of_eta_is_omega() {
        let p = Prime::new(3).unwrap();
        let vars = ["x1", "x2", "y1", "y2"].iter().map(|s| crate::formscalc::ring::Variable::truncated(*s, p)).collect();
        let r = PolyRing::new(p, vars, 1).unwrap();
        let eta = DiffForm::function(&TruncPoly::var(&r, 2))
            .wedge(&DiffForm::dx(&r, 0))
            .add(&DiffForm::function(&TruncPoly::var(&r, 3)).wedge(&DiffForm::dx(&r, 1)));
        let omega = DiffForm::dx(&r, 2).wedge(&DiffForm::dx(&r, 0)).add(&DiffForm::dx(&r, 3).wedge(&DiffForm::dx(&r, 1)));
        assert_eq!(eta.d(), omega);
        assert_eq!(omega.to_string(), "-dx1*dy1 - dx2*dy2");
    }

    #[test]
    fn top_degree_one_variable() {
        let r = ring(3, 1);
        let a = DiffForm::dx(&r, 0).mul_fn(&TruncPoly::var(&r, 0).pow(2));
        assert!(a.d().is_zero());
    }

    #[test]
    fn contraction_examples() {
        let r = ring(5, 2);
        let x1 = TruncPoly::var(&r, 0);
        let x2 = TruncPoly::var(&r, 1);
        let d1 = VectorField::coordinate(&r, 0);
        let d2 = VectorField::coordinate(&r, 1);
        assert_eq!(DiffForm::dx(&r, 0).contract(&d1).unwrap().as_function(), TruncPoly::one(&r));
        let top = DiffForm::dx(&r, 0).wedge(&DiffForm::dx(&r, 1));
        assert_eq!(top.contract(&d2).unwrap(), DiffForm::dx(&r, 0).neg());
        let v = d1.mul_fn(&x1);
        let a = DiffForm::one_form(&r, &[x2.clone(), x1.clone()]).unwrap();
        assert_eq!(a.contract(&v).unwrap().as_function(), x1.mul(&x2));
    }

    #[test]
    fn lie_derivative_examples() {
        let r = ring(5, 2);
        let x1 = TruncPoly::var(&r, 0);
        let d1 = VectorField::coordinate(&r, 0);
        let a = DiffForm::dx(&r, 0).mul_fn(&x1);
        assert_eq!(a.lie_derivative(&d1), DiffForm::dx(&r, 0));
        assert!(DiffForm::dx(&r, 1).lie_derivative(&d1).is_zero());
        assert_eq!(a.lie_derivative(&d1.mul_fn(&x1)), a.scale_i64(2));
    }

    #[test]
    fn restricted_contraction_examples() {
        let r = ring(3, 1);
        let d1 = VectorField::coordinate(&r, 0);
        let zero = VectorField::zero(&r);
        assert_eq!(d1.p_power(), zero);
        assert!(DiffForm::dx(&r, 0).restricted_contract(&d1, &zero).unwrap().is_zero());
        let a = DiffForm::dx(&r, 0).mul_fn(&TruncPoly::var(&r, 0).pow(2));
        assert_eq!(a.restricted_contract(&d1, &zero).unwrap().as_function(), TruncPoly::one(&r));

        let p = Prime::new(3).unwrap();
        let lr = PolyRing::new(p, vec![crate::formscalc::ring::Variable::laurent("x1", 2, 2)], 1).unwrap();
        let x = TruncPoly::var(&lr, 0);
        let euler = VectorField::coordinate(&lr, 0).mul_fn(&x);
        assert_eq!(euler.p_power(), euler);
        let dlog = DiffForm::dx(&lr, 0).mul_fn(&x.inverse().unwrap());
        assert_eq!(dlog.restricted_contract(&euler, &euler.p_power()).unwrap().as_function(), TruncPoly::one(&lr));
    }

    impl DiffForm {
        fn scale_i64(&self, c: i64) -> Self {
            self.scale(self.ring.prime().elem(c))
        }
    }
}
