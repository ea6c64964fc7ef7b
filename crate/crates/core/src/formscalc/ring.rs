//! Commutative coefficient rings built from three kinds of variables:
//! truncated (`x^p = 0`), polynomial, and Laurent (invertible), all over
//! `GF(p)[h]/h^N`.
//!
//! Arithmetic is always exact. Windows only bound the finite-dimensional
//! search spaces used by the linear solvers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::{Gf, HSeries, Prime};

pub type Mono = Vec<i32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Truncated,
    Polynomial,
    Laurent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// Inclusive exponent window used by solvers.
    pub window: (i32, i32),
}

impl Variable {
    pub fn truncated(name: impl Into<String>, p: Prime) -> Self {
        Variable { name: name.into(), kind: VarKind::Truncated, window: (0, p.get() as i32 - 1) }
    }

    pub fn polynomial(name: impl Into<String>, max_degree: i32) -> Self {
        Variable { name: name.into(), kind: VarKind::Polynomial, window: (0, max_degree) }
    }

    pub fn laurent(name: impl Into<String>, pole_bound: i32, max_degree: i32) -> Self {
        Variable { name: name.into(), kind: VarKind::Laurent, window: (-pole_bound, max_degree) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    p: Prime,
    vars: Vec<Variable>,
    order: usize,
}

pub type RingRef = Arc<PolyRing>;

impl PolyRing {
    /// `order` is the h-truncation N; `order == 1` means `h = 0`.
    pub fn new(p: Prime, vars: Vec<Variable>, order: usize) -> Result<RingRef> {
        if order == 0 {
            return Err(Error::InvalidInput("h-truncation order must be at least 1".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::InvalidInput(format!("duplicate variable {}", v.name)));
            }
            if v.kind == VarKind::Truncated && (v.window.0 < 0 || v.window.1 >= p.get() as i32) {
                return Err(Error::InvalidInput(format!("window of truncated variable {} exceeds [0,p)", v.name)));
            }
            if v.kind == VarKind::Polynomial && v.window.0 < 0 {
                return Err(Error::InvalidInput(format!("polynomial variable {} has a pole window", v.name)));
            }
        }
        Ok(Arc::new(PolyRing { p, vars, order }))
    }

    /// `k[x_1..x_n]/(x_i^p)` with the given prefix, h-truncated at `order`.
    pub fn truncated(p: Prime, prefix: &str, n: usize, order: usize) -> Result<RingRef> {
        let vars = (1..=n).map(|i| Variable::truncated(format!("{prefix}{i}"), p)).collect();
        PolyRing::new(p, vars, order)
    }

    pub fn polynomial(p: Prime, prefix: &str, n: usize, max_degree: i32, order: usize) -> Result<RingRef> {
        let vars = (1..=n).map(|i| Variable::polynomial(format!("{prefix}{i}"), max_degree)).collect();
        PolyRing::new(p, vars, order)
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &Variable {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Same variables with a different h-truncation.
    pub fn with_order(&self, order: usize) -> RingRef {
        Arc::new(PolyRing { p: self.p, vars: self.vars.clone(), order: order.max(1) })
    }

    /// Frobenius twist: every variable `x` becomes `x'` of the same kind.
    pub fn twisted(&self) -> RingRef {
        let vars = self
            .vars
            .iter()
            .map(|v| Variable { name: format!("{}'", v.name), kind: v.kind, window: v.window })
            .collect();
        Arc::new(PolyRing { p: self.p, vars, order: self.order })
    }

    /// Whether an exponent vector denotes a nonzero monomial of the ring.
    pub fn admits(&self, m: &[i32]) -> bool {
        let p = self.p.get() as i32;
        m.iter().zip(&self.vars).all(|(&e, v)| match v.kind {
            VarKind::Truncated => (0..p).contains(&e),
            VarKind::Polynomial => e >= 0,
            VarKind::Laurent => true,
        })
    }

    /// Whether an exponent vector lies in the solver window, widened by
    /// `margin` on the upper end for non-truncated variables.
    pub fn in_window(&self, m: &[i32], margin: i32) -> bool {
        self.admits(m)
            && m.iter().zip(&self.vars).all(|(&e, v)| {
                let hi = if v.kind == VarKind::Truncated { v.window.1 } else { v.window.1 + margin };
                e >= v.window.0 && e <= hi
            })
    }

    /// All monomials in the solver window (upper end widened by `margin`).
    pub fn window_monomials(&self, margin: i32) -> Vec<Mono> {
        let mut out = vec![Vec::new()];
        for v in &self.vars {
            let hi = if v.kind == VarKind::Truncated { v.window.1 } else { v.window.1 + margin };
            let mut next = Vec::new();
            for m in &out {
                for e in v.window.0..=hi {
                    let mut m2 = m.clone();
                    m2.push(e);
                    next.push(m2);
                }
            }
            out = next;
        }
        out.retain(|m| self.admits(m));
        out
    }

    pub fn check_same(&self, other: &PolyRing) -> Result<()> {
        if self.p != other.p {
            return Err(Error::CharacteristicMismatch(self.p.get(), other.p.get()));
        }
        if self.vars != other.vars {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", self.names(), other.names())));
        }
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }
}

/// Graded order on monomials with an explicit h-power, h smallest.
pub fn grlex_cmp(a: &[i32], ha: usize, b: &[i32], hb: usize) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum::<i64>() + ha as i64;
    let db: i64 = b.iter().map(|&e| e as i64).sum::<i64>() + hb as i64;
    da.cmp(&db).then_with(|| a.cmp(b)).then_with(|| ha.cmp(&hb))
}

/// An element of a [`PolyRing`]: a finite sum of monomials with
/// coefficients in `GF(p)[h]/h^order`.
#[derive(Clone)]
pub struct TruncPoly {
    ring: RingRef,
    order: usize,
    terms: BTreeMap<Mono, HSeries>,
}

impl PartialEq for TruncPoly {
    fn eq(&self, o: &Self) -> bool {
        self.ring.vars == o.ring.vars && self.order == o.order && self.terms == o.terms
    }
}

impl TruncPoly {
    pub fn zero(ring: &RingRef) -> Self {
        TruncPoly { ring: ring.clone(), order: ring.order, terms: BTreeMap::new() }
    }

    pub fn zero_with_order(ring: &RingRef, order: usize) -> Self {
        TruncPoly { ring: ring.clone(), order, terms: BTreeMap::new() }
    }

    pub fn constant(ring: &RingRef, c: Gf) -> Self {
        Self::term(ring, &vec![0; ring.nvars()], 0, c)
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, ring.p.one())
    }

    pub fn from_i64(ring: &RingRef, c: i64) -> Self {
        Self::constant(ring, ring.p.elem(c))
    }

    /// The variable with index `i`.
    pub fn var(ring: &RingRef, i: usize) -> Self {
        let mut m = vec![0; ring.nvars()];
        m[i] = 1;
        Self::term(ring, &m, 0, ring.p.one())
    }

    pub fn h(ring: &RingRef) -> Self {
        Self::term(ring, &vec![0; ring.nvars()], 1, ring.p.one())
    }

    /// `c * h^hpow * x^m`; zero if the monomial vanishes in the ring.
    pub fn term(ring: &RingRef, m: &[i32], hpow: usize, c: Gf) -> Self {
        let mut t = Self::zero(ring);
        if ring.admits(m) && hpow < ring.order && !c.is_zero() {
            t.terms.insert(m.to_vec(), HSeries::monomial(c, hpow, ring.order));
        }
        t
    }

    pub fn monomial(ring: &RingRef, m: &[i32]) -> Self {
        Self::term(ring, m, 0, ring.p.one())
    }

    /// Builds an element from `(monomial, coefficient series)` pairs.
    pub fn from_series_terms(ring: &RingRef, order: usize, terms: impl IntoIterator<Item = (Mono, HSeries)>) -> Self {
        let mut out = Self::zero_with_order(ring, order);
        for (m, s) in terms {
            out.add_series_term(m, &s);
        }
        out
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn prime(&self) -> Prime {
        self.ring.p
    }

    /// h-adic precision of the element.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Mono, HSeries> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[i32]) -> HSeries {
        self.terms.get(m).cloned().unwrap_or_else(|| HSeries::zero(&self.ring.p.zero(), self.order))
    }

    /// GF(p) coefficient of `h^k x^m`.
    pub fn coeff_at(&self, m: &[i32], k: usize) -> Gf {
        self.terms.get(m).map(|s| *s.coeff(k)).unwrap_or(self.ring.p.zero())
    }

    /// Coefficient of the monomial 1.
    pub fn constant_term(&self) -> HSeries {
        self.coeff(&vec![0; self.ring.nvars()])
    }

    /// Flattened view: `(monomial, h-power, coefficient)` for nonzero entries.
    pub fn flat_terms(&self) -> Vec<(Mono, usize, Gf)> {
        let mut out = Vec::new();
        for (m, s) in &self.terms {
            for (k, c) in s.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((m.clone(), k, *c));
                }
            }
        }
        out
    }

    fn add_series_term(&mut self, m: Mono, s: &HSeries) {
        if !self.ring.admits(&m) {
            return;
        }
        let s = s.truncate(self.order);
        match self.terms.get_mut(&m) {
            Some(e) => {
                let sum = e.add(&s);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *e = sum;
                }
            }
            None => {
                if !s.is_zero() {
                    let mut s = s;
                    if s.order() < self.order {
                        s = HSeries::from_coeffs(&self.ring.p.zero(), s.coeffs().to_vec(), self.order);
                    }
                    self.terms.insert(m, s);
                }
            }
        }
    }

    fn check(&self, o: &Self) {
        assert!(self.ring.vars == o.ring.vars && self.ring.p == o.ring.p, "ring mismatch: {:?} vs {:?}", self.ring.names(), o.ring.names());
    }

    /// Truncates to h-precision `order` (never raises precision).
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut out = Self::zero_with_order(&self.ring, order);
        for (m, s) in &self.terms {
            out.add_series_term(m.clone(), &s.truncate(order));
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let order = self.order.min(o.order);
        let mut out = self.truncate(order);
        for (m, s) in &o.terms {
            out.add_series_term(m.clone(), s);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        TruncPoly {
            ring: self.ring.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(m, s)| (m.clone(), s.neg())).collect(),
        }
    }

    pub fn scale(&self, c: Gf) -> Self {
        if c.is_zero() {
            return Self::zero_with_order(&self.ring, self.order);
        }
        TruncPoly {
            ring: self.ring.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(m, s)| (m.clone(), s.scale(&c))).collect(),
        }
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(self.ring.p.elem(c))
    }

    /// Multiplies every coefficient by the series `s`.
    pub fn mul_series(&self, s: &HSeries) -> Self {
        let order = self.order.min(s.order());
        let mut out = Self::zero_with_order(&self.ring, order);
        for (m, c) in &self.terms {
            out.add_series_term(m.clone(), &c.mul(s));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let order = self.order.min(o.order);
        let mut out = Self::zero_with_order(&self.ring, order);
        let mut m = vec![0; self.ring.nvars()];
        for (ma, sa) in &self.terms {
            for (mb, sb) in &o.terms {
                for i in 0..m.len() {
                    m[i] = ma[i] + mb[i];
                }
                if !self.ring.admits(&m) {
                    continue;
                }
                out.add_series_term(m.clone(), &sa.mul(sb));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.ring).truncate(self.order);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplies by `h^k`, keeping the precision.
    pub fn shift_h(&self, k: usize) -> Self {
        let mut out = Self::zero_with_order(&self.ring, self.order);
        for (m, s) in &self.terms {
            out.add_series_term(m.clone(), &s.shift_up(k));
        }
        out
    }

    /// Exact division by `h^k`; the precision drops by `k`.
    pub fn divide_h(&self, k: usize) -> Result<Self> {
        let order = self.order.saturating_sub(k);
        let mut out = Self::zero_with_order(&self.ring, order);
        for (m, s) in &self.terms {
            out.add_series_term(m.clone(), &s.divide_exact(k)?);
        }
        Ok(out)
    }

    /// Reduction modulo h, returned at precision 1.
    pub fn mod_h(&self) -> Self {
        self.truncate(1)
    }

    /// Re-embeds into a ring with the same variables (possibly different N).
    pub fn in_ring(&self, ring: &RingRef) -> Result<Self> {
        if ring.vars != self.ring.vars || ring.p != self.ring.p {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring.names(), ring.names())));
        }
        let order = self.order.min(ring.order);
        let mut out = Self::zero_with_order(ring, order);
        for (m, s) in &self.terms {
            out.add_series_term(m.clone(), s);
        }
        Ok(out)
    }

    /// Re-embeds into a ring with the same number of variables but possibly
    /// different kinds (e.g. a localization); every monomial must survive.
    pub fn reembed(&self, ring: &RingRef) -> Result<Self> {
        if ring.nvars() != self.ring.nvars() || ring.prime() != self.ring.prime() {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring.names(), ring.names())));
        }
        let mut out = Self::zero_with_order(ring, self.order.min(ring.order()));
        for (m, s) in &self.terms {
            if !ring.admits(m) {
                return Err(Error::RingMismatch(format!("monomial {} does not exist in the target ring", self.format_mono(m))));
            }
            out.add_series_term(m.clone(), s);
        }
        Ok(out)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let p = self.ring.p;
        let mut out = Self::zero_with_order(&self.ring, self.order);
        for (m, s) in &self.terms {
            let e = m[i];
            let c = p.elem(e as i64);
            if c.is_zero() {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            out.add_series_term(m2, &s.scale(&c));
        }
        out
    }

    pub fn nth_derivative(&self, i: usize, k: usize) -> Self {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.derivative(i);
        }
        out
    }

    /// Total degree in the variables (ignoring h); `None` for zero.
    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Lowest total degree in the variables; `None` for zero.
    pub fn low_degree(&self) -> Option<i32> {
        self.terms.keys().map(|m| m.iter().sum()).min()
    }

    /// Coordinate-wise Frobenius twist: `x_i -> x_i'`, coefficients and `h`
    /// unchanged (coefficients are fixed by Frobenius on GF(p)).
    pub fn twist(&self, twisted: &RingRef) -> Result<Self> {
        if twisted.nvars() != self.ring.nvars() {
            return Err(Error::RingMismatch("twist target has a different number of variables".into()));
        }
        let mut out = Self::zero_with_order(twisted, self.order.min(twisted.order));
        for (m, s) in &self.terms {
            out.add_series_term(m.clone(), s);
        }
        Ok(out)
    }

    /// Inverse of the Frobenius embedding `x' -> x^p`: every exponent must be
    /// divisible by p. `h` and GF(p) coefficients are left untouched.
    pub fn pth_root(&self, twisted: &RingRef) -> Result<Self> {
        let p = self.ring.p.get() as i32;
        let mut out = Self::zero_with_order(twisted, self.order.min(twisted.order));
        for (m, s) in &self.terms {
            if m.iter().any(|e| e.rem_euclid(p) != 0) {
                return Err(Error::NotPthPower(format!("monomial {} is not a p-th power", self.format_mono(m))));
            }
            let root: Mono = m.iter().map(|e| e / p).collect();
            if !twisted.admits(&root) {
                return Err(Error::NotPthPower("root leaves the twisted ring".into()));
            }
            out.add_series_term(root, s);
        }
        Ok(out)
    }

    /// Frobenius embedding of a twisted element: `x' -> x^p`.
    pub fn frobenius_embed(&self, target: &RingRef) -> Self {
        let p = self.ring.p.get() as i32;
        let mut out = Self::zero_with_order(target, self.order.min(target.order));
        for (m, s) in &self.terms {
            out.add_series_term(m.iter().map(|e| e * p).collect(), s);
        }
        out
    }

    /// Whether the element is invertible.
    pub fn is_unit(&self) -> bool {
        self.unit_split().is_some()
    }

    /// Splits a unit as `c * x^u * (1 + n)` with `n` nilpotent.
    fn unit_split(&self) -> Option<(Mono, Gf)> {
        let mut lead: Option<(Mono, Gf)> = None;
        for (m, s) in &self.terms {
            let c = *s.coeff(0);
            if c.is_zero() {
                continue;
            }
            let reduced = m.iter().zip(self.ring.vars()).all(|(&e, v)| v.kind != VarKind::Truncated || e == 0);
            if !reduced {
                continue;
            }
            if lead.is_some() {
                return None;
            }
            lead = Some((m.clone(), c));
        }
        let (m, c) = lead?;
        let ok = m.iter().zip(self.ring.vars()).all(|(&e, v)| v.kind == VarKind::Laurent || e == 0);
        ok.then_some((m, c))
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<Self> {
        let (u, c) = self.unit_split().ok_or_else(|| Error::NotAUnit(self.to_string()))?;
        let uinv: Mono = u.iter().map(|e| -e).collect();
        let lead_inv = Self::term(&self.ring, &uinv, 0, c.inv().unwrap()).truncate(self.order);
        // self * lead_inv = 1 + n with n nilpotent
        let n = self.mul(&lead_inv).sub(&Self::one(&self.ring));
        let mut acc = Self::one(&self.ring).truncate(self.order);
        let mut power = acc.clone();
        let bound = self.ring.nvars() * self.ring.p.get() as usize + self.order + 1;
        for _ in 0..bound {
            power = power.mul(&n).neg();
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        if !power.is_zero() {
            return Err(Error::NotAUnit(self.to_string()));
        }
        Ok(acc.mul(&lead_inv))
    }

    /// Substitutes `images[i]` for variable `i`. Negative exponents require
    /// invertible images.
    pub fn substitute(&self, target: &RingRef, images: &[TruncPoly]) -> Result<Self> {
        if images.len() != self.ring.nvars() {
            return Err(Error::InvalidInput("substitution needs one image per variable".into()));
        }
        let mut inverses: Vec<Option<TruncPoly>> = vec![None; images.len()];
        let mut out = Self::zero_with_order(target, self.order.min(target.order));
        for (m, s) in &self.terms {
            let mut t = Self::one(target).truncate(out.order);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e as u64));
                } else if e < 0 {
                    if inverses[i].is_none() {
                        inverses[i] = Some(images[i].inverse()?);
                    }
                    t = t.mul(&inverses[i].as_ref().unwrap().pow((-e) as u64));
                }
            }
            out = out.add(&t.mul_series(s));
        }
        Ok(out)
    }

    pub(crate) fn format_mono(&self, m: &[i32]) -> String {
        let mut parts = Vec::new();
        for (e, v) in m.iter().zip(self.ring.vars()) {
            if *e == 0 {
                continue;
            }
            parts.push(format_power(&v.name, *e));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

pub(crate) fn format_power(name: &str, e: i32) -> String {
    let base = if name.ends_with('\'') && e != 1 { format!("({name})") } else { name.to_string() };
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

/// Canonical text: terms in descending graded-lex order (h smallest),
/// coefficients as symmetric residues.
impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut flat = self.flat_terms();
        if flat.is_empty() {
            return write!(f, "0");
        }
        flat.sort_by(|a, b| grlex_cmp(&b.0, b.1, &a.0, a.1));
        for (idx, (m, k, c)) in flat.iter().enumerate() {
            let s = c.signed();
            let mag = s.unsigned_abs();
            let mut factors = Vec::new();
            if *k > 0 {
                factors.push(format_power("h", *k as i32));
            }
            let mono = self.format_mono(m);
            if mono != "1" {
                factors.push(mono);
            }
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag == 1 {
                factors.join("*")
            } else {
                format!("{}*{}", mag, factors.join("*"))
            };
            if idx == 0 {
                if s < 0 {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
            } else if s < 0 {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncPoly({self} / h^{})", self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(p: u64, n: usize, order: usize) -> RingRef {
        PolyRing::truncated(Prime::new(p).unwrap(), "x", n, order).unwrap()
    }

    #[test]
    fn truncation_kills_pth_powers() {
        let r = b(3, 1, 1);
        let x = TruncPoly::var(&r, 0);
        assert!(x.pow(3).is_zero());
        assert!(!x.pow(2).is_zero());
    }

    #[test]
    fn frobenius_in_truncated_coefficient_ring() {
        // (1+x)^3 = 1 in k[x]/(x^3)
        let r = b(3, 1, 1);
        let one = TruncPoly::one(&r);
        let x = TruncPoly::var(&r, 0);
        assert_eq!(one.add(&x).pow(3), one);
    }

    #[test]
    fn derivative_and_leibniz() {
        let r = b(5, 2, 1);
        let x1 = TruncPoly::var(&r, 0);
        let x2 = TruncPoly::var(&r, 1);
        let f = x1.pow(2).mul(&x2);
        assert_eq!(f.derivative(0), x1.mul(&x2).scale_i64(2));
    }

    #[test]
    fn inverse_of_units() {
        let r = b(3, 2, 4);
        let x1 = TruncPoly::var(&r, 0);
        let h = TruncPoly::h(&r);
        let g = TruncPoly::from_i64(&r, 2).add(&x1).add(&h.mul(&x1));
        let gi = g.inverse().unwrap();
        assert_eq!(g.mul(&gi), TruncPoly::one(&r));
        assert!(x1.inverse().is_err());

        let p = Prime::new(3).unwrap();
        let lr = PolyRing::new(p, vec![Variable::laurent("x", 2, 2)], 1).unwrap();
        let x = TruncPoly::var(&lr, 0);
        assert_eq!(x.inverse().unwrap(), TruncPoly::monomial(&lr, &[-1]));
        assert!(x.add(&TruncPoly::one(&lr)).inverse().is_err());
    }

    #[test]
    fn display_is_canonical() {
        let p = Prime::new(3).unwrap();
        let r = PolyRing::new(p, vec![Variable::polynomial("x1'", 4), Variable::polynomial("x2'", 4)], 5).unwrap();
        let x1 = TruncPoly::var(&r, 0);
        let x2 = TruncPoly::var(&r, 1);
        let k = x1.pow(3).mul(&x2.pow(2)).sub(&x1);
        assert_eq!(k.to_string(), "(x1')^3*(x2')^2 - x1'");
        assert_eq!(k.shift_h(3).to_string(), "h^3*(x1')^3*(x2')^2 - h^3*x1'");
    }

    #[test]
    fn pth_root_and_embedding() {
        let p = Prime::new(3).unwrap();
        let r = PolyRing::polynomial(p, "x", 2, 9, 1).unwrap();
        let t = r.twisted();
        let f = TruncPoly::monomial(&r, &[9, 6]).sub(&TruncPoly::monomial(&r, &[3, 0]));
        let root = f.pth_root(&t).unwrap();
        assert_eq!(root.to_string(), "(x1')^3*(x2')^2 - x1'");
        assert_eq!(root.frobenius_embed(&r), f);
        assert!(TruncPoly::var(&r, 0).pth_root(&t).is_err());
    }
}
