//! The reduced Weyl algebra `A_h = k[[h]]<x_i, y_i>/([y_i, x_j] = δ_ij h,
//! x_i^p = y_i^p = 0)` modulo `h^N`, in normal order (x's left of y's).
//!
//! Commutators are divisible by `h` and `a^p − c^p` by `h^{p−1}`, and the
//! quotients only depend on the inputs modulo `h^N`. Products feeding such a
//! division are therefore computed with the extra orders and the results
//! keep full precision.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::formscalc::ring::{grlex_cmp, format_power, RingRef, TruncPoly};
use crate::scalars::{Gf, HSeries, Prime};

#[derive(Clone, PartialEq)]
pub struct WeylElement {
    p: Prime,
    n: usize,
    order: usize,
    /// exponent vector `[a_1..a_n, b_1..b_n]` for `x^a y^b`
    terms: BTreeMap<Vec<u32>, HSeries>,
}

/// `k! C(b,k) C(c,k)` mod p for `b, c < p`.
fn contraction_coeff(p: Prime, b: u32, c: u32, k: u32) -> Gf {
    let mut num = p.one();
    let mut den = p.one();
    for j in 0..k {
        num *= p.elem((b - j) as i64) * p.elem((c - j) as i64);
        den *= p.elem((j + 1) as i64);
    }
    num * den.inv().expect("k < p")
}

impl WeylElement {
    pub fn zero(p: Prime, n: usize, order: usize) -> Self {
        WeylElement { p, n, order, terms: BTreeMap::new() }
    }

    pub fn scalar(p: Prime, n: usize, s: HSeries) -> Self {
        let order = s.order();
        let mut out = Self::zero(p, n, order);
        out.add_term(vec![0; 2 * n], &s);
        out
    }

    pub fn constant(p: Prime, n: usize, order: usize, c: Gf) -> Self {
        Self::scalar(p, n, HSeries::constant(c, order))
    }

    pub fn one(p: Prime, n: usize, order: usize) -> Self {
        Self::constant(p, n, order, p.one())
    }

    pub fn h(p: Prime, n: usize, order: usize) -> Self {
        Self::scalar(p, n, HSeries::monomial(p.one(), 1, order))
    }

    /// `c h^k x^a y^b`.
    pub fn monomial(p: Prime, n: usize, order: usize, a: &[u32], b: &[u32], k: usize, c: Gf) -> Self {
        let mut out = Self::zero(p, n, order);
        let mut key = a.to_vec();
        key.extend_from_slice(b);
        out.add_term(key, &HSeries::monomial(c, k, order));
        out
    }

    pub fn x(p: Prime, n: usize, order: usize, i: usize) -> Self {
        let mut a = vec![0; n];
        a[i] = 1;
        Self::monomial(p, n, order, &a, &vec![0; n], 0, p.one())
    }

    pub fn y(p: Prime, n: usize, order: usize, i: usize) -> Self {
        let mut b = vec![0; n];
        b[i] = 1;
        Self::monomial(p, n, order, &vec![0; n], &b, 0, p.one())
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn pairs(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, HSeries> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: Vec<u32>, s: &HSeries) {
        let pp = self.p.get();
        if key.iter().any(|&e| e >= pp) {
            return;
        }
        let s = s.truncate(self.order);
        let sum = match self.terms.remove(&key) {
            Some(old) => old.add(&s),
            None => s,
        };
        if !sum.is_zero() {
            let sum = if sum.order() < self.order {
                HSeries::from_coeffs(&self.p.zero(), sum.coeffs().to_vec(), self.order)
            } else {
                sum
            };
            self.terms.insert(key, sum);
        }
    }

    fn check(&self, o: &Self) {
        assert!(self.p == o.p, "characteristic mismatch in Weyl arithmetic");
        assert!(self.n == o.n, "Weyl algebras of different rank");
    }

    /// Coefficient series of `x^a y^b`.
    pub fn coeff(&self, a: &[u32], b: &[u32]) -> HSeries {
        let mut key = a.to_vec();
        key.extend_from_slice(b);
        self.terms.get(&key).cloned().unwrap_or_else(|| HSeries::zero(&self.p.zero(), self.order))
    }

    /// The `h^0 x^0 y^0` coefficient.
    pub fn scalar_part(&self) -> Gf {
        self.terms.get(&vec![0; 2 * self.n]).map(|s| *s.coeff(0)).unwrap_or(self.p.zero())
    }

    /// Flattened `(x-exponents, y-exponents, h-power, coefficient)`.
    pub fn flat_terms(&self) -> Vec<(Vec<u32>, Vec<u32>, usize, Gf)> {
        let mut out = Vec::new();
        for (key, s) in &self.terms {
            for (k, c) in s.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((key[..self.n].to_vec(), key[self.n..].to_vec(), k, *c));
                }
            }
        }
        out
    }

    /// Re-expresses with precision `order`; raising precision pads with zeros.
    pub fn with_order(&self, order: usize) -> Self {
        let mut out = Self::zero(self.p, self.n, order);
        for (key, s) in &self.terms {
            let padded = HSeries::from_coeffs(&self.p.zero(), s.coeffs().to_vec(), order);
            out.add_term(key.clone(), &padded);
        }
        out
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.with_order(order.min(self.order))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let mut out = self.truncate(o.order);
        for (k, s) in &o.terms {
            out.add_term(k.clone(), s);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        WeylElement { p: self.p, n: self.n, order: self.order, terms: self.terms.iter().map(|(k, s)| (k.clone(), s.neg())).collect() }
    }

    pub fn scale(&self, c: Gf) -> Self {
        let mut out = Self::zero(self.p, self.n, self.order);
        for (k, s) in &self.terms {
            out.add_term(k.clone(), &s.scale(&c));
        }
        out
    }

    pub fn mul_series(&self, c: &HSeries) -> Self {
        let mut out = Self::zero(self.p, self.n, self.order.min(c.order()));
        for (k, s) in &self.terms {
            out.add_term(k.clone(), &s.mul(c));
        }
        out
    }

    pub fn shift_h(&self, k: usize) -> Self {
        let mut out = Self::zero(self.p, self.n, self.order);
        for (key, s) in &self.terms {
            out.add_term(key.clone(), &s.shift_up(k));
        }
        out
    }

    pub fn divide_h(&self, k: usize) -> Result<Self> {
        let mut out = Self::zero(self.p, self.n, self.order.saturating_sub(k));
        for (key, s) in &self.terms {
            out.add_term(key.clone(), &s.divide_exact(k)?);
        }
        Ok(out)
    }

    /// Normal-ordered product; `y_i x_i = x_i y_i + h`.
    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let n = self.n;
        let pp = self.p.get();
        let order = self.order.min(o.order);
        let mut out = Self::zero(self.p, n, order);
        for (ka, sa) in &self.terms {
            for (kb, sb) in &o.terms {
                // per pair i: y^b x^c = Σ_k k! C(b,k) C(c,k) h^k x^{c-k} y^{b-k}
                let mut partial: Vec<(Vec<u32>, usize, Gf)> = vec![(vec![0; 2 * n], 0, self.p.one())];
                for i in 0..n {
                    let (a, b, c, d) = (ka[i], ka[n + i], kb[i], kb[n + i]);
                    let mut next = Vec::new();
                    for k in 0..=b.min(c) {
                        let xe = a + c - k;
                        let ye = b + d - k;
                        if xe >= pp || ye >= pp || k as usize >= order {
                            continue;
                        }
                        let coef = contraction_coeff(self.p, b, c, k);
                        if coef.is_zero() {
                            continue;
                        }
                        for (key, hp, cf) in &partial {
                            if hp + k as usize >= order {
                                continue;
                            }
                            let mut key = key.clone();
                            key[i] = xe;
                            key[n + i] = ye;
                            next.push((key, hp + k as usize, *cf * coef));
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                if partial.is_empty() {
                    continue;
                }
                let ab = sa.mul(sb);
                for (key, hp, cf) in partial {
                    out.add_term(key, &ab.shift_up(hp).scale(&cf));
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.p, self.n, self.order);
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

    /// `ab − ba`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// `{a, b} = (ab − ba)/h`.
    pub fn bracket(&self, o: &Self) -> Result<Self> {
        let order = self.order.min(o.order);
        let a = self.with_order(order + 1);
        let b = o.with_order(order + 1);
        a.commutator(&b).divide_h(1)
    }

    /// `(a^p − c^p)/h^{p−1}` with `c` the scalar part.
    pub fn p_operation(&self) -> Result<Self> {
        let p = self.p.get() as usize;
        if self.order < p {
            return Err(Error::TruncationTooSmall { needed: p, got: self.order });
        }
        let lifted = self.with_order(self.order + p - 1);
        let c = self.scalar_part();
        let ap = lifted.pow(p as u64);
        let cp = Self::constant(self.p, self.n, lifted.order, c.pow(p as u64));
        ap.sub(&cp).divide_h(p - 1)
    }

    /// Reduction modulo h as a commutative polynomial in `ring`, whose
    /// variables are `x_1..x_n, y_1..y_n` in that order.
    pub fn to_commutative(&self, ring: &RingRef) -> Result<TruncPoly> {
        if ring.nvars() != 2 * self.n {
            return Err(Error::RingMismatch("commutative ring must have 2n variables".into()));
        }
        let mut out = TruncPoly::zero(ring).truncate(1);
        for (key, s) in &self.terms {
            let m: Vec<i32> = key.iter().map(|&e| e as i32).collect();
            out = out.add(&TruncPoly::term(ring, &m, 0, *s.coeff(0)).truncate(1));
        }
        Ok(out)
    }

    /// The normal-ordered lift of a commutative polynomial in `x, y`.
    pub fn from_commutative(f: &TruncPoly, n: usize, order: usize) -> Result<Self> {
        let p = f.prime();
        if f.ring().nvars() != 2 * n {
            return Err(Error::RingMismatch("commutative ring must have 2n variables".into()));
        }
        let mut out = Self::zero(p, n, order);
        for (m, k, c) in f.flat_terms() {
            if m.iter().any(|&e| e < 0) {
                return Err(Error::InvalidInput("negative exponent in a Weyl element".into()));
            }
            let key: Vec<u32> = m.iter().map(|&e| e as u32).collect();
            out.add_term(key, &HSeries::monomial(c, k, order));
        }
        Ok(out)
    }

    /// Lowest total degree in the `x` variables over all terms.
    pub fn min_x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k[..self.n].iter().sum()).min()
    }
}

/// `((ab)^p − a^p b^p)/h^{p−1}`.
pub fn universal_p(a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
    let p = a.p.get() as usize;
    let order = a.order.min(b.order);
    if order < p {
        return Err(Error::TruncationTooSmall { needed: p, got: order });
    }
    let la = a.with_order(order + p - 1);
    let lb = b.with_order(order + p - 1);
    la.mul(&lb).pow(p as u64).sub(&la.pow(p as u64).mul(&lb.pow(p as u64))).divide_h(p - 1)
}

/// Jacobson's polynomial as the additivity defect
/// `(a+b)^{[p]} − a^{[p]} − b^{[p]}`.
pub fn jacobson_l(a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
    Ok(a.add(b).p_operation()?.sub(&a.p_operation()?).sub(&b.p_operation()?))
}

/// The classical Jacobson sum `Σ s_i(a,b)`, where `i s_i` is the
/// coefficient of `t^{i−1}` in `ad(ta+b)^{p−1}(a)`, evaluated with the
/// bracket `{−,−}`.
pub fn jacobson_classical(a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
    let p = a.p.get() as usize;
    let order = a.order.min(b.order);
    let zero = WeylElement::zero(a.p, a.n, order);
    // coefficient list in t
    let mut v = vec![a.truncate(order)];
    for _ in 0..p - 1 {
        let mut next = vec![zero.clone(); v.len() + 1];
        for (j, c) in v.iter().enumerate() {
            next[j] = next[j].add(&b.bracket(c)?);
            next[j + 1] = next[j + 1].add(&a.bracket(c)?);
        }
        v = next;
    }
    let mut out = zero;
    for i in 1..p {
        let inv = a.p.elem(i as i64).inv().unwrap();
        out = out.add(&v[i - 1].scale(inv));
    }
    Ok(out)
}

/// An automorphism of `A_h`, stored as the images of `x_1..x_n, y_1..y_n`.
#[derive(Clone, PartialEq)]
pub struct WeylAutomorphism {
    images: Vec<WeylElement>,
    pub certified: bool,
}

impl WeylAutomorphism {
    pub fn identity(p: Prime, n: usize, order: usize) -> Self {
        let mut images: Vec<_> = (0..n).map(|i| WeylElement::x(p, n, order, i)).collect();
        images.extend((0..n).map(|i| WeylElement::y(p, n, order, i)));
        WeylAutomorphism { images, certified: true }
    }

    /// Checks every defining relation on the proposed images.
    pub fn new(images: Vec<WeylElement>) -> Result<Self> {
        verify_relations(&images)?;
        Ok(WeylAutomorphism { images, certified: true })
    }

    pub fn images(&self) -> &[WeylElement] {
        &self.images
    }

    pub fn image_x(&self, i: usize) -> &WeylElement {
        &self.images[i]
    }

    pub fn image_y(&self, i: usize) -> &WeylElement {
        &self.images[self.images.len() / 2 + i]
    }

    /// Evaluates on an element by substitution into normal-ordered monomials.
    pub fn apply(&self, a: &WeylElement) -> WeylElement {
        let n = a.n;
        let order = a.order.min(self.images[0].order);
        let mut out = WeylElement::zero(a.p, n, order);
        for (key, s) in &a.terms {
            let mut t = WeylElement::one(a.p, n, order);
            for (i, &e) in key.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&self.images[i].pow(e as u64));
                }
            }
            out = out.add(&t.mul_series(s));
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        WeylAutomorphism { images: other.images.iter().map(|g| self.apply(g)).collect(), certified: self.certified && other.certified }
    }

    pub fn is_identity(&self) -> bool {
        let a = &self.images[0];
        *self == Self::identity(a.p, a.n, a.order)
    }
}

impl fmt::Debug for WeylAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len() / 2;
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, g)| if i < n { format!("x{} -> {g}", i + 1) } else { format!("y{} -> {g}", i - n + 1) })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `[y_i, x_j] = δ_ij h`, `[x_i,x_j] = [y_i,y_j] = 0`, `x_i^p = y_i^p = 0`.
pub fn verify_relations(images: &[WeylElement]) -> Result<()> {
    let n = images.len() / 2;
    if images.len() != 2 * n || n == 0 {
        return Err(Error::InvalidInput("need images of x_1..x_n, y_1..y_n".into()));
    }
    let p = images[0].p;
    let order = images.iter().map(|g| g.order).min().unwrap();
    let h = WeylElement::h(p, n, order);
    let zero = WeylElement::zero(p, n, order);
    for i in 0..n {
        for j in 0..n {
            let (xi, xj, yi, yj) = (&images[i], &images[j], &images[n + i], &images[n + j]);
            if xi.commutator(xj) != zero || yi.commutator(yj) != zero {
                return Err(Error::RelationViolated(format!("generators {i},{j} fail to commute")));
            }
            let expect = if i == j { h.clone() } else { zero.clone() };
            if yi.commutator(xj) != expect {
                return Err(Error::RelationViolated(format!("[y{}, x{}] is not {}", i + 1, j + 1, expect)));
            }
        }
        for g in [&images[i], &images[n + i]] {
            if !g.pow(p.get() as u64).is_zero() {
                return Err(Error::RelationViolated(format!("({g})^p != 0")));
            }
        }
    }
    Ok(())
}

/// Conjugation by the restricted exponential of `f/h`: the truncated
/// exponential `Σ_{k<p} D^k/k!` of `D = {f, −}`.
pub fn hamiltonian_exponential(f: &WeylElement) -> Result<WeylAutomorphism> {
    let (p, n, order) = (f.p, f.n, f.order);
    if let Some(d) = f.min_x_degree() {
        if d < 2 {
            return Err(Error::InvalidInput(format!("{f} is not in the square of the ideal (x)")));
        }
    }
    let pp = p.get() as usize;
    let id = WeylAutomorphism::identity(p, n, order);
    let mut images = Vec::with_capacity(2 * n);
    for g in id.images() {
        let mut term = g.clone();
        let mut sum = g.clone();
        let mut fact = p.one();
        for k in 1..pp {
            term = f.bracket(&term)?;
            if term.is_zero() {
                break;
            }
            fact *= p.elem(k as i64);
            sum = sum.add(&term.scale(fact.inv().unwrap()));
        }
        let tail = if term.is_zero() { term } else { f.bracket(&term)? };
        if !tail.is_zero() {
            return Err(Error::NilpotencyTooDeep(format!("{{f,-}}^{pp}({g}) = {tail}")));
        }
        images.push(sum);
    }
    WeylAutomorphism::new(images)
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut flat = self.flat_terms();
        if flat.is_empty() {
            return write!(f, "0");
        }
        let key = |t: &(Vec<u32>, Vec<u32>, usize, Gf)| -> Vec<i32> { t.0.iter().chain(&t.1).map(|&e| e as i32).collect() };
        flat.sort_by(|a, b| grlex_cmp(&key(b), b.2, &key(a), a.2));
        for (idx, t) in flat.iter().enumerate() {
            let (xa, yb, k, c) = t;
            let s = c.signed();
            let mag = s.unsigned_abs();
            let mut factors = Vec::new();
            if *k > 0 {
                factors.push(format_power("h", *k as i32));
            }
            for (i, &e) in xa.iter().enumerate() {
                if e > 0 {
                    factors.push(format_power(&format!("x{}", i + 1), e as i32));
                }
            }
            for (i, &e) in yb.iter().enumerate() {
                if e > 0 {
                    factors.push(format_power(&format!("y{}", i + 1), e as i32));
                }
            }
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag == 1 {
                factors.join("*")
            } else {
                format!("{}*{}", mag, factors.join("*"))
            };
            let sep = match (idx, s < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElement({self} / h^{})", self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(p: u64, n: usize, order: usize) -> (Prime, Vec<WeylElement>, Vec<WeylElement>) {
        let p = Prime::new(p).unwrap();
        let xs = (0..n).map(|i| WeylElement::x(p, n, order, i)).collect();
        let ys = (0..n).map(|i| WeylElement::y(p, n, order, i)).collect();
        (p, xs, ys)
    }

    #[test]
    fn basic_products() {
        let (p, x, y) = gens(3, 2, 5);
        let h = WeylElement::h(p, 2, 5);
        assert_eq!(y[0].mul(&x[0]), x[0].mul(&y[0]).add(&h));
        assert_eq!(x[0].mul(&x[1]).to_string(), "x1*x2");
        assert_eq!(y[0].mul(&x[0]).to_string(), "x1*y1 + h");
    }

    #[test]
    fn bracket_examples() {
        let (p, x, y) = gens(3, 2, 5);
        let one = WeylElement::one(p, 2, 5);
        assert_eq!(y[0].bracket(&x[0]).unwrap(), one);
        assert!(x[0].bracket(&x[1]).unwrap().is_zero());
        assert_eq!(y[0].bracket(&x[0].pow(2)).unwrap(), x[0].scale(p.elem(2)));
    }

    #[test]
    fn p_operation_examples() {
        let (p, x, y) = gens(3, 1, 5);
        let h = WeylElement::h(p, 1, 5);
        assert!(x[0].p_operation().unwrap().is_zero());
        assert_eq!(h.p_operation().unwrap(), h);
        let yx = y[0].mul(&x[0]);
        assert_eq!(yx.p_operation().unwrap(), yx);
        assert_eq!(yx.p_operation().unwrap().to_string(), "x1*y1 + h");
    }

    #[test]
    fn universal_p_examples() {
        let (p, x, y) = gens(3, 2, 5);
        assert!(universal_p(&x[0], &x[1]).unwrap().is_zero());
        assert_eq!(universal_p(&y[0], &x[0]).unwrap(), y[0].mul(&x[0]));
        let one = WeylElement::one(p, 2, 5);
        let a = x[0].add(&y[1]).mul(&y[0]);
        assert!(universal_p(&a, &one).unwrap().is_zero());
    }

    #[test]
    fn jacobson_routes_agree() {
        let (p, x, y) = gens(3, 1, 5);
        let zero = WeylElement::zero(p, 1, 5);
        assert!(jacobson_l(&y[0], &zero).unwrap().is_zero());
        let l = jacobson_l(&y[0], &x[0]).unwrap();
        assert_eq!(l, jacobson_classical(&y[0], &x[0]).unwrap());
        let a = y[0].mul(&y[0]).add(&x[0]);
        let b = x[0].mul(&y[0]);
        assert_eq!(jacobson_l(&a, &b).unwrap(), jacobson_classical(&a, &b).unwrap());
    }

    #[test]
    fn exponential_of_square() {
        let (p, x, y) = gens(3, 1, 5);
        let f = x[0].pow(2);
        let phi = hamiltonian_exponential(&f).unwrap();
        assert_eq!(phi.image_x(0), &x[0]);
        assert_eq!(phi.image_y(0), &y[0].sub(&x[0].scale(p.elem(2))));
        let id = hamiltonian_exponential(&WeylElement::zero(p, 1, 5)).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn exponential_two_pairs_p5() {
        let (_, x, _) = gens(5, 2, 7);
        let f = x[0].pow(2).mul(&x[1]);
        let phi = hamiltonian_exponential(&f).unwrap();
        assert!(phi.certified);
        assert!(x[0].bracket(&x[1]).unwrap().is_zero());
    }

    #[test]
    fn rejects_linear_generator() {
        let (_, x, _) = gens(3, 1, 5);
        assert!(hamiltonian_exponential(&x[0]).is_err());
    }
}
