//! Prime-field scalars and h-adically truncated series.
//!
//! `Gf` carries its characteristic so that mixing fields is caught at the
//! point of use. `HSeries` is dense: it stores exactly `order` coefficients,
//! which is the number of meaningful powers of `h`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// An odd prime characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p > 1 << 15 || p % 2 == 0 {
            return Err(Error::InvalidPrime(p));
        }
        let mut d = 3;
        while d * d <= p {
            if p % d == 0 {
                return Err(Error::InvalidPrime(p));
            }
            d += 2;
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    pub fn zero(self) -> Gf {
        Gf::new(0, self)
    }

    pub fn one(self) -> Gf {
        Gf::new(1, self)
    }

    pub fn elem(self, v: i64) -> Gf {
        Gf::from_i64(v, self)
    }

    /// All elements of the field in residue order.
    pub fn elements(self) -> impl Iterator<Item = Gf> {
        (0..self.0).map(move |v| Gf::new(v, self))
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of GF(p).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf {
    value: u32,
    p: u32,
}

impl Gf {
    #[inline]
    pub fn new(v: u32, p: Prime) -> Self {
        Gf { value: v % p.0, p: p.0 }
    }

    pub fn from_i64(v: i64, p: Prime) -> Self {
        Gf { value: v.rem_euclid(p.0 as i64) as u32, p: p.0 }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn prime(self) -> Prime {
        Prime(self.p)
    }

    /// Residue in the symmetric window `(-p/2, p/2]`.
    pub fn signed(self) -> i64 {
        let v = self.value as i64;
        if v > self.p as i64 / 2 {
            v - self.p as i64
        } else {
            v
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut e: u64) -> Gf {
        let p = self.p as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Gf { value: acc as u32, p: self.p }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Gf> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.p as u64 - 2))
        }
    }

    #[inline]
    fn check(self, o: Gf) {
        assert_eq!(self.p, o.p, "characteristic mismatch in GF arithmetic");
    }
}

/// `a^e` reduced mod p.
pub fn gf_pow(a: Gf, e: u64) -> Gf {
    a.pow(e)
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signed())
    }
}

impl Add for Gf {
    type Output = Gf;
    #[inline]
    fn add(self, o: Gf) -> Gf {
        self.check(o);
        let s = self.value + o.value;
        Gf { value: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
}

impl Sub for Gf {
    type Output = Gf;
    #[inline]
    fn sub(self, o: Gf) -> Gf {
        self.check(o);
        let s = self.value + self.p - o.value;
        Gf { value: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
}

impl Mul for Gf {
    type Output = Gf;
    #[inline]
    fn mul(self, o: Gf) -> Gf {
        self.check(o);
        Gf { value: ((self.value as u64 * o.value as u64) % self.p as u64) as u32, p: self.p }
    }
}

impl Neg for Gf {
    type Output = Gf;
    #[inline]
    fn neg(self) -> Gf {
        Gf { value: if self.value == 0 { 0 } else { self.p - self.value }, p: self.p }
    }
}

impl AddAssign for Gf {
    fn add_assign(&mut self, o: Gf) {
        *self = *self + o;
    }
}

impl SubAssign for Gf {
    fn sub_assign(&mut self, o: Gf) {
        *self = *self - o;
    }
}

impl MulAssign for Gf {
    fn mul_assign(&mut self, o: Gf) {
        *self = *self * o;
    }
}

/// Commutative coefficient rings usable inside [`HSeries`].
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    /// The p-th power map.
    fn frobenius(&self) -> Self;
}

impl Coefficient for Gf {
    fn zero_like(&self) -> Self {
        Gf { value: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Gf { value: 1, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn plus(&self, o: &Self) -> Self {
        *self + *o
    }
    fn minus(&self, o: &Self) -> Self {
        *self - *o
    }
    fn times(&self, o: &Self) -> Self {
        *self * *o
    }
    fn negated(&self) -> Self {
        -*self
    }
    fn frobenius(&self) -> Self {
        // Fermat
        *self
    }
}

/// A power series in `h` known modulo `h^order`.
#[derive(Clone, PartialEq)]
pub struct HSeries<C: Coefficient = Gf> {
    coeffs: Vec<C>,
    zero: C,
}

impl<C: Coefficient> HSeries<C> {
    pub fn zero(template: &C, order: usize) -> Self {
        let zero = template.zero_like();
        HSeries { coeffs: vec![zero.clone(); order], zero }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(&c, order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `c * h^k` truncated at `order`.
    pub fn monomial(c: C, k: usize, order: usize) -> Self {
        let mut s = Self::zero(&c, order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from the given coefficients; entries at or beyond
    /// `order` are discarded, missing entries are zero.
    pub fn from_coeffs(template: &C, coeffs: Vec<C>, order: usize) -> Self {
        let mut s = Self::zero(template, order);
        for (k, c) in coeffs.into_iter().enumerate().take(order) {
            s.coeffs[k] = c;
        }
        s
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &C {
        self.coeffs.get(k).unwrap_or(&self.zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn zero_template(&self) -> &C {
        &self.zero
    }

    pub fn set_coeff(&mut self, k: usize, c: C) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest power of `h` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        HSeries { coeffs: self.coeffs[..order].to_vec(), zero: self.zero.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let coeffs = (0..order).map(|k| self.coeffs[k].plus(&o.coeffs[k])).collect();
        HSeries { coeffs, zero: self.zero.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let coeffs = (0..order).map(|k| self.coeffs[k].minus(&o.coeffs[k])).collect();
        HSeries { coeffs, zero: self.zero.clone() }
    }

    pub fn neg(&self) -> Self {
        HSeries { coeffs: self.coeffs.iter().map(|c| c.negated()).collect(), zero: self.zero.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let mut out = vec![self.zero.clone(); order];
        for (i, a) in self.coeffs.iter().enumerate().take(order) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(order - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        HSeries { coeffs: out, zero: self.zero.clone() }
    }

    pub fn scale(&self, c: &C) -> Self {
        HSeries { coeffs: self.coeffs.iter().map(|a| a.times(c)).collect(), zero: self.zero.clone() }
    }

    /// Multiplies by `h^k`; the order is kept.
    pub fn shift_up(&self, k: usize) -> Self {
        let order = self.order();
        let mut out = vec![self.zero.clone(); order];
        for i in 0..order.saturating_sub(k) {
            out[i + k] = self.coeffs[i].clone();
        }
        HSeries { coeffs: out, zero: self.zero.clone() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::constant(self.zero.one_like(), self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact division by `h^k`. The result is known modulo `h^(order-k)`.
    pub fn divide_exact(&self, k: usize) -> Result<Self> {
        for i in 0..k.min(self.order()) {
            if !self.coeffs[i].is_zero() {
                return Err(Error::NotDivisible { index: i });
            }
        }
        let coeffs = if k >= self.order() { Vec::new() } else { self.coeffs[k..].to_vec() };
        Ok(HSeries { coeffs, zero: self.zero.clone() })
    }

    /// Replaces every coefficient by its p-th power; `h` is untouched.
    pub fn frobenius_coefficientwise(&self) -> Self {
        HSeries { coeffs: self.coeffs.iter().map(|c| c.frobenius()).collect(), zero: self.zero.clone() }
    }
}

impl HSeries<Gf> {
    pub fn prime(&self) -> Prime {
        self.zero.prime()
    }

    /// Multiplicative inverse when the constant term is a unit.
    pub fn inverse(&self) -> Option<Self> {
        let order = self.order();
        if order == 0 {
            return Some(self.clone());
        }
        let c0inv = self.coeffs[0].inv()?;
        let mut out = vec![self.zero; order];
        out[0] = c0inv;
        for k in 1..order {
            let mut s = self.zero;
            for i in 1..=k {
                s += self.coeffs[i] * out[k - i];
            }
            out[k] = -(s * c0inv);
        }
        Some(HSeries { coeffs: out, zero: self.zero })
    }
}

impl<C: Coefficient> fmt::Debug for HSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HSeries{:?}/h^{}", self.coeffs, self.order())
    }
}

/// Exact division of `a` by `h^k`.
pub fn hseries_divide_exact<C: Coefficient>(a: &HSeries<C>, k: usize) -> Result<HSeries<C>> {
    a.divide_exact(k)
}

/// Coefficientwise p-th power.
pub fn frobenius_coefficientwise<C: Coefficient>(a: &HSeries<C>) -> HSeries<C> {
    a.frobenius_coefficientwise()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(2).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
        assert_eq!(Prime::new(7).unwrap().get(), 7);
    }

    #[test]
    fn gf_pow_examples() {
        assert_eq!(gf_pow(p(3).elem(2), 3), p(3).elem(2));
        assert_eq!(gf_pow(p(5).elem(0), 5), p(5).elem(0));
        // repeated multiplication oracle
        let a = p(5).elem(2);
        let mut acc = p(5).one();
        for _ in 0..4 {
            acc = acc * a;
        }
        assert_eq!(acc, p(5).one());
        assert_eq!(gf_pow(a, 4), acc);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [3u64, 5] {
            let f = p(q);
            let els: Vec<Gf> = f.elements().collect();
            for &a in &els {
                assert_eq!(a.pow(q), a);
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), f.one());
                }
                for &b in &els {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    assert_eq!(a - b + b, a);
                    for &c in &els {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "characteristic mismatch")]
    fn mixing_characteristics_panics() {
        let _ = p(3).one() + p(5).one();
    }

    #[test]
    fn divide_exact_examples() {
        let f = p(5);
        let n = 7;
        let h2 = HSeries::monomial(f.one(), 2, n);
        let q = h2.divide_exact(2).unwrap();
        assert_eq!(q, HSeries::constant(f.one(), n - 2));

        let a = HSeries::from_coeffs(&f.zero(), vec![f.one(), f.one()], n);
        assert_eq!(a.divide_exact(1), Err(Error::NotDivisible { index: 0 }));

        let a = HSeries::from_coeffs(&f.zero(), vec![f.zero(), f.zero(), f.zero(), f.elem(3), f.one()], n);
        let q = a.divide_exact(3).unwrap();
        assert_eq!(q, HSeries::from_coeffs(&f.zero(), vec![f.elem(3), f.one()], n - 3));
        // multiply back
        let back = HSeries::from_coeffs(&f.zero(), q.coeffs().to_vec(), n).shift_up(3);
        assert_eq!(back, a);
    }

    #[test]
    fn round_trip_shift_divide() {
        let f = p(3);
        let n = 6;
        let a = HSeries::from_coeffs(&f.zero(), vec![f.elem(1), f.elem(2), f.elem(0), f.elem(1)], n);
        for k in 0..n {
            let shifted = a.shift_up(k);
            assert_eq!(shifted.divide_exact(k).unwrap(), a.truncate(n - k));
        }
    }

    #[test]
    fn frobenius_on_scalars_is_identity() {
        let f = p(3);
        let a = HSeries::from_coeffs(&f.zero(), vec![f.elem(1), f.elem(2)], 4);
        assert_eq!(a.frobenius_coefficientwise(), a);
    }

    #[test]
    fn inverse_series() {
        let f = p(5);
        let a = HSeries::from_coeffs(&f.zero(), vec![f.elem(2), f.elem(3), f.elem(1)], 6);
        let b = a.inverse().unwrap();
        assert_eq!(a.mul(&b), HSeries::constant(f.one(), 6));
    }
}
