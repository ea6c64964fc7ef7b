//! Ideal membership via Buchberger completion with cofactor tracking.
//!
//! Internally every element is a polynomial over GF(p) in the ring
//! variables, one auxiliary inverse per Laurent variable, and `h` (last and
//! smallest in the graded-lex order). The ring relations `x^p`, `h^N` and
//! `x u − 1` join the user generators.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::formscalc::ring::{RingRef, TruncPoly, VarKind};
use crate::scalars::{Gf, Prime};

#[derive(Clone, PartialEq, Eq, Debug)]
struct Exp(Vec<u32>);

impl Ord for Exp {
    fn cmp(&self, o: &Self) -> Ordering {
        let da: u32 = self.0.iter().sum();
        let db: u32 = o.0.iter().sum();
        da.cmp(&db).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

type GPoly = BTreeMap<Exp, Gf>;

struct Layout {
    p: Prime,
    nvars: usize,
    /// position of the auxiliary inverse for each Laurent variable
    aux: Vec<Option<usize>>,
    h: usize,
    width: usize,
    truncated: Vec<bool>,
    order: usize,
}

impl Layout {
    fn new(ring: &RingRef) -> Self {
        let nvars = ring.nvars();
        let mut aux = vec![None; nvars];
        let mut next = nvars;
        for (i, v) in ring.vars().iter().enumerate() {
            if v.kind == VarKind::Laurent {
                aux[i] = Some(next);
                next += 1;
            }
        }
        Layout {
            p: ring.prime(),
            nvars,
            aux,
            h: next,
            width: next + 1,
            truncated: ring.vars().iter().map(|v| v.kind == VarKind::Truncated).collect(),
            order: ring.order(),
        }
    }

    /// Drops monomials that vanish in the quotient and cancels `x u`.
    fn normalize(&self, e: &mut [u32]) -> bool {
        for i in 0..self.nvars {
            if let Some(a) = self.aux[i] {
                let m = e[i].min(e[a]);
                e[i] -= m;
                e[a] -= m;
            } else if self.truncated[i] && e[i] >= self.p.get() {
                return false;
            }
        }
        (e[self.h] as usize) < self.order
    }

    fn import(&self, f: &TruncPoly) -> GPoly {
        let mut out = GPoly::new();
        for (m, k, c) in f.flat_terms() {
            let mut e = vec![0u32; self.width];
            for (i, &x) in m.iter().enumerate() {
                if x >= 0 {
                    e[i] = x as u32;
                } else {
                    e[self.aux[i].expect("negative exponent on a non-Laurent variable")] = (-x) as u32;
                }
            }
            e[self.h] = k as u32;
            add_term(&mut out, Exp(e), c);
        }
        out
    }

    fn export(&self, ring: &RingRef, g: &GPoly) -> TruncPoly {
        let mut out = TruncPoly::zero(ring);
        for (e, c) in g {
            let mut m = vec![0i32; self.nvars];
            for i in 0..self.nvars {
                m[i] = e.0[i] as i32 - self.aux[i].map_or(0, |a| e.0[a] as i32);
            }
            out = out.add(&TruncPoly::term(ring, &m, e.0[self.h] as usize, *c));
        }
        out
    }

    fn relations(&self) -> Vec<GPoly> {
        let mut out = Vec::new();
        let unit = |i: usize, k: u32| {
            let mut e = vec![0u32; self.width];
            e[i] = k;
            Exp(e)
        };
        for i in 0..self.nvars {
            if self.truncated[i] {
                out.push(GPoly::from([(unit(i, self.p.get()), self.p.one())]));
            }
            if let Some(a) = self.aux[i] {
                let mut e = vec![0u32; self.width];
                e[i] = 1;
                e[a] = 1;
                out.push(GPoly::from([(Exp(e), self.p.one()), (Exp(vec![0; self.width]), -self.p.one())]));
            }
        }
        out.push(GPoly::from([(unit(self.h, self.order as u32), self.p.one())]));
        out
    }

    fn clean(&self, g: &GPoly) -> GPoly {
        let mut out = GPoly::new();
        for (e, c) in g {
            let mut e2 = e.0.clone();
            if self.normalize(&mut e2) {
                add_term(&mut out, Exp(e2), *c);
            }
        }
        out
    }
}

fn add_term(g: &mut GPoly, e: Exp, c: Gf) {
    if c.is_zero() {
        return;
    }
    match g.get_mut(&e) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                g.remove(&e);
            }
        }
        None => {
            g.insert(e, c);
        }
    }
}

fn lead(g: &GPoly) -> (&Exp, Gf) {
    let (e, c) = g.iter().next_back().expect("leading term of zero");
    (e, *c)
}

fn divides(a: &Exp, b: &Exp) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| x <= y)
}

/// `acc += c * x^e * g`.
fn add_scaled(acc: &mut GPoly, g: &GPoly, e: &[u32], c: Gf) {
    for (ge, gc) in g {
        let m: Vec<u32> = ge.0.iter().zip(e).map(|(a, b)| a + b).collect();
        add_term(acc, Exp(m), *gc * c);
    }
}

#[derive(Clone)]
struct Element {
    poly: GPoly,
    /// cofactors on the user generators
    cof: Vec<GPoly>,
}

pub struct GroebnerBasis {
    layout: Layout,
    elems: Vec<Element>,
    ngens: usize,
}

impl GroebnerBasis {
    fn reduce(&self, f: &GPoly) -> (GPoly, Vec<GPoly>) {
        let mut rem = GPoly::new();
        let mut quot = vec![GPoly::new(); self.ngens];
        let mut work = f.clone();
        while let Some((e, c)) = work.iter().next_back().map(|(e, c)| (e.clone(), *c)) {
            let found = self.elems.iter().find(|g| divides(lead(&g.poly).0, &e));
            match found {
                Some(g) => {
                    let (ge, gc) = lead(&g.poly);
                    let shift: Vec<u32> = e.0.iter().zip(&ge.0).map(|(a, b)| a - b).collect();
                    let factor = c * gc.inv().unwrap();
                    add_scaled(&mut work, &g.poly, &shift, -factor);
                    for (q, gcof) in quot.iter_mut().zip(&g.cof) {
                        add_scaled(q, gcof, &shift, factor);
                    }
                }
                None => {
                    work.remove(&e);
                    rem.insert(e, c);
                }
            }
        }
        (rem, quot.iter().map(|q| self.layout.clean(q)).collect())
    }

    fn build(ring: &RingRef, gens: &[TruncPoly]) -> Self {
        let layout = Layout::new(ring);
        let ngens = gens.len();
        let zero_cof = vec![GPoly::new(); ngens];
        let mut elems: Vec<Element> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let poly = layout.import(g);
            if poly.is_empty() {
                continue;
            }
            let mut cof = zero_cof.clone();
            cof[i] = GPoly::from([(Exp(vec![0; layout.width]), layout.p.one())]);
            elems.push(Element { poly, cof });
        }
        for r in layout.relations() {
            elems.push(Element { poly: r, cof: zero_cof.clone() });
        }
        let mut gb = GroebnerBasis { layout, elems, ngens };
        let mut pairs: Vec<(usize, usize)> = (0..gb.elems.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        while let Some((i, j)) = pairs.pop() {
            let (ei, ci) = lead(&gb.elems[i].poly);
            let (ej, cj) = lead(&gb.elems[j].poly);
            if ei.0.iter().zip(&ej.0).all(|(a, b)| *a == 0 || *b == 0) {
                continue;
            }
            let lcm: Vec<u32> = ei.0.iter().zip(&ej.0).map(|(a, b)| *a.max(b)).collect();
            let si: Vec<u32> = lcm.iter().zip(&ei.0).map(|(a, b)| a - b).collect();
            let sj: Vec<u32> = lcm.iter().zip(&ej.0).map(|(a, b)| a - b).collect();
            let (fi, fj) = (ci.inv().unwrap(), cj.inv().unwrap());
            let mut s = GPoly::new();
            add_scaled(&mut s, &gb.elems[i].poly, &si, fi);
            add_scaled(&mut s, &gb.elems[j].poly, &sj, -fj);
            let mut scof = vec![GPoly::new(); ngens];
            for k in 0..ngens {
                add_scaled(&mut scof[k], &gb.elems[i].cof[k], &si, fi);
                add_scaled(&mut scof[k], &gb.elems[j].cof[k], &sj, -fj);
            }
            let (rem, quot) = gb.reduce(&s);
            if rem.is_empty() {
                continue;
            }
            // rem = s − Σ quot_k gen_k
            let cof: Vec<GPoly> = scof
                .iter()
                .zip(&quot)
                .map(|(a, q)| {
                    let mut c = a.clone();
                    for (e, v) in q {
                        add_term(&mut c, e.clone(), -*v);
                    }
                    gb.layout.clean(&c)
                })
                .collect();
            let n = gb.elems.len();
            gb.elems.push(Element { poly: rem, cof });
            pairs.extend((0..n).map(|i| (i, n)));
        }
        gb
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

/// An ideal given by generators in a [`PolyRing`](crate::formscalc::PolyRing).
pub struct IdealPresentation {
    ring: RingRef,
    generators: Vec<TruncPoly>,
    cache: OnceLock<GroebnerBasis>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// `f = Σ q_i g_i` when `member`.
    pub certificate: Option<Vec<TruncPoly>>,
    /// Normal form of `f` modulo the ideal.
    pub remainder: TruncPoly,
}

impl IdealPresentation {
    pub fn new(ring: &RingRef, generators: Vec<TruncPoly>) -> Result<Self> {
        for g in &generators {
            ring.check_same(g.ring())?;
        }
        Ok(IdealPresentation { ring: ring.clone(), generators, cache: OnceLock::new() })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[TruncPoly] {
        &self.generators
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        self.cache.get_or_init(|| GroebnerBasis::build(&self.ring, &self.generators))
    }

    /// Membership test; a positive answer carries a certificate that has
    /// been re-verified by multiplication in the ring.
    pub fn membership(&self, f: &TruncPoly) -> Result<Membership> {
        self.ring.check_same(f.ring())?;
        let gb = self.groebner();
        let (rem, quot) = gb.reduce(&gb.layout.import(f));
        let remainder = gb.layout.export(&self.ring, &rem);
        if !rem.is_empty() {
            return Ok(Membership { member: false, certificate: None, remainder });
        }
        let cert: Vec<TruncPoly> = quot.iter().map(|q| gb.layout.export(&self.ring, q)).collect();
        let mut sum = TruncPoly::zero(&self.ring);
        for (q, g) in cert.iter().zip(&self.generators) {
            sum = sum.add(&q.mul(g));
        }
        if sum.truncate(f.order()) != *f {
            return Err(Error::RelationViolated(format!("membership certificate for {f} does not re-verify")));
        }
        Ok(Membership { member: true, certificate: Some(cert), remainder })
    }

    pub fn contains(&self, f: &TruncPoly) -> Result<bool> {
        Ok(self.membership(f)?.member)
    }
}

/// Convenience wrapper: is `f` in the ideal generated by `gens`?
pub fn ideal_membership(f: &TruncPoly, ideal: &IdealPresentation) -> Result<Membership> {
    ideal.membership(f)
}
