//! Normal form of a surjection `ψ: A_h → B = k[z]/(z^p)`: find
//! automorphisms of `A_h` after which the kernel is `J = (h, y_1..y_n)`.
//!
//! Since `B` is commutative, `ψ(h) = ψ([y_i, x_i]) = 0`, so `ψ` is given by
//! the images of `x_i, y_i` in `B`.

use crate::error::{Error, Result};
use crate::formscalc::solve::poly_to_map;
use crate::formscalc::{cartier, solve_primitive, DiffForm, PolyRing, RingRef, TruncPoly};
use crate::linalg::{Matrix, SparseSystem};
use crate::scalars::{Gf, HSeries, Prime};
use crate::weyl::{hamiltonian_exponential, WeylAutomorphism, WeylElement};

#[derive(Clone, Debug)]
pub struct Surjection {
    pub p: Prime,
    pub n: usize,
    /// h-precision of the automorphisms produced
    pub order: usize,
    /// the target `B` in variables `z1..zn`
    pub target: RingRef,
    /// images of `x_1..x_n, y_1..y_n`
    pub images: Vec<TruncPoly>,
}

impl Surjection {
    pub fn target_ring(p: Prime, n: usize) -> Result<RingRef> {
        PolyRing::truncated(p, "z", n, 1)
    }

    pub fn new(p: Prime, n: usize, order: usize, images: Vec<TruncPoly>) -> Result<Self> {
        let target = Self::target_ring(p, n)?;
        if images.len() != 2 * n {
            return Err(Error::InvalidInput(format!("expected {} images", 2 * n)));
        }
        let images = images.iter().map(|g| g.in_ring(&target).map(|g| g.truncate(1))).collect::<Result<Vec<_>>>()?;
        Ok(Surjection { p, n, order, target, images })
    }

    /// The standard projection `x_i ↦ z_i`, `y_i ↦ 0`.
    pub fn standard(p: Prime, n: usize, order: usize) -> Result<Self> {
        let target = Self::target_ring(p, n)?;
        let mut images: Vec<_> = (0..n).map(|i| TruncPoly::var(&target, i)).collect();
        images.extend((0..n).map(|_| TruncPoly::zero(&target)));
        Self::new(p, n, order, images)
    }

    /// `ψ(a)`; `h` maps to zero.
    pub fn eval(&self, a: &WeylElement) -> TruncPoly {
        let mut out = TruncPoly::zero(&self.target);
        for (xa, yb, k, c) in a.flat_terms() {
            if k > 0 {
                continue;
            }
            let mut t = TruncPoly::constant(&self.target, c);
            for (i, &e) in xa.iter().chain(&yb).enumerate() {
                if e > 0 {
                    t = t.mul(&self.images[i].pow(e as u64));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// `ψ ∘ φ`.
    pub fn after(&self, phi: &WeylAutomorphism) -> Surjection {
        Surjection { images: phi.images().iter().map(|g| self.eval(g)).collect(), ..self.clone() }
    }

    fn relations_hold(&self) -> bool {
        self.images.iter().all(|g| g.pow(self.p.get() as u64).is_zero())
    }

    /// Dimension of the image of the span of `h^k x^a y^b`, and whether
    /// every monomial of `J` is killed.
    fn kernel_report(&self) -> (usize, usize, bool) {
        let n = self.n;
        let p = self.p.get();
        let mut sys: SparseSystem<(Vec<i32>, usize)> = SparseSystem::new(self.p);
        let mut j_killed = true;
        let mut total = 0;
        let mut exps = vec![vec![]];
        for _ in 0..2 * n {
            exps = exps.iter().flat_map(|e: &Vec<u32>| (0..p).map(move |v| [e.clone(), vec![v]].concat())).collect();
        }
        for k in 0..self.order {
            for e in &exps {
                total += 1;
                let m = WeylElement::monomial(self.p, n, self.order, &e[..n], &e[n..], k, self.p.one());
                let img = self.eval(&m);
                let in_j = k > 0 || e[n..].iter().any(|&b| b > 0);
                if in_j && !img.is_zero() {
                    j_killed = false;
                }
                sys.push_column(poly_to_map(&img));
            }
        }
        (total, total - sys.rank(), j_killed)
    }
}

/// Given `s = ã^p`, a series `c` with `h^p c^p = s`.
pub fn lift_constant_shift(s: &HSeries) -> Result<HSeries> {
    let p = s.prime().get() as usize;
    let t = s
        .divide_exact(p)
        .map_err(|_| Error::RelationViolated(format!("constant shift {s:?} is not divisible by h^p")))?;
    let mut root = Vec::new();
    for (k, c) in t.coeffs().iter().enumerate() {
        if k % p == 0 {
            root.push(*c);
        } else if !c.is_zero() {
            return Err(Error::NeedsCoverExtension(format!("{s:?}/h^p has no p-th root over k[[h]]")));
        }
    }
    let order = t.order().div_ceil(p);
    Ok(HSeries::from_coeffs(&s.prime().zero(), root, order))
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    /// named stages, applied right to left: `ψ ∘ chain[0] ∘ chain[1] ∘ …`
    pub chain: Vec<(String, WeylAutomorphism)>,
    pub composite: WeylAutomorphism,
    /// `ψ(y_i) = g_i(ψ(x))` after the linear stage, as functions of `x`
    pub graph: Vec<TruncPoly>,
    pub primitive: Option<TruncPoly>,
    pub final_images: Vec<TruncPoly>,
    pub kernel_dim: usize,
    pub j_dim: usize,
    pub trail: Vec<(String, bool)>,
}

fn bracket_form(n: usize, u: &[Gf], v: &[Gf]) -> Gf {
    let mut s = u[0] - u[0];
    for i in 0..n {
        s += u[n + i] * v[i] - u[i] * v[n + i];
    }
    s
}

fn linear_element(p: Prime, n: usize, order: usize, v: &[Gf]) -> WeylElement {
    let mut out = WeylElement::zero(p, n, order);
    for i in 0..n {
        out = out.add(&WeylElement::x(p, n, order, i).scale(v[i]));
        out = out.add(&WeylElement::y(p, n, order, i).scale(v[n + i]));
    }
    out
}

/// Symplectic linear change putting the tangent kernel on the `y`-axis.
fn linear_frame(psi: &Surjection) -> Result<Option<WeylAutomorphism>> {
    let (p, n) = (psi.p, psi.n);
    let mut lin = Matrix::zeros(n, 2 * n, p);
    for (a, g) in psi.images.iter().enumerate() {
        for r in 0..n {
            let mut m = vec![0; n];
            m[r] = 1;
            lin.set(r, a, g.coeff_at(&m, 0));
        }
    }
    if lin.rank() != n {
        return Err(Error::InvalidInput("ψ is not surjective on cotangent spaces".into()));
    }
    // if ψ(x) already gives coordinates, the graph is handled by the exponential
    let mut xpart = Matrix::zeros(n, n, p);
    for r in 0..n {
        for a in 0..n {
            xpart.set(r, a, lin.get(r, a));
        }
    }
    if xpart.rank() == n {
        return Ok(None);
    }
    let kernel = lin.nullspace();
    for i in 0..n {
        for j in 0..n {
            if !bracket_form(n, &kernel[i], &kernel[j]).is_zero() {
                return Err(Error::NotClosed("the tangent kernel is not isotropic: the image is not Lagrangian".into()));
            }
        }
    }
    let basis: Vec<Vec<Gf>> = (0..2 * n)
        .map(|a| {
            let mut v = vec![p.zero(); 2 * n];
            v[a] = p.one();
            v
        })
        .collect();
    let mut q = Matrix::zeros(n, 2 * n, p);
    for i in 0..n {
        for a in 0..2 * n {
            q.set(i, a, bracket_form(n, &kernel[i], &basis[a]));
        }
    }
    let pivots = q.clone().rref();
    if pivots.len() != n {
        return Err(Error::NotClosed("the tangent kernel is degenerate".into()));
    }
    let mut pm = Matrix::zeros(n, n, p);
    for i in 0..n {
        for (j, &c) in pivots.iter().enumerate() {
            pm.set(i, j, q.get(i, c));
        }
    }
    // E_j = Σ_l (P^{-1})_{lj} e'_l
    let mut e: Vec<Vec<Gf>> = Vec::new();
    for j in 0..n {
        let mut unit = vec![p.zero(); n];
        unit[j] = p.one();
        let col = pm.solve(&unit).ok_or_else(|| Error::NotClosed("kernel pairing is singular".into()))?;
        let mut v = vec![p.zero(); 2 * n];
        for (l, &c) in pivots.iter().enumerate() {
            v[c] += col[l];
        }
        e.push(v);
    }
    let half = p.elem(2).inv().unwrap();
    let mut xs = Vec::new();
    for j in 0..n {
        let mut v = e[j].clone();
        for l in 0..n {
            let w = bracket_form(n, &e[j], &e[l]);
            for a in 0..2 * n {
                v[a] -= half * w * kernel[l][a];
            }
        }
        xs.push(v);
    }
    let mut images: Vec<WeylElement> = xs.iter().map(|v| linear_element(p, n, psi.order, v)).collect();
    images.extend(kernel.iter().map(|v| linear_element(p, n, psi.order, v)));
    Ok(Some(WeylAutomorphism::new(images)?))
}

/// Runs the normal-form pipeline and verifies the final kernel equals `J`.
pub fn normal_form(psi: &Surjection) -> Result<NormalForm> {
    let (p, n, order) = (psi.p, psi.n, psi.order);
    let mut trail = Vec::new();
    if !psi.relations_hold() {
        return Err(Error::RelationViolated("ψ(x_i)^p or ψ(y_i)^p is nonzero".into()));
    }
    trail.push(("images satisfy x^p = y^p = 0".to_string(), true));

    // constant shifts
    for g in &psi.images {
        let a = g.coeff_at(&vec![0; n], 0);
        let s = HSeries::constant(a, order).pow(p.get() as u64);
        let c = lift_constant_shift(&s)?;
        debug_assert!(c.is_zero());
    }
    trail.push(("constant parts vanish".to_string(), true));

    let mut chain = Vec::new();
    let mut composite = WeylAutomorphism::identity(p, n, order);
    let mut current = psi.clone();
    if let Some(s) = linear_frame(&current)? {
        current = current.after(&s);
        composite = composite.compose(&s);
        chain.push(("symplectic frame".to_string(), s));
    }
    trail.push(("tangent kernel is Lagrangian".to_string(), true));

    // ψ(y_i) = g_i(ψ(x))
    let base = PolyRing::truncated(p, "x", n, 1)?;
    let monos = base.window_monomials(0);
    let mut sys = SparseSystem::new(p);
    for m in &monos {
        let mut t = TruncPoly::one(&current.target);
        for (i, &e) in m.iter().enumerate() {
            t = t.mul(&current.images[i].pow(e as u64));
        }
        sys.push_column(poly_to_map(&t));
    }
    if sys.rank() != monos.len() {
        return Err(Error::InvalidInput("ψ(x_1..x_n) are not coordinates on B".into()));
    }
    let mut graph = Vec::new();
    for i in 0..n {
        let c = sys.solve(&poly_to_map(&current.images[n + i])).ok_or_else(|| Error::InvalidInput("ψ(y) is not a function of ψ(x)".into()))?;
        let mut g = TruncPoly::zero(&base);
        for (m, v) in monos.iter().zip(c) {
            g = g.add(&TruncPoly::term(&base, m, 0, v));
        }
        graph.push(g);
    }
    trail.push(("solved ψ(y_i) = g_i(ψ(x))".to_string(), true));

    let alpha = DiffForm::one_form(&base, &graph)?;
    if !alpha.is_closed() {
        return Err(Error::NotClosed(format!("Σ g_i dx_i = {alpha} is not closed: the image is not Lagrangian")));
    }
    trail.push(("Σ g_i dx_i is closed".to_string(), true));
    let c = cartier(&alpha, &base.twisted())?;
    if !c.is_zero() {
        return Err(Error::NotExact(format!("C({alpha}) = {c} is nonzero: the Lagrangian is not restricted")));
    }
    let f = solve_primitive(&alpha)?.ok_or_else(|| Error::NotExact(format!("{alpha} has no primitive")))?;
    let f = f.sub(&TruncPoly::constant(&base, f.coeff_at(&vec![0; n], 0)));
    trail.push(("C(Σ g_i dx_i) = 0 and a primitive exists".to_string(), true));

    if !f.is_zero() {
        let mut fw = WeylElement::zero(p, n, order);
        for (m, _, v) in f.flat_terms() {
            let a: Vec<u32> = m.iter().map(|&e| e as u32).collect();
            fw = fw.add(&WeylElement::monomial(p, n, order, &a, &vec![0; n], 0, v));
        }
        let phi = hamiltonian_exponential(&fw)?;
        for i in 0..n {
            let expect = WeylElement::y(p, n, order, i).sub(&WeylElement::from_commutative(&extend_to_a0(&f.derivative(i), n)?, n, order)?);
            if phi.image_y(i) != &expect {
                return Err(Error::RelationViolated("exponential does not shift y_i by ∂_i f".into()));
            }
        }
        current = current.after(&phi);
        composite = composite.compose(&phi);
        chain.push(("hamiltonian exponential".to_string(), phi));
    }

    let final_psi = psi.after(&composite);
    let direct_ok = final_psi.images == current.images;
    trail.push(("composite agrees with stagewise images".to_string(), direct_ok));
    let ys_vanish = final_psi.images[n..].iter().all(|g| g.is_zero());
    trail.push(("ψ(y_i) = 0 after the chain".to_string(), ys_vanish));
    let (total, kernel_dim, j_killed) = final_psi.kernel_report();
    let j_dim = total - (p.get() as usize).pow(n as u32);
    trail.push(("J lies in the kernel".to_string(), j_killed));
    trail.push(("dim kernel = dim J".to_string(), kernel_dim == j_dim));
    let certified = chain.iter().all(|(_, a)| a.certified);
    trail.push(("every stage preserves the Weyl relations".to_string(), certified));
    if trail.iter().any(|(_, ok)| !ok) {
        return Err(Error::RelationViolated("normal form verification failed".into()));
    }
    Ok(NormalForm {
        chain,
        composite,
        graph,
        primitive: if f.is_zero() { None } else { Some(f) },
        final_images: final_psi.images,
        kernel_dim,
        j_dim,
        trail,
    })
}

/// Views a function of `x` as an element of `A_0`.
fn extend_to_a0(f: &TruncPoly, n: usize) -> Result<TruncPoly> {
    let a0 = super::a0_ring(f.prime(), n)?;
    let mut out = TruncPoly::zero(&a0);
    for (m, k, c) in f.flat_terms() {
        let mut m2 = m.clone();
        m2.extend(std::iter::repeat(0).take(n));
        out = out.add(&TruncPoly::term(&a0, &m2, k, c));
    }
    Ok(out)
}

/// Images for the graph `y = ∂f` precomposed with linear symplectic data
/// and a coordinate change on `B`: used by tests and the acceptance suite.
pub fn graph_surjection(p: Prime, order: usize, g: &TruncPoly, sl2: [i64; 4], shift: &TruncPoly) -> Result<Surjection> {
    let target = Surjection::target_ring(p, 1)?;
    let z = TruncPoly::var(&target, 0);
    // coordinate change z ↦ z + shift(z)
    let zz = z.add(&shift.in_ring(&target)?);
    let gz = g.substitute(&target, &[zz.clone()])?;
    let base = Surjection::new(p, 1, order, vec![zz, gz])?;
    let [a, b, c, d] = sl2.map(|v| p.elem(v));
    if (a * d - b * c) != p.one() {
        return Err(Error::InvalidInput("linear map is not symplectic".into()));
    }
    let t = WeylAutomorphism::new(vec![linear_element(p, 1, order, &[a, c]), linear_element(p, 1, order, &[b, d])])?;
    Ok(base.after(&t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_projection_is_already_normal() {
        let p = Prime::new(3).unwrap();
        let nf = normal_form(&Surjection::standard(p, 2, 5).unwrap()).unwrap();
        assert!(nf.chain.is_empty());
        assert_eq!(nf.kernel_dim, nf.j_dim);
    }

    #[test]
    fn exact_graph_p5() {
        let p = Prime::new(5).unwrap();
        let target = Surjection::target_ring(p, 1).unwrap();
        let z = TruncPoly::var(&target, 0);
        // graph of d(z^2): y = 2z
        let g = z.scale_i64(2);
        let psi = Surjection::new(p, 1, 7, vec![z.clone(), g]).unwrap();
        let nf = normal_form(&psi).unwrap();
        assert_eq!(nf.chain.len(), 1);
        assert_eq!(nf.chain[0].0, "hamiltonian exponential");
        assert_eq!(nf.kernel_dim, nf.j_dim);

        // y-axis image: needs the symplectic frame
        let psi_swap = Surjection::new(p, 1, 7, vec![TruncPoly::zero(&target), z.clone()]).unwrap();
        let nf = normal_form(&psi_swap).unwrap();
        assert_eq!(nf.chain[0].0, "symplectic frame");
        assert!(nf.final_images[1].is_zero());

        let g2 = z.pow(2).scale_i64(3);
        let psi2 = Surjection::new(p, 1, 7, vec![z.clone(), g2]).unwrap();
        let nf2 = normal_form(&psi2).unwrap();
        assert_eq!(nf2.chain.last().unwrap().0, "hamiltonian exponential");
        assert!(nf2.final_images[1].is_zero());
    }

    #[test]
    fn non_exact_graph_fails() {
        let p = Prime::new(3).unwrap();
        let target = Surjection::target_ring(p, 1).unwrap();
        let z = TruncPoly::var(&target, 0);
        let psi = Surjection::new(p, 1, 5, vec![z.clone(), z.pow(2)]).unwrap();
        assert_eq!(normal_form(&psi).unwrap_err().name(), "NotExact");
    }

    #[test]
    fn constant_shift_lifting() {
        let p = Prime::new(3).unwrap();
        let h = |k| HSeries::monomial(p.one(), k, 8);
        // h^3 * (1 + h^3) = (h + h^2)^3
        let s = h(3).add(&h(6));
        let c = lift_constant_shift(&s).unwrap();
        assert_eq!(c.coeffs()[..2], [p.one(), p.one()]);
        assert_eq!(lift_constant_shift(&h(3).add(&h(4))).unwrap_err().name(), "NeedsCoverExtension");
        assert_eq!(lift_constant_shift(&HSeries::constant(p.one(), 8)).unwrap_err().name(), "RelationViolated");
    }
}
