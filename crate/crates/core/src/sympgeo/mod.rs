//! Restricted symplectic structure on the local model
//! `A_0 = k[x_1..x_n, y_1..y_n]/(x_i^p, y_i^p)`.
//!
//! Sign convention: `H_f = Σ ∂_{y_i}f ∂_{x_i} − ∂_{x_i}f ∂_{y_i}` and
//! `{f, g} = H_f(g)`, so `{y_1, x_1} = 1` as in the Weyl algebra. With
//! `ω = Σ dy_i ∧ dx_i` this gives `i_{H_f} ω = −df`.

pub mod normal_form;

use crate::error::{Error, Result};
use crate::formscalc::{solve_primitive, DiffForm, IdealPresentation, PolyRing, RingRef, TruncPoly, VectorField};
use crate::scalars::Prime;

pub use normal_form::{lift_constant_shift, normal_form, NormalForm, Surjection};

/// `A_0` in `2n` truncated variables `x1..xn, y1..yn`.
pub fn a0_ring(p: Prime, n: usize) -> Result<RingRef> {
    let mut vars: Vec<_> = (1..=n).map(|i| crate::formscalc::Variable::truncated(format!("x{i}"), p)).collect();
    vars.extend((1..=n).map(|i| crate::formscalc::Variable::truncated(format!("y{i}"), p)));
    PolyRing::new(p, vars, 1)
}

/// `B = k[x1..xn]/(x_i^p)`.
pub fn b_ring(p: Prime, n: usize) -> Result<RingRef> {
    PolyRing::truncated(p, "x", n, 1)
}

#[derive(Clone, Debug)]
pub struct RestrictedSymplecticModel {
    pub n: usize,
    pub ring: RingRef,
    pub base: RingRef,
    pub omega: DiffForm,
    pub eta: DiffForm,
}

impl RestrictedSymplecticModel {
    /// `ω = Σ dy_i ∧ dx_i`, `η = Σ y_i dx_i`.
    pub fn standard(p: Prime, n: usize) -> Result<Self> {
        let ring = a0_ring(p, n)?;
        let base = b_ring(p, n)?;
        let mut omega = DiffForm::zero(&ring, 2);
        let mut eta = DiffForm::zero(&ring, 1);
        for i in 0..n {
            omega.add_component(vec![n + i, i], TruncPoly::one(&ring));
            eta.add_component(vec![i], TruncPoly::var(&ring, n + i));
        }
        let model = RestrictedSymplecticModel { n, ring, base, omega, eta };
        model.check()?;
        Ok(model)
    }

    pub fn check(&self) -> Result<()> {
        if self.eta.d() != self.omega {
            return Err(Error::RelationViolated("dη != ω".into()));
        }
        let p = self.ring.prime();
        let dim = 2 * self.n;
        let mut m = crate::linalg::Matrix::zeros(dim, dim, p);
        let zero = vec![0; dim];
        for a in 0..dim {
            for b in 0..dim {
                m.set(a, b, self.omega.component(&[a, b]).coeff_at(&zero, 0));
            }
        }
        if m.rank() != dim {
            return Err(Error::RelationViolated("ω is degenerate".into()));
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> TruncPoly {
        TruncPoly::var(&self.ring, i)
    }

    pub fn y(&self, i: usize) -> TruncPoly {
        TruncPoly::var(&self.ring, self.n + i)
    }

    pub fn hamiltonian_field(&self, f: &TruncPoly) -> VectorField {
        let n = self.n;
        let mut comps = vec![TruncPoly::zero(&self.ring); 2 * n];
        for i in 0..n {
            comps[i] = f.derivative(n + i);
            comps[n + i] = f.derivative(i).neg();
        }
        VectorField::from_components(&self.ring, comps).expect("component count matches")
    }

    pub fn bracket(&self, f: &TruncPoly, g: &TruncPoly) -> TruncPoly {
        self.hamiltonian_field(f).apply(g)
    }

    /// `f^{[p]} = i^{[p]}_{H_f} η`.
    pub fn p_operation_from_eta(&self, f: &TruncPoly) -> TruncPoly {
        let h = self.hamiltonian_field(f);
        let hp = h.p_power();
        self.eta.restricted_contract(&h, &hp).expect("η has degree 1").as_function()
    }
}

#[derive(Clone, Debug)]
pub enum Shape {
    /// `y_i = φ_i(x)` with `φ_i ∈ B`.
    Graph(Vec<TruncPoly>),
    General,
}

#[derive(Clone, Debug)]
pub struct SubvarietyPresentation {
    pub generators: Vec<TruncPoly>,
    pub shape: Shape,
}

impl SubvarietyPresentation {
    /// The graph `y_i = φ_i(x)`.
    pub fn graph(model: &RestrictedSymplecticModel, phis: Vec<TruncPoly>) -> Result<Self> {
        if phis.len() != model.n {
            return Err(Error::InvalidInput(format!("graph needs {} functions", model.n)));
        }
        let images: Vec<TruncPoly> = (0..model.n).map(|i| model.x(i)).collect();
        let mut generators = Vec::new();
        for (i, phi) in phis.iter().enumerate() {
            model.base.check_same(phi.ring())?;
            if !phi.coeff_at(&vec![0; model.n], 0).is_zero() {
                return Err(Error::InvalidInput(format!("φ{} = {phi} has a constant term, so y{}^p = 0 cannot hold on the graph", i + 1, i + 1)));
            }
            generators.push(model.y(i).sub(&phi.substitute(&model.ring, &images)?));
        }
        Ok(SubvarietyPresentation { generators, shape: Shape::Graph(phis) })
    }

    pub fn general(model: &RestrictedSymplecticModel, generators: Vec<TruncPoly>) -> Result<Self> {
        for g in &generators {
            model.ring.check_same(g.ring())?;
        }
        Ok(SubvarietyPresentation { generators, shape: Shape::General })
    }

    fn graph_form(&self, model: &RestrictedSymplecticModel) -> Result<DiffForm> {
        match &self.shape {
            Shape::Graph(phis) => DiffForm::one_form(&model.base, phis),
            Shape::General => Err(Error::UnsupportedShape("only graphs y_i = φ_i(x) are supported".into())),
        }
    }
}

/// A graph is Lagrangian iff `Σ φ_i dx_i` is closed.
pub fn is_lagrangian(y: &SubvarietyPresentation, model: &RestrictedSymplecticModel) -> Result<bool> {
    Ok(y.graph_form(model)?.is_closed())
}

#[derive(Clone, Debug)]
pub struct RestrictedVerdict {
    pub restricted: bool,
    /// every generator's p-operation lies in the ideal
    pub by_membership: bool,
    /// the pullback of η is exact
    pub by_exactness: bool,
    /// first generator whose p-operation leaves the ideal, with that value
    pub witness: Option<(usize, TruncPoly)>,
    pub primitive: Option<TruncPoly>,
}

impl RestrictedVerdict {
    pub fn routes_agree(&self) -> bool {
        self.by_membership == self.by_exactness
    }
}

pub fn is_restricted_subvariety(y: &SubvarietyPresentation, model: &RestrictedSymplecticModel) -> Result<RestrictedVerdict> {
    if !is_lagrangian(y, model)? {
        return Err(Error::NotClosed("the graph is not Lagrangian".into()));
    }
    let ideal = IdealPresentation::new(&model.ring, y.generators.clone())?;
    let mut witness = None;
    for (i, g) in y.generators.iter().enumerate() {
        let gp = model.p_operation_from_eta(g);
        if !ideal.contains(&gp)? {
            witness = Some((i, gp));
            break;
        }
    }
    let by_membership = witness.is_none();
    let mut images: Vec<TruncPoly> = (0..model.n).map(|i| TruncPoly::var(&model.base, i)).collect();
    if let Shape::Graph(phis) = &y.shape {
        images.extend(phis.iter().cloned());
    }
    let eta_y = model.eta.pullback(&model.base, &images)?;
    let primitive = solve_primitive(&eta_y)?;
    let by_exactness = primitive.is_some();
    Ok(RestrictedVerdict { restricted: by_membership && by_exactness, by_membership, by_exactness, witness, primitive })
}

/// A Poisson bracket on a polynomial ring given by canonical pairs
/// `{ξ, x} = 1`.
#[derive(Clone, Debug)]
pub struct PoissonPairs {
    pub pairs: Vec<(usize, usize)>,
}

impl PoissonPairs {
    pub fn bracket(&self, f: &TruncPoly, g: &TruncPoly) -> TruncPoly {
        let mut out = TruncPoly::zero_with_order(f.ring(), f.order().min(g.order()));
        for &(xi, x) in &self.pairs {
            out = out.add(&f.derivative(xi).mul(&g.derivative(x))).sub(&f.derivative(x).mul(&g.derivative(xi)));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct CoisotropyVerdict {
    pub coisotropic: bool,
    /// `(i, j, {g_i, g_j})` for the first pair whose bracket leaves the ideal
    pub offending: Option<(usize, usize, TruncPoly)>,
}

pub fn is_coisotropic_ideal(ideal: &IdealPresentation, poisson: &PoissonPairs) -> Result<CoisotropyVerdict> {
    let gens = ideal.generators();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let b = poisson.bracket(&gens[i], &gens[j]);
            if !ideal.contains(&b)? {
                return Ok(CoisotropyVerdict { coisotropic: false, offending: Some((i, j, b)) });
            }
        }
    }
    Ok(CoisotropyVerdict { coisotropic: true, offending: None })
}

/// Whether `f = h^k u` with `u` a unit.
pub fn is_unit_multiple_of_h_power(f: &TruncPoly, k: usize) -> bool {
    match f.divide_h(k) {
        Ok(u) => u.order() > 0 && u.is_unit(),
        Err(_) => false,
    }
}
