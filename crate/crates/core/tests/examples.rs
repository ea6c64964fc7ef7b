//! Worked examples for every module, driven through the public API and the
//! text syntax.

use frobquant::atiyah::*;
use frobquant::expr::{parse_form, parse_poly, parse_weyl};
use frobquant::formscalc::*;
use frobquant::hconn::*;
use frobquant::sympgeo::normal_form::graph_surjection;
use frobquant::sympgeo::*;
use frobquant::weyl::*;
use frobquant::{HSeries, Prime};

fn p(v: u64) -> Prime {
    Prime::new(v).unwrap()
}

fn poly(pr: u64, n: usize, order: usize) -> RingRef {
    PolyRing::polynomial(p(pr), "x", n, 6, order).unwrap()
}

fn trunc(pr: u64, n: usize, order: usize) -> RingRef {
    PolyRing::truncated(p(pr), "x", n, order).unwrap()
}

fn laurent(pr: u64) -> RingRef {
    PolyRing::new(p(pr), vec![Variable::laurent("x", 3, 3)], 1).unwrap()
}

fn form(s: &str, r: &RingRef) -> DiffForm {
    parse_form(s, r).unwrap()
}

fn func(s: &str, r: &RingRef) -> TruncPoly {
    parse_poly(s, r).unwrap()
}

#[test]
fn scalars() {
    let p3 = p(3);
    let p5 = p(5);
    assert_eq!(p3.elem(2).pow(3), p3.elem(2));
    assert_eq!(p5.elem(0).pow(5), p5.elem(0));
    assert_eq!(p5.elem(2).pow(4), p5.elem(1));
    assert!(Prime::new(4).is_err());
    assert!(Prime::new(2).is_err());

    let h2 = HSeries::monomial(p5.one(), 2, 6);
    assert_eq!(h2.divide_exact(2).unwrap(), HSeries::constant(p5.one(), 4));
    let one_h = HSeries::from_coeffs(&p5.zero(), vec![p5.one(), p5.one()], 6);
    assert_eq!(one_h.divide_exact(1).unwrap_err().name(), "NotDivisible");
    let a = HSeries::from_coeffs(&p5.zero(), vec![p5.zero(), p5.zero(), p5.zero(), p5.elem(3), p5.one()], 6);
    let q = a.divide_exact(3).unwrap();
    assert_eq!(q.coeffs()[..2], [p5.elem(3), p5.one()]);

    let s = HSeries::from_coeffs(&p3.zero(), vec![p3.one(), p3.elem(2)], 4);
    assert_eq!(s.frobenius_coefficientwise(), s);
    let b = trunc(3, 1, 1);
    let x = TruncPoly::var(&b, 0);
    assert!(x.pow(3).is_zero());
    assert_eq!(TruncPoly::one(&b).add(&x).pow(3), TruncPoly::one(&b));
}

#[test]
fn exterior_calculus() {
    let r = poly(3, 2, 1);
    assert_eq!(form("d(x1 x2)", &r).to_string(), "x2*dx1 + x1*dx2");
    let b = trunc(3, 1, 1);
    assert!(form("x1^2 dx1", &b).d().is_zero());
    let m = RestrictedSymplecticModel::standard(p(3), 2).unwrap();
    assert_eq!(form("y1 dx1 + y2 dx2", &m.ring).d(), form("dy1 dx1 + dy2 dx2", &m.ring));

    let d1 = VectorField::coordinate(&r, 0);
    let d2 = VectorField::coordinate(&r, 1);
    assert_eq!(form("dx1", &r).contract(&d1).unwrap().to_string(), "1");
    assert_eq!(form("dx1 dx2", &r).contract(&d2).unwrap().to_string(), "-dx1");
    let x1d1 = d1.mul_fn(&func("x1", &r));
    assert_eq!(form("x2 dx1 + x1 dx2", &r).contract(&x1d1).unwrap().to_string(), "x1*x2");

    assert_eq!(form("x1 dx1", &r).lie_derivative(&d1).to_string(), "dx1");
    assert!(form("dx2", &r).lie_derivative(&d1).is_zero());
    // 2 x1 dx1, with 2 = -1 in GF(3)
    assert_eq!(form("x1 dx1", &r).lie_derivative(&x1d1).to_string(), "-x1*dx1");
}

#[test]
fn restricted_contraction() {
    let b = trunc(3, 1, 1);
    let d = VectorField::coordinate(&b, 0);
    let zero = VectorField::zero(&b);
    assert!(form("dx1", &b).restricted_contract(&d, &zero).unwrap().is_zero());
    assert_eq!(form("x1^2 dx1", &b).restricted_contract(&d, &zero).unwrap().to_string(), "1");
    let l = laurent(3);
    let xd = VectorField::coordinate(&l, 0).mul_fn(&func("x", &l));
    assert_eq!(xd.p_power(), xd);
    assert_eq!(form("dx/x", &l).restricted_contract(&xd, &xd.p_power()).unwrap().to_string(), "1");
}

#[test]
fn cartier_and_solvers() {
    let b = trunc(3, 1, 1);
    let tw = b.twisted();
    assert_eq!(cartier(&form("x1^2 dx1", &b), &tw).unwrap().to_string(), "dx1'");
    assert!(cartier(&form("dx1", &b), &tw).unwrap().is_zero());
    let l = laurent(3);
    assert_eq!(cartier(&form("dx/x", &l), &l.twisted()).unwrap().to_string(), "(x')^-1*dx'");
    assert_eq!(cartier(&form("x2 dx1", &poly(3, 2, 1)), &poly(3, 2, 1).twisted()).unwrap_err().name(), "NotClosed");

    let r = poly(3, 2, 1);
    assert_eq!(solve_primitive(&form("dx1", &r)).unwrap().unwrap().to_string(), "x1");
    assert_eq!(solve_primitive(&form("x2 dx1 + x1 dx2", &r)).unwrap().unwrap().to_string(), "x1*x2");
    assert!(solve_primitive(&form("x1^2 dx1", &b)).unwrap().is_none());

    assert_eq!(solve_dlog(&DiffForm::zero(&b, 1)).unwrap().unwrap().to_string(), "1");
    let a = form("(1 - x1 + x1^2) dx1", &b);
    assert_eq!(a, dlog(&func("1 + x1", &b)).unwrap());
    let g = solve_dlog(&a).unwrap().unwrap();
    assert_eq!(DiffForm::function(&g).d(), a.mul_fn(&g));
    assert!(solve_dlog(&form("dx1", &b)).unwrap().is_none());

    assert_eq!(log_defect(&a).unwrap(), vec![TruncPoly::zero(&b)]);
    assert_eq!(log_defect(&form("dx1", &b)).unwrap()[0].to_string(), "1");
    assert_eq!(log_defect(&form("x1^2 dx1", &b)).unwrap()[0].to_string(), "-1");
}

#[test]
fn ideal_membership_examples() {
    let r = poly(3, 2, 1);
    let i = IdealPresentation::new(&r, vec![func("x1", &r)]).unwrap();
    let m = i.membership(&func("x1 x2", &r)).unwrap();
    assert!(m.member);
    assert_eq!(m.certificate.unwrap()[0].to_string(), "x2");
    let j = IdealPresentation::new(&r, vec![func("x1 x2", &r)]).unwrap();
    assert!(!j.contains(&func("x1 + x2", &r)).unwrap());
}

#[test]
fn weyl_examples() {
    let p3 = p(3);
    let w = |s: &str, n: usize| parse_weyl(s, p3, n, 5).unwrap();
    assert_eq!(w("y1 x1", 1).to_string(), "x1*y1 + h");
    assert_eq!(w("x1 x2", 2).to_string(), "x1*x2");
    assert_eq!(w("y1", 1).bracket(&w("x1", 1)).unwrap().to_string(), "1");
    assert!(w("x1", 2).bracket(&w("x2", 2)).unwrap().is_zero());
    assert_eq!(w("y1", 1).bracket(&w("x1^2", 1)).unwrap().to_string(), "-x1");

    assert!(w("x1", 1).p_operation().unwrap().is_zero());
    assert_eq!(w("h", 1).p_operation().unwrap().to_string(), "h");
    assert_eq!(w("y1 x1", 1).p_operation().unwrap(), w("y1 x1", 1));

    assert!(universal_p(&w("x1", 2), &w("x2", 2)).unwrap().is_zero());
    assert_eq!(universal_p(&w("y1", 1), &w("x1", 1)).unwrap(), w("y1 x1", 1));
    let a = w("x1 y1^2 + h y1 + 2", 1);
    assert!(universal_p(&a, &w("1", 1)).unwrap().is_zero());
    assert!(jacobson_l(&a, &w("0", 1)).unwrap().is_zero());
    assert!(jacobson_l(&w("x1", 2), &w("x2", 2)).unwrap().is_zero());
    let (y, x) = (w("y1", 1), w("x1", 1));
    assert_eq!(jacobson_l(&y, &x).unwrap(), jacobson_classical(&y, &x).unwrap());

    let id = hamiltonian_exponential(&w("0", 1)).unwrap();
    assert!(id.is_identity());
    let f = parse_weyl("x1^2 x2", p(5), 2, 7).unwrap();
    let phi = hamiltonian_exponential(&f).unwrap();
    assert!(verify_relations(phi.images()).is_ok());
    assert!(phi.certified);
}

#[test]
fn symplectic_examples() {
    let m = RestrictedSymplecticModel::standard(p(3), 1).unwrap();
    let r = &m.ring;
    let h = m.hamiltonian_field(&func("x1", r));
    assert_eq!(h.components(), &[func("0", r), func("-1", r)]);
    assert_eq!(m.hamiltonian_field(&func("x1 y1", r)).components(), &[func("x1", r), func("-y1", r)]);
    for s in ["x1", "y1", "2"] {
        assert!(m.p_operation_from_eta(&func(s, r)).is_zero());
    }

    let m2 = RestrictedSymplecticModel::standard(p(3), 2).unwrap();
    let b = &m2.base;
    let graph = |a: &str, c: &str| SubvarietyPresentation::graph(&m2, vec![func(a, b), func(c, b)]).unwrap();
    assert!(is_lagrangian(&graph("0", "0"), &m2).unwrap());
    assert!(is_lagrangian(&graph("x2", "x1"), &m2).unwrap());
    assert!(!is_lagrangian(&graph("x2", "0"), &m2).unwrap());
    assert!(is_restricted_subvariety(&graph("x2", "x1"), &m2).unwrap().restricted);
    assert!(!is_restricted_subvariety(&graph("x1^2", "0"), &m2).unwrap().restricted);
    assert_eq!(SubvarietyPresentation::graph(&m2, vec![func("1", b), func("0", b)]).unwrap_err().name(), "InvalidInput");

    let ring = PolyRing::new(p(3), ["x1'", "x2'", "ξ1'", "ξ2'"].iter().map(|n| Variable::polynomial(*n, 6)).collect(), 5).unwrap();
    let pairs = PoissonPairs { pairs: vec![(2, 0), (3, 1)] };
    let zero = IdealPresentation::new(&ring, vec![func("xi1'", &ring), func("xi2'", &ring)]).unwrap();
    assert!(is_coisotropic_ideal(&zero, &pairs).unwrap().coisotropic);
    let one = IdealPresentation::new(&ring, vec![func("x1'", &ring)]).unwrap();
    assert!(is_coisotropic_ideal(&one, &pairs).unwrap().coisotropic);
    let ex = IdealPresentation::new(&ring, vec![func("xi1'", &ring), func("xi2' - h^3 ((x1')^3 (x2')^2 - x1')", &ring)]).unwrap();
    let v = is_coisotropic_ideal(&ex, &pairs).unwrap();
    assert!(!v.coisotropic);
    assert!(is_unit_multiple_of_h_power(&v.offending.unwrap().2, 3));
}

#[test]
fn normal_form_examples() {
    let p5 = p(5);
    let nf = normal_form(&Surjection::standard(p5, 1, 7).unwrap()).unwrap();
    assert!(nf.chain.is_empty());
    let target = Surjection::target_ring(p5, 1).unwrap();
    let psi = Surjection::new(p5, 1, 7, vec![func("z1", &target), func("2 z1", &target)]).unwrap();
    let nf = normal_form(&psi).unwrap();
    assert_eq!(nf.chain.last().unwrap().0, "hamiltonian exponential");
    assert_eq!(nf.kernel_dim, nf.j_dim);

    let p3 = p(3);
    let t3 = Surjection::target_ring(p3, 1).unwrap();
    let bad = Surjection::new(p3, 1, 5, vec![func("z1", &t3), func("z1^2", &t3)]).unwrap();
    assert_eq!(normal_form(&bad).unwrap_err().name(), "NotExact");
    // the same failure after a symplectic change of frame
    let bad = graph_surjection(p3, 5, &func("z1^2", &t3), [1, 1, 0, 1], &TruncPoly::zero(&t3)).unwrap();
    assert_eq!(normal_form(&bad).unwrap_err().name(), "NotExact");

    assert!(lift_constant_shift(&HSeries::zero(&p3.zero(), 5)).unwrap().is_zero());
    let s = HSeries::monomial(p3.one(), 4, 8);
    assert_eq!(lift_constant_shift(&s).unwrap_err().name(), "NeedsCoverExtension");
}

#[test]
fn connection_examples() {
    let r = poly(3, 2, 5);
    assert!(HConnection::trivial(&r).p_curvature_coordinate(1).unwrap().is_zero());
    let conn = HConnection::new(form("x1^3 x2^2 dx2", &r)).unwrap();
    assert_eq!(conn.p_curvature_coordinate(1).unwrap(), func("h^3 (x1^9 x2^6 - x1^3)", &r));
    let b = trunc(3, 1, 5);
    let log = HConnection::new(dlog(&func("1 + x1", &b)).unwrap()).unwrap();
    assert!(log.p_curvature_coordinate(0).unwrap().is_zero());
    assert!(HConnection::new(form("x2 dx1", &r)).is_err());

    let ps = p_support(&conn).unwrap();
    assert_eq!(ps.to_string(), "(ξ1', ξ2' - h^3*((x1')^3*(x2')^2 - x1'))");
    assert_eq!(extract_theta(&ps).unwrap().to_string(), "(x1')^3*(x2')^2*dx2' - x1'*dx2'");
    assert!(extract_theta(&p_support(&HConnection::trivial(&r)).unwrap()).unwrap().is_zero());
    let weighted = p_support(&HConnection::new(form("h dx1", &poly(3, 1, 8))).unwrap()).unwrap();
    assert!(weighted.trivial_mod_hp);

    // isomorphic connections have the same support
    let b5 = trunc(3, 2, 5);
    let plain = HConnection::new(form("x1^2 dx1 + x2^2 dx2", &b5)).unwrap();
    let shifted = HConnection::new(plain.alpha().add(&dlog(&func("1 + x1 x2", &b5)).unwrap())).unwrap();
    assert_eq!(p_support(&shifted).unwrap().generators, p_support(&plain).unwrap().generators);

    let b1 = trunc(3, 1, 1);
    let c = classify_quantization(&HConnection::trivial(&b1)).unwrap();
    assert!(c.logarithmic && c.witness.unwrap().to_string() == "1");
    let c = classify_quantization(&HConnection::new(dlog(&func("1 + x1", &b1)).unwrap()).unwrap()).unwrap();
    assert_eq!(c.witness.unwrap().to_string(), "x1 + 1");
    assert!(!classify_quantization(&HConnection::new(form("dx1", &b1)).unwrap()).unwrap().logarithmic);
}

#[test]
fn atiyah_examples() {
    let p3 = p(3);
    let line = CechCover::new(p3, vec![Variable::polynomial("x1", 1)], 1, vec![vec![], vec![0]]).unwrap();
    assert!(is_coboundary(&CechClass::zero(&line), &line).unwrap().is_some());
    let triv = restricted_chern(&trivial_transitions(&line), &line).unwrap();
    assert!(triv.is_zero());
    let mut g = trivial_transitions(&line);
    g.insert((0, 1), func("x1", &line.ring(&[0, 1])));
    let c = restricted_chern(&g, &line).unwrap();
    assert_eq!(c.alpha[&(0, 1)].to_string(), "x1^-1*dx1");
    assert_eq!(restricted_chern(&tensor_transitions(&g, &g), &line).unwrap(), c.add(&c));
    let ck = CechClass::zero(&line);
    assert_eq!(dual_class(&c, &ck), restricted_chern(&inverse_transitions(&g).unwrap(), &line).unwrap());
    assert_eq!(dual_class(&dual_class(&c, &ck), &ck), c);
    assert!(dual_class(&ck, &ck).is_zero());

    // g12 = 1 + x1 is not a unit on the overlap
    g.insert((0, 1), func("1 + x1", &line.ring(&[0, 1])));
    assert_eq!(restricted_chern(&g, &line).unwrap_err().name(), "NotAUnit");

    // {0, dx1'} on one open over B
    let b = trunc(3, 1, 1);
    let one = CechCover::single(&b).unwrap();
    let cls = CechClass::from_gamma(&one, &form("dx1'", &b.twisted())).unwrap();
    let w = is_coboundary(&cls, &one).unwrap().unwrap();
    assert_eq!(coboundary_of(&w, &one).unwrap(), cls);

    let b2 = trunc(3, 2, 1);
    assert!(split_lie(&DiffForm::zero(&b2, 2)).unwrap().correction.is_zero());
    let beta = form("d(x2 dx1)", &b2);
    assert_eq!(split_lie(&beta).unwrap().correction.d(), beta.neg());
    let beta = form("dx1 dx2", &b2);
    assert_eq!(split_lie(&beta).unwrap().correction.d(), beta.neg());

    let zero = CechClass::zero(&one);
    let z1 = DiffForm::zero(&b.twisted(), 1);
    assert!(chern_condition(&zero, &zero, &zero, &z1, ThetaSign::Minus, &one).unwrap());
    assert!((ThetaSign::Plus.value(p3) + ThetaSign::Minus.value(p3)).is_zero());
}
