//! Algebraic invariants on random inputs. Each case draws a seed and builds
//! its objects with a seeded generator.

use frobquant::atiyah::{coboundary_of, is_coboundary, CechCover};
use frobquant::expr::{parse_form, parse_weyl};
use frobquant::formscalc::solve::closed_forms_basis;
use frobquant::formscalc::*;
use frobquant::hconn::{p_support, HConnection};
use frobquant::suite::{random_closed_form, random_gf, random_poly, random_weyl};
use frobquant::weyl::WeylElement;
use frobquant::Prime;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ring_for(rng: &mut ChaCha8Rng, order: usize) -> RingRef {
    let p = Prime::new(if rng.gen_bool(0.5) { 3 } else { 5 }).unwrap();
    let n = rng.gen_range(1..=2);
    let vars = (1..=n)
        .map(|i| match rng.gen_range(0..3) {
            0 => Variable::truncated(format!("x{i}"), p),
            1 => Variable::polynomial(format!("x{i}"), 3),
            _ => Variable::laurent(format!("x{i}"), 2, 2),
        })
        .collect();
    PolyRing::new(p, vars, order).unwrap()
}

fn random_form(ring: &RingRef, rng: &mut ChaCha8Rng, degree: usize) -> DiffForm {
    let n = ring.nvars();
    let mut a = DiffForm::zero(ring, degree);
    for _ in 0..3 {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.truncate(degree);
        if degree == 1 {
            idx = vec![rng.gen_range(0..n)];
        }
        if idx.len() == degree {
            let mut term = DiffForm::zero(ring, degree);
            term.add_component(idx, random_poly(ring, rng, 2, true));
            a = a.add(&term);
        }
    }
    a
}

/// `A_h` acting on `k[x]/(x^p)[h]/(h^N)` by `x ↦ x·`, `y ↦ h ∂_x`.
fn act(a: &WeylElement, f: &TruncPoly) -> TruncPoly {
    let mut out = TruncPoly::zero(f.ring());
    for (xa, yb, k, c) in a.flat_terms() {
        let mut g = f.clone();
        for (i, &b) in yb.iter().enumerate() {
            g = g.nth_derivative(i, b as usize).shift_h(b as usize);
        }
        let mono: Vec<i32> = xa.iter().map(|&e| e as i32).collect();
        g = g.mul(&TruncPoly::monomial(f.ring(), &mono)).shift_h(k).scale(c);
        out = out.add(&g);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weyl_product_matches_representation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Prime::new(if rng.gen_bool(0.5) { 3 } else { 5 }).unwrap();
        let n = rng.gen_range(1..=2);
        let order = 4;
        let a = random_weyl(p, n, order, &mut rng, 3);
        let b = random_weyl(p, n, order, &mut rng, 3);
        let v = PolyRing::truncated(p, "x", n, order).unwrap();
        for m in v.window_monomials(0) {
            let f = TruncPoly::monomial(&v, &m);
            prop_assert_eq!(act(&a.mul(&b), &f), act(&a, &act(&b, &f)));
        }
    }

    #[test]
    fn weyl_associative_and_biderivation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Prime::new(3).unwrap();
        let n = rng.gen_range(1..=2);
        let a = random_weyl(p, n, 4, &mut rng, 3);
        let b = random_weyl(p, n, 4, &mut rng, 3);
        let c = random_weyl(p, n, 4, &mut rng, 3);
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let lhs = a.bracket(&b.mul(&c)).unwrap();
        let rhs = a.bracket(&b).unwrap().mul(&c).add(&b.mul(&a.bracket(&c).unwrap()));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(parse_weyl(&a.to_string(), p, n, 4).unwrap(), a);
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring_for(&mut rng, 2);
        for k in 0..2 {
            let a = random_form(&r, &mut rng, k);
            prop_assert!(a.d().d().is_zero());
        }
    }

    #[test]
    fn cartan_formula(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring_for(&mut rng, 1);
        let a = random_form(&r, &mut rng, 1);
        let comps = (0..r.nvars()).map(|_| random_poly(&r, &mut rng, 2, false)).collect();
        let v = VectorField::from_components(&r, comps).unwrap();
        let cartan = a.d().contract(&v).unwrap().add(&a.contract(&v).unwrap().d());
        prop_assert_eq!(a.lie_derivative(&v), cartan);
    }

    #[test]
    fn cartier_kills_exact_and_fixes_logarithmic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring_for(&mut rng, 1);
        let tw = r.twisted();
        let f = random_poly(&r, &mut rng, 3, false);
        prop_assert!(cartier(&DiffForm::function(&f).d(), &tw).unwrap().is_zero());
        // units on a base without nilpotent coordinates: c times a Laurent monomial
        if r.vars().iter().all(|v| v.kind != VarKind::Truncated) {
            let mono: Vec<i32> = r
                .vars()
                .iter()
                .map(|v| if v.kind == VarKind::Laurent { rng.gen_range(-2..=2) } else { 0 })
                .collect();
            let g = TruncPoly::monomial(&r, &mono).scale(r.prime().elem(rng.gen_range(1..3)));
            let a = dlog(&g).unwrap().add(&DiffForm::function(&f).d());
            // g' is the function on the twist pulling back to g^p
            let g_tw = g.pow(r.prime().get() as u64).pth_root(&tw).unwrap();
            prop_assert_eq!(cartier(&a, &tw).unwrap(), dlog(&g_tw).unwrap());
        }
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring_for(&mut rng, 3);
        for k in 0..=r.nvars().min(2) {
            let a = random_form(&r, &mut rng, k);
            let text = a.to_string();
            prop_assert_eq!(parse_form(&text, &r).unwrap().to_string(), text);
        }
        let tw = r.twisted();
        let t = random_form(&tw, &mut rng, 1);
        prop_assert_eq!(parse_form(&t.to_string(), &tw).unwrap().to_string(), t.to_string());
    }

    #[test]
    fn ring_axioms_and_inverses(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring_for(&mut rng, 3);
        let f = random_poly(&r, &mut rng, 3, true);
        let g = random_poly(&r, &mut rng, 3, true);
        let h = random_poly(&r, &mut rng, 3, true);
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        let u = TruncPoly::constant(&r, r.prime().elem(1 + rng.gen_range(0..2))).add(&f.shift_h(1));
        prop_assert_eq!(u.mul(&u.inverse().unwrap()), TruncPoly::one(&r));
        prop_assert_eq!(f.derivative(0).nth_derivative(0, 1), f.nth_derivative(0, 2));
    }

    #[test]
    fn p_support_is_trivial_mod_hp(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = ring_for(&mut rng, 1);
        let order = r.prime().get() as usize + 2;
        let r = r.with_order(order);
        let basis = closed_forms_basis(&r, 1, 0);
        let a = random_closed_form(&basis, &r, &mut rng);
        let ps = p_support(&HConnection::new(a).unwrap()).unwrap();
        prop_assert!(ps.trivial_mod_hp);
        prop_assert_eq!(ps.generators.len(), r.nvars());
    }

    #[test]
    fn coboundaries_are_recognized(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Prime::new(3).unwrap();
        let cover = CechCover::new(p, vec![Variable::polynomial("x", 2)], 2, vec![vec![], vec![0]]).unwrap();
        let betas: Vec<DiffForm> = (0..2)
            .map(|i| {
                let r = cover.ring(&[i]);
                let basis = closed_forms_basis(&r, 1, 0);
                let mut b = DiffForm::zero(&r, 1);
                for f in &basis {
                    b = b.add(&f.scale(random_gf(p, &mut rng)));
                }
                b
            })
            .collect();
        let cls = coboundary_of(&betas, &cover).unwrap();
        let w = is_coboundary(&cls, &cover).unwrap();
        prop_assert!(w.is_some());
        prop_assert_eq!(coboundary_of(&w.unwrap(), &cover).unwrap(), cls);
    }
}
