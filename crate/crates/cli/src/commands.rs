use crate::input;
use crate::report::{Failure, Report};
use crate::{BaseKind, Command, Session, SignArg};
use frobquant::atiyah::{check_cocycle, chern_condition, coboundary_of, is_coboundary, restricted_chern, ThetaSign};
use frobquant::expr::{parse_form_of_degree, parse_poly, parse_weyl};
use frobquant::formscalc::{IdealPresentation, PolyRing, RingRef, Variable};
use frobquant::hconn::{classify_quantization, extract_theta, p_support, HConnection, PSupportIdeal};
use frobquant::suite::{run_all, run_criterion, SuiteReport};
use frobquant::sympgeo::{
    is_coisotropic_ideal, is_lagrangian, is_restricted_subvariety, is_unit_multiple_of_h_power, normal_form, PoissonPairs, RestrictedSymplecticModel, Surjection,
    SubvarietyPresentation,
};
use frobquant::weyl::{verify_relations, WeylElement};
use frobquant::Prime;
use serde_json::{json, Value};

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::POp { .. } => "p-op",
        Command::Bracket { .. } => "bracket",
        Command::PCurvature { .. } => "p-curvature",
        Command::PSupport { .. } => "p-support",
        Command::CheckLagrangian { .. } => "check-lagrangian",
        Command::CheckRestricted { .. } => "check-restricted",
        Command::CheckCoisotropic { .. } => "check-coisotropic",
        Command::ClassifyQuantization { .. } => "classify-quantization",
        Command::NormalForm { .. } => "normal-form",
        Command::CechClass { .. } => "cech-class",
        Command::Coboundary { .. } => "coboundary",
        Command::ChernCheck { .. } => "chern-check",
        Command::Suite { .. } => "suite",
    }
}

/// Validated session parameters shared by every command.
struct Params {
    p: Prime,
    n: usize,
    order: usize,
}

fn params(s: &Session) -> Result<Params, Failure> {
    let p = Prime::new(s.p)?;
    if s.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let min = s.p as usize + 2;
    let order = s.trunc.unwrap_or(min);
    if order < min {
        return Err(Failure::Usage(format!("--trunc must be at least p + 2 = {min}, got {order}")));
    }
    Ok(Params { p, n: s.n, order })
}

fn base_ring(kind: BaseKind, pr: &Params) -> Result<RingRef, Failure> {
    let top = 2 * pr.p.get() as i32;
    let ring = match kind {
        BaseKind::Trunc => PolyRing::truncated(pr.p, "x", pr.n, pr.order)?,
        BaseKind::Poly => PolyRing::polynomial(pr.p, "x", pr.n, top, pr.order)?,
        BaseKind::Laurent => {
            let vars = (1..=pr.n).map(|i| Variable::laurent(format!("x{i}"), pr.p.get() as i32, top)).collect();
            PolyRing::new(pr.p, vars, pr.order)?
        }
    };
    Ok(ring)
}

fn connection(alpha: &str, kind: BaseKind, pr: &Params) -> Result<HConnection, Failure> {
    let ring = base_ring(kind, pr)?;
    Ok(HConnection::new(parse_form_of_degree(alpha, &ring, 1)?)?)
}

fn weyl(src: &str, pr: &Params) -> Result<WeylElement, Failure> {
    Ok(parse_weyl(src, pr.p, pr.n, pr.order)?)
}

fn model_graph(phis: &[String], pr: &Params) -> Result<(RestrictedSymplecticModel, SubvarietyPresentation), Failure> {
    let model = RestrictedSymplecticModel::standard(pr.p, pr.n)?;
    if phis.len() != pr.n {
        return Err(Failure::Usage(format!("expected {} --phi functions, got {}", pr.n, phis.len())));
    }
    let fs = phis.iter().map(|s| parse_poly(s, &model.base)).collect::<frobquant::Result<Vec<_>>>()?;
    let y = SubvarietyPresentation::graph(&model, fs)?;
    Ok((model, y))
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(|t| t.to_string()).collect()
}

fn support_json(ps: &PSupportIdeal) -> Value {
    json!({
        "ideal": ps.to_string(),
        "generators": strings(&ps.generators),
        "kappas": strings(&ps.kappas),
        "trivial_mod_hp": ps.trivial_mod_hp,
    })
}

pub fn run(session: &Session, command: &Command) -> Result<Report, Failure> {
    let pr = params(session)?;
    let cmd = name(command);
    let report = match command {
        Command::POp { elem } => {
            let a = weyl(elem, &pr)?;
            let ap = a.p_operation()?;
            let mut r = Report::new(cmd, json!({ "elem": a.to_string(), "p_operation": ap.to_string() }));
            r.check("a^p - s(a') is divisible by h^(p-1)", true);
            // {a^[p], g} = {a, -}^p (g) on every generator
            let gens: Vec<WeylElement> = (0..pr.n).flat_map(|i| [WeylElement::x(pr.p, pr.n, pr.order, i), WeylElement::y(pr.p, pr.n, pr.order, i)]).collect();
            let mut ad_ok = true;
            for g in &gens {
                let lhs = ap.bracket(g)?;
                let mut rhs = g.clone();
                for _ in 0..pr.p.get() {
                    rhs = a.bracket(&rhs)?;
                }
                ad_ok &= lhs == rhs;
            }
            r.check("ad(a^[p]) = ad(a)^p on generators", ad_ok);
            r
        }
        Command::Bracket { a, b } => {
            let (a, b) = (weyl(a, &pr)?, weyl(b, &pr)?);
            let br = a.bracket(&b)?;
            let mut r = Report::new(cmd, json!({ "bracket": br.to_string(), "commutator": a.commutator(&b).to_string() }));
            r.check("h{a, b} = ab - ba", br.shift_h(1) == a.commutator(&b));
            r.check("{a, b} = -{b, a}", b.bracket(&a)? == br.neg());
            r
        }
        Command::PCurvature { alpha, base } => {
            let conn = connection(alpha, *base, &pr)?;
            let curv = (0..pr.n).map(|i| conn.p_curvature_coordinate(i)).collect::<frobquant::Result<Vec<_>>>()?;
            let flat = curv.iter().all(|c| c.is_zero());
            let mut r = Report::new(cmd, json!({ "alpha": conn.alpha().to_string(), "coordinate_curvatures": strings(&curv), "vanishing": flat }));
            r.check("closed formula agrees with p-fold composition on 1 and every coordinate", true);
            r
        }
        Command::PSupport { alpha, base } => {
            let conn = connection(alpha, *base, &pr)?;
            let ps = p_support(&conn)?;
            let mut result = support_json(&ps);
            let mut r = Report::new(cmd, Value::Null);
            if ps.trivial_mod_hp {
                result["theta"] = json!(extract_theta(&ps)?.to_string());
            }
            r.result = result;
            r.check("every p-curvature is divisible by h^p with a p-th root", true);
            r
        }
        Command::CheckLagrangian { phi } => {
            let (model, y) = model_graph(phi, &pr)?;
            let lag = is_lagrangian(&y, &model)?;
            Report::new(cmd, json!({ "generators": strings(&y.generators), "lagrangian": lag }))
        }
        Command::CheckRestricted { phi } => {
            let (model, y) = model_graph(phi, &pr)?;
            let v = is_restricted_subvariety(&y, &model)?;
            let mut r = Report::new(
                cmd,
                json!({
                    "restricted": v.restricted,
                    "by_membership": v.by_membership,
                    "by_exactness": v.by_exactness,
                    "witness": v.witness.as_ref().map(|(i, f)| json!({ "generator": i + 1, "p_operation": f.to_string() })),
                    "primitive": v.primitive.as_ref().map(|f| f.to_string()),
                }),
            );
            r.check("ideal membership and local exactness agree", v.routes_agree());
            r
        }
        Command::CheckCoisotropic { alpha, gen, base } => {
            let (ideal, pairs, label) = match alpha {
                Some(alpha) => {
                    let ps = p_support(&connection(alpha, *base, &pr)?)?;
                    let n = pr.n;
                    let ideal = IdealPresentation::new(&ps.ring, ps.generators.clone())?;
                    (ideal, PoissonPairs { pairs: (0..n).map(|i| (n + i, i)).collect() }, ps.to_string())
                }
                None => {
                    if gen.is_empty() {
                        return Err(Failure::Usage("give --alpha or at least one --gen".into()));
                    }
                    let ring = cotangent(&pr)?;
                    let gens = gen.iter().map(|s| parse_poly(s, &ring)).collect::<frobquant::Result<Vec<_>>>()?;
                    let ideal = IdealPresentation::new(&ring, gens)?;
                    let label = format!("({})", strings(ideal.generators()).join(", "));
                    (ideal, PoissonPairs { pairs: (0..pr.n).map(|i| (pr.n + i, i)).collect() }, label)
                }
            };
            let v = is_coisotropic_ideal(&ideal, &pairs)?;
            let p = pr.p.get() as usize;
            let offending = v.offending.as_ref().map(|(i, j, b)| {
                json!({
                    "generators": [i + 1, j + 1],
                    "bracket": b.to_string(),
                    "unit_times_h^p": is_unit_multiple_of_h_power(b, p),
                })
            });
            Report::new(cmd, json!({ "ideal": label, "coisotropic": v.coisotropic, "offending": offending }))
        }
        Command::ClassifyQuantization { alpha, base } => {
            let conn = connection(alpha, *base, &pr)?;
            let c = classify_quantization(&conn)?;
            let mut r = Report::new(
                cmd,
                json!({
                    "logarithmic": c.logarithmic,
                    "defect": strings(&c.defect),
                    "witness": c.witness.as_ref().map(|g| g.to_string()),
                    "isomorphism_to_standard": c.isomorphism_to_standard.as_ref().map(|g| g.to_string()),
                }),
            );
            if let Some(g) = &c.witness {
                let back = frobquant::formscalc::dlog(g)?;
                r.check("dlog(witness) = alpha", &back == conn.alpha());
            }
            r.check("vanishing defect matches existence of a witness", c.defect.iter().all(|d| d.is_zero()) == c.logarithmic);
            r
        }
        Command::NormalForm { image } => {
            if image.len() != 2 * pr.n {
                return Err(Failure::Usage(format!("expected {} --image values (x1..xn then y1..yn), got {}", 2 * pr.n, image.len())));
            }
            let target = Surjection::target_ring(pr.p, pr.n)?;
            let images = image.iter().map(|s| parse_poly(s, &target)).collect::<frobquant::Result<Vec<_>>>()?;
            let psi = Surjection::new(pr.p, pr.n, pr.order, images)?;
            let nf = normal_form(&psi)?;
            let chain: Vec<Value> = nf.chain.iter().map(|(name, phi)| json!({ "stage": name, "images": strings(phi.images()) })).collect();
            let mut r = Report::new(
                cmd,
                json!({
                    "chain": chain,
                    "graph": strings(&nf.graph),
                    "primitive": nf.primitive.as_ref().map(|f| f.to_string()),
                    "final_images": strings(&nf.final_images),
                    "kernel_dim": nf.kernel_dim,
                    "j_dim": nf.j_dim,
                }),
            );
            for (check, ok) in &nf.trail {
                r.check(check.clone(), *ok);
            }
            for (name, phi) in &nf.chain {
                r.check(format!("{name} preserves the Weyl relations"), verify_relations(phi.images()).is_ok());
            }
            r.check("kernel of the composite equals J", nf.kernel_dim == nf.j_dim);
            r
        }
        Command::CechClass { cover, transitions } => {
            let cover = input::cover(cover.as_deref(), pr.p, pr.n)?;
            let g = input::transitions(&input::load_json(transitions)?, &cover)?;
            let cls = restricted_chern(&g, &cover)?;
            let zero = is_coboundary(&cls, &cover)?.is_some();
            let mut r = Report::new(cmd, json!({ "class": cls.to_string(), "cohomologous_to_zero": zero }));
            r.check("cocycle condition", check_cocycle(&cls, &cover).is_ok());
            r
        }
        Command::Coboundary { cover, class } => {
            let cover = input::cover(cover.as_deref(), pr.p, pr.n)?;
            let cls = input::class(Some(class), &cover)?;
            check_cocycle(&cls, &cover)?;
            let w = is_coboundary(&cls, &cover)?;
            let mut r = Report::new(cmd, json!({ "class": cls.to_string(), "coboundary": w.is_some(), "witness": w.as_ref().map(|b| strings(b)) }));
            r.check("cocycle condition", true);
            if let Some(b) = &w {
                r.check("coboundary of the witness reproduces the class", coboundary_of(b, &cover)? == cls);
            }
            r
        }
        Command::ChernCheck { cover, cl, rho, ck, theta } => {
            let cover = input::cover(cover.as_deref(), pr.p, pr.n)?;
            let cl = input::class(cl.as_deref(), &cover)?;
            let rho = input::class(rho.as_deref(), &cover)?;
            let ck = input::class(ck.as_deref(), &cover)?;
            let tw = cover.twisted(&[0]);
            let theta = parse_form_of_degree(theta, &tw, 1)?;
            let sign = match session.sign_theta {
                SignArg::Plus => ThetaSign::Plus,
                SignArg::Minus => ThetaSign::Minus,
            };
            let holds = chern_condition(&cl, &rho, &ck, &theta, sign, &cover)?;
            let mut r = Report::new(
                cmd,
                json!({
                    "holds": holds,
                    "sign_theta": if sign == ThetaSign::Plus { "plus" } else { "minus" },
                    "c_L": cl.to_string(),
                    "rho": rho.to_string(),
                    "c_K": ck.to_string(),
                    "theta": theta.to_string(),
                }),
            );
            for (label, c) in [("c_L", &cl), ("rho", &rho), ("c_K", &ck)] {
                r.check(format!("{label} is a cocycle"), check_cocycle(c, &cover).is_ok());
            }
            r
        }
        Command::Suite { criterion } => {
            let report = match criterion {
                Some(id) if (1..=10).contains(id) => {
                    let c = run_criterion(*id, session.seed);
                    let passed = usize::from(c.passed);
                    SuiteReport { seed: session.seed, failed: 1 - passed, passed, criteria: vec![c] }
                }
                Some(id) => return Err(Failure::Usage(format!("no criterion {id}; expected 1..=10"))),
                None => run_all(session.seed),
            };
            let mut r = Report::new(cmd, json!({ "seed": report.seed, "passed": report.passed, "failed": report.failed, "criteria": report.criteria }));
            for c in &report.criteria {
                r.check(c.line(), c.passed);
            }
            r
        }
    };
    Ok(report)
}

/// `k[x1'..xn', ξ1'..ξn']` truncated at the session order.
fn cotangent(pr: &Params) -> Result<RingRef, Failure> {
    let top = 2 * pr.p.get() as i32;
    let mut vars: Vec<Variable> = (1..=pr.n).map(|i| Variable::polynomial(format!("x{i}'"), top)).collect();
    vars.extend((1..=pr.n).map(|i| Variable::polynomial(format!("ξ{i}'"), top)));
    Ok(PolyRing::new(pr.p, vars, pr.order)?)
}
