use contact_lie::cartan::{lie_bracket, KForm, VectorField};
use contact_lie::contactgeo::{check_contact, ContactStructure};
use contact_lie::exprcore::{parse_expr, q, Monomial, Poly, Q};
use contact_lie::superposition::{
    casimir_integral, casimir_sign_check, emit_superposition_system, expected_integral_count, generate_integrals,
    prolong_field, prolong_function, rank_check, sl2_casimir_variants, slot_chart, FirstIntegralSet, ProductJacobi,
    Prolongation,
};
use contact_lie::{Chart, Error, RationalExpr};
use proptest::prelude::*;

fn e(s: &str, c: &Chart) -> RationalExpr {
    parse_expr(s, c).unwrap()
}

fn field(c: &Chart, comps: &[&str]) -> VectorField {
    VectorField::parse(c, comps).unwrap()
}

fn sl2() -> ContactStructure {
    let c = Chart::new("sl2", &["alpha", "beta", "gamma"]).unwrap();
    let eta = KForm::parse(&c, &[("dalpha", "(1 + beta*gamma)/alpha"), ("dgamma", "-beta")]).unwrap();
    check_contact(&c, &eta).unwrap()
}

fn right(c: &Chart) -> Vec<VectorField> {
    vec![
        field(c, &["alpha", "beta", "-gamma"]),
        field(c, &["gamma", "(1 + beta*gamma)/alpha", "0"]),
        field(c, &["0", "0", "alpha"]),
    ]
}

fn left(c: &Chart) -> Vec<VectorField> {
    vec![
        field(c, &["alpha", "-beta", "gamma"]),
        field(c, &["0", "alpha", "0"]),
        field(c, &["beta", "0", "(1 + beta*gamma)/alpha"]),
    ]
}

fn hams(c: &Chart) -> Vec<RationalExpr> {
    ["-1 - 2*beta*gamma", "-gamma*(1 + beta*gamma)/alpha", "alpha*beta"].iter().map(|h| e(h, c)).collect()
}

/// Displayed formulas use `a, b, g` for the first copy and `ap, bp, gp` for
/// the primed (second) copy.
fn primed(s: &str) -> String {
    let mut out = String::new();
    let mut ident = String::new();
    let flush = |ident: &mut String, out: &mut String| {
        out.push_str(match ident.as_str() {
            "a" => "alpha_1",
            "b" => "beta_1",
            "g" => "gamma_1",
            "ap" => "alpha_2",
            "bp" => "beta_2",
            "gp" => "gamma_2",
            other => other,
        });
        ident.clear();
    };
    for ch in s.chars() {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            ident.push(ch);
        } else {
            flush(&mut ident, &mut out);
            out.push(ch);
        }
    }
    flush(&mut ident, &mut out);
    out
}

fn i1_display() -> String {
    primed("-4*(b*g*ap + ap - a*b*gp)*(g*ap*bp - a*(bp*gp + 1))/(a*ap)")
}

fn i2_display() -> String {
    primed("-4*(g*ap - a*gp)*((1 + b*g)*ap^2 - a*(a - g*ap*bp + b*ap*gp + a*bp*gp))/(a*ap)")
}

fn i3_display() -> String {
    primed("-4*(a*b*(bp*gp + 1) - (b*g + 1)*ap*bp)*(a*(bp*gp*a + a - g*ap*bp + b*ap*gp) - (b*g + 1)*ap^2)/(a^2*ap^2)")
}

#[test]
fn prolongation_examples() {
    let c = Chart::new("x", &["x"]).unwrap();
    let p2 = prolong_field(&field(&c, &["1"]), 2).unwrap();
    assert_eq!(p2.chart().variables(), &["x_1", "x_2"]);
    assert_eq!(p2, field(p2.chart(), &["1", "1"]));
    let f3 = prolong_function(&e("x", &c), 3).unwrap();
    assert_eq!(f3, e("x_1 + x_2 + x_3", f3.chart()));
    assert!(Prolongation::new(&c, 0).is_err());

    let s = sl2();
    let p = Prolongation::new(s.chart(), 2).unwrap();
    assert_eq!(p.product().dim(), 6);
    let h1 = p.function(&hams(s.chart())[0]).unwrap();
    assert_eq!(h1, e("-(1 + 2*beta_1*gamma_1) - (1 + 2*beta_2*gamma_2)", p.product()));

    let w = p.form(s.eta()).unwrap();
    let expect = KForm::parse(
        p.product(),
        &[
            ("dalpha_1", "(1 + beta_1*gamma_1)/alpha_1"),
            ("dgamma_1", "-beta_1"),
            ("dalpha_2", "(1 + beta_2*gamma_2)/alpha_2"),
            ("dgamma_2", "-beta_2"),
        ],
    )
    .unwrap();
    assert_eq!(w, expect);
}

#[test]
fn displayed_prolonged_fields_are_left_invariant() {
    let s = sl2();
    let c = s.chart().clone();
    let p = Prolongation::new(&c, 2).unwrap();
    let shown = field(
        p.product(),
        &["alpha_1", "-beta_1", "gamma_1", "alpha_2", "-beta_2", "gamma_2"],
    );
    assert_eq!(p.field(&left(&c)[0]).unwrap(), shown);
    assert_ne!(p.field(&right(&c)[0]).unwrap(), shown);
    // Prolonged Hamiltonians belong to the right-invariant fields.
    for (x, h) in right(&c).iter().zip(hams(&c)) {
        assert_eq!(s.hamiltonian_of(x).unwrap(), h);
    }
}

#[test]
fn product_bracket_relations() {
    let s = sl2();
    let c = s.chart().clone();
    let j = ProductJacobi::new(&s, 2).unwrap();
    let p = j.prolongation();
    let h: Vec<RationalExpr> = hams(&c).iter().map(|h| p.function(h).unwrap()).collect();
    assert_eq!(j.bracket(&h[0], &h[1]).unwrap(), h[1].scale(&q(-2, 1)));
    assert_eq!(j.bracket(&h[0], &h[2]).unwrap(), h[2].scale(&q(2, 1)));
    assert_eq!(j.bracket(&h[1], &h[2]).unwrap(), -&h[0]);
    // Base relations, same constants.
    let b = hams(&c);
    assert_eq!(s.bracket(&b[0], &b[1]).unwrap(), b[1].scale(&q(-2, 1)));
    assert_eq!(s.bracket(&b[1], &b[2]).unwrap(), -&b[0]);
}

#[test]
fn casimir_sign() {
    let s = sl2();
    let c = s.chart().clone();
    let j = ProductJacobi::new(&s, 2).unwrap();
    let checks = casimir_sign_check(&j, &hams(&c), &right(&c), &sl2_casimir_variants()).unwrap();
    assert_eq!(checks[0].polynomial, "4*v2*v3 + v1^2");
    assert!(checks[0].annihilated && checks[0].central);
    assert!(!checks[1].annihilated && !checks[1].central);
    // The displayed closed form of I₁ is the "+" variant.
    assert_eq!(checks[0].integral, e(&i1_display(), j.prolongation().product()));

    let one = ProductJacobi::new(&s, 1).unwrap();
    let c1 = casimir_sign_check(&one, &hams(&c), &right(&c), &sl2_casimir_variants()).unwrap();
    assert!(c1[0].annihilated && c1[0].central && c1[0].integral.is_constant());

    let slots = slot_chart(3).unwrap();
    let p = j.prolongation();
    let ph: Vec<RationalExpr> = hams(&c).iter().map(|h| p.function(h).unwrap()).collect();
    assert_eq!(casimir_integral(&ph, &e("7", &slots)).unwrap(), e("7", p.product()));
    assert!(casimir_integral(&ph[..2], &e("v1", &slots)).is_err());
}

#[test]
fn sl2_integrals_and_rank() {
    let s = sl2();
    let c = s.chart().clone();
    let p = Prolongation::new(&c, 2).unwrap();
    let pc = p.product().clone();
    let ann: Vec<VectorField> = right(&c).iter().map(|x| p.field(x).unwrap()).collect();
    let sym: Vec<(String, VectorField)> =
        left(&c).iter().enumerate().map(|(i, y)| (format!("XL{}", i + 1), p.field(y).unwrap())).collect();
    let i1 = e(&i1_display(), &pc);
    let set = generate_integrals(&i1, &sym, &ann, 3).unwrap();
    assert!(set.complete);
    assert_eq!(set.integrals[1].1, e(&i2_display(), &pc));
    assert_eq!(set.integrals[2].1, e(&i3_display(), &pc));
    assert!(set.notes.iter().any(|n| n.contains("XL1 applied to I1 is constant")));
    for x in &ann {
        for (_, i) in &set.integrals {
            assert!(x.apply(i).is_zero());
        }
    }

    let r = rank_check(&set, &["alpha_1", "beta_1", "gamma_1"], 7).unwrap();
    assert_eq!(r.rank, 3);
    let point: Vec<Q> = r.certificate.as_ref().unwrap().iter().map(|s| s.parse().unwrap()).collect();
    let jac: Vec<Vec<Q>> = set
        .integrals
        .iter()
        .map(|(_, i)| (0..3).map(|v| i.partial_idx(v).eval(&point).unwrap()).collect())
        .collect();
    let det = det3(&jac);
    assert_ne!(det, q(0, 1));
    assert_eq!(det, det_oracle(&point));

    let dup = FirstIntegralSet::new(
        &pc,
        vec![("a".into(), set.integrals[0].1.clone()), ("b".into(), set.integrals[0].1.clone()), ("c".into(), set.integrals[1].1.clone())],
        ann.clone(),
    )
    .unwrap();
    assert!(rank_check(&dup, &["alpha_1", "beta_1", "gamma_1"], 7).unwrap().rank <= 2);

    let sys = emit_superposition_system(&p, &set).unwrap();
    assert_eq!(sys.dependent, vec!["alpha_1", "beta_1", "gamma_1"]);
    assert_eq!(sys.particular_solutions, vec![vec!["alpha_2", "beta_2", "gamma_2"]]);
    assert_eq!(sys.constants, vec!["lambda1", "lambda2", "lambda3"]);
    assert!(!sys.linear_in_dependent);
}

fn det3(m: &[Vec<Q>]) -> Q {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Factored Jacobian determinant, frozen from an independent computation.
fn det_oracle(p: &[Q]) -> Q {
    let (a, b, g, ap, bp, gp) = (&p[0], &p[1], &p[2], &p[3], &p[4], &p[5]);
    let f1 = a * gp - ap * g;
    let f2 = a * b * bp * gp + a * b - ap * b * bp * g - ap * bp;
    let f3 = a * a * bp * gp + a * a - a * ap * b * gp - a * ap * bp * g + ap * ap * b * g + ap * ap;
    let f4 = a * a * bp * gp + a * a + a * ap * b * gp - a * ap * bp * g - ap * ap * b * g - ap * ap;
    let den = a * a * a * a * ap * ap * ap;
    q(128, 1) * f1 * f2 * f3 * f4 / den
}

#[test]
fn integral_edge_cases() {
    let s = sl2();
    let c = s.chart().clone();
    assert_eq!(expected_integral_count(&c, &right(&c)), 0);
    let p = Prolongation::new(&c, 2).unwrap();
    let ann: Vec<VectorField> = right(&c).iter().map(|x| p.field(x).unwrap()).collect();
    assert_eq!(expected_integral_count(p.product(), &ann), 3);

    let pc = p.product().clone();
    let sym = vec![("Y".to_string(), p.field(&left(&c)[1]).unwrap())];
    let constant = generate_integrals(&e("3", &pc), &sym, &ann, 2).unwrap();
    assert!(!constant.complete);
    assert_eq!(constant.len(), 1);

    assert!(matches!(generate_integrals(&e("alpha_1", &pc), &sym, &ann, 2), Err(Error::Rejected(_))));

    let x = Chart::new("x", &["x"]).unwrap();
    let px = Prolongation::new(&x, 2).unwrap();
    let dx = px.field(&field(&x, &["1"])).unwrap();
    let diff = FirstIntegralSet::new(px.product(), vec![("I1".into(), e("x_1 - x_2", px.product()))], vec![dx]).unwrap();
    let rec = emit_superposition_system(&px, &diff).unwrap();
    assert!(rec.linear_in_dependent);
    assert_eq!(rec.equations[0].rhs, "lambda1");
    let json = serde_json::to_value(&rec).unwrap();
    assert_eq!(json["dependent"][0], "x_1");
}

fn poly_in(nvars: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -4i64..=4), 0..4).prop_map(move |terms| {
        Poly::from_terms(
            nvars,
            terms.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= max_deg).map(|(e, c)| (Monomial::new(e), q(c, 1))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prolongation_is_a_morphism(a in poly_in(2, 2), b in poly_in(2, 2), c in poly_in(2, 2), d in poly_in(2, 2), k in 1usize..4) {
        let ch = Chart::new("xy", &["x", "y"]).unwrap();
        let x = VectorField::new(&ch, vec![RationalExpr::from_poly(&ch, a), RationalExpr::from_poly(&ch, b)]).unwrap();
        let y = VectorField::new(&ch, vec![RationalExpr::from_poly(&ch, c), RationalExpr::from_poly(&ch, d)]).unwrap();
        let p = Prolongation::new(&ch, k).unwrap();
        let lhs = p.field(&lie_bracket(&x, &y)).unwrap();
        let rhs = lie_bracket(&p.field(&x).unwrap(), &p.field(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn single_copy_bracket_is_contact_bracket(f in poly_in(3, 2), g in poly_in(3, 2)) {
        let ch = Chart::new("qpz", &["q", "p", "z"]).unwrap();
        let cs = check_contact(&ch, &KForm::parse(&ch, &[("dz", "1"), ("dq", "-p")]).unwrap()).unwrap();
        let j = ProductJacobi::new(&cs, 1).unwrap();
        let p = j.prolongation();
        let (f, g) = (RationalExpr::from_poly(&ch, f), RationalExpr::from_poly(&ch, g));
        let lifted = j.bracket(&p.function(&f).unwrap(), &p.function(&g).unwrap()).unwrap();
        prop_assert_eq!(lifted, p.function(&cs.bracket(&f, &g).unwrap()).unwrap());
    }

    #[test]
    fn product_bracket_is_blockwise(f in poly_in(3, 2), g in poly_in(3, 2)) {
        // Functions on different copies commute up to the Reeb terms.
        let ch = Chart::new("qpz", &["q", "p", "z"]).unwrap();
        let cs = check_contact(&ch, &KForm::parse(&ch, &[("dz", "1"), ("dq", "-p")]).unwrap()).unwrap();
        let j = ProductJacobi::new(&cs, 2).unwrap();
        let p = j.prolongation();
        let (f, g) = (RationalExpr::from_poly(&ch, f), RationalExpr::from_poly(&ch, g));
        let (f1, g2) = (p.lift(&f, 1).unwrap(), p.lift(&g, 2).unwrap());
        let expect = &(&g2 * &p.lift(&cs.reeb_derivative(&f), 1).unwrap()) - &(&f1 * &p.lift(&cs.reeb_derivative(&g), 2).unwrap());
        prop_assert_eq!(j.bracket(&f1, &g2).unwrap(), expect);
    }
}
