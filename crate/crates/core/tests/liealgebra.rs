use contact_lie::cartan::{interior, KForm, VectorField};
use contact_lie::exprcore::{parse_expr, q, Poly, Q};
use contact_lie::liealgebra::{
    builtin, ce_d, ce_delta, ce_delta_basis, classify_3d, contact_condition_3d, contact_polynomial, dual_coframe,
    real_roots_in, verify_structure, Cochain, DualElement, Frame, StructureConstants, BUILTIN_NAMES,
};
use contact_lie::{Chart, Error};
use proptest::prelude::*;

fn ring_poly(alg: &StructureConstants, s: &str) -> Poly {
    parse_expr(s, alg.ring()).unwrap().numer().clone()
}

fn field(c: &Chart, comps: &[&str]) -> VectorField {
    VectorField::parse(c, comps).unwrap()
}

#[test]
fn builtins_are_valid() {
    for name in BUILTIN_NAMES {
        let a = builtin(name).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a.jacobi_residuals().is_empty(), "{name}");
        assert!(!a.is_abelian());
    }
    assert!(builtin("r3_lambda").unwrap().is_parametric());
    assert!(!builtin("sl2").unwrap().is_parametric());
    assert!(matches!(builtin("so3"), Err(Error::UnknownIdentifier(_))));
    let sl2 = builtin("sl2").unwrap();
    assert_eq!(sl2.relations(), vec!["[e1, e2] = e2", "[e1, e3] = -e3", "[e2, e3] = e1"]);
}

#[test]
fn invalid_constants_rejected() {
    let bad = StructureConstants::from_relations("bad", &["a", "b", "c"], vec![], &[("a", "b", "c"), ("b", "c", "b")]);
    assert!(matches!(bad, Err(Error::Invalid(m)) if m.contains("Jacobi")));
    let nonlinear = StructureConstants::from_relations("bad", &["a", "b"], vec![], &[("a", "b", "a*b")]);
    assert!(nonlinear.is_err());
    let not_anti = StructureConstants::from_table(
        "bad",
        vec!["a".into(), "b".into()],
        vec![],
        &[vec![vec!["0", "0"], vec!["1", "0"]], vec![vec!["1", "0"], vec!["0", "0"]]],
    );
    assert!(matches!(not_anti, Err(Error::Invalid(m)) if m.contains("antisymmetry")));
}

#[test]
fn ce_delta_examples() {
    let sl2 = builtin("sl2").unwrap();
    let cc = contact_condition_3d(&sl2).unwrap();
    assert_eq!(cc.polynomial, ring_poly(&sl2, "-(l1^2 + 2*l2*l3)/2"));
    // δ(e^1) = ½ e^3∧e^2
    assert_eq!(ce_delta_basis(&sl2, 0).coefficient(&[1, 2]), ring_poly(&sl2, "-1/2"));

    let r3p = builtin("r3p_lambda").unwrap();
    assert_eq!(contact_condition_3d(&r3p).unwrap().polynomial, ring_poly(&r3p, "(l1^2 + l2^2)/2"));

    // the worked value is printed with the opposite sign; the zero set agrees
    let r3l = builtin("r3_lambda").unwrap();
    assert_eq!(contact_condition_3d(&r3l).unwrap().polynomial, ring_poly(&r3l, "-l1*l2*(1 - lambda)/2"));

    let h3 = builtin("h3").unwrap();
    assert_eq!(contact_condition_3d(&h3).unwrap().polynomial, ring_poly(&h3, "-l3^2/2"));

    let r31 = contact_condition_3d(&builtin("r3_p1").unwrap()).unwrap();
    assert!(r31.polynomial.is_zero() && !r31.exists);

    let ab = StructureConstants::abelian(3).unwrap();
    assert!(ce_delta(&ab, &DualElement::symbolic(&ab)).is_zero());
    assert!(contact_polynomial(&ab).unwrap().is_zero());
    assert!(contact_polynomial(&StructureConstants::abelian(2).unwrap()).is_err());
}

#[test]
fn classification_table_reproduced() {
    for name in BUILTIN_NAMES {
        let rep = classify_3d(&builtin(name).unwrap()).unwrap();
        assert_eq!(rep.matches_table, Some(true), "{name}: {rep:?}");
    }
    let sl2 = classify_3d(&builtin("sl2").unwrap()).unwrap();
    assert!(sl2.notes.iter().any(|n| n.contains("negative")));
    assert_eq!(sl2.condition, "l1^2 + 2*l2*l3 != 0");
    let su2 = classify_3d(&builtin("su2").unwrap()).unwrap();
    assert!(su2.notes.iter().any(|n| n.contains("agree")));
    let r3l = classify_3d(&builtin("r3_lambda").unwrap()).unwrap();
    assert_eq!(r3l.parameter_factor, "lambda - 1");
    assert!(r3l.parameter_factor_nonvanishing);
    assert!(!classify_3d(&builtin("r3_p1").unwrap()).unwrap().contact_forms_exist);
}

#[test]
fn parameter_range_matters() {
    // same brackets as r3_lambda but with lambda unconstrained: the factor lambda - 1 can vanish
    let free = StructureConstants::from_relations(
        "r3_lambda",
        &["e1", "e2", "e3"],
        vec![contact_lie::liealgebra::Param::free("lambda")],
        &[("e1", "e3", "-e1"), ("e3", "e2", "lambda*e2")],
    )
    .unwrap();
    let rep = classify_3d(&free).unwrap();
    assert!(!rep.parameter_factor_nonvanishing);
    assert_eq!(rep.matches_table, Some(false));
}

#[test]
fn delta_squared_vanishes() {
    for name in BUILTIN_NAMES {
        let a = builtin(name).unwrap();
        let theta = DualElement::symbolic(&a);
        let d1 = ce_d(&a, &theta.to_cochain(&a));
        assert_eq!(d1, ce_delta(&a, &theta));
        assert!(ce_d(&a, &d1).is_zero(), "{name}");
        let two = Cochain::basis_element(&a, 0).wedge(&Cochain::basis_element(&a, 2));
        assert!(ce_d(&a, &ce_d(&a, &two)).is_zero(), "{name}");
        assert_eq!(contact_polynomial(&a).unwrap(), contact_condition_3d(&a).unwrap().polynomial);
    }
}

#[test]
fn sturm_counts() {
    let x = |v: &[i64]| v.iter().map(|&c| Q::from_integer(c.into())).collect::<Vec<_>>();
    // x^2 - 1
    let p = x(&[-1, 0, 1]);
    assert_eq!(real_roots_in(&p, None, None), 2);
    assert_eq!(real_roots_in(&p, Some(&q(-1, 1)), Some(&q(1, 1))), 0);
    assert_eq!(real_roots_in(&p, Some(&q(-2, 1)), Some(&q(1, 1))), 1);
    assert_eq!(real_roots_in(&x(&[1, 0, 1]), None, None), 0);
    // (x - 1)^3 (x + 3)
    assert_eq!(real_roots_in(&x(&[-3, 8, -6, 0, 1]), None, None), 2);
    assert_eq!(real_roots_in(&x(&[5]), None, None), 0);
}

#[test]
fn dual_coframe_examples() {
    let c = Chart::new("xyz", &["x", "y", "z"]).unwrap();
    let ys = vec![field(&c, &["1", "0", "y"]), field(&c, &["0", "1", "-x"]), field(&c, &["0", "0", "2"])];
    let co = dual_coframe(&Frame::new(&c, ys).unwrap()).unwrap();
    assert_eq!(co[2], KForm::parse(&c, &[("dz", "1/2"), ("dx", "-y/2"), ("dy", "x/2")]).unwrap());
    assert_eq!(co[0], KForm::parse(&c, &[("dx", "1")]).unwrap());

    let s = Chart::new("xva", &["x", "v", "a"]).unwrap();
    let ys = vec![
        field(&s, &["1", "0", "0"]),
        field(&s, &["x", "v", "a"]),
        field(&s, &["x^2", "2*v*x", "2*(a*x + v^2)"]),
    ];
    let co = dual_coframe(&Frame::new(&s, ys).unwrap()).unwrap();
    assert_eq!(co[0], KForm::parse(&s, &[("dx", "1"), ("dv", "-x*(a*x + 2*v^2)/(2*v^3)"), ("da", "x^2/(2*v^2)")]).unwrap());
    assert_eq!(co[1], KForm::parse(&s, &[("dv", "(a*x + v^2)/v^3"), ("da", "-x/v^2")]).unwrap());
    assert_eq!(co[2], KForm::parse(&s, &[("dv", "-a/(2*v^3)"), ("da", "1/(2*v^2)")]).unwrap());

    let coords: Vec<VectorField> = (0..3).map(|i| VectorField::coordinate(&c, i)).collect();
    let co = dual_coframe(&Frame::new(&c, coords).unwrap()).unwrap();
    for (i, name) in ["dx", "dy", "dz"].iter().enumerate() {
        assert_eq!(co[i], KForm::parse(&c, &[(*name, "1")]).unwrap());
    }

    let dependent = vec![field(&c, &["1", "0", "0"]), field(&c, &["x", "0", "0"]), field(&c, &["0", "0", "1"])];
    assert!(matches!(Frame::new(&c, dependent), Err(Error::Singular(_))));
}

#[test]
fn verify_structure_examples() {
    let g = Chart::new("sl2", &["alpha", "beta", "gamma"]).unwrap();
    let xr = vec![
        field(&g, &["alpha", "beta", "-gamma"]),
        field(&g, &["gamma", "(1 + beta*gamma)/alpha", "0"]),
        field(&g, &["0", "0", "alpha"]),
    ];
    let right = StructureConstants::from_relations(
        "sl2_right",
        &["X1", "X2", "X3"],
        vec![],
        &[("X1", "X2", "-2*X2"), ("X2", "X3", "-X1"), ("X1", "X3", "2*X3")],
    )
    .unwrap();
    assert!(verify_structure(&xr, &right).unwrap().holds);

    let xl = vec![
        field(&g, &["alpha", "-beta", "gamma"]),
        field(&g, &["0", "alpha", "0"]),
        field(&g, &["beta", "0", "(1 + beta*gamma)/alpha"]),
    ];
    let left = StructureConstants::from_relations(
        "sl2_left",
        &["X1", "X2", "X3"],
        vec![],
        &[("X1", "X2", "2*X2"), ("X2", "X3", "X1"), ("X1", "X3", "-2*X3")],
    )
    .unwrap();
    assert!(verify_structure(&xl, &left).unwrap().holds);

    let c = Chart::new("xyz", &["x", "y", "z"]).unwrap();
    let xs = vec![field(&c, &["1", "0", "-y"]), field(&c, &["0", "1", "x"]), field(&c, &["0", "0", "2"])];
    let h3 = builtin("h3").unwrap();
    assert!(verify_structure(&xs, &h3).unwrap().holds);

    let perturbed = StructureConstants::from_relations("h3x", &["e1", "e2", "e3"], vec![], &[("e1", "e2", "2*e3")]).unwrap();
    let chk = verify_structure(&xs, &perturbed).unwrap();
    assert!(!chk.holds);
    assert_eq!(chk.residuals.len(), 1);
    assert_eq!(chk.residuals[0].2, field(&c, &["0", "0", "-2"]));
    assert!(verify_structure(&xs, &builtin("r3_lambda").unwrap()).is_err());
}

// ---------- properties ----------

fn jacobi_oracle(c: &[Vec<Vec<i64>>]) -> bool {
    let r = c.len();
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for l in 0..r {
                    let s: i64 = (0..r).map(|m| c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l]).sum();
                    if s != 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn antisymmetric(r: usize) -> impl Strategy<Value = Vec<Vec<Vec<i64>>>> {
    let pairs = r * (r - 1) / 2;
    prop::collection::vec(prop::collection::vec(prop_oneof![4 => Just(0i64), 1 => -2i64..=2], r), pairs).prop_map(move |v| {
        let mut c = vec![vec![vec![0i64; r]; r]; r];
        let mut it = v.into_iter();
        for i in 0..r {
            for j in i + 1..r {
                let row = it.next().unwrap();
                for k in 0..r {
                    c[i][j][k] = row[k];
                    c[j][i][k] = -row[k];
                }
            }
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jacobi_validation_matches_oracle(c in (3usize..=4).prop_flat_map(antisymmetric)) {
        let r = c.len();
        let basis: Vec<String> = (1..=r).map(|i| format!("e{i}")).collect();
        let qs: Vec<Vec<Vec<Q>>> = c.iter().map(|a| a.iter().map(|b| b.iter().map(|&x| Q::from_integer(x.into())).collect()).collect()).collect();
        let res = StructureConstants::from_numeric("rand", basis, &qs);
        prop_assert_eq!(res.is_ok(), jacobi_oracle(&c));
        if let Ok(alg) = res {
            let theta = DualElement::symbolic(&alg);
            prop_assert!(ce_d(&alg, &ce_delta(&alg, &theta)).is_zero());
        }
    }

    #[test]
    fn coframe_is_dual(a in -3i64..=3, b in -3i64..=3, e in 0u32..=2) {
        // unipotent frames are invertible for every choice of coefficients
        let c = Chart::new("xyz", &["x", "y", "z"]).unwrap();
        let f01 = format!("{a}*z^{e} + y");
        let f02 = format!("{b}*x*y");
        let f12 = format!("x^{e} - {a}");
        let ys = vec![
            field(&c, &["1", &f01, &f02]),
            field(&c, &["0", "1", &f12]),
            field(&c, &["0", "0", "1"]),
        ];
        let co = dual_coframe(&Frame::new(&c, ys.clone()).unwrap()).unwrap();
        for (i, eta) in co.iter().enumerate() {
            for (j, y) in ys.iter().enumerate() {
                let v = interior(y, eta).unwrap().as_function();
                let ok = if i == j { v.is_one() } else { v.is_zero() };
                prop_assert!(ok);
            }
        }
    }
}

#[test]
fn numeric_dual_element() {
    let sl2 = builtin("sl2").unwrap();
    let mu = DualElement::numeric(&sl2, &[q(1, 1), q(0, 1), q(0, 1)]).unwrap();
    let p = ce_delta(&sl2, &mu).wedge(&mu.to_cochain(&sl2)).top_coefficient();
    assert_eq!(p.as_constant(), Some(q(-1, 2)));
    assert!(DualElement::numeric(&sl2, &[q(1, 1)]).is_err());
}
