use contact_lie::cartan::{divergence, KForm, VectorField};
use contact_lie::contactgeo::{check_contact, ContactStructure};
use contact_lie::dynamics::{
    classify_equilibrium, empirical_order, integrate, monitor_area, monitor_energy, monitor_first_integrals,
    monitor_volume, monitor_with_order, phase_portrait, polygon_area, CompiledExpr, CompiledSystem, EquilibriumKind,
    Grid, Law,
};
use contact_lie::exprcore::{parse_expr, q};
use contact_lie::liesystems::{time_chart, VGSystem};
use contact_lie::{Chart, Error, RationalExpr};
use proptest::prelude::*;

fn e(s: &str, c: &Chart) -> RationalExpr {
    parse_expr(s, c).unwrap()
}

fn system(name: &str, c: &Chart, gens: &[&[&str]], bs: &[&str]) -> VGSystem {
    let t = time_chart();
    let named = gens.iter().enumerate().map(|(i, f)| (format!("X{}", i + 1), VectorField::parse(c, f).unwrap())).collect();
    VGSystem::new(name, c, named, bs.iter().map(|b| e(b, &t)).collect()).unwrap()
}

fn contact(c: &Chart, eta: &[(&str, &str)]) -> ContactStructure {
    check_contact(c, &KForm::parse(c, eta).unwrap()).unwrap()
}

fn xyz() -> Chart {
    Chart::new("xyz", &["x", "y", "z"]).unwrap()
}

fn brockett(bs: &[&str]) -> VGSystem {
    system("brockett", &xyz(), &[&["1", "0", "-y"], &["0", "1", "x"], &["0", "0", "2"]], bs)
}

fn qp() -> Chart {
    Chart::new("qp", &["q", "p"]).unwrap()
}

/// The reduced Schwarz system at `b₁ = -1/4`.
fn reduced_schwarz() -> VGSystem {
    system("schwarz_quot", &qp(), &[&["q^2/2 - 1/2", "1 - p*q"]], &["1"])
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn brockett_translation() {
    let tr = integrate(&brockett(&["1", "0", "0"]), &[0.0, 0.0, 0.0], 0.0, 1.0, 1e-2).unwrap();
    assert!(dist(tr.last(), &[1.0, 0.0, 0.0]) < 1e-14);
    assert_eq!(tr.times.len(), 101);
    assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
    assert!(tr.states.iter().all(|s| s.len() == 3));
    assert_eq!(tr.method, "rk4");
    let csv = tr.to_csv(&[("h".into(), vec![0.0; tr.times.len()])]);
    assert!(csv.starts_with("t,x,y,z,h\n"));
    assert_eq!(csv.lines().count(), 102);

    // Off the origin X₁ shears z by -y t.
    let tr = integrate(&brockett(&["1", "0", "0"]), &[0.0, 2.0, 0.0], 0.0, 1.0, 1e-2).unwrap();
    assert!(dist(tr.last(), &[1.0, 2.0, -2.0]) < 1e-13);
}

#[test]
fn reduced_schwarz_equilibria_are_fixed() {
    let sys = reduced_schwarz();
    for p in [[1.0, 1.0], [-1.0, -1.0]] {
        let tr = integrate(&sys, &p, 0.0, 10.0, 1e-3).unwrap();
        let worst = tr.states.iter().map(|s| dist(s, &p)).fold(0.0, f64::max);
        assert!(worst / 10.0 < 1e-12, "drift {worst} from {p:?}");
    }
}

#[test]
fn rk4_order_is_four() {
    let b = brockett(&["1/(1 + t)", "t/(1 + t^2)", "1"]);
    let orders = empirical_order(&CompiledSystem::from_system(&b), &[0.3, -0.2, 0.1], 0.0, 2.0, 0.1, 4).unwrap();
    assert_eq!(orders.len(), 2);
    for o in orders {
        assert!((o - 4.0).abs() < 0.3, "Brockett order {o}");
    }
    let s = CompiledSystem::from_system(&reduced_schwarz());
    for o in empirical_order(&s, &[0.5, 0.3], 0.0, 1.0, 0.1, 4).unwrap() {
        assert!((o - 4.0).abs() < 0.3, "Schwarz order {o}");
    }
    assert!(empirical_order(&s, &[0.5, 0.3], 0.0, 1.0, 0.1, 2).is_err());
}

#[test]
fn conservative_integrals_do_not_drift() {
    // k = q²p/2 - q - p/2 generates the reduced Schwarz field with dq^dp.
    let sys = reduced_schwarz();
    let k = vec![("k".to_string(), e("q^2*p/2 - q - p/2", &qp()))];
    let tr = integrate(&sys, &[0.2, 0.4], 0.0, 5.0, 1e-3).unwrap();
    let r = &monitor_first_integrals(&tr, &k).unwrap()[0];
    assert_eq!(r.law, Law::Constant);
    assert!(r.max_rel_drift < 1e-8, "{}", r.max_rel_drift);

    // Brockett with constant coefficients: X₁ + 2X₂ has h = y - 2x.
    let b = brockett(&["1", "2", "0"]);
    let tr = integrate(&b, &[0.1, 0.7, -0.3], 0.0, 5.0, 1e-3).unwrap();
    let h = vec![("h".to_string(), e("y - 2*x", &xyz())), ("one".to_string(), e("1", &xyz()))];
    let rs = monitor_first_integrals(&tr, &h).unwrap();
    assert!(rs[0].max_rel_drift < 1e-8);
    assert_eq!(rs[1].max_abs_drift, 0.0);

    // The quantum Darboux chart, constant coefficients.
    let c = Chart::new("r5", &["x1", "x2", "x3", "x4", "x5"]).unwrap();
    let gens: [&[&str]; 5] = [
        &["1", "0", "0", "0", "0"],
        &["0", "1", "0", "0", "-x1"],
        &["0", "0", "1", "0", "0"],
        &["0", "0", "0", "1", "-x3"],
        &["0", "0", "0", "0", "1"],
    ];
    let quantum = system("quantum5d", &c, &gens, &["1", "-2", "3", "1/2", "2"]);
    let h = vec![("h".to_string(), e("-x2 - 2*x1 - 3*x4 + x3/2 - 2", &c))];
    let tr = integrate(&quantum, &[0.1, 0.2, 0.3, 0.4, 0.5], 0.0, 5.0, 1e-3).unwrap();
    assert!(monitor_first_integrals(&tr, &h).unwrap()[0].max_rel_drift < 1e-8);
}

#[test]
fn drift_order_under_halving() {
    // A non-polynomial integral keeps the drift above round-off.
    let c = Chart::new("qp", &["q", "p"]).unwrap();
    let sys = system("pendulum_like", &c, &[&["p", "-q - q^3"]], &["1"]);
    let h = vec![("H".to_string(), e("p^2/2 + q^2/2 + q^4/4", &c))];
    let r = &monitor_with_order(&CompiledSystem::from_system(&sys), &[1.0, 0.5], 0.0, 5.0, 0.05, &h).unwrap()[0];
    let o = r.order.unwrap();
    assert!((o - 4.0).abs() < 0.5, "drift order {o}");
}

#[test]
fn reduced_schwarz_area_is_preserved() {
    let n = 10_000;
    let ball: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            vec![0.5 * a.cos(), 0.5 + 0.5 * a.sin()]
        })
        .collect();
    let r = monitor_area(&CompiledSystem::from_system(&reduced_schwarz()), &ball, 0.0, 2.0, 1e-3, 20).unwrap();
    assert_eq!(r.times.len(), 21);
    assert!(r.max_rel_drift < 1e-3, "{}", r.max_rel_drift);
    assert!(monitor_area(&CompiledSystem::from_system(&reduced_schwarz()), &ball[..2], 0.0, 1.0, 1e-2, 2).is_err());
}

#[test]
fn brockett_translates_balls() {
    let c = Chart::new("xy", &["x", "y"]).unwrap();
    let planar = system("brockett_quot", &c, &[&["1", "0"], &["0", "1"]], &["t", "1 - t^2"]);
    let ball: Vec<Vec<f64>> = (0..400)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / 400.0;
            vec![0.3 * a.cos(), 0.3 * a.sin()]
        })
        .collect();
    let tr = integrate(&planar, &[0.0, 0.0], 0.0, 1.0, 1e-2).unwrap();
    let centre = tr.last().to_vec();
    let moved: Vec<Vec<f64>> =
        ball.iter().map(|p| integrate(&planar, p, 0.0, 1.0, 1e-2).unwrap().last().to_vec()).collect();
    for m in &moved {
        assert!((dist(m, &centre) - 0.3).abs() < 1e-12);
    }
    assert!((polygon_area(&moved).unwrap() - polygon_area(&ball).unwrap()).abs() < 1e-12);
}

#[test]
fn volume_follows_the_divergence() {
    let c = Chart::new("qpz", &["q", "p", "z"]).unwrap();
    let sys = system("nonconservative", &c, &[&["0", "0", "1"], &["1", "0", "0"], &["z", "-p^2", "0"]], &["1", "t", "1"]);
    let cs = contact(&c, &[("dz", "1"), ("dq", "-p")]);
    // Independent oracle: L_X vol / vol for X₃.
    assert_eq!(divergence(&sys.generators[2], cs.volume()).unwrap(), e("-2*p", &c));
    let centres = vec![vec![0.1, 0.5, 0.2], vec![-0.3, 1.0, 0.0], vec![0.4, 0.8, -0.5]];
    let r = monitor_volume(&sys, cs.volume(), &centres, 1e-4, 0.0, 1.0, 1e-3, 10).unwrap();
    assert!(matches!(&r.law, Law::Exponential { rate } if rate.contains("p")));
    assert!(r.max_rel_drift < 1e-3, "{}", r.max_rel_drift);
    // The volume really changes.
    assert!((r.values.last().unwrap() / r.values[0] - 1.0).abs() > 0.1);

    let b = brockett(&["t", "1 - t^2", "1"]);
    let bc = contact(&xyz(), &[("dz", "1/2"), ("dx", "-y/2"), ("dy", "x/2")]);
    let r = monitor_volume(&b, bc.volume(), &[vec![0.1, 0.2, 0.3]], 1e-4, 0.0, 1.0, 1e-3, 5).unwrap();
    assert_eq!(r.law, Law::Constant);
    assert!(r.max_rel_drift < 1e-6);
}

#[test]
fn energy_law() {
    let c = Chart::new("qpz", &["q", "p", "z"]).unwrap();
    let cs = contact(&c, &[("dz", "1"), ("dq", "-p")]);
    let h = e("p*z", &c);
    let r = monitor_energy(&cs, &h, &[0.1, 0.5, 0.7], 0.0, 2.0, 1e-3).unwrap();
    assert_eq!(r.law, Law::Exponential { rate: "-p".into() });
    assert!(r.max_rel_drift < 1e-9, "{}", r.max_rel_drift);
    assert!((r.values.last().unwrap() / r.values[0] - 1.0).abs() > 0.1);

    let g = e("q^2*p/2 - q", &c);
    let r = monitor_energy(&cs, &g, &[0.2, 0.3, 0.0], 0.0, 2.0, 1e-3).unwrap();
    assert_eq!(r.law, Law::Constant);
    assert!(r.max_rel_drift < 1e-9);
}

#[test]
fn portraits() {
    let sys = CompiledSystem::from_system(&reduced_schwarz());
    let grid = Grid::cube(-3.0, 3.0, 61, 2).unwrap();
    let table = phase_portrait(&sys, &grid, 0.0).unwrap();
    assert_eq!(table.rows.len(), 61 * 61);
    assert_eq!(table.skipped(), 0);
    let mut zeros = table.zero_clusters().unwrap();
    zeros.sort_by(|a, b| a[0].total_cmp(&b[0]));
    assert_eq!(zeros.len(), 2);
    assert!(dist(&zeros[0], &[-1.0, -1.0]) < 0.15 && dist(&zeros[1], &[1.0, 1.0]) < 0.15, "{zeros:?}");
    let csv = table.to_csv();
    assert!(csv.starts_with("q,p,dq,dp,skipped\n"));

    // Zero system gives a zero field.
    let c = qp();
    let zero = CompiledSystem::from_field("zero", &VectorField::zero(&c));
    let t = phase_portrait(&zero, &Grid::cube(-1.0, 1.0, 5, 2).unwrap(), 0.0).unwrap();
    assert!(t.rows.iter().all(|r| r.field.as_ref().unwrap().iter().all(|v| *v == 0.0)));

    // Darboux chart at b₁ = -1/4: dq/dt = q²/2 - 1/2.
    let d = Chart::new("qpz", &["q", "p", "z"]).unwrap();
    let sd = system("schwarz", &d, &[&["2", "0", "0"], &["q", "-p", "1"], &["q^2/2", "1 - p*q", "q"]], &["-1/4", "0", "1"]);
    let t3 = phase_portrait(&CompiledSystem::from_system(&sd), &Grid::cube(-2.0, 2.0, 5, 3).unwrap(), 0.0).unwrap();
    for r in &t3.rows {
        let qv = r.point[0];
        assert!((r.field.as_ref().unwrap()[0] - (qv * qv / 2.0 - 0.5)).abs() < 1e-14);
    }

    // Poles are flagged rather than fatal.
    let polar = CompiledSystem::from_field("pole", &VectorField::parse(&c, &["1/q", "0"]).unwrap());
    let t = phase_portrait(&polar, &Grid::cube(-1.0, 1.0, 3, 2).unwrap(), 0.0).unwrap();
    assert_eq!(t.skipped(), 3);
    assert!(t.to_csv().contains(",,,1\n"));
}

#[test]
fn equilibria_are_saddles() {
    let f = reduced_schwarz().field_at(&q(0, 1)).unwrap();
    for p in [[q(1, 1), q(1, 1)], [q(-1, 1), q(-1, 1)]] {
        let r = classify_equilibrium(&f, &p).unwrap();
        assert_eq!(r.kind, EquilibriumKind::Saddle);
        let (a, b) = r.eigenvalues.unwrap();
        assert!(a < 0.0 && b > 0.0);
    }
    // Oracle: J = [[q, 0], [-p, -q]] so the eigenvalues are ±q.
    let r = classify_equilibrium(&f, &[q(1, 1), q(1, 1)]).unwrap();
    assert_eq!(r.jacobian, vec![vec!["1", "0"], vec!["-1", "-1"]]);
    assert_eq!(r.eigenvalues, Some((-1.0, 1.0)));
    assert!(matches!(classify_equilibrium(&f, &[q(0, 1), q(0, 1)]), Err(Error::Rejected(_))));

    let c = qp();
    let centre = VectorField::parse(&c, &["p", "-q"]).unwrap();
    assert_eq!(classify_equilibrium(&centre, &[q(0, 1), q(0, 1)]).unwrap().kind, EquilibriumKind::Center);
    let sink = VectorField::parse(&c, &["-q", "-2*p"]).unwrap();
    assert_eq!(classify_equilibrium(&sink, &[q(0, 1), q(0, 1)]).unwrap().kind, EquilibriumKind::StableNode);
    let spiral = VectorField::parse(&c, &["q + p", "p - q"]).unwrap();
    assert_eq!(classify_equilibrium(&spiral, &[q(0, 1), q(0, 1)]).unwrap().kind, EquilibriumKind::UnstableFocus);
}

#[test]
fn poles_abort_integration() {
    let c = qp();
    let sys = system("pole", &c, &[&["1", "1/(q - 1)"]], &["1"]);
    let err = integrate(&sys, &[0.0, 0.0], 0.0, 2.0, 0.25).unwrap_err();
    assert!(matches!(err, Error::Pole(m) if m.contains("during step")));
    assert!(matches!(integrate(&sys, &[1.0, 0.0], 0.0, 1.0, 0.1), Err(Error::Pole(_))));
    assert!(integrate(&sys, &[0.0], 0.0, 1.0, 0.1).is_err());
    assert!(integrate(&sys, &[0.0, 0.0], 1.0, 0.0, 0.1).is_err());
    assert!(integrate(&sys, &[0.0, 0.0], 0.0, 1.0, -0.1).is_err());
    let blow = system("blow", &c, &[&["q^2", "0"]], &["1"]);
    assert!(matches!(integrate(&blow, &[1.0, 0.0], 0.0, 5.0, 0.1), Err(Error::Numerical(_))));
}

#[test]
fn exp_atoms_compile() {
    let c = Chart::with_atoms("xz", &["x", "z"], vec![contact_lie::ExpAtom::new("E", "z", q(1, 1))]).unwrap();
    let f = e("x*E + 1", &c);
    let v = CompiledExpr::new(&f).eval(&[2.0, 1.0]).unwrap();
    assert!((v - (2.0 * 1f64.exp() + 1.0)).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compiled_matches_exact(a in -5i64..5, b in 1i64..5, c0 in -5i64..5, d in 1i64..5) {
        let ch = qp();
        let f = e("(q^3 - 2*q*p + 1/3)/(1 + q^2 + p^4)", &ch);
        let pt = [q(a, b), q(c0, d)];
        let exact = contact_lie::exprcore::q_to_f64(&f.eval(&pt).unwrap());
        let fl = CompiledExpr::new(&f).eval(&[a as f64 / b as f64, c0 as f64 / d as f64]).unwrap();
        prop_assert!((exact - fl).abs() <= 1e-12 * (1.0 + exact.abs()));
    }

    #[test]
    fn integration_is_deterministic(x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let s = brockett(&["1/(1 + t)", "t", "1"]);
        let a = integrate(&s, &[x, y, 0.0], 0.0, 1.0, 0.05).unwrap();
        let b = integrate(&s, &[x, y, 0.0], 0.0, 1.0, 0.05).unwrap();
        prop_assert_eq!(a.states, b.states);
    }
}
