use contact_lie::cartan::{pullback, KForm};
use contact_lie::definition::{bundled, bundled_names, load, load_str, parse_definition, to_json};
use contact_lie::liesystems::{classify_contact_system, ContactClass};
use contact_lie::{parse_expr, Error, ErrorClass};

fn corrupt(name: &str, from: &str, to: &str) -> String {
    let text = bundled(name).unwrap();
    assert!(text.contains(from), "{from} not in {name}");
    text.replacen(from, to, 1)
}

#[test]
fn every_bundled_definition_loads() {
    let names = bundled_names();
    assert!(names.len() >= 7);
    for n in names {
        let l = load(n).unwrap_or_else(|e| panic!("{n}: {e}"));
        assert_eq!(l.definition.name, n);
    }
}

#[test]
fn round_trip_is_identity() {
    for n in bundled_names() {
        let a = load(n).unwrap();
        let text = to_json(&a.definition);
        let b = load_str(&text).unwrap();
        assert_eq!(a.definition, b.definition, "{n}");
        assert_eq!(to_json(&b.definition), text);
        assert_eq!(a.fields, b.fields);
        assert_eq!(a.forms, b.forms);
    }
}

#[test]
fn brockett_is_conservative() {
    let l = load("brockett").unwrap();
    let c = classify_contact_system(l.system().unwrap()).unwrap();
    assert_eq!(c.class, ContactClass::ConservativeContact);
    assert_eq!(l.contact().unwrap().reeb().components()[2], parse_expr("2", &l.chart).unwrap());
    assert_eq!(l.system().unwrap().closure.dim(), 3);
}

#[test]
fn schwarz_charts_are_related() {
    let l = load("schwarz").unwrap();
    let m = &l.maps[0];
    assert_eq!(m.map.source().variables(), &["x", "v", "a"]);
    let eta = KForm::parse(&l.chart, &[("dz", "1"), ("dq", "-p")]).unwrap();
    assert_eq!(&pullback(&m.map, &eta).unwrap(), &m.source_forms["eta2"]);
    assert_eq!(m.source_hamiltonians.as_ref().unwrap().len(), 3);

    let bad = corrupt("schwarz", "\"-x/v^2\"", "\"x/v^2\"");
    assert!(matches!(load_str(&bad), Err(Error::Rejected(m)) if m.contains("/coordinate_maps/0/pullbacks/0")));
}

#[test]
fn mislabeled_hamiltonian_reports_the_residual() {
    let bad = corrupt("brockett", "\"hamiltonians\": [\"y\", \"-x\", \"-1\"]", "\"hamiltonians\": [\"y\", \"x\", \"-1\"]");
    let err = load_str(&bad).unwrap_err();
    assert_eq!(err.class(), ErrorClass::Rejected);
    let msg = err.to_string();
    assert!(msg.contains("/hamiltonians/1"), "{msg}");
    // X_x = -∂y - x∂z is the negative of X₂, so the residual is -2 X₂.
    assert!(msg.contains("X_h - X2 = (-2)*d/dy + (-2*x)*d/dz"), "{msg}");
}

#[test]
fn schema_errors_carry_pointers() {
    let bad = corrupt("brockett", "\"components\": [\"0\", \"1\", \"x\"]", "\"components\": [\"0\", 1, \"x\"]");
    match parse_definition(&bad) {
        Err(Error::Schema { path, .. }) => assert_eq!(path, "/vector_fields/1/components/1"),
        other => panic!("{other:?}"),
    }
    let bad = corrupt("brockett", "\"contact_form\"", "\"contact_from\"");
    assert!(matches!(load_str(&bad), Err(Error::Schema { .. })));

    let bad = corrupt("quantum5d", "\"generators\": [\"X1\"", "\"generators\": [\"Y1\"");
    match load_str(&bad) {
        Err(Error::Schema { path, message }) => {
            assert_eq!(path, "/generators/0");
            assert!(message.contains("Y1"));
        }
        other => panic!("{other:?}"),
    }

    let bad = corrupt("brockett", "\"-y\"", "\"-y +\"");
    match load_str(&bad) {
        Err(Error::Syntax { message, .. }) => assert!(message.starts_with("/vector_fields/0/components/2"), "{message}"),
        other => panic!("{other:?}"),
    }

    let bad = corrupt("brockett", "\"-y\"", "\"-w\"");
    assert!(matches!(load_str(&bad), Err(Error::Schema { path, .. }) if path == "/vector_fields/0/components/2"));

    let bad = corrupt("brockett", "\"1 - t^2\"", "\"1 - x\"");
    assert!(matches!(load_str(&bad), Err(Error::Schema { path, .. }) if path == "/coefficients/1"));

    let bad = corrupt("quantum5d", "\"mu\": [\"3\"", "\"mu\": [\"three\"");
    assert!(matches!(load_str(&bad), Err(Error::Schema { path, .. }) if path == "/reduction/mu/0"));

    assert!(matches!(load("no/such/file.json"), Err(Error::Invalid(m)) if m.contains("brockett")));
}

#[test]
fn invariant_failures_are_rejections() {
    let bad = corrupt("brockett", "\"dz\": \"1/2\", ", "");
    assert!(matches!(load_str(&bad), Err(Error::NotContact(m)) if m.starts_with("/contact_form")));

    let bad = corrupt("riccati", "[\"X1\", \"X3\", \"2*X2\"]", "[\"X1\", \"X3\", \"X2\"]");
    assert!(matches!(load_str(&bad), Err(Error::Rejected(m)) if m.contains("[X1, X3]")));
}

#[test]
fn reduction_hints() {
    let l = load("quantum5d").unwrap();
    assert_eq!(l.frame().unwrap().len(), 3);
    assert_eq!(l.mu.len(), 3);
    let r = load("riccati").unwrap();
    assert!(r.contact.is_none());
    assert_eq!(r.system().unwrap().closure.dim(), 3);
    assert!(r.contact().is_err());
}
