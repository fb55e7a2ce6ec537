//! Definitions shipped with the library.

const BUNDLED: &[(&str, &str)] = &[
    ("brockett", include_str!("../../systems/brockett.json")),
    ("simple-control", include_str!("../../systems/simple-control.json")),
    ("schwarz", include_str!("../../systems/schwarz.json")),
    ("schwarz-reduced", include_str!("../../systems/schwarz-reduced.json")),
    ("quantum5d", include_str!("../../systems/quantum5d.json")),
    ("nonconservative", include_str!("../../systems/nonconservative.json")),
    ("sl2-automorphic", include_str!("../../systems/sl2-automorphic.json")),
    ("riccati", include_str!("../../systems/riccati.json")),
];

/// JSON text of a bundled definition.
pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}
