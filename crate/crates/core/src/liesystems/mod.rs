//! Vessiot–Guldberg systems: closure of vector fields into finite-dimensional
//! Lie algebras, contact classification, symplectic projection, contact
//! momentum maps and level-set reduction in adapted charts.
//!
//! A system is `X_t = Σ_α b_α(t) X_α`. Coefficients are rational functions of
//! the single variable `t` on [`time_chart`]. Declared generators may be
//! linearly dependent; their Lie closure carries a basis and constants.

mod classify;
mod momentum;
mod project;

pub use classify::{classify_contact_system, no_go_check, Classification, ContactClass, NoGoReport};
pub use momentum::{momentum_map, reduce_level_set, MomentumMap, Reduction};
pub use project::{project_conservative, Projection};

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::cartan::{lie_bracket, VectorField};
use crate::contactgeo::ContactStructure;
use crate::error::{Error, Result};
use crate::exprcore::linalg::solve_rational;
use crate::exprcore::{gcd, Chart, Monomial, Poly, RationalExpr, Q};
use crate::liealgebra::StructureConstants;

/// The chart of the time variable `t`.
pub fn time_chart() -> Chart {
    Chart::new("time", &["t"]).expect("valid chart")
}

/// A basis of the smallest Lie algebra containing some fields.
#[derive(Clone, Debug)]
pub struct LieClosure {
    pub names: Vec<String>,
    pub basis: Vec<VectorField>,
    /// `None` for the zero algebra.
    pub structure: Option<StructureConstants>,
    /// Coordinates of each input field in `basis`.
    pub seed_coordinates: Vec<Vec<Q>>,
}

impl LieClosure {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Constants `a` with `Σ a_i basis_i = v`, if they exist.
///
/// Each component is cleared of denominators and monomial coefficients are
/// matched, giving a linear system over the rationals.
pub fn span_coordinates(basis: &[VectorField], v: &VectorField) -> Option<Vec<Q>> {
    let m = basis.len();
    if m == 0 {
        return v.is_zero().then(Vec::new);
    }
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    for j in 0..v.chart().dim() {
        let entries: Vec<&RationalExpr> = basis.iter().map(|b| b.component(j)).chain([v.component(j)]).collect();
        if entries.iter().all(|e| e.is_zero()) {
            continue;
        }
        let n = v.chart().ring_size();
        let mut l = Poly::one(n);
        for e in &entries {
            if !e.denom().is_one() {
                let g = gcd(&l, e.denom());
                l = &l * &e.denom().div_exact(&g).expect("gcd divides");
            }
        }
        let mut eqs: BTreeMap<Monomial, Vec<Q>> = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            let p = e.numer() * &l.div_exact(e.denom()).expect("lcm is a multiple");
            for (mono, c) in p.terms() {
                eqs.entry(mono.clone()).or_insert_with(|| vec![Q::zero(); m + 1])[i] = c.clone();
            }
        }
        for (_, mut row) in eqs {
            rhs.push(row.pop().unwrap());
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Some(vec![Q::zero(); m]);
    }
    solve_rational(&rows, &rhs)
}

/// Bracket-close `seeds` under constant-coefficient spans.
pub fn smallest_lie_algebra(chart: &Chart, seeds: &[(String, VectorField)], max_dim: usize) -> Result<LieClosure> {
    if seeds.is_empty() {
        return Err(Error::Invalid("no seed vector fields".into()));
    }
    let mut names: Vec<String> = Vec::new();
    let mut basis: Vec<VectorField> = Vec::new();
    let too_big = |max_dim: usize| {
        Error::Rejected(format!("not (detected as) a Lie system within dimension bound {max_dim}"))
    };
    for (name, f) in seeds {
        chart.ensure_same(f.chart())?;
        if span_coordinates(&basis, f).is_none() {
            names.push(name.clone());
            basis.push(f.clone());
            if basis.len() > max_dim {
                return Err(too_big(max_dim));
            }
        }
    }
    let mut i = 0;
    while i < basis.len() {
        for j in 0..i {
            let b = lie_bracket(&basis[j], &basis[i]);
            if span_coordinates(&basis, &b).is_none() {
                names.push(format!("[{},{}]", names[j], names[i]));
                basis.push(b);
                if basis.len() > max_dim {
                    return Err(too_big(max_dim));
                }
            }
        }
        i += 1;
    }
    let structure = if basis.is_empty() { None } else { Some(structure_of(&names, &basis)?) };
    let seed_coordinates = seeds.iter().map(|(_, f)| span_coordinates(&basis, f).expect("seed in span")).collect();
    Ok(LieClosure { names, basis, structure, seed_coordinates })
}

/// Structure constants of fields known to be a basis of a Lie algebra.
pub fn structure_of(names: &[String], basis: &[VectorField]) -> Result<StructureConstants> {
    let r = basis.len();
    let mut c = vec![vec![vec![Q::zero(); r]; r]; r];
    for i in 0..r {
        for j in i + 1..r {
            let b = lie_bracket(&basis[i], &basis[j]);
            let coords = span_coordinates(basis, &b).ok_or_else(|| {
                Error::Rejected(format!("[{}, {}] = {b} is not in the span", names[i], names[j]))
            })?;
            for (k, a) in coords.into_iter().enumerate() {
                c[j][i][k] = -a.clone();
                c[i][j][k] = a;
            }
        }
    }
    StructureConstants::from_numeric("vg", names.to_vec(), &c)
}

/// A t-dependent system `Σ b_α(t) X_α` with its Vessiot–Guldberg algebra and
/// optional contact data.
#[derive(Clone, Debug)]
pub struct VGSystem {
    pub name: String,
    pub chart: Chart,
    pub generator_names: Vec<String>,
    pub generators: Vec<VectorField>,
    pub coefficients: Vec<RationalExpr>,
    pub closure: LieClosure,
    pub contact: Option<ContactStructure>,
    pub hamiltonians: Option<Vec<RationalExpr>>,
}

pub const DEFAULT_MAX_DIM: usize = 12;

impl VGSystem {
    pub fn new(
        name: &str,
        chart: &Chart,
        generators: Vec<(String, VectorField)>,
        coefficients: Vec<RationalExpr>,
    ) -> Result<Self> {
        if generators.len() != coefficients.len() {
            return Err(Error::Invalid(format!(
                "{} generators but {} coefficients",
                generators.len(),
                coefficients.len()
            )));
        }
        let t = time_chart();
        for b in &coefficients {
            if !b.chart().same(&t) {
                return Err(Error::Invalid(format!("coefficient {b} must be an expression in t only")));
            }
        }
        let closure = smallest_lie_algebra(chart, &generators, DEFAULT_MAX_DIM)?;
        let (generator_names, generators) = generators.into_iter().unzip();
        Ok(VGSystem {
            name: name.into(),
            chart: chart.clone(),
            generator_names,
            generators,
            coefficients,
            closure,
            contact: None,
            hamiltonians: None,
        })
    }

    /// Attach a contact structure, optionally with declared Hamiltonians that
    /// are checked against `X_{h_α} = X_α`.
    pub fn with_contact(mut self, contact: ContactStructure, hamiltonians: Option<Vec<RationalExpr>>) -> Result<Self> {
        self.chart.ensure_same(contact.chart())?;
        if let Some(hs) = &hamiltonians {
            if hs.len() != self.generators.len() {
                return Err(Error::Invalid(format!("{} Hamiltonians for {} generators", hs.len(), self.generators.len())));
            }
            for ((name, x), h) in self.generator_names.iter().zip(&self.generators).zip(hs) {
                let pair = contact.hamiltonian_field(h)?;
                if pair.field != *x {
                    return Err(Error::NotHamiltonian(format!(
                        "declared h for {name} is {h}, but X_h - {name} = {}",
                        pair.field.sub(x)
                    )));
                }
            }
        }
        self.contact = Some(contact);
        self.hamiltonians = hamiltonians;
        Ok(self)
    }

    pub fn generator(&self, name: &str) -> Result<&VectorField> {
        self.generator_names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.generators[i])
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
    }

    /// The autonomous field `Σ b_α(t0) X_α` at a fixed time.
    pub fn field_at(&self, t0: &Q) -> Result<VectorField> {
        let mut acc = VectorField::zero(&self.chart);
        for (x, b) in self.generators.iter().zip(&self.coefficients) {
            let v = b.eval(&[t0.clone()])?;
            if !v.is_zero() {
                acc = acc.add(&x.scale_q(&v));
            }
        }
        Ok(acc)
    }

    /// Same generators with different coefficients.
    pub fn with_coefficients(&self, coefficients: Vec<RationalExpr>) -> Result<Self> {
        if coefficients.len() != self.generators.len() {
            return Err(Error::Invalid("coefficient count mismatch".into()));
        }
        Ok(VGSystem { coefficients, ..self.clone() })
    }
}

/// Restrict an expression to a chart containing every variable it uses.
pub(crate) fn restrict(e: &RationalExpr, target: &Chart, what: &str) -> Result<RationalExpr> {
    e.embed(target).map_err(|_| Error::Rejected(format!("not projectable in this chart: {what} = {e} depends on a dropped variable")))
}
