//! Coordinate charts: named variables plus exponential atoms.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::poly::Poly;
use super::Q;
use crate::error::{Error, Result};

/// An atom `u = exp(scale * base)`, with `du/d(base) = scale * u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpAtom {
    pub name: String,
    pub base: String,
    pub scale: Q,
}

impl ExpAtom {
    pub fn new(name: impl Into<String>, base: impl Into<String>, scale: Q) -> Self {
        ExpAtom { name: name.into(), base: base.into(), scale }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct ChartInner {
    id: String,
    variables: Vec<String>,
    atoms: Vec<ExpAtom>,
}

/// Shared handle to an immutable chart.
///
/// The polynomial ring of a chart has one generator per variable followed by
/// one per atom; [`Chart::ring_size`] counts both.
#[derive(Clone)]
pub struct Chart {
    inner: Arc<ChartInner>,
    index: Arc<HashMap<String, usize>>,
}

pub(crate) fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    pub fn new<S: AsRef<str>>(id: &str, variables: &[S]) -> Result<Chart> {
        Chart::with_atoms(id, variables, Vec::new())
    }

    pub fn with_atoms<S: AsRef<str>>(id: &str, variables: &[S], atoms: Vec<ExpAtom>) -> Result<Chart> {
        let variables: Vec<String> = variables.iter().map(|s| s.as_ref().to_string()).collect();
        if variables.is_empty() {
            return Err(Error::InvalidChart(format!("chart `{id}` has no variables")));
        }
        let mut index = HashMap::new();
        for (i, name) in variables.iter().chain(atoms.iter().map(|a| &a.name)).enumerate() {
            if !valid_ident(name) {
                return Err(Error::InvalidChart(format!("`{name}` is not a valid identifier")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidChart(format!("duplicate name `{name}` in chart `{id}`")));
            }
        }
        for a in &atoms {
            if !variables.contains(&a.base) {
                return Err(Error::InvalidChart(format!("atom `{}` has unknown base `{}`", a.name, a.base)));
            }
            if a.scale.is_zero() {
                return Err(Error::InvalidChart(format!("atom `{}` has zero scale", a.name)));
            }
        }
        Ok(Chart {
            inner: Arc::new(ChartInner { id: id.to_string(), variables, atoms }),
            index: Arc::new(index),
        })
    }

    pub fn id(&self) -> &str {
        &self.inner.id
    }

    pub fn variables(&self) -> &[String] {
        &self.inner.variables
    }

    pub fn atoms(&self) -> &[ExpAtom] {
        &self.inner.atoms
    }

    pub fn dim(&self) -> usize {
        self.inner.variables.len()
    }

    pub fn ring_size(&self) -> usize {
        self.inner.variables.len() + self.inner.atoms.len()
    }

    /// Ring index of a variable or atom name.
    pub fn ring_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Position of a chart variable (atoms excluded).
    pub fn var_index(&self, name: &str) -> Result<usize> {
        match self.ring_index(name) {
            Some(i) if i < self.dim() => Ok(i),
            _ => Err(Error::UnknownIdentifier(name.to_string())),
        }
    }

    pub fn ring_name(&self, i: usize) -> &str {
        if i < self.dim() {
            &self.inner.variables[i]
        } else {
            &self.inner.atoms[i - self.dim()].name
        }
    }

    pub fn ring_names(&self) -> Vec<String> {
        (0..self.ring_size()).map(|i| self.ring_name(i).to_string()).collect()
    }

    /// `d(ring generator w) / d(variable v)` as a polynomial.
    pub fn generator_derivative(&self, w: usize, v: usize) -> Poly {
        let n = self.ring_size();
        if w < self.dim() {
            return if w == v { Poly::one(n) } else { Poly::zero(n) };
        }
        let atom = &self.inner.atoms[w - self.dim()];
        if self.inner.variables[v] == atom.base {
            Poly::var(n, w).scale(&atom.scale)
        } else {
            Poly::zero(n)
        }
    }

    pub fn same(&self, other: &Chart) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }

    pub fn ensure_same(&self, other: &Chart) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::ChartMismatch(self.id().to_string(), other.id().to_string()))
        }
    }

    /// A chart with extra variables appended (atoms preserved).
    pub fn extend(&self, id: &str, extra_vars: &[String], extra_atoms: Vec<ExpAtom>) -> Result<Chart> {
        let mut vars = self.inner.variables.clone();
        vars.extend(extra_vars.iter().cloned());
        let mut atoms = self.inner.atoms.clone();
        atoms.extend(extra_atoms);
        Chart::with_atoms(id, &vars, atoms)
    }

    /// Evaluate the ring generators at a real point of the chart.
    pub fn ring_point_f64(&self, point: &[f64]) -> Vec<f64> {
        let mut out = point.to_vec();
        for a in &self.inner.atoms {
            let base = self.inner.variables.iter().position(|v| *v == a.base).unwrap();
            out.push((super::poly::q_to_f64(&a.scale) * point[base]).exp());
        }
        out
    }

    pub fn has_atoms(&self) -> bool {
        !self.inner.atoms.is_empty()
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Chart {}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({}: {:?}", self.id(), self.variables())?;
        if self.has_atoms() {
            write!(f, ", atoms {:?}", self.atoms().iter().map(|a| &a.name).collect::<Vec<_>>())?;
        }
        write!(f, ")")
    }
}
