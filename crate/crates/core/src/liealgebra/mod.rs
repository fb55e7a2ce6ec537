//! Finite-dimensional Lie algebras by structure constants.
//!
//! Constants may depend polynomially on named parameters (the families
//! `r3_lambda`, `r3p_lambda`). Every algebra owns a polynomial ring whose
//! generators are the dual coordinates `l1..lr` followed by the parameters;
//! constants live in that ring and involve parameters only.

mod classify;
mod cochain;
mod frame;

pub use classify::{classify_3d, table_row, real_roots_in, same_zero_set, Classify3d, TableRow, CONTACT_TABLE};
pub use cochain::{ce_d, ce_delta, ce_delta_basis, contact_condition_3d, contact_polynomial, Cochain, ContactCondition, DualElement};
pub use frame::{dual_coframe, verify_structure, Frame, StructureCheck};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exprcore::{parse_expr, poly_to_string, q, Chart, Poly, Q};

/// A structure-constant parameter with its admissible range (metadata only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub lower: Option<Q>,
    pub upper: Option<Q>,
    pub nonzero: bool,
}

impl Param {
    pub fn free(name: &str) -> Self {
        Param { name: name.into(), lower: None, upper: None, nonzero: false }
    }

    pub fn open_interval(name: &str, lower: Q, upper: Q) -> Self {
        Param { name: name.into(), lower: Some(lower), upper: Some(upper), nonzero: false }
    }

    pub fn nonzero(name: &str) -> Self {
        Param { name: name.into(), lower: None, upper: None, nonzero: true }
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match (&self.lower, &self.upper) {
            (None, None) => {}
            (lo, hi) => parts.push(format!(
                "{} in ({}, {})",
                self.name,
                lo.as_ref().map_or("-inf".to_string(), |v| v.to_string()),
                hi.as_ref().map_or("inf".to_string(), |v| v.to_string())
            )),
        }
        if self.nonzero {
            parts.push(format!("{} != 0", self.name));
        }
        if parts.is_empty() {
            format!("{} free", self.name)
        } else {
            parts.join(", ")
        }
    }
}

/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    name: String,
    basis: Vec<String>,
    params: Vec<Param>,
    ring: Chart,
    c: Vec<Vec<Vec<Poly>>>,
}

impl PartialEq for StructureConstants {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.params == other.params && self.c == other.c
    }
}

fn dual_ring(name: &str, r: usize, params: &[Param]) -> Result<Chart> {
    let mut vars: Vec<String> = (1..=r).map(|i| format!("l{i}")).collect();
    vars.extend(params.iter().map(|p| p.name.clone()));
    Chart::new(&format!("{name}_dual"), &vars)
}

impl StructureConstants {
    /// Validate and build from a full `r × r × r` array over the dual ring.
    pub fn new(name: &str, basis: Vec<String>, params: Vec<Param>, c: Vec<Vec<Vec<Poly>>>) -> Result<Self> {
        let r = basis.len();
        if r == 0 {
            return Err(Error::Invalid(format!("algebra `{name}` has an empty basis")));
        }
        let ring = dual_ring(name, r, &params)?;
        let n = ring.ring_size();
        if c.len() != r || c.iter().any(|row| row.len() != r || row.iter().any(|v| v.len() != r)) {
            return Err(Error::Invalid(format!("algebra `{name}`: structure constants must be {r}x{r}x{r}")));
        }
        for (i, row) in c.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                for (k, p) in v.iter().enumerate() {
                    if p.nvars() != n || p.support()[..r].iter().any(|&s| s) {
                        return Err(Error::Invalid(format!("algebra `{name}`: c[{i}][{j}][{k}] must be a polynomial in the parameters")));
                    }
                    if !(p + &c[j][i][k]).is_zero() {
                        return Err(Error::Invalid(format!(
                            "algebra `{name}`: antisymmetry fails, c[{i}][{j}][{k}] = {} but c[{j}][{i}][{k}] = {}",
                            poly_to_string(p, &ring.ring_names()),
                            poly_to_string(&c[j][i][k], &ring.ring_names())
                        )));
                    }
                }
            }
        }
        let alg = StructureConstants { name: name.into(), basis, params, ring, c };
        if let Some(((i, j, k, l), res)) = alg.jacobi_residuals().into_iter().next() {
            return Err(Error::Invalid(format!(
                "algebra `{name}`: Jacobi identity fails for (e{}, e{}, e{}) in component e{}: {}",
                i + 1,
                j + 1,
                k + 1,
                l + 1,
                poly_to_string(&res, &alg.ring.ring_names())
            )));
        }
        Ok(alg)
    }

    /// Build from an `r × r` table of coefficient vectors given as expressions
    /// in the parameters.
    pub fn from_table<S: AsRef<str>>(name: &str, basis: Vec<String>, params: Vec<Param>, table: &[Vec<Vec<S>>]) -> Result<Self> {
        let r = basis.len();
        let ring = dual_ring(name, r, &params)?;
        let mut c = vec![vec![vec![Poly::zero(ring.ring_size()); r]; r]; r];
        if table.len() != r {
            return Err(Error::Invalid(format!("algebra `{name}`: table must have {r} rows")));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != r {
                return Err(Error::Invalid(format!("algebra `{name}`: table row {i} must have {r} entries")));
            }
            for (j, v) in row.iter().enumerate() {
                if v.len() != r {
                    return Err(Error::Invalid(format!("algebra `{name}`: entry [{i}][{j}] must have {r} coefficients")));
                }
                for (k, s) in v.iter().enumerate() {
                    c[i][j][k] = param_poly(name, s.as_ref(), &ring)?;
                }
            }
        }
        StructureConstants::new(name, basis, params, c)
    }

    /// Build from relations `[a, b] = rhs`, where `rhs` is a linear
    /// combination of basis names with parameter-polynomial coefficients.
    /// Unlisted brackets vanish; antisymmetric partners are filled in.
    pub fn from_relations(name: &str, basis: &[&str], params: Vec<Param>, relations: &[(&str, &str, &str)]) -> Result<Self> {
        let r = basis.len();
        let ring = dual_ring(name, r, &params)?;
        let n = ring.ring_size();
        let mut names: Vec<String> = basis.iter().map(|s| s.to_string()).collect();
        names.extend(params.iter().map(|p| p.name.clone()));
        let lin = Chart::new(&format!("{name}_span"), &names)?;
        let mut c = vec![vec![vec![Poly::zero(n); r]; r]; r];
        let pos = |s: &str| {
            basis.iter().position(|b| *b == s).ok_or_else(|| Error::UnknownIdentifier(s.to_string()))
        };
        for (a, b, rhs) in relations {
            let (i, j) = (pos(a)?, pos(b)?);
            let e = parse_expr(rhs, &lin)?;
            if !e.denom().is_one() {
                return Err(Error::Invalid(format!("algebra `{name}`: `{rhs}` is not polynomial")));
            }
            let mut v = vec![Poly::zero(n); r];
            for (m, coef) in e.numer().terms() {
                let ex = m.exps();
                let deg: u32 = ex[..r].iter().sum();
                if deg != 1 {
                    return Err(Error::Invalid(format!("algebra `{name}`: `{rhs}` is not linear in the basis")));
                }
                let k = ex[..r].iter().position(|&d| d == 1).unwrap();
                let mut exps = vec![0u32; n];
                exps[r..].copy_from_slice(&ex[r..]);
                v[k] = &v[k] + &Poly::monomial(crate::exprcore::Monomial::new(exps), coef.clone());
            }
            for k in 0..r {
                c[j][i][k] = -&v[k];
                c[i][j][k] = v[k].clone();
            }
        }
        StructureConstants::new(name, names[..r].to_vec(), params, c)
    }

    /// The abelian algebra of dimension `r`.
    pub fn abelian(r: usize) -> Result<Self> {
        let basis = (1..=r).map(|i| format!("e{i}")).collect();
        let ring = dual_ring("abelian", r, &[])?;
        StructureConstants::new("abelian", basis, Vec::new(), vec![vec![vec![Poly::zero(ring.ring_size()); r]; r]; r])
    }

    /// Numeric constants `c[i][j][k]` (antisymmetry is checked).
    pub fn from_numeric(name: &str, basis: Vec<String>, c: &[Vec<Vec<Q>>]) -> Result<Self> {
        let r = basis.len();
        let ring = dual_ring(name, r, &[])?;
        let n = ring.ring_size();
        let polys = c
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|x| Poly::constant(n, x.clone())).collect()).collect())
            .collect();
        StructureConstants::new(name, basis, Vec::new(), polys)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    /// Ring `l1..lr, params...` in which constants and dual elements live.
    pub fn ring(&self) -> &Chart {
        &self.ring
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.c[i][j][k]
    }

    pub fn bracket_vector(&self, i: usize, j: usize) -> &[Poly] {
        &self.c[i][j]
    }

    /// The constant as a rational number, if it does not involve parameters.
    pub fn numeric_constant(&self, i: usize, j: usize, k: usize) -> Option<Q> {
        self.c[i][j][k].as_constant()
    }

    pub fn is_parametric(&self) -> bool {
        self.c.iter().flatten().flatten().any(|p| !p.is_constant())
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().flatten().flatten().all(|p| p.is_zero())
    }

    /// Nonzero Jacobi sums `Σ_m c_ijm c_mkl + c_jkm c_mil + c_kim c_mjl`.
    pub fn jacobi_residuals(&self) -> Vec<((usize, usize, usize, usize), Poly)> {
        let r = self.dim();
        let n = self.ring.ring_size();
        let mut out = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                for k in j + 1..r {
                    for l in 0..r {
                        let mut s = Poly::zero(n);
                        for m in 0..r {
                            s = &s + &(&self.c[i][j][m] * &self.c[m][k][l]);
                            s = &s + &(&self.c[j][k][m] * &self.c[m][i][l]);
                            s = &s + &(&self.c[k][i][m] * &self.c[m][j][l]);
                        }
                        if !s.is_zero() {
                            out.push(((i, j, k, l), s));
                        }
                    }
                }
            }
        }
        out
    }

    /// Human-readable nonzero brackets `[e1, e2] = e2`.
    pub fn relations(&self) -> Vec<String> {
        let names = self.ring.ring_names();
        let r = self.dim();
        let mut out = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                let terms: Vec<String> = (0..r)
                    .filter(|&k| !self.c[i][j][k].is_zero())
                    .map(|k| {
                        let p = &self.c[i][j][k];
                        if p.is_one() {
                            self.basis[k].clone()
                        } else if (-p).is_one() {
                            format!("-{}", self.basis[k])
                        } else if p.num_terms() == 1 {
                            format!("{}*{}", poly_to_string(p, &names), self.basis[k])
                        } else {
                            format!("({})*{}", poly_to_string(p, &names), self.basis[k])
                        }
                    })
                    .collect();
                if !terms.is_empty() {
                    out.push(format!("[{}, {}] = {}", self.basis[i], self.basis[j], terms.join(" + ").replace("+ -", "- ")));
                }
            }
        }
        out
    }
}

fn param_poly(name: &str, s: &str, ring: &Chart) -> Result<Poly> {
    let e = parse_expr(s, ring)?;
    if !e.denom().is_one() {
        return Err(Error::Invalid(format!("algebra `{name}`: constant `{s}` is not polynomial")));
    }
    Ok(e.numer().clone())
}

/// Names of the bundled algebras.
pub const BUILTIN_NAMES: [&str; 9] = ["sl2", "su2", "h3", "r3_0p", "r3_m1", "r3_p1", "r3", "r3_lambda", "r3p_lambda"];

/// The nine non-abelian three-dimensional algebras of the classification table.
pub fn builtin(name: &str) -> Result<StructureConstants> {
    let b = ["e1", "e2", "e3"];
    let none = Vec::new;
    let (rels, params): (&[(&str, &str, &str)], Vec<Param>) = match name {
        "sl2" => (&[("e1", "e2", "e2"), ("e1", "e3", "-e3"), ("e3", "e2", "-e1")], none()),
        "su2" => (&[("e1", "e2", "e3"), ("e1", "e3", "-e2"), ("e3", "e2", "-e1")], none()),
        "h3" => (&[("e1", "e2", "e3")], none()),
        "r3_0p" => (&[("e1", "e2", "-e3"), ("e1", "e3", "e2")], none()),
        "r3_m1" => (&[("e1", "e2", "e2"), ("e1", "e3", "-e3")], none()),
        "r3_p1" => (&[("e1", "e2", "e2"), ("e1", "e3", "e3")], none()),
        "r3" => (&[("e1", "e3", "-e1"), ("e3", "e2", "e1 + e2")], none()),
        "r3_lambda" => (
            &[("e1", "e3", "-e1"), ("e3", "e2", "lambda*e2")],
            vec![Param::open_interval("lambda", q(-1, 1), q(1, 1))],
        ),
        "r3p_lambda" => (&[("e1", "e3", "e2 - lambda*e1"), ("e3", "e2", "lambda*e2 + e1")], vec![Param::nonzero("lambda")]),
        _ => {
            return Err(Error::UnknownIdentifier(format!(
                "algebra `{name}` (known: {})",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    StructureConstants::from_relations(name, &b, params, rels)
}

/// Structure constants as rationals; fails on parametric algebras.
pub(crate) fn numeric_table(alg: &StructureConstants) -> Result<Vec<Vec<Vec<Q>>>> {
    let r = alg.dim();
    let mut out = vec![vec![vec![Q::zero(); r]; r]; r];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            for (k, x) in v.iter_mut().enumerate() {
                *x = alg.numeric_constant(i, j, k).ok_or_else(|| {
                    Error::Invalid(format!("algebra `{}` is parametric; specialise its parameters first", alg.name()))
                })?;
            }
        }
    }
    Ok(out)
}
