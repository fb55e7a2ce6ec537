//! Cochains on the dual of a Lie algebra and the Chevalley–Eilenberg
//! differential.
//!
//! Convention: `δ(e^k) = -½ Σ_{i<j} c_ijk e^i∧e^j`, extended as a graded
//! derivation. The factor ½ reproduces the worked 3D computations.

use std::collections::BTreeMap;
use std::fmt;

use super::StructureConstants;
use crate::cartan::merge_sign;
use crate::error::{Error, Result};
use crate::exprcore::{poly_to_string, q, Chart, Poly, Q};

/// An element of `Λ^k g*` with coefficients in the algebra's dual ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain {
    ring: Chart,
    basis: Vec<String>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Poly>,
}

impl Cochain {
    pub fn zero(alg: &StructureConstants, degree: usize) -> Self {
        Cochain { ring: alg.ring().clone(), basis: alg.basis().to_vec(), degree, terms: BTreeMap::new() }
    }

    /// The dual basis element `e^i`.
    pub fn basis_element(alg: &StructureConstants, i: usize) -> Self {
        let mut c = Cochain::zero(alg, 1);
        c.terms.insert(vec![i], Poly::one(alg.ring().ring_size()));
        c
    }

    pub fn ring(&self) -> &Chart {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &[usize]) -> Poly {
        self.terms.get(idx).cloned().unwrap_or_else(|| Poly::zero(self.ring.ring_size()))
    }

    /// Coefficient of `e^1∧…∧e^r` (zero unless the degree is `r`).
    pub fn top_coefficient(&self) -> Poly {
        self.coefficient(&(0..self.basis.len()).collect::<Vec<_>>())
    }

    fn add_term(&mut self, idx: Vec<usize>, c: Poly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(idx.clone()).or_insert_with(|| Poly::zero(c.nvars()));
        let v = &*slot + &c;
        if v.is_zero() {
            self.terms.remove(&idx);
        } else {
            *slot = v;
        }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree, "cochain degrees differ");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, f: &Poly) -> Cochain {
        let mut out = Cochain { terms: BTreeMap::new(), ..self.clone() };
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * f);
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> Cochain {
        self.scale(&Poly::constant(self.ring.ring_size(), c.clone()))
    }

    pub fn wedge(&self, other: &Cochain) -> Cochain {
        let mut out = Cochain { terms: BTreeMap::new(), degree: self.degree + other.degree, ..self.clone() };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((idx, s)) = merge_sign(a, b) {
                    let c = ca * cb;
                    out.add_term(idx, if s < 0 { -&c } else { c });
                }
            }
        }
        out
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.ring_names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let wedge: Vec<String> = idx.iter().map(|&i| format!("{}^*", self.basis[i])).collect();
                format!("({}) {}", poly_to_string(c, &names), wedge.join("∧"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain({self})")
    }
}

/// `Σ λ_i e^i` with polynomial coefficients in the dual ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualElement {
    coeffs: Vec<Poly>,
    ring: Chart,
}

impl DualElement {
    /// The generic element `l1 e^1 + … + lr e^r`.
    pub fn symbolic(alg: &StructureConstants) -> Self {
        let n = alg.ring().ring_size();
        DualElement { coeffs: (0..alg.dim()).map(|i| Poly::var(n, i)).collect(), ring: alg.ring().clone() }
    }

    pub fn numeric(alg: &StructureConstants, values: &[Q]) -> Result<Self> {
        if values.len() != alg.dim() {
            return Err(Error::Invalid(format!("dual element needs {} coefficients, got {}", alg.dim(), values.len())));
        }
        let n = alg.ring().ring_size();
        Ok(DualElement { coeffs: values.iter().map(|v| Poly::constant(n, v.clone())).collect(), ring: alg.ring().clone() })
    }

    pub fn coefficients(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn to_cochain(&self, alg: &StructureConstants) -> Cochain {
        let mut out = Cochain::zero(alg, 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.add_term(vec![i], c.clone());
        }
        out
    }
}

/// `δ(e^k)`.
pub fn ce_delta_basis(alg: &StructureConstants, k: usize) -> Cochain {
    let r = alg.dim();
    let mut out = Cochain::zero(alg, 2);
    let half = q(-1, 2);
    for i in 0..r {
        for j in i + 1..r {
            out.add_term(vec![i, j], alg.constant(i, j, k).scale(&half));
        }
    }
    out
}

/// `δ(μ)` for a dual element.
pub fn ce_delta(alg: &StructureConstants, mu: &DualElement) -> Cochain {
    let mut out = Cochain::zero(alg, 2);
    for (k, c) in mu.coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&ce_delta_basis(alg, k).scale(c));
        }
    }
    out
}

/// The differential on cochains of any degree (graded derivation).
pub fn ce_d(alg: &StructureConstants, a: &Cochain) -> Cochain {
    let deltas: Vec<Cochain> = (0..alg.dim()).map(|k| ce_delta_basis(alg, k)).collect();
    let mut out = Cochain::zero(alg, a.degree + 1);
    for (idx, c) in &a.terms {
        for (m, &k) in idx.iter().enumerate() {
            let mut left = Cochain::zero(alg, m);
            left.terms.insert(idx[..m].to_vec(), c.clone());
            let mut right = Cochain::zero(alg, idx.len() - m - 1);
            right.terms.insert(idx[m + 1..].to_vec(), Poly::one(c.nvars()));
            let term = left.wedge(&deltas[k]).wedge(&right);
            out = out.add(&if m % 2 == 0 { term } else { term.scale_q(&q(-1, 1)) });
        }
    }
    out
}

/// Top coefficient of `ϑ∧(δϑ)^k` for the generic `ϑ`, `dim = 2k+1`.
pub fn contact_polynomial(alg: &StructureConstants) -> Result<Poly> {
    let r = alg.dim();
    if r % 2 == 0 {
        return Err(Error::Invalid(format!("algebra `{}` has even dimension {r}", alg.name())));
    }
    let theta = DualElement::symbolic(alg);
    let th = theta.to_cochain(alg);
    let d = ce_delta(alg, &theta);
    let mut acc = th;
    for _ in 0..r / 2 {
        acc = acc.wedge(&d);
    }
    Ok(acc.top_coefficient())
}

/// The polynomial `P(l1, l2, l3, params)` with `δϑ∧ϑ = P e^1∧e^2∧e^3`.
#[derive(Clone, Debug)]
pub struct ContactCondition {
    pub ring: Chart,
    pub polynomial: Poly,
    /// False when `P ≡ 0`: no left-invariant contact form exists.
    pub exists: bool,
}

impl ContactCondition {
    pub fn polynomial_string(&self) -> String {
        poly_to_string(&self.polynomial, &self.ring.ring_names())
    }
}

pub fn contact_condition_3d(alg: &StructureConstants) -> Result<ContactCondition> {
    if alg.dim() != 3 {
        return Err(Error::Invalid(format!("algebra `{}` has dimension {}, expected 3", alg.name(), alg.dim())));
    }
    let theta = DualElement::symbolic(alg);
    let p = ce_delta(alg, &theta).wedge(&theta.to_cochain(alg)).top_coefficient();
    Ok(ContactCondition { ring: alg.ring().clone(), exists: !p.is_zero(), polynomial: p })
}
