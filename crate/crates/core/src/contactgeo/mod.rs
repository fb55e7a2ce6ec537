//! Contact structures: validation, Reeb field, the flat/sharp isomorphism,
//! Hamiltonian vector fields, the contact bracket and symplectification.
//!
//! Everything is exact. A structure is valid on the complement of its
//! [`ContactLocus`]; downstream identities are checked as rational-function
//! identities and so hold wherever both sides are defined.

mod symplectic;

use std::sync::Arc;

pub use symplectic::Symplectification;

use crate::cartan::{ext_d, interior, lie_derivative, wedge, KForm, VectorField};
use crate::error::{Error, Result};
use crate::exprcore::linalg::{self, Matrix};
use crate::exprcore::{Chart, Poly, RationalExpr};

/// Where `η∧(dη)^n` fails to be a volume form: zeros of its coefficient's
/// numerator and of its denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactLocus {
    pub vanishing: Poly,
    pub poles: Poly,
}

impl ContactLocus {
    /// True when the coefficient is a nonzero constant.
    pub fn is_empty(&self) -> bool {
        self.vanishing.is_constant() && self.poles.is_constant()
    }
}

/// `η = ds - Σ p_i dq^i` up to the order of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxLayout {
    pub s: usize,
    /// `(q^i, p_i)` index pairs.
    pub pairs: Vec<(usize, usize)>,
}

struct Inner {
    chart: Chart,
    eta: KForm,
    deta: KForm,
    n: usize,
    flat: Matrix,
    sharp: Matrix,
    reeb: VectorField,
    volume: KForm,
    locus: ContactLocus,
    darboux: Option<DarbouxLayout>,
}

/// A chart with a validated contact one-form; caches are computed eagerly.
#[derive(Clone)]
pub struct ContactStructure(Arc<Inner>);

impl std::fmt::Debug for ContactStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ContactStructure[{} on {}]", self.0.eta, self.0.chart.id())
    }
}

/// `h` together with its field `X_h` and `R h`.
#[derive(Clone, Debug)]
pub struct HamiltonianPair {
    pub structure: ContactStructure,
    pub h: RationalExpr,
    pub field: VectorField,
    pub reeb_derivative: RationalExpr,
}

pub fn check_contact(chart: &Chart, eta: &KForm) -> Result<ContactStructure> {
    ContactStructure::new(chart, eta)
}

impl ContactStructure {
    pub fn new(chart: &Chart, eta: &KForm) -> Result<Self> {
        chart.ensure_same(eta.chart())?;
        if eta.degree() != 1 {
            return Err(Error::Invalid(format!("contact form must have degree 1, got {}", eta.degree())));
        }
        let dim = chart.dim();
        if dim % 2 == 0 {
            return Err(Error::NotContact(format!("chart `{}` has even dimension {dim}", chart.id())));
        }
        let n = (dim - 1) / 2;
        let deta = ext_d(eta);
        let mut volume = eta.clone();
        for _ in 0..n {
            volume = wedge(&volume, &deta);
        }
        let top: Vec<usize> = (0..dim).collect();
        let coeff = volume.coefficient(&top);
        if coeff.is_zero() {
            return Err(Error::NotContact(format!("η∧(dη)^{n} vanishes identically for η = {eta}")));
        }
        let locus = ContactLocus {
            vanishing: coeff.numer().integer_normalize().1,
            poles: coeff.denom().clone(),
        };

        let e = eta.one_form_coeffs();
        let mut flat: Matrix = vec![vec![RationalExpr::zero(chart); dim]; dim];
        for j in 0..dim {
            for i in 0..dim {
                let omega = if i < j {
                    deta.coefficient(&[i, j])
                } else if j < i {
                    -deta.coefficient(&[j, i])
                } else {
                    RationalExpr::zero(chart)
                };
                flat[j][i] = &omega + &(&e[i] * &e[j]);
            }
        }
        let sharp = linalg::inverse(chart, &flat).map_err(|_| {
            Error::Singular(format!("flat map of {eta} is not invertible; locus {}", locus.vanishing))
        })?;
        let reeb = VectorField::new(chart, linalg::mat_vec(&sharp, &e))?;
        if !interior(&reeb, &deta)?.is_zero() || !interior(&reeb, eta)?.as_function().is_one() {
            return Err(Error::IdentityViolation(format!("Reeb field {reeb} fails i(R)dη = 0, i(R)η = 1")));
        }
        let darboux = detect_darboux(chart, eta);
        Ok(ContactStructure(Arc::new(Inner { chart: chart.clone(), eta: eta.clone(), deta, n, flat, sharp, reeb, volume, locus, darboux })))
    }

    pub fn chart(&self) -> &Chart {
        &self.0.chart
    }

    pub fn eta(&self) -> &KForm {
        &self.0.eta
    }

    pub fn deta(&self) -> &KForm {
        &self.0.deta
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn reeb(&self) -> &VectorField {
        &self.0.reeb
    }

    /// `η∧(dη)^n`.
    pub fn volume(&self) -> &KForm {
        &self.0.volume
    }

    pub fn volume_coefficient(&self) -> RationalExpr {
        self.0.volume.coefficient(&(0..self.0.chart.dim()).collect::<Vec<_>>())
    }

    pub fn locus(&self) -> &ContactLocus {
        &self.0.locus
    }

    pub fn darboux(&self) -> Option<&DarbouxLayout> {
        self.0.darboux.as_ref()
    }

    pub fn same(&self, other: &ContactStructure) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.chart.same(&other.0.chart) && self.0.eta == other.0.eta)
    }

    /// `♭(v) = i(v)dη + (i(v)η)η`.
    pub fn flat(&self, v: &VectorField) -> Result<KForm> {
        self.0.chart.ensure_same(v.chart())?;
        KForm::one_form(&self.0.chart, linalg::mat_vec(&self.0.flat, v.components()))
    }

    /// Inverse of [`flat`](Self::flat).
    pub fn sharp(&self, a: &KForm) -> Result<VectorField> {
        self.0.chart.ensure_same(a.chart())?;
        if a.degree() != 1 {
            return Err(Error::Invalid("sharp expects a one-form".into()));
        }
        VectorField::new(&self.0.chart, linalg::mat_vec(&self.0.sharp, &a.one_form_coeffs()))
    }

    /// `R f`.
    pub fn reeb_derivative(&self, f: &RationalExpr) -> RationalExpr {
        self.0.reeb.apply(f)
    }

    /// Good functions are first integrals of the Reeb field.
    pub fn is_good(&self, f: &RationalExpr) -> bool {
        self.reeb_derivative(f).is_zero()
    }

    /// `X_h` from `♭(X_h) = dh - (Rh + h)η`, without the cross-checks.
    pub fn field_of(&self, h: &RationalExpr) -> Result<VectorField> {
        self.0.chart.ensure_same(h.chart())?;
        let rh = self.reeb_derivative(h);
        let k = &rh + h;
        let e = self.0.eta.one_form_coeffs();
        let rhs: Vec<RationalExpr> = (0..self.0.chart.dim()).map(|j| &h.partial_idx(j) - &(&k * &e[j])).collect();
        VectorField::new(&self.0.chart, linalg::mat_vec(&self.0.sharp, &rhs))
    }

    /// `X_h` with all three defining conditions verified, and the coordinate
    /// formula compared when the chart is Darboux.
    pub fn hamiltonian_field(&self, h: &RationalExpr) -> Result<HamiltonianPair> {
        let x = self.field_of(h)?;
        let rh = self.reeb_derivative(h);
        let eta = &self.0.eta;
        let minus_h = -h;
        // (1) i(X)dη = dh - (Rh)η, i(X)η = -h
        let dh = ext_d(&KForm::function(h.clone()));
        let c1 = interior(&x, &self.0.deta)?;
        if c1 != dh.sub(&eta.scale(&rh)) || interior(&x, eta)?.as_function() != minus_h {
            return Err(Error::IdentityViolation(format!("condition (1) fails for h = {h}")));
        }
        // (2) L_X η = -(Rh)η
        if lie_derivative(&x, eta) != eta.scale(&-&rh) {
            return Err(Error::IdentityViolation(format!("condition (2) fails for h = {h}")));
        }
        // (3) ♭(X) = dh - (Rh + h)η
        if self.flat(&x)? != dh.sub(&eta.scale(&(&rh + h))) {
            return Err(Error::IdentityViolation(format!("condition (3) fails for h = {h}")));
        }
        if let Some(layout) = &self.0.darboux {
            let formula = darboux_field(&self.0.chart, layout, h);
            if formula != x {
                return Err(Error::IdentityViolation(format!(
                    "linear solve {x} disagrees with the Darboux formula {formula} for h = {h}"
                )));
            }
        }
        Ok(HamiltonianPair { structure: self.clone(), h: h.clone(), field: x, reeb_derivative: rh })
    }

    /// `h = -i(X)η`, accepted only if `X_h` reproduces `X`.
    pub fn hamiltonian_of(&self, x: &VectorField) -> Result<RationalExpr> {
        self.0.chart.ensure_same(x.chart())?;
        let h = -&interior(x, &self.0.eta)?.as_function();
        let xh = self.field_of(&h)?;
        if xh != *x {
            return Err(Error::NotHamiltonian(format!("X - X_h = {} for h = {h}", x.sub(&xh))));
        }
        Ok(h)
    }

    /// `{f, g} = X_f g + g R f`.
    pub fn bracket(&self, f: &RationalExpr, g: &RationalExpr) -> Result<RationalExpr> {
        self.0.chart.ensure_same(g.chart())?;
        let xf = self.field_of(f)?;
        Ok(&xf.apply(g) + &(g * &self.reeb_derivative(f)))
    }

    /// `X_h h`, checked against `-(Rh) h`.
    pub fn energy_evolution(&self, pair: &HamiltonianPair) -> Result<RationalExpr> {
        let lhs = pair.field.apply(&pair.h);
        let rhs = -&(&pair.reeb_derivative * &pair.h);
        if lhs != rhs {
            return Err(Error::IdentityViolation(format!("X_h h = {lhs} but -(Rh)h = {rhs}")));
        }
        Ok(lhs)
    }

    /// Divergence of `x` with respect to `η∧(dη)^n`.
    pub fn liouville_factor(&self, x: &VectorField) -> Result<RationalExpr> {
        crate::cartan::divergence(x, &self.0.volume)
    }

    pub fn symplectify(&self, name: Option<&str>) -> Result<Symplectification> {
        symplectic::symplectify(self, name.unwrap_or("s_ext"))
    }
}

pub fn contact_bracket(structure: &ContactStructure, f: &RationalExpr, g: &RationalExpr) -> Result<RationalExpr> {
    structure.bracket(f, g)
}

pub fn hamiltonian_field(structure: &ContactStructure, h: &RationalExpr) -> Result<HamiltonianPair> {
    structure.hamiltonian_field(h)
}

pub fn hamiltonian_of(structure: &ContactStructure, x: &VectorField) -> Result<RationalExpr> {
    structure.hamiltonian_of(x)
}

pub fn energy_evolution(pair: &HamiltonianPair) -> Result<RationalExpr> {
    pair.structure.energy_evolution(pair)
}

pub fn is_good(structure: &ContactStructure, f: &RationalExpr) -> bool {
    structure.is_good(f)
}

fn detect_darboux(chart: &Chart, eta: &KForm) -> Option<DarbouxLayout> {
    let dim = chart.dim();
    let mut s = None;
    let mut used = vec![false; dim];
    let mut pairs = Vec::new();
    for (idx, c) in eta.terms() {
        let q = idx[0];
        if c.is_one() {
            if s.replace(q).is_some() {
                return None;
            }
            used[q] = true;
            continue;
        }
        let neg = -c;
        if !neg.denom().is_one() || neg.numer().num_terms() != 1 {
            return None;
        }
        let (m, coeff) = neg.numer().leading()?;
        if !num_traits::One::is_one(coeff) || m.degree() != 1 {
            return None;
        }
        let p = m.exps().iter().position(|&e| e == 1)?;
        if p >= dim || used[q] || used[p] || p == q {
            return None;
        }
        used[q] = true;
        used[p] = true;
        pairs.push((q, p));
    }
    let s = s?;
    if used.iter().all(|&u| u) && 2 * pairs.len() + 1 == dim {
        Some(DarbouxLayout { s, pairs })
    } else {
        None
    }
}

/// `X_h = h_{p_i} ∂_{q^i} - (h_{q^i} + p_i h_s) ∂_{p_i} + (p_i h_{p_i} - h) ∂_s`.
pub fn darboux_field(chart: &Chart, layout: &DarbouxLayout, h: &RationalExpr) -> VectorField {
    let mut comps = vec![RationalExpr::zero(chart); chart.dim()];
    let hs = h.partial_idx(layout.s);
    let mut zdot = -h;
    for &(q, p) in &layout.pairs {
        let pv = RationalExpr::from_poly(chart, Poly::var(chart.ring_size(), p));
        let hp = h.partial_idx(p);
        comps[q] = hp.clone();
        comps[p] = -&(&h.partial_idx(q) + &(&pv * &hs));
        zdot = &zdot + &(&pv * &hp);
    }
    comps[layout.s] = zdot;
    VectorField::new(chart, comps).expect("component count matches chart")
}
