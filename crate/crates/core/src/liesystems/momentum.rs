//! Contact momentum maps of η-preserving actions and reduction to a level set
//! of the momentum map in an adapted chart.
//!
//! For fundamental fields `ξ_i` with `ℒ_ξ η = 0` the components are
//! `J^i = i(ξ_i) η`. The map `ξ ↦ ξ_M` is an anti-morphism for left actions,
//! so the bracket relation `{J_i, J_j} = s Σ c_ijk J_k` is checked for both
//! signs and the sign found is recorded.

use num_traits::Zero;

use super::{restrict, structure_of, VGSystem};
use crate::cartan::{ext_d, interior, lie_derivative, pullback, CoordinateMap, KForm, MapComponent, VectorField};
use crate::contactgeo::{check_contact, ContactStructure};
use crate::error::{Error, Result};
use crate::exprcore::{Chart, RationalExpr, Q};
use crate::liealgebra::StructureConstants;

#[derive(Clone, Debug)]
pub struct MomentumMap {
    pub contact: ContactStructure,
    pub names: Vec<String>,
    pub frame: Vec<VectorField>,
    pub algebra: StructureConstants,
    pub components: Vec<RationalExpr>,
    /// `s` in `{J_i, J_j} = s Σ c_ijk J_k`.
    pub morphism_sign: i8,
}

pub fn momentum_map(
    contact: &ContactStructure,
    frame: &[(String, VectorField)],
    algebra: Option<&StructureConstants>,
) -> Result<MomentumMap> {
    if frame.is_empty() {
        return Err(Error::Invalid("empty frame".into()));
    }
    let eta = contact.eta();
    let mut comps = Vec::new();
    for (name, xi) in frame {
        contact.chart().ensure_same(xi.chart())?;
        let l = lie_derivative(xi, eta);
        if !l.is_zero() {
            return Err(Error::Rejected(format!("{name} does not preserve η: ℒη = {l}")));
        }
        let j = interior(xi, eta)?.as_function();
        if !contact.reeb_derivative(&j).is_zero() {
            return Err(Error::IdentityViolation(format!("R J_{name} ≠ 0")));
        }
        let dj = ext_d(&KForm::function(j.clone()));
        if dj != interior(xi, contact.deta())?.neg() {
            return Err(Error::IdentityViolation(format!("dJ_{name} ≠ -i({name})dη")));
        }
        comps.push(j);
    }
    let (names, fields): (Vec<String>, Vec<VectorField>) = frame.iter().cloned().unzip();
    let algebra = match algebra {
        Some(a) => a.clone(),
        None => structure_of(&names, &fields)?,
    };
    if algebra.dim() != fields.len() {
        return Err(Error::Invalid(format!("{} frame fields against an algebra of dimension {}", fields.len(), algebra.dim())));
    }
    let r = fields.len();
    let mut plus = true;
    let mut minus = true;
    for i in 0..r {
        for j in i + 1..r {
            let br = contact.bracket(&comps[i], &comps[j])?;
            let mut rhs = RationalExpr::zero(contact.chart());
            for (k, jk) in comps.iter().enumerate() {
                let c = algebra.numeric_constant(i, j, k).ok_or_else(|| Error::Invalid("parametric algebra".into()))?;
                if !c.is_zero() {
                    rhs = &rhs + &jk.scale(&c);
                }
            }
            plus &= br == rhs;
            minus &= br == -&rhs;
        }
    }
    let morphism_sign = match (plus, minus) {
        (true, _) => 1,
        (false, true) => -1,
        (false, false) => {
            return Err(Error::IdentityViolation(
                "momentum components are neither a morphism nor an anti-morphism of the algebra".into(),
            ))
        }
    };
    Ok(MomentumMap { contact: contact.clone(), names, frame: fields, algebra, components: comps, morphism_sign })
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub chart: Chart,
    /// Inclusion of the level set into the original chart.
    pub inclusion: CoordinateMap,
    pub contact: ContactStructure,
    pub system: Option<VGSystem>,
    /// Hamiltonians of the reduced generators, computed on the reduced structure.
    pub hamiltonians: Vec<RationalExpr>,
    /// Original Hamiltonians restricted to the level set.
    pub restricted_hamiltonians: Vec<RationalExpr>,
    pub notes: Vec<String>,
}

/// Reduce to `J^{-1}(μ)` when every component is either constant or affine in
/// one of `fixed_vars`, with a coefficient free of the fixed variables.
pub fn reduce_level_set(
    mm: &MomentumMap,
    mu: &[Q],
    fixed_vars: &[&str],
    system: Option<&VGSystem>,
) -> Result<Reduction> {
    let chart = mm.contact.chart();
    if mu.len() != mm.components.len() {
        return Err(Error::Invalid(format!("μ has {} entries for {} components", mu.len(), mm.components.len())));
    }
    let fixed: Vec<usize> = fixed_vars.iter().map(|v| chart.var_index(v)).collect::<Result<_>>()?;
    let kept: Vec<String> =
        chart.variables().iter().enumerate().filter(|(i, _)| !fixed.contains(i)).map(|(_, v)| v.clone()).collect();
    let reduced = Chart::new(&format!("{}_red", chart.id()), &kept)?;
    let pattern = |why: String| Error::Rejected(format!("reduction pattern not applicable: {why}"));

    let mut solved: Vec<Option<RationalExpr>> = vec![None; chart.dim()];
    for (i, (j, m)) in mm.components.iter().zip(mu).enumerate() {
        if let Some(c) = j.as_constant() {
            if &c != m {
                return Err(Error::Rejected(format!("level set is empty: J_{} = {c} ≠ {m}", mm.names[i])));
            }
            continue;
        }
        let var = fixed.iter().copied().find(|&v| {
            solved[v].is_none() && !j.independent_of(v) && fixed.iter().all(|&w| j.partial_idx(v).independent_of(w))
        });
        let v = var.ok_or_else(|| pattern(format!("J_{} = {j} is not affine in a free fixed variable", mm.names[i])))?;
        let b = j.partial_idx(v);
        let x = RationalExpr::var(chart, &chart.variables()[v])?;
        let a = j - &(&b * &x);
        if !fixed.iter().all(|&w| a.independent_of(w)) {
            return Err(pattern(format!("J_{} couples several fixed variables", mm.names[i])));
        }
        let s = (&RationalExpr::constant(chart, m.clone()) - &a).checked_div(&b)?;
        solved[v] = Some(restrict(&s, &reduced, &format!("the solved value of {}", chart.variables()[v]))?);
    }
    if let Some(&v) = fixed.iter().find(|&&v| solved[v].is_none()) {
        return Err(pattern(format!("no component determines {}", chart.variables()[v])));
    }

    let images = chart
        .variables()
        .iter()
        .enumerate()
        .map(|(i, name)| match &solved[i] {
            Some(s) => Ok(MapComponent::Rational(s.clone())),
            None => RationalExpr::var(&reduced, name).map(MapComponent::Rational),
        })
        .collect::<Result<Vec<_>>>()?;
    let inclusion = CoordinateMap::new(&reduced, chart, images)?;
    let eta = pullback(&inclusion, mm.contact.eta())?;
    let contact = check_contact(&reduced, &eta)?;

    let mut notes = Vec::new();
    let mut out_system = None;
    let mut hams = Vec::new();
    let mut restricted = Vec::new();
    if let Some(sys) = system {
        chart.ensure_same(&sys.chart)?;
        let declared = match &sys.hamiltonians {
            Some(h) => h.clone(),
            None => sys.generators.iter().map(|x| mm.contact.hamiltonian_of(x)).collect::<Result<_>>()?,
        };
        let mut fields = Vec::new();
        let mut coeffs = Vec::new();
        for (((name, x), b), h) in sys.generator_names.iter().zip(&sys.generators).zip(&sys.coefficients).zip(&declared) {
            for (k, j) in mm.components.iter().enumerate() {
                if !inclusion.compose(&x.apply(j))?.is_zero() {
                    notes.push(format!("{name} is transverse to the level set of J_{}; only its tangent part is kept", mm.names[k]));
                }
            }
            let comps = kept
                .iter()
                .map(|v| inclusion.compose(x.component(chart.var_index(v).expect("kept"))))
                .collect::<Result<Vec<_>>>()?;
            let xr = VectorField::new(&reduced, comps)?;
            if xr.is_zero() {
                notes.push(format!("{name} projects to zero and is dropped"));
                continue;
            }
            let hr = contact.hamiltonian_of(&xr)?;
            let h_restricted = inclusion.compose(h)?;
            if hr != h_restricted {
                notes.push(format!("reduced Hamiltonian of {name} is {hr}, restriction of h is {h_restricted}"));
            }
            fields.push((name.clone(), xr));
            coeffs.push(b.clone());
            hams.push(hr);
            restricted.push(h_restricted);
        }
        if fields.is_empty() {
            notes.push("every generator projects to zero".into());
        } else {
            let red = VGSystem::new(&format!("{}_red", sys.name), &reduced, fields, coeffs)?;
            out_system = Some(red.with_contact(contact.clone(), Some(hams.clone()))?);
        }
    }
    Ok(Reduction {
        chart: reduced,
        inclusion,
        contact,
        system: out_system,
        hamiltonians: hams,
        restricted_hamiltonians: restricted,
        notes,
    })
}
