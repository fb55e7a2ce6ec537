//! Projection of a conservative contact Lie system along its Reeb field.
//!
//! The caller supplies the chart split: the kept variables are coordinates on
//! the quotient. The symplectic form is the unique `Ω` with `π*Ω = dη`, and
//! projected Hamiltonians satisfy `i(X̄)Ω = dh̄`.

use super::{classify_contact_system, restrict, ContactClass, VGSystem};
use crate::cartan::{ext_d, interior, pullback, CoordinateMap, KForm, VectorField};
use crate::error::{Error, Result};
use crate::exprcore::{Chart, RationalExpr};

#[derive(Clone, Debug)]
pub struct Projection {
    pub chart: Chart,
    pub map: CoordinateMap,
    pub omega: KForm,
    pub system: VGSystem,
    pub hamiltonians: Vec<RationalExpr>,
    /// `Σ b_α(t) h̄_α` on the quotient chart extended by `t`.
    pub lie_hamiltonian: RationalExpr,
}

pub fn project_conservative(sys: &VGSystem, invariant_vars: &[&str]) -> Result<Projection> {
    let cls = classify_contact_system(sys)?;
    if cls.class != ContactClass::ConservativeContact {
        return Err(Error::Rejected(format!("system `{}` is not a conservative contact system", sys.name)));
    }
    let cs = sys.contact.as_ref().expect("classified");
    let chart = &sys.chart;
    let keep: Vec<usize> = invariant_vars.iter().map(|v| chart.var_index(v)).collect::<Result<_>>()?;
    let reduced = Chart::new(&format!("{}_quot", chart.id()), invariant_vars)?;

    for &i in &keep {
        if !cs.reeb().component(i).is_zero() {
            return Err(Error::Rejected(format!(
                "not projectable in this chart: the Reeb field moves `{}`",
                chart.variables()[i]
            )));
        }
    }

    let mut terms = Vec::new();
    for (idx, c) in cs.deta().terms() {
        let mut pos = Vec::with_capacity(idx.len());
        for i in idx {
            match keep.iter().position(|k| k == i) {
                Some(p) => pos.push(p),
                None => {
                    return Err(Error::Rejected(format!(
                        "not projectable in this chart: dη has a d{} component",
                        chart.variables()[*i]
                    )))
                }
            }
        }
        let (sorted, sign) = sort_with_sign(pos);
        let c = restrict(c, &reduced, "a coefficient of dη")?;
        terms.push((sorted, if sign < 0 { -&c } else { c }));
    }
    let omega = KForm::from_terms(&reduced, 2, terms)?;
    let map = CoordinateMap::projection(chart, &reduced)?;
    if pullback(&map, &omega)? != *cs.deta() {
        return Err(Error::IdentityViolation(format!("π*Ω ≠ dη for Ω = {omega}")));
    }

    let mut fields = Vec::new();
    let mut hs = Vec::new();
    for ((name, x), h) in sys.generator_names.iter().zip(&sys.generators).zip(&cls.hamiltonians) {
        let comps = keep
            .iter()
            .map(|&i| restrict(x.component(i), &reduced, &format!("{name}^{}", chart.variables()[i])))
            .collect::<Result<Vec<_>>>()?;
        let xb = VectorField::new(&reduced, comps)?;
        let hb = restrict(h, &reduced, &format!("h_{name}"))?;
        let lhs = interior(&xb, &omega)?;
        let dh = ext_d(&KForm::function(hb.clone()));
        if lhs != dh {
            return Err(Error::IdentityViolation(format!("i({name})Ω = {lhs} but dh = {dh}")));
        }
        fields.push((name.clone(), xb));
        hs.push(hb);
    }
    let system = VGSystem::new(&format!("{}_quot", sys.name), &reduced, fields, sys.coefficients.clone())?;
    let ext = reduced.extend(&format!("{}_t", reduced.id()), &["t".to_string()], Vec::new())?;
    let mut k = RationalExpr::zero(&ext);
    for (h, b) in hs.iter().zip(&sys.coefficients) {
        k = &k + &(&h.embed(&ext)? * &b.embed(&ext)?);
    }
    Ok(Projection { chart: reduced, map, omega, system, hamiltonians: hs, lie_hamiltonian: k })
}

fn sort_with_sign(mut v: Vec<usize>) -> (Vec<usize>, i32) {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (v, sign)
}
