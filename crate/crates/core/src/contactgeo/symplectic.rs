//! Symplectification `ω = e^{-s}(dη + η∧ds)` on `R × M`.

use super::ContactStructure;
use crate::cartan::{ext_d, wedge, KForm};
use crate::error::{Error, Result};
use crate::exprcore::{q, Chart, ExpAtom, RationalExpr};

/// The extended chart, its exponential atom and the closed nondegenerate form.
#[derive(Clone, Debug)]
pub struct Symplectification {
    pub chart: Chart,
    pub variable: String,
    pub atom: String,
    pub omega: KForm,
    /// Top coefficient of `ω^{n+1}` divided by `e^{-(n+1)s}` times the
    /// coefficient of `η∧(dη)^n`; a nonzero rational constant.
    pub top_ratio: RationalExpr,
}

pub(super) fn symplectify(cs: &ContactStructure, name: &str) -> Result<Symplectification> {
    let base = cs.chart();
    if base.ring_index(name).is_some() {
        return Err(Error::Invalid(format!("symplectification variable `{name}` already exists on chart `{}`", base.id())));
    }
    let atom = format!("exp_neg_{name}");
    if base.ring_index(&atom).is_some() {
        return Err(Error::Invalid(format!("atom name `{atom}` already exists on chart `{}`", base.id())));
    }
    let chart = base.extend(
        &format!("{}_symp", base.id()),
        &[name.to_string()],
        vec![ExpAtom::new(atom.clone(), name, q(-1, 1))],
    )?;
    let s = chart.var_index(name)?;
    let e = RationalExpr::var(&chart, &atom)?;
    let eta = cs.eta().embed(&chart)?;
    let deta = cs.deta().embed(&chart)?;
    let mut ds_coeffs = vec![RationalExpr::zero(&chart); chart.dim()];
    ds_coeffs[s] = RationalExpr::one(&chart);
    let ds = KForm::one_form(&chart, ds_coeffs)?;
    let omega = deta.add(&wedge(&eta, &ds)).scale(&e);

    if !ext_d(&omega).is_zero() {
        return Err(Error::IdentityViolation(format!("dω ≠ 0 for ω = {omega}")));
    }
    let n = cs.n();
    let mut power = omega.clone();
    for _ in 0..n {
        power = wedge(&power, &omega);
    }
    let top = power.coefficient(&(0..chart.dim()).collect::<Vec<_>>());
    if top.is_zero() {
        return Err(Error::IdentityViolation("ω^(n+1) vanishes identically".into()));
    }
    let reference = &cs.volume_coefficient().embed(&chart)? * &e.pow(n as u32 + 1);
    let top_ratio = &top / &reference;
    if !top_ratio.is_constant() {
        return Err(Error::IdentityViolation(format!("ω^(n+1) / (e^(-(n+1)s) Ω_η) = {top_ratio} is not constant")));
    }
    Ok(Symplectification { chart, variable: name.to_string(), atom, omega, top_ratio })
}
