//! Exterior calculus on a chart.
//!
//! Vector fields are component arrays; k-forms map strictly increasing index
//! tuples to coefficients. All operations are exact.

mod field;
mod form;
mod map;

pub use field::VectorField;
pub use form::{merge_sign, KForm};
pub use map::{CoordinateMap, MapComponent};

use crate::error::{Error, Result};
use crate::exprcore::RationalExpr;

/// Top coefficient of `a∧b` style bookkeeping is shared; divergence lives here.
///
/// Returns the scalar `div` with `L_X vol = div * vol`.
pub fn divergence(x: &VectorField, vol: &KForm) -> Result<RationalExpr> {
    x.chart().ensure_same(vol.chart())?;
    let n = x.chart().dim();
    if vol.degree() != n {
        return Err(Error::Invalid(format!("volume form has degree {} on a {n}-dimensional chart", vol.degree())));
    }
    let c = vol.coefficient(&(0..n).collect::<Vec<_>>());
    if c.is_zero() {
        return Err(Error::Invalid("volume form is zero".into()));
    }
    let l = form::lie_derivative(x, vol);
    let lc = l.coefficient(&(0..n).collect::<Vec<_>>());
    lc.checked_div(&c)
}

pub use field::lie_bracket;
pub use form::{ext_d, interior, lie_derivative, pullback, wedge};
