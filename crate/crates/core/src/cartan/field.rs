use std::fmt;

use crate::error::{Error, Result};
use crate::exprcore::{parse_expr, Chart, RationalExpr, Q};

/// A vector field: one component per chart variable.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: Chart,
    components: Vec<RationalExpr>,
}

impl VectorField {
    pub fn new(chart: &Chart, components: Vec<RationalExpr>) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::Invalid(format!(
                "vector field has {} components on a {}-dimensional chart",
                components.len(),
                chart.dim()
            )));
        }
        for c in &components {
            chart.ensure_same(c.chart())?;
        }
        Ok(VectorField { chart: chart.clone(), components })
    }

    pub fn parse<S: AsRef<str>>(chart: &Chart, components: &[S]) -> Result<Self> {
        let comps = components.iter().map(|s| parse_expr(s.as_ref(), chart)).collect::<Result<Vec<_>>>()?;
        VectorField::new(chart, comps)
    }

    pub fn zero(chart: &Chart) -> Self {
        VectorField { chart: chart.clone(), components: vec![RationalExpr::zero(chart); chart.dim()] }
    }

    /// The coordinate field for variable `i`.
    pub fn coordinate(chart: &Chart, i: usize) -> Self {
        let mut v = Self::zero(chart);
        v.components[i] = RationalExpr::one(chart);
        v
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components(&self) -> &[RationalExpr] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &RationalExpr {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &RationalExpr) -> RationalExpr {
        let mut acc = RationalExpr::zero(&self.chart);
        for (i, xi) in self.components.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let d = f.partial_idx(i);
            if !d.is_zero() {
                acc = &acc + &(xi * &d);
            }
        }
        acc
    }

    pub fn scale(&self, f: &RationalExpr) -> Self {
        VectorField { chart: self.chart.clone(), components: self.components.iter().map(|c| c * f).collect() }
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        VectorField { chart: self.chart.clone(), components: self.components.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.chart.same(&other.chart));
        VectorField {
            chart: self.chart.clone(),
            components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.chart.same(&other.chart));
        VectorField {
            chart: self.chart.clone(),
            components: self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn embed(&self, target: &Chart) -> Result<Self> {
        let mut comps = vec![RationalExpr::zero(target); target.dim()];
        for (i, c) in self.components.iter().enumerate() {
            let j = target.var_index(&self.chart.variables()[i])?;
            comps[j] = c.embed(target)?;
        }
        Ok(VectorField { chart: target.clone(), components: comps })
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.components.iter().map(|c| c.to_string()).collect()
    }
}

/// `[X, Y]^i = X(Y^i) - Y(X^i)`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    assert!(x.chart.same(&y.chart), "lie_bracket on different charts");
    let components = (0..x.chart.dim()).map(|i| &x.apply(&y.components[i]) - &y.apply(&x.components[i])).collect();
    VectorField { chart: x.chart.clone(), components }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, v) in self.components.iter().zip(self.chart.variables()) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*d/d{v}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField[{self}]")
    }
}
