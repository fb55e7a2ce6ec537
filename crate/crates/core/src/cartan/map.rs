use num_traits::{Signed, ToPrimitive};

use super::field::VectorField;
use super::form::KForm;
use crate::error::{Error, Result};
use crate::exprcore::{Chart, RationalExpr};

/// Image of one target coordinate.
///
/// `Log(g)` stands for the coordinate `ln g`; it is used only through its
/// differential `dg/g` and through target atoms `exp(c * ln g) = g^c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapComponent {
    Rational(RationalExpr),
    Log(RationalExpr),
}

impl MapComponent {
    pub fn expr(&self) -> &RationalExpr {
        match self {
            MapComponent::Rational(e) | MapComponent::Log(e) => e,
        }
    }
}

/// A coordinate map `source -> target`, one component per target variable.
#[derive(Clone, Debug)]
pub struct CoordinateMap {
    source: Chart,
    target: Chart,
    components: Vec<MapComponent>,
}

impl CoordinateMap {
    pub fn new(source: &Chart, target: &Chart, components: Vec<MapComponent>) -> Result<Self> {
        if components.len() != target.dim() {
            return Err(Error::Invalid(format!(
                "coordinate map has {} components for a {}-dimensional target",
                components.len(),
                target.dim()
            )));
        }
        for c in &components {
            source.ensure_same(c.expr().chart())?;
            if let MapComponent::Log(g) = c {
                if g.is_zero() {
                    return Err(Error::Invalid("logarithm of zero".into()));
                }
            }
        }
        Ok(CoordinateMap { source: source.clone(), target: target.clone(), components })
    }

    /// Projection onto the target variables, which must all be source variables.
    pub fn projection(source: &Chart, target: &Chart) -> Result<Self> {
        let comps = target
            .variables()
            .iter()
            .map(|v| RationalExpr::var(source, v).map(MapComponent::Rational))
            .collect::<Result<Vec<_>>>()?;
        CoordinateMap::new(source, target, comps)
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn components(&self) -> &[MapComponent] {
        &self.components
    }

    /// `d(m^j)` on the source chart.
    pub fn differential(&self, j: usize) -> Result<KForm> {
        let (g, log) = match &self.components[j] {
            MapComponent::Rational(g) => (g, false),
            MapComponent::Log(g) => (g, true),
        };
        let mut coeffs: Vec<RationalExpr> = (0..self.source.dim()).map(|i| g.partial_idx(i)).collect();
        if log {
            coeffs = coeffs.iter().map(|c| c.checked_div(g)).collect::<Result<_>>()?;
        }
        KForm::one_form(&self.source, coeffs)
    }

    /// `f ∘ m` for `f` on the target chart.
    pub fn compose(&self, f: &RationalExpr) -> Result<RationalExpr> {
        self.target.ensure_same(f.chart())?;
        let support = f.support();
        let tdim = self.target.dim();
        let mut images = Vec::with_capacity(self.target.ring_size());
        for (j, c) in self.components.iter().enumerate() {
            match c {
                MapComponent::Rational(g) => images.push(g.clone()),
                MapComponent::Log(_) if support[j] => {
                    return Err(Error::Rejected(format!(
                        "`{}` enters as a logarithm and cannot be substituted rationally",
                        self.target.variables()[j]
                    )))
                }
                MapComponent::Log(_) => images.push(RationalExpr::zero(&self.source)),
            }
        }
        for (k, atom) in self.target.atoms().iter().enumerate() {
            let base = self.target.var_index(&atom.base)?;
            let used = support[tdim + k];
            match &self.components[base] {
                MapComponent::Log(g) if atom.scale.is_integer() => {
                    let e = atom.scale.numer().abs().to_u32().ok_or_else(|| Error::Invalid("atom scale too large".into()))?;
                    let p = g.pow(e);
                    images.push(if atom.scale.is_negative() { p.recip()? } else { p });
                }
                _ if used => {
                    return Err(Error::Rejected(format!("atom `{}` has no rational image under this map", atom.name)))
                }
                _ => images.push(RationalExpr::one(&self.source)),
            }
        }
        f.compose(&self.source, &images)
    }

    /// Whether `x` on the source and `y` on the target are m-related:
    /// `x(m^j) = y^j ∘ m` for every target coordinate.
    pub fn related(&self, x: &VectorField, y: &VectorField) -> Result<bool> {
        for j in 0..self.target.dim() {
            let lhs = self.differential(j)?;
            let lhs = super::interior(x, &lhs)?.as_function();
            if lhs != self.compose(y.component(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True if every component is the same-named source variable.
    pub fn is_identity_on_names(&self) -> bool {
        self.components.iter().zip(self.target.variables()).all(|(c, v)| match c {
            MapComponent::Rational(g) => RationalExpr::var(&self.source, v).map_or(false, |e| e == *g),
            _ => false,
        })
    }
}
