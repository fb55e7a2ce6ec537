//! Diagonal prolongations and the coalgebra route to superposition rules.
//!
//! The product `M^k` gets the chart with every variable suffixed by its copy
//! index (`x_1, ..., x_k`). Functions prolong by summing over copies, fields
//! and forms by repeating their components on every block. The product Jacobi
//! structure acts blockwise, so no contact form on `M^k` is ever needed.

mod integrals;

pub use integrals::{
    emit_superposition_system, expected_integral_count, generate_integrals, rank_check, FirstIntegralSet,
    RankReport, SuperpositionSystem,
};

use serde::Serialize;

use crate::cartan::{KForm, VectorField};
use crate::contactgeo::ContactStructure;
use crate::error::{Error, Result};
use crate::exprcore::{Chart, ExpAtom, Poly, RationalExpr};

/// The chart of `M^k` together with the copy embeddings.
#[derive(Clone, Debug)]
pub struct Prolongation {
    base: Chart,
    copies: usize,
    product: Chart,
}

impl Prolongation {
    pub fn new(base: &Chart, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::Invalid("number of copies must be at least 1".into()));
        }
        let mut vars = Vec::with_capacity(base.dim() * copies);
        let mut atoms = Vec::with_capacity(base.atoms().len() * copies);
        for c in 1..=copies {
            vars.extend(base.variables().iter().map(|v| format!("{v}_{c}")));
        }
        for c in 1..=copies {
            atoms.extend(
                base.atoms().iter().map(|a| ExpAtom::new(format!("{}_{c}", a.name), format!("{}_{c}", a.base), a.scale.clone())),
            );
        }
        let product = Chart::with_atoms(&format!("{}^{copies}", base.id()), &vars, atoms)?;
        Ok(Prolongation { base: base.clone(), copies, product })
    }

    pub fn base(&self) -> &Chart {
        &self.base
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn product(&self) -> &Chart {
        &self.product
    }

    /// Name of base variable `var` in copy `copy` (1-based).
    pub fn copy_var(&self, var: &str, copy: usize) -> String {
        format!("{var}_{copy}")
    }

    /// Variable names of one copy, in base order.
    pub fn block_variables(&self, copy: usize) -> Vec<String> {
        self.base.variables().iter().map(|v| self.copy_var(v, copy)).collect()
    }

    /// Index in the product chart of base variable `j` in copy `copy`.
    pub fn index(&self, j: usize, copy: usize) -> usize {
        (copy - 1) * self.base.dim() + j
    }

    /// `f ∘ pr_copy`: a base function read on one copy.
    pub fn lift(&self, f: &RationalExpr, copy: usize) -> Result<RationalExpr> {
        self.base.ensure_same(f.chart())?;
        let n = self.base.dim();
        let na = self.base.atoms().len();
        let size = self.product.ring_size();
        let gen = |i: usize| RationalExpr::from_poly(&self.product, Poly::var(size, i));
        let mut images: Vec<RationalExpr> = (0..n).map(|j| gen(self.index(j, copy))).collect();
        images.extend((0..na).map(|a| gen(self.copies * n + (copy - 1) * na + a)));
        f.compose(&self.product, &images)
    }

    /// `f^{[k]} = Σ_c f(x_c)`.
    pub fn function(&self, f: &RationalExpr) -> Result<RationalExpr> {
        let mut acc = RationalExpr::zero(&self.product);
        for c in 1..=self.copies {
            acc = &acc + &self.lift(f, c)?;
        }
        Ok(acc)
    }

    /// `X^{[k]}`: the components of `X` repeated on every block.
    pub fn field(&self, x: &VectorField) -> Result<VectorField> {
        let mut comps = Vec::with_capacity(self.product.dim());
        for c in 1..=self.copies {
            for comp in x.components() {
                comps.push(self.lift(comp, c)?);
            }
        }
        VectorField::new(&self.product, comps)
    }

    /// `a^{[k]} = Σ_c pr_c^* a`.
    pub fn form(&self, a: &KForm) -> Result<KForm> {
        let mut terms = Vec::new();
        for c in 1..=self.copies {
            for (idx, coeff) in a.terms() {
                terms.push((idx.iter().map(|&j| self.index(j, c)).collect(), self.lift(coeff, c)?));
            }
        }
        KForm::from_terms(&self.product, a.degree(), terms)
    }
}

pub fn prolong_field(x: &VectorField, k: usize) -> Result<VectorField> {
    Prolongation::new(x.chart(), k)?.field(x)
}

pub fn prolong_function(f: &RationalExpr, k: usize) -> Result<RationalExpr> {
    Prolongation::new(f.chart(), k)?.function(f)
}

/// The Jacobi structure `(Λ^{[k]}, E^{[k]})` of `M^k` built from a contact
/// structure on `M`.
///
/// On `M` the contact bracket reads `{f,g} = Λ(df,dg) - f Rg + g Rf`, so
/// `Λ^{ij} = {x_i,x_j} + x_i R x_j - x_j R x_i`.
#[derive(Clone, Debug)]
pub struct ProductJacobi {
    prolongation: Prolongation,
    lambda: Vec<Vec<RationalExpr>>,
    reeb: VectorField,
}

impl ProductJacobi {
    pub fn new(contact: &ContactStructure, copies: usize) -> Result<Self> {
        let base = contact.chart();
        let prolongation = Prolongation::new(base, copies)?;
        let n = base.dim();
        let xs: Vec<RationalExpr> =
            base.variables().iter().map(|v| RationalExpr::var(base, v)).collect::<Result<_>>()?;
        let r = contact.reeb();
        let mut lambda = vec![vec![RationalExpr::zero(base); n]; n];
        for i in 0..n {
            for j in 0..n {
                let b = contact.bracket(&xs[i], &xs[j])?;
                lambda[i][j] = &(&b + &(&xs[i] * r.component(j))) - &(&xs[j] * r.component(i));
            }
        }
        let reeb = prolongation.field(r)?;
        Ok(ProductJacobi { prolongation, lambda, reeb })
    }

    pub fn prolongation(&self) -> &Prolongation {
        &self.prolongation
    }

    /// `E^{[k]}`, the prolonged Reeb field.
    pub fn reeb(&self) -> &VectorField {
        &self.reeb
    }

    /// `{f,g}_k = Σ_c Λ_c(d_c f, d_c g) - f E^{[k]} g + g E^{[k]} f`.
    pub fn bracket(&self, f: &RationalExpr, g: &RationalExpr) -> Result<RationalExpr> {
        let p = &self.prolongation;
        p.product().ensure_same(f.chart())?;
        p.product().ensure_same(g.chart())?;
        let n = p.base().dim();
        let mut acc = &(g * &self.reeb.apply(f)) - &(f * &self.reeb.apply(g));
        for c in 1..=p.copies() {
            let df: Vec<RationalExpr> = (0..n).map(|j| f.partial_idx(p.index(j, c))).collect();
            let dg: Vec<RationalExpr> = (0..n).map(|j| g.partial_idx(p.index(j, c))).collect();
            for i in 0..n {
                if df[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if dg[j].is_zero() || self.lambda[i][j].is_zero() {
                        continue;
                    }
                    let l = p.lift(&self.lambda[i][j], c)?;
                    acc = &acc + &(&l * &(&df[i] * &dg[j]));
                }
            }
        }
        Ok(acc)
    }
}

/// A chart with slot variables `v1..vr` for Casimir polynomials.
pub fn slot_chart(r: usize) -> Result<Chart> {
    let names: Vec<String> = (1..=r).map(|i| format!("v{i}")).collect();
    Chart::new(&format!("slots{r}"), &names)
}

/// `C(h_1^{[k]}, ..., h_r^{[k]})` for a polynomial `C` on [`slot_chart`].
pub fn casimir_integral(prolonged_hams: &[RationalExpr], casimir: &RationalExpr) -> Result<RationalExpr> {
    let slots = casimir.chart();
    if slots.dim() != prolonged_hams.len() || slots.has_atoms() {
        return Err(Error::Invalid(format!(
            "Casimir has {} slots but {} Hamiltonians were given",
            slots.dim(),
            prolonged_hams.len()
        )));
    }
    let target = match prolonged_hams.first() {
        Some(h) => h.chart().clone(),
        None => return Err(Error::Invalid("no Hamiltonians".into())),
    };
    for h in prolonged_hams {
        target.ensure_same(h.chart())?;
    }
    casimir.compose(&target, prolonged_hams)
}

/// The two quadratic candidates `4 v2 v3 ± v1²` on the 𝔰𝔩₂ Hamiltonians.
pub fn sl2_casimir_variants() -> Vec<(String, RationalExpr)> {
    let s = slot_chart(3).expect("valid chart");
    ["4*v2*v3 + v1^2", "4*v2*v3 - v1^2"]
        .iter()
        .map(|p| (p.to_string(), crate::exprcore::parse_expr(p, &s).expect("valid polynomial")))
        .collect()
}

/// Outcome of substituting one Casimir candidate.
#[derive(Clone, Debug, Serialize)]
pub struct CasimirCheck {
    pub polynomial: String,
    #[serde(serialize_with = "as_string")]
    pub integral: RationalExpr,
    /// Every prolonged generator annihilates the integral.
    pub annihilated: bool,
    /// The integral commutes with every prolonged Hamiltonian under `{,}_k`.
    pub central: bool,
}

fn as_string<S: serde::Serializer>(e: &RationalExpr, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

/// Substitute each candidate and report which ones give first integrals.
pub fn casimir_sign_check(
    jacobi: &ProductJacobi,
    hams: &[RationalExpr],
    generators: &[VectorField],
    candidates: &[(String, RationalExpr)],
) -> Result<Vec<CasimirCheck>> {
    let p = jacobi.prolongation();
    let ph: Vec<RationalExpr> = hams.iter().map(|h| p.function(h)).collect::<Result<_>>()?;
    let pf: Vec<VectorField> = generators.iter().map(|x| p.field(x)).collect::<Result<_>>()?;
    candidates
        .iter()
        .map(|(label, c)| {
            let integral = casimir_integral(&ph, c)?;
            let annihilated = pf.iter().all(|x| x.apply(&integral).is_zero());
            let mut central = true;
            for h in &ph {
                central &= jacobi.bracket(&integral, h)?.is_zero();
            }
            Ok(CasimirCheck { polynomial: label.clone(), integral, annihilated, central })
        })
        .collect()
}
