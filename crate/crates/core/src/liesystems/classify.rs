//! Contact classification of a system and the odd-dimension no-go check.

use serde::Serialize;

use super::VGSystem;
use crate::error::{Error, Result};
use crate::exprcore::linalg::{determinant, generic_rank, Matrix};
use crate::exprcore::{poly_to_string, RationalExpr};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactClass {
    NotHamiltonian,
    Contact,
    ConservativeContact,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub class: ContactClass,
    /// Set when a generator has no Hamiltonian function.
    pub offending: Option<(String, String)>,
    pub hamiltonians: Vec<RationalExpr>,
    pub reeb_derivatives: Vec<RationalExpr>,
    /// `Σ b_α(t) h_α` on the chart extended by `t`.
    pub lie_hamiltonian: Option<RationalExpr>,
}

pub fn classify_contact_system(sys: &VGSystem) -> Result<Classification> {
    let cs = sys.contact.as_ref().ok_or_else(|| Error::Invalid(format!("system `{}` has no contact form", sys.name)))?;
    let mut hs = Vec::new();
    for (name, x) in sys.generator_names.iter().zip(&sys.generators) {
        match cs.hamiltonian_of(x) {
            Ok(h) => hs.push(h),
            Err(Error::NotHamiltonian(why)) => {
                return Ok(Classification {
                    class: ContactClass::NotHamiltonian,
                    offending: Some((name.clone(), why)),
                    hamiltonians: hs,
                    reeb_derivatives: Vec::new(),
                    lie_hamiltonian: None,
                })
            }
            Err(e) => return Err(e),
        }
    }
    let rds: Vec<RationalExpr> = hs.iter().map(|h| cs.reeb_derivative(h)).collect();
    let class = if rds.iter().all(|r| r.is_zero()) { ContactClass::ConservativeContact } else { ContactClass::Contact };
    let lie_hamiltonian = lie_hamiltonian(sys, &hs)?;
    Ok(Classification { class, offending: None, hamiltonians: hs, reeb_derivatives: rds, lie_hamiltonian: Some(lie_hamiltonian) })
}

fn lie_hamiltonian(sys: &VGSystem, hs: &[RationalExpr]) -> Result<RationalExpr> {
    let ext = sys.chart.extend(&format!("{}_t", sys.chart.id()), &["t".to_string()], Vec::new())?;
    let mut acc = RationalExpr::zero(&ext);
    for (h, b) in hs.iter().zip(&sys.coefficients) {
        acc = &acc + &(&h.embed(&ext)? * &b.embed(&ext)?);
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct NoGoReport {
    pub rank: usize,
    pub dimension: usize,
    pub odd_dimension: bool,
    /// Determinant numerator of the basis matrix when it is square and of full rank.
    pub degeneracy: Option<String>,
    pub verdict: Option<String>,
}

/// Generic rank of the distribution spanned by the Vessiot–Guldberg algebra
/// and the odd-dimensional verdict.
pub fn no_go_check(sys: &VGSystem) -> NoGoReport {
    let m: Matrix = sys.closure.basis.iter().map(|x| x.components().to_vec()).collect();
    let dim = sys.chart.dim();
    let rank = if m.is_empty() { 0 } else { generic_rank(&m) };
    let degeneracy = (m.len() == dim && rank == dim).then(|| {
        let d = determinant(&sys.chart, &m);
        poly_to_string(d.numer(), &sys.chart.ring_names())
    });
    let odd = dim % 2 == 1;
    let verdict = (rank == dim && odd).then(|| {
        format!(
            "distribution rank = {rank} = dim M, odd dimension => no Poisson structure can render the Vessiot-Guldberg algebra Hamiltonian"
        )
    });
    NoGoReport { rank, dimension: dim, odd_dimension: odd, degeneracy, verdict }
}
