//! Frames of vector fields: dual coframes and structure-constant checks.

use super::{numeric_table, StructureConstants};
use crate::cartan::{lie_bracket, KForm, VectorField};
use crate::error::{Error, Result};
use crate::exprcore::linalg::{determinant, generic_rank, inverse, Matrix};
use crate::exprcore::{Chart, RationalExpr};

/// Vector fields that are pointwise independent at a generic point.
#[derive(Clone, Debug)]
pub struct Frame {
    chart: Chart,
    fields: Vec<VectorField>,
}

impl Frame {
    pub fn new(chart: &Chart, fields: Vec<VectorField>) -> Result<Self> {
        if fields.is_empty() {
            return Err(Error::Invalid("empty frame".into()));
        }
        for f in &fields {
            chart.ensure_same(f.chart())?;
        }
        let m: Matrix = fields.iter().map(|f| f.components().to_vec()).collect();
        let rank = generic_rank(&m);
        if rank != fields.len() {
            return Err(Error::Singular(format!("frame of {} fields has generic rank {rank}", fields.len())));
        }
        Ok(Frame { chart: chart.clone(), fields })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    /// Rows are fields, columns are coordinates.
    pub fn matrix(&self) -> Matrix {
        self.fields.iter().map(|f| f.components().to_vec()).collect()
    }

    /// Determinant of a square frame (its zero set is where the frame degenerates).
    pub fn determinant(&self) -> Option<RationalExpr> {
        (self.fields.len() == self.chart.dim()).then(|| determinant(&self.chart, &self.matrix()))
    }
}

/// One-forms `η_i` with `η_i(Y_j) = δ_ij`.
pub fn dual_coframe(frame: &Frame) -> Result<Vec<KForm>> {
    let n = frame.chart.dim();
    if frame.fields.len() != n {
        return Err(Error::Invalid(format!("dual coframe needs {n} fields, got {}", frame.fields.len())));
    }
    let m = frame.matrix();
    // A M^T = I, so the rows of A = (M^T)^{-1} are the dual forms.
    let mt: Matrix = (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect();
    let a = inverse(&frame.chart, &mt).map_err(|_| {
        Error::Singular(determinant(&frame.chart, &m).numer().to_string())
    })?;
    a.into_iter().map(|row| KForm::one_form(&frame.chart, row)).collect()
}

/// Result of comparing `[Y_i, Y_j]` with `Σ_k c_ijk Y_k`.
#[derive(Clone, Debug)]
pub struct StructureCheck {
    pub holds: bool,
    /// `[Y_i, Y_j] - Σ_k c_ijk Y_k` for every failing pair.
    pub residuals: Vec<(usize, usize, VectorField)>,
}

pub fn verify_structure(fields: &[VectorField], alg: &StructureConstants) -> Result<StructureCheck> {
    let r = alg.dim();
    if fields.len() != r {
        return Err(Error::Invalid(format!("{} fields against an algebra of dimension {r}", fields.len())));
    }
    let c = numeric_table(alg)?;
    let mut residuals = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let mut res = lie_bracket(&fields[i], &fields[j]);
            for (k, ck) in c[i][j].iter().enumerate() {
                if !num_traits::Zero::is_zero(ck) {
                    res = res.sub(&fields[k].scale_q(ck));
                }
            }
            if !res.is_zero() {
                residuals.push((i, j, res));
            }
        }
    }
    Ok(StructureCheck { holds: residuals.is_empty(), residuals })
}
