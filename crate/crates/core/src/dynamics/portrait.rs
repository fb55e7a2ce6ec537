//! Field samples on grids and exact classification of planar equilibria.

use serde::Serialize;

use super::CompiledSystem;
use crate::cartan::VectorField;
use crate::error::{Error, Result};
use crate::exprcore::{q_to_f64, Q};

/// A rectangular grid with `counts[i]` evenly spaced samples on `ranges[i]`.
#[derive(Clone, Debug, Serialize)]
pub struct Grid {
    pub ranges: Vec<(f64, f64)>,
    pub counts: Vec<usize>,
}

impl Grid {
    pub fn new(ranges: Vec<(f64, f64)>, counts: Vec<usize>) -> Result<Self> {
        if ranges.len() != counts.len() || counts.iter().any(|&c| c < 2) {
            return Err(Error::Invalid("grid needs one range and at least 2 samples per axis".into()));
        }
        Ok(Grid { ranges, counts })
    }

    /// The cube `[lo, hi]^dim` with `count` samples per axis.
    pub fn cube(lo: f64, hi: f64, count: usize, dim: usize) -> Result<Self> {
        Grid::new(vec![(lo, hi); dim], vec![count; dim])
    }

    fn coordinate(&self, axis: usize, k: usize) -> f64 {
        let (lo, hi) = self.ranges[axis];
        lo + (hi - lo) * k as f64 / (self.counts[axis] - 1) as f64
    }

    /// Points in row-major order, the last axis varying fastest.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let total: usize = self.counts.iter().product();
        (0..total)
            .map(|mut flat| {
                let mut p = vec![0.0; self.counts.len()];
                for axis in (0..self.counts.len()).rev() {
                    p[axis] = self.coordinate(axis, flat % self.counts[axis]);
                    flat /= self.counts[axis];
                }
                p
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PortraitRow {
    pub point: Vec<f64>,
    /// `None` where a coefficient or component has a pole.
    pub field: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PortraitTable {
    pub system: String,
    pub t: f64,
    pub variables: Vec<String>,
    pub grid: Grid,
    pub rows: Vec<PortraitRow>,
}

impl PortraitTable {
    pub fn skipped(&self) -> usize {
        self.rows.iter().filter(|r| r.field.is_none()).count()
    }

    /// Columns `x.., d<x>.., skipped`.
    pub fn to_csv(&self) -> String {
        let mut s = self.variables.join(",");
        for v in &self.variables {
            s.push_str(&format!(",d{v}"));
        }
        s.push_str(",skipped\n");
        for r in &self.rows {
            let coords: Vec<String> = r.point.iter().map(f64::to_string).collect();
            s.push_str(&coords.join(","));
            match &r.field {
                Some(f) => {
                    for c in f {
                        s.push_str(&format!(",{c}"));
                    }
                    s.push_str(",0\n");
                }
                None => {
                    s.push_str(&",".repeat(self.variables.len()));
                    s.push_str(",1\n");
                }
            }
        }
        s
    }

    /// Zeros of a planar field located from the samples: grid cells on which
    /// both components change sign, merged into connected clusters. Returns
    /// the cluster centres.
    pub fn zero_clusters(&self) -> Result<Vec<Vec<f64>>> {
        if self.grid.counts.len() != 2 {
            return Err(Error::Invalid("zero clusters are computed on planar grids".into()));
        }
        let (n0, n1) = (self.grid.counts[0], self.grid.counts[1]);
        let at = |i: usize, j: usize| self.rows[i * n1 + j].field.as_ref();
        let changes = |vals: &[f64]| vals.iter().any(|v| *v <= 0.0) && vals.iter().any(|v| *v >= 0.0);
        let mut flagged = vec![vec![false; n1 - 1]; n0 - 1];
        for i in 0..n0 - 1 {
            for j in 0..n1 - 1 {
                let corners: Option<Vec<&Vec<f64>>> = [at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)].into_iter().collect();
                if let Some(c) = corners {
                    let a: Vec<f64> = c.iter().map(|f| f[0]).collect();
                    let b: Vec<f64> = c.iter().map(|f| f[1]).collect();
                    flagged[i][j] = changes(&a) && changes(&b);
                }
            }
        }
        let mut seen = vec![vec![false; n1 - 1]; n0 - 1];
        let mut centres = Vec::new();
        for i in 0..n0 - 1 {
            for j in 0..n1 - 1 {
                if !flagged[i][j] || seen[i][j] {
                    continue;
                }
                let mut stack = vec![(i, j)];
                seen[i][j] = true;
                let (mut sx, mut sy, mut count) = (0.0, 0.0, 0.0);
                while let Some((a, b)) = stack.pop() {
                    sx += (self.grid.coordinate(0, a) + self.grid.coordinate(0, a + 1)) / 2.0;
                    sy += (self.grid.coordinate(1, b) + self.grid.coordinate(1, b + 1)) / 2.0;
                    count += 1.0;
                    for da in -1i64..=1 {
                        for db in -1i64..=1 {
                            let (x, y) = (a as i64 + da, b as i64 + db);
                            if x < 0 || y < 0 || x as usize >= n0 - 1 || y as usize >= n1 - 1 {
                                continue;
                            }
                            let (x, y) = (x as usize, y as usize);
                            if flagged[x][y] && !seen[x][y] {
                                seen[x][y] = true;
                                stack.push((x, y));
                            }
                        }
                    }
                }
                centres.push(vec![sx / count, sy / count]);
            }
        }
        Ok(centres)
    }
}

/// Sample `sys` at time `t` on every grid point. Poles are flagged, not fatal.
pub fn phase_portrait(sys: &CompiledSystem, grid: &Grid, t: f64) -> Result<PortraitTable> {
    if grid.counts.len() != sys.dim() {
        return Err(Error::Invalid(format!("grid has {} axes, chart has {}", grid.counts.len(), sys.dim())));
    }
    let rows = grid.points().into_iter().map(|p| PortraitRow { field: sys.eval(t, &p).ok(), point: p }).collect();
    Ok(PortraitTable { system: sys.name().into(), t, variables: sys.chart().variables().to_vec(), grid: grid.clone(), rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    Saddle,
    StableNode,
    UnstableNode,
    StableFocus,
    UnstableFocus,
    Center,
    Degenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquilibriumReport {
    pub point: Vec<String>,
    /// Exact Jacobian at the point, row `i` holding `∂X^i/∂x_j`.
    pub jacobian: Vec<Vec<String>>,
    pub trace: String,
    pub determinant: String,
    pub discriminant: String,
    /// Real eigenvalues when the discriminant is nonnegative.
    pub eigenvalues: Option<(f64, f64)>,
    pub kind: EquilibriumKind,
}

/// Classify a zero of an autonomous planar field from its exact Jacobian.
pub fn classify_equilibrium(x: &VectorField, point: &[Q]) -> Result<EquilibriumReport> {
    let chart = x.chart();
    if chart.dim() != 2 || point.len() != 2 {
        return Err(Error::Invalid("equilibrium classification is planar".into()));
    }
    for (i, c) in x.components().iter().enumerate() {
        let v = c.eval(point)?;
        if v != Q::from_integer(0.into()) {
            return Err(Error::Rejected(format!("not an equilibrium: component {} equals {v}", i + 1)));
        }
    }
    let jac: Vec<Vec<Q>> = x
        .components()
        .iter()
        .map(|c| (0..2).map(|j| c.partial_idx(j).eval(point)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let tr = &jac[0][0] + &jac[1][1];
    let det = &jac[0][0] * &jac[1][1] - &jac[0][1] * &jac[1][0];
    let disc = &tr * &tr - Q::from_integer(4.into()) * &det;
    let zero = Q::from_integer(0.into());
    let kind = if det < zero {
        EquilibriumKind::Saddle
    } else if det == zero {
        EquilibriumKind::Degenerate
    } else if disc >= zero {
        if tr < zero {
            EquilibriumKind::StableNode
        } else {
            EquilibriumKind::UnstableNode
        }
    } else if tr == zero {
        EquilibriumKind::Center
    } else if tr < zero {
        EquilibriumKind::StableFocus
    } else {
        EquilibriumKind::UnstableFocus
    };
    let eigenvalues = (disc >= zero).then(|| {
        let (t, s) = (q_to_f64(&tr), q_to_f64(&disc).sqrt());
        ((t - s) / 2.0, (t + s) / 2.0)
    });
    Ok(EquilibriumReport {
        point: point.iter().map(Q::to_string).collect(),
        jacobian: jac.iter().map(|r| r.iter().map(Q::to_string).collect()).collect(),
        trace: tr.to_string(),
        determinant: det.to_string(),
        discriminant: disc.to_string(),
        eigenvalues,
        kind,
    })
}
