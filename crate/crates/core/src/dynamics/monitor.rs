//! Invariant monitors: first-integral drift, convergence order, planar area,
//! divergence-transported volume and the energy law `dh/dt = -(Rh) h`.

use rayon::prelude::*;
use serde::Serialize;

use super::{integrate_compiled, rk4, rk4_step, step_plan, CompiledExpr, CompiledSystem, Trajectory};
use crate::cartan::{divergence, KForm};
use crate::contactgeo::ContactStructure;
use crate::error::{Error, Result};
use crate::exprcore::RationalExpr;
use crate::liesystems::VGSystem;

/// How a monitored quantity is supposed to evolve.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Law {
    Constant,
    /// `Q(t) = Q(t0) exp(∫ rate ds)` along trajectories.
    Exponential { rate: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct MonitorReport {
    pub quantity: String,
    pub law: Law,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// The value predicted by `law` at each time.
    pub expected: Vec<f64>,
    pub max_abs_drift: f64,
    pub max_rel_drift: f64,
    /// Empirical convergence order of the drift under step halving.
    pub order: Option<f64>,
}

impl MonitorReport {
    fn new(quantity: String, law: Law, times: Vec<f64>, values: Vec<f64>, expected: Vec<f64>) -> Self {
        let mut max_abs: f64 = 0.0;
        let mut max_rel: f64 = 0.0;
        for (v, e) in values.iter().zip(&expected) {
            let d = (v - e).abs();
            max_abs = max_abs.max(d);
            max_rel = max_rel.max(if e.abs() > f64::MIN_POSITIVE { d / e.abs() } else { d });
        }
        MonitorReport { quantity, law, times, values, expected, max_abs_drift: max_abs, max_rel_drift: max_rel, order: None }
    }
}

/// Evaluate each integral along `traj` and measure its drift from the initial value.
pub fn monitor_first_integrals(traj: &Trajectory, integrals: &[(String, RationalExpr)]) -> Result<Vec<MonitorReport>> {
    integrals
        .iter()
        .map(|(name, f)| {
            if f.chart().variables() != traj.variables.as_slice() {
                return Err(Error::ChartMismatch(f.chart().id().into(), traj.variables.join(",")));
            }
            let c = CompiledExpr::new(f);
            let values: Vec<f64> = traj
                .states
                .iter()
                .zip(&traj.times)
                .map(|(x, t)| {
                    c.eval(x).map_err(|e| match e {
                        Error::Pole(m) => Error::Pole(format!("{name} has a pole on the trajectory at t = {t}: {m}")),
                        other => other,
                    })
                })
                .collect::<Result<_>>()?;
            let expected = vec![values[0]; values.len()];
            Ok(MonitorReport::new(name.clone(), Law::Constant, traj.times.clone(), values, expected))
        })
        .collect()
}

/// Run at `step` and `step / 2` and attach the drift order to each report.
pub fn monitor_with_order(
    sys: &CompiledSystem,
    x0: &[f64],
    t0: f64,
    t1: f64,
    step: f64,
    integrals: &[(String, RationalExpr)],
) -> Result<Vec<MonitorReport>> {
    let coarse = monitor_first_integrals(&integrate_compiled(sys, x0, t0, t1, step)?, integrals)?;
    let fine = monitor_first_integrals(&integrate_compiled(sys, x0, t0, t1, step / 2.0)?, integrals)?;
    Ok(coarse
        .into_iter()
        .zip(fine)
        .map(|(mut c, f)| {
            // Below this the drift is round-off and carries no order information.
            if c.max_abs_drift > 1e-13 && f.max_abs_drift > 1e-13 {
                c.order = Some((c.max_abs_drift / f.max_abs_drift).log2());
            }
            c
        })
        .collect())
}

/// Observed orders `log2(|x_h - x_{h/2}| / |x_{h/2} - x_{h/4}|)` of the final
/// state, one per consecutive triple of step sizes `step, step/2, ...`.
pub fn empirical_order(sys: &CompiledSystem, x0: &[f64], t0: f64, t1: f64, step: f64, levels: usize) -> Result<Vec<f64>> {
    if levels < 3 {
        return Err(Error::Invalid(format!("order estimation needs at least 3 levels, got {levels}")));
    }
    let finals: Vec<Vec<f64>> = (0..levels)
        .into_par_iter()
        .map(|k| Ok(integrate_compiled(sys, x0, t0, t1, step / f64::from(1u32 << k))?.last().to_vec()))
        .collect::<Result<_>>()?;
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    Ok(finals
        .windows(3)
        .map(|w| (dist(&w[0], &w[1]) / dist(&w[1], &w[2])).log2())
        .collect())
}

/// Signed shoelace area of a closed polygon.
pub fn polygon_area(points: &[Vec<f64>]) -> Result<f64> {
    if points.len() < 3 || points.iter().any(|p| p.len() != 2) {
        return Err(Error::Invalid(format!("a polygon needs at least 3 planar vertices, got {}", points.len())));
    }
    let n = points.len();
    let twice: f64 = (0..n).map(|i| points[i][0] * points[(i + 1) % n][1] - points[(i + 1) % n][0] * points[i][1]).sum();
    Ok(twice / 2.0)
}

/// Integrate from `x0` keeping only `samples + 1` evenly spaced states.
fn sampled_run<F>(f: &F, x0: &[f64], t0: f64, t1: f64, step: f64, samples: usize) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    let (n, h) = step_plan(t0, t1, step)?;
    let every = (n / samples.max(1)).max(1);
    let mut out = vec![x0.to_vec()];
    let mut x = x0.to_vec();
    for i in 0..n {
        x = rk4_step(f, t0 + i as f64 * h, &x, h)?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite state at t = {}", t0 + (i + 1) as f64 * h)));
        }
        if (i + 1) % every == 0 || i + 1 == n {
            out.push(x.clone());
        }
    }
    Ok(out)
}

fn sample_times(t0: f64, t1: f64, step: f64, samples: usize) -> Result<Vec<f64>> {
    let (n, h) = step_plan(t0, t1, step)?;
    let every = (n / samples.max(1)).max(1);
    let mut ts = vec![t0];
    ts.extend((1..=n).filter(|i| i % every == 0 || *i == n).map(|i| t0 + i as f64 * h));
    Ok(ts)
}

/// Transport a polygon boundary by a planar system and track its area.
///
/// The declared law is constancy, which holds for divergence-free flows in
/// the coordinates used.
pub fn monitor_area(
    sys: &CompiledSystem,
    boundary: &[Vec<f64>],
    t0: f64,
    t1: f64,
    step: f64,
    samples: usize,
) -> Result<MonitorReport> {
    if sys.dim() != 2 {
        return Err(Error::Invalid(format!("area monitoring needs a planar system, got dimension {}", sys.dim())));
    }
    let a0 = polygon_area(boundary)?;
    if a0.abs() < f64::EPSILON {
        return Err(Error::Invalid("degenerate polygon: zero area".into()));
    }
    let f = |t: f64, x: &[f64]| sys.eval(t, x);
    let runs: Vec<Vec<Vec<f64>>> =
        boundary.par_iter().map(|p| sampled_run(&f, p, t0, t1, step, samples)).collect::<Result<_>>()?;
    let times = sample_times(t0, t1, step, samples)?;
    let values: Vec<f64> = (0..times.len())
        .map(|k| polygon_area(&runs.iter().map(|r| r[k].clone()).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let expected = vec![a0; values.len()];
    Ok(MonitorReport::new("area".into(), Law::Constant, times, values, expected))
}

/// Volume of small simplices under the flow, measured with `vol`, against
/// the exact divergence integrated along each simplex centroid.
///
/// Each centre spawns the simplex `c, c + eps e_1, ..., c + eps e_n`.
#[allow(clippy::too_many_arguments)]
pub fn monitor_volume(
    sys: &VGSystem,
    vol: &KForm,
    centres: &[Vec<f64>],
    eps: f64,
    t0: f64,
    t1: f64,
    step: f64,
    samples: usize,
) -> Result<MonitorReport> {
    let n = sys.chart.dim();
    sys.chart.ensure_same(vol.chart())?;
    let divs: Vec<RationalExpr> = sys.generators.iter().map(|x| divergence(x, vol)).collect::<Result<_>>()?;
    let conservative = divs.iter().all(RationalExpr::is_zero);
    let rate = divs
        .iter()
        .zip(&sys.coefficients)
        .filter(|(d, _)| !d.is_zero())
        .map(|(d, b)| format!("({b})*({d})"))
        .collect::<Vec<_>>()
        .join(" + ");
    let cs = CompiledSystem::from_system(sys);
    let cdivs: Vec<CompiledExpr> = divs.iter().map(CompiledExpr::new).collect();
    let density = CompiledExpr::new(&vol.coefficient(&(0..n).collect::<Vec<_>>()));
    let augmented = |t: f64, y: &[f64]| -> Result<Vec<f64>> {
        let mut out = cs.eval(t, &y[..n])?;
        let mut s = 0.0;
        for (w, d) in cs.weights(t)?.iter().zip(&cdivs) {
            if *w != 0.0 {
                s += w * d.eval(&y[..n])?;
            }
        }
        out.push(s);
        Ok(out)
    };
    let plain = |t: f64, x: &[f64]| cs.eval(t, x);
    let simplex_volume = |verts: &[Vec<f64>]| -> Result<f64> {
        let centroid: Vec<f64> = (0..n).map(|j| verts.iter().map(|v| v[j]).sum::<f64>() / (n + 1) as f64).collect();
        let edges: Vec<Vec<f64>> = verts[1..].iter().map(|v| (0..n).map(|j| v[j] - verts[0][j]).collect()).collect();
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        Ok(density.eval(&centroid)? * det(edges) / fact)
    };
    let per_centre: Vec<(Vec<f64>, Vec<f64>)> = centres
        .par_iter()
        .map(|c| {
            if c.len() != n {
                return Err(Error::Invalid(format!("centre has {} entries, chart has {n}", c.len())));
            }
            let mut verts = vec![c.clone()];
            for j in 0..n {
                let mut v = c.clone();
                v[j] += eps;
                verts.push(v);
            }
            let centroid: Vec<f64> = (0..n).map(|j| verts.iter().map(|v| v[j]).sum::<f64>() / (n + 1) as f64).collect();
            let runs: Vec<Vec<Vec<f64>>> =
                verts.iter().map(|v| sampled_run(&plain, v, t0, t1, step, samples)).collect::<Result<_>>()?;
            let mut y0 = centroid;
            y0.push(0.0);
            let aug = sampled_run(&augmented, &y0, t0, t1, step, samples)?;
            let v0 = simplex_volume(&verts)?;
            let measured: Vec<f64> = (0..aug.len())
                .map(|k| simplex_volume(&runs.iter().map(|r| r[k].clone()).collect::<Vec<_>>()))
                .collect::<Result<_>>()?;
            let expected: Vec<f64> = aug.iter().map(|y| v0 * y[n].exp()).collect();
            Ok((measured, expected))
        })
        .collect::<Result<_>>()?;
    let times = sample_times(t0, t1, step, samples)?;
    let sum = |pick: fn(&(Vec<f64>, Vec<f64>)) -> &Vec<f64>| -> Vec<f64> {
        (0..times.len()).map(|k| per_centre.iter().map(|p| pick(p)[k]).sum()).collect()
    };
    let values = sum(|p| &p.0);
    let expected = sum(|p| &p.1);
    let law = if conservative { Law::Constant } else { Law::Exponential { rate } };
    Ok(MonitorReport::new("volume".into(), law, times, values, expected))
}

fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap_or(c);
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    d
}

/// Follow `X_h` from `x0` and compare `h(γ(t))` with `h(x0) exp(-∫ Rh ds)`.
pub fn monitor_energy(
    contact: &ContactStructure,
    h: &RationalExpr,
    x0: &[f64],
    t0: f64,
    t1: f64,
    step: f64,
) -> Result<MonitorReport> {
    let x = contact.field_of(h)?;
    let rh = contact.reeb_derivative(h);
    let law = if rh.is_zero() { Law::Constant } else { Law::Exponential { rate: (-&rh).to_string() } };
    let n = x.chart().dim();
    let field = CompiledSystem::from_field("X_h", &x);
    let crh = CompiledExpr::new(&rh);
    let ch = CompiledExpr::new(h);
    let mut y0 = x0.to_vec();
    y0.push(0.0);
    let (times, states, _) = rk4(
        |t, y| {
            let mut out = field.eval(t, &y[..n])?;
            out.push(-crh.eval(&y[..n])?);
            Ok(out)
        },
        &y0,
        t0,
        t1,
        step,
    )?;
    let e0 = ch.eval(x0)?;
    let values: Vec<f64> = states.iter().map(|y| ch.eval(&y[..n])).collect::<Result<_>>()?;
    let expected: Vec<f64> = states.iter().map(|y| e0 * y[n].exp()).collect();
    Ok(MonitorReport::new(format!("h = {h}"), law, times, values, expected))
}
