//! Fixed-step numerical integration of Lie systems with invariant monitors.
//!
//! Exact expressions are compiled once into `f64` polynomial evaluators.
//! Integration is classical fourth-order Runge–Kutta with a fixed step, so
//! runs are deterministic and convergence orders can be measured by halving.

mod monitor;
mod portrait;

pub use monitor::{
    empirical_order, monitor_area, monitor_energy, monitor_first_integrals, monitor_volume, monitor_with_order,
    polygon_area, Law, MonitorReport,
};
pub use portrait::{
    classify_equilibrium, phase_portrait, EquilibriumKind, EquilibriumReport, Grid, PortraitRow, PortraitTable,
};

use serde::Serialize;

use crate::cartan::VectorField;
use crate::error::{Error, Result};
use crate::exprcore::{q_to_f64, Chart, Poly, RationalExpr};
use crate::liesystems::VGSystem;

#[derive(Clone, Debug)]
struct CompiledPoly(Vec<(Vec<i32>, f64)>);

impl CompiledPoly {
    fn new(p: &Poly) -> Self {
        CompiledPoly(p.terms().map(|(m, c)| (m.exps().iter().map(|&e| e as i32).collect(), q_to_f64(c))).collect())
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, &v)| if k == 0 { acc } else { acc * v.powi(k) }))
            .sum()
    }
}

/// A rational function compiled for fast `f64` evaluation.
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    chart: Chart,
    num: CompiledPoly,
    den: Option<CompiledPoly>,
    source: String,
}

impl CompiledExpr {
    pub fn new(e: &RationalExpr) -> Self {
        let (n, d) = e.to_f64_parts();
        CompiledExpr {
            chart: e.chart().clone(),
            num: CompiledPoly::new(n),
            den: (!d.is_one()).then(|| CompiledPoly::new(d)),
            source: e.to_string(),
        }
    }

    /// Evaluate at a point given in chart variables.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        let ring = if self.chart.has_atoms() { self.chart.ring_point_f64(point) } else { point.to_vec() };
        self.eval_ring(&ring)
    }

    fn eval_ring(&self, ring: &[f64]) -> Result<f64> {
        let n = self.num.eval(ring);
        let v = match &self.den {
            None => n,
            Some(d) => {
                let d = d.eval(ring);
                if d == 0.0 {
                    return Err(Error::Pole(format!("{} at {ring:?}", self.source)));
                }
                n / d
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical(format!("{} is not finite at {ring:?}", self.source)))
        }
    }
}

/// `Σ_α b_α(t) X_α` compiled for `f64` evaluation.
#[derive(Clone, Debug)]
pub struct CompiledSystem {
    name: String,
    chart: Chart,
    generators: Vec<Vec<CompiledExpr>>,
    coefficients: Vec<Option<CompiledExpr>>,
}

impl CompiledSystem {
    pub fn from_system(sys: &VGSystem) -> Self {
        CompiledSystem {
            name: sys.name.clone(),
            chart: sys.chart.clone(),
            generators: sys.generators.iter().map(|x| x.components().iter().map(CompiledExpr::new).collect()).collect(),
            coefficients: sys.coefficients.iter().map(|b| Some(CompiledExpr::new(b))).collect(),
        }
    }

    /// An autonomous field.
    pub fn from_field(name: &str, x: &VectorField) -> Self {
        CompiledSystem {
            name: name.into(),
            chart: x.chart().clone(),
            generators: vec![x.components().iter().map(CompiledExpr::new).collect()],
            coefficients: vec![None],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// The weights `b_α(t)`.
    pub fn weights(&self, t: f64) -> Result<Vec<f64>> {
        self.coefficients.iter().map(|b| b.as_ref().map_or(Ok(1.0), |b| b.eval(&[t]))).collect()
    }

    pub fn eval(&self, t: f64, x: &[f64]) -> Result<Vec<f64>> {
        let ring = if self.chart.has_atoms() { self.chart.ring_point_f64(x) } else { x.to_vec() };
        let mut out = vec![0.0; self.dim()];
        for (g, w) in self.generators.iter().zip(self.weights(t)?) {
            if w == 0.0 {
                continue;
            }
            for (o, c) in out.iter_mut().zip(g) {
                *o += w * c.eval_ring(&ring)?;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub system: String,
    pub variables: Vec<String>,
    pub method: String,
    pub step: f64,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.states.last().expect("nonempty trajectory")
    }

    /// CSV with columns `t, x_1..x_n` followed by `extra` columns.
    pub fn to_csv(&self, extra: &[(String, Vec<f64>)]) -> String {
        let mut s = String::from("t");
        for v in &self.variables {
            s.push(',');
            s.push_str(v);
        }
        for (name, _) in extra {
            s.push(',');
            s.push_str(name);
        }
        s.push('\n');
        for (i, (t, x)) in self.times.iter().zip(&self.states).enumerate() {
            s.push_str(&format!("{t}"));
            for v in x {
                s.push_str(&format!(",{v}"));
            }
            for (_, col) in extra {
                s.push_str(&format!(",{}", col[i]));
            }
            s.push('\n');
        }
        s
    }
}

/// Number of steps and the adjusted step landing exactly on `t1`.
pub(crate) fn step_plan(t0: f64, t1: f64, step: f64) -> Result<(usize, f64)> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Invalid(format!("step must be positive, got {step}")));
    }
    if !(t1 > t0) {
        return Err(Error::Invalid(format!("need t1 > t0, got [{t0}, {t1}]")));
    }
    let n = ((t1 - t0) / step).round().max(1.0) as usize;
    Ok((n, (t1 - t0) / n as f64))
}

/// One classical RK4 step of `x' = f(t, x)`.
pub(crate) fn rk4_step<F>(f: &F, t: f64, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    let shift = |k: &[f64], s: f64| -> Vec<f64> { x.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    let k1 = f(t, x)?;
    let k2 = f(t + h / 2.0, &shift(&k1, h / 2.0))?;
    let k3 = f(t + h / 2.0, &shift(&k2, h / 2.0))?;
    let k4 = f(t + h, &shift(&k3, h))?;
    Ok((0..x.len()).map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect())
}

/// Integrate any right-hand side, recording every step.
pub(crate) fn rk4<F>(f: F, x0: &[f64], t0: f64, t1: f64, step: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>, f64)>
where
    F: Fn(f64, &[f64]) -> Result<Vec<f64>>,
{
    let (n, h) = step_plan(t0, t1, step)?;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    f(t0, x0)?;
    times.push(t0);
    states.push(x0.to_vec());
    let mut x = x0.to_vec();
    for i in 0..n {
        let t = t0 + i as f64 * h;
        x = rk4_step(&f, t, &x, h).map_err(|e| match e {
            Error::Pole(m) => Error::Pole(format!("{m} during step {i} at t = {t}")),
            other => other,
        })?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite state at t = {}", t + h)));
        }
        times.push(t0 + (i + 1) as f64 * h);
        states.push(x.clone());
    }
    Ok((times, states, h))
}

pub fn integrate_compiled(sys: &CompiledSystem, x0: &[f64], t0: f64, t1: f64, step: f64) -> Result<Trajectory> {
    if x0.len() != sys.dim() {
        return Err(Error::Invalid(format!("initial state has {} entries, chart has {}", x0.len(), sys.dim())));
    }
    let (times, states, h) = rk4(|t, x| sys.eval(t, x), x0, t0, t1, step)?;
    Ok(Trajectory {
        system: sys.name().into(),
        variables: sys.chart().variables().to_vec(),
        method: "rk4".into(),
        step: h,
        times,
        states,
    })
}

pub fn integrate(sys: &VGSystem, x0: &[f64], t0: f64, t1: f64, step: f64) -> Result<Trajectory> {
    integrate_compiled(&CompiledSystem::from_system(sys), x0, t0, t1, step)
}
