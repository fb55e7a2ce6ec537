//! Common first integrals of prolonged fields: generation by symmetries, rank
//! certificates and the implicit superposition system.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Prolongation;
use crate::cartan::VectorField;
use crate::error::{Error, Result};
use crate::exprcore::linalg::{generic_rank, rank_rational, Matrix};
use crate::exprcore::{Chart, RationalExpr, Q};

#[derive(Clone, Debug)]
pub struct FirstIntegralSet {
    pub chart: Chart,
    pub integrals: Vec<(String, RationalExpr)>,
    pub annihilators: Vec<VectorField>,
    /// False when the target count was not reached.
    pub complete: bool,
    pub notes: Vec<String>,
}

impl FirstIntegralSet {
    /// Wrap integrals after checking that every annihilator kills every one.
    pub fn new(chart: &Chart, integrals: Vec<(String, RationalExpr)>, annihilators: Vec<VectorField>) -> Result<Self> {
        for (name, i) in &integrals {
            chart.ensure_same(i.chart())?;
            if let Some(k) = annihilators.iter().position(|x| !x.apply(i).is_zero()) {
                return Err(Error::Rejected(format!("{name} is not annihilated by annihilator {}", k + 1)));
            }
        }
        Ok(FirstIntegralSet { chart: chart.clone(), integrals, annihilators, complete: true, notes: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.integrals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.integrals.is_empty()
    }

    pub fn expressions(&self) -> Vec<RationalExpr> {
        self.integrals.iter().map(|(_, e)| e.clone()).collect()
    }
}

/// Number of functionally independent common first integrals near a generic
/// point: `dim - rank` of the distribution spanned by `fields`.
pub fn expected_integral_count(chart: &Chart, fields: &[VectorField]) -> usize {
    let m: Matrix = fields.iter().map(|x| x.components().to_vec()).collect();
    chart.dim() - if m.is_empty() { 0 } else { generic_rank(&m) }
}

const RANK_SEED: u64 = 0x5eed_1e55;
const SAMPLE_POINTS: usize = 8;

/// Apply symmetry fields breadth-first, keeping results that are annihilated
/// and raise the rank, until `target` integrals are found.
pub fn generate_integrals(
    seed: &RationalExpr,
    symmetries: &[(String, VectorField)],
    annihilators: &[VectorField],
    target: usize,
) -> Result<FirstIntegralSet> {
    let chart = seed.chart().clone();
    let mut set = FirstIntegralSet::new(&chart, vec![("I1".into(), seed.clone())], annihilators.to_vec())?;
    let vars: Vec<usize> = (0..chart.dim()).collect();
    let mut next = 0;
    while set.len() < target && next < set.len() {
        let (parent, base) = set.integrals[next].clone();
        next += 1;
        for (sname, y) in symmetries {
            if set.len() >= target {
                break;
            }
            chart.ensure_same(y.chart())?;
            let cand = y.apply(&base);
            if cand.is_constant() {
                set.notes.push(format!("{sname} applied to {parent} is constant, discarded"));
                continue;
            }
            if annihilators.iter().any(|x| !x.apply(&cand).is_zero()) {
                set.notes.push(format!("{sname} applied to {parent} is not a common first integral, discarded"));
                continue;
            }
            let mut trial = set.expressions();
            trial.push(cand.clone());
            if sampled_rank(&trial, &vars, RANK_SEED, SAMPLE_POINTS).0 < trial.len() {
                set.notes.push(format!("{sname} applied to {parent} is functionally dependent, discarded"));
                continue;
            }
            let name = format!("I{}", set.len() + 1);
            set.notes.push(format!("{name} = {sname}({parent})"));
            set.integrals.push((name, cand));
        }
    }
    if set.len() < target {
        set.complete = false;
        set.notes.push(format!("only {} of {target} integrals reachable with the given symmetries", set.len()));
    }
    Ok(set)
}

/// Generic rank of `∂(I_1..I_m)/∂(wrt_vars)` with a rational certificate point.
#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub rows: usize,
    pub columns: usize,
    /// Point of the full chart where a maximal minor is nonzero.
    pub certificate: Option<Vec<String>>,
    /// `"sampled"` when the point rank is already maximal, else `"symbolic"`.
    pub method: String,
}

pub fn rank_check(set: &FirstIntegralSet, wrt_vars: &[&str], seed: u64) -> Result<RankReport> {
    let vars: Vec<usize> = wrt_vars.iter().map(|v| set.chart.var_index(v)).collect::<Result<_>>()?;
    let ints = set.expressions();
    let rows = ints.len();
    let columns = vars.len();
    let (best, point) = sampled_rank(&ints, &vars, seed, 4 * SAMPLE_POINTS);
    let certificate = point.map(|p| p.iter().map(|x| x.to_string()).collect());
    if best == rows.min(columns) {
        return Ok(RankReport { rank: best, rows, columns, certificate, method: "sampled".into() });
    }
    let m: Matrix = ints.iter().map(|i| vars.iter().map(|&v| i.partial_idx(v)).collect()).collect();
    let rank = if m.is_empty() { 0 } else { generic_rank(&m) };
    let certificate = if rank == best { certificate } else { None };
    Ok(RankReport { rank, rows, columns, certificate, method: "symbolic".into() })
}

/// Largest rank of the Jacobian over random rational points, with the point.
fn sampled_rank(ints: &[RationalExpr], vars: &[usize], seed: u64, tries: usize) -> (usize, Option<Vec<Q>>) {
    let Some(first) = ints.first() else { return (0, None) };
    let chart = first.chart().clone();
    if chart.has_atoms() {
        return (0, None);
    }
    let jac: Vec<Vec<RationalExpr>> = ints.iter().map(|i| vars.iter().map(|&v| i.partial_idx(v)).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<Q>> = (0..tries)
        .map(|_| {
            (0..chart.dim())
                .map(|_| Q::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into()))
                .collect()
        })
        .collect();
    let best = points
        .into_par_iter()
        .filter_map(|p| {
            let m: Option<Vec<Vec<Q>>> =
                jac.iter().map(|row| row.iter().map(|e| e.eval(&p).ok()).collect::<Option<Vec<_>>>()).collect();
            m.map(|m| (rank_rational(&m), p))
        })
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
    match best {
        Some((r, p)) if r > 0 => (r, Some(p)),
        _ => (0, None),
    }
}

/// The implicit system `I_i = λ_i`. The first copy holds the unknowns and
/// the remaining copies hold particular solutions.
#[derive(Clone, Debug, Serialize)]
pub struct SuperpositionSystem {
    pub copies: usize,
    pub dependent: Vec<String>,
    pub particular_solutions: Vec<Vec<String>>,
    pub constants: Vec<String>,
    pub equations: Vec<Equation>,
    /// Each equation is affine in the dependent variables.
    pub linear_in_dependent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Equation {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
}

pub fn emit_superposition_system(prolongation: &Prolongation, set: &FirstIntegralSet) -> Result<SuperpositionSystem> {
    prolongation.product().ensure_same(&set.chart)?;
    let dependent = prolongation.block_variables(1);
    let particular_solutions = (2..=prolongation.copies()).map(|c| prolongation.block_variables(c)).collect();
    let constants: Vec<String> = (1..=set.len()).map(|i| format!("lambda{i}")).collect();
    let dep_idx: Vec<usize> = (0..prolongation.base().dim()).map(|j| prolongation.index(j, 1)).collect();
    let mut linear = true;
    let mut equations = Vec::new();
    for ((name, i), l) in set.integrals.iter().zip(&constants) {
        linear &= affine_in(i, &dep_idx);
        equations.push(Equation { name: name.clone(), lhs: i.to_string(), rhs: l.clone() });
    }
    Ok(SuperpositionSystem {
        copies: prolongation.copies(),
        dependent,
        particular_solutions,
        constants,
        equations,
        linear_in_dependent: linear,
    })
}

fn affine_in(e: &RationalExpr, vars: &[usize]) -> bool {
    vars.iter().all(|&v| e.denom().degree_in(v) == 0)
        && e.numer().terms().all(|(m, _)| vars.iter().map(|&v| m.exps()[v]).sum::<u32>() <= 1)
}
