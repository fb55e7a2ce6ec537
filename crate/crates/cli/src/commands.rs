//! Subcommand bodies. Each one loads what it needs, calls the library and
//! turns the result into a JSON value or CSV text.

use contact_lie::cartan::{lie_bracket, CoordinateMap, KForm, MapComponent, VectorField};
use contact_lie::contactgeo::ContactStructure;
use contact_lie::definition::{load, LoadedSystem};
use contact_lie::exprcore::poly_to_string;
use contact_lie::dynamics::{
    classify_equilibrium, integrate, EquilibriumReport, monitor_first_integrals, phase_portrait, CompiledSystem, Grid,
};
use contact_lie::liealgebra::{builtin, classify_3d, StructureConstants, BUILTIN_NAMES};
use contact_lie::liesystems::{
    classify_contact_system, momentum_map, no_go_check, project_conservative, reduce_level_set,
    smallest_lie_algebra, ContactClass, VGSystem,
};
use contact_lie::superposition::{
    casimir_sign_check, emit_superposition_system, generate_integrals, rank_check, sl2_casimir_variants,
    ProductJacobi, Prolongation,
};
use contact_lie::verify::{run_all, run_criterion};
use contact_lie::{parse_expr, Chart, Error, RationalExpr, Result, Q};
use serde_json::{json, Value};

use crate::{Command, Format, Output};

pub fn run(cmd: Command) -> Result<Output> {
    let (value, ok) = match cmd {
        Command::CheckContact(a) => (check_contact(&json_only(&a)?)?, true),
        Command::Reeb(a) => {
            let s = json_only(&a)?;
            let cs = s.contact()?;
            (json!({ "system": name(&s), "reeb": field(cs.reeb()) }), true)
        }
        Command::HamVf(a) => (ham_vf(&json_only(&a.sys)?, a.hamiltonian.as_deref(), a.field.as_deref())?, true),
        Command::Bracket(a) => (bracket(&json_only(&a.sys)?, &a.f, &a.g)?, true),
        Command::Classify3d(a) => {
            no_csv(a.format)?;
            (classify3d(a.algebra.as_deref(), a.system.as_deref())?, true)
        }
        Command::Closure(a) => (closure(&json_only(&a.sys)?, a.max_dim)?, true),
        Command::ClassifySystem(a) => (classify_system(&json_only(&a)?)?, true),
        Command::Project(a) => (project(&json_only(&a.sys)?, &a.vars)?, true),
        Command::Reduce(a) => (reduce(&json_only(&a.sys)?, &a.mu, &a.fixed)?, true),
        Command::Momentum(a) => (momentum(&json_only(&a)?)?, true),
        Command::Prolong(a) => (prolong(&json_only(&a.sys)?, a.copies)?, true),
        Command::Superposition(a) => (superposition(&json_only(&a.sys)?, a.copies, a.seed, &a.symmetries)?, true),
        Command::Integrate(a) => return integrate_cmd(&a),
        Command::Portrait(a) => return portrait(&a),
        Command::VerifyPaper(a) => return verify(&a),
    };
    Ok(Output { text: pretty(&value), ok })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn no_csv(f: Format) -> Result<()> {
    match f {
        Format::Json => Ok(()),
        Format::Csv => Err(Error::Invalid("CSV output is available for integrate, portrait and verify-paper".into())),
    }
}

fn json_only(a: &crate::SystemArgs) -> Result<LoadedSystem> {
    no_csv(a.format)?;
    load(&a.system)
}

fn name(s: &LoadedSystem) -> &str {
    &s.definition.name
}

fn expr(s: &str, chart: &Chart) -> Result<RationalExpr> {
    parse_expr(s, chart)
}

fn strs(xs: &[RationalExpr]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn field(x: &VectorField) -> Value {
    json!({ "display": x.to_string(), "components": x.to_strings() })
}

fn form(f: &KForm) -> Value {
    json!({ "display": f.to_string(), "terms": f.to_named_terms() })
}

fn structure(alg: &StructureConstants) -> Value {
    json!({ "basis": alg.basis(), "relations": alg.relations() })
}

fn check_contact(s: &LoadedSystem) -> Result<Value> {
    let cs = s.contact()?;
    let names = s.chart.ring_names();
    Ok(json!({
        "system": name(s),
        "chart": s.chart.variables(),
        "contact": true,
        "eta": form(cs.eta()),
        "volume": form(cs.volume()),
        "reeb": field(cs.reeb()),
        "darboux": cs.darboux().is_some(),
        "degenerate_where": {
            "vanishing": poly_to_string(&cs.locus().vanishing, &names),
            "poles": poly_to_string(&cs.locus().poles, &names),
        },
    }))
}

fn ham_vf(s: &LoadedSystem, h: Option<&str>, x: Option<&str>) -> Result<Value> {
    let cs = s.contact()?;
    match (h, x) {
        (Some(h), None) => {
            let pair = cs.hamiltonian_field(&expr(h, &s.chart)?)?;
            Ok(json!({
                "system": name(s),
                "hamiltonian": pair.h.to_string(),
                "field": field(&pair.field),
                "reeb_derivative": pair.reeb_derivative.to_string(),
                "energy_evolution": cs.energy_evolution(&pair)?.to_string(),
                "liouville_factor": cs.liouville_factor(&pair.field)?.to_string(),
            }))
        }
        (None, Some(n)) => {
            let f = s.field(n)?;
            let h = cs.hamiltonian_of(f)?;
            Ok(json!({
                "system": name(s),
                "field_name": n,
                "field": field(f),
                "hamiltonian": h.to_string(),
                "reeb_derivative": cs.reeb_derivative(&h).to_string(),
            }))
        }
        _ => Err(Error::Invalid("give exactly one of --hamiltonian or --field".into())),
    }
}

fn bracket(s: &LoadedSystem, f: &str, g: &str) -> Result<Value> {
    let cs = s.contact()?;
    let (f, g) = (expr(f, &s.chart)?, expr(g, &s.chart)?);
    let fg = cs.bracket(&f, &g)?;
    let lhs = lie_bracket(&cs.field_of(&f)?, &cs.field_of(&g)?);
    let rhs = cs.field_of(&fg)?;
    if lhs != rhs {
        return Err(Error::IdentityViolation(format!("[X_f, X_g] - X_{{f,g}} = {}", lhs.sub(&rhs))));
    }
    Ok(json!({
        "system": name(s),
        "f": f.to_string(),
        "g": g.to_string(),
        "bracket": fg.to_string(),
        "field_of_bracket": field(&rhs),
        "morphism_holds": true,
    }))
}

fn classify3d(algebra: Option<&str>, system: Option<&str>) -> Result<Value> {
    let algs: Vec<StructureConstants> = match (algebra, system) {
        (Some(a), _) => vec![builtin(a)?],
        (None, Some(sys)) => {
            let s = load(sys)?;
            vec![s.algebra.clone().ok_or_else(|| Error::Invalid(format!("{sys} declares no structure constants")))?]
        }
        (None, None) => BUILTIN_NAMES.iter().map(|n| builtin(n)).collect::<Result<_>>()?,
    };
    let rows: Vec<Value> = algs
        .iter()
        .map(|a| classify_3d(a).map(|r| serde_json::to_value(r).expect("report serializes")))
        .collect::<Result<_>>()?;
    Ok(if rows.len() == 1 { rows.into_iter().next().expect("one row") } else { Value::Array(rows) })
}

fn closure(s: &LoadedSystem, max_dim: usize) -> Result<Value> {
    let sys = s.system()?;
    let seeds: Vec<(String, VectorField)> = sys.generator_names.iter().cloned().zip(sys.generators.iter().cloned()).collect();
    let c = smallest_lie_algebra(&s.chart, &seeds, max_dim)?;
    Ok(json!({
        "system": name(s),
        "dimension": c.names.len(),
        "basis": c.names.iter().zip(&c.basis).map(|(n, x)| json!({ "name": n, "field": field(x) })).collect::<Vec<_>>(),
        "structure": c.structure.as_ref().map(structure),
        "seed_coordinates": c.seed_coordinates.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
    }))
}

fn class_name(c: &ContactClass) -> &'static str {
    match c {
        ContactClass::NotHamiltonian => "not_hamiltonian",
        ContactClass::Contact => "contact",
        ContactClass::ConservativeContact => "conservative_contact",
    }
}

fn classify_system(s: &LoadedSystem) -> Result<Value> {
    let sys = s.system()?;
    let nogo = no_go_check(sys);
    let c = match &sys.contact {
        Some(_) => Some(classify_contact_system(sys)?),
        None => None,
    };
    Ok(json!({
        "system": name(s),
        "class": c.as_ref().map(|c| class_name(&c.class)),
        "offending": c.as_ref().and_then(|c| c.offending.clone()).map(|(n, r)| json!({ "generator": n, "residual": r })),
        "hamiltonians": c.as_ref().map(|c| strs(&c.hamiltonians)),
        "reeb_derivatives": c.as_ref().map(|c| strs(&c.reeb_derivatives)),
        "lie_hamiltonian": c.as_ref().and_then(|c| c.lie_hamiltonian.as_ref()).map(ToString::to_string),
        "closure_dimension": sys.closure.dim(),
        "no_go": serde_json::to_value(&nogo).expect("report serializes"),
    }))
}

fn hint<'a>(given: &'a [String], fallback: Option<&'a Vec<String>>, what: &str) -> Result<Vec<&'a str>> {
    let v: &[String] = if given.is_empty() { fallback.map(Vec::as_slice).unwrap_or_default() } else { given };
    if v.is_empty() {
        return Err(Error::Invalid(format!("no {what} given and the definition has no reduction hint")));
    }
    Ok(v.iter().map(String::as_str).collect())
}

fn map_value(m: &CoordinateMap) -> Value {
    let comps: Vec<String> = m
        .components()
        .iter()
        .map(|c| match c {
            MapComponent::Rational(e) => e.to_string(),
            MapComponent::Log(e) => format!("ln({e})"),
        })
        .collect();
    json!({ "source": m.source().variables(), "target": m.target().variables(), "components": comps })
}

fn project(s: &LoadedSystem, vars: &[String]) -> Result<Value> {
    let red = s.definition.reduction.as_ref();
    let vars = hint(vars, red.map(|r| &r.invariant_vars), "--vars")?;
    let p = project_conservative(s.system()?, &vars)?;
    Ok(json!({
        "system": name(s),
        "chart": p.chart.variables(),
        "projection": map_value(&p.map),
        "omega": form(&p.omega),
        "generators": p.system.generator_names.iter().zip(&p.system.generators).map(|(n, x)| json!({ "name": n, "field": field(x) })).collect::<Vec<_>>(),
        "hamiltonians": strs(&p.hamiltonians),
        "lie_hamiltonian": p.lie_hamiltonian.to_string(),
    }))
}

fn parse_q(s: &str) -> Result<Q> {
    s.trim().parse().map_err(|_| Error::Invalid(format!("not a rational number: {s}")))
}

fn reduce(s: &LoadedSystem, mu: &[String], fixed: &[String]) -> Result<Value> {
    let red = s.definition.reduction.as_ref();
    let mu: Vec<Q> = if mu.is_empty() { s.mu.clone() } else { mu.iter().map(|m| parse_q(m)).collect::<Result<_>>()? };
    let fixed = hint(fixed, red.map(|r| &r.fixed_vars), "--fixed")?;
    let mm = momentum_map(s.contact()?, &s.frame()?, None)?;
    let r = reduce_level_set(&mm, &mu, &fixed, s.system.as_ref())?;
    Ok(json!({
        "system": name(s),
        "mu": mu.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "chart": r.chart.variables(),
        "inclusion": map_value(&r.inclusion),
        "contact_form": form(r.contact.eta()),
        "reeb": field(r.contact.reeb()),
        "generators": r.system.as_ref().map(|sys| sys.generator_names.iter().zip(&sys.generators).map(|(n, x)| json!({ "name": n, "field": field(x) })).collect::<Vec<_>>()),
        "hamiltonians": strs(&r.hamiltonians),
        "restricted_hamiltonians": strs(&r.restricted_hamiltonians),
        "notes": r.notes,
    }))
}

fn momentum(s: &LoadedSystem) -> Result<Value> {
    let frame = s.frame()?;
    if frame.is_empty() {
        return Err(Error::Invalid(format!("{} declares no reduction frame", name(s))));
    }
    let mm = momentum_map(s.contact()?, &frame, None)?;
    Ok(json!({
        "system": name(s),
        "frame": mm.names,
        "components": strs(&mm.components),
        "algebra": structure(&mm.algebra),
        "morphism_sign": mm.morphism_sign,
    }))
}

fn prolong(s: &LoadedSystem, copies: usize) -> Result<Value> {
    let sys = s.system()?;
    let p = Prolongation::new(&s.chart, copies)?;
    let gens: Vec<Value> = sys
        .generator_names
        .iter()
        .zip(&sys.generators)
        .map(|(n, x)| Ok(json!({ "name": n, "field": field(&p.field(x)?) })))
        .collect::<Result<_>>()?;
    Ok(json!({ "system": name(s), "copies": copies, "chart": p.product().variables(), "generators": gens }))
}

/// Declared fields outside the generators that commute with every generator.
fn default_symmetries(s: &LoadedSystem, sys: &VGSystem) -> Vec<String> {
    s.fields
        .iter()
        .filter(|(n, x)| !sys.generator_names.contains(n) && sys.generators.iter().all(|g| lie_bracket(g, x).is_zero()))
        .map(|(n, _)| n.clone())
        .collect()
}

fn superposition(s: &LoadedSystem, copies: usize, seed: u64, syms: &[String]) -> Result<Value> {
    let sys = s.system()?;
    let cs: &ContactStructure = s.contact()?;
    let hams = sys.hamiltonians.clone().ok_or_else(|| Error::Invalid(format!("{} declares no Hamiltonians", name(s))))?;
    let jac = ProductJacobi::new(cs, copies)?;
    let p = jac.prolongation();
    let checks = casimir_sign_check(&jac, &hams, &sys.generators, &sl2_casimir_variants())?;
    let casimir = checks
        .iter()
        .find(|c| c.annihilated && c.central)
        .ok_or_else(|| Error::Rejected("no Casimir candidate yields a first integral of the prolonged system".into()))?;
    let names = if syms.is_empty() { default_symmetries(s, sys) } else { syms.to_vec() };
    let sym: Vec<(String, VectorField)> = names.iter().map(|n| Ok((n.clone(), p.field(s.field(n)?)?))).collect::<Result<_>>()?;
    let ann: Vec<VectorField> = sys.generators.iter().map(|x| p.field(x)).collect::<Result<_>>()?;
    let set = generate_integrals(&casimir.integral, &sym, &ann, s.chart.dim())?;
    let first = p.block_variables(1);
    let wrt: Vec<&str> = first.iter().map(String::as_str).collect();
    let rank = rank_check(&set, &wrt, seed)?;
    let rule = if set.complete && rank.rank == s.chart.dim() { Some(emit_superposition_system(p, &set)?) } else { None };
    Ok(json!({
        "system": name(s),
        "copies": copies,
        "chart": p.product().variables(),
        "casimir_checks": serde_json::to_value(&checks).expect("report serializes"),
        "symmetries": names,
        "integrals": set.integrals.iter().map(|(n, i)| json!({ "name": n, "expression": i.to_string() })).collect::<Vec<_>>(),
        "complete": set.complete,
        "notes": set.notes,
        "rank": serde_json::to_value(&rank).expect("report serializes"),
        "superposition_rule": rule.map(|r| serde_json::to_value(&r).expect("report serializes")),
    }))
}

fn integrate_cmd(a: &crate::IntegrateArgs) -> Result<Output> {
    let s = load(&a.sys.system)?;
    let tr = integrate(s.system()?, &a.x0, a.t0, a.t1, a.step)?;
    let integrals: Vec<(String, RationalExpr)> =
        a.monitors.iter().map(|m| Ok((m.clone(), expr(m, &s.chart)?))).collect::<Result<_>>()?;
    let reports = monitor_first_integrals(&tr, &integrals)?;
    let text = match a.sys.format {
        Format::Csv => {
            let extra: Vec<(String, Vec<f64>)> = reports.iter().map(|r| (r.quantity.clone(), r.values.clone())).collect();
            tr.to_csv(&extra)
        }
        Format::Json => pretty(&json!({
            "trajectory": serde_json::to_value(&tr).expect("trajectory serializes"),
            "monitors": serde_json::to_value(&reports).expect("report serializes"),
        })),
    };
    Ok(Output { text, ok: true })
}

fn portrait(a: &crate::PortraitArgs) -> Result<Output> {
    let s = load(&a.sys.system)?;
    let sys = s.system()?;
    let table = phase_portrait(&CompiledSystem::from_system(sys), &Grid::cube(a.lo, a.hi, a.count, s.chart.dim())?, a.t)?;
    let text = match a.sys.format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let zeros = if s.chart.dim() == 2 { table.zero_clusters()? } else { Vec::new() };
            let field_t = sys.field_at(&q_of(a.t)?)?;
            let equilibria: Vec<Value> = zeros
                .iter()
                .filter_map(|z| exact_equilibrium(&field_t, z))
                .map(|r| serde_json::to_value(&r).expect("report serializes"))
                .collect();
            pretty(&json!({
                "table": serde_json::to_value(&table).expect("table serializes"),
                "zero_clusters": zeros,
                "equilibria": equilibria,
            }))
        }
    };
    Ok(Output { text, ok: true })
}

/// Classify the equilibrium near `z` when a rational point with denominator
/// at most 12 close to `z` is an exact zero of the field.
fn exact_equilibrium(x: &VectorField, z: &[f64]) -> Option<EquilibriumReport> {
    (1..=12i64).find_map(|den| {
        let pt: Vec<Q> = z.iter().map(|c| Q::new(((c * den as f64).round() as i64).into(), den.into())).collect();
        classify_equilibrium(x, &pt).ok()
    })
}

fn q_of(t: f64) -> Result<Q> {
    Q::from_float(t).ok_or_else(|| Error::Invalid(format!("time {t} is not finite")))
}

fn verify(a: &crate::VerifyArgs) -> Result<Output> {
    let reports = match a.criterion {
        Some(id) if (1..=9).contains(&id) => vec![run_criterion(id, a.seed)],
        Some(id) => return Err(Error::Invalid(format!("no criterion {id}; criteria are 1 to 9"))),
        None => run_all(a.seed),
    };
    let ok = reports.iter().all(|r| r.passed);
    let text = match a.format {
        Format::Csv => reports.iter().map(|r| r.line()).collect::<Vec<_>>().join("\n"),
        Format::Json => pretty(&json!({ "passed": ok, "criteria": serde_json::to_value(&reports).expect("report serializes") })),
    };
    Ok(Output { text, ok })
}
