//! JSON system definitions: schema, eager validation and the bundled corpus.
//!
//! Every expression is a string in the expression grammar of the declared
//! chart. Loading resolves all names, builds the geometric objects and runs
//! the invariant checks at once, so a definition that loads is consistent.
//! Errors carry a JSON-pointer path into the document.

mod bundled;

pub use bundled::{bundled, bundled_names};

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cartan::{pullback, CoordinateMap, KForm, MapComponent, VectorField};
use crate::contactgeo::{check_contact, ContactStructure};
use crate::error::{Error, Result};
use crate::exprcore::{parse_expr, Chart, ExpAtom, RationalExpr, Q};
use crate::liealgebra::{verify_structure, StructureConstants};
use crate::liesystems::{time_chart, VGSystem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDefinition {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub chart: ChartSpec,
    #[serde(default)]
    pub vector_fields: Vec<FieldSpec>,
    #[serde(default)]
    pub one_forms: Vec<FormSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact_form: Option<String>,
    /// Generator names; all vector fields in order when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    /// `b_α(t)`, one per generator.
    #[serde(default)]
    pub coefficients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonians: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_constants: Option<AlgebraSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coordinate_maps: Vec<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub id: String,
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<AtomSpec>,
}

/// `name = exp(scale * base)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub name: String,
    pub base: String,
    pub scale: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub name: String,
    pub components: Vec<String>,
}

/// A form given by `"dx^dy" -> coefficient` terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub name: String,
    pub terms: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub name: String,
    /// Vector field names, in basis order.
    pub basis: Vec<String>,
    /// `[a, b, rhs]` meaning `[a, b] = rhs`.
    pub relations: Vec<[String; 3]>,
}

/// A map from an auxiliary chart into the main chart. Components of the form
/// `ln(g)` denote logarithmic coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub name: String,
    pub source: ChartSpec,
    pub components: Vec<String>,
    /// Forms on the source chart.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub source_forms: Vec<FormSpec>,
    /// Checks `map^* target_form = source_form`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pullbacks: Vec<PullbackSpec>,
    /// Main-chart Hamiltonians pulled back must equal these, in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_hamiltonians: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PullbackSpec {
    pub target_form: String,
    pub source_form: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub invariant_vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed_vars: Vec<String>,
    /// Vector field names generating the momentum map.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frame: Vec<String>,
    /// Level `μ`, rationals as strings.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mu: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct LoadedMap {
    pub name: String,
    pub map: CoordinateMap,
    pub source_forms: BTreeMap<String, KForm>,
    pub source_hamiltonians: Option<Vec<RationalExpr>>,
}

/// A definition with every object built and checked.
#[derive(Clone, Debug)]
pub struct LoadedSystem {
    pub definition: SystemDefinition,
    pub chart: Chart,
    pub fields: Vec<(String, VectorField)>,
    pub forms: BTreeMap<String, KForm>,
    pub contact: Option<ContactStructure>,
    pub system: Option<VGSystem>,
    pub algebra: Option<StructureConstants>,
    pub maps: Vec<LoadedMap>,
    pub mu: Vec<Q>,
}

impl LoadedSystem {
    pub fn field(&self, name: &str) -> Result<&VectorField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f).ok_or_else(|| Error::UnknownIdentifier(name.into()))
    }

    pub fn form(&self, name: &str) -> Result<&KForm> {
        self.forms.get(name).ok_or_else(|| Error::UnknownIdentifier(name.into()))
    }

    pub fn system(&self) -> Result<&VGSystem> {
        self.system.as_ref().ok_or_else(|| Error::Invalid(format!("{} declares no Lie system", self.definition.name)))
    }

    pub fn contact(&self) -> Result<&ContactStructure> {
        self.contact.as_ref().ok_or_else(|| Error::Invalid(format!("{} declares no contact form", self.definition.name)))
    }

    /// Named vector fields listed in the reduction frame.
    pub fn frame(&self) -> Result<Vec<(String, VectorField)>> {
        let names = self.definition.reduction.as_ref().map(|r| r.frame.clone()).unwrap_or_default();
        names.iter().map(|n| Ok((n.clone(), self.field(n)?.clone()))).collect()
    }
}

pub fn parse_definition(text: &str) -> Result<SystemDefinition> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: pointer(&e.path().to_string()),
        message: e.inner().to_string(),
    })
}

/// `a.b[2].c` to `/a/b/2/c`.
fn pointer(path: &str) -> String {
    if path == "." || path.is_empty() {
        return "/".into();
    }
    let mut out = String::new();
    for part in path.split('.') {
        let mut rest = part;
        if let Some(i) = rest.find('[') {
            out.push('/');
            out.push_str(&rest[..i]);
            rest = &rest[i..];
            while let Some(stripped) = rest.strip_prefix('[') {
                let j = stripped.find(']').unwrap_or(stripped.len());
                out.push('/');
                out.push_str(&stripped[..j]);
                rest = stripped.get(j + 1..).unwrap_or("");
            }
        } else {
            out.push('/');
            out.push_str(rest);
        }
    }
    out
}

pub fn to_json(def: &SystemDefinition) -> String {
    serde_json::to_string_pretty(def).expect("definitions serialize")
}

/// Read a definition file, or a bundled definition when `name_or_path` names one.
pub fn load(name_or_path: &str) -> Result<LoadedSystem> {
    if let Some(text) = bundled(name_or_path) {
        return load_str(text);
    }
    let path = Path::new(name_or_path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read `{name_or_path}`: {e}; bundled systems: {}", bundled_names().join(", "))))?;
    load_str(&text)
}

pub fn load_str(text: &str) -> Result<LoadedSystem> {
    build(parse_definition(text)?)
}

/// Attach a JSON-pointer location to errors raised while building a part.
fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Syntax { offset, message } => Error::Syntax { offset, message: format!("{path}: {message}") },
        Error::Schema { .. } => e,
        Error::UnknownIdentifier(_) | Error::InvalidChart(_) | Error::ChartMismatch(..) | Error::Invalid(_) => {
            Error::Schema { path: path.into(), message: e.to_string() }
        }
        Error::NotContact(m) => Error::NotContact(format!("{path}: {m}")),
        Error::NotHamiltonian(m) => Error::NotHamiltonian(format!("{path}: {m}")),
        Error::Rejected(m) => Error::Rejected(format!("{path}: {m}")),
        Error::IdentityViolation(m) => Error::IdentityViolation(format!("{path}: {m}")),
        other => other,
    })
}

fn chart_of(spec: &ChartSpec, path: &str) -> Result<Chart> {
    let atoms = spec
        .atoms
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let scale = parse_q(&a.scale, &format!("{path}/atoms/{i}/scale"))?;
            Ok(ExpAtom::new(a.name.clone(), a.base.clone(), scale))
        })
        .collect::<Result<Vec<_>>>()?;
    at(path, Chart::with_atoms(&spec.id, &spec.variables, atoms))
}

fn parse_q(s: &str, path: &str) -> Result<Q> {
    s.trim().parse::<Q>().map_err(|e| Error::Schema { path: path.into(), message: format!("`{s}` is not a rational: {e}") })
}

fn expr(s: &str, chart: &Chart, path: &str) -> Result<RationalExpr> {
    at(path, parse_expr(s, chart))
}

fn form_of(spec: &FormSpec, chart: &Chart, path: &str) -> Result<KForm> {
    for (k, v) in &spec.terms {
        expr(v, chart, &format!("{path}/terms/{k}"))?;
    }
    let terms: Vec<(&String, &String)> = spec.terms.iter().collect();
    at(&format!("{path}/terms"), KForm::parse(chart, &terms))
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str, path: &str) -> Result<&'a T> {
    items
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v)
        .ok_or_else(|| Error::Schema { path: path.into(), message: format!("`{name}` is not defined") })
}

fn unique<'a>(names: impl Iterator<Item = &'a String>, path: &str) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for (i, n) in names.enumerate() {
        if !seen.insert(n) {
            return Err(Error::Schema { path: format!("{path}/{i}/name"), message: format!("duplicate name `{n}`") });
        }
    }
    Ok(())
}

/// Build and validate every object of a parsed definition.
pub fn build(def: SystemDefinition) -> Result<LoadedSystem> {
    let chart = chart_of(&def.chart, "/chart")?;
    unique(def.vector_fields.iter().map(|f| &f.name), "/vector_fields")?;
    unique(def.one_forms.iter().map(|f| &f.name), "/one_forms")?;

    let mut fields = Vec::new();
    for (i, f) in def.vector_fields.iter().enumerate() {
        let path = format!("/vector_fields/{i}");
        if f.components.len() != chart.dim() {
            return Err(Error::Schema {
                path: format!("{path}/components"),
                message: format!("{} components on a {}-dimensional chart", f.components.len(), chart.dim()),
            });
        }
        let comps = f
            .components
            .iter()
            .enumerate()
            .map(|(j, c)| expr(c, &chart, &format!("{path}/components/{j}")))
            .collect::<Result<Vec<_>>>()?;
        fields.push((f.name.clone(), at(&path, VectorField::new(&chart, comps))?));
    }

    let mut forms = BTreeMap::new();
    for (i, f) in def.one_forms.iter().enumerate() {
        forms.insert(f.name.clone(), form_of(f, &chart, &format!("/one_forms/{i}"))?);
    }

    let contact = match &def.contact_form {
        None => None,
        Some(name) => {
            let eta = forms.get(name).ok_or_else(|| Error::Schema {
                path: "/contact_form".into(),
                message: format!("`{name}` is not a declared one-form"),
            })?;
            Some(at("/contact_form", check_contact(&chart, eta))?)
        }
    };

    let generator_names: Vec<String> = match &def.generators {
        Some(g) => g.clone(),
        None if def.coefficients.is_empty() => Vec::new(),
        None => fields.iter().map(|(n, _)| n.clone()).collect(),
    };
    let hamiltonians = match &def.hamiltonians {
        None => None,
        Some(hs) => Some(
            hs.iter()
                .enumerate()
                .map(|(i, h)| expr(h, &chart, &format!("/hamiltonians/{i}")))
                .collect::<Result<Vec<_>>>()?,
        ),
    };

    let system = if generator_names.is_empty() && def.coefficients.is_empty() {
        None
    } else {
        let gens = generator_names
            .iter()
            .enumerate()
            .map(|(i, n)| Ok((n.clone(), lookup(&fields, n, &format!("/generators/{i}"))?.clone())))
            .collect::<Result<Vec<_>>>()?;
        let t = time_chart();
        let bs = def
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, b)| expr(b, &t, &format!("/coefficients/{i}")))
            .collect::<Result<Vec<_>>>()?;
        let sys = at("/coefficients", VGSystem::new(&def.name, &chart, gens, bs))?;
        Some(match &contact {
            Some(cs) => {
                if let Some(hs) = &hamiltonians {
                    if hs.len() != sys.generators.len() {
                        return Err(Error::Schema {
                            path: "/hamiltonians".into(),
                            message: format!("{} Hamiltonians for {} generators", hs.len(), sys.generators.len()),
                        });
                    }
                    for (i, ((name, x), h)) in sys.generator_names.iter().zip(&sys.generators).zip(hs).enumerate() {
                        let xh = at(&format!("/hamiltonians/{i}"), cs.field_of(h))?;
                        if xh != *x {
                            return Err(Error::NotHamiltonian(format!(
                                "/hamiltonians/{i}: h = {h} gives X_h - {name} = {}",
                                xh.sub(x)
                            )));
                        }
                    }
                }
                at("/hamiltonians", sys.with_contact(cs.clone(), hamiltonians.clone()))?
            }
            None if hamiltonians.is_some() => {
                return Err(Error::Schema { path: "/hamiltonians".into(), message: "Hamiltonians need a contact_form".into() })
            }
            None => sys,
        })
    };

    let algebra = match &def.structure_constants {
        None => None,
        Some(a) => {
            let basis: Vec<&str> = a.basis.iter().map(String::as_str).collect();
            let rels: Vec<(&str, &str, &str)> =
                a.relations.iter().map(|[x, y, z]| (x.as_str(), y.as_str(), z.as_str())).collect();
            let alg = at("/structure_constants", StructureConstants::from_relations(&a.name, &basis, vec![], &rels))?;
            let fs = a
                .basis
                .iter()
                .enumerate()
                .map(|(i, n)| Ok(lookup(&fields, n, &format!("/structure_constants/basis/{i}"))?.clone()))
                .collect::<Result<Vec<_>>>()?;
            let check = at("/structure_constants", verify_structure(&fs, &alg))?;
            if let Some((i, j, r)) = check.residuals.first() {
                return Err(Error::Rejected(format!(
                    "/structure_constants: [{}, {}] - declared value = {r}",
                    a.basis[*i], a.basis[*j]
                )));
            }
            Some(alg)
        }
    };

    let mut maps = Vec::new();
    for (i, m) in def.coordinate_maps.iter().enumerate() {
        maps.push(build_map(m, &chart, &forms, hamiltonians.as_deref(), &format!("/coordinate_maps/{i}"))?);
    }

    let mut mu = Vec::new();
    if let Some(r) = &def.reduction {
        for (i, v) in r.invariant_vars.iter().chain(&r.fixed_vars).enumerate() {
            at(&format!("/reduction/vars/{i}"), chart.var_index(v))?;
        }
        for (i, n) in r.frame.iter().enumerate() {
            lookup(&fields, n, &format!("/reduction/frame/{i}"))?;
        }
        for (i, s) in r.mu.iter().enumerate() {
            mu.push(parse_q(s, &format!("/reduction/mu/{i}"))?);
        }
        if !r.mu.is_empty() && r.mu.len() != r.frame.len() {
            return Err(Error::Schema { path: "/reduction/mu".into(), message: "mu needs one entry per frame field".into() });
        }
    }

    Ok(LoadedSystem { definition: def, chart, fields, forms, contact, system, algebra, maps, mu })
}

fn build_map(
    m: &MapSpec,
    target: &Chart,
    forms: &BTreeMap<String, KForm>,
    hamiltonians: Option<&[RationalExpr]>,
    path: &str,
) -> Result<LoadedMap> {
    let source = chart_of(&m.source, &format!("{path}/source"))?;
    let comps = m
        .components
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let p = format!("{path}/components/{j}");
            let c = c.trim();
            match c.strip_prefix("ln(").and_then(|r| r.strip_suffix(')')) {
                Some(inner) => Ok(MapComponent::Log(expr(inner, &source, &p)?)),
                None => Ok(MapComponent::Rational(expr(c, &source, &p)?)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let map = at(path, CoordinateMap::new(&source, target, comps))?;
    let mut source_forms = BTreeMap::new();
    for (i, f) in m.source_forms.iter().enumerate() {
        source_forms.insert(f.name.clone(), form_of(f, &source, &format!("{path}/source_forms/{i}"))?);
    }
    for (i, pb) in m.pullbacks.iter().enumerate() {
        let p = format!("{path}/pullbacks/{i}");
        let tf = forms
            .get(&pb.target_form)
            .ok_or_else(|| Error::Schema { path: p.clone(), message: format!("`{}` is not a declared one-form", pb.target_form) })?;
        let sf = source_forms
            .get(&pb.source_form)
            .ok_or_else(|| Error::Schema { path: p.clone(), message: format!("`{}` is not a source form", pb.source_form) })?;
        let pulled = at(&p, pullback(&map, tf))?;
        if pulled != *sf {
            return Err(Error::Rejected(format!("{p}: pullback of {} minus {} = {}", pb.target_form, pb.source_form, pulled.sub(sf))));
        }
    }
    let source_hamiltonians = match &m.source_hamiltonians {
        None => None,
        Some(hs) => {
            let p = format!("{path}/source_hamiltonians");
            let main = hamiltonians
                .ok_or_else(|| Error::Schema { path: p.clone(), message: "the main chart declares no Hamiltonians".into() })?;
            if main.len() != hs.len() {
                return Err(Error::Schema { path: p, message: format!("{} entries for {} Hamiltonians", hs.len(), main.len()) });
            }
            let mut out = Vec::new();
            for (i, (s, h)) in hs.iter().zip(main).enumerate() {
                let pi = format!("{p}/{i}");
                let want = expr(s, &source, &pi)?;
                let got = at(&pi, pullback(&map, &KForm::function(h.clone())))?.as_function();
                if got != want {
                    return Err(Error::Rejected(format!("{pi}: pulled-back Hamiltonian minus declared = {}", &got - &want)));
                }
                out.push(want);
            }
            Some(out)
        }
    };
    Ok(LoadedMap { name: m.name.clone(), map, source_forms, source_hamiltonians })
}
