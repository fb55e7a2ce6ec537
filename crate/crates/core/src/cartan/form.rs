use std::collections::BTreeMap;
use std::fmt;

use super::field::VectorField;
use super::map::CoordinateMap;
use crate::error::{Error, Result};
use crate::exprcore::{parse_expr, Chart, RationalExpr, Q};

/// A differential k-form; keys are strictly increasing index tuples.
#[derive(Clone, PartialEq, Eq)]
pub struct KForm {
    chart: Chart,
    degree: usize,
    terms: BTreeMap<Vec<usize>, RationalExpr>,
}

/// Concatenate two increasing index lists into a sorted one with the sign of
/// the shuffle, or `None` if they share an index.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((out, if inversions % 2 == 0 { 1 } else { -1 }))
}

/// Sort an index list, returning its permutation sign, or `None` on a repeat.
fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

impl KForm {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        KForm { chart: chart.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn function(f: RationalExpr) -> Self {
        let mut k = KForm::zero(&f.chart().clone(), 0);
        k.add_term(Vec::new(), f);
        k
    }

    /// `sum_i coeffs[i] dx^i`.
    pub fn one_form(chart: &Chart, coeffs: Vec<RationalExpr>) -> Result<Self> {
        if coeffs.len() != chart.dim() {
            return Err(Error::Invalid("one-form needs one coefficient per variable".into()));
        }
        let mut k = KForm::zero(chart, 1);
        for (i, c) in coeffs.into_iter().enumerate() {
            chart.ensure_same(c.chart())?;
            k.add_term(vec![i], c);
        }
        Ok(k)
    }

    /// Build from possibly unsorted index tuples (sign-corrected, summed).
    pub fn from_terms(chart: &Chart, degree: usize, terms: Vec<(Vec<usize>, RationalExpr)>) -> Result<Self> {
        if degree > chart.dim() {
            return Err(Error::Invalid(format!("degree {degree} exceeds chart dimension {}", chart.dim())));
        }
        let mut k = KForm::zero(chart, degree);
        for (idx, c) in terms {
            if idx.len() != degree || idx.iter().any(|i| *i >= chart.dim()) {
                return Err(Error::Invalid(format!("bad index tuple {idx:?} for a {degree}-form")));
            }
            chart.ensure_same(c.chart())?;
            if let Some((sorted, sign)) = sort_sign(&idx) {
                k.add_term(sorted, if sign < 0 { -c } else { c });
            }
        }
        Ok(k)
    }

    /// Parse keys like `"dq^dp"` (or `"1"` for functions) with expression strings.
    pub fn parse<K: AsRef<str>, V: AsRef<str>>(chart: &Chart, terms: &[(K, V)]) -> Result<Self> {
        let mut parsed = Vec::new();
        let mut degree = None;
        for (key, val) in terms {
            let idx = parse_key(chart, key.as_ref())?;
            match degree {
                None => degree = Some(idx.len()),
                Some(d) if d != idx.len() => return Err(Error::Invalid(format!("mixed degrees in form at key `{}`", key.as_ref()))),
                _ => {}
            }
            parsed.push((idx, parse_expr(val.as_ref(), chart)?));
        }
        KForm::from_terms(chart, degree.unwrap_or(1), parsed)
    }

    fn add_term(&mut self, idx: Vec<usize>, c: RationalExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&idx) {
            None => {
                self.terms.insert(idx, c);
            }
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(idx, s);
                }
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RationalExpr)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, idx: &[usize]) -> RationalExpr {
        self.terms.get(idx).cloned().unwrap_or_else(|| RationalExpr::zero(&self.chart))
    }

    /// The scalar of a 0-form.
    pub fn as_function(&self) -> RationalExpr {
        assert_eq!(self.degree, 0);
        self.coefficient(&[])
    }

    /// Coefficients of a 1-form in chart order.
    pub fn one_form_coeffs(&self) -> Vec<RationalExpr> {
        assert_eq!(self.degree, 1);
        (0..self.chart.dim()).map(|i| self.coefficient(&[i])).collect()
    }

    pub fn add(&self, other: &KForm) -> KForm {
        assert!(self.chart.same(&other.chart) && self.degree == other.degree, "incompatible forms");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &KForm) -> KForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KForm {
        KForm { chart: self.chart.clone(), degree: self.degree, terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }

    pub fn scale(&self, f: &RationalExpr) -> KForm {
        let mut out = KForm::zero(&self.chart, self.degree);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * f);
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> KForm {
        let mut out = KForm::zero(&self.chart, self.degree);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.scale(c));
        }
        out
    }

    /// Re-express on a chart that contains every variable by name.
    pub fn embed(&self, target: &Chart) -> Result<KForm> {
        let map: Vec<usize> = self.chart.variables().iter().map(|v| target.var_index(v)).collect::<Result<_>>()?;
        let mut terms = Vec::new();
        for (k, v) in &self.terms {
            terms.push((k.iter().map(|i| map[*i]).collect(), v.embed(target)?));
        }
        KForm::from_terms(target, self.degree, terms)
    }

    /// Ratio to another form when the two are proportional, else `None`.
    pub fn ratio_to(&self, other: &KForm) -> Option<RationalExpr> {
        if self.degree != other.degree || other.is_zero() {
            return None;
        }
        let (k0, v0) = other.terms.iter().next()?;
        let r = self.coefficient(k0).checked_div(v0).ok()?;
        if other.scale(&r) == *self {
            Some(r)
        } else {
            None
        }
    }

    pub fn key_string(chart: &Chart, idx: &[usize]) -> String {
        if idx.is_empty() {
            return "1".into();
        }
        idx.iter().map(|i| format!("d{}", chart.variables()[*i])).collect::<Vec<_>>().join("^")
    }

    /// `(key, expression)` pairs in the definition-file format.
    pub fn to_named_terms(&self) -> Vec<(String, String)> {
        self.terms.iter().map(|(k, v)| (KForm::key_string(&self.chart, k), v.to_string())).collect()
    }
}

fn parse_key(chart: &Chart, key: &str) -> Result<Vec<usize>> {
    let key = key.trim();
    if key == "1" {
        return Ok(Vec::new());
    }
    key.split('^')
        .map(|part| {
            let part = part.trim();
            let name = part.strip_prefix('d').ok_or_else(|| Error::Invalid(format!("form key part `{part}` must start with `d`")))?;
            chart.var_index(name)
        })
        .collect()
}

pub fn wedge(a: &KForm, b: &KForm) -> KForm {
    assert!(a.chart.same(&b.chart), "wedge on different charts");
    let degree = a.degree + b.degree;
    let mut out = KForm::zero(&a.chart, degree);
    if degree > a.chart.dim() {
        return out;
    }
    for (i, f) in &a.terms {
        for (j, g) in &b.terms {
            if let Some((idx, sign)) = merge_sign(i, j) {
                let c = f * g;
                out.add_term(idx, if sign < 0 { -c } else { c });
            }
        }
    }
    out
}

pub fn ext_d(a: &KForm) -> KForm {
    let n = a.chart.dim();
    let mut out = KForm::zero(&a.chart, a.degree + 1);
    if a.degree >= n {
        return out;
    }
    for (idx, f) in &a.terms {
        for v in 0..n {
            if idx.contains(&v) {
                continue;
            }
            let df = f.partial_idx(v);
            if df.is_zero() {
                continue;
            }
            let (sorted, sign) = merge_sign(&[v], idx).unwrap();
            out.add_term(sorted, if sign < 0 { -df } else { df });
        }
    }
    out
}

/// Contraction in the first slot. Errors on 0-forms.
pub fn interior(x: &VectorField, a: &KForm) -> Result<KForm> {
    x.chart().ensure_same(&a.chart)?;
    if a.degree == 0 {
        return Err(Error::Invalid("interior product of a 0-form".into()));
    }
    let mut out = KForm::zero(&a.chart, a.degree - 1);
    for (idx, f) in &a.terms {
        for (pos, i) in idx.iter().enumerate() {
            let xi = x.component(*i);
            if xi.is_zero() {
                continue;
            }
            let mut rest = idx.clone();
            rest.remove(pos);
            let c = f * xi;
            out.add_term(rest, if pos % 2 == 1 { -c } else { c });
        }
    }
    Ok(out)
}

/// Lie derivative from the coordinate formula
/// `L_X(f dx^I) = X(f) dx^I + f sum_m dx^{i_1}...d(X^{i_m})...dx^{i_k}`.
pub fn lie_derivative(x: &VectorField, a: &KForm) -> KForm {
    assert!(x.chart().same(&a.chart), "lie_derivative on different charts");
    let n = a.chart.dim();
    let mut out = KForm::zero(&a.chart, a.degree);
    let jac: Vec<Vec<RationalExpr>> = (0..n)
        .map(|i| (0..n).map(|j| x.component(i).partial_idx(j)).collect())
        .collect();
    for (idx, f) in &a.terms {
        out.add_term(idx.clone(), x.apply(f));
        for (pos, i) in idx.iter().enumerate() {
            for (j, dij) in jac[*i].iter().enumerate() {
                if dij.is_zero() {
                    continue;
                }
                let mut new_idx = idx.clone();
                new_idx[pos] = j;
                if let Some((sorted, sign)) = sort_sign(&new_idx) {
                    let c = f * dij;
                    out.add_term(sorted, if sign < 0 { -c } else { c });
                }
            }
        }
    }
    out
}

/// Pull a form on `m.target()` back to `m.source()`.
pub fn pullback(m: &CoordinateMap, a: &KForm) -> Result<KForm> {
    m.target().ensure_same(&a.chart)?;
    let src = m.source();
    let diffs: Vec<KForm> = (0..m.target().dim()).map(|j| m.differential(j)).collect::<Result<_>>()?;
    let mut out = KForm::zero(src, a.degree);
    for (idx, f) in &a.terms {
        let mut acc = KForm::function(m.compose(f)?);
        for j in idx {
            acc = wedge(&acc, &diffs[*j]);
        }
        out = out.add(&acc);
    }
    Ok(out)
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| if k.is_empty() { format!("{v}") } else { format!("({v})*{}", KForm::key_string(&self.chart, k)) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm<{}>[{self}]", self.degree)
    }
}
