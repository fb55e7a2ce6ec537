//! Left-invariant contact forms on three-dimensional algebras, compared
//! against the classification table.
//!
//! Zero sets are compared through squarefree parts after removing the
//! parameter-only content of `P`; that content must not vanish on the
//! parameter range, which is decided by a Sturm count.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{contact_condition_3d, Param, StructureConstants};
use crate::error::Result;
use crate::exprcore::{gcd, parse_expr, poly_to_string, squarefree, Monomial, Poly, Q};

/// One row of the classification table.
#[derive(Clone, Copy, Debug)]
pub struct TableRow {
    pub algebra: &'static str,
    pub display: &'static str,
    /// `[e1,e2]`, `[e1,e3]`, `[e3,e2]` as printed in the table.
    pub brackets: [&'static str; 3],
    /// The stated condition polynomial in `l1, l2, l3`; `None` means no contact form.
    pub condition: Option<&'static str>,
    /// The table states `> 0` rather than `≠ 0`.
    pub strict: bool,
}

pub const CONTACT_TABLE: [TableRow; 9] = [
    TableRow { algebra: "sl2", display: "sl(2)", brackets: ["e2", "-e3", "-e1"], condition: Some("l1^2 + 2*l2*l3"), strict: true },
    TableRow { algebra: "su2", display: "su(2)", brackets: ["e3", "-e2", "-e1"], condition: Some("l1^2 + l2^2 + l3^2"), strict: true },
    TableRow { algebra: "h3", display: "h3", brackets: ["e3", "0", "0"], condition: Some("l3"), strict: false },
    TableRow { algebra: "r3_0p", display: "r'3,0", brackets: ["-e3", "e2", "0"], condition: Some("l2^2 + l3^2"), strict: true },
    TableRow { algebra: "r3_m1", display: "r3,-1", brackets: ["e2", "-e3", "0"], condition: Some("l2*l3"), strict: false },
    TableRow { algebra: "r3_p1", display: "r3,1", brackets: ["e2", "e3", "0"], condition: None, strict: false },
    TableRow { algebra: "r3", display: "r3", brackets: ["0", "-e1", "e1 + e2"], condition: Some("l1"), strict: false },
    TableRow { algebra: "r3_lambda", display: "r3,lambda", brackets: ["0", "-e1", "lambda*e2"], condition: Some("l1*l2"), strict: false },
    TableRow {
        algebra: "r3p_lambda",
        display: "r'3,lambda",
        brackets: ["0", "e2 - lambda*e1", "lambda*e2 + e1"],
        condition: Some("l1^2 + l2^2"),
        strict: true,
    },
];

pub fn table_row(algebra: &str) -> Option<&'static TableRow> {
    CONTACT_TABLE.iter().find(|r| r.algebra == algebra)
}

/// Report for one three-dimensional algebra.
#[derive(Clone, Debug, Serialize)]
pub struct Classify3d {
    pub algebra: String,
    pub relations: Vec<String>,
    pub parameters: Vec<String>,
    /// `P` with `δϑ∧ϑ = P e^1∧e^2∧e^3`.
    pub polynomial: String,
    pub contact_forms_exist: bool,
    pub condition: String,
    /// Factor of `P` involving only parameters, and whether it stays nonzero on their range.
    pub parameter_factor: String,
    pub parameter_factor_nonvanishing: bool,
    pub table_condition: Option<String>,
    pub matches_table: Option<bool>,
    pub notes: Vec<String>,
}

/// Compute `P` and compare it with the table row of the same name, if any.
pub fn classify_3d(alg: &StructureConstants) -> Result<Classify3d> {
    let cc = contact_condition_3d(alg)?;
    let names = alg.ring().ring_names();
    let p = &cc.polynomial;
    let (content, core) = split_parameter_content(p, 3);
    let nonvanishing = !p.is_zero() && content_nonvanishing(&content, alg.params());
    let mut notes = Vec::new();
    let condition = if cc.exists {
        format!("{} != 0", poly_to_string(&squarefree(&core), &names))
    } else {
        "none: δϑ∧ϑ vanishes identically".to_string()
    };
    let row = table_row(alg.name());
    let (table_condition, matches) = match row {
        None => (None, None),
        Some(row) => {
            let matches = match row.condition {
                None => p.is_zero(),
                Some(t) => {
                    let t = parse_expr(t, alg.ring())?;
                    !p.is_zero() && nonvanishing && same_zero_set(&core, t.numer())
                }
            };
            if let (Some(t), true) = (row.condition, row.strict) {
                let tp = parse_expr(t, alg.ring())?.numer().clone();
                if manifestly_nonnegative(&tp) {
                    notes.push(format!("the table states {t} > 0; this is a sum of even monomials, so > 0 and != 0 agree"));
                } else if let Some(w) = negative_witness(&tp) {
                    notes.push(format!(
                        "the table states {t} > 0, but nondegeneracy only needs P != 0: at (l1, l2, l3) = ({}, {}, {}) the stated polynomial is negative and ϑ is still a contact form",
                        w[0], w[1], w[2]
                    ));
                }
            }
            let shown = match row.condition {
                None => "no contact form".to_string(),
                Some(t) => format!("{t} {} 0", if row.strict { ">" } else { "!=" }),
            };
            (Some(shown), Some(matches))
        }
    };
    Ok(Classify3d {
        algebra: alg.name().to_string(),
        relations: alg.relations(),
        parameters: alg.params().iter().map(|p| p.describe()).collect(),
        polynomial: poly_to_string(p, &names),
        contact_forms_exist: cc.exists,
        condition,
        parameter_factor: poly_to_string(&content, &names),
        parameter_factor_nonvanishing: nonvanishing,
        table_condition,
        matches_table: matches,
        notes,
    })
}

/// Split `p = content · core`, where `content` involves only ring variables
/// at positions `>= nlambda` (the parameters).
fn split_parameter_content(p: &Poly, nlambda: usize) -> (Poly, Poly) {
    let n = p.nvars();
    if p.is_zero() {
        return (Poly::one(n), p.clone());
    }
    let mut groups: std::collections::BTreeMap<Vec<u32>, Poly> = std::collections::BTreeMap::new();
    for (m, c) in p.terms() {
        let key = m.exps()[..nlambda].to_vec();
        let mut exps = m.exps().to_vec();
        exps[..nlambda].iter_mut().for_each(|e| *e = 0);
        let slot = groups.entry(key).or_insert_with(|| Poly::zero(n));
        *slot = &*slot + &Poly::monomial(Monomial::new(exps), c.clone());
    }
    let mut content = Poly::zero(n);
    for g in groups.values() {
        content = if content.is_zero() { g.clone() } else { gcd(&content, g) };
    }
    let content = content.integer_normalize().1;
    let core = p.div_exact(&content).expect("content divides");
    (content, core)
}

fn content_nonvanishing(content: &Poly, params: &[Param]) -> bool {
    if content.is_constant() {
        return !content.is_zero();
    }
    let nl = content.nvars() - params.len();
    let support = content.support();
    let used: Vec<usize> = (nl..content.nvars()).filter(|&v| support[v]).collect();
    if used.len() != 1 {
        return false;
    }
    let v = used[0];
    let param = &params[v - nl];
    let mut coeffs: Vec<Q> = content.to_univariate(v).iter().map(|c| c.as_constant().unwrap_or_else(Q::zero)).collect();
    if param.nonzero {
        while coeffs.first().is_some_and(|c| c.is_zero()) {
            coeffs.remove(0);
        }
    }
    real_roots_in(&coeffs, param.lower.as_ref(), param.upper.as_ref()) == 0
}

/// Equal squarefree parts up to a constant factor.
pub fn same_zero_set(p: &Poly, t: &Poly) -> bool {
    let (a, b) = (squarefree(p), squarefree(t));
    a == b || a == -&b
}

fn manifestly_nonnegative(t: &Poly) -> bool {
    t.terms().all(|(m, c)| c.is_positive() && m.exps().iter().all(|e| e % 2 == 0))
}

/// A small integer point where `t < 0`, if any exists in `[-2, 2]^3`.
fn negative_witness(t: &Poly) -> Option<[i64; 3]> {
    let n = t.nvars();
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                let mut pt = vec![Q::zero(); n];
                pt[0] = Q::from_integer(a.into());
                pt[1] = Q::from_integer(b.into());
                pt[2] = Q::from_integer(c.into());
                if t.eval(&pt).is_negative() {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

// ---------- univariate Sturm counting ----------

fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn deriv(p: &[Q]) -> Vec<Q> {
    p.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer((i as i64).into())).collect()
}

/// Quotient and remainder of `a / b`.
fn divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut quo = vec![Q::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = &r[r.len() - 1] / &lead;
        for (i, c) in b.iter().enumerate() {
            let v = &r[shift + i] - &(&f * c);
            r[shift + i] = v;
        }
        quo[shift] = f;
        r = trim(r);
    }
    (quo, r)
}

fn ugcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = divrem(&a, &b).1;
        a = b;
        b = r;
    }
    a
}

fn eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| &acc * x + c)
}

fn sign_at(p: &[Q], x: Option<&Q>, plus: bool) -> i32 {
    let v = match x {
        Some(x) => eval(p, x),
        None => {
            let lead = p.last().cloned().unwrap_or_else(Q::zero);
            if !plus && (p.len() - 1) % 2 == 1 {
                -lead
            } else {
                lead
            }
        }
    };
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(seq: &[Vec<Q>], x: Option<&Q>, plus: bool) -> usize {
    let signs: Vec<i32> = seq.iter().map(|p| sign_at(p, x, plus)).filter(|s| *s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` (coefficients low to high) in the
/// open interval `(lo, hi)`; `None` bounds are infinite. The zero
/// polynomial reports `usize::MAX`.
pub fn real_roots_in(p: &[Q], lo: Option<&Q>, hi: Option<&Q>) -> usize {
    let p = trim(p.to_vec());
    if p.is_empty() {
        return usize::MAX;
    }
    if p.len() == 1 {
        return 0;
    }
    let g = ugcd(&p, &deriv(&p));
    let mut p = if g.len() > 1 { divrem(&p, &g).0 } else { p };
    for x in [lo, hi].into_iter().flatten() {
        if eval(&p, x).is_zero() {
            p = divrem(&p, &[-x.clone(), Q::from_integer(1.into())]).0;
        }
    }
    if p.len() == 1 {
        return 0;
    }
    let mut seq = vec![p.clone(), deriv(&p)];
    loop {
        let n = seq.len();
        let r = divrem(&seq[n - 2], &seq[n - 1]).1;
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    variations(&seq, lo, false).saturating_sub(variations(&seq, hi, true))
}
