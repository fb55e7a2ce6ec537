//! Printing in the parser's grammar.
//!
//! Output re-parses to the same normal form: numerator terms in descending
//! graded-lex order, denominator parenthesized unless it is a single factor.

use num_traits::{One, Signed};

use super::poly::{Monomial, Poly};
use super::rational::RationalExpr;
use super::Q;

pub fn to_string(e: &RationalExpr) -> String {
    let names = e.chart().ring_names();
    let num = poly_to_string(e.numer(), &names);
    if e.denom().is_one() {
        return num;
    }
    let den = poly_to_string(e.denom(), &names);
    let num = if e.numer().num_terms() > 1 { format!("({num})") } else { num };
    let den = if is_single_factor(e.denom()) { den } else { format!("({den})") };
    format!("{num}/{den}")
}

fn is_single_factor(p: &Poly) -> bool {
    if p.num_terms() != 1 {
        return false;
    }
    let (m, c) = p.leading().unwrap();
    c.is_one() && m.exps().iter().filter(|e| **e > 0).count() == 1
}

pub fn poly_to_string(p: &Poly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term(m, &c.abs(), names));
    }
    out
}

fn term(m: &Monomial, c: &Q, names: &[String]) -> String {
    let mono = monomial(m, names);
    if mono.is_empty() {
        return rational(c);
    }
    if c.is_one() {
        mono
    } else {
        format!("{}*{}", rational(c), mono)
    }
}

fn monomial(m: &Monomial, names: &[String]) -> String {
    let parts: Vec<String> = m
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| if *e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
        .collect();
    parts.join("*")
}

fn rational(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}
