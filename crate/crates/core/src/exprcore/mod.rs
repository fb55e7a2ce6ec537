//! Exact scalar arithmetic: rationals, polynomials, normalized rational
//! functions with exponential atoms, and the text grammar.

mod chart;
mod gcd;
pub mod linalg;
mod parse;
mod poly;
mod print;
mod rational;

pub use chart::{ExpAtom, Chart};
pub use gcd::gcd;
pub use parse::parse_expr;
pub use poly::{q_to_f64, Monomial, Poly};
pub use print::poly_to_string;
pub use rational::RationalExpr;

/// Exact rational numbers.
pub type Q = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Squarefree part of a polynomial: `f / gcd(f, df/dx_1, ..., df/dx_n)`.
///
/// Two polynomials define the same zero set over an algebraically closed
/// field iff their squarefree parts agree up to a constant factor.
pub fn squarefree(f: &Poly) -> Poly {
    if f.is_constant() {
        return f.clone();
    }
    let mut g = f.clone();
    for v in 0..f.nvars() {
        let d = f.derivative(v);
        if !d.is_zero() {
            g = gcd(&g, &d);
        }
        if g.is_constant() {
            break;
        }
    }
    let r = if g.is_constant() { f.clone() } else { f.div_exact(&g).expect("gcd divides") };
    r.integer_normalize().1
}
