//! Normalized rational functions on a chart.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::chart::Chart;
use super::gcd::gcd;
use super::poly::Poly;
use super::Q;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1`, `den` integral, primitive and
/// positively led. Two expressions are equal iff their parts are equal.
#[derive(Clone)]
pub struct RationalExpr {
    chart: Chart,
    num: Poly,
    den: Poly,
}

impl RationalExpr {
    pub fn new(chart: &Chart, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(chart.clone(), num, den))
    }

    fn normalized(chart: Chart, num: Poly, den: Poly) -> Self {
        let n = chart.ring_size();
        if num.is_zero() {
            return RationalExpr { chart, num: Poly::zero(n), den: Poly::one(n) };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        Self::scaled(chart, num, den)
    }

    /// Normalize only the scalar factor; assumes `num` and `den` are coprime.
    fn scaled(chart: Chart, num: Poly, den: Poly) -> Self {
        let (c, den) = den.integer_normalize();
        let num = if c.is_one() { num } else { num.scale(&c.recip()) };
        RationalExpr { chart, num, den }
    }

    pub fn zero(chart: &Chart) -> Self {
        let n = chart.ring_size();
        RationalExpr { chart: chart.clone(), num: Poly::zero(n), den: Poly::one(n) }
    }

    pub fn one(chart: &Chart) -> Self {
        Self::constant(chart, Q::one())
    }

    pub fn constant(chart: &Chart, c: Q) -> Self {
        let n = chart.ring_size();
        RationalExpr { chart: chart.clone(), num: Poly::constant(n, c), den: Poly::one(n) }
    }

    pub fn integer(chart: &Chart, c: i64) -> Self {
        Self::constant(chart, Q::from_integer(c.into()))
    }

    pub fn from_poly(chart: &Chart, p: Poly) -> Self {
        assert_eq!(p.nvars(), chart.ring_size(), "polynomial ring does not match chart");
        let n = chart.ring_size();
        RationalExpr { chart: chart.clone(), num: p, den: Poly::one(n) }
    }

    /// The ring generator with the given name (variable or atom).
    pub fn var(chart: &Chart, name: &str) -> Result<Self> {
        let i = chart.ring_index(name).ok_or_else(|| Error::UnknownIdentifier(name.to_string()))?;
        Ok(Self::from_poly(chart, Poly::var(chart.ring_size(), i)))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_constant() && self.num.is_constant()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_constant() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Ring generators that occur in numerator or denominator.
    pub fn support(&self) -> Vec<bool> {
        let a = self.num.support();
        let b = self.den.support();
        a.iter().zip(b.iter()).map(|(x, y)| *x || *y).collect()
    }

    /// True if the expression does not depend on chart variable `v` (directly or via atoms).
    pub fn independent_of(&self, v: usize) -> bool {
        let s = self.support();
        if s[v] {
            return false;
        }
        let name = &self.chart.variables()[v];
        self.chart.atoms().iter().enumerate().all(|(k, a)| a.base != *name || !s[self.chart.dim() + k])
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs);
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &rhs.recip_unchecked())
    }

    fn recip_unchecked(&self) -> Self {
        Self::scaled(self.chart.clone(), self.den.clone(), self.num.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.recip_unchecked())
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(&self.chart);
        }
        Self::scaled(self.chart.clone(), self.num.pow(e), self.den.pow(e))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        RationalExpr { chart: self.chart.clone(), num: self.num.scale(c), den: self.den.clone() }
    }

    fn check(&self, rhs: &Self) {
        assert!(self.chart.same(&rhs.chart), "chart mismatch: `{}` vs `{}`", self.chart.id(), rhs.chart.id());
    }

    /// Partial derivative with respect to the chart variable at position `v`.
    pub fn partial_idx(&self, v: usize) -> Self {
        assert!(v < self.chart.dim());
        let dn = self.total_derivative(&self.num, v);
        if self.den.is_constant() {
            return Self::normalized(self.chart.clone(), dn, self.den.clone());
        }
        let dd = self.total_derivative(&self.den, v);
        if dn.is_zero() && dd.is_zero() {
            return Self::zero(&self.chart);
        }
        if dd.is_zero() {
            return Self::normalized(self.chart.clone(), dn, self.den.clone());
        }
        // (n'd - nd')/d^2 with s = gcd(d, d') removed up front; only factors of d remain.
        let s = gcd(&self.den, &dd);
        let ds = self.den.div_exact(&s).unwrap();
        let num = &(&dn * &ds) - &(&self.num * &dd.div_exact(&s).unwrap());
        if num.is_zero() {
            return Self::zero(&self.chart);
        }
        let den = &self.den * &ds;
        let h = gcd(&num, &self.den);
        if h.is_one() {
            return Self::scaled(self.chart.clone(), num, den);
        }
        Self::normalized(self.chart.clone(), num.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
    }

    pub fn partial(&self, var: &str) -> Result<Self> {
        Ok(self.partial_idx(self.chart.var_index(var)?))
    }

    /// Chain rule through the atoms: sum over generators w of dp/dw * dw/dv.
    fn total_derivative(&self, p: &Poly, v: usize) -> Poly {
        let mut out = p.derivative(v);
        for k in 0..self.chart.atoms().len() {
            let w = self.chart.dim() + k;
            let dw = self.chart.generator_derivative(w, v);
            if !dw.is_zero() {
                let dp = p.derivative(w);
                if !dp.is_zero() {
                    out = &out + &(&dp * &dw);
                }
            }
        }
        out
    }

    /// Exact value at a point assigning every chart variable; atoms are not allowed.
    pub fn eval(&self, point: &[Q]) -> Result<Q> {
        if self.chart.has_atoms() && (self.chart.dim()..self.chart.ring_size()).any(|w| self.support()[w]) {
            return Err(Error::Invalid("exponential atoms have no exact value; use eval_float".into()));
        }
        let mut full = point.to_vec();
        full.resize(self.chart.ring_size(), Q::zero());
        let d = self.den.eval(&full);
        if d.is_zero() {
            return Err(Error::Pole(format_point(&self.chart, point)));
        }
        Ok(self.num.eval(&full) / d)
    }

    pub fn eval_map(&self, point: &std::collections::HashMap<String, Q>) -> Result<Q> {
        let mut p = Vec::with_capacity(self.chart.dim());
        for v in self.chart.variables() {
            p.push(point.get(v).cloned().ok_or_else(|| Error::Invalid(format!("no value for `{v}`")))?);
        }
        self.eval(&p)
    }

    pub fn eval_float(&self, point: &[f64]) -> Result<f64> {
        let ring = self.chart.ring_point_f64(point);
        let d = self.den.eval_f64(&ring);
        if d == 0.0 {
            return Err(Error::Pole(format!("{point:?}")));
        }
        Ok(self.num.eval_f64(&ring) / d)
    }

    /// Re-express on another chart that contains every generator used here by name.
    pub fn embed(&self, target: &Chart) -> Result<Self> {
        if self.chart.same(target) {
            return Ok(self.clone());
        }
        let support = self.support();
        let mut map = vec![0usize; self.chart.ring_size()];
        for (i, slot) in map.iter_mut().enumerate() {
            let name = self.chart.ring_name(i);
            match target.ring_index(name) {
                Some(j) => {
                    if i >= self.chart.dim() {
                        let a = &self.chart.atoms()[i - self.chart.dim()];
                        let ok = j >= target.dim() && target.atoms()[j - target.dim()] == *a;
                        if !ok && support[i] {
                            return Err(Error::ChartMismatch(self.chart.id().into(), target.id().into()));
                        }
                    } else if j >= target.dim() && support[i] {
                        return Err(Error::ChartMismatch(self.chart.id().into(), target.id().into()));
                    }
                    *slot = j;
                }
                None if support[i] => return Err(Error::UnknownIdentifier(name.to_string())),
                None => *slot = 0,
            }
        }
        let n = target.ring_size();
        Ok(RationalExpr { chart: target.clone(), num: self.num.remap(n, &map), den: self.den.remap(n, &map) })
    }

    /// Substitute ring generators by rational expressions on `target`.
    ///
    /// `images[i]` is the image of ring generator `i`; generators not used may
    /// map to anything. Fails if the image of the denominator vanishes.
    pub fn compose(&self, target: &Chart, images: &[RationalExpr]) -> Result<Self> {
        assert_eq!(images.len(), self.chart.ring_size());
        let mut cache: Vec<Vec<RationalExpr>> = vec![Vec::new(); images.len()];
        let num = eval_poly(&self.num, target, images, &mut cache);
        let den = eval_poly(&self.den, target, images, &mut cache);
        num.checked_div(&den).map_err(|_| Error::Pole("substituted denominator is identically zero".into()))
    }

    /// Substitute constants for some chart variables.
    pub fn substitute(&self, values: &[(usize, Q)]) -> Result<Self> {
        let mut images: Vec<RationalExpr> = (0..self.chart.ring_size())
            .map(|i| Self::from_poly(&self.chart, Poly::var(self.chart.ring_size(), i)))
            .collect();
        for (v, c) in values {
            images[*v] = Self::constant(&self.chart, c.clone());
        }
        self.compose(&self.chart.clone(), &images)
    }

    pub fn to_f64_parts(&self) -> (&Poly, &Poly) {
        (&self.num, &self.den)
    }

    /// Rough size measure used for pivot selection.
    pub fn complexity(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    pub fn is_negative_constant(&self) -> bool {
        self.as_constant().map_or(false, |c| c.is_negative())
    }
}

fn eval_poly(p: &Poly, target: &Chart, images: &[RationalExpr], cache: &mut [Vec<RationalExpr>]) -> RationalExpr {
    let mut acc = RationalExpr::zero(target);
    for (m, c) in p.terms() {
        let mut t = RationalExpr::constant(target, c.clone());
        for (i, e) in m.exps().iter().enumerate() {
            let e = *e as usize;
            if e == 0 {
                continue;
            }
            let powers = &mut cache[i];
            if powers.is_empty() {
                powers.push(RationalExpr::one(target));
                powers.push(images[i].clone());
            }
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * &images[i];
                powers.push(next);
            }
            t = &t * &powers[e];
        }
        acc = &acc + &t;
    }
    acc
}

fn format_point(chart: &Chart, point: &[Q]) -> String {
    let parts: Vec<String> = chart.variables().iter().zip(point).map(|(v, q)| format!("{v}={q}")).collect();
    parts.join(", ")
}

impl PartialEq for RationalExpr {
    fn eq(&self, other: &Self) -> bool {
        self.chart.same(&other.chart) && self.num == other.num && self.den == other.den
    }
}

impl Eq for RationalExpr {}

impl std::hash::Hash for RationalExpr {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl<'a> std::ops::Add<&'a RationalExpr> for &'a RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        self.check(rhs);
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RationalExpr { chart: self.chart.clone(), num, den: self.den.clone() };
            }
            return RationalExpr::normalized(self.chart.clone(), num, self.den.clone());
        }
        if self.den.is_one() {
            let num = &(&self.num * &rhs.den) + &rhs.num;
            return RationalExpr { chart: self.chart.clone(), num, den: rhs.den.clone() };
        }
        if rhs.den.is_one() {
            let num = &self.num + &(&rhs.num * &self.den);
            return RationalExpr { chart: self.chart.clone(), num, den: self.den.clone() };
        }
        // Henrici: with g = gcd(d1, d2), only factors of g can cancel.
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RationalExpr::scaled(self.chart.clone(), num, &self.den * &rhs.den);
        }
        let a = rhs.den.div_exact(&g).unwrap();
        let b = self.den.div_exact(&g).unwrap();
        let num = &(&self.num * &a) + &(&rhs.num * &b);
        if num.is_zero() {
            return RationalExpr::zero(&self.chart);
        }
        let h = gcd(&num, &g);
        if h.is_one() {
            return RationalExpr::scaled(self.chart.clone(), num, &self.den * &a);
        }
        let num = num.div_exact(&h).unwrap();
        let den = &b * &rhs.den.div_exact(&h).unwrap();
        RationalExpr::scaled(self.chart.clone(), num, den)
    }
}

impl<'a> std::ops::Neg for &'a RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr { chart: self.chart.clone(), num: -&self.num, den: self.den.clone() }
    }
}

impl<'a> std::ops::Sub<&'a RationalExpr> for &'a RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        self + &(-rhs)
    }
}

impl<'a> std::ops::Mul<&'a RationalExpr> for &'a RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        self.check(rhs);
        if self.is_zero() || rhs.is_zero() {
            return RationalExpr::zero(&self.chart);
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalExpr { chart: self.chart.clone(), num: &self.num * &rhs.num, den: self.den.clone() };
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let div = |p: &Poly, g: &Poly| if g.is_one() { p.clone() } else { p.div_exact(g).unwrap() };
        let num = &div(&self.num, &g1) * &div(&rhs.num, &g2);
        let den = &div(&self.den, &g2) * &div(&rhs.den, &g1);
        RationalExpr::scaled(self.chart.clone(), num, den)
    }
}

impl<'a> std::ops::Div<&'a RationalExpr> for &'a RationalExpr {
    type Output = RationalExpr;
    /// Panics on a zero divisor; use [`RationalExpr::checked_div`] otherwise.
    fn div(self, rhs: &RationalExpr) -> RationalExpr {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl std::ops::$tr<RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $f(self, rhs: RationalExpr) -> RationalExpr {
                std::ops::$tr::$f(&self, &rhs)
            }
        }
        impl<'a> std::ops::$tr<&'a RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $f(self, rhs: &RationalExpr) -> RationalExpr {
                std::ops::$tr::$f(&self, rhs)
            }
        }
        impl<'a> std::ops::$tr<RationalExpr> for &'a RationalExpr {
            type Output = RationalExpr;
            fn $f(self, rhs: RationalExpr) -> RationalExpr {
                std::ops::$tr::$f(self, &rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl std::ops::Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        -&self
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::to_string(self))
    }
}

impl fmt::Debug for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalExpr({})", self)
    }
}
