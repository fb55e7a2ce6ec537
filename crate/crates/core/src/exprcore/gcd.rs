//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive primitive pseudo-remainder sequences on a chosen main variable,
//! with content splitting whenever a variable occurs in only one operand.
//! Modular images at random points bound the gcd degree in each variable from
//! above; a zero bound certifies independence and skips the sequence entirely.
//! Before falling back to the sequence, the heuristic integer gcd (evaluate at
//! a large integer, recurse, rebuild by balanced radix expansion) is tried; its
//! answers are always confirmed by exact division.
//! Results are integral, primitive and positively led, so the gcd is unique.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;

pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    normalize(raw_gcd(a, b))
}

fn normalize(g: Poly) -> Poly {
    if g.is_zero() {
        return g;
    }
    g.integer_normalize().1
}

fn raw_gcd(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    if a.num_terms() == 1 {
        return monomial_gcd(a, b);
    }
    if b.num_terms() == 1 {
        return monomial_gcd(b, a);
    }
    if a == b {
        return a.clone();
    }
    // A divisor check is cheap and catches the common "one factor of the other" case.
    if a.num_terms() >= b.num_terms() {
        if a.div_exact(b).is_some() {
            return b.clone();
        }
    } else if b.div_exact(a).is_some() {
        return a.clone();
    }

    let sa = a.support();
    let sb = b.support();
    for v in 0..n {
        if sa[v] && !sb[v] {
            return raw_gcd(&content_in(a, v), b);
        }
        if sb[v] && !sa[v] {
            return raw_gcd(a, &content_in(b, v));
        }
    }

    for v in (0..n).filter(|&v| sa[v]) {
        if image_degree(a, b, v) == Some(0) {
            return raw_gcd(&content_in(a, v), &content_in(b, v));
        }
    }

    if let Some(h) = heuristic_gcd(a, b) {
        return h;
    }

    let x = (0..n)
        .filter(|&v| sa[v])
        .min_by_key(|&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("non-constant polynomials share a variable here");

    let ua = a.to_univariate(x);
    let ub = b.to_univariate(x);
    let ca = content(&ua);
    let cb = content(&ub);
    let c = raw_gcd(&ca, &cb);
    let pa = divide_all(&ua, &ca);
    let pb = divide_all(&ub, &cb);
    let g = prs(pa, pb);
    &c * &Poly::from_univariate(x, &g)
}

/// gcd of a monomial `m` with an arbitrary polynomial `p`.
fn monomial_gcd(m: &Poly, p: &Poly) -> Poly {
    let mut g = m.leading().unwrap().0.clone();
    for (t, _) in p.terms() {
        g = g.gcd(t);
        if g.is_one() {
            break;
        }
    }
    Poly::monomial(g, One::one())
}

/// Content of `p` viewed as a polynomial in `v`.
fn content_in(p: &Poly, v: usize) -> Poly {
    content(&p.to_univariate(v))
}

fn content(coeffs: &[Poly]) -> Poly {
    let mut nz: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    nz.sort_by_key(|c| (c.num_terms(), c.total_degree()));
    let mut g = Poly::zero(coeffs[0].nvars());
    for c in nz {
        g = normalize(raw_gcd(&g, c));
        if g.is_constant() {
            return Poly::one(g.nvars());
        }
    }
    g
}

fn divide_all(coeffs: &[Poly], c: &Poly) -> Vec<Poly> {
    coeffs
        .iter()
        .map(|p| p.div_exact(c).expect("content divides every coefficient"))
        .collect()
}

fn degree(u: &[Poly]) -> usize {
    u.len() - 1
}

fn trim(mut u: Vec<Poly>) -> Vec<Poly> {
    while u.len() > 1 && u.last().unwrap().is_zero() {
        u.pop();
    }
    u
}

fn is_zero_u(u: &[Poly]) -> bool {
    u.iter().all(|c| c.is_zero())
}

/// Pseudo-remainder of `a` by `b` (up to a power of `lc(b)`).
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = degree(b);
    let lb = &b[db];
    let mut r = a.to_vec();
    while !is_zero_u(&r) && degree(&r) >= db {
        let dr = degree(&r);
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (j, bj) in b.iter().enumerate() {
            let idx = j + dr - db;
            r[idx] = &r[idx] - &(&lr * bj);
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        if r.is_empty() {
            r.push(Poly::zero(lb.nvars()));
        }
        r = trim(r);
    }
    r
}

fn primitive(u: Vec<Poly>) -> Vec<Poly> {
    let c = content(&u);
    let u = if c.is_constant() { u } else { divide_all(&u, &c) };
    // Clear the rational scale so coefficient growth stays bounded.
    let mut scale = None;
    for c in &u {
        if !c.is_zero() {
            let (f, _) = c.integer_normalize();
            scale = Some(match scale {
                None => f,
                Some(s) => gcd_q(&s, &f),
            });
        }
    }
    match scale {
        Some(s) if !s.is_zero() => {
            let inv = s.recip();
            u.iter().map(|c| c.scale(&inv)).collect()
        }
        _ => u,
    }
}

fn gcd_q(a: &super::Q, b: &super::Q) -> super::Q {
    let n = a.numer().gcd(b.numer());
    let d = a.denom().lcm(b.denom());
    super::Q::new(n, d)
}

/// gcd of two primitive univariate polynomials over the coefficient ring.
fn prs(a: Vec<Poly>, b: Vec<Poly>) -> Vec<Poly> {
    let (mut a, mut b) = if degree(&a) >= degree(&b) { (a, b) } else { (b, a) };
    if degree(&b) == 0 {
        return vec![Poly::one(b[0].nvars())];
    }
    loop {
        let r = prem(&a, &b);
        if is_zero_u(&r) {
            return b;
        }
        if degree(&r) == 0 {
            return vec![Poly::one(b[0].nvars())];
        }
        a = b;
        b = primitive(r);
    }
}

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    powmod(a, P - 2)
}

fn reduce(c: &BigInt) -> u64 {
    let m = c % BigInt::from(P);
    let m = if m < BigInt::zero() { m + BigInt::from(P) } else { m };
    m.to_u64().unwrap()
}

static SEED: AtomicU64 = AtomicU64::new(0x9e37_79b9_7f4a_7c15);

fn next_point() -> u64 {
    // splitmix64
    let mut z = SEED.fetch_add(0x9e37_79b9_7f4a_7c15, Ordering::Relaxed);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (z ^ (z >> 31)) % (P - 2) + 2
}

/// Image of an integral polynomial in `Z_P[x]` with the other variables fixed.
fn image(p: &Poly, x: usize, point: &[u64]) -> Option<Vec<u64>> {
    let deg = p.degree_in(x) as usize;
    let mut out = vec![0u64; deg + 1];
    for (m, c) in p.terms() {
        if !c.is_integer() {
            return None;
        }
        let mut v = reduce(c.numer());
        for (i, &e) in m.exps().iter().enumerate() {
            if i != x && e > 0 {
                v = mulmod(v, powmod(point[i], e as u64));
            }
        }
        let k = m.exps()[x] as usize;
        out[k] = (out[k] + v) % P;
    }
    // The leading coefficient must survive so the image gcd degree bounds the true one.
    if out[deg] == 0 {
        return None;
    }
    Some(out)
}

fn trim_mod(u: &mut Vec<u64>) {
    while u.len() > 1 && *u.last().unwrap() == 0 {
        u.pop();
    }
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim_mod(&mut a);
    trim_mod(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.len() == 1 {
            return if b[0] == 0 { a.len() - 1 } else { 0 };
        }
        let lb = inv(*b.last().unwrap());
        while a.len() >= b.len() {
            let f = mulmod(*a.last().unwrap(), lb);
            let off = a.len() - b.len();
            for (j, &bj) in b.iter().enumerate() {
                a[off + j] = (a[off + j] + P - mulmod(f, bj)) % P;
            }
            a.pop();
            if a.is_empty() {
                a.push(0);
                break;
            }
        }
        trim_mod(&mut a);
        std::mem::swap(&mut a, &mut b);
    }
}

/// Upper bound on `deg_x gcd(a, b)`, or `None` if no usable image was found.
fn image_degree(a: &Poly, b: &Poly, x: usize) -> Option<usize> {
    let (_, ia) = a.integer_normalize();
    let (_, ib) = b.integer_normalize();
    for _ in 0..3 {
        let point: Vec<u64> = (0..a.nvars()).map(|_| next_point()).collect();
        if let (Some(ua), Some(ub)) = (image(&ia, x, &point), image(&ib, x, &point)) {
            return Some(gcd_mod(ua, ub));
        }
    }
    None
}

fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let (_, ia) = a.integer_normalize();
    let (_, ib) = b.integer_normalize();
    let sa = ia.support();
    let sb = ib.support();
    let vars: Vec<usize> = (0..a.nvars()).filter(|&v| sa[v] || sb[v]).collect();
    heu(&ia, &ib, &vars)
}

fn int_coeffs(p: &Poly) -> impl Iterator<Item = &BigInt> {
    p.terms().map(|(_, c)| c.numer())
}

fn int_content(p: &Poly) -> BigInt {
    int_coeffs(p).fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn max_norm(p: &Poly) -> BigInt {
    int_coeffs(p).map(|c| c.abs()).max().unwrap_or_default()
}

fn scale_int(p: &Poly, c: &BigInt) -> Poly {
    p.scale(&super::Q::from_integer(c.clone()))
}

fn div_int(p: &Poly, c: &BigInt) -> Poly {
    p.scale(&super::Q::new(BigInt::one(), c.clone()))
}

/// `p` with variable `v` set to the integer `xi`.
fn eval_at(p: &Poly, v: usize, xi: &BigInt) -> Poly {
    let mut pows: Vec<BigInt> = vec![BigInt::one()];
    let terms = p.terms().map(|(m, c)| {
        let e = m.exps()[v] as usize;
        while pows.len() <= e {
            let next = pows.last().unwrap() * xi;
            pows.push(next);
        }
        let mut exps = m.exps().to_vec();
        exps[v] = 0;
        (super::poly::Monomial::new(exps), c * super::Q::from_integer(pows[e].clone()))
    });
    let terms: Vec<_> = terms.collect();
    Poly::from_terms(p.nvars(), terms)
}

/// Recover a polynomial in `v` from its value at `v = xi` by balanced radix-`xi` digits.
fn interpolate(h: &Poly, v: usize, xi: &BigInt) -> Poly {
    let half = xi / 2;
    let mut rest = h.clone();
    let mut out = Poly::zero(h.nvars());
    let mut k = 0u32;
    while !rest.is_zero() {
        let digit = Poly::from_terms(
            h.nvars(),
            rest.terms()
                .map(|(m, c)| {
                    let mut r = c.numer().mod_floor(xi);
                    if r > half {
                        r -= xi;
                    }
                    (m.clone(), super::Q::from_integer(r))
                })
                .collect::<Vec<_>>(),
        );
        rest = div_int(&(&rest - &digit), xi);
        let mut shift = vec![0u32; h.nvars()];
        shift[v] = k;
        out = &out + &digit.mul_monomial(&super::poly::Monomial::new(shift), &super::Q::one());
        k += 1;
    }
    out
}

/// Primitive part with positive leading coefficient.
fn primitive_int(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let c = int_content(p);
    let q = div_int(p, &c);
    if q.leading_coeff().is_negative() {
        -q
    } else {
        q
    }
}

/// gcd of integral polynomials `f`, `g` in the variables `vars`, including the integer content gcd.
fn heu(f: &Poly, g: &Poly, vars: &[usize]) -> Option<Poly> {
    let n = f.nvars();
    if f.is_zero() {
        return Some(g.clone());
    }
    if g.is_zero() {
        return Some(f.clone());
    }
    let cf = int_content(f);
    let cg = int_content(g);
    let gc = cf.gcd(&cg);
    let Some((&v, rest)) = vars.split_first() else {
        return Some(Poly::constant(n, super::Q::from_integer(gc)));
    };
    let f = div_int(f, &cf);
    let g = div_int(g, &cg);
    let fnorm = max_norm(&f);
    let gnorm = max_norm(&g);
    let b = BigInt::from(2) * (&fnorm).min(&gnorm) + BigInt::from(29);
    let lf = f.leading_coeff().numer().abs();
    let lg = g.leading_coeff().numer().abs();
    let mut xi = std::cmp::max(
        std::cmp::min(b.clone(), BigInt::from(99) * b.sqrt()),
        BigInt::from(2) * std::cmp::min(&fnorm / &lf, &gnorm / &lg) + BigInt::from(4),
    );
    for _ in 0..6 {
        let ff = eval_at(&f, v, &xi);
        let gg = eval_at(&g, v, &xi);
        if !ff.is_zero() && !gg.is_zero() {
            let h = heu(&ff, &gg, rest)?;
            let cand = primitive_int(&interpolate(&h, v, &xi));
            if !cand.is_zero() && f.div_exact(&cand).is_some() && g.div_exact(&cand).is_some() {
                return Some(scale_int(&cand, &gc));
            }
            for (big, other, small) in [(&f, &g, &ff), (&g, &f, &gg)] {
                if let Some(cof) = small.div_exact(&h) {
                    let cof = interpolate(&cof, v, &xi);
                    if cof.is_zero() {
                        continue;
                    }
                    if let Some(cand) = big.div_exact(&cof) {
                        let cand = primitive_int(&cand);
                        if other.div_exact(&cand).is_some() {
                            return Some(scale_int(&cand, &gc));
                        }
                    }
                }
            }
        }
        xi = BigInt::from(73794) * &xi * xi.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}
