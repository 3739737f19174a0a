//! Multivariate gcd by recursive primitive pseudo-remainder sequences.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Exponents, LaurentPoly, Rat, RingError, Var, Q};

fn strip_monomial(p: &LaurentPoly) -> LaurentPoly {
    let c = p.monomial_content();
    p.mul_exps(&c.inv()).expect("content lies on the lattice")
}

/// Makes the lex-leading coefficient 1 and removes monomial content.
fn normalize(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return p.clone();
    }
    let p = strip_monomial(p);
    let lc = p.leading().expect("nonzero").coeff;
    p.scale(&lc.recip())
}

/// Coefficients of `p` viewed as a polynomial in `v`.
fn coeffs_in(p: &LaurentPoly, v: Var) -> BTreeMap<Rat, LaurentPoly> {
    let mut out: BTreeMap<Rat, Vec<super::Monomial>> = BTreeMap::new();
    for m in p.monomials() {
        let d = m.exps.get(v);
        let rest = super::Monomial::new(m.coeff, m.exps.without(v));
        out.entry(d).or_default().push(rest);
    }
    out.into_iter()
        .map(|(d, ms)| (d, LaurentPoly::from_terms(ms, p.lattice()).expect("same lattice")))
        .collect()
}

fn content_in(p: &LaurentPoly, v: Var) -> LaurentPoly {
    let mut g = LaurentPoly::zero(p.lattice());
    for c in coeffs_in(p, v).into_values() {
        g = gcd_rec(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_in(p: &LaurentPoly, v: Var) -> LaurentPoly {
    let c = content_in(p, v);
    let q = p.div_exact(&c).expect("content divides");
    let k = q.coeff_content();
    q.scale(&k.recip())
}

/// Pseudo-remainder of `a` by `b` with respect to `v`; both have nonnegative
/// `v`-degrees.
fn prem(a: &LaurentPoly, b: &LaurentPoly, v: Var) -> LaurentPoly {
    let db = b.max_degree(v).expect("nonzero");
    let cb = coeffs_in(b, v);
    let lcb = cb.get(&db).expect("leading").clone();
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.max_degree(v).expect("nonzero");
        if dr < db {
            break;
        }
        let lcr = coeffs_in(&r, v).remove(&dr).expect("leading");
        let shift = Exponents::var(v, dr - db);
        let t = (&lcr * b).mul_exps(&shift).expect("lattice");
        r = &(&lcb * &r) - &t;
    }
    r
}

/// Image of `p` in `Q[v^{1/N}]`, the other variables set to distinct primes
/// (a fractional power `u^{k/N}` evaluates to `prime^k`). Index is the
/// `v`-exponent times `N`.
fn eval_image(p: &LaurentPoly, v: Var, vars: &[Var]) -> Vec<Q> {
    const PRIMES: [i64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let n = Rat::from_integer(p.lattice() as i64);
    let mut out: Vec<Q> = Vec::new();
    for m in p.monomials() {
        let mut c = m.coeff.clone();
        for (k, &u) in vars.iter().enumerate() {
            let e = (m.exps.get(u) * n).to_integer();
            if u == v || e == 0 {
                continue;
            }
            let base = Q::from_integer(PRIMES[k % PRIMES.len()].into());
            let f = num_traits::pow(base, e.unsigned_abs() as usize);
            c = if e > 0 { c * f } else { c / f };
        }
        let d = (m.exps.get(v) * n).to_integer() as usize;
        if out.len() <= d {
            out.resize(d + 1, Q::zero());
        }
        out[d] += c;
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn univariate_gcd_degree(mut a: Vec<Q>, mut b: Vec<Q>) -> usize {
    while !b.is_empty() {
        while a.len() >= b.len() {
            let k = a.len() - b.len();
            let f = a.last().expect("nonempty").clone() / b.last().expect("nonempty");
            for (i, c) in b.iter().enumerate() {
                a[i + k] -= &f * c;
            }
            a.pop();
            while a.last().is_some_and(|c| c.is_zero()) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Sufficient test for `gcd(a, b) = 1` on monomial-free inputs: a common
/// factor of positive `v`-degree survives in every evaluation image that
/// keeps the leading `v`-coefficients alive.
fn coprime_by_evaluation(a: &LaurentPoly, b: &LaurentPoly, vars: &[Var]) -> bool {
    vars.iter().all(|&v| {
        let (ia, ib) = (eval_image(a, v, vars), eval_image(b, v, vars));
        let keeps = |p: &LaurentPoly, img: &[Q]| {
            let top = p
                .max_degree(v)
                .map(|d| (d * Rat::from_integer(p.lattice() as i64)).to_integer());
            top == Some(img.len() as i64 - 1)
        };
        keeps(a, &ia) && keeps(b, &ib) && univariate_gcd_degree(ia, ib) == 0
    })
}

fn gcd_rec(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    let a = strip_monomial(a);
    let b = strip_monomial(b);
    let mut vars = a.vars();
    vars.extend(b.vars());
    vars.sort();
    vars.dedup();
    let Some(&v) = vars.last() else {
        return LaurentPoly::one(a.lattice());
    };
    if coprime_by_evaluation(&a, &b, &vars) {
        return LaurentPoly::one(a.lattice());
    }
    if !a.contains_var(v) {
        return gcd_rec(&a, &content_in(&b, v));
    }
    if !b.contains_var(v) {
        return gcd_rec(&content_in(&a, v), &b);
    }
    let c = gcd_rec(&content_in(&a, v), &content_in(&b, v));
    let mut p = primitive_in(&a, v);
    let mut r = primitive_in(&b, v);
    if p.max_degree(v) < r.max_degree(v) {
        std::mem::swap(&mut p, &mut r);
    }
    loop {
        if r.is_zero() {
            break;
        }
        if !r.contains_var(v) {
            return normalize(&c);
        }
        let rem = prem(&p, &r, v);
        p = r;
        r = if rem.is_zero() {
            rem
        } else {
            primitive_in(&strip_monomial(&rem), v)
        };
    }
    normalize(&(&c * &primitive_in(&p, v)))
}

/// Greatest common divisor in the Laurent polynomial ring over Q, normalised
/// to have no monomial factor and lex-leading coefficient 1. `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly, RingError> {
    if a.lattice() != b.lattice() {
        return Err(RingError::LatticeMismatch(a.lattice(), b.lattice()));
    }
    let g = gcd_rec(a, b);
    if g.is_zero() && !(a.is_zero() && b.is_zero()) {
        return Err(RingError::Other("gcd vanished".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_poly;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s, 2).unwrap()
    }

    #[test]
    fn univariate() {
        let g = poly_gcd(&p("a^2 - 1"), &p("a^2 - 2*a + 1")).unwrap();
        assert_eq!(g, p("a - 1"));
    }

    #[test]
    fn multivariate() {
        let f = p("(a*z - 1)*(a - h)*(z + 2)");
        let g = p("(a*z - 1)*(z + 2)^2*(h - 3)");
        assert_eq!(poly_gcd(&f, &g).unwrap(), normalize(&p("(a*z - 1)*(z + 2)")));
    }

    #[test]
    fn fractional_and_monomial_factors() {
        let f = p("a^{-3}*(h^{1/2} - h^{-1/2})*(a - 1)");
        let g = p("h^{5}*(h - 1)");
        assert_eq!(poly_gcd(&f, &g).unwrap(), normalize(&p("h^{1/2} - h^{-1/2}")));
    }

    #[test]
    fn coprime() {
        assert!(poly_gcd(&p("a - 1"), &p("z - 1")).unwrap().is_one());
        assert!(poly_gcd(&p("3"), &p("a + 1")).unwrap().is_one());
        let f = p("-2*h^{1/2}*a^{-2}*z^{-1} - h^{1/2}*a^{2}*z^{2} - 2*h*a^{2}");
        let g = p("3*a^{-2}*z^{2} - z - h^{1/2}*a^{-2}*z^{-2} + 3*h*z^{2}");
        assert!(poly_gcd(&f, &g).unwrap().is_one());
        let k = p("h^{1/2}*a - z + 1");
        let g = poly_gcd(&(&f * &k), &(&g * &k)).unwrap();
        assert_eq!(g, normalize(&k));
    }
}
