use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{fmt_q, qint, Exponents, Monomial, Rat, RingError, Var, Q};

/// Result of an exact division attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivOutcome {
    Exact(LaurentPoly),
    NonDivisible,
}

impl DivOutcome {
    pub fn exact(self) -> Option<LaurentPoly> {
        match self {
            DivOutcome::Exact(p) => Some(p),
            DivOutcome::NonDivisible => None,
        }
    }
}

/// Multivariate Laurent polynomial with exponents on `(1/N)Z`.
///
/// Terms are kept sorted by the lexicographic order on exponent vectors and
/// never carry a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponents, Q>,
    lattice: u32,
}

impl LaurentPoly {
    pub fn zero(lattice: u32) -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
            lattice: lattice.max(1),
        }
    }

    pub fn constant(c: Q, lattice: u32) -> Self {
        let mut p = LaurentPoly::zero(lattice);
        if !c.is_zero() {
            p.terms.insert(Exponents::one(), c);
        }
        p
    }

    pub fn one(lattice: u32) -> Self {
        LaurentPoly::constant(Q::one(), lattice)
    }

    pub fn int(n: i64, lattice: u32) -> Self {
        LaurentPoly::constant(qint(n), lattice)
    }

    pub fn monomial(m: Monomial, lattice: u32) -> Result<Self, RingError> {
        m.exps.check_lattice(lattice)?;
        let mut p = LaurentPoly::zero(lattice);
        if !m.coeff.is_zero() {
            p.terms.insert(m.exps, m.coeff);
        }
        Ok(p)
    }

    /// `v^e`; panics if `e` is off the lattice.
    pub fn var(v: Var, e: Rat, lattice: u32) -> Self {
        LaurentPoly::monomial(Monomial::var(v, e), lattice).expect("exponent off lattice")
    }

    pub fn from_terms<I>(terms: I, lattice: u32) -> Result<Self, RingError>
    where
        I: IntoIterator<Item = Monomial>,
    {
        let mut p = LaurentPoly::zero(lattice);
        for m in terms {
            m.exps.check_lattice(lattice)?;
            p.add_term(m.exps, m.coeff);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn lattice(&self) -> u32 {
        self.lattice
    }

    /// Re-expresses the polynomial on a finer lattice `(1/n)Z`.
    pub fn refine(&self, n: u32) -> Result<Self, RingError> {
        if !n.is_multiple_of(self.lattice) {
            self.terms.keys().try_for_each(|e| e.check_lattice(n))?;
        }
        Ok(LaurentPoly {
            terms: self.terms.clone(),
            lattice: n,
        })
    }

    /// Smallest lattice carrying every exponent.
    pub fn natural_lattice(&self) -> u32 {
        self.terms.keys().fold(1, |acc, e| super::lcm_u32(acc, e.denominator()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(e, c)| e.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant polynomials (including zero) return their value.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<Monomial> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(Monomial::new(c.clone(), e.clone()))
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Exponents::one()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeff(&self, e: &Exponents) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(e, c)| Monomial::new(c.clone(), e.clone()))
    }

    /// Lex-largest term.
    pub fn leading(&self) -> Option<Monomial> {
        self.terms
            .iter()
            .next_back()
            .map(|(e, c)| Monomial::new(c.clone(), e.clone()))
    }

    /// Lex-smallest term.
    pub fn trailing(&self) -> Option<Monomial> {
        self.terms
            .iter()
            .next()
            .map(|(e, c)| Monomial::new(c.clone(), e.clone()))
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|e| e.vars()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|e| !e.get(v).is_zero())
    }

    pub fn max_degree(&self, v: Var) -> Option<Rat> {
        self.terms.keys().map(|e| e.get(v)).max()
    }

    pub fn min_degree(&self, v: Var) -> Option<Rat> {
        self.terms.keys().map(|e| e.get(v)).min()
    }

    fn check_same(&self, other: &LaurentPoly) -> Result<(), RingError> {
        if self.lattice != other.lattice {
            return Err(RingError::LatticeMismatch(self.lattice, other.lattice));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly, RingError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, RingError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, RingError> {
        self.check_same(other)?;
        let mut out = LaurentPoly::zero(self.lattice);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
            lattice: self.lattice,
        }
    }

    pub fn scale(&self, c: &Q) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.lattice);
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, d)| (e.clone(), d * c)).collect(),
            lattice: self.lattice,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Result<LaurentPoly, RingError> {
        m.exps.check_lattice(self.lattice)?;
        if m.coeff.is_zero() {
            return Ok(LaurentPoly::zero(self.lattice));
        }
        Ok(LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e.mul(&m.exps), c * &m.coeff)).collect(),
            lattice: self.lattice,
        })
    }

    pub fn mul_exps(&self, e: &Exponents) -> Result<LaurentPoly, RingError> {
        self.mul_monomial(&Monomial::new(Q::one(), e.clone()))
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one(self.lattice);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Applies `f` to each exponent vector; the result must stay on the
    /// lattice `lattice`.
    pub fn map_exponents(&self, lattice: u32, f: impl Fn(&Exponents) -> Exponents) -> Result<LaurentPoly, RingError> {
        let mut out = LaurentPoly::zero(lattice);
        for (e, c) in &self.terms {
            let e2 = f(e);
            e2.check_lattice(lattice)?;
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// Renames variables (e.g. the `a <-> z` swap).
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> LaurentPoly {
        self.map_exponents(self.lattice, |e| e.map_vars(&f))
            .expect("renaming preserves exponents")
    }

    /// Substitutes `v -> v * m` (`m` a monomial with coefficient 1 or -1 allowed
    /// only through `sign`); used for `a -> a h^{1/2}`-type changes.
    pub fn substitute_scale(&self, v: Var, m: &Exponents) -> Result<LaurentPoly, RingError> {
        self.map_exponents(self.lattice, |e| e.mul(&m.pow(e.get(v))))
    }

    /// Evaluates `v` at a rational number; exponents of `v` must be integers.
    pub fn eval_var(&self, v: Var, x: &Q) -> Result<LaurentPoly, RingError> {
        let mut out = LaurentPoly::zero(self.lattice);
        for (e, c) in &self.terms {
            let k = e.get(v);
            if !k.is_integer() {
                return Err(RingError::Other(format!(
                    "cannot evaluate {v} with fractional exponent {k}"
                )));
            }
            let k = k.to_integer();
            if x.is_zero() && k < 0 {
                return Err(RingError::DivisionByZero);
            }
            let val = if k >= 0 {
                pow_q(x, k as u32)
            } else {
                pow_q(x, (-k) as u32).recip()
            };
            out.add_term(e.without(v), c * val);
        }
        Ok(out)
    }

    /// Largest monomial (coefficient 1) dividing every term.
    pub fn monomial_content(&self) -> Exponents {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Exponents::one();
        };
        it.fold(first.clone(), |acc, e| acc.meet(e))
    }

    /// Exact division in the Laurent ring.
    pub fn divide_exact(&self, y: &LaurentPoly) -> Result<DivOutcome, RingError> {
        self.check_same(y)?;
        if y.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(DivOutcome::Exact(LaurentPoly::zero(self.lattice)));
        }
        if let Some(m) = y.as_monomial() {
            return Ok(DivOutcome::Exact(self.mul_monomial(&m.inv()?)?));
        }
        // Degree box for the quotient in each variable.
        let mut vars = self.vars();
        vars.extend(y.vars());
        vars.sort();
        vars.dedup();
        let bounds: Vec<(Var, Rat, Rat)> = vars
            .iter()
            .map(|&v| {
                let lo = self.min_degree(v).unwrap() - y.min_degree(v).unwrap();
                let hi = self.max_degree(v).unwrap() - y.max_degree(v).unwrap();
                (v, lo, hi)
            })
            .collect();
        if bounds.iter().any(|(_, lo, hi)| lo > hi) {
            return Ok(DivOutcome::NonDivisible);
        }
        let (ly_e, ly_c) = y.terms.iter().next_back().unwrap();
        let ly_inv = ly_e.inv();
        let mut r = self.clone();
        let mut quot = LaurentPoly::zero(self.lattice);
        while let Some((le, lc)) = r.terms.iter().next_back() {
            let qe = le.mul(&ly_inv);
            if bounds.iter().any(|(v, lo, hi)| qe.get(*v) < *lo || qe.get(*v) > *hi) {
                return Ok(DivOutcome::NonDivisible);
            }
            let qc = lc / ly_c;
            let m = Monomial::new(qc, qe);
            r = &r - &y.mul_monomial(&m)?;
            quot.add_term(m.exps, m.coeff);
        }
        Ok(DivOutcome::Exact(quot))
    }

    /// Exact division that treats non-divisibility as an error.
    pub fn div_exact(&self, y: &LaurentPoly) -> Result<LaurentPoly, RingError> {
        match self.divide_exact(y)? {
            DivOutcome::Exact(q) => Ok(q),
            DivOutcome::NonDivisible => Err(RingError::NonDivisible {
                num: self.to_string(),
                den: y.to_string(),
            }),
        }
    }

    /// Greatest common divisor of the coefficients, as a positive rational
    /// (so that dividing by it leaves coprime integer coefficients).
    pub fn coeff_content(&self) -> Q {
        use num_integer::Integer;
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Q::one();
        }
        Q::new(num, den)
    }
}

fn pow_q(x: &Q, k: u32) -> Q {
    let mut out = Q::one();
    for _ in 0..k {
        out *= x;
    }
    out
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("lattice mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("lattice mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("lattice mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.neg_ref()
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.neg_ref()
    }
}

/// Canonical form: terms in increasing lexicographic order of exponent
/// vectors, explicit coefficients, e.g. `1 - 1*h^{1/2}*a^{-1}`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if e.is_one() {
                f.write_str(&fmt_q(&a))?;
            } else {
                write!(f, "{}*{}", fmt_q(&a), e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, rat};

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s, 2).unwrap()
    }

    #[test]
    fn canonical_string() {
        let x = &p("1") - &p("h^{1/2}*a^{-1}");
        assert_eq!(x.to_string(), "1 - 1*h^{1/2}*a^{-1}");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("-1/2*a^2 + 3").to_string(), "3 - 1/2*a^{2}");
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p("a - 1") * &p("a + 1"), p("a^2 - 1"));
        let x = p("a + h - 7*z");
        assert!((&x + &(-&x)).is_zero());
        assert_eq!(&p("1 - h*a^{-2}") * &p("a"), p("a - h*a^{-1}"));
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(p("a^2 - 1").div_exact(&p("a - 1")).unwrap(), p("a + 1"));
        assert_eq!(
            p("a^2 - 1").divide_exact(&p("a - 2")).unwrap(),
            DivOutcome::NonDivisible
        );
        assert_eq!(p("z*a - z").div_exact(&p("a - 1")).unwrap(), p("z"));
        assert_eq!(p("a").divide_exact(&p("0")), Err(RingError::DivisionByZero));
    }

    #[test]
    fn fractional_exponents_divide() {
        let x = p("h^{1/2} - h^{-1/2}");
        let y = p("h^{1/2}*a - h^{-1/2}*a");
        assert_eq!(y.div_exact(&x).unwrap(), p("a"));
    }

    #[test]
    fn lattice_mismatch_is_an_error() {
        let x = parse_poly("a", 1).unwrap();
        let y = parse_poly("a", 2).unwrap();
        assert_eq!(x.try_add(&y), Err(RingError::LatticeMismatch(1, 2)));
        assert!(parse_poly("a^{1/3}", 2).is_err());
    }

    #[test]
    fn substitution_and_evaluation() {
        let x = p("z + z^{-1}");
        let e = Exponents::var(Var::Hbar, rat(1, 2));
        assert_eq!(
            x.substitute_scale(Var::z(), &e).unwrap(),
            p("z*h^{1/2} + z^{-1}*h^{-1/2}")
        );
        assert_eq!(
            p("a^2*z - a^{-1}").eval_var(Var::a(), &crate::ring::qint(2)).unwrap(),
            p("4*z - 1/2")
        );
    }
}
