use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{fmt_rat_exp, Exponents, LaurentPoly, Monomial, Rat, RingError, Var};

/// Truncated q-series `sum_k c_k q^k` with `c_k` Laurent polynomials in the
/// non-q variables and `k < trunc` on the lattice `(1/N)Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    terms: BTreeMap<Rat, LaurentPoly>,
    trunc: Rat,
    lattice: u32,
}

impl QSeries {
    pub fn zero(trunc: Rat, lattice: u32) -> Self {
        QSeries {
            terms: BTreeMap::new(),
            trunc,
            lattice,
        }
    }

    pub fn one(trunc: Rat, lattice: u32) -> Self {
        QSeries::from_coeff(Rat::zero(), LaurentPoly::one(lattice), trunc)
    }

    /// `c * q^k`, truncated at `trunc`.
    pub fn from_coeff(k: Rat, c: LaurentPoly, trunc: Rat) -> Self {
        let mut s = QSeries::zero(trunc, c.lattice());
        s.insert(k, c);
        s
    }

    /// Splits a Laurent polynomial by its `q`-exponents.
    pub fn from_poly(p: &LaurentPoly, trunc: Rat) -> Self {
        let mut s = QSeries::zero(trunc, p.lattice());
        for m in p.monomials() {
            let k = m.exps.get(Var::Q);
            let rest = Monomial::new(m.coeff, m.exps.without(Var::Q));
            let c = LaurentPoly::monomial(rest, p.lattice()).expect("same lattice");
            s.insert(k, c);
        }
        s
    }

    fn insert(&mut self, k: Rat, c: LaurentPoly) {
        if k >= self.trunc || c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&k) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(k, merged);
        }
    }

    pub fn trunc(&self) -> Rat {
        self.trunc
    }

    pub fn lattice(&self) -> u32 {
        self.lattice
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: Rat) -> LaurentPoly {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(self.lattice))
    }

    /// Lowest stored order and its coefficient.
    pub fn leading(&self) -> Option<(Rat, &LaurentPoly)> {
        self.terms.iter().next().map(|(k, c)| (*k, c))
    }

    /// Lowest order, or the truncation order for a series known to vanish.
    pub fn order(&self) -> Rat {
        self.leading().map(|(k, _)| k).unwrap_or(self.trunc)
    }

    pub fn truncate(&self, trunc: Rat) -> QSeries {
        let t = trunc.min(self.trunc);
        QSeries {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| **k < t)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            trunc: t,
            lattice: self.lattice,
        }
    }

    fn check(&self, o: &QSeries) -> Result<(), RingError> {
        if self.lattice != o.lattice {
            return Err(RingError::LatticeMismatch(self.lattice, o.lattice));
        }
        Ok(())
    }

    pub fn add(&self, o: &QSeries) -> Result<QSeries, RingError> {
        self.check(o)?;
        let mut out = QSeries::zero(self.trunc.min(o.trunc), self.lattice);
        for (k, c) in self.terms.iter().chain(o.terms.iter()) {
            out.insert(*k, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
            trunc: self.trunc,
            lattice: self.lattice,
        }
    }

    pub fn sub(&self, o: &QSeries) -> Result<QSeries, RingError> {
        self.add(&o.neg())
    }

    /// Product; the result is known below `min(M1 + ord2, M2 + ord1)`.
    pub fn mul(&self, o: &QSeries) -> Result<QSeries, RingError> {
        self.check(o)?;
        let trunc = (self.trunc + o.order()).min(o.trunc + self.order());
        let mut out = QSeries::zero(trunc, self.lattice);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                let k = *k1 + *k2;
                if k < trunc {
                    out.insert(k, c1.try_mul(c2)?);
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by `c * q^k` exactly.
    pub fn mul_term(&self, k: Rat, c: &LaurentPoly) -> Result<QSeries, RingError> {
        let mut out = QSeries::zero(self.trunc + k, self.lattice);
        for (k1, c1) in &self.terms {
            out.insert(*k1 + k, c1.try_mul(c)?);
        }
        Ok(out)
    }

    /// Order-by-order inverse. The leading coefficient must be a monomial.
    pub fn invert(&self) -> Result<QSeries, RingError> {
        let Some((o, lead)) = self.leading() else {
            return Err(RingError::NotInvertible("0".into()));
        };
        let m = lead
            .as_monomial()
            .ok_or_else(|| RingError::NotInvertible(lead.to_string()))?;
        let m_inv = LaurentPoly::monomial(m.inv()?, self.lattice)?;
        // u = q^{-o} m^{-1} x = 1 + v with ord(v) > 0, known below M - o.
        let u = self.mul_term(-o, &m_inv)?;
        let one = QSeries::one(u.trunc, self.lattice);
        let v = u.sub(&one)?;
        let step = Rat::new(1, self.lattice as i64);
        let mut w = one.clone();
        if !v.is_zero() {
            let rounds = ((u.trunc / v.order().max(step)).ceil().to_integer()).max(0) + 1;
            for _ in 0..rounds {
                w = one.sub(&v.mul(&w)?.truncate(u.trunc))?;
            }
        }
        // x^{-1} = q^{-o} m^{-1} w, known below (M - o) - o.
        w.mul_term(-o, &m_inv)
    }

    /// `v -> v q^s`. Coefficients beyond the truncation are unknown, so the
    /// caller supplies a bound `deg_bound` on `|deg_v|` of the discarded
    /// part; the new truncation is lowered by `|s| * deg_bound`.
    pub fn substitute_shift(&self, v: Var, s: Rat, deg_bound: Rat) -> Result<QSeries, RingError> {
        let trunc = self.trunc - s.abs() * deg_bound;
        let mut out = QSeries::zero(trunc, self.lattice);
        for (k, c) in &self.terms {
            for m in c.monomials() {
                let shift = m.exps.get(v) * s;
                check_q_lattice(shift, self.lattice)?;
                let p = LaurentPoly::monomial(m, self.lattice)?;
                out.insert(*k + shift, p);
            }
        }
        Ok(out)
    }

    /// Recombines into a Laurent polynomial in all variables including `q`.
    pub fn to_poly(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.lattice);
        for (k, c) in &self.terms {
            let qk = Exponents::var(Var::Q, *k);
            out = &out + &c.mul_exps(&qk).expect("lattice");
        }
        out
    }
}

/// `v -> v q^s` applied to an exact Laurent polynomial.
pub fn substitute_shift_poly(p: &LaurentPoly, v: Var, s: Rat) -> Result<LaurentPoly, RingError> {
    p.map_exponents(p.lattice(), |e| e.mul(&Exponents::var(Var::Q, e.get(v) * s)))
}

fn check_q_lattice(k: Rat, lattice: u32) -> Result<(), RingError> {
    if lattice as i64 % k.denom() != 0 {
        return Err(RingError::OffLattice {
            var: "q".into(),
            exponent: k.to_string(),
            lattice,
        });
    }
    Ok(())
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in &self.terms {
            write!(f, "({c})*q^{{{}}} + ", fmt_rat_exp(k))?;
        }
        write!(f, "O(q^{{{}}})", fmt_rat_exp(&self.trunc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, rat};

    fn s(src: &str, m: Rat) -> QSeries {
        QSeries::from_poly(&parse_poly(src, 2).unwrap(), m)
    }

    #[test]
    fn product_and_geometric_inverse() {
        let m = rat(3, 1);
        let x = s("1 + q", m).mul(&s("1 - q", m)).unwrap();
        assert_eq!(x, s("1 - q^2", m));
        let inv = s("1 - q", m).invert().unwrap();
        assert_eq!(inv, s("1 + q + q^2", m));
    }

    #[test]
    fn inverse_with_monomial_lead() {
        let x = s("a^{1/2}*q^{-1/2}*(1 - z*q)", rat(2, 1));
        let y = x.invert().unwrap();
        assert_eq!(y.leading().unwrap().0, rat(1, 2));
        assert_eq!(y.leading().unwrap().1, &parse_poly("a^{-1/2}", 2).unwrap());
        assert_eq!(y.coeff(rat(3, 2)), parse_poly("a^{-1/2}*z", 2).unwrap());
        let prod = x.mul(&y).unwrap();
        assert_eq!(prod, QSeries::one(prod.trunc(), 2));
    }

    #[test]
    fn non_monomial_lead_is_named() {
        let err = s("1 - a + q", rat(2, 1)).invert().unwrap_err();
        assert_eq!(err, RingError::NotInvertible("1 - 1*a".into()));
    }

    #[test]
    fn shift_substitution() {
        let p = parse_poly("z + z^{-1}", 2).unwrap();
        assert_eq!(
            substitute_shift_poly(&p, Var::z(), rat(1, 1)).unwrap(),
            parse_poly("z*q + z^{-1}*q^{-1}", 2).unwrap()
        );
        let p = parse_poly("z^2", 2).unwrap();
        assert_eq!(
            substitute_shift_poly(&p, Var::z(), rat(1, 2)).unwrap(),
            parse_poly("z^2*q", 2).unwrap()
        );
        let x = s("z + q*z^3", rat(4, 1));
        assert_eq!(x.substitute_shift(Var::z(), rat(0, 1), rat(9, 1)).unwrap(), x);
        assert!(parse_poly("z", 1)
            .and_then(|p| substitute_shift_poly(&p, Var::z(), rat(1, 3)))
            .is_err());
    }
}
