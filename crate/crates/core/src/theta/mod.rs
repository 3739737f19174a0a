//! Products of odd Jacobi theta functions
//! `θ(x) = (x^{1/2} - x^{-1/2}) ∏_{i≥1} (1 - x q^i)(1 - x^{-1} q^i)`,
//! their quasi-periods, q-expansions and `q -> 0` limits.

mod limit;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::ring::{fmt_rat_exp, lcm_u32, qint, Exponents, LaurentPoly, Monomial, QSeries, Rat, RingError, Var};

pub use limit::{q_limit, q_limit_on, q_limit_validate, validate_claim, Limit, LimitResult, Validation};
pub use parse::parse_theta;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThetaError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("theta argument {0} must be a monomial with coefficient 1 and no q")]
    BadArgument(String),
    #[error("theta({0}) vanishes identically and appears in a denominator")]
    VanishingDenominator(String),
    #[error("validation failed at q-order {order}: {detail}")]
    Mismatch { order: String, detail: String },
}

/// One factor `θ(x q^shift)^exp`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThetaFactor {
    pub arg: Exponents,
    pub shift: Rat,
    pub exp: i64,
}

/// `prefactor * ∏ θ(arg_i q^{shift_i})^{exp_i}`.
///
/// The prefactor may carry a power of `q`; arguments never do. Identical
/// `(arg, shift)` pairs are merged and zero exponents dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaExpr {
    prefactor: Monomial,
    factors: BTreeMap<(Exponents, Rat), i64>,
}

impl ThetaExpr {
    pub fn one() -> Self {
        ThetaExpr {
            prefactor: Monomial::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        ThetaExpr {
            prefactor: m,
            factors: BTreeMap::new(),
        }
    }

    /// `θ(x q^t)`.
    pub fn theta(x: Exponents, t: Rat) -> Result<Self, ThetaError> {
        if !x.get(Var::Q).is_zero() {
            return Err(ThetaError::BadArgument(x.to_string()));
        }
        let mut e = ThetaExpr::one();
        e.factors.insert((x, t), 1);
        Ok(e)
    }

    /// `θ(m q^t)` where `m` must have coefficient 1.
    pub fn theta_of(m: &Monomial, t: Rat) -> Result<Self, ThetaError> {
        if !m.coeff.is_one() {
            return Err(ThetaError::BadArgument(m.to_string()));
        }
        ThetaExpr::theta(m.exps.clone(), t)
    }

    pub fn prefactor(&self) -> &Monomial {
        &self.prefactor
    }

    pub fn factors(&self) -> impl Iterator<Item = ThetaFactor> + '_ {
        self.factors.iter().map(|((arg, shift), exp)| ThetaFactor {
            arg: arg.clone(),
            shift: *shift,
            exp: *exp,
        })
    }

    pub fn mul(&self, o: &ThetaExpr) -> ThetaExpr {
        let mut out = ThetaExpr {
            prefactor: self.prefactor.mul(&o.prefactor),
            factors: self.factors.clone(),
        };
        for (k, e) in &o.factors {
            out.bump(k.clone(), *e);
        }
        out
    }

    fn bump(&mut self, k: (Exponents, Rat), e: i64) {
        let cur = self.factors.get(&k).copied().unwrap_or(0) + e;
        if cur == 0 {
            self.factors.remove(&k);
        } else {
            self.factors.insert(k, cur);
        }
    }

    pub fn powi(&self, k: i64) -> Result<ThetaExpr, ThetaError> {
        let mut out = ThetaExpr::monomial(self.prefactor.powi(k)?);
        for (key, e) in &self.factors {
            out.bump(key.clone(), e * k);
        }
        Ok(out)
    }

    pub fn inv(&self) -> Result<ThetaExpr, ThetaError> {
        self.powi(-1)
    }

    pub fn div(&self, o: &ThetaExpr) -> Result<ThetaExpr, ThetaError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn scale(&self, m: &Monomial) -> ThetaExpr {
        let mut out = self.clone();
        out.prefactor = out.prefactor.mul(m);
        out
    }

    /// `v -> v q^s`: shifts every argument containing `v` and moves the
    /// prefactor's `v`-power into `q`.
    pub fn substitute_shift(&self, v: Var, s: Rat) -> ThetaExpr {
        let mut pre = self.prefactor.clone();
        let dq = pre.exps.get(v) * s;
        pre.exps = pre.exps.mul(&Exponents::var(Var::Q, dq));
        let mut out = ThetaExpr::monomial(pre);
        for ((arg, t), e) in &self.factors {
            out.bump((arg.clone(), *t + arg.get(v) * s), *e);
        }
        out
    }

    pub fn rename(&self, f: impl Fn(Var) -> Var + Copy) -> ThetaExpr {
        let mut pre = self.prefactor.clone();
        pre.exps = pre.exps.map_vars(f);
        let mut out = ThetaExpr::monomial(pre);
        for ((arg, t), e) in &self.factors {
            out.bump((arg.map_vars(f), *t), *e);
        }
        out
    }

    /// Rewrites every factor with its shift in `[0, 1)` using
    /// `θ(x q^{n+f}) = (-1)^n q^{-n²/2 - n f} x^{-n} θ(x q^f)`.
    pub fn quasiperiod_reduce(&self) -> ThetaExpr {
        let mut out = ThetaExpr::monomial(self.prefactor.clone());
        for ((arg, t), e) in &self.factors {
            let n = t.floor();
            let f = *t - n;
            let n_i = n.to_integer();
            let sign = if n_i.rem_euclid(2) == 1 { -1 } else { 1 };
            let qexp = -(n * n) / Rat::from_integer(2) - n * f;
            let exps = arg.pow(-n).mul(&Exponents::var(Var::Q, qexp));
            let step = Monomial::new(qint(sign), exps);
            out.prefactor = out.prefactor.mul(&step.powi(*e).expect("nonzero"));
            out.bump((arg.clone(), f), *e);
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.factors.keys().all(|(_, t)| !t.is_negative() && *t < Rat::one())
    }

    /// Smallest lattice carrying the expansion: half-exponents of arguments
    /// and shifts, plus the prefactor.
    pub fn natural_lattice(&self) -> u32 {
        let mut n = self.prefactor.exps.denominator();
        for (arg, t) in self.factors.keys() {
            n = lcm_u32(n, 2 * arg.denominator());
            n = lcm_u32(n, 2 * *t.denom() as u32);
        }
        n
    }

    /// Splits into `(numerator, denominator)` with all exponents positive;
    /// the prefactor goes to the numerator.
    pub fn split(&self) -> (ThetaExpr, ThetaExpr) {
        let mut num = ThetaExpr::monomial(self.prefactor.clone());
        let mut den = ThetaExpr::one();
        for (k, e) in &self.factors {
            if *e > 0 {
                num.bump(k.clone(), *e);
            } else {
                den.bump(k.clone(), -*e);
            }
        }
        (num, den)
    }

    /// Expansion of a product with nonnegative exponents to order `m`.
    pub fn series(&self, m: Rat, lattice: u32) -> Result<QSeries, ThetaError> {
        let mut acc: Option<QSeries> = None;
        self.prefactor.exps.check_lattice(lattice)?;
        // Orders of the theta factors, used to budget each expansion.
        let mut orders = Vec::new();
        for ((arg, t), e) in &self.factors {
            if *e < 0 {
                return Err(ThetaError::Ring(RingError::Other(
                    "series() needs nonnegative exponents; use split()".into(),
                )));
            }
            orders.push((arg.clone(), *t, *e, theta_order(*t)));
        }
        let pre_order = self.prefactor.exps.get(Var::Q);
        let total: Rat = orders
            .iter()
            .map(|(_, _, e, o)| *o * Rat::from_integer(*e))
            .sum::<Rat>()
            + pre_order;
        for (arg, t, e, o) in &orders {
            // Other factors contribute at least total - e*o; ask this one
            // for enough terms that the product is good to m.
            let budget = m - (total - *o * Rat::from_integer(*e)) - *o * Rat::from_integer(*e - 1);
            let s = theta_series(arg, *t, budget, lattice)?;
            for _ in 0..*e {
                acc = Some(match acc {
                    None => s.clone(),
                    Some(a) => a.mul(&s)?,
                });
            }
        }
        let body = acc.unwrap_or_else(|| QSeries::one(m - pre_order, lattice));
        let c = LaurentPoly::monomial(
            Monomial::new(self.prefactor.coeff.clone(), self.prefactor.exps.without(Var::Q)),
            lattice,
        )?;
        Ok(body.mul_term(pre_order, &c)?.truncate(m))
    }
}

/// q-order of `θ(x q^t)` for `x != 1`: `-|t|/2` plus the negative exponents
/// of the product factors.
fn theta_order(t: Rat) -> Rat {
    let mut o = -(t.abs()) / Rat::from_integer(2);
    // factors (1 - x q^{t+i}) and (1 - x^{-1} q^{i-t}) with negative exponent
    let mut i = 1i64;
    loop {
        let e1 = t + Rat::from_integer(i);
        let e2 = Rat::from_integer(i) - t;
        if !e1.is_negative() && !e2.is_negative() {
            break;
        }
        if e1.is_negative() {
            o += e1;
        }
        if e2.is_negative() {
            o += e2;
        }
        i += 1;
    }
    o
}

/// Expansion of `θ(x q^t)` below `q^m` on the given lattice.
pub fn theta_series(x: &Exponents, t: Rat, m: Rat, lattice: u32) -> Result<QSeries, ThetaError> {
    if !x.get(Var::Q).is_zero() {
        return Err(ThetaError::BadArgument(x.to_string()));
    }
    let half = Rat::new(1, 2);
    if x.is_one() && t.is_integer() {
        return Ok(QSeries::zero(m, lattice));
    }
    let mono = |c: i64, e: Exponents, k: Rat| -> Result<LaurentPoly, RingError> {
        LaurentPoly::monomial(Monomial::new(qint(c), e.mul(&Exponents::var(Var::Q, k))), lattice)
    };
    // Exact part: the prefactor and every factor whose q-exponent is <= 0.
    let mut exact = &mono(1, x.pow(half), t * half)? - &mono(1, x.pow(-half), -t * half)?;
    let mut positive = Vec::new();
    let reach = m - theta_order(t) + Rat::one();
    let mut i = 1i64;
    loop {
        let e1 = t + Rat::from_integer(i);
        let e2 = Rat::from_integer(i) - t;
        for (arg, e) in [(x.clone(), e1), (x.inv(), e2)] {
            let f = &LaurentPoly::one(lattice) - &mono(1, arg, e)?;
            if e.is_positive() {
                positive.push((f, e));
            } else {
                exact = &exact * &f;
            }
        }
        if e1 >= reach && e2 >= reach {
            break;
        }
        i += 1;
    }
    let exact = QSeries::from_poly(&exact, reach + Rat::from_integer(1 << 20));
    let Some((ord, _)) = exact.leading() else {
        return Ok(QSeries::zero(m, lattice));
    };
    let budget = m - ord;
    let mut prod = QSeries::one(budget, lattice);
    for (f, e) in positive {
        if e < budget {
            prod = prod.mul(&QSeries::from_poly(&f, budget))?;
        }
    }
    let mut out = QSeries::zero(m, lattice);
    for (k, c) in exact.terms() {
        out = out.add(&prod.mul_term(*k, c)?.truncate(m))?;
    }
    Ok(out.truncate(m))
}

impl fmt::Display for ThetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.prefactor.exps.is_one() || !self.prefactor.coeff.is_one() || self.factors.is_empty() {
            parts.push(self.prefactor.to_string());
        }
        for ((arg, t), e) in &self.factors {
            parts.push(format!("theta({arg}; {})^{e}", fmt_rat_exp(t)));
        }
        f.write_str(&parts.join(" * "))
    }
}

/// Verdict on `e(v q) = c · e(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiperiodCheck {
    /// Both sides agree after quasi-period reduction.
    pub symbolic: bool,
    /// Cross-multiplied q-expansions agree below `checked_to`.
    pub series: bool,
    pub checked_to: Rat,
}

/// Checks `e(v q) = c e(v)` symbolically and through q-expansions to
/// relative order `m`.
pub fn quasiperiod_identity(e: &ThetaExpr, v: Var, c: &Monomial, m: Rat) -> Result<QuasiperiodCheck, ThetaError> {
    let lhs = e.substitute_shift(v, Rat::one());
    let rhs = e.scale(c);
    let symbolic = lhs.quasiperiod_reduce() == rhs.quasiperiod_reduce();
    let (n1, d1) = lhs.split();
    let (n2, d2) = rhs.split();
    let lattice = [&n1, &d1, &n2, &d2]
        .iter()
        .fold(2, |l, x| lcm_u32(l, x.natural_lattice()));
    let mut budget = m + Rat::one();
    for _ in 0..8 {
        let a = n1.series(budget, lattice)?.mul(&d2.series(budget, lattice)?)?;
        let b = n2.series(budget, lattice)?.mul(&d1.series(budget, lattice)?)?;
        let diff = a.sub(&b)?;
        let lo = a.order().min(b.order());
        let reach = diff.trunc() - lo;
        if reach < m {
            budget += m;
            continue;
        }
        let series = diff.terms().all(|(k, c)| *k >= lo + m || c.is_zero());
        return Ok(QuasiperiodCheck {
            symbolic,
            series,
            checked_to: m,
        });
    }
    Err(ThetaError::Ring(RingError::Other("series budget exhausted".into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, rat};

    fn ex(s: &str) -> Exponents {
        parse_poly(s, 2).unwrap().as_monomial().unwrap().exps
    }

    #[test]
    fn theta_expansion_to_first_order() {
        let s = theta_series(&ex("a"), rat(0, 1), rat(2, 1), 2).unwrap();
        let expected = parse_poly("a^{1/2} - a^{-1/2} + q*(-a^{3/2} + a^{1/2} - a^{-1/2} + a^{-3/2})", 2).unwrap();
        assert_eq!(s.to_poly(), expected);
        assert_eq!(s.trunc(), rat(2, 1));
    }

    #[test]
    fn theta_of_one_vanishes() {
        let s = theta_series(&Exponents::one(), rat(0, 1), rat(5, 1), 2).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn oddness() {
        let m = rat(6, 1);
        let s1 = theta_series(&ex("a*z^2"), rat(0, 1), m, 2).unwrap();
        let s2 = theta_series(&ex("a^{-1}*z^{-2}"), rat(0, 1), m, 2).unwrap();
        assert_eq!(s1, s2.neg());
    }

    #[test]
    fn one_step_quasiperiod() {
        let e = ThetaExpr::theta(ex("z"), rat(1, 1)).unwrap();
        let r = e.quasiperiod_reduce();
        assert_eq!(r.to_string(), "-1*z^{-1}*q^{-1/2} * theta(z; 0)^1");
        let m = rat(6, 1);
        let lhs = theta_series(&ex("z"), rat(1, 1), m, 2).unwrap();
        let (num, _) = r.split();
        assert_eq!(num.series(m, 2).unwrap(), lhs);
    }

    #[test]
    fn double_step_ratio() {
        let e = ThetaExpr::theta(ex("a*z"), rat(2, 1))
            .unwrap()
            .div(&ThetaExpr::theta(ex("z"), rat(2, 1)).unwrap())
            .unwrap();
        let r = e.quasiperiod_reduce();
        assert_eq!(r.prefactor().to_string(), "1*a^{-2}");
        assert_eq!(r.factors().count(), 2);
        assert!(r.is_reduced());
    }
}
