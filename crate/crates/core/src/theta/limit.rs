use num_traits::{One, Signed, Zero};

use super::{ThetaError, ThetaExpr};
use crate::ring::{lcm_u32, qint, LaurentPoly, Monomial, QSeries, Rat, RationalFn, Var};

/// Finite `q -> 0` limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitResult {
    pub value: RationalFn,
    /// Total q-exponent of the leading term (0 for a finite nonzero limit,
    /// positive when the limit vanishes).
    pub q_order: Rat,
    /// Order of the first discarded correction relative to the leading term.
    pub certified_gap: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Finite(LimitResult),
    Divergent { q_order: Rat },
}

impl Limit {
    pub fn finite(&self) -> Option<&LimitResult> {
        match self {
            Limit::Finite(r) => Some(r),
            Limit::Divergent { .. } => None,
        }
    }

    pub fn value(&self) -> Option<&RationalFn> {
        self.finite().map(|r| &r.value)
    }
}

/// Leading-monomial calculus. After quasi-period reduction a factor
/// `θ(x q^f)` contributes `-x^{-1/2} q^{-f/2}` for `0 < f < 1` and
/// `x^{1/2} - x^{-1/2}` for `f = 0`.
pub fn q_limit(e: &ThetaExpr) -> Result<Limit, ThetaError> {
    q_limit_on(e, e.quasiperiod_reduce().natural_lattice())
}

/// Same as [`q_limit`], with the value placed on a caller-chosen lattice.
pub fn q_limit_on(e: &ThetaExpr, lattice: u32) -> Result<Limit, ThetaError> {
    let r = e.quasiperiod_reduce();
    let lattice = lcm_u32(lattice, r.natural_lattice());
    let half = Rat::new(1, 2);
    let pre = r.prefactor();
    let mut q_order = pre.exps.get(Var::Q);
    let mut gap = Rat::one();
    let mut num = LaurentPoly::monomial(Monomial::new(pre.coeff.clone(), pre.exps.without(Var::Q)), lattice)?;
    let mut den = LaurentPoly::one(lattice);
    let mut vanishing = false;
    for fac in r.factors() {
        let lead = if fac.shift.is_zero() {
            if fac.arg.is_one() {
                if fac.exp < 0 {
                    return Err(ThetaError::VanishingDenominator(fac.arg.to_string()));
                }
                vanishing = true;
            }
            &LaurentPoly::monomial(Monomial::new(qint(1), fac.arg.pow(half)), lattice)?
                - &LaurentPoly::monomial(Monomial::new(qint(1), fac.arg.pow(-half)), lattice)?
        } else {
            q_order -= fac.shift * half * Rat::from_integer(fac.exp);
            gap = gap.min(fac.shift).min(Rat::one() - fac.shift);
            LaurentPoly::monomial(Monomial::new(qint(-1), fac.arg.pow(-half)), lattice)?
        };
        let p = lead.pow(fac.exp.unsigned_abs() as u32);
        if fac.exp > 0 {
            num = &num * &p;
        } else {
            den = &den * &p;
        }
    }
    if vanishing {
        return Ok(Limit::Finite(LimitResult {
            value: RationalFn::zero(lattice),
            q_order: Rat::zero(),
            certified_gap: gap,
        }));
    }
    if q_order.is_negative() {
        return Ok(Limit::Divergent { q_order });
    }
    let value = if q_order.is_zero() {
        RationalFn::new(num, den)?
    } else {
        RationalFn::zero(lattice)
    };
    Ok(Limit::Finite(LimitResult {
        value,
        q_order,
        certified_gap: gap,
    }))
}

/// Outcome of the series cross-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    /// Order (relative to the denominator's leading order) up to which the
    /// expansion was compared.
    pub checked_to: Rat,
}

/// Expands numerator `N` and denominator `D` of `e` as q-series and checks
/// `den(L) N - num(L) D = O(q^{ord D + gap})` for the claimed limit
/// `L = num(L)/den(L)`; for a divergent claim checks `ord N - ord D`.
pub fn q_limit_validate(e: &ThetaExpr, m: Rat) -> Result<Validation, ThetaError> {
    validate_claim(e, &q_limit(e)?, m)
}

/// Checks an arbitrary claimed limit against the series expansion of `e`.
pub fn validate_claim(e: &ThetaExpr, claim: &Limit, m: Rat) -> Result<Validation, ThetaError> {
    let (n, d) = e.split();
    let lattice = lcm_u32(n.natural_lattice(), d.natural_lattice());
    let lattice = match claim {
        Limit::Finite(r) => lcm_u32(lattice, r.value.lattice()),
        Limit::Divergent { .. } => lattice,
    };
    let mut budget = m + Rat::one();
    for _ in 0..8 {
        let ns = n.series(budget, lattice)?;
        let ds = d.series(budget, lattice)?;
        let Some((od, _)) = ds.leading() else {
            return Err(ThetaError::VanishingDenominator(d.to_string()));
        };
        if ds.trunc() < od + m || ns.trunc() < od + m {
            budget += m;
            continue;
        }
        return match claim {
            Limit::Divergent { q_order } => {
                let on = ns.order();
                if on - od != *q_order {
                    Err(mismatch(on, format!("expected order {q_order}, found {}", on - od)))
                } else {
                    Ok(Validation { checked_to: m })
                }
            }
            Limit::Finite(r) => {
                let ln = QSeries::from_poly(&r.value.num().refine(lattice)?, ns.trunc() + m);
                let ld = QSeries::from_poly(&r.value.den().refine(lattice)?, ns.trunc() + m);
                let diff = ld.mul(&ns)?.sub(&ln.mul(&ds)?)?;
                let bound = od + r.certified_gap.min(m);
                match diff.leading() {
                    Some((k, c)) if k < bound => Err(mismatch(k, format!("residual {c}"))),
                    _ => Ok(Validation { checked_to: m }),
                }
            }
        };
    }
    Err(ThetaError::Mismatch {
        order: m.to_string(),
        detail: "could not expand to the requested order".into(),
    })
}

fn mismatch(k: Rat, detail: String) -> ThetaError {
    ThetaError::Mismatch {
        order: k.to_string(),
        detail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_ratfn, rat, Exponents};

    fn f_toy(s: Rat) -> ThetaExpr {
        let a = Exponents::var(Var::a(), rat(1, 1));
        let z = Exponents::var(Var::z(), rat(1, 1));
        ThetaExpr::theta(a.mul(&z), rat(0, 1))
            .unwrap()
            .div(&ThetaExpr::theta(a, rat(0, 1)).unwrap())
            .unwrap()
            .div(&ThetaExpr::theta(z, rat(0, 1)).unwrap())
            .unwrap()
            .substitute_shift(Var::z(), s)
    }

    fn lim(e: &ThetaExpr) -> RationalFn {
        q_limit(e).unwrap().value().unwrap().clone()
    }

    fn rf(s: &str, lattice: u32) -> RationalFn {
        parse_ratfn(s, lattice).unwrap()
    }

    #[test]
    fn toy_limits() {
        assert_eq!(lim(&f_toy(rat(1, 3))), rf("1/(a - 1)", 6));
        assert_eq!(lim(&f_toy(rat(0, 1))), rf("(1 - z*a)/((a - 1)*(1 - z))", 2));
        assert_eq!(lim(&f_toy(rat(-1, 2))), rf("a/(a - 1)", 4));
        assert_eq!(lim(&f_toy(rat(7, 3))), rf("a^{-2}/(a - 1)", 6));
        assert_eq!(lim(&f_toy(rat(2, 1))), rf("a^{-2}*(1 - z*a)/((a - 1)*(1 - z))", 2));
    }

    #[test]
    fn gaps() {
        let r = q_limit(&f_toy(rat(1, 3))).unwrap();
        assert_eq!(r.finite().unwrap().certified_gap, rat(1, 3));
        let r = q_limit(&f_toy(rat(0, 1))).unwrap();
        assert_eq!(r.finite().unwrap().certified_gap, rat(1, 1));
    }

    #[test]
    fn trivial_ratio() {
        let a = ThetaExpr::theta(Exponents::var(Var::a(), rat(1, 1)), rat(0, 1)).unwrap();
        let e = a.div(&a).unwrap();
        assert!(lim(&e).is_one());
        q_limit_validate(&e, rat(2, 1)).unwrap();
    }

    #[test]
    fn validation_against_series() {
        q_limit_validate(&f_toy(rat(1, 3)), rat(2, 1)).unwrap();
        q_limit_validate(&f_toy(rat(-1, 1)), rat(2, 1)).unwrap();
        q_limit_validate(&f_toy(rat(0, 1)), rat(2, 1)).unwrap();
        q_limit_validate(&f_toy(rat(5, 2)), rat(2, 1)).unwrap();
    }

    #[test]
    fn divergence_is_reported() {
        let z = Exponents::var(Var::z(), rat(1, 1));
        let e = ThetaExpr::theta(z, rat(1, 2)).unwrap();
        match q_limit(&e).unwrap() {
            Limit::Divergent { q_order } => assert_eq!(q_order, rat(-1, 4)),
            other => panic!("{other:?}"),
        }
        q_limit_validate(&e, rat(2, 1)).unwrap();
    }

    #[test]
    fn wrong_claim_is_caught() {
        let e = f_toy(rat(1, 3));
        let good = q_limit(&e).unwrap();
        let mut forged = good.finite().unwrap().clone();
        forged.value = rf("a/(a - 1)", 6);
        let err = validate_claim(&e, &Limit::Finite(forged), rat(2, 1)).unwrap_err();
        assert!(matches!(err, ThetaError::Mismatch { .. }));
        let err = validate_claim(&e, &Limit::Divergent { q_order: rat(-1, 2) }, rat(2, 1));
        assert!(err.is_err());
    }
}
