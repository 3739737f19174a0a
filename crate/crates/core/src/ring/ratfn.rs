use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{poly_gcd, Exponents, LaurentPoly, RingError, Var, Q};

/// Quotient of Laurent polynomials.
///
/// The stored pair is normalised only up to monomials: the denominator is an
/// ordinary polynomial without monomial factor whose lex-leading coefficient
/// is 1. Equality is decided by cross-multiplication; `reduced` cancels the
/// gcd on request.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFn {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, RingError> {
        if num.lattice() != den.lattice() {
            return Err(RingError::LatticeMismatch(num.lattice(), den.lattice()));
        }
        if den.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFn::zero(num.lattice()));
        }
        let shift = den.monomial_content().inv();
        let lc = den.leading().expect("nonzero").coeff.recip();
        let num = num.mul_exps(&shift)?.scale(&lc);
        let den = den.mul_exps(&shift)?.scale(&lc);
        Ok(RationalFn { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let lattice = p.lattice();
        RationalFn {
            num: p,
            den: LaurentPoly::one(lattice),
        }
    }

    pub fn zero(lattice: u32) -> Self {
        RationalFn::from_poly(LaurentPoly::zero(lattice))
    }

    pub fn one(lattice: u32) -> Self {
        RationalFn::from_poly(LaurentPoly::one(lattice))
    }

    pub fn constant(c: Q, lattice: u32) -> Self {
        RationalFn::from_poly(LaurentPoly::constant(c, lattice))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn lattice(&self) -> u32 {
        self.num.lattice()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Returns the polynomial if the denominator divides the numerator.
    pub fn to_poly(&self) -> Option<LaurentPoly> {
        self.num.divide_exact(&self.den).ok()?.exact()
    }

    pub fn to_monomial(&self) -> Option<super::Monomial> {
        self.to_poly()?.as_monomial()
    }

    pub fn as_constant(&self) -> Option<Q> {
        self.to_poly()?.as_constant()
    }

    /// Cancels the gcd of numerator and denominator.
    pub fn reduced(&self) -> RationalFn {
        if self.den.as_monomial().is_some() {
            return self.clone();
        }
        let g = poly_gcd(&self.num, &self.den).expect("same lattice");
        if g.is_one() {
            return self.clone();
        }
        let num = self.num.div_exact(&g).expect("gcd divides");
        let den = self.den.div_exact(&g).expect("gcd divides");
        RationalFn::new(num, den).expect("nonzero denominator")
    }

    pub fn try_add(&self, o: &RationalFn) -> Result<RationalFn, RingError> {
        if self.den == o.den {
            return RationalFn::new(self.num.try_add(&o.num)?, self.den.clone());
        }
        let num = self.num.try_mul(&o.den)?.try_add(&o.num.try_mul(&self.den)?)?;
        RationalFn::new(num, self.den.try_mul(&o.den)?).map(|f| f.light_reduce())
    }

    pub fn try_sub(&self, o: &RationalFn) -> Result<RationalFn, RingError> {
        self.try_add(&o.neg())
    }

    pub fn try_mul(&self, o: &RationalFn) -> Result<RationalFn, RingError> {
        RationalFn::new(self.num.try_mul(&o.num)?, self.den.try_mul(&o.den)?).map(|f| f.light_reduce())
    }

    pub fn try_div(&self, o: &RationalFn) -> Result<RationalFn, RingError> {
        self.try_mul(&o.inv()?)
    }

    pub fn inv(&self) -> Result<RationalFn, RingError> {
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn powi(&self, k: i64) -> Result<RationalFn, RingError> {
        if k < 0 {
            return self.inv()?.powi(-k);
        }
        let k = k as u32;
        RationalFn::new(self.num.pow(k), self.den.pow(k))
    }

    /// Cheap cancellation: divides out the denominator or numerator when one
    /// divides the other. Keeps the common cases (polynomials, monomials)
    /// tidy without a full gcd.
    fn light_reduce(self) -> RationalFn {
        if self.num.is_zero() || self.den.as_monomial().is_some() {
            return self;
        }
        if let Ok(super::DivOutcome::Exact(q)) = self.num.divide_exact(&self.den) {
            return RationalFn::from_poly(q);
        }
        if self.num.len() <= self.den.len() {
            if let Ok(super::DivOutcome::Exact(q)) = self.den.divide_exact(&self.num) {
                let one = LaurentPoly::one(self.lattice());
                return RationalFn::new(one, q).expect("nonzero");
            }
        }
        self
    }

    pub fn rename(&self, f: impl Fn(Var) -> Var + Copy) -> RationalFn {
        RationalFn::new(self.num.rename(f), self.den.rename(f)).expect("renaming keeps den nonzero")
    }

    pub fn substitute_scale(&self, v: Var, m: &Exponents) -> Result<RationalFn, RingError> {
        RationalFn::new(self.num.substitute_scale(v, m)?, self.den.substitute_scale(v, m)?)
    }

    pub fn eval_var(&self, v: Var, x: &Q) -> Result<RationalFn, RingError> {
        RationalFn::new(self.num.eval_var(v, x)?, self.den.eval_var(v, x)?)
    }

    pub fn refine(&self, n: u32) -> Result<RationalFn, RingError> {
        Ok(RationalFn {
            num: self.num.refine(n)?,
            den: self.den.refine(n)?,
        })
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// Canonical string of the reduced form.
    pub fn canonical(&self) -> String {
        self.reduced().to_string()
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, o: &RationalFn) -> bool {
        if self.lattice() != o.lattice() {
            return false;
        }
        if self.den == o.den {
            return self.num == o.num;
        }
        &self.num * &o.den == &o.num * &self.den
    }
}

impl Eq for RationalFn {}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        RationalFn::from_poly(p)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr for &RationalFn {
            type Output = RationalFn;
            fn $m(self, rhs: &RationalFn) -> RationalFn {
                self.$f(rhs).expect("rational function arithmetic")
            }
        }
        impl $tr for RationalFn {
            type Output = RationalFn;
            fn $m(self, rhs: RationalFn) -> RationalFn {
                (&self).$f(&rhs).expect("rational function arithmetic")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn::neg(self)
    }
}

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn::neg(&self)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        if self.den.len() > 1 {
            write!(f, "{num}/({})", self.den)
        } else {
            write!(f, "{num}/{}", self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_ratfn;

    fn f(s: &str) -> RationalFn {
        parse_ratfn(s, 2).unwrap()
    }

    #[test]
    fn field_operations() {
        let x = f("1/(a - 1)");
        let y = f("a/(a - 1)");
        assert_eq!(&y - &x, f("1"));
        assert_eq!(&x * &f("a - 1"), f("1"));
        assert!(f("(a-1)/(1-a)").to_poly().is_some());
        assert_eq!(f("(a-1)/(1-a)"), f("-1"));
    }

    #[test]
    fn reduction_is_canonical() {
        let x = f("(a^2 - 1)*(z - h)/((a + 1)*(z - h)*(a - 3))");
        let r = x.reduced();
        assert_eq!(r.to_string(), "(-1 + 1*a)/(-3 + 1*a)");
        assert_eq!(r, x);
        assert_eq!(f("1/(a-1)").canonical(), "1/(-1 + 1*a)");
    }

    #[test]
    fn denominator_has_no_monomial_factor() {
        let x = f("1/(a^2 - a)");
        assert_eq!(x.den().monomial_content(), Exponents::one());
        assert_eq!(x.to_string(), "1*a^{-1}/(-1 + 1*a)");
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(f("a").try_div(&f("0")), Err(RingError::DivisionByZero));
    }
}
