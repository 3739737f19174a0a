//! Exact arithmetic: rationals, monomials with rational exponents, Laurent
//! polynomials on a fixed exponent lattice, rational functions and truncated
//! q-series.

mod gcd;
mod monomial;
mod parse;
mod poly;
mod ratfn;
mod series;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};

pub use gcd::poly_gcd;
pub(crate) use monomial::fmt_rat_exp;
pub use monomial::{Exponents, Monomial, Var};
pub use parse::{parse_poly, parse_ratfn};
pub use poly::{DivOutcome, LaurentPoly};
pub use ratfn::RationalFn;
pub use series::{substitute_shift_poly, QSeries};

/// Exponent type.
pub type Rat = Ratio<i64>;
/// Coefficient type.
pub type Q = BigRational;

/// Default truncation order for series validation.
pub const DEFAULT_TRUNC: i64 = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("lattice mismatch: 1/{0} vs 1/{1}")]
    LatticeMismatch(u32, u32),
    #[error("exponent {exponent} of {var} is not on the lattice (1/{lattice})Z")]
    OffLattice {
        var: String,
        exponent: String,
        lattice: u32,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible: {num} / {den}")]
    NonDivisible { num: String, den: String },
    #[error("leading coefficient {0} is not an invertible monomial")]
    NotInvertible(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Other(String),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn qint(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qrat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Converts an exponent rational into a coefficient rational.
pub fn rat_to_q(r: Rat) -> Q {
    qrat(*r.numer(), *r.denom())
}

pub(crate) fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Floor of a rational.
pub fn floor(r: Rat) -> i64 {
    r.floor().to_integer()
}
