use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use super::{lcm_u32, Rat, RingError, Q};

/// A ring variable.
///
/// The declaration order is also the order in which variables are printed
/// and compared inside exponent vectors: `h` (the square root of ħ is reached
/// through fractional exponents), then the equivariant `a`-variables, then the
/// Kähler `z`-variables, then `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Hbar,
    A(u8),
    Z(u8),
    Q,
}

impl Var {
    pub const fn a() -> Var {
        Var::A(0)
    }

    pub const fn z() -> Var {
        Var::Z(0)
    }

    pub fn parse(name: &str) -> Option<Var> {
        match name {
            "h" | "hbar" | "ħ" => Some(Var::Hbar),
            "q" => Some(Var::Q),
            "a" => Some(Var::A(0)),
            "z" => Some(Var::Z(0)),
            _ => {
                let (head, tail) = name.split_at(1);
                let idx: u8 = tail.parse().ok()?;
                match head {
                    "a" => Some(Var::A(idx)),
                    "z" => Some(Var::Z(idx)),
                    _ => None,
                }
            }
        }
    }

    /// Swaps equivariant and Kähler variables (`a_i <-> z_i`).
    pub fn mirror(self) -> Var {
        match self {
            Var::A(i) => Var::Z(i),
            Var::Z(i) => Var::A(i),
            other => other,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Hbar => f.write_str("h"),
            Var::Q => f.write_str("q"),
            Var::A(0) => f.write_str("a"),
            Var::Z(0) => f.write_str("z"),
            Var::A(i) => write!(f, "a{i}"),
            Var::Z(i) => write!(f, "z{i}"),
        }
    }
}

/// Exponent vector of a monomial: a sparse, sorted map from variable to a
/// nonzero rational exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Exponents(Vec<(Var, Rat)>);

impl Exponents {
    pub fn one() -> Self {
        Exponents(Vec::new())
    }

    pub fn var(v: Var, e: Rat) -> Self {
        let mut out = Exponents::one();
        out.set(v, e);
        out
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, Rat)>>(pairs: I) -> Self {
        let mut out = Exponents::one();
        for (v, e) in pairs {
            let cur = out.get(v);
            out.set(v, cur + e);
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: Var) -> Rat {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.0[i].1,
            Err(_) => Rat::zero(),
        }
    }

    pub fn set(&mut self, v: Var, e: Rat) {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => {
                if e.is_zero() {
                    self.0.remove(i);
                } else {
                    self.0[i].1 = e;
                }
            }
            Err(i) => {
                if !e.is_zero() {
                    self.0.insert(i, (v, e));
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Var, Rat)> {
        self.0.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }

    pub fn mul(&self, other: &Exponents) -> Exponents {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let take = match (self.0.get(i), other.0.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match take {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.0[i].1 + other.0[j].1;
                    if !e.is_zero() {
                        out.push((self.0[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Exponents(out)
    }

    pub fn inv(&self) -> Exponents {
        Exponents(self.0.iter().map(|(v, e)| (*v, -*e)).collect())
    }

    pub fn pow(&self, k: Rat) -> Exponents {
        if k.is_zero() {
            return Exponents::one();
        }
        Exponents(self.0.iter().map(|(v, e)| (*v, *e * k)).collect())
    }

    /// Drops the given variable.
    pub fn without(&self, v: Var) -> Exponents {
        Exponents(self.0.iter().filter(|(w, _)| *w != v).copied().collect())
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Exponents {
        Exponents::from_pairs(self.0.iter().map(|(v, e)| (f(*v), *e)))
    }

    /// Smallest `N` such that every exponent lies on `(1/N)Z`.
    pub fn denominator(&self) -> u32 {
        self.0.iter().fold(1u32, |acc, (_, e)| lcm_u32(acc, *e.denom() as u32))
    }

    pub fn check_lattice(&self, lattice: u32) -> Result<(), RingError> {
        for (v, e) in &self.0 {
            if lattice as i64 % e.denom() != 0 {
                return Err(RingError::OffLattice {
                    var: v.to_string(),
                    exponent: e.to_string(),
                    lattice,
                });
            }
        }
        Ok(())
    }

    /// Componentwise minimum (used to strip monomial content).
    pub fn meet(&self, other: &Exponents) -> Exponents {
        let mut out = Exponents::one();
        for v in self.vars().chain(other.vars()) {
            out.set(v, self.get(v).min(other.get(v)));
        }
        out
    }

    pub fn divides(&self, other: &Exponents) -> bool {
        self.vars().chain(other.vars()).all(|v| self.get(v) <= other.get(v))
    }

    /// Degree in a single variable.
    pub fn degree(&self, v: Var) -> Rat {
        self.get(v)
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic comparison of the dense exponent vectors, variables taken in
/// their declaration order.
impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some((_, e)), None) => return e.cmp(&Rat::zero()),
                (None, Some((_, e))) => return Rat::zero().cmp(e),
                (Some((v, e)), Some((w, f))) => match v.cmp(w) {
                    Ordering::Less => return e.cmp(&Rat::zero()),
                    Ordering::Greater => return Rat::zero().cmp(f),
                    Ordering::Equal => match e.cmp(f) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

pub(crate) fn fmt_rat_exp(e: &Rat) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{{{}}}", fmt_rat_exp(e))?;
            }
        }
        Ok(())
    }
}

/// A coefficient times an exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: Q,
    pub exps: Exponents,
}

impl Monomial {
    pub fn new(coeff: Q, exps: Exponents) -> Self {
        Monomial { coeff, exps }
    }

    pub fn one() -> Self {
        Monomial::new(Q::one(), Exponents::one())
    }

    pub fn var(v: Var, e: Rat) -> Self {
        Monomial::new(Q::one(), Exponents::var(v, e))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(&self.coeff * &other.coeff, self.exps.mul(&other.exps))
    }

    /// Inverse of a nonzero monomial.
    pub fn inv(&self) -> Result<Monomial, RingError> {
        if self.coeff.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(Monomial::new(self.coeff.recip(), self.exps.inv()))
    }

    /// Integer powers (negative allowed for nonzero monomials).
    pub fn powi(&self, k: i64) -> Result<Monomial, RingError> {
        if k < 0 {
            return self.inv()?.powi(-k);
        }
        let mut c = Q::one();
        for _ in 0..k {
            c *= &self.coeff;
        }
        Ok(Monomial::new(c, self.exps.pow(Rat::from_integer(k))))
    }

    pub fn neg(&self) -> Monomial {
        Monomial::new(-self.coeff.clone(), self.exps.clone())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_one() {
            write!(f, "{}", super::fmt_q(&self.coeff))
        } else {
            write!(f, "{}*{}", super::fmt_q(&self.coeff), self.exps)
        }
    }
}
