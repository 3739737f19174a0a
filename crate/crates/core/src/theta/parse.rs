//! Parser for the textual theta-product form
//! `-1*z^{-1}*q^{-1/2} * theta(a*z; 1/2)^1 * theta(a; 0)^-1`.

use num_traits::One;

use super::{ThetaError, ThetaExpr};
use crate::ring::{parse_poly, Rat, RingError};

fn parse_err(pos: usize, msg: impl Into<String>) -> ThetaError {
    ThetaError::Ring(RingError::Parse { pos, msg: msg.into() })
}

/// Splits at top-level `*` and `/`, keeping the operator of each piece.
fn split_top(s: &str) -> Result<Vec<(bool, usize, &str)>, ThetaError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut inverse = false;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return Err(parse_err(i, "unbalanced bracket"));
                }
            }
            '/' if depth == 0 && between_digits(s, i) => {}
            '*' | '/' if depth == 0 => {
                out.push((inverse, start, &s[start..i]));
                inverse = c == '/';
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(parse_err(s.len(), "unbalanced bracket"));
    }
    out.push((inverse, start, &s[start..]));
    Ok(out)
}

/// A `/` with digits on both sides belongs to a rational coefficient.
fn between_digits(s: &str, i: usize) -> bool {
    let before = s[..i].trim_end().chars().next_back();
    let after = s[i + 1..].trim_start().chars().next();
    matches!((before, after), (Some(b), Some(a)) if b.is_ascii_digit() && a.is_ascii_digit())
}

fn parse_rat(s: &str, pos: usize) -> Result<Rat, ThetaError> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| parse_err(pos, format!("bad rational '{s}'")))?;
    let d: i64 = d.parse().map_err(|_| parse_err(pos, format!("bad rational '{s}'")))?;
    if d == 0 {
        return Err(parse_err(pos, "zero denominator"));
    }
    Ok(Rat::new(n, d))
}

/// Parses a theta product. Plain factors are monomials in the ring syntax;
/// `theta(x; t)^k` is `θ(x q^t)^k`; a factor after `/` is inverted.
pub fn parse_theta(s: &str) -> Result<ThetaExpr, ThetaError> {
    let mut out = ThetaExpr::one();
    for (inverse, pos, piece) in split_top(s)? {
        let t = piece.trim();
        if t.is_empty() {
            return Err(parse_err(pos, "empty factor"));
        }
        let factor = if let Some(rest) = t.strip_prefix("theta") {
            let rest = rest.trim_start();
            let close = rest.rfind(')').ok_or_else(|| parse_err(pos, "missing ')'"))?;
            if !rest.starts_with('(') {
                return Err(parse_err(pos, "expected '('"));
            }
            let inner = &rest[1..close];
            let (arg, shift) = inner
                .split_once(';')
                .ok_or_else(|| parse_err(pos, "expected 'theta(arg; shift)'"))?;
            let shift = parse_rat(shift, pos)?;
            let tail = rest[close + 1..].trim();
            let k = if let Some(e) = tail.strip_prefix('^') {
                let e = e.trim().trim_start_matches('{').trim_end_matches('}');
                e.trim()
                    .parse::<i64>()
                    .map_err(|_| parse_err(pos, format!("bad exponent '{e}'")))?
            } else if tail.is_empty() {
                1
            } else {
                return Err(parse_err(pos, format!("unexpected '{tail}'")));
            };
            let arg = parse_poly(arg, 1 << 10)
                .map_err(ThetaError::Ring)?
                .as_monomial()
                .ok_or_else(|| parse_err(pos, "theta argument must be a monomial"))?;
            if !arg.coeff.is_one() {
                return Err(ThetaError::BadArgument(arg.to_string()));
            }
            ThetaExpr::theta(arg.exps, shift)?.powi(k)?
        } else {
            let m = parse_poly(t, 1 << 10)
                .map_err(ThetaError::Ring)?
                .as_monomial()
                .ok_or_else(|| parse_err(pos, format!("'{t}' is not a monomial")))?;
            ThetaExpr::monomial(m)
        };
        out = if inverse { out.div(&factor)? } else { out.mul(&factor) };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn round_trip() {
        for s in [
            "theta(a*z; 1/2)^1 * theta(a; 0)^-1",
            "-1*z^{-1}*q^{-1/2} * theta(z; 0)^1",
            "1",
            "-3/4*a^{1/2} * theta(a; 1/3)^2",
        ] {
            let e = parse_theta(s).unwrap();
            assert_eq!(parse_theta(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn division_and_defaults() {
        let e = parse_theta("theta(a*z; 0) / theta(a; 0) / theta(z; 0)").unwrap();
        assert_eq!(e.factors().count(), 3);
        assert_eq!(e.factors().map(|f| f.exp).sum::<i64>(), -1);
        let s = e.substitute_shift(crate::ring::Var::z(), rat(1, 3));
        assert!(s.to_string().contains("theta(z; 1/3)^-1"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_theta("theta(a + z; 0)").is_err());
        assert!(parse_theta("theta(2*a; 0)").is_err());
        assert!(parse_theta("theta(a; x)").is_err());
        assert!(parse_theta("theta(a; 0").is_err());
    }
}
