use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};

use super::{kstab_solve, StabError};
use crate::linalg::Mat;
use crate::models::{Model, Order};
use crate::ring::{Exponents, LaurentPoly, Monomial, Rat, RationalFn, Var};

/// `x = a^delta * rest` with `rest` free of `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSplit {
    pub delta: Rat,
    pub rest: RationalFn,
}

/// Splits off the `a`-monomial of an entry, if the entry is one.
pub fn monomial_split(x: &RationalFn) -> Option<MonomialSplit> {
    let x = x.reduced();
    if x.is_zero() {
        return Some(MonomialSplit {
            delta: Rat::zero(),
            rest: x,
        });
    }
    if x.den().contains_var(Var::a()) {
        return None;
    }
    let mut degs = x.num().terms().map(|(e, _)| e.get(Var::a()));
    let delta = degs.next()?;
    if degs.any(|d| d != delta) {
        return None;
    }
    let shift = LaurentPoly::var(Var::a(), -delta, x.lattice());
    Some(MonomialSplit {
        delta,
        rest: (&x * &RationalFn::from_poly(shift)).reduced(),
    })
}

/// `L = Z'' Ã^{[s']}` with certified monomial structure of `Z''`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationResult {
    pub slope: Rat,
    pub regular_slope: Rat,
    pub limit: Mat,
    pub a: Mat,
    pub zpp: Mat,
    /// `Z'` with the `a`-monomials removed.
    pub zprime: Mat,
    /// `a`-degree of each nonzero entry of `Z''`.
    pub deltas: Vec<Vec<Option<Rat>>>,
}

/// Factorizes `L` (the limit at slope `s`) against the stable envelopes at
/// `s' = s ± ε` (`side` = +1 for the ample side, -1 for the anti-ample
/// side), certifying every `Z''_{p,r}` as `a^{s(χ_p - χ_r)} Z'_{p,r}` with
/// `Z'` free of `a` and the weight integral whenever `Z'_{p,r} != 0`.
pub fn factorize_limit(
    model: &Model,
    limit: &Mat,
    s: Rat,
    sigma: i32,
    side: i32,
) -> Result<FactorizationResult, StabError> {
    let al = model.alcoves_at(s);
    let sp = if side >= 0 { al.ample_rep } else { al.antiample_rep };
    let a = kstab_solve(model, sp, sigma)?.normalized;
    let zpp = limit.mul(&a.inverse()?)?;
    let n = model.len();
    let mut zprime = zpp.clone();
    let mut deltas = vec![vec![None; n]; n];
    for p in 0..n {
        for r in 0..n {
            let x = zpp.get(p, r);
            let (lp, lr) = (&model.fixed_points[p].label, &model.fixed_points[r].label);
            let split =
                monomial_split(x).ok_or_else(|| StabError::NonMonomial(lp.clone(), lr.clone(), x.canonical()))?;
            if split.rest.is_zero() {
                zprime.set(p, r, split.rest)?;
                continue;
            }
            let want = s * (model.fixed_points[p].chi_a - model.fixed_points[r].chi_a);
            if split.delta != want {
                return Err(StabError::Violation(
                    lp.clone(),
                    lr.clone(),
                    format!("a-degree {} differs from s(chi_p - chi_r) = {want}", split.delta),
                ));
            }
            if !want.is_integer() {
                return Err(StabError::Violation(
                    lp.clone(),
                    lr.clone(),
                    format!("nonzero entry with non-integral weight {want}"),
                ));
            }
            deltas[p][r] = Some(split.delta);
            zprime.set(p, r, split.rest)?;
        }
    }
    Ok(FactorizationResult {
        slope: s,
        regular_slope: sp,
        limit: limit.clone(),
        a,
        zpp,
        zprime,
        deltas,
    })
}

/// Whether `x` is `± c` for a monomial `c` with coefficient 1.
pub fn is_signed_monomial(x: &RationalFn) -> bool {
    match x.reduced().to_monomial() {
        Some(m) => m.coeff.abs().is_one(),
        None => false,
    }
}

/// Solves `P = h Q h^{-1}` for diagonal `h`, one connected component of the
/// off-diagonal support at a time, with `h = 1` at the order-minimal point
/// of each component. Every entry of `h` must be `±` a monomial.
pub fn infer_diagonal_h(p: &Mat, q: &Mat, order: Option<&Order>) -> Result<Vec<RationalFn>, StabError> {
    let n = p.nrows();
    if q.nrows() != n {
        return Err(StabError::NoConjugation("size mismatch".into()));
    }
    let (p, q) = {
        let l = crate::ring::lcm_u32(p.lattice(), q.lattice());
        (p.refine(l)?, q.refine(l)?)
    };
    let lattice = p.lattice();
    for i in 0..n {
        if p.get(i, i) != q.get(i, i) {
            return Err(StabError::NoConjugation(format!("diagonal entry {i} differs")));
        }
        for j in 0..n {
            if p.get(i, j).is_zero() != q.get(i, j).is_zero() {
                return Err(StabError::NoConjugation(format!("support differs at ({i},{j})")));
            }
        }
    }
    let linked = |i: usize, j: usize| i != j && (!q.get(i, j).is_zero() || !q.get(j, i).is_zero());
    let mut h: Vec<Option<RationalFn>> = vec![None; n];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && linked(i, j) {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        let root = comp
            .iter()
            .copied()
            .find(|&i| match order {
                Some(o) => comp.iter().all(|&j| !o.gt(i, j)),
                None => true,
            })
            .unwrap_or(start);
        h[root] = Some(RationalFn::one(lattice));
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let hi = h[i].clone().expect("assigned");
            for j in 0..n {
                if h[j].is_some() || !linked(i, j) {
                    continue;
                }
                // P_ij = h_i Q_ij / h_j  and  P_ji = h_j Q_ji / h_i
                let hj = if !q.get(i, j).is_zero() {
                    (&(&hi * q.get(i, j)) / p.get(i, j)).reduced()
                } else {
                    (&(&hi * p.get(j, i)) / q.get(j, i)).reduced()
                };
                h[j] = Some(hj);
                queue.push_back(j);
            }
        }
    }
    let h: Vec<RationalFn> = h.into_iter().map(|x| x.expect("every point reached")).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = p.get(i, j);
            let rhs = (&(&h[i] * q.get(i, j)) / &h[j]).reduced();
            if *lhs != rhs {
                return Err(StabError::NoConjugation(format!(
                    "entry ({i},{j}): {} vs {}",
                    lhs.canonical(),
                    rhs.canonical()
                )));
            }
        }
    }
    if let Some(bad) = h.iter().find(|x| !is_signed_monomial(x)) {
        return Err(StabError::NoConjugation(format!(
            "{} is not a signed monomial",
            bad.canonical()
        )));
    }
    Ok(h)
}

/// Diagonal matrix `a^{s χ_p}`.
pub fn chi_twist(model: &Model, s: Rat, sign: i64, lattice: u32) -> Result<Mat, StabError> {
    let d = model
        .fixed_points
        .iter()
        .map(|fp| {
            let e = Exponents::var(Var::a(), s * fp.chi_a * Rat::from_integer(sign));
            LaurentPoly::monomial(Monomial::new(crate::ring::qint(1), e), lattice).map(RationalFn::from_poly)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Mat::diagonal(d, lattice)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::toy;
    use crate::ring::{parse_ratfn, rat};
    use crate::stab::{limit_slope_matrix, toy_elliptic_matrix};

    #[test]
    fn split() {
        let x = parse_ratfn("a^{2}*h/(1 - h)", 2).unwrap();
        let s = monomial_split(&x).unwrap();
        assert_eq!(s.delta, rat(2, 1));
        assert!(!s.rest.contains_var(Var::a()));
        assert!(monomial_split(&parse_ratfn("1/(a - 1)", 2).unwrap()).is_none());
    }

    #[test]
    fn toy_wall_factorization() {
        let m = toy();
        let l = limit_slope_matrix(&toy_elliptic_matrix(), &m, rat(0, 1)).unwrap();
        let amp = factorize_limit(&m, &l, rat(0, 1), 1, 1).unwrap();
        let anti = factorize_limit(&m, &l, rat(0, 1), 1, -1).unwrap();
        let lat = amp.zpp.lattice();
        assert_eq!(*amp.zpp.get(1, 0), parse_ratfn("1/(z - 1)", lat).unwrap());
        assert_eq!(*anti.zpp.get(1, 0), parse_ratfn("z/(z - 1)", lat).unwrap());
        let reg = limit_slope_matrix(&toy_elliptic_matrix(), &m, rat(1, 3)).unwrap();
        assert!(factorize_limit(&m, &reg, rat(1, 3), 1, 1).unwrap().zpp.is_identity());
    }

    #[test]
    fn conjugation() {
        let q = Mat::new(
            vec![
                vec![RationalFn::one(2), RationalFn::zero(2)],
                vec![parse_ratfn("1 - h", 2).unwrap(), RationalFn::one(2)],
            ],
            2,
        )
        .unwrap();
        let p = q.map(|x| x.neg()).unwrap();
        let p = {
            let mut p = p;
            p.set(0, 0, RationalFn::one(2)).unwrap();
            p.set(1, 1, RationalFn::one(2)).unwrap();
            p
        };
        let h = infer_diagonal_h(&p, &q, None).unwrap();
        assert!(h[0].is_one());
        assert_eq!(h[1], RationalFn::one(2).neg());
        assert!(infer_diagonal_h(&q, &q, None).unwrap().iter().all(|x| x.is_one()));
    }
}
