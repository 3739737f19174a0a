use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::StabError;
use crate::linalg::{solve, Mat, Solution};
use crate::models::Model;
use crate::ring::{lcm_u32, Exponents, LaurentPoly, Monomial, Rat, RationalFn, Var};

/// How the solution was pinned down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverCertificate {
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    /// Window lattice points per strictly ordered pair `(p, r)`.
    pub windows: Vec<(String, String, Vec<Rat>)>,
}

/// K-theoretic stable envelopes at a regular slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KStab {
    pub labels: Vec<String>,
    pub slope: Rat,
    pub chamber: i32,
    /// `S[p][r] = Stab(p)|_r`.
    pub unnormalized: Mat,
    /// `Ã[p][r] = S[p][r] / S[r][r]`.
    pub normalized: Mat,
    pub certificate: SolverCertificate,
}

impl KStab {
    pub fn diagonal(&self, p: usize) -> &RationalFn {
        self.unnormalized.get(p, p)
    }

    pub fn as_stab_matrix(&self) -> super::StabMatrix {
        super::StabMatrix {
            labels: self.labels.clone(),
            slope: self.slope,
            chamber: self.chamber,
            normalized: true,
            mat: self.normalized.clone(),
        }
    }
}

/// `Stab(p)|_p = ∏_{σ(w) < 0} (1 - w)`.
pub fn diagonal_poly(model: &Model, p: usize, sigma: i32, lattice: u32) -> LaurentPoly {
    model
        .repelling(p, sigma)
        .iter()
        .fold(LaurentPoly::one(lattice), |acc, w| &acc * &one_minus(w, lattice))
}

/// `∏_{w ∈ T_p} (1 - w)`.
pub fn euler_poly(model: &Model, p: usize, lattice: u32) -> LaurentPoly {
    model.fixed_points[p]
        .tangent
        .iter()
        .fold(LaurentPoly::one(lattice), |acc, w| &acc * &one_minus(w, lattice))
}

fn one_minus(w: &Exponents, lattice: u32) -> LaurentPoly {
    let m =
        LaurentPoly::monomial(Monomial::new(crate::ring::qint(1), w.clone()), lattice).expect("character on lattice");
    &LaurentPoly::one(lattice) - &m
}

/// Linear form `Σ c_i x_i + c` over `ℚ(ħ^{1/2})`.
#[derive(Clone, Debug)]
struct Lin {
    unk: BTreeMap<usize, RationalFn>,
    cst: RationalFn,
}

impl Lin {
    fn zero(lattice: u32) -> Lin {
        Lin {
            unk: BTreeMap::new(),
            cst: RationalFn::zero(lattice),
        }
    }

    fn add_scaled(&mut self, o: &Lin, c: &RationalFn) {
        for (i, x) in &o.unk {
            let e = self.unk.entry(*i).or_insert_with(|| RationalFn::zero(c.lattice()));
            *e = (&*e + &(x * c)).reduced();
        }
        self.cst = (&self.cst + &(&o.cst * c)).reduced();
    }
}

/// Polynomial in `t = a^{1/na}` with linear-form coefficients.
type TPoly = BTreeMap<i64, Lin>;

fn tpoly_known(p: &LaurentPoly, na: i64, lattice: u32) -> TPoly {
    let mut out = TPoly::new();
    for (e, c) in p.terms() {
        let k = (e.get(Var::a()) * Rat::from_integer(na)).to_integer();
        let coeff = LaurentPoly::monomial(Monomial::new(c.clone(), e.without(Var::a())), lattice).expect("on lattice");
        let lin = out.entry(k).or_insert_with(|| Lin::zero(lattice));
        lin.cst = &lin.cst + &RationalFn::from_poly(coeff);
    }
    out
}

fn tpoly_sub(x: &TPoly, y: &TPoly, lattice: u32) -> TPoly {
    let mut out = x.clone();
    let minus = RationalFn::from_poly(LaurentPoly::int(-1, lattice));
    for (k, l) in y {
        out.entry(*k)
            .or_insert_with(|| Lin::zero(lattice))
            .add_scaled(l, &minus);
    }
    out
}

/// Residues of `t^k` modulo `Π(t) = Σ π_i t^i` with `π_0 != 0`.
struct Residues {
    pi: Vec<RationalFn>,
    cache: BTreeMap<i64, Vec<RationalFn>>,
    lattice: u32,
}

impl Residues {
    fn new(pi: Vec<RationalFn>, lattice: u32) -> Residues {
        let deg = pi.len() - 1;
        let mut e0 = vec![RationalFn::zero(lattice); deg];
        if deg > 0 {
            e0[0] = RationalFn::one(lattice);
        }
        let mut cache = BTreeMap::new();
        cache.insert(0, e0);
        Residues { pi, cache, lattice }
    }

    fn deg(&self) -> usize {
        self.pi.len() - 1
    }

    fn times_t(&self, v: &[RationalFn]) -> Vec<RationalFn> {
        let d = self.deg();
        let mut out = vec![RationalFn::zero(self.lattice); d];
        out[1..d].clone_from_slice(&v[..(d - 1)]);
        let top = &v[d - 1];
        if !top.is_zero() {
            let f = (top / &self.pi[d]).reduced();
            for i in 0..d {
                out[i] = (&out[i] - &(&f * &self.pi[i])).reduced();
            }
        }
        out
    }

    fn div_t(&self, v: &[RationalFn]) -> Vec<RationalFn> {
        let d = self.deg();
        let mut out = vec![RationalFn::zero(self.lattice); d];
        out[..(d - 1)].clone_from_slice(&v[1..d]);
        let low = &v[0];
        if !low.is_zero() {
            // t^{-1} ≡ -(π_1 + π_2 t + ... + π_d t^{d-1}) / π_0
            let f = (low / &self.pi[0]).reduced();
            for i in 0..d {
                out[i] = (&out[i] - &(&f * &self.pi[i + 1])).reduced();
            }
        }
        out
    }

    fn get(&mut self, k: i64) -> Vec<RationalFn> {
        if let Some(v) = self.cache.get(&k) {
            return v.clone();
        }
        let step = k.signum();
        let prev = self.get(k - step);
        let v = if step > 0 {
            self.times_t(&prev)
        } else {
            self.div_t(&prev)
        };
        self.cache.insert(k, v.clone());
        v
    }
}

/// `∏ (1 - w)` as a polynomial in `t` with `π_0 = 1`, each factor flipped to
/// positive `t`-degree (which changes it by a unit).
fn modulus(ws: &[Exponents], na: i64, lattice: u32) -> Vec<RationalFn> {
    let mut poly: BTreeMap<i64, RationalFn> = BTreeMap::new();
    poly.insert(0, RationalFn::one(lattice));
    for w in ws {
        let w = if w.get(Var::a()).is_negative() {
            w.inv()
        } else {
            w.clone()
        };
        let d = (w.get(Var::a()) * Rat::from_integer(na)).to_integer();
        let h = RationalFn::from_poly(
            LaurentPoly::monomial(Monomial::new(crate::ring::qint(-1), w.without(Var::a())), lattice)
                .expect("on lattice"),
        );
        let mut next: BTreeMap<i64, RationalFn> = BTreeMap::new();
        for (k, c) in &poly {
            for (dk, f) in [(0, RationalFn::one(lattice)), (d, h.clone())] {
                let e = next.entry(k + dk).or_insert_with(|| RationalFn::zero(lattice));
                *e = (&*e + &(c * &f)).reduced();
            }
        }
        poly = next;
    }
    let deg = *poly.keys().last().unwrap_or(&0);
    (0..=deg)
        .map(|k| poly.get(&k).cloned().unwrap_or_else(|| RationalFn::zero(lattice)))
        .collect()
}

/// Linear conditions `P ≡ 0 mod ∏_{w ∈ ws} (1 - w)`.
fn congruence_rows(p: &TPoly, ws: &[Exponents], na: i64, lattice: u32) -> Vec<Lin> {
    let mut res = Residues::new(modulus(ws, na, lattice), lattice);
    let d = res.deg();
    let mut rows = vec![Lin::zero(lattice); d];
    for (k, lin) in p {
        let r = res.get(*k);
        for i in 0..d {
            if !r[i].is_zero() {
                rows[i].add_scaled(lin, &r[i]);
            }
        }
    }
    rows
}

/// Solves for `Stab^{[s]}_σ` by the window and support conditions.
///
/// Unknowns are the coefficients at lattice points strictly inside the
/// window `NP_a(S_rr) + s (χ_p - χ_r)`; constraints are the curve
/// congruences `S_{p,x} ≡ S_{p,y} mod (1 - w)` and divisibility of
/// `S_{p,r}` by the repelling non-curve directions at `r`.
pub fn kstab_solve(model: &Model, s: Rat, sigma: i32) -> Result<KStab, StabError> {
    if model.walls.contains(s) {
        return Err(StabError::OnWall(s));
    }
    let lattice = model.lattice();
    let order = model.attraction_order(sigma)?;
    let n = model.len();
    let na = model
        .fixed_points
        .iter()
        .flat_map(|p| p.tangent.iter())
        .fold(1u32, |acc, w| lcm_u32(acc, *Model::deg_a(w).denom() as u32)) as i64;
    let diag: Vec<LaurentPoly> = (0..n).map(|p| diagonal_poly(model, p, sigma, lattice)).collect();

    // unknown layout
    let mut unknowns: Vec<(usize, usize, i64)> = Vec::new();
    let mut windows = Vec::new();
    let mut entry: Vec<Vec<TPoly>> = vec![vec![TPoly::new(); n]; n];
    for p in 0..n {
        entry[p][p] = tpoly_known(&diag[p], na, lattice);
        for r in 0..n {
            if !order.gt(p, r) {
                continue;
            }
            let shift = s * (model.fixed_points[p].chi_a - model.fixed_points[r].chi_a);
            let lo = diag[r].min_degree(Var::a()).unwrap_or_else(Rat::zero) + shift;
            let hi = diag[r].max_degree(Var::a()).unwrap_or_else(Rat::zero) + shift;
            let nr = Rat::from_integer(na);
            let kmin = (lo * nr).floor().to_integer() + 1;
            let kmax = (hi * nr).ceil().to_integer() - 1;
            let mut pts = Vec::new();
            for k in kmin..=kmax {
                let mut lin = Lin::zero(lattice);
                lin.unk.insert(unknowns.len(), RationalFn::one(lattice));
                entry[p][r].insert(k, lin);
                unknowns.push((p, r, k));
                pts.push(Rat::new(k, na));
            }
            windows.push((
                model.fixed_points[p].label.clone(),
                model.fixed_points[r].label.clone(),
                pts,
            ));
        }
    }

    let mut rows: Vec<(String, Lin)> = Vec::new();
    let label = |i: usize| model.fixed_points[i].label.as_str();
    for c in &model.curves {
        for p in 0..n {
            if !order.ge(p, c.from) && !order.ge(p, c.to) {
                continue;
            }
            let diff = tpoly_sub(&entry[p][c.from], &entry[p][c.to], lattice);
            for row in congruence_rows(&diff, std::slice::from_ref(&c.weight), na, lattice) {
                rows.push((
                    format!(
                        "Stab({})|{} = Stab({})|{} mod (1 - {})",
                        label(p),
                        label(c.from),
                        label(p),
                        label(c.to),
                        c.weight
                    ),
                    row,
                ));
            }
        }
    }
    for r in 0..n {
        let curve_weights: Vec<Exponents> = model
            .curves
            .iter()
            .filter_map(|c| {
                if c.from == r {
                    Some(c.weight.clone())
                } else if c.to == r {
                    Some(c.weight.inv())
                } else {
                    None
                }
            })
            .collect();
        let mut classes: BTreeMap<Rat, Vec<Exponents>> = BTreeMap::new();
        for w in model.repelling(r, sigma) {
            if curve_weights.contains(&w) {
                continue;
            }
            classes.entry(w.get(Var::Hbar) / Model::deg_a(&w)).or_default().push(w);
        }
        for ws in classes.values() {
            for p in 0..n {
                if !order.gt(p, r) {
                    continue;
                }
                for row in congruence_rows(&entry[p][r], ws, na, lattice) {
                    let names: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                    rows.push((
                        format!(
                            "Stab({})|{} divisible by the repelling directions {}",
                            label(p),
                            label(r),
                            names.join(", ")
                        ),
                        row,
                    ));
                }
            }
        }
    }

    let nu = unknowns.len();
    let a: Vec<Vec<RationalFn>> = rows
        .iter()
        .map(|(_, l)| {
            (0..nu)
                .map(|i| l.unk.get(&i).cloned().unwrap_or_else(|| RationalFn::zero(lattice)))
                .collect()
        })
        .collect();
    let b: Vec<RationalFn> = rows.iter().map(|(_, l)| l.cst.neg()).collect();
    let values = if nu == 0 {
        if let Some((name, _)) = rows.iter().find(|(_, l)| !l.cst.is_zero()) {
            return Err(StabError::NoSolution(name.clone()));
        }
        Vec::new()
    } else {
        match solve(&a, &b, lattice)? {
            Solution::Unique(v) => v,
            Solution::Inconsistent { row } => return Err(StabError::NoSolution(rows[row].0.clone())),
            Solution::Underdetermined { rank, .. } => return Err(StabError::NonUnique { rank, unknowns: nu }),
        }
    };

    let mut smat = Mat::zero(n, n, lattice);
    for p in 0..n {
        smat.set(p, p, RationalFn::from_poly(diag[p].clone()))?;
    }
    let mut acc: BTreeMap<(usize, usize), RationalFn> = BTreeMap::new();
    for (i, (p, r, k)) in unknowns.iter().enumerate() {
        let mono = RationalFn::from_poly(LaurentPoly::var(Var::a(), Rat::new(*k, na), lattice));
        let e = acc.entry((*p, *r)).or_insert_with(|| RationalFn::zero(lattice));
        *e = (&*e + &(&values[i] * &mono)).reduced();
    }
    for ((p, r), v) in acc {
        smat.set(p, r, v)?;
    }
    let mut norm = Mat::zero(n, n, lattice);
    for p in 0..n {
        for r in 0..n {
            let v = smat.get(p, r);
            if !v.is_zero() {
                norm.set(p, r, (v / smat.get(r, r)).reduced())?;
            }
        }
    }
    Ok(KStab {
        labels: model.labels(),
        slope: s,
        chamber: sigma,
        unnormalized: smat,
        normalized: norm,
        certificate: SolverCertificate {
            unknowns: nu,
            equations: rows.len(),
            rank: nu,
            windows,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cotangent_p1, hilb, toy};
    use crate::ring::{parse_ratfn, rat};

    fn rf(s: &str, l: u32) -> RationalFn {
        parse_ratfn(s, l).unwrap()
    }

    #[test]
    fn toy_matches_closed_form() {
        let t = toy();
        for (s, k) in [(rat(1, 3), 0), (rat(-1, 2), -1), (rat(7, 3), 2)] {
            let st = kstab_solve(&t, s, 1).unwrap();
            let want = rf(&format!("a^{{{}}}/(a - 1)", -k), 2);
            assert_eq!(*st.normalized.get(1, 0), want, "s = {s}");
            assert!(st.normalized.get(0, 1).is_zero());
        }
        let st = kstab_solve(&t, rat(1, 3), -1).unwrap();
        assert_eq!(*st.unnormalized.get(1, 1), rf("1 - a", 2));
        assert_eq!(*st.unnormalized.get(0, 1), rf("a", 2));
        assert!(kstab_solve(&t, rat(1, 1), 1).is_err());
    }

    #[test]
    fn hilb1_trivial() {
        let st = kstab_solve(&hilb(1), rat(1, 3), 1).unwrap();
        assert!(st.normalized.is_identity());
    }

    #[test]
    fn hilb2_unique() {
        let h = hilb(2);
        let st = kstab_solve(&h, rat(1, 4), 1).unwrap();
        assert_eq!(st.certificate.unknowns, 3);
        assert!(!st.normalized.get(1, 0).is_zero());
        // the C^2 factor divides off-diagonal restrictions
        let off = st.unnormalized.get(1, 0).to_poly().unwrap();
        let c2 = rf("1 - h^{1/2}*a^{-1}", 2).to_poly().unwrap();
        assert!(off.divide_exact(&c2).unwrap().exact().is_some());
        let tp = kstab_solve(&cotangent_p1(), rat(1, 2), 1).unwrap();
        assert_eq!(*tp.unnormalized.get(1, 0), rf("(1 - h)*a^{-1}", 2));
    }

    #[test]
    fn hilb3_unique() {
        for s in [rat(1, 4), rat(2, 5), rat(-1, 7)] {
            for sigma in [1, -1] {
                kstab_solve(&hilb(3), s, sigma).unwrap();
            }
        }
    }
}
