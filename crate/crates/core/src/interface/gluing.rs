use super::KClassVector;
use num_traits::Zero;

use crate::linalg::{solve, Mat, Solution};
use crate::models::Model;
use crate::ring::{lcm_u32, Rat, RationalFn, Var};
use crate::rmat::{compatible_chamber, dual_perm};
use crate::stab::{chi_twist, euler_poly, is_signed_monomial, kstab_solve, MatrixDoc, StabError};

/// `ms` pushes classes from `X` to the dual side, `ms^t` pulls them back.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Ms,
    MsT,
}

/// Fixed-point identification between `X` and the dual model, with the
/// dual chamber `σ!` (the chamber whose attraction order is reversed by
/// `p -> p!`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorData {
    /// `perm[i]` is the index in `X` of the dual fixed point `i`.
    pub perm: Vec<usize>,
    pub chamber_dual: i32,
}

pub fn mirror_data(model: &Model, sigma: i32, dual: &Model) -> Result<MirrorData, StabError> {
    let perm = dual_perm(model, dual)?;
    let chamber_dual = -compatible_chamber(model, sigma, dual, &perm)?;
    Ok(MirrorData { perm, chamber_dual })
}

/// One side (`+` ample, `-` anti-ample) of the interface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterfaceSide {
    pub slope_x: Rat,
    pub slope_dual: Rat,
    /// `Stab^X_σ(p)|_r`.
    pub stab_x: Mat,
    /// `Stab^{dual}_{σ!}(p!)|_{r!}` in `X` indexing, dual equivariant
    /// parameter written as `z`.
    pub stab_dual: Mat,
    /// `M_{p,r} = Σ_k Stab^{dual}(k!)|_{p!} t_k Stab^X(k)|_r`.
    pub m: Mat,
}

/// Fixed-point matrix of the interface class at slope `s`, both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterfaceMatrix {
    pub model: String,
    pub dual: String,
    pub labels: Vec<String>,
    pub slope: Rat,
    pub chamber: i32,
    pub mirror: MirrorData,
    /// `t_k = h_k^{-1} a^{-s χ_k}`, the weight of `Stab^X(k) ⊠ Stab^{dual}(k!)`.
    pub twist: Vec<RationalFn>,
    pub h: Vec<RationalFn>,
    /// Whether the gluing equations fixed `t` with every `h_k` a signed
    /// monomial.
    pub normalized: bool,
    pub plus: InterfaceSide,
    pub minus: InterfaceSide,
    pub euler_x: Vec<RationalFn>,
    pub euler_dual: Vec<RationalFn>,
}

impl InterfaceMatrix {
    pub fn side(&self, sign: i32) -> &InterfaceSide {
        if sign >= 0 {
            &self.plus
        } else {
            &self.minus
        }
    }

    /// `M^+ = M^-` with a monomial normalization.
    pub fn glued(&self) -> bool {
        self.normalized && self.plus.m.same(&self.minus.m)
    }

    pub fn mismatch(&self) -> Option<(String, String)> {
        self.plus
            .m
            .first_difference(&self.minus.m)
            .map(|(i, j)| (self.labels[i].clone(), self.labels[j].clone()))
    }

    /// `T = D_dual^{-1} M D_X^{-1}` agrees with a given limit matrix up to a
    /// diagonal of signed monomials on the left.
    pub fn matches_limit(&self, sign: i32, limit: &Mat) -> Result<bool, StabError> {
        let side = self.side(sign);
        let n = self.labels.len();
        let lat = lcm_u32(side.m.lattice(), limit.lattice());
        let (m, limit) = (side.m.refine(lat)?, limit.refine(lat)?);
        let (dy, dx) = (side.stab_dual.refine(lat)?, side.stab_x.refine(lat)?);
        for p in 0..n {
            let mut ratio: Option<RationalFn> = None;
            for r in 0..n {
                let t = m.get(p, r).try_div(dy.get(p, p))?.try_div(dx.get(r, r))?.reduced();
                let l = limit.get(p, r);
                if t.is_zero() != l.is_zero() {
                    return Ok(false);
                }
                if t.is_zero() {
                    continue;
                }
                let q = t.try_div(l)?.reduced();
                match &ratio {
                    None if is_signed_monomial(&q) => ratio = Some(q),
                    None => return Ok(false),
                    Some(x) if *x != q => return Ok(false),
                    Some(_) => {}
                }
            }
        }
        Ok(true)
    }

    /// `a^{sχ} D_dual^{-1} M D_X^{-1}`: the `q -> 0` limit at slope `s`
    /// reassembled from the two stable bases.
    pub fn assembled_limit(&self, model: &Model, sign: i32) -> Result<Mat, StabError> {
        let side = self.side(sign);
        let lat = side.m.lattice();
        let n = self.labels.len();
        let chi = chi_twist(model, self.slope, 1, lat)?;
        let mut out = Mat::zero(n, n, lat);
        for p in 0..n {
            for r in 0..n {
                let x = side
                    .m
                    .get(p, r)
                    .try_mul(chi.get(p, p))?
                    .try_div(&side.stab_dual.get(p, p).refine(lat)?)?
                    .try_div(&side.stab_x.get(r, r).refine(lat)?)?;
                out.set(p, r, x.reduced())?;
            }
        }
        Ok(out)
    }

    pub fn to_doc(&self, sign: i32) -> MatrixDoc {
        let side = self.side(sign);
        MatrixDoc::new(
            "interface",
            &self.model,
            self.labels.clone(),
            Some(self.slope),
            self.chamber,
            &side.m,
        )
        .with_meta("dual", self.dual.clone())
        .with_meta("side", if sign >= 0 { "+" } else { "-" })
        .with_meta("slope_x", side.slope_x.to_string())
        .with_meta("slope_dual", side.slope_dual.to_string())
        .with_meta("chamber_dual", crate::stab::chamber_str(self.mirror.chamber_dual))
        .with_meta("glued", self.glued())
        .with_meta("h", self.h.iter().map(|x| x.canonical()).collect::<Vec<_>>())
    }
}

fn dual_side(dual: &Model, perm: &[usize], slope: Rat, chamber: i32) -> Result<Mat, StabError> {
    let st = kstab_solve(dual, slope, chamber)?;
    Ok(st.unnormalized.permute(perm).map(|x| x.rename(Var::mirror))?)
}

/// Assembles `M^±` at slope `s` against the dual model (the whole mirror
/// at `s = 0`, the fixed component `Y_s` otherwise). The `+` side takes the
/// ample alcove of `X` next to `s` with the anti-ample alcove of the dual
/// next to 0; the `-` side takes the other two. The normalization `h` is
/// inferred from `M^+ = M^-`.
pub fn interface_matrix(model: &Model, dual: &Model, s: Rat, sigma: i32) -> Result<InterfaceMatrix, StabError> {
    let mirror = mirror_data(model, sigma, dual)?;
    let ax = model.alcoves_at(s);
    let ay = dual.alcoves_at(Rat::from_integer(0));
    let n = model.len();
    let build = |sx: Rat, sy: Rat| -> Result<(Mat, Mat), StabError> {
        let x = kstab_solve(model, sx, sigma)?.unnormalized;
        let y = dual_side(dual, &mirror.perm, sy, mirror.chamber_dual)?;
        Ok((x, y))
    };
    let (xp, yp) = build(ax.ample_rep, ay.antiample_rep)?;
    let (xm, ym) = build(ax.antiample_rep, ay.ample_rep)?;
    let mut lat = crate::stab::lattice_for(model, s);
    for m in [&xp, &yp, &xm, &ym] {
        lat = lcm_u32(lat, m.lattice());
    }
    let chi = chi_twist(model, s, -1, lat)?;
    let default: Vec<RationalFn> = (0..n).map(|k| chi.get(k, k).clone()).collect();
    let order = model.attraction_order(sigma)?;
    let (twist, normalized) = match infer_twist(&xp, &yp, &xm, &ym, &default, &order, lat)? {
        Some(t) => (t, true),
        None => (default.clone(), false),
    };
    let h = (0..n)
        .map(|k| Ok(default[k].try_div(&twist[k])?.reduced()))
        .collect::<Result<Vec<_>, StabError>>()?;
    let tw = Mat::diagonal(twist.clone(), lat)?;
    let side = |x: Mat, y: Mat| -> Result<InterfaceSide, StabError> {
        let m = y.transpose().mul(&tw)?.mul(&x)?;
        Ok(InterfaceSide {
            slope_x: Rat::zero(),
            slope_dual: Rat::zero(),
            stab_x: x,
            stab_dual: y,
            m,
        })
    };
    let mut plus = side(xp, yp)?;
    (plus.slope_x, plus.slope_dual) = (ax.ample_rep, ay.antiample_rep);
    let mut minus = side(xm, ym)?;
    (minus.slope_x, minus.slope_dual) = (ax.antiample_rep, ay.ample_rep);
    let euler_x = (0..n)
        .map(|i| RationalFn::from_poly(euler_poly(model, i, lat)))
        .collect();
    let mut euler_dual = vec![RationalFn::one(lat); n];
    for (i, &pi) in mirror.perm.iter().enumerate() {
        euler_dual[pi] = RationalFn::from_poly(euler_poly(dual, i, lat)).rename(Var::mirror);
    }
    let normalized = normalized && h.iter().all(is_signed_monomial);
    Ok(InterfaceMatrix {
        model: model.name.clone(),
        dual: dual.name.clone(),
        labels: model.labels(),
        slope: s,
        chamber: sigma,
        mirror,
        twist,
        h,
        normalized,
        plus,
        minus,
        euler_x,
        euler_dual,
    })
}

/// Solves `Y_+^T t X_+ = Y_-^T t X_-` for a diagonal `t`, pinning `t` to
/// `default` at the lowest point of each block that the equations leave
/// free.
fn infer_twist(
    xp: &Mat,
    yp: &Mat,
    xm: &Mat,
    ym: &Mat,
    default: &[RationalFn],
    order: &crate::models::Order,
    lat: u32,
) -> Result<Option<Vec<RationalFn>>, StabError> {
    let n = xp.nrows();
    let mut coeffs = Vec::with_capacity(n * n);
    for p in 0..n {
        for r in 0..n {
            let row = (0..n)
                .map(|k| {
                    let u = yp.get(k, p).try_mul(xp.get(k, r))?;
                    let v = ym.get(k, p).try_mul(xm.get(k, r))?;
                    Ok(u.try_sub(&v)?.reduced().refine(lat)?)
                })
                .collect::<Result<Vec<_>, StabError>>()?;
            coeffs.push(row);
        }
    }
    let mut pinned = vec![false; n];
    let ext = order.linear_extension();
    pinned[ext[0]] = true;
    loop {
        let free: Vec<usize> = (0..n).filter(|&k| !pinned[k]).collect();
        let a: Vec<Vec<RationalFn>> = coeffs
            .iter()
            .map(|row| free.iter().map(|&k| row[k].clone()).collect())
            .collect();
        let b = coeffs
            .iter()
            .map(|row| {
                let mut acc = RationalFn::zero(lat);
                for k in (0..n).filter(|&k| pinned[k]) {
                    acc = acc.try_sub(&row[k].try_mul(&default[k])?)?;
                }
                Ok(acc.reduced())
            })
            .collect::<Result<Vec<_>, StabError>>()?;
        let sol = if free.is_empty() {
            if b.iter().all(|x| x.is_zero()) {
                Solution::Unique(vec![])
            } else {
                Solution::Inconsistent { row: 0 }
            }
        } else {
            solve(&a, &b, lat)?
        };
        match sol {
            Solution::Unique(v) => {
                let mut t = default.to_vec();
                for (i, &k) in free.iter().enumerate() {
                    t[k] = v[i].reduced();
                }
                if t.iter().any(|x| x.is_zero()) {
                    return Ok(None);
                }
                return Ok(Some(t));
            }
            Solution::Inconsistent { .. } => return Ok(None),
            Solution::Underdetermined { free: cols, .. } => {
                let lowest = ext
                    .iter()
                    .copied()
                    .find(|k| cols.iter().any(|&c| free[c] == *k))
                    .expect("free column");
                pinned[lowest] = true;
            }
        }
    }
}

/// `ms(c)_p = Σ_r M_{p,r} c_r / Λ(T_r X)` and
/// `ms^t(c)_r = Σ_p M_{p,r} c_p / Λ(T_{p!} X^!)`.
pub fn apply_correspondence(
    im: &InterfaceMatrix,
    dir: Direction,
    sign: i32,
    c: &KClassVector,
) -> Result<KClassVector, StabError> {
    let m = &im.side(sign).m;
    let n = im.labels.len();
    let lat = c.comps.iter().fold(m.lattice(), |l, x| lcm_u32(l, x.lattice()));
    let m = &m.refine(lat)?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = RationalFn::zero(m.lattice());
        for j in 0..n {
            let (entry, e) = match dir {
                Direction::Ms => (m.get(i, j), &im.euler_x[j]),
                Direction::MsT => (m.get(j, i), &im.euler_dual[j]),
            };
            if entry.is_zero() || c.comps[j].is_zero() {
                continue;
            }
            let cj = c.comps[j].refine(lat)?;
            let e = e.refine(lat)?;
            acc = acc.try_add(&entry.try_mul(&cj)?.try_div(&e)?)?.reduced();
        }
        out.push(acc);
    }
    Ok(KClassVector::new(im.labels.clone(), out))
}

/// Image of one stable basis vector under a correspondence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableMatch {
    pub direction: Direction,
    pub side: i32,
    pub source: String,
    /// Dual stable vectors proportional to the image.
    pub targets: Vec<String>,
    /// Image divided by the matched target.
    pub prefactor: Option<RationalFn>,
}

impl StableMatch {
    /// Exactly one target, the same fixed point, with a monomial factor.
    pub fn clean(&self) -> bool {
        self.targets.len() == 1 && self.targets[0] == self.source && self.prefactor.is_some()
    }
}

fn proportional(x: &[RationalFn], y: &[RationalFn]) -> Result<Option<RationalFn>, StabError> {
    let mut ratio: Option<RationalFn> = None;
    for (a, b) in x.iter().zip(y) {
        if a.is_zero() != b.is_zero() {
            return Ok(None);
        }
        if a.is_zero() {
            continue;
        }
        let l = lcm_u32(a.lattice(), b.lattice());
        let q = a.refine(l)?.try_div(&b.refine(l)?)?.reduced();
        match &ratio {
            None => ratio = Some(q),
            Some(r) if *r != q => return Ok(None),
            Some(_) => {}
        }
    }
    Ok(ratio.filter(is_signed_monomial))
}

/// Applies `ms` to `Stab^{X,[-s']}_{-σ}(q)` and `ms^t` to
/// `Stab^{dual,[-s'']}_{-σ!}(q!)`, where `s'`, `s''` are the slopes used on
/// the given side, and lists the dual stable vectors each image is a
/// monomial multiple of.
pub fn match_stable_vectors(
    model: &Model,
    dual: &Model,
    im: &InterfaceMatrix,
    sign: i32,
) -> Result<Vec<StableMatch>, StabError> {
    let side = im.side(sign);
    let n = im.labels.len();
    let perm = &im.mirror.perm;
    let opp_x = kstab_solve(model, -side.slope_x, -im.chamber)?.unnormalized;
    let opp_y = dual_side(dual, perm, -side.slope_dual, -im.mirror.chamber_dual)?;
    let mut out = Vec::new();
    for (dir, inputs, targets) in [
        (Direction::Ms, &opp_x, &side.stab_dual),
        (Direction::MsT, &opp_y, &side.stab_x),
    ] {
        for q in 0..n {
            let c = KClassVector::from_row(&im.labels, inputs, q);
            let img = apply_correspondence(im, dir, sign, &c)?;
            let mut hits = Vec::new();
            let mut prefactor = None;
            for t in 0..n {
                if let Some(k) = proportional(&img.comps, &targets.rows()[t])? {
                    hits.push(im.labels[t].clone());
                    prefactor = Some(k);
                }
            }
            out.push(StableMatch {
                direction: dir,
                side: sign,
                source: im.labels[q].clone(),
                targets: hits,
                prefactor,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{hilb, toy, ys_hilb_component, ys_restrict};
    use crate::ring::rat;
    use crate::stab::{limit_slope_matrix, toy_elliptic_matrix};

    #[test]
    fn toy_gluing() {
        let m = toy();
        for s in [rat(0, 1), rat(1, 3)] {
            let y = if s.is_zero() { toy() } else { ys_restrict(&m, s) };
            for sigma in [1, -1] {
                let im = interface_matrix(&m, &y, s, sigma).unwrap();
                assert!(im.glued(), "s={s} σ={sigma}: {:?}", im.mismatch());
                let l = limit_slope_matrix(&toy_elliptic_matrix(), &m, s).unwrap();
                for sign in [1, -1] {
                    if sigma > 0 {
                        assert!(im.matches_limit(sign, &l).unwrap(), "s={s} side {sign}");
                    }
                    for r in match_stable_vectors(&m, &y, &im, sign).unwrap() {
                        assert!(r.clean(), "{r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn assembled_limit_factorizes() {
        use crate::stab::factorize_limit;
        let h2 = hilb(2);
        for (s, y) in [
            (rat(0, 1), hilb(2)),
            (rat(1, 2), ys_hilb_component(2, rat(1, 2)).unwrap()),
        ] {
            let im = interface_matrix(&h2, &y, s, 1).unwrap();
            let l = im.assembled_limit(&h2, 1).unwrap();
            for side in [1, -1] {
                let f = factorize_limit(&h2, &l, s, 1, side).unwrap();
                assert!(f.zprime.rows().iter().flatten().all(|x| !x.contains_var(Var::a())));
            }
        }
        let m = toy();
        let im = interface_matrix(&m, &m, rat(0, 1), 1).unwrap();
        let l = im.assembled_limit(&m, 1).unwrap();
        let f = factorize_limit(&m, &l, rat(0, 1), 1, -1).unwrap();
        assert!(!f.zpp.is_identity());
    }

    #[test]
    fn correspondence_round_trip() {
        let m = toy();
        let im = interface_matrix(&m, &m, rat(0, 1), 1).unwrap();
        let side = im.side(1);
        let c = KClassVector::from_row(&im.labels, &side.stab_x, 1);
        let img = apply_correspondence(&im, Direction::Ms, 1, &c).unwrap();
        assert_eq!(img.comps.len(), 2);
        let back = apply_correspondence(&im, Direction::MsT, 1, &img).unwrap();
        assert_eq!(back.labels, im.labels);
    }

    #[test]
    fn hilb_gluing() {
        let h1 = hilb(1);
        assert!(interface_matrix(&h1, &h1, rat(0, 1), 1).unwrap().glued());
        let h2 = hilb(2);
        let im = interface_matrix(&h2, &h2, rat(0, 1), 1).unwrap();
        assert!(im.glued(), "{:?}", im.mismatch());
        // the a-side is constant across 1/2 while the T*P1 side jumps
        let y = ys_hilb_component(2, rat(1, 2)).unwrap();
        let im = interface_matrix(&h2, &y, rat(1, 2), 1).unwrap();
        assert!(im.plus.stab_x.same(&im.minus.stab_x));
        assert!(!im.plus.stab_dual.same(&im.minus.stab_dual));
        assert_eq!(im.mismatch(), Some(("(1,1)".into(), "(2)".into())));
    }
}
