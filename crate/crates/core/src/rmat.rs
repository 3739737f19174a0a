//! Wall R-matrices: the transition between normalized stable bases on the two
//! sides of a wall, products over slope intervals, support checks and the
//! conjugation relation with the fixed locus `Y_s`.

use num_traits::{Signed, Zero};

use crate::linalg::Mat;
use crate::models::{Model, YsComponents};
use crate::ring::{Rat, RationalFn};
use crate::stab::{chi_twist, infer_diagonal_h, kstab_solve, MatrixDoc, StabError};

/// `R(s) = (Ã^{[s-ε]})^{-1} Ã^{[s+ε]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    pub model: String,
    pub labels: Vec<String>,
    pub wall: Rat,
    pub chamber: i32,
    pub eps: Rat,
    pub mat: Mat,
}

impl RMatrix {
    pub fn to_doc(&self) -> MatrixDoc {
        MatrixDoc::new(
            "rmatrix",
            &self.model,
            self.labels.clone(),
            Some(self.wall),
            self.chamber,
            &self.mat,
        )
        .with_meta("eps", self.eps.to_string())
        .with_meta("below", (self.wall - self.eps).to_string())
        .with_meta("above", (self.wall + self.eps).to_string())
    }
}

/// Wall R-matrix with `ε` half the distance to the nearest other wall.
pub fn wall_r_matrix(model: &Model, s: Rat, sigma: i32) -> Result<RMatrix, StabError> {
    wall_r_matrix_eps(model, s, sigma, model.alcoves_at(s).eps)
}

/// Wall R-matrix with an explicit bracket; `[s-ε, s+ε]` may meet the
/// arrangement only at `s`.
pub fn wall_r_matrix_eps(model: &Model, s: Rat, sigma: i32, eps: Rat) -> Result<RMatrix, StabError> {
    if !eps.is_positive() {
        return Err(StabError::Violation(
            "-".into(),
            "-".into(),
            format!("bracket {eps} is not positive"),
        ));
    }
    if model.walls.points_in(s - eps, s + eps).iter().any(|w| *w != s) {
        return Err(StabError::OnWall(s - eps));
    }
    let below = kstab_solve(model, s - eps, sigma)?.normalized;
    let above = kstab_solve(model, s + eps, sigma)?.normalized;
    Ok(RMatrix {
        model: model.name.clone(),
        labels: model.labels(),
        wall: s,
        chamber: sigma,
        eps,
        mat: below.inverse()?.mul(&above)?,
    })
}

/// Both sides of the telescoping identity over `(s0, s1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalR {
    pub lo: Rat,
    pub hi: Rat,
    pub chamber: i32,
    /// Walls strictly inside the interval, increasing.
    pub walls: Vec<Rat>,
    pub factors: Vec<RMatrix>,
    /// `(Ã^{[s0]})^{-1} Ã^{[s1]}`.
    pub direct: Mat,
    /// Ordered product of the wall factors.
    pub product: Mat,
}

impl TotalR {
    pub fn agrees(&self) -> bool {
        self.direct.same(&self.product)
    }
}

pub fn r_total_across(model: &Model, s0: Rat, s1: Rat, sigma: i32) -> Result<TotalR, StabError> {
    for s in [s0, s1] {
        if model.walls.contains(s) {
            return Err(StabError::OnWall(s));
        }
    }
    if s0 >= s1 {
        return Err(StabError::Violation(
            s0.to_string(),
            s1.to_string(),
            "interval endpoints must increase".into(),
        ));
    }
    let walls = model.walls.points_in(s0, s1);
    let a0 = kstab_solve(model, s0, sigma)?.normalized;
    let a1 = kstab_solve(model, s1, sigma)?.normalized;
    let direct = a0.inverse()?.mul(&a1)?;
    let factors = walls
        .iter()
        .map(|&w| wall_r_matrix(model, w, sigma))
        .collect::<Result<Vec<_>, _>>()?;
    let mut product = Mat::identity(model.len(), direct.lattice());
    for f in &factors {
        product = product.mul(&f.mat)?;
    }
    Ok(TotalR {
        lo: s0,
        hi: s1,
        chamber: sigma,
        walls,
        factors,
        direct,
        product,
    })
}

/// Entry-level certificate for the support of a wall R-matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl SupportReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A nonzero off-diagonal `R_{p,r}` needs `p > r` in the attraction order,
/// an integral `s(χ_p - χ_r)`, and (when components are supplied) `p`, `r`
/// in the same component of `Y_s`. The diagonal must be 1.
pub fn check_vanishing_support(
    model: &Model,
    r: &RMatrix,
    ys: Option<&YsComponents>,
) -> Result<SupportReport, StabError> {
    let order = model.attraction_order(r.chamber)?;
    let mut rep = SupportReport::default();
    for p in 0..model.len() {
        for q in 0..model.len() {
            let x = r.mat.get(p, q);
            let (lp, lq) = (&r.labels[p], &r.labels[q]);
            if p == q {
                if !x.is_one() {
                    rep.violations.push(format!("diagonal ({lp},{lp}) = {}", x.canonical()));
                }
                continue;
            }
            if x.is_zero() {
                continue;
            }
            rep.checked += 1;
            if !order.gt(p, q) {
                rep.violations
                    .push(format!("({lp},{lq}) nonzero but {lp} is not above {lq}"));
            }
            let d = r.wall * (model.fixed_points[p].chi_a - model.fixed_points[q].chi_a);
            if !d.is_integer() {
                rep.violations.push(format!("({lp},{lq}) nonzero with weight {d}"));
            }
            if let Some(y) = ys {
                if !y.same_component(p, q) {
                    rep.violations
                        .push(format!("({lp},{lq}) nonzero across components of Y_s"));
                }
            }
        }
    }
    Ok(rep)
}

/// Outcome of comparing `R^X(s, σ)` with the conjugated inverse of the
/// `Y_s` R-matrix at zero slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorReport {
    pub rx: RMatrix,
    pub ry: RMatrix,
    /// Chamber used on `Y`: its order agrees with the order of `X` at `σ`.
    pub chamber_y: i32,
    pub h: Option<Vec<RationalFn>>,
    pub failure: Option<String>,
}

impl MirrorReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Index in `model` of each fixed point of `y`. A model paired with
/// itself uses its declared bijection `p -> p!`; otherwise points are
/// matched by label.
pub fn dual_perm(model: &Model, y: &Model) -> Result<Vec<usize>, StabError> {
    if y.len() != model.len() {
        return Err(StabError::NoConjugation(
            "Y has a different number of fixed points".into(),
        ));
    }
    if y.name == model.name {
        let mut perm = vec![0; model.len()];
        for (p, &d) in model.dual.iter().enumerate() {
            perm[d] = p;
        }
        return Ok(perm);
    }
    Ok(y.fixed_points
        .iter()
        .map(|fp| model.index_of(&fp.label))
        .collect::<Result<Vec<_>, _>>()?)
}

/// Chamber of `y` whose attraction order is contained in the order of
/// `model` at `sigma`.
pub fn compatible_chamber(model: &Model, sigma: i32, y: &Model, perm: &[usize]) -> Result<i32, StabError> {
    let ox = model.attraction_order(sigma)?;
    [sigma, -sigma]
        .into_iter()
        .find(|&t| match y.attraction_order(t) {
            Ok(oy) => (0..y.len()).all(|i| (0..y.len()).all(|j| !oy.gt(i, j) || ox.gt(perm[i], perm[j]))),
            Err(_) => false,
        })
        .ok_or_else(|| StabError::NoConjugation("no chamber of Y is compatible with the order of X".into()))
}

/// `R^X(s,σ) = a^{sχ} h R^Y(0, σ_Y)^{-1} h^{-1} a^{-sχ}` with `h` inferred.
pub fn mirror_wall_relation(model: &Model, s: Rat, sigma: i32, y: &Model) -> Result<MirrorReport, StabError> {
    let perm = dual_perm(model, y)?;
    let ox = model.attraction_order(sigma)?;
    let chamber_y = compatible_chamber(model, sigma, y, &perm)?;
    let rx = wall_r_matrix(model, s, sigma)?;
    let ry = wall_r_matrix(y, Rat::zero(), chamber_y)?;
    let ry_x = ry.mat.inverse()?.permute(&perm);
    let lat = crate::ring::lcm_u32(rx.mat.lattice(), ry_x.lattice());
    let lat = crate::ring::lcm_u32(lat, crate::stab::lattice_for(model, s));
    let p = chi_twist(model, s, -1, lat)?
        .mul(&rx.mat)?
        .mul(&chi_twist(model, s, 1, lat)?)?;
    let (h, failure) = match infer_diagonal_h(&p, &ry_x, Some(&ox)) {
        Ok(h) => (Some(h), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(MirrorReport {
        rx,
        ry,
        chamber_y,
        h,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{hilb, toy, ys_components, ys_hilb_component};
    use crate::ring::rat;

    #[test]
    fn toy_walls() {
        let m = toy();
        assert!(wall_r_matrix(&m, rat(1, 3), 1).unwrap().mat.is_identity());
        for sigma in [1, -1] {
            let r = wall_r_matrix(&m, rat(0, 1), sigma).unwrap();
            assert!(!r.mat.is_identity());
            // lower triangular for σ > 0, upper for σ < 0
            let (hi, lo) = if sigma > 0 { (0, 1) } else { (1, 0) };
            assert!(r.mat.get(hi, lo).is_zero());
            assert!(!r.mat.get(lo, hi).is_zero());
            assert!(check_vanishing_support(&m, &r, None).unwrap().passed());
            let t = r_total_across(&m, rat(-1, 2), rat(1, 2), sigma).unwrap();
            assert_eq!(t.walls, vec![rat(0, 1)]);
            assert!(t.agrees());
        }
    }

    #[test]
    fn bracket_independence() {
        let m = toy();
        let r1 = wall_r_matrix_eps(&m, rat(0, 1), 1, rat(1, 4)).unwrap();
        let r2 = wall_r_matrix_eps(&m, rat(0, 1), 1, rat(1, 9)).unwrap();
        assert!(r1.mat.same(&r2.mat));
        assert!(wall_r_matrix_eps(&m, rat(0, 1), 1, rat(0, 1)).is_err());
        assert!(matches!(
            wall_r_matrix_eps(&m, rat(0, 1), 1, rat(3, 2)),
            Err(StabError::OnWall(_))
        ));
    }

    #[test]
    fn hilb_walls() {
        let m = hilb(2);
        let r = wall_r_matrix(&m, rat(1, 2), 1).unwrap();
        let t = r_total_across(&m, rat(1, 8), rat(7, 8), 1).unwrap();
        assert!(t.agrees());
        assert!(t.direct.same(&r.mat));
        let m3 = hilb(3);
        let r3 = wall_r_matrix(&m3, rat(1, 2), 1).unwrap();
        let ys = ys_components(3, rat(1, 2));
        let rep = check_vanishing_support(&m3, &r3, Some(&ys)).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
    }

    #[test]
    fn toy_mirror() {
        let m = toy();
        for sigma in [1, -1] {
            let rep = mirror_wall_relation(&m, rat(0, 1), sigma, &m).unwrap();
            assert!(rep.holds(), "{:?}", rep.failure);
            assert!(rep.h.unwrap().iter().all(crate::stab::is_signed_monomial));
        }
    }

    #[test]
    fn hilb2_mirror_report() {
        let h2 = hilb(2);
        let y = ys_hilb_component(2, rat(1, 2)).unwrap();
        let rep = mirror_wall_relation(&h2, rat(1, 2), 1, &y).unwrap();
        assert_eq!(rep.rx.labels, h2.labels());
        assert!(!rep.ry.mat.is_identity());
        assert_eq!(rep.holds(), rep.rx.mat.same(&rep.ry.mat) || rep.h.is_some());
    }
}
