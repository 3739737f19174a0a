//! Localization pairing, orthogonality of stable envelopes, the duality
//! interface matrices `M^±` and the correspondences they induce.

mod gluing;

use crate::linalg::Mat;
use crate::models::Model;
use crate::ring::{lcm_u32, Rat, RationalFn};
use crate::stab::{euler_poly, kstab_solve, StabError};

pub use gluing::{
    apply_correspondence, interface_matrix, match_stable_vectors, mirror_data, Direction, InterfaceMatrix,
    InterfaceSide, MirrorData, StableMatch,
};

/// Localized K-theory class, by its fixed-point components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClassVector {
    pub labels: Vec<String>,
    pub comps: Vec<RationalFn>,
}

impl KClassVector {
    pub fn new(labels: Vec<String>, comps: Vec<RationalFn>) -> Self {
        KClassVector { labels, comps }
    }

    /// Row `p` of a restriction matrix: the class whose restriction to `r`
    /// is `m[p][r]`.
    pub fn from_row(labels: &[String], m: &Mat, p: usize) -> Self {
        KClassVector {
            labels: labels.to_vec(),
            comps: m.rows()[p].clone(),
        }
    }

    /// Class supported at a single fixed point.
    pub fn delta(labels: &[String], l: usize, value: RationalFn) -> Self {
        let lat = value.lattice();
        KClassVector {
            labels: labels.to_vec(),
            comps: (0..labels.len())
                .map(|i| if i == l { value.clone() } else { RationalFn::zero(lat) })
                .collect(),
        }
    }
}

/// Result of `χ(x ⊗ y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub value: RationalFn,
    /// Whether the value is a Laurent polynomial.
    pub integral: bool,
}

/// `χ(x ⊗ y) = Σ_l x_l y_l / ∏_{w ∈ T_l} (1 - w)`.
pub fn localization_pairing(model: &Model, x: &KClassVector, y: &KClassVector) -> Result<Pairing, StabError> {
    let mut lat = model.lattice();
    for c in x.comps.iter().chain(&y.comps) {
        lat = lcm_u32(lat, c.lattice());
    }
    let mut acc = RationalFn::zero(lat);
    for l in 0..model.len() {
        let (a, b) = (x.comps[l].refine(lat)?, y.comps[l].refine(lat)?);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let e = RationalFn::from_poly(euler_poly(model, l, lat));
        acc = acc.try_add(&a.try_mul(&b)?.try_div(&e)?)?.reduced();
    }
    let integral = acc.to_poly().is_some();
    Ok(Pairing { value: acc, integral })
}

/// Gram matrix `G[p][r] = χ(Stab^{[-s]}_{-σ}(p) ⊗ Stab^{[s]}_σ(r))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub gram: Mat,
    pub integral: bool,
    /// First `(p, r)` where the Gram matrix differs from the identity.
    pub failure: Option<(String, String)>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn orthogonality_check(model: &Model, s: Rat, sigma: i32) -> Result<OrthogonalityReport, StabError> {
    let minus = kstab_solve(model, -s, -sigma)?;
    let plus = kstab_solve(model, s, sigma)?;
    let labels = model.labels();
    let n = model.len();
    let mut gram = Mat::zero(n, n, model.lattice());
    let mut integral = true;
    let mut failure = None;
    for p in 0..n {
        let x = KClassVector::from_row(&labels, &minus.unnormalized, p);
        for r in 0..n {
            let y = KClassVector::from_row(&labels, &plus.unnormalized, r);
            let g = localization_pairing(model, &x, &y)?;
            integral &= g.integral;
            let ok = if p == r { g.value.is_one() } else { g.value.is_zero() };
            if !ok && failure.is_none() {
                failure = Some((labels[p].clone(), labels[r].clone()));
            }
            gram.set(p, r, g.value)?;
        }
    }
    Ok(OrthogonalityReport {
        gram,
        integral,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cotangent_p1, hilb, toy};
    use crate::ring::rat;

    #[test]
    fn orthogonality_small_models() {
        for m in [toy(), cotangent_p1(), hilb(1), hilb(2), hilb(3)] {
            for s in [rat(1, 4), rat(1, 3), rat(-2, 5)] {
                if m.walls.contains(s) {
                    continue;
                }
                for sigma in [1, -1] {
                    let r =
                        orthogonality_check(&m, s, sigma).unwrap_or_else(|e| panic!("{} s={s} σ={sigma}: {e}", m.name));
                    assert!(r.passed(), "{} s={s} σ={sigma}: {:?}\n{}", m.name, r.failure, r.gram);
                    assert!(r.gram.is_identity());
                }
            }
        }
    }

    #[test]
    fn delta_pairing() {
        let m = hilb(1);
        let labels = m.labels();
        let v = KClassVector::delta(&labels, 0, RationalFn::one(2));
        let p = localization_pairing(&m, &v, &v).unwrap();
        assert!(!p.integral);
        assert_eq!(p.value, RationalFn::from_poly(euler_poly(&m, 0, 2)).inv().unwrap());
    }
}
