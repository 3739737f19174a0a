//! Variety models: fixed points, tangent characters, χ-map, invariant
//! curves, attraction orders and wall/resonance arrangements.

mod arrangement;
mod hilb;
mod json;
mod partition;
mod toy;
mod ys;

use num_traits::{Signed, Zero};

use crate::ring::{Exponents, Rat, Var};

pub use arrangement::{Alcoves, Arrangement};
pub use hilb::{hilb, hilb_tangent};
pub use json::{load_model, model_from_json, ModelDoc};
pub use partition::{partitions, Partition};
pub use toy::{cotangent_p1, toy};
pub use ys::{compositions, content_coloring, scale_a, ys_components, ys_hilb_component, ys_restrict, YsComponents};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("chamber {0} is on a wall: tangent weight {1} has zero pairing")]
    ChamberOnWall(i32, String),
    #[error("order is not antisymmetric between {0} and {1}")]
    NotAntisymmetric(String, String),
    #[error("curve {from}-{to}: chi difference {diff} != class {class} x weight {weight}")]
    CurveCheck {
        from: String,
        to: String,
        diff: String,
        class: String,
        weight: String,
    },
    #[error("fixed point {0}: tangent characters are not closed under w -> h w^-1")]
    NotSymplectic(String),
    #[error("unknown fixed point '{0}'")]
    UnknownPoint(String),
    #[error("invalid model: {0}")]
    Invalid(String),
}

/// Torus-fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub label: String,
    /// Tangent characters as monomials in the `a`-variables and `h` (= ħ).
    pub tangent: Vec<Exponents>,
    /// Restriction of the Picard generator(s): A-weight (rank-one models)
    /// and ħ-weight.
    pub chi_a: Rat,
    pub chi_hbar: Rat,
}

/// Compact torus-invariant curve joining `from` and `to`, with tangent
/// character `weight` at `from` and curve class `class`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub from: usize,
    pub to: usize,
    pub weight: Exponents,
    pub class: Rat,
}

/// Rank-one variety model (`rank A = rank K = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    pub fixed_points: Vec<FixedPoint>,
    pub curves: Vec<Curve>,
    pub walls: Arrangement,
    /// Whether tangent characters come in pairs `(w, ħ w^{-1})`.
    pub symplectic: bool,
    /// Sign of the ample direction in slope space.
    pub effective_sign: i32,
    /// Fixed-point bijection with the mirror model.
    pub dual: Vec<usize>,
}

/// Attraction order: `geq[p][r]` iff `p ≽ r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    pub geq: Vec<Vec<bool>>,
}

impl Order {
    pub fn len(&self) -> usize {
        self.geq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.geq.is_empty()
    }

    pub fn ge(&self, p: usize, r: usize) -> bool {
        self.geq[p][r]
    }

    pub fn gt(&self, p: usize, r: usize) -> bool {
        p != r && self.geq[p][r]
    }

    /// Fixed points listed so that every point comes after all points
    /// below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by_key(|&p| (0..n).filter(|&r| self.gt(p, r)).count());
        idx
    }

    pub fn reversed(&self) -> Order {
        let n = self.len();
        Order {
            geq: (0..n).map(|p| (0..n).map(|r| self.geq[r][p]).collect()).collect(),
        }
    }
}

impl Model {
    pub fn len(&self) -> usize {
        self.fixed_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixed_points.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize, ModelError> {
        self.fixed_points
            .iter()
            .position(|p| p.label == label)
            .ok_or_else(|| ModelError::UnknownPoint(label.into()))
    }

    pub fn labels(&self) -> Vec<String> {
        self.fixed_points.iter().map(|p| p.label.clone()).collect()
    }

    /// Natural exponent lattice of the model's characters.
    pub fn lattice(&self) -> u32 {
        let mut n = 2u32;
        for p in &self.fixed_points {
            for w in &p.tangent {
                n = crate::ring::lcm_u32(n, w.denominator());
            }
            n = crate::ring::lcm_u32(n, *p.chi_a.denom() as u32);
            n = crate::ring::lcm_u32(n, *p.chi_hbar.denom() as u32);
        }
        n
    }

    /// `a`-degree of a character.
    pub fn deg_a(w: &Exponents) -> Rat {
        w.get(Var::a())
    }

    /// Localization identity along every declared curve:
    /// `χ_from - χ_to = class * deg_a(weight)`.
    pub fn curve_check(&self) -> Result<(), ModelError> {
        for c in &self.curves {
            let diff = self.fixed_points[c.from].chi_a - self.fixed_points[c.to].chi_a;
            let rhs = c.class * Model::deg_a(&c.weight);
            if diff != rhs {
                return Err(ModelError::CurveCheck {
                    from: self.fixed_points[c.from].label.clone(),
                    to: self.fixed_points[c.to].label.clone(),
                    diff: diff.to_string(),
                    class: c.class.to_string(),
                    weight: c.weight.to_string(),
                });
            }
        }
        Ok(())
    }

    /// `w -> ħ w^{-1}` closure of the tangent multisets.
    pub fn symplectic_check(&self) -> Result<(), ModelError> {
        let hbar = Exponents::var(Var::Hbar, Rat::from_integer(1));
        for p in &self.fixed_points {
            let mut a: Vec<Exponents> = p.tangent.clone();
            let mut b: Vec<Exponents> = p.tangent.iter().map(|w| hbar.mul(&w.inv())).collect();
            a.sort();
            b.sort();
            if a != b {
                return Err(ModelError::NotSymplectic(p.label.clone()));
            }
        }
        Ok(())
    }

    /// Resonance arrangement: `deg_a(w) * x + m = 0` over all tangent
    /// characters.
    pub fn resonances(&self) -> Arrangement {
        Arrangement::new(
            self.fixed_points
                .iter()
                .flat_map(|p| p.tangent.iter().map(Model::deg_a)),
        )
    }

    /// Orientation of declared curves by `σ` followed by transitive closure.
    pub fn attraction_order(&self, sigma: i32) -> Result<Order, ModelError> {
        let n = self.len();
        if sigma == 0 {
            return Err(ModelError::ChamberOnWall(0, "every character".into()));
        }
        for p in &self.fixed_points {
            for w in &p.tangent {
                if Model::deg_a(w).is_zero() {
                    return Err(ModelError::ChamberOnWall(sigma, w.to_string()));
                }
            }
        }
        let mut geq = vec![vec![false; n]; n];
        for (p, row) in geq.iter_mut().enumerate() {
            row[p] = true;
        }
        for c in &self.curves {
            let s = Model::deg_a(&c.weight) * Rat::from_integer(sigma as i64);
            if s.is_positive() {
                geq[c.from][c.to] = true;
            } else {
                geq[c.to][c.from] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if geq[i][k] && geq[k][j] {
                        geq[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if geq[i][j] && geq[j][i] {
                    return Err(ModelError::NotAntisymmetric(
                        self.fixed_points[i].label.clone(),
                        self.fixed_points[j].label.clone(),
                    ));
                }
            }
        }
        Ok(Order { geq })
    }

    /// Tangent characters at `p` with `σ(w) < 0`.
    pub fn repelling(&self, p: usize, sigma: i32) -> Vec<Exponents> {
        self.fixed_points[p]
            .tangent
            .iter()
            .filter(|w| (Model::deg_a(w) * Rat::from_integer(sigma as i64)).is_negative())
            .cloned()
            .collect()
    }

    /// Small alcoves around `s` with this model's ample direction.
    pub fn alcoves_at(&self, s: Rat) -> Alcoves {
        self.walls.alcoves_at(s, self.effective_sign)
    }

    /// Runs every structural check.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.dual.len() != self.len() {
            return Err(ModelError::Invalid("dual bijection has wrong length".into()));
        }
        let mut seen = self.dual.clone();
        seen.sort_unstable();
        if seen != (0..self.len()).collect::<Vec<_>>() {
            return Err(ModelError::Invalid("dual map is not a bijection".into()));
        }
        self.curve_check()?;
        if self.symplectic {
            self.symplectic_check()?;
        }
        self.attraction_order(1)?;
        self.attraction_order(-1)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn toy_data() {
        let t = toy();
        t.validate().unwrap();
        let pm = t.index_of("p-").unwrap();
        let pp = t.index_of("p+").unwrap();
        assert_eq!(t.fixed_points[pp].chi_a - t.fixed_points[pm].chi_a, rat(-1, 1));
        let o = t.attraction_order(1).unwrap();
        assert!(o.gt(pp, pm));
        assert_eq!(o.reversed(), t.attraction_order(-1).unwrap());
        assert_eq!(t.resonances(), t.walls);
    }

    #[test]
    fn hilb_orders_reverse_dominance() {
        for n in 1..=4 {
            let h = hilb(n);
            h.validate().unwrap();
            let parts = partitions(n);
            let o = h.attraction_order(1).unwrap();
            for (i, p) in parts.iter().enumerate() {
                for (j, r) in parts.iter().enumerate() {
                    if o.gt(i, j) {
                        assert!(r.dominates(p), "{p} > {r} but not reverse dominance");
                    }
                }
            }
            assert_eq!(o.reversed(), h.attraction_order(-1).unwrap());
        }
    }

    #[test]
    fn hilb_chi() {
        let h = hilb(2);
        assert_eq!(h.fixed_points[0].chi_a - h.fixed_points[1].chi_a, rat(2, 1));
        assert_eq!(hilb(1).fixed_points[0].chi_a, rat(0, 1));
    }

    #[test]
    fn chamber_zero_is_rejected() {
        assert!(toy().attraction_order(0).is_err());
    }
}
