use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::ring::Rat;

/// Hyperplane arrangement on a one-dimensional parameter line, presented as
/// families `{x : alpha * x + m = 0, m in Z}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    alphas: Vec<Rat>,
}

/// Small alcove representatives around a slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alcoves {
    pub eps: Rat,
    pub ample_rep: Rat,
    pub antiample_rep: Rat,
    pub on_walls: Vec<Rat>,
}

impl Arrangement {
    pub fn new(alphas: impl IntoIterator<Item = Rat>) -> Self {
        let mut a: Vec<Rat> = alphas.into_iter().filter(|x| !x.is_zero()).map(|x| x.abs()).collect();
        a.sort();
        a.dedup();
        Arrangement { alphas: a }
    }

    pub fn alphas(&self) -> &[Rat] {
        &self.alphas
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn contains(&self, x: Rat) -> bool {
        self.alphas.iter().any(|a| (*a * x).is_integer())
    }

    /// Points of the arrangement in the closed interval `[lo, hi]`.
    pub fn points_in(&self, lo: Rat, hi: Rat) -> Vec<Rat> {
        let mut out = Vec::new();
        for a in &self.alphas {
            // a * x = -m  <=>  x = k / a for integer k
            let kmin = (lo * *a).ceil().to_integer();
            let kmax = (hi * *a).floor().to_integer();
            for k in kmin..=kmax {
                out.push(Rat::from_integer(k) / *a);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Distance from `x` to the nearest point of the arrangement other than `x`.
    pub fn gap_around(&self, x: Rat) -> Option<Rat> {
        self.alphas
            .iter()
            .map(|a| {
                let y = x * *a;
                let d = if y.is_integer() {
                    Rat::from_integer(1)
                } else {
                    let frac = y - y.floor();
                    frac.min(Rat::from_integer(1) - frac)
                };
                d / *a
            })
            .min()
    }

    /// Representatives `x ± eps`; `eps` is half the distance to the nearest
    /// other point, and `ample_dir` (±1) selects which side counts as ample.
    pub fn alcoves_at(&self, x: Rat, ample_dir: i32) -> Alcoves {
        let eps = self
            .gap_around(x)
            .map(|g| g / Rat::from_integer(2))
            .unwrap_or_else(|| Rat::new(1, 2));
        let plus = x + eps;
        let minus = x - eps;
        let (ample_rep, antiample_rep) = if ample_dir >= 0 { (plus, minus) } else { (minus, plus) };
        Alcoves {
            eps,
            ample_rep,
            antiample_rep,
            on_walls: if self.contains(x) { vec![x] } else { vec![] },
        }
    }

    /// Lowest common multiple of the family denominators (for lattice
    /// choices).
    pub fn denominator_lcm(&self) -> i64 {
        self.alphas.iter().fold(1i64, |acc, a| acc.lcm(a.numer()))
    }

    /// Human-readable family list `alpha*x + m = 0`.
    pub fn describe(&self) -> Vec<String> {
        self.alphas.iter().map(|a| format!("{a}*x + m = 0, m in Z")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn hilb_walls(n: i64) -> Arrangement {
        Arrangement::new((1..=n).map(Rat::from_integer))
    }

    #[test]
    fn points() {
        assert_eq!(
            hilb_walls(2).points_in(rat(0, 1), rat(1, 1)),
            vec![rat(0, 1), rat(1, 2), rat(1, 1)]
        );
        assert_eq!(
            hilb_walls(3).points_in(rat(0, 1), rat(1, 1)),
            vec![rat(0, 1), rat(1, 3), rat(1, 2), rat(2, 3), rat(1, 1)]
        );
        assert!(hilb_walls(1).points_in(rat(1, 100), rat(99, 100)).is_empty());
    }

    #[test]
    fn alcoves() {
        let a = hilb_walls(2).alcoves_at(rat(1, 2), 1);
        assert_eq!(a.eps, rat(1, 4));
        assert_eq!(a.on_walls, vec![rat(1, 2)]);
        let t = Arrangement::new([rat(1, 1)]).alcoves_at(rat(1, 3), -1);
        assert!(t.on_walls.is_empty());
        assert_eq!(t.eps, rat(1, 6));
        assert_eq!(t.ample_rep, rat(1, 6));
        assert_eq!(t.antiample_rep, rat(1, 2));
    }

    #[test]
    fn gap_on_and_off_walls() {
        let w = hilb_walls(2);
        assert_eq!(w.gap_around(rat(0, 1)), Some(rat(1, 2)));
        assert_eq!(w.gap_around(rat(1, 3)), Some(rat(1, 6)));
    }
}
