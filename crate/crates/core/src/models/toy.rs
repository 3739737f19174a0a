use super::{Arrangement, Curve, FixedPoint, Model};
use crate::ring::{rat, Exponents, Rat, Var};

fn a_pow(k: i64) -> Exponents {
    Exponents::var(Var::a(), Rat::from_integer(k))
}

/// Two-point model with walls and resonances at the integers. `p-` has
/// tangent character `a^{-1}`, `p+` has `a`, and the single invariant curve
/// has class `-1`.
pub fn toy() -> Model {
    Model {
        name: "toy".into(),
        fixed_points: vec![
            FixedPoint {
                label: "p-".into(),
                tangent: vec![a_pow(-1)],
                chi_a: rat(0, 1),
                chi_hbar: rat(0, 1),
            },
            FixedPoint {
                label: "p+".into(),
                tangent: vec![a_pow(1)],
                chi_a: rat(-1, 1),
                chi_hbar: rat(0, 1),
            },
        ],
        curves: vec![Curve {
            from: 1,
            to: 0,
            weight: a_pow(1),
            class: rat(-1, 1),
        }],
        walls: Arrangement::new([rat(1, 1)]),
        symplectic: false,
        effective_sign: -1,
        dual: vec![1, 0],
    }
}

/// `T^*P^1` with the same base data as [`toy`] plus the cotangent fibres
/// `ħ a^{±1}`.
pub fn cotangent_p1() -> Model {
    let h = Exponents::var(Var::Hbar, rat(1, 1));
    let mut m = toy();
    m.name = "tp1".into();
    m.symplectic = true;
    m.fixed_points[0].tangent.push(h.mul(&a_pow(1)));
    m.fixed_points[1].tangent.push(h.mul(&a_pow(-1)));
    m
}
